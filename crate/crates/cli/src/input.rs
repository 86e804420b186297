//! Command-line sheaf arguments: a bundle expression, or a named object such as `E_S`
//! followed by postfix twists `(n)` and duals `'`, optionally tensored (`*`) or summed (`+`)
//! with a bundle expression.

use fano5_core::library::{by_name, NAMES};
use fano5_core::sheaf::Sheaf;
use fano5_core::{parse, Error, Result};

pub fn sheaf(text: &str) -> Result<Sheaf> {
    let trimmed = text.trim_start();
    let offset = text.len() - trimmed.len();
    let mut names: Vec<&str> = NAMES.iter().copied().chain(["E_4S"]).collect();
    names.sort_by_key(|n| std::cmp::Reverse(n.len()));
    let Some(name) = names.into_iter().find(|n| trimmed.starts_with(n)) else {
        return Ok(Sheaf::Bundle(parse(text)?));
    };
    let mut s = by_name(name).expect("listed name");
    let mut pos = offset + name.len();
    loop {
        let rest = &text[pos..];
        let r = rest.trim_start();
        pos += rest.len() - r.len();
        if let Some(r2) = r.strip_prefix('\'') {
            s = s.dual()?;
            pos += r.len() - r2.len();
        } else if let Some(r2) = r.strip_prefix('(') {
            let close = r2.find(')').ok_or(Error::Syntax { pos, msg: "unclosed twist".into() })?;
            let t: i64 = r2[..close].trim().parse().map_err(|_| Error::Syntax { pos: pos + 1, msg: "twist must be an integer".into() })?;
            s = s.twist(t);
            pos += close + 2;
        } else if let Some(r2) = r.strip_prefix('*') {
            let b = parse(r2).map_err(|e| shift(e, pos + 1))?;
            return s.tensor(&Sheaf::Bundle(b));
        } else if let Some(r2) = r.strip_prefix('+') {
            let b = parse(r2).map_err(|e| shift(e, pos + 1))?;
            return Ok(Sheaf::Sum(vec![(1, s), (1, Sheaf::Bundle(b))]));
        } else if r.is_empty() {
            return Ok(s);
        } else {
            return Err(Error::Syntax { pos, msg: format!("unexpected {:?} after {name}", r.chars().next().unwrap()) });
        }
    }
}

fn shift(e: Error, by: usize) -> Error {
    match e {
        Error::Syntax { pos, msg } => Error::Syntax { pos: pos + by, msg },
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use fano5_core::sheaf::cohomology;

    #[test]
    fn named_objects() {
        assert_eq!(cohomology(&sheaf("E_S(1)").unwrap()).unwrap(), [10, 0, 0, 0]);
        assert_eq!(cohomology(&sheaf(" E_L (1)").unwrap()).unwrap(), [12, 0, 0, 0]);
        assert_eq!(sheaf("E_S'").unwrap().rank(), 2);
        assert_eq!(sheaf("E_4^S").unwrap().rank(), 4);
        assert_eq!(sheaf("E_S * U").unwrap().rank(), 4);
        assert_eq!(sheaf("E_S + O(1)").unwrap().rank(), 3);
        assert!(matches!(sheaf("U").unwrap(), Sheaf::Bundle(_)));
    }

    #[test]
    fn errors_carry_positions() {
        assert!(matches!(sheaf("E_S(x)"), Err(Error::Syntax { pos: 4, .. })));
        assert!(matches!(sheaf("E_S ?"), Err(Error::Syntax { pos: 4, .. })));
        assert!(matches!(sheaf("I_L'"), Err(Error::NotLocallyFree(_))));
    }
}
