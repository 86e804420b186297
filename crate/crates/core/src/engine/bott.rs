//! Borel-Weil-Bott for irreducible homogeneous bundles on G(2,5).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::rep::{sl2_content, weyl_dim, GlWeight, Sl2Character, Term};

const RHO: [i64; 5] = [4, 3, 2, 1, 0];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum BottResult {
    Zero,
    /// Cohomology concentrated in `degree`, equal to the GL(5)-module of highest weight `weight`.
    Nonzero {
        degree: usize,
        weight: GlWeight,
        dim: u64,
    },
}

impl BottResult {
    pub fn degree_dims(&self) -> [u64; 7] {
        let mut out = [0; 7];
        if let BottResult::Nonzero { degree, dim, .. } = self {
            out[*degree] = *dim;
        }
        out
    }

    pub fn sl2(&self) -> [Sl2Character; 7] {
        let mut out: [Sl2Character; 7] = Default::default();
        if let BottResult::Nonzero { degree, weight, .. } = self {
            out[*degree] = sl2_content(weight);
        }
        out
    }
}

pub fn bott(term: &Term) -> BottResult {
    let lambda = term.gl5_weight();
    let mut shifted: Vec<i64> = lambda.iter().zip(RHO).map(|(l, r)| l + r).collect();
    let mut inversions = 0;
    for i in 0..5 {
        for j in i + 1..5 {
            if shifted[i] == shifted[j] {
                return BottResult::Zero;
            }
            if shifted[i] < shifted[j] {
                inversions += 1;
            }
        }
    }
    shifted.sort_unstable_by(|a, b| b.cmp(a));
    let mu: Vec<i64> = shifted.iter().zip(RHO).map(|(s, r)| s - r).collect();
    let weight = GlWeight::new(mu).expect("sorted weight is dominant");
    let dim = weyl_dim(&weight);
    BottResult::Nonzero { degree: inversions, weight, dim }
}

/// Line format used by the persistent cache: `zero` or `deg;w1,w2,w3,w4,w5;dim`.
impl fmt::Display for BottResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BottResult::Zero => write!(f, "zero"),
            BottResult::Nonzero { degree, weight, dim } => {
                let w: Vec<String> = weight.entries().iter().map(|x| x.to_string()).collect();
                write!(f, "{degree};{};{dim}", w.join(","))
            }
        }
    }
}

impl FromStr for BottResult {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s == "zero" {
            return Ok(BottResult::Zero);
        }
        let parts: Vec<&str> = s.split(';').collect();
        if parts.len() != 3 {
            return Err(format!("bad entry {s:?}"));
        }
        let degree: usize = parts[0].parse().map_err(|_| format!("bad degree in {s:?}"))?;
        let entries: Vec<i64> =
            parts[1].split(',').map(|x| x.parse::<i64>()).collect::<Result<_, _>>().map_err(|_| format!("bad weight in {s:?}"))?;
        let dim: u64 = parts[2].parse().map_err(|_| format!("bad dim in {s:?}"))?;
        let weight = GlWeight::new(entries).ok_or_else(|| format!("non-dominant weight in {s:?}"))?;
        if degree > 6 || weight.n() != 5 || weyl_dim(&weight) != dim {
            return Err(format!("inconsistent entry {s:?}"));
        }
        Ok(BottResult::Nonzero { degree, weight, dim })
    }
}

/// Fixes the conventions: `H^0(G, U*) = V` and `H^0(G, O(1)) = wedge2 V*`.
pub fn calibration_self_test() -> Result<(), String> {
    let u_dual = bott(&Term::new([1, 0], [0, 0, 0], 0));
    let o1 = bott(&Term::line(1));
    match (&u_dual, &o1) {
        (BottResult::Nonzero { degree: 0, dim: 5, .. }, BottResult::Nonzero { degree: 0, dim: 10, .. }) => Ok(()),
        _ => Err(format!("Bott calibration failed: H(U*) = {u_dual}, H(O(1)) = {o1}")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn calibration() {
        calibration_self_test().unwrap();
        assert_eq!(bott(&Term::line(0)).degree_dims(), [1, 0, 0, 0, 0, 0, 0]);
    }

    #[test]
    fn canonical_bundle_top_degree() {
        // omega_G = O(-5)
        assert_eq!(bott(&Term::line(-5)).degree_dims(), [0, 0, 0, 0, 0, 0, 1]);
        for t in -4..0 {
            assert_eq!(bott(&Term::line(t)), BottResult::Zero);
        }
    }

    #[test]
    fn q_dual_acyclic_and_q_sections() {
        assert_eq!(bott(&Term::new([0, 0], [1, 0, 0], 0)), BottResult::Zero);
        // Q = wedge2 Q* (1)
        assert_eq!(bott(&Term::new([0, 0], [1, 1, 0], 1)).degree_dims()[0], 5);
    }

    #[test]
    fn text_round_trip() {
        for t in [Term::line(2), Term::new([3, 0], [2, 1, 0], -4), Term::line(-2)] {
            let r = bott(&t);
            assert_eq!(r.to_string().parse::<BottResult>().unwrap(), r);
        }
        assert!("1;1,0,0,0,0;6".parse::<BottResult>().is_err());
    }
}
