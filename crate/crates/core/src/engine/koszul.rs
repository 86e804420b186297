//! Restriction to V5 through the Koszul resolution
//! `0 -> O(-3) -> O(-2)^3 -> O(-1)^3 -> O -> O_V5 -> 0`.
//!
//! The first page is `E_1^{-j,q} = H^q(G, E(-j)) (x) wedge^j B` with `B = Y_2`.
//! Write `S_n` for the total of the entries in total degree `n = q - j` and `K_n`
//! for the (unknown) total image of all differentials leaving degree `n`. Then
//! `h^n(V5, E) = S_n - K_n - K_{n-1}`. Vanishing of `h^n` outside `[0, 3]` pins
//! `K_{-3}, K_{-2}, K_{-1}` from below and `K_5, K_4, K_3` from above; `K_0, K_1, K_2`
//! must be forced to zero by the shape of the first page.
//!
//! The whole spectral sequence is SL(2)-equivariant, so it splits into one spectral
//! sequence per isotypic component `Y_d`; the shape test is applied to each of them.

use crate::error::Bounds;
use crate::rep::{wedge_y2, Sl2Character};

pub type FirstPage = [[Sl2Character; 7]; 4];

pub fn tensor_wedge(page_row: [Sl2Character; 7], j: usize) -> [Sl2Character; 7] {
    let w = wedge_y2(j);
    page_row.map(|c| crate::rep::sl2_tensor(&c, &w))
}

pub fn page_dims(page: &FirstPage) -> [[u64; 7]; 4] {
    std::array::from_fn(|j| std::array::from_fn(|q| page[j][q].dim()))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Collapse {
    Exact([Sl2Character; 4]),
    Ambiguous {
        bounds: Bounds,
        chi: i64,
    },
    /// The page contradicts vanishing outside `[0, 3]`; indicates a bug upstream.
    Inconsistent(String),
}

fn idx(n: i64) -> usize {
    (n + 3) as usize
}

/// Whether some `d_r` could connect a nonzero entry of total degree `n` to one of degree `n + 1`.
fn differential_possible(dims: &[[u64; 7]; 4], n: i64) -> bool {
    for j in 0..4i64 {
        let q = n + j;
        if !(0..7).contains(&q) || dims[j as usize][q as usize] == 0 {
            continue;
        }
        for r in 1..=j {
            let (tj, tq) = (j - r, q - r + 1);
            if (0..7).contains(&tq) && dims[tj as usize][tq as usize] != 0 {
                return true;
            }
        }
    }
    false
}

/// Vanishing statements known by other means, used to pin images the shape test cannot.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Facts {
    pub h0_zero: bool,
    pub h3_zero: bool,
}

fn collapse_component(page: &FirstPage, facts: Facts) -> Collapse {
    let dims = page_dims(page);
    let mut s: Vec<Sl2Character> = vec![Sl2Character::zero(); 10];
    for (j, row) in page.iter().enumerate() {
        for (q, c) in row.iter().enumerate() {
            let n = q as i64 - j as i64;
            s[idx(n)] = s[idx(n)].add(c);
        }
    }
    let chi: i64 = (-3..=6).map(|n| if n % 2 == 0 { 1 } else { -1 } * s[idx(n)].dim() as i64).sum();

    let mut k: Vec<Option<Sl2Character>> = vec![None; 10];
    k[idx(6)] = Some(Sl2Character::zero());
    // from below
    let mut prev = Sl2Character::zero();
    for n in -3..=-1 {
        match s[idx(n)].checked_sub(&prev) {
            Some(v) => {
                k[idx(n)] = Some(v.clone());
                prev = v;
            }
            None => return Collapse::Inconsistent(format!("negative image leaving degree {n}")),
        }
    }
    // from above
    let mut next = Sl2Character::zero();
    for n in (4..=6).rev() {
        match s[idx(n)].checked_sub(&next) {
            Some(v) => {
                k[idx(n - 1)] = Some(v.clone());
                next = v;
            }
            None => return Collapse::Inconsistent(format!("negative image entering degree {n}")),
        }
    }
    let mut ambiguous = false;
    for n in 0..=2 {
        if !differential_possible(&dims, n) {
            k[idx(n)] = Some(Sl2Character::zero());
        } else if n == 0 && facts.h0_zero {
            // h^0 = S_0 - K_0 - K_{-1} = 0
            k[idx(0)] = s[idx(0)].checked_sub(k[idx(-1)].as_ref().unwrap());
        } else if n == 2 && facts.h3_zero {
            k[idx(2)] = s[idx(3)].checked_sub(k[idx(3)].as_ref().unwrap());
        }
        if k[idx(n)].is_none() {
            ambiguous = true;
        }
    }
    if !ambiguous {
        let mut out: [Sl2Character; 4] = Default::default();
        for p in 0..4i64 {
            let a = k[idx(p)].as_ref().unwrap();
            let b = k[idx(p - 1)].as_ref().unwrap();
            match s[idx(p)].checked_sub(a).and_then(|x| x.checked_sub(b)) {
                Some(v) => out[p as usize] = v,
                None => return Collapse::Inconsistent(format!("negative cohomology in degree {p}")),
            }
        }
        return Collapse::Exact(out);
    }
    // bounds: unknown images are at most the smaller of source and target
    let kmax = |n: i64| -> u64 {
        match &k[idx(n)] {
            Some(v) => v.dim(),
            None => s[idx(n)].dim().min(s[idx(n + 1)].dim()),
        }
    };
    let kmin = |n: i64| -> u64 { k[idx(n)].as_ref().map_or(0, |v| v.dim()) };
    let mut bounds: Bounds = [(0, 0); 4];
    for p in 0..4i64 {
        let total = s[idx(p)].dim();
        let hi = total.saturating_sub(kmin(p) + kmin(p - 1));
        let lo = total.saturating_sub(kmax(p) + kmax(p - 1));
        bounds[p as usize] = (lo, hi);
    }
    Collapse::Ambiguous { bounds, chi }
}

pub fn collapse(page: &FirstPage) -> Collapse {
    collapse_with(page, Facts::default())
}

pub fn collapse_with(page: &FirstPage, facts: Facts) -> Collapse {
    let mut ds = std::collections::BTreeSet::new();
    for row in page {
        for c in row {
            ds.extend(c.iter().map(|(d, _)| d));
        }
    }
    let mut exact: [Sl2Character; 4] = Default::default();
    let mut bounds: Bounds = [(0, 0); 4];
    let mut chi = 0;
    let mut ambiguous = false;
    for d in ds {
        let part: FirstPage = page.clone().map(|row| row.map(|c| Sl2Character::zero().with(d, c.multiplicity(d))));
        match collapse_component(&part, facts) {
            Collapse::Exact(h) => {
                for p in 0..4 {
                    let n = h[p].dim();
                    bounds[p].0 += n;
                    bounds[p].1 += n;
                    chi += if p % 2 == 0 { n as i64 } else { -(n as i64) };
                    exact[p] = exact[p].add(&h[p]);
                }
            }
            Collapse::Ambiguous { bounds: b, chi: c } => {
                ambiguous = true;
                for p in 0..4 {
                    bounds[p].0 += b[p].0;
                    bounds[p].1 += b[p].1;
                }
                chi += c;
            }
            bad @ Collapse::Inconsistent(_) => return bad,
        }
    }
    if ambiguous {
        Collapse::Ambiguous { bounds, chi }
    } else {
        Collapse::Exact(exact)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn page_from(entries: &[(usize, usize, u32, u64)]) -> FirstPage {
        let mut p: FirstPage = Default::default();
        for &(j, q, d, m) in entries {
            p[j][q] = p[j][q].add(&Sl2Character::zero().with(d, m));
        }
        p
    }

    #[test]
    fn degree_zero_only() {
        let p = page_from(&[(0, 0, 6, 1)]);
        assert_eq!(collapse(&p), Collapse::Exact([Sl2Character::y(6), Sl2Character::zero(), Sl2Character::zero(), Sl2Character::zero()]));
    }

    #[test]
    fn top_degree_cancellation() {
        // O(t) with very negative t: H^6 entries in every row
        let p = page_from(&[(0, 6, 0, 1), (1, 6, 0, 3), (2, 6, 0, 3), (3, 6, 0, 2)]);
        match collapse(&p) {
            Collapse::Exact(h) => assert_eq!(h[3].dim(), 1),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn ambiguity_detected() {
        // degree 0 at (j=1,q=1) and degree 1 at (j=0,q=1): d_1 may connect them
        let p = page_from(&[(1, 1, 0, 2), (0, 1, 0, 1)]);
        match collapse(&p) {
            Collapse::Ambiguous { bounds, chi } => {
                assert_eq!(chi, 1);
                assert_eq!(bounds[0], (1, 2));
                assert_eq!(bounds[1], (0, 1));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn vanishing_fact_pins_image() {
        // d_1 from (j=3,q=3) to (j=2,q=3), both containing Y_4
        let p = page_from(&[(3, 3, 4, 1), (2, 3, 4, 1), (2, 3, 6, 1), (2, 3, 2, 1)]);
        assert!(matches!(collapse(&p), Collapse::Ambiguous { .. }));
        let facts = Facts { h0_zero: true, h3_zero: false };
        match collapse_with(&p, facts) {
            Collapse::Exact(h) => {
                assert_eq!(h[0], Sl2Character::zero());
                assert_eq!(h[1], Sl2Character::y(6).add(&Sl2Character::y(2)));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn isotypic_components_separate() {
        // same positions as above but different irreducibles: no equivariant map
        let p = page_from(&[(1, 1, 2, 1), (0, 1, 0, 1)]);
        assert_eq!(
            collapse(&p),
            Collapse::Exact([Sl2Character::y(2), Sl2Character::trivial(), Sl2Character::zero(), Sl2Character::zero()])
        );
    }
}
