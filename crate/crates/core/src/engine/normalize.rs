//! Expansion of an expression into irreducible homogeneous bundles on G(2,5).

use crate::error::{Error, Result};
use crate::expr::{BundleExpr, Generator};
use crate::rep::{RepSum, Term};

fn generator_term(g: Generator) -> Term {
    match g {
        // U = U* (x) det U = U*(-1)
        Generator::U => Term::new([1, 0], [0, 0, 0], -1),
        // Q = wedge2 Q* (x) det Q
        Generator::Q => Term::new([0, 0], [1, 1, 0], 1),
    }
}

fn schur_term(w: &[i64], g: Generator) -> Term {
    match (g, w) {
        (Generator::U, [a, b]) => Term::new([-b, -a], [0, 0, 0], 0),
        (Generator::Q, [a, b, c]) => Term::new([0, 0], [-c, -b, -a], 0),
        _ => panic!("Schur weight length must match the generator rank"),
    }
}

/// `(Sym^2 T, wedge^2 T)` for an irreducible term of rank at most 3.
fn square_parts(t: &Term) -> (RepSum, RepSum) {
    let tw = 2 * t.twist;
    let u = t.u_block;
    let q = t.q_block;
    let one = |alpha: [i64; 2], beta: [i64; 3]| RepSum::single(Term::new(alpha, beta, tw));
    match (u, q) {
        ([0, 0], [0, 0, 0]) => (one([0, 0], [0, 0, 0]), RepSum::zero()),
        ([1, 0], [0, 0, 0]) => (one([2, 0], [0, 0, 0]), one([1, 1], [0, 0, 0])),
        ([2, 0], [0, 0, 0]) => (one([4, 0], [0, 0, 0]).add(&one([2, 2], [0, 0, 0])), one([3, 1], [0, 0, 0])),
        ([0, 0], [1, 0, 0]) => (one([0, 0], [2, 0, 0]), one([0, 0], [1, 1, 0])),
        ([0, 0], [1, 1, 0]) => (one([0, 0], [2, 2, 0]), one([0, 0], [2, 1, 1])),
        _ => unreachable!("term {} has rank {}", t.key(), t.rank()),
    }
}

fn binom2(m: u64) -> u64 {
    m * m.saturating_sub(1) / 2
}

fn square(s: &RepSum, wedge: bool) -> Result<RepSum> {
    let rank = s.rank();
    if rank > 3 {
        return Err(Error::UnsupportedSchurPower { rank, span: None });
    }
    let items: Vec<(&Term, u64)> = s.terms.iter().map(|(t, m)| (t, *m)).collect();
    let mut out = RepSum::zero();
    for (i, (t, m)) in items.iter().enumerate() {
        let (sym, wed) = square_parts(t);
        out = out.add(&(if wedge { wed } else { sym }).scale(*m));
        let tt = RepSum::single((*t).clone());
        out = out.add(&tt.tensor(&tt).scale(binom2(*m)));
        for (t2, m2) in &items[i + 1..] {
            out = out.add(&tt.tensor(&RepSum::single((*t2).clone())).scale(m * m2));
        }
    }
    Ok(out)
}

pub fn normalize(e: &BundleExpr) -> Result<RepSum> {
    Ok(match e {
        BundleExpr::Gen(g) => RepSum::single(generator_term(*g)),
        BundleExpr::Line(t) => RepSum::single(Term::line(*t)),
        BundleExpr::Dual(x) => normalize(x)?.dual(),
        BundleExpr::Tensor(a, b) => normalize(a)?.tensor(&normalize(b)?),
        BundleExpr::Sum(a, b) => normalize(a)?.add(&normalize(b)?),
        BundleExpr::Sym2(x) => square(&normalize(x)?, false)?,
        BundleExpr::Wedge2(x) => square(&normalize(x)?, true)?,
        BundleExpr::Twist(x, t) => normalize(x)?.twisted(*t),
        BundleExpr::Schur(w, g) => RepSum::single(schur_term(w.entries(), *g)),
    })
}
