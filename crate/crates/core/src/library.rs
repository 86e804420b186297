//! Named sheaves on V5 and the exact sequences relating them.
//!
//! Each presented object carries a declared Chern character that is fixed
//! independently of its presentations (Chern data or a mutation formula), so that
//! checking a sequence against the declared class is a real test.

use crate::chow::{ch, ChernData, ChowClass};
use crate::expr::BundleExpr;
use crate::sheaf::{Sheaf, ShortExact};

fn b(e: BundleExpr) -> Sheaf {
    Sheaf::Bundle(e)
}

fn u() -> BundleExpr {
    BundleExpr::u()
}

fn q_dual() -> BundleExpr {
    BundleExpr::q().dual()
}

fn o(t: i64) -> BundleExpr {
    BundleExpr::o(t)
}

/// Class of the structure sheaf of a line.
pub fn ch_line_class() -> ChowClass {
    ChowClass::new(0.into(), 0.into(), 1.into(), 0.into())
}

/// Ideal sheaf of a line: `0 -> U -> Q* -> I_L -> 0`.
pub fn ideal_of_line() -> Sheaf {
    Sheaf::presented("I_L", false, ChowClass::one() - ch_line_class(), vec![ShortExact::Cokernel { sub: b(u()), total: b(q_dual()) }])
}

/// Rank-2 bundle with a unique section vanishing on a line: `0 -> U -> Q* + O -> E_L -> 0`.
pub fn e_line() -> Sheaf {
    Sheaf::presented(
        "E_L",
        true,
        ChernData::new(2, 0, 1, 0).to_ch(),
        vec![ShortExact::Cokernel { sub: b(u()), total: b(q_dual().sum(o(0))) }],
    )
}

/// Rank-2 stable bundle of an elliptic curve of degree 7, presented as
/// `0 -> U^2 -> Q*^2 -> E_S -> 0` and `0 -> Q(-1)^2 -> U^4 -> E_S -> 0`.
///
/// The second form is the dual presentation read with the arrows reversed: since
/// `Hom(U, Q(-1)) = 0` no surjection `U^4 -> Q(-1)^2` exists, while `Hom(Q(-1), U) = Y_2`.
pub fn e_elliptic() -> Sheaf {
    Sheaf::presented(
        "E_S",
        true,
        ChernData::new(2, 0, 2, 0).to_ch(),
        vec![
            ShortExact::Cokernel { sub: b(u().power(2)), total: b(q_dual().power(2)) },
            ShortExact::Cokernel { sub: b(BundleExpr::q().twist(-1).power(2)), total: b(u().power(4)) },
        ],
    )
}

/// Nontrivial self-extension of `E_S`, presented as `0 -> U^4 -> Q*^4 -> E_4^S -> 0`.
pub fn e_elliptic_4() -> Sheaf {
    let es = e_elliptic();
    Sheaf::presented(
        "E_4^S",
        true,
        es.ch().scale(2.into()),
        vec![
            ShortExact::Cokernel { sub: b(u().power(4)), total: b(q_dual().power(4)) },
            ShortExact::Extension { sub: es.clone(), quotient: es },
        ],
    )
}

fn ch_e9() -> ChowClass {
    ch(&u()).scale(5.into()) - ch(&o(-1))
}

fn ch_omega() -> ChowClass {
    ch(&o(0)).scale(7.into()) - ch(&o(1))
}

fn e_9_from_mutation() -> Sheaf {
    Sheaf::presented("E_9", true, ch_e9(), vec![ShortExact::Cokernel { sub: b(o(-1)), total: b(u().power(5)) }])
}

fn omega_from_euler() -> Sheaf {
    Sheaf::presented("Omega(1)", true, ch_omega(), vec![ShortExact::Kernel { total: b(o(0).power(7)), quotient: b(o(1)) }])
}

/// `R_U(O(-1))`: `0 -> O(-1) -> Y_4 (x) U -> E_9 -> 0`, also the kernel in
/// `0 -> E_9 -> Y_4 (x) Q* -> Omega(1) -> 0`.
pub fn e_9() -> Sheaf {
    Sheaf::presented(
        "E_9",
        true,
        ch_e9(),
        vec![
            ShortExact::Cokernel { sub: b(o(-1)), total: b(u().power(5)) },
            ShortExact::Kernel { total: b(q_dual().power(5)), quotient: omega_from_euler() },
        ],
    )
}

/// Restricted twisted cotangent bundle of the ambient `P^6`, from the Euler sequence
/// `0 -> Omega(1) -> Y_6 (x) O -> O(1) -> 0`, and as the cokernel of `E_9 -> Y_4 (x) Q*`.
pub fn omega_1() -> Sheaf {
    Sheaf::presented(
        "Omega(1)",
        true,
        ch_omega(),
        vec![
            ShortExact::Kernel { total: b(o(0).power(7)), quotient: b(o(1)) },
            ShortExact::Cokernel { sub: e_9_from_mutation(), total: b(q_dual().power(5)) },
        ],
    )
}

/// `R_U(U(-1))`: `0 -> U(-1) -> Hom(U(-1), U) (x) U -> E_42 -> 0`, also
/// `0 -> E_42 -> Y_4 (x) E_9 -> Q* -> 0`.
pub fn e_42() -> Sheaf {
    Sheaf::presented(
        "E_42",
        true,
        ch(&u()).scale(22.into()) - ch(&u().twist(-1)),
        vec![
            ShortExact::Cokernel { sub: b(u().twist(-1)), total: b(u().power(22)) },
            ShortExact::Kernel { total: Sheaf::Sum(vec![(5, e_9())]), quotient: b(q_dual()) },
        ],
    )
}

/// Look up a named object; names are case-sensitive.
pub fn by_name(name: &str) -> Option<Sheaf> {
    Some(match name {
        "I_L" => ideal_of_line(),
        "E_L" => e_line(),
        "E_S" => e_elliptic(),
        "E_4^S" | "E_4S" => e_elliptic_4(),
        "E_9" => e_9(),
        "E_42" => e_42(),
        "Omega(1)" => omega_1(),
        _ => return None,
    })
}

pub const NAMES: [&str; 7] = ["I_L", "E_L", "E_S", "E_4^S", "E_9", "E_42", "Omega(1)"];

/// One displayed exact sequence, as terms `(sign, multiplicity, sheaf)` from left to right.
#[derive(Debug, Clone)]
pub struct NamedSequence {
    pub name: &'static str,
    pub terms: Vec<(i64, Sheaf)>,
}

fn seq(name: &'static str, terms: Vec<(i64, Sheaf)>) -> NamedSequence {
    NamedSequence { name, terms }
}

/// The exact sequences of the theory, each `0 -> A_1 -> ... -> A_n -> 0` with multiplicities.
pub fn displayed_sequences() -> Vec<NamedSequence> {
    vec![
        seq("universal", vec![(1, b(u())), (5, b(o(0))), (1, b(BundleExpr::q()))]),
        seq("QQ", vec![(1, b(BundleExpr::q().twist(-1))), (3, b(u())), (1, b(q_dual()))]),
        seq("E_9", vec![(1, b(o(-1))), (5, b(u())), (1, e_9())]),
        seq("E_42", vec![(1, b(u().twist(-1))), (22, b(u())), (1, e_42())]),
        seq("E_42E_9", vec![(1, e_42()), (5, e_9()), (1, b(q_dual()))]),
        seq("omega-helix", vec![(1, e_9()), (5, b(q_dual())), (1, omega_1())]),
        seq("euler", vec![(1, omega_1()), (7, b(o(0))), (1, b(o(1)))]),
        seq("ideal-of-line", vec![(1, b(u())), (1, b(q_dual())), (1, ideal_of_line())]),
        seq("E_L", vec![(1, b(u())), (1, b(q_dual().sum(o(0)))), (1, e_line())]),
        seq("E_S", vec![(2, b(u())), (2, b(q_dual())), (1, e_elliptic())]),
        // as printed; exact in K-theory, though only the reversed arrows give a sheaf map
        seq("E_S-dual", vec![(1, e_elliptic()), (4, b(u())), (2, b(BundleExpr::q().twist(-1)))]),
        seq("E_S-dual-reversed", vec![(2, b(BundleExpr::q().twist(-1))), (4, b(u())), (1, e_elliptic())]),
        seq("E_4^S", vec![(4, b(u())), (4, b(q_dual())), (1, e_elliptic_4())]),
        seq("E_4^S-extension", vec![(1, e_elliptic()), (1, e_elliptic_4()), (1, e_elliptic())]),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sheaf::{cohomology, presentation_classes_agree, Presented};

    fn presented(s: &Sheaf) -> &Presented {
        match s {
            Sheaf::Presented(p) => p,
            _ => panic!("not presented"),
        }
    }

    #[test]
    fn declared_classes_match_presentations() {
        for name in NAMES {
            let s = by_name(name).unwrap();
            assert!(presentation_classes_agree(presented(&s)).unwrap(), "{name}");
        }
    }

    #[test]
    fn ranks_and_first_chern_classes() {
        let cases = [("E_9", 9, -4), ("E_42", 42, -19), ("Omega(1)", 6, -1), ("E_S", 2, 0), ("E_L", 2, 0), ("I_L", 1, 0)];
        for (name, r, c1) in cases {
            let s = by_name(name).unwrap();
            assert_eq!(s.rank(), r, "{name}");
            assert_eq!(s.ch().a.to_integer() as i64, c1, "{name}");
        }
    }

    #[test]
    fn sections_of_named_objects() {
        assert_eq!(cohomology(&e_elliptic()).unwrap(), [0, 0, 0, 0]);
        assert_eq!(cohomology(&e_elliptic().twist(1)).unwrap(), [10, 0, 0, 0]);
        assert_eq!(cohomology(&e_line()).unwrap(), [1, 0, 0, 0]);
        assert_eq!(cohomology(&ideal_of_line()).unwrap(), [0, 0, 0, 0]);
        assert_eq!(cohomology(&ideal_of_line().twist(1)).unwrap(), [5, 0, 0, 0]);
    }
}
