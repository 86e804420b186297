//! Bundle expressions over the generators `U`, `Q` and `O(t)`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::rep::{weyl_dim, GlWeight};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Generator {
    U,
    Q,
}

impl Generator {
    pub fn rank(self) -> usize {
        match self {
            Generator::U => 2,
            Generator::Q => 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BundleExpr {
    Gen(Generator),
    Line(i64),
    Dual(Box<BundleExpr>),
    Tensor(Box<BundleExpr>, Box<BundleExpr>),
    Sum(Box<BundleExpr>, Box<BundleExpr>),
    Sym2(Box<BundleExpr>),
    Wedge2(Box<BundleExpr>),
    Twist(Box<BundleExpr>, i64),
    /// `S^w` applied to `U` or `Q` (not to their duals).
    Schur(GlWeight, Generator),
}

use BundleExpr::*;

impl BundleExpr {
    pub fn u() -> Self {
        Gen(Generator::U)
    }

    pub fn q() -> Self {
        Gen(Generator::Q)
    }

    pub fn o(t: i64) -> Self {
        Line(t)
    }

    pub fn dual(self) -> Self {
        Dual(Box::new(self))
    }

    pub fn tensor(self, other: BundleExpr) -> Self {
        Tensor(Box::new(self), Box::new(other))
    }

    pub fn sum(self, other: BundleExpr) -> Self {
        Sum(Box::new(self), Box::new(other))
    }

    pub fn sym2(self) -> Self {
        Sym2(Box::new(self))
    }

    pub fn wedge2(self) -> Self {
        Wedge2(Box::new(self))
    }

    pub fn twist(self, t: i64) -> Self {
        Twist(Box::new(self), t)
    }

    /// `self` repeated `n` times as a direct sum; `n` must be positive.
    pub fn power(self, n: usize) -> Self {
        assert!(n > 0);
        let mut out = self.clone();
        for _ in 1..n {
            out = out.sum(self.clone());
        }
        out
    }

    /// Structural rank.
    pub fn rank(&self) -> u64 {
        match self {
            Gen(g) => g.rank() as u64,
            Line(_) => 1,
            Dual(e) | Twist(e, _) => e.rank(),
            Tensor(a, b) => a.rank() * b.rank(),
            Sum(a, b) => a.rank() + b.rank(),
            Sym2(e) => {
                let r = e.rank();
                r * (r + 1) / 2
            }
            Wedge2(e) => {
                let r = e.rank();
                r * r.saturating_sub(1) / 2
            }
            Schur(w, _) => weyl_dim(w),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Gen(_) | Line(_) | Schur(..) => 0,
            Dual(e) | Twist(e, _) | Sym2(e) | Wedge2(e) => 1 + e.depth(),
            Tensor(a, b) | Sum(a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    /// Canonical form: duals pushed to the leaves, twists folded, the classical
    /// isomorphisms `wedge2 U = O(-1)`, `wedge2 U* = O(1)`, `wedge2 Q* = Q(-1)`,
    /// `wedge2 Q = Q*(1)` applied, commutative nodes flattened and sorted.
    pub fn canonical(&self) -> BundleExpr {
        let e = push_duals(self, false);
        let e = simplify(&e);
        rebuild_sorted(&e)
    }

    fn precedence(&self) -> u8 {
        match self {
            Sum(..) => 0,
            Tensor(..) => 1,
            _ => 2,
        }
    }
}

fn push_duals(e: &BundleExpr, dualize: bool) -> BundleExpr {
    match e {
        Gen(g) => {
            if dualize {
                Gen(*g).dual()
            } else {
                Gen(*g)
            }
        }
        Line(t) => Line(if dualize { -t } else { *t }),
        Dual(inner) => push_duals(inner, !dualize),
        Tensor(a, b) => push_duals(a, dualize).tensor(push_duals(b, dualize)),
        Sum(a, b) => push_duals(a, dualize).sum(push_duals(b, dualize)),
        Sym2(inner) => push_duals(inner, dualize).sym2(),
        Wedge2(inner) => push_duals(inner, dualize).wedge2(),
        Twist(inner, t) => push_duals(inner, dualize).twist(if dualize { -t } else { *t }),
        Schur(w, g) => {
            if dualize {
                Schur(w.dual(), *g)
            } else {
                Schur(w.clone(), *g)
            }
        }
    }
}

fn is_gen_dual(e: &BundleExpr, g: Generator) -> bool {
    matches!(e, Dual(inner) if **inner == Gen(g))
}

fn simplify(e: &BundleExpr) -> BundleExpr {
    match e {
        Gen(_) | Line(_) | Schur(..) => e.clone(),
        Dual(inner) => simplify(inner).dual(),
        Tensor(a, b) => {
            let (a, b) = (simplify(a), simplify(b));
            match (&a, &b) {
                (Line(0), _) => b,
                (_, Line(0)) => a,
                (Line(s), other) | (other, Line(s)) => simplify(&other.clone().twist(*s)),
                _ => a.tensor(b),
            }
        }
        Sum(a, b) => simplify(a).sum(simplify(b)),
        Sym2(inner) => {
            let inner = simplify(inner);
            match inner {
                Line(t) => Line(2 * t),
                Gen(Generator::U) => Schur(GlWeight::new(vec![2, 0]).unwrap(), Generator::U),
                other => other.sym2(),
            }
        }
        Wedge2(inner) => {
            let inner = simplify(inner);
            if inner == Gen(Generator::U) {
                Line(-1)
            } else if is_gen_dual(&inner, Generator::U) {
                Line(1)
            } else if is_gen_dual(&inner, Generator::Q) {
                BundleExpr::q().twist(-1)
            } else if inner == Gen(Generator::Q) {
                BundleExpr::q().dual().twist(1)
            } else {
                inner.wedge2()
            }
        }
        Twist(inner, t) => {
            let inner = simplify(inner);
            match inner {
                _ if *t == 0 => inner,
                Line(s) => Line(s + t),
                Twist(e2, s) => {
                    if s + t == 0 {
                        *e2
                    } else {
                        Twist(e2, s + t)
                    }
                }
                other => other.twist(*t),
            }
        }
    }
}

fn flatten_sum(e: &BundleExpr, out: &mut Vec<BundleExpr>) {
    match e {
        Sum(a, b) => {
            flatten_sum(a, out);
            flatten_sum(b, out);
        }
        other => out.push(rebuild_sorted(other)),
    }
}

fn flatten_tensor(e: &BundleExpr, out: &mut Vec<BundleExpr>) {
    match e {
        Tensor(a, b) => {
            flatten_tensor(a, out);
            flatten_tensor(b, out);
        }
        other => out.push(rebuild_sorted(other)),
    }
}

fn fold_sorted(mut items: Vec<BundleExpr>, join: fn(BundleExpr, BundleExpr) -> BundleExpr) -> BundleExpr {
    items.sort_by_key(|x| x.to_string());
    let mut it = items.into_iter();
    let first = it.next().unwrap();
    it.fold(first, join)
}

fn rebuild_sorted(e: &BundleExpr) -> BundleExpr {
    match e {
        Sum(..) => {
            let mut items = Vec::new();
            flatten_sum(e, &mut items);
            fold_sorted(items, BundleExpr::sum)
        }
        Tensor(..) => {
            let mut items = Vec::new();
            flatten_tensor(e, &mut items);
            fold_sorted(items, BundleExpr::tensor)
        }
        Dual(inner) => rebuild_sorted(inner).dual(),
        Sym2(inner) => rebuild_sorted(inner).sym2(),
        Wedge2(inner) => rebuild_sorted(inner).wedge2(),
        Twist(inner, t) => rebuild_sorted(inner).twist(*t),
        other => other.clone(),
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::U => write!(f, "U"),
            Generator::Q => write!(f, "Q"),
        }
    }
}

fn write_weight(f: &mut fmt::Formatter<'_>, w: &GlWeight) -> fmt::Result {
    let parts: Vec<String> = w.entries().iter().map(|x| x.to_string()).collect();
    write!(f, "[{}]", parts.join(","))
}

impl fmt::Display for BundleExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gen(g) => write!(f, "{g}"),
            Line(t) => write!(f, "O({t})"),
            Dual(e) => {
                if e.precedence() < 2 || matches!(**e, Twist(..) | Dual(_)) {
                    write!(f, "({e})'")
                } else {
                    write!(f, "{e}'")
                }
            }
            Tensor(a, b) => {
                let wrap = |x: &BundleExpr| if x.precedence() < 1 { format!("({x})") } else { x.to_string() };
                // right operand of equal precedence is parenthesised so parsing stays left-assoc
                let rb = if b.precedence() <= 1 { format!("({b})") } else { b.to_string() };
                write!(f, "{} * {}", wrap(a), rb)
            }
            Sum(a, b) => {
                let rb = if b.precedence() == 0 { format!("({b})") } else { b.to_string() };
                write!(f, "{a} + {rb}")
            }
            Sym2(e) => write!(f, "sym2({e})"),
            Wedge2(e) => write!(f, "wedge2({e})"),
            Twist(e, t) => {
                if e.precedence() < 2 || matches!(**e, Line(_)) {
                    write!(f, "({e})({t})")
                } else {
                    write!(f, "{e}({t})")
                }
            }
            Schur(w, g) => {
                write!(f, "schur(")?;
                write_weight(f, w)?;
                write!(f, ",{g})")
            }
        }
    }
}
