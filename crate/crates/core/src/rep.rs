//! Exact representation theory: SL(2) characters, GL(n) weights, the Weyl
//! dimension formula, Littlewood-Richardson products and restriction along
//! the principal SL(2).
//!
//! SL(2) characters are stored as multiplicities of the irreducibles `Y_d`
//! (`dim Y_d = d + 1`); arithmetic goes through sparse Laurent polynomials in
//! the torus variable `q`, with decomposition by peeling the leading term.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

/// Sparse Laurent polynomial with integer coefficients.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Laurent(BTreeMap<i64, i64>);

impl Laurent {
    pub fn zero() -> Self {
        Laurent(BTreeMap::new())
    }

    pub fn monomial(exp: i64, coeff: i64) -> Self {
        let mut l = Laurent::zero();
        l.add_term(exp, coeff);
        l
    }

    pub fn add_term(&mut self, exp: i64, coeff: i64) {
        if coeff == 0 {
            return;
        }
        let c = self.0.entry(exp).or_insert(0);
        *c += coeff;
        if *c == 0 {
            self.0.remove(&exp);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        self.0.iter().map(|(&e, &c)| (e, c))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn leading(&self) -> Option<(i64, i64)> {
        self.0.iter().next_back().map(|(&e, &c)| (e, c))
    }

    pub fn mul(&self, other: &Laurent) -> Laurent {
        let mut out = Laurent::zero();
        for (e1, c1) in self.terms() {
            for (e2, c2) in other.terms() {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }

    pub fn add(&self, other: &Laurent) -> Laurent {
        let mut out = self.clone();
        for (e, c) in other.terms() {
            out.add_term(e, c);
        }
        out
    }

    pub fn scale(&self, k: i64) -> Laurent {
        let mut out = Laurent::zero();
        for (e, c) in self.terms() {
            out.add_term(e, c * k);
        }
        out
    }

    /// Value at `q = 1`.
    pub fn eval_one(&self) -> i64 {
        self.0.values().sum()
    }
}

/// `q^d + q^{d-2} + ... + q^{-d}`.
fn irreducible_laurent(d: u32) -> Laurent {
    let d = d as i64;
    let mut l = Laurent::zero();
    let mut e = d;
    while e >= -d {
        l.add_term(e, 1);
        e -= 2;
    }
    l
}

/// Formal nonnegative combination of the irreducible SL(2)-modules `Y_d`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Sl2Character {
    coeffs: BTreeMap<u32, u64>,
}

impl Sl2Character {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The irreducible `Y_d`.
    pub fn y(d: u32) -> Self {
        Self::zero().with(d, 1)
    }

    pub fn trivial() -> Self {
        Self::y(0)
    }

    pub fn with(mut self, d: u32, mult: u64) -> Self {
        if mult > 0 {
            *self.coeffs.entry(d).or_insert(0) += mult;
        }
        self
    }

    pub fn from_pairs(pairs: &[(u32, u64)]) -> Self {
        pairs.iter().fold(Self::zero(), |acc, &(d, m)| acc.with(d, m))
    }

    pub fn multiplicity(&self, d: u32) -> u64 {
        self.coeffs.get(&d).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, u64)> + '_ {
        self.coeffs.iter().map(|(&d, &m)| (d, m))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn dim(&self) -> u64 {
        self.iter().map(|(d, m)| m * (d as u64 + 1)).sum()
    }

    pub fn to_laurent(&self) -> Laurent {
        self.iter().fold(Laurent::zero(), |acc, (d, m)| acc.add(&irreducible_laurent(d).scale(m as i64)))
    }

    /// Decomposes a Laurent polynomial by peeling leading terms. Returns `None`
    /// when the polynomial is not the character of an honest representation.
    pub fn from_laurent(l: &Laurent) -> Option<Self> {
        let mut rest = l.clone();
        let mut out = Self::zero();
        while let Some((e, c)) = rest.leading() {
            if e < 0 || c < 0 {
                return None;
            }
            let d = e as u32;
            out = out.with(d, c as u64);
            rest = rest.add(&irreducible_laurent(d).scale(-c));
        }
        Some(out)
    }

    pub fn add(&self, other: &Self) -> Self {
        other.iter().fold(self.clone(), |acc, (d, m)| acc.with(d, m))
    }

    pub fn scale(&self, k: u64) -> Self {
        if k == 0 {
            return Self::zero();
        }
        Sl2Character { coeffs: self.coeffs.iter().map(|(&d, &m)| (d, m * k)).collect() }
    }

    /// `self - other`, or `None` if some multiplicity would go negative.
    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        let mut out = self.coeffs.clone();
        for (d, m) in other.iter() {
            let have = out.get(&d).copied().unwrap_or(0);
            if have < m {
                return None;
            }
            if have == m {
                out.remove(&d);
            } else {
                out.insert(d, have - m);
            }
        }
        Some(Sl2Character { coeffs: out })
    }
}

impl fmt::Display for Sl2Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> =
            self.coeffs.iter().rev().map(|(&d, &m)| if m == 1 { format!("Y_{d}") } else { format!("{m}Y_{d}") }).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Clebsch-Gordan decomposition of a tensor product.
pub fn sl2_tensor(a: &Sl2Character, b: &Sl2Character) -> Sl2Character {
    Sl2Character::from_laurent(&a.to_laurent().mul(&b.to_laurent())).expect("product of characters is a character")
}

/// Exterior powers of `Y_2`, the character of the net of hyperplanes.
pub fn wedge_y2(j: usize) -> Sl2Character {
    match j {
        0 | 3 => Sl2Character::trivial(),
        1 | 2 => Sl2Character::y(2),
        _ => Sl2Character::zero(),
    }
}

/// Non-increasing integer weight of GL(n).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GlWeight(Vec<i64>);

impl GlWeight {
    pub fn new(entries: Vec<i64>) -> Option<Self> {
        if entries.is_empty() || entries.windows(2).any(|w| w[0] < w[1]) {
            return None;
        }
        Some(GlWeight(entries))
    }

    pub fn trivial(n: usize) -> Self {
        GlWeight(vec![0; n])
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    /// Highest weight of the dual representation.
    pub fn dual(&self) -> Self {
        GlWeight(self.0.iter().rev().map(|x| -x).collect())
    }

    pub fn shift(&self, c: i64) -> Self {
        GlWeight(self.0.iter().map(|x| x + c).collect())
    }

    pub fn last(&self) -> i64 {
        *self.0.last().unwrap()
    }
}

impl fmt::Display for GlWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Weyl dimension formula `prod_{i<j} (l_i - l_j + j - i) / (j - i)`.
pub fn weyl_dim(w: &GlWeight) -> u64 {
    let l = w.entries();
    let n = l.len();
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..n {
        for j in i + 1..n {
            num *= (l[i] - l[j] + (j - i) as i64) as u128;
            den *= (j - i) as u128;
        }
    }
    (num / den) as u64
}

/// Littlewood-Richardson decomposition of `a (x) b` for GL(n).
///
/// Both weights are shifted to partitions, the product is computed by
/// enumerating LR tableaux of content `b` on top of `a`, and the result is
/// shifted back.
pub fn lr_product(a: &GlWeight, b: &GlWeight) -> BTreeMap<GlWeight, u64> {
    assert_eq!(a.n(), b.n(), "lr_product needs equal block sizes");
    let n = a.n();
    let (sa, sb) = (a.last(), b.last());
    let shape: Vec<i64> = a.entries().iter().map(|x| x - sa).collect();
    let content: Vec<i64> = b.entries().iter().map(|x| x - sb).collect();
    let mut counts = vec![vec![0i64; n]; n];
    let mut out = BTreeMap::new();
    lr_place_label(&shape, &content, 0, &mut counts, &mut |result| {
        let w = GlWeight(result.iter().map(|x| x + sa + sb).collect());
        *out.entry(w).or_insert(0) += 1;
    });
    out
}

fn lr_place_label(shape: &[i64], content: &[i64], label: usize, counts: &mut Vec<Vec<i64>>, emit: &mut dyn FnMut(&[i64])) {
    if label == content.len() {
        emit(shape);
        return;
    }
    let mut new_shape = shape.to_vec();
    lr_strip(shape, content, label, 0, content[label], &mut new_shape, counts, emit);
}

#[allow(clippy::too_many_arguments)]
fn lr_strip(
    old: &[i64],
    content: &[i64],
    label: usize,
    row: usize,
    remaining: i64,
    new_shape: &mut Vec<i64>,
    counts: &mut Vec<Vec<i64>>,
    emit: &mut dyn FnMut(&[i64]),
) {
    let n = old.len();
    if row == n {
        if remaining == 0 {
            let snapshot = new_shape.clone();
            lr_place_label(&snapshot, content, label + 1, counts, emit);
        }
        return;
    }
    let cap = if row == 0 { remaining } else { (old[row - 1] - old[row]).min(remaining) };
    for x in 0..=cap {
        if label > 0 {
            // reverse reading word must stay a lattice word
            let placed: i64 = (0..row).map(|s| counts[s][label]).sum::<i64>() + x;
            let above: i64 = (0..row).map(|s| counts[s][label - 1]).sum();
            if placed > above {
                break;
            }
        }
        counts[row][label] = x;
        new_shape[row] = old[row] + x;
        lr_strip(old, content, label, row + 1, remaining - x, new_shape, counts, emit);
    }
    counts[row][label] = 0;
    new_shape[row] = old[row];
}

/// Restriction of the GL(n) irreducible of highest weight `w` along the
/// principal SL(2), i.e. the character evaluated at
/// `(q^{n-1}, q^{n-3}, ..., q^{1-n})`. For `n = 5` the standard
/// representation becomes `Y_4`.
pub fn sl2_content(w: &GlWeight) -> Sl2Character {
    let n = w.n();
    let shift = w.last();
    let lam: Vec<i64> = w.entries().iter().map(|x| x - shift).collect();
    // principal specialisation s_lam(1, x, ..., x^{n-1}) with x = q^{-2}
    let mut num = vec![1i64];
    let mut den = vec![1i64];
    for i in 0..n {
        for j in i + 1..n {
            num = poly_mul_one_minus(&num, (lam[i] - lam[j] + (j - i) as i64) as usize);
            den = poly_mul_one_minus(&den, j - i);
        }
    }
    let quotient = poly_exact_div(&num, &den);
    let size: i64 = lam.iter().sum();
    let n_lam: i64 = lam.iter().enumerate().map(|(i, l)| i as i64 * l).sum();
    let mut l = Laurent::zero();
    for (k, &c) in quotient.iter().enumerate() {
        let xexp = n_lam + k as i64;
        l.add_term((n as i64 - 1) * size - 2 * xexp, c);
    }
    Sl2Character::from_laurent(&l).expect("principal restriction is a character")
}

fn poly_mul_one_minus(p: &[i64], a: usize) -> Vec<i64> {
    let mut out = vec![0i64; p.len() + a];
    for (i, &c) in p.iter().enumerate() {
        out[i] += c;
        out[i + a] -= c;
    }
    out
}

fn poly_exact_div(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dl = den.len();
    if rem.len() < dl {
        return vec![0];
    }
    let mut q = vec![0i64; rem.len() - dl + 1];
    for i in 0..q.len() {
        let c = rem[i];
        q[i] = c;
        if c != 0 {
            for (j, &d) in den.iter().enumerate() {
                rem[i + j] -= c * d;
            }
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0), "inexact polynomial division");
    while q.len() > 1 && *q.last().unwrap() == 0 {
        q.pop();
    }
    q
}

/// One irreducible homogeneous bundle `S^alpha U* (x) S^beta Q* (x) O(t)` on G(2,5),
/// stored canonically with `alpha = (a, 0)` and `beta = (b1, b2, 0)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Term {
    pub u_block: [i64; 2],
    pub q_block: [i64; 3],
    pub twist: i64,
}

impl Term {
    /// Canonical representative of the SL(5)-weight class of
    /// `(alpha + t, t | beta)` modulo `(1,1,1,1,1)`.
    pub fn new(alpha: [i64; 2], beta: [i64; 3], twist: i64) -> Self {
        assert!(alpha[0] >= alpha[1] && beta[0] >= beta[1] && beta[1] >= beta[2]);
        Term { u_block: [alpha[0] - alpha[1], 0], q_block: [beta[0] - beta[2], beta[1] - beta[2], 0], twist: twist + alpha[1] - beta[2] }
    }

    pub fn line(t: i64) -> Self {
        Term::new([0, 0], [0, 0, 0], t)
    }

    pub fn u_weight(&self) -> GlWeight {
        GlWeight(self.u_block.to_vec())
    }

    pub fn q_weight(&self) -> GlWeight {
        GlWeight(self.q_block.to_vec())
    }

    pub fn rank(&self) -> u64 {
        weyl_dim(&self.u_weight()) * weyl_dim(&self.q_weight())
    }

    pub fn dual(&self) -> Term {
        let a = self.u_block;
        let b = self.q_block;
        Term::new([-a[1], -a[0]], [-b[2], -b[1], -b[0]], -self.twist)
    }

    pub fn twisted(&self, t: i64) -> Term {
        Term { twist: self.twist + t, ..self.clone() }
    }

    /// Concatenated GL(5) weight with the twist folded into the U*-block.
    pub fn gl5_weight(&self) -> [i64; 5] {
        let t = self.twist;
        let a = self.u_block;
        let b = self.q_block;
        [a[0] + t, a[1] + t, b[0], b[1], b[2]]
    }

    /// Cache key.
    pub fn key(&self) -> String {
        format!("U*{},{}|Q*{},{},{}|O{}", self.u_block[0], self.u_block[1], self.q_block[0], self.q_block[1], self.q_block[2], self.twist)
    }
}

/// `S^alpha U*` (x) `S^beta U*` and similarly for the Q*-block, tensored with line bundles.
pub fn term_product(a: &Term, b: &Term) -> BTreeMap<Term, u64> {
    let mut out = BTreeMap::new();
    let us = lr_product(&a.u_weight(), &b.u_weight());
    let qs = lr_product(&a.q_weight(), &b.q_weight());
    for (uw, um) in &us {
        for (qw, qm) in &qs {
            let u = uw.entries();
            let q = qw.entries();
            let t = Term::new([u[0], u[1]], [q[0], q[1], q[2]], a.twist + b.twist);
            *out.entry(t).or_insert(0) += um * qm;
        }
    }
    out
}

/// Formal sum of irreducible homogeneous bundles on G(2,5).
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepSum {
    pub terms: BTreeMap<Term, u64>,
}

impl RepSum {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn single(t: Term) -> Self {
        Self::zero().with(t, 1)
    }

    pub fn with(mut self, t: Term, m: u64) -> Self {
        if m > 0 {
            *self.terms.entry(t).or_insert(0) += m;
        }
        self
    }

    pub fn rank(&self) -> u64 {
        self.terms.iter().map(|(t, m)| t.rank() * m).sum()
    }

    pub fn add(&self, other: &RepSum) -> RepSum {
        other.terms.iter().fold(self.clone(), |acc, (t, &m)| acc.with(t.clone(), m))
    }

    pub fn scale(&self, k: u64) -> RepSum {
        self.terms.iter().fold(RepSum::zero(), |acc, (t, &m)| acc.with(t.clone(), m * k))
    }

    pub fn tensor(&self, other: &RepSum) -> RepSum {
        let mut out = RepSum::zero();
        for (a, ma) in &self.terms {
            for (b, mb) in &other.terms {
                for (t, m) in term_product(a, b) {
                    out = out.with(t, m * ma * mb);
                }
            }
        }
        out
    }

    pub fn dual(&self) -> RepSum {
        self.terms.iter().fold(RepSum::zero(), |acc, (t, &m)| acc.with(t.dual(), m))
    }

    pub fn twisted(&self, s: i64) -> RepSum {
        self.terms.iter().fold(RepSum::zero(), |acc, (t, &m)| acc.with(t.twisted(s), m))
    }
}
