//! Chow ring of V5, Chern characters, Riemann-Roch and the K-lattice spanned by
//! `(O(-1), U, Q*, O)`.
//!
//! A class is written `r + a h + b l + c p` with `h^2 = 5 l`, `h l = p`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::Ratio;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::expr::{BundleExpr, Generator};

pub type Rat = Ratio<i128>;

pub fn rat(n: i128, d: i128) -> Rat {
    Ratio::new(n, d)
}

fn int(n: i64) -> Rat {
    Ratio::from_integer(n as i128)
}

/// JSON form `{"num": .., "den": ..}` for exact rationals.
pub mod rat_serde {
    use super::*;

    #[derive(Serialize, Deserialize)]
    struct Wire {
        num: i128,
        den: i128,
    }

    pub fn serialize<S: Serializer>(r: &Rat, s: S) -> std::result::Result<S::Ok, S::Error> {
        Wire { num: *r.numer(), den: *r.denom() }.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rat, D::Error> {
        let w = Wire::deserialize(d)?;
        if w.den == 0 {
            return Err(serde::de::Error::custom("zero denominator"));
        }
        Ok(Ratio::new(w.num, w.den))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ChowClass {
    #[serde(with = "rat_serde")]
    pub r: Rat,
    #[serde(with = "rat_serde")]
    pub a: Rat,
    #[serde(with = "rat_serde")]
    pub b: Rat,
    #[serde(with = "rat_serde")]
    pub c: Rat,
}

impl ChowClass {
    pub fn new(r: Rat, a: Rat, b: Rat, c: Rat) -> Self {
        ChowClass { r, a, b, c }
    }

    pub fn zero() -> Self {
        Self::new(Rat::zero(), Rat::zero(), Rat::zero(), Rat::zero())
    }

    pub fn one() -> Self {
        Self::new(Rat::one(), Rat::zero(), Rat::zero(), Rat::zero())
    }

    pub fn components(&self) -> [Rat; 4] {
        [self.r, self.a, self.b, self.c]
    }

    pub fn scale(&self, k: Rat) -> Self {
        Self::new(self.r * k, self.a * k, self.b * k, self.c * k)
    }

    /// Class of the dual: odd degrees change sign.
    pub fn dual(&self) -> Self {
        Self::new(self.r, -self.a, self.b, -self.c)
    }

    /// Adams operation: degree `d` part scaled by `k^d`.
    pub fn adams(&self, k: i64) -> Self {
        let k = int(k);
        Self::new(self.r, self.a * k, self.b * k * k, self.c * k * k * k)
    }

    pub fn degree3(&self) -> Rat {
        self.c
    }
}

impl Add for ChowClass {
    type Output = ChowClass;
    fn add(self, o: ChowClass) -> ChowClass {
        ChowClass::new(self.r + o.r, self.a + o.a, self.b + o.b, self.c + o.c)
    }
}

impl Sub for ChowClass {
    type Output = ChowClass;
    fn sub(self, o: ChowClass) -> ChowClass {
        self + (-o)
    }
}

impl Neg for ChowClass {
    type Output = ChowClass;
    fn neg(self) -> ChowClass {
        ChowClass::new(-self.r, -self.a, -self.b, -self.c)
    }
}

impl Mul for ChowClass {
    type Output = ChowClass;
    fn mul(self, o: ChowClass) -> ChowClass {
        let five = int(5);
        ChowClass::new(
            self.r * o.r,
            self.r * o.a + self.a * o.r,
            self.r * o.b + self.b * o.r + five * self.a * o.a,
            self.r * o.c + self.c * o.r + self.a * o.b + self.b * o.a,
        )
    }
}

impl fmt::Display for ChowClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + ({})h + ({})l + ({})p", self.r, self.a, self.b, self.c)
    }
}

/// Integer Chern data `(rank, c1, c2, c3)` with `c_i` measured against `h, l, p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ChernData {
    pub rank: i64,
    pub c1: i64,
    pub c2: i64,
    pub c3: i64,
}

impl ChernData {
    pub fn new(rank: i64, c1: i64, c2: i64, c3: i64) -> Self {
        ChernData { rank, c1, c2, c3 }
    }

    pub fn to_ch(&self) -> ChowClass {
        let (c1, c2, c3) = (int(self.c1), int(self.c2), int(self.c3));
        let five = int(5);
        ChowClass::new(
            int(self.rank),
            c1,
            (five * c1 * c1 - int(2) * c2) / int(2),
            (five * c1 * c1 * c1 - int(3) * c1 * c2 + int(3) * c3) / int(6),
        )
    }

    pub fn from_ch(x: &ChowClass) -> Result<Self> {
        let c1 = x.a;
        let c2 = (int(5) * c1 * c1 - int(2) * x.b) / int(2);
        let c3 = (int(6) * x.c - int(5) * c1 * c1 * c1 + int(3) * c1 * c2) / int(3);
        let to_int = |v: Rat| -> Result<i64> {
            if v.is_integer() {
                Ok(v.to_integer() as i64)
            } else {
                Err(Error::NotInLattice)
            }
        };
        Ok(ChernData::new(to_int(x.r)?, to_int(c1)?, to_int(c2)?, to_int(c3)?))
    }

    pub fn twisted(&self, t: i64) -> Result<Self> {
        Self::from_ch(&(self.to_ch() * ch_line(t)))
    }
}

impl fmt::Display for ChernData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "rank {}, c1 {}, c2 {}, c3 {}", self.rank, self.c1, self.c2, self.c3)
    }
}

pub fn ch_line(t: i64) -> ChowClass {
    let t = int(t);
    ChowClass::new(Rat::one(), t, int(5) * t * t / int(2), int(5) * t * t * t / int(6))
}

pub fn ch_generator(g: Generator) -> ChowClass {
    match g {
        Generator::U => ChernData::new(2, -1, 2, 0).to_ch(),
        Generator::Q => ChernData::new(3, 1, 3, 1).to_ch(),
    }
}

/// `ch(Sym^k V)` for `k >= 0` through the Newton recurrence with Adams operations.
pub fn ch_sym_power(x: &ChowClass, k: usize) -> ChowClass {
    let mut syms = vec![ChowClass::one()];
    for n in 1..=k {
        let mut acc = ChowClass::zero();
        for i in 1..=n {
            acc = acc + x.adams(i as i64) * syms[n - i];
        }
        syms.push(acc.scale(rat(1, n as i128)));
    }
    syms[k]
}

/// `ch` of the Schur functor `S^w` of a generator; `det U = O(-1)`, `det Q = O(1)`.
pub fn ch_schur(w: &[i64], g: Generator) -> ChowClass {
    let x = ch_generator(g);
    let det_twist = match g {
        Generator::U => -1,
        Generator::Q => 1,
    };
    let last = *w.last().unwrap();
    let shifted: Vec<i64> = w.iter().map(|v| v - last).collect();
    let h = |k: i64| if k < 0 { ChowClass::zero() } else { ch_sym_power(&x, k as usize) };
    let base = match shifted.as_slice() {
        [p, _] => h(*p),
        // Jacobi-Trudi for a two-row partition
        [p, q, _] => h(*p) * h(*q) - h(p + 1) * h(q - 1),
        _ => panic!("Schur weight length must match the generator rank"),
    };
    base * ch_line(det_twist * last)
}

/// Chern character of an expression, computed without passing through homogeneous normalization.
pub fn ch(e: &BundleExpr) -> ChowClass {
    match e {
        BundleExpr::Gen(g) => ch_generator(*g),
        BundleExpr::Line(t) => ch_line(*t),
        BundleExpr::Dual(x) => ch(x).dual(),
        BundleExpr::Tensor(a, b) => ch(a) * ch(b),
        BundleExpr::Sum(a, b) => ch(a) + ch(b),
        BundleExpr::Sym2(x) => {
            let c = ch(x);
            (c * c + c.adams(2)).scale(rat(1, 2))
        }
        BundleExpr::Wedge2(x) => {
            let c = ch(x);
            (c * c - c.adams(2)).scale(rat(1, 2))
        }
        BundleExpr::Twist(x, t) => ch(x) * ch_line(*t),
        BundleExpr::Schur(w, g) => ch_schur(w.entries(), *g),
    }
}

/// `c_2(T)` coefficient of `l`, fixed by `chi(O) = 1` given `c_1(T) = 2h`.
pub fn derived_c2_tangent() -> Rat {
    // td_3 = c1 c2 / 24 = 2 x / 24 must equal 1
    int(12)
}

pub fn todd() -> ChowClass {
    let c1 = int(2);
    let c2 = derived_c2_tangent();
    // td = 1 + c1/2 + (c1^2 + c2)/12 + c1 c2 / 24, with h^2 = 5 l and h l = p
    ChowClass::new(Rat::one(), c1 / int(2), (int(5) * c1 * c1 + c2) / int(12), c1 * c2 / int(24))
}

pub fn chi_of_ch(x: &ChowClass) -> Result<i64> {
    let v = (*x * todd()).degree3();
    if v.is_integer() {
        Ok(v.to_integer() as i64)
    } else {
        Err(Error::NonIntegralChi { num: *v.numer(), den: *v.denom() })
    }
}

pub fn chi(e: &BundleExpr) -> Result<i64> {
    chi_of_ch(&ch(e))
}

pub fn euler_pairing(e: &BundleExpr, f: &BundleExpr) -> Result<i64> {
    chi_of_ch(&(ch(e).dual() * ch(f)))
}

/// `t -> chi(E(t))` as coefficients `[c0, c1, c2, c3]` of `1, t, t^2, t^3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HilbertPolynomial {
    #[serde(with = "rat_array")]
    pub coeffs: [Rat; 4],
}

mod rat_array {
    use super::*;

    pub fn serialize<S: Serializer>(r: &[Rat; 4], s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct W<'a>(#[serde(with = "rat_serde")] &'a Rat);
        let v: Vec<W> = r.iter().map(W).collect();
        v.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<[Rat; 4], D::Error> {
        #[derive(Deserialize)]
        struct W(#[serde(with = "rat_serde")] Rat);
        let v: Vec<W> = Vec::deserialize(d)?;
        if v.len() != 4 {
            return Err(serde::de::Error::custom("expected 4 coefficients"));
        }
        Ok([v[0].0, v[1].0, v[2].0, v[3].0])
    }
}

impl HilbertPolynomial {
    pub fn eval(&self, t: i64) -> Rat {
        let t = int(t);
        self.coeffs.iter().rev().fold(Rat::zero(), |acc, c| acc * t + c)
    }
}

impl fmt::Display for HilbertPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => "t".to_string(),
                k => format!("t^{k}"),
            };
            let coeff = if mono.is_empty() || !c.is_one() { format!("({c})") } else { String::new() };
            parts.push(format!("{coeff}{mono}"));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

pub fn hilbert_polynomial_of_ch(x: &ChowClass) -> HilbertPolynomial {
    let y = *x * todd();
    HilbertPolynomial { coeffs: [y.c, y.b, int(5) * y.a / int(2), int(5) * y.r / int(6)] }
}

pub fn hilbert_polynomial(e: &BundleExpr) -> HilbertPolynomial {
    hilbert_polynomial_of_ch(&ch(e))
}

/// Coordinates in the basis `([O(-1)], [U], [Q*], [O])`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct KClass(pub [i64; 4]);

pub const K_BASIS_LABELS: [&str; 4] = ["O(-1)", "U", "Q*", "O"];

pub fn k_basis_exprs() -> [BundleExpr; 4] {
    [BundleExpr::o(-1), BundleExpr::u(), BundleExpr::q().dual(), BundleExpr::o(0)]
}

fn basis_ch() -> [ChowClass; 4] {
    k_basis_exprs().map(|e| ch(&e))
}

impl KClass {
    pub fn zero() -> Self {
        KClass([0; 4])
    }

    pub fn basis(i: usize) -> Self {
        let mut v = [0; 4];
        v[i] = 1;
        KClass(v)
    }

    pub fn add(&self, o: &KClass) -> KClass {
        KClass(std::array::from_fn(|i| self.0[i] + o.0[i]))
    }

    pub fn scale(&self, k: i64) -> KClass {
        KClass(self.0.map(|x| x * k))
    }

    pub fn sub(&self, o: &KClass) -> KClass {
        self.add(&o.scale(-1))
    }

    pub fn is_zero(&self) -> bool {
        self.0 == [0; 4]
    }

    pub fn ch(&self) -> ChowClass {
        basis_ch().iter().zip(self.0).fold(ChowClass::zero(), |acc, (b, k)| acc + b.scale(int(k)))
    }

    pub fn rank(&self) -> i64 {
        self.ch().r.to_integer() as i64
    }

    pub fn c1(&self) -> i64 {
        self.ch().a.to_integer() as i64
    }

    /// Solve `ch = sum k_i ch(basis_i)` exactly and require integral coordinates.
    pub fn from_ch(x: &ChowClass) -> Result<KClass> {
        let b = basis_ch();
        // augmented 4x5 system, columns = basis vectors
        let mut m: Vec<Vec<Rat>> = (0..4)
            .map(|row| {
                let mut r: Vec<Rat> = (0..4).map(|col| b[col].components()[row]).collect();
                r.push(x.components()[row]);
                r
            })
            .collect();
        for col in 0..4 {
            let piv = (col..4).find(|&r| !m[r][col].is_zero()).ok_or(Error::Internal("singular K basis".into()))?;
            m.swap(col, piv);
            let p = m[col][col];
            for v in m[col].iter_mut() {
                *v /= p;
            }
            for r in 0..4 {
                if r != col && !m[r][col].is_zero() {
                    let f = m[r][col];
                    for k in 0..5 {
                        let sub = f * m[col][k];
                        m[r][k] -= sub;
                    }
                }
            }
        }
        let mut out = [0i64; 4];
        for i in 0..4 {
            let v = m[i][4];
            if !v.is_integer() {
                return Err(Error::NotInLattice);
            }
            out[i] = v.to_integer() as i64;
        }
        Ok(KClass(out))
    }
}

impl fmt::Display for KClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().zip(K_BASIS_LABELS).filter(|(k, _)| **k != 0).map(|(k, l)| format!("{k}[{l}]")).collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

pub fn k_of_expr(e: &BundleExpr) -> Result<KClass> {
    KClass::from_ch(&ch(e))
}

pub fn chern_data(e: &BundleExpr) -> Result<ChernData> {
    ChernData::from_ch(&ch(e))
}

/// Re-derives `c_2(T) = 12 l` from `chi(O) = 1` and checks the Todd class against it.
pub fn self_test() -> Result<()> {
    // solve 2x/24 = 1
    let x = int(24) / int(2);
    if x != derived_c2_tangent() {
        return Err(Error::Internal("c2(T) derivation mismatch".into()));
    }
    if chi_of_ch(&ChowClass::one())? != 1 {
        return Err(Error::Internal("chi(O) != 1".into()));
    }
    Ok(())
}
