//! Exceptional collections, mutations, Beilinson complexes and the resolution of the
//! diagonal, all at the level of classes and Hom/Ext dimensions.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::chow::{ch, chi_of_ch, euler_pairing, k_of_expr, KClass};
use crate::engine::Engine;
use crate::error::{Error, Result};
use crate::expr::BundleExpr;
use crate::rep::{sl2_tensor, Sl2Character};
use crate::sheaf::{ext_feasible, Sheaf};

#[derive(Debug, Clone, Serialize)]
pub struct CollectionItem {
    pub label: String,
    pub expr: BundleExpr,
    pub class: KClass,
}

/// An ordered collection, listed from left to right; Hom goes left to right.
#[derive(Debug, Clone, Serialize)]
pub struct ExcCollection {
    pub items: Vec<CollectionItem>,
}

impl ExcCollection {
    pub fn from_exprs(exprs: Vec<BundleExpr>) -> Result<Self> {
        let items = exprs
            .into_iter()
            .map(|e| Ok(CollectionItem { label: e.canonical().to_string(), class: k_of_expr(&e)?, expr: e }))
            .collect::<Result<_>>()?;
        Ok(ExcCollection { items })
    }

    /// `(G_3, G_2, G_1, G_0) = (O(-1), U, Q*, O)`.
    pub fn standard() -> Self {
        Self::from_exprs(collection_g().into_iter().rev().collect()).unwrap()
    }

    /// `(G^3, G^2, G^1, G^0) = (O(-1), wedge2 Q*, U, O)`.
    pub fn dual() -> Self {
        Self::from_exprs(dual_collection_g().into_iter().rev().collect()).unwrap()
    }

    /// `(U(-1), Q*(-1), O(-1), O)`.
    pub fn mutated() -> Self {
        Self::from_exprs(vec![BundleExpr::u().twist(-1), BundleExpr::q().dual().twist(-1), BundleExpr::o(-1), BundleExpr::o(0)]).unwrap()
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }
}

/// `G_j` for `j = 0..3`.
pub fn collection_g() -> [BundleExpr; 4] {
    [BundleExpr::o(0), BundleExpr::q().dual(), BundleExpr::u(), BundleExpr::o(-1)]
}

/// `G^j` for `j = 0..3`.
pub fn dual_collection_g() -> [BundleExpr; 4] {
    [BundleExpr::o(0), BundleExpr::u(), BundleExpr::q().dual().wedge2(), BundleExpr::o(-1)]
}

/// Euler pairings `chi(G_i, G_j)`, checked against the engine's Ext groups: the
/// diagonal must be `Hom = k` only and everything below it must vanish.
pub fn gram_matrix(c: &ExcCollection) -> Result<Vec<Vec<i64>>> {
    let engine = Engine::shared();
    let n = c.len();
    let mut out = vec![vec![0; n]; n];
    for i in 0..n {
        for j in 0..n {
            let (a, b) = (&c.items[i].expr, &c.items[j].expr);
            let pairing = euler_pairing(a, b)?;
            let h = engine.hom_ext(a, b)?;
            let alt = h[0] as i64 - h[1] as i64 + h[2] as i64 - h[3] as i64;
            if alt != pairing {
                return Err(Error::Internal(format!("Euler pairing {pairing} disagrees with Ext groups {h:?} at ({i}, {j})")));
            }
            let expected: Option<[u64; 4]> = match i.cmp(&j) {
                std::cmp::Ordering::Equal => Some([1, 0, 0, 0]),
                std::cmp::Ordering::Greater => Some([0; 4]),
                std::cmp::Ordering::Less => None,
            };
            if let Some(e) = expected {
                if h != e {
                    let degrees = (0..4).filter(|&p| h[p] != e[p]).collect();
                    return Err(Error::NotExceptional { i, j, degrees });
                }
            }
            out[i][j] = pairing;
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Left,
    Right,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MutationResult {
    pub direction: Direction,
    pub input: (String, String),
    pub class: KClass,
    pub rank: i64,
    pub hom_dim: u64,
    /// `Ext^{1..3}(e, f) = 0`, so the evaluation map is the only morphism data.
    pub verified: bool,
}

impl fmt::Display for MutationResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.direction {
            Direction::Right => format!("R_{}({})", self.input.1, self.input.0),
            Direction::Left => format!("L_{}({})", self.input.0, self.input.1),
        };
        write!(
            f,
            "{name}: class {} rank {} (Hom dimension {}, {})",
            self.class,
            self.rank,
            self.hom_dim,
            if self.verified { "Ext-orthogonal" } else { "higher Ext present or unknown" }
        )
    }
}

fn hom_data(e: &Sheaf, f: &Sheaf) -> Result<(u64, bool)> {
    let fs = ext_feasible(e, f)?;
    let homs: std::collections::BTreeSet<u64> = fs.iter().map(|h| h[0]).collect();
    if homs.len() != 1 {
        let bounds = crate::sheaf::bounds_of(&fs);
        return Err(Error::AmbiguousLongExactSequence { label: format!("Hom({}, {})", e.label(), f.label()), bounds });
    }
    let hom = *homs.iter().next().unwrap();
    if hom == 0 {
        return Err(Error::NoMorphisms { source_label: e.label(), target: f.label() });
    }
    let verified = fs.iter().all(|h| h[1] == 0 && h[2] == 0 && h[3] == 0);
    Ok((hom, verified))
}

/// `R_F(E) = coker(E -> Hom(E, F)^* (x) F)`, class `hom [F] - [E]`.
pub fn right_mutation(e: &Sheaf, f: &Sheaf) -> Result<MutationResult> {
    let (hom, verified) = hom_data(e, f)?;
    let class = f.k_class()?.scale(hom as i64).sub(&e.k_class()?);
    Ok(MutationResult { direction: Direction::Right, input: (e.label(), f.label()), rank: class.rank(), class, hom_dim: hom, verified })
}

/// `L_E(F) = ker(Hom(E, F) (x) E -> F)`, class `hom [E] - [F]`.
pub fn left_mutation(e: &Sheaf, f: &Sheaf) -> Result<MutationResult> {
    let (hom, verified) = hom_data(e, f)?;
    let class = e.k_class()?.scale(hom as i64).sub(&f.k_class()?);
    Ok(MutationResult { direction: Direction::Left, input: (e.label(), f.label()), rank: class.rank(), class, hom_dim: hom, verified })
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &str, passed: bool, detail: String) -> Check {
    Check { name: name.to_string(), passed, detail }
}

#[derive(Debug, Clone, Serialize)]
pub struct HelixReport {
    pub checks: Vec<Check>,
}

impl HelixReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn outcome<T>(r: Result<T>, f: impl FnOnce(T) -> (bool, String)) -> (bool, String) {
    match r {
        Ok(v) => f(v),
        Err(e) => (false, e.to_string()),
    }
}

/// The mutations and sequences that assemble the helix, checked on rank, `c_1`,
/// class and Ext-orthogonality, plus exceptionality of the mutated collection.
pub fn verify_helix() -> HelixReport {
    use crate::library::{e_42, e_9, omega_1};
    let b = |e: BundleExpr| Sheaf::Bundle(e);
    let (u, qd, o) = (BundleExpr::u(), BundleExpr::q().dual(), BundleExpr::o(0));
    let mut checks = Vec::new();

    let engine = Engine::shared();
    for (name, e, f, want) in [
        ("H^0(O(1)) = Y_6", o.clone(), BundleExpr::o(1), Sl2Character::y(6)),
        ("H^0(U*) = Y_4", o.clone(), u.clone().dual(), Sl2Character::y(4)),
        ("Hom(U, Q*) = Y_2", u.clone(), qd.clone(), Sl2Character::y(2)),
    ] {
        let (ok, detail) =
            outcome(engine.hom_ext_full(&e, &f), |h| (h.sl2[0] == want && h.dims[1..] == [0, 0, 0], format!("{}", h.sl2[0])));
        checks.push(check(name, ok, detail));
    }

    let (ok, detail) = outcome(right_mutation(&b(BundleExpr::o(-1)), &b(u.clone())), |m| {
        (m.verified && m.rank == 9 && m.class.c1() == -4 && Ok(m.class) == e_9().k_class(), m.to_string())
    });
    checks.push(check("E_9 = R_U(O(-1)): rank 9, c1 = -4", ok, detail));

    let (ok, detail) = outcome(right_mutation(&e_9(), &b(qd.clone())), |m| {
        let omega = omega_1().k_class();
        (m.verified && m.rank == 6 && m.class.c1() == -1 && Ok(m.class) == omega, m.to_string())
    });
    checks.push(check("E_6 = R_Q*(E_9) = Omega(1)|V5: rank 6, c1 = -1", ok, detail));

    let (ok, detail) = outcome(right_mutation(&b(u.clone().twist(-1)), &b(u.clone())), |m| {
        (m.verified && m.rank == 42 && m.hom_dim == 22 && Ok(m.class) == e_42().k_class(), m.to_string())
    });
    checks.push(check("E_42 = R_U(U(-1)): rank 42", ok, detail));

    let (ok, detail) =
        outcome(left_mutation(&e_9(), &b(qd.clone())), |m| (m.verified && m.rank == 42 && Ok(m.class) == e_42().k_class(), m.to_string()));
    checks.push(check("E_42 = L_E_9(Q*): 42 = 45 - 3", ok, detail));

    let (ok, detail) = outcome(left_mutation(&b(u.clone()), &b(qd.clone())), |m| {
        (m.verified && m.rank == 3 && Ok(m.class) == k_of_expr(&BundleExpr::q().twist(-1)), m.to_string())
    });
    checks.push(check("Q(-1) = L_U(Q*): 3 = 6 - 3", ok, detail));

    for (name, c) in
        [("standard collection exceptional", ExcCollection::standard()), ("mutated collection exceptional", ExcCollection::mutated())]
    {
        let (ok, detail) = outcome(gram_matrix(&c), |g| (true, format!("{g:?}")));
        checks.push(check(name, ok, detail));
    }
    HelixReport { checks }
}

#[derive(Debug, Clone, Serialize)]
pub struct SequenceCheck {
    pub passed: bool,
    /// Alternating sum of the classes; zero for an exact sequence.
    pub residual: KClass,
    /// `(t, alternating sum of chi(A_i(t)))` for `t` in `[-3, 3]`.
    pub chi_residuals: Vec<(i64, i64)>,
}

/// Numerical exactness of `0 -> A_1 -> ... -> A_n -> 0`, given as `(multiplicity, sheaf)` in order.
pub fn verify_sequence(terms: &[(i64, Sheaf)]) -> Result<SequenceCheck> {
    let mut residual = KClass::zero();
    let mut chi_residuals = Vec::new();
    for t in -3..=3 {
        chi_residuals.push((t, 0));
    }
    for (pos, (m, s)) in terms.iter().enumerate() {
        let sign = if pos % 2 == 0 { *m } else { -*m };
        residual = residual.add(&s.k_class()?.scale(sign));
        for (t, acc) in chi_residuals.iter_mut() {
            *acc += sign * crate::sheaf::chi_twisted(s, *t)?;
        }
    }
    let passed = residual.is_zero() && chi_residuals.iter().all(|(_, r)| *r == 0);
    Ok(SequenceCheck { passed, residual, chi_residuals })
}

/// `h^i(F (x) G^j)` stored as `table[i][j]`.
pub type BeilinsonTable = [[u64; 4]; 4];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    /// Terms are copies of `G_j`.
    Collection,
    /// Terms are copies of `G^j`.
    Dual,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComplexShape {
    pub basis: Basis,
    /// Degree `k` to `(multiplicity, j)`.
    pub terms: BTreeMap<i64, Vec<(u64, usize)>>,
}

impl ComplexShape {
    pub fn generator(&self, j: usize) -> BundleExpr {
        match self.basis {
            Basis::Collection => collection_g()[j].clone(),
            Basis::Dual => dual_collection_g()[j].clone(),
        }
    }

    pub fn generator_label(&self, j: usize) -> String {
        self.generator(j).canonical().to_string()
    }

    pub fn k_sum(&self) -> Result<KClass> {
        let mut acc = KClass::zero();
        for (k, items) in &self.terms {
            let sign = if k % 2 == 0 { 1 } else { -1 };
            for (m, j) in items {
                acc = acc.add(&k_of_expr(&self.generator(*j))?.scale(sign * *m as i64));
            }
        }
        Ok(acc)
    }

    /// `(degree, generator index)` when the complex is a single copy of one generator.
    pub fn single_term(&self) -> Option<(i64, usize)> {
        let mut all = self.terms.iter().flat_map(|(k, v)| v.iter().map(move |(m, j)| (*k, *m, *j)));
        match (all.next(), all.next()) {
            (Some((k, 1, j)), None) => Some((k, j)),
            _ => None,
        }
    }
}

impl fmt::Display for ComplexShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, items) in &self.terms {
            if !first {
                writeln!(f)?;
            }
            first = false;
            let parts: Vec<String> = items
                .iter()
                .map(|(m, j)| if *m == 1 { self.generator_label(*j) } else { format!("{m} {}", self.generator_label(*j)) })
                .collect();
            write!(f, "degree {k}: {}", parts.join(" + "))?;
        }
        Ok(())
    }
}

fn shape(basis: Basis, entries: impl Iterator<Item = (i64, u64, usize)>) -> ComplexShape {
    let mut terms: BTreeMap<i64, Vec<(u64, usize)>> = BTreeMap::new();
    for (k, m, j) in entries {
        if m > 0 {
            terms.entry(k).or_default().push((m, j));
        }
    }
    for v in terms.values_mut() {
        v.sort_by_key(|(_, j)| std::cmp::Reverse(*j));
    }
    ComplexShape { basis, terms }
}

/// `C_F^k = sum_{i-j=k} H^i(F (x) G^j) (x) G_j`, and the complex
/// `D_{F*(-1)}^k = sum_{i-j=k} H^i(F*(-1) (x) G_j) (x) G^j` read off the same table by
/// Serre duality; termwise it is `C_F(1)*` because `G^j = G_{3-j}(1)*`.
pub fn beilinson_terms(table: &BeilinsonTable) -> (ComplexShape, ComplexShape) {
    let idx = || (0..4usize).flat_map(|i| (0..4usize).map(move |j| (i, j)));
    let c = shape(Basis::Collection, idx().map(|(i, j)| (i as i64 - j as i64, table[i][j], j)));
    // H^i(F*(-1) (x) G_j) = H^{3-i}(F (x) G^{3-j})
    let d = shape(Basis::Dual, idx().map(|(i, j)| (i as i64 - j as i64, table[3 - i][3 - j], j)));
    (c, d)
}

/// Cohomology table of `F` against the dual collection.
pub fn beilinson_table(f: &Sheaf) -> Result<BeilinsonTable> {
    let mut t = [[0; 4]; 4];
    for (j, g) in dual_collection_g().into_iter().enumerate() {
        let h = crate::sheaf::cohomology(&f.tensor(&Sheaf::Bundle(g))?)?;
        for i in 0..4 {
            t[i][j] = h[i];
        }
    }
    Ok(t)
}

/// Table against the collection itself, `h^i(F (x) G_j)`.
pub fn beilinson_table_lower(f: &Sheaf) -> Result<BeilinsonTable> {
    let mut t = [[0; 4]; 4];
    for (j, g) in collection_g().into_iter().enumerate() {
        let h = crate::sheaf::cohomology(&f.tensor(&Sheaf::Bundle(g))?)?;
        for i in 0..4 {
            t[i][j] = h[i];
        }
    }
    Ok(t)
}

#[derive(Debug, Clone, Serialize)]
pub struct BeilinsonOutput {
    pub table: BeilinsonTable,
    pub c: ComplexShape,
    pub d: ComplexShape,
}

/// Beilinson complex of a sheaf; fails with `InconsistentTable` unless the K-class of
/// `C_F` is the class of `F`.
pub fn beilinson_for(f: &Sheaf) -> Result<BeilinsonOutput> {
    let table = beilinson_table(f)?;
    let (c, d) = beilinson_terms(&table);
    let k = c.k_sum()?;
    if k != f.k_class()? {
        return Err(Error::InconsistentTable(format!("alternating class of C_F is {k}, expected {}", f.k_class()?)));
    }
    Ok(BeilinsonOutput { table, c, d })
}

/// Compares the Serre-dual reading of `D` with `D_{F*(-1)}` computed directly.
pub fn beilinson_duality_check(f: &Sheaf) -> Result<bool> {
    let (_, d) = beilinson_terms(&beilinson_table(f)?);
    let g = f.dual()?.twist(-1);
    let lower = beilinson_table_lower(&g)?;
    let direct =
        shape(Basis::Dual, (0..4usize).flat_map(|i| (0..4usize).map(move |j| (i, j))).map(|(i, j)| (i as i64 - j as i64, lower[i][j], j)));
    Ok(d == direct && d.k_sum()? == g.k_class()?)
}

/// Parses a table as printed: four rows `h^3` down to `h^0`, columns `G^3 .. G^0`.
pub fn parse_table(text: &str) -> Result<BeilinsonTable> {
    let rows: Vec<Vec<u64>> = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .map(|l| {
            l.split(|c: char| c.is_whitespace() || c == ',')
                .filter(|x| !x.is_empty())
                .map(|x| x.parse::<u64>().map_err(|_| Error::InconsistentTable(format!("bad entry {x:?}"))))
                .collect()
        })
        .collect::<Result<_>>()?;
    if rows.len() != 4 || rows.iter().any(|r| r.len() != 4) {
        return Err(Error::InconsistentTable("expected 4 rows of 4 entries".into()));
    }
    let mut t = [[0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            t[i][j] = rows[3 - i][3 - j];
        }
    }
    Ok(t)
}

#[derive(Debug, Clone, Serialize)]
pub struct DifferentialSpace {
    /// Degree of the source term.
    pub from_degree: i64,
    pub dim: u64,
    pub character: Sl2Character,
    /// Multiplicity of the trivial representation.
    pub invariants: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct DiagonalCheck {
    /// `(degree, left factor, right factor)`, degree `-k` holding `G_k (x) G^k`.
    pub terms: Vec<(i64, String, String)>,
    pub involution_ok: bool,
    pub differentials: Vec<DifferentialSpace>,
    /// Hom from the degree -3 term to the degree -1 term.
    pub skip: DifferentialSpace,
    pub passed: bool,
    pub failures: Vec<String>,
}

fn same_bundle(a: &BundleExpr, b: &BundleExpr) -> Result<bool> {
    Ok(crate::engine::normalize(a)? == crate::engine::normalize(b)?)
}

fn box_hom(from: (&BundleExpr, &BundleExpr), to: (&BundleExpr, &BundleExpr), from_degree: i64) -> Result<DifferentialSpace> {
    let engine = Engine::shared();
    let left = engine.hom_ext_full(from.0, to.0)?.sl2[0].clone();
    let right = engine.hom_ext_full(from.1, to.1)?.sl2[0].clone();
    let character = sl2_tensor(&left, &right);
    Ok(DifferentialSpace { from_degree, dim: character.dim(), invariants: character.multiplicity(0), character })
}

/// The resolution of the diagonal as a list of box products, checked for the
/// self-duality "dualize both factors, shift by 3, twist by (-1,-1), swap" and for
/// a unique invariant in each differential's Hom space.
pub fn diagonal_selfduality_check() -> Result<DiagonalCheck> {
    let low = collection_g();
    let up = dual_collection_g();
    let mut failures = Vec::new();
    let terms: Vec<(i64, String, String)> =
        (0..4).rev().map(|k| (-(k as i64), low[k].canonical().to_string(), up[k].canonical().to_string())).collect();

    let mut involution_ok = true;
    for k in 0..4usize {
        // degree -k goes to degree k - 3 = -(3 - k)
        let a = up[k].clone().dual().twist(-1);
        let b = low[k].clone().dual().twist(-1);
        let m = 3 - k;
        if !(same_bundle(&a, &low[m])? && same_bundle(&b, &up[m])?) {
            involution_ok = false;
            failures.push(format!("term in degree -{k} does not map to the term in degree -{m}"));
        }
    }

    let mut differentials = Vec::new();
    for k in (1..4usize).rev() {
        let d = box_hom((&low[k], &up[k]), (&low[k - 1], &up[k - 1]), -(k as i64))?;
        if d.invariants != 1 {
            failures.push(format!("differential from degree -{k} has {} invariants", d.invariants));
        }
        differentials.push(d);
    }
    let skip = box_hom((&low[3], &up[3]), (&low[1], &up[1]), -3)?;
    if skip.invariants != 0 {
        failures.push("a nonzero invariant map skips a term".into());
    }
    let dims: Vec<u64> = differentials.iter().map(|d| d.dim).collect();
    if dims != [25, 9, 25] {
        failures.push(format!("differential Hom dimensions {dims:?}"));
    }
    Ok(DiagonalCheck { terms, involution_ok, differentials, skip, passed: failures.is_empty(), failures })
}

/// Riemann-Roch consistency of a Beilinson table with a class: column `j` must have
/// alternating sum `chi(F (x) G^j)`.
pub fn table_matches_class(table: &BeilinsonTable, class: &KClass) -> Result<bool> {
    for (j, g) in dual_collection_g().iter().enumerate() {
        let chi = chi_of_ch(&(class.ch() * ch(g)))?;
        let alt: i64 = (0..4).map(|i| if i % 2 == 0 { table[i][j] as i64 } else { -(table[i][j] as i64) }).sum();
        if chi != alt {
            return Ok(false);
        }
    }
    Ok(true)
}
