//! Splitting criteria, cohomological characterizations of `U`, `Q` and `O`, and the
//! presentation calculus for semistable aCM bundles.

use std::fmt;

use serde::Serialize;

use crate::chow::{ch_line, rat, rat_serde, ChernData, KClass, Rat};
use crate::engine::{intermediate_failures, scan_window, AcmVerdict, CohTable, Engine};
use crate::error::{Error, Result};
use crate::expr::BundleExpr;
use crate::sheaf::{cohomology, Sheaf};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SlopeData {
    pub rank: i64,
    pub c1: i64,
    #[serde(with = "rat_serde")]
    pub mu: Rat,
    pub normalized: bool,
}

pub fn slope(d: &ChernData) -> Result<SlopeData> {
    if d.rank < 1 {
        return Err(Error::ZeroRank);
    }
    Ok(SlopeData { rank: d.rank, c1: d.c1, mu: rat(d.c1 as i128, d.rank as i128), normalized: -d.rank < d.c1 && d.c1 <= 0 })
}

/// The unique twist `n` with `-r < c1 + n r <= 0`, and the twisted data.
pub fn normalize_twist(d: &ChernData) -> Result<(i64, ChernData)> {
    if d.rank < 1 {
        return Err(Error::ZeroRank);
    }
    let n = -num_integer::Integer::div_ceil(&d.c1, &d.rank);
    Ok((n, d.twisted(n)?))
}

/// A failing vanishing condition: `h^p` of the named bundle at twist `t`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub criterion: String,
    pub t: i64,
    pub value: u64,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {} at t = {}", self.criterion, self.value, self.t)
    }
}

/// One vanishing family `h^p(E (x) A (t)) = 0`.
#[derive(Debug, Clone)]
struct Condition {
    p: usize,
    partner: Option<BundleExpr>,
    name: &'static str,
}

fn cond(p: usize, partner: Option<BundleExpr>, name: &'static str) -> Condition {
    Condition { p, partner, name }
}

fn twisted_with(e: &Sheaf, partner: &Option<BundleExpr>, t: i64) -> Result<Sheaf> {
    Ok(match partner {
        Some(a) => e.tensor(&Sheaf::Bundle(a.clone()))?.twist(t),
        None => e.twist(t),
    })
}

fn scan_conditions(e: &Sheaf, conds: &[Condition], lo: i64, hi: i64) -> Result<Vec<Witness>> {
    scan_window(lo, hi, |t| {
        let mut out = Vec::new();
        let mut pending = None;
        for c in conds {
            match cohomology(&twisted_with(e, &c.partner, t)?) {
                Ok(h) => {
                    if h[c.p] != 0 {
                        out.push(Witness { criterion: c.name.to_string(), t, value: h[c.p] });
                    }
                }
                Err(err @ (Error::AmbiguousSpectralSequence { .. } | Error::AmbiguousLongExactSequence { .. })) => pending = Some(err),
                Err(err) => return Err(err),
            }
        }
        match pending {
            Some(err) if out.is_empty() => Err(err),
            _ => Ok(out),
        }
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub passed: bool,
    pub witnesses: Vec<Witness>,
}

fn verdict(witnesses: Vec<Witness>) -> Verdict {
    Verdict { passed: witnesses.is_empty(), witnesses }
}

fn split_conditions() -> Vec<Condition> {
    vec![cond(1, Some(BundleExpr::q().dual()), "h^1(E (x) Q*(t))"), cond(2, Some(BundleExpr::u()), "h^2(E (x) U(t))")]
}

/// `E` splits iff `h^1(E (x) Q*(t)) = h^2(E (x) U(t)) = 0` for all `t`; checked over the window.
pub fn split_check(e: &Sheaf, lo: i64, hi: i64) -> Result<Verdict> {
    Ok(verdict(scan_conditions(e, &split_conditions(), lo, hi)?))
}

/// The same criterion read from precomputed tables of `E (x) Q*` and `E (x) U`.
pub fn split_check_tables(with_q_dual: &CohTable, with_u: &CohTable) -> Result<Verdict> {
    let lo = with_q_dual.lo.max(with_u.lo);
    let hi = with_q_dual.hi.min(with_u.hi);
    let w = scan_window(lo, hi, |t| {
        let mut out = Vec::new();
        let (a, b) = (with_q_dual.column(t).unwrap(), with_u.column(t).unwrap());
        if a[1] != 0 {
            out.push(Witness { criterion: "h^1(E (x) Q*(t))".into(), t, value: a[1] });
        }
        if b[2] != 0 {
            out.push(Witness { criterion: "h^2(E (x) U(t))".into(), t, value: b[2] });
        }
        Ok(out)
    })?;
    Ok(verdict(w))
}

/// aCM test for any sheaf with computable twists.
pub fn is_acm(e: &Sheaf, lo: i64, hi: i64) -> Result<AcmVerdict> {
    if let Sheaf::Bundle(b) = e {
        return Engine::shared().is_acm(b, lo, hi);
    }
    let witnesses = scan_window(lo, hi, |t| Ok(intermediate_failures(&cohomology(&e.twist(t))?, t)))?;
    Ok(AcmVerdict { acm: witnesses.is_empty(), witnesses })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Mode {
    /// `U(a)` or `O(a)`.
    UorO,
    /// `O(a)` or `Q*(a)`.
    QorO,
    /// `U(a)`, `O(a)` or `Q(a)`.
    UorQorO,
}

impl std::str::FromStr for Mode {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "uoro" => Ok(Mode::UorO),
            "qoro" => Ok(Mode::QorO),
            "uorqoro" => Ok(Mode::UorQorO),
            _ => Err(format!("unknown mode {s:?} (expected UorO, QorO or UorQorO)")),
        }
    }
}

impl Mode {
    fn conditions(self) -> Vec<Condition> {
        let u = Some(BundleExpr::u());
        let q = Some(BundleExpr::q());
        let mut c = vec![cond(1, None, "h^1(E(t))"), cond(2, None, "h^2(E(t))")];
        match self {
            Mode::UorO => {
                c.push(cond(1, u.clone(), "h^1(U (x) E(t))"));
                c.push(cond(2, u, "h^2(U (x) E(t))"));
            }
            Mode::QorO => {
                c.push(cond(1, q.clone(), "h^1(Q (x) E(t))"));
                c.push(cond(2, q, "h^2(Q (x) E(t))"));
            }
            Mode::UorQorO => c.push(cond(1, u, "h^1(U (x) E(t))")),
        }
        c
    }

    pub fn candidates(self) -> Vec<&'static str> {
        match self {
            Mode::UorO => vec!["U(a)", "O(a)"],
            Mode::QorO => vec!["O(a)", "Q*(a)"],
            Mode::UorQorO => vec!["U(a)", "O(a)", "Q(a)"],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Characterization {
    pub mode: Mode,
    pub satisfied: bool,
    /// What an indecomposable sheaf with positive-dimensional support must then be.
    pub candidates: Vec<String>,
    pub witnesses: Vec<Witness>,
}

pub fn characterize(e: &Sheaf, mode: Mode, lo: i64, hi: i64) -> Result<Characterization> {
    let witnesses = scan_conditions(e, &mode.conditions(), lo, hi)?;
    let satisfied = witnesses.is_empty();
    let candidates = if satisfied { mode.candidates().into_iter().map(String::from).collect() } else { Vec::new() };
    Ok(Characterization { mode, satisfied, candidates, witnesses })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Residual {
    /// Everything was extracted as line bundles.
    Empty,
    /// The remaining part has no sections anywhere in the window.
    NoSections,
    /// An extraction step would exceed the remaining rank; the splitting hypothesis fails.
    Obstructed(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HorrocksDecomposition {
    /// The splitting hypothesis over the window.
    pub hypothesis: Verdict,
    /// `(multiplicity, d)` for summands `O(d)^multiplicity`.
    pub summands: Vec<(u64, i64)>,
    pub residual_rank: i64,
    pub residual: Residual,
}

/// Repeatedly splits off `H^0(E(t0)) (x) O(-t0)` at the first twist `t0` with sections,
/// tracking sections of the remainder through the table of `E`.
pub fn horrocks_decompose(e: &Sheaf, lo: i64, hi: i64) -> Result<HorrocksDecomposition> {
    let hypothesis = split_check(e, lo, hi)?;
    let mut h0 = Vec::new();
    for t in lo..=hi {
        h0.push(cohomology(&e.twist(t))?[0] as i64);
    }
    let h0_line = |d: i64| -> Result<i64> { Ok(Engine::shared().v5_cohomology(&BundleExpr::o(d))?[0] as i64) };
    let mut summands: Vec<(u64, i64)> = Vec::new();
    let mut rank = e.rank();
    let residual = loop {
        if rank == 0 {
            break Residual::Empty;
        }
        let mut remaining = Vec::new();
        for (i, t) in (lo..=hi).enumerate() {
            let mut v = h0[i];
            for (m, d) in &summands {
                v -= *m as i64 * h0_line(t + d)?;
            }
            remaining.push(v);
        }
        let Some(i) = remaining.iter().position(|&v| v != 0) else {
            break Residual::NoSections;
        };
        if i == 0 {
            return Err(Error::WindowTooNarrow { lo, hi, reason: "sections already at the lower end".into() });
        }
        let m = remaining[i];
        let t0 = lo + i as i64;
        if m < 0 || m > rank {
            break Residual::Obstructed(format!("{m} new sections at t = {t0} with remaining rank {rank}"));
        }
        summands.push((m as u64, -t0));
        rank -= m;
    };
    Ok(HorrocksDecomposition { hypothesis, summands, residual_rank: rank, residual })
}

/// Which bundle a presentation row describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Form {
    /// `E = U^u + coker(U^a -> Q*^b + O^c)`.
    Direct,
    /// The row presents `E*(-1)`, which is normalized with `c1 > -r/2` when `E` is not.
    Dual,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Presentation {
    pub u: u64,
    pub a: u64,
    pub b: u64,
    pub c: u64,
    pub form: Form,
    /// Chern data of `E` itself (after undoing the dual form).
    pub chern: ChernData,
    /// Bundle the row is known to describe, or `None` for a numeric candidate.
    pub known: Option<String>,
}

impl Presentation {
    /// Class of `U^u + Q*^b + O^c - U^a`, the presented bundle before any dualizing.
    pub fn direct_class(&self) -> KClass {
        let (u, a, b, c) = (self.u as i64, self.a as i64, self.b as i64, self.c as i64);
        KClass([0, u - a, b, c])
    }

    pub fn rank(&self) -> i64 {
        self.chern.rank
    }

    /// The terms `0 -> U^a -> Q*^b + O^c + U^u -> E -> 0` for sequence checks.
    pub fn sequence(&self, e: Sheaf) -> Vec<(i64, Sheaf)> {
        let mut mid = Vec::new();
        for (m, x) in [(self.b, BundleExpr::q().dual()), (self.c, BundleExpr::o(0)), (self.u, BundleExpr::u())] {
            if m > 0 {
                mid.push((m, Sheaf::Bundle(x)));
            }
        }
        vec![(self.a as i64, Sheaf::Bundle(BundleExpr::u())), (1, Sheaf::Sum(mid)), (1, e)]
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(u,a,b,c) = ({},{},{},{})", self.u, self.a, self.b, self.c)?;
        if self.form == Form::Dual {
            write!(f, " for E*(-1)")?;
        }
        write!(f, "  c2 = {} c3 = {}", self.chern.c2, self.chern.c3)?;
        match &self.known {
            Some(k) => write!(f, "  {k}"),
            None => write!(f, "  numeric candidate"),
        }
    }
}

fn known_bundle(rank: i64, c1: i64, t: (u64, u64, u64, u64)) -> Option<&'static str> {
    Some(match (rank, c1, t) {
        (1, 0, (0, 0, 0, 1)) => "O",
        (2, -1, (1, 0, 0, 0)) => "U",
        (2, 0, (0, 0, 0, 2)) => "O^2",
        (2, 0, (0, 1, 1, 1)) => "E_L",
        (2, 0, (0, 2, 2, 0)) => "E_S",
        (3, -1, (0, 0, 1, 0)) => "Q*",
        (3, -2, (0, 0, 1, 0)) => "Q(-1)",
        (3, 0, (0, 0, 0, 3)) => "O^3",
        (3, 0, (0, 1, 1, 2)) => "O + E_L",
        (3, 0, (0, 2, 2, 1)) => "O + E_S",
        (3, 0, (0, 3, 3, 0)) => "Sym2(U)(1) or a deformation",
        (4, 0, (0, 4, 4, 0)) => "E_4^S (one family among these invariants)",
        _ => return None,
    })
}

fn chern_of(p_class: &KClass, form: Form) -> Result<ChernData> {
    let x = p_class.ch();
    let x = match form {
        Form::Direct => x,
        Form::Dual => x.dual() * ch_line(-1),
    };
    ChernData::from_ch(&x)
}

/// All `(u, a, b, c)` allowed for a normalized aCM semistable bundle of the given rank and `c1`.
///
/// For `c1 > -r/2` the presentation is direct with `u = 0` and `c = 0` unless `c1 = 0`;
/// for `c1 = -r/2` the bundle is `U^{r/2}`; for `c1 < -r/2` the rows present `E*(-1)`.
pub fn enumerate_presentations(rank: i64, c1: i64) -> Result<Vec<Presentation>> {
    if rank < 1 {
        return Err(Error::ZeroRank);
    }
    if !(-rank < c1 && c1 <= 0) {
        return Err(Error::NotNormalized { rank, c1 });
    }
    let mut out = Vec::new();
    let mut push = |u: u64, a: u64, b: u64, c: u64, form: Form| -> Result<()> {
        let mut p = Presentation { u, a, b, c, form, chern: ChernData::new(0, 0, 0, 0), known: None };
        p.chern = chern_of(&p.direct_class(), form)?;
        p.known = known_bundle(rank, c1, (u, a, b, c)).map(String::from);
        out.push(p);
        Ok(())
    };
    if 2 * c1 == -rank {
        push((rank / 2) as u64, 0, 0, 0, Form::Direct)?;
        return Ok(out);
    }
    let (form, d) = if 2 * c1 > -rank { (Form::Direct, c1) } else { (Form::Dual, -rank - c1) };
    // rank = 3b + c - 2a and d = a - b give b + c = rank + 2d
    let total = rank + 2 * d;
    let c_max = if d == 0 { total } else { 0 };
    for c in 0..=c_max.max(0) {
        let b = total - c;
        let a = b + d;
        if b >= 0 && a >= 0 {
            push(0, a as u64, b as u64, c as u64, form)?;
        }
    }
    Ok(out)
}

/// Reads `(a, b, c)` off the cohomology of an aCM normalized bundle expression.
pub fn acm_presentation(e: &BundleExpr, lo: i64, hi: i64) -> Result<Presentation> {
    let engine = Engine::shared();
    let verdict = engine.is_acm(e, lo, hi)?;
    if !verdict.acm {
        return Err(Error::NotAcm { witnesses: verdict.witnesses });
    }
    let d = crate::chow::chern_data(e)?;
    if !(-d.rank < d.c1 && d.c1 <= 0) {
        return Err(Error::NotNormalized { rank: d.rank, c1: d.c1 });
    }
    let a = engine.v5_cohomology(&BundleExpr::q().twist(-1).tensor(e.clone()))?[1];
    let b = engine.v5_cohomology(&BundleExpr::u().tensor(e.clone()))?[1];
    let c = engine.v5_cohomology(e)?[0];
    let twice_u = d.rank - 3 * b as i64 - c as i64 + 2 * a as i64;
    if twice_u < 0 || twice_u % 2 != 0 {
        return Err(Error::Internal(format!("rank bookkeeping fails for (a,b,c) = ({a},{b},{c})")));
    }
    let u = (twice_u / 2) as u64;
    let mut p = Presentation { u, a, b, c, form: Form::Direct, chern: d, known: None };
    let rebuilt = chern_of(&p.direct_class(), Form::Direct)?;
    let check = crate::derived::verify_sequence(&p.sequence(Sheaf::Bundle(e.clone())))?;
    if rebuilt != d || !check.passed {
        return Err(Error::Internal(format!("presentation {p} does not reproduce the Chern data of {e}")));
    }
    p.known = known_bundle(d.rank, d.c1, (u, a, b, c)).map(String::from);
    Ok(p)
}

/// `(a, b, c) = (h^1(Q(-1) (x) E), h^1(U (x) E), h^0(E))` for any computable sheaf.
pub fn presentation_numbers(e: &Sheaf) -> Result<(u64, u64, u64)> {
    let a = cohomology(&e.tensor(&Sheaf::Bundle(BundleExpr::q().twist(-1)))?)?[1];
    let b = cohomology(&e.tensor(&Sheaf::Bundle(BundleExpr::u()))?)?[1];
    let c = cohomology(e)?[0];
    Ok((a, b, c))
}

/// A dimension that the long exact sequences bound, pinned by an explicit extra hypothesis if needed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Pinned {
    pub value: u64,
    /// Certified range of `h^0` and `h^1` before the hypothesis.
    pub h0_range: (u64, u64),
    pub h1_range: (u64, u64),
    pub chi: i64,
    pub hypothesis: Option<String>,
}

impl fmt::Display for Pinned {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)?;
        if let Some(h) = &self.hypothesis {
            write!(
                f,
                " (certified: h^0 in [{}, {}], h^1 in [{}, {}], chi = {}; value assumes {h})",
                self.h0_range.0, self.h0_range.1, self.h1_range.0, self.h1_range.1, self.chi
            )?;
        }
        Ok(())
    }
}

/// `h^1` of `End(E)`, using `Hom(E, E) = k` only when the certified data do not fix it.
fn pin_h1_of_end(fs: &crate::sheaf::Feasible, chi: i64, simple_reason: &str) -> Result<Pinned> {
    let b = crate::sheaf::bounds_of(fs);
    let (h0_range, h1_range) = (b[0], b[1]);
    if fs.len() == 1 {
        let h = fs.iter().next().unwrap();
        return Ok(Pinned { value: h[1], h0_range, h1_range, chi, hypothesis: None });
    }
    let simple: Vec<&[u64; 4]> = fs.iter().filter(|h| h[0] == 1).collect();
    match simple.as_slice() {
        [h] => Ok(Pinned { value: h[1], h0_range, h1_range, chi, hypothesis: Some(simple_reason.to_string()) }),
        _ => Err(Error::AmbiguousLongExactSequence { label: "End".into(), bounds: b }),
    }
}

/// `Ext^1(E_S, E_S)`, the tangent space to the moduli of `E_S`.
pub fn elliptic_ext1() -> Result<Pinned> {
    let es = crate::library::e_elliptic();
    let fs = crate::sheaf::ext_feasible(&es, &es)?;
    let chi = es.dual()?.tensor(&es)?.chi()?;
    pin_h1_of_end(&fs, chi, "E_S stable, hence simple: Hom(E_S, E_S) = k")
}

/// `h^1(End(Sym2 U))`, the deformation space of `Sym2 U(t)` for any `t`.
pub fn sym2_deformations() -> Result<Pinned> {
    let s = BundleExpr::u().sym2();
    let end = Sheaf::Bundle(s.clone().dual().tensor(s.clone()));
    let mut fs = crate::sheaf::feasible(&end)?;
    fs.retain(|h| h[0] >= 1);
    let chi = end.chi()?;
    pin_h1_of_end(&fs, chi, "Sym2(U) stable, hence simple: Hom(Sym2 U, Sym2 U) = k")
}

/// Hilbert scheme of degree-7 elliptic curves as a projective bundle over the moduli of `E_S`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EllipticBookkeeping {
    /// `c_2(E_S(1))`.
    pub curve_degree: i64,
    /// `chi(N_S) = -K . S = 2 deg S` for an elliptic curve.
    pub hilbert_dim: i64,
    /// `h^0(E_S(1)) - 1`.
    pub fibre_dim: i64,
    pub moduli_dim: Pinned,
}

impl EllipticBookkeeping {
    pub fn consistent(&self) -> bool {
        self.hilbert_dim == self.fibre_dim + self.moduli_dim.value as i64
    }
}

pub fn elliptic_bookkeeping() -> Result<EllipticBookkeeping> {
    let es = crate::library::e_elliptic();
    let d = ChernData::from_ch(&es.ch())?.twisted(1)?;
    let sections = cohomology(&es.twist(1))?[0] as i64;
    Ok(EllipticBookkeeping { curve_degree: d.c2, hilbert_dim: 2 * d.c2, fibre_dim: sections - 1, moduli_dim: elliptic_ext1()? })
}

#[derive(Debug, Clone, Serialize)]
pub struct ReportRow {
    pub name: String,
    pub fields: Vec<(String, String)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub title: String,
    pub rows: Vec<ReportRow>,
    /// Enumerated presentations per `(rank, c1)`.
    pub tables: Vec<((i64, i64), Vec<Presentation>)>,
    pub notes: Vec<String>,
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.title)?;
        for r in &self.rows {
            writeln!(f, "\n{}", r.name)?;
            for (k, v) in &r.fields {
                writeln!(f, "  {k:<28} {v}")?;
            }
        }
        for ((r, c1), rows) in &self.tables {
            writeln!(f, "\npresentations, rank {r}, c1 = {c1}:")?;
            for p in rows {
                writeln!(f, "  {p}")?;
            }
        }
        if !self.notes.is_empty() {
            writeln!(f)?;
            for n in &self.notes {
                writeln!(f, "note: {n}")?;
            }
        }
        Ok(())
    }
}

const REPORT_WINDOW: (i64, i64) = (-6, 6);

fn show<T: fmt::Display>(r: Result<T>) -> String {
    match r {
        Ok(v) => v.to_string(),
        Err(e) => format!("undetermined ({e})"),
    }
}

fn acm_field(e: &Sheaf) -> String {
    let (lo, hi) = REPORT_WINDOW;
    match is_acm(e, lo, hi) {
        Ok(v) if v.acm => format!("yes (window [{lo}, {hi}])"),
        Ok(v) => format!("no {:?}", v.witnesses),
        Err(e) => format!("undetermined ({e})"),
    }
}

fn chern_field(e: &Sheaf) -> String {
    show(ChernData::from_ch(&e.ch()).map(|d| format!("rank {} c1 {} c2 {} c3 {}", d.rank, d.c1, d.c2, d.c3)))
}

fn numbers_field(e: &Sheaf) -> String {
    let dual_form = ChernData::from_ch(&e.ch()).map(|d| 2 * d.c1 < -d.rank).unwrap_or(false);
    if dual_form {
        let f = e.dual().map(|d| d.twist(-1));
        return show(f.and_then(|f| presentation_numbers(&f)).map(|(a, b, c)| format!("(a,b,c) = ({a},{b},{c}) for E*(-1)")));
    }
    show(presentation_numbers(e).map(|(a, b, c)| format!("(a,b,c) = ({a},{b},{c})")))
}

fn row(name: &str, fields: Vec<(&str, String)>) -> ReportRow {
    ReportRow { name: name.to_string(), fields: fields.into_iter().map(|(k, v)| (k.to_string(), v)).collect() }
}

pub fn rank2_report() -> Report {
    use crate::library::{e_elliptic, e_line};
    let u = Sheaf::Bundle(BundleExpr::u());
    let (el, es) = (e_line(), e_elliptic());
    let mut rows = Vec::new();

    rows.push(row(
        "E_L (section vanishing on a line)",
        vec![
            ("Chern data", chern_field(&el)),
            ("h^0(E_L)", show(cohomology(&el).map(|h| h[0]))),
            ("aCM", acm_field(&el)),
            ("presentation", numbers_field(&el)),
            ("moduli", "P^2, the Hilbert scheme of lines (not recomputed)".into()),
        ],
    ));
    rows.push(row(
        "E_C = U (conic)",
        vec![
            ("Chern data", chern_field(&u)),
            ("Ext^1(U, U)", show(crate::sheaf::ext(&u, &u).map(|h| h[1]))),
            ("aCM", acm_field(&u)),
            ("presentation", numbers_field(&u)),
        ],
    ));
    let book = elliptic_bookkeeping();
    rows.push(row(
        "E_S (elliptic curve of degree 7)",
        vec![
            ("Chern data", chern_field(&es)),
            ("h^0(E_S(1))", show(cohomology(&es.twist(1)).map(|h| h[0]))),
            ("aCM", acm_field(&es)),
            ("presentation", numbers_field(&es)),
            ("Ext^1(E_S, E_S)", show(elliptic_ext1())),
            (
                "Hilbert scheme",
                show(book.map(|b| {
                    format!(
                        "dim {} = {} (fibre P^{}) + {} (moduli){}",
                        b.hilbert_dim,
                        b.fibre_dim,
                        b.fibre_dim,
                        b.moduli_dim.value,
                        if b.consistent() { "" } else { "  INCONSISTENT" }
                    )
                })),
            ),
        ],
    ));
    let tables = [(2, -1), (2, 0)].into_iter().filter_map(|(r, c)| Some(((r, c), enumerate_presentations(r, c).ok()?))).collect();
    Report {
        title: "aCM bundles of rank 2 on V5 (normalized)".into(),
        rows,
        tables,
        notes: vec!["Hilbert scheme dimension is chi(N_S) = 2 deg S for an elliptic curve S.".into()],
    }
}

pub fn rank3_report() -> Report {
    use crate::library::{e_elliptic, e_line};
    let o = || Sheaf::Bundle(BundleExpr::o(0));
    let sym = BundleExpr::u().sym2().twist(1);
    let entries: Vec<(&str, Sheaf)> = vec![
        ("(i) Q*", Sheaf::Bundle(BundleExpr::q().dual())),
        ("(i) Q(-1)", Sheaf::Bundle(BundleExpr::q().twist(-1))),
        ("(ii) O^3", Sheaf::Sum(vec![(3, o())])),
        ("(iii) O + E_L", Sheaf::Sum(vec![(1, o()), (1, e_line())])),
        ("(iv) O + E_S", Sheaf::Sum(vec![(1, o()), (1, e_elliptic())])),
        ("(v) Sym2(U)(1) or a deformation", Sheaf::Bundle(sym.clone())),
    ];
    let mut rows = Vec::new();
    for (name, e) in &entries {
        let mut fields = vec![("Chern data", chern_field(e)), ("aCM", acm_field(e)), ("presentation", numbers_field(e))];
        if let Sheaf::Bundle(b) = e {
            if b == &sym {
                let engine = Engine::shared();
                let ch1 = |x: BundleExpr| show(engine.v5_cohomology_full(&x.tensor(sym.clone())).map(|h| h.sl2[1].to_string()));
                fields.push(("H^1(U (x) E)", ch1(BundleExpr::u())));
                fields.push(("H^1(Q(-1) (x) E)", ch1(BundleExpr::q().twist(-1))));
                fields.push(("h^1(End E) (deformations)", show(sym2_deformations())));
            }
        }
        rows.push(row(name, fields));
    }
    let tables = [(3, -1), (3, -2), (3, 0)].into_iter().filter_map(|(r, c)| Some(((r, c), enumerate_presentations(r, c).ok()?))).collect();
    Report {
        title: "aCM semistable bundles of rank 3 on V5 (normalized)".into(),
        rows,
        tables,
        notes: vec![
            "Sym2(U)(1) and its deformations share every numeric invariant and are reported as one row.".into(),
            "End(Sym2(U)(t)) does not depend on t.".into(),
        ],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn tuples(v: &[Presentation]) -> BTreeSet<(u64, u64, u64, u64)> {
        v.iter().map(|p| (p.u, p.a, p.b, p.c)).collect()
    }

    // brute force over a box, reading rank and c1 off the Chern character
    fn brute(rank: i64, c1: i64) -> BTreeSet<(u64, u64, u64, u64)> {
        let mut out = BTreeSet::new();
        for u in 0..=10u64 {
            for a in 0..=10u64 {
                for b in 0..=10u64 {
                    for c in 0..=10u64 {
                        let class = KClass([0, u as i64 - a as i64, b as i64, c as i64]);
                        let dual = 2 * c1 < -rank;
                        let x = if dual { class.ch().dual() * ch_line(-1) } else { class.ch() };
                        let Ok(d) = ChernData::from_ch(&x) else { continue };
                        if d.rank != rank || d.c1 != c1 {
                            continue;
                        }
                        let balanced = 2 * c1 == -rank;
                        if balanced != (u > 0) || (balanced && a + b + c > 0) {
                            continue;
                        }
                        if c > 0 && c1 != 0 {
                            continue;
                        }
                        out.insert((u, a, b, c));
                    }
                }
            }
        }
        out
    }

    #[test]
    fn enumeration_matches_brute_force() {
        for rank in 1..=5 {
            for c1 in (1 - rank)..=0 {
                let e = enumerate_presentations(rank, c1).unwrap();
                assert_eq!(tuples(&e), brute(rank, c1), "rank {rank} c1 {c1}");
                for p in &e {
                    assert_eq!((p.chern.rank, p.chern.c1), (rank, c1));
                }
            }
        }
    }

    #[test]
    fn enumeration_examples() {
        let t = |r, c| tuples(&enumerate_presentations(r, c).unwrap());
        assert_eq!(t(3, -1), BTreeSet::from([(0, 0, 1, 0)]));
        assert_eq!(t(3, -2), BTreeSet::from([(0, 0, 1, 0)]));
        assert_eq!(t(2, -1), BTreeSet::from([(1, 0, 0, 0)]));
        assert_eq!(t(2, 0), BTreeSet::from([(0, 0, 0, 2), (0, 1, 1, 1), (0, 2, 2, 0)]));
        let r3 = enumerate_presentations(3, 0).unwrap();
        assert_eq!(r3.len(), 4);
        assert!(r3.iter().all(|p| p.a == p.b && p.known.is_some()));
        assert!(matches!(enumerate_presentations(2, 1), Err(Error::NotNormalized { .. })));
    }

    #[test]
    fn presentations_of_bundles() {
        let sym = BundleExpr::u().sym2().twist(1);
        let p = acm_presentation(&sym, -5, 5).unwrap();
        assert_eq!((p.u, p.a, p.b, p.c), (0, 3, 3, 0));
        let p = acm_presentation(&BundleExpr::u(), -5, 5).unwrap();
        assert_eq!((p.u, p.a, p.b, p.c), (1, 0, 0, 0));
        let p = acm_presentation(&BundleExpr::o(0), -5, 5).unwrap();
        assert_eq!((p.u, p.a, p.b, p.c), (0, 0, 0, 1));
        assert!(matches!(acm_presentation(&BundleExpr::o(1), -5, 5), Err(Error::NotNormalized { .. })));
    }

    #[test]
    fn presentation_numbers_of_named() {
        assert_eq!(presentation_numbers(&crate::library::e_line()).unwrap(), (1, 1, 1));
        assert_eq!(presentation_numbers(&crate::library::e_elliptic()).unwrap(), (2, 2, 0));
    }

    #[test]
    fn splitting_criterion() {
        let split = Sheaf::Bundle(BundleExpr::o(2).sum(BundleExpr::o(-1)));
        assert!(split_check(&split, -5, 5).unwrap().passed);
        for e in [
            Sheaf::Bundle(BundleExpr::u()),
            Sheaf::Bundle(BundleExpr::q().dual()),
            Sheaf::Bundle(BundleExpr::u().sym2()),
            crate::library::e_line(),
            crate::library::e_elliptic(),
        ] {
            let v = split_check(&e, -5, 5).unwrap();
            assert!(!v.passed && !v.witnesses.is_empty(), "{v:?}");
        }
    }

    #[test]
    fn normalization() {
        let (n, d) = normalize_twist(&ChernData::new(3, 2, 0, 0)).unwrap();
        assert_eq!(n, -1);
        assert_eq!(d.c1, -1);
        let (n, d) = normalize_twist(&ChernData::new(2, -1, 1, 0)).unwrap();
        assert_eq!((n, d.c1), (0, -1));
    }

    #[test]
    fn characterizations() {
        let u = Sheaf::Bundle(BundleExpr::u());
        assert!(characterize(&u, Mode::UorO, -5, 5).unwrap().satisfied);
        assert!(!characterize(&Sheaf::Bundle(BundleExpr::q().dual()), Mode::UorO, -5, 5).unwrap().satisfied);
        assert!(characterize(&Sheaf::Bundle(BundleExpr::q().dual()), Mode::QorO, -5, 5).unwrap().satisfied);
    }

    #[test]
    fn horrocks() {
        let e = Sheaf::Bundle(BundleExpr::o(1).sum(BundleExpr::o(-2)).sum(BundleExpr::o(-2)));
        let h = horrocks_decompose(&e, -6, 6).unwrap();
        assert_eq!(h.summands, vec![(1, 1), (2, -2)]);
        assert_eq!(h.residual, Residual::Empty);
    }

    #[test]
    fn pinned_values() {
        let e = elliptic_ext1().unwrap();
        assert_eq!(e.value, 5);
        assert!(e.hypothesis.is_some());
        let book = elliptic_bookkeeping().unwrap();
        assert_eq!((book.curve_degree, book.hilbert_dim, book.fibre_dim), (7, 14, 9));
        assert!(book.consistent());
        let s = sym2_deformations().unwrap();
        assert_eq!(s.value, 10);
        assert_eq!(s.chi, -9);
    }
}
