//! Cohomology of bundle expressions: Bott on G(2,5), then Koszul restriction to V5.

pub mod bott;
pub mod koszul;
pub mod normalize;

use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

use serde::{Deserialize, Serialize};

use crate::chow::{ch, ch_line, chi_of_ch, ChowClass};
use crate::error::{Bounds, Error, Result};
use crate::expr::BundleExpr;
use crate::rep::{RepSum, Sl2Character, Term};

pub use bott::{bott, BottResult};
pub use koszul::{collapse, collapse_with, Collapse, Facts, FirstPage};
pub use normalize::normalize;

pub const DEFAULT_WINDOW: (i64, i64) = (-6, 6);

/// Number of twists at each end of a window that must be clean for a vanishing verdict.
pub const STABLE_ENDS: i64 = 3;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct V5Cohomology {
    pub dims: [u64; 4],
    pub sl2: [Sl2Character; 4],
}

#[derive(Debug, Clone)]
struct TermOutcome {
    page: [[u64; 7]; 4],
    result: std::result::Result<[Sl2Character; 4], (Bounds, i64)>,
}

/// Memoizing evaluator. Readers run concurrently; inserts take the write lock briefly.
#[derive(Debug, Default)]
pub struct Engine {
    bott_memo: RwLock<HashMap<String, BottResult>>,
    v5_memo: RwLock<HashMap<String, TermOutcome>>,
}

impl Engine {
    pub fn new() -> Self {
        bott::calibration_self_test().expect("Bott calibration");
        crate::chow::self_test().expect("Todd class self-test");
        Engine::default()
    }

    /// Process-wide engine.
    pub fn shared() -> &'static Engine {
        static ENGINE: OnceLock<Engine> = OnceLock::new();
        ENGINE.get_or_init(Engine::new)
    }

    pub fn bott(&self, t: &Term) -> BottResult {
        let key = t.key();
        if let Some(r) = self.bott_memo.read().unwrap().get(&key) {
            return r.clone();
        }
        let r = bott(t);
        self.bott_memo.write().unwrap().insert(key, r.clone());
        r
    }

    /// Snapshot of the Bott memo, sorted by key.
    pub fn bott_entries(&self) -> Vec<(String, BottResult)> {
        let mut v: Vec<_> = self.bott_memo.read().unwrap().iter().map(|(k, r)| (k.clone(), r.clone())).collect();
        v.sort_by(|a, b| a.0.cmp(&b.0));
        v
    }

    pub fn preload_bott(&self, entries: impl IntoIterator<Item = (String, BottResult)>) {
        let mut m = self.bott_memo.write().unwrap();
        for (k, r) in entries {
            m.entry(k).or_insert(r);
        }
    }

    pub fn g_cohomology_sl2(&self, e: &BundleExpr) -> Result<[Sl2Character; 7]> {
        Ok(self.g_sum_sl2(&normalize(e)?))
    }

    pub fn g_cohomology(&self, e: &BundleExpr) -> Result<[u64; 7]> {
        Ok(self.g_cohomology_sl2(e)?.map(|c| c.dim()))
    }

    fn g_sum_sl2(&self, s: &RepSum) -> [Sl2Character; 7] {
        let mut out: [Sl2Character; 7] = Default::default();
        for (t, m) in &s.terms {
            for (q, c) in self.bott(t).sl2().iter().enumerate() {
                out[q] = out[q].add(&c.scale(*m));
            }
        }
        out
    }

    fn first_page(&self, t: &Term) -> FirstPage {
        std::array::from_fn(|j| {
            let row = self.bott(&t.twisted(-(j as i64))).sl2();
            koszul::tensor_wedge(row, j)
        })
    }

    /// Collapse of the page of `t`, falling back to the page of its Serre dual.
    fn collapse_term(&self, t: &Term, facts: Facts) -> std::result::Result<Collapse, Error> {
        let serre = t.dual().twisted(-2);
        let dual_facts = Facts { h0_zero: facts.h3_zero, h3_zero: facts.h0_zero };
        match collapse_with(&self.first_page(t), facts) {
            Collapse::Inconsistent(msg) => Err(Error::Internal(format!("{}: {msg}", t.key()))),
            Collapse::Exact(h) => Ok(Collapse::Exact(h)),
            amb @ Collapse::Ambiguous { .. } => match collapse_with(&self.first_page(&serre), dual_facts) {
                // H^p(E) = H^{3-p}(E* (x) omega)^*, omega = O(-2); SL(2)-modules are self-dual
                Collapse::Exact(h) => Ok(Collapse::Exact([h[3].clone(), h[2].clone(), h[1].clone(), h[0].clone()])),
                _ => Ok(amb),
            },
        }
    }

    /// `H^0(V5, t) = 0`, certified either directly or through the subbundle embeddings
    /// `S^a U ⊂ S^{a-1} U (x) V` and `S^b Q* ⊂ S^{b-e} Q* (x) V*`, which bound `h^0`
    /// by that of a smaller term.
    fn h0_vanishes(&self, t: &Term) -> bool {
        if let Ok(Collapse::Exact(h)) = self.collapse_term(t, Facts::default()) {
            return h[0].is_zero();
        }
        let [a, _] = t.u_block;
        let [b1, b2, _] = t.q_block;
        let mut smaller = Vec::new();
        if a > 0 {
            // S^a U*(s) = S^a U(a + s) ⊂ S^{a-1} U(a + s) (x) V = S^{a-1} U*(s + 1) (x) V
            smaller.push(Term::new([a - 1, 0], t.q_block, t.twist + 1));
        }
        if b1 > b2 {
            smaller.push(Term::new(t.u_block, [b1 - 1, b2, 0], t.twist));
        }
        if b2 > 0 {
            smaller.push(Term::new(t.u_block, [b1, b2 - 1, 0], t.twist));
        }
        smaller.iter().any(|s| self.h0_vanishes(s))
    }

    fn term_outcome(&self, t: &Term) -> Result<TermOutcome> {
        let key = t.key();
        if let Some(o) = self.v5_memo.read().unwrap().get(&key) {
            return Ok(o.clone());
        }
        let dims = koszul::page_dims(&self.first_page(t));
        let mut c = self.collapse_term(t, Facts::default())?;
        if matches!(c, Collapse::Ambiguous { .. }) {
            let facts = Facts { h0_zero: self.h0_vanishes(t), h3_zero: self.h0_vanishes(&t.dual().twisted(-2)) };
            if facts != Facts::default() {
                c = self.collapse_term(t, facts)?;
            }
        }
        let result = match c {
            Collapse::Exact(h) => Ok(h),
            Collapse::Ambiguous { bounds, chi } => Err((bounds, chi)),
            Collapse::Inconsistent(msg) => return Err(Error::Internal(msg)),
        };
        let o = TermOutcome { page: dims, result };
        self.v5_memo.write().unwrap().insert(key, o.clone());
        Ok(o)
    }

    pub fn v5_cohomology_full(&self, e: &BundleExpr) -> Result<V5Cohomology> {
        let s = normalize(e)?;
        let mut sl2: [Sl2Character; 4] = Default::default();
        let mut page = vec![[0u64; 7]; 4];
        let mut bounds: Bounds = [(0, 0); 4];
        let mut chi = 0i64;
        let mut ambiguous = false;
        for (t, m) in &s.terms {
            let o = self.term_outcome(t)?;
            for j in 0..4 {
                for q in 0..7 {
                    page[j][q] += o.page[j][q] * m;
                }
            }
            match &o.result {
                Ok(h) => {
                    for p in 0..4 {
                        sl2[p] = sl2[p].add(&h[p].scale(*m));
                        let d = h[p].dim() * m;
                        bounds[p].0 += d;
                        bounds[p].1 += d;
                        chi += if p % 2 == 0 { d as i64 } else { -(d as i64) };
                    }
                }
                Err((b, c)) => {
                    ambiguous = true;
                    for p in 0..4 {
                        bounds[p].0 += b[p].0 * m;
                        bounds[p].1 += b[p].1 * m;
                    }
                    chi += c * *m as i64;
                }
            }
        }
        if ambiguous {
            return Err(Error::AmbiguousSpectralSequence { first_page: page, bounds, chi });
        }
        Ok(V5Cohomology { dims: sl2.clone().map(|c| c.dim()), sl2 })
    }

    pub fn v5_cohomology(&self, e: &BundleExpr) -> Result<[u64; 4]> {
        Ok(self.v5_cohomology_full(e)?.dims)
    }

    /// `(Hom, Ext^1, Ext^2, Ext^3)(e, f) = H^*(e* (x) f)`.
    pub fn hom_ext(&self, e: &BundleExpr, f: &BundleExpr) -> Result<[u64; 4]> {
        self.v5_cohomology(&e.clone().dual().tensor(f.clone()))
    }

    pub fn hom_ext_full(&self, e: &BundleExpr, f: &BundleExpr) -> Result<V5Cohomology> {
        self.v5_cohomology_full(&e.clone().dual().tensor(f.clone()))
    }

    pub fn coh_table(&self, e: &BundleExpr, lo: i64, hi: i64) -> Result<CohTable> {
        let class = ch(e);
        CohTable::build(lo, hi, |t| self.v5_cohomology(&e.clone().twist(t)), &class)
    }

    pub fn is_acm(&self, e: &BundleExpr, lo: i64, hi: i64) -> Result<AcmVerdict> {
        let witnesses = scan_window(lo, hi, |t| {
            let h = self.v5_cohomology(&e.clone().twist(t))?;
            Ok(intermediate_failures(&h, t))
        })?;
        Ok(AcmVerdict { acm: witnesses.is_empty(), witnesses })
    }
}

pub fn intermediate_failures(h: &[u64; 4], t: i64) -> Vec<(usize, i64)> {
    [1, 2].into_iter().filter(|&p| h[p] != 0).map(|p| (p, t)).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AcmVerdict {
    pub acm: bool,
    /// `(p, t)` with `h^p(E(t)) != 0`, `p` in `{1, 2}`.
    pub witnesses: Vec<(usize, i64)>,
}

/// Evaluates `failures(t)` over `[lo, hi]`.
///
/// Any certified failure is returned as a witness even if other twists could not be
/// evaluated. A clean verdict needs every twist evaluated and a window holding
/// `STABLE_ENDS` clean twists at each end; otherwise `WindowTooNarrow`.
pub fn scan_window<W>(lo: i64, hi: i64, mut failures: impl FnMut(i64) -> Result<Vec<W>>) -> Result<Vec<W>> {
    if lo > hi {
        return Err(Error::WindowTooNarrow { lo, hi, reason: "empty window".into() });
    }
    let mut witnesses = Vec::new();
    let mut unknown: Vec<(i64, Error)> = Vec::new();
    for t in lo..=hi {
        match failures(t) {
            Ok(w) => witnesses.extend(w),
            Err(e @ (Error::AmbiguousSpectralSequence { .. } | Error::AmbiguousLongExactSequence { .. })) => unknown.push((t, e)),
            Err(e) => return Err(e),
        }
    }
    if !witnesses.is_empty() {
        return Ok(witnesses);
    }
    if let Some((t, e)) = unknown.into_iter().next() {
        if t - lo < STABLE_ENDS || hi - t < STABLE_ENDS {
            return Err(Error::WindowTooNarrow { lo, hi, reason: format!("twist {t} undetermined near the window end") });
        }
        return Err(e);
    }
    if hi - lo + 1 < 2 * STABLE_ENDS {
        return Err(Error::WindowTooNarrow {
            lo,
            hi,
            reason: format!("need at least {} twists to observe stabilization", 2 * STABLE_ENDS),
        });
    }
    Ok(witnesses)
}

/// `dims[t - lo][p] = h^p(E(t))` over the window `[lo, hi]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohTable {
    pub lo: i64,
    pub hi: i64,
    pub dims: Vec<[u64; 4]>,
}

impl CohTable {
    /// Fills the table and checks every column against Riemann-Roch for `class(t)`.
    pub fn build(lo: i64, hi: i64, mut eval: impl FnMut(i64) -> Result<[u64; 4]>, class: &ChowClass) -> Result<CohTable> {
        if lo > hi {
            return Err(Error::WindowTooNarrow { lo, hi, reason: "empty window".into() });
        }
        let mut dims = Vec::new();
        for t in lo..=hi {
            let h = eval(t)?;
            let alt = h[0] as i64 - h[1] as i64 + h[2] as i64 - h[3] as i64;
            let rr = chi_of_ch(&(*class * ch_line(t)))?;
            if alt != rr {
                return Err(Error::InconsistentTable(format!("twist {t}: alternating sum {alt} but Riemann-Roch gives {rr}")));
            }
            dims.push(h);
        }
        Ok(CohTable { lo, hi, dims })
    }

    pub fn get(&self, p: usize, t: i64) -> Option<u64> {
        if t < self.lo || t > self.hi {
            return None;
        }
        Some(self.dims[(t - self.lo) as usize][p])
    }

    pub fn column(&self, t: i64) -> Option<[u64; 4]> {
        (self.lo..=self.hi).contains(&t).then(|| self.dims[(t - self.lo) as usize])
    }

    pub fn chi(&self, t: i64) -> Option<i64> {
        self.column(t).map(|h| h[0] as i64 - h[1] as i64 + h[2] as i64 - h[3] as i64)
    }
}

impl std::fmt::Display for CohTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:>6}", "t")?;
        for t in self.lo..=self.hi {
            write!(f, "{t:>6}")?;
        }
        writeln!(f)?;
        for p in (0..4).rev() {
            write!(f, "{:>6}", format!("h^{p}"))?;
            for col in &self.dims {
                write!(f, "{:>6}", col[p])?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
