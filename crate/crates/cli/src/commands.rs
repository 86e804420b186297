use std::fmt::Write as _;

use fano5_core::chow::hilbert_polynomial_of_ch;
use fano5_core::classify::{self, Mode};
use fano5_core::derived::{self, ExcCollection};
use fano5_core::engine::{Engine, DEFAULT_WINDOW};
use fano5_core::sheaf::{self, Sheaf};
use fano5_core::{Error, Result};
use serde::Serialize;
use serde_json::{json, Value};

use crate::input;
use crate::{Command, Side, Which};

pub struct Outcome {
    pub result: Value,
    pub text: String,
    /// False when a check ran to completion and failed (exit code 2).
    pub verdict: bool,
    pub warnings: Vec<String>,
}

fn ok<T: Serialize>(v: &T, text: String) -> Result<Outcome> {
    Ok(Outcome { result: to_value(v), text, verdict: true, warnings: Vec::new() })
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable result")
}

pub fn window(w: &Option<String>) -> Result<(i64, i64)> {
    let Some(w) = w else { return Ok(DEFAULT_WINDOW) };
    let bad = || Error::Syntax { pos: 0, msg: format!("window {w:?} is not of the form A..B") };
    let (a, b) = w.split_once("..").ok_or_else(bad)?;
    let lo = a.trim().parse().map_err(|_| bad())?;
    let hi = b.trim().parse().map_err(|_| bad())?;
    if lo > hi {
        return Err(Error::WindowTooNarrow { lo, hi, reason: "empty window".into() });
    }
    Ok((lo, hi))
}

/// Command name and its arguments for the JSON envelope.
pub fn describe(c: &Command) -> (&'static str, Value) {
    match c {
        Command::Coh { expr, window } => ("coh", json!({"expr": expr, "window": window})),
        Command::Chi { expr } => ("chi", json!({"expr": expr})),
        Command::Hilb { expr } => ("hilb", json!({"expr": expr})),
        Command::Hom { e, f } => ("hom", json!({"e": e, "f": f})),
        Command::Gram => ("gram", json!({})),
        Command::Mutate { side, e, f } => {
            let s = if *side == Side::Left { "left" } else { "right" };
            ("mutate", json!({"side": s, "e": e, "f": f}))
        }
        Command::HelixCheck => ("helix-check", json!({})),
        Command::DiagonalCheck => ("diagonal-check", json!({})),
        Command::Beilinson { expr, table } => ("beilinson", json!({"expr": expr, "table": table})),
        Command::Split { expr, window } => ("split", json!({"expr": expr, "window": window})),
        Command::Acm { expr, window } => ("acm", json!({"expr": expr, "window": window})),
        Command::Classify { rank, c1 } => ("classify", json!({"rank": rank, "c1": c1})),
        Command::Characterize { expr, mode, window } => ("characterize", json!({"expr": expr, "mode": mode, "window": window})),
        Command::Horrocks { expr, window } => ("horrocks", json!({"expr": expr, "window": window})),
        Command::Report { which } => ("report", json!({"which": if *which == Which::Rank2 { "rank2" } else { "rank3" }})),
    }
}

pub fn run(c: &Command) -> Result<Outcome> {
    match c {
        Command::Coh { expr, window: w } => coh(expr, w),
        Command::Chi { expr } => {
            let x = input::sheaf(expr)?.chi()?;
            ok(&x, x.to_string())
        }
        Command::Hilb { expr } => {
            let p = hilbert_polynomial_of_ch(&input::sheaf(expr)?.ch());
            ok(&p, p.to_string())
        }
        Command::Hom { e, f } => hom(e, f),
        Command::Gram => gram(),
        Command::Mutate { side, e, f } => {
            let (e, f) = (input::sheaf(e)?, input::sheaf(f)?);
            let m = match side {
                Side::Right => derived::right_mutation(&e, &f)?,
                Side::Left => derived::left_mutation(&e, &f)?,
            };
            ok(&m, m.to_string())
        }
        Command::HelixCheck => {
            let r = derived::verify_helix();
            let mut text = String::new();
            for c in &r.checks {
                writeln!(text, "{} {}: {}", if c.passed { "ok  " } else { "FAIL" }, c.name, c.detail).unwrap();
            }
            Ok(Outcome { verdict: r.passed(), ..ok(&r, text)? })
        }
        Command::DiagonalCheck => diagonal(),
        Command::Beilinson { expr, table } => beilinson(expr.as_deref(), table.as_deref()),
        Command::Split { expr, window: w } => {
            let (lo, hi) = window(w)?;
            let v = classify::split_check(&input::sheaf(expr)?, lo, hi)?;
            let mut text = format!("{} over [{lo}, {hi}]\n", if v.passed { "splits" } else { "does not split" });
            for w in &v.witnesses {
                writeln!(text, "  witness: {w}").unwrap();
            }
            Ok(Outcome { verdict: v.passed, ..ok(&v, text)? })
        }
        Command::Acm { expr, window: w } => acm(expr, w),
        Command::Classify { rank, c1 } => {
            let rows = classify::enumerate_presentations(*rank, *c1)?;
            let text = rows.iter().map(|p| p.to_string()).collect::<Vec<_>>().join("\n");
            ok(&rows, text)
        }
        Command::Characterize { expr, mode, window: w } => {
            let (lo, hi) = window(w)?;
            let mode: Mode = mode.parse().map_err(|m: String| Error::Syntax { pos: 0, msg: m })?;
            let r = classify::characterize(&input::sheaf(expr)?, mode, lo, hi)?;
            let mut text = if r.satisfied {
                format!("conditions hold over [{lo}, {hi}]: indecomposable summands among {}\n", r.candidates.join(", "))
            } else {
                format!("conditions fail over [{lo}, {hi}]\n")
            };
            for w in &r.witnesses {
                writeln!(text, "  witness: {w}").unwrap();
            }
            Ok(Outcome { verdict: r.satisfied, ..ok(&r, text)? })
        }
        Command::Horrocks { expr, window: w } => {
            let (lo, hi) = window(w)?;
            let d = classify::horrocks_decompose(&input::sheaf(expr)?, lo, hi)?;
            let parts: Vec<String> =
                d.summands.iter().map(|(m, k)| if *m == 1 { format!("O({k})") } else { format!("O({k})^{m}") }).collect();
            let text = format!(
                "line bundle summands: {}\nresidual rank {}: {:?}\nsplitting hypothesis over [{lo}, {hi}]: {}",
                if parts.is_empty() { "none".into() } else { parts.join(" + ") },
                d.residual_rank,
                d.residual,
                if d.hypothesis.passed { "holds" } else { "fails" }
            );
            ok(&d, text)
        }
        Command::Report { which } => {
            let r = if *which == Which::Rank2 { classify::rank2_report() } else { classify::rank3_report() };
            ok(&r, r.to_string())
        }
    }
}

fn dims_text(h: &[u64; 4]) -> String {
    (0..4).map(|p| format!("h^{p} = {}", h[p])).collect::<Vec<_>>().join("\n")
}

fn coh(expr: &str, w: &Option<String>) -> Result<Outcome> {
    let s = input::sheaf(expr)?;
    if w.is_some() {
        let (lo, hi) = window(w)?;
        let t = sheaf::coh_table(&s, lo, hi)?;
        return ok(&t, t.to_string());
    }
    if let Sheaf::Bundle(b) = &s {
        let c = Engine::shared().v5_cohomology_full(b)?;
        let text = (0..4).map(|p| format!("h^{p} = {:<4} {}", c.dims[p], c.sl2[p])).collect::<Vec<_>>().join("\n");
        return ok(&c, text);
    }
    let h = sheaf::cohomology(&s)?;
    ok(&json!({"dims": h}), dims_text(&h))
}

fn hom(e: &str, f: &str) -> Result<Outcome> {
    let (se, sf) = (input::sheaf(e)?, input::sheaf(f)?);
    if let (Sheaf::Bundle(a), Sheaf::Bundle(b)) = (&se, &sf) {
        let c = Engine::shared().hom_ext_full(a, b)?;
        let text = (0..4).map(|p| format!("ext^{p} = {:<4} {}", c.dims[p], c.sl2[p])).collect::<Vec<_>>().join("\n");
        return ok(&c, text);
    }
    let h = sheaf::ext(&se, &sf)?;
    let text = (0..4).map(|p| format!("ext^{p} = {}", h[p])).collect::<Vec<_>>().join("\n");
    ok(&json!({"dims": h}), text)
}

fn gram() -> Result<Outcome> {
    let mut text = String::new();
    let mut result = Vec::new();
    for (name, c) in [("standard", ExcCollection::standard()), ("mutated", ExcCollection::mutated())] {
        let g = derived::gram_matrix(&c)?;
        let labels: Vec<&str> = c.items.iter().map(|i| i.label.as_str()).collect();
        writeln!(text, "{name}: ({})", labels.join(", ")).unwrap();
        for row in &g {
            writeln!(text, "  {}", row.iter().map(|x| format!("{x:>4}")).collect::<String>()).unwrap();
        }
        result.push(json!({"name": name, "collection": labels, "matrix": g}));
    }
    ok(&result, text)
}

fn diagonal() -> Result<Outcome> {
    let d = derived::diagonal_selfduality_check()?;
    let mut text = String::new();
    for (k, a, b) in &d.terms {
        writeln!(text, "degree {k}: {a} [x] {b}").unwrap();
    }
    writeln!(text, "involution: {}", if d.involution_ok { "ok" } else { "FAIL" }).unwrap();
    for s in d.differentials.iter().chain([&d.skip]) {
        writeln!(text, "Hom from degree {}: dim {} = {}, invariants {}", s.from_degree, s.dim, s.character, s.invariants).unwrap();
    }
    for f in &d.failures {
        writeln!(text, "FAIL {f}").unwrap();
    }
    Ok(Outcome { verdict: d.passed, ..ok(&d, text)? })
}

fn read_table(path: &std::path::Path) -> Result<derived::BeilinsonTable> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::InconsistentTable(format!("{}: {e}", path.display())))?;
    match serde_json::from_str::<[[u64; 4]; 4]>(&text) {
        Ok(rows) => derived::parse_table(&rows.iter().map(|r| format!("{} {} {} {}\n", r[0], r[1], r[2], r[3])).collect::<String>()),
        Err(_) => derived::parse_table(&text),
    }
}

fn beilinson(expr: Option<&str>, table: Option<&std::path::Path>) -> Result<Outcome> {
    let out = match (expr, table) {
        (_, Some(p)) => {
            let t = read_table(p)?;
            let (c, d) = derived::beilinson_terms(&t);
            derived::BeilinsonOutput { table: t, c, d }
        }
        (Some(e), None) => derived::beilinson_for(&input::sheaf(e)?)?,
        (None, None) => return Err(Error::Syntax { pos: 0, msg: "need EXPR or --table".into() }),
    };
    let text = format!("C_F:\n{}\nD_F*(-1):\n{}\nclass of C_F: {}", indent(&out.c.to_string()), indent(&out.d.to_string()), out.c.k_sum()?);
    ok(&out, text)
}

fn indent(s: &str) -> String {
    s.lines().map(|l| format!("  {l}")).collect::<Vec<_>>().join("\n")
}

fn acm(expr: &str, w: &Option<String>) -> Result<Outcome> {
    let (lo, hi) = window(w)?;
    let s = input::sheaf(expr)?;
    let v = classify::is_acm(&s, lo, hi)?;
    let mut text = format!("{} over [{lo}, {hi}]\n", if v.acm { "aCM" } else { "not aCM" });
    for (p, t) in &v.witnesses {
        writeln!(text, "  h^{p}(E({t})) != 0").unwrap();
    }
    let mut result = json!({"verdict": v, "presentation": null});
    if let (true, Sheaf::Bundle(b)) = (v.acm, &s) {
        if let Ok(p) = classify::acm_presentation(b, lo, hi) {
            writeln!(text, "presentation: {p}").unwrap();
            result["presentation"] = to_value(&p);
        }
    }
    Ok(Outcome { result, text, verdict: v.acm, warnings: Vec::new() })
}
