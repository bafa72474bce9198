//! Human-readable summary, JSON report and CSV landscape.

use std::fmt::Write;

use serde::Serialize;

use super::{ProblemConfig, RunOutcome};
use crate::compare::{Certification, Conclusion, Rule, Verdict, IMPLICATION_TABLE};

#[derive(Debug, Serialize)]
pub struct ImplicationRow {
    pub premise: &'static str,
    pub rule: Rule,
    pub rule_description: &'static str,
    pub conclusion: &'static str,
}

/// Top-level document of the JSON report.
#[derive(Debug, Serialize)]
pub struct JsonReport<'a> {
    pub config: &'a ProblemConfig,
    #[serde(flatten)]
    pub outcome: &'a RunOutcome,
    pub refuted: bool,
    pub implication_table: Vec<ImplicationRow>,
}

impl<'a> JsonReport<'a> {
    pub fn new(config: &'a ProblemConfig, outcome: &'a RunOutcome) -> Self {
        JsonReport {
            config,
            outcome,
            refuted: outcome.refuted(),
            implication_table: IMPLICATION_TABLE
                .iter()
                .map(|&(premise, rule, conclusion)| ImplicationRow {
                    premise,
                    rule,
                    rule_description: rule.describe(),
                    conclusion,
                })
                .collect(),
        }
    }
}

fn verdict_line(out: &mut String, name: &str, v: &Verdict) {
    let _ = write!(out, "  {name:<22} {}", v.status);
    if v.is_holds() && v.strict {
        out.push_str(" (strict)");
    }
    match v.certification {
        Certification::ClosedForm => out.push_str(" [closed form]"),
        Certification::Sampled { points, tolerance } => {
            let _ = write!(out, " [sampled: {points} points, tol {tolerance:e}]");
        }
    }
    if let Some(w) = &v.witness {
        if v.is_fails() {
            let _ = write!(out, " witness {:?} value {:e}", w.point, w.value);
            if let Some(i) = w.index {
                let _ = write!(out, " index {i}");
            }
        }
    }
    if !v.note.is_empty() {
        let _ = write!(out, " - {}", v.note);
    }
    out.push('\n');
}

fn conclusion_line(out: &mut String, name: &str, c: &Conclusion) {
    let _ = writeln!(out, "{name}: {c}");
}

pub fn summary_text(cfg: &ProblemConfig, outcome: &RunOutcome) -> String {
    let r = &outcome.report;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "comparing A_(f,p) (mean1) with A_(g,q) (mean2), n = {}, interval ({}, {})",
        cfg.n, cfg.interval.lower, cfg.interval.upper
    );
    out.push_str("conditions:\n");
    let rows = [
        ("first_order", &r.first_order),
        ("ratio_monotone", &r.ratio_monotone),
        ("hessian_definite", &r.hessian_definite),
        ("two_point", &r.two_point),
        ("monotone_ratios", &r.monotone_ratios),
        ("shared_generator", &r.shared_generator),
        ("power_two_point", &r.power_two_point),
    ];
    for (name, v) in rows {
        if let Some(v) = v {
            verdict_line(&mut out, name, v);
        }
    }
    if let Some(b) = &r.shared_weights {
        verdict_line(&mut out, "sw.ratio_increasing", &b.ratio_increasing);
        verdict_line(&mut out, "sw.curvature_order", &b.curvature_order);
        verdict_line(&mut out, "sw.composite_convex", &b.composite_convexity);
        verdict_line(&mut out, "sw.two_point", &b.two_point);
    }
    if let Some(p) = &r.power {
        let _ = writeln!(
            out,
            "power family: a = {}, b = {}, gamma = {}, delta = {}",
            p.a, p.b, p.gamma, p.delta
        );
    }
    out.push_str("conclusions:\n");
    conclusion_line(&mut out, "  locally smaller", &r.locally_smaller);
    conclusion_line(&mut out, "  globally smaller", &r.globally_smaller);
    if let Some(g) = &outcome.gap_search {
        match &g.witness {
            Some(w) => {
                let _ = writeln!(out, "gap search: violation {:e} at {:?}", w.gap, w.point);
            }
            None => {
                let _ = writeln!(out, "gap search: no violation found (max gap {:e})", g.gap);
            }
        }
        if g.diagnostics.skipped > 0 {
            let _ = writeln!(out, "  {} probe(s) skipped after evaluation errors", g.diagnostics.skipped);
        }
    }
    if let Some(p) = &outcome.local_probe {
        out.push_str("local probe:\n");
        for l in &p.levels {
            let _ = write!(out, "  radius {:<8} max gap {:e}", l.radius, l.gap);
            if let Some(w) = &l.witness {
                let _ = write!(out, " at {:?}", w.point);
            }
            out.push('\n');
        }
    }
    let _ = writeln!(out, "result: {}", if outcome.refuted() { "refuted" } else { "not refuted" });
    out
}

/// `x,y,mean_fp,mean_gq,gap` with 17 significant digits per value.
pub fn landscape_csv(rows: &[[f64; 5]]) -> String {
    let mut out = String::from("x,y,mean_fp,mean_gq,gap\n");
    for row in rows {
        let cells: Vec<String> = row.iter().map(|v| format!("{v:.16e}")).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}
