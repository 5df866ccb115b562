//! Markdown renderings of the reports. JSON goes straight through serde.

use std::fmt::Write;

use frobfix::curves::{OddPowerWitness, RigidityReport, VerschiebungReport};
use frobfix::thh::ThhReport;

use crate::golden::CheckResult;

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

pub fn check(c: &CheckResult) -> String {
    let mut s = format!("\ncheck: {} of {} cells match\n", c.cells - c.mismatches.len(), c.cells);
    for m in &c.mismatches {
        let _ = writeln!(s, "- {}: expected {}, computed {}", m.cell, m.expected, m.computed);
    }
    s
}

pub fn rigidity(r: &RigidityReport) -> String {
    let mut s = format!("## {} over F_{}, levels {:?}", r.variety, r.p, r.levels);
    if r.localized_away_p {
        let _ = write!(s, ", p inverted");
    }
    s.push_str("\n\n| summand | level | kernel | cokernel |\n|---|---|---|---|\n");
    for sm in &r.summands {
        for (k, c) in sm.kernels.iter().zip(&sm.cokernels) {
            let _ = writeln!(s, "| {} | {} | {} | {} |", sm.summand, k.level, k.group, c.group);
        }
    }
    s.push_str("\n| summand | stable from | kernels agree | cokernel constant | classes certified |\n|---|---|---|---|---|\n");
    for sm in &r.summands {
        let stable = sm.stable_from.map_or("-".to_string(), |l| l.to_string());
        let dead = sm.classes.iter().filter(|c| c.dies_at.is_some()).count();
        let _ = writeln!(
            s,
            "| {} | {stable} | {} | {} | {dead}/{} |",
            sm.summand,
            yes(sm.kernels_agree),
            yes(sm.coker_constant),
            sm.classes.len()
        );
    }
    for f in &r.failures {
        let _ = writeln!(s, "- {f}");
    }
    let _ = writeln!(s, "\npassed: {}", yes(r.passed));
    s
}

pub fn verschiebung(reports: &[VerschiebungReport], witnesses: &[OddPowerWitness]) -> String {
    let mut s = String::from("| curve | p | trace | deg(p - V) | p·#E(F_p) | form > 0 | rational levels | passed |\n");
    s.push_str("|---|---|---|---|---|---|---|---|\n");
    for r in reports {
        let rational: Vec<String> = r.rational_levels.iter().map(|l| l.to_string()).collect();
        let _ = writeln!(
            s,
            "| {} | {} | {} | {} | {} | {} | {} | {} |",
            r.curve,
            r.p,
            r.trace,
            r.deg_p_minus_v,
            r.p_times_points,
            yes(r.form_positive),
            if rational.is_empty() { "-".into() } else { rational.join(", ") },
            yes(r.passed)
        );
    }
    if !witnesses.is_empty() {
        s.push_str("\n| p | a1..a6 over F_p² | #E | trace | (r, s) | degree | verified |\n|---|---|---|---|---|---|---|\n");
        for w in witnesses {
            let _ = writeln!(
                s,
                "| {} | {:?} | {} | {} | ({}, {}) | {} | {} |",
                w.p,
                w.coefficients,
                w.points,
                w.trace,
                w.r,
                w.s,
                w.degree,
                yes(w.frobenius_is_scalar && w.kernel_is_everything)
            );
        }
    }
    s
}

pub fn thh(r: &ThhReport) -> String {
    let mut s = format!(
        "## THH_{}(A^{}) truncated at degree {}, p = {}\n\nexpected dimension: {}\n\n",
        r.n, r.d, r.bound, r.p, r.expected_dim
    );
    s.push_str("| level | field | ker dim | coker dim | certified | dies at |\n|---|---|---|---|---|---|\n");
    for l in &r.per_level {
        let dies = l.dies_at.map_or("-".to_string(), |d| d.to_string());
        let _ = writeln!(
            s,
            "| {} | F_{}^{} | {} | {} | {}/{} | {dies} |",
            l.level, r.p, l.field_degree, l.ker_dim, l.coker_dim, l.certified, l.coker_dim
        );
    }
    let _ = writeln!(s, "\npassed: {}", yes(r.passed));
    s
}
