//! Text renderings of the report payloads.
//!
//! Text output is for reading, JSON for machines; both are deterministic.
//! Scalars are pre-rendered to strings before padding because their
//! `Display` ignores width specifiers.

use std::fmt::Write as _;

use supercontact::verify::VerificationReport;
use supercontact::{
    Algebra, ClassificationResult, FWord, H1Report, HKind, HWord, MuRule, Parity, VarietyCell,
};

use crate::commands::{BracketTable, CatalogRow};

fn parity_name(p: Parity) -> &'static str {
    if p.is_odd() {
        "odd"
    } else {
        "even"
    }
}

fn algebra_name(a: Algebra) -> &'static str {
    match a {
        Algebra::Osp22 => "osp22",
        Algebra::Osp12 => "osp12",
        Algebra::Sl2 => "sl2",
        Algebra::PiH => "pi_h",
    }
}

fn source_name(s: HKind) -> &'static str {
    match s {
        HKind::H0 => "h0",
        HKind::H1 => "h1",
        HKind::Full => "full",
    }
}

fn rule_name(r: MuRule) -> &'static str {
    match r {
        MuRule::HalfStep => "half_step",
        MuRule::IntegerStep => "integer_step",
    }
}

pub fn verify_text(report: &VerificationReport) -> String {
    let mut s = String::new();
    for case in &report.cases {
        if case.pass {
            let _ = writeln!(s, "PASS {}", case.id);
            if let Some(cert) = &case.certificate {
                let _ = writeln!(s, "     {cert}");
            }
        } else {
            let _ = writeln!(s, "FAIL {}", case.id);
            if let Some(witness) = &case.witness {
                let _ = writeln!(s, "     {witness}");
            }
        }
    }
    let _ = writeln!(
        s,
        "{} passed, {} failed (engine {}; {}; degree = {})",
        report.passed,
        report.failed,
        report.engine_version,
        report.truncation_order_rule,
        report.truncation_degree
    );
    s
}

pub fn scan_text(reports: &[H1Report]) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{:>10} {:>10} {:>9} {:>4} {:>4} {:>4} {:>6} {:>7} {:>8}",
        "lambda", "mu", "relative", "z1", "b1", "h1", "order", "degree", "plateau"
    );
    for r in reports {
        let _ = writeln!(
            s,
            "{:>10} {:>10} {:>9} {:>4} {:>4} {:>4} {:>6} {:>7} {:>8}",
            r.lambda.to_string(),
            r.mu.to_string(),
            r.relative,
            r.z1_dim,
            r.b1_dim,
            r.h1_dim,
            r.truncation.order,
            r.truncation.degree,
            r.plateau
        );
    }
    s
}

pub fn bracket_text(table: &BracketTable) -> String {
    let mut s = String::new();
    for row in &table.rows {
        let mut rhs = String::new();
        if row.bracket.is_empty() {
            rhs.push('0');
        }
        for (i, term) in row.bracket.iter().enumerate() {
            let negative = term.coefficient.is_negative();
            let magnitude = if negative {
                -&term.coefficient
            } else {
                term.coefficient.clone()
            };
            if i == 0 {
                if negative {
                    rhs.push('-');
                }
            } else {
                rhs.push_str(if negative { " - " } else { " + " });
            }
            if magnitude == supercontact::Scalar::ONE {
                let _ = write!(rhs, "{}", term.generator);
            } else {
                let _ = write!(rhs, "{} {}", magnitude, term.generator);
            }
        }
        let _ = writeln!(s, "[{}, {}] = {}", row.left, row.right, rhs);
    }
    s
}

fn power(symbol: &str, n: u32) -> Option<String> {
    match n {
        0 => None,
        1 => Some(symbol.to_string()),
        _ => Some(format!("{symbol}^{n}")),
    }
}

fn h_word(w: &HWord) -> String {
    let mut parts: Vec<String> = Vec::new();
    if let Some(p) = power("eta", w.eta.into()) {
        parts.push(p);
    }
    if let Some(p) = power("dx", w.dx) {
        parts.push(p);
    }
    parts.push("h".into());
    parts.join(" ")
}

fn f_word(w: &FWord) -> String {
    let mut parts: Vec<String> = Vec::new();
    if w.theta {
        parts.push("t1".into());
    }
    if let Some(p) = power("eta", w.eta.into()) {
        parts.push(p);
    }
    if let Some(p) = power("dx", w.dx) {
        parts.push(p);
    }
    parts.push("f".into());
    parts.join(" ")
}

pub fn classification_text(result: &ClassificationResult) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "algebra {}, source {}, rule {}: lambda = {}, mu = {}, k = {}",
        algebra_name(result.algebra),
        source_name(result.source),
        rule_name(result.rule),
        result.lambda,
        result.mu,
        result.k
    );
    match &result.constraint_evaluation {
        Some(v) => {
            let _ = writeln!(s, "constraint evaluation: {v}");
        }
        None => {
            let _ = writeln!(s, "constraint evaluation: none recorded");
        }
    }
    let _ = writeln!(s, "solution dimension: {}", result.solution_basis.len());
    for (i, op) in result.solution_basis.iter().enumerate() {
        let _ = writeln!(s, "basis[{i}] ({}):", parity_name(op.parity()));
        for term in op.terms() {
            let _ = writeln!(
                s,
                "  {} * ({})({})",
                term.coeff,
                h_word(&term.h_word),
                f_word(&term.f_word)
            );
        }
    }
    s
}

pub fn variety_text(cells: &[VarietyCell]) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{:>7} {:>6} {:>12} {:>10} {:>10} {:>3} {:>4} {:>12} {:>7}",
        "algebra", "source", "rule", "lambda", "mu", "k", "dim", "constraint", "matches"
    );
    for c in cells {
        let _ = writeln!(
            s,
            "{:>7} {:>6} {:>12} {:>10} {:>10} {:>3} {:>4} {:>12} {:>7}",
            algebra_name(c.algebra),
            source_name(c.source),
            rule_name(c.rule),
            c.lambda.to_string(),
            c.mu.to_string(),
            c.k,
            c.dimension,
            c.constraint_evaluation.to_string(),
            c.matches_constraint
        );
    }
    s
}

pub fn catalog_text(rows: &[CatalogRow]) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{} catalog entries", rows.len());
    for r in rows {
        let _ = writeln!(
            s,
            "{:<34} {:<22} {:<10} {:<6} {:<5} weights: {}",
            r.name, r.role, r.variables, r.scope, r.parity, r.weights
        );
        let _ = writeln!(s, "{:34} {}", "", r.description);
    }
    s
}
