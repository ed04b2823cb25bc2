//! Versioned report formats.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use nichols_core::deform::{Outcome, ParamAssignment, VerifyReport};
use nichols_core::freealg::{letter_name, WordText};
use nichols_core::groebner::{Derivation, Source, Trace, Verdict};
use serde::Serialize;
use sha2::{Digest, Sha256};

pub const SCHEMA_VERSION: u32 = 1;

/// Exit codes shared by every command.
pub mod exit {
    pub const OK: i32 = 0;
    pub const ERROR: i32 = 1;
    pub const UNKNOWN_ENTRY: i32 = 2;
    pub const ZERO: i32 = 3;
    pub const INCONCLUSIVE: i32 = 4;
}

#[derive(Debug, Clone, Serialize)]
pub struct Verification {
    pub schema_version: u32,
    pub entry: String,
    pub lambda: BTreeMap<String, String>,
    pub status: &'static str,
    pub flat: Option<bool>,
    pub finite: Option<bool>,
    pub dim: Option<u64>,
    pub dim_undeformed: Option<u64>,
    /// Dimensions of the graded pieces up to the degree bound.
    pub hilbert: Vec<u64>,
    pub gb_rules: usize,
    pub degree_bound: usize,
    pub elapsed_ms: Option<u64>,
    pub trace_digest: Option<String>,
    pub warnings: Vec<String>,
}

impl Verification {
    pub fn new(entry: &str, theta: usize, r: &VerifyReport, elapsed_ms: Option<u64>) -> Self {
        let (finite, hilbert) = match &r.report.verdict {
            Verdict::Finite { counts, .. } => (Some(true), counts.clone()),
            Verdict::Infinite { counts } => (Some(false), counts.clone()),
            Verdict::Zero | Verdict::Inconclusive { .. } => (None, Vec::new()),
        };
        let dim_undeformed = match r.undeformed.verdict {
            Verdict::Finite { dim, .. } => Some(dim),
            Verdict::Zero => Some(0),
            _ => None,
        };
        Verification {
            schema_version: SCHEMA_VERSION,
            entry: entry.to_string(),
            lambda: lambda_text(&r.lambda),
            status: status(r.outcome),
            flat: r.flat,
            finite,
            dim: r.dim(),
            dim_undeformed,
            hilbert,
            gb_rules: r.report.rules,
            degree_bound: r.report.degree_bound,
            elapsed_ms,
            trace_digest: r.trace.as_ref().map(|t| trace_digest(t, theta)),
            warnings: r.warnings.clone(),
        }
    }

    /// Nonzero and flat is success; a nonflat deformation counts with the
    /// inconclusive ones since the theorem being tested predicts flatness.
    pub fn exit_code(&self) -> i32 {
        match (self.status, self.flat) {
            ("zero", _) => exit::ZERO,
            ("nonzero", Some(true)) => exit::OK,
            _ => exit::INCONCLUSIVE,
        }
    }

    pub fn text(&self) -> String {
        let mut s = String::new();
        let row = |s: &mut String, k: &str, v: &dyn std::fmt::Display| {
            let _ = writeln!(s, "{k:<16}{v}");
        };
        row(&mut s, "entry", &self.entry);
        let lam: Vec<String> = self.lambda.iter().map(|(k, v)| format!("{k}={v}")).collect();
        row(&mut s, "lambda", &if lam.is_empty() { "0".to_string() } else { lam.join(" ") });
        row(&mut s, "status", &self.status);
        let dim = |d: Option<u64>| match (d, self.finite) {
            (Some(d), _) => d.to_string(),
            (None, Some(false)) => "infinite".to_string(),
            (None, _) => "-".to_string(),
        };
        row(&mut s, "dim", &dim(self.dim));
        row(&mut s, "dim undeformed", &opt(self.dim_undeformed));
        row(&mut s, "flat", &opt(self.flat.map(|f| if f { "yes" } else { "no" })));
        if self.finite == Some(false) {
            let h: Vec<String> = self.hilbert.iter().map(u64::to_string).collect();
            row(&mut s, "hilbert", &h.join(" "));
        }
        row(&mut s, "gb rules", &self.gb_rules);
        row(&mut s, "degree bound", &self.degree_bound);
        if let Some(ms) = self.elapsed_ms {
            row(&mut s, "elapsed ms", &ms);
        }
        if let Some(d) = &self.trace_digest {
            row(&mut s, "trace digest", d);
        }
        s
    }
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map_or_else(|| "-".to_string(), |v| v.to_string())
}

pub fn status(o: Outcome) -> &'static str {
    match o {
        Outcome::Nonzero => "nonzero",
        Outcome::Zero => "zero",
        Outcome::Inconclusive => "inconclusive",
    }
}

pub fn lambda_text(l: &ParamAssignment) -> BTreeMap<String, String> {
    l.iter()
        .filter(|(_, v)| !v.is_zero())
        .map(|(k, v)| (k.clone(), v.to_string()))
        .collect()
}

/// SHA-256 of a canonical text rendering of the trace.
pub fn trace_digest(t: &Trace, theta: usize) -> String {
    hex::encode(Sha256::digest(trace_text(t, theta).as_bytes()))
}

/// One line per derivation: `scale | coeff left source right; ...`, with
/// `in k` for input generator `k` and `r k` for rule `k`.
pub fn trace_text(t: &Trace, theta: usize) -> String {
    let mut s = String::new();
    let asc: Vec<String> = t.order.ascending().iter().map(|&l| letter_name(l, theta)).collect();
    let _ = writeln!(s, "order {}", asc.join(" < "));
    let derivation = |s: &mut String, head: &str, d: &Derivation| {
        let _ = write!(s, "{head} {} |", d.scale);
        for step in &d.steps {
            let src = match step.source {
                Source::Input(k) => format!("in {k}"),
                Source::Rule(k) => format!("r {k}"),
            };
            let _ = write!(
                s,
                " ({}) [{}] {src} [{}];",
                step.coeff,
                WordText(&step.left, theta),
                WordText(&step.right, theta)
            );
        }
        s.push('\n');
    };
    for (k, d) in t.rules.iter().enumerate() {
        derivation(&mut s, &format!("rule {k}"), d);
    }
    derivation(&mut s, "last", &t.last);
    s
}
