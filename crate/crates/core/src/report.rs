//! Check records and reports shared by every suite and the CLI.

use std::fmt::Write as _;

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    /// Informational: a computed value, not a check.
    Info,
}

/// How much of the relevant domain a check covered.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Every element was checked.
    Exhaustive,
    /// Seeded random elements were checked; "no counterexample found".
    Sampled,
    /// A fixed example.
    Example,
}

/// One line of a report. Field order is the JSON field order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRecord {
    pub check: String,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub mode: Mode,
    pub cases: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub millis: Option<u128>,
}

impl CheckRecord {
    pub fn new(check: impl Into<String>, verdict: Verdict, mode: Mode, cases: usize) -> Self {
        CheckRecord {
            check: check.into(),
            verdict,
            witness: None,
            seed: None,
            mode,
            cases,
            detail: None,
            millis: None,
        }
    }

    pub fn pass(check: impl Into<String>, mode: Mode, cases: usize) -> Self {
        Self::new(check, Verdict::Pass, mode, cases)
    }

    pub fn fail(check: impl Into<String>, mode: Mode, cases: usize, witness: impl Into<String>) -> Self {
        Self::new(check, Verdict::Fail, mode, cases).with_witness(witness)
    }

    pub fn info(check: impl Into<String>, detail: impl Into<String>) -> Self {
        Self::new(check, Verdict::Info, Mode::Example, 1).with_detail(detail)
    }

    /// Pass when `ok`, otherwise fail with the witness.
    pub fn verdict(check: impl Into<String>, ok: bool, mode: Mode, cases: usize, witness: Option<String>) -> Self {
        let mut r = Self::new(check, if ok { Verdict::Pass } else { Verdict::Fail }, mode, cases);
        r.witness = witness;
        r
    }

    pub fn with_witness(mut self, w: impl Into<String>) -> Self {
        self.witness = Some(w.into());
        self
    }

    pub fn with_detail(mut self, d: impl Into<String>) -> Self {
        self.detail = Some(d.into());
        self
    }

    pub fn with_seed(mut self, seed: Option<u64>) -> Self {
        self.seed = seed;
        self
    }

    pub fn is_failure(&self) -> bool {
        self.verdict == Verdict::Fail
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Report {
    pub records: Vec<CheckRecord>,
}

impl Report {
    pub fn new() -> Self {
        Report::default()
    }

    pub fn push(&mut self, r: CheckRecord) {
        self.records.push(r);
    }

    pub fn extend(&mut self, other: Report) {
        self.records.extend(other.records);
    }

    /// Prefixes every check name, e.g. with the object it was run on.
    pub fn scoped(mut self, scope: &str) -> Report {
        for r in &mut self.records {
            r.check = format!("{scope}/{}", r.check);
        }
        self
    }

    pub fn passed(&self) -> bool {
        !self.records.iter().any(CheckRecord::is_failure)
    }

    pub fn first_failure(&self) -> Option<&CheckRecord> {
        self.records.iter().find(|r| r.is_failure())
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.records.iter().filter(|r| r.is_failure())
    }

    pub fn get(&self, check: &str) -> Option<&CheckRecord> {
        self.records.iter().find(|r| r.check == check)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            let tag = match r.verdict {
                Verdict::Pass => "pass",
                Verdict::Fail => "FAIL",
                Verdict::Info => "info",
            };
            let mode = match r.mode {
                Mode::Exhaustive => "exhaustive",
                Mode::Sampled => "sampled",
                Mode::Example => "example",
            };
            let _ = write!(out, "[{tag}] {} ({mode}, {} case{})", r.check, r.cases, if r.cases == 1 { "" } else { "s" });
            if let Some(seed) = r.seed {
                let _ = write!(out, " seed={seed}");
            }
            if let Some(ms) = r.millis {
                let _ = write!(out, " {ms}ms");
            }
            out.push('\n');
            if let Some(d) = &r.detail {
                for line in d.lines() {
                    let _ = writeln!(out, "    {line}");
                }
            }
            if let Some(w) = &r.witness {
                for (i, line) in w.lines().enumerate() {
                    let _ = writeln!(out, "    {}{line}", if i == 0 { "witness: " } else { "         " });
                }
            }
        }
        out
    }
}
