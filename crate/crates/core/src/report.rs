//! Per-assertion verification reports.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::series::laurent::Comparison;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// Not enough digits or series precision to decide.
    Precision,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assertion {
    pub formula_tag: String,
    /// Exponent window `[lo, hi)` actually compared, for series identities.
    pub window: Option<(i64, i64)>,
    pub order: Option<u64>,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl Assertion {
    pub fn new(tag: impl Into<String>, ok: bool) -> Self {
        Assertion {
            formula_tag: tag.into(),
            window: None,
            order: None,
            status: if ok { Status::Pass } else { Status::Fail },
            witness: None,
        }
    }

    pub fn precision(tag: impl Into<String>, why: impl Into<String>) -> Self {
        Assertion { status: Status::Precision, witness: Some(why.into()), ..Assertion::new(tag, false) }
    }

    pub fn with_order(mut self, order: u64) -> Self {
        self.order = Some(order);
        self
    }

    pub fn with_window(mut self, lo: i64, hi: i64) -> Self {
        self.window = Some((lo, hi));
        self
    }

    pub fn with_witness(mut self, w: impl Into<String>) -> Self {
        self.witness = Some(w.into());
        self
    }

    /// Fold a windowwise comparison clipped to `[lo, hi)`. Laurent series
    /// vanish below their start, so only the top of the window can shrink;
    /// an empty window is a precision failure.
    pub fn from_comparison(tag: impl Into<String>, cmp: &Comparison, lo: i64, hi: i64) -> Self {
        let tag = tag.into();
        let top = cmp.hi.map_or(hi, |h| h.min(hi));
        let bottom = lo;
        if top <= bottom {
            return Assertion::precision(tag, format!("nothing known below t^{hi}"));
        }
        match cmp.first_mismatch {
            Some(e) if e < top => {
                Assertion::new(tag, false).with_window(bottom, top).with_witness(format!("first mismatch at t^{e}"))
            }
            _ => Assertion::new(tag, true).with_window(bottom, top),
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PipelineReport {
    pub name: String,
    pub assertions: Vec<Assertion>,
}

impl PipelineReport {
    pub fn new(name: impl Into<String>) -> Self {
        PipelineReport { name: name.into(), assertions: Vec::new() }
    }

    pub fn push(&mut self, a: Assertion) {
        self.assertions.push(a);
    }

    pub fn passed(&self) -> bool {
        self.assertions.iter().all(Assertion::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Assertion> {
        self.assertions.iter().filter(|a| !a.passed())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub pipelines: Vec<PipelineReport>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.pipelines.iter().all(PipelineReport::passed)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

impl fmt::Display for Assertion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = match self.status {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
            Status::Precision => "PRECISION",
        };
        write!(f, "{status:9} {}", self.formula_tag)?;
        if let Some((lo, hi)) = self.window {
            write!(f, " window=[{lo},{hi})")?;
        }
        if let Some(n) = self.order {
            write!(f, " order={n}")?;
        }
        if let Some(w) = &self.witness {
            write!(f, " ({w})")?;
        }
        Ok(())
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.pipelines {
            let n = p.assertions.len();
            let ok = p.assertions.iter().filter(|a| a.passed()).count();
            writeln!(f, "{} [{ok}/{n}]", p.name)?;
            for a in &p.assertions {
                writeln!(f, "  {a}")?;
            }
        }
        let total: usize = self.pipelines.iter().map(|p| p.assertions.len()).sum();
        let failed: usize = self.pipelines.iter().map(|p| p.failures().count()).sum();
        write!(f, "{} pipelines, {total} assertions, {failed} not passing", self.pipelines.len())
    }
}
