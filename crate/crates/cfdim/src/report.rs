//! Machine-readable verification reports.

use serde::{Deserialize, Serialize};

/// Schema tag of serialized reports.
pub const REPORT_SCHEMA: &str = "cfdim/report/v1";

/// One fixed-bound check: `pass ⇔ lo ≤ statistic ≤ hi`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    /// Check name.
    pub name: String,
    /// Observed statistic.
    pub statistic: f64,
    /// Inclusive lower bound, if any.
    pub lo: Option<f64>,
    /// Inclusive upper bound, if any.
    pub hi: Option<f64>,
    /// Verdict.
    pub pass: bool,
}

impl Check {
    /// A check of `statistic ∈ [lo, hi]`.
    pub fn within(name: impl Into<String>, statistic: f64, lo: Option<f64>, hi: Option<f64>) -> Self {
        let pass = !statistic.is_nan() && lo.map_or(true, |l| statistic >= l) && hi.map_or(true, |h| statistic <= h);
        Check {
            name: name.into(),
            statistic,
            lo,
            hi,
            pass,
        }
    }

    /// A failure count that must be zero.
    pub fn zero_failures(name: impl Into<String>, failures: u64) -> Self {
        Check::within(name, failures as f64, None, Some(0.0))
    }
}

/// Pass/fail counts.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    /// Checks that passed.
    pub passed: usize,
    /// Checks that failed.
    pub failed: usize,
}

/// A plot-ready numeric table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Series {
    /// Series name.
    pub name: String,
    /// Column headers.
    pub columns: Vec<String>,
    /// Rows (same width as `columns`).
    pub rows: Vec<Vec<f64>>,
}

/// The result of a verification suite.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    /// Schema tag.
    pub schema: String,
    /// Suite name.
    pub suite: String,
    /// Checks in order.
    pub checks: Vec<Check>,
    /// Counts.
    pub summary: Summary,
    /// Supporting series.
    pub series: Vec<Series>,
}

impl Report {
    /// Empty report for `suite`.
    pub fn new(suite: impl Into<String>) -> Self {
        Report {
            schema: REPORT_SCHEMA.to_string(),
            suite: suite.into(),
            checks: Vec::new(),
            summary: Summary::default(),
            series: Vec::new(),
        }
    }

    /// Append a check and update the summary.
    pub fn push(&mut self, c: Check) {
        if c.pass {
            self.summary.passed += 1;
        } else {
            self.summary.failed += 1;
        }
        self.checks.push(c);
    }

    /// Append a series.
    pub fn add_series(&mut self, s: Series) {
        self.series.push(s);
    }

    /// True when every check passed.
    pub fn passed(&self) -> bool {
        self.summary.failed == 0
    }

    /// Look up a check by name.
    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}
