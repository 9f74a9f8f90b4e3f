//! Outcome of the semi-decidable probes.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::pairing::{PairedPoint, Vector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    /// Certified for every input, not only the sampled ones.
    Holds,
    /// No counterexample on the probe grid.
    HoldsAtResolution,
    /// Refuted; the report carries a reproducible witness.
    Fails,
    /// A violation was seen through a one-sided bound and could not be confirmed.
    PossibleFail,
    /// The hypotheses of the check are not met.
    Inapplicable,
    /// The check itself could not run. Only produced by the batch front end.
    Error,
}

impl Verdict {
    pub fn passed(self) -> bool {
        matches!(self, Verdict::Holds | Verdict::HoldsAtResolution)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Verdict::Holds => "HOLDS",
            Verdict::HoldsAtResolution => "HOLDS_AT_RESOLUTION",
            Verdict::Fails => "FAILS",
            Verdict::PossibleFail => "POSSIBLE_FAIL",
            Verdict::Inapplicable => "INAPPLICABLE",
            Verdict::Error => "ERROR",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Witness {
    Point { point: PairedPoint },
    Pair { first: PairedPoint, second: PairedPoint },
    Vector { coords: Vec<f64> },
}

impl Witness {
    pub fn vector(v: &Vector) -> Self {
        Witness::Vector {
            coords: v.iter().copied().collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    pub tol: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resolution: Option<f64>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub extremes: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub note: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub details: Vec<CheckReport>,
}

impl CheckReport {
    pub fn new(verdict: Verdict, tol: f64) -> Self {
        CheckReport {
            verdict,
            witness: None,
            tol,
            resolution: None,
            extremes: BTreeMap::new(),
            note: String::new(),
            details: Vec::new(),
        }
    }

    pub fn with_witness(mut self, w: Witness) -> Self {
        self.witness = Some(w);
        self
    }

    pub fn with_resolution(mut self, res: f64) -> Self {
        self.resolution = Some(res);
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = note.into();
        self
    }

    pub fn with_extreme(mut self, name: &str, value: f64) -> Self {
        self.extremes.insert(name.to_string(), value);
        self
    }

    pub fn with_details(mut self, details: Vec<CheckReport>) -> Self {
        self.details = details;
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict.passed()
    }
}
