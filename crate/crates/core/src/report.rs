//! Machine-readable verifier reports.
//!
//! Every congruence verifier produces a list of [`CheckReport`]s that
//! serialize deterministically to JSON. Numeric payloads that may exceed
//! 2^53 are carried as decimal strings.

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

/// A single violated (or reported) entry of a congruence check.
#[derive(Debug, Clone, Serialize)]
pub struct Witness {
    pub row: String,
    pub col: String,
    pub found_valuation: u32,
    pub required_valuation: u32,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub congruence: String,
    pub p: String,
    pub s: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<String>,
    pub region: String,
    pub status: Status,
    pub witnesses: Vec<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CheckReport {
    pub fn new(congruence: impl Into<String>, p: u64, s: u32, region: impl Into<String>) -> Self {
        CheckReport {
            congruence: congruence.into(),
            p: p.to_string(),
            s,
            m: None,
            region: region.into(),
            status: Status::Pass,
            witnesses: Vec::new(),
            note: None,
        }
    }

    pub fn with_m(mut self, m: u64) -> Self {
        self.m = Some(m.to_string());
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn fail(mut self, witnesses: Vec<Witness>) -> Self {
        self.status = Status::Fail;
        self.witnesses = witnesses;
        self
    }

    pub fn skipped(mut self, reason: impl Into<String>) -> Self {
        self.status = Status::Skipped;
        self.note = Some(reason.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// Worst status across reports: any Fail wins, else any Skip, else Pass.
pub fn overall_status(reports: &[CheckReport]) -> Status {
    if reports.iter().any(|r| r.status == Status::Fail) {
        Status::Fail
    } else if reports.iter().any(|r| r.status == Status::Skipped) {
        Status::Skipped
    } else {
        Status::Pass
    }
}
