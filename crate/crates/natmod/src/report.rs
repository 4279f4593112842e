//! Machine-readable reports: fixed field order, inputs keyed by content
//! hash, budgets and seed recorded, one overall outcome.

use serde::Serialize;

/// Overall outcome of a run; determines the exit status.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Pass,
    Fail,
    Malformed,
    Inconclusive,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Pass => 0,
            Outcome::Fail => 1,
            Outcome::Malformed => 2,
            Outcome::Inconclusive => 3,
        }
    }

    pub fn from_bool(b: bool) -> Self {
        if b {
            Outcome::Pass
        } else {
            Outcome::Fail
        }
    }

    /// Combination of independent verdicts: malformed input dominates,
    /// then failure, then inconclusiveness.
    pub fn and(self, other: Outcome) -> Outcome {
        let rank = |o: Outcome| match o {
            Outcome::Pass => 0,
            Outcome::Inconclusive => 1,
            Outcome::Fail => 2,
            Outcome::Malformed => 3,
        };
        if rank(other) > rank(self) {
            other
        } else {
            self
        }
    }
}

impl From<natmod_core::budget::Verdict> for Outcome {
    fn from(v: natmod_core::budget::Verdict) -> Self {
        match v {
            natmod_core::budget::Verdict::Holds => Outcome::Pass,
            natmod_core::budget::Verdict::Fails => Outcome::Fail,
            natmod_core::budget::Verdict::Inconclusive => Outcome::Inconclusive,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Budgets {
    pub depth: usize,
    pub fuel: u64,
    pub iso_budget: u64,
}

/// An input file, identified by its name and content hash.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InputRef {
    pub name: String,
    pub sha256: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub subcommand: String,
    pub seed: u64,
    pub budgets: Budgets,
    pub inputs: Vec<InputRef>,
    pub outcome: Outcome,
    /// Error message for malformed input or exhausted budgets.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub result: serde_json::Value,
}

impl Report {
    pub fn to_json(&self) -> String {
        crate::formats::to_json(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn outcome_combination() {
        use Outcome::*;
        assert_eq!(Pass.and(Inconclusive), Inconclusive);
        assert_eq!(Inconclusive.and(Fail), Fail);
        assert_eq!(Fail.and(Malformed), Malformed);
        assert_eq!(Pass.and(Pass), Pass);
        assert_eq!([Pass, Fail, Malformed, Inconclusive].map(Outcome::exit_code), [0, 1, 2, 3]);
    }
}
