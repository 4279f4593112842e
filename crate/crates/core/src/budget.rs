//! Search budgets and three-valued verdicts.

use core::cell::Cell;

/// Outcome of a bounded search.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Verdict {
    Holds,
    Fails,
    /// The budget ran out before the search completed.
    Inconclusive,
}

impl Verdict {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Verdict::Holds
        } else {
            Verdict::Fails
        }
    }

    pub fn holds(self) -> bool {
        self == Verdict::Holds
    }

    /// Conjunction: `Fails` dominates `Inconclusive`, which dominates `Holds`.
    pub fn and(self, other: Verdict) -> Verdict {
        match (self, other) {
            (Verdict::Fails, _) | (_, Verdict::Fails) => Verdict::Fails,
            (Verdict::Inconclusive, _) | (_, Verdict::Inconclusive) => Verdict::Inconclusive,
            _ => Verdict::Holds,
        }
    }
}

/// A step counter shared by a search; once exhausted every further `tick`
/// fails.
#[derive(Debug)]
pub struct Budget {
    left: Cell<u64>,
    exhausted: Cell<bool>,
}

impl Budget {
    pub fn new(steps: u64) -> Self {
        Budget { left: Cell::new(steps), exhausted: Cell::new(false) }
    }

    pub fn unlimited() -> Self {
        Self::new(u64::MAX)
    }

    /// Consumes one step; returns `false` once the budget is spent.
    pub fn tick(&self) -> bool {
        let l = self.left.get();
        if l == 0 {
            self.exhausted.set(true);
            false
        } else {
            self.left.set(l - 1);
            true
        }
    }

    pub fn exhausted(&self) -> bool {
        self.exhausted.get()
    }

    pub fn remaining(&self) -> u64 {
        self.left.get()
    }
}

/// Error returned when a search gives up.
#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
#[error("search budget exhausted")]
pub struct OutOfBudget;
