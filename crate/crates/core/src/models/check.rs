//! Clause-by-clause model checking.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use super::data::{DeclInterp, ModelData};
use super::realize::Realized;
use super::ModelError;
use crate::budget::Budget;
use crate::lf::syntax::{DeclKind, Signature};

/// The conditions a model must satisfy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Clause {
    /// The chosen object is terminal.
    Terminal,
    /// Every sort is a right fibration over its parameter telescope.
    Fibrations,
    /// Every term constant is a natural section of the right fiber.
    Constants,
    /// Every representable sort carries a correct comprehension witness.
    Comprehension,
    /// Every rule holds on all environments.
    Equations,
}

impl Clause {
    pub const ALL: [Clause; 5] = [Clause::Terminal, Clause::Fibrations, Clause::Constants, Clause::Comprehension, Clause::Equations];

    pub fn name(self) -> &'static str {
        match self {
            Clause::Terminal => "terminal",
            Clause::Fibrations => "fibrations",
            Clause::Constants => "constants",
            Clause::Comprehension => "comprehension",
            Clause::Equations => "equations",
        }
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClauseVerdict {
    Holds,
    Fails(String),
    /// Not reached because an earlier check failed.
    NotChecked,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelReport {
    pub clauses: Vec<(Clause, ClauseVerdict)>,
}

impl ModelReport {
    pub fn is_model(&self) -> bool {
        self.clauses.iter().all(|(_, v)| *v == ClauseVerdict::Holds)
    }

    pub fn verdict(&self, c: Clause) -> &ClauseVerdict {
        &self.clauses.iter().find(|(k, _)| *k == c).expect("every clause is reported").1
    }

    /// The first failing clause.
    pub fn failure(&self) -> Option<(Clause, &str)> {
        self.clauses.iter().find_map(|(c, v)| match v {
            ClauseVerdict::Fails(m) => Some((*c, m.as_str())),
            _ => None,
        })
    }
}

fn clause_of(sig: &Signature, decl: usize, e: &ModelError) -> Clause {
    match e {
        ModelError::NoTerminal(_) => Clause::Terminal,
        ModelError::MissingWitness(_) | ModelError::BadWitness { .. } => Clause::Comprehension,
        ModelError::NotRightFibration { .. } => Clause::Fibrations,
        ModelError::NotNatural { .. } | ModelError::IllTyped { .. } => Clause::Constants,
        ModelError::Equation { .. } => Clause::Equations,
        _ => match sig.decls.get(decl).map(|d| &d.kind) {
            Some(DeclKind::Term(_)) => Clause::Constants,
            _ => Clause::Fibrations,
        },
    }
}

fn concerns(sig: &Signature, decl: usize, c: Clause) -> bool {
    matches!(
        (&sig.decls[decl].kind, c),
        (DeclKind::Sort | DeclKind::RepSort, Clause::Fibrations) | (DeclKind::RepSort, Clause::Comprehension) | (DeclKind::Term(_), Clause::Constants)
    )
}

/// Checks every clause; clauses whose checks were cut short by an earlier
/// failure are reported as not checked.
pub fn check_model(sig: &Signature, m: &ModelData, fuel: &Budget) -> ModelReport {
    let mut verdicts: Vec<(Clause, ClauseVerdict)> = Clause::ALL.iter().map(|&c| (c, ClauseVerdict::NotChecked)).collect();
    let set = |v: &mut Vec<(Clause, ClauseVerdict)>, c: Clause, x: ClauseVerdict| {
        v.iter_mut().find(|(k, _)| *k == c).expect("clause").1 = x;
    };
    let mut r = match Realized::new(sig, m.base.clone(), m.terminal) {
        Ok(r) => r,
        Err(e) => {
            set(&mut verdicts, Clause::Terminal, ClauseVerdict::Fails(format!("{e}")));
            return ModelReport { clauses: verdicts };
        }
    };
    set(&mut verdicts, Clause::Terminal, ClauseVerdict::Holds);
    if m.decls.len() != sig.decls.len() {
        let msg = format!("{} interpretations for {} declarations", m.decls.len(), sig.decls.len());
        set(&mut verdicts, Clause::Fibrations, ClauseVerdict::Fails(msg));
        return ModelReport { clauses: verdicts };
    }
    for (i, d) in m.decls.iter().enumerate() {
        let res = match d {
            DeclInterp::Sort { total, params, witness } => r.push_sort(total.clone(), params.clone(), witness.clone()),
            DeclInterp::Term { table } => r.push_constant(table.clone()),
        };
        if let Err(e) = res {
            let failed = clause_of(sig, i, &e);
            set(&mut verdicts, failed, ClauseVerdict::Fails(format!("{e}")));
            // Clauses with no pending checks at or after the failure hold.
            for c in [Clause::Fibrations, Clause::Constants, Clause::Comprehension] {
                if c == failed {
                    continue;
                }
                let passed_here = c == Clause::Fibrations && failed == Clause::Comprehension;
                let pending = (i..sig.decls.len()).any(|j| concerns(sig, j, c) && !(j == i && passed_here));
                if !pending {
                    set(&mut verdicts, c, ClauseVerdict::Holds);
                }
            }
            return ModelReport { clauses: verdicts };
        }
    }
    for c in [Clause::Fibrations, Clause::Constants, Clause::Comprehension] {
        set(&mut verdicts, c, ClauseVerdict::Holds);
    }
    for k in 0..sig.rules.len() {
        if let Err(e) = r.check_rule(k, fuel) {
            set(&mut verdicts, Clause::Equations, ClauseVerdict::Fails(format!("{e}")));
            return ModelReport { clauses: verdicts };
        }
    }
    set(&mut verdicts, Clause::Equations, ClauseVerdict::Holds);
    ModelReport { clauses: verdicts }
}
