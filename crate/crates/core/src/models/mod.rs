//! Models of a signature over finite bases: interpretation and checking,
//! model morphisms, contextual objects and hearts, internal languages,
//! and bounded syntactic models.
//!
//! A model interprets each sort as a presheaf with a map to the
//! interpretation of its parameter telescope (a right fibration), each
//! representable sort additionally with a comprehension witness, and each
//! term constant as a table over the interpretation of its telescope.
//! Contexts are interpreted by iterated comprehension: an element of
//! `[[Gamma]]` at stage `c` is an environment of [`Value`]s.

pub mod build;
pub mod check;
pub mod correspondence;
pub mod corpus;
pub mod data;
pub mod heart;
pub mod morphism;
pub mod realize;
pub mod syntactic;
pub mod theory;

use alloc::string::String;

use crate::lf::TypeError;
use crate::rfib::RfibError;

pub use build::{doubled_universe, structured_model, terminal_model, ModelBuilder};
pub use check::{check_model, Clause, ClauseVerdict, ModelReport};
pub use data::{DeclInterp, ModelData};
pub use heart::{contextual_objects, heart, is_democratic};
pub use morphism::{check_morphism, find_morphisms, map_env, ModelMorphism};
pub use realize::{ContextPsh, Env, Realized, Value};
pub use syntactic::{initial_model, morphism_from_initial, syntactic_model, FragmentMorphism, SynElem, SyntacticModel};
pub use theory::{internal_language, TheoryData};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("the chosen object {0} is not terminal")]
    NoTerminal(String),
    #[error("`{decl}`: {detail}")]
    Shape { decl: String, detail: String },
    #[error("`{decl}` is not a right fibration over its parameters: {detail}")]
    NotRightFibration { decl: String, detail: String },
    #[error("`{decl}` is not a natural section: {detail}")]
    NotNatural { decl: String, detail: String },
    #[error("`{decl}` lands in the wrong fiber: {detail}")]
    IllTyped { decl: String, detail: String },
    #[error("`{0}` has no comprehension witness")]
    MissingWitness(String),
    #[error("`{decl}` has a wrong comprehension witness: {detail}")]
    BadWitness { decl: String, detail: String },
    #[error("rule `{rule}` fails: {detail}")]
    Equation { rule: String, detail: String },
    #[error("no interpretation recipe for `{0}`")]
    NoRecipe(String),
    #[error("evaluation failed: {0}")]
    Eval(String),
    #[error(transparent)]
    Rfib(#[from] RfibError),
    #[error(transparent)]
    Type(#[from] TypeError),
    #[error("not a morphism: {0}")]
    NotAMorphism(String),
    #[error("search budget exhausted")]
    OutOfBudget,
}

impl From<crate::budget::OutOfBudget> for ModelError {
    fn from(_: crate::budget::OutOfBudget) -> Self {
        ModelError::OutOfBudget
    }
}
