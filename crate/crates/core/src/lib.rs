//! Finite, exactly checkable semantics of dependent type theories:
//! finite categories, presheaves and representable maps, the representable
//! map classifier and type structures, a small logical-framework kernel,
//! models over finite bases and the lifting calculus of theory morphisms.
//!
//! The crate is `no_std` (it needs `alloc`); file formats, corpus
//! generation and the command-line driver live in the `natmod` crate.

#![no_std]

extern crate alloc;

pub mod budget;
pub mod fincat;
pub mod homotopy;
pub mod lf;
pub mod models;
pub mod rfib;
pub mod structures;

pub use budget::{Budget, Verdict};
pub use fincat::{ArrowId, CategoryData, FiniteCategory, FunctorData, ObjId};
