//! File formats, seeded corpus generation, reports, the acceptance suite
//! and the command-line driver for `natmod-core`.

pub mod acceptance;
pub mod cli;
pub mod corpus;
pub mod error;
pub mod formats;
pub mod report;

pub use error::NatmodError;
