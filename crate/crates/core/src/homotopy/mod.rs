//! The computable layer of the homotopy theory of theories: display maps
//! and Id-homotopy equivalences in models, generating cofibrations and
//! pushouts along them on presentations, and trivial fibrations via type
//! and term lifting.

pub mod cofibration;
pub mod display;
pub mod lifting;

use alloc::string::String;

use crate::lf::TypeError;
use crate::models::ModelError;
use crate::rfib::RfibError;

pub use cofibration::{
    check_pushout_property, generating_cofibration, isomorphic_extensions, pushout_cofibration, Attachment, CofTop,
    CofibrationPresentation, GeneratingCofibration, PushoutCheck,
};
pub use display::{closed_presentation, display_maps, weak_equivalence, ClosedPresentation, HomotopyInverse};
pub use lifting::{is_trivial_fibration, lifting_verdict, objects_within, rlp_verdict, LiftFailure, LiftingVerdict, RlpVerdict, TrivialFibrationReport};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum HomotopyError {
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("ill-typed attachment: {0}")]
    Attachment(String),
    #[error("search budget exhausted")]
    OutOfBudget,
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Type(#[from] TypeError),
    #[error(transparent)]
    Rfib(#[from] RfibError),
}
