//! Right fibrations over a finite base, realized as presheaves of finite
//! sets: limits, representable maps and comprehension, pushforward,
//! polynomial functors, the representable map classifier and univalence.

use alloc::string::String;

pub mod classifier;
pub mod enumerate;
pub mod limits;
pub mod poly;
pub mod presheaf;
pub mod pushforward;
pub mod representable;
pub mod search;
pub mod univalence;

pub use classifier::{classify, pull_generic, rep_map_classifier, Classifier};
pub use limits::{equalizer, product, psh_limit, pullback, Diagram, Limit, Pullback};
pub use poly::{composition_comparison, polynomial_apply, polynomial_apply_map, polynomial_compose, polynomial_compose_parts, PolyValue};
pub use presheaf::{Elem, Presheaf, PshMap};
pub use pushforward::{pushforward, Pushforward};
pub use representable::{
    is_representable, is_representable_map, Comprehension, ComprehensionWitness, RepMap,
};
pub use search::{find_iso, find_iso_over, hom_maps, HomSearch, MapKind};
pub use univalence::{equiv_presheaf, is_univalent, EquivPresheaf, Univalence};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum RfibError {
    #[error("presheaves live over different bases")]
    BaseMismatch,
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("action is not functorial at {arrow}: {detail}")]
    NotFunctorial { arrow: String, detail: String },
    #[error("naturality fails at arrow {arrow} on element {element}")]
    NotNatural { arrow: String, element: u32 },
    #[error("map is not representable: element {element} over {object} has no comprehension")]
    NotRepresentable { object: String, element: u32 },
    #[error("comprehension witness is wrong at element {element} over {object}")]
    BadWitness { object: String, element: u32 },
    #[error("unclassifiable: comprehension {arrow} of element {element} over {object} is not pullback-stable")]
    Unclassifiable { object: String, element: u32, arrow: String },
    #[error("search budget exhausted")]
    OutOfBudget,
}

impl From<crate::budget::OutOfBudget> for RfibError {
    fn from(_: crate::budget::OutOfBudget) -> Self {
        RfibError::OutOfBudget
    }
}
