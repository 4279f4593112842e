//! Raw model data: one interpretation per declaration, in signature order.

use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::fincat::{FiniteCategory, ObjId};
use crate::rfib::presheaf::Presheaf;
use crate::rfib::representable::ComprehensionWitness;

/// Interpretation of one declaration.
///
/// Parameter indices refer to the canonical enumeration of the
/// interpretation of the declaration's telescope (see
/// [`super::realize::Realized::interpret_context`]).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DeclInterp {
    /// A sort: its total presheaf, for every stage and element the index of
    /// its parameter environment, and (for representable sorts) the
    /// comprehension of every parameter environment.
    Sort { total: Presheaf, params: Vec<Vec<u32>>, witness: Option<ComprehensionWitness> },
    /// A term constant: for every stage and parameter environment, the
    /// element of the result sort.
    Term { table: Vec<Vec<u32>> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelData {
    pub base: Arc<FiniteCategory>,
    pub terminal: ObjId,
    pub decls: Vec<DeclInterp>,
}

impl ModelData {
    /// The same model with the witness of declaration `decl` removed.
    pub fn without_witness(&self, decl: usize) -> ModelData {
        let mut m = self.clone();
        if let Some(DeclInterp::Sort { witness, .. }) = m.decls.get_mut(decl) {
            *witness = None;
        }
        m
    }
}
