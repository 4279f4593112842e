//! The internal language of a model, restricted to enumerated contexts:
//! the global elements of every context and the action of substitutions.

use alloc::vec::Vec;

use super::data::ModelData;
use super::realize::{Env, Realized};
use super::ModelError;
use crate::budget::Budget;
use crate::lf::enumerate::{enumerate_contexts, Bounds};
use crate::lf::syntax::{Context, Signature, Substitution};

/// A finite fragment of the internal language: for every enumerated context
/// its global elements.
#[derive(Clone, Debug)]
pub struct TheoryData {
    pub bounds: Bounds,
    pub contexts: Vec<Context>,
    pub elements: Vec<Vec<Env>>,
    /// False when context enumeration ran out of fuel.
    pub complete: bool,
}

impl TheoryData {
    /// Position of a context, ignoring binder names.
    pub fn index_of(&self, ctx: &Context) -> Option<usize> {
        self.contexts.iter().position(|c| c.len() == ctx.len() && c.types().eq(ctx.types()))
    }

    /// The action of `s : delta -> gamma`, sending the global elements of
    /// `delta` to those of `gamma` (as indices).
    pub fn action(&self, r: &Realized<'_>, delta: usize, gamma: usize, s: &Substitution) -> Result<Vec<u32>, ModelError> {
        let (dc, gc) = (&self.contexts[delta], &self.contexts[gamma]);
        self.elements[delta]
            .iter()
            .map(|env| {
                let img = r.eval_subst(dc, gc, env, r.terminal, &s.terms)?;
                self.elements[gamma]
                    .iter()
                    .position(|e| *e == img)
                    .map(|i| i as u32)
                    .ok_or_else(|| ModelError::Eval("image is not a global element".into()))
            })
            .collect()
    }
}

/// Global elements of all contexts within `bounds`.
pub fn internal_language(sig: &Signature, m: &ModelData, bounds: Bounds, fuel: &Budget) -> Result<TheoryData, ModelError> {
    let r = Realized::from_model(sig, m)?;
    let ctxs = enumerate_contexts(sig, bounds, false, fuel)?;
    let elements = ctxs.items.iter().map(|c| r.global_elements(c)).collect::<Result<Vec<_>, _>>()?;
    Ok(TheoryData { bounds, contexts: ctxs.items, elements, complete: ctxs.complete })
}
