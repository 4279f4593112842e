//! The unit of the syntactic-model / internal-language adjunction at
//! representables: the internal language of the syntactic model over `A`
//! evaluated at `B` against the substitutions `A -> B`.

use alloc::vec::Vec;

use super::syntactic::{syntactic_model, SyntacticModel};
use super::ModelError;
use crate::budget::Budget;
use crate::lf::check::Checker;
use crate::lf::enumerate::{enumerate_contexts, enumerate_substitutions, Bounds};
use crate::lf::syntax::{Context, Signature};

/// The comparison for one pair of contexts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitRow {
    pub a: Context,
    pub b: Context,
    /// Global elements of `b` in the syntactic model over `a`.
    pub il: usize,
    /// Substitutions `a -> b`.
    pub hom: usize,
    /// The two sets coincide as sets of substitutions.
    pub same_elements: bool,
    /// Substitutions `b -> b2` act compatibly on both sides, for every
    /// enumerated `b2`.
    pub action_matches: bool,
}

impl UnitRow {
    pub fn holds(&self) -> bool {
        self.il == self.hom && self.same_elements && self.action_matches
    }
}

/// Result of the comparison for every pair of enumerated contexts.
#[derive(Clone, Debug)]
pub struct UnitReport {
    pub rows: Vec<UnitRow>,
    /// Every syntactic model had all its objects reachable by comprehension.
    pub democratic: bool,
    pub complete: bool,
}

impl UnitReport {
    pub fn holds(&self) -> bool {
        self.democratic && self.rows.iter().all(UnitRow::holds)
    }
}

/// Every extension in the fragment is a comprehension of an object of the
/// fragment, so every object is contextual.
pub fn fragment_is_democratic(sm: &SyntacticModel) -> bool {
    (1..sm.objects.len()).all(|j| sm.parents[j].is_some()) && sm.objects.first() == Some(&sm.prefix)
}

/// Compares `IL(SM(A))(B)` with `hom(A, B)` for all contexts `A`, `B`
/// within `bounds`.
pub fn unit_at_representables(sig: &Signature, bounds: Bounds, fuel: &Budget) -> Result<UnitReport, ModelError> {
    let ch = Checker::new(sig, fuel);
    let ctxs = enumerate_contexts(sig, bounds, false, fuel)?;
    let mut complete = ctxs.complete;
    let mut democratic = true;
    let mut rows = Vec::new();
    // Substitutions between the enumerated contexts, shared by all `A`.
    let mut between = Vec::new();
    for b in &ctxs.items {
        let mut row = Vec::new();
        for b2 in &ctxs.items {
            let e = enumerate_substitutions(sig, b, b2, bounds.size, fuel)?;
            complete &= e.complete;
            row.push(e.items);
        }
        between.push(row);
    }
    for a in &ctxs.items {
        let sm = syntactic_model(sig, a, bounds, fuel)?;
        complete &= sm.complete;
        democratic &= fragment_is_democratic(&sm);
        let mut il = Vec::new();
        let mut homs = Vec::new();
        for b in &ctxs.items {
            il.push(sm.global_elements(b, fuel)?);
            let h = enumerate_substitutions(sig, a, b, bounds.size, fuel)?;
            complete &= h.complete;
            homs.push(h.items);
        }
        for (bi, b) in ctxs.items.iter().enumerate() {
            let to_hom: Vec<Option<usize>> = il[bi].iter().map(|e| homs[bi].iter().position(|s| s.terms == *e)).collect();
            let same_elements = il[bi].len() == homs[bi].len() && to_hom.iter().all(Option::is_some);
            let mut action_matches = same_elements;
            if same_elements {
                'outer: for (ci, b2) in ctxs.items.iter().enumerate() {
                    for tau in &between[bi][ci] {
                        let act = sm.global_action(b2, &il[bi], &il[ci], tau, fuel)?;
                        for (i, img) in act.iter().enumerate() {
                            let sigma = &homs[bi][to_hom[i].expect("checked above")];
                            let comp = ch.norm_subst(a, b2, &tau.then_after(sigma))?;
                            let expected = homs[ci].iter().position(|s| *s == comp);
                            let got = img.and_then(|j| homs[ci].iter().position(|s| s.terms == il[ci][j as usize]));
                            if expected != got {
                                action_matches = false;
                                break 'outer;
                            }
                        }
                    }
                }
            }
            rows.push(UnitRow {
                a: a.clone(),
                b: b.clone(),
                il: il[bi].len(),
                hom: homs[bi].len(),
                same_elements,
                action_matches,
            });
        }
    }
    Ok(UnitReport { rows, democratic, complete })
}
