//! A small corpus of models of the shipped signatures.

use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use super::build::{doubled_name, doubled_universe, structured_model, structured_model_with, terminal_model};
use super::data::ModelData;
use super::ModelError;
use crate::budget::Budget;
use crate::fincat::{build, FiniteCategory, ObjId};
use crate::lf::corpus::{shipped, SHIPPED};
use crate::lf::parse::parse_signature;
use crate::lf::syntax::{DeclKind, Signature};
use crate::rfib::classifier::rep_map_classifier;
use crate::rfib::presheaf::PshMap;
use crate::rfib::representable::is_representable_map;

#[derive(Clone, Debug)]
pub struct CorpusModel {
    pub name: String,
    pub sig_name: String,
    pub sig: Signature,
    pub model: ModelData,
}

/// The bases used by the corpus: `(name, category)`. The cospan base has
/// objects that no comprehension reaches.
pub fn corpus_bases() -> Vec<(&'static str, Arc<FiniteCategory>)> {
    vec![
        ("pt", Arc::new(build::terminal())),
        ("delta1", Arc::new(build::delta1())),
        ("chain3", Arc::new(build::chain(3))),
        ("cospan", Arc::new(build::poset(&["a", "b", "t"], &[(0, 2), (1, 2)]))),
    ]
}

/// The model of a signature with `Ty`, `El` interpreted by the generic
/// representable map of the base, with type formers from its structures.
pub fn omega_model(sig: &Signature, base: &Arc<FiniteCategory>, budget: u64) -> Result<ModelData, ModelError> {
    let cl = rep_map_classifier(base)?;
    let terminal = base.find_terminal().ok_or_else(|| ModelError::NoTerminal("base".into()))?;
    structured_model(sig, &cl.generic, terminal, Budget::new(budget))
}

/// `tthG` extended by a closed type `o`.
pub fn tthg_o() -> Signature {
    parse_signature("Ty : sort\nEl : (A : Ty) -> rep-sort\no : Ty\n").expect("signature parses")
}

/// The generic-map model of `tthG + o` over `base`, with `o` the element
/// `o_index` of `Omega` at the terminal object.
pub fn tthg_o_model(base: &Arc<FiniteCategory>, o_index: u32) -> Result<ModelData, ModelError> {
    let sig = tthg_o();
    let cl = rep_map_classifier(base)?;
    let terminal = base.find_terminal().ok_or_else(|| ModelError::NoTerminal("base".into()))?;
    let omega = cl.omega().clone();
    if o_index >= omega.size(terminal) {
        return Err(ModelError::Eval("no such closed type".into()));
    }
    let table: Vec<Vec<u32>> = base
        .objects()
        .map(|c| vec![omega.act(base.hom(c, terminal)[0], o_index)])
        .collect();
    structured_model_with(&sig, &cl.generic, terminal, Budget::new(0), &mut |b| {
        if b.next_decl().is_some_and(|d| d.name == "o") {
            b.constant_table(table.clone())?;
            return Ok(true);
        }
        Ok(false)
    })
}

/// Whether the signature only declares `Ty` and `El`.
fn is_bare(sig: &Signature) -> bool {
    sig.decls.len() == 2 && sig.decls.iter().all(|d| !matches!(d.kind, DeclKind::Term(_)))
}

/// Models of every shipped signature: generic-map models over the corpus
/// bases, their doubled universes, terminal models, and for `tthG` the
/// models of representable maps between representables. Combinations for
/// which no structure exists are skipped.
pub fn model_corpus(budget: u64) -> Vec<CorpusModel> {
    let mut out = Vec::new();
    for (sig_name, _) in SHIPPED {
        let sig = shipped(sig_name).expect("shipped signature");
        let mut push = |name: String, model: Result<ModelData, ModelError>| {
            if let Ok(model) = model {
                out.push(CorpusModel { name, sig_name: sig_name.to_string(), sig: sig.clone(), model });
            }
        };
        for (bname, base) in corpus_bases() {
            let om = omega_model(&sig, &base, budget);
            if let Ok(m) = &om {
                push(doubled_name(&alloc::format!("omega/{bname}")), doubled_universe(&sig, m));
            }
            push(alloc::format!("omega/{bname}"), om);
            if let Some(t) = base.find_terminal() {
                if bname != "cospan" {
                    push(alloc::format!("terminal/{bname}"), terminal_model(&sig, base.clone(), t));
                }
            }
        }
        if is_bare(&sig) {
            let base = Arc::new(build::delta1());
            for g in base.arrows() {
                let f = PshMap::yoneda_arrow(&base, g);
                if let Ok(rep) = is_representable_map(&f) {
                    let name = alloc::format!("yoneda/{}", base.arrow_name(g));
                    push(name, structured_model(&sig, &rep, ObjId(1), Budget::new(budget)));
                }
            }
        }
    }
    out.sort_by(|a, b| (&a.sig_name, &a.name).cmp(&(&b.sig_name, &b.name)));
    out
}
