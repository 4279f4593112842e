//! Contextual objects, democracy and the heart of a model.

use alloc::collections::BTreeSet;
use alloc::sync::Arc;
use alloc::vec::Vec;

use super::data::{DeclInterp, ModelData};
use super::morphism::ModelMorphism;
use super::realize::Realized;
use super::ModelError;
use crate::fincat::{ArrowId, ObjId};
use crate::lf::syntax::{ConstId, Signature};
use crate::rfib::representable::{Comprehension, ComprehensionWitness};

/// Objects reachable from the terminal object by iterated comprehension,
/// closed under isomorphism; sorted.
pub fn contextual_objects(sig: &Signature, m: &ModelData) -> Result<Vec<ObjId>, ModelError> {
    let r = Realized::from_model(sig, m)?;
    let base = &*m.base;
    let mut seen: BTreeSet<ObjId> = BTreeSet::new();
    let mut todo = alloc::vec![m.terminal];
    seen.insert(m.terminal);
    while let Some(c) = todo.pop() {
        for (s, d) in sig.decls.iter().enumerate() {
            if d.kind != crate::lf::syntax::DeclKind::RepSort {
                continue;
            }
            let rep = r.sort_rep(ConstId(s))?;
            for y in 0..rep.cod().size(c) {
                let w = rep.comprehension(c, y);
                if seen.insert(w.obj) {
                    todo.push(w.obj);
                }
            }
        }
    }
    let mut out: BTreeSet<ObjId> = seen.clone();
    for o in base.objects() {
        if seen.iter().any(|&c| base.find_iso(o, c).is_some()) {
            out.insert(o);
        }
    }
    Ok(out.into_iter().collect())
}

/// Whether every object is contextual.
pub fn is_democratic(sig: &Signature, m: &ModelData) -> Result<bool, ModelError> {
    Ok(contextual_objects(sig, m)?.len() == m.base.num_objects())
}

/// The heart: the restriction of the model to its contextual objects,
/// with its inclusion into the model.
pub fn heart(sig: &Signature, m: &ModelData) -> Result<(ModelData, ModelMorphism), ModelError> {
    let keep = contextual_objects(sig, m)?;
    let (sub, inc) = m.base.full_subcategory(&keep);
    let sub = Arc::new(sub);
    let f = inc.as_functor();
    let obj_pos = |o: ObjId| keep.iter().position(|&k| k == o).map(ObjId);
    let arr_pos = |a: ArrowId| inc.arrows.iter().position(|&k| k == a).map(ArrowId);
    let rows = |t: &Vec<Vec<u32>>| keep.iter().map(|o| t[o.0].clone()).collect::<Vec<_>>();
    let mut decls = Vec::with_capacity(m.decls.len());
    let mut comps = Vec::with_capacity(m.decls.len());
    for d in &m.decls {
        match d {
            DeclInterp::Sort { total, params, witness } => {
                let witness = match witness {
                    None => None,
                    Some(w) => {
                        let entries = keep
                            .iter()
                            .map(|o| {
                                w.entries[o.0]
                                    .iter()
                                    .map(|x| {
                                        Some(Comprehension { obj: obj_pos(x.obj)?, proj: arr_pos(x.proj)?, generic: x.generic })
                                    })
                                    .collect::<Option<Vec<_>>>()
                            })
                            .collect::<Option<Vec<_>>>()
                            .ok_or_else(|| ModelError::Eval("a comprehension leaves the contextual objects".into()))?;
                        Some(ComprehensionWitness { entries })
                    }
                };
                comps.push(Some(keep.iter().map(|o| (0..total.size(*o)).collect()).collect()));
                let total = total.restrict(&sub, &f);
                decls.push(DeclInterp::Sort { total, params: rows(params), witness });
            }
            DeclInterp::Term { table } => {
                comps.push(None);
                decls.push(DeclInterp::Term { table: rows(table) });
            }
        }
    }
    let h = ModelData { base: sub, terminal: obj_pos(m.terminal).expect("terminal is contextual"), decls };
    Ok((h, ModelMorphism { functor: f, components: comps }))
}
