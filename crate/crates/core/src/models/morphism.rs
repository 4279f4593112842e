//! Strict model morphisms: a functor of bases preserving the terminal
//! object, natural components for every sort compatible with parameters,
//! strictly preserved comprehension, and preserved constants.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::ControlFlow;

use super::data::{DeclInterp, ModelData};
use super::realize::{Env, Realized, Value};
use super::ModelError;
use crate::budget::Budget;
use crate::fincat::{FunctorData, ObjId};
use crate::lf::syntax::{ConstId, Context, DeclKind, Signature, Type};
use crate::rfib::presheaf::PshMap;
use crate::rfib::search::HomSearch;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ModelMorphism {
    pub functor: FunctorData,
    /// Per declaration: for sorts, the component at every stage.
    pub components: Vec<Option<Vec<Vec<u32>>>>,
}

impl ModelMorphism {
    pub fn identity(m: &ModelData) -> ModelMorphism {
        let components = m
            .decls
            .iter()
            .map(|d| match d {
                DeclInterp::Sort { total, .. } => Some(m.base.objects().map(|c| (0..total.size(c)).collect()).collect()),
                DeclInterp::Term { .. } => None,
            })
            .collect();
        ModelMorphism { functor: FunctorData::identity(&m.base), components }
    }

    /// `self` followed by `then`.
    pub fn then(&self, then: &ModelMorphism) -> ModelMorphism {
        let components = self
            .components
            .iter()
            .zip(&then.components)
            .map(|(a, b)| match (a, b) {
                (Some(a), Some(b)) => Some(
                    a.iter()
                        .enumerate()
                        .map(|(c, row)| row.iter().map(|&x| b[self.functor.objects[c].0][x as usize]).collect())
                        .collect(),
                ),
                _ => None,
            })
            .collect();
        ModelMorphism { functor: self.functor.then(&then.functor), components }
    }

    pub fn component(&self, s: ConstId, c: ObjId, x: u32) -> Option<u32> {
        self.components.get(s.0)?.as_ref()?.get(c.0)?.get(x as usize).copied()
    }
}

/// Transport of values along a (partial) morphism.
struct Mapper<'x, 'a> {
    m: &'x Realized<'a>,
    f: &'x ModelMorphism,
}

impl Mapper<'_, '_> {
    fn value(&self, ctx: &Context, env: &[Value], c: ObjId, ty: &Type, v: &Value) -> Result<Value, ModelError> {
        match (ty, v) {
            (Type::Sort(s, _), Value::Elem(x)) => self
                .f
                .component(*s, c, *x)
                .map(Value::Elem)
                .ok_or_else(|| ModelError::Eval("component out of range".into())),
            (Type::Pi(dom, cod), Value::Fun(b)) => {
                let (d, e) = self.m.extend_env(ctx, env, c, dom)?;
                let ctx2 = ctx.extended("x", (**dom).clone());
                Ok(Value::Fun(alloc::boxed::Box::new(self.value(&ctx2, &e, d, cod, b)?)))
            }
            _ => Err(ModelError::Eval("value does not match its type".into())),
        }
    }

    fn env(&self, ctx: &Context, env: &[Value], c: ObjId) -> Result<Env, ModelError> {
        let mut out = Vec::with_capacity(env.len());
        let mut pre = Context::new();
        for (b, v) in ctx.entries.iter().zip(env) {
            out.push(self.value(&pre, &env[..pre.len()], c, &b.ty, v)?);
            pre.entries.push(b.clone());
        }
        Ok(out)
    }

    /// The image of the telescope of `d` at every stage, as indices.
    fn params(&self, n: &Realized<'_>, d: ConstId) -> Result<Vec<Vec<u32>>, ModelError> {
        let cp = self.m.decl_params(d);
        let base = &*self.m.base;
        base.objects()
            .map(|c| {
                let fc = self.f.functor.on_object(c);
                cp.envs[c.0]
                    .iter()
                    .map(|env| {
                        let img = self.env(&cp.ctx, env, c)?;
                        n.decl_params(d).index_of(fc, &img).ok_or_else(|| ModelError::Eval("image environment missing".into()))
                    })
                    .collect()
            })
            .collect()
    }
}

/// The image under `f` of an environment of `ctx` at `c` in the source.
pub fn map_env(m: &Realized<'_>, f: &ModelMorphism, ctx: &Context, env: &[Value], c: ObjId) -> Result<Env, ModelError> {
    Mapper { m, f }.env(ctx, env, c)
}

fn fail(msg: String) -> ModelError {
    ModelError::NotAMorphism(msg)
}

/// Checks one declaration of a candidate morphism whose earlier
/// declarations are known to be correct.
fn check_decl(sig: &Signature, rm: &Realized<'_>, rn: &Realized<'_>, f: &ModelMorphism, k: usize) -> Result<(), ModelError> {
    let bm = &*rm.base;
    let fun = &f.functor;
    let d = &sig.decls[k];
    let map = Mapper { m: rm, f };
    let alpha = map.params(rn, ConstId(k)).map_err(|e| match e {
        ModelError::Eval(m) => fail(m),
        e => e,
    })?;
    match &d.kind {
        DeclKind::Sort | DeclKind::RepSort => {
            let s = ConstId(k);
            let (tm, tn) = (rm.sort_total(s)?, rn.sort_total(s)?);
            let comp = f.components.get(k).and_then(|x| x.as_ref()).ok_or_else(|| fail(format!("no component for `{}`", d.name)))?;
            for c in bm.objects() {
                let fc = fun.on_object(c);
                if comp.len() != bm.num_objects() || comp[c.0].len() != tm.size(c) as usize || comp[c.0].iter().any(|&y| y >= tn.size(fc)) {
                    return Err(fail(format!("component of `{}` has the wrong shape", d.name)));
                }
                for x in 0..tm.size(c) {
                    let y = comp[c.0][x as usize];
                    if rn.sort_params(s)?[fc.0][y as usize] != alpha[c.0][rm.sort_params(s)?[c.0][x as usize] as usize] {
                        return Err(fail(format!("`{}` does not preserve parameters at {}", d.name, bm.object_name(c))));
                    }
                }
            }
            for h in bm.arrows() {
                let (a, b) = (bm.src(h), bm.tgt(h));
                for x in 0..tm.size(b) {
                    if comp[a.0][tm.act(h, x) as usize] != tn.act(fun.on_arrow(h), comp[b.0][x as usize]) {
                        return Err(fail(format!("`{}` is not natural at {}", d.name, bm.arrow_name(h))));
                    }
                }
            }
            if d.kind == DeclKind::RepSort {
                let (pm, pn) = (rm.sort_rep(s)?, rn.sort_rep(s)?);
                for c in bm.objects() {
                    for y in 0..pm.cod().size(c) {
                        let w = pm.comprehension(c, y);
                        let wn = pn.comprehension(fun.on_object(c), alpha[c.0][y as usize]);
                        if fun.on_object(w.obj) != wn.obj
                            || fun.on_arrow(w.proj) != wn.proj
                            || comp[w.obj.0][w.generic as usize] != wn.generic
                        {
                            return Err(fail(format!("`{}`: comprehension not preserved at {}", d.name, bm.object_name(c))));
                        }
                    }
                }
            }
        }
        DeclKind::Term(Type::Sort(s, _)) => {
            let (tm, tn) = (rm.table(ConstId(k))?, rn.table(ConstId(k))?);
            for c in bm.objects() {
                let fc = fun.on_object(c);
                for (i, &x) in tm[c.0].iter().enumerate() {
                    if f.component(*s, c, x) != Some(tn[fc.0][alpha[c.0][i] as usize]) {
                        return Err(fail(format!("`{}` is not preserved at {}", d.name, bm.object_name(c))));
                    }
                }
            }
        }
        DeclKind::Term(_) => return Err(fail(format!("`{}` has no sort type", d.name))),
    }
    Ok(())
}

/// Checks a candidate morphism `m -> n`.
pub fn check_morphism(sig: &Signature, m: &ModelData, n: &ModelData, f: &ModelMorphism) -> Result<(), ModelError> {
    let rm = Realized::from_model(sig, m)?;
    let rn = Realized::from_model(sig, n)?;
    check_morphism_realized(sig, &rm, &rn, f)
}

pub fn check_morphism_realized(sig: &Signature, rm: &Realized<'_>, rn: &Realized<'_>, f: &ModelMorphism) -> Result<(), ModelError> {
    f.functor.validate(&rm.base, &rn.base).map_err(fail)?;
    if f.functor.on_object(rm.terminal) != rn.terminal {
        return Err(fail("the terminal object is not preserved".into()));
    }
    if f.components.len() != sig.decls.len() {
        return Err(fail("components do not match the declarations".into()));
    }
    for k in 0..sig.decls.len() {
        check_decl(sig, rm, rn, f, k)?;
    }
    Ok(())
}

struct Search<'x, 'a> {
    sig: &'a Signature,
    rm: &'x Realized<'a>,
    rn: &'x Realized<'a>,
    budget: &'x Budget,
    limit: usize,
}

impl Search<'_, '_> {
    fn go(&self, k: usize, f: &mut ModelMorphism, out: &mut Vec<ModelMorphism>) -> Result<ControlFlow<()>, ModelError> {
        if out.len() >= self.limit {
            return Ok(ControlFlow::Break(()));
        }
        if k == self.sig.decls.len() {
            out.push(f.clone());
            return Ok(if out.len() >= self.limit { ControlFlow::Break(()) } else { ControlFlow::Continue(()) });
        }
        let d = &self.sig.decls[k];
        if let DeclKind::Term(_) = d.kind {
            return match check_decl(self.sig, self.rm, self.rn, f, k) {
                Ok(()) => self.go(k + 1, f, out),
                Err(ModelError::NotAMorphism(_)) => Ok(ControlFlow::Continue(())),
                Err(e) => Err(e),
            };
        }
        let s = ConstId(k);
        let bm = &self.rm.base;
        let fun = f.functor.clone();
        let alpha = match (Mapper { m: self.rm, f }).params(self.rn, s) {
            Ok(a) => a,
            Err(ModelError::Eval(_)) => return Ok(ControlFlow::Continue(())),
            Err(e) => return Err(e),
        };
        let tm = self.rm.sort_total(s)?;
        let pm = self.rm.sort_params(s)?;
        let cp_n = self.rn.decl_params(s).presheaf.restrict(bm, &fun);
        let comps: Vec<Vec<u32>> =
            bm.objects().map(|c| pm[c.0].iter().map(|&y| alpha[c.0][y as usize]).collect()).collect();
        let Ok(p) = PshMap::new(tm.clone(), cp_n, comps) else { return Ok(ControlFlow::Continue(())) };
        let tn = self.rn.sort_total(s)?.restrict(bm, &fun);
        let q = PshMap::new(
            self.rn.sort_total(s)?.clone(),
            self.rn.decl_params(s).presheaf.clone(),
            self.rn.sort_params(s)?.to_vec(),
        )?
        .restrict(bm, &fun);
        let mut fixed: Vec<Vec<Option<u32>>> = bm.objects().map(|c| vec![None; tm.size(c) as usize]).collect();
        if d.kind == DeclKind::RepSort {
            let (rep_m, rep_n) = (self.rm.sort_rep(s)?, self.rn.sort_rep(s)?);
            for c in bm.objects() {
                for y in 0..rep_m.cod().size(c) {
                    let w = rep_m.comprehension(c, y);
                    let wn = rep_n.comprehension(fun.on_object(c), alpha[c.0][y as usize]);
                    if fun.on_object(w.obj) != wn.obj || fun.on_arrow(w.proj) != wn.proj {
                        return Ok(ControlFlow::Continue(()));
                    }
                    let slot = &mut fixed[w.obj.0][w.generic as usize];
                    match slot {
                        Some(v) if *v != wn.generic => return Ok(ControlFlow::Continue(())),
                        _ => *slot = Some(wn.generic),
                    }
                }
            }
        }
        let mut err = None;
        let mut flow = ControlFlow::Continue(());
        HomSearch::new(tm, &tn).over(&p, &q).fixed(&fixed).for_each(self.budget, |map| {
            f.components[k] = Some(map.components().to_vec());
            match self.go(k + 1, f, out) {
                Ok(ControlFlow::Continue(())) => ControlFlow::Continue(()),
                Ok(ControlFlow::Break(())) => {
                    flow = ControlFlow::Break(());
                    ControlFlow::Break(())
                }
                Err(e) => {
                    err = Some(e);
                    ControlFlow::Break(())
                }
            }
        })?;
        f.components[k] = None;
        if let Some(e) = err {
            return Err(e);
        }
        Ok(flow)
    }
}

/// All morphisms `m -> n` (at most `limit`), in order of the functor then
/// the components.
pub fn find_morphisms(
    sig: &Signature,
    m: &ModelData,
    n: &ModelData,
    limit: usize,
    budget: &Budget,
) -> Result<Vec<ModelMorphism>, ModelError> {
    let rm = Realized::from_model(sig, m)?;
    let rn = Realized::from_model(sig, n)?;
    find_morphisms_realized(sig, &rm, &rn, limit, budget)
}

pub fn find_morphisms_realized(
    sig: &Signature,
    rm: &Realized<'_>,
    rn: &Realized<'_>,
    limit: usize,
    budget: &Budget,
) -> Result<Vec<ModelMorphism>, ModelError> {
    let search = Search { sig, rm, rn, budget, limit };
    let mut out = Vec::new();
    for functor in FunctorData::enumerate(&rm.base, &rn.base, usize::MAX) {
        if !budget.tick() {
            return Err(ModelError::OutOfBudget);
        }
        if functor.on_object(rm.terminal) != rn.terminal {
            continue;
        }
        let mut f = ModelMorphism { functor, components: vec![None; sig.decls.len()] };
        if search.go(0, &mut f, &mut out)?.is_break() {
            break;
        }
    }
    Ok(out)
}
