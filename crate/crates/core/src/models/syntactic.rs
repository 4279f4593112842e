//! Bounded fragments of syntactic models.
//!
//! The syntactic model over a context `A` has as objects the extensions of
//! `A` by representable sort instances, as arrows the substitutions fixing
//! `A`, and as elements of a sort at `Gamma` the pairs (parameters, term)
//! of normal terms in `Gamma`. Only extensions of bounded depth and terms
//! of bounded size are materialized, so composition, comprehension and the
//! sort action are partial: they are defined whenever the result lies in
//! the fragment. With `A` empty this is a fragment of the initial model.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::realize::{Env, Realized, Value};
use super::ModelError;
use crate::budget::Budget;
use crate::fincat::{ArrowId, ObjId};
use crate::lf::check::{Checker, TypeError};
use crate::lf::enumerate::{enumerate_extensions, Bounds, Enumerator};
use crate::lf::syntax::{ConstId, Context, DeclKind, Signature, Substitution, Term, Type};

/// An element of a sort at an object: its parameters and the term.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SynElem {
    pub params: Vec<Term>,
    pub term: Term,
}

#[derive(Clone, Debug)]
pub struct SyntacticModel {
    pub sig: Signature,
    pub prefix: Context,
    pub bounds: Bounds,
    /// Full contexts (prefix included); object 0 is the prefix itself.
    pub objects: Vec<Context>,
    pub parents: Vec<Option<usize>>,
    /// Substitutions fixing the prefix, keyed by (source, target).
    pub homs: BTreeMap<(usize, usize), Vec<Substitution>>,
    /// Per declaration (empty for term constants) and object.
    pub elements: Vec<Vec<Vec<SynElem>>>,
    /// False when an enumeration ran out of fuel.
    pub complete: bool,
    elem_index: Vec<Vec<BTreeMap<SynElem, usize>>>,
    hom_index: BTreeMap<(usize, usize), BTreeMap<Substitution, usize>>,
}

fn tyerr(e: TypeError) -> ModelError {
    ModelError::Type(e)
}

/// The syntactic model of extensions of `prefix`, within `bounds`.
pub fn syntactic_model(sig: &Signature, prefix: &Context, bounds: Bounds, fuel: &Budget) -> Result<SyntacticModel, ModelError> {
    let ch = Checker::new(sig, fuel);
    ch.check_context(prefix)?;
    let exts = enumerate_extensions(sig, prefix, bounds, true, fuel)?;
    let mut complete = exts.complete;
    let objects = exts.items;
    let parents: Vec<Option<usize>> = objects
        .iter()
        .map(|c| {
            if c.len() == prefix.len() {
                None
            } else {
                let p = Context { entries: c.entries[..c.len() - 1].to_vec() };
                objects.iter().position(|o| *o == p)
            }
        })
        .collect();
    let mut en = Enumerator::new(sig, fuel);
    let mut homs = BTreeMap::new();
    let mut elements: Vec<Vec<Vec<SynElem>>> = vec![Vec::new(); sig.decls.len()];
    let run = (|| -> Result<(), TypeError> {
        for a in 0..objects.len() {
            for b in 0..objects.len() {
                let mut acc: Vec<Term> = (0..prefix.len()).map(|k| Term::var((objects[a].len() - 1 - k) as u32)).collect();
                let mut out = Vec::new();
                subst_rec(&mut en, &objects[a], &objects[b], bounds.size, &mut acc, &mut out)?;
                homs.insert((a, b), out);
            }
        }
        for (s, d) in sig.decls.iter().enumerate() {
            if matches!(d.kind, DeclKind::Term(_)) {
                continue;
            }
            for o in &objects {
                let mut elems = Vec::new();
                for y in en.substitutions(o, &d.params, bounds.size)? {
                    let ty = Type::Sort(ConstId(s), y.terms.clone());
                    for t in en.terms(o, &ty, bounds.size)? {
                        elems.push(SynElem { params: y.terms.clone(), term: t });
                    }
                }
                elements[s].push(elems);
            }
        }
        Ok(())
    })();
    match run {
        Ok(()) => {}
        Err(TypeError::OutOfFuel) => {
            complete = false;
            for (s, d) in sig.decls.iter().enumerate() {
                if !matches!(d.kind, DeclKind::Term(_)) {
                    elements[s].resize(objects.len(), Vec::new());
                }
            }
            for a in 0..objects.len() {
                for b in 0..objects.len() {
                    homs.entry((a, b)).or_insert_with(Vec::new);
                }
            }
        }
        Err(e) => return Err(tyerr(e)),
    }
    let elem_index = elements
        .iter()
        .map(|per_obj| per_obj.iter().map(|es| es.iter().enumerate().map(|(i, e)| (e.clone(), i)).collect()).collect())
        .collect();
    let hom_index = homs
        .iter()
        .map(|(k, v)| (*k, v.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect()))
        .collect();
    Ok(SyntacticModel {
        sig: sig.clone(),
        prefix: prefix.clone(),
        bounds,
        objects,
        parents,
        homs,
        elements,
        complete,
        elem_index,
        hom_index,
    })
}

fn subst_rec(
    en: &mut Enumerator<'_>,
    delta: &Context,
    gamma: &Context,
    size: usize,
    acc: &mut Vec<Term>,
    out: &mut Vec<Substitution>,
) -> Result<(), TypeError> {
    let k = acc.len();
    if k == gamma.len() {
        out.push(Substitution { terms: acc.clone() });
        return Ok(());
    }
    let ty = gamma.entries[k].ty.subst(acc);
    for t in en.terms(delta, &ty, size)? {
        acc.push(t);
        subst_rec(en, delta, gamma, size, acc, out)?;
        acc.pop();
    }
    Ok(())
}

/// Fragment of the initial model: the syntactic model over the empty
/// context.
pub fn initial_model(sig: &Signature, bounds: Bounds, fuel: &Budget) -> Result<SyntacticModel, ModelError> {
    syntactic_model(sig, &Context::new(), bounds, fuel)
}

impl SyntacticModel {
    pub fn object_index(&self, ctx: &Context) -> Option<usize> {
        self.objects.iter().position(|o| o == ctx)
    }

    pub fn element_index(&self, s: ConstId, obj: usize, e: &SynElem) -> Option<usize> {
        self.elem_index.get(s.0)?.get(obj)?.get(e).copied()
    }

    pub fn hom_index(&self, a: usize, b: usize, s: &Substitution) -> Option<usize> {
        self.hom_index.get(&(a, b))?.get(s).copied()
    }

    /// Normal form of a candidate element of sort `s` in `ctx`.
    pub fn normalize_elem(&self, ch: &Checker<'_>, ctx: &Context, s: ConstId, params: &[Term], term: &Term) -> Result<SynElem, ModelError> {
        let d = self.sig.decl(s);
        let mut ps = Vec::with_capacity(params.len());
        for (k, p) in params.iter().enumerate() {
            let ty = d.params.entries[k].ty.subst(&ps);
            ps.push(ch.norm(ctx, p, &ty)?);
        }
        let term = ch.norm(ctx, term, &Type::Sort(s, ps.clone()))?;
        Ok(SynElem { params: ps, term })
    }

    /// Normal form of a substitution `delta -> gamma`.
    pub fn normalize_subst(&self, ch: &Checker<'_>, delta: &Context, gamma: &Context, terms: &[Term]) -> Result<Substitution, ModelError> {
        Ok(ch.norm_subst(delta, gamma, &Substitution { terms: terms.to_vec() })?)
    }

    /// The weakening `child -> parent`.
    pub fn projection(&self, child: usize) -> Option<Substitution> {
        let n = self.objects[self.parents[child]?].len();
        Some(Substitution { terms: (0..n).map(|k| Term::var((n - k) as u32)).collect() })
    }

    /// Global elements of a closed context `b` at the terminal object (the
    /// prefix): tuples of normal terms within the size bound. Fibers are
    /// enumerated on demand, since substituted parameters may exceed the
    /// bound used for the stored elements.
    pub fn global_elements(&self, b: &Context, fuel: &Budget) -> Result<Vec<Vec<Term>>, ModelError> {
        let ch = Checker::new(&self.sig, fuel);
        let mut en = Enumerator::new(&self.sig, fuel);
        let a = &self.objects[0];
        let mut cur: Vec<Vec<Term>> = vec![Vec::new()];
        for bind in &b.entries {
            let mut next = Vec::new();
            for env in &cur {
                let Type::Sort(s, args) = ch.norm_type(a, &bind.ty.subst(env))? else {
                    return Err(ModelError::Eval("context entries must be sort instances".into()));
                };
                for t in en.terms(a, &Type::Sort(s, args), self.bounds.size)? {
                    let mut env2 = env.clone();
                    env2.push(t);
                    next.push(env2);
                }
            }
            cur = next;
        }
        Ok(cur)
    }

    /// The action of `tau : b -> b2` on global elements (as indices into the
    /// lists returned by [`Self::global_elements`]); `None` where the image
    /// leaves the fragment.
    pub fn global_action(
        &self,
        b2: &Context,
        from: &[Vec<Term>],
        to: &[Vec<Term>],
        tau: &Substitution,
        fuel: &Budget,
    ) -> Result<Vec<Option<u32>>, ModelError> {
        let ch = Checker::new(&self.sig, fuel);
        let a = &self.objects[0];
        from.iter()
            .map(|env| {
                let img: Vec<Term> = tau.terms.iter().map(|t| t.subst(env)).collect();
                let img = self.normalize_subst(&ch, a, b2, &img)?.terms;
                Ok(to.iter().position(|e| *e == img).map(|i| i as u32))
            })
            .collect()
    }
}

/// A morphism out of a fragment into a finite model: images of objects,
/// arrows and elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FragmentMorphism {
    pub objects: Vec<ObjId>,
    pub arrows: BTreeMap<(usize, usize), Vec<ArrowId>>,
    /// Per declaration (empty for constants), object and element.
    pub elements: Vec<Vec<Vec<u32>>>,
}

/// The morphism from a fragment of the initial model into `n`, obtained by
/// interpreting contexts, terms and substitutions.
pub fn morphism_from_initial(frag: &SyntacticModel, n: &Realized<'_>) -> Result<FragmentMorphism, ModelError> {
    if !frag.prefix.is_empty() {
        return Err(ModelError::Eval("not a fragment of the initial model".into()));
    }
    let mut objs: Vec<ObjId> = Vec::with_capacity(frag.objects.len());
    let mut genv: Vec<Env> = Vec::with_capacity(frag.objects.len());
    for (j, ctx) in frag.objects.iter().enumerate() {
        match frag.parents[j] {
            None => {
                objs.push(n.terminal);
                genv.push(Vec::new());
            }
            Some(i) => {
                let (o, e) = n.extend_env(&frag.objects[i], &genv[i], objs[i], &ctx.entries[ctx.len() - 1].ty)?;
                objs.push(o);
                genv.push(e);
            }
        }
    }
    let elements = frag
        .elements
        .iter()
        .enumerate()
        .map(|(s, per_obj)| {
            per_obj
                .iter()
                .enumerate()
                .map(|(i, es)| {
                    es.iter()
                        .map(|e| {
                            let ty = Type::Sort(ConstId(s), e.params.clone());
                            n.eval(&frag.objects[i], &genv[i], objs[i], &e.term, &ty)?
                                .elem()
                                .ok_or_else(|| ModelError::Eval("a sort element evaluated to a function".into()))
                        })
                        .collect::<Result<Vec<_>, _>>()
                })
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut arrows = BTreeMap::new();
    for (&(a, b), subs) in &frag.homs {
        let mut row = Vec::with_capacity(subs.len());
        for s in subs {
            let env = n.eval_subst(&frag.objects[a], &frag.objects[b], &genv[a], objs[a], &s.terms)?;
            row.push(arrow_for_env(frag, n, &objs, &genv, b, &env, objs[a])?);
        }
        arrows.insert((a, b), row);
    }
    Ok(FragmentMorphism { objects: objs, arrows, elements })
}

/// The arrow `d -> F(b)` classifying an environment of object `b` at `d`.
fn arrow_for_env(
    frag: &SyntacticModel,
    n: &Realized<'_>,
    objs: &[ObjId],
    genv: &[Env],
    b: usize,
    env: &[Value],
    d: ObjId,
) -> Result<ArrowId, ModelError> {
    let Some(p) = frag.parents[b] else {
        return Ok(n.base.hom(d, objs[b])[0]);
    };
    let k = arrow_for_env(frag, n, objs, genv, p, &env[..env.len() - 1], d)?;
    let ty = &frag.objects[b].entries[frag.objects[b].len() - 1].ty;
    let (_, s, y) = n.comprehension(&frag.objects[p], &genv[p], objs[p], ty)?;
    let e = env[env.len() - 1].elem().ok_or_else(|| ModelError::Eval("function-typed entry".into()))?;
    n.sort_rep(s)?.mediate(objs[p], y, k, e).ok_or_else(|| ModelError::Eval("environment does not mediate".into()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Var {
    Obj(usize),
    Elem(usize, usize, usize),
    Arrow(usize, usize, usize),
}

#[derive(Clone, Debug)]
enum Arg {
    Elem(usize),
    Fun(usize),
}

#[derive(Clone, Debug)]
enum Con {
    ObjIs(usize, ObjId),
    CompObj { parent: usize, child: usize, sort: ConstId, args: Vec<usize> },
    CompProj { parent: usize, sort: ConstId, args: Vec<usize>, proj: usize },
    CompGeneric { parent: usize, sort: ConstId, args: Vec<usize>, generic: usize },
    Params { elem: usize, obj: usize, sort: ConstId, args: Vec<Arg> },
    Natural { lo: usize, hi: usize, arrow: usize, sort: ConstId },
    IdArrow { arrow: usize, obj: usize },
    Compose { f: usize, g: usize, fg: usize },
    Constant { elem: usize, obj: usize, decl: ConstId, args: Vec<Arg> },
}

impl Con {
    fn vars(&self) -> Vec<usize> {
        let args = |a: &[Arg]| a.iter().map(|x| match x { Arg::Elem(v) | Arg::Fun(v) => *v }).collect::<Vec<_>>();
        let mut v = match self {
            Con::ObjIs(x, _) => vec![*x],
            Con::CompObj { parent, child, args, .. } => [vec![*parent, *child], args.clone()].concat(),
            Con::CompProj { parent, args, proj, .. } => [vec![*parent, *proj], args.clone()].concat(),
            Con::CompGeneric { parent, args, generic, .. } => [vec![*parent, *generic], args.clone()].concat(),
            Con::Params { elem, obj, args: a, .. } => [vec![*elem, *obj], args(a)].concat(),
            Con::Natural { lo, hi, arrow, .. } => vec![*lo, *hi, *arrow],
            Con::IdArrow { arrow, obj } => vec![*arrow, *obj],
            Con::Compose { f, g, fg } => vec![*f, *g, *fg],
            Con::Constant { elem, obj, args: a, .. } => [vec![*elem, *obj], args(a)].concat(),
        };
        v.sort_unstable();
        v.dedup();
        v
    }
}

/// Constraint system describing the morphisms out of a fragment.
struct Csp<'x, 'a> {
    n: &'x Realized<'a>,
    vars: Vec<Var>,
    cons: Vec<Con>,
    by_var: Vec<Vec<usize>>,
    obj_var: Vec<usize>,
}

fn arg_values(args: &[Arg], a: &[Option<u32>]) -> Option<Env> {
    args.iter()
        .map(|x| match x {
            Arg::Elem(v) => a[*v].map(Value::Elem),
            Arg::Fun(v) => a[*v].map(|b| Value::Fun(Box::new(Value::Elem(b)))),
        })
        .collect()
}

impl Csp<'_, '_> {
    fn comp(&self, parent: usize, sort: ConstId, args: &[usize], a: &[Option<u32>]) -> Option<crate::rfib::representable::Comprehension> {
        let c = ObjId(a[parent]? as usize);
        let env: Env = args.iter().map(|v| a[*v].map(Value::Elem)).collect::<Option<_>>()?;
        let y = self.n.decl_params(sort).index_of(c, &env)?;
        Some(self.n.sort_rep(sort).ok()?.comprehension(c, y))
    }

    /// `None` if some variable is unassigned.
    fn holds(&self, con: &Con, a: &[Option<u32>]) -> Option<bool> {
        if con.vars().iter().any(|v| a[*v].is_none()) {
            return None;
        }
        let base = &*self.n.base;
        let val = |v: &usize| a[*v].unwrap();
        Some(match con {
            Con::ObjIs(v, o) => val(v) as usize == o.0,
            Con::CompObj { parent, child, sort, args } => {
                self.comp(*parent, *sort, args, a).is_some_and(|w| w.obj.0 == val(child) as usize)
            }
            Con::CompProj { parent, sort, args, proj } => {
                self.comp(*parent, *sort, args, a).is_some_and(|w| w.proj.0 == val(proj) as usize)
            }
            Con::CompGeneric { parent, sort, args, generic } => {
                self.comp(*parent, *sort, args, a).is_some_and(|w| w.generic == val(generic))
            }
            Con::Params { elem, obj, sort, args } => {
                let c = ObjId(val(obj) as usize);
                let env = arg_values(args, a).unwrap();
                match (self.n.decl_params(*sort).index_of(c, &env), self.n.sort_params(*sort)) {
                    (Some(y), Ok(p)) => p[c.0][val(elem) as usize] == y,
                    _ => false,
                }
            }
            Con::Natural { lo, hi, arrow, sort } => {
                let h = ArrowId(val(arrow) as usize);
                self.n.sort_total(*sort).is_ok_and(|t| t.act(h, val(hi)) == val(lo))
            }
            Con::IdArrow { arrow, obj } => base.id(ObjId(val(obj) as usize)).0 == val(arrow) as usize,
            Con::Compose { f, g, fg } => {
                let (f, g) = (ArrowId(val(f) as usize), ArrowId(val(g) as usize));
                base.try_compose(f, g).is_some_and(|h| h.0 == val(fg) as usize)
            }
            Con::Constant { elem, obj, decl, args } => {
                let c = ObjId(val(obj) as usize);
                let env = arg_values(args, a).unwrap();
                match (self.n.decl_params(*decl).index_of(c, &env), self.n.table(*decl)) {
                    (Some(i), Ok(t)) => t[c.0][i as usize] == val(elem),
                    _ => false,
                }
            }
        })
    }

    fn domain(&self, v: usize, a: &[Option<u32>]) -> Option<Vec<u32>> {
        let base = &*self.n.base;
        match self.vars[v] {
            Var::Obj(_) => Some((0..base.num_objects() as u32).collect()),
            Var::Elem(s, i, _) => {
                let c = a[self.obj_var[i]]?;
                Some((0..self.n.sort_total(ConstId(s)).ok()?.size(ObjId(c as usize))).collect())
            }
            Var::Arrow(x, y, _) => {
                let (cx, cy) = (a[self.obj_var[x]]?, a[self.obj_var[y]]?);
                Some(base.hom(ObjId(cx as usize), ObjId(cy as usize)).iter().map(|h| h.0 as u32).collect())
            }
        }
    }

    fn candidates(&self, v: usize, a: &mut [Option<u32>]) -> Option<Vec<u32>> {
        let dom = self.domain(v, a)?;
        let mut out = Vec::new();
        for x in dom {
            a[v] = Some(x);
            if self.by_var[v].iter().all(|&k| self.holds(&self.cons[k], a) != Some(false)) {
                out.push(x);
            }
        }
        a[v] = None;
        Some(out)
    }

    fn solve(&self, a: &mut Vec<Option<u32>>, limit: usize, budget: &Budget, out: &mut Vec<Vec<u32>>) -> Result<(), ModelError> {
        if out.len() >= limit {
            return Ok(());
        }
        if !budget.tick() {
            return Err(ModelError::OutOfBudget);
        }
        let mut best: Option<(usize, Vec<u32>)> = None;
        for v in 0..self.vars.len() {
            if a[v].is_some() {
                continue;
            }
            if let Some(c) = self.candidates(v, a) {
                if best.as_ref().is_none_or(|(_, b)| c.len() < b.len()) {
                    let stop = c.len() <= 1;
                    best = Some((v, c));
                    if stop {
                        break;
                    }
                }
            }
        }
        let Some((v, cands)) = best else {
            out.push(a.iter().map(|x| x.expect("every variable is assigned")).collect());
            return Ok(());
        };
        for x in cands {
            a[v] = Some(x);
            self.solve(a, limit, budget, out)?;
            if out.len() >= limit {
                break;
            }
        }
        a[v] = None;
        Ok(())
    }
}

impl SyntacticModel {
    fn build_csp<'x, 'a>(&self, n: &'x Realized<'a>, fuel: &Budget) -> Result<Csp<'x, 'a>, ModelError> {
        let ch = Checker::new(&self.sig, fuel);
        let mut vars = Vec::new();
        let mut obj_var = Vec::new();
        for i in 0..self.objects.len() {
            obj_var.push(vars.len());
            vars.push(Var::Obj(i));
        }
        let mut elem_var: Vec<Vec<Vec<usize>>> = vec![Vec::new(); self.sig.decls.len()];
        for (s, per_obj) in self.elements.iter().enumerate() {
            for (i, es) in per_obj.iter().enumerate() {
                elem_var[s].push((0..es.len()).map(|k| {
                    vars.push(Var::Elem(s, i, k));
                    vars.len() - 1
                }).collect());
            }
        }
        let mut arrow_var: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        for (&(a, b), subs) in &self.homs {
            arrow_var.insert((a, b), (0..subs.len()).map(|k| {
                vars.push(Var::Arrow(a, b, k));
                vars.len() - 1
            }).collect());
        }
        let mut cons = Vec::new();
        if self.prefix.is_empty() {
            cons.push(Con::ObjIs(obj_var[0], n.terminal));
        }
        // Arguments of a sort or constant application as fragment elements.
        let lookup_args = |i: usize, head: ConstId, args: &[Term]| -> Result<Option<Vec<Arg>>, ModelError> {
            let d = self.sig.decl(head);
            let mut out = Vec::new();
            for (k, t) in args.iter().enumerate() {
                match d.params.entries[k].ty.subst(&args[..k]) {
                    Type::Sort(s, ps) => {
                        let e = self.normalize_elem(&ch, &self.objects[i], s, &ps, t)?;
                        match self.element_index(s, i, &e) {
                            Some(x) => out.push(Arg::Elem(elem_var[s.0][i][x])),
                            None => return Ok(None),
                        }
                    }
                    Type::Pi(dom, cod) => {
                        let Type::Sort(s, ps) = *cod else { return Ok(None) };
                        let dom = ch.norm_type(&self.objects[i], &dom)?;
                        let Some(j) = self.object_index(&self.objects[i].extended("x", dom)) else { return Ok(None) };
                        let body = t.shift(1, 0).apply(vec![Term::var(0)]);
                        let e = self.normalize_elem(&ch, &self.objects[j], s, &ps, &body)?;
                        match self.element_index(s, j, &e) {
                            Some(x) => out.push(Arg::Fun(elem_var[s.0][j][x])),
                            None => return Ok(None),
                        }
                    }
                }
            }
            Ok(Some(out))
        };
        let elem_args = |args: Option<Vec<Arg>>| -> Option<Vec<usize>> {
            args?.into_iter().map(|a| match a { Arg::Elem(v) => Some(v), Arg::Fun(_) => None }).collect()
        };
        // Comprehension.
        for j in 0..self.objects.len() {
            let Some(i) = self.parents[j] else { continue };
            let ctx = &self.objects[j];
            let Type::Sort(s, args) = &ctx.entries[ctx.len() - 1].ty else { continue };
            let Some(args) = elem_args(lookup_args(i, *s, args)?) else { continue };
            cons.push(Con::CompObj { parent: obj_var[i], child: obj_var[j], sort: *s, args: args.clone() });
            if let Some(p) = self.projection(j) {
                let p = self.normalize_subst(&ch, &self.objects[j], &self.objects[i], &p.terms)?;
                if let Some(k) = self.hom_index(j, i, &p) {
                    cons.push(Con::CompProj { parent: obj_var[i], sort: *s, args: args.clone(), proj: arrow_var[&(j, i)][k] });
                }
            }
            let ps: Vec<Term> = args_terms(&ctx.entries[ctx.len() - 1].ty).iter().map(|t| t.shift(1, 0)).collect();
            let g = self.normalize_elem(&ch, ctx, *s, &ps, &Term::var(0))?;
            if let Some(k) = self.element_index(*s, j, &g) {
                cons.push(Con::CompGeneric { parent: obj_var[i], sort: *s, args, generic: elem_var[s.0][j][k] });
            }
        }
        // Parameters and constants.
        for (s, per_obj) in self.elements.iter().enumerate() {
            for (i, es) in per_obj.iter().enumerate() {
                for (k, e) in es.iter().enumerate() {
                    let ev = elem_var[s][i][k];
                    if let Some(args) = lookup_args(i, ConstId(s), &e.params)? {
                        cons.push(Con::Params { elem: ev, obj: obj_var[i], sort: ConstId(s), args });
                    }
                    if let Term::Const(c, cargs) = &e.term {
                        if let Some(args) = lookup_args(i, *c, cargs)? {
                            cons.push(Con::Constant { elem: ev, obj: obj_var[i], decl: *c, args });
                        }
                    }
                }
            }
        }
        // Naturality of elements along arrows.
        for (&(a, b), subs) in &self.homs {
            for (k, sub) in subs.iter().enumerate() {
                let av = arrow_var[&(a, b)][k];
                for (s, per_obj) in self.elements.iter().enumerate() {
                    if per_obj.is_empty() {
                        continue;
                    }
                    for (x, e) in per_obj[b].iter().enumerate() {
                        let ps: Vec<Term> = e.params.iter().map(|t| t.subst(&sub.terms)).collect();
                        let e2 = self.normalize_elem(&ch, &self.objects[a], ConstId(s), &ps, &e.term.subst(&sub.terms))?;
                        if let Some(y) = self.element_index(ConstId(s), a, &e2) {
                            cons.push(Con::Natural { lo: elem_var[s][a][y], hi: elem_var[s][b][x], arrow: av, sort: ConstId(s) });
                        }
                    }
                }
            }
        }
        // Identities and composition.
        for i in 0..self.objects.len() {
            let n_i = self.objects[i].len();
            let id = Substitution { terms: (0..n_i).map(|k| Term::var((n_i - 1 - k) as u32)).collect() };
            let id = self.normalize_subst(&ch, &self.objects[i], &self.objects[i], &id.terms)?;
            if let Some(k) = self.hom_index(i, i, &id) {
                cons.push(Con::IdArrow { arrow: arrow_var[&(i, i)][k], obj: obj_var[i] });
            }
        }
        let m = self.objects.len();
        for a in 0..m {
            for b in 0..m {
                for c in 0..m {
                    for (x, s) in self.homs[&(a, b)].iter().enumerate() {
                        for (y, t) in self.homs[&(b, c)].iter().enumerate() {
                            let comp: Vec<Term> = t.terms.iter().map(|u| u.subst(&s.terms)).collect();
                            let comp = self.normalize_subst(&ch, &self.objects[a], &self.objects[c], &comp)?;
                            if let Some(z) = self.hom_index(a, c, &comp) {
                                cons.push(Con::Compose {
                                    f: arrow_var[&(a, b)][x],
                                    g: arrow_var[&(b, c)][y],
                                    fg: arrow_var[&(a, c)][z],
                                });
                            }
                        }
                    }
                }
            }
        }
        let mut by_var = vec![Vec::new(); vars.len()];
        for (k, c) in cons.iter().enumerate() {
            for v in c.vars() {
                by_var[v].push(k);
            }
        }
        Ok(Csp { n, vars, cons, by_var, obj_var })
    }

    fn decode(&self, csp: &Csp<'_, '_>, sol: &[u32]) -> FragmentMorphism {
        let mut objects = vec![ObjId(0); self.objects.len()];
        let mut arrows: BTreeMap<(usize, usize), Vec<ArrowId>> =
            self.homs.iter().map(|(k, v)| (*k, vec![ArrowId(0); v.len()])).collect();
        let mut elements: Vec<Vec<Vec<u32>>> =
            self.elements.iter().map(|per| per.iter().map(|es| vec![0; es.len()]).collect()).collect();
        for (v, var) in csp.vars.iter().enumerate() {
            match *var {
                Var::Obj(i) => objects[i] = ObjId(sol[v] as usize),
                Var::Elem(s, i, k) => elements[s][i][k] = sol[v],
                Var::Arrow(a, b, k) => arrows.get_mut(&(a, b)).unwrap()[k] = ArrowId(sol[v] as usize),
            }
        }
        FragmentMorphism { objects, arrows, elements }
    }

    /// All morphisms from the fragment into `n` (at most `limit`), found by
    /// exhaustive constraint search: images of objects, elements and arrows
    /// subject to terminality, comprehension, parameters, constants,
    /// naturality, identities and composition, wherever the fragment
    /// contains the syntactic data involved.
    pub fn morphisms_into(&self, n: &Realized<'_>, limit: usize, fuel: &Budget) -> Result<Vec<FragmentMorphism>, ModelError> {
        let csp = self.build_csp(n, fuel)?;
        let mut a = vec![None; csp.vars.len()];
        let mut sols = Vec::new();
        csp.solve(&mut a, limit, fuel, &mut sols)?;
        Ok(sols.iter().map(|s| self.decode(&csp, s)).collect())
    }

    /// Whether `f` satisfies every constraint of [`Self::morphisms_into`].
    pub fn is_morphism_into(&self, n: &Realized<'_>, f: &FragmentMorphism, fuel: &Budget) -> Result<bool, ModelError> {
        let csp = self.build_csp(n, fuel)?;
        let mut a = vec![None; csp.vars.len()];
        for (v, var) in csp.vars.iter().enumerate() {
            a[v] = Some(match *var {
                Var::Obj(i) => f.objects[i].0 as u32,
                Var::Elem(s, i, k) => f.elements[s][i][k],
                Var::Arrow(x, y, k) => f.arrows[&(x, y)][k].0 as u32,
            });
        }
        let base = &*n.base;
        for v in 0..csp.vars.len() {
            let ok = match csp.domain(v, &a) {
                Some(d) => d.contains(&a[v].unwrap()),
                None => false,
            };
            if !ok {
                return Ok(false);
            }
        }
        let _ = base;
        Ok(csp.cons.iter().all(|c| csp.holds(c, &a) == Some(true)))
    }

    /// Summary line used in reports.
    pub fn describe(&self) -> alloc::string::String {
        format!(
            "{} objects, {} elements, {} arrows{}",
            self.objects.len(),
            self.elements.iter().flatten().map(Vec::len).sum::<usize>(),
            self.homs.values().map(Vec::len).sum::<usize>(),
            if self.complete { "" } else { " (truncated)" }
        )
    }
}

fn args_terms(ty: &Type) -> Vec<Term> {
    match ty {
        Type::Sort(_, a) => a.clone(),
        Type::Pi(..) => Vec::new(),
    }
}
