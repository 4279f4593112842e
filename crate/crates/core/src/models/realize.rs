//! Element-level interpretation of contexts, types and terms in a model.
//!
//! A value of a sort instance at stage `c` is an element of the sort's
//! fiber; a value of `(x : A) -> B` at `c` is a value of `B` at the
//! comprehension `{A}` of `A`, in the environment extended by the generic
//! element. Environments list values in telescope order.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use super::data::{DeclInterp, ModelData};
use super::ModelError;
use crate::budget::Budget;
use crate::fincat::{ArrowId, FiniteCategory, ObjId};
use crate::lf::check::Checker;
use crate::lf::syntax::{ConstId, Context, DeclKind, Signature, Term, Type};
use crate::rfib::presheaf::{Presheaf, PshMap};
use crate::rfib::representable::{Comprehension, ComprehensionWitness, RepMap};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Value {
    Elem(u32),
    /// A function, given by its body at the comprehension of its domain.
    Fun(Box<Value>),
}

impl Value {
    pub fn elem(&self) -> Option<u32> {
        match self {
            Value::Elem(x) => Some(*x),
            Value::Fun(_) => None,
        }
    }
}

pub type Env = Vec<Value>;

/// The interpretation of a context: its environments at every stage, in
/// canonical order, and the resulting presheaf.
#[derive(Clone, Debug)]
pub struct ContextPsh {
    pub ctx: Context,
    pub envs: Vec<Vec<Env>>,
    index: Vec<BTreeMap<Env, u32>>,
    pub presheaf: Presheaf,
}

impl ContextPsh {
    pub fn index_of(&self, c: ObjId, env: &[Value]) -> Option<u32> {
        self.index[c.0].get(env).copied()
    }

    pub fn env(&self, c: ObjId, i: u32) -> &Env {
        &self.envs[c.0][i as usize]
    }
}

#[derive(Clone, Debug)]
struct SortData {
    total: Presheaf,
    params: Vec<Vec<u32>>,
    /// Per stage and parameter environment, the elements over it.
    fibers: Vec<Vec<Vec<u32>>>,
    rep: Option<RepMap>,
}

/// A model (or a prefix of one) prepared for evaluation. Declarations are
/// pushed in signature order; every push is checked.
#[derive(Clone, Debug)]
pub struct Realized<'a> {
    pub sig: &'a Signature,
    pub base: Arc<FiniteCategory>,
    pub terminal: ObjId,
    params: Vec<ContextPsh>,
    sorts: Vec<Option<SortData>>,
    tables: Vec<Option<Vec<Vec<u32>>>>,
}

fn decl_name(sig: &Signature, i: usize) -> String {
    sig.decls[i].name.clone()
}

impl<'a> Realized<'a> {
    /// An empty realization; fails if `terminal` is not terminal.
    pub fn new(sig: &'a Signature, base: Arc<FiniteCategory>, terminal: ObjId) -> Result<Self, ModelError> {
        if terminal.0 >= base.num_objects() || !base.objects().all(|c| base.hom(c, terminal).len() == 1) {
            let name = if terminal.0 < base.num_objects() { base.object_name(terminal).into() } else { format!("#{}", terminal.0) };
            return Err(ModelError::NoTerminal(name));
        }
        Ok(Realized { sig, base, terminal, params: Vec::new(), sorts: Vec::new(), tables: Vec::new() })
    }

    /// Realizes a complete model, checking every declaration in order.
    pub fn from_model(sig: &'a Signature, m: &ModelData) -> Result<Self, ModelError> {
        let mut r = Realized::new(sig, m.base.clone(), m.terminal)?;
        if m.decls.len() != sig.decls.len() {
            return Err(ModelError::Shape {
                decl: "model".into(),
                detail: format!("{} interpretations for {} declarations", m.decls.len(), sig.decls.len()),
            });
        }
        for d in &m.decls {
            match d {
                DeclInterp::Sort { total, params, witness } => r.push_sort(total.clone(), params.clone(), witness.clone())?,
                DeclInterp::Term { table } => r.push_constant(table.clone())?,
            }
        }
        Ok(r)
    }

    /// Number of declarations realized so far.
    pub fn len(&self) -> usize {
        self.params.len()
    }

    pub fn is_empty(&self) -> bool {
        self.params.is_empty()
    }

    fn next_decl(&self) -> Result<usize, ModelError> {
        let i = self.params.len();
        if i >= self.sig.decls.len() {
            return Err(ModelError::Shape { decl: "model".into(), detail: "more interpretations than declarations".into() });
        }
        Ok(i)
    }

    /// The interpretation of the telescope of the next declaration.
    pub fn next_params(&self) -> Result<ContextPsh, ModelError> {
        let i = self.next_decl()?;
        self.interpret_context(&self.sig.decls[i].params)
    }

    /// Pushes the interpretation of the next declaration, a sort.
    pub fn push_sort(
        &mut self,
        total: Presheaf,
        params: Vec<Vec<u32>>,
        witness: Option<ComprehensionWitness>,
    ) -> Result<(), ModelError> {
        let i = self.next_decl()?;
        let name = decl_name(self.sig, i);
        let rep = match self.sig.decls[i].kind {
            DeclKind::Sort => false,
            DeclKind::RepSort => true,
            DeclKind::Term(_) => {
                return Err(ModelError::Shape { decl: name, detail: "a term constant interpreted as a sort".into() })
            }
        };
        let cp = self.interpret_context(&self.sig.decls[i].params)?;
        if !crate::rfib::presheaf::same_base(total.base(), &self.base) {
            return Err(ModelError::Shape { decl: name, detail: "total presheaf over a different base".into() });
        }
        let total = total.rebase(self.base.clone())?;
        let shape_ok = params.len() == self.base.num_objects()
            && self.base.objects().all(|c| params[c.0].len() == total.size(c) as usize);
        if !shape_ok {
            return Err(ModelError::Shape { decl: name, detail: "parameter table does not match the total presheaf".into() });
        }
        let map = PshMap::new(total.clone(), cp.presheaf.clone(), params.clone())
            .map_err(|e| ModelError::NotRightFibration { decl: name.clone(), detail: format!("{e}") })?;
        let rep = if rep {
            let w = witness.ok_or_else(|| ModelError::MissingWitness(name.clone()))?;
            Some(RepMap::with_witness(map, w).map_err(|e| ModelError::BadWitness { decl: name.clone(), detail: format!("{e}") })?)
        } else {
            None
        };
        let fibers = self
            .base
            .objects()
            .map(|c| {
                let mut f = vec![Vec::new(); cp.presheaf.size(c) as usize];
                for (x, &y) in params[c.0].iter().enumerate() {
                    f[y as usize].push(x as u32);
                }
                f
            })
            .collect();
        self.params.push(cp);
        self.sorts.push(Some(SortData { total, params, fibers, rep }));
        self.tables.push(None);
        Ok(())
    }

    /// Pushes the interpretation of the next declaration, a term constant,
    /// checking that it is typed and natural.
    pub fn push_constant(&mut self, table: Vec<Vec<u32>>) -> Result<(), ModelError> {
        let cp = self.next_params()?;
        self.push_constant_with(cp, table)
    }

    fn push_constant_with(&mut self, cp: ContextPsh, table: Vec<Vec<u32>>) -> Result<(), ModelError> {
        let i = self.next_decl()?;
        let name = decl_name(self.sig, i);
        let DeclKind::Term(res) = &self.sig.decls[i].kind else {
            return Err(ModelError::Shape { decl: name, detail: "a sort interpreted as a term constant".into() });
        };
        let Type::Sort(s, args) = res else {
            return Err(ModelError::Shape { decl: name, detail: "result type is not a sort instance".into() });
        };
        let sd = self.sort(*s)?;
        let base = &*self.base;
        let shape_ok = table.len() == base.num_objects()
            && base.objects().all(|c| table[c.0].len() == cp.presheaf.size(c) as usize)
            && base.objects().all(|c| table[c.0].iter().all(|&x| x < sd.total.size(c)));
        if !shape_ok {
            return Err(ModelError::Shape { decl: name, detail: "table does not match the parameter presheaf".into() });
        }
        let ctx = &self.sig.decls[i].params;
        for c in base.objects() {
            for (k, env) in cp.envs[c.0].iter().enumerate() {
                let y = self.param_index(ctx, env, c, *s, args)?;
                let x = table[c.0][k];
                if sd.params[c.0][x as usize] != y {
                    return Err(ModelError::IllTyped {
                        decl: name,
                        detail: format!("value {x} at {} on environment {k}", base.object_name(c)),
                    });
                }
            }
        }
        for h in base.arrows() {
            let (d, c) = (base.src(h), base.tgt(h));
            for k in 0..cp.presheaf.size(c) {
                let lo = cp.presheaf.act(h, k);
                if table[d.0][lo as usize] != sd.total.act(h, table[c.0][k as usize]) {
                    return Err(ModelError::NotNatural {
                        decl: name,
                        detail: format!("arrow {} on environment {k}", base.arrow_name(h)),
                    });
                }
            }
        }
        self.params.push(cp);
        self.sorts.push(None);
        self.tables.push(Some(table));
        Ok(())
    }

    /// Pushes a term constant computed pointwise by `f` on the canonical
    /// environments of its telescope.
    pub fn push_constant_by(
        &mut self,
        f: &dyn Fn(&Realized<'a>, ObjId, &Env) -> Result<u32, ModelError>,
    ) -> Result<Vec<Vec<u32>>, ModelError> {
        let cp = self.next_params()?;
        let table = self
            .base
            .objects()
            .map(|c| cp.envs[c.0].iter().map(|env| f(self, c, env)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        self.push_constant_with(cp, table.clone())?;
        Ok(table)
    }

    fn sort(&self, s: ConstId) -> Result<&SortData, ModelError> {
        self.sorts
            .get(s.0)
            .and_then(|x| x.as_ref())
            .ok_or_else(|| ModelError::Eval(format!("sort `{}` is not interpreted yet", self.sig.decl(s).name)))
    }

    /// Total presheaf of a realized sort.
    pub fn sort_total(&self, s: ConstId) -> Result<&Presheaf, ModelError> {
        Ok(&self.sort(s)?.total)
    }

    /// Parameter table of a realized sort.
    pub fn sort_params(&self, s: ConstId) -> Result<&[Vec<u32>], ModelError> {
        Ok(&self.sort(s)?.params)
    }

    /// The representable map of a realized representable sort.
    pub fn sort_rep(&self, s: ConstId) -> Result<&RepMap, ModelError> {
        self.sort(s)?
            .rep
            .as_ref()
            .ok_or_else(|| ModelError::Eval(format!("sort `{}` is not representable", self.sig.decl(s).name)))
    }

    /// Table of a realized term constant.
    pub fn table(&self, c: ConstId) -> Result<&[Vec<u32>], ModelError> {
        self.tables
            .get(c.0)
            .and_then(|x| x.as_deref())
            .ok_or_else(|| ModelError::Eval(format!("constant `{}` is not interpreted yet", self.sig.decl(c).name)))
    }

    /// Interpretation of the telescope of declaration `d`.
    pub fn decl_params(&self, d: ConstId) -> &ContextPsh {
        &self.params[d.0]
    }

    /// Elements of the fiber of sort `s` over parameter environment `y`.
    pub fn fiber(&self, s: ConstId, c: ObjId, y: u32) -> Result<&[u32], ModelError> {
        Ok(&self.sort(s)?.fibers[c.0][y as usize])
    }

    /// Values of the arguments of a sort or constant application.
    pub fn eval_args(&self, ctx: &Context, env: &[Value], c: ObjId, head: ConstId, args: &[Term]) -> Result<Env, ModelError> {
        let d = self.sig.decl(head);
        if args.len() != d.params.len() {
            return Err(ModelError::Eval(format!("`{}` is not fully applied", d.name)));
        }
        let mut vals = Vec::with_capacity(args.len());
        for (k, a) in args.iter().enumerate() {
            let ty = d.params.entries[k].ty.subst(&args[..k]);
            vals.push(self.eval(ctx, env, c, a, &ty)?);
        }
        Ok(vals)
    }

    /// Index of the parameter environment of `s args` at stage `c`.
    pub fn param_index(&self, ctx: &Context, env: &[Value], c: ObjId, s: ConstId, args: &[Term]) -> Result<u32, ModelError> {
        let vals = self.eval_args(ctx, env, c, s, args)?;
        self.params[s.0]
            .index_of(c, &vals)
            .ok_or_else(|| ModelError::Eval(format!("arguments of `{}` out of range", self.sig.decl(s).name)))
    }

    /// Comprehension of a representable type at `(ctx, env, c)`.
    pub fn comprehension(&self, ctx: &Context, env: &[Value], c: ObjId, ty: &Type) -> Result<(Comprehension, ConstId, u32), ModelError> {
        let Type::Sort(s, args) = ty else {
            return Err(ModelError::Eval("domain of a dependent product is not a sort instance".into()));
        };
        let y = self.param_index(ctx, env, c, *s, args)?;
        let rep = self.sort_rep(*s)?;
        Ok((rep.comprehension(c, y), *s, y))
    }

    /// The environment at the comprehension of `dom`: the restriction of
    /// `env` along the projection, extended by the generic element.
    pub fn extend_env(&self, ctx: &Context, env: &[Value], c: ObjId, dom: &Type) -> Result<(ObjId, Env), ModelError> {
        let (w, _, _) = self.comprehension(ctx, env, c, dom)?;
        let mut e = self.restrict_env(ctx, env, w.proj)?;
        e.push(Value::Elem(w.generic));
        Ok((w.obj, e))
    }

    /// All values of `ty` at `(ctx, env, c)`, in canonical order.
    pub fn values_of(&self, ctx: &Context, env: &[Value], c: ObjId, ty: &Type) -> Result<Vec<Value>, ModelError> {
        match ty {
            Type::Sort(s, args) => {
                let y = self.param_index(ctx, env, c, *s, args)?;
                Ok(self.fiber(*s, c, y)?.iter().map(|&x| Value::Elem(x)).collect())
            }
            Type::Pi(dom, cod) => {
                let (d, e) = self.extend_env(ctx, env, c, dom)?;
                let ctx2 = ctx.extended("x", (**dom).clone());
                Ok(self.values_of(&ctx2, &e, d, cod)?.into_iter().map(|v| Value::Fun(Box::new(v))).collect())
            }
        }
    }

    /// Restriction of a value of `ty` at `(ctx, env, tgt h)` along `h`.
    pub fn restrict_value(&self, ctx: &Context, env: &[Value], ty: &Type, v: &Value, h: ArrowId) -> Result<Value, ModelError> {
        match (ty, v) {
            (Type::Sort(s, _), Value::Elem(x)) => Ok(Value::Elem(self.sort(*s)?.total.act(h, *x))),
            (Type::Pi(dom, cod), Value::Fun(b)) => {
                let c = self.base.tgt(h);
                let (w, s, y) = self.comprehension(ctx, env, c, dom)?;
                let rep = self.sort_rep(s)?;
                let h2 = rep.reindex_arrow(c, y, h);
                let mut e = self.restrict_env(ctx, env, w.proj)?;
                e.push(Value::Elem(w.generic));
                let ctx2 = ctx.extended("x", (**dom).clone());
                Ok(Value::Fun(Box::new(self.restrict_value(&ctx2, &e, cod, b, h2)?)))
            }
            _ => Err(ModelError::Eval("value does not match its type".into())),
        }
    }

    /// Restriction of an environment of `ctx` along `h`.
    pub fn restrict_env(&self, ctx: &Context, env: &[Value], h: ArrowId) -> Result<Env, ModelError> {
        let mut pre = Context::new();
        let mut out = Vec::with_capacity(env.len());
        for (b, v) in ctx.entries.iter().zip(env) {
            out.push(self.restrict_value(&pre, &env[..pre.len()], &b.ty, v, h)?);
            pre.entries.push(b.clone());
        }
        Ok(out)
    }

    /// Value of `t : ty` at `(ctx, env, c)`.
    pub fn eval(&self, ctx: &Context, env: &[Value], c: ObjId, t: &Term, ty: &Type) -> Result<Value, ModelError> {
        match t {
            Term::Lam(body) => {
                let Type::Pi(dom, cod) = ty else {
                    return Err(ModelError::Eval("abstraction at a sort type".into()));
                };
                let (d, e) = self.extend_env(ctx, env, c, dom)?;
                let ctx2 = ctx.extended("x", (**dom).clone());
                Ok(Value::Fun(Box::new(self.eval(&ctx2, &e, d, body, cod)?)))
            }
            Term::Var(i, spine) => {
                let n = env.len();
                let pos = n.checked_sub(*i as usize + 1).ok_or_else(|| ModelError::Eval("unbound variable".into()))?;
                let mut ty = ctx.var_type(*i).ok_or_else(|| ModelError::Eval("unbound variable".into()))?;
                let mut v = env[pos].clone();
                for a in spine {
                    let Type::Pi(dom, cod) = ty else {
                        return Err(ModelError::Eval("applied variable of sort type".into()));
                    };
                    let av = self.eval(ctx, env, c, a, &dom)?;
                    v = self.apply(ctx, env, c, &v, &dom, &cod, &av)?;
                    ty = cod.subst(core::slice::from_ref(a));
                }
                Ok(v)
            }
            Term::Const(k, args) => {
                let vals = self.eval_args(ctx, env, c, *k, args)?;
                let idx = self.params[k.0]
                    .index_of(c, &vals)
                    .ok_or_else(|| ModelError::Eval(format!("arguments of `{}` out of range", self.sig.decl(*k).name)))?;
                Ok(Value::Elem(self.table(*k)?[c.0][idx as usize]))
            }
        }
    }

    /// Applies `f : (x : dom) -> cod` to `a : dom` at stage `c`.
    #[allow(clippy::too_many_arguments)]
    fn apply(&self, ctx: &Context, env: &[Value], c: ObjId, f: &Value, dom: &Type, cod: &Type, a: &Value) -> Result<Value, ModelError> {
        let (Value::Fun(b), Value::Elem(av)) = (f, a) else {
            return Err(ModelError::Eval("ill-formed application".into()));
        };
        let (w, s, y) = self.comprehension(ctx, env, c, dom)?;
        let rep = self.sort_rep(s)?;
        let k = rep
            .mediate(c, y, self.base.id(c), *av)
            .ok_or_else(|| ModelError::Eval("argument lies in the wrong fiber".into()))?;
        let mut e = self.restrict_env(ctx, env, w.proj)?;
        e.push(Value::Elem(w.generic));
        let ctx2 = ctx.extended("x", dom.clone());
        self.restrict_value(&ctx2, &e, cod, b, k)
    }

    /// The presheaf of environments of `ctx`.
    pub fn interpret_context(&self, ctx: &Context) -> Result<ContextPsh, ModelError> {
        let base = &*self.base;
        let mut envs = Vec::with_capacity(base.num_objects());
        for c in base.objects() {
            let mut cur: Vec<Env> = vec![Vec::new()];
            let mut pre = Context::new();
            for b in &ctx.entries {
                let mut next = Vec::new();
                for e in &cur {
                    for v in self.values_of(&pre, e, c, &b.ty)? {
                        let mut e2 = e.clone();
                        e2.push(v);
                        next.push(e2);
                    }
                }
                cur = next;
                pre.entries.push(b.clone());
            }
            envs.push(cur);
        }
        let index: Vec<BTreeMap<Env, u32>> =
            envs.iter().map(|row| row.iter().enumerate().map(|(i, e)| (e.clone(), i as u32)).collect()).collect();
        let mut action = Vec::with_capacity(base.num_arrows());
        for h in base.arrows() {
            let (d, c) = (base.src(h), base.tgt(h));
            let mut row = Vec::with_capacity(envs[c.0].len());
            for e in &envs[c.0] {
                let r = self.restrict_env(ctx, e, h)?;
                let i = index[d.0].get(&r).copied().ok_or_else(|| ModelError::Eval("restriction leaves the context".into()))?;
                row.push(i);
            }
            action.push(row);
        }
        let sizes = envs.iter().map(|r| r.len() as u32).collect();
        let presheaf = Presheaf::new(self.base.clone(), sizes, action)?;
        Ok(ContextPsh { ctx: ctx.clone(), envs, index, presheaf })
    }

    /// Checks one rule on every environment of its context.
    pub fn check_rule(&self, rule: usize, fuel: &Budget) -> Result<(), ModelError> {
        let r = &self.sig.rules[rule];
        let ty = Checker::new(self.sig, fuel).infer(&r.ctx, &r.lhs)?;
        let cp = self.interpret_context(&r.ctx)?;
        for c in self.base.objects() {
            for (k, env) in cp.envs[c.0].iter().enumerate() {
                let l = self.eval(&r.ctx, env, c, &r.lhs, &ty)?;
                let rr = self.eval(&r.ctx, env, c, &r.rhs, &ty)?;
                if l != rr {
                    return Err(ModelError::Equation {
                        rule: r.name.clone(),
                        detail: format!("sides differ at {} on environment {k}", self.base.object_name(c)),
                    });
                }
            }
        }
        Ok(())
    }

    /// Evaluates a substitution `delta -> gamma` on an environment of `delta`.
    pub fn eval_subst(&self, delta: &Context, gamma: &Context, env: &[Value], c: ObjId, s: &[Term]) -> Result<Env, ModelError> {
        let mut out = Vec::with_capacity(s.len());
        for (k, t) in s.iter().enumerate() {
            let ty = gamma.entries[k].ty.subst(&s[..k]);
            out.push(self.eval(delta, env, c, t, &ty)?);
        }
        Ok(out)
    }

    /// Sizes of `[[ctx]]` at the terminal object.
    pub fn global_elements(&self, ctx: &Context) -> Result<Vec<Env>, ModelError> {
        Ok(self.interpret_context(ctx)?.envs[self.terminal.0].clone())
    }
}
