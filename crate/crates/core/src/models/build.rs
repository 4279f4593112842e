//! Constructing models: an incremental checked builder, the model of a
//! representable map with type structures found on it, the terminal model
//! and the doubled universe.

use alloc::format;
use alloc::string::ToString;
use alloc::sync::Arc;
use alloc::vec::Vec;

use super::data::{DeclInterp, ModelData};
use super::realize::{Env, Realized, Value};
use super::ModelError;
use crate::budget::Budget;
use crate::fincat::{FiniteCategory, ObjId};
use crate::lf::parse::parse_term;
use crate::lf::syntax::{Context, Decl, DeclKind, Signature, Type};
use crate::rfib::limits::Pullback;
use crate::rfib::poly::{polynomial_apply, polynomial_compose_parts, Composite, PolyValue};
use crate::rfib::presheaf::Presheaf;
use crate::rfib::representable::{Comprehension, ComprehensionWitness, RepMap};
use crate::structures::{diagonal, find_structure, StructureKind, TypeStructure};

/// Builds a model declaration by declaration, checking each one.
#[derive(Clone, Debug)]
pub struct ModelBuilder<'a> {
    real: Realized<'a>,
    decls: Vec<DeclInterp>,
}

impl<'a> ModelBuilder<'a> {
    pub fn new(sig: &'a Signature, base: Arc<FiniteCategory>, terminal: ObjId) -> Result<Self, ModelError> {
        Ok(ModelBuilder { real: Realized::new(sig, base, terminal)?, decls: Vec::new() })
    }

    pub fn realized(&self) -> &Realized<'a> {
        &self.real
    }

    /// The declaration to be interpreted next.
    pub fn next_decl(&self) -> Option<&'a Decl> {
        self.real.sig.decls.get(self.decls.len())
    }

    pub fn sort(&mut self, total: Presheaf, params: Vec<Vec<u32>>, witness: Option<ComprehensionWitness>) -> Result<(), ModelError> {
        self.real.push_sort(total.clone(), params.clone(), witness.clone())?;
        self.decls.push(DeclInterp::Sort { total, params, witness });
        Ok(())
    }

    pub fn constant_table(&mut self, table: Vec<Vec<u32>>) -> Result<(), ModelError> {
        self.real.push_constant(table.clone())?;
        self.decls.push(DeclInterp::Term { table });
        Ok(())
    }

    /// Interprets the next constant pointwise on the environments of its
    /// telescope.
    pub fn constant_by(&mut self, f: &dyn Fn(&Realized<'a>, ObjId, &Env) -> Result<u32, ModelError>) -> Result<(), ModelError> {
        let table = self.real.push_constant_by(f)?;
        self.decls.push(DeclInterp::Term { table });
        Ok(())
    }

    /// Interprets the next constant by a term over its telescope, written in
    /// the surface syntax.
    pub fn constant_term(&mut self, src: &str) -> Result<(), ModelError> {
        let d = self.next_decl().ok_or_else(|| ModelError::Eval("no declaration left".into()))?;
        let DeclKind::Term(res) = &d.kind else {
            return Err(ModelError::Shape { decl: d.name.clone(), detail: "not a term constant".into() });
        };
        let t = parse_term(self.real.sig, &d.params, src).map_err(|e| ModelError::Eval(format!("{e}")))?;
        let (ctx, res) = (&d.params, res.clone());
        self.constant_by(&|r, c, env| elem(r.eval(ctx, env, c, &t, &res)?))
    }

    pub fn finish(self) -> Result<ModelData, ModelError> {
        if self.decls.len() != self.real.sig.decls.len() {
            let name = self.next_decl().map(|d| d.name.clone()).unwrap_or_default();
            return Err(ModelError::NoRecipe(name));
        }
        Ok(ModelData { base: self.real.base.clone(), terminal: self.real.terminal, decls: self.decls })
    }
}

fn elem(v: Value) -> Result<u32, ModelError> {
    v.elem().ok_or_else(|| ModelError::Eval("expected an element, got a function".into()))
}

fn fun_body(v: &Value) -> Result<u32, ModelError> {
    match v {
        Value::Fun(b) => elem((**b).clone()),
        Value::Elem(_) => Err(ModelError::Eval("expected a function".into())),
    }
}

fn missing(what: &str) -> ModelError {
    ModelError::Eval(format!("{what} not found"))
}

/// Checks that the signature starts with `Ty : sort` and
/// `El : (A : Ty) -> rep-sort`.
fn check_universe_prefix(sig: &Signature) -> Result<(), ModelError> {
    let ok = sig.decls.len() >= 2
        && sig.decls[0].kind == DeclKind::Sort
        && sig.decls[0].params.is_empty()
        && sig.decls[1].kind == DeclKind::RepSort
        && sig.decls[1].params.len() == 1
        && matches!(&sig.decls[1].params.entries[0].ty, Type::Sort(c, a) if c.0 == 0 && a.is_empty());
    if ok {
        Ok(())
    } else {
        Err(ModelError::NoRecipe("a universe `Ty`, `El`".into()))
    }
}

/// A builder with `Ty` and `El` interpreted by the codomain and domain of
/// the representable map `t`.
pub fn universe_builder<'a>(sig: &'a Signature, t: &RepMap, terminal: ObjId) -> Result<ModelBuilder<'a>, ModelError> {
    check_universe_prefix(sig)?;
    let mut b = ModelBuilder::new(sig, t.base().clone(), terminal)?;
    let base = t.base().clone();
    let zeros = base.objects().map(|c| alloc::vec![0; t.cod().size(c) as usize]).collect();
    b.sort(t.cod().clone(), zeros, None)?;
    // Environments of `(A : Ty)` at `c` are the elements of `Ty(c)`, in order.
    b.sort(t.dom().clone(), t.map().components().to_vec(), Some(t.witness().clone()))?;
    Ok(b)
}

/// Type structures on a representable map, computed on demand, and the
/// interpretation of the standard type formers through them.
pub struct Standard {
    t: RepMap,
    budget: Budget,
    unit: Option<TypeStructure>,
    sigma: Option<(TypeStructure, Composite)>,
    id: Option<(TypeStructure, Pullback)>,
    pi: Option<(TypeStructure, PolyValue, PolyValue)>,
}

impl Standard {
    pub fn new(t: &RepMap, budget: Budget) -> Self {
        Standard { t: t.clone(), budget, unit: None, sigma: None, id: None, pi: None }
    }

    fn find(&self, kind: StructureKind) -> Result<TypeStructure, ModelError> {
        find_structure(&self.t, kind, &self.budget)
            .map_err(|e| ModelError::Eval(format!("{e}")))?
            .ok_or_else(|| ModelError::NoRecipe(format!("{kind} (no {kind} structure on the universe)")))
    }

    fn unit(&mut self) -> Result<&TypeStructure, ModelError> {
        if self.unit.is_none() {
            self.unit = Some(self.find(StructureKind::Unit)?);
        }
        Ok(self.unit.as_ref().unwrap())
    }

    fn sigma(&mut self) -> Result<&(TypeStructure, Composite), ModelError> {
        if self.sigma.is_none() {
            let s = self.find(StructureKind::Sigma)?;
            self.sigma = Some((s, polynomial_compose_parts(&self.t, &self.t)?));
        }
        Ok(self.sigma.as_ref().unwrap())
    }

    fn id(&mut self) -> Result<&(TypeStructure, Pullback), ModelError> {
        if self.id.is_none() {
            let s = self.find(StructureKind::Id)?;
            let (pb, _) = diagonal(&self.t).map_err(|e| ModelError::Eval(format!("{e}")))?;
            self.id = Some((s, pb));
        }
        Ok(self.id.as_ref().unwrap())
    }

    fn pi(&mut self) -> Result<&(TypeStructure, PolyValue, PolyValue), ModelError> {
        if self.pi.is_none() {
            let s = self.find(StructureKind::Pi)?;
            let pe = polynomial_apply(&self.t, self.t.dom())?;
            let pt = polynomial_apply(&self.t, self.t.cod())?;
            self.pi = Some((s, pe, pt));
        }
        Ok(self.pi.as_ref().unwrap())
    }

    /// Interprets the next declaration if it is one of the standard type
    /// formers; returns whether it did.
    pub fn interpret(&mut self, b: &mut ModelBuilder<'_>) -> Result<bool, ModelError> {
        let Some(d) = b.next_decl() else { return Ok(false) };
        let t = self.t.clone();
        match d.name.as_str() {
            "Unit" => {
                let s = self.unit()?.clone();
                b.constant_by(&|_, c, _| Ok(s.bottom.at(c, 0)))?;
            }
            "tt" => {
                let s = self.unit()?.clone();
                b.constant_by(&|_, c, _| Ok(s.top.at(c, 0)))?;
            }
            "Sigma" => {
                let (s, comp) = self.sigma()?.clone();
                b.constant_by(&|_, c, env| {
                    let i = comp.outer.index_of(c, (elem(env[0].clone())?, fun_body(&env[1])?)).ok_or_else(|| missing("family"))?;
                    Ok(s.bottom.at(c, i))
                })?;
            }
            "pair" => {
                let (s, comp) = self.sigma()?.clone();
                b.constant_by(&|_, c, env| {
                    let i = comp.outer.index_of(c, (elem(env[0].clone())?, fun_body(&env[1])?)).ok_or_else(|| missing("family"))?;
                    let e = comp.eval_pb.limit.index_of(c, &[i, elem(env[2].clone())?]).ok_or_else(|| missing("first component"))?;
                    let d = comp.dom_pb.limit.index_of(c, &[e, elem(env[3].clone())?]).ok_or_else(|| missing("second component"))?;
                    Ok(s.top.at(c, d))
                })?;
            }
            "pr1" | "pr2" => {
                let first = d.name == "pr1";
                let (s, comp) = self.sigma()?.clone();
                b.constant_by(&|_, c, env| {
                    let i = comp.outer.index_of(c, (elem(env[0].clone())?, fun_body(&env[1])?)).ok_or_else(|| missing("family"))?;
                    let p = elem(env[2].clone())?;
                    let d = (0..comp.rep.dom().size(c))
                        .find(|&d| s.top.at(c, d) == p && comp.rep.map().at(c, d) == i)
                        .ok_or_else(|| missing("pair"))?;
                    let [e, b2] = comp.dom_pb.limit.tuple(c, d) else { return Err(missing("pair")) };
                    if first {
                        Ok(comp.eval_pb.limit.tuple(c, *e)[1])
                    } else {
                        Ok(*b2)
                    }
                })?;
            }
            "Id" => {
                let (s, pb) = self.id()?.clone();
                b.constant_by(&|_, c, env| {
                    let i = pb.limit.index_of(c, &[elem(env[1].clone())?, elem(env[2].clone())?]).ok_or_else(|| missing("pair"))?;
                    Ok(s.bottom.at(c, i))
                })?;
            }
            "refl" => {
                let (s, _) = self.id()?.clone();
                b.constant_by(&|_, c, env| Ok(s.top.at(c, elem(env[1].clone())?)))?;
            }
            "J" => {
                self.id()?;
                b.constant_term("d a")?;
            }
            "Pi" => {
                let (s, _, pt) = self.pi()?.clone();
                b.constant_by(&|_, c, env| {
                    let i = pt.index_of(c, (elem(env[0].clone())?, fun_body(&env[1])?)).ok_or_else(|| missing("family"))?;
                    Ok(s.bottom.at(c, i))
                })?;
            }
            "lam" => {
                let (s, pe, _) = self.pi()?.clone();
                b.constant_by(&|_, c, env| {
                    let i = pe.index_of(c, (elem(env[0].clone())?, fun_body(&env[2])?)).ok_or_else(|| missing("body"))?;
                    Ok(s.top.at(c, i))
                })?;
            }
            "app" => {
                let (s, pe, _) = self.pi()?.clone();
                b.constant_by(&|_, c, env| {
                    let a_ty = elem(env[0].clone())?;
                    let fam = fun_body(&env[1])?;
                    let f = elem(env[2].clone())?;
                    let a = elem(env[3].clone())?;
                    let w = t.comprehension(c, a_ty);
                    let &(_, body) = pe.pairs[c.0]
                        .iter()
                        .enumerate()
                        .find(|&(i, &(y, x))| y == a_ty && s.top.at(c, i as u32) == f && t.map().at(w.obj, x) == fam)
                        .map(|(_, p)| p)
                        .ok_or_else(|| missing("abstraction"))?;
                    let k = t.mediate(c, a_ty, t.base().id(c), a).ok_or_else(|| missing("argument"))?;
                    Ok(t.dom().act(k, body))
                })?;
            }
            "funext" => {
                self.pi()?;
                self.id()?;
                b.constant_term("refl (Pi A B) f")?;
            }
            _ => return Ok(false),
        }
        Ok(true)
    }
}

/// The model of `sig` whose universe is the representable map `t` and whose
/// type formers come from structures found on `t`. Declarations without a
/// standard interpretation are handled by `custom`, which must interpret the
/// builder's next declaration and return `true`, or return `false`.
pub fn structured_model_with(
    sig: &Signature,
    t: &RepMap,
    terminal: ObjId,
    budget: Budget,
    custom: &mut dyn FnMut(&mut ModelBuilder<'_>) -> Result<bool, ModelError>,
) -> Result<ModelData, ModelError> {
    let mut b = universe_builder(sig, t, terminal)?;
    let mut std = Standard::new(t, budget);
    while let Some(d) = b.next_decl() {
        if !custom(&mut b)? && !std.interpret(&mut b)? {
            return Err(ModelError::NoRecipe(d.name.clone()));
        }
    }
    b.finish()
}

/// [`structured_model_with`] without custom declarations.
pub fn structured_model(sig: &Signature, t: &RepMap, terminal: ObjId, budget: Budget) -> Result<ModelData, ModelError> {
    structured_model_with(sig, t, terminal, budget, &mut |_| Ok(false))
}

/// The terminal model: every sort is its parameter telescope (singleton
/// fibers) and every constant is the unique element.
pub fn terminal_model(sig: &Signature, base: Arc<FiniteCategory>, terminal: ObjId) -> Result<ModelData, ModelError> {
    let mut b = ModelBuilder::new(sig, base.clone(), terminal)?;
    while let Some(d) = b.next_decl() {
        match &d.kind {
            DeclKind::Sort | DeclKind::RepSort => {
                let cp = b.realized().next_params()?;
                let p = cp.presheaf.clone();
                let params = base.objects().map(|c| (0..p.size(c)).collect()).collect();
                let witness = (d.kind == DeclKind::RepSort).then(|| ComprehensionWitness {
                    entries: base
                        .objects()
                        .map(|c| (0..p.size(c)).map(|y| Comprehension { obj: c, proj: base.id(c), generic: y }).collect())
                        .collect(),
                });
                b.sort(p, params, witness)?;
            }
            DeclKind::Term(Type::Sort(s, args)) => {
                let (ctx, s, args) = (&d.params, *s, args.clone());
                b.constant_by(&|r, c, env| r.param_index(ctx, env, c, s, &args))?;
            }
            DeclKind::Term(_) => return Err(ModelError::NoRecipe(d.name.clone())),
        }
    }
    b.finish()
}

/// Folds a value of the doubled model onto the original one.
fn fold_value(
    dbl: &Realized<'_>,
    orig: &Realized<'_>,
    ctx: &Context,
    env: &[Value],
    c: ObjId,
    ty: &Type,
    v: &Value,
) -> Result<Value, ModelError> {
    match (ty, v) {
        (Type::Sort(s, _), Value::Elem(x)) => {
            let n = orig.sort_total(*s)?.size(c);
            Ok(Value::Elem(if *x >= n { x - n } else { *x }))
        }
        (Type::Pi(dom, cod), Value::Fun(b)) => {
            let (d, e) = dbl.extend_env(ctx, env, c, dom)?;
            let ctx2 = ctx.extended("x", (**dom).clone());
            Ok(Value::Fun(alloc::boxed::Box::new(fold_value(dbl, orig, &ctx2, &e, d, cod, b)?)))
        }
        _ => Err(ModelError::Eval("value does not match its type".into())),
    }
}

/// The doubled universe of a model of a signature with sorts `Ty`, `El`:
/// `Ty` and `El` are replaced by two disjoint copies; every constant is
/// computed in the original model after folding the copies together and
/// lands in copy 0 of `Ty`, respectively in the copy of its type.
pub fn doubled_universe(sig: &Signature, m: &ModelData) -> Result<ModelData, ModelError> {
    check_universe_prefix(sig)?;
    if sig.decls[2..].iter().any(|d| !matches!(d.kind, DeclKind::Term(_))) {
        return Err(ModelError::NoRecipe("doubling with further sorts".into()));
    }
    let orig = Realized::from_model(sig, m)?;
    let base = m.base.clone();
    let ty = orig.sort_total(crate::lf::syntax::ConstId(0))?.clone();
    let el_rep = orig.sort_rep(crate::lf::syntax::ConstId(1))?.clone();
    let el = el_rep.dom().clone();
    let mut b = ModelBuilder::new(sig, base.clone(), m.terminal)?;
    let ty2 = ty.coproduct(&ty)?;
    b.sort(ty2.clone(), base.objects().map(|c| alloc::vec![0; ty2.size(c) as usize]).collect(), None)?;
    let el2 = el.coproduct(&el)?;
    let params = base
        .objects()
        .map(|c| {
            let (ne, nt) = (el.size(c), ty.size(c));
            (0..el2.size(c)).map(|i| if i < ne { el_rep.map().at(c, i) } else { nt + el_rep.map().at(c, i - ne) }).collect()
        })
        .collect();
    let witness = ComprehensionWitness {
        entries: base
            .objects()
            .map(|c| {
                let nt = ty.size(c);
                (0..ty2.size(c))
                    .map(|y| {
                        if y < nt {
                            el_rep.comprehension(c, y)
                        } else {
                            let w = el_rep.comprehension(c, y - nt);
                            Comprehension { generic: w.generic + el.size(w.obj), ..w }
                        }
                    })
                    .collect()
            })
            .collect(),
    };
    b.sort(el2, params, Some(witness))?;
    while let Some(d) = b.next_decl() {
        let DeclKind::Term(Type::Sort(s, args)) = &d.kind else { return Err(ModelError::NoRecipe(d.name.clone())) };
        let (ctx, s, args) = (&d.params, *s, args.clone());
        let k = crate::lf::syntax::ConstId(b.realized().len());
        let orig_params = orig.decl_params(k);
        let table = orig.table(k)?;
        b.constant_by(&|r, c, env| {
            let mut folded = Vec::with_capacity(env.len());
            let mut pre = Context::new();
            for (bnd, v) in ctx.entries.iter().zip(env) {
                folded.push(fold_value(r, &orig, &pre, &env[..pre.len()], c, &bnd.ty, v)?);
                pre.entries.push(bnd.clone());
            }
            let i = orig_params.index_of(c, &folded).ok_or_else(|| missing("folded environment"))?;
            let x = table[c.0][i as usize];
            if s.0 == 0 {
                return Ok(x);
            }
            let a = elem(r.eval(ctx, env, c, &args[0], &Type::Sort(crate::lf::syntax::ConstId(0), Vec::new()))?)?;
            Ok(if a >= ty.size(c) { x + el.size(c) } else { x })
        })?;
    }
    b.finish()
}

/// Name of the doubled variant of a model.
pub fn doubled_name(name: &str) -> alloc::string::String {
    let mut s = "D(".to_string();
    s.push_str(name);
    s.push(')');
    s
}
