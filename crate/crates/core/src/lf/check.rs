//! Type checking, fuel-bounded normalization by oriented rewriting, and
//! signature validation.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::print::{print_term, print_type};
use super::syntax::{Context, DeclKind, Item, Rule, Signature, Substitution, Term, Type};
use crate::budget::Budget;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum TypeError {
    #[error("unbound variable #{0}")]
    UnboundVar(u32),
    #[error("`{0}` is not a term constant")]
    NotATerm(String),
    #[error("`{0}` is not a sort")]
    NotASort(String),
    #[error("`{name}` expects {expected} arguments, found {found}")]
    Arity { name: String, expected: usize, found: usize },
    #[error("{term} is applied to too many arguments")]
    NotAFunction { term: String },
    #[error("dependent product over non-representable type {0}")]
    NonRepresentableDomain(String),
    #[error("cannot infer the type of a lambda")]
    CannotInfer,
    #[error("a lambda cannot have type {0}")]
    LambdaAgainst(String),
    #[error("{term} has type {found} but {expected} was expected")]
    Mismatch { term: String, expected: String, found: String },
    #[error("{0}")]
    Rule(String),
    #[error("no normal form within the fuel budget")]
    OutOfFuel,
}

/// Checker and normalizer for a signature; every rewrite step consumes fuel.
pub struct Checker<'a> {
    pub sig: &'a Signature,
    pub fuel: &'a Budget,
}

type Bindings = Vec<Option<Term>>;

impl<'a> Checker<'a> {
    pub fn new(sig: &'a Signature, fuel: &'a Budget) -> Self {
        Checker { sig, fuel }
    }

    fn tick(&self) -> Result<(), TypeError> {
        if self.fuel.tick() {
            Ok(())
        } else {
            Err(TypeError::OutOfFuel)
        }
    }

    fn pt(&self, ctx: &Context, t: &Term) -> String {
        print_term(self.sig, ctx, t)
    }

    fn pty(&self, ctx: &Context, t: &Type) -> String {
        print_type(self.sig, ctx, t)
    }

    pub fn check_context(&self, ctx: &Context) -> Result<(), TypeError> {
        let mut cur = Context::new();
        for b in &ctx.entries {
            self.check_type(&cur, &b.ty)?;
            cur.entries.push(b.clone());
        }
        Ok(())
    }

    pub fn check_type(&self, ctx: &Context, ty: &Type) -> Result<(), TypeError> {
        match ty {
            Type::Sort(c, args) => {
                if c.0 >= self.sig.decls.len() {
                    return Err(TypeError::NotASort(format!("#{}", c.0)));
                }
                let d = self.sig.decl(*c);
                if !self.sig.is_sort(*c) {
                    return Err(TypeError::NotASort(d.name.clone()));
                }
                self.check_spine(ctx, &d.name, &d.params, args)
            }
            Type::Pi(a, b) => {
                if !self.sig.is_rep_type(a) {
                    return Err(TypeError::NonRepresentableDomain(self.pty(ctx, a)));
                }
                self.check_type(ctx, a)?;
                self.check_type(&ctx.extended("x", (**a).clone()), b)
            }
        }
    }

    fn check_spine(&self, ctx: &Context, name: &str, params: &Context, args: &[Term]) -> Result<(), TypeError> {
        if params.len() != args.len() {
            return Err(TypeError::Arity { name: name.into(), expected: params.len(), found: args.len() });
        }
        for (k, a) in args.iter().enumerate() {
            let ty = params.entries[k].ty.subst(&args[..k]);
            self.check(ctx, a, &ty)?;
        }
        Ok(())
    }

    pub fn infer(&self, ctx: &Context, t: &Term) -> Result<Type, TypeError> {
        match t {
            Term::Var(i, sp) => {
                let mut ty = ctx.var_type(*i).ok_or(TypeError::UnboundVar(*i))?;
                for a in sp {
                    let Type::Pi(dom, cod) = ty else {
                        return Err(TypeError::NotAFunction { term: self.pt(ctx, t) });
                    };
                    self.check(ctx, a, &dom)?;
                    ty = cod.subst(core::slice::from_ref(a));
                }
                Ok(ty)
            }
            Term::Const(c, sp) => {
                if c.0 >= self.sig.decls.len() {
                    return Err(TypeError::NotATerm(format!("#{}", c.0)));
                }
                let d = self.sig.decl(*c);
                let DeclKind::Term(res) = &d.kind else { return Err(TypeError::NotATerm(d.name.clone())) };
                self.check_spine(ctx, &d.name, &d.params, sp)?;
                Ok(res.subst(sp))
            }
            Term::Lam(_) => Err(TypeError::CannotInfer),
        }
    }

    pub fn check(&self, ctx: &Context, t: &Term, ty: &Type) -> Result<(), TypeError> {
        match t {
            Term::Lam(b) => {
                let Type::Pi(dom, cod) = ty else { return Err(TypeError::LambdaAgainst(self.pty(ctx, ty))) };
                self.check(&ctx.extended("x", (**dom).clone()), b, cod)
            }
            _ => {
                let found = self.infer(ctx, t)?;
                if self.conv(ctx, &found, ty)? {
                    Ok(())
                } else {
                    Err(TypeError::Mismatch {
                        term: self.pt(ctx, t),
                        expected: self.pty(ctx, ty),
                        found: self.pty(ctx, &found),
                    })
                }
            }
        }
    }

    pub fn conv(&self, ctx: &Context, a: &Type, b: &Type) -> Result<bool, TypeError> {
        Ok(self.norm_type(ctx, a)? == self.norm_type(ctx, b)?)
    }

    pub fn norm_type(&self, ctx: &Context, ty: &Type) -> Result<Type, TypeError> {
        match ty {
            Type::Sort(c, args) => {
                let params = &self.sig.decl(*c).params;
                Ok(Type::Sort(*c, self.norm_spine(ctx, params, args)?))
            }
            Type::Pi(a, b) => {
                let a2 = self.norm_type(ctx, a)?;
                let b2 = self.norm_type(&ctx.extended("x", a2.clone()), b)?;
                Ok(Type::pi(a2, b2))
            }
        }
    }

    fn norm_spine(&self, ctx: &Context, params: &Context, args: &[Term]) -> Result<Vec<Term>, TypeError> {
        let mut out: Vec<Term> = Vec::with_capacity(args.len());
        for (k, a) in args.iter().enumerate() {
            let ty = params.entries.get(k).map(|b| b.ty.subst(&out)).ok_or(TypeError::Arity {
                name: String::new(),
                expected: params.len(),
                found: args.len(),
            })?;
            out.push(self.norm(ctx, a, &ty)?);
        }
        Ok(out)
    }

    /// Normal form of a well-typed term of type `ty`.
    pub fn norm(&self, ctx: &Context, t: &Term, ty: &Type) -> Result<Term, TypeError> {
        match t {
            Term::Lam(b) => {
                let Type::Pi(dom, cod) = ty else { return Err(TypeError::LambdaAgainst(self.pty(ctx, ty))) };
                let body = self.norm(&ctx.extended("x", (**dom).clone()), b, cod)?;
                Ok(Term::lam(body).eta_contract())
            }
            _ => Ok(self.norm_infer(ctx, t)?.0),
        }
    }

    /// Normal form and normalized type of a variable- or constant-headed term.
    pub fn norm_infer(&self, ctx: &Context, t: &Term) -> Result<(Term, Type), TypeError> {
        match t {
            Term::Var(i, sp) => {
                let mut ty = ctx.var_type(*i).ok_or(TypeError::UnboundVar(*i))?;
                let mut args = Vec::with_capacity(sp.len());
                for a in sp {
                    let Type::Pi(dom, cod) = ty else {
                        return Err(TypeError::NotAFunction { term: self.pt(ctx, t) });
                    };
                    let a2 = self.norm(ctx, a, &dom)?;
                    ty = cod.subst(core::slice::from_ref(&a2));
                    args.push(a2);
                }
                let ty = self.norm_type(ctx, &ty)?;
                let t2 = Term::Var(*i, args);
                let t3 = self.typed_rules(ctx, t2, &ty)?;
                Ok((t3, ty))
            }
            Term::Const(c, sp) => {
                let d = self.sig.decl(*c);
                let DeclKind::Term(res) = &d.kind else { return Err(TypeError::NotATerm(d.name.clone())) };
                let args = self.norm_spine(ctx, &d.params, sp)?;
                let ty = self.norm_type(ctx, &res.subst(&args))?;
                let t2 = Term::Const(*c, args);
                for rule in self.sig.rules_for(*c) {
                    if let Some(s) = self.match_rule(rule, &t2) {
                        self.tick()?;
                        let r = rule.rhs.subst(&s);
                        return Ok((self.norm(ctx, &r, &ty)?, ty));
                    }
                }
                let t3 = self.typed_rules(ctx, t2, &ty)?;
                Ok((t3, ty))
            }
            Term::Lam(_) => Err(TypeError::CannotInfer),
        }
    }

    fn typed_rules(&self, ctx: &Context, t: Term, ty: &Type) -> Result<Term, TypeError> {
        if !matches!(ty, Type::Sort(..)) {
            return Ok(t);
        }
        for rule in self.sig.typed_rules() {
            let Term::Var(k, _) = rule.lhs else { continue };
            let n = rule.ctx.len();
            let Some(pty) = rule.ctx.var_type(k) else { continue };
            let mut b: Bindings = vec![None; n];
            b[k as usize] = Some(t.clone());
            if !self.match_type(&pty, ty, 0, &mut b) {
                continue;
            }
            let Some(s) = finish(b) else { continue };
            let r = rule.rhs.subst(&s);
            if r != t {
                self.tick()?;
                return self.norm(ctx, &r, ty);
            }
        }
        Ok(t)
    }

    /// Matches a constant-headed rule against a normal term; the result
    /// is the instantiation in telescope order.
    pub fn match_rule(&self, rule: &Rule, t: &Term) -> Option<Vec<Term>> {
        let mut b: Bindings = vec![None; rule.ctx.len()];
        if self.match_term(&rule.lhs, t, 0, &mut b) {
            finish(b)
        } else {
            None
        }
    }

    fn match_term(&self, pat: &Term, t: &Term, depth: u32, b: &mut Bindings) -> bool {
        match pat {
            Term::Var(i, psp) if *i >= depth => {
                let k = (*i - depth) as usize;
                if k >= b.len() {
                    return false;
                }
                let value = if psp.is_empty() {
                    if t.has_var_below(depth) {
                        return false;
                    }
                    t.shift(-(depth as i64), 0)
                } else {
                    match miller_solution(psp, t, depth) {
                        Some(v) => v,
                        None => return false,
                    }
                };
                bind(b, k, value)
            }
            Term::Var(i, psp) => match t {
                Term::Var(j, tsp) if i == j && psp.len() == tsp.len() => {
                    psp.iter().zip(tsp).all(|(p, x)| self.match_term(p, x, depth, b))
                }
                _ => false,
            },
            Term::Const(c, psp) => match t {
                Term::Const(d, tsp) if c == d && psp.len() == tsp.len() => {
                    psp.iter().zip(tsp).all(|(p, x)| self.match_term(p, x, depth, b))
                }
                _ => false,
            },
            Term::Lam(pb) => match t {
                Term::Lam(tb) => self.match_term(pb, tb, depth + 1, b),
                Term::Var(..) => {
                    let expanded = t.shift(1, 0).apply(vec![Term::var(0)]);
                    self.match_term(pb, &expanded, depth + 1, b)
                }
                Term::Const(..) => false,
            },
        }
    }

    /// Matches a type pattern over `n` pattern variables against a normal
    /// type; unconstrained variables stay `None`. Telescope order.
    pub fn match_type_partial(&self, n: usize, pat: &Type, ty: &Type) -> Option<Vec<Option<Term>>> {
        let mut b: Bindings = vec![None; n];
        if self.match_type(pat, ty, 0, &mut b) {
            b.reverse();
            Some(b)
        } else {
            None
        }
    }

    fn match_type(&self, pat: &Type, ty: &Type, depth: u32, b: &mut Bindings) -> bool {
        match (pat, ty) {
            (Type::Sort(c, pa), Type::Sort(d, ta)) if c == d && pa.len() == ta.len() => {
                pa.iter().zip(ta).all(|(p, x)| self.match_term(p, x, depth, b))
            }
            (Type::Pi(pa, pb), Type::Pi(ta, tb)) => {
                self.match_type(pa, ta, depth, b) && self.match_type(pb, tb, depth + 1, b)
            }
            _ => false,
        }
    }

    /// Normalizes each component of `s : delta -> gamma`.
    pub fn norm_subst(&self, delta: &Context, gamma: &Context, s: &Substitution) -> Result<Substitution, TypeError> {
        let mut out: Vec<Term> = Vec::with_capacity(s.len());
        for (k, t) in s.terms.iter().enumerate() {
            let ty = gamma.entries[k].ty.subst(&out);
            out.push(self.norm(delta, t, &ty)?);
        }
        Ok(Substitution { terms: out })
    }

    pub fn check_subst(&self, delta: &Context, gamma: &Context, s: &Substitution) -> Result<(), TypeError> {
        if s.len() != gamma.len() {
            return Err(TypeError::Arity { name: "substitution".into(), expected: gamma.len(), found: s.len() });
        }
        for (k, t) in s.terms.iter().enumerate() {
            let ty = gamma.entries[k].ty.subst(&s.terms[..k]);
            self.check(delta, t, &ty)?;
        }
        Ok(())
    }
}

fn bind(b: &mut Bindings, k: usize, v: Term) -> bool {
    match &b[k] {
        Some(u) => *u == v,
        None => {
            b[k] = Some(v);
            true
        }
    }
}

/// Bindings indexed by de Bruijn index, returned in telescope order.
fn finish(b: Bindings) -> Option<Vec<Term>> {
    b.into_iter().rev().collect()
}

/// Solves `X y1 .. ym = t` for distinct bound variables `yi` (indices
/// below `depth`), abstracting the `yi`.
fn miller_solution(args: &[Term], t: &Term, depth: u32) -> Option<Term> {
    let m = args.len() as u32;
    let mut locals = Vec::with_capacity(args.len());
    for a in args {
        match a {
            Term::Var(j, sp) if sp.is_empty() && *j < depth && !locals.contains(j) => locals.push(*j),
            _ => return None,
        }
    }
    // local j_l (l = 0..m) becomes binder m-1-l; other locals are forbidden;
    // outer variables move from depth to m.
    let body = rename(t, 0, &|v| {
        if v < depth {
            locals.iter().position(|&j| j == v).map(|l| m - 1 - l as u32)
        } else {
            Some(v - depth + m)
        }
    })?;
    let mut r = body;
    for _ in 0..m {
        r = Term::lam(r).eta_contract();
    }
    Some(r)
}

fn rename(t: &Term, under: u32, f: &dyn Fn(u32) -> Option<u32>) -> Option<Term> {
    Some(match t {
        Term::Var(i, sp) => {
            let j = if *i < under { *i } else { f(*i - under)? + under };
            Term::Var(j, sp.iter().map(|x| rename(x, under, f)).collect::<Option<_>>()?)
        }
        Term::Const(c, sp) => Term::Const(*c, sp.iter().map(|x| rename(x, under, f)).collect::<Option<_>>()?),
        Term::Lam(b) => Term::lam(rename(b, under + 1, f)?),
    })
}

/// Normal form of `t : ty` in `ctx`.
pub fn normalize(sig: &Signature, ctx: &Context, t: &Term, ty: &Type, fuel: &Budget) -> Result<Term, TypeError> {
    Checker::new(sig, fuel).norm(ctx, t, ty)
}

/// Infers the type of `t` and returns its normal form with the type.
pub fn normalize_infer(sig: &Signature, ctx: &Context, t: &Term, fuel: &Budget) -> Result<(Term, Type), TypeError> {
    let ch = Checker::new(sig, fuel);
    let ty = ch.infer(ctx, t)?;
    let ty = ch.norm_type(ctx, &ty)?;
    Ok((ch.norm(ctx, t, &ty)?, ty))
}

/// Componentwise equality of normal forms of two substitutions
/// `delta -> gamma`.
pub fn hom_equal(
    sig: &Signature,
    delta: &Context,
    gamma: &Context,
    s1: &Substitution,
    s2: &Substitution,
    fuel: &Budget,
) -> Result<bool, TypeError> {
    let ch = Checker::new(sig, fuel);
    Ok(ch.norm_subst(delta, gamma, s1)? == ch.norm_subst(delta, gamma, s2)?)
}

/// Verdict for one declaration or rule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ItemVerdict {
    pub name: String,
    pub is_rule: bool,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignatureReport {
    pub items: Vec<ItemVerdict>,
}

impl SignatureReport {
    pub fn is_valid(&self) -> bool {
        self.items.iter().all(|i| i.error.is_none())
    }

    pub fn failures(&self) -> impl Iterator<Item = &ItemVerdict> {
        self.items.iter().filter(|i| i.error.is_some())
    }
}

/// Checks each declaration against the preceding prefix, and each rule
/// for pattern shape and type preservation.
pub fn check_signature(sig: &Signature, fuel: &Budget) -> SignatureReport {
    let mut items = Vec::new();
    for (n, item) in sig.items.iter().enumerate() {
        let prefix = sig.prefix(n);
        let ch = Checker::new(&prefix, fuel);
        match item {
            Item::Decl(c) => {
                let d = sig.decl(*c);
                let r = ch.check_context(&d.params).and_then(|_| match &d.kind {
                    DeclKind::Term(ty) => ch.check_type(&d.params, ty),
                    _ => Ok(()),
                });
                items.push(ItemVerdict { name: d.name.clone(), is_rule: false, error: r.err().map(|e| format!("{e}")) });
            }
            Item::Rule(r) => {
                let rule = &sig.rules[*r];
                let err = check_rule(&ch, rule).err();
                items.push(ItemVerdict { name: rule.name.clone(), is_rule: true, error: err });
            }
        }
    }
    SignatureReport { items }
}

fn check_rule(ch: &Checker<'_>, rule: &Rule) -> Result<(), String> {
    let ctx = &rule.ctx;
    ch.check_context(ctx).map_err(|e| format!("rule context: {e}"))?;
    let lhs_ty = match &rule.lhs {
        Term::Const(..) => ch.infer(ctx, &rule.lhs).map_err(|e| format!("left side: {e}"))?,
        Term::Var(k, sp) if sp.is_empty() => ctx.var_type(*k).ok_or("left side: unbound variable")?,
        _ => return Err("left side must be a constant application or a bare variable".into()),
    };
    check_pattern(&rule.lhs, 0)?;
    // Every rule variable must be determined by matching.
    let mut seen = vec![false; ctx.len()];
    mark_vars(&rule.lhs, 0, &mut seen);
    if let Term::Var(k, _) = rule.lhs {
        mark_type_vars(&ctx.var_type(k).unwrap(), 0, &mut seen);
    }
    if let Some(k) = seen.iter().position(|s| !s) {
        return Err(format!("rule variable `{}` does not occur in the left side", ctx.entries[ctx.len() - 1 - k].name));
    }
    ch.check(ctx, &rule.rhs, &lhs_ty).map_err(|e| {
        format!(
            "not type-preserving: {} ⊢ {} : {} fails: {e}",
            super::print::print_context(ch.sig, ctx),
            print_term(ch.sig, ctx, &rule.rhs),
            print_type(ch.sig, ctx, &lhs_ty)
        )
    })
}

fn check_pattern(t: &Term, depth: u32) -> Result<(), String> {
    match t {
        Term::Var(i, sp) if *i >= depth && !sp.is_empty() => {
            let mut locals = Vec::new();
            for a in sp {
                match a {
                    Term::Var(j, s) if s.is_empty() && *j < depth && !locals.contains(j) => locals.push(*j),
                    _ => return Err("rule variables may only be applied to distinct bound variables".into()),
                }
            }
            Ok(())
        }
        Term::Var(_, sp) | Term::Const(_, sp) => sp.iter().try_for_each(|a| check_pattern(a, depth)),
        Term::Lam(b) => check_pattern(b, depth + 1),
    }
}

fn mark_vars(t: &Term, depth: u32, seen: &mut [bool]) {
    match t {
        Term::Var(i, sp) => {
            if *i >= depth && ((*i - depth) as usize) < seen.len() {
                seen[(*i - depth) as usize] = true;
            }
            sp.iter().for_each(|a| mark_vars(a, depth, seen));
        }
        Term::Const(_, sp) => sp.iter().for_each(|a| mark_vars(a, depth, seen)),
        Term::Lam(b) => mark_vars(b, depth + 1, seen),
    }
}

fn mark_type_vars(t: &Type, depth: u32, seen: &mut [bool]) {
    match t {
        Type::Sort(_, a) => a.iter().for_each(|x| mark_vars(x, depth, seen)),
        Type::Pi(a, b) => {
            mark_type_vars(a, depth, seen);
            mark_type_vars(b, depth + 1, seen);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lf::corpus;
    use crate::lf::parse::{parse_context, parse_signature, parse_term, parse_type};

    fn fuel() -> Budget {
        Budget::new(100_000)
    }

    #[test]
    fn shipped_signatures_validate() {
        for (name, src) in corpus::SHIPPED {
            let sig = parse_signature(src).unwrap();
            let rep = check_signature(&sig, &fuel());
            assert!(rep.is_valid(), "{name}: {:?}", rep.failures().collect::<Vec<_>>());
        }
    }

    #[test]
    fn mistyped_rule_is_rejected() {
        let src = corpus::ITTH.replace("~> d a", "~> refl A a");
        let sig = parse_signature(&src).unwrap();
        let rep = check_signature(&sig, &fuel());
        let bad: Vec<_> = rep.failures().map(|i| i.name.as_str()).collect();
        assert_eq!(bad, ["J-beta"]);
        assert!(rep.failures().next().unwrap().error.as_ref().unwrap().contains("not type-preserving"));
    }

    #[test]
    fn j_computes_on_refl() {
        let sig = corpus::itth();
        let ctx = parse_context(&sig, "(A : Ty) (a : El A) (P : (x y : El A) (p : El (Id A x y)) -> Ty) (d : (x : El A) -> El (P x x (refl A x)))").unwrap();
        let t = parse_term(&sig, &ctx, "J A P d a a (refl A a)").unwrap();
        let (n, ty) = normalize_infer(&sig, &ctx, &t, &fuel()).unwrap();
        assert_eq!(n, parse_term(&sig, &ctx, "d a").unwrap());
        assert_eq!(ty, parse_type(&sig, &ctx, "El (P a a (refl A a))").unwrap());
    }

    #[test]
    fn variables_and_normal_forms_are_fixed() {
        let sig = corpus::itth();
        let ctx = parse_context(&sig, "(A : Ty) (x : El A)").unwrap();
        let x = Term::var(0);
        assert_eq!(normalize_infer(&sig, &ctx, &x, &fuel()).unwrap().0, x);
        let id = Substitution::identity(2);
        let t = parse_term(&sig, &ctx, "pair A (\\y. A) x x").unwrap();
        let (n, _) = normalize_infer(&sig, &ctx, &t, &fuel()).unwrap();
        assert_eq!(normalize_infer(&sig, &ctx, &n.subst(&id.terms), &fuel()).unwrap().0, n);
    }

    #[test]
    fn unit_eta_identifies_substitutions() {
        let sig = corpus::etth1();
        let delta = parse_context(&sig, "(u : El Unit)").unwrap();
        let gamma = parse_context(&sig, "(v : El Unit)").unwrap();
        let s1 = Substitution { terms: alloc::vec![Term::var(0)] };
        let s2 = Substitution { terms: alloc::vec![parse_term(&sig, &delta, "tt").unwrap()] };
        assert!(hom_equal(&sig, &delta, &gamma, &s1, &s2, &fuel()).unwrap());
        let p = parse_context(&sig, "(A : Ty) (a : El A) (p : El (Id A a a))").unwrap();
        let q = parse_term(&sig, &p, "p").unwrap();
        assert_eq!(normalize_infer(&sig, &p, &q, &fuel()).unwrap().0, parse_term(&sig, &p, "refl A a").unwrap());
    }

    #[test]
    fn differing_constants_are_distinct() {
        let mut sig = corpus::tthg();
        sig = crate::lf::parse::parse_signature_onto(sig, "o : Ty\no2 : Ty").unwrap();
        let g = parse_context(&sig, "(A : Ty)").unwrap();
        let e = Context::new();
        let s1 = Substitution { terms: alloc::vec![parse_term(&sig, &e, "o").unwrap()] };
        let s2 = Substitution { terms: alloc::vec![parse_term(&sig, &e, "o2").unwrap()] };
        assert!(!hom_equal(&sig, &e, &g, &s1, &s2, &fuel()).unwrap());
        assert!(hom_equal(&sig, &e, &g, &s1, &s1, &fuel()).unwrap());
    }

    #[test]
    fn pi_rules() {
        let sig = corpus::itth_pi();
        let ctx = parse_context(&sig, "(A : Ty) (f : El (Pi A (\\x. A))) (a : El A)").unwrap();
        let t = parse_term(&sig, &ctx, "app A (\\x. A) (lam A (\\x. A) (\\x. app A (\\y. A) f x)) a").unwrap();
        let (n, _) = normalize_infer(&sig, &ctx, &t, &fuel()).unwrap();
        assert_eq!(n, parse_term(&sig, &ctx, "app A (\\x. A) f a").unwrap());
        let l = parse_term(&sig, &ctx, "lam A (\\x. A) (\\x. app A (\\y. A) f x)").unwrap();
        assert_eq!(normalize_infer(&sig, &ctx, &l, &fuel()).unwrap().0, Term::var(1));
    }

    #[test]
    fn fuel_exhaustion_is_reported() {
        let sig = parse_signature("Ty : sort\nEl : (A : Ty) -> rep-sort\nf : Ty\ng : Ty\nrule fg : f ~> g\nrule gf : g ~> f").unwrap();
        let t = parse_term(&sig, &Context::new(), "f").unwrap();
        assert_eq!(normalize_infer(&sig, &Context::new(), &t, &Budget::new(50)), Err(TypeError::OutOfFuel));
    }

    #[test]
    fn printing_round_trips() {
        for (_, src) in corpus::SHIPPED {
            let sig = parse_signature(src).unwrap();
            let printed = crate::lf::print::print_signature(&sig);
            let again = parse_signature(&printed).unwrap();
            assert_eq!(again, sig, "{printed}");
            assert_eq!(crate::lf::print::print_signature(&again), printed);
        }
    }
}
