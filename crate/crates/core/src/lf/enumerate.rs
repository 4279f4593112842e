//! Bounded enumeration of normal terms, contexts and substitutions, and a
//! random generator of well-typed (generally non-normal) terms.
//!
//! Enumeration is type-directed: a term of size `s` is a lambda over a term
//! of size `s`, or a variable or constant head applied to arguments whose
//! sizes sum to `s - 1`. Only normal forms are kept, so distinct results are
//! distinct up to definitional equality whenever the rules are confluent.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use super::check::{Checker, TypeError};
use super::syntax::{Context, DeclKind, Signature, Substitution, Term, Type};
use crate::budget::Budget;

/// `depth` bounds the number of entries added to a context, `size` the size
/// of every enumerated term (types count their head sort).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Bounds {
    pub depth: usize,
    pub size: usize,
}

impl Bounds {
    pub fn new(depth: usize, size: usize) -> Self {
        Bounds { depth, size }
    }
}

/// A possibly truncated enumeration; `complete` is false when the fuel ran
/// out first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Enumeration<T> {
    pub items: Vec<T>,
    pub complete: bool,
}

type Key = (Context, Type, usize);

/// Memoizing enumerator of normal terms.
pub struct Enumerator<'a> {
    ch: Checker<'a>,
    memo: BTreeMap<Key, Vec<Term>>,
}

impl<'a> Enumerator<'a> {
    pub fn new(sig: &'a Signature, fuel: &'a Budget) -> Self {
        Enumerator { ch: Checker::new(sig, fuel), memo: BTreeMap::new() }
    }

    pub fn checker(&self) -> &Checker<'a> {
        &self.ch
    }

    fn tick(&self) -> Result<(), TypeError> {
        if self.ch.fuel.tick() {
            Ok(())
        } else {
            Err(TypeError::OutOfFuel)
        }
    }

    /// Normal terms of `ty` in `ctx` of size exactly `s`, in canonical order.
    pub fn terms_of_size(&mut self, ctx: &Context, ty: &Type, s: usize) -> Result<Vec<Term>, TypeError> {
        let ty = self.ch.norm_type(ctx, ty)?;
        self.exact(ctx, &ty, s)
    }

    /// Normal terms of `ty` in `ctx` of size at most `max`, smallest first.
    pub fn terms(&mut self, ctx: &Context, ty: &Type, max: usize) -> Result<Vec<Term>, TypeError> {
        let ty = self.ch.norm_type(ctx, ty)?;
        let mut out = Vec::new();
        for s in 1..=max {
            out.extend(self.exact(ctx, &ty, s)?);
        }
        Ok(out)
    }

    fn exact(&mut self, ctx: &Context, ty: &Type, s: usize) -> Result<Vec<Term>, TypeError> {
        if s == 0 {
            return Ok(Vec::new());
        }
        let key = (ctx.clone(), ty.clone(), s);
        if let Some(v) = self.memo.get(&key) {
            return Ok(v.clone());
        }
        let mut cands: Vec<Term> = Vec::new();
        if let Type::Pi(dom, cod) = ty {
            let ext = ctx.extended("x", (**dom).clone());
            for b in self.exact(&ext, cod, s)? {
                let l = Term::lam(b);
                if l.clone().eta_contract() == l {
                    cands.push(l);
                }
            }
        }
        for i in 0..ctx.len() as u32 {
            let vty = ctx.var_type(i).ok_or(TypeError::UnboundVar(i))?;
            let vty = self.ch.norm_type(ctx, &vty)?;
            let mut spines = Vec::new();
            self.var_spines(ctx, vty, s - 1, &mut Vec::new(), &mut spines)?;
            for (args, rty) in spines {
                if rty == *ty {
                    cands.push(Term::Var(i, args));
                }
            }
        }
        if let Type::Sort(target, _) = ty {
            let sig = self.ch.sig;
            for (c, d) in sig.decls.iter().enumerate() {
                let DeclKind::Term(res) = &d.kind else { continue };
                if !matches!(res, Type::Sort(r, _) if r == target) {
                    continue;
                }
                if d.params.is_empty() {
                    if s == 1 && self.ch.norm_type(ctx, res)? == *ty {
                        cands.push(Term::Const(super::syntax::ConstId(c), Vec::new()));
                    }
                    continue;
                }
                let mut tuples = Vec::new();
                self.const_args(ctx, &d.params, s - 1, &mut Vec::new(), &mut tuples)?;
                for args in tuples {
                    if self.ch.norm_type(ctx, &res.subst(&args))? == *ty {
                        cands.push(Term::Const(super::syntax::ConstId(c), args));
                    }
                }
            }
        }
        let mut out = Vec::with_capacity(cands.len());
        for t in cands {
            self.tick()?;
            if self.ch.norm(ctx, &t, ty)? == t {
                out.push(t);
            }
        }
        self.memo.insert(key, out.clone());
        Ok(out)
    }

    /// Spines of every length for a head of type `ty`, consuming exactly
    /// `left` size; each comes with its (normalized) result type.
    fn var_spines(
        &mut self,
        ctx: &Context,
        ty: Type,
        left: usize,
        acc: &mut Vec<Term>,
        out: &mut Vec<(Vec<Term>, Type)>,
    ) -> Result<(), TypeError> {
        if left == 0 {
            out.push((acc.clone(), ty));
            return Ok(());
        }
        let Type::Pi(dom, cod) = ty else { return Ok(()) };
        for sz in 1..=left {
            for a in self.exact(ctx, &dom, sz)? {
                let next = self.ch.norm_type(ctx, &cod.subst(core::slice::from_ref(&a)))?;
                acc.push(a);
                self.var_spines(ctx, next, left - sz, acc, out)?;
                acc.pop();
            }
        }
        Ok(())
    }

    /// Argument tuples for a telescope whose sizes sum to exactly `left`.
    fn const_args(
        &mut self,
        ctx: &Context,
        params: &Context,
        left: usize,
        acc: &mut Vec<Term>,
        out: &mut Vec<Vec<Term>>,
    ) -> Result<(), TypeError> {
        let k = acc.len();
        if k == params.len() {
            if left == 0 {
                out.push(acc.clone());
            }
            return Ok(());
        }
        let rest = params.len() - k - 1;
        if left < rest + 1 {
            return Ok(());
        }
        let ty = self.ch.norm_type(ctx, &params.entries[k].ty.subst(acc))?;
        let max = if rest == 0 { left } else { left - rest };
        let min = if rest == 0 { left } else { 1 };
        for sz in min..=max {
            for a in self.exact(ctx, &ty, sz)? {
                acc.push(a);
                self.const_args(ctx, params, left - sz, acc, out)?;
                acc.pop();
            }
        }
        Ok(())
    }

    /// Instances of declared sorts of size at most `size` in `ctx`, by sort
    /// then size; only representable sorts if `representable_only`.
    pub fn sort_types(&mut self, ctx: &Context, size: usize, representable_only: bool) -> Result<Vec<Type>, TypeError> {
        let sig = self.ch.sig;
        let mut out = Vec::new();
        for (c, d) in sig.decls.iter().enumerate() {
            let keep = match d.kind {
                DeclKind::RepSort => true,
                DeclKind::Sort => !representable_only,
                DeclKind::Term(_) => false,
            };
            if !keep {
                continue;
            }
            let id = super::syntax::ConstId(c);
            if d.params.is_empty() {
                if size >= 1 {
                    out.push(Type::Sort(id, Vec::new()));
                }
                continue;
            }
            for total in 1..size {
                let mut tuples = Vec::new();
                self.const_args(ctx, &d.params, total, &mut Vec::new(), &mut tuples)?;
                out.extend(tuples.into_iter().map(|a| Type::Sort(id, a)));
            }
        }
        Ok(out)
    }

    /// Extensions of `base` by at most `bounds.depth` sort instances of size
    /// at most `bounds.size`, shortest first.
    pub fn extensions(&mut self, base: &Context, bounds: Bounds, representable_only: bool) -> Result<Vec<Context>, TypeError> {
        let mut out = vec![base.clone()];
        let mut level = vec![base.clone()];
        for _ in 0..bounds.depth {
            let mut next = Vec::new();
            for ctx in &level {
                for ty in self.sort_types(ctx, bounds.size, representable_only)? {
                    self.tick()?;
                    next.push(ctx.extended("x", ty));
                }
            }
            out.extend(next.iter().cloned());
            level = next;
        }
        Ok(out)
    }

    /// Substitutions `delta -> gamma` with normal components of size at most
    /// `size`, in lexicographic order.
    pub fn substitutions(&mut self, delta: &Context, gamma: &Context, size: usize) -> Result<Vec<Substitution>, TypeError> {
        let mut out = Vec::new();
        self.subst_rec(delta, gamma, size, &mut Vec::new(), &mut out)?;
        Ok(out)
    }

    fn subst_rec(
        &mut self,
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
        for t in self.terms(delta, &ty, size)? {
            acc.push(t);
            self.subst_rec(delta, gamma, size, acc, out)?;
            acc.pop();
        }
        Ok(())
    }
}

fn partial<T>(r: Result<Vec<T>, TypeError>, got: impl FnOnce() -> Vec<T>) -> Result<Enumeration<T>, TypeError> {
    match r {
        Ok(items) => Ok(Enumeration { items, complete: true }),
        Err(TypeError::OutOfFuel) => Ok(Enumeration { items: got(), complete: false }),
        Err(e) => Err(e),
    }
}

/// Contexts of at most `bounds.depth` entries; with `representable_only`
/// every entry is an instance of a representable sort.
pub fn enumerate_contexts(
    sig: &Signature,
    bounds: Bounds,
    representable_only: bool,
    fuel: &Budget,
) -> Result<Enumeration<Context>, TypeError> {
    enumerate_extensions(sig, &Context::new(), bounds, representable_only, fuel)
}

/// As [`enumerate_contexts`], for extensions of `base`. When fuel runs out
/// the contexts completed so far (level by level) are returned, flagged.
pub fn enumerate_extensions(
    sig: &Signature,
    base: &Context,
    bounds: Bounds,
    representable_only: bool,
    fuel: &Budget,
) -> Result<Enumeration<Context>, TypeError> {
    let mut en = Enumerator::new(sig, fuel);
    let mut done = Vec::new();
    for d in 0..=bounds.depth {
        match en.extensions(base, Bounds { depth: d, ..bounds }, representable_only) {
            Ok(v) => done = v,
            Err(TypeError::OutOfFuel) => return Ok(Enumeration { items: done, complete: false }),
            Err(e) => return Err(e),
        }
    }
    Ok(Enumeration { items: done, complete: true })
}

/// Substitutions `delta -> gamma` with components of size at most `size`.
pub fn enumerate_substitutions(
    sig: &Signature,
    delta: &Context,
    gamma: &Context,
    size: usize,
    fuel: &Budget,
) -> Result<Enumeration<Substitution>, TypeError> {
    let mut en = Enumerator::new(sig, fuel);
    partial(en.substitutions(delta, gamma, size), Vec::new)
}

/// Random well-typed terms. Choices are delegated to `choose(n)`, which
/// must return an index below `n`; redexes are planted by instantiating
/// rule left-hand sides whose type matches the requested one.
pub struct RandomTerms<'a, R: FnMut(usize) -> usize> {
    en: Enumerator<'a>,
    choose: R,
    /// Size bound of the normal terms drawn as leaves.
    pub leaf_size: usize,
}

impl<'a, R: FnMut(usize) -> usize> RandomTerms<'a, R> {
    pub fn new(sig: &'a Signature, fuel: &'a Budget, choose: R) -> Self {
        RandomTerms { en: Enumerator::new(sig, fuel), choose, leaf_size: 2 }
    }

    fn pick(&mut self, n: usize) -> usize {
        (self.choose)(n) % n.max(1)
    }

    /// A constant-headed term of some type, with the type.
    pub fn any(&mut self, ctx: &Context, depth: usize) -> Result<Option<(Term, Type)>, TypeError> {
        let sig = self.en.ch.sig;
        let heads: Vec<usize> =
            (0..sig.decls.len()).filter(|&c| matches!(sig.decls[c].kind, DeclKind::Term(_))).collect();
        if heads.is_empty() {
            return Ok(None);
        }
        let c = heads[self.pick(heads.len())];
        let d = &sig.decls[c];
        let mut args: Vec<Term> = Vec::new();
        for k in 0..d.params.len() {
            let ty = d.params.entries[k].ty.subst(&args);
            match self.of_type(ctx, &ty, depth.saturating_sub(1))? {
                Some(a) => args.push(a),
                None => return Ok(None),
            }
        }
        let t = Term::Const(super::syntax::ConstId(c), args);
        let ty = self.en.ch.infer(ctx, &t)?;
        Ok(Some((t, ty)))
    }

    /// A term of type `ty`: a normal leaf, a planted redex, or a constant
    /// application whose result type matches.
    pub fn of_type(&mut self, ctx: &Context, ty: &Type, depth: usize) -> Result<Option<Term>, TypeError> {
        let ty = self.en.ch.norm_type(ctx, ty)?;
        if let Type::Pi(dom, cod) = &ty {
            let ext = ctx.extended("x", (**dom).clone());
            return Ok(self.of_type(&ext, cod, depth)?.map(Term::lam));
        }
        let mode = if depth == 0 { 0 } else { self.pick(3) };
        let built = match mode {
            1 => self.redex(ctx, &ty, depth)?,
            2 => self.application(ctx, &ty, depth)?,
            _ => None,
        };
        if built.is_some() {
            return Ok(built);
        }
        let leaves = self.en.terms(ctx, &ty, self.leaf_size)?;
        if leaves.is_empty() {
            return Ok(None);
        }
        let i = self.pick(leaves.len());
        Ok(Some(leaves[i].clone()))
    }

    /// Fills a telescope whose entries may be pre-bound by matching.
    fn fill(
        &mut self,
        ctx: &Context,
        tele: &Context,
        bound: Vec<Option<Term>>,
        depth: usize,
    ) -> Result<Option<Vec<Term>>, TypeError> {
        let mut acc: Vec<Term> = Vec::new();
        for (k, b) in bound.into_iter().enumerate() {
            match b {
                Some(t) => acc.push(t),
                None => {
                    let ty = tele.entries[k].ty.subst(&acc);
                    match self.of_type(ctx, &ty, depth - 1)? {
                        Some(t) => acc.push(t),
                        None => return Ok(None),
                    }
                }
            }
        }
        Ok(Some(acc))
    }

    fn redex(&mut self, ctx: &Context, ty: &Type, depth: usize) -> Result<Option<Term>, TypeError> {
        let sig = self.en.ch.sig;
        let mut cands = Vec::new();
        for r in &sig.rules {
            if !matches!(r.lhs, Term::Const(..)) {
                continue;
            }
            let pat = self.en.ch.infer(&r.ctx, &r.lhs)?;
            if let Some(b) = self.en.ch.match_type_partial(r.ctx.len(), &pat, ty) {
                cands.push((r, b));
            }
        }
        if cands.is_empty() {
            return Ok(None);
        }
        let i = self.pick(cands.len());
        let (r, b) = cands.swap_remove(i);
        let Some(s) = self.fill(ctx, &r.ctx, b, depth)? else { return Ok(None) };
        let t = r.lhs.subst(&s);
        Ok(self.en.ch.check(ctx, &t, ty).is_ok().then_some(t))
    }

    fn application(&mut self, ctx: &Context, ty: &Type, depth: usize) -> Result<Option<Term>, TypeError> {
        let sig = self.en.ch.sig;
        let mut cands = Vec::new();
        for (c, d) in sig.decls.iter().enumerate() {
            let DeclKind::Term(res) = &d.kind else { continue };
            if let Some(b) = self.en.ch.match_type_partial(d.params.len(), res, ty) {
                cands.push((c, b));
            }
        }
        if cands.is_empty() {
            return Ok(None);
        }
        let i = self.pick(cands.len());
        let (c, b) = cands.swap_remove(i);
        let Some(args) = self.fill(ctx, &sig.decls[c].params, b, depth)? else { return Ok(None) };
        let t = Term::Const(super::syntax::ConstId(c), args);
        Ok(self.en.ch.check(ctx, &t, ty).is_ok().then_some(t))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lf::corpus;
    use crate::lf::parse::{parse_context, parse_signature_onto, parse_type};
    use crate::lf::print::print_context;

    fn with_o(sig: Signature) -> Signature {
        parse_signature_onto(sig, "o : Ty").unwrap()
    }

    #[test]
    fn depth_zero_is_the_empty_context() {
        for (_, src) in corpus::SHIPPED {
            let sig = crate::lf::parse::parse_signature(src).unwrap();
            let e = enumerate_contexts(&sig, Bounds::new(0, 3), true, &Budget::unlimited()).unwrap();
            assert_eq!(e.items, vec![Context::new()]);
            assert!(e.complete);
        }
    }

    #[test]
    fn generic_theory_with_a_closed_type() {
        let sig = with_o(corpus::tthg());
        let e = enumerate_contexts(&sig, Bounds::new(1, 3), true, &Budget::unlimited()).unwrap();
        let shown: Vec<_> = e.items.iter().map(|c| print_context(&sig, c)).collect();
        assert_eq!(shown, ["", "(x : El o)"]);
        let pure = enumerate_contexts(&corpus::tthg(), Bounds::new(1, 3), true, &Budget::unlimited()).unwrap();
        assert_eq!(pure.items.len(), 1);
    }

    #[test]
    fn uip_contexts_appear_at_depth_two() {
        let sig = with_o(corpus::etth1());
        let e = enumerate_contexts(&sig, Bounds::new(2, 5), true, &Budget::unlimited()).unwrap();
        let want = parse_context(&sig, "(x : El o) (p : El (Id o x x))").unwrap();
        assert!(e.items.iter().any(|c| c.types().eq(want.types())));
    }

    #[test]
    fn enumerated_terms_are_normal_and_typed() {
        let sig = corpus::itth();
        let ctx = parse_context(&sig, "(A : Ty) (a : El A)").unwrap();
        let fuel = Budget::unlimited();
        let mut en = Enumerator::new(&sig, &fuel);
        for ty in ["Ty", "El A", "El Unit", "(x : El A) -> Ty"] {
            let ty = parse_type(&sig, &ctx, ty).unwrap();
            let ts = en.terms(&ctx, &ty, 4).unwrap();
            assert!(!ts.is_empty());
            for t in &ts {
                en.checker().check(&ctx, t, &ty).unwrap();
                assert_eq!(&en.checker().norm(&ctx, t, &ty).unwrap(), t);
            }
            let mut d = ts.clone();
            d.sort();
            d.dedup();
            assert_eq!(d.len(), ts.len());
        }
        // unit-eta leaves `tt` as the only closed normal inhabitant
        let unit = parse_type(&sig, &Context::new(), "El Unit").unwrap();
        assert_eq!(en.terms(&Context::new(), &unit, 4).unwrap().len(), 1);
    }

    #[test]
    fn substitutions_into_a_type_context() {
        let sig = with_o(corpus::tthg());
        let gamma = parse_context(&sig, "(A : Ty)").unwrap();
        let s = enumerate_substitutions(&sig, &Context::new(), &gamma, 3, &Budget::unlimited()).unwrap();
        assert_eq!(s.items.len(), 1);
    }

    #[test]
    fn fuel_exhaustion_flags_partial_lists() {
        let sig = with_o(corpus::itth());
        let e = enumerate_contexts(&sig, Bounds::new(2, 4), true, &Budget::new(5)).unwrap();
        assert!(!e.complete);
    }

    #[test]
    fn random_terms_are_well_typed() {
        let sig = corpus::itth_pi();
        let ctx = parse_context(&sig, "(A : Ty) (a : El A)").unwrap();
        let fuel = Budget::unlimited();
        let mut state = 7u64;
        let mut rt = RandomTerms::new(&sig, &fuel, move |n| {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 33) as usize) % n
        });
        let mut got = 0;
        for _ in 0..50 {
            if let Some((t, ty)) = rt.any(&ctx, 3).unwrap() {
                rt.en.checker().check(&ctx, &t, &ty).unwrap();
                got += 1;
            }
        }
        assert!(got > 10);
    }
}
