//! Slices of a theory at a context, the polynomial contexts `P^n(1)`,
//! `P^n(Ty)`, `P^n(El)`, and interpretations of signature extensions.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::check::{Checker, TypeError};
use super::enumerate::{Enumeration, Enumerator};
use super::parse::parse_context;
use super::syntax::{ConstId, Context, Decl, DeclKind, Item, Signature, Substitution, Term, Type};
use crate::budget::Budget;

/// A name not yet declared in `sig`, derived from `base`.
pub fn fresh_name(sig: &Signature, base: &str) -> String {
    let base = if base.is_empty() || base == "_" { "c" } else { base };
    if sig.lookup(base).is_none() {
        return base.into();
    }
    (0..).map(|k| format!("{base}'{k}")).find(|n| sig.lookup(n).is_none()).unwrap()
}

/// Splits `(x1 : D1) .. (xn : Dn) -> S` into its telescope and sort.
pub fn unroll(ty: &Type) -> (Context, Type) {
    let mut tele = Context::new();
    let mut cur = ty;
    while let Type::Pi(a, b) = cur {
        tele.push(format!("x{}", tele.len() + 1), (**a).clone());
        cur = b;
    }
    (tele, cur.clone())
}

/// The eta-long closed term denoting constant `c` with `n` parameters.
pub fn constant_term(c: ConstId, n: usize) -> Term {
    let args = (0..n as u32).rev().map(Term::var).collect();
    let mut t = Term::Const(c, args);
    for _ in 0..n {
        t = Term::lam(t);
    }
    t
}

/// Adjoins a fresh constant of the closed type `ty`; returns the closed
/// term denoting it.
pub fn adjoin(sig: &mut Signature, name: &str, ty: &Type) -> Term {
    let (params, res) = unroll(ty);
    let n = params.len();
    let c = sig.push_decl(Decl { name: fresh_name(sig, name), params, kind: DeclKind::Term(res) });
    constant_term(c, n)
}

/// `sig` extended by one constant per entry of `a`, forming a global section
/// of `a`, together with that section as a closed substitution.
pub fn slice_with_section(sig: &Signature, a: &Context, fuel: &Budget) -> Result<(Signature, Substitution), TypeError> {
    Checker::new(sig, fuel).check_context(a)?;
    let mut out = sig.clone();
    let mut section: Vec<Term> = Vec::new();
    for b in &a.entries {
        let ty = b.ty.subst(&section);
        let t = adjoin(&mut out, &b.name, &ty);
        section.push(t);
    }
    Ok((out, Substitution { terms: section }))
}

/// The slice theory: `sig` with a freely adjoined global section of `a`.
pub fn slice_theory(sig: &Signature, a: &Context, fuel: &Budget) -> Result<Signature, TypeError> {
    Ok(slice_with_section(sig, a, fuel)?.0)
}

/// Top of a polynomial context.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PolyTop {
    Unit,
    Ty,
    El,
}

impl PolyTop {
    pub fn name(self) -> &'static str {
        match self {
            PolyTop::Unit => "unit",
            PolyTop::Ty => "Ty",
            PolyTop::El => "El",
        }
    }
}

/// The context presenting `y(P^n(top))` over a signature extending the
/// generic theory (sorts `Ty` and `El`): types `A1 .. An` where `Ak`
/// depends on `x1 : El A1, .., x(k-1)`; `Ty` adds `A(n+1)` over all `n`
/// variables and `El` additionally a term `a : El (A(n+1) x1 .. xn)`.
pub fn polynomial_object(sig: &Signature, n: usize, top: PolyTop) -> Result<Context, TypeError> {
    for (name, rep) in [("Ty", false), ("El", true)] {
        let ok = sig.lookup(name).is_some_and(|c| if rep { sig.is_rep_sort(c) } else { sig.is_sort(c) });
        if !ok {
            return Err(TypeError::NotASort(name.into()));
        }
    }
    let types = match top {
        PolyTop::Unit => n,
        PolyTop::Ty | PolyTop::El => n + 1,
    };
    let var = |k: usize| -> String { fresh_name(sig, &format!("x{k}")) };
    let ty_name = |k: usize| -> String { fresh_name(sig, &format!("A{k}")) };
    let applied = |k: usize| -> String {
        let mut s = ty_name(k);
        for j in 1..k {
            s.push(' ');
            s.push_str(&var(j));
        }
        s
    };
    let binders = |k: usize| -> String {
        (1..k).map(|j| format!("({} : El ({})) ", var(j), applied(j))).collect()
    };
    let mut src = String::new();
    for k in 1..=types {
        if k == 1 {
            src.push_str(&format!("({} : Ty) ", ty_name(1)));
        } else {
            src.push_str(&format!("({} : {}-> Ty) ", ty_name(k), binders(k)));
        }
    }
    if top == PolyTop::El {
        let k = n + 1;
        let name = fresh_name(sig, "a");
        if n == 0 {
            src.push_str(&format!("({name} : El {})", applied(k)));
        } else {
            src.push_str(&format!("({name} : {}-> El ({}))", binders(k), applied(k)));
        }
    }
    parse_context(sig, &src).map_err(|e| TypeError::Rule(format!("polynomial context: {e}")))
}

/// An interpretation of `src` in `target` fixing their first `core` items:
/// every later term constant `c : (params) -> S` of `src` goes to a closed
/// term of the translated type `(params) -> S` in `target`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Interpretation {
    pub core: usize,
    pub images: Vec<Term>,
}

fn core_decls(sig: &Signature, core: usize) -> usize {
    sig.items[..core].iter().filter(|i| matches!(i, Item::Decl(_))).count()
}

impl Interpretation {
    /// Translates a term of `src` along the images (core constants fixed).
    pub fn term(&self, src: &Signature, t: &Term) -> Term {
        let k = core_decls(src, self.core);
        t.map_consts(&|c, args, _| if c.0 < k { Term::Const(c, args) } else { self.images[c.0 - k].clone().apply(args) })
    }

    pub fn ty(&self, src: &Signature, ty: &Type) -> Type {
        let k = core_decls(src, self.core);
        ty.map_consts(
            &|c, args, _| if c.0 < k { Term::Const(c, args) } else { self.images[c.0 - k].clone().apply(args) },
            &|c| c,
        )
    }

    pub fn context(&self, src: &Signature, ctx: &Context) -> Context {
        let mut out = Context::new();
        for b in &ctx.entries {
            out.push(b.name.clone(), self.ty(src, &b.ty));
        }
        out
    }

    pub fn subst(&self, src: &Signature, s: &Substitution) -> Substitution {
        Substitution { terms: s.terms.iter().map(|t| self.term(src, t)).collect() }
    }

    /// Composite `self` followed by `then : mid -> target`.
    pub fn then(&self, mid: &Signature, then: &Interpretation) -> Interpretation {
        Interpretation { core: self.core, images: self.images.iter().map(|t| then.term(mid, t)).collect() }
    }

    /// The inclusion of `src` into an extension `target` of it.
    pub fn inclusion(src: &Signature, core: usize) -> Interpretation {
        let k = core_decls(src, core);
        let images = (k..src.decls.len())
            .map(|c| constant_term(ConstId(c), src.decls[c].params.len()))
            .collect();
        Interpretation { core, images }
    }
}

/// The type the image of constant `c` must have, given earlier images.
fn image_type(src: &Signature, c: usize, partial: &Interpretation) -> Result<Type, TypeError> {
    let d = &src.decls[c];
    let DeclKind::Term(res) = &d.kind else {
        return Err(TypeError::NotATerm(d.name.clone()));
    };
    let mut ty = partial.ty(src, res);
    for b in d.params.entries.iter().rev() {
        ty = Type::pi(partial.ty(src, &b.ty), ty);
    }
    Ok(ty)
}

fn check_core(src: &Signature, target: &Signature, core: usize) -> Result<(), TypeError> {
    if core > src.items.len() || core > target.items.len() || src.prefix(core) != target.prefix(core) {
        return Err(TypeError::Rule("source and target do not share the fixed prefix".into()));
    }
    Ok(())
}

/// Checks that every image has its translated type and every rule of `src`
/// beyond the prefix holds definitionally after translation.
pub fn check_interpretation(
    src: &Signature,
    target: &Signature,
    i: &Interpretation,
    fuel: &Budget,
) -> Result<(), TypeError> {
    check_core(src, target, i.core)?;
    let k = core_decls(src, i.core);
    if i.images.len() != src.decls.len() - k {
        return Err(TypeError::Arity { name: "interpretation".into(), expected: src.decls.len() - k, found: i.images.len() });
    }
    let ch = Checker::new(target, fuel);
    for c in k..src.decls.len() {
        let ty = image_type(src, c, i)?;
        ch.check(&Context::new(), &i.images[c - k], &ty)?;
    }
    for item in &src.items[i.core..] {
        let Item::Rule(r) = item else { continue };
        let r = &src.rules[*r];
        let ctx = i.context(src, &r.ctx);
        let (l, ty) = ch.norm_infer(&ctx, &i.term(src, &r.lhs))?;
        let rr = ch.norm(&ctx, &i.term(src, &r.rhs), &ty)?;
        if l != rr {
            return Err(TypeError::Rule(format!("rule {} is not preserved", r.name)));
        }
    }
    Ok(())
}

/// All interpretations of `src` in `target` fixing the first `core` items,
/// with normal images of size at most `size`, in lexicographic order.
pub fn enumerate_interpretations(
    src: &Signature,
    target: &Signature,
    core: usize,
    size: usize,
    fuel: &Budget,
) -> Result<Enumeration<Interpretation>, TypeError> {
    check_core(src, target, core)?;
    let k = core_decls(src, core);
    let mut en = Enumerator::new(target, fuel);
    let mut out = Vec::new();
    let mut acc = Interpretation { core, images: Vec::new() };
    match interp_rec(src, target, k, size, fuel, &mut en, &mut acc, &mut out) {
        Ok(()) => Ok(Enumeration { items: out, complete: true }),
        Err(TypeError::OutOfFuel) => Ok(Enumeration { items: out, complete: false }),
        Err(e) => Err(e),
    }
}

#[allow(clippy::too_many_arguments)]
fn interp_rec(
    src: &Signature,
    target: &Signature,
    c: usize,
    size: usize,
    fuel: &Budget,
    en: &mut Enumerator<'_>,
    acc: &mut Interpretation,
    out: &mut Vec<Interpretation>,
) -> Result<(), TypeError> {
    if c == src.decls.len() {
        match check_interpretation(src, target, acc, fuel) {
            Ok(()) => out.push(acc.clone()),
            Err(TypeError::OutOfFuel) => return Err(TypeError::OutOfFuel),
            Err(_) => {}
        }
        return Ok(());
    }
    let ty = image_type(src, c, acc)?;
    for t in en.terms(&Context::new(), &ty, size)? {
        acc.images.push(t);
        interp_rec(src, target, c + 1, size, fuel, en, acc, out)?;
        acc.images.pop();
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lf::corpus;
    use crate::lf::enumerate::enumerate_substitutions;
    use crate::lf::parse::parse_signature_onto;
    use crate::lf::print::{print_context, print_signature};
    use crate::lf::check::check_signature;

    fn fuel() -> Budget {
        Budget::new(1_000_000)
    }

    #[test]
    fn slicing_at_a_type() {
        let sig = corpus::tthg();
        let a = parse_context(&sig, "(A : Ty)").unwrap();
        let s = slice_theory(&sig, &a, &fuel()).unwrap();
        assert_eq!(print_signature(&s), "Ty : sort\nEl : (A : Ty) -> rep-sort\nA : Ty\n");
        let a2 = parse_context(&sig, "(A : Ty) (a : El A)").unwrap();
        let s2 = slice_theory(&sig, &a2, &fuel()).unwrap();
        assert!(print_signature(&s2).ends_with("A : Ty\na : El A\n"));
        assert!(check_signature(&s2, &fuel()).is_valid());
    }

    #[test]
    fn slicing_at_the_empty_context_is_trivial() {
        for (name, _) in corpus::SHIPPED {
            let sig = corpus::shipped(name).unwrap();
            assert_eq!(slice_theory(&sig, &Context::new(), &fuel()).unwrap(), sig);
        }
    }

    #[test]
    fn slicing_twice_is_slicing_at_the_concatenation() {
        let sig = corpus::itth();
        let ab = parse_context(&sig, "(A : Ty) (B : (x : El A) -> Ty) (a : El A) (b : El (B a))").unwrap();
        let a = Context { entries: ab.entries[..2].to_vec() };
        let (s1, sec) = slice_with_section(&sig, &a, &fuel()).unwrap();
        let rest = Context {
            entries: ab.entries[2..]
                .iter()
                .enumerate()
                .map(|(k, b)| {
                    // entries after the prefix see the section, then earlier rest entries
                    let mut args: Vec<Term> = sec.terms.clone();
                    args.extend((0..k as u32).rev().map(Term::var));
                    crate::lf::syntax::Binding { name: b.name.clone(), ty: b.ty.subst(&args) }
                })
                .collect(),
        };
        let twice = slice_theory(&s1, &rest, &fuel()).unwrap();
        let once = slice_theory(&sig, &ab, &fuel()).unwrap();
        assert_eq!(twice, once);
        assert!(check_signature(&once, &fuel()).is_valid());
    }

    #[test]
    fn polynomial_contexts() {
        let sig = corpus::tthg();
        let show = |n, top| print_context(&sig, &polynomial_object(&sig, n, top).unwrap());
        assert_eq!(show(0, PolyTop::Unit), "");
        assert_eq!(show(0, PolyTop::Ty), "(A1 : Ty)");
        assert_eq!(show(0, PolyTop::El), "(A1 : Ty) (a : El A1)");
        assert_eq!(show(1, PolyTop::Unit), "(A1 : Ty)");
        assert_eq!(show(1, PolyTop::Ty), "(A1 : Ty) (A2 : (x : El A1) -> Ty)");
        assert_eq!(
            show(2, PolyTop::El),
            "(A1 : Ty) (A2 : (x : El A1) -> Ty) (A3 : (x : El A1) (x1 : El (A2 x)) -> Ty) \
             (a : (x : El A1) (x1 : El (A2 x)) -> El (A3 x x1))"
        );
        for n in 0..3 {
            for top in [PolyTop::Unit, PolyTop::Ty, PolyTop::El] {
                let p = polynomial_object(&sig, n, top).unwrap();
                let want = n + match top {
                    PolyTop::Unit => 0,
                    PolyTop::Ty => 1,
                    PolyTop::El => 2,
                };
                assert_eq!(p.len(), want);
                assert!(check_signature(&slice_theory(&sig, &p, &fuel()).unwrap(), &fuel()).is_valid());
            }
        }
    }

    #[test]
    fn maps_out_of_a_slice_are_sections() {
        let base = corpus::tthg();
        let target = parse_signature_onto(base.clone(), "o : Ty\nc : El o\nd : El o").unwrap();
        for src in ["(A : Ty)", "(A : Ty) (a : El A)", "(A : Ty) (B : (x : El A) -> Ty)"] {
            let a = parse_context(&base, src).unwrap();
            let sl = slice_theory(&base, &a, &fuel()).unwrap();
            let maps = enumerate_interpretations(&sl, &target, base.items.len(), 3, &fuel()).unwrap();
            let sections = enumerate_substitutions(&target, &Context::new(), &a, 3, &fuel()).unwrap();
            assert!(maps.complete && sections.complete);
            assert_eq!(maps.items.len(), sections.items.len(), "{src}");
            let (_, generic) = slice_with_section(&base, &a, &fuel()).unwrap();
            let images: Vec<_> = maps.items.iter().map(|i| i.subst(&sl, &generic)).collect();
            assert_eq!(images, sections.items);
        }
    }

    #[test]
    fn interpretations_must_preserve_rules() {
        let base = corpus::tthg();
        let src = parse_signature_onto(base.clone(), "o : Ty\nc : El o\nd : El o\nrule cd : c ~> d").unwrap();
        let target = parse_signature_onto(base.clone(), "p : Ty\ne : El p\nf : El p").unwrap();
        let maps = enumerate_interpretations(&src, &target, base.items.len(), 2, &fuel()).unwrap();
        // o |-> p, and c, d must coincide: (e, e) or (f, f)
        assert_eq!(maps.items.len(), 2);
        let incl = Interpretation::inclusion(&target, base.items.len());
        check_interpretation(&target, &target, &incl, &fuel()).unwrap();
    }
}
