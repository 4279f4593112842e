//! Display maps and Id-homotopy equivalences in models.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use super::HomotopyError;
use crate::budget::{Budget, Verdict};
use crate::fincat::{ArrowId, ObjId};
use crate::lf::parse::parse_context;
use crate::lf::syntax::{ConstId, DeclKind, Term, Type};
use crate::models::realize::{Realized, Value};

/// Arrows isomorphic over their target to a comprehension projection of
/// some representable sort.
pub fn display_maps(r: &Realized<'_>, budget: &Budget) -> Result<BTreeSet<ArrowId>, HomotopyError> {
    let base = &*r.base;
    let mut projs: BTreeSet<ArrowId> = BTreeSet::new();
    for (s, d) in r.sig.decls.iter().enumerate() {
        if d.kind != DeclKind::RepSort {
            continue;
        }
        let rep = r.sort_rep(ConstId(s))?;
        for c in base.objects() {
            for y in 0..rep.cod().size(c) {
                projs.insert(rep.comprehension(c, y).proj);
            }
        }
    }
    let mut out = BTreeSet::new();
    for e in base.arrows() {
        if !budget.tick() {
            return Err(HomotopyError::OutOfBudget);
        }
        if projs.iter().any(|&p| base.tgt(p) == base.tgt(e) && base.iso_over(e, p).is_some()) {
            out.insert(e);
        }
    }
    Ok(out)
}

/// An object presented as the comprehension of a closed type: `iso` maps
/// the object onto the comprehension of `ty` (an element of `Ty` at the
/// terminal object).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClosedPresentation {
    pub ty: u32,
    pub iso: ArrowId,
}

const TY: ConstId = ConstId(0);
const EL: ConstId = ConstId(1);

/// The least closed type whose comprehension is isomorphic to `x`.
pub fn closed_presentation(r: &Realized<'_>, x: ObjId) -> Result<Option<ClosedPresentation>, HomotopyError> {
    let rep = r.sort_rep(EL)?;
    let t = r.terminal;
    for ty in 0..rep.cod().size(t) {
        let w = rep.comprehension(t, ty);
        if let Some(iso) = r.base.find_iso(x, w.obj) {
            return Ok(Some(ClosedPresentation { ty, iso }));
        }
    }
    Ok(None)
}

/// Id-homotopy of arrows `h, k : x -> y`, where `y` is presented as the
/// comprehension of the closed type `A`: the identity type of `A` at `x`
/// between the two elements classified by `h` and `k` is inhabited.
fn homotopic(r: &Realized<'_>, p: ClosedPresentation, h: ArrowId, k: ArrowId) -> Result<bool, HomotopyError> {
    let base = &*r.base;
    let x = base.src(h);
    let rep = r.sort_rep(EL)?;
    let w = rep.comprehension(r.terminal, p.ty);
    let el = rep.dom();
    let gen = |a: ArrowId| el.act(base.compose(a, p.iso), w.generic);
    let (a, b) = (gen(h), gen(k));
    let to_x = base.hom(x, r.terminal)[0];
    let ty_x = rep.cod().act(to_x, p.ty);
    let ctx = parse_context(r.sig, "(A : Ty) (a : El A) (b : El A)").map_err(|e| HomotopyError::Unsupported(alloc::format!("{e}")))?;
    let id = r.sig.lookup("Id").ok_or_else(|| HomotopyError::Unsupported("no identity types".into()))?;
    let term = Term::Const(id, alloc::vec![Term::var(2), Term::var(1), Term::var(0)]);
    let env = alloc::vec![Value::Elem(ty_x), Value::Elem(a), Value::Elem(b)];
    let idty = r.eval(&ctx, &env, x, &term, &Type::Sort(TY, Vec::new()))?.elem().expect("types are elements");
    Ok(!r.fiber(EL, x, idty)?.is_empty())
}

/// Certificate of a homotopy equivalence: an inverse up to Id-homotopy.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HomotopyInverse {
    pub inverse: ArrowId,
}

/// Whether `f : a -> b` is a homotopy equivalence with homotopies given by
/// identity types, in a model of a signature with `Ty`, `El` and `Id`.
/// Both ends must be comprehensions of closed types (true of every
/// contextual object in the presence of unit and dependent sum types).
/// The search over candidate inverses is exhaustive, so the verdict is
/// `Inconclusive` only when the budget runs out.
pub fn weak_equivalence(r: &Realized<'_>, f: ArrowId, budget: &Budget) -> Result<(Verdict, Option<HomotopyInverse>), HomotopyError> {
    let base = &*r.base;
    let (a, b) = (base.src(f), base.tgt(f));
    let pa = closed_presentation(r, a)?.ok_or_else(|| HomotopyError::Unsupported("source is not a closed comprehension".into()))?;
    let pb = closed_presentation(r, b)?.ok_or_else(|| HomotopyError::Unsupported("target is not a closed comprehension".into()))?;
    for &g in base.hom(b, a) {
        if !budget.tick() {
            return Ok((Verdict::Inconclusive, None));
        }
        if homotopic(r, pa, base.compose(f, g), base.id(a))? && homotopic(r, pb, base.compose(g, f), base.id(b))? {
            return Ok((Verdict::Holds, Some(HomotopyInverse { inverse: g })));
        }
    }
    Ok((Verdict::Fails, None))
}
