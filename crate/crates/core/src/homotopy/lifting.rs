//! Trivial fibrations between models of theories with `Ty` and `El`:
//! type and term lifting decided on the base, and the right lifting
//! property against generating cofibrations decided on the internal
//! language. The two are independent computations of the same verdict for
//! democratic models.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use super::HomotopyError;
use crate::budget::Budget;
use crate::fincat::ObjId;
use crate::lf::slice::{polynomial_object, PolyTop};
use crate::lf::syntax::{ConstId, DeclKind};
use crate::models::morphism::{map_env, ModelMorphism};
use crate::models::realize::{Env, Realized};

const TY: ConstId = ConstId(0);
const EL: ConstId = ConstId(1);

/// A failed lifting problem on the base.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LiftFailure {
    /// A type of the target over `F(obj)` has no preimage over `obj`.
    Type { obj: ObjId, ty: u32 },
    /// A term of the target over `F(obj)` of type `F(ty)` has no preimage
    /// of type `ty`.
    Term { obj: ObjId, ty: u32, term: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftingVerdict {
    /// Objects reachable from the terminal by at most `depth`
    /// comprehensions, in order of discovery.
    pub objects: Vec<ObjId>,
    pub type_lifting: Option<LiftFailure>,
    pub term_lifting: Option<LiftFailure>,
}

impl LiftingVerdict {
    pub fn holds(&self) -> bool {
        self.type_lifting.is_none() && self.term_lifting.is_none()
    }
}

/// Objects reachable from the terminal by at most `depth` comprehensions
/// of the representable sort `El`.
pub fn objects_within(r: &Realized<'_>, depth: usize) -> Result<Vec<ObjId>, HomotopyError> {
    let rep = r.sort_rep(EL)?;
    let mut seen = alloc::vec![r.terminal];
    let mut frontier = alloc::vec![r.terminal];
    for _ in 0..depth {
        let mut next = Vec::new();
        for &c in &frontier {
            for y in 0..rep.cod().size(c) {
                let o = rep.comprehension(c, y).obj;
                if !seen.contains(&o) {
                    seen.push(o);
                    next.push(o);
                }
            }
        }
        frontier = next;
    }
    Ok(seen)
}

fn check_shape(r: &Realized<'_>) -> Result<(), HomotopyError> {
    let d = &r.sig.decls;
    if d.len() < 2 || d[0].kind != DeclKind::Sort || d[1].kind != DeclKind::RepSort {
        return Err(HomotopyError::Unsupported("signature must start with `Ty` and `El`".into()));
    }
    Ok(())
}

/// Type and term lifting for `f : M -> N` over the objects of `M` within
/// `depth` comprehensions of the terminal.
pub fn lifting_verdict(rm: &Realized<'_>, rn: &Realized<'_>, f: &ModelMorphism, depth: usize, budget: &Budget) -> Result<LiftingVerdict, HomotopyError> {
    check_shape(rm)?;
    check_shape(rn)?;
    let objects = objects_within(rm, depth)?;
    let mut type_lifting = None;
    let mut term_lifting = None;
    let el_m = rm.sort_params(EL)?;
    let el_n = rn.sort_params(EL)?;
    for &c in &objects {
        let fc = f.functor.on_object(c);
        if !budget.tick() {
            return Err(HomotopyError::OutOfBudget);
        }
        let image = |s: ConstId, x: u32| f.component(s, c, x).ok_or_else(|| HomotopyError::Unsupported("morphism component out of range".into()));
        if type_lifting.is_none() {
            let hit: BTreeSet<u32> = (0..rm.sort_total(TY)?.size(c)).map(|a| image(TY, a)).collect::<Result<_, _>>()?;
            if let Some(ty) = (0..rn.sort_total(TY)?.size(fc)).find(|a| !hit.contains(a)) {
                type_lifting = Some(LiftFailure::Type { obj: c, ty });
            }
        }
        if term_lifting.is_none() {
            'types: for a in 0..rm.sort_total(TY)?.size(c) {
                let fa = image(TY, a)?;
                let hit: BTreeSet<u32> = (0..rm.sort_total(EL)?.size(c))
                    .filter(|&e| el_m[c.0][e as usize] == a)
                    .map(|e| image(EL, e))
                    .collect::<Result<_, _>>()?;
                for e in 0..rn.sort_total(EL)?.size(fc) {
                    if el_n[fc.0][e as usize] == fa && !hit.contains(&e) {
                        term_lifting = Some(LiftFailure::Term { obj: c, ty: a, term: e });
                        break 'types;
                    }
                }
            }
        }
    }
    Ok(LiftingVerdict { objects, type_lifting, term_lifting })
}

/// A lifting problem against a generating cofibration without solution:
/// the square's top (a global element of the source context in `M`) and
/// bottom (a global element of the target context in `N`), as indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RlpFailure {
    pub n: usize,
    pub top: PolyTop,
    pub upper: usize,
    pub lower: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RlpVerdict {
    /// Lifting problems examined.
    pub problems: usize,
    pub failure: Option<RlpFailure>,
}

impl RlpVerdict {
    pub fn holds(&self) -> bool {
        self.failure.is_none()
    }
}

/// The right lifting property of `f` against the generating cofibrations
/// `P^n(1) -> P^n(Ty)` and `P^n(Ty) -> P^n(El)` for `n <= depth`, by
/// enumerating every commutative square in the internal languages.
pub fn rlp_verdict(rm: &Realized<'_>, rn: &Realized<'_>, f: &ModelMorphism, depth: usize, budget: &Budget) -> Result<RlpVerdict, HomotopyError> {
    check_shape(rm)?;
    let mut problems = 0;
    for n in 0..=depth {
        for (lo, hi) in [(PolyTop::Unit, PolyTop::Ty), (PolyTop::Ty, PolyTop::El)] {
            let src = polynomial_object(rm.sig, n, lo)?;
            let tgt = polynomial_object(rm.sig, n, hi)?;
            let upper = rm.global_elements(&src)?;
            let lifts = rm.global_elements(&tgt)?;
            let lower = rn.global_elements(&tgt)?;
            let map = |ctx, e: &Env| map_env(rm, f, ctx, e, rm.terminal);
            let upper_img: Vec<Env> = upper.iter().map(|e| map(&src, e)).collect::<Result<_, _>>()?;
            let lift_img: Vec<Env> = lifts.iter().map(|e| map(&tgt, e)).collect::<Result<_, _>>()?;
            for (ui, u) in upper.iter().enumerate() {
                for (li, l) in lower.iter().enumerate() {
                    if !budget.tick() {
                        return Err(HomotopyError::OutOfBudget);
                    }
                    // The square commutes when the bottom restricts to the
                    // image of the top.
                    if l[..src.len()] != upper_img[ui][..] {
                        continue;
                    }
                    problems += 1;
                    let solved = lifts.iter().zip(&lift_img).any(|(x, fx)| x[..src.len()] == u[..] && fx == l);
                    if !solved {
                        return Ok(RlpVerdict { problems, failure: Some(RlpFailure { n, top: hi, upper: ui, lower: li }) });
                    }
                }
            }
        }
    }
    Ok(RlpVerdict { problems, failure: None })
}

/// Both verdicts for one morphism.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrivialFibrationReport {
    pub depth: usize,
    pub lifting: LiftingVerdict,
    pub rlp: RlpVerdict,
}

impl TrivialFibrationReport {
    pub fn agree(&self) -> bool {
        self.lifting.holds() == self.rlp.holds()
    }
}

pub fn is_trivial_fibration(
    rm: &Realized<'_>,
    rn: &Realized<'_>,
    f: &ModelMorphism,
    depth: usize,
    budget: &Budget,
) -> Result<TrivialFibrationReport, HomotopyError> {
    Ok(TrivialFibrationReport {
        depth,
        lifting: lifting_verdict(rm, rn, f, depth, budget)?,
        rlp: rlp_verdict(rm, rn, f, depth, budget)?,
    })
}
