//! Unit, Sigma, Id, Id+ and Pi type structures on a representable map
//! `typeof : El -> Ty`, their closure-property criteria, and left exact
//! universes.
//!
//! A structure is a square whose right edge is `typeof` and whose left
//! edge is fixed by the kind:
//!
//! | kind  | left edge                       | bottom            |
//! |-------|---------------------------------|-------------------|
//! | Unit  | `1 = 1`                         | `1 -> Ty`         |
//! | Sigma | `typeof (x) typeof`             | `cod(t (x) t) -> Ty` |
//! | Id    | diagonal `El -> El x_Ty El`     | `El x_Ty El -> Ty` |
//! | Pi    | `P_typeof(typeof)`              | `P_typeof(Ty) -> Ty` |
//!
//! Unit/Sigma/Id/Pi squares must be pullbacks; an Id+ square only commutes
//! and carries a section of the lifting-problem map.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::budget::Budget;
use crate::fincat::{ArrowId, FiniteCategory, ObjId};
use crate::rfib::classifier::{rep_map_classifier, Classifier};
use crate::rfib::limits::{product, pullback, Pullback};
use crate::rfib::poly::{polynomial_apply, polynomial_apply_map, polynomial_compose};
use crate::rfib::presheaf::{Presheaf, PshMap};
use crate::rfib::pushforward::pushforward;
use crate::rfib::representable::{is_representable_map, RepMap};
use crate::rfib::search::HomSearch;
use crate::rfib::univalence::{is_univalent, Univalence};
use crate::rfib::RfibError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum StructureKind {
    Unit,
    Sigma,
    Id,
    IdPlus,
    Pi,
}

impl StructureKind {
    pub const ALL: [StructureKind; 5] =
        [StructureKind::Unit, StructureKind::Sigma, StructureKind::Id, StructureKind::IdPlus, StructureKind::Pi];

    /// The kinds whose existence is characterized by a closure property.
    pub const PULLBACK_KINDS: [StructureKind; 4] =
        [StructureKind::Unit, StructureKind::Sigma, StructureKind::Id, StructureKind::Pi];

    pub fn name(self) -> &'static str {
        match self {
            StructureKind::Unit => "Unit",
            StructureKind::Sigma => "Sigma",
            StructureKind::Id => "Id",
            StructureKind::IdPlus => "IdPlus",
            StructureKind::Pi => "Pi",
        }
    }
}

impl fmt::Display for StructureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A candidate type structure: the bottom map into `Ty`, the top map into
/// `El` and, for Id+, the elimination section.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypeStructure {
    pub kind: StructureKind,
    pub bottom: PshMap,
    pub top: PshMap,
    pub section: Option<PshMap>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum StructureError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("the map is not univalent: {0}")]
    NotUnivalent(String),
    #[error("search budget exhausted")]
    OutOfBudget,
    #[error(transparent)]
    Rfib(#[from] RfibError),
}

impl From<crate::budget::OutOfBudget> for StructureError {
    fn from(_: crate::budget::OutOfBudget) -> Self {
        StructureError::OutOfBudget
    }
}

/// Outcome of [`check_structure`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureCheck {
    pub commutes: bool,
    /// Pullback verdict (not required for Id+).
    pub pullback: bool,
    /// Section equation for Id+.
    pub section: Option<bool>,
}

impl StructureCheck {
    pub fn holds(&self, kind: StructureKind) -> bool {
        match kind {
            StructureKind::IdPlus => self.commutes && self.section == Some(true),
            _ => self.commutes && self.pullback,
        }
    }
}

/// The fixed left edge of a structure square of the given kind.
pub fn left_edge(typeof_: &RepMap, kind: StructureKind) -> Result<PshMap, StructureError> {
    let base = typeof_.base();
    Ok(match kind {
        StructureKind::Unit => PshMap::identity(&Presheaf::terminal(base)),
        StructureKind::Sigma => polynomial_compose(typeof_, typeof_)?.map().clone(),
        StructureKind::Id | StructureKind::IdPlus => diagonal(typeof_)?.1,
        StructureKind::Pi => {
            let pe = polynomial_apply(typeof_, typeof_.dom())?;
            let pt = polynomial_apply(typeof_, typeof_.cod())?;
            polynomial_apply_map(typeof_, &pe, &pt, typeof_.map())?
        }
    })
}

/// `El x_Ty El` and the diagonal `El -> El x_Ty El`.
pub fn diagonal(typeof_: &RepMap) -> Result<(Pullback, PshMap), StructureError> {
    let pb = pullback(typeof_.map(), typeof_.map())?;
    let id = PshMap::identity(typeof_.dom());
    let d = pb.mediate(&id, &id)?;
    Ok((pb, d))
}

fn is_pullback_square(left: &PshMap, top: &PshMap, bottom: &PshMap, right: &PshMap) -> Result<(bool, bool), StructureError> {
    let commutes = left.then(bottom)? == top.then(right)?;
    if !commutes {
        return Ok((false, false));
    }
    let pb = pullback(bottom, right)?;
    let m = pb.mediate(left, top)?;
    Ok((true, m.is_iso()))
}

/// Verifies a candidate structure exactly.
pub fn check_structure(typeof_: &RepMap, s: &TypeStructure) -> Result<StructureCheck, StructureError> {
    let left = left_edge(typeof_, s.kind)?;
    if s.bottom.dom() != left.cod() || s.bottom.cod() != typeof_.cod() {
        return Err(StructureError::Shape(alloc::format!("{} bottom map has the wrong domain or codomain", s.kind)));
    }
    if s.top.dom() != left.dom() || s.top.cod() != typeof_.dom() {
        return Err(StructureError::Shape(alloc::format!("{} top map has the wrong domain or codomain", s.kind)));
    }
    let (commutes, pb) = is_pullback_square(&left, &s.top, &s.bottom, typeof_.map())?;
    let section = if s.kind == StructureKind::IdPlus {
        match &s.section {
            None => Some(false),
            Some(sec) if !commutes => {
                let _ = sec;
                Some(false)
            }
            Some(sec) => {
                let lp = LiftingProblems::new(typeof_, &s.bottom, &s.top)?;
                if sec.dom() != lp.comparison.cod() || sec.cod() != lp.comparison.dom() {
                    return Err(StructureError::Shape("Id+ section has the wrong domain or codomain".into()));
                }
                Some(sec.then(&lp.comparison)? == PshMap::identity(lp.comparison.cod()))
            }
        }
    } else {
        None
    };
    Ok(StructureCheck { commutes, pullback: pb, section })
}

/// Deterministic exhaustive search for a structure of the given kind; the
/// first verified structure in lexicographic order of the bottom map.
pub fn find_structure(
    typeof_: &RepMap,
    kind: StructureKind,
    budget: &Budget,
) -> Result<Option<TypeStructure>, StructureError> {
    if kind == StructureKind::IdPlus {
        return find_id_plus(typeof_, budget);
    }
    let left = left_edge(typeof_, kind)?;
    // A pullback of a representable map is representable.
    let Ok(left_rep) = is_representable_map(&left) else { return Ok(None) };
    let cat = &**typeof_.base();
    let d = left.cod();
    // Per element, the types whose comprehension matches the left edge's.
    let allowed: Vec<Vec<Vec<u32>>> = cat
        .objects()
        .map(|c| {
            (0..d.size(c))
                .map(|x| {
                    let w = left_rep.comprehension(c, x);
                    (0..typeof_.cod().size(c))
                        .filter(|&a| cat.iso_over(w.proj, typeof_.comprehension(c, a).proj).is_some())
                        .collect()
                })
                .collect()
        })
        .collect();
    let mut found = None;
    let mut err = None;
    HomSearch::new(d, typeof_.cod()).allowed(&allowed).lexicographic().for_each(budget, |bottom| {
        match square_top(&left, bottom, typeof_, budget) {
            Ok(Some(top)) => {
                found = Some(TypeStructure { kind, bottom: bottom.clone(), top, section: None });
                core::ops::ControlFlow::Break(())
            }
            Ok(None) => core::ops::ControlFlow::Continue(()),
            Err(e) => {
                err = Some(e);
                core::ops::ControlFlow::Break(())
            }
        }
    })?;
    if let Some(e) = err {
        return Err(e);
    }
    Ok(found)
}

/// The top map making `(left, bottom)` a pullback square, if any.
fn square_top(left: &PshMap, bottom: &PshMap, typeof_: &RepMap, budget: &Budget) -> Result<Option<PshMap>, StructureError> {
    let pb = pullback(bottom, typeof_.map())?;
    let iso = HomSearch::new(left.dom(), pb.apex())
        .kind(crate::rfib::search::MapKind::Iso)
        .over(left, &pb.p1)
        .first(budget)?;
    Ok(match iso {
        Some(i) => Some(i.then(&pb.p2)?),
        None => None,
    })
}

fn find_id_plus(typeof_: &RepMap, budget: &Budget) -> Result<Option<TypeStructure>, StructureError> {
    let (pb, diag) = diagonal(typeof_)?;
    let ee = pb.apex().clone();
    let mut found = None;
    let mut err = None;
    HomSearch::new(&ee, typeof_.cod()).lexicographic().for_each(budget, |bottom| {
        let r = (|| -> Result<Option<TypeStructure>, StructureError> {
            let want = diag.then(bottom)?;
            for top in HomSearch::new(typeof_.dom(), typeof_.dom()).over(&want, typeof_.map()).collect(budget)? {
                let lp = LiftingProblems::new(typeof_, bottom, &top)?;
                let id = PshMap::identity(lp.comparison.cod());
                if let Some(sec) = HomSearch::new(lp.comparison.cod(), lp.comparison.dom())
                    .over(&id, &lp.comparison)
                    .lexicographic()
                    .first(budget)?
                {
                    return Ok(Some(TypeStructure {
                        kind: StructureKind::IdPlus,
                        bottom: bottom.clone(),
                        top,
                        section: Some(sec),
                    }));
                }
            }
            Ok(None)
        })();
        match r {
            Ok(Some(s)) => {
                found = Some(s);
                core::ops::ControlFlow::Break(())
            }
            Ok(None) => core::ops::ControlFlow::Continue(()),
            Err(e) => {
                err = Some(e);
                core::ops::ControlFlow::Break(())
            }
        }
    })?;
    if let Some(e) = err {
        return Err(e);
    }
    Ok(found)
}

/// The exponential `X =>_Ty Y` in the slice over `Ty`, for `X -> Ty`
/// representable: the pushforward along `X -> Ty` of `X x_Ty Y -> X`.
/// Element `i` at stage `c` is the pair `(A, y)` with `A` in `Ty(c)` and
/// `y` in `Y({A}_X)`.
#[derive(Clone, Debug)]
pub struct SliceExp {
    pub to_ty: PshMap,
    pub pairs: Vec<Vec<(u32, u32)>>,
    index: Vec<BTreeMap<(u32, u32), u32>>,
}

impl SliceExp {
    pub fn new(px: &RepMap, py: &PshMap) -> Result<SliceExp, StructureError> {
        let pb = pullback(px.map(), py)?;
        let pf = pushforward(px, &pb.p1)?;
        let cat = &**px.base();
        let pairs: Vec<Vec<(u32, u32)>> = cat
            .objects()
            .map(|c| {
                pf.pairs[c.0]
                    .iter()
                    .map(|&(a, s)| (a, pb.limit.tuple(px.comprehension(c, a).obj, s)[1]))
                    .collect()
            })
            .collect();
        let index = pairs.iter().map(|r| r.iter().enumerate().map(|(i, &p)| (p, i as u32)).collect()).collect();
        Ok(SliceExp { to_ty: pf.map, pairs, index })
    }

    pub fn presheaf(&self) -> &Presheaf {
        self.to_ty.dom()
    }

    fn lookup(&self, c: ObjId, p: (u32, u32)) -> Result<u32, StructureError> {
        self.index[c.0].get(&p).copied().ok_or_else(|| StructureError::Shape("element outside the exponential".into()))
    }

    /// Precomposition with `u : X' -> X` over `Ty`: `(X => Y) -> (X' => Y)`.
    pub fn precompose(
        &self,
        px: &RepMap,
        target: &SliceExp,
        px2: &RepMap,
        u: &PshMap,
        y: &Presheaf,
    ) -> Result<PshMap, StructureError> {
        let cat = &**px.base();
        let mut comps = Vec::new();
        for c in cat.objects() {
            let mut comp = Vec::new();
            for &(a, yv) in &self.pairs[c.0] {
                let w2 = px2.comprehension(c, a);
                let k = px
                    .mediate(c, a, w2.proj, u.at(w2.obj, w2.generic))
                    .ok_or_else(|| StructureError::Shape("precomposition does not mediate".into()))?;
                comp.push(target.lookup(c, (a, y.act(k, yv)))?);
            }
            comps.push(comp);
        }
        Ok(PshMap::new(self.presheaf().clone(), target.presheaf().clone(), comps)?)
    }

    /// Postcomposition with `v : Y -> Y'` over `Ty`: `(X => Y) -> (X => Y')`.
    pub fn postcompose(&self, px: &RepMap, target: &SliceExp, v: &PshMap) -> Result<PshMap, StructureError> {
        let cat = &**px.base();
        let mut comps = Vec::new();
        for c in cat.objects() {
            let mut comp = Vec::new();
            for &(a, yv) in &self.pairs[c.0] {
                let w = px.comprehension(c, a);
                comp.push(target.lookup(c, (a, v.at(w.obj, yv)))?);
            }
            comps.push(comp);
        }
        Ok(PshMap::new(self.presheaf().clone(), target.presheaf().clone(), comps)?)
    }
}

/// The lifting-problem comparison map `(refl^*, typeof_*)` of an Id square:
///
/// `(Id^*El => Ty^*El) -> (El => Ty^*El) x_(El => Ty^*Ty) (Id^*El => Ty^*Ty)`.
pub struct LiftingProblems {
    pub comparison: PshMap,
}

impl LiftingProblems {
    pub fn new(typeof_: &RepMap, id: &PshMap, refl: &PshMap) -> Result<LiftingProblems, StructureError> {
        let (ee, diag) = diagonal(typeof_)?;
        let ty = typeof_.cod();
        // Id^*El -> El x_Ty El -> Ty
        let id_el = pullback(typeof_.map(), id)?;
        let id_el_ty = id_el.p2.then(&ee.p1)?.then(typeof_.map())?;
        let id_el_rep = is_representable_map(&id_el_ty)?;
        // refl' : El -> Id^*El over Ty
        let refl2 = id_el.mediate(refl, &diag)?;
        // Ty^*El and Ty^*Ty
        let te = product(ty, typeof_.dom())?;
        let tt = product(ty, ty)?;
        let t_by_typeof = tt.mediate(&te.p1, &te.p2.then(typeof_.map())?)?;
        let a1 = SliceExp::new(&id_el_rep, &te.p1)?;
        let a2 = SliceExp::new(typeof_, &te.p1)?;
        let a3 = SliceExp::new(typeof_, &tt.p1)?;
        let a4 = SliceExp::new(&id_el_rep, &tt.p1)?;
        let refl_star = a1.precompose(&id_el_rep, &a2, typeof_, &refl2, te.apex())?;
        let refl_star_tt = a4.precompose(&id_el_rep, &a3, typeof_, &refl2, tt.apex())?;
        let typeof_star = a1.postcompose(&id_el_rep, &a4, &t_by_typeof)?;
        let typeof_star_el = a2.postcompose(typeof_, &a3, &t_by_typeof)?;
        let cod = pullback(&typeof_star_el, &refl_star_tt)?;
        let comparison = cod.mediate(&refl_star, &typeof_star)?;
        Ok(LiftingProblems { comparison })
    }
}

/// Classes (in the classifier) of the comprehensions of elements of `Ty`:
/// `S(c)`, the arrows into `c` that are pullbacks of `typeof`.
pub struct ClassifiedArrows {
    pub classifier: Classifier,
    pub classes: Vec<Vec<bool>>,
}

impl ClassifiedArrows {
    pub fn new(typeof_: &RepMap) -> Result<ClassifiedArrows, StructureError> {
        let base = typeof_.base();
        let classifier = rep_map_classifier(base)?;
        let cat = &**base;
        let mut classes: Vec<Vec<bool>> = cat.objects().map(|c| alloc::vec![false; classifier.omega().size(c) as usize]).collect();
        for c in cat.objects() {
            for a in 0..typeof_.cod().size(c) {
                let w = typeof_.comprehension(c, a);
                let i = classifier.class_of(w.proj).ok_or_else(|| {
                    StructureError::Rfib(RfibError::Unclassifiable {
                        object: cat.object_name(c).into(),
                        element: a,
                        arrow: cat.arrow_name(w.proj).into(),
                    })
                })?;
                classes[c.0][i as usize] = true;
            }
        }
        Ok(ClassifiedArrows { classifier, classes })
    }

    fn base(&self) -> &Arc<FiniteCategory> {
        self.classifier.base()
    }

    /// Whether `e` is a pullback of `typeof`.
    pub fn contains(&self, e: ArrowId) -> bool {
        let c = self.base().tgt(e);
        self.classifier.class_of(e).map(|i| self.classes[c.0][i as usize]).unwrap_or(false)
    }

    /// Representatives of the classes at `c`.
    pub fn arrows_into(&self, c: ObjId) -> Vec<ArrowId> {
        self.classifier.omega_elems[c.0]
            .iter()
            .enumerate()
            .filter(|(i, _)| self.classes[c.0][*i])
            .map(|(_, &e)| e)
            .collect()
    }

    /// Every identity arrow is a pullback of `typeof`.
    pub fn unit_closure(&self) -> bool {
        let cat = &**self.base();
        cat.objects().all(|c| self.contains(cat.id(c)))
    }

    /// Pullbacks of `typeof` are closed under composition.
    pub fn sigma_closure(&self) -> bool {
        let cat = &**self.base();
        cat.objects().all(|c| {
            self.arrows_into(c).into_iter().all(|e| {
                self.arrows_into(cat.src(e)).into_iter().all(|e2| self.contains(cat.compose(e2, e)))
            })
        })
    }

    /// Pullbacks of `typeof` are closed under equalizers: the diagonal of
    /// each classified arrow is classified.
    pub fn id_closure(&self) -> bool {
        let cat = &**self.base();
        cat.objects().all(|c| {
            self.arrows_into(c).into_iter().all(|e| {
                let a = cat.src(e);
                let Some(pb) = cat.pullback(e, e) else { return false };
                let diag = cat
                    .hom(a, pb.apex)
                    .iter()
                    .copied()
                    .find(|&d| cat.compose(d, pb.base_change) == cat.id(a) && cat.compose(d, pb.lift) == cat.id(a));
                match diag {
                    Some(d) => self.contains(d),
                    None => false,
                }
            })
        })
    }

    /// Pullbacks of `typeof` are closed under pushforward along pullbacks
    /// of `typeof`: for classified `e : a -> c` and `e2 : b -> a`, the
    /// pushforward of `y(e2)` along `y(e)` is representable with a
    /// classified comprehension at the generic element.
    pub fn pi_closure(&self) -> Result<bool, StructureError> {
        let base = self.base().clone();
        let cat = &*base;
        for c in cat.objects() {
            for e in self.arrows_into(c) {
                let ye = is_representable_map(&PshMap::yoneda_arrow(&base, e))?;
                for e2 in self.arrows_into(cat.src(e)) {
                    let ye2 = PshMap::yoneda_arrow(&base, e2);
                    let pf = pushforward(&ye, &ye2)?;
                    let Ok(r) = is_representable_map(&pf.map) else { return Ok(false) };
                    // generic element of y(c) is id_c
                    let top = Presheaf::yoneda_index(cat, cat.id(c));
                    if !self.contains(r.comprehension(c, top).proj) {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }

    pub fn closure(&self, kind: StructureKind) -> Result<bool, StructureError> {
        Ok(match kind {
            StructureKind::Unit => self.unit_closure(),
            StructureKind::Sigma => self.sigma_closure(),
            StructureKind::Id | StructureKind::IdPlus => self.id_closure(),
            StructureKind::Pi => self.pi_closure()?,
        })
    }
}

/// Per-kind closure verdict and search result.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureEntry {
    pub kind: StructureKind,
    pub closure: bool,
    pub found: Option<TypeStructure>,
}

impl StructureEntry {
    /// The closure criterion and the search agree.
    pub fn agrees(&self) -> bool {
        self.closure == self.found.is_some()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureReport {
    pub entries: Vec<StructureEntry>,
}

fn require_univalent(typeof_: &RepMap) -> Result<(), StructureError> {
    match is_univalent(typeof_) {
        Univalence::Univalent { .. } => Ok(()),
        Univalence::Collision { stage, first, second, .. } => Err(StructureError::NotUnivalent(alloc::format!(
            "elements {first} and {second} at stage {} classify isomorphic maps",
            typeof_.base().object_name(stage)
        ))),
    }
}

/// Decides each closure property and searches for the corresponding
/// structure, for a univalent `typeof`.
pub fn structure_criteria(typeof_: &RepMap, budget: &Budget) -> Result<StructureReport, StructureError> {
    require_univalent(typeof_)?;
    let classified = ClassifiedArrows::new(typeof_)?;
    let mut entries = Vec::new();
    for kind in StructureKind::PULLBACK_KINDS {
        let closure = classified.closure(kind)?;
        let found = find_structure(typeof_, kind, budget)?;
        entries.push(StructureEntry { kind, closure, found });
    }
    Ok(StructureReport { entries })
}

/// For univalent `typeof`, two verified structures of the same kind have
/// equal classifying (bottom) maps.
pub fn uniqueness_check(typeof_: &RepMap, s1: &TypeStructure, s2: &TypeStructure) -> Result<bool, StructureError> {
    require_univalent(typeof_)?;
    for s in [s1, s2] {
        if !check_structure(typeof_, s)?.holds(s.kind) {
            return Err(StructureError::Shape(alloc::format!("{} structure does not verify", s.kind)));
        }
    }
    Ok(s1.kind == s2.kind && s1.bottom == s2.bottom)
}

/// Certificate for [`check_left_exact_universe`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LexUniverse {
    pub univalence: Univalence,
    pub unit: Option<TypeStructure>,
    pub sigma: Option<TypeStructure>,
    pub id: Option<TypeStructure>,
}

impl LexUniverse {
    pub fn holds(&self) -> bool {
        self.univalence.holds() && self.unit.is_some() && self.sigma.is_some() && self.id.is_some()
    }
}

pub fn check_left_exact_universe(typeof_: &RepMap, budget: &Budget) -> Result<LexUniverse, StructureError> {
    let univalence = is_univalent(typeof_);
    if !univalence.holds() {
        return Ok(LexUniverse { univalence, unit: None, sigma: None, id: None });
    }
    Ok(LexUniverse {
        univalence,
        unit: find_structure(typeof_, StructureKind::Unit, budget)?,
        sigma: find_structure(typeof_, StructureKind::Sigma, budget)?,
        id: find_structure(typeof_, StructureKind::Id, budget)?,
    })
}

/// Extends an Id structure to an Id+ structure by inverting the
/// lifting-problem comparison, which is invertible for pullback squares.
pub fn extend_id_to_id_plus(typeof_: &RepMap, s: &TypeStructure) -> Result<Option<TypeStructure>, StructureError> {
    let lp = LiftingProblems::new(typeof_, &s.bottom, &s.top)?;
    Ok(lp.comparison.inverse().map(|inv| TypeStructure {
        kind: StructureKind::IdPlus,
        bottom: s.bottom.clone(),
        top: s.top.clone(),
        section: Some(inv),
    }))
}

/// Sub-universes of the classifier: `Omega~|_U -> U` for a sub-presheaf
/// `U` of `Omega`. Every such map is univalent.
pub fn sub_universe(cl: &Classifier, keep: &[Vec<bool>]) -> Result<RepMap, StructureError> {
    let inc = cl.omega().subpresheaf(keep)?;
    let pb = pullback(cl.generic.map(), &inc)?;
    Ok(is_representable_map(&pb.p2)?)
}

/// All sub-presheaves of `Omega` (as element selections), in binary order.
pub fn sub_presheaves(p: &Presheaf) -> Vec<Vec<Vec<bool>>> {
    let cat = &**p.base();
    let elems: Vec<(ObjId, u32)> = p.elements().map(|e| (e.obj, e.idx)).collect();
    let n = elems.len();
    assert!(n < 24, "too many elements to enumerate sub-presheaves");
    let mut out = Vec::new();
    for mask in 0u32..(1 << n) {
        let mut keep: Vec<Vec<bool>> = cat.objects().map(|c| alloc::vec![false; p.size(c) as usize]).collect();
        for (i, &(o, x)) in elems.iter().enumerate() {
            keep[o.0][x as usize] = mask & (1 << i) != 0;
        }
        let closed = cat.arrows().all(|h| {
            let (a, b) = (cat.src(h), cat.tgt(h));
            (0..p.size(b)).all(|x| !keep[b.0][x as usize] || keep[a.0][p.act(h, x) as usize])
        });
        if closed {
            out.push(keep);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::build;
    use crate::rfib::presheaf::Elem;

    fn generic(base: FiniteCategory) -> RepMap {
        rep_map_classifier(&Arc::new(base)).unwrap().generic
    }

    #[test]
    fn unit_on_generic_over_delta1() {
        let g = generic(build::delta1());
        let s = find_structure(&g, StructureKind::Unit, &Budget::unlimited()).unwrap().unwrap();
        // picks id_1 (element 0 of Omega(1)) and its section
        assert_eq!(s.bottom.component(ObjId(1)), &[0]);
        assert!(check_structure(&g, &s).unwrap().holds(StructureKind::Unit));
        // terminal presheaf over the walking arrow is y(1)
        assert_eq!(Presheaf::terminal(g.base()).sizes(), Presheaf::yoneda(g.base(), ObjId(1)).sizes());
    }

    #[test]
    fn non_section_top_fails_commutation() {
        let g = generic(build::delta1());
        let s = find_structure(&g, StructureKind::Unit, &Budget::unlimited()).unwrap().unwrap();
        // bottom picking u (element 1) with the old top no longer commutes
        let t = Presheaf::terminal(g.base());
        let bad_bottom = PshMap::from_element(g.cod(), Elem { obj: ObjId(1), idx: 1 });
        let bad_bottom = bad_bottom.with_dom(t).unwrap();
        let bad = TypeStructure { bottom: bad_bottom, ..s };
        let r = check_structure(&g, &bad).unwrap();
        assert!(!r.commutes);
    }

    #[test]
    fn shape_mismatch_is_distinct() {
        let g = generic(build::delta1());
        let s = find_structure(&g, StructureKind::Unit, &Budget::unlimited()).unwrap().unwrap();
        let bad = TypeStructure { kind: StructureKind::Sigma, ..s };
        assert!(matches!(check_structure(&g, &bad), Err(StructureError::Shape(_))));
    }

    #[test]
    fn id_on_an_isomorphism() {
        let b = Arc::new(build::terminal());
        let x = Presheaf::constant(&b, 2);
        let t = RepMap::identity(&x);
        let (pb, _) = diagonal(&t).unwrap();
        let id = PshMap::new(pb.apex().clone(), x.clone(), alloc::vec![alloc::vec![0, 0]]).unwrap();
        let refl = PshMap::new(x.clone(), x.clone(), alloc::vec![alloc::vec![0, 0]]).unwrap();
        let s = TypeStructure { kind: StructureKind::Id, bottom: id, top: refl, section: None };
        assert!(check_structure(&t, &s).unwrap().holds(StructureKind::Id));
    }

    #[test]
    fn terminal_base_is_left_exact_universe() {
        let g = generic(build::terminal());
        assert!(check_left_exact_universe(&g, &Budget::unlimited()).unwrap().holds());
    }

    #[test]
    fn criteria_agree_with_search_over_delta1() {
        let g = generic(build::delta1());
        let rep = structure_criteria(&g, &Budget::unlimited()).unwrap();
        for e in &rep.entries {
            assert!(e.agrees(), "{:?}", e.kind);
        }
        assert!(rep.entries[0].closure && rep.entries[1].closure);
    }

    #[test]
    fn doubled_classifier_is_rejected() {
        let g = generic(build::delta1());
        let d = is_representable_map(&g.map().coproduct(g.map()).unwrap()).unwrap();
        assert!(matches!(structure_criteria(&d, &Budget::unlimited()), Err(StructureError::NotUnivalent(_))));
        assert!(!check_left_exact_universe(&d, &Budget::unlimited()).unwrap().holds());
    }

    #[test]
    fn id_extends_to_id_plus() {
        let g = generic(build::chain(2));
        let s = find_structure(&g, StructureKind::Id, &Budget::unlimited()).unwrap().unwrap();
        let plus = extend_id_to_id_plus(&g, &s).unwrap().expect("comparison is invertible");
        assert!(check_structure(&g, &plus).unwrap().holds(StructureKind::IdPlus));
    }

    #[test]
    fn unit_structures_are_unique() {
        let g = generic(build::delta1());
        let s = find_structure(&g, StructureKind::Unit, &Budget::unlimited()).unwrap().unwrap();
        assert!(uniqueness_check(&g, &s, &s).unwrap());
    }
}
