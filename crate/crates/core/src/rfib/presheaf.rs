//! Presheaves of finite sets over a finite category and maps between them.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use super::RfibError;
use crate::fincat::{ArrowId, FiniteCategory, FunctorData, ObjId};

/// An element of a presheaf: a stage and an index into the fiber there.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Elem {
    pub obj: ObjId,
    pub idx: u32,
}

/// A presheaf of finite sets. Fibers are `0..size`; an arrow `h : a -> b`
/// acts by a function `fiber(b) -> fiber(a)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Presheaf {
    base: Arc<FiniteCategory>,
    sizes: Vec<u32>,
    action: Vec<Vec<u32>>,
}

pub(crate) fn same_base(a: &Arc<FiniteCategory>, b: &Arc<FiniteCategory>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl Presheaf {
    /// Builds a presheaf, checking ranges and functoriality exhaustively.
    pub fn new(base: Arc<FiniteCategory>, sizes: Vec<u32>, action: Vec<Vec<u32>>) -> Result<Self, RfibError> {
        let p = Presheaf { base, sizes, action };
        p.check()?;
        Ok(p)
    }

    /// Builds without checking; callers guarantee functoriality.
    pub(crate) fn from_parts(base: Arc<FiniteCategory>, sizes: Vec<u32>, action: Vec<Vec<u32>>) -> Self {
        let p = Presheaf { base, sizes, action };
        debug_assert_eq!(p.check(), Ok(()));
        p
    }

    /// Exhaustive check of the presheaf laws.
    pub fn check(&self) -> Result<(), RfibError> {
        let c = &*self.base;
        if self.sizes.len() != c.num_objects() || self.action.len() != c.num_arrows() {
            return Err(RfibError::Shape("fiber or action table does not match the base".into()));
        }
        for h in c.arrows() {
            let (a, b) = (c.src(h), c.tgt(h));
            let act = &self.action[h.0];
            if act.len() != self.sizes[b.0] as usize || act.iter().any(|&x| x >= self.sizes[a.0]) {
                return Err(RfibError::NotFunctorial {
                    arrow: c.arrow_name(h).into(),
                    detail: "action has the wrong domain or codomain".into(),
                });
            }
        }
        for o in c.objects() {
            let id = &self.action[c.id(o).0];
            if id.iter().enumerate().any(|(i, &x)| i as u32 != x) {
                return Err(RfibError::NotFunctorial {
                    arrow: c.arrow_name(c.id(o)).into(),
                    detail: "identity does not act trivially".into(),
                });
            }
        }
        for f in c.arrows() {
            for g in c.arrows() {
                if let Some(h) = c.try_compose(f, g) {
                    // (g . f)* = f* . g*
                    for x in 0..self.sizes[c.tgt(g).0] {
                        if self.act(h, x) != self.act(f, self.act(g, x)) {
                            return Err(RfibError::NotFunctorial {
                                arrow: c.arrow_name(h).into(),
                                detail: alloc::format!(
                                    "action of composite of ({}, {}) differs",
                                    c.arrow_name(f),
                                    c.arrow_name(g)
                                ),
                            });
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn base(&self) -> &Arc<FiniteCategory> {
        &self.base
    }

    pub fn size(&self, o: ObjId) -> u32 {
        self.sizes[o.0]
    }

    pub fn sizes(&self) -> &[u32] {
        &self.sizes
    }

    pub fn total_size(&self) -> usize {
        self.sizes.iter().map(|&s| s as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.total_size() == 0
    }

    /// Action of `h : a -> b` on `x` in the fiber over `b`.
    pub fn act(&self, h: ArrowId, x: u32) -> u32 {
        self.action[h.0][x as usize]
    }

    pub fn action_table(&self, h: ArrowId) -> &[u32] {
        &self.action[h.0]
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> + '_ {
        self.base.objects().flat_map(move |o| (0..self.sizes[o.0]).map(move |idx| Elem { obj: o, idx }))
    }

    /// The terminal presheaf: one element everywhere.
    pub fn terminal(base: &Arc<FiniteCategory>) -> Self {
        Self::constant(base, 1)
    }

    pub fn empty(base: &Arc<FiniteCategory>) -> Self {
        Self::constant(base, 0)
    }

    /// Constant presheaf on `n` elements with identity action.
    pub fn constant(base: &Arc<FiniteCategory>, n: u32) -> Self {
        let action = base.arrows().map(|_| (0..n).collect()).collect();
        Self::from_parts(base.clone(), vec![n; base.num_objects()], action)
    }

    /// The representable presheaf `hom(-, c)`: fiber over `d` is `hom(d, c)`
    /// in arrow order.
    pub fn yoneda(base: &Arc<FiniteCategory>, c: ObjId) -> Self {
        let cat = &**base;
        let sizes = cat.objects().map(|d| cat.hom(d, c).len() as u32).collect();
        let action = cat
            .arrows()
            .map(|h| {
                let (a, b) = (cat.src(h), cat.tgt(h));
                cat.hom(b, c)
                    .iter()
                    .map(|&g| {
                        let hg = cat.compose(h, g);
                        cat.hom(a, c).iter().position(|&x| x == hg).unwrap() as u32
                    })
                    .collect()
            })
            .collect();
        Self::from_parts(base.clone(), sizes, action)
    }

    /// Index of the arrow `g : d -> c` as an element of `yoneda(c)` at `d`.
    pub fn yoneda_index(base: &FiniteCategory, g: ArrowId) -> u32 {
        base.hom(base.src(g), base.tgt(g)).iter().position(|&x| x == g).unwrap() as u32
    }

    /// Binary coproduct; elements of `other` follow those of `self`.
    pub fn coproduct(&self, other: &Presheaf) -> Result<Presheaf, RfibError> {
        self.same_base(other)?;
        let sizes: Vec<u32> = self.sizes.iter().zip(&other.sizes).map(|(a, b)| a + b).collect();
        let action = self
            .base
            .arrows()
            .map(|h| {
                let off = self.sizes[self.base.src(h).0];
                let mut v = self.action[h.0].clone();
                v.extend(other.action[h.0].iter().map(|&x| x + off));
                v
            })
            .collect();
        Ok(Presheaf::from_parts(self.base.clone(), sizes, action))
    }

    /// Restriction along a functor `F : D -> C`: `(F^* X)(d) = X(F d)`.
    pub fn restrict(&self, dom: &Arc<FiniteCategory>, f: &FunctorData) -> Presheaf {
        let sizes = dom.objects().map(|d| self.sizes[f.on_object(d).0]).collect();
        let action = dom.arrows().map(|h| self.action[f.on_arrow(h).0].clone()).collect();
        Presheaf::from_parts(dom.clone(), sizes, action)
    }

    /// Reindexes the base along an isomorphic presentation.
    pub fn rebase(&self, base: Arc<FiniteCategory>) -> Result<Presheaf, RfibError> {
        if !same_base(&self.base, &base) {
            return Err(RfibError::BaseMismatch);
        }
        Ok(Presheaf { base, sizes: self.sizes.clone(), action: self.action.clone() })
    }

    pub(crate) fn same_base(&self, other: &Presheaf) -> Result<(), RfibError> {
        if same_base(&self.base, &other.base) {
            Ok(())
        } else {
            Err(RfibError::BaseMismatch)
        }
    }

    /// Sub-presheaf on the elements selected by `keep`, which must be closed
    /// under the action. Returns the presheaf and its inclusion.
    pub fn subpresheaf(&self, keep: &[Vec<bool>]) -> Result<PshMap, RfibError> {
        let c = &*self.base;
        let mut index: Vec<Vec<Option<u32>>> = Vec::new();
        let mut comps = Vec::new();
        for o in c.objects() {
            let mut ix = vec![None; self.sizes[o.0] as usize];
            let mut comp = Vec::new();
            for x in 0..self.sizes[o.0] {
                if keep[o.0][x as usize] {
                    ix[x as usize] = Some(comp.len() as u32);
                    comp.push(x);
                }
            }
            index.push(ix);
            comps.push(comp);
        }
        let mut action = Vec::new();
        for h in c.arrows() {
            let (a, b) = (c.src(h), c.tgt(h));
            let mut v = Vec::new();
            for &x in &comps[b.0] {
                match index[a.0][self.act(h, x) as usize] {
                    Some(y) => v.push(y),
                    None => return Err(RfibError::Shape("selection is not closed under the action".into())),
                }
            }
            action.push(v);
        }
        let sizes = comps.iter().map(|v| v.len() as u32).collect();
        let sub = Presheaf::from_parts(self.base.clone(), sizes, action);
        Ok(PshMap::from_parts(sub, self.clone(), comps))
    }
}

/// A natural transformation between presheaves over the same base.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PshMap {
    dom: Presheaf,
    cod: Presheaf,
    comps: Vec<Vec<u32>>,
}

impl PshMap {
    /// Builds a map, checking ranges and every naturality square.
    pub fn new(dom: Presheaf, cod: Presheaf, comps: Vec<Vec<u32>>) -> Result<Self, RfibError> {
        dom.same_base(&cod)?;
        let m = PshMap { dom, cod, comps };
        m.check()?;
        Ok(m)
    }

    pub(crate) fn from_parts(dom: Presheaf, cod: Presheaf, comps: Vec<Vec<u32>>) -> Self {
        let m = PshMap { dom, cod, comps };
        debug_assert_eq!(m.check(), Ok(()));
        m
    }

    pub fn check(&self) -> Result<(), RfibError> {
        let c = &**self.dom.base();
        if self.comps.len() != c.num_objects() {
            return Err(RfibError::Shape("component table does not match the base".into()));
        }
        for o in c.objects() {
            let comp = &self.comps[o.0];
            if comp.len() != self.dom.size(o) as usize || comp.iter().any(|&y| y >= self.cod.size(o)) {
                return Err(RfibError::Shape(alloc::format!(
                    "component at {} has the wrong domain or codomain",
                    c.object_name(o)
                )));
            }
        }
        for h in c.arrows() {
            let (a, b) = (c.src(h), c.tgt(h));
            for x in 0..self.dom.size(b) {
                if self.at(a, self.dom.act(h, x)) != self.cod.act(h, self.at(b, x)) {
                    return Err(RfibError::NotNatural { arrow: c.arrow_name(h).into(), element: x });
                }
            }
        }
        Ok(())
    }

    pub fn identity(p: &Presheaf) -> Self {
        let comps = p.base.objects().map(|o| (0..p.size(o)).collect()).collect();
        PshMap { dom: p.clone(), cod: p.clone(), comps }
    }

    /// The unique map to the terminal presheaf.
    pub fn to_terminal(p: &Presheaf) -> Self {
        let comps = p.base.objects().map(|o| vec![0; p.size(o) as usize]).collect();
        PshMap { dom: p.clone(), cod: Presheaf::terminal(&p.base), comps }
    }

    /// The map `y(c) -> X` picking out `x` in `X(c)` (Yoneda).
    pub fn from_element(x_psh: &Presheaf, e: Elem) -> Self {
        let base = x_psh.base();
        let yc = Presheaf::yoneda(base, e.obj);
        let comps = base
            .objects()
            .map(|d| base.hom(d, e.obj).iter().map(|&g| x_psh.act(g, e.idx)).collect())
            .collect();
        PshMap { dom: yc, cod: x_psh.clone(), comps }
    }

    /// The map `y(a) -> y(b)` given by postcomposition with `g : a -> b`.
    pub fn yoneda_arrow(base: &Arc<FiniteCategory>, g: ArrowId) -> Self {
        let yb = Presheaf::yoneda(base, base.tgt(g));
        Self::from_element(&yb, Elem { obj: base.src(g), idx: Presheaf::yoneda_index(base, g) })
    }

    pub fn dom(&self) -> &Presheaf {
        &self.dom
    }

    pub fn cod(&self) -> &Presheaf {
        &self.cod
    }

    pub fn base(&self) -> &Arc<FiniteCategory> {
        self.dom.base()
    }

    pub fn at(&self, o: ObjId, x: u32) -> u32 {
        self.comps[o.0][x as usize]
    }

    pub fn component(&self, o: ObjId) -> &[u32] {
        &self.comps[o.0]
    }

    pub fn components(&self) -> &[Vec<u32>] {
        &self.comps
    }

    pub fn apply(&self, e: Elem) -> Elem {
        Elem { obj: e.obj, idx: self.at(e.obj, e.idx) }
    }

    /// `self` followed by `then`.
    pub fn then(&self, then: &PshMap) -> Result<PshMap, RfibError> {
        if self.cod != then.dom {
            return Err(RfibError::Shape("maps are not composable".into()));
        }
        let comps = self
            .comps
            .iter()
            .enumerate()
            .map(|(o, c)| c.iter().map(|&x| then.comps[o][x as usize]).collect())
            .collect();
        Ok(PshMap { dom: self.dom.clone(), cod: then.cod.clone(), comps })
    }

    pub fn is_iso(&self) -> bool {
        self.dom.sizes == self.cod.sizes
            && self.comps.iter().enumerate().all(|(o, c)| {
                let mut seen = vec![false; self.cod.sizes[o] as usize];
                c.iter().all(|&y| !core::mem::replace(&mut seen[y as usize], true))
            })
    }

    pub fn inverse(&self) -> Option<PshMap> {
        if !self.is_iso() {
            return None;
        }
        let comps = self
            .comps
            .iter()
            .map(|c| {
                let mut inv = vec![0; c.len()];
                for (x, &y) in c.iter().enumerate() {
                    inv[y as usize] = x as u32;
                }
                inv
            })
            .collect();
        Some(PshMap { dom: self.cod.clone(), cod: self.dom.clone(), comps })
    }

    pub fn is_mono(&self) -> bool {
        self.comps.iter().enumerate().all(|(o, c)| {
            let mut seen = vec![false; self.cod.sizes[o] as usize];
            c.iter().all(|&y| !core::mem::replace(&mut seen[y as usize], true))
        })
    }

    /// Replaces the codomain by an equal presheaf (e.g. after rebasing).
    pub fn with_cod(&self, cod: Presheaf) -> Result<PshMap, RfibError> {
        PshMap::new(self.dom.clone(), cod, self.comps.clone())
    }

    pub fn with_dom(&self, dom: Presheaf) -> Result<PshMap, RfibError> {
        PshMap::new(dom, self.cod.clone(), self.comps.clone())
    }

    /// Restriction along a functor of bases.
    pub fn restrict(&self, dom: &Arc<FiniteCategory>, f: &FunctorData) -> PshMap {
        PshMap {
            dom: self.dom.restrict(dom, f),
            cod: self.cod.restrict(dom, f),
            comps: dom.objects().map(|d| self.comps[f.on_object(d).0].clone()).collect(),
        }
    }

    /// Coproduct of two maps.
    pub fn coproduct(&self, other: &PshMap) -> Result<PshMap, RfibError> {
        let dom = self.dom.coproduct(&other.dom)?;
        let cod = self.cod.coproduct(&other.cod)?;
        let comps = self
            .comps
            .iter()
            .zip(&other.comps)
            .enumerate()
            .map(|(o, (a, b))| {
                let off = self.cod.sizes[o];
                let mut v = a.clone();
                v.extend(b.iter().map(|&y| y + off));
                v
            })
            .collect();
        Ok(PshMap { dom, cod, comps })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::build;

    #[test]
    fn yoneda_over_delta1() {
        let b = Arc::new(build::delta1());
        let y1 = Presheaf::yoneda(&b, ObjId(1));
        assert_eq!(y1.sizes(), &[1, 1]);
        let y0 = Presheaf::yoneda(&b, ObjId(0));
        assert_eq!(y0.sizes(), &[1, 0]);
        // y(terminal) is terminal
        assert_eq!(y1.sizes(), Presheaf::terminal(&b).sizes());
    }

    #[test]
    fn functoriality_is_checked() {
        let b = Arc::new(build::chain(3));
        let c = &*b;
        // fibers 2 everywhere; "0<1" swaps, everything else identity: the
        // composite 0<2 must then equal the swap, which it does not.
        let action = c
            .arrows()
            .map(|h| if c.arrow_name(h) == "0<1" { vec![1, 0] } else { vec![0, 1] })
            .collect();
        let e = Presheaf::new(b.clone(), vec![2, 2, 2], action).unwrap_err();
        assert!(matches!(e, RfibError::NotFunctorial { .. }));
    }

    #[test]
    fn naturality_is_checked() {
        let b = Arc::new(build::delta1());
        let y0 = Presheaf::yoneda(&b, ObjId(0));
        let two = Presheaf::constant(&b, 2);
        // y0 -> const 2: choose 1 at stage 0; stage 1 is empty, always natural
        assert!(PshMap::new(y0, two.clone(), vec![vec![1], vec![]]).is_ok());
        let t = Presheaf::terminal(&b);
        // 1 -> 2 picking different values at the two stages breaks naturality
        let bad = PshMap::new(t, two, vec![vec![0], vec![1]]).unwrap_err();
        assert!(matches!(bad, RfibError::NotNatural { .. }));
    }
}
