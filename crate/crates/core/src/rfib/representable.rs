//! Representable presheaves and representable maps with their context
//! comprehension data.

use alloc::vec::Vec;

use super::presheaf::{Elem, Presheaf, PshMap};
use super::RfibError;
use crate::fincat::{ArrowId, FiniteCategory, ObjId};

/// Whether the Yoneda map `y(c) -> X` given by `x` is an isomorphism.
pub fn represents(x_psh: &Presheaf, e: Elem) -> bool {
    let base = &**x_psh.base();
    base.objects().all(|d| {
        let hom = base.hom(d, e.obj);
        if hom.len() != x_psh.size(d) as usize {
            return false;
        }
        let mut seen = alloc::vec![false; hom.len()];
        hom.iter().all(|&g| !core::mem::replace(&mut seen[x_psh.act(g, e.idx) as usize], true))
    })
}

/// The least representing pair `(c, x)` of a presheaf, if it is representable.
pub fn is_representable(x_psh: &Presheaf) -> Option<Elem> {
    x_psh.elements().find(|&e| represents(x_psh, e))
}

/// Comprehension of one element `y` of the codomain: `{y}`, the projection
/// `{y} -> c` and the generic element over `{y}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Comprehension {
    pub obj: ObjId,
    pub proj: ArrowId,
    pub generic: u32,
}

/// Comprehension data for every element of the codomain, indexed by stage
/// then element.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ComprehensionWitness {
    pub entries: Vec<Vec<Comprehension>>,
}

/// A representable map bundled with its witness.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RepMap {
    map: PshMap,
    witness: ComprehensionWitness,
}

/// Elements of the pullback of `f : E -> B` along `y : y(c) -> B` at stage
/// `d`: pairs `(g : d -> c, e)` with `f(e) = g^* y`, in (arrow, element)
/// order.
fn fiber_elements(f: &PshMap, c: ObjId, y: u32, d: ObjId) -> Vec<(ArrowId, u32)> {
    let base = &**f.base();
    let mut out = Vec::new();
    for &g in base.hom(d, c) {
        let gy = f.cod().act(g, y);
        for e in 0..f.dom().size(d) {
            if f.at(d, e) == gy {
                out.push((g, e));
            }
        }
    }
    out
}

fn is_universal(f: &PshMap, c: ObjId, y: u32, cand: Comprehension) -> bool {
    let base = &**f.base();
    base.objects().all(|d| {
        let fib = fiber_elements(f, c, y, d);
        let hom = base.hom(d, cand.obj);
        if fib.len() != hom.len() {
            return false;
        }
        let mut seen = alloc::vec![false; fib.len()];
        hom.iter().all(|&k| {
            let pair = (base.compose(k, cand.proj), f.dom().act(k, cand.generic));
            match fib.iter().position(|&p| p == pair) {
                Some(i) => !core::mem::replace(&mut seen[i], true),
                None => false,
            }
        })
    })
}

/// Least universal comprehension of `y` in `B(c)`, if any.
pub fn comprehension_of(f: &PshMap, c: ObjId, y: u32) -> Option<Comprehension> {
    let base = &**f.base();
    for d in base.objects() {
        for (g, e) in fiber_elements(f, c, y, d) {
            let cand = Comprehension { obj: d, proj: g, generic: e };
            if is_universal(f, c, y, cand) {
                return Some(cand);
            }
        }
    }
    None
}

/// Decides representability of a map, returning the witness or the first
/// element (in stage, then element order) without a comprehension.
pub fn is_representable_map(f: &PshMap) -> Result<RepMap, RfibError> {
    let base = &**f.base();
    let mut entries = Vec::new();
    for c in base.objects() {
        let mut row = Vec::new();
        for y in 0..f.cod().size(c) {
            match comprehension_of(f, c, y) {
                Some(w) => row.push(w),
                None => {
                    return Err(RfibError::NotRepresentable { object: base.object_name(c).into(), element: y })
                }
            }
        }
        entries.push(row);
    }
    Ok(RepMap { map: f.clone(), witness: ComprehensionWitness { entries } })
}

impl RepMap {
    /// Checks a supplied witness against the map.
    pub fn with_witness(map: PshMap, witness: ComprehensionWitness) -> Result<RepMap, RfibError> {
        let base = &**map.base();
        if witness.entries.len() != base.num_objects() {
            return Err(RfibError::Shape("witness does not cover every stage".into()));
        }
        for c in base.objects() {
            let row = &witness.entries[c.0];
            if row.len() != map.cod().size(c) as usize {
                return Err(RfibError::Shape("witness does not cover every element".into()));
            }
            for (y, w) in row.iter().enumerate() {
                let y = y as u32;
                let ok = w.obj.0 < base.num_objects()
                    && w.proj.0 < base.num_arrows()
                    && base.src(w.proj) == w.obj
                    && base.tgt(w.proj) == c
                    && w.generic < map.dom().size(w.obj)
                    && map.at(w.obj, w.generic) == map.cod().act(w.proj, y)
                    && is_universal(&map, c, y, *w);
                if !ok {
                    return Err(RfibError::BadWitness { object: base.object_name(c).into(), element: y });
                }
            }
        }
        Ok(RepMap { map, witness })
    }

    pub fn map(&self) -> &PshMap {
        &self.map
    }

    pub fn witness(&self) -> &ComprehensionWitness {
        &self.witness
    }

    pub fn base(&self) -> &alloc::sync::Arc<FiniteCategory> {
        self.map.base()
    }

    /// Total space `E`.
    pub fn dom(&self) -> &Presheaf {
        self.map.dom()
    }

    /// Base `B`.
    pub fn cod(&self) -> &Presheaf {
        self.map.cod()
    }

    pub fn comprehension(&self, c: ObjId, y: u32) -> Comprehension {
        self.witness.entries[c.0][y as usize]
    }

    /// The unique `k : d -> {y}` with `k ; proj = g` and `k^* generic = e`.
    pub fn mediate(&self, c: ObjId, y: u32, g: ArrowId, e: u32) -> Option<ArrowId> {
        let base = &**self.base();
        let w = self.comprehension(c, y);
        let d = base.src(g);
        base.hom(d, w.obj)
            .iter()
            .copied()
            .find(|&k| base.compose(k, w.proj) == g && self.dom().act(k, w.generic) == e)
    }

    /// For `h : d -> c` and `y` in `B(c)`, the canonical arrow
    /// `{h^* y} -> {y}` over `h`.
    pub fn reindex_arrow(&self, c: ObjId, y: u32, h: ArrowId) -> ArrowId {
        let base = &**self.base();
        let d = base.src(h);
        let hy = self.cod().act(h, y);
        let w2 = self.comprehension(d, hy);
        self.mediate(c, y, base.compose(w2.proj, h), w2.generic)
            .expect("comprehension of a reindexed element mediates")
    }

    /// The identity map on `X` as a representable map.
    pub fn identity(x: &Presheaf) -> RepMap {
        let base = &**x.base();
        let entries = base
            .objects()
            .map(|c| (0..x.size(c)).map(|y| Comprehension { obj: c, proj: base.id(c), generic: y }).collect())
            .collect();
        RepMap { map: PshMap::identity(x), witness: ComprehensionWitness { entries } }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::build;
    use alloc::sync::Arc;

    #[test]
    fn representables_over_delta1() {
        let b = Arc::new(build::delta1());
        let y1 = Presheaf::yoneda(&b, ObjId(1));
        assert_eq!(is_representable(&y1), Some(Elem { obj: ObjId(1), idx: 0 }));
        assert_eq!(is_representable(&Presheaf::constant(&b, 2)), None);
        assert_eq!(is_representable(&Presheaf::empty(&b)), None);
    }

    #[test]
    fn yoneda_of_u_is_representable() {
        let b = Arc::new(build::delta1());
        let u = b.arrow_by_name("u").unwrap();
        let q = PshMap::yoneda_arrow(&b, u);
        let r = is_representable_map(&q).unwrap();
        // elements of y(1): id_1 at stage 1, u at stage 0
        let at1 = r.comprehension(ObjId(1), 0);
        assert_eq!((at1.obj, at1.proj), (ObjId(0), u));
        let at0 = r.comprehension(ObjId(0), 0);
        assert_eq!((at0.obj, at0.proj), (ObjId(0), b.id(ObjId(0))));
    }

    #[test]
    fn constant_two_over_terminal_is_not_representable() {
        let b = Arc::new(build::delta1());
        let two = Presheaf::constant(&b, 2);
        let e = is_representable_map(&PshMap::to_terminal(&two)).unwrap_err();
        assert!(matches!(e, RfibError::NotRepresentable { .. }));
    }

    #[test]
    fn identity_witness_is_valid() {
        let b = Arc::new(build::chain(3));
        let x = Presheaf::yoneda(&b, ObjId(1)).coproduct(&Presheaf::constant(&b, 1)).unwrap();
        let id = RepMap::identity(&x);
        RepMap::with_witness(id.map().clone(), id.witness().clone()).unwrap();
        assert_eq!(is_representable_map(&PshMap::identity(&x)).unwrap(), id);
    }
}
