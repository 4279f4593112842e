//! Univalence of representable maps and the presheaf of equivalences
//! between pulled-back fibers.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::limits::{product, Pullback};
use super::presheaf::{Presheaf, PshMap};
use super::representable::RepMap;
use super::RfibError;
use crate::fincat::{ArrowId, ObjId};

/// Certificate of [`is_univalent`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Univalence {
    /// Per stage `z`, the comprehension object of each element of `B(z)`;
    /// distinct elements have non-isomorphic comprehensions over `z`.
    Univalent { table: Vec<Vec<ObjId>> },
    /// Two distinct elements of `B(z)` whose comprehensions are isomorphic
    /// over `z` via `iso`.
    Collision { stage: ObjId, first: u32, second: u32, iso: ArrowId },
}

impl Univalence {
    pub fn holds(&self) -> bool {
        matches!(self, Univalence::Univalent { .. })
    }
}

/// Whether classification by `f` is injective at every stage: distinct
/// elements of `B(z)` pull `f` back to non-isomorphic maps over `y(z)`.
pub fn is_univalent(f: &RepMap) -> Univalence {
    let cat = &**f.base();
    let mut table = Vec::new();
    for z in cat.objects() {
        let n = f.cod().size(z);
        for b1 in 0..n {
            for b2 in b1 + 1..n {
                let (w1, w2) = (f.comprehension(z, b1), f.comprehension(z, b2));
                if let Some(iso) = cat.iso_over(w1.proj, w2.proj) {
                    return Univalence::Collision { stage: z, first: b1, second: b2, iso };
                }
            }
        }
        table.push((0..n).map(|b| f.comprehension(z, b).obj).collect());
    }
    Univalence::Univalent { table }
}

/// The presheaf of triples `(b1, b2, phi)` with `phi : {b1} -> {b2}` an
/// isomorphism over the stage, with its map to `B x B`.
#[derive(Clone, Debug)]
pub struct EquivPresheaf {
    pub to_pairs: PshMap,
    pub pairs: Pullback,
    pub triples: Vec<Vec<(u32, u32, ArrowId)>>,
}

impl EquivPresheaf {
    pub fn presheaf(&self) -> &Presheaf {
        self.to_pairs.dom()
    }

    /// Elements over `(b1, b2)` at stage `c`.
    pub fn fiber(&self, c: ObjId, b1: u32, b2: u32) -> Vec<u32> {
        (0..self.triples[c.0].len() as u32)
            .filter(|&i| {
                let (x, y, _) = self.triples[c.0][i as usize];
                (x, y) == (b1, b2)
            })
            .collect()
    }
}

pub fn equiv_presheaf(f: &RepMap) -> Result<EquivPresheaf, RfibError> {
    let cat = &**f.base();
    let b = f.cod();
    let mut triples: Vec<Vec<(u32, u32, ArrowId)>> = Vec::new();
    let mut index: Vec<BTreeMap<(u32, u32, ArrowId), u32>> = Vec::new();
    for c in cat.objects() {
        let mut row = Vec::new();
        for b1 in 0..b.size(c) {
            for b2 in 0..b.size(c) {
                let (w1, w2) = (f.comprehension(c, b1), f.comprehension(c, b2));
                for &phi in cat.hom(w1.obj, w2.obj) {
                    if cat.is_iso(phi) && cat.compose(phi, w2.proj) == w1.proj {
                        row.push((b1, b2, phi));
                    }
                }
            }
        }
        index.push(row.iter().enumerate().map(|(i, &t)| (t, i as u32)).collect());
        triples.push(row);
    }
    let mut action = Vec::new();
    for h in cat.arrows() {
        let (d, c) = (cat.src(h), cat.tgt(h));
        let mut act = Vec::new();
        for &(b1, b2, phi) in &triples[c.0] {
            let (hb1, hb2) = (b.act(h, b1), b.act(h, b2));
            let m1 = f.reindex_arrow(c, b1, h);
            let w2 = f.comprehension(c, b2);
            let v1 = f.comprehension(d, hb1);
            let e = f.dom().act(cat.compose(m1, phi), w2.generic);
            let phi2 = f
                .mediate(d, hb2, v1.proj, e)
                .ok_or_else(|| RfibError::Shape("reindexed equivalence does not mediate".into()))?;
            act.push(index[d.0][&(hb1, hb2, phi2)]);
        }
        action.push(act);
    }
    let q = Presheaf::new(f.base().clone(), triples.iter().map(|r| r.len() as u32).collect(), action)?;
    let pairs = product(b, b)?;
    let comps = cat
        .objects()
        .map(|c| triples[c.0].iter().map(|&(x, y, _)| pairs.limit.index_of(c, &[x, y]).unwrap()).collect())
        .collect();
    let to_pairs = PshMap::new(q, pairs.apex().clone(), comps)?;
    Ok(EquivPresheaf { to_pairs, pairs, triples })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::build;
    use crate::rfib::classifier::rep_map_classifier;
    use crate::rfib::representable::is_representable_map;
    use alloc::sync::Arc;

    #[test]
    fn generic_over_delta1_is_univalent() {
        let b = Arc::new(build::delta1());
        let cl = rep_map_classifier(&b).unwrap();
        assert!(is_univalent(&cl.generic).holds());
    }

    #[test]
    fn doubled_classifier_is_not_univalent() {
        let b = Arc::new(build::delta1());
        let cl = rep_map_classifier(&b).unwrap();
        let doubled = cl.generic.map().coproduct(cl.generic.map()).unwrap();
        let d = is_representable_map(&doubled).unwrap();
        match is_univalent(&d) {
            Univalence::Collision { stage, first, second, .. } => {
                assert_eq!((stage, first, second), (ObjId(0), 0, 1));
            }
            u => panic!("expected a collision, got {u:?}"),
        }
    }

    #[test]
    fn map_over_empty_presheaf_is_univalent() {
        let b = Arc::new(build::delta1());
        let e = Presheaf::empty(&b);
        assert!(is_univalent(&RepMap::identity(&e)).holds());
    }

    #[test]
    fn equivalences_over_delta1() {
        let b = Arc::new(build::delta1());
        let cl = rep_map_classifier(&b).unwrap();
        let eq = equiv_presheaf(&cl.generic).unwrap();
        // diagonal contains identities
        for c in b.objects() {
            for y in 0..cl.omega().size(c) {
                assert!(!eq.fiber(c, y, y).is_empty());
            }
        }
        // id_1 and u have non-isomorphic comprehensions
        assert!(eq.fiber(ObjId(1), 0, 1).is_empty());
        // swapping is a bijection of fibers
        for c in b.objects() {
            for x in 0..cl.omega().size(c) {
                for y in 0..cl.omega().size(c) {
                    assert_eq!(eq.fiber(c, x, y).len(), eq.fiber(c, y, x).len());
                }
            }
        }
    }
}
