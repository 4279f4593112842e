//! Pushforward along a representable map, computed through comprehension:
//! the fiber of `f_* g` over `y` is the set of sections of `g` over `{y}`
//! through the generic element.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::limits::pullback;
use super::presheaf::{Presheaf, PshMap};
use super::representable::RepMap;
use super::RfibError;

/// `f_* g : P -> B` together with its element encoding: the element with
/// index `i` at stage `c` is the pair `pairs[c][i] = (y, s)` with `y` in
/// `B(c)` and `s` in `X({y})` lying over the generic element.
#[derive(Clone, Debug)]
pub struct Pushforward {
    pub map: PshMap,
    pub pairs: Vec<Vec<(u32, u32)>>,
    index: Vec<BTreeMap<(u32, u32), u32>>,
}

impl Pushforward {
    pub fn index_of(&self, c: crate::fincat::ObjId, pair: (u32, u32)) -> Option<u32> {
        self.index[c.0].get(&pair).copied()
    }
}

/// Pushforward of `g : X -> E` along the representable `f : E -> B`.
pub fn pushforward(f: &RepMap, g: &PshMap) -> Result<Pushforward, RfibError> {
    if g.cod() != f.dom() {
        return Err(RfibError::Shape("pushforward: codomain of g is not the domain of f".into()));
    }
    let base = f.base().clone();
    let cat = &*base;
    let x = g.dom();
    let mut pairs = Vec::new();
    let mut index = Vec::new();
    for c in cat.objects() {
        let mut row = Vec::new();
        for y in 0..f.cod().size(c) {
            let w = f.comprehension(c, y);
            for s in 0..x.size(w.obj) {
                if g.at(w.obj, s) == w.generic {
                    row.push((y, s));
                }
            }
        }
        index.push(row.iter().enumerate().map(|(i, &p)| (p, i as u32)).collect::<BTreeMap<_, _>>());
        pairs.push(row);
    }
    let mut action = Vec::new();
    for h in cat.arrows() {
        let (d, c) = (cat.src(h), cat.tgt(h));
        let act = pairs[c.0]
            .iter()
            .map(|&(y, s)| {
                let k = f.reindex_arrow(c, y, h);
                let pair = (f.cod().act(h, y), x.act(k, s));
                index[d.0][&pair]
            })
            .collect();
        action.push(act);
    }
    let sizes = pairs.iter().map(|r| r.len() as u32).collect();
    let p = Presheaf::from_parts(base.clone(), sizes, action);
    let comps = pairs.iter().map(|r| r.iter().map(|&(y, _)| y).collect()).collect();
    let map = PshMap::from_parts(p, f.cod().clone(), comps);
    Ok(Pushforward { map, pairs, index })
}

/// Transposes `phi : H -> f_* g` over `B` (with `h = phi ; f_* g`) to the
/// corresponding map `f^* H -> X` over `E`, where `f^* H` is the pullback
/// of `f` and `h` (elements `(e, z)`).
pub fn transpose(f: &RepMap, pf: &Pushforward, g: &PshMap, phi: &PshMap) -> Result<PshMap, RfibError> {
    let h = phi.then(&pf.map)?;
    let pb = pullback(f.map(), &h)?;
    let cat = &**f.base();
    let mut comps = Vec::new();
    for d in cat.objects() {
        let mut comp = Vec::new();
        for i in 0..pb.apex().size(d) {
            let t = pb.limit.tuple(d, i);
            let (e, z) = (t[0], t[1]);
            let (y, s) = pf.pairs[d.0][phi.at(d, z) as usize];
            let k = f.mediate(d, y, cat.id(d), e).ok_or_else(|| RfibError::Shape("no mediating arrow".into()))?;
            comp.push(g.dom().act(k, s));
        }
        comps.push(comp);
    }
    PshMap::new(pb.apex().clone(), g.dom().clone(), comps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::budget::Budget;
    use crate::fincat::{build, ObjId};
    use crate::rfib::representable::is_representable_map;
    use crate::rfib::search::HomSearch;
    use alloc::sync::Arc;

    #[test]
    fn pushforward_along_identity() {
        let b = Arc::new(build::chain(2));
        let e = Presheaf::yoneda(&b, ObjId(1)).coproduct(&Presheaf::constant(&b, 1)).unwrap();
        let x = Presheaf::constant(&b, 2).coproduct(&e).unwrap();
        let g = PshMap::new(x.clone(), e.clone(), alloc::vec![alloc::vec![0, 1, 0, 1], alloc::vec![0, 1, 0, 1]]).unwrap();
        let id = RepMap::identity(&e);
        let pf = pushforward(&id, &g).unwrap();
        assert_eq!(pf.map.dom().sizes(), g.dom().sizes());
        let iso = HomSearch::new(pf.map.dom(), g.dom())
            .kind(crate::rfib::search::MapKind::Iso)
            .over(&pf.map, &g)
            .first(&Budget::unlimited())
            .unwrap();
        assert!(iso.is_some());
    }

    #[test]
    fn pushforward_of_terminal_is_terminal() {
        let b = Arc::new(build::delta1());
        let q = is_representable_map(&PshMap::yoneda_arrow(&b, b.arrow_by_name("u").unwrap())).unwrap();
        let pf = pushforward(&q, &PshMap::identity(q.dom())).unwrap();
        assert!(pf.map.is_iso());
    }
}
