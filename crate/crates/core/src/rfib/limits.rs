//! Finite limits of presheaves, computed pointwise.
//!
//! The elements of a limit at a stage are the compatible tuples of elements
//! of the diagram's nodes, ordered lexicographically in node order; the
//! index of a tuple in that order is its element id.

use alloc::collections::BTreeMap;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use super::presheaf::{Presheaf, PshMap};
use super::RfibError;
use crate::fincat::{FiniteCategory, ObjId};

/// A finite diagram: nodes and maps between them.
#[derive(Clone, Debug, Default)]
pub struct Diagram {
    pub nodes: Vec<Presheaf>,
    /// `(from, to, map)`.
    pub edges: Vec<(usize, usize, PshMap)>,
}

/// A limit cone with its tuple encoding.
#[derive(Clone, Debug)]
pub struct Limit {
    pub apex: Presheaf,
    pub legs: Vec<PshMap>,
    tuples: Vec<Vec<Vec<u32>>>,
    index: Vec<BTreeMap<Vec<u32>, u32>>,
}

impl Limit {
    /// The tuple of element `x` of the apex at stage `o`.
    pub fn tuple(&self, o: ObjId, x: u32) -> &[u32] {
        &self.tuples[o.0][x as usize]
    }

    /// The apex element with the given tuple, if compatible.
    pub fn index_of(&self, o: ObjId, tuple: &[u32]) -> Option<u32> {
        self.index[o.0].get(tuple).copied()
    }

    /// The mediating map from a cone `(X, legs)` into the limit.
    pub fn mediate(&self, legs: &[PshMap]) -> Result<PshMap, RfibError> {
        let Some(first) = legs.first() else {
            // Limit of the empty diagram: terminal.
            return Err(RfibError::Shape("cone must have at least one leg; use PshMap::to_terminal".into()));
        };
        let x = first.dom();
        let base = x.base();
        let mut comps = Vec::new();
        for o in base.objects() {
            let mut comp = Vec::new();
            for e in 0..x.size(o) {
                let t: Vec<u32> = legs.iter().map(|l| l.at(o, e)).collect();
                match self.index_of(o, &t) {
                    Some(i) => comp.push(i),
                    None => return Err(RfibError::Shape("cone does not commute with the diagram".into())),
                }
            }
            comps.push(comp);
        }
        PshMap::new(x.clone(), self.apex.clone(), comps)
    }
}

/// Pointwise limit of a finite diagram over `base`.
pub fn psh_limit(base: &Arc<FiniteCategory>, diagram: &Diagram) -> Result<Limit, RfibError> {
    for n in &diagram.nodes {
        if !super::presheaf::same_base(n.base(), base) {
            return Err(RfibError::BaseMismatch);
        }
    }
    for (i, j, m) in &diagram.edges {
        if *i >= diagram.nodes.len() || *j >= diagram.nodes.len() {
            return Err(RfibError::Shape("diagram edge refers to a missing node".into()));
        }
        if m.dom() != &diagram.nodes[*i] || m.cod() != &diagram.nodes[*j] {
            return Err(RfibError::Shape("diagram edge does not match its endpoints".into()));
        }
    }
    let cat = &**base;
    let n = diagram.nodes.len();
    let mut tuples = Vec::new();
    let mut index = Vec::new();
    for o in cat.objects() {
        let mut out = Vec::new();
        let mut cur = vec![0u32; n];
        enumerate_tuples(diagram, o, 0, &mut cur, &mut out);
        index.push(out.iter().enumerate().map(|(i, t)| (t.clone(), i as u32)).collect::<BTreeMap<_, _>>());
        tuples.push(out);
    }
    let sizes: Vec<u32> = tuples.iter().map(|t| t.len() as u32).collect();
    let mut action = Vec::new();
    for h in cat.arrows() {
        let (a, b) = (cat.src(h), cat.tgt(h));
        let act = tuples[b.0]
            .iter()
            .map(|t| {
                let img: Vec<u32> = t.iter().enumerate().map(|(k, &x)| diagram.nodes[k].act(h, x)).collect();
                index[a.0][&img]
            })
            .collect();
        action.push(act);
    }
    let apex = Presheaf::from_parts(base.clone(), sizes, action);
    let legs = (0..n)
        .map(|k| {
            let comps = tuples.iter().map(|ts| ts.iter().map(|t| t[k]).collect()).collect();
            PshMap::from_parts(apex.clone(), diagram.nodes[k].clone(), comps)
        })
        .collect();
    Ok(Limit { apex, legs, tuples, index })
}

fn enumerate_tuples(d: &Diagram, o: ObjId, k: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if k == d.nodes.len() {
        out.push(cur.clone());
        return;
    }
    for x in 0..d.nodes[k].size(o) {
        cur[k] = x;
        let ok = d.edges.iter().all(|(i, j, m)| {
            let (i, j) = (*i, *j);
            if i.max(j) != k {
                return true;
            }
            m.at(o, cur[i]) == cur[j]
        });
        if ok {
            enumerate_tuples(d, o, k + 1, cur, out);
        }
    }
}

/// A pullback square `apex -> a`, `apex -> b` over a cospan `a -> c <- b`.
#[derive(Clone, Debug)]
pub struct Pullback {
    pub limit: Limit,
    /// Projection to the domain of the first map.
    pub p1: PshMap,
    /// Projection to the domain of the second map.
    pub p2: PshMap,
}

impl Pullback {
    pub fn apex(&self) -> &Presheaf {
        &self.limit.apex
    }

    /// Mediating map for a commuting pair `(u : X -> a, v : X -> b)`.
    pub fn mediate(&self, u: &PshMap, v: &PshMap) -> Result<PshMap, RfibError> {
        let base = u.base();
        let comps = base
            .objects()
            .map(|o| {
                (0..u.dom().size(o))
                    .map(|e| self.limit.index_of(o, &[u.at(o, e), v.at(o, e)]))
                    .collect::<Option<Vec<u32>>>()
            })
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| RfibError::Shape("pair does not commute over the cospan".into()))?;
        PshMap::new(u.dom().clone(), self.apex().clone(), comps)
    }
}

/// Pullback of `f : A -> C` and `g : B -> C`; elements are pairs `(a, b)`.
pub fn pullback(f: &PshMap, g: &PshMap) -> Result<Pullback, RfibError> {
    if f.cod() != g.cod() {
        return Err(RfibError::Shape("pullback of maps with different codomains".into()));
    }
    let base = f.base().clone();
    let cat = &*base;
    // Specialized pairwise enumeration (same order as the general limit).
    let mut tuples = Vec::new();
    let mut index = Vec::new();
    for o in cat.objects() {
        let mut out = Vec::new();
        for a in 0..f.dom().size(o) {
            let fa = f.at(o, a);
            for b in 0..g.dom().size(o) {
                if g.at(o, b) == fa {
                    out.push(vec![a, b]);
                }
            }
        }
        index.push(out.iter().enumerate().map(|(i, t)| (t.clone(), i as u32)).collect::<BTreeMap<_, _>>());
        tuples.push(out);
    }
    let sizes: Vec<u32> = tuples.iter().map(|t| t.len() as u32).collect();
    let action = cat
        .arrows()
        .map(|h| {
            let (a, b) = (cat.src(h), cat.tgt(h));
            tuples[b.0]
                .iter()
                .map(|t| index[a.0][&[f.dom().act(h, t[0]), g.dom().act(h, t[1])][..]])
                .collect()
        })
        .collect();
    let apex = Presheaf::from_parts(base.clone(), sizes, action);
    let leg = |k: usize, cod: &Presheaf| {
        let comps = tuples.iter().map(|ts| ts.iter().map(|t| t[k]).collect()).collect();
        PshMap::from_parts(apex.clone(), cod.clone(), comps)
    };
    let p1 = leg(0, f.dom());
    let p2 = leg(1, g.dom());
    let limit = Limit { apex: apex.clone(), legs: vec![p1.clone(), p2.clone()], tuples, index };
    Ok(Pullback { limit, p1, p2 })
}

/// Binary product.
pub fn product(a: &Presheaf, b: &Presheaf) -> Result<Pullback, RfibError> {
    a.same_base(b)?;
    pullback(&PshMap::to_terminal(a), &PshMap::to_terminal(b))
}

/// Equalizer of two parallel maps, with its inclusion.
pub fn equalizer(f: &PshMap, g: &PshMap) -> Result<PshMap, RfibError> {
    if f.dom() != g.dom() || f.cod() != g.cod() {
        return Err(RfibError::Shape("equalizer of non-parallel maps".into()));
    }
    let a = f.dom();
    let keep: Vec<Vec<bool>> = a
        .base()
        .objects()
        .map(|o| (0..a.size(o)).map(|x| f.at(o, x) == g.at(o, x)).collect())
        .collect();
    a.subpresheaf(&keep)
}

/// Pullback of `h : H -> B` along `f : E -> B`, returned as the map
/// `f^* H -> E` (the base change of `h`).
pub fn base_change(f: &PshMap, h: &PshMap) -> Result<(Pullback, PshMap), RfibError> {
    let pb = pullback(f, h)?;
    let m = pb.p1.clone();
    Ok((pb, m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::build;

    #[test]
    fn empty_diagram_is_terminal() {
        let b = Arc::new(build::delta1());
        let l = psh_limit(&b, &Diagram::default()).unwrap();
        assert_eq!(l.apex.sizes(), &[1, 1]);
    }

    #[test]
    fn pullback_over_terminal_is_product() {
        let b = Arc::new(build::delta1());
        let y1 = Presheaf::yoneda(&b, ObjId(1));
        let x = Presheaf::constant(&b, 2).coproduct(&y1).unwrap();
        let t = PshMap::to_terminal(&x);
        let pb = pullback(&t, &t).unwrap();
        assert_eq!(pb.apex().sizes(), &[9, 9]);
        // agrees with the general limit
        let d = Diagram {
            nodes: vec![x.clone(), x.clone(), t.cod().clone()],
            edges: vec![(0, 2, t.clone()), (1, 2, t.clone())],
        };
        let l = psh_limit(&b, &d).unwrap();
        assert_eq!(l.apex.sizes(), pb.apex().sizes());
        assert_eq!(l.apex.action_table(crate::fincat::ArrowId(2)), pb.apex().action_table(crate::fincat::ArrowId(2)));
    }

    #[test]
    fn equalizer_of_constant_maps() {
        let b = Arc::new(build::delta1());
        let two = Presheaf::constant(&b, 2);
        let swap = PshMap::new(two.clone(), two.clone(), vec![vec![1, 0], vec![1, 0]]).unwrap();
        let id = PshMap::identity(&two);
        // swap and identity agree nowhere
        assert_eq!(equalizer(&swap, &id).unwrap().dom().sizes(), &[0, 0]);
        let c0 = PshMap::new(two.clone(), two.clone(), vec![vec![0, 0], vec![0, 0]]).unwrap();
        // constant-0 agrees with the identity exactly on element 0
        assert_eq!(equalizer(&c0, &id).unwrap().dom().sizes(), &[1, 1]);
    }
}
