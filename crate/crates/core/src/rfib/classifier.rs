//! The representable map classifier of a finite base.
//!
//! `Omega(c)` is the set of isomorphism classes over `c` of arrows into `c`
//! all of whose pullbacks exist (represented by the least-index member);
//! `Omega~(c)` adds a section, taken up to automorphisms over `c`. Both act
//! by chosen pullbacks. The generic map forgets the section.

use alloc::collections::BTreeMap;
use alloc::sync::Arc;
use alloc::vec::Vec;

use super::limits::pullback;
use super::presheaf::{Presheaf, PshMap};
use super::representable::{is_representable_map, RepMap};
use super::RfibError;
use crate::fincat::{ArrowId, FiniteCategory, ObjId};

#[derive(Clone, Debug)]
pub struct Classifier {
    base: Arc<FiniteCategory>,
    /// Canonical representatives of `Omega(c)`.
    pub omega_elems: Vec<Vec<ArrowId>>,
    /// `(representative, canonical section)` for `Omega~(c)`.
    pub tilde_elems: Vec<Vec<(ArrowId, ArrowId)>>,
    pub generic: RepMap,
}

/// Automorphisms of `src e` over `tgt e`.
fn automorphisms_over(cat: &FiniteCategory, e: ArrowId) -> Vec<ArrowId> {
    let a = cat.src(e);
    cat.hom(a, a).iter().copied().filter(|&i| cat.is_iso(i) && cat.compose(i, e) == e).collect()
}

fn canonical_section(cat: &FiniteCategory, e: ArrowId, s: ArrowId) -> ArrowId {
    automorphisms_over(cat, e).into_iter().map(|i| cat.compose(s, i)).min().unwrap_or(s)
}

impl Classifier {
    pub fn base(&self) -> &Arc<FiniteCategory> {
        &self.base
    }

    pub fn omega(&self) -> &Presheaf {
        self.generic.cod()
    }

    pub fn omega_tilde(&self) -> &Presheaf {
        self.generic.dom()
    }

    /// Index in `Omega(c)` of the class of `e : a -> c`, if `e` is
    /// pullback-stable.
    pub fn class_of(&self, e: ArrowId) -> Option<u32> {
        let cat = &*self.base;
        let c = cat.tgt(e);
        self.omega_elems[c.0].iter().position(|&r| cat.iso_over(e, r).is_some()).map(|i| i as u32)
    }
}

/// Builds the classifier; fails only if the base has automorphisms that
/// make the section presheaf non-functorial or the generic map
/// non-representable (reported, never assumed away).
pub fn rep_map_classifier(base: &Arc<FiniteCategory>) -> Result<Classifier, RfibError> {
    let cat = &**base;
    let mut omega_elems: Vec<Vec<ArrowId>> = Vec::new();
    for c in cat.objects() {
        let mut reps: Vec<ArrowId> = Vec::new();
        for e in cat.arrows().filter(|&e| cat.tgt(e) == c) {
            if !cat.is_pullback_stable(e) {
                continue;
            }
            if reps.iter().all(|&r| cat.iso_over(e, r).is_none()) {
                reps.push(e);
            }
        }
        omega_elems.push(reps);
    }
    let find_class = |d: ObjId, q: ArrowId| -> Result<(u32, ArrowId), RfibError> {
        for (i, &r) in omega_elems[d.0].iter().enumerate() {
            if let Some(iso) = cat.iso_over(q, r) {
                return Ok((i as u32, iso));
            }
        }
        Err(RfibError::Shape("pullback of a pullback-stable arrow left the classifier".into()))
    };
    let mut omega_action = Vec::new();
    for h in cat.arrows() {
        let (d, c) = (cat.src(h), cat.tgt(h));
        let mut act = Vec::new();
        for &e in &omega_elems[c.0] {
            let pb = cat.pullback(e, h).expect("pullback-stable");
            act.push(find_class(d, pb.base_change)?.0);
        }
        omega_action.push(act);
    }
    let omega = Presheaf::new(base.clone(), omega_elems.iter().map(|v| v.len() as u32).collect(), omega_action)?;

    let mut tilde_elems: Vec<Vec<(ArrowId, ArrowId)>> = Vec::new();
    let mut tilde_index: Vec<BTreeMap<(ArrowId, ArrowId), u32>> = Vec::new();
    for c in cat.objects() {
        let mut row = Vec::new();
        for &e in &omega_elems[c.0] {
            let a = cat.src(e);
            let mut secs: Vec<ArrowId> = cat
                .hom(c, a)
                .iter()
                .copied()
                .filter(|&s| cat.compose(s, e) == cat.id(c))
                .map(|s| canonical_section(cat, e, s))
                .collect();
            secs.sort();
            secs.dedup();
            row.extend(secs.into_iter().map(|s| (e, s)));
        }
        tilde_index.push(row.iter().enumerate().map(|(i, &p)| (p, i as u32)).collect());
        tilde_elems.push(row);
    }
    let mut tilde_action = Vec::new();
    for h in cat.arrows() {
        let (d, c) = (cat.src(h), cat.tgt(h));
        let mut act = Vec::new();
        for &(e, s) in &tilde_elems[c.0] {
            let pb = cat.pullback(e, h).expect("pullback-stable");
            let hs = cat.compose(h, s);
            let t = cat
                .hom(d, pb.apex)
                .iter()
                .copied()
                .find(|&t| cat.compose(t, pb.base_change) == cat.id(d) && cat.compose(t, pb.lift) == hs)
                .expect("pullback induces a section");
            let (i, iso) = find_class(d, pb.base_change)?;
            let e2 = omega_elems[d.0][i as usize];
            let s2 = canonical_section(cat, e2, cat.compose(t, iso));
            act.push(tilde_index[d.0][&(e2, s2)]);
        }
        tilde_action.push(act);
    }
    let omega_tilde =
        Presheaf::new(base.clone(), tilde_elems.iter().map(|v| v.len() as u32).collect(), tilde_action)?;
    let comps = cat
        .objects()
        .map(|c| {
            tilde_elems[c.0]
                .iter()
                .map(|&(e, _)| omega_elems[c.0].iter().position(|&r| r == e).unwrap() as u32)
                .collect()
        })
        .collect();
    let gen = PshMap::new(omega_tilde, omega, comps)?;
    let generic = is_representable_map(&gen)?;
    Ok(Classifier { base: base.clone(), omega_elems, tilde_elems, generic })
}

/// The classifying map `F -> Omega` of a representable map over `F`:
/// `y |-> [proj_y]`.
pub fn classify(cl: &Classifier, f: &RepMap) -> Result<PshMap, RfibError> {
    let cat = &**cl.base();
    let mut comps = Vec::new();
    for c in cat.objects() {
        let mut comp = Vec::new();
        for y in 0..f.cod().size(c) {
            let w = f.comprehension(c, y);
            match cl.class_of(w.proj) {
                Some(i) => comp.push(i),
                None => {
                    return Err(RfibError::Unclassifiable {
                        object: cat.object_name(c).into(),
                        element: y,
                        arrow: cat.arrow_name(w.proj).into(),
                    })
                }
            }
        }
        comps.push(comp);
    }
    PshMap::new(f.cod().clone(), cl.omega().clone(), comps)
}

/// Pullback of the generic map along `chi : F -> Omega`.
pub fn pull_generic(cl: &Classifier, chi: &PshMap) -> Result<RepMap, RfibError> {
    let pb = pullback(cl.generic.map(), chi)?;
    is_representable_map(&pb.p2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::budget::Budget;
    use crate::fincat::build;
    use crate::rfib::search::{find_iso_over, hom_maps};

    #[test]
    fn classifier_over_delta1() {
        let b = Arc::new(build::delta1());
        let cl = rep_map_classifier(&b).unwrap();
        assert_eq!(cl.omega().sizes(), &[1, 2]);
        assert_eq!(cl.omega_tilde().sizes(), &[1, 1]);
        let u = b.arrow_by_name("u").unwrap();
        assert_eq!(cl.omega_elems[1], alloc::vec![b.id(ObjId(1)), u]);
        // comprehension of id_1 is 1, of u is 0
        assert_eq!(cl.generic.comprehension(ObjId(1), 0).obj, ObjId(1));
        assert_eq!(cl.generic.comprehension(ObjId(1), 1).obj, ObjId(0));
    }

    #[test]
    fn classifier_over_terminal() {
        let b = Arc::new(build::terminal());
        let cl = rep_map_classifier(&b).unwrap();
        assert_eq!(cl.omega().sizes(), &[1]);
        assert_eq!(cl.omega_tilde().sizes(), &[1]);
    }

    #[test]
    fn generic_classifies_itself_by_identity() {
        let b = Arc::new(build::chain(3));
        let cl = rep_map_classifier(&b).unwrap();
        let chi = classify(&cl, &cl.generic).unwrap();
        assert_eq!(chi, PshMap::identity(cl.omega()));
    }

    #[test]
    fn global_sections_over_delta1() {
        let b = Arc::new(build::delta1());
        let cl = rep_map_classifier(&b).unwrap();
        let t = Presheaf::terminal(&b);
        let secs = hom_maps(&t, cl.omega(), &Budget::unlimited()).unwrap();
        assert_eq!(secs.len(), 2);
        let mut reps = Vec::new();
        for chi in &secs {
            let f = pull_generic(&cl, chi).unwrap();
            assert_eq!(classify(&cl, &f).unwrap(), *chi);
            reps.push(crate::rfib::representable::is_representable(f.dom()).unwrap().obj);
        }
        reps.sort();
        assert_eq!(reps, alloc::vec![ObjId(0), ObjId(1)]);
        let a = pull_generic(&cl, &secs[0]).unwrap();
        let c = pull_generic(&cl, &secs[1]).unwrap();
        let (pa, pc) = (a.map().clone(), c.map().clone());
        assert!(find_iso_over(&pa, &pc, &Budget::unlimited()).unwrap().is_none());
    }

    #[test]
    fn identity_is_classified_by_identities() {
        let b = Arc::new(build::chain(2));
        let cl = rep_map_classifier(&b).unwrap();
        let f = Presheaf::constant(&b, 2);
        let chi = classify(&cl, &RepMap::identity(&f)).unwrap();
        for c in b.objects() {
            for y in 0..f.size(c) {
                assert_eq!(cl.omega_elems[c.0][chi.at(c, y) as usize], b.id(c));
            }
        }
    }

    #[test]
    fn representable_maps_have_pullback_stable_comprehensions() {
        // In the cospan a -> c <- b the arrow g is not pullback-stable, and
        // correspondingly y(g) is not representable: every representable
        // map is classifiable.
        let b = Arc::new(build::free_on_graph(&["a", "b", "c"], &[("f", "a", "c"), ("g", "b", "c")]));
        let g = PshMap::yoneda_arrow(&b, b.arrow_by_name("g").unwrap());
        assert!(is_representable_map(&g).is_err());
        let cl = rep_map_classifier(&b).unwrap();
        assert_eq!(cl.omega().sizes(), &[1, 1, 1]);
    }
}
