//! Brute-force oracles for the presheaf engine: adjunction bijection for
//! pushforward, the fiberwise formula for polynomial functors, polynomial
//! composition, pullback stability of representable maps and the
//! classifier bijection.

use std::sync::Arc;

use natmod_core::budget::Budget;
use natmod_core::fincat::{build, FiniteCategory, ObjId};
use natmod_core::rfib::enumerate::enumerate_over;
use natmod_core::rfib::pushforward::transpose;
use natmod_core::rfib::*;

fn q_delta1() -> RepMap {
    let b = Arc::new(build::delta1());
    is_representable_map(&PshMap::yoneda_arrow(&b, b.arrow_by_name("u").unwrap())).unwrap()
}

/// Counts maps over a base by enumerating all maps and filtering.
fn count_over(dom_map: &PshMap, cod_map: &PshMap) -> usize {
    hom_maps(dom_map.dom(), cod_map.dom(), &Budget::unlimited())
        .unwrap()
        .into_iter()
        .filter(|m| m.then(cod_map).unwrap() == *dom_map)
        .count()
}

fn check_adjunction(f: &RepMap, g: &PshMap, max_h: usize) -> usize {
    let pf = pushforward(f, g).unwrap();
    let mut checked = 0;
    for h in enumerate_over(f.cod(), max_h, &Budget::unlimited()).unwrap() {
        let pb = pullback(f.map(), &h).unwrap();
        let left = count_over(&pb.p1, g);
        let maps_right: Vec<PshMap> = hom_maps(h.dom(), pf.map.dom(), &Budget::unlimited())
            .unwrap()
            .into_iter()
            .filter(|m| m.then(&pf.map).unwrap() == h)
            .collect();
        assert_eq!(left, maps_right.len(), "adjunction counts differ for h = {h:?}");
        // the transposes are distinct maps over E
        let mut ts: Vec<PshMap> = maps_right.iter().map(|phi| transpose(f, &pf, g, phi).unwrap()).collect();
        for t in &ts {
            assert_eq!(t.then(g).unwrap(), pb.p1);
        }
        ts.sort_by(|a, b| a.components().cmp(b.components()));
        ts.dedup();
        assert_eq!(ts.len(), maps_right.len());
        checked += 1;
    }
    checked
}

#[test]
fn adjunction_bijection_over_delta1() {
    let q = q_delta1();
    let g = PshMap::identity(q.dom());
    assert!(check_adjunction(&q, &g, 4) > 5);
    // a non-trivial g: two copies of y(0) over y(0)
    let two = q.dom().coproduct(q.dom()).unwrap();
    let fold = PshMap::new(two.clone(), q.dom().clone(), vec![vec![0, 0], vec![]]).unwrap();
    assert!(check_adjunction(&q, &fold, 4) > 5);
}

#[test]
fn adjunction_bijection_along_generic_maps() {
    for base in [build::chain(3), build::poset(&["a", "b", "c"], &[(0, 2), (1, 2)])] {
        let b = Arc::new(base);
        let cl = rep_map_classifier(&b).unwrap();
        let f = &cl.generic;
        let x = Presheaf::constant(&b, 2);
        let prod = product(&x, f.dom()).unwrap();
        check_adjunction(f, &prod.p2, 3);
    }
}

/// `P_f(X)(c) = sum over y in B(c) of X({y})`, computed directly.
fn direct_poly_sizes(f: &RepMap, x: &Presheaf) -> Vec<u32> {
    f.base()
        .objects()
        .map(|c| (0..f.cod().size(c)).map(|y| x.size(f.comprehension(c, y).obj)).sum())
        .collect()
}

#[test]
fn polynomial_matches_fiberwise_formula() {
    let q = q_delta1();
    let y1 = Presheaf::yoneda(q.base(), ObjId(1));
    let p = polynomial_apply(&q, &y1).unwrap();
    assert_eq!(p.presheaf().sizes().to_vec(), direct_poly_sizes(&q, &y1));
    for x in natmod_core::rfib::enumerate::enumerate_presheaves(q.base(), 4, &Budget::unlimited()).unwrap() {
        let p = polynomial_apply(&q, &x).unwrap();
        assert_eq!(p.presheaf().sizes().to_vec(), direct_poly_sizes(&q, &x));
        // the action agrees with restriction along the reindexing arrows
        let cat = q.base();
        for h in cat.arrows() {
            let (d, c) = (cat.src(h), cat.tgt(h));
            for (i, &(y, xv)) in p.pairs[c.0].iter().enumerate() {
                let k = q.reindex_arrow(c, y, h);
                let expect = (q.cod().act(h, y), x.act(k, xv));
                assert_eq!(p.pairs[d.0][p.presheaf().act(h, i as u32) as usize], expect);
            }
        }
    }
}

#[test]
fn composition_agrees_pointwise_over_delta1() {
    let q = q_delta1();
    let qq = polynomial_compose(&q, &q).unwrap();
    for x in natmod_core::rfib::enumerate::enumerate_presheaves(q.base(), 6, &Budget::unlimited()).unwrap() {
        let lhs = polynomial_apply(&qq, &x).unwrap();
        let inner = polynomial_apply(&q, &x).unwrap();
        let rhs = polynomial_apply(&q, inner.presheaf()).unwrap();
        assert_eq!(lhs.presheaf().sizes(), rhs.presheaf().sizes());
        assert!(find_iso(lhs.presheaf(), rhs.presheaf(), &Budget::unlimited()).unwrap().is_some());
    }
}

#[test]
fn composition_is_associative_up_to_iso() {
    let b = Arc::new(build::chain(2));
    let cl = rep_map_classifier(&b).unwrap();
    let f = &cl.generic;
    let q = is_representable_map(&PshMap::yoneda_arrow(&b, b.arrow_by_name("0<1").unwrap())).unwrap();
    let fg_h = polynomial_compose(&polynomial_compose(f, &q).unwrap(), f).unwrap();
    let f_gh = polynomial_compose(f, &polynomial_compose(&q, f).unwrap()).unwrap();
    let budget = Budget::new(10_000_000);
    assert!(find_iso(fg_h.cod(), f_gh.cod(), &budget).unwrap().is_some());
    assert!(find_iso(fg_h.dom(), f_gh.dom(), &budget).unwrap().is_some());
}

fn bases() -> Vec<FiniteCategory> {
    vec![
        build::terminal(),
        build::delta1(),
        build::chain(3),
        build::poset(&["a", "b", "c"], &[(0, 1), (0, 2)]),
        build::free_on_graph(&["x", "y"], &[("p", "x", "y"), ("q", "x", "y")]),
    ]
}

#[test]
fn representable_maps_are_stable_under_pullback() {
    for base in bases() {
        let b = Arc::new(base);
        let cl = rep_map_classifier(&b).unwrap();
        let f = &cl.generic;
        for h in enumerate_over(f.cod(), 3, &Budget::unlimited()).unwrap() {
            let pb = pullback(f.map(), &h).unwrap();
            let g = is_representable_map(&pb.p2).expect("pullback of a representable map is representable");
            // Beck-Chevalley at the level of comprehensions: the comprehension
            // of z is isomorphic over its stage to that of h(z).
            for c in b.objects() {
                for z in 0..h.dom().size(c) {
                    let (w1, w2) = (g.comprehension(c, z), f.comprehension(c, h.at(c, z)));
                    assert!(b.iso_over(w1.proj, w2.proj).is_some());
                }
            }
        }
    }
}

#[test]
fn generic_maps_are_univalent() {
    for base in bases() {
        let b = Arc::new(base);
        let cl = rep_map_classifier(&b).unwrap();
        assert!(is_univalent(&cl.generic).holds());
    }
}

#[test]
fn univalence_is_presentation_independent() {
    let base = build::poset(&["a", "b", "c"], &[(0, 1), (0, 2)]);
    let n = base.num_arrows();
    let perm: Vec<usize> = (0..n).rev().collect();
    let permuted = base.permuted(&[2, 0, 1], &perm);
    for b in [base, permuted] {
        let b = Arc::new(b);
        let cl = rep_map_classifier(&b).unwrap();
        assert!(is_univalent(&cl.generic).holds());
        let doubled = is_representable_map(&cl.generic.map().coproduct(cl.generic.map()).unwrap()).unwrap();
        assert!(!is_univalent(&doubled).holds());
    }
}

#[test]
fn composition_comparison_is_a_natural_isomorphism() {
    let budget = Budget::unlimited();
    for base in bases().into_iter().take(3) {
        let b = Arc::new(base);
        let cl = rep_map_classifier(&b).unwrap();
        let q = &cl.generic;
        let parts = natmod_core::rfib::polynomial_compose_parts(q, q).unwrap();
        let xs = natmod_core::rfib::enumerate::enumerate_presheaves(&b, 3, &budget).unwrap();
        let etas: Vec<PshMap> = xs.iter().map(|x| composition_comparison(q, q, &parts, x).unwrap()).collect();
        assert!(etas.iter().all(|e| e.is_iso()));
        // Naturality along every map between the test presheaves.
        for (i, x) in xs.iter().enumerate() {
            for (j, x2) in xs.iter().enumerate() {
                for phi in hom_maps(x, x2, &budget).unwrap() {
                    let (l1, l2) = (polynomial_apply(&parts.rep, x).unwrap(), polynomial_apply(&parts.rep, x2).unwrap());
                    let left = polynomial_apply_map(&parts.rep, &l1, &l2, &phi).unwrap();
                    let (g1, g2) = (polynomial_apply(q, x).unwrap(), polynomial_apply(q, x2).unwrap());
                    let gphi = polynomial_apply_map(q, &g1, &g2, &phi).unwrap();
                    let (f1, f2) = (polynomial_apply(q, g1.presheaf()).unwrap(), polynomial_apply(q, g2.presheaf()).unwrap());
                    let right = polynomial_apply_map(q, &f1, &f2, &gphi).unwrap();
                    assert_eq!(left.then(&etas[j]).unwrap(), etas[i].then(&right).unwrap());
                }
            }
        }
    }
}
