//! Property tests of the presentation-independent invariants, over random
//! finite posets, presheaves and well-typed terms.

use std::sync::Arc;

use natmod_core::budget::Budget;
use natmod_core::fincat::{build, validate_category, FiniteCategory};
use natmod_core::lf::corpus::shipped;
use natmod_core::lf::{enumerate_contexts, parse_context, parse_term, print_context, print_term, Bounds, Checker, RandomTerms};
use natmod_core::rfib::enumerate::enumerate_presheaves;
use natmod_core::rfib::{classify, hom_maps, is_representable_map, is_univalent, pull_generic, pullback, rep_map_classifier};
use natmod_core::structures::{check_structure, extend_id_to_id_plus, find_structure, StructureKind};
use proptest::prelude::*;

/// A poset on `n <= 4` objects: `i <= j` (for `i < j`) when the matching bit
/// is set, closed transitively.
fn poset() -> impl Strategy<Value = FiniteCategory> {
    (1usize..=4, prop::collection::vec(any::<bool>(), 6)).prop_map(|(n, bits)| {
        let names: Vec<String> = (0..n).map(|i| format!("p{i}")).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        let le: Vec<(usize, usize)> = pairs.into_iter().zip(bits).filter(|(_, b)| *b).map(|(p, _)| p).collect();
        build::poset(&refs, &le)
    })
}

/// A permutation of `0..n` from random sort keys.
fn permutation(keys: &[u64], n: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| (keys[i % keys.len()], i));
    let mut perm = vec![0; n];
    for (new, &old) in order.iter().enumerate() {
        perm[old] = new;
    }
    perm
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn relabeling_preserves_validity_and_homs(c in poset(), ok in prop::collection::vec(any::<u64>(), 4), ak in prop::collection::vec(any::<u64>(), 10)) {
        let (op, ap) = (permutation(&ok, c.num_objects()), permutation(&ak, c.num_arrows()));
        let d = c.permuted(&op, &ap);
        prop_assert!(validate_category(&d.to_data()).is_valid());
        for a in c.objects() {
            for b in c.objects() {
                let (pa, pb) = (natmod_core::ObjId(op[a.0]), natmod_core::ObjId(op[b.0]));
                prop_assert_eq!(c.hom(a, b).len(), d.hom(pa, pb).len());
            }
        }
        prop_assert_eq!(c.find_terminal().map(|t| op[t.0]), d.find_terminal().map(|t| t.0));
    }

    #[test]
    fn terminal_objects_have_unique_arrows(c in poset()) {
        if let Some(t) = c.find_terminal() {
            for x in c.objects() {
                prop_assert_eq!(c.hom(x, t).len(), 1);
            }
        }
    }

    #[test]
    fn pullbacks_are_deterministic_and_universal(c in poset()) {
        for f in c.arrows() {
            for g in c.arrows().filter(|&g| c.tgt(g) == c.tgt(f)) {
                let Some(pb) = c.pullback(f, g) else { continue };
                prop_assert_eq!(Some(pb), c.pullback(f, g));
                prop_assert_eq!(c.compose(pb.lift, f), c.compose(pb.base_change, g));
                // Every commuting cone factors uniquely through the pullback.
                for w in c.objects() {
                    for &a in c.hom(w, c.src(f)) {
                        for &b in c.hom(w, c.src(g)) {
                            if c.compose(a, f) != c.compose(b, g) {
                                continue;
                            }
                            let factors = c.hom(w, pb.apex).iter().filter(|&&u| c.compose(u, pb.lift) == a && c.compose(u, pb.base_change) == b).count();
                            prop_assert_eq!(factors, 1);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn classification_is_natural_and_representability_pullback_stable(c in poset(), pick in any::<usize>(), pick2 in any::<usize>()) {
        let base = Arc::new(c);
        let cl = rep_map_classifier(&base).unwrap();
        let budget = Budget::new(10_000_000);
        let ps = enumerate_presheaves(&base, 3, &budget).unwrap();
        let f = &ps[pick % ps.len()];
        let g = &ps[pick2 % ps.len()];
        let hs = hom_maps(g, f, &budget).unwrap();
        for chi in hom_maps(f, cl.omega(), &budget).unwrap() {
            let p = pull_generic(&cl, &chi).unwrap();
            prop_assert_eq!(&classify(&cl, &p).unwrap(), &chi);
            for h in hs.iter().take(4) {
                let pb = pullback(p.map(), h).unwrap();
                let q = is_representable_map(&pb.p2);
                prop_assert!(q.is_ok(), "base change of a representable map is not representable");
                prop_assert_eq!(classify(&cl, &q.unwrap()).unwrap(), h.then(&chi).unwrap());
            }
        }
    }

    #[test]
    fn univalence_is_presentation_independent(c in poset(), ok in prop::collection::vec(any::<u64>(), 4), ak in prop::collection::vec(any::<u64>(), 10)) {
        let d = c.permuted(&permutation(&ok, c.num_objects()), &permutation(&ak, c.num_arrows()));
        let u1 = is_univalent(&rep_map_classifier(&Arc::new(c)).unwrap().generic).holds();
        let u2 = is_univalent(&rep_map_classifier(&Arc::new(d)).unwrap().generic).holds();
        prop_assert_eq!(u1, u2);
    }

    #[test]
    fn id_structures_extend_to_id_plus(c in poset()) {
        let cl = rep_map_classifier(&Arc::new(c)).unwrap();
        if let Some(s) = find_structure(&cl.generic, StructureKind::Id, &Budget::new(10_000_000)).unwrap() {
            let plus = extend_id_to_id_plus(&cl.generic, &s).unwrap();
            prop_assert!(plus.is_some(), "the lifting comparison of an Id structure is not invertible");
            prop_assert!(check_structure(&cl.generic, &plus.unwrap()).unwrap().holds(StructureKind::IdPlus));
        }
    }

    #[test]
    fn random_terms_print_parse_and_normalize_stably(choices in prop::collection::vec(any::<usize>(), 1..64), sig_pick in 0usize..4) {
        let name = ["tthG", "etth1", "itth", "itthPi"][sig_pick];
        let sig = shipped(name).unwrap();
        let fuel = Budget::new(10_000_000);
        let contexts = enumerate_contexts(&sig, Bounds::new(2, 2), false, &fuel).unwrap().items;
        let gamma = &contexts[choices[0] % contexts.len()];
        let mut k = 0;
        let mut gen = RandomTerms::new(&sig, &fuel, move |n| {
            k += 1;
            choices[k % choices.len()] % n.max(1)
        });
        let ch = Checker::new(&sig, &fuel);
        if let Some((t, ty)) = gen.any(gamma, 3).unwrap() {
            // The printer disambiguates binder names, so the printed context
            // is parsed alongside the printed term.
            let (pc, printed) = (print_context(&sig, gamma), print_term(&sig, gamma, &t));
            let parsed_ctx = if pc.is_empty() { gamma.clone() } else { parse_context(&sig, &pc).unwrap() };
            prop_assert!(parsed_ctx.types().eq(gamma.types()));
            prop_assert_eq!(&parse_term(&sig, &parsed_ctx, &printed).unwrap(), &t, "`{}` does not round-trip", printed);
            let n = ch.norm(gamma, &t, &ty).unwrap();
            prop_assert!(ch.check(gamma, &n, &ty).is_ok());
            prop_assert_eq!(ch.norm(gamma, &n, &ty).unwrap(), n);
        }
    }
}
