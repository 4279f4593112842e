use std::sync::Arc;

use natmod_core::budget::{Budget, Verdict};
use natmod_core::fincat::{build, ObjId};
use natmod_core::homotopy::*;
use natmod_core::lf::corpus::{etth1, itth, tthg};
use natmod_core::lf::parse::parse_signature_onto;
use natmod_core::lf::{parse_term, parse_type, print_signature, Context, Substitution};
use natmod_core::models::corpus::{model_corpus, omega_model, tthg_o, CorpusModel};
use natmod_core::models::*;

fn fuel() -> Budget {
    Budget::new(50_000_000)
}

fn find<'a>(corpus: &'a [CorpusModel], sig: &str, name: &str) -> &'a CorpusModel {
    corpus.iter().find(|m| m.sig_name == sig && m.name == name).unwrap()
}

#[test]
fn display_maps_examples() {
    let corpus = model_corpus(100_000);
    // Over the chain, the generic map classifies every arrow.
    let m = find(&corpus, "itth", "omega/chain3");
    let r = Realized::from_model(&m.sig, &m.model).unwrap();
    let d = display_maps(&r, &fuel()).unwrap();
    assert_eq!(d.len(), m.model.base.num_arrows());
    // In the terminal model comprehensions are identities, so `u` is not a
    // display map.
    let m = find(&corpus, "itth", "terminal/delta1");
    let r = Realized::from_model(&m.sig, &m.model).unwrap();
    let d = display_maps(&r, &fuel()).unwrap();
    let u = m.model.base.arrow_by_name("u").unwrap();
    assert!(!d.contains(&u));
    assert!(m.model.base.objects().all(|o| d.contains(&m.model.base.id(o))));
}

/// Display maps of etth1 models: identities, composition, pullbacks and
/// right cancellation; in democratic models every arrow.
#[test]
fn display_maps_of_etth1_models() {
    let corpus = model_corpus(100_000);
    let mut checked = 0;
    for m in corpus.iter().filter(|m| m.sig_name == "etth1") {
        let base = &*m.model.base;
        let r = Realized::from_model(&m.sig, &m.model).unwrap();
        let d = display_maps(&r, &fuel()).unwrap();
        // Only objects reachable by comprehension carry the structure.
        let ctxl = contextual_objects(&m.sig, &m.model).unwrap();
        let inside = |a| ctxl.contains(&base.src(a)) && ctxl.contains(&base.tgt(a));
        for o in ctxl.iter() {
            assert!(d.contains(&base.id(*o)), "{}", m.name);
        }
        for &f in &d {
            for &g in &d {
                if base.tgt(f) == base.src(g) && inside(f) && inside(g) {
                    assert!(d.contains(&base.compose(f, g)), "{}", m.name);
                }
            }
            for h in base.arrows_into(base.tgt(f)) {
                let pb = base.pullback(f, h).expect("display maps are pullback-stable");
                assert!(d.contains(&pb.base_change), "{}", m.name);
            }
        }
        for f in base.arrows() {
            for &g in &d {
                if base.tgt(f) == base.src(g) && d.contains(&base.compose(f, g)) && inside(f) {
                    assert!(d.contains(&f), "{}", m.name);
                }
            }
        }
        if is_democratic(&m.sig, &m.model).unwrap() {
            assert_eq!(d.len(), base.num_arrows(), "{}", m.name);
        }
        checked += 1;
    }
    assert!(checked >= 8);
}

#[test]
fn weak_equivalences() {
    let sig = itth();
    let base = Arc::new(build::delta1());
    let m = omega_model(&sig, &base, 100_000).unwrap();
    let r = Realized::from_model(&sig, &m).unwrap();
    let b = &*m.base;
    // Identities.
    for o in b.objects() {
        assert_eq!(weak_equivalence(&r, b.id(o), &fuel()).unwrap().0, Verdict::Holds);
    }
    // The comprehension of the unit type is an equivalence.
    let el_unit = parse_type(&sig, &Context::new(), "El Unit").unwrap();
    let (w, _, _) = r.comprehension(&Context::new(), &[], r.terminal, &el_unit).unwrap();
    let (v, cert) = weak_equivalence(&r, w.proj, &fuel()).unwrap();
    assert_eq!(v, Verdict::Holds);
    assert!(cert.is_some());
    // The projection forgetting the empty type `u` has no section.
    let u = b.arrow_by_name("u").unwrap();
    assert_eq!(weak_equivalence(&r, u, &fuel()).unwrap(), (Verdict::Fails, None));
}

#[test]
fn generating_cofibrations() {
    let sig = tthg();
    let g = generating_cofibration(&sig, 0, CofTop::Ty, &fuel()).unwrap();
    assert!(g.source.is_empty());
    assert_eq!(g.target.len(), 1);
    assert_eq!(g.target_theory.decls.len(), g.source_theory.decls.len() + 1);
    let g = generating_cofibration(&sig, 0, CofTop::El, &fuel()).unwrap();
    assert_eq!(g.source.len(), 1);
    assert_eq!(g.target.len(), 2);
    let g = generating_cofibration(&sig, 1, CofTop::El, &fuel()).unwrap();
    assert_eq!(g.source.len(), 2);
    assert_eq!(g.target.len(), 3);
    assert_eq!(&g.target.entries[..2], &g.source.entries[..]);
}

#[test]
fn pushouts_are_generator_extensions() {
    let base = tthg_o();
    // Adjoining a type along the unique map from the empty context.
    let cof = CofibrationPresentation {
        attachments: vec![Attachment { n: 0, top: CofTop::Ty, attaching: Substitution { terms: vec![] }, name: "o".into() }],
    };
    let p = pushout_cofibration(&base, &cof, &fuel()).unwrap();
    let direct = parse_signature_onto(base.clone(), "o'0 : Ty\n").unwrap();
    assert_eq!(print_signature(&p), print_signature(&direct));

    assert_eq!(pushout_cofibration(&base, &CofibrationPresentation::default(), &fuel()).unwrap(), base);

    // Adjoining a term along the map classifying `o`.
    let o = parse_term(&base, &Context::new(), "o").unwrap();
    let cof = CofibrationPresentation {
        attachments: vec![Attachment { n: 0, top: CofTop::El, attaching: Substitution { terms: vec![o] }, name: "c".into() }],
    };
    let p = pushout_cofibration(&base, &cof, &fuel()).unwrap();
    let direct = parse_signature_onto(base.clone(), "c : El o\n").unwrap();
    assert_eq!(print_signature(&p), print_signature(&direct));

    // An ill-typed attaching map is rejected.
    let bad = CofibrationPresentation {
        attachments: vec![Attachment { n: 0, top: CofTop::El, attaching: Substitution { terms: vec![] }, name: "c".into() }],
    };
    assert!(matches!(pushout_cofibration(&base, &bad, &fuel()), Err(HomotopyError::Attachment(_))));
}

#[test]
fn pushout_universal_property() {
    let base = tthg_o();
    let core = tthg().decls.len();
    let target = parse_signature_onto(tthg(), "p : Ty\nq : Ty\ne : El p\n").unwrap();
    let o = parse_term(&base, &Context::new(), "o").unwrap();
    for att in [
        Attachment { n: 0, top: CofTop::Ty, attaching: Substitution { terms: vec![] }, name: "g".into() },
        Attachment { n: 0, top: CofTop::El, attaching: Substitution { terms: vec![o.clone()] }, name: "g".into() },
        Attachment {
            n: 1,
            top: CofTop::Ty,
            attaching: Substitution { terms: vec![o] },
            name: "g".into(),
        },
    ] {
        let r = check_pushout_property(&base, &att, &target, core, 3, &fuel()).unwrap();
        assert!(r.complete && r.bijective, "{att:?}: {r:?}");
        assert_eq!(r.from_pushout, r.compatible_pairs);
        assert!(r.from_pushout > 0);
    }
}

#[test]
fn independent_attachments_commute() {
    let base = tthg_o();
    let o = parse_term(&base, &Context::new(), "o").unwrap();
    let a = Attachment { n: 0, top: CofTop::Ty, attaching: Substitution { terms: vec![] }, name: "a".into() };
    let b = Attachment { n: 0, top: CofTop::El, attaching: Substitution { terms: vec![o] }, name: "b".into() };
    let ab = pushout_cofibration(&base, &CofibrationPresentation { attachments: vec![a.clone(), b.clone()] }, &fuel()).unwrap();
    let ba = pushout_cofibration(&base, &CofibrationPresentation { attachments: vec![b, a] }, &fuel()).unwrap();
    assert_ne!(ab, ba);
    assert!(isomorphic_extensions(&ab, &ba, base.decls.len()));
    assert!(!isomorphic_extensions(&ab, &parse_signature_onto(base.clone(), "x : Ty\ny : Ty\n").unwrap(), base.decls.len()));
}

#[test]
fn trivial_fibrations() {
    let corpus = model_corpus(100_000);
    let om = find(&corpus, "itth", "omega/delta1");
    let dm = find(&corpus, "itth", "D(omega/delta1)");
    let (rm, rd) = (Realized::from_model(&om.sig, &om.model).unwrap(), Realized::from_model(&dm.sig, &dm.model).unwrap());
    // Identity.
    let id = ModelMorphism::identity(&om.model);
    let rep = is_trivial_fibration(&rm, &rm, &id, 2, &fuel()).unwrap();
    assert!(rep.lifting.holds() && rep.rlp.holds());
    // The inclusion into the doubled universe misses the second copy.
    let incs = find_morphisms(&om.sig, &om.model, &dm.model, 100, &fuel()).unwrap();
    assert!(!incs.is_empty());
    for f in &incs {
        let rep = is_trivial_fibration(&rm, &rd, f, 1, &fuel()).unwrap();
        assert!(matches!(rep.lifting.type_lifting, Some(LiftFailure::Type { .. })));
        assert!(!rep.rlp.holds());
    }
    // Folding the copies together is surjective on types and terms; the
    // morphism through the terminal object is not.
    let maps = find_morphisms(&dm.sig, &dm.model, &om.model, 100, &fuel()).unwrap();
    let mut folds = 0;
    for f in &maps {
        let rep = is_trivial_fibration(&rd, &rm, f, 2, &fuel()).unwrap();
        assert!(rep.agree());
        if f.functor.objects == [ObjId(0), ObjId(1)] {
            assert!(rep.lifting.holds() && rep.rlp.holds() && rep.rlp.problems > 0);
            folds += 1;
        } else {
            assert!(!rep.lifting.holds());
        }
    }
    assert_eq!(folds, 1);
    // A heart inclusion keeps the fibers over contextual objects.
    let cm = find(&corpus, "itth", "omega/cospan");
    let (h, inc) = heart(&cm.sig, &cm.model).unwrap();
    let (rh, rc) = (Realized::from_model(&cm.sig, &h).unwrap(), Realized::from_model(&cm.sig, &cm.model).unwrap());
    let rep = is_trivial_fibration(&rh, &rc, &inc, 2, &fuel()).unwrap();
    assert!(rep.agree() && rep.lifting.holds());
}

#[test]
fn lifting_agrees_with_rlp_on_the_corpus() {
    let corpus = model_corpus(100_000);
    let dem: Vec<_> = corpus.iter().filter(|m| m.sig_name == "itth" && is_democratic(&m.sig, &m.model).unwrap()).collect();
    let (mut yes, mut no) = (0, 0);
    for m in &dem {
        let rm = Realized::from_model(&m.sig, &m.model).unwrap();
        for n in &dem {
            let rn = Realized::from_model(&n.sig, &n.model).unwrap();
            for f in find_morphisms(&m.sig, &m.model, &n.model, 1000, &fuel()).unwrap() {
                for depth in 0..=2 {
                    let r = is_trivial_fibration(&rm, &rn, &f, depth, &fuel()).unwrap();
                    assert!(r.agree(), "{} -> {} at depth {depth}: {r:?}", m.name, n.name);
                    if r.lifting.holds() {
                        yes += 1;
                    } else {
                        no += 1;
                    }
                }
            }
        }
    }
    assert!(yes > 0 && no > 0);
}

#[test]
fn objects_within_depth() {
    let sig = etth1();
    let m = omega_model(&sig, &Arc::new(build::delta1()), 100_000).unwrap();
    let r = Realized::from_model(&sig, &m).unwrap();
    assert_eq!(objects_within(&r, 0).unwrap(), vec![ObjId(1)]);
    assert_eq!(objects_within(&r, 1).unwrap(), vec![ObjId(1), ObjId(0)]);
}
