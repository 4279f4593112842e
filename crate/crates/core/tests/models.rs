use std::sync::Arc;

use natmod_core::budget::Budget;
use natmod_core::fincat::{build, ArrowId, FiniteCategory, FunctorData, ObjId};
use natmod_core::lf::corpus::{shipped, tthg, SHIPPED};
use natmod_core::lf::{enumerate_contexts, enumerate_substitutions, parse_context, Bounds, Context};
use natmod_core::models::check::ClauseVerdict;
use natmod_core::models::correspondence::unit_at_representables;
use natmod_core::models::corpus::{model_corpus, omega_model, tthg_o, tthg_o_model};
use natmod_core::models::*;
use natmod_core::rfib::Presheaf;

fn fuel() -> Budget {
    Budget::new(50_000_000)
}

fn delta1() -> Arc<FiniteCategory> {
    Arc::new(build::delta1())
}

fn omega_delta1() -> ModelData {
    omega_model(&tthg(), &delta1(), 100_000).unwrap()
}

#[test]
fn omega_model_over_delta1_is_valid() {
    let r = check_model(&tthg(), &omega_delta1(), &fuel());
    assert!(r.is_model(), "{:?}", r.failure());
}

#[test]
fn deleting_the_witness_breaks_comprehension() {
    let m = omega_delta1().without_witness(1);
    let r = check_model(&tthg(), &m, &fuel());
    assert!(!r.is_model());
    assert!(matches!(r.verdict(Clause::Comprehension), ClauseVerdict::Fails(_)));
    assert_eq!(r.verdict(Clause::Terminal), &ClauseVerdict::Holds);
}

#[test]
fn base_without_terminal_fails_terminal_clause() {
    let m = ModelData { base: Arc::new(build::discrete(2)), terminal: ObjId(0), decls: Vec::new() };
    let r = check_model(&tthg(), &m, &fuel());
    assert!(matches!(r.verdict(Clause::Terminal), ClauseVerdict::Fails(_)));
}

#[test]
fn interpreting_contexts() {
    let sig = tthg();
    let m = omega_delta1();
    let r = Realized::from_model(&sig, &m).unwrap();
    assert_eq!(r.interpret_context(&Context::new()).unwrap().presheaf.sizes(), &[1, 1]);
    // (A : Ty) is Omega: one arrow into 0, two into 1.
    let a = parse_context(&sig, "(A : Ty)").unwrap();
    assert_eq!(r.interpret_context(&a).unwrap().presheaf.sizes(), &[1, 2]);

    // (x : El o) with o the arrow u is the representable y(0).
    let sig = tthg_o();
    let base = delta1();
    let m = tthg_o_model(&base, 1).unwrap();
    let r = Realized::from_model(&sig, &m).unwrap();
    let x = parse_context(&sig, "(x : El o)").unwrap();
    let p = r.interpret_context(&x).unwrap().presheaf;
    let y0 = Presheaf::yoneda(&base, ObjId(0));
    assert!(natmod_core::rfib::find_iso(&p, &y0, &fuel()).unwrap().is_some());
}

#[test]
fn contextual_objects_and_hearts() {
    let sig = tthg();
    let m = omega_delta1();
    assert_eq!(contextual_objects(&sig, &m).unwrap(), vec![ObjId(0), ObjId(1)]);
    assert!(is_democratic(&sig, &m).unwrap());
    let (h, inc) = heart(&sig, &m).unwrap();
    assert_eq!(h.base.num_objects(), 2);
    assert_eq!(inc, ModelMorphism::identity(&m));

    let pt = Arc::new(build::terminal());
    let m = omega_model(&sig, &pt, 1000).unwrap();
    assert_eq!(contextual_objects(&sig, &m).unwrap(), vec![ObjId(0)]);

    // In the cospan a -> t <- b no comprehension lands in a or b.
    let cospan = Arc::new(build::poset(&["a", "b", "t"], &[(0, 2), (1, 2)]));
    let m = omega_model(&sig, &cospan, 1000).unwrap();
    assert_eq!(contextual_objects(&sig, &m).unwrap(), vec![ObjId(2)]);
    assert!(!is_democratic(&sig, &m).unwrap());
    let (h, inc) = heart(&sig, &m).unwrap();
    assert_eq!(h.base.num_objects(), 1);
    assert!(check_model(&sig, &h, &fuel()).is_model());
    assert!(is_democratic(&sig, &h).unwrap());
    check_morphism(&sig, &h, &m, &inc).unwrap();
}

#[test]
fn internal_language_examples() {
    let sig = tthg();
    let m = omega_delta1();
    let il = internal_language(&sig, &m, Bounds::new(2, 2), &fuel()).unwrap();
    assert_eq!(il.elements[il.index_of(&Context::new()).unwrap()].len(), 1);
    let a = parse_context(&sig, "(A : Ty)").unwrap();
    assert_eq!(il.elements[il.index_of(&a).unwrap()].len(), 2);

    // Functoriality on every composable pair of enumerated substitutions.
    let r = Realized::from_model(&sig, &m).unwrap();
    let unlimited = Budget::unlimited();
    let ch = natmod_core::lf::Checker::new(&sig, &unlimited);
    let n = il.contexts.len();
    let subs = |i: usize, j: usize| enumerate_substitutions(&sig, &il.contexts[i], &il.contexts[j], 2, &fuel()).unwrap().items;
    let mut checked = 0;
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                for s in subs(x, y) {
                    for t in subs(y, z) {
                        let ts = ch.norm_subst(&il.contexts[x], &il.contexts[z], &t.then_after(&s)).unwrap();
                        let a1 = il.action(&r, x, y, &s).unwrap();
                        let a2 = il.action(&r, y, z, &t).unwrap();
                        let a12 = il.action(&r, x, z, &ts).unwrap();
                        let composed: Vec<u32> = a1.iter().map(|&i| a2[i as usize]).collect();
                        assert_eq!(composed, a12);
                        checked += 1;
                    }
                }
            }
        }
    }
    assert!(checked > 10);
}

#[test]
fn initial_model_examples() {
    let sig = tthg_o();
    let frag = initial_model(&sig, Bounds::new(1, 3), &fuel()).unwrap();
    assert_eq!(frag.objects, vec![Context::new(), parse_context(&sig, "(x : El o)").unwrap()]);
    // Ty over the empty context: just `o`.
    assert_eq!(frag.elements[0][0].len(), 1);
    let pure = initial_model(&tthg(), Bounds::new(1, 3), &fuel()).unwrap();
    assert_eq!(pure.objects.len(), 1);
    assert_eq!(syntactic_model(&sig, &Context::new(), Bounds::new(1, 3), &fuel()).unwrap().objects, frag.objects);
}

#[test]
fn unique_morphism_from_the_initial_model() {
    let sig = tthg_o();
    let frag = initial_model(&sig, Bounds::new(1, 3), &fuel()).unwrap();
    let m = tthg_o_model(&delta1(), 1).unwrap();
    let r = Realized::from_model(&sig, &m).unwrap();
    let f = morphism_from_initial(&frag, &r).unwrap();
    assert_eq!(f.objects, vec![ObjId(1), ObjId(0)]);
    assert!(frag.is_morphism_into(&r, &f, &fuel()).unwrap());
    let all = frag.morphisms_into(&r, 2, &fuel()).unwrap();
    assert_eq!(all, vec![f]);
}

#[test]
fn syntactic_model_over_a_type() {
    let sig = tthg();
    let a = parse_context(&sig, "(A : Ty)").unwrap();
    let sm = syntactic_model(&sig, &a, Bounds::new(1, 3), &fuel()).unwrap();
    assert_eq!(sm.objects, vec![a.clone(), parse_context(&sig, "(A : Ty) (x : El A)").unwrap()]);
    assert_eq!(sm.parents, vec![None, Some(0)]);
}

#[test]
fn unit_is_invertible_at_representables() {
    for (name, _) in SHIPPED {
        let sig = shipped(name).unwrap();
        let r = unit_at_representables(&sig, Bounds::new(2, 2), &fuel()).unwrap();
        assert!(r.complete && r.holds(), "{name}: {:?}", r.rows.iter().find(|x| !x.holds()));
        let n = enumerate_contexts(&sig, Bounds::new(2, 2), false, &fuel()).unwrap().items.len();
        assert_eq!(r.rows.len(), n * n);
    }
}

#[test]
fn checking_morphisms() {
    let corpus = model_corpus(100_000);
    let get = |sig: &str, name: &str| corpus.iter().find(|m| m.sig_name == sig && m.name == name).unwrap();
    let m = get("tthG", "D(omega/delta1)");
    let id = ModelMorphism::identity(&m.model);
    check_morphism(&m.sig, &m.model, &m.model, &id).unwrap();
    // Swap the two copies of id_1 in Ty at stage 1 only: restriction along u
    // no longer commutes.
    let mut bad = id.clone();
    let ty1 = bad.components[0].as_mut().unwrap();
    ty1[1].swap(0, 2);
    assert!(matches!(check_morphism(&m.sig, &m.model, &m.model, &bad), Err(ModelError::NotAMorphism(_))));
}

#[test]
fn heart_coreflection_on_the_corpus() {
    let corpus = model_corpus(100_000);
    let mut nontrivial = 0;
    for m in corpus.iter().filter(|m| m.sig_name == "tthG" || m.sig_name == "itth") {
        if !is_democratic(&m.sig, &m.model).unwrap() {
            continue;
        }
        for n in corpus.iter().filter(|n| n.sig_name == m.sig_name) {
            let (h, inc) = heart(&n.sig, &n.model).unwrap();
            let direct = find_morphisms(&m.sig, &m.model, &n.model, 1000, &fuel()).unwrap();
            let via = find_morphisms(&m.sig, &m.model, &h, 1000, &fuel()).unwrap();
            assert_eq!(direct.len(), via.len(), "{} -> {}", m.name, n.name);
            for g in &via {
                assert!(direct.contains(&g.then(&inc)));
            }
            nontrivial += usize::from(direct.len() > 1);
        }
    }
    assert!(nontrivial > 0);
}

/// A left exact functor of posets induces a morphism of generic-map models.
#[test]
fn omega_models_are_functorial() {
    let sig = tthg();
    let d1 = delta1();
    let c3 = Arc::new(build::chain(3));
    let m = omega_model(&sig, &d1, 1000).unwrap();
    let n = omega_model(&sig, &c3, 1000).unwrap();
    let fs = find_morphisms(&sig, &m, &n, 100, &fuel()).unwrap();
    // Delta1 -> chain3 sending 0 -> 1, 1 -> 2.
    let target = vec![ObjId(1), ObjId(2)];
    assert!(fs.iter().any(|f| f.functor.objects == target));
    for f in &fs {
        check_morphism(&sig, &m, &n, f).unwrap();
        assert_eq!(f.functor.on_object(m.terminal), n.terminal);
    }
}

fn is_iso(m: &ModelData, n: &ModelData, f: &ModelMorphism) -> bool {
    let bij = |v: &[u32], k: u32| {
        let mut s = v.to_vec();
        s.sort_unstable();
        s.dedup();
        s.len() == v.len() && v.len() == k as usize
    };
    let FunctorData { objects, arrows } = &f.functor;
    let objs: Vec<u32> = objects.iter().map(|o| o.0 as u32).collect();
    let arrs: Vec<u32> = arrows.iter().map(|a: &ArrowId| a.0 as u32).collect();
    bij(&objs, n.base.num_objects() as u32)
        && bij(&arrs, n.base.num_arrows() as u32)
        && f.components.iter().enumerate().all(|(s, c)| match (c, &n.decls[s]) {
            (Some(rows), DeclInterp::Sort { total, .. }) => {
                m.base.objects().all(|o| bij(&rows[o.0], total.size(f.functor.on_object(o))))
            }
            _ => true,
        })
}

/// Between democratic models, a morphism bijective on the internal
/// language at every enumerated context is an isomorphism.
#[test]
fn internal_language_is_conservative_on_democratic_models() {
    let corpus = model_corpus(100_000);
    let mut isos = 0;
    let mut others = 0;
    for m in corpus.iter().filter(|m| m.sig_name == "tthG" || m.sig_name == "itth") {
        if !is_democratic(&m.sig, &m.model).unwrap() {
            continue;
        }
        let il_m = internal_language(&m.sig, &m.model, Bounds::new(2, 2), &fuel()).unwrap();
        let rm = Realized::from_model(&m.sig, &m.model).unwrap();
        for n in corpus.iter().filter(|n| n.sig_name == m.sig_name) {
            if !is_democratic(&n.sig, &n.model).unwrap() {
                continue;
            }
            let il_n = internal_language(&n.sig, &n.model, Bounds::new(2, 2), &fuel()).unwrap();
            for f in find_morphisms(&m.sig, &m.model, &n.model, 1000, &fuel()).unwrap() {
                let bijective = il_m.contexts.iter().enumerate().all(|(i, ctx)| {
                    let mut imgs: Vec<Env> = il_m.elements[i]
                        .iter()
                        .map(|e| map_env(&rm, &f, ctx, e, m.model.terminal).unwrap())
                        .collect();
                    imgs.sort();
                    imgs.dedup();
                    let injective = imgs.len() == il_m.elements[i].len();
                    let mut target = il_n.elements[i].clone();
                    target.sort();
                    injective && imgs == target
                });
                if bijective {
                    assert!(is_iso(&m.model, &n.model, &f), "{} -> {}", m.name, n.name);
                    isos += 1;
                } else {
                    others += 1;
                }
            }
        }
    }
    assert!(isos > 0 && others > 0);
}
