//! The ten acceptance criteria, each an exhaustive check over a generated
//! or shipped corpus with its own time limit.

use std::time::{Duration, Instant};

use natmod_core::budget::Budget;
use natmod_core::fincat::{ArrowId, FiniteCategory, ObjId};
use natmod_core::homotopy::{check_pushout_property, generating_cofibration, is_trivial_fibration, pushout_cofibration, Attachment, CofTop, CofibrationPresentation};
use natmod_core::lf::corpus::{shipped, SHIPPED};
use natmod_core::lf::parse::parse_signature_onto;
use natmod_core::lf::{
    check_signature, enumerate_contexts, enumerate_substitutions, print_type, Bounds, Checker, Context, RandomTerms, Signature, Term,
    Substitution, TypeError,
};
use natmod_core::models::correspondence::unit_at_representables;
use natmod_core::models::corpus::{model_corpus, CorpusModel};
use natmod_core::models::{find_morphisms, heart, initial_model, is_democratic, morphism_from_initial, ModelError, Realized};
use natmod_core::rfib::enumerate::enumerate_presheaves;
use natmod_core::rfib::{
    classify, composition_comparison, hom_maps, is_univalent, polynomial_apply, polynomial_apply_map, polynomial_compose_parts, pull_generic,
    rep_map_classifier, Classifier, Presheaf, PshMap, RfibError,
};
use natmod_core::rfib::representable::RepMap;
use natmod_core::structures::{structure_criteria, sub_presheaves, sub_universe, StructureError};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::corpus::{corpus_generate, CorpusSizes, NamedCategory};
use crate::report::Outcome;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AcceptanceConfig {
    pub seed: u64,
    /// Context depth for the correspondence, initial-model and lifting
    /// criteria.
    pub depth: usize,
    /// Step budget of each individual search.
    pub fuel: u64,
    /// Random terms per signature for the kernel-health criterion.
    pub terms: usize,
}

impl Default for AcceptanceConfig {
    fn default() -> Self {
        AcceptanceConfig { seed: 0, depth: 2, fuel: 200_000_000, terms: 1000 }
    }
}

pub const TITLES: [&str; 10] = [
    "polynomial composition",
    "classifier bijection",
    "generic maps are univalent",
    "structure criteria",
    "kernel health",
    "correspondence at representables",
    "heart coreflection",
    "initial model",
    "lifting lemma",
    "cofibration pushouts",
];

/// Time limits in seconds; `None` where the criterion states none.
pub const LIMITS: [Option<f64>; 10] = [Some(60.0), Some(60.0), None, Some(120.0), Some(120.0), None, None, None, Some(300.0), None];

#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub number: usize,
    pub title: &'static str,
    pub outcome: Outcome,
    pub detail: String,
    pub seconds: f64,
    pub limit_seconds: Option<f64>,
}

impl CriterionResult {
    /// One line: `PASS criterion 3 (generic maps are univalent): ...`.
    pub fn line(&self) -> String {
        let tag = match self.outcome {
            Outcome::Pass => "PASS",
            Outcome::Inconclusive => "INCONCLUSIVE",
            _ => "FAIL",
        };
        format!("{tag} criterion {} ({}): {} [{:.2}s]", self.number, self.title, self.detail, self.seconds)
    }
}

/// Outcome of one criterion before timing.
enum Check {
    Pass(String),
    Fail(String),
    Inconclusive(String),
}

/// Internal errors of a criterion: exhausted budgets are inconclusive,
/// anything else a failure.
#[derive(Debug)]
enum CritError {
    Budget,
    Other(String),
}

impl From<RfibError> for CritError {
    fn from(e: RfibError) -> Self {
        CritError::Other(e.to_string())
    }
}

impl From<natmod_core::budget::OutOfBudget> for CritError {
    fn from(_: natmod_core::budget::OutOfBudget) -> Self {
        CritError::Budget
    }
}

impl From<StructureError> for CritError {
    fn from(e: StructureError) -> Self {
        match e {
            StructureError::OutOfBudget => CritError::Budget,
            e => CritError::Other(e.to_string()),
        }
    }
}

impl From<ModelError> for CritError {
    fn from(e: ModelError) -> Self {
        match e {
            ModelError::OutOfBudget | ModelError::Type(TypeError::OutOfFuel) => CritError::Budget,
            e => CritError::Other(e.to_string()),
        }
    }
}

impl From<TypeError> for CritError {
    fn from(e: TypeError) -> Self {
        match e {
            TypeError::OutOfFuel => CritError::Budget,
            e => CritError::Other(e.to_string()),
        }
    }
}

impl From<natmod_core::homotopy::HomotopyError> for CritError {
    fn from(e: natmod_core::homotopy::HomotopyError) -> Self {
        use natmod_core::homotopy::HomotopyError as H;
        match e {
            H::OutOfBudget => CritError::Budget,
            H::Model(m) => m.into(),
            H::Type(t) => t.into(),
            e => CritError::Other(e.to_string()),
        }
    }
}

type CResult = Result<Check, CritError>;

fn fail_if(cond: bool, pass: String, fail: impl FnOnce() -> String) -> Check {
    if cond {
        Check::Pass(pass)
    } else {
        Check::Fail(fail())
    }
}

/// Runs criterion `number` (1-based).
pub fn run_criterion(number: usize, cfg: &AcceptanceConfig) -> CriterionResult {
    assert!((1..=10).contains(&number), "criteria are numbered 1 to 10");
    let start = Instant::now();
    let res = match number {
        1 => polynomial_composition(cfg),
        2 => classifier_bijection(cfg),
        3 => generic_univalence(cfg),
        4 => structure_iff(cfg),
        5 => kernel_health(cfg),
        6 => correspondence(cfg),
        7 => heart_coreflection(cfg),
        8 => initial_model_uniqueness(cfg),
        9 => lifting_lemma(cfg),
        _ => cofibration_pushouts(cfg),
    };
    let elapsed = start.elapsed();
    let limit = LIMITS[number - 1];
    let (mut outcome, mut detail) = match res {
        Ok(Check::Pass(d)) => (Outcome::Pass, d),
        Ok(Check::Fail(d)) => (Outcome::Fail, d),
        Ok(Check::Inconclusive(d)) => (Outcome::Inconclusive, d),
        Err(CritError::Budget) => (Outcome::Inconclusive, "search budget exhausted".to_string()),
        Err(CritError::Other(e)) => (Outcome::Fail, format!("error: {e}")),
    };
    if let Some(l) = limit {
        if elapsed > Duration::from_secs_f64(l) && outcome == Outcome::Pass {
            outcome = Outcome::Fail;
            detail = format!("{detail}; exceeded the {l} s limit");
        }
    }
    CriterionResult { number, title: TITLES[number - 1], outcome, detail, seconds: elapsed.as_secs_f64(), limit_seconds: limit }
}

pub fn run_all(cfg: &AcceptanceConfig) -> Vec<CriterionResult> {
    (1..=10).map(|n| run_criterion(n, cfg)).collect()
}

fn corpus_bases(cfg: &AcceptanceConfig) -> Result<Vec<NamedCategory>, CritError> {
    Ok(corpus_generate(cfg.seed, CorpusSizes::default()).map_err(|e| CritError::Other(e.to_string()))?.categories)
}

/// Classifiers of the corpus bases that admit one.
fn classifiers(cfg: &AcceptanceConfig) -> Result<Vec<(String, Classifier)>, CritError> {
    corpus_bases(cfg)?.into_iter().map(|nc| Ok((nc.name, rep_map_classifier(&nc.category)?))).collect()
}

/// Representable maps `E -> B` over `base` with `B` of total size at most
/// `max_cod` and `E` at most `max_dom`, as pullbacks of the generic map.
fn representable_maps(cl: &Classifier, max_cod: usize, max_dom: usize, budget: &Budget) -> Result<Vec<RepMap>, CritError> {
    let mut out = Vec::new();
    for b in enumerate_presheaves(cl.base(), max_cod, budget)? {
        for chi in hom_maps(&b, cl.omega(), budget)? {
            let f = pull_generic(cl, &chi)?;
            if f.dom().total_size() <= max_dom {
                out.push(f);
            }
        }
    }
    Ok(out)
}

/// Checks that the comparison `P_{f (x) g} -> P_f . P_g` is invertible at
/// every test presheaf and natural along every map between them.
fn comparison_is_natural_iso(f: &RepMap, g: &RepMap, xs: &[Presheaf], maps: &[(usize, usize, PshMap)]) -> Result<bool, CritError> {
    let parts = polynomial_compose_parts(f, g)?;
    let fg = &parts.rep;
    let mut etas = Vec::new();
    let mut lhs = Vec::new();
    let mut inner = Vec::new();
    let mut rhs = Vec::new();
    for x in xs {
        let eta = composition_comparison(f, g, &parts, x)?;
        if !eta.is_iso() {
            return Ok(false);
        }
        etas.push(eta);
        lhs.push(polynomial_apply(fg, x)?);
        let gx = polynomial_apply(g, x)?;
        rhs.push(polynomial_apply(f, gx.presheaf())?);
        inner.push(gx);
    }
    for (i, j, phi) in maps {
        let left = polynomial_apply_map(fg, &lhs[*i], &lhs[*j], phi)?;
        let gphi = polynomial_apply_map(g, &inner[*i], &inner[*j], phi)?;
        let right = polynomial_apply_map(f, &rhs[*i], &rhs[*j], &gphi)?;
        if left.then(&etas[*j])? != etas[*i].then(&right)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn polynomial_composition(cfg: &AcceptanceConfig) -> CResult {
    let budget = Budget::new(cfg.fuel);
    let mut pairs = 0;
    let mut bases = 0;
    for (name, cl) in classifiers(cfg)? {
        let maps = representable_maps(&cl, 2, 6, &budget)?;
        let xs = enumerate_presheaves(cl.base(), 2, &budget)?;
        let mut between = Vec::new();
        for (i, x) in xs.iter().enumerate() {
            for (j, y) in xs.iter().enumerate() {
                between.extend(hom_maps(x, y, &budget)?.into_iter().map(|m| (i, j, m)));
            }
        }
        // A deterministic spread of at most 24 pairs per base.
        let all: Vec<(usize, usize)> = (0..maps.len()).flat_map(|i| (0..maps.len()).map(move |j| (i, j))).collect();
        let step = all.len().div_ceil(24).max(1);
        for &(i, j) in all.iter().step_by(step) {
            if !comparison_is_natural_iso(&maps[i], &maps[j], &xs, &between)? {
                return Ok(Check::Fail(format!("over `{name}`: no natural isomorphism for pair ({i}, {j})")));
            }
            pairs += 1;
        }
        bases += 1;
    }
    Ok(fail_if(
        pairs >= 100,
        format!("{pairs} pairs over {bases} bases, canonical comparison invertible and natural"),
        || format!("only {pairs} pairs generated"),
    ))
}

/// Pullback-stable arrows into each object, one per isomorphism class over
/// the object.
fn stable_classes(base: &FiniteCategory) -> Vec<Vec<ArrowId>> {
    base.objects()
        .map(|c| {
            let mut reps: Vec<ArrowId> = Vec::new();
            for e in base.arrows_into(c) {
                if base.is_pullback_stable(e) && !reps.iter().any(|&r| base.iso_over(e, r).is_some()) {
                    reps.push(e);
                }
            }
            reps
        })
        .collect()
}

/// Independent count of representable maps over `f` up to isomorphism:
/// choices of a comprehension class for every element, compatible with
/// pullback along every arrow.
fn count_comprehension_choices(f: &Presheaf, classes: &[Vec<ArrowId>], budget: &Budget) -> Result<usize, CritError> {
    let base = &**f.base();
    let elems: Vec<(ObjId, u32)> = f.elements().map(|e| (e.obj, e.idx)).collect();
    let pos = |o: ObjId, x: u32| elems.iter().position(|&(c, y)| c == o && y == x).expect("element");
    let mut choice: Vec<Option<usize>> = vec![None; elems.len()];
    fn rec(
        k: usize,
        base: &FiniteCategory,
        f: &Presheaf,
        elems: &[(ObjId, u32)],
        pos: &dyn Fn(ObjId, u32) -> usize,
        classes: &[Vec<ArrowId>],
        choice: &mut Vec<Option<usize>>,
        budget: &Budget,
    ) -> Result<usize, CritError> {
        if !budget.tick() {
            return Err(CritError::Budget);
        }
        if k == elems.len() {
            return Ok(1);
        }
        let (c, y) = elems[k];
        let mut total = 0;
        for i in 0..classes[c.0].len() {
            choice[k] = Some(i);
            // Compatibility with every arrow whose endpoints are chosen.
            let ok = (0..=k).all(|m| {
                let (c2, y2) = elems[m];
                base.arrows_into(c2).all(|h| {
                    let d = base.src(h);
                    let n = pos(d, f.act(h, y2));
                    match (choice[m], choice[n]) {
                        (Some(a), Some(b)) => {
                            let pb = base.pullback(classes[c2.0][a], h).expect("stable arrows pull back");
                            base.iso_over(pb.base_change, classes[d.0][b]).is_some()
                        }
                        _ => true,
                    }
                })
            });
            if ok {
                total += rec(k + 1, base, f, elems, pos, classes, choice, budget)?;
            }
        }
        choice[k] = None;
        let _ = y;
        Ok(total)
    }
    rec(0, base, f, &elems, &pos, classes, &mut choice, budget)
}

fn classifier_bijection(cfg: &AcceptanceConfig) -> CResult {
    let budget = Budget::new(cfg.fuel);
    let (mut presheaves, mut maps) = (0, 0);
    for (name, cl) in classifiers(cfg)? {
        let base = cl.base().clone();
        let classes = stable_classes(&base);
        for f in enumerate_presheaves(&base, 6, &budget)? {
            let chis = hom_maps(&f, cl.omega(), &budget)?;
            let mut keys = Vec::new();
            for chi in &chis {
                let p = pull_generic(&cl, chi)?;
                if classify(&cl, &p)? != *chi {
                    return Ok(Check::Fail(format!("over `{name}`: classifying the pullback does not return the map")));
                }
                // The comprehension classes of the pulled-back map.
                let key: Vec<usize> = f
                    .elements()
                    .map(|e| {
                        let w = p.comprehension(e.obj, e.idx);
                        classes[e.obj.0].iter().position(|&r| base.iso_over(w.proj, r).is_some()).expect("comprehension is stable")
                    })
                    .collect();
                keys.push(key);
            }
            keys.sort();
            keys.dedup();
            let oracle = count_comprehension_choices(&f, &classes, &budget)?;
            if keys.len() != chis.len() || oracle != chis.len() {
                return Ok(Check::Fail(format!(
                    "over `{name}`, presheaf of sizes {:?}: {} maps to Omega, {} distinct classes, {oracle} representable maps up to iso",
                    f.sizes(),
                    chis.len(),
                    keys.len()
                )));
            }
            presheaves += 1;
            maps += chis.len();
        }
    }
    Ok(Check::Pass(format!("{presheaves} presheaves, {maps} classifying maps matched one-to-one")))
}

fn generic_univalence(cfg: &AcceptanceConfig) -> CResult {
    let mut n = 0;
    for (name, cl) in classifiers(cfg)? {
        if !is_univalent(&cl.generic).holds() {
            return Ok(Check::Fail(format!("generic map over `{name}` is not univalent")));
        }
        n += 1;
    }
    Ok(Check::Pass(format!("{n} bases")))
}

fn structure_iff(cfg: &AcceptanceConfig) -> CResult {
    let budget = Budget::new(cfg.fuel);
    let (mut maps, mut found) = (0, [0usize; 4]);
    for (name, cl) in classifiers(cfg)? {
        let mut universes = vec![cl.generic.clone()];
        for keep in sub_presheaves(cl.omega()) {
            universes.push(sub_universe(&cl, &keep)?);
        }
        for u in &universes {
            let report = structure_criteria(u, &budget)?;
            for (k, e) in report.entries.iter().enumerate() {
                if !e.agrees() {
                    return Ok(Check::Fail(format!("over `{name}`: {} closure is {} but the search disagrees", e.kind, e.closure)));
                }
                found[k] += usize::from(e.closure);
            }
            maps += 1;
        }
    }
    Ok(Check::Pass(format!("{maps} univalent maps; structures found: Unit {}, Sigma {}, Id {}, Pi {}", found[0], found[1], found[2], found[3])))
}

fn kernel_health(cfg: &AcceptanceConfig) -> CResult {
    let mut details = Vec::new();
    for (k, (name, _)) in SHIPPED.iter().enumerate() {
        let sig = shipped(name).expect("shipped");
        let fuel = Budget::new(cfg.fuel);
        let report = check_signature(&sig, &fuel);
        if !report.is_valid() {
            let f = report.failures().next().expect("a failure");
            return Ok(Check::Fail(format!("{name}: `{}` rejected: {}", f.name, f.error.as_deref().unwrap_or(""))));
        }
        let contexts = enumerate_contexts(&sig, Bounds::new(2, 2), false, &fuel)?.items;
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(k as u64));
        let mut choices = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(1000 + k as u64));
        let ch = Checker::new(&sig, &fuel);
        let mut gen = RandomTerms::new(&sig, &fuel, move |n| choices.gen_range(0..n.max(1)));
        let (mut done, mut attempts, mut substituted) = (0, 0, 0);
        while done < cfg.terms {
            attempts += 1;
            if attempts > 20 * cfg.terms {
                return Ok(Check::Fail(format!("{name}: only {done} terms generated")));
            }
            let gamma = &contexts[rng.gen_range(0..contexts.len())];
            // A constant-headed term, or a term at the type of a variable.
            let drawn = if gamma.is_empty() || rng.gen_bool(0.5) {
                gen.any(gamma, 3)?
            } else {
                let ty = ch.infer(gamma, &Term::var(rng.gen_range(0..gamma.len() as u32)))?;
                gen.of_type(gamma, &ty, 3)?.map(|t| (t, ty))
            };
            let Some((t, ty)) = drawn else { continue };
            ch.check(gamma, &t, &ty)?;
            let n = ch.norm(gamma, &t, &ty)?;
            // Subject reduction and idempotence.
            if let Err(e) = ch.check(gamma, &n, &ty) {
                return Ok(Check::Fail(format!("{name}: normal form loses its type: {e}")));
            }
            if ch.norm(gamma, &n, &ty)? != n {
                return Ok(Check::Fail(format!("{name}: normalization is not idempotent")));
            }
            // Substitution lemma along a random substitution into gamma.
            let delta = &contexts[rng.gen_range(0..contexts.len())];
            let subs = enumerate_substitutions(&sig, delta, gamma, 2, &fuel)?.items;
            if !subs.is_empty() {
                let s: &Substitution = &subs[rng.gen_range(0..subs.len())];
                let (ts, tys) = (t.subst(&s.terms), ty.subst(&s.terms));
                if let Err(e) = ch.check(delta, &ts, &tys) {
                    return Ok(Check::Fail(format!("{name}: substitution breaks typing: {e}")));
                }
                if ch.norm(delta, &ts, &tys)? != ch.norm(delta, &n.subst(&s.terms), &tys)? {
                    return Ok(Check::Fail(format!("{name}: normalization does not commute with substitution")));
                }
                substituted += 1;
            }
            done += 1;
        }
        details.push(format!("{name} {done} terms ({substituted} substituted)"));
    }
    Ok(Check::Pass(details.join(", ")))
}

fn correspondence(cfg: &AcceptanceConfig) -> CResult {
    let mut details = Vec::new();
    for (name, _) in SHIPPED {
        let sig = shipped(name).expect("shipped");
        let r = unit_at_representables(&sig, Bounds::new(cfg.depth, 3), &Budget::new(cfg.fuel))?;
        if !r.complete {
            return Ok(Check::Inconclusive(format!("{name}: enumeration incomplete")));
        }
        if !r.holds() {
            let bad = r.rows.iter().find(|x| !x.holds());
            return Ok(Check::Fail(match bad {
                Some(row) => format!("{name}: |IL| = {} but |hom| = {} for A = {}, B = {}", row.il, row.hom, row.a.len(), row.b.len()),
                None => format!("{name}: a syntactic model is not democratic"),
            }));
        }
        details.push(format!("{name} {} pairs", r.rows.len()));
    }
    Ok(Check::Pass(details.join(", ")))
}

fn heart_coreflection(cfg: &AcceptanceConfig) -> CResult {
    let corpus = model_corpus(1_000_000);
    let (mut pairs, mut maps) = (0, 0);
    for m in &corpus {
        if !is_democratic(&m.sig, &m.model)? {
            continue;
        }
        for n in corpus.iter().filter(|n| n.sig_name == m.sig_name) {
            let (h, inc) = heart(&n.sig, &n.model)?;
            let direct = find_morphisms(&m.sig, &m.model, &n.model, usize::MAX, &Budget::new(cfg.fuel))?;
            let via = find_morphisms(&m.sig, &m.model, &h, usize::MAX, &Budget::new(cfg.fuel))?;
            let mut images: Vec<_> = via.iter().map(|g| g.then(&inc)).collect();
            images.sort();
            images.dedup();
            let mut direct_sorted = direct.clone();
            direct_sorted.sort();
            if images.len() != via.len() || images != direct_sorted {
                return Ok(Check::Fail(format!("{}: {} -> {}: {} direct morphisms, {} through the heart", m.sig_name, m.name, n.name, direct.len(), via.len())));
            }
            pairs += 1;
            maps += direct.len();
        }
    }
    Ok(Check::Pass(format!("{pairs} pairs, {maps} morphisms matched")))
}

fn initial_model_uniqueness(cfg: &AcceptanceConfig) -> CResult {
    let corpus = model_corpus(1_000_000);
    let mut checked = 0;
    for (name, _) in SHIPPED {
        let sig = shipped(name).expect("shipped");
        let fuel = Budget::new(cfg.fuel);
        let frag = initial_model(&sig, Bounds::new(cfg.depth, 4), &fuel)?;
        if !frag.complete {
            return Ok(Check::Inconclusive(format!("{name}: initial fragment incomplete")));
        }
        for m in corpus.iter().filter(|m| m.sig_name == name) {
            let r = Realized::from_model(&m.sig, &m.model)?;
            let all = frag.morphisms_into(&r, 2, &Budget::new(cfg.fuel))?;
            let built = morphism_from_initial(&frag, &r)?;
            if all.len() != 1 || all[0] != built {
                return Ok(Check::Fail(format!("{name}: {} morphisms into {}", all.len(), m.name)));
            }
            checked += 1;
        }
    }
    Ok(Check::Pass(format!("{checked} models, exactly one morphism each")))
}

fn democratic_itth(corpus: &[CorpusModel]) -> Result<Vec<&CorpusModel>, CritError> {
    let mut out = Vec::new();
    for m in corpus.iter().filter(|m| m.sig_name == "itth") {
        if is_democratic(&m.sig, &m.model)? {
            out.push(m);
        }
    }
    Ok(out)
}

fn lifting_lemma(cfg: &AcceptanceConfig) -> CResult {
    let corpus = model_corpus(1_000_000);
    let dem = democratic_itth(&corpus)?;
    let (mut cases, mut trivial) = (0, 0);
    for m in &dem {
        let rm = Realized::from_model(&m.sig, &m.model)?;
        for n in &dem {
            let rn = Realized::from_model(&n.sig, &n.model)?;
            for f in find_morphisms(&m.sig, &m.model, &n.model, usize::MAX, &Budget::new(cfg.fuel))? {
                for depth in 0..=cfg.depth {
                    let r = is_trivial_fibration(&rm, &rn, &f, depth, &Budget::new(cfg.fuel))?;
                    if !r.agree() {
                        return Ok(Check::Fail(format!(
                            "{} -> {} at depth {depth}: lifting {} but RLP {}",
                            m.name,
                            n.name,
                            r.lifting.holds(),
                            r.rlp.holds()
                        )));
                    }
                    cases += 1;
                    trivial += usize::from(r.lifting.holds());
                }
            }
        }
    }
    Ok(fail_if(cases > 0 && trivial > 0 && trivial < cases, format!("{cases} cases agree, {trivial} trivial fibrations"), || {
        format!("degenerate corpus: {cases} cases, {trivial} trivial fibrations")
    }))
}

/// Equality of signatures up to the names of bound variables.
fn same_up_to_binders(a: &Signature, b: &Signature) -> bool {
    a.rules == b.rules
        && a.decls.len() == b.decls.len()
        && a.decls.iter().zip(&b.decls).all(|(x, y)| x.name == y.name && x.kind == y.kind && x.params.types().eq(y.params.types()))
}

/// Base theories and test targets for the pushout criterion.
fn pushout_setting() -> Vec<(Signature, Signature)> {
    let tthg = shipped("tthG").expect("shipped");
    let base = parse_signature_onto(tthg.clone(), "o : Ty\n").expect("parses");
    let base2 = parse_signature_onto(base.clone(), "c : El o\n").expect("parses");
    let target = parse_signature_onto(tthg.clone(), "p : Ty\nq : Ty\ne : El p\n").expect("parses");
    let target2 = parse_signature_onto(tthg, "p : Ty\nf : (x : El p) -> Ty\ne : El p\nd : El (f e)\n").expect("parses");
    vec![(base.clone(), target.clone()), (base, target2.clone()), (base2, target2)]
}

fn cofibration_pushouts(cfg: &AcceptanceConfig) -> CResult {
    let core = shipped("tthG").expect("shipped").decls.len();
    let (mut checked, mut maps) = (0, 0);
    for (base, target) in pushout_setting() {
        let fuel = Budget::new(cfg.fuel);
        for n in 0..=1 {
            for top in [CofTop::Ty, CofTop::El] {
                let g = generating_cofibration(&base, n, top, &fuel)?;
                for s in enumerate_substitutions(&base, &Context::new(), &g.source, 2, &fuel)?.items {
                    let att = Attachment { n, top, attaching: s, name: "g".into() };
                    let p = pushout_cofibration(&base, &CofibrationPresentation { attachments: vec![att.clone()] }, &fuel)?;
                    // The generator extension written out by hand.
                    let ty = g.generator_type(&att.attaching.terms);
                    let src = format!("g : {}\n", print_type(&base, &Context::new(), &ty));
                    let direct = parse_signature_onto(base.clone(), &src).map_err(|e| CritError::Other(e.to_string()))?;
                    if !same_up_to_binders(&p, &direct) {
                        return Ok(Check::Fail(format!("pushout differs from the extension `{}`", src.trim())));
                    }
                    let up = check_pushout_property(&base, &att, &target, core, 3, &fuel)?;
                    if !up.complete {
                        return Ok(Check::Inconclusive("interpretation enumeration incomplete".into()));
                    }
                    if !up.bijective {
                        return Ok(Check::Fail(format!(
                            "universal property fails for `{}`: {} maps from the pushout, {} compatible pairs",
                            src.trim(),
                            up.from_pushout,
                            up.compatible_pairs
                        )));
                    }
                    checked += 1;
                    maps += up.from_pushout;
                }
            }
        }
    }
    Ok(fail_if(maps > 0, format!("{checked} pushouts are generator extensions; {maps} maps out of them match compatible pairs"), || {
        "no maps out of any pushout: the universal-property check is vacuous".into()
    }))
}
