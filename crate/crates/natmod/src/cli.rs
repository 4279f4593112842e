//! The `natmod` batch driver: one subcommand per verification task, each
//! producing a deterministic JSON report and an exit status (0 pass,
//! 1 verification failure, 2 malformed input, 3 budget exhausted).

use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand};
use natmod_core::budget::Budget;
use natmod_core::fincat::FiniteCategory;
use natmod_core::homotopy::{is_trivial_fibration, pushout_cofibration, HomotopyError, LiftFailure};
use natmod_core::lf::corpus::SHIPPED;
use natmod_core::lf::{
    check_signature, normalize_infer, parse_context, parse_signature, parse_term, print_context, print_signature, print_term, print_type, Bounds,
    Context, Signature, TypeError,
};
use natmod_core::models::correspondence::unit_at_representables;
use natmod_core::models::{
    check_model, check_morphism, contextual_objects, find_morphisms, heart, initial_model, internal_language, is_democratic, morphism_from_initial,
    ClauseVerdict, ModelData, ModelError, ModelMorphism, Realized,
};
use natmod_core::rfib::{rep_map_classifier, RfibError};
use natmod_core::structures::{structure_criteria, StructureError};
use serde_json::{json, Value};

use crate::acceptance::{run_criterion, AcceptanceConfig};
use crate::corpus::{corpus_generate, CorpusSizes};
use crate::error::NatmodError;
use crate::formats::{read_text, sha256_hex, CategoryJson, ClassifierJson, CofibrationJson, ModelJson, MorphismJson, PshMapJson};
use crate::report::{Budgets, InputRef, Outcome, Report};

/// Command line: global budgets and flags, then a subcommand.
#[derive(Clone, Debug, Parser)]
#[command(name = "natmod", version, about = "Exact checks of natural models over finite bases")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    /// Context depth for enumerations of contexts and lifting problems.
    #[arg(long, global = true, default_value_t = 2)]
    pub depth: usize,
    /// Step budget of the type-checker and of enumerations.
    #[arg(long, global = true, default_value_t = 200_000_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub fuel: u64,
    /// Step budget of isomorphism and morphism searches.
    #[arg(long = "iso-budget", global = true, default_value_t = 200_000_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub iso_budget: u64,
    /// Seed for corpus generation and random terms.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

/// A signature argument is a file path or the name of a shipped signature.
#[derive(Clone, Debug, Subcommand)]
pub enum Command {
    /// Type-check every declaration and rule of a signature.
    CheckSig { signature: String },
    /// Normalize a term, inferring its type.
    Normalize {
        signature: String,
        #[arg(long)]
        term: String,
        /// Context as binder groups, e.g. `(A : Ty) (a : El A)`.
        #[arg(long, default_value = "")]
        context: String,
    },
    /// Compute the representable map classifier of a category.
    Classifier { category: PathBuf },
    /// Decide the type structures on the generic representable map.
    Structures { category: PathBuf },
    /// Check that a model satisfies every clause of its signature.
    CheckModel { signature: String, model: PathBuf },
    /// Compute the heart of a model and its inclusion.
    Heart { signature: String, model: PathBuf },
    /// Global elements of every context within the depth bound.
    Il {
        signature: String,
        model: PathBuf,
        #[arg(long, default_value_t = 3)]
        size: usize,
    },
    /// Enumerate the initial model; with `--model`, check that it has
    /// exactly one morphism into that model.
    InitialModel {
        signature: String,
        #[arg(long, default_value_t = 4)]
        size: usize,
        #[arg(long)]
        model: Option<PathBuf>,
    },
    /// Compare the internal language of syntactic models with hom-sets.
    Correspondence {
        signature: String,
        #[arg(long, default_value_t = 3)]
        size: usize,
    },
    /// Decide whether morphisms are trivial fibrations, by type and term
    /// lifting and by the right lifting property; without `--morphism`
    /// every morphism between the models is checked.
    Lifting {
        signature: String,
        source: PathBuf,
        target: PathBuf,
        #[arg(long)]
        morphism: Option<PathBuf>,
    },
    /// Attach generating cofibrations to a signature.
    Pushout { signature: String, cofibration: PathBuf },
    /// Run the ten acceptance criteria.
    Suite {
        #[arg(long, default_value_t = 1000)]
        terms: usize,
    },
    /// Generate the test corpus into a directory.
    Corpus { dir: PathBuf },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::CheckSig { .. } => "check-sig",
            Command::Normalize { .. } => "normalize",
            Command::Classifier { .. } => "classifier",
            Command::Structures { .. } => "structures",
            Command::CheckModel { .. } => "check-model",
            Command::Heart { .. } => "heart",
            Command::Il { .. } => "il",
            Command::InitialModel { .. } => "initial-model",
            Command::Correspondence { .. } => "correspondence",
            Command::Lifting { .. } => "lifting",
            Command::Pushout { .. } => "pushout",
            Command::Suite { .. } => "suite",
            Command::Corpus { .. } => "corpus",
        }
    }
}

/// Why a subcommand stopped early.
#[derive(Debug)]
enum Stop {
    Malformed(String),
    Budget(String),
}

impl From<NatmodError> for Stop {
    fn from(e: NatmodError) -> Self {
        match e {
            NatmodError::Budget(m) => Stop::Budget(m),
            e => Stop::Malformed(e.to_string()),
        }
    }
}

impl From<TypeError> for Stop {
    fn from(e: TypeError) -> Self {
        match e {
            TypeError::OutOfFuel => Stop::Budget(e.to_string()),
            e => Stop::Malformed(e.to_string()),
        }
    }
}

impl From<RfibError> for Stop {
    fn from(e: RfibError) -> Self {
        match e {
            RfibError::OutOfBudget => Stop::Budget(e.to_string()),
            e => Stop::Malformed(e.to_string()),
        }
    }
}

impl From<ModelError> for Stop {
    fn from(e: ModelError) -> Self {
        match e {
            ModelError::OutOfBudget => Stop::Budget(e.to_string()),
            ModelError::Type(t) => t.into(),
            ModelError::Rfib(r) => r.into(),
            e => Stop::Malformed(e.to_string()),
        }
    }
}

impl From<StructureError> for Stop {
    fn from(e: StructureError) -> Self {
        match e {
            StructureError::OutOfBudget => Stop::Budget(e.to_string()),
            StructureError::Rfib(r) => r.into(),
            e => Stop::Malformed(e.to_string()),
        }
    }
}

impl From<HomotopyError> for Stop {
    fn from(e: HomotopyError) -> Self {
        match e {
            HomotopyError::OutOfBudget => Stop::Budget(e.to_string()),
            HomotopyError::Model(m) => m.into(),
            HomotopyError::Type(t) => t.into(),
            HomotopyError::Rfib(r) => r.into(),
            e => Stop::Malformed(e.to_string()),
        }
    }
}

type Run = Result<(Outcome, Value), Stop>;

/// Loads inputs, recording each one's name and content hash.
struct Inputs {
    refs: Vec<InputRef>,
}

impl Inputs {
    fn record(&mut self, path: &Path, bytes: &[u8]) {
        let name = path.file_name().map_or_else(|| path.display().to_string(), |n| n.to_string_lossy().into_owned());
        self.refs.push(InputRef { name, sha256: sha256_hex(bytes) });
    }

    fn text(&mut self, path: &Path) -> Result<String, Stop> {
        let text = read_text(path)?;
        self.record(path, text.as_bytes());
        Ok(text)
    }

    fn json<T: serde::de::DeserializeOwned>(&mut self, path: &Path) -> Result<T, Stop> {
        let text = self.text(path)?;
        serde_json::from_str(&text).map_err(|source| NatmodError::Json { path: path.display().to_string(), source }.into())
    }

    /// A signature file, or a shipped signature by name.
    fn signature(&mut self, arg: &str) -> Result<Signature, Stop> {
        let path = Path::new(arg);
        if path.is_file() {
            let text = self.text(path)?;
            return parse_signature(&text).map_err(|e| Stop::Malformed(format!("`{arg}`: {e}")));
        }
        let (name, src) = SHIPPED.iter().find(|(n, _)| *n == arg).ok_or_else(|| {
            let names: Vec<&str> = SHIPPED.iter().map(|(n, _)| *n).collect();
            Stop::Malformed(format!("`{arg}` is neither a file nor a shipped signature ({})", names.join(", ")))
        })?;
        self.refs.push(InputRef { name: format!("shipped:{name}"), sha256: sha256_hex(src.as_bytes()) });
        Ok(parse_signature(src).expect("shipped signature parses"))
    }

    fn category(&mut self, path: &Path) -> Result<Arc<FiniteCategory>, Stop> {
        let data: CategoryJson = self.json(path)?;
        Ok(Arc::new(data.to_category()?))
    }

    /// A model file; it must satisfy every clause of the signature.
    fn model(&mut self, sig: &Signature, path: &Path, fuel: &Budget) -> Result<ModelData, Stop> {
        let data: ModelJson = self.json(path)?;
        let m = data.to_model(sig)?;
        if let Some((clause, msg)) = check_model(sig, &m, fuel).failure() {
            return Err(Stop::Malformed(format!("`{}` is not a model: {clause}: {msg}", path.display())));
        }
        Ok(m)
    }
}

/// Runs the configured subcommand and assembles its report.
pub fn run(cfg: &RunConfig) -> Report {
    let mut inputs = Inputs { refs: Vec::new() };
    let res = dispatch(cfg, &mut inputs);
    let (outcome, error, result) = match res {
        Ok((o, v)) => (o, None, v),
        Err(Stop::Malformed(m)) => (Outcome::Malformed, Some(m), Value::Null),
        Err(Stop::Budget(m)) => (Outcome::Inconclusive, Some(m), Value::Null),
    };
    Report {
        tool: "natmod",
        subcommand: cfg.command.name().to_string(),
        seed: cfg.seed,
        budgets: Budgets { depth: cfg.depth, fuel: cfg.fuel, iso_budget: cfg.iso_budget },
        inputs: inputs.refs,
        outcome,
        error,
        result,
    }
}

/// Writes the report (to `--out` or standard output) and returns the exit
/// status.
pub fn run_and_emit(cfg: &RunConfig) -> i32 {
    let report = run(cfg);
    let text = report.to_json();
    match &cfg.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                eprintln!("natmod: cannot write `{}`: {e}", path.display());
                return Outcome::Malformed.exit_code();
            }
        }
        None => print!("{text}"),
    }
    if let Some(e) = &report.error {
        eprintln!("natmod: {e}");
    }
    report.outcome.exit_code()
}

fn dispatch(cfg: &RunConfig, inputs: &mut Inputs) -> Run {
    let fuel = Budget::new(cfg.fuel);
    let iso = Budget::new(cfg.iso_budget);
    match &cfg.command {
        Command::CheckSig { signature } => check_sig(inputs.signature(signature)?, &fuel),
        Command::Normalize { signature, term, context } => {
            let sig = inputs.signature(signature)?;
            normalize(&sig, context, term, &fuel)
        }
        Command::Classifier { category } => classifier(&inputs.category(category)?),
        Command::Structures { category } => structures(&inputs.category(category)?, &iso),
        Command::CheckModel { signature, model } => {
            let sig = inputs.signature(signature)?;
            let data: ModelJson = inputs.json(model)?;
            let m = data.to_model(&sig)?;
            let report = check_model(&sig, &m, &fuel);
            let clauses: Vec<Value> = report
                .clauses
                .iter()
                .map(|(c, v)| match v {
                    ClauseVerdict::Holds => json!({ "clause": c.name(), "verdict": "holds" }),
                    ClauseVerdict::Fails(m) => json!({ "clause": c.name(), "verdict": "fails", "counterexample": m }),
                    ClauseVerdict::NotChecked => json!({ "clause": c.name(), "verdict": "not-checked" }),
                })
                .collect();
            let out_of_fuel = report.failure().is_some_and(|(_, m)| m.contains(&TypeError::OutOfFuel.to_string()));
            let outcome = if out_of_fuel { Outcome::Inconclusive } else { Outcome::from_bool(report.is_model()) };
            Ok((outcome, json!({ "is_model": report.is_model(), "clauses": clauses })))
        }
        Command::Heart { signature, model } => {
            let sig = inputs.signature(signature)?;
            let m = inputs.model(&sig, model, &fuel)?;
            let (h, inc) = heart(&sig, &m)?;
            let contextual: Vec<&str> = contextual_objects(&sig, &m)?.into_iter().map(|o| m.base.object_name(o)).collect();
            Ok((
                Outcome::Pass,
                json!({
                    "democratic": is_democratic(&sig, &m)?,
                    "contextual_objects": contextual,
                    "heart": ModelJson::from_model(&sig, &h),
                    "inclusion": MorphismJson::from_morphism(&sig, &h.base, &m.base, &inc),
                }),
            ))
        }
        Command::Il { signature, model, size } => {
            let sig = inputs.signature(signature)?;
            let m = inputs.model(&sig, model, &fuel)?;
            let il = internal_language(&sig, &m, Bounds::new(cfg.depth, *size), &fuel)?;
            let contexts: Vec<Value> = il
                .contexts
                .iter()
                .zip(&il.elements)
                .map(|(c, els)| json!({ "context": print_context(&sig, c), "global_elements": els.len() }))
                .collect();
            Ok((complete_outcome(il.complete), json!({ "complete": il.complete, "contexts": contexts })))
        }
        Command::InitialModel { signature, size, model } => {
            let sig = inputs.signature(signature)?;
            let target = model.as_ref().map(|p| inputs.model(&sig, p, &fuel)).transpose()?;
            initial(&sig, Bounds::new(cfg.depth, *size), target.as_ref(), &fuel, &iso)
        }
        Command::Correspondence { signature, size } => {
            let sig = inputs.signature(signature)?;
            let r = unit_at_representables(&sig, Bounds::new(cfg.depth, *size), &fuel)?;
            let rows: Vec<Value> = r
                .rows
                .iter()
                .map(|row| {
                    json!({
                        "a": print_context(&sig, &row.a),
                        "b": print_context(&sig, &row.b),
                        "il": row.il,
                        "hom": row.hom,
                        "same_elements": row.same_elements,
                        "action_matches": row.action_matches,
                    })
                })
                .collect();
            let outcome = if r.holds() { complete_outcome(r.complete) } else { Outcome::Fail };
            Ok((outcome, json!({ "complete": r.complete, "democratic": r.democratic, "holds": r.holds(), "rows": rows })))
        }
        Command::Lifting { signature, source, target, morphism } => {
            let sig = inputs.signature(signature)?;
            let m = inputs.model(&sig, source, &fuel)?;
            let n = inputs.model(&sig, target, &fuel)?;
            let maps = match morphism {
                Some(p) => {
                    let data: MorphismJson = inputs.json(p)?;
                    let f = data.to_morphism(&sig, &m.base, &n.base)?;
                    check_morphism(&sig, &m, &n, &f)?;
                    vec![f]
                }
                None => find_morphisms(&sig, &m, &n, usize::MAX, &iso)?,
            };
            lifting(&sig, &m, &n, &maps, cfg.depth, &iso)
        }
        Command::Pushout { signature, cofibration } => {
            let sig = inputs.signature(signature)?;
            let data: CofibrationJson = inputs.json(cofibration)?;
            let cof = data.to_presentation(&sig, &fuel)?;
            let p = pushout_cofibration(&sig, &cof, &fuel)?;
            let valid = check_signature(&p, &fuel).is_valid();
            let added: Vec<&str> = p.decls[sig.decls.len()..].iter().map(|d| d.name.as_str()).collect();
            Ok((Outcome::from_bool(valid), json!({ "valid": valid, "generators": added, "signature": print_signature(&p) })))
        }
        Command::Suite { terms } => {
            let acfg = AcceptanceConfig { seed: cfg.seed, depth: cfg.depth, fuel: cfg.fuel, terms: *terms };
            let mut outcome = Outcome::Pass;
            let mut criteria = Vec::new();
            for k in 1..=10 {
                let r = run_criterion(k, &acfg);
                // Timings go to standard error so reports stay reproducible.
                eprintln!("{}", r.line());
                outcome = outcome.and(r.outcome);
                criteria.push(json!({ "number": r.number, "title": r.title, "outcome": r.outcome, "detail": r.detail, "limit_seconds": r.limit_seconds }));
            }
            Ok((outcome, json!({ "criteria": criteria })))
        }
        Command::Corpus { dir } => {
            let corpus = corpus_generate(cfg.seed, CorpusSizes::default())?;
            corpus.write(dir)?;
            let files: Vec<Value> = corpus.files().iter().map(|(name, text)| json!({ "file": name, "sha256": sha256_hex(text.as_bytes()) })).collect();
            Ok((Outcome::Pass, json!({ "categories": corpus.categories.len(), "presheaves": corpus.presheaves.len(), "files": files })))
        }
    }
}

fn complete_outcome(complete: bool) -> Outcome {
    if complete {
        Outcome::Pass
    } else {
        Outcome::Inconclusive
    }
}

fn check_sig(sig: Signature, fuel: &Budget) -> Run {
    let report = check_signature(&sig, fuel);
    let items: Vec<Value> = report
        .items
        .iter()
        .map(|i| {
            let kind = if i.is_rule { "rule" } else { "declaration" };
            match &i.error {
                None => json!({ "name": i.name, "kind": kind, "valid": true }),
                Some(e) => json!({ "name": i.name, "kind": kind, "valid": false, "error": e }),
            }
        })
        .collect();
    let out_of_fuel = report.failures().any(|i| i.error.as_deref() == Some(&*TypeError::OutOfFuel.to_string()));
    let outcome = if out_of_fuel { Outcome::Inconclusive } else { Outcome::from_bool(report.is_valid()) };
    Ok((outcome, json!({ "valid": report.is_valid(), "items": items })))
}

fn normalize(sig: &Signature, context: &str, term: &str, fuel: &Budget) -> Run {
    let ctx = if context.trim().is_empty() { Context::new() } else { parse_context(sig, context).map_err(|e| Stop::Malformed(format!("context: {e}")))? };
    natmod_core::lf::Checker::new(sig, fuel).check_context(&ctx)?;
    let t = parse_term(sig, &ctx, term).map_err(|e| Stop::Malformed(format!("term: {e}")))?;
    let (nf, ty) = normalize_infer(sig, &ctx, &t, fuel)?;
    Ok((
        Outcome::Pass,
        json!({
            "context": print_context(sig, &ctx),
            "term": print_term(sig, &ctx, &t),
            "type": print_type(sig, &ctx, &ty),
            "normal_form": print_term(sig, &ctx, &nf),
            "unchanged": nf == t,
        }),
    ))
}

fn classifier(base: &Arc<FiniteCategory>) -> Run {
    match rep_map_classifier(base) {
        Ok(cl) => Ok((
            Outcome::Pass,
            json!({
                "omega_sizes": cl.omega().sizes(),
                "omega_tilde_sizes": cl.omega_tilde().sizes(),
                "classifier": ClassifierJson::from_classifier(&cl),
            }),
        )),
        // No classifier exists: report the offending comprehension.
        Err(e @ RfibError::Unclassifiable { .. }) => Ok((Outcome::Fail, json!({ "counterexample": e.to_string() }))),
        Err(e) => Err(e.into()),
    }
}

fn structures(base: &Arc<FiniteCategory>, iso: &Budget) -> Run {
    let cl = match rep_map_classifier(base) {
        Ok(cl) => cl,
        Err(e @ RfibError::Unclassifiable { .. }) => return Ok((Outcome::Fail, json!({ "counterexample": e.to_string() }))),
        Err(e) => return Err(e.into()),
    };
    let report = structure_criteria(&cl.generic, iso)?;
    let entries: Vec<Value> = report
        .entries
        .iter()
        .map(|e| {
            let certificate = e.found.as_ref().map(|s| {
                json!({
                    "bottom": PshMapJson::from_map(&s.bottom),
                    "top": PshMapJson::from_map(&s.top),
                    "section": s.section.as_ref().map(PshMapJson::from_map),
                })
            });
            json!({ "kind": e.kind.name(), "closure": e.closure, "found": e.found.is_some(), "agrees": e.agrees(), "structure": certificate })
        })
        .collect();
    let agree = report.entries.iter().all(|e| e.agrees());
    Ok((Outcome::from_bool(agree), json!({ "omega_sizes": cl.omega().sizes(), "entries": entries })))
}

fn initial(sig: &Signature, bounds: Bounds, target: Option<&ModelData>, fuel: &Budget, iso: &Budget) -> Run {
    let frag = initial_model(sig, bounds, fuel)?;
    let objects: Vec<Value> = frag
        .objects
        .iter()
        .enumerate()
        .map(|(k, c)| {
            let elements: Vec<usize> = frag.elements.iter().map(|per_obj| per_obj.get(k).map_or(0, Vec::len)).collect();
            json!({ "context": print_context(sig, c), "elements": elements })
        })
        .collect();
    let homs: usize = frag.homs.values().map(Vec::len).sum();
    let mut result = json!({ "complete": frag.complete, "objects": objects, "substitutions": homs });
    let mut outcome = complete_outcome(frag.complete);
    if let Some(m) = target {
        let r = Realized::from_model(sig, m)?;
        let all = frag.morphisms_into(&r, 2, iso)?;
        let built = morphism_from_initial(&frag, &r)?;
        let unique = all.len() == 1 && all[0] == built;
        result["morphisms_found"] = json!(all.len());
        result["unique"] = json!(unique);
        outcome = outcome.and(Outcome::from_bool(unique));
    }
    Ok((outcome, result))
}

fn lift_failure(m: &ModelData, f: &Option<LiftFailure>) -> Value {
    match f {
        None => Value::Null,
        Some(LiftFailure::Type { obj, ty }) => json!({ "kind": "type", "object": m.base.object_name(*obj), "type": ty }),
        Some(LiftFailure::Term { obj, ty, term }) => json!({ "kind": "term", "object": m.base.object_name(*obj), "type": ty, "term": term }),
    }
}

fn lifting(sig: &Signature, m: &ModelData, n: &ModelData, maps: &[ModelMorphism], depth: usize, iso: &Budget) -> Run {
    let rm = Realized::from_model(sig, m)?;
    let rn = Realized::from_model(sig, n)?;
    let mut outcome = Outcome::Pass;
    let mut rows = Vec::new();
    for f in maps {
        let r = is_trivial_fibration(&rm, &rn, f, depth, iso)?;
        let trivial = r.lifting.holds() && r.rlp.holds();
        outcome = outcome.and(Outcome::from_bool(trivial));
        rows.push(json!({
            "morphism": MorphismJson::from_morphism(sig, &m.base, &n.base, f),
            "trivial_fibration": trivial,
            "verdicts_agree": r.agree(),
            "type_lifting_failure": lift_failure(m, &r.lifting.type_lifting),
            "term_lifting_failure": lift_failure(m, &r.lifting.term_lifting),
            "lifting_problems": r.rlp.problems,
            "rlp_failure": r.rlp.failure.as_ref().map(|x| json!({ "n": x.n, "top": format!("{:?}", x.top), "upper": x.upper, "lower": x.lower })),
        }));
    }
    Ok((outcome, json!({ "morphisms": rows })))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_parse_globally() {
        let cfg = RunConfig::try_parse_from(["natmod", "check-sig", "itth", "--fuel", "7", "--seed", "3"]).unwrap();
        assert_eq!((cfg.fuel, cfg.seed, cfg.depth), (7, 3, 2));
        assert!(RunConfig::try_parse_from(["natmod", "check-sig", "itth", "--fuel", "0"]).is_err());
    }

    #[test]
    fn unknown_signature_is_malformed() {
        let cfg = RunConfig::try_parse_from(["natmod", "check-sig", "no-such-signature"]).unwrap();
        let r = run(&cfg);
        assert_eq!(r.outcome, Outcome::Malformed);
        assert!(r.error.unwrap().contains("shipped"));
    }
}
