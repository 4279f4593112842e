//! The `natmod` binary: golden reports, exit statuses and determinism.

use std::path::Path;
use std::process::Command;

fn natmod(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_natmod"))
        .args(args)
        .current_dir(env!("CARGO_MANIFEST_DIR"))
        .output()
        .expect("natmod runs");
    (out.status.code().expect("exit status"), String::from_utf8(out.stdout).expect("utf-8 report"))
}

fn report(text: &str) -> serde_json::Value {
    serde_json::from_str(text).expect("report is JSON")
}

fn golden(name: &str) -> String {
    std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)).expect("golden file")
}

#[test]
fn classifier_on_delta1_matches_golden() {
    let (code, out) = natmod(&["classifier", "data/categories/delta1.json"]);
    assert_eq!(code, 0);
    assert_eq!(report(&out)["result"]["omega_sizes"], serde_json::json!([1, 2]));
    assert_eq!(out, golden("classifier-delta1.json"));
}

#[test]
fn check_sig_on_shipped_itth_matches_golden() {
    let (code, out) = natmod(&["check-sig", "itth"]);
    assert_eq!(code, 0);
    assert_eq!(report(&out)["result"]["valid"], true);
    assert_eq!(out, golden("check-sig-itth.json"));
}

#[test]
fn normalize_on_normal_form_matches_golden() {
    let (code, out) = natmod(&["normalize", "itth", "--term", "pair Unit (\\x. Unit) tt tt"]);
    assert_eq!(code, 0);
    let r = report(&out);
    assert_eq!(r["result"]["unchanged"], true);
    assert_eq!(r["result"]["normal_form"], r["result"]["term"]);
    assert_eq!(out, golden("normalize-normal-form.json"));
}

#[test]
fn signature_files_and_shipped_names_agree() {
    let (code, out) = natmod(&["check-sig", "../core/signatures/itth.sig"]);
    assert_eq!(code, 0);
    let (from_file, shipped) = (report(&out), report(&golden("check-sig-itth.json")));
    assert_eq!(from_file["result"], shipped["result"]);
    assert_eq!(from_file["inputs"][0]["name"], "itth.sig");
}

#[test]
fn normalize_reduces_redexes() {
    let (code, out) = natmod(&["normalize", "itth", "--context", "(A : Ty) (a : El A)", "--term", "pr1 A (\\x. A) (pair A (\\x. A) a a)"]);
    assert_eq!(code, 0);
    let r = report(&out);
    assert_eq!(r["result"]["normal_form"], "a");
    assert_eq!(r["result"]["unchanged"], false);
}

#[test]
fn malformed_inputs_exit_2() {
    for args in [
        &["normalize", "itth", "--term", "undefined_name"][..],
        &["check-sig", "no-such-signature"],
        &["classifier", "no/such/file.json"],
        &["check-model", "itth", "data/categories/delta1.json"],
    ] {
        let (code, out) = natmod(args);
        assert_eq!(code, 2, "{args:?}");
        let r = report(&out);
        assert_eq!(r["outcome"], "malformed");
        assert!(r["error"].is_string());
    }
}

#[test]
fn invalid_signature_fails_with_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.sig");
    // A rule that does not preserve types parses but is rejected.
    std::fs::write(&path, "Ty : sort\nEl : (A : Ty) -> rep-sort\nU : Ty\nrule bad (x : El U) : x ~> U\n").unwrap();
    let (code, out) = natmod(&["check-sig", path.to_str().unwrap()]);
    assert_eq!(code, 1);
    let r = report(&out);
    assert_eq!(r["outcome"], "fail");
    let items = r["result"]["items"].as_array().unwrap();
    assert!(items[..3].iter().all(|i| i["valid"] == true));
    assert_eq!(items[3]["name"], "bad");
    assert!(items[3]["error"].as_str().unwrap().contains("type-preserving"));

    // A sort used as a term is a syntax error.
    std::fs::write(&path, "Ty : sort\nEl : (A : Ty) -> rep-sort\nc : El Ty\n").unwrap();
    assert_eq!(natmod(&["check-sig", path.to_str().unwrap()]).0, 2);
}

#[test]
fn exhausted_fuel_exits_3() {
    let (code, out) = natmod(&["correspondence", "itth", "--fuel", "5"]);
    assert_eq!(code, 3);
    assert_eq!(report(&out)["outcome"], "inconclusive");
}

#[test]
fn model_subcommands() {
    let m = "data/models/itth-omega-delta1.json";
    let (code, out) = natmod(&["check-model", "itth", m]);
    assert_eq!(code, 0);
    assert_eq!(report(&out)["result"]["is_model"], true);

    let (code, out) = natmod(&["heart", "itth", "data/models/itth-omega-cospan.json"]);
    assert_eq!(code, 0);
    let r = report(&out);
    assert_eq!(r["result"]["democratic"], false);
    assert_eq!(r["result"]["contextual_objects"], serde_json::json!(["t"]));

    let (code, out) = natmod(&["il", "itth", m, "--depth", "1"]);
    assert_eq!(code, 0);
    let r = report(&out);
    assert_eq!(r["result"]["contexts"][0]["global_elements"], 1);
    // Omega over the interval has two global types.
    assert_eq!(r["result"]["contexts"][1]["context"], "(x : Ty)");
    assert_eq!(r["result"]["contexts"][1]["global_elements"], 2);

    let (code, out) = natmod(&["initial-model", "itth", "--model", m]);
    assert_eq!(code, 0);
    assert_eq!(report(&out)["result"]["unique"], true);

    let (code, out) = natmod(&["correspondence", "tthG"]);
    assert_eq!(code, 0);
    assert_eq!(report(&out)["result"]["holds"], true);
}

#[test]
fn lifting_reports_each_morphism() {
    let (code, out) = natmod(&["lifting", "itth", "data/models/itth-D-omega-delta1.json", "data/models/itth-omega-delta1.json"]);
    // One fold is a trivial fibration, the constant map is not.
    assert_eq!(code, 1);
    let r = report(&out);
    let rows = r["result"]["morphisms"].as_array().unwrap();
    assert_eq!(rows.len(), 2);
    assert!(rows.iter().all(|x| x["verdicts_agree"] == true));
    assert_eq!(rows.iter().filter(|x| x["trivial_fibration"] == true).count(), 1);
    let failing = rows.iter().find(|x| x["trivial_fibration"] == false).unwrap();
    assert!(failing["type_lifting_failure"].is_object() && failing["rlp_failure"].is_object());
}

#[test]
fn pushout_and_structures() {
    let (code, out) = natmod(&["pushout", "tthG", "data/cofibrations/type-and-element.json"]);
    assert_eq!(code, 0);
    let r = report(&out);
    assert_eq!(r["result"]["generators"], serde_json::json!(["A", "a", "B"]));
    assert_eq!(r["result"]["valid"], true);

    let (code, out) = natmod(&["structures", "data/categories/delta1.json"]);
    assert_eq!(code, 0);
    let r = report(&out);
    for e in r["result"]["entries"].as_array().unwrap() {
        assert_eq!(e["agrees"], true);
        assert_eq!(e["found"], e["structure"].is_object());
    }
}

#[test]
fn reports_are_byte_identical() {
    let args = ["structures", "data/categories/cospan.json"];
    assert_eq!(natmod(&args), natmod(&args));
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let (code, stdout) = natmod(&["check-sig", "itth", "--out", out.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(stdout.is_empty());
    assert_eq!(std::fs::read_to_string(out).unwrap(), golden("check-sig-itth.json"));
}

#[test]
fn corpus_is_reproducible_and_includes_pinned_categories() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let (c1, r1) = natmod(&["corpus", a.path().to_str().unwrap(), "--seed", "0"]);
    let (c2, r2) = natmod(&["corpus", b.path().to_str().unwrap(), "--seed", "0"]);
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(r1, r2);
    for name in ["delta1", "chain2"] {
        let f = format!("categories/{name}.json");
        assert_eq!(std::fs::read(a.path().join(&f)).unwrap(), std::fs::read(b.path().join(&f)).unwrap());
    }
    // The shipped category files are the pinned corpus entries.
    assert_eq!(
        std::fs::read_to_string(a.path().join("categories/delta1.json")).unwrap(),
        std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("data/categories/delta1.json")).unwrap()
    );
}
