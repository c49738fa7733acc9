use std::path::PathBuf;
use std::process::{Command, Output};

fn lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_effects-lab")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn corpus_file(name: &str, src: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("effects-lab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, src).unwrap();
    p
}

#[test]
fn codiscrete_giry_has_one_point() {
    let o = lab(&["sobrify", "--space", "codiscrete2", "--monad", "giry"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("1 point(s)"), "{out}");
    // both points land on the single point of DX
    assert_eq!(out.matches("= d0").count(), 2, "{out}");
}

#[test]
fn idempotence_check_is_appended() {
    let o = lab(&["sobrify", "--space", "fuzzy3", "--monad", "lower", "--check", "idempotence"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("[pass] idempotence/lower/fuzzy3/DX-sober"), "{out}");
    assert!(out.contains("2 point(s)"), "{out}");
}

#[test]
fn m1m2_demo_separates_at_two() {
    let o = lab(&["demo", "m1m2"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    for check in ["m1m2/lower/C1-equal", "m1m2/lower/C2-differ", "m1m2/giry/C1-equal", "m1m2/giry/C2-differ"] {
        assert!(out.contains(&format!("[pass] {check}")), "{check} missing:\n{out}");
    }
    assert!(out.contains("C_2[M2] = {(ff, ff): 1/2, (tt, tt): 1/2}"), "{out}");
}

#[test]
fn json_reports_use_stable_field_names() {
    let o = lab(&["equiv", "skewed", "lopsided", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let r = &v["records"][0];
    assert_eq!(r["check"], "equiv/skewed/lopsided");
    assert_eq!(r["verdict"], "pass");
    assert!(r["witness"].as_str().unwrap().starts_with("observe_3(skewed)"));

    let o = lab(&["equiv", "--monad", "distribution", "--pairs", "50", "--seed", "9", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["records"][0]["seed"], 9);
}

#[test]
fn output_is_byte_identical_across_runs() {
    let args = ["equiv", "--monad", "giry", "--pairs", "100", "--seed", "3"];
    assert_eq!(lab(&args).stdout, lab(&args).stdout);
    assert_eq!(lab(&["demo", "definetti"]).stdout, lab(&["demo", "definetti"]).stdout);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(lab(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(lab(&["sobrify", "--space", "coin", "--monad", "state"]).status.code(), Some(2));
    let o = lab(&["sobrify", "--space", "nowhere", "--monad", "giry"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("nowhere"));
    assert_eq!(lab(&["equiv", "skewed"]).status.code(), Some(2));
}

#[test]
fn corpus_errors_carry_positions() {
    let p = corpus_file("broken.lab", "space bool { kind = set; points = [tt, ff]; }\nspace s { kind = nope; }\n");
    let o = lab(&["--corpus", p.to_str().unwrap(), "classify"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("2:"), "{err}");
}

#[test]
fn reader_outers_agreeing_on_observations_fail_with_exit_one() {
    // only the diagonal entries are observable under the reader monad
    let p = corpus_file(
        "reader.lab",
        "space bool { kind = set; points = [tt, ff]; }\n\
         outer r1 : bool @ reader { ((tt, tt), (ff, ff)) }\n\
         outer r2 : bool @ reader { ((tt, ff), (tt, ff)) }\n",
    );
    let o = lab(&["--corpus", p.to_str().unwrap(), "equiv", "r1", "r2", "--nmax", "3"]);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
    assert!(stdout(&o).contains("[FAIL] equiv/r1/r2"));
}

#[test]
fn programs_are_classified_and_compared() {
    let o = lab(&["classify-prog", "copy_flip"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("copyable=false"));
    let o = lab(&["equiv-prog", "fresh_each", "fresh_once"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("distinguished at n = 2"), "{}", stdout(&o));
}

#[test]
fn shipped_corpus_passes_laws_and_namegen() {
    let o = lab(&["laws"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(!stdout(&o).contains("FAIL"));
    let o = lab(&["namegen", "--stage-bound", "4"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}
