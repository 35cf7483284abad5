use std::path::PathBuf;
use std::process::Command;

use ccspt::cli::run;
use serde_json::Value;

fn ccspt(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(std::iter::once("ccspt").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut a = args.to_vec();
    a.extend(["--format", "json"]);
    let (code, out, _) = ccspt(&a);
    (code, serde_json::from_str(out.trim()).unwrap_or_else(|e| panic!("{e}: {out}")))
}

fn spec_file(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "examples", "specs", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn scratch(name: &str, text: &str) -> String {
    let dir = std::env::temp_dir().join(format!("ccspt-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

const P: &str = "a.(b + c.d) + a.(f + c.e)";
const Q: &str = "a.(b + c.e) + a.(f + c.d)";

#[test]
fn check_reports_guardedness() {
    let f = scratch("busy.ccsp", "X = a.X;\n");
    let (code, out, _) = ccspt(&["check", &f]);
    assert_eq!(code, 0);
    assert!(out.contains("guarded: yes") && out.contains("time-guarded: no"), "{out}");

    let f = scratch("clock.ccsp", "X = t.a.X;\n");
    let (_, out, _) = ccspt(&["check", &f]);
    assert!(out.contains("guarded: yes") && out.contains("time-guarded: yes"), "{out}");

    let (code, _, _) = ccspt(&["check", &spec_file("unguarded.ccsp")]);
    assert_eq!(code, 1);
    let f = scratch("broken.ccsp", "X = a.(;\n");
    assert_eq!(ccspt(&["check", &f]).0, 2);
}

#[test]
fn lts_export_and_budget() {
    let (code, out, _) = ccspt(&["lts", "a.b.0"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("des (0,2,3)"), "{out}");
    let (_, v) = json(&["lts", "t.a |[]| t.b"]);
    assert_eq!(v["states"], 9);
    assert_eq!(v["complete"], true);

    let out_file = scratch("partial.aut", "");
    let (code, out, _) = ccspt(&["lts", "<X | X = a.(X |[]| X)>", "--max-states", "5", "--out", &out_file]);
    assert_eq!(code, 3);
    assert!(out.contains("complete: false"), "{out}");
    assert!(std::fs::read_to_string(&out_file).unwrap().starts_with("des (0,"));

    let (code, out, _) = ccspt(&["lts", "a.b + t.c", "--export", "dot"]);
    assert_eq!(code, 0);
    assert!(out.contains("digraph"));
}

#[test]
fn equiv_relations() {
    let (code, out, _) = ccspt(&["equiv", P, Q, "--relation", "trace"]);
    assert_eq!((code, out.trim()), (0, "equal up to depth 5"));
    let (code, out, _) = ccspt(&["equiv", P, Q]);
    assert_eq!(code, 1);
    assert!(out.starts_with("inequal, witness: a {b} c d top"), "{out}");
    let (code, out, _) = ccspt(&["equiv", "t.b", "t.t.b", "--relation", "rft", "--alphabet", "a,b"]);
    assert_eq!(code, 1);
    assert!(out.starts_with("inequal, witness: t "), "{out}");
    assert_eq!(ccspt(&["equiv", "a |[]| t.b", "a.t.b + t.(a.b + b.a)", "--relation", "bisim"]).0, 0);
    assert_eq!(ccspt(&["equiv", "b", "<X | X = b + tau.X>", "--relation", "rft-pre", "--exact"]).0, 0);
    assert_eq!(ccspt(&["equiv", "a", "a", "--alphabet", "a,b,c,d,e,f,g", "--exact"]).0, 3);
}

#[test]
fn printed_witnesses_are_members() {
    for (l, r, rel) in
        [(P, Q, "ft"), ("t.b", "t.t.b", "rft"), ("a + tau.b", "a + b", "ft"), ("a.(b + c)", "a.b + a.c", "ft")]
    {
        let (code, v) = json(&["equiv", l, r, "--relation", rel]);
        assert_eq!(code, 1);
        let w = v["witness"]["element"].as_str().unwrap();
        let (holder, other) = if v["witness"]["side"] == "left" { (l, r) } else { (r, l) };
        let mut args = vec!["fft", holder, "--member", w];
        if rel == "rft" {
            args.push("--rooted");
        }
        assert_eq!(ccspt(&args).0, 0, "{w} in {holder}");
        args[1] = other;
        assert_eq!(ccspt(&args).0, 1, "{w} not in {other}");
    }
}

#[test]
fn text_and_json_agree() {
    for args in [
        vec!["equiv", P, Q],
        vec!["equiv", P, Q, "--relation", "trace"],
        vec!["safety", "t.b.0", "--bad", "b"],
        vec!["safety", "tau + t.b", "--bad", "b"],
        vec!["fft", "a + tau.b", "--member", "{a} top"],
    ] {
        let (c1, text, _) = ccspt(&args);
        let (c2, v) = json(&args);
        assert_eq!(c1, c2, "{args:?}");
        if let Some(h) = v.get("holds") {
            assert_eq!(h.as_bool().unwrap(), c1 == 0);
            assert_eq!(v["witness"].is_null(), !text.contains("witness"));
        }
    }
}

#[test]
fn safety_and_tests() {
    let (code, out, _) = ccspt(&["safety", "t.b.0", "--bad", "b"]);
    assert_eq!((code, out.trim()), (1, "violated, witness: {} b top"));
    assert_eq!(ccspt(&["safety", "a.c + t.(a.b + tau)", "--bad", "b"]).0, 0);
    assert_eq!(ccspt(&["safety", "a", "--test", "a.w", "--omega", "w"]).0, 0);
    assert_eq!(ccspt(&["safety", "b", "--test", "a.w", "--omega", "w"]).0, 1);
    assert_eq!(ccspt(&["safety", "w", "--test", "a.w", "--omega", "w"]).0, 2);
}

#[test]
fn fft_member_and_listing() {
    let (code, out, _) = ccspt(&["fft", "a + tau.b", "--member", "{a} top"]);
    assert_eq!((code, out.trim()), (0, "true"));
    assert_eq!(ccspt(&["fft", "tau.b", "--member", "post-st", "--rooted"]).0, 0);
    assert_eq!(ccspt(&["fft", "b", "--member", "post-st", "--rooted"]).0, 1);
    let (_, v) = json(&["fft", "t.b", "--depth", "2", "--alphabet", "a,b"]);
    assert_eq!(v["elements"].as_array().unwrap().len(), 25);
}

#[test]
fn distinguish_with_and_without_context() {
    let ctx = "hide {a,b,c} in (a.(b + t.c) |[a,b,c,f]| _)";
    let (code, out, _) = ccspt(&["distinguish", P, Q, "--bad", "d", "--context", ctx]);
    assert_eq!(code, 1);
    assert!(out.contains("left: safety(d) holds") && out.contains("right: safety(d) violated"), "{out}");
    let (code, v) = json(&["distinguish", "a.b + a", "a.b", "--bad", "z"]);
    assert_eq!(code, 1);
    assert_eq!(v["outcome"], "distinguished");
    assert_ne!(v["verdict_left"]["holds"], v["verdict_right"]["holds"]);
    let (code, v) = json(&["distinguish", "a.b", "a.b + a.b", "--depth", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["outcome"], "equivalent_up_to");
}

#[test]
fn laws_are_seeded_and_summarised() {
    let (code, out, _) = ccspt(&["laws", "--samples", "3", "--seed", "11"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.starts_with("seed 11"));
    assert!(!out.contains("UNEXPECTED"));
    let (_, a) = json(&["laws", "--samples", "2", "--seed", "5", "--law", "law1,choice-comm"]);
    let (_, b) = json(&["laws", "--samples", "2", "--seed", "5", "--law", "law1,choice-comm"]);
    assert_eq!(a, b);
    assert_eq!(a["seed"], 5);
    assert_eq!(a["reports"].as_array().unwrap().len(), 4);
    assert_eq!(ccspt(&["laws", "--law", "no-such-law"]).0, 2);
}

#[test]
fn spec_names_resolve() {
    let f = spec_file("vending.ccsp");
    let (code, out, _) = ccspt(&["--spec", &f, "fft", "Idle", "--member", "coin wake top"]);
    assert_eq!((code, out.trim()), (1, "false"));
    assert_eq!(ccspt(&["--spec", &f, "fft", "Idle", "--member", "{coffee} wake top"]).0, 0);
    assert_eq!(ccspt(&["--spec", &f, "safety", "Idle", "--bad", "wake"]).0, 1);
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_ccspt");
    let code = |args: &[&str]| Command::new(bin).args(args).output().unwrap().status.code().unwrap();
    assert_eq!(code(&["equiv", "a", "a"]), 0);
    assert_eq!(code(&["equiv", "a", "b"]), 1);
    assert_eq!(code(&["equiv", "a.(", "b"]), 2);
    assert_eq!(code(&["frobnicate"]), 2);
    assert_eq!(code(&["--depth", "0", "equiv", "a", "a"]), 2);
    assert_eq!(code(&["lts", "<X | X = a.(X |[]| X)>", "--max-states", "4"]), 3);
    assert_eq!(code(&["--help"]), 0);
}
