use std::process::Command as Process;

use clap::Parser;
use polargen::linalg::unit_vector;
use polargen::{enumerate, FormKind, FormSpace, Subspace};
use polargen_cli::{run, Cli};
use serde_json::Value;

fn call(args: &[&str]) -> (i32, String) {
    let cli = Cli::try_parse_from(std::iter::once("polargen").chain(args.iter().copied())).unwrap();
    let mut out = Vec::new();
    let code = run(cli, &mut out).unwrap();
    (code, String::from_utf8(out).unwrap())
}

fn read_json(path: &std::path::Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn span_index(kind: FormKind, n: usize, k: usize, units: &[usize]) -> u32 {
    let v = FormSpace::standard(kind, 3, n).unwrap();
    let g = enumerate(&v, k).unwrap();
    let rows: Vec<_> = units.iter().map(|&i| unit_vector(2 * n, i)).collect();
    g.index_of(&Subspace::from_rows(v.field(), 2 * n, &rows).unwrap()).unwrap()
}

#[test]
fn command_definitions_are_consistent() {
    use clap::CommandFactory;
    Cli::command().debug_assert();
}

#[test]
fn reproduce_symplectic_rank_five() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let (code, text) =
        call(&["reproduce", "--form", "sp", "--q", "3", "--n", "2", "--k", "2", "--out", out.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(text.contains("certified-minimal"));
    let r = read_json(&out);
    assert_eq!(r["schema"], 1);
    assert_eq!(r["certificate"]["verdict"], "certified-minimal");
    assert_eq!(r["certificate"]["set_size"], 5);
    assert_eq!(r["embedding_rank"], 5);
}

#[test]
fn reproduce_hermitian_rank_six() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let (code, _) =
        call(&["reproduce", "--form", "her", "--q", "3", "--n", "2", "--k", "2", "--out", out.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(read_json(&out)["certificate"]["lower_bound"], 6);
}

#[test]
fn reproduce_gf4_is_exploratory_with_lower_bound() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let (code, text) =
        call(&["reproduce", "--form", "her", "--q", "2", "--n", "2", "--k", "2", "--out", out.to_str().unwrap()]);
    assert_ne!(code, 0);
    assert!(text.contains("(4^n+2)/3 = 6"));
    let r = read_json(&out);
    assert_eq!(r["certificate"]["eligible"], false);
    assert_eq!(r["certificate"]["gf4_bound"], 6);
    assert_ne!(r["certificate"]["verdict"], "certified-minimal");
}

#[test]
fn reproduce_reports_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for p in [&a, &b] {
        call(&[
            "reproduce",
            "--form",
            "her",
            "--q",
            "3",
            "--n",
            "2",
            "--k",
            "2",
            "--seed",
            "5",
            "--out",
            p.to_str().unwrap(),
        ]);
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn file_pipeline_enumerate_build_certify_embed() {
    let dir = tempfile::tempdir().unwrap();
    let path = |s: &str| dir.path().join(s).to_str().unwrap().to_string();
    let geom = ["--form", "sp", "--q", "3", "--n", "3", "--k", "2"];
    let mut args = vec!["enumerate"];
    args.extend(geom);
    let g = path("g.json");
    args.extend(["--out", &g]);
    assert_eq!(call(&args).0, 0);
    assert_eq!(read_json(dir.path().join("g.json").as_path())["schema"], 1);

    let s = path("s.json");
    let mut args = vec!["genset", "build"];
    args.extend(geom);
    args.extend(["--out", &s]);
    assert_eq!(call(&args).0, 0);

    let rep = path("rep.json");
    let (code, _) = call(&["genset", "certify", "--geometry", &g, "--set", &s, "--report", &rep]);
    assert_eq!(code, 0);
    let r = read_json(dir.path().join("rep.json").as_path());
    assert_eq!(r["schema"], 1);
    assert_eq!(r["verdict"], "certified-minimal");
    assert_eq!(r["set_size"], 14);
    assert!(r["timings"]["certify_seconds"].is_number());

    let e = path("e.json");
    call(&["embed", "--geometry", &g, "--out", &e]);
    let r = read_json(dir.path().join("e.json").as_path());
    assert_eq!(r["schema"], 1);
    assert_eq!(r["rank"], 14);
    assert_eq!(r["vectors"].as_array().unwrap().len(), 3640);
}

#[test]
fn classify_opposite_apartment_points() {
    let x = span_index(FormKind::Symplectic, 3, 2, &[0, 1]).to_string();
    let y = span_index(FormKind::Symplectic, 3, 2, &[3, 4]).to_string();
    let (_, text) = call(&["classify", "--form", "sp", "--q", "3", "--n", "3", "--k", "2", &x, &y]);
    assert_eq!(text.trim(), "3");
}

#[test]
fn parallel_on_special_pair() {
    // ⟨e1,e2⟩ + ⟨e3,f2⟩ is a 4-space with radical ⟨e1,e3⟩
    let p = span_index(FormKind::Symplectic, 3, 2, &[0, 1]).to_string();
    let q = span_index(FormKind::Symplectic, 3, 2, &[2, 4]).to_string();
    let (_, text) = call(&["parallel", "--form", "sp", "--q", "3", "--n", "3", "--k", "2", &p, &q]);
    let r: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(r["relation"], "2s");
    assert_eq!(r["cross"], "2q");
    assert_eq!(r["l"]["points"].as_array().unwrap().len(), 4);
}

#[test]
fn closure_of_an_apartment() {
    let pts: Vec<String> = (0..4).map(|i| span_index(FormKind::Symplectic, 2, 1, &[i]).to_string()).collect();
    let mut args = vec!["closure", "--form", "sp", "--q", "3", "--n", "2", "--k", "1"];
    args.extend(pts.iter().map(|s| s.as_str()));
    let (_, text) = call(&args);
    let r: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(r["size"], 40);
    assert_eq!(r["full"], true);
}

#[test]
fn irrep_check_reaches_full_dimension() {
    let (code, text) = call(&["irrep-check", "--form", "her", "--q", "3", "--n", "2", "--k", "2", "--seeds", "5"]);
    assert_eq!(code, 0);
    let r: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(r["closure_dimensions"], serde_json::json!([6, 6, 6, 6, 6]));
}

#[test]
fn invalid_configurations_are_rejected() {
    let run_err = |args: &[&str]| {
        let cli = Cli::try_parse_from(std::iter::once("polargen").chain(args.iter().copied())).unwrap();
        run(cli, &mut Vec::new()).is_err()
    };
    assert!(run_err(&["reproduce", "--form", "sp", "--q", "3", "--n", "2", "--k", "3"]));
    assert!(run_err(&["reproduce", "--form", "sp", "--q", "6", "--n", "2", "--k", "1"]));
    assert!(run_err(&["irrep-check", "--form", "sp", "--q", "3", "--n", "2", "--k", "1"]));
    assert!(run_err(&["classify", "--form", "sp", "--q", "3", "--n", "2", "--k", "2", "0", "999"]));
    assert!(run_err(&["classify", "--form", "sp", "--q", "3", "0", "1"]));
    assert!(Cli::try_parse_from(["polargen", "reproduce", "--form", "orthogonal", "--q", "3", "--n", "2", "--k", "1"])
        .is_err());
}

#[test]
fn binary_exit_codes_follow_the_verdict() {
    let bin = env!("CARGO_BIN_EXE_polargen");
    let status = |args: &[&str]| Process::new(bin).args(args).env("POLARGEN_THREADS", "2").output().unwrap();
    let ok = status(&["reproduce", "--form", "sp", "--q", "3", "--n", "2", "--k", "2"]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&ok.stdout).contains("Sp_4(3)"));
    let gf4 = status(&["reproduce", "--form", "her", "--q", "2", "--n", "2", "--k", "2"]);
    assert_eq!(gf4.status.code(), Some(1));
    let bad = status(&["reproduce", "--form", "sp", "--q", "3", "--n", "2", "--k", "5"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("k must satisfy"));
}
