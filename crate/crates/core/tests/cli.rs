use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use ptsym::cli::{classify, main_with_args, ParityMode};
use ptsym::report::{self, Component, ReportBundle};
use ptsym::sweep::{preset_case, run_sweep, Binding, FamilySource, OutputQuantity, SweepSpec};
use ptsym::template::load_template_file;
use ptsym::transform::{discrepancy_report, FamilyId, HamiltonianParams};

fn ptsym(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ptsym"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn fixture(name: &str) -> String {
    format!("{}/fixtures/templates/{name}.ham", env!("CARGO_MANIFEST_DIR"))
}

fn in_process(args: &[&str]) -> (u8, String) {
    let mut buf = Vec::new();
    let code = main_with_args(std::iter::once("ptsym").chain(args.iter().copied()), &mut buf);
    (code, String::from_utf8(buf).unwrap())
}

fn values(pairs: &[(&str, f64)]) -> BTreeMap<String, f64> {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

#[test]
fn case_writes_three_files_matching_library() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = ptsym(&["case", "1", "--out", out]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    for ext in ["csv", "json", "svg"] {
        assert!(dir.path().join(format!("case1.{ext}")).is_file());
    }

    let spec = preset_case(1).unwrap();
    let bundle = ReportBundle::from_sweep(&spec, run_sweep(&spec).unwrap());
    let read = |ext: &str| fs::read_to_string(dir.path().join(format!("case1.{ext}"))).unwrap();
    assert_eq!(read("json"), report::to_json(&bundle).unwrap());
    assert_eq!(read("csv"), report::to_csv(&bundle).unwrap());
    assert_eq!(read("svg"), report::to_svg(&bundle, Component::Both).unwrap());
}

#[test]
fn classify_reports_pt_for_h1_pt() {
    let o = ptsym(&["classify", "--family", "h1_pt", "--set", "a=8,b=2,c=-3", "--parity", "diag(-1,1)"]);
    assert!(o.status.success());
    let json: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let verdicts = json["verdicts"].as_array().unwrap();
    let pt = verdicts.iter().find(|v| v["check"] == "pt").unwrap();
    assert_eq!(pt["holds"], true);
    let anti = verdicts.iter().find(|v| v["check"] == "anti_pt").unwrap();
    assert_eq!(anti["holds"], false);
    let c_check = verdicts.iter().find(|v| v["check"] == "commutes" && v["operator"] == "C").unwrap();
    assert_eq!(c_check["holds"], true);
}

#[test]
fn classify_is_a_thin_adapter() {
    let (code, text) = in_process(&["classify", "--template", &fixture("h_original"), "--set", "a=8,b=2,c=-3"]);
    assert_eq!(code, 0);
    let family = FamilySource::Template(load_template_file(fixture("h_original")).unwrap().into());
    let direct = classify(&family, &values(&[("a", 8.0), ("b", 2.0), ("c", -3.0)]), &ParityMode::Search, 1e-10).unwrap();
    let mut expected = serde_json::to_string_pretty(&direct).unwrap();
    expected.push('\n');
    assert_eq!(text, expected);
}

#[test]
fn parity_search_finds_swap_for_original() {
    let (code, text) = in_process(&["classify", "--family", "h_original", "--set", "a=8,b=2,c=-3"]);
    assert_eq!(code, 0);
    let json: serde_json::Value = serde_json::from_str(&text).unwrap();
    let hits: Vec<(&str, &str)> = json["verdicts"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|v| v["check"] != "commutes")
        .map(|v| (v["check"].as_str().unwrap(), v["operator"].as_str().unwrap()))
        .collect();
    assert_eq!(hits, [("anti_pt", "perm(+e1,+e0)"), ("anti_pt", "perm(-e1,-e0)")]);
}

#[test]
fn ep_prints_analytic_roots() {
    let o = ptsym(&["ep", "--family", "h1_pt", "--set", "a=8", "--alias", "c=b", "--param", "b", "--range", "-10:10"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout(&o), "-8.000000\n8.000000\n");
}

#[test]
fn transform_is_a_thin_adapter() {
    let (code, text) = in_process(&["transform", "--set", "a=8,b=2,c=-3"]);
    assert_eq!(code, 0);
    let direct = discrepancy_report(HamiltonianParams::new(8.0, 2.0, -3.0).unwrap());
    let mut expected = serde_json::to_string_pretty(&direct).unwrap();
    expected.push('\n');
    assert_eq!(text, expected);
    let json: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(json["spectra_equal"], false);
}

#[test]
fn sweep_from_template_matches_library() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let (code, _) = in_process(&[
        "sweep", "--template", &fixture("h1_pt"), "--param", "b", "--range", "-10:10",
        "--steps", "401", "--set", "a=20", "--alias", "c=b", "--quantity", "eig2", "--out", out,
        "--name", "fig4",
    ]);
    assert_eq!(code, 0);

    let mut bindings = BTreeMap::new();
    bindings.insert("a".to_string(), Binding::Const(20.0));
    bindings.insert("c".to_string(), Binding::Alias("b".into()));
    let spec = SweepSpec {
        family: FamilySource::Template(load_template_file(fixture("h1_pt")).unwrap().into()),
        sweep_param: "b".into(),
        range: (-10.0, 10.0),
        steps: 401,
        bindings,
        quantity: OutputQuantity::EigenvalueSquared,
    };
    let bundle = ReportBundle::from_sweep(&spec, run_sweep(&spec).unwrap());
    assert_eq!(
        fs::read_to_string(dir.path().join("fig4.csv")).unwrap(),
        report::to_csv(&bundle).unwrap()
    );
    assert_eq!(
        fs::read_to_string(dir.path().join("fig4.json")).unwrap(),
        report::to_json(&bundle).unwrap()
    );
}

#[test]
fn outputs_are_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [a.path(), b.path()] {
        assert!(ptsym(&["case", "3", "--out", d.to_str().unwrap()]).status.success());
    }
    for ext in ["csv", "json", "svg"] {
        let read = |d: &Path| fs::read(d.join(format!("case3.{ext}"))).unwrap();
        assert_eq!(read(a.path()), read(b.path()), "{ext}");
    }
}

#[test]
fn help_and_version_succeed() {
    assert!(ptsym(&["--help"]).status.success());
    assert!(ptsym(&["--version"]).status.success());
    assert!(ptsym(&["sweep", "--help"]).status.success());
}

#[test]
fn usage_errors_exit_1_with_diagnostic() {
    let bad: &[&[&str]] = &[
        &[],
        &["frobnicate"],
        &["case", "5", "--out", "x"],
        &["case", "1"],
        &["classify", "--family", "h1_pt", "--set", "a=8,b=2,c=-3", "--bogus"],
        &["classify", "--family", "nope", "--set", "a=1"],
        &["classify", "--family", "h1_pt", "--template", "x.ham", "--set", "a=1"],
        &["classify", "--family", "h1_pt", "--set", "a=8,b=2"],
        &["classify", "--family", "h1_pt", "--set", "a=eight,b=2,c=1"],
        &["classify", "--family", "h1_pt", "--set", "a=8,b=2,c=1", "--parity", "diag(2,1)"],
        &["classify", "--family", "h1_pt", "--set", "a=8,b=2,c=1", "--parity", "diag(1,1,1)"],
        &["classify", "--template", "/nonexistent/x.ham", "--set", "a=1"],
        &["ep", "--family", "h1_pt", "--set", "a=8", "--alias", "c=b", "--param", "b", "--range", "10:-10"],
        &["ep", "--family", "h1_pt", "--set", "a=8", "--alias", "c=b", "--param", "b", "--range", "-10:10", "--tol", "0"],
        &["sweep", "--family", "h1_pt", "--param", "z", "--range", "0:1", "--set", "a=1,c=1", "--out", "x"],
        &["sweep", "--family", "h1_pt", "--param", "b", "--range", "0:1", "--set", "a=1", "--out", "x"],
        &["sweep", "--family", "h1_pt", "--param", "b", "--range", "0:1", "--set", "a=1,c=1", "--quantity", "cube", "--out", "x"],
        &["transform", "--set", "a=1,b=2"],
    ];
    for args in bad {
        let o = ptsym(args);
        assert_eq!(o.status.code(), Some(1), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        let err = String::from_utf8_lossy(&o.stderr);
        assert!(err.contains("error"), "{args:?}: {err}");
        assert!(err.contains("Usage"), "{args:?}: {err}");
        assert!(o.stdout.is_empty(), "{args:?}");
    }
}

#[test]
fn computation_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("inv.ham");
    fs::write(&path, "name: inv\nparams: a\ndim: 2\n1 / a | 0\n0 | 1\n").unwrap();
    let o = ptsym(&["classify", "--template", path.to_str().unwrap(), "--set", "a=0"]);
    assert_eq!(o.status.code(), Some(2), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(String::from_utf8_lossy(&o.stderr).contains("division by zero"));

    let o = ptsym(&[
        "sweep", "--template", path.to_str().unwrap(), "--param", "a", "--range", "-1:1",
        "--steps", "3", "--out", dir.path().to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn c_operators_skipped_at_exceptional_point() {
    let (code, text) = in_process(&["classify", "--family", "h1_pt", "--set", "a=8,b=8,c=0"]);
    assert_eq!(code, 0);
    let json: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert!(json["operators"].as_array().unwrap().is_empty());
    assert!(json["notes"].to_string().contains("exceptional point"));
}

#[test]
fn builtin_and_template_families_agree() {
    for id in FamilyId::ALL {
        let set = "a=3,b=5,c=-2";
        let (_, builtin) = in_process(&["classify", "--family", id.as_str(), "--set", set, "--parity", "diag(1,-1)"]);
        let (_, template) = in_process(&["classify", "--template", &fixture(id.as_str()), "--set", set, "--parity", "diag(1,-1)"]);
        let strip = |s: &str| {
            let mut v: serde_json::Value = serde_json::from_str(s).unwrap();
            v["metadata"] = serde_json::Value::Null;
            v
        };
        assert_eq!(strip(&builtin), strip(&template), "{}", id.as_str());
    }
}
