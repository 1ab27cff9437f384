use std::process::Command;

use gl2ext_cli::{main_with_args, run, CliError, Report, RunConfig, REPORT_SCHEMA};
use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_gl2ext"))
}

fn args(s: &[&str]) -> Vec<String> {
    std::iter::once("gl2ext").chain(s.iter().copied()).map(String::from).collect()
}

const RHO_F1: &str = r#"{"p":11,"f":1,"irreducible":false,"r":[4],"gamma_nonzero":[false]}"#;

#[test]
fn rectangle_dot_has_six_nodes() {
    let (out, code) = main_with_args(args(&["graph", "rect", "--omega", "2,1", "--format", "dot"]));
    assert_eq!(code, 0);
    let nodes = out.lines().filter(|l| l.contains("[label=")).count();
    let edges = out.lines().filter(|l| l.contains(" -- ")).count();
    assert_eq!(nodes, 6);
    // a 3×2 grid has 2·2 + 3·1 edges
    assert_eq!(edges, 7);
}

#[test]
fn negative_coordinates_parse() {
    let r = run(args(&["graph", "rect", "--omega", "-1,2"])).unwrap();
    assert!(r.all_pass());
    assert_eq!(r.payload["points"].as_array().unwrap().len(), 6);
}

#[test]
fn unknown_flag_is_a_usage_error() {
    assert!(matches!(run(args(&["graph", "rect", "--omega", "1", "--bogus"])), Err(CliError::Usage(_))));
    let status = bin().args(["graph", "rect", "--omega", "1", "--bogus"]).output().unwrap();
    assert_eq!(status.status.code(), Some(2));
    let status = bin().args(["padic", "cert", "--p", "9", "--roots", "9"]).output().unwrap();
    assert_eq!(status.status.code(), Some(2));
}

#[test]
fn dot_only_where_available() {
    let (out, code) = main_with_args(args(&["padic", "cert", "--p", "7", "--roots", "7,14", "--format", "dot"]));
    assert_eq!(code, 2);
    assert!(out.contains("no DOT output"));
}

#[test]
fn output_is_byte_stable() {
    let cmd = ["verify-all", "--max-ell", "2"];
    let a = bin().args(cmd).output().unwrap();
    let b = bin().env("GL2EXT_THREADS", "3").args(cmd).output().unwrap();
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn reports_round_trip() {
    for cmd in [
        vec!["padic", "cert", "--p", "7", "--roots", "7,14,21"],
        vec!["intervals", "check", "--k", "3", "--lower1", "0", "--lower2", "1", "--cap", "0,1,2"],
        vec!["lattice", "profile", "--lo", "-1", "--hi", "2", "--s-tilde", "1", "--t", "1/3"],
        vec!["weights", "--p", "13", "--mu", "5,0"],
    ] {
        let (out, code) = main_with_args(args(&cmd));
        assert_eq!(code, 0, "{out}");
        let report: Report = serde_json::from_str(&out).unwrap();
        assert_eq!(report.schema, REPORT_SCHEMA);
        assert_eq!(report.command, cmd.iter().map(|s| s.to_string()).collect::<Vec<_>>());
        let again = serde_json::to_string_pretty(&report).unwrap() + "\n";
        assert_eq!(again, out);
    }
}

#[test]
fn report_matches_schema_shape() {
    let schema: Value = serde_json::from_str(include_str!("../schemas/report.schema.json")).unwrap();
    let (out, _) = main_with_args(args(&["padic", "cert", "--p", "7", "--roots", "7,14"]));
    let v: Value = serde_json::from_str(&out).unwrap();
    let allowed: Vec<&str> = schema["properties"].as_object().unwrap().keys().map(String::as_str).collect();
    for key in v.as_object().unwrap().keys() {
        assert!(allowed.contains(&key.as_str()), "{key}");
    }
    for key in schema["required"].as_array().unwrap() {
        assert!(v.get(key.as_str().unwrap()).is_some());
    }
    assert_eq!(v["schema"], schema["properties"]["schema"]["const"]);
}

#[test]
fn padic_certificate_items() {
    let r = run(args(&["padic", "cert", "--p", "7", "--roots", "7,14,21"])).unwrap();
    assert!(r.all_pass());
    assert_eq!(r.payload["certificate"]["valuation"], 5);
    let r = run(args(&["padic", "cert", "--p", "7", "--roots", "7,14", "--variant", "xfactor"])).unwrap();
    assert_eq!(r.payload["report"]["vp_det"], 6);
    // a violated root condition is a failure, not a usage error
    assert!(matches!(run(args(&["padic", "cert", "--p", "5", "--roots", "5,30"])), Err(CliError::Failed(_))));
}

#[test]
fn intervals_with_different_caps() {
    let r = run(args(&["intervals", "check", "--k", "1", "--lower1", "", "--cap", "", "--lower2", "0", "--cap2", "0"])).unwrap();
    assert_eq!(r.payload["equal"], false);
    assert_eq!(r.payload["common_cap"], false);
    assert!(r.all_pass());
    let r = run(args(&["intervals", "check", "--k", "3", "--exhaustive"])).unwrap();
    assert!(r.all_pass());
}

#[test]
fn lattice_profile_from_type() {
    // the type whose Jordan–Hölder set is W(ρ̄), with the origin at s̃
    let r = run(args(&[
        "lattice", "profile", "--rho", RHO_F1, "--lambda", "1,0", "--wtilde", "wt(1,0)", "--origin", "1", "--t", "2/7",
    ]));
    let r = match r {
        Ok(r) => r,
        // the other admissible element of the same shape
        Err(_) => run(args(&[
            "lattice", "profile", "--rho", RHO_F1, "--lambda", "1,0", "--wtilde", "t(1,0)", "--origin", "1", "--t", "2/7",
        ]))
        .unwrap(),
    };
    assert!(r.all_pass());
    let values: Vec<String> = r.payload["profile"]["entries"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["varpi"].to_string())
        .collect();
    assert_eq!(values.len(), 2);
    let dot = r.dot.unwrap();
    assert!(dot.starts_with("digraph"));
}

#[test]
fn types_and_presentation() {
    let r = run(args(&["types", "--rho", RHO_F1, "--lambda", "2,0"])).unwrap();
    assert!(r.all_pass());
    let rho = r#"{"p":101,"f":1,"irreducible":false,"r":[40],"gamma_nonzero":[false]}"#;
    let r = run(args(&["defring", "present", "--rho", rho, "--lambda", "2,0", "--wtilde", "t(1,1)"])).unwrap();
    assert!(r.all_pass());
    assert!(matches!(run(args(&["types", "--lambda", "2,0"])), Err(CliError::Usage(_))));
}

#[test]
fn defring_single_case_and_domain() {
    let r = run(args(&["defring", "verify", "--case", "T", "--m", "2", "--n", "1"])).unwrap();
    assert_eq!(r.items.len(), 1);
    assert!(r.all_pass());
    assert!(matches!(run(args(&["defring", "verify", "--case", "T", "--m", "2"])), Err(CliError::Usage(_))));
}

#[test]
fn config_file_supplies_defaults() {
    let dir = std::env::temp_dir().join(format!("gl2ext-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let rho_path = dir.join("rho.json");
    std::fs::write(&rho_path, RHO_F1).unwrap();
    let cfg = RunConfig {
        schema: Some("gl2ext-config/1".into()),
        p: Some(13),
        rho: Some(rho_path),
        format: Some(gl2ext_cli::Format::Markdown),
        ..RunConfig::default()
    };
    let cfg_path = dir.join("run.json");
    std::fs::write(&cfg_path, serde_json::to_string(&cfg).unwrap()).unwrap();
    let cfg_arg = cfg_path.to_str().unwrap();
    let (out, code) = main_with_args(args(&["--config", cfg_arg, "weights", "--mu", "5,0"]));
    assert_eq!(code, 0);
    assert!(out.starts_with("# gl2ext"));
    // flags override the file
    let (out, _) = main_with_args(args(&["--config", cfg_arg, "--format", "json", "types", "--lambda", "1,0"]));
    assert!(out.starts_with('{'));
    std::fs::write(&cfg_path, r#"{"p": 4}"#).unwrap();
    let (_, code) = main_with_args(args(&["--config", cfg_arg, "weights", "--mu", "5,0"]));
    assert_eq!(code, 2);
    std::fs::write(&cfg_path, r#"{"prime": 13}"#).unwrap();
    let (_, code) = main_with_args(args(&["--config", cfg_arg, "weights", "--mu", "5,0"]));
    assert_eq!(code, 2);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn threads_variable_is_validated() {
    let out = bin().env("GL2EXT_THREADS", "0").args(["graph", "rect", "--omega", "1"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = bin().env("GL2EXT_THREADS", "2").args(["graph", "rect", "--omega", "1"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn jh_and_imod() {
    let r = run(args(&["jh", "--p", "101", "--sigma", "40,0;43,1", "--n", "2"])).unwrap();
    assert!(r.all_pass());
    let r = run(args(&["imod", "--p", "101", "--sigma", "40,0;43,1", "--omega", "2,-1"])).unwrap();
    assert!(r.all_pass());
    assert_eq!(r.payload["jh"].as_array().unwrap().len(), 6);
    let r = run(args(&["graph", "inj", "--p", "101", "--sigma", "40,0", "--n", "2"])).unwrap();
    assert!(r.dot.unwrap().contains(" -- "));
}
