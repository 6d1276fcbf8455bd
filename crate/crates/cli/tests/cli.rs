use std::path::PathBuf;
use std::process::Command;

use serde_json::{json, Value};
use wconv_cli::{list_builtins, run_config, ConfigError, ExperimentConfig, Status, DEFAULT_CONFIG};
use wconv_core::{FunctionSpec, MeasureSpec, Weight, WeightFamily};

fn wconv() -> Command {
    Command::new(env!("CARGO_BIN_EXE_wconv"))
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("wconv-cli-test-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn write_config(name: &str, cfg: &Value) -> PathBuf {
    let path = scratch(name).join("config.json");
    std::fs::write(&path, serde_json::to_string_pretty(cfg).unwrap()).unwrap();
    path
}

fn small(suites: Value) -> Value {
    json!({
        "grid": {"h": 1.0 / 64.0, "T": 16.0},
        "families": {"power": {"kind": "power_n", "n_max": 8}, "frac": {"kind": "frac_power"}},
        "functions": {
            "box01": {"kind": "box", "a": 0.0, "b": 1.0},
            "tail": {"kind": "exp_decay", "rate": 0.0}
        },
        "suites": suites
    })
}

#[test]
fn empty_suites_pass_with_empty_report() {
    let cfg = ExperimentConfig::from_json(&small(json!([])).to_string()).unwrap();
    let report = run_config(&cfg).unwrap();
    assert!(report.suites.is_empty());
    assert_eq!(report.aggregate, Status::Pass);
    let out = wconv().arg("run").arg(write_config("empty", &small(json!([])))).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn power_weco_suite_reports_next_index() {
    let cfg = small(json!([{"check": "weco", "targets": ["power"], "params": {"n": 2}}]));
    let report = run_config(&ExperimentConfig::from_json(&cfg.to_string()).unwrap()).unwrap();
    assert!(report.passed());
    let r = &report.suites[0].results[0].report;
    assert_eq!(r.selected_m, Some(3));
    assert!(r.bound.unwrap() <= 1.0);
}

#[test]
fn unknown_names_are_config_errors() {
    let cfg = small(json!([
        {"check": "monotone", "targets": ["power"]},
        {"check": "weco", "targets": ["foo"]}
    ]));
    let err = ExperimentConfig::from_json(&cfg.to_string()).unwrap().resolve().unwrap_err();
    assert!(matches!(err, ConfigError::UnknownName { ref name, .. } if name == "foo"), "{err}");
    let out = wconv().arg("run").arg(write_config("unknown", &cfg)).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty(), "no suite may run before validation");

    for bad in [
        json!([{"check": "no_such_check"}]),
        json!([{"check": "weco", "targets": ["power"], "params": {"nn": 1}}]),
        json!([{"check": "banach", "targets": ["power"]}]),
        json!([{"check": "integer_subadditive", "targets": ["power"]}]),
    ] {
        let cfg = ExperimentConfig::from_json(&small(bad.clone()).to_string()).unwrap();
        assert!(cfg.resolve().is_err(), "{bad}");
    }
    assert!(ExperimentConfig::from_json(r#"{"gird": {}}"#).is_err());
}

#[test]
fn failing_suite_does_not_touch_others() {
    let good = json!({"check": "weco", "targets": ["power"]});
    let alone = run_config(&ExperimentConfig::from_json(&small(json!([good.clone()])).to_string()).unwrap()).unwrap();
    let mixed = small(json!([
        good,
        {"check": "weco", "targets": ["frac"], "params": {"n": 2}},
        {"check": "dilation_norm_identity", "targets": ["tail"]}
    ]));
    let report = run_config(&ExperimentConfig::from_json(&mixed.to_string()).unwrap()).unwrap();
    assert_eq!(report.suites[0].results, alone.suites[0].results);
    assert_eq!(report.suites[0].status, Status::Pass);
    assert_eq!(report.suites[1].status, Status::Fail);
    // the dilation reads past the horizon of a function that does not vanish there
    assert_eq!(report.suites[2].status, Status::Error);
    assert!(report.suites[2].error.as_deref().unwrap().contains("range"));
    assert_eq!(report.aggregate, Status::Fail);
    let out = wconv().arg("run").arg(write_config("mixed", &mixed)).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn expected_failures_count_as_passing_suites() {
    let cfg = small(json!([{"check": "weco", "targets": ["frac"], "params": {"n": 2}, "expect": "fail"}]));
    let report = run_config(&ExperimentConfig::from_json(&cfg.to_string()).unwrap()).unwrap();
    assert!(report.passed());
}

#[test]
fn default_config_is_deterministic_and_passes() {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("configs/default.json");
    let runs: Vec<Vec<u8>> = (0..2)
        .map(|_| {
            let out = wconv().args(["run", "--seed", "42"]).arg(&path).output().unwrap();
            assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
            out.stdout
        })
        .collect();
    assert_eq!(runs[0], runs[1]);
    let cfg = ExperimentConfig::from_json(DEFAULT_CONFIG).unwrap();
    assert_eq!(run_config(&cfg).unwrap().to_json().into_bytes(), runs[0]);
}

#[test]
fn seed_changes_only_randomized_suites() {
    let suites = json!([
        {"check": "submultiplicative", "targets": ["w"]},
        {"check": "weco", "targets": ["power"]}
    ]);
    let mut cfg = small(suites);
    cfg["weights"] = json!({"w": {"kind": "exp_sqrt", "a": 1.0}});
    let path = write_config("seed", &cfg);
    let run = |seed: &str| -> Value {
        let out = wconv().args(["run", "--seed", seed]).arg(&path).output().unwrap();
        serde_json::from_slice(&out.stdout).unwrap()
    };
    let (a, b) = (run("1"), run("2"));
    assert_ne!(a["suites"][0], b["suites"][0]);
    assert_eq!(a["suites"][1], b["suites"][1]);
    assert_eq!(b["environment"]["seed"], 2);
}

#[test]
fn out_dir_gets_json_and_csv() {
    let cfg = small(json!([
        {"name": "weco power", "check": "weco", "targets": ["power", "frac"]}
    ]));
    let dir = scratch("out");
    let out = wconv()
        .arg("run")
        .arg(write_config("out-config", &cfg))
        .arg("--out")
        .arg(&dir)
        .args(["--grid-h", "0.03125"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let report: Value = serde_json::from_str(&std::fs::read_to_string(dir.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["environment"]["grid"]["h"], 0.03125);
    let mut rows = csv::Reader::from_path(dir.join("00_weco_power.csv")).unwrap();
    assert_eq!(rows.headers().unwrap(), vec!["check", "target", "verdict", "extremum", "witness"]);
    let rows: Vec<csv::StringRecord> = rows.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 2);
    assert_eq!(&rows[0][2], "pass");
    assert_eq!(&rows[1][1], "frac");
    assert_eq!(&rows[1][2], "fail");
    assert!(!rows[1][4].is_empty());
}

#[test]
fn catalog_lists_and_round_trips() {
    let cat = list_builtins();
    assert!(cat.family_kinds.iter().any(|k| k.kind == "binary_pow_n"));
    assert!(cat.checks.iter().any(|c| c.name == "dilation_norm_identity"));
    for k in &cat.weight_kinds {
        let w: Weight = serde_json::from_value(k.example.clone()).unwrap();
        assert!(w.eval(1.0).unwrap() > 0.0, "{}", k.kind);
        assert_eq!(k.example["kind"], k.kind);
    }
    for k in &cat.family_kinds {
        let f: WeightFamily = serde_json::from_value(k.example.clone()).unwrap();
        assert_eq!(f.n_max(), 8, "{}", k.kind);
    }
    for k in &cat.function_kinds {
        let _: FunctionSpec = serde_json::from_value(k.example.clone()).unwrap();
    }
    let _: MeasureSpec = serde_json::from_value(cat.measure_example.clone()).unwrap();
    for k in &cat.operator_kinds {
        let _: wconv_core::operators::OperatorSpec = serde_json::from_value(k.example.clone()).unwrap();
    }

    // every check, with its listed default parameters, resolves inside a config
    let mut cfg = json!({
        "grid": {"h": 1.0 / 64.0, "T": 16.0},
        "weights": {"w": cat.weight_kinds[0].example},
        "families": {"fam": cat.family_kinds[0].example},
        "functions": {"f": {"kind": "box", "a": 0.0, "b": 1.0}},
        "measures": {"mu": cat.measure_example},
        "suites": []
    });
    for c in &cat.checks {
        let targets: Vec<&str> = c
            .targets
            .iter()
            .map(|k| match k.to_string().as_str() {
                "weight" => "w",
                "family" => "fam",
                "function" => "f",
                _ => "mu",
            })
            .collect();
        cfg["suites"]
            .as_array_mut()
            .unwrap()
            .push(json!({"check": c.name, "targets": targets, "params": c.params}));
    }
    let resolved = ExperimentConfig::from_json(&cfg.to_string()).unwrap().resolve().unwrap();
    assert_eq!(resolved.suites.len(), cat.checks.len());

    let out = wconv().arg("list").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let listed: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(listed["checks"].as_array().unwrap().len(), cat.checks.len());
}
