//! Suite execution and report assembly.

use std::collections::BTreeMap;
use std::panic::{self, AssertUnwindSafe};
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use wconv_core::{CheckReport, Grid, Verdict, Witness};

use crate::checks;
use crate::config::{Resolved, ResolvedSuite};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Environment {
    pub grid: Grid,
    pub seed: u64,
    pub versions: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TargetReport {
    pub targets: Vec<String>,
    pub report: CheckReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub name: String,
    pub check: String,
    pub expect: Verdict,
    pub status: Status,
    pub results: Vec<TargetReport>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub environment: Environment,
    pub suites: Vec<SuiteReport>,
    pub aggregate: Status,
}

/// Runs every suite; suites are independent and may execute in parallel,
/// but the report keeps declaration order.
pub fn run(resolved: &Resolved, seed: u64) -> RunReport {
    let suites: Vec<SuiteReport> = resolved
        .suites
        .par_iter()
        .enumerate()
        .map(|(i, s)| run_suite(resolved, s, seed, i as u64))
        .collect();
    let aggregate = if suites.iter().all(|s| s.status == Status::Pass) {
        Status::Pass
    } else {
        Status::Fail
    };
    let versions = BTreeMap::from([
        ("wconv-cli".to_string(), env!("CARGO_PKG_VERSION").to_string()),
        ("wconv-core".to_string(), wconv_core::VERSION.to_string()),
    ]);
    RunReport {
        environment: Environment {
            grid: resolved.objects.grid,
            seed,
            versions,
        },
        suites,
        aggregate,
    }
}

fn run_suite(resolved: &Resolved, suite: &ResolvedSuite, seed: u64, index: u64) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let mut results = Vec::with_capacity(suite.tuples.len());
    let mut error = None;
    for tuple in &suite.tuples {
        let outcome = panic::catch_unwind(AssertUnwindSafe(|| {
            checks::execute(&suite.job, &resolved.objects, tuple, &mut rng)
        }));
        match outcome {
            Ok(Ok(report)) => results.push(TargetReport {
                targets: tuple.clone(),
                report,
            }),
            Ok(Err(e)) => {
                error = Some(format!("{}: {e}", tuple.join("+")));
                break;
            }
            Err(payload) => {
                let msg = payload
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| payload.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_else(|| "unknown panic".into());
                error = Some(format!("{}: internal error: {msg}", tuple.join("+")));
                break;
            }
        }
    }
    let status = if error.is_some() {
        Status::Error
    } else if results.iter().all(|r| r.report.verdict == suite.expect) {
        Status::Pass
    } else {
        Status::Fail
    };
    SuiteReport {
        name: suite.name.clone(),
        check: suite.check.clone(),
        expect: suite.expect,
        status,
        results,
        error,
    }
}

impl RunReport {
    pub fn passed(&self) -> bool {
        self.aggregate == Status::Pass
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    /// Pretty JSON with a trailing newline; map keys are sorted, so equal
    /// reports serialize to equal bytes.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    /// Writes `report.json` and one CSV table per suite into `dir`.
    pub fn write_dir(&self, dir: &Path) -> std::io::Result<()> {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join("report.json"), self.to_json())?;
        for (i, suite) in self.suites.iter().enumerate() {
            let path = dir.join(format!("{i:02}_{}.csv", file_stem(&suite.name)));
            let mut w = csv::Writer::from_path(path)?;
            w.write_record(["check", "target", "verdict", "extremum", "witness"])?;
            for r in &suite.results {
                w.write_record([
                    r.report.check.as_str(),
                    &r.targets.join("+"),
                    &r.report.verdict.to_string(),
                    &r.report.extremum.to_string(),
                    &format_witness(&r.report.witness),
                ])?;
            }
            w.flush()?;
        }
        Ok(())
    }
}

fn file_stem(name: &str) -> String {
    name.chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' })
        .collect()
}

fn format_witness(ws: &[Witness]) -> String {
    ws.iter()
        .map(|w| match w.pair {
            Some(t) => format!("({},{}):{}", w.point, t, w.value),
            None => format!("{}:{}", w.point, w.value),
        })
        .collect::<Vec<_>>()
        .join(";")
}
