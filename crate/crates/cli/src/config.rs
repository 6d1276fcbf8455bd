//! Experiment configuration and name resolution.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use wconv_core::{FunctionSpec, Grid, GridFunction, Measure, MeasureSpec, Verdict, Weight, WeightFamily};

use crate::checks::{self, Job, TargetKind};

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid config: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("suite {suite}: unknown check \"{check}\"")]
    UnknownCheck { suite: String, check: String },
    #[error("suite {suite}: unknown {kind} \"{name}\"")]
    UnknownName { suite: String, kind: TargetKind, name: String },
    #[error("suite {suite}: {msg}")]
    Suite { suite: String, msg: String },
    #[error("{what}: {source}")]
    Build {
        what: String,
        #[source]
        source: wconv_core::Error,
    },
}

/// A declarative experiment: named objects plus the suites run over them.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub grid: Grid,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub weights: BTreeMap<String, Weight>,
    #[serde(default)]
    pub families: BTreeMap<String, WeightFamily>,
    #[serde(default)]
    pub functions: BTreeMap<String, FunctionSpec>,
    #[serde(default)]
    pub measures: BTreeMap<String, MeasureSpec>,
    #[serde(default)]
    pub suites: Vec<SuiteSpec>,
}

/// One check applied to one or more target tuples.
///
/// `targets` is split into consecutive tuples matching the check's
/// signature; each tuple yields one report. `expect` is the verdict the
/// suite requires of every report (default `pass`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub check: String,
    #[serde(default)]
    pub targets: Vec<String>,
    #[serde(default)]
    pub params: Map<String, Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expect: Option<Verdict>,
}

impl SuiteSpec {
    pub fn label(&self, index: usize) -> String {
        self.name.clone().unwrap_or_else(|| format!("{}#{index}", self.check))
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json(&text)
    }

    /// Builds every named object and resolves every suite, so that no
    /// suite starts before the whole config is known to be consistent.
    pub fn resolve(&self) -> Result<Resolved, ConfigError> {
        let build = |what: String| move |source| ConfigError::Build { what, source };
        let functions = self
            .functions
            .iter()
            .map(|(k, spec)| Ok((k.clone(), spec.build(&self.grid).map_err(build(format!("function {k}")))?)))
            .collect::<Result<BTreeMap<_, _>, ConfigError>>()?;
        let measures = self
            .measures
            .iter()
            .map(|(k, spec)| Ok((k.clone(), spec.build(&self.grid).map_err(build(format!("measure {k}")))?)))
            .collect::<Result<BTreeMap<_, _>, ConfigError>>()?;
        let objects = Objects {
            grid: self.grid,
            weights: self.weights.clone(),
            families: self.families.clone(),
            functions,
            measures,
        };
        let mut suites = Vec::with_capacity(self.suites.len());
        for (i, spec) in self.suites.iter().enumerate() {
            suites.push(resolve_suite(&objects, spec, i)?);
        }
        Ok(Resolved { objects, suites })
    }
}

/// Materialized named objects.
#[derive(Debug, Clone)]
pub struct Objects {
    pub grid: Grid,
    pub weights: BTreeMap<String, Weight>,
    pub families: BTreeMap<String, WeightFamily>,
    pub functions: BTreeMap<String, GridFunction>,
    pub measures: BTreeMap<String, Measure>,
}

impl Objects {
    fn has(&self, kind: TargetKind, name: &str) -> bool {
        match kind {
            TargetKind::Weight => self.weights.contains_key(name),
            TargetKind::Family => self.families.contains_key(name),
            TargetKind::Function => self.functions.contains_key(name),
            TargetKind::Measure => self.measures.contains_key(name),
        }
    }
}

/// A suite whose check, parameters and target names are known to be valid.
#[derive(Debug, Clone)]
pub struct ResolvedSuite {
    pub name: String,
    pub check: String,
    pub job: Job,
    pub tuples: Vec<Vec<String>>,
    pub expect: Verdict,
}

#[derive(Debug, Clone)]
pub struct Resolved {
    pub objects: Objects,
    pub suites: Vec<ResolvedSuite>,
}

fn resolve_suite(objects: &Objects, spec: &SuiteSpec, index: usize) -> Result<ResolvedSuite, ConfigError> {
    let suite = spec.label(index);
    let def = checks::find(&spec.check).ok_or_else(|| ConfigError::UnknownCheck {
        suite: suite.clone(),
        check: spec.check.clone(),
    })?;
    let job = (def.parse)(&spec.params).map_err(|msg| ConfigError::Suite {
        suite: suite.clone(),
        msg: format!("bad params for {}: {msg}", spec.check),
    })?;
    let arity = def.targets.len();
    let tuples = if arity == 0 {
        if !spec.targets.is_empty() {
            return Err(ConfigError::Suite {
                suite,
                msg: format!("{} takes no targets", spec.check),
            });
        }
        vec![Vec::new()]
    } else {
        if spec.targets.is_empty() || !spec.targets.len().is_multiple_of(arity) {
            return Err(ConfigError::Suite {
                suite,
                msg: format!(
                    "{} takes targets in groups of {arity} ({}), got {}",
                    spec.check,
                    def.targets.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(", "),
                    spec.targets.len()
                ),
            });
        }
        spec.targets.chunks(arity).map(<[String]>::to_vec).collect()
    };
    for tuple in &tuples {
        for (name, &kind) in tuple.iter().zip(def.targets) {
            if !objects.has(kind, name) {
                return Err(ConfigError::UnknownName {
                    suite,
                    kind,
                    name: name.clone(),
                });
            }
        }
    }
    Ok(ResolvedSuite {
        name: suite,
        check: spec.check.clone(),
        job,
        tuples,
        expect: spec.expect.unwrap_or(Verdict::Pass),
    })
}
