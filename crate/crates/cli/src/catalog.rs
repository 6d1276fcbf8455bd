//! The `list` catalog: every descriptor kind and check, with examples.

use serde::Serialize;
use serde_json::{json, Value};

use crate::checks::{self, TargetKind};

#[derive(Debug, Clone, Serialize)]
pub struct KindEntry {
    pub kind: &'static str,
    pub example: Value,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckEntry {
    pub name: &'static str,
    pub targets: Vec<TargetKind>,
    pub description: &'static str,
    pub params: Value,
}

#[derive(Debug, Clone, Serialize)]
pub struct Catalog {
    pub weight_kinds: Vec<KindEntry>,
    pub family_kinds: Vec<KindEntry>,
    pub function_kinds: Vec<KindEntry>,
    pub measure_example: Value,
    pub operator_kinds: Vec<KindEntry>,
    pub checks: Vec<CheckEntry>,
}

fn entry(kind: &'static str, example: Value) -> KindEntry {
    KindEntry { kind, example }
}

pub fn list_builtins() -> Catalog {
    Catalog {
        weight_kinds: vec![
            entry("power", json!({"kind": "power", "a": 2.0})),
            entry("exponential", json!({"kind": "exponential", "a": 1.0})),
            entry("exp_sqrt", json!({"kind": "exp_sqrt", "a": 1.0})),
            entry("fractional_power", json!({"kind": "fractional_power", "a": 0.5})),
            entry("binary_pow", json!({"kind": "binary_pow", "b": 2.0})),
            entry(
                "product",
                json!({"kind": "product", "left": {"kind": "power", "a": 1.0}, "right": {"kind": "exp_sqrt", "a": 1.0}}),
            ),
            entry("pow", json!({"kind": "pow", "base": {"kind": "binary_pow", "b": 2.0}, "exponent": 3})),
        ],
        family_kinds: vec![
            entry("power_n", json!({"kind": "power_n", "a": 1.0, "n_max": 8})),
            entry("frac_power", json!({"kind": "frac_power", "n_max": 8})),
            entry("exp_sqrt_n", json!({"kind": "exp_sqrt_n", "a": 1.0, "n_max": 8})),
            entry("exp_n", json!({"kind": "exp_n", "a": 1.0, "n_max": 8})),
            entry("binary_pow_n", json!({"kind": "binary_pow_n", "b": 2.0, "n_max": 8})),
            entry("constant", json!({"kind": "constant", "weight": {"kind": "power", "a": 1.0}, "n_max": 8})),
        ],
        function_kinds: vec![
            entry("box", json!({"kind": "box", "a": 0.0, "b": 1.0, "amp": 1.0})),
            entry("bump", json!({"kind": "bump", "center": 1.0, "radius": 0.5, "amp": 1.0})),
            entry("exp_decay", json!({"kind": "exp_decay", "rate": 1.0, "amp": 1.0})),
            entry("samples", json!({"kind": "samples", "re": [1.0, 0.5], "im": [0.0, 0.0]})),
        ],
        measure_example: json!({
            "atoms": [{"t": 0.5, "re": 1.0, "im": 0.0}],
            "density": {"kind": "box", "a": 0.0, "b": 0.25}
        }),
        operator_kinds: vec![
            entry("derivation", json!({"kind": "derivation", "mu": {"atoms": [{"t": 1.0, "re": 1.0}]}})),
            entry("dilation", json!({"kind": "dilation", "c": 2.0})),
        ],
        checks: checks::catalog()
            .into_iter()
            .map(|d| CheckEntry {
                name: d.name,
                targets: d.targets.to_vec(),
                description: d.description,
                params: (d.defaults)(),
            })
            .collect(),
    }
}
