//! Increasing weight families `(ω_n)` and their growth conditions.

mod conditions;

pub(crate) use conditions::running_sup_trace;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::weights::Weight;

pub use conditions::{
    check_condition_c, check_condition_d, check_convergence_factor, check_monotone, check_wein,
    check_weco, check_weco_p, classify_growth, Growth, GrowthTrace, BOUNDED_REL_CHANGE, MAX_DOUBLINGS,
    UNBOUNDED_FACTOR,
};

pub const DEFAULT_N_MAX: usize = 8;
/// Default horizon for family checks.
pub const DEFAULT_HORIZON: f64 = 1024.0;

fn one() -> f64 {
    1.0
}

fn two() -> f64 {
    2.0
}

fn default_n_max() -> usize {
    DEFAULT_N_MAX
}

/// Family generators, closed-form in the index `n ≥ 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FamilyKind {
    /// `(1 + t)^(a n)`
    PowerN {
        #[serde(default = "one")]
        a: f64,
    },
    /// `(1 + t)^(1 - 1/n)`
    FracPower,
    /// `e^(a n √t)`
    ExpSqrtN {
        #[serde(default = "one")]
        a: f64,
    },
    /// `e^(a n t)`
    ExpN {
        #[serde(default = "one")]
        a: f64,
    },
    /// `b^(n v(t))`, `v` the extended binary digit count
    BinaryPowN {
        #[serde(default = "two")]
        b: f64,
    },
    /// `ω_n = ω` for every `n`
    Constant { weight: Weight },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct FamilyRepr {
    #[serde(flatten)]
    kind: FamilyKind,
    #[serde(default = "default_n_max")]
    n_max: usize,
}

/// An increasing sequence of weights, materialized up to `n_max`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FamilyRepr", into = "FamilyRepr")]
pub struct WeightFamily {
    kind: FamilyKind,
    n_max: usize,
}

impl TryFrom<FamilyRepr> for WeightFamily {
    type Error = Error;

    fn try_from(r: FamilyRepr) -> Result<Self> {
        WeightFamily::new(r.kind, r.n_max)
    }
}

impl From<WeightFamily> for FamilyRepr {
    fn from(f: WeightFamily) -> Self {
        FamilyRepr {
            kind: f.kind,
            n_max: f.n_max,
        }
    }
}

impl WeightFamily {
    pub fn new(kind: FamilyKind, n_max: usize) -> Result<Self> {
        if n_max == 0 {
            return Err(Error::Parameter("n_max must be ≥ 1".into()));
        }
        let fam = Self { kind, n_max };
        // surfaces invalid parameters (e.g. b ≤ 1) at construction
        for n in 1..=n_max {
            fam.member(n)?;
        }
        Ok(fam)
    }

    pub fn power_n(n_max: usize) -> Self {
        Self::new(FamilyKind::PowerN { a: 1.0 }, n_max).expect("valid family")
    }

    pub fn frac_power(n_max: usize) -> Self {
        Self::new(FamilyKind::FracPower, n_max).expect("valid family")
    }

    pub fn exp_sqrt_n(n_max: usize) -> Self {
        Self::new(FamilyKind::ExpSqrtN { a: 1.0 }, n_max).expect("valid family")
    }

    pub fn exp_n(n_max: usize) -> Self {
        Self::new(FamilyKind::ExpN { a: 1.0 }, n_max).expect("valid family")
    }

    pub fn binary_pow_n(n_max: usize) -> Self {
        Self::new(FamilyKind::BinaryPowN { b: 2.0 }, n_max).expect("valid family")
    }

    pub fn constant(weight: Weight, n_max: usize) -> Self {
        Self::new(FamilyKind::Constant { weight }, n_max).expect("valid family")
    }

    pub fn kind(&self) -> &FamilyKind {
        &self.kind
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    /// The weight `ω_n`, `1 ≤ n ≤ n_max`.
    pub fn member(&self, n: usize) -> Result<Weight> {
        if n == 0 || n > self.n_max {
            return Err(Error::Parameter(format!(
                "family index {n} outside 1..={}",
                self.n_max
            )));
        }
        let nf = n as f64;
        match &self.kind {
            FamilyKind::PowerN { a } => Weight::power(a * nf),
            FamilyKind::FracPower => {
                let a = 1.0 - 1.0 / nf;
                if a == 0.0 {
                    Ok(Weight::unit())
                } else {
                    Weight::fractional_power(a)
                }
            }
            FamilyKind::ExpSqrtN { a } => Weight::exp_sqrt(a * nf),
            FamilyKind::ExpN { a } => Weight::exponential(a * nf),
            FamilyKind::BinaryPowN { b } => Ok(Weight::pow(Weight::binary_pow(*b)?, n as i32)),
            FamilyKind::Constant { weight } => Ok(weight.clone()),
        }
    }

    /// All members `ω_1, ..., ω_{n_max}`.
    pub fn members(&self) -> Vec<Weight> {
        (1..=self.n_max)
            .map(|n| self.member(n).expect("validated at construction"))
            .collect()
    }

    /// The built-in families with default parameters.
    pub fn builtins(n_max: usize) -> Vec<(&'static str, WeightFamily)> {
        vec![
            ("power_n", Self::power_n(n_max)),
            ("frac_power", Self::frac_power(n_max)),
            ("exp_sqrt_n", Self::exp_sqrt_n(n_max)),
            ("exp_n", Self::exp_n(n_max)),
            ("binary_pow_n", Self::binary_pow_n(n_max)),
            ("constant", Self::constant(Weight::power(1.0).expect("valid"), n_max)),
        ]
    }
}
