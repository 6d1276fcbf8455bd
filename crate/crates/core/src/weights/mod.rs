//! Algebra weights on the half line.
//!
//! A [`Weight`] is a closed-form descriptor. Values are computed through the
//! log-weight wherever the direct value could overflow; [`Weight::eval`]
//! keeps the exact closed form (so that `eval(0) == 1` and dyadic values of
//! `b^v(t)` are exact powers of two).

mod checks;
mod subadditive;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use checks::{
    check_integer_subadditive, check_root_limit, check_submultiplicative, check_subadditive_extension,
    check_tends_to_infinity,
};
pub use subadditive::{extend_piecewise_linear, popcount_v, IntegerSubadditive, DEFAULT_TABLE_LIMIT};

/// Closed-form weight descriptor, tagged by `kind` in JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WeightKind {
    /// `(1 + t)^a`, `a ≥ 0`.
    Power { a: f64 },
    /// `e^(a t)`.
    Exponential { a: f64 },
    /// `e^(a √t)`, `a ≥ 0`.
    ExpSqrt { a: f64 },
    /// `(1 + t)^a`, `0 < a < 1`.
    FractionalPower { a: f64 },
    /// `b^v(t)` with `v` the piecewise-linear extension of the binary digit count.
    BinaryPow { b: f64 },
    Product { left: Box<Weight>, right: Box<Weight> },
    /// Integer power of a weight. Negative exponents are representable so
    /// that non-weights such as `(1 + t)^-1` can be fed to the checkers.
    Pow { base: Box<Weight>, exponent: i32 },
}

/// A validated weight descriptor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "WeightKind", into = "WeightKind")]
pub struct Weight {
    kind: WeightKind,
}

impl TryFrom<WeightKind> for Weight {
    type Error = Error;

    fn try_from(kind: WeightKind) -> Result<Self> {
        let bad = |msg: String| Err(Error::Domain(msg));
        match &kind {
            WeightKind::Power { a } if !(a.is_finite() && *a >= 0.0) => {
                return bad(format!("power exponent must be ≥ 0, got {a}"))
            }
            WeightKind::Exponential { a } if !a.is_finite() => {
                return bad(format!("exponential rate must be finite, got {a}"))
            }
            WeightKind::ExpSqrt { a } if !(a.is_finite() && *a >= 0.0) => {
                return bad(format!("exp_sqrt rate must be ≥ 0, got {a}"))
            }
            WeightKind::FractionalPower { a } if !(*a > 0.0 && *a < 1.0) => {
                return bad(format!("fractional power must lie in (0, 1), got {a}"))
            }
            WeightKind::BinaryPow { b } if !(b.is_finite() && *b > 1.0) => {
                return bad(format!("binary_pow base must be > 1, got {b}"))
            }
            _ => {}
        }
        Ok(Self { kind })
    }
}

impl From<Weight> for WeightKind {
    fn from(w: Weight) -> Self {
        w.kind
    }
}

impl Weight {
    pub fn power(a: f64) -> Result<Self> {
        WeightKind::Power { a }.try_into()
    }

    pub fn exponential(a: f64) -> Result<Self> {
        WeightKind::Exponential { a }.try_into()
    }

    pub fn exp_sqrt(a: f64) -> Result<Self> {
        WeightKind::ExpSqrt { a }.try_into()
    }

    pub fn fractional_power(a: f64) -> Result<Self> {
        WeightKind::FractionalPower { a }.try_into()
    }

    pub fn binary_pow(b: f64) -> Result<Self> {
        WeightKind::BinaryPow { b }.try_into()
    }

    pub fn product(left: Weight, right: Weight) -> Self {
        Self {
            kind: WeightKind::Product {
                left: Box::new(left),
                right: Box::new(right),
            },
        }
    }

    pub fn pow(base: Weight, exponent: i32) -> Self {
        Self {
            kind: WeightKind::Pow {
                base: Box::new(base),
                exponent,
            },
        }
    }

    /// The constant weight `1`.
    pub fn unit() -> Self {
        Self {
            kind: WeightKind::Power { a: 0.0 },
        }
    }

    pub fn kind(&self) -> &WeightKind {
        &self.kind
    }

    /// `ω(t)`. Negative `t` is a domain error.
    pub fn eval(&self, t: f64) -> Result<f64> {
        check_time(t)?;
        Ok(self.value(t))
    }

    /// `log ω(t)`.
    pub fn log_eval(&self, t: f64) -> Result<f64> {
        check_time(t)?;
        Ok(self.log_value(t))
    }

    /// `ω(t) / other(t)`, evaluated directly when both values are finite
    /// and through log-weights otherwise.
    pub fn ratio(&self, other: &Weight, t: f64) -> Result<f64> {
        check_time(t)?;
        Ok(self.ratio_value(other, t))
    }

    pub(crate) fn value(&self, t: f64) -> f64 {
        match &self.kind {
            WeightKind::Power { a } | WeightKind::FractionalPower { a } => (1.0 + t).powf(*a),
            WeightKind::Exponential { a } => (a * t).exp(),
            WeightKind::ExpSqrt { a } => (a * t.sqrt()).exp(),
            WeightKind::BinaryPow { b } => b.powf(binary_digits_extended(t)),
            WeightKind::Product { left, right } => left.value(t) * right.value(t),
            WeightKind::Pow { base, exponent } => base.value(t).powi(*exponent),
        }
    }

    pub(crate) fn log_value(&self, t: f64) -> f64 {
        match &self.kind {
            WeightKind::Power { a } | WeightKind::FractionalPower { a } => {
                if *a == 0.0 {
                    0.0
                } else {
                    a * t.ln_1p()
                }
            }
            WeightKind::Exponential { a } => a * t,
            WeightKind::ExpSqrt { a } => a * t.sqrt(),
            WeightKind::BinaryPow { b } => binary_digits_extended(t) * b.ln(),
            WeightKind::Product { left, right } => left.log_value(t) + right.log_value(t),
            WeightKind::Pow { base, exponent } => *exponent as f64 * base.log_value(t),
        }
    }

    pub(crate) fn ratio_value(&self, other: &Weight, t: f64) -> f64 {
        let num = self.value(t);
        let den = other.value(t);
        if num.is_normal() && den.is_normal() {
            let q = num / den;
            if q.is_normal() {
                return q;
            }
        }
        (self.log_value(t) - other.log_value(t)).exp()
    }
}

fn check_time(t: f64) -> Result<()> {
    if t.is_nan() || t < 0.0 {
        return Err(Error::Domain(format!("weights are defined on t ≥ 0, got {t}")));
    }
    Ok(())
}

/// Piecewise-linear extension of the binary digit count, evaluated directly
/// (no table), for weight evaluation.
fn binary_digits_extended(t: f64) -> f64 {
    let m = t.floor();
    let r = t - m;
    let base = m as u128;
    let lo = base.count_ones() as f64;
    if r == 0.0 {
        lo
    } else {
        let hi = (base + 1).count_ones() as f64;
        (1.0 - r) * lo + r * hi
    }
}
