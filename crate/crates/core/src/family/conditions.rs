//! Finite-horizon checkers for the family conditions.
//!
//! "Unbounded" and "bounded" are decided by horizon doubling: a sampled
//! supremum that grows by at least [`UNBOUNDED_FACTOR`] from `[0, H]` to
//! `[0, 2H]` is unbounded, one that changes by less than
//! [`BOUNDED_REL_CHANGE`] is bounded. In between, the horizon keeps
//! doubling (up to [`MAX_DOUBLINGS`] times): a step that changes the value by
//! less than the bounded threshold settles it as bounded, cumulative growth by
//! the unbounded factor settles it as unbounded, otherwise it stays
//! inconclusive.

use serde::{Deserialize, Serialize};

use super::WeightFamily;
use crate::error::{Error, Result};
use crate::report::{CheckReport, Verdict, Witness};
use crate::sampling::{arg_extreme, sample_points};
use crate::weights::Weight;

pub const UNBOUNDED_FACTOR: f64 = 1.5;
pub const BOUNDED_REL_CHANGE: f64 = 1e-3;
pub const MAX_DOUBLINGS: u32 = 6;
const MONOTONE_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Growth {
    Bounded,
    Unbounded,
    Inconclusive,
}

/// Classify a supremum measured on `[0, H]` and on `[0, 2H]`.
pub fn classify_growth(sup_h: f64, sup_2h: f64) -> Growth {
    if sup_h.is_infinite() || sup_2h.is_infinite() {
        return Growth::Unbounded;
    }
    if sup_h <= 0.0 {
        return if sup_2h <= 0.0 { Growth::Bounded } else { Growth::Unbounded };
    }
    let ratio = sup_2h / sup_h;
    if ratio >= UNBOUNDED_FACTOR {
        Growth::Unbounded
    } else if (ratio - 1.0).abs() < BOUNDED_REL_CHANGE {
        Growth::Bounded
    } else {
        Growth::Inconclusive
    }
}

/// Outcome of the escalating horizon-doubling protocol.
#[derive(Debug, Clone, PartialEq)]
pub struct GrowthTrace {
    pub growth: Growth,
    /// Value on the base horizon followed by one value per doubling.
    pub values: Vec<f64>,
    /// Point where the last window attained its extreme value.
    pub last_point: f64,
}

impl GrowthTrace {
    pub fn doublings(&self) -> usize {
        self.values.len() - 1
    }

    pub fn last(&self) -> f64 {
        *self.values.last().expect("non-empty trace")
    }

    pub fn first_doubling_factor(&self) -> f64 {
        self.values[1] / self.values[0]
    }
}

/// Run the doubling protocol. `value_at(k)` returns the monitored quantity
/// for horizon `2^k H` together with the point that attains it.
pub(crate) fn doubling_protocol(mut value_at: impl FnMut(u32) -> (f64, f64)) -> GrowthTrace {
    let (mut last_point, v0) = value_at(0);
    let mut values = vec![v0];
    for k in 1..=MAX_DOUBLINGS {
        let (t, v) = value_at(k);
        last_point = t;
        let prev = values[values.len() - 1];
        values.push(v);
        if k == 1 {
            let g = classify_growth(v0, v);
            if g != Growth::Inconclusive {
                return GrowthTrace { growth: g, values, last_point };
            }
            continue;
        }
        if classify_growth(v0, v) == Growth::Unbounded {
            return GrowthTrace { growth: Growth::Unbounded, values, last_point };
        }
        if classify_growth(prev, v) == Growth::Bounded {
            return GrowthTrace { growth: Growth::Bounded, values, last_point };
        }
    }
    GrowthTrace { growth: Growth::Inconclusive, values, last_point }
}

/// Running supremum of `q` over `[0, 2^k H]`, evaluated window by window.
pub(crate) fn running_sup_trace(horizon: f64, q: impl Fn(f64) -> f64) -> GrowthTrace {
    let mut running = f64::NEG_INFINITY;
    let mut running_point = 0.0;
    doubling_protocol(|k| {
        let (lo, hi) = if k == 0 {
            (0.0, horizon)
        } else {
            (horizon * 2f64.powi(k as i32 - 1), horizon * 2f64.powi(k as i32))
        };
        let (t, v) = arg_extreme(sample_points(lo, hi).into_iter().map(|t| (t, q(t))), true)
            .expect("samples");
        if v > running {
            running = v;
            running_point = t;
        }
        (running_point, running)
    })
}

fn require_index(fam: &WeightFamily, n: usize, what: &str) -> Result<()> {
    if n == 0 || n >= fam.n_max() {
        return Err(Error::Parameter(format!(
            "{what}: need 1 ≤ n < n_max = {}, got n = {n}",
            fam.n_max()
        )));
    }
    Ok(())
}

fn require_horizon(horizon: f64) -> Result<()> {
    if !(horizon > 0.0 && horizon.is_finite()) {
        return Err(Error::Parameter(format!("horizon must be positive, got {horizon}")));
    }
    Ok(())
}

/// `ω_n(t) ≤ ω_{n+1}(t) (1 + 1e-12)` for every sampled `t ∈ [0, horizon]`
/// and `n < n_max`.
pub fn check_monotone(fam: &WeightFamily, horizon: f64) -> Result<CheckReport> {
    require_horizon(horizon)?;
    let members = fam.members();
    let pts = sample_points(0.0, horizon);
    let mut worst = Witness::new(0.0, 0.0);
    let mut worst_n = 0;
    for (i, pair) in members.windows(2).enumerate() {
        for &t in &pts {
            let q = pair[0].ratio_value(&pair[1], t);
            if q > worst.value {
                worst = Witness::new(t, q);
                worst_n = i + 1;
            }
        }
    }
    let ok = worst.value <= 1.0 + MONOTONE_SLACK;
    let mut r = CheckReport::new("monotone", if ok { Verdict::Pass } else { Verdict::Fail }, worst.value)
        .param("horizon", horizon)
        .param("n_max", fam.n_max());
    if !ok {
        r = r.param("worst_n", worst_n).with_witness(vec![worst]);
    }
    Ok(r)
}

/// `sup_t ω_{n+1}(t)/ω_n(t) = ∞`, probed as: the sampled supremum over
/// `[0, horizon]` (dyadic points included) reaches `threshold`.
pub fn check_condition_c(fam: &WeightFamily, n: usize, horizon: f64, threshold: f64) -> Result<CheckReport> {
    require_index(fam, n, "condition (c)")?;
    require_horizon(horizon)?;
    let (lo, hi) = (fam.member(n)?, fam.member(n + 1)?);
    let pts = sample_points(0.0, horizon);
    let (t, sup) = arg_extreme(pts.iter().map(|&t| (t, hi.ratio_value(&lo, t))), true)
        .expect("non-empty sample set");
    let verdict = if sup >= threshold { Verdict::Pass } else { Verdict::Fail };
    Ok(CheckReport::new("condition_c", verdict, sup)
        .numeric()
        .param("n", n)
        .param("horizon", horizon)
        .param("threshold", threshold)
        .with_witness(vec![Witness::new(t, sup)]))
}

/// `ω_n(t) → ∞` as `n → ∞` at a fixed `t`: the values must be
/// nondecreasing in `n ≤ n_max` and some value must exceed `threshold`.
/// Witness points are indices `n`.
pub fn check_condition_d(fam: &WeightFamily, t: f64, threshold: f64) -> Result<CheckReport> {
    if t.is_nan() || t < 0.0 {
        return Err(Error::Domain(format!("t must be ≥ 0, got {t}")));
    }
    let vals: Vec<f64> = fam.members().iter().map(|w| w.value(t)).collect();
    let nondecreasing = vals
        .windows(2)
        .all(|p| p[0] <= p[1] * (1.0 + MONOTONE_SLACK));
    let (n_best, best) = arg_extreme(vals.iter().enumerate().map(|(i, v)| ((i + 1) as f64, *v)), true)
        .expect("n_max ≥ 1");
    let ok = nondecreasing && best > threshold;
    let mut r = CheckReport::new("condition_d", if ok { Verdict::Pass } else { Verdict::Fail }, best)
        .numeric()
        .param("t", t)
        .param("threshold", threshold)
        .param("nondecreasing", nondecreasing);
    if !ok {
        let last = vals.len();
        r.witness = vec![Witness::new(n_best, best), Witness::new(last as f64, vals[last - 1])];
    }
    Ok(r)
}

/// Infimum over the window `[lo, hi]` (dyadic points included) of `ω_m/ω_n`.
fn window_inf(hi_w: &Weight, lo_w: &Weight, lo: f64, hi: f64) -> (f64, f64) {
    arg_extreme(
        sample_points(lo, hi).into_iter().map(|s| (s, hi_w.ratio_value(lo_w, s))),
        false,
    )
    .expect("non-empty window")
}

/// For some `m > n`, `ω_m(s)/ω_n(s) → ∞`.
///
/// An index `m` is accepted when the infimum of the ratio over `[H/2, H]` is
/// at least `growth_threshold` and the window infima over `[2^(k-1) H, 2^k H]`
/// are classified unbounded by the doubling protocol. The least accepted `m`
/// is reported; a failure lists, for each `m`, the point of `[H/2, H]` where
/// the ratio is smallest.
pub fn check_wein(fam: &WeightFamily, n: usize, horizon: f64, growth_threshold: f64) -> Result<CheckReport> {
    require_index(fam, n, "ratio divergence")?;
    require_horizon(horizon)?;
    let base = fam.member(n)?;
    let mut witnesses = Vec::new();
    let mut best_inf: f64 = 0.0;
    let mut any_inconclusive = false;
    for m in n + 1..=fam.n_max() {
        let wm = fam.member(m)?;
        let (s1, inf1) = window_inf(&wm, &base, horizon / 2.0, horizon);
        let trace = doubling_protocol(|k| {
            if k == 0 {
                (s1, inf1)
            } else {
                let scale = 2f64.powi(k as i32 - 1);
                window_inf(&wm, &base, horizon * scale, 2.0 * horizon * scale)
            }
        });
        if inf1 >= growth_threshold && trace.growth == Growth::Unbounded {
            let mut r = CheckReport::new("wein", Verdict::Pass, inf1)
                .numeric()
                .param("n", n)
                .param("horizon", horizon)
                .param("growth_threshold", growth_threshold)
                .param("window_infima", trace.values)
                .with_witness(vec![Witness::new(s1, inf1)])
                .note("growth threshold and doubling protocol are numeric choices");
            r.selected_m = Some(m);
            return Ok(r);
        }
        any_inconclusive |= trace.growth == Growth::Inconclusive;
        best_inf = best_inf.max(inf1);
        witnesses.push(Witness::pair(s1, m as f64, inf1));
    }
    let verdict = if any_inconclusive { Verdict::InconclusiveNumeric } else { Verdict::Fail };
    Ok(CheckReport::new("wein", verdict, best_inf)
        .numeric()
        .param("n", n)
        .param("horizon", horizon)
        .param("growth_threshold", growth_threshold)
        .with_witness(witnesses)
        .note("witness: point = s, pair = m, value = ω_m(s)/ω_n(s)"))
}

/// `sup_t t·ω_n(t)/ω_m(t) < ∞` for some `m`.
pub fn check_weco(fam: &WeightFamily, n: usize, horizon: f64, m_max: usize) -> Result<CheckReport> {
    weco_scan(fam, n, 1.0, horizon, m_max, "weco")
}

/// Same protocol as [`check_weco`] with `t` replaced by `t^p`.
pub fn check_weco_p(fam: &WeightFamily, n: usize, p: f64, horizon: f64, m_max: usize) -> Result<CheckReport> {
    if !(p > 0.0 && p.is_finite()) {
        return Err(Error::Parameter(format!("p must be > 0, got {p}")));
    }
    weco_scan(fam, n, p, horizon, m_max, "weco_p")
}

fn weco_scan(fam: &WeightFamily, n: usize, p: f64, horizon: f64, m_max: usize, name: &str) -> Result<CheckReport> {
    if n == 0 || !(n <= m_max && m_max <= fam.n_max()) {
        return Err(Error::Parameter(format!(
            "need 1 ≤ n ≤ m_max ≤ n_max = {}, got n = {n}, m_max = {m_max}",
            fam.n_max()
        )));
    }
    require_horizon(horizon)?;
    let wn = fam.member(n)?;
    let mut witnesses = Vec::new();
    let mut any_inconclusive = false;
    let mut largest = 0.0f64;
    for m in n + 1..=m_max {
        let wm = fam.member(m)?;
        let trace = running_sup_trace(horizon, |t| {
            if t == 0.0 {
                0.0
            } else {
                (p * t.ln() + wn.log_value(t) - wm.log_value(t)).exp()
            }
        });
        match trace.growth {
            Growth::Bounded => {
                let bound = trace.last();
                let mut r = CheckReport::new(name, Verdict::Pass, bound)
                    .numeric()
                    .param("n", n)
                    .param("p", p)
                    .param("horizon", horizon)
                    .param("m_max", m_max)
                    .param("sups", trace.values);
                r.selected_m = Some(m);
                r.bound = Some(bound);
                return Ok(r);
            }
            Growth::Inconclusive => any_inconclusive = true,
            Growth::Unbounded => {}
        }
        largest = largest.max(trace.last());
        witnesses.push(Witness::pair(trace.last_point, m as f64, trace.last() / trace.values[0]));
    }
    let verdict = if any_inconclusive { Verdict::InconclusiveNumeric } else { Verdict::Fail };
    Ok(CheckReport::new(name, verdict, largest)
        .numeric()
        .param("n", n)
        .param("p", p)
        .param("horizon", horizon)
        .param("m_max", m_max)
        .with_witness(witnesses)
        .note("witness: point = argmax, pair = m, value = growth of the sampled sup"))
}

/// The convergence-factor quantity `ω_n(r+s)/ω_m(s)` must fall below `tol`
/// on the tail window `[horizon/2, horizon]`.
pub fn check_convergence_factor(
    fam: &WeightFamily,
    n: usize,
    m: usize,
    r: f64,
    horizon: f64,
    tol: f64,
) -> Result<CheckReport> {
    if m <= n {
        return Err(Error::Parameter(format!("need m > n, got n = {n}, m = {m}")));
    }
    if !(r > 0.0) {
        return Err(Error::Parameter(format!("need r > 0, got {r}")));
    }
    require_horizon(horizon)?;
    let (wn, wm) = (fam.member(n)?, fam.member(m)?);
    let q = |s: f64| {
        let num = wn.value(r + s);
        let den = wm.value(s);
        if num.is_normal() && den.is_normal() && (num / den).is_normal() {
            num / den
        } else {
            (wn.log_value(r + s) - wm.log_value(s)).exp()
        }
    };
    let (s, sup) = arg_extreme(
        sample_points(horizon / 2.0, horizon).into_iter().map(|s| (s, q(s))),
        true,
    )
    .expect("samples");
    let verdict = if sup <= tol { Verdict::Pass } else { Verdict::Fail };
    Ok(CheckReport::new("convergence_factor", verdict, sup)
        .numeric()
        .param("n", n)
        .param("m", m)
        .param("r", r)
        .param("horizon", horizon)
        .param("tol", tol)
        .with_witness(vec![Witness::new(s, sup)]))
}
