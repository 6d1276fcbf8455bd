use super::{extend_piecewise_linear, IntegerSubadditive, Weight};
use crate::error::{Error, Result};
use crate::report::{CheckReport, Verdict, Witness};
use crate::sampling::{arg_extreme, sample_points};

/// `ω(s+t) ≤ ω(s) ω(t) (1 + rel_tol)` on every supplied pair.
///
/// The witness of a failing report is the worst pair, stored as
/// `point = s`, `pair = t`, `value = ω(s+t) / (ω(s) ω(t))`.
pub fn check_submultiplicative(w: &Weight, pairs: &[(f64, f64)], rel_tol: f64) -> Result<CheckReport> {
    let mut worst: Option<(f64, f64, f64)> = None;
    let mut violations = 0usize;
    for &(s, t) in pairs {
        if s < 0.0 || t < 0.0 || s.is_nan() || t.is_nan() {
            return Err(Error::Domain(format!("pair ({s}, {t}) outside R+")));
        }
        let (lhs, ws, wt) = (w.value(s + t), w.value(s), w.value(t));
        let rhs = ws * wt;
        let (violated, excess) = if lhs.is_finite() && rhs.is_finite() && rhs > 0.0 {
            (lhs > rhs * (1.0 + rel_tol), lhs / rhs)
        } else {
            let log_excess = w.log_value(s + t) - w.log_value(s) - w.log_value(t);
            (log_excess > rel_tol.ln_1p(), log_excess.exp())
        };
        if violated {
            violations += 1;
        }
        if worst.is_none_or(|(_, _, e)| excess > e) {
            worst = Some((s, t, excess));
        }
    }
    let extremum = worst.map_or(0.0, |(_, _, e)| e);
    let verdict = if violations == 0 { Verdict::Pass } else { Verdict::Fail };
    let mut report = CheckReport::new("submultiplicative", verdict, extremum)
        .param("pairs", pairs.len())
        .param("rel_tol", rel_tol)
        .param("violations", violations);
    if verdict == Verdict::Fail {
        let (s, t, e) = worst.expect("violations imply a worst pair");
        report.witness = vec![Witness::pair(s, t, e)];
    }
    Ok(report)
}

/// Exhaustive grid check of `v(x+y) ≤ v(x) + v(y) + abs_tol` for the
/// piecewise-linear extension, over `x = i·step`, `y = j·step`, `x + y ≤ x_max`.
///
/// Both branches of the fractional-part split (`r + s ≤ 1` and `r + s > 1`)
/// are counted and echoed in the report parameters.
pub fn check_subadditive_extension(
    v: &IntegerSubadditive,
    grid_step: f64,
    x_max: f64,
    abs_tol: f64,
) -> Result<CheckReport> {
    if !(grid_step > 0.0) || !(x_max >= 0.0) {
        return Err(Error::Parameter(format!(
            "need grid_step > 0 and x_max ≥ 0, got {grid_step}, {x_max}"
        )));
    }
    let count = (x_max / grid_step + 1e-9).floor() as usize;
    let xs: Vec<f64> = (0..=count).map(|k| k as f64 * grid_step).collect();
    let vals = xs
        .iter()
        .map(|&x| extend_piecewise_linear(v, x))
        .collect::<Result<Vec<_>>>()?;
    let frac = |x: f64| x - x.floor();
    let (mut low_branch, mut high_branch, mut violations) = (0u64, 0u64, 0u64);
    let mut worst = (0.0, 0.0, f64::NEG_INFINITY);
    for i in 0..=count {
        for j in i..=count - i {
            if frac(xs[i]) + frac(xs[j]) <= 1.0 {
                low_branch += 1;
            } else {
                high_branch += 1;
            }
            let excess = vals[i + j] - vals[i] - vals[j];
            if excess > abs_tol {
                violations += 1;
            }
            if excess > worst.2 {
                worst = (xs[i], xs[j], excess);
            }
        }
    }
    let verdict = if violations == 0 { Verdict::Pass } else { Verdict::Fail };
    let mut report = CheckReport::new("subadditive_extension", verdict, worst.2)
        .param("grid_step", grid_step)
        .param("x_max", x_max)
        .param("abs_tol", abs_tol)
        .param("pairs_low_branch", low_branch)
        .param("pairs_high_branch", high_branch)
        .param("violations", violations);
    if verdict == Verdict::Fail {
        report.witness = vec![Witness::pair(worst.0, worst.1, worst.2)];
    }
    Ok(report)
}

/// Finite-horizon probe of `ω(t)^(1/t) → 1`: the largest deviation
/// `|ω(t)^(1/t) - 1|` over `[horizon - window, horizon]` must not exceed `tol`.
pub fn check_root_limit(w: &Weight, horizon: f64, window: f64, tol: f64) -> Result<CheckReport> {
    if !(horizon > window && window > 0.0) {
        return Err(Error::Parameter(format!(
            "need horizon > window > 0, got {horizon}, {window}"
        )));
    }
    let lo = horizon - window;
    let steps = 256;
    let samples = (0..=steps).map(|i| {
        let t = lo + window * i as f64 / steps as f64;
        (t, ((w.log_value(t) / t).exp() - 1.0).abs())
    });
    let (t_worst, dev) = arg_extreme(samples, true).expect("non-empty window");
    let verdict = if dev <= tol { Verdict::Pass } else { Verdict::Fail };
    let mut report = CheckReport::new("root_limit", verdict, dev)
        .numeric()
        .param("horizon", horizon)
        .param("window", window)
        .param("tol", tol);
    if verdict == Verdict::Fail {
        report.witness = vec![Witness::new(t_worst, dev)];
    }
    Ok(report)
}

/// Finite-horizon probe of `ω(t) → ∞`.
///
/// For each threshold `M` there must be a sampled `t0 ≤ horizon/2` with
/// `ω(t) ≥ M` for every sampled `t ∈ [t0, horizon]`. A failing report lists
/// the tail samples (in `[horizon/2, horizon]`) that stay below the first
/// unmet threshold, lowest values first.
pub fn check_tends_to_infinity(w: &Weight, horizon: f64, thresholds: &[f64]) -> Result<CheckReport> {
    if !(horizon > 0.0) {
        return Err(Error::Parameter(format!("need horizon > 0, got {horizon}")));
    }
    if thresholds.windows(2).any(|p| p[0] >= p[1]) {
        return Err(Error::Parameter("thresholds must be increasing".into()));
    }
    let pts = sample_points(0.0, horizon);
    let vals: Vec<f64> = pts.iter().map(|&t| w.value(t)).collect();
    let mut suffix_min = vals.clone();
    for i in (0..suffix_min.len().saturating_sub(1)).rev() {
        suffix_min[i] = suffix_min[i].min(suffix_min[i + 1]);
    }
    let half = horizon / 2.0;
    // best attainable tail infimum with t0 ≤ horizon/2
    let best_tail_inf = pts
        .iter()
        .zip(&suffix_min)
        .filter(|(t, _)| **t <= half)
        .map(|(_, m)| *m)
        .fold(f64::NEG_INFINITY, f64::max);
    let failed = thresholds.iter().copied().find(|&m| best_tail_inf < m);
    let mut report = CheckReport::new(
        "tends_to_infinity",
        if failed.is_some() { Verdict::Fail } else { Verdict::Pass },
        best_tail_inf,
    )
    .numeric()
    .param("horizon", horizon)
    .param("thresholds", thresholds.to_vec());
    if let Some(m) = failed {
        let mut low: Vec<Witness> = pts
            .iter()
            .zip(&vals)
            .filter(|(t, v)| **t >= half && **v < m)
            .map(|(t, v)| Witness::new(*t, *v))
            .collect();
        low.sort_by(|a, b| a.value.total_cmp(&b.value).then(a.point.total_cmp(&b.point)));
        low.truncate(8);
        report = report.param("failed_threshold", m).with_witness(low);
    }
    Ok(report)
}

/// Exhaustive check of `v(m+n) ≤ v(m) + v(n)` for all `0 ≤ m, n ≤ max`.
/// Needs the table of `v` to reach `2·max`.
pub fn check_integer_subadditive(v: &IntegerSubadditive, max: u64) -> Result<CheckReport> {
    if v.limit() < 2 * max {
        return Err(Error::Range(format!(
            "pairs up to {max} need v on 0..={}, tabulated to {}",
            2 * max,
            v.limit()
        )));
    }
    let vals: Vec<f64> = (0..=2 * max).map(|m| v.value(m)).collect::<Result<_>>()?;
    let mut violations = 0u64;
    let mut first: Option<Witness> = None;
    let mut worst = f64::NEG_INFINITY;
    for m in 0..=max as usize {
        for n in m..=max as usize {
            let excess = vals[m + n] - vals[m] - vals[n];
            worst = worst.max(excess);
            if excess > 0.0 {
                violations += 1;
                first.get_or_insert(Witness::pair(m as f64, n as f64, excess));
            }
        }
    }
    let verdict = if violations == 0 { Verdict::Pass } else { Verdict::Fail };
    let report = CheckReport::new("integer_subadditive", verdict, worst)
        .param("max", max)
        .param("violations", violations);
    Ok(report.with_witness(first.into_iter().collect()))
}
