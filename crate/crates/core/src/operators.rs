//! Multipliers, derivations `D_μ(f) = (Xf) * μ`, and dilation endomorphisms
//! `Φ(f)(t) = c f(ct)` with their induced point-mass semigroup.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::family::{running_sup_trace, Growth, WeightFamily};
use crate::grid::{self, GridFunction, DEFAULT_EPS_REL};
use crate::measures::{self, Measure, MeasureSpec};
use crate::report::{CheckReport, Verdict, Witness};
use crate::weights::Weight;

/// `T_μ(f) = μ * f`.
pub fn multiplier_apply(mu: &Measure, f: &GridFunction) -> Result<GridFunction> {
    measures::convolve_measure_function(mu, f)
}

/// The derivation with symbol `μ`.
#[derive(Debug, Clone, PartialEq)]
pub struct DerivationOp {
    pub mu: Measure,
}

impl DerivationOp {
    pub fn new(mu: Measure) -> Self {
        Self { mu }
    }

    /// `D(f) = (Xf) * μ`.
    pub fn apply(&self, f: &GridFunction) -> Result<GridFunction> {
        measures::convolve_measure_function(&self.mu, &grid::apply_x(f))
    }

    /// Extension to measures, `D̄(ν) = (Xν) * μ`.
    pub fn extend(&self, nu: &Measure) -> Result<Measure> {
        measures::convolve_measures(&measures::apply_x_measure(nu), &self.mu)
    }

    /// `D̄(δ_t) = t · δ_t * μ`.
    pub fn on_dirac(&self, t: f64) -> Result<Measure> {
        let shifted = measures::convolve_measures(&Measure::dirac(t)?, &self.mu)?;
        Ok(shifted.scale(Complex64::new(t, 0.0)))
    }

    /// `‖D(f*g) - D(f)*g - f*D(g)‖_ω`.
    pub fn leibniz_residual(&self, f: &GridFunction, g: &GridFunction, w: &Weight) -> Result<f64> {
        let lhs = self.apply(&grid::convolve(f, g)?)?;
        let rhs = grid::convolve(&self.apply(f)?, g)?.add(&grid::convolve(f, &self.apply(g)?)?)?;
        Ok(grid::weighted_norm(&lhs.sub(&rhs)?, w))
    }
}

pub fn derivation_apply(d: &DerivationOp, f: &GridFunction) -> Result<GridFunction> {
    d.apply(f)
}

pub fn derivation_on_dirac(d: &DerivationOp, t: f64) -> Result<Measure> {
    d.on_dirac(t)
}

/// `‖D(f*g) - D(f)*g - f*D(g)‖_ω ≤ tol`.
pub fn check_leibniz(d: &DerivationOp, f: &GridFunction, g: &GridFunction, w: &Weight, tol: f64) -> Result<CheckReport> {
    let residual = d.leibniz_residual(f, g, w)?;
    let h = f.grid().step();
    let ok = residual <= tol;
    let mut r = CheckReport::new("leibniz", if ok { Verdict::Pass } else { Verdict::Fail }, residual)
        .param("h", h)
        .param("residual_over_h", residual / h)
        .param("tol", tol);
    if !ok {
        r.witness = vec![Witness::new(h, residual)];
    }
    Ok(r)
}

/// `α(D̄(ν)) ≥ α(ν)` for an atom-only `ν`.
///
/// Slack is one grid step when the symbol carries a density, zero otherwise.
pub fn check_alpha_inequality(d: &DerivationOp, mu_in: &Measure) -> Result<CheckReport> {
    if !mu_in.is_atomic() {
        return Err(Error::Precondition("input measure must be atom-only".into()));
    }
    let image = d.extend(mu_in)?;
    let a_in = measures::alpha_measure(mu_in, DEFAULT_EPS_REL)?;
    let a_out = measures::alpha_measure(&image, DEFAULT_EPS_REL)?;
    let slack = d.mu.grid().map_or(0.0, |g| g.step());
    let ok = a_out >= a_in - slack;
    let mut r = CheckReport::new("alpha_inequality", if ok { Verdict::Pass } else { Verdict::Fail }, a_out - a_in)
        .param("alpha_in", alpha_json(a_in))
        .param("alpha_out", alpha_json(a_out))
        .param("slack", slack);
    if !ok {
        r.witness = vec![Witness::new(a_in, a_out)];
    }
    Ok(r)
}

fn alpha_json(a: f64) -> serde_json::Value {
    if a.is_finite() {
        a.into()
    } else {
        "inf".into()
    }
}

/// Sampled supremum with its horizon-doubling classification.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundEstimate {
    pub value: f64,
    pub growth: Growth,
    pub sups: Vec<f64>,
    pub argmax: f64,
}

impl BoundEstimate {
    pub fn is_bounded(&self) -> bool {
        self.growth == Growth::Bounded
    }
}

/// `sup_t (t / ω_m(t)) ∫ ω_n(t + s) d|μ|(s)`, the continuity constant of
/// `D_μ : L¹(ω_m) → L¹(ω_n)`.
pub fn derivation_bound(mu: &Measure, wn: &Weight, wm: &Weight, horizon: f64) -> Result<BoundEstimate> {
    if !(horizon > 0.0) {
        return Err(Error::Parameter(format!("horizon must be positive, got {horizon}")));
    }
    let mut masses: Vec<(f64, f64)> = mu.atoms().iter().map(|a| (a.t, a.mass.norm())).collect();
    if let Some(d) = mu.density() {
        let h = d.grid().step();
        masses.extend(
            d.samples()
                .iter()
                .enumerate()
                .filter(|(_, z)| z.norm() > 0.0)
                .map(|(j, z)| (d.grid().node(j), h * z.norm())),
        );
    }
    if masses.is_empty() {
        return Ok(BoundEstimate { value: 0.0, growth: Growth::Bounded, sups: vec![0.0], argmax: 0.0 });
    }
    let q = |t: f64| {
        if t == 0.0 {
            return 0.0;
        }
        let base = t.ln() - wm.log_value(t);
        masses
            .iter()
            .map(|&(s, c)| c * (base + wn.log_value(t + s)).exp())
            .sum()
    };
    let trace = running_sup_trace(horizon, q);
    Ok(BoundEstimate {
        value: trace.last(),
        growth: trace.growth,
        argmax: trace.last_point,
        sups: trace.values,
    })
}

/// Ghahramani's single-weight bound `sup_t (t/ω(t)) ∫ ω(t+s) d|μ|(s)`.
pub fn ghahramani_bound(mu: &Measure, w: &Weight, horizon: f64) -> Result<BoundEstimate> {
    derivation_bound(mu, w, w, horizon)
}

/// Report form of [`derivation_bound`] for members `ω_n`, `ω_m` of a family:
/// passes when the continuity constant of `D_μ : L¹(ω_m) → L¹(ω_n)` is bounded.
pub fn derivation_continuity_report(
    mu: &Measure,
    fam: &WeightFamily,
    n: usize,
    m: usize,
    horizon: f64,
) -> Result<CheckReport> {
    let b = derivation_bound(mu, &fam.member(n)?, &fam.member(m)?, horizon)?;
    Ok(bound_report("derivation_continuity", b, horizon).param("n", n).param("m", m))
}

fn bound_report(name: &str, b: BoundEstimate, horizon: f64) -> CheckReport {
    let verdict = match b.growth {
        Growth::Bounded => Verdict::Pass,
        Growth::Unbounded => Verdict::Fail,
        Growth::Inconclusive => Verdict::InconclusiveNumeric,
    };
    let mut r = CheckReport::new(name, verdict, b.value)
        .numeric()
        .param("horizon", horizon)
        .param("sups", b.sups.clone());
    if verdict == Verdict::Pass {
        r.bound = Some(b.value);
    } else {
        r.witness = vec![Witness::new(b.argmax, b.value)];
    }
    r
}

/// Report form of [`ghahramani_bound`]: passes when the bound is finite.
pub fn ghahramani_report(mu: &Measure, w: &Weight, horizon: f64) -> Result<CheckReport> {
    Ok(bound_report("ghahramani_bound", ghahramani_bound(mu, w, horizon)?, horizon))
}

/// `Φ(f)(t) = c f(ct)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DilationRepr", into = "DilationRepr")]
pub struct DilationEndo {
    c: f64,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
struct DilationRepr {
    c: f64,
}

impl TryFrom<DilationRepr> for DilationEndo {
    type Error = Error;

    fn try_from(r: DilationRepr) -> Result<Self> {
        DilationEndo::new(r.c)
    }
}

impl From<DilationEndo> for DilationRepr {
    fn from(d: DilationEndo) -> Self {
        DilationRepr { c: d.c }
    }
}

impl DilationEndo {
    pub fn new(c: f64) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::Domain(format!("dilation factor must be > 0, got {c}")));
        }
        Ok(Self { c })
    }

    pub fn factor(&self) -> f64 {
        self.c
    }

    /// Resample `t ↦ c f(ct)` with linear interpolation between nodes.
    ///
    /// For `c > 1` the nodes `ct_j` beyond the horizon read `f` as zero,
    /// which is only allowed when `f` already vanishes at the last node.
    pub fn apply(&self, f: &GridFunction) -> Result<GridFunction> {
        let grid = *f.grid();
        let n = grid.len();
        let last = n - 1;
        let s = f.samples();
        let vanishes_at_end = f.support_indices().is_none_or(|(_, hi)| hi < last);
        let mut out = Vec::with_capacity(n);
        for j in 0..n {
            let x = self.c * grid.node(j) / grid.step();
            let i = x.floor() as usize;
            let r = x - x.floor();
            let v = if i >= last {
                if i == last && r == 0.0 {
                    s[last]
                } else if vanishes_at_end {
                    Complex64::new(0.0, 0.0)
                } else {
                    return Err(Error::Range(format!(
                        "dilation by {} reads f at {} beyond the horizon {}",
                        self.c,
                        self.c * grid.node(j),
                        grid.horizon()
                    )));
                }
            } else if r == 0.0 {
                s[i]
            } else {
                s[i] * (1.0 - r) + s[i + 1] * r
            };
            out.push(v * self.c);
        }
        GridFunction::new(grid, out)
    }

    /// `ν^t = δ_{t/c}`, the semigroup with `Φ(δ_t * f) = ν^t * Φ(f)`.
    pub fn semigroup(&self, t: f64) -> Result<Measure> {
        if t.is_nan() || t < 0.0 {
            return Err(Error::Domain(format!("semigroup parameter must be ≥ 0, got {t}")));
        }
        Measure::dirac(t / self.c)
    }
}

pub fn dilation_apply(phi: &DilationEndo, f: &GridFunction) -> Result<GridFunction> {
    phi.apply(f)
}

pub fn endo_semigroup_nu(phi: &DilationEndo, t: f64) -> Result<Measure> {
    phi.semigroup(t)
}

/// `‖Φ(δ_s * f) - ν^s * Φ(f)‖_{L¹} ≤ tol_steps · h · ‖f‖_{L¹}`.
pub fn check_semigroup_action(phi: &DilationEndo, f: &GridFunction, s: f64, tol_steps: f64) -> Result<CheckReport> {
    let h = f.grid().step();
    let (shifted, info) = f.shift(s)?;
    let lhs = phi.apply(&shifted)?;
    let rhs = measures::convolve_measure_function(&phi.semigroup(s)?, &phi.apply(f)?)?;
    let gap = lhs.sub(&rhs)?.l1_norm();
    let scale = f.l1_norm();
    let ok = gap <= tol_steps * h * scale;
    let mut r = CheckReport::new("semigroup_action", if ok { Verdict::Pass } else { Verdict::Fail }, gap)
        .param("c", phi.factor())
        .param("s", s)
        .param("tol_steps", tol_steps)
        .param("gap_over_h_norm", if scale > 0.0 { gap / (h * scale) } else { 0.0 })
        .param("shift_rounding", info.rounding);
    if !ok {
        r.witness = vec![Witness::new(s, gap)];
    }
    Ok(r)
}

/// `‖Φ(f)‖_{e^(a√t)} = ‖f‖_{e^((a/√2)√t)}` for the `c = 2` dilation, within
/// `tol · ‖f‖_{e^(a√t)}`.
pub fn check_dilation_norm_identity(a: f64, f: &GridFunction, tol: f64) -> Result<CheckReport> {
    let phi = DilationEndo::new(2.0)?;
    let wa = Weight::exp_sqrt(a)?;
    let lhs = grid::weighted_norm(&phi.apply(f)?, &wa);
    let rhs = grid::weighted_norm(f, &Weight::exp_sqrt(a / std::f64::consts::SQRT_2)?);
    let scale = grid::weighted_norm(f, &wa);
    let gap = (lhs - rhs).abs();
    let rel = if scale > 0.0 { gap / scale } else { gap };
    let ok = gap <= tol * scale;
    let mut r = CheckReport::new("dilation_norm_identity", if ok { Verdict::Pass } else { Verdict::Fail }, rel)
        .param("a", a)
        .param("tol", tol)
        .param("dilated_norm", lhs)
        .param("rescaled_norm", rhs);
    if !ok {
        r.witness = vec![Witness::new(a, rel)];
    }
    Ok(r)
}

/// `Φ(e_k) * f → f` in `L¹(ω_n)` over the increasing list `k_list`.
///
/// Passes when the residuals are nonincreasing over the second half of the
/// list and the last one is at most `tol`. Every `k` must satisfy
/// `1/(ck) ≥ h` so that `Φ(e_k)` is resolved by the grid.
pub fn endo_ai_check(
    phi: &DilationEndo,
    fam: &WeightFamily,
    f: &GridFunction,
    k_list: &[u32],
    n: usize,
    tol: f64,
) -> Result<CheckReport> {
    if k_list.is_empty() {
        return Err(Error::Parameter("empty k list".into()));
    }
    let grid = f.grid();
    let w = fam.member(n)?;
    let mut residuals = Vec::with_capacity(k_list.len());
    let mut unit_norms = Vec::with_capacity(k_list.len());
    for &k in k_list {
        if phi.factor() * k as f64 * grid.step() > 1.0 {
            return Err(Error::Resolution(format!(
                "Φ(e_{k}) has width {} below the grid step {}",
                1.0 / (phi.factor() * k as f64),
                grid.step()
            )));
        }
        let ek = phi.apply(&grid::approximate_identity(k, grid)?)?;
        unit_norms.push(grid::weighted_norm(&ek, &w));
        let diff = grid::convolve(&ek, f)?.sub(f)?;
        residuals.push(grid::weighted_norm(&diff, &w));
    }
    let tail = &residuals[residuals.len() / 2..];
    let decreasing = tail.windows(2).all(|p| p[1] <= p[0] * (1.0 + 1e-9) + 1e-15);
    let last = *residuals.last().expect("non-empty");
    let ok = decreasing && last <= tol;
    let mut r = CheckReport::new("endo_approximate_identity", if ok { Verdict::Pass } else { Verdict::Fail }, last)
        .param("c", phi.factor())
        .param("n", n)
        .param("k", k_list.to_vec())
        .param("residuals", residuals.clone())
        .param("identity_norms", unit_norms)
        .param("tol", tol);
    if !ok {
        r.witness = k_list
            .iter()
            .zip(&residuals)
            .map(|(k, v)| Witness::new(*k as f64, *v))
            .collect();
    }
    Ok(r)
}

/// `‖e_k‖_{ω_n} → 1` and `e_k * f → f` in `L¹(ω_n)` over the increasing list
/// `k_list`.
///
/// Passes when the norms are nonincreasing and end within `tol` of 1, and the
/// residuals pass [`endo_ai_check`] for the identity dilation.
pub fn check_approximate_identity(
    fam: &WeightFamily,
    f: &GridFunction,
    k_list: &[u32],
    n: usize,
    tol: f64,
) -> Result<CheckReport> {
    let inner = endo_ai_check(&DilationEndo::new(1.0)?, fam, f, k_list, n, tol)?;
    let norms: Vec<f64> = serde_json::from_value(inner.parameters["identity_norms"].clone())
        .expect("endo_ai_check records identity_norms");
    let residuals = inner.parameters["residuals"].clone();
    let decreasing = norms.windows(2).all(|p| p[1] <= p[0]);
    let last_norm = *norms.last().expect("non-empty k list");
    let norms_ok = decreasing && (last_norm - 1.0).abs() <= tol;
    let ok = norms_ok && inner.passed();
    let mut r = CheckReport::new(
        "approximate_identity",
        if ok { Verdict::Pass } else { Verdict::Fail },
        (last_norm - 1.0).abs().max(inner.extremum),
    )
    .param("n", n)
    .param("k", k_list.to_vec())
    .param("identity_norms", norms.clone())
    .param("residuals", residuals)
    .param("tol", tol);
    if !norms_ok {
        r.witness = k_list.iter().zip(&norms).map(|(k, v)| Witness::new(*k as f64, *v)).collect();
    } else if !inner.passed() {
        r.witness = inner.witness;
    }
    Ok(r)
}

/// Support threshold used by [`check_titchmarsh`]: any nonzero sample counts.
/// Convolution leaves exact zeros outside the support sum, so this recovers
/// the discrete support; smooth bumps stay below `1e-12 · max` for several
/// nodes past their true support start.
pub const TITCHMARSH_EPS_REL: f64 = f64::MIN_POSITIVE;

/// `|α(f*g) - α(f) - α(g)| ≤ 2h`, supports measured at relative threshold `eps_rel`.
pub fn check_titchmarsh(f: &GridFunction, g: &GridFunction, eps_rel: f64) -> Result<CheckReport> {
    if f.is_zero() || g.is_zero() {
        return Err(Error::Precondition("both functions must be nonzero".into()));
    }
    let h = f.grid().step();
    let af = grid::alpha_support(f, eps_rel)?;
    let ag = grid::alpha_support(g, eps_rel)?;
    let afg = grid::alpha_support(&grid::convolve(f, g)?, eps_rel)?;
    let gap = (afg - af - ag).abs();
    let ok = gap <= 2.0 * h;
    let mut r = CheckReport::new("titchmarsh", if ok { Verdict::Pass } else { Verdict::Fail }, gap)
        .param("alpha_f", af)
        .param("alpha_g", ag)
        .param("alpha_fg", alpha_json(afg))
        .param("eps_rel", eps_rel);
    if !ok {
        r.witness = vec![Witness::new(af + ag, afg)];
    }
    Ok(r)
}

/// Operator descriptors in JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OperatorSpec {
    Derivation { mu: MeasureSpec },
    Dilation { c: f64 },
}
