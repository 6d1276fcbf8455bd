use num_complex::Complex64;

use super::{Grid, GridFunction};
use crate::error::{Error, Result};
use crate::family::WeightFamily;
use crate::weights::Weight;

/// Default relative threshold for support detection.
pub const DEFAULT_EPS_REL: f64 = 1e-12;

/// `h Σ |f_j| ω(t_j)`.
pub fn weighted_norm(f: &GridFunction, w: &Weight) -> f64 {
    let h = f.grid.step();
    let sum: f64 = f
        .samples
        .iter()
        .enumerate()
        .filter(|(_, z)| z.re != 0.0 || z.im != 0.0)
        .map(|(j, z)| z.norm() * w.value(f.grid.node(j)))
        .sum();
    h * sum + 0.0
}

/// `(Xf)(t) = t f(t)`.
pub fn apply_x(f: &GridFunction) -> GridFunction {
    let grid = f.grid;
    GridFunction::from_parts_unchecked(
        grid,
        f.samples.iter().enumerate().map(|(j, z)| z * grid.node(j)).collect(),
    )
}

/// Laplace character `h Σ f(t_j) e^(-z t_j)`, defined for `Re z ≥ 0`.
pub fn laplace(f: &GridFunction, z: Complex64) -> Result<Complex64> {
    if !(z.re >= 0.0) {
        return Err(Error::Domain(format!("characters need Re z ≥ 0, got {z}")));
    }
    let h = f.grid.step();
    let sum: Complex64 = f
        .samples
        .iter()
        .enumerate()
        .filter(|(_, v)| v.re != 0.0 || v.im != 0.0)
        .map(|(j, v)| v * (-z * f.grid.node(j)).exp())
        .sum();
    Ok(sum * h)
}

/// `⟨f, φ⟩ = h Σ f(t_j) φ(t_j)`.
pub fn dual_pairing(f: &GridFunction, phi: &GridFunction) -> Result<Complex64> {
    f.grid.ensure_same(&phi.grid)?;
    let sum: Complex64 = f.samples.iter().zip(&phi.samples).map(|(a, b)| a * b).sum();
    Ok(sum * f.grid.step())
}

/// `max_j |φ(t_j)| / ω(t_j)`, the sampled norm of `L^∞(1/ω)`.
pub fn sup_norm_over_weight(phi: &GridFunction, w: &Weight) -> f64 {
    phi.samples
        .iter()
        .enumerate()
        .map(|(j, z)| {
            let t = phi.grid.node(j);
            let wt = w.value(t);
            if wt.is_finite() {
                z.norm() / wt
            } else {
                (z.norm().ln() - w.log_value(t)).exp()
            }
        })
        .fold(0.0, f64::max)
}

/// Smallest node with `|f(t_j)| > eps_rel · max |f|`; `+∞` for the zero function.
pub fn alpha_support(f: &GridFunction, eps_rel: f64) -> Result<f64> {
    if !(eps_rel > 0.0) {
        return Err(Error::Parameter(format!("eps_rel must be > 0, got {eps_rel}")));
    }
    let max = f.max_abs();
    if max == 0.0 {
        return Ok(f64::INFINITY);
    }
    let cut = eps_rel * max;
    let j = f
        .samples
        .iter()
        .position(|z| z.norm() > cut)
        .expect("max is attained");
    Ok(f.grid.node(j))
}

/// `e_k = k · 1_[0, 1/k)`; needs `1/k ≥ h`.
pub fn approximate_identity(k: u32, grid: &Grid) -> Result<GridFunction> {
    if k == 0 {
        return Err(Error::Parameter("k must be positive".into()));
    }
    let width = 1.0 / k as f64;
    if width < grid.step() {
        return Err(Error::Resolution(format!(
            "e_{k} has width {width} below the grid step {}",
            grid.step()
        )));
    }
    let kf = k as f64;
    GridFunction::from_real_fn(*grid, |t| if t < width { kf } else { 0.0 })
}

/// `(‖f‖_{ω_1}, ..., ‖f‖_{ω_{n_max}})`.
pub fn norms_profile(f: &GridFunction, fam: &WeightFamily, n_max: usize) -> Result<Vec<f64>> {
    (1..=n_max)
        .map(|n| Ok(weighted_norm(f, &fam.member(n)?)))
        .collect()
}
