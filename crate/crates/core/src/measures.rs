//! Finite atomic measures plus an optional absolutely continuous part.
//!
//! Atom locations are exact reals; they are rounded to the nearest node only
//! when a measure acts on a grid function. Measures are kept in canonical
//! form: atoms sorted by location, coincident atoms merged, zero masses
//! removed, an all-zero density dropped.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{self, FunctionSpec, Grid, GridFunction, ShiftInfo};
use crate::weights::Weight;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Atom {
    pub t: f64,
    pub mass: Complex64,
}

impl Atom {
    pub fn new(t: f64, mass: Complex64) -> Self {
        Self { t, mass }
    }

    pub fn real(t: f64, mass: f64) -> Self {
        Self::new(t, Complex64::new(mass, 0.0))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Measure {
    atoms: Vec<Atom>,
    density: Option<GridFunction>,
}

/// Mass moved beyond the horizon and node-rounding performed by an operation.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Truncation {
    /// Total variation dropped past the horizon.
    pub dropped: f64,
    /// Largest `|k·h - t|` over atom locations rounded to nodes.
    pub max_rounding: f64,
}

impl Truncation {
    fn absorb(&mut self, info: ShiftInfo, weight: f64) {
        self.dropped += info.dropped * weight;
        self.max_rounding = self.max_rounding.max(info.rounding);
    }
}

fn check_location(t: f64) -> Result<()> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::Domain(format!("atom location must be finite and ≥ 0, got {t}")));
    }
    Ok(())
}

impl Measure {
    pub fn zero() -> Self {
        Self { atoms: Vec::new(), density: None }
    }

    /// Unit point mass `δ_t`.
    pub fn dirac(t: f64) -> Result<Self> {
        Self::from_atoms(vec![Atom::real(t, 1.0)])
    }

    pub fn from_atoms(atoms: Vec<Atom>) -> Result<Self> {
        for a in &atoms {
            check_location(a.t)?;
            if !(a.mass.re.is_finite() && a.mass.im.is_finite()) {
                return Err(Error::Domain(format!("non-finite mass at t = {}", a.t)));
            }
        }
        Ok(Self::normalized(atoms, None))
    }

    /// Absolutely continuous measure `f(t) dt`.
    pub fn from_density(density: GridFunction) -> Self {
        Self::normalized(Vec::new(), Some(density))
    }

    pub fn with_density(self, density: GridFunction) -> Result<Self> {
        let density = match self.density {
            Some(d) => d.add(&density)?,
            None => density,
        };
        Ok(Self::normalized(self.atoms, Some(density)))
    }

    fn normalized(mut atoms: Vec<Atom>, density: Option<GridFunction>) -> Self {
        atoms.sort_by(|a, b| a.t.total_cmp(&b.t));
        let mut merged: Vec<Atom> = Vec::with_capacity(atoms.len());
        for a in atoms {
            match merged.last_mut() {
                Some(last) if last.t == a.t => last.mass += a.mass,
                _ => merged.push(a),
            }
        }
        merged.retain(|a| a.mass.re != 0.0 || a.mass.im != 0.0);
        let density = density.filter(|d| !d.is_zero());
        Self { atoms: merged, density }
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn density(&self) -> Option<&GridFunction> {
        self.density.as_ref()
    }

    pub fn grid(&self) -> Option<&Grid> {
        self.density.as_ref().map(GridFunction::grid)
    }

    pub fn is_zero(&self) -> bool {
        self.atoms.is_empty() && self.density.is_none()
    }

    pub fn is_atomic(&self) -> bool {
        self.density.is_none()
    }

    /// `Σ |c_i| + ∫ |density|`.
    pub fn total_variation(&self) -> f64 {
        self.atoms.iter().map(|a| a.mass.norm()).sum::<f64>()
            + self.density.as_ref().map_or(0.0, GridFunction::l1_norm)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self::normalized(
            self.atoms.iter().map(|a| Atom::new(a.t, a.mass * c)).collect(),
            self.density.as_ref().map(|d| d.scale(c)),
        )
    }

    pub fn add(&self, other: &Measure) -> Result<Self> {
        let mut atoms = self.atoms.clone();
        atoms.extend_from_slice(&other.atoms);
        let density = match (&self.density, &other.density) {
            (Some(a), Some(b)) => Some(a.add(b)?),
            (Some(a), None) | (None, Some(a)) => Some(a.clone()),
            (None, None) => None,
        };
        Ok(Self::normalized(atoms, density))
    }

    pub fn sub(&self, other: &Measure) -> Result<Self> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }
}

/// `‖μ‖_ω = Σ |c_i| ω(t_i) + h Σ |d_j| ω(t_j)`.
pub fn measure_norm(mu: &Measure, w: &Weight) -> f64 {
    let atoms: f64 = mu.atoms.iter().map(|a| a.mass.norm() * w.value(a.t)).sum();
    atoms + mu.density.as_ref().map_or(0.0, |d| grid::weighted_norm(d, w))
}

/// `μ * f`: node-rounded translates of `f` for the atoms plus the grid
/// convolution with the density.
pub fn convolve_measure_function(mu: &Measure, f: &GridFunction) -> Result<GridFunction> {
    convolve_measure_function_tracked(mu, f).map(|(g, _)| g)
}

pub fn convolve_measure_function_tracked(mu: &Measure, f: &GridFunction) -> Result<(GridFunction, Truncation)> {
    let mut trunc = Truncation::default();
    let mut acc: Option<GridFunction> = None;
    for a in &mu.atoms {
        let (shifted, info) = f.shift(a.t)?;
        trunc.absorb(info, a.mass.norm());
        let term = shifted.scale(a.mass);
        acc = Some(match acc {
            Some(s) => s.add(&term)?,
            None => term,
        });
    }
    if let Some(d) = &mu.density {
        let term = grid::convolve(d, f)?;
        acc = Some(match acc {
            Some(s) => s.add(&term)?,
            None => term,
        });
    }
    Ok((acc.unwrap_or_else(|| GridFunction::zeros(*f.grid())), trunc))
}

/// `μ * ν`. Atom products stay exact; atom-density and density-density
/// products are folded into the density.
pub fn convolve_measures(mu: &Measure, nu: &Measure) -> Result<Measure> {
    convolve_measures_tracked(mu, nu).map(|(m, _)| m)
}

pub fn convolve_measures_tracked(mu: &Measure, nu: &Measure) -> Result<(Measure, Truncation)> {
    if let (Some(a), Some(b)) = (mu.grid(), nu.grid()) {
        if a != b {
            return Err(Error::GridMismatch("densities live on different grids".into()));
        }
    }
    let mut trunc = Truncation::default();
    let mut atoms = Vec::with_capacity(mu.atoms.len() * nu.atoms.len());
    for a in &mu.atoms {
        for b in &nu.atoms {
            atoms.push(Atom::new(a.t + b.t, a.mass * b.mass));
        }
    }
    let mut density: Option<GridFunction> = None;
    let mut push = |term: GridFunction| -> Result<()> {
        density = Some(match density.take() {
            Some(d) => d.add(&term)?,
            None => term,
        });
        Ok(())
    };
    if let Some(d) = &nu.density {
        let (g, t) = convolve_measure_function_tracked(&Measure::normalized(mu.atoms.clone(), None), d)?;
        trunc.dropped += t.dropped;
        trunc.max_rounding = trunc.max_rounding.max(t.max_rounding);
        push(g)?;
    }
    if let Some(d) = &mu.density {
        let (g, t) = convolve_measure_function_tracked(&Measure::normalized(nu.atoms.clone(), None), d)?;
        trunc.dropped += t.dropped;
        trunc.max_rounding = trunc.max_rounding.max(t.max_rounding);
        push(g)?;
    }
    if let (Some(a), Some(b)) = (&mu.density, &nu.density) {
        push(grid::convolve(a, b)?)?;
    }
    Ok((Measure::normalized(atoms, density), trunc))
}

/// The translate `μ_t(E) = μ(E + t)`, so that `μ = δ_t * μ_t`. Requires
/// `α(μ) ≥ t`.
pub fn translate_measure(mu: &Measure, t: f64) -> Result<Measure> {
    check_location(t)?;
    if let Some(a) = mu.atoms.iter().find(|a| a.t < t) {
        return Err(Error::Domain(format!("atom at {} lies below the translation {t}", a.t)));
    }
    let atoms = mu.atoms.iter().map(|a| Atom::new(a.t - t, a.mass)).collect();
    let density = mu.density.as_ref().map(|d| d.shift_left(t)).transpose()?;
    Ok(Measure::normalized(atoms, density))
}

/// `α(μ) = inf supp μ`; `+∞` for the zero measure.
pub fn alpha_measure(mu: &Measure, eps_rel: f64) -> Result<f64> {
    if !(eps_rel > 0.0) {
        return Err(Error::Parameter(format!("eps_rel must be > 0, got {eps_rel}")));
    }
    let max_mass = mu.atoms.iter().map(|a| a.mass.norm()).fold(0.0, f64::max);
    let atom_alpha = mu
        .atoms
        .iter()
        .find(|a| a.mass.norm() > eps_rel * max_mass)
        .map_or(f64::INFINITY, |a| a.t);
    let dens_alpha = match &mu.density {
        Some(d) => grid::alpha_support(d, eps_rel)?,
        None => f64::INFINITY,
    };
    Ok(atom_alpha.min(dens_alpha))
}

/// `d(Xμ)(t) = t dμ(t)`.
pub fn apply_x_measure(mu: &Measure) -> Measure {
    Measure::normalized(
        mu.atoms.iter().map(|a| Atom::new(a.t, a.mass * a.t)).collect(),
        mu.density.as_ref().map(grid::apply_x),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AtomSpec {
    pub t: f64,
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

/// JSON form `{"atoms": [{"t", "re", "im"}], "density": FunctionSpec?}`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct MeasureSpec {
    #[serde(default)]
    pub atoms: Vec<AtomSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub density: Option<FunctionSpec>,
}

impl MeasureSpec {
    pub fn build(&self, grid: &Grid) -> Result<Measure> {
        let atoms = self
            .atoms
            .iter()
            .map(|a| Atom::new(a.t, Complex64::new(a.re, a.im)))
            .collect();
        let mu = Measure::from_atoms(atoms)?;
        match &self.density {
            Some(spec) => mu.with_density(spec.build(grid)?),
            None => Ok(mu),
        }
    }
}
