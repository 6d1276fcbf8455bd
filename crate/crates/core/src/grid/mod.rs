//! Uniform grids on `[0, T]` and complex sampled functions on them.

mod conv;
mod ops;

use std::io::{Read, Write};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use conv::{convolve, convolve_direct, convolve_fft, DIRECT_COST_LIMIT};
pub use ops::{
    alpha_support, apply_x, approximate_identity, dual_pairing, laplace, norms_profile,
    sup_norm_over_weight, weighted_norm, DEFAULT_EPS_REL,
};

/// Default step `2^-10`.
pub const DEFAULT_STEP: f64 = 1.0 / 1024.0;
/// Default horizon.
pub const DEFAULT_HORIZON: f64 = 64.0;

/// Nodes `t_j = j·h`, `j = 0, ..., ⌊T/h⌋`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(try_from = "GridRepr", into = "GridRepr")]
pub struct Grid {
    h: f64,
    horizon: f64,
    len: usize,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
struct GridRepr {
    h: f64,
    #[serde(rename = "T")]
    t: f64,
}

impl TryFrom<GridRepr> for Grid {
    type Error = Error;

    fn try_from(r: GridRepr) -> Result<Self> {
        Grid::new(r.h, r.t)
    }
}

impl From<Grid> for GridRepr {
    fn from(g: Grid) -> Self {
        GridRepr { h: g.h, t: g.horizon }
    }
}

impl PartialEq for Grid {
    fn eq(&self, other: &Self) -> bool {
        self.h == other.h && self.len == other.len
    }
}

impl Default for Grid {
    fn default() -> Self {
        Grid::new(DEFAULT_STEP, DEFAULT_HORIZON).expect("default grid is valid")
    }
}

impl Grid {
    pub fn new(h: f64, horizon: f64) -> Result<Self> {
        if !(h > 0.0 && h.is_finite()) || !(horizon >= h && horizon.is_finite()) {
            return Err(Error::Domain(format!("need h > 0 and T ≥ h, got h = {h}, T = {horizon}")));
        }
        let len = (horizon / h + 1e-9).floor() as usize + 1;
        Ok(Self { h, horizon, len })
    }

    pub fn step(&self) -> f64 {
        self.h
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    /// Number of nodes.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn node(&self, j: usize) -> f64 {
        j as f64 * self.h
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len).map(move |j| self.node(j))
    }

    /// Nearest node index to `t` (may exceed the last node).
    pub fn nearest_index(&self, t: f64) -> usize {
        (t / self.h).round() as usize
    }

    pub fn with_step(&self, h: f64) -> Result<Self> {
        Grid::new(h, self.horizon)
    }

    fn ensure_same(&self, other: &Grid) -> Result<()> {
        if self != other {
            return Err(Error::GridMismatch(format!(
                "(h = {}, N = {}) vs (h = {}, N = {})",
                self.h, self.len, other.h, other.len
            )));
        }
        Ok(())
    }
}

/// Rounding and truncation bookkeeping for a shift by a non-node amount.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct ShiftInfo {
    /// `|k·h - s|` for the node offset `k` actually used.
    pub rounding: f64,
    /// `h Σ |f_j|` over samples pushed beyond the horizon.
    pub dropped: f64,
}

/// Complex samples at the nodes of a [`Grid`].
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    grid: Grid,
    samples: Vec<Complex64>,
}

impl GridFunction {
    pub fn new(grid: Grid, samples: Vec<Complex64>) -> Result<Self> {
        if samples.len() != grid.len() {
            return Err(Error::GridMismatch(format!(
                "{} samples for a grid of {} nodes",
                samples.len(),
                grid.len()
            )));
        }
        if let Some(j) = samples.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::Domain(format!("non-finite sample at node {j}")));
        }
        Ok(Self { grid, samples })
    }

    pub fn zeros(grid: Grid) -> Self {
        Self {
            grid,
            samples: vec![Complex64::new(0.0, 0.0); grid.len()],
        }
    }

    pub fn from_real(grid: Grid, values: &[f64]) -> Result<Self> {
        Self::new(grid, values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    /// Sample `f(t_j)` at every node.
    pub fn from_fn(grid: Grid, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        Self::new(grid, grid.nodes().map(f).collect())
    }

    /// Real-valued variant of [`Self::from_fn`].
    pub fn from_real_fn(grid: Grid, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::from_fn(grid, |t| Complex64::new(f(t), 0.0))
    }

    pub(crate) fn from_parts_unchecked(grid: Grid, samples: Vec<Complex64>) -> Self {
        debug_assert_eq!(samples.len(), grid.len());
        Self { grid, samples }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<Complex64> {
        self.samples
    }

    pub fn is_zero(&self) -> bool {
        self.samples.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }

    /// Indices of the first and last nonzero samples.
    pub fn support_indices(&self) -> Option<(usize, usize)> {
        let nz = |z: &Complex64| z.re != 0.0 || z.im != 0.0;
        let first = self.samples.iter().position(nz)?;
        let last = self.samples.iter().rposition(nz)?;
        Some((first, last))
    }

    pub fn max_abs(&self) -> f64 {
        self.samples.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `h Σ |f_j|`.
    pub fn l1_norm(&self) -> f64 {
        self.grid.h * self.samples.iter().map(|z| z.norm()).sum::<f64>() + 0.0
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self::from_parts_unchecked(self.grid, self.samples.iter().map(|z| z * c).collect())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(&self, other: &Self, op: impl Fn(Complex64, Complex64) -> Complex64) -> Result<Self> {
        self.grid.ensure_same(&other.grid)?;
        Ok(Self::from_parts_unchecked(
            self.grid,
            self.samples.iter().zip(&other.samples).map(|(a, b)| op(*a, *b)).collect(),
        ))
    }

    /// Translate right by `s ≥ 0`, rounded to the nearest node; samples
    /// pushed past the horizon are dropped.
    pub fn shift(&self, s: f64) -> Result<(Self, ShiftInfo)> {
        if s.is_nan() || s < 0.0 {
            return Err(Error::Domain(format!("shift must be ≥ 0, got {s}")));
        }
        let k = self.grid.nearest_index(s);
        let n = self.grid.len();
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        let mut dropped = 0.0;
        for (j, z) in self.samples.iter().enumerate() {
            match j.checked_add(k).filter(|&i| i < n) {
                Some(i) => out[i] = *z,
                None => dropped += z.norm(),
            }
        }
        let info = ShiftInfo {
            rounding: (k as f64 * self.grid.h - s).abs(),
            dropped: dropped * self.grid.h,
        };
        Ok((Self::from_parts_unchecked(self.grid, out), info))
    }

    /// Translate left by `s ≥ 0` (node-rounded). Samples with `t_j < s` must vanish.
    pub fn shift_left(&self, s: f64) -> Result<Self> {
        if s.is_nan() || s < 0.0 {
            return Err(Error::Domain(format!("shift must be ≥ 0, got {s}")));
        }
        let k = self.grid.nearest_index(s);
        if let Some((first, _)) = self.support_indices() {
            if first < k {
                return Err(Error::Domain(format!(
                    "left shift by {s} would move support starting at {} below 0",
                    self.grid.node(first)
                )));
            }
        }
        let n = self.grid.len();
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        if k < n {
            out[..n - k].copy_from_slice(&self.samples[k..]);
        }
        Ok(Self::from_parts_unchecked(self.grid, out))
    }

    /// Write `t,re,im` rows with a header.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<(), csv_io::CsvError> {
        csv_io::write(self, w)
    }

    pub fn read_csv<R: Read>(grid: Grid, r: R) -> Result<Self, csv_io::CsvError> {
        csv_io::read(grid, r)
    }
}

fn one() -> f64 {
    1.0
}

/// Built-in function descriptors, tagged by `kind` in JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FunctionSpec {
    /// `amp · 1_[a, b)`
    Box {
        a: f64,
        b: f64,
        #[serde(default = "one")]
        amp: f64,
    },
    /// Smooth bump `amp · exp(1 - 1/(1 - x²))`, `x = (t - center)/radius`.
    Bump {
        center: f64,
        radius: f64,
        #[serde(default = "one")]
        amp: f64,
    },
    /// `amp · e^(-rate t)`
    ExpDecay {
        #[serde(default = "one")]
        rate: f64,
        #[serde(default = "one")]
        amp: f64,
    },
    /// Raw samples, one per node.
    Samples {
        re: Vec<f64>,
        #[serde(default)]
        im: Option<Vec<f64>>,
    },
}

impl FunctionSpec {
    pub fn build(&self, grid: &Grid) -> Result<GridFunction> {
        match self {
            FunctionSpec::Box { a, b, amp } => {
                if !(*a >= 0.0 && b > a) {
                    return Err(Error::Domain(format!("box needs 0 ≤ a < b, got [{a}, {b})")));
                }
                GridFunction::from_real_fn(*grid, |t| if t >= *a && t < *b { *amp } else { 0.0 })
            }
            FunctionSpec::Bump { center, radius, amp } => {
                if !(*radius > 0.0 && *center >= *radius) {
                    return Err(Error::Domain(format!(
                        "bump needs radius > 0 and center ≥ radius, got {center}, {radius}"
                    )));
                }
                GridFunction::from_real_fn(*grid, |t| amp * bump((t - center) / radius))
            }
            FunctionSpec::ExpDecay { rate, amp } => {
                GridFunction::from_real_fn(*grid, |t| amp * (-rate * t).exp())
            }
            FunctionSpec::Samples { re, im } => {
                let im = match im {
                    Some(im) if im.len() != re.len() => {
                        return Err(Error::GridMismatch("re and im lengths differ".into()))
                    }
                    Some(im) => im.clone(),
                    None => vec![0.0; re.len()],
                };
                GridFunction::new(
                    *grid,
                    re.iter().zip(&im).map(|(r, i)| Complex64::new(*r, *i)).collect(),
                )
            }
        }
    }
}

/// `exp(1 - 1/(1 - x²))` on `|x| < 1`, zero elsewhere; peak value 1.
pub fn bump(x: f64) -> f64 {
    if x.abs() < 1.0 {
        (1.0 - 1.0 / (1.0 - x * x)).exp()
    } else {
        0.0
    }
}

pub mod csv_io {
    //! CSV form `t,re,im` of a grid function.

    use std::io::{Read, Write};

    use num_complex::Complex64;

    use super::{Grid, GridFunction};

    #[derive(Debug, thiserror::Error)]
    pub enum CsvError {
        #[error(transparent)]
        Csv(#[from] csv::Error),
        #[error(transparent)]
        Grid(#[from] crate::Error),
        #[error("row {row}: node t = {found} does not match grid node {expected}")]
        Node { row: usize, found: f64, expected: f64 },
    }

    pub(super) fn write<W: Write>(f: &GridFunction, w: W) -> Result<(), CsvError> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["t", "re", "im"])?;
        for (j, z) in f.samples().iter().enumerate() {
            out.serialize((f.grid().node(j), z.re, z.im))?;
        }
        out.flush().map_err(csv::Error::from)?;
        Ok(())
    }

    pub(super) fn read<R: Read>(grid: Grid, r: R) -> Result<GridFunction, CsvError> {
        let mut rdr = csv::Reader::from_reader(r);
        let mut samples = Vec::with_capacity(grid.len());
        for (row, rec) in rdr.deserialize::<(f64, f64, f64)>().enumerate() {
            let (t, re, im) = rec?;
            let expected = grid.node(row);
            if (t - expected).abs() > 1e-9 * expected.max(1.0) {
                return Err(CsvError::Node { row, found: t, expected });
            }
            samples.push(Complex64::new(re, im));
        }
        Ok(GridFunction::new(grid, samples)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g() -> Grid {
        Grid::new(1.0 / 64.0, 8.0).unwrap()
    }

    #[test]
    fn grid_shape() {
        let d = Grid::default();
        assert_eq!(d.len(), 65537);
        assert_eq!(g().len(), 513);
        assert!(Grid::new(0.0, 1.0).is_err());
        assert!(Grid::new(1.0, 0.5).is_err());
    }

    #[test]
    fn box_and_bump_descriptors() {
        let f = FunctionSpec::Box { a: 1.0, b: 2.0, amp: 1.0 }.build(&g()).unwrap();
        assert_eq!(f.support_indices(), Some((64, 127)));
        let b = FunctionSpec::Bump { center: 2.0, radius: 1.0, amp: 1.0 }.build(&g()).unwrap();
        assert_eq!(b.samples()[128].re, 1.0);
        assert_eq!(b.support_indices(), Some((65, 191)));
        let spec: FunctionSpec = serde_json::from_str(r#"{"kind":"box","a":0,"b":1}"#).unwrap();
        assert_eq!(spec, FunctionSpec::Box { a: 0.0, b: 1.0, amp: 1.0 });
        assert!(FunctionSpec::Samples { re: vec![1.0; 3], im: None }.build(&g()).is_err());
    }

    #[test]
    fn rejects_non_finite_samples() {
        let mut v = vec![Complex64::new(0.0, 0.0); g().len()];
        v[3] = Complex64::new(f64::NAN, 0.0);
        assert!(GridFunction::new(g(), v).is_err());
    }

    #[test]
    fn shifts_track_rounding_and_truncation() {
        let f = FunctionSpec::Box { a: 0.0, b: 1.0, amp: 1.0 }.build(&g()).unwrap();
        let (s, info) = f.shift(7.5).unwrap();
        assert_eq!(s.support_indices(), Some((480, 512)));
        assert!((info.dropped - 31.0 / 64.0).abs() < 1e-15);
        let (_, info) = f.shift(0.01).unwrap();
        assert!((info.rounding - (0.01f64 - 1.0 / 64.0).abs()).abs() < 1e-15);
        let back = s.shift_left(7.5).unwrap();
        assert_eq!(back.support_indices(), Some((0, 32)));
        assert!(f.shift(1.0).unwrap().0.shift_left(2.0).is_err());
    }

    #[test]
    fn csv_round_trip() {
        let f = FunctionSpec::Bump { center: 1.0, radius: 0.5, amp: 2.0 }.build(&g()).unwrap();
        let mut buf = Vec::new();
        f.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("t,re,im\n0.0,0.0,0.0\n"));
        let back = GridFunction::read_csv(g(), buf.as_slice()).unwrap();
        assert_eq!(back, f);
        let other = Grid::new(1.0 / 32.0, 16.0).unwrap();
        assert!(GridFunction::read_csv(other, buf.as_slice()).is_err());
    }
}
