//! Causal left-rectangle convolution `(f*g)(t_j) = h Σ_{i≤j} f(t_i) g(t_{j-i})`.
//!
//! Both routes only touch the nonzero stretch of each input and leave the
//! output exactly zero outside `[α(f) + α(g), end(f) + end(g)]`. The direct
//! route folds the sum symmetrically, pairing `f_i g_{j-i}` with
//! `f_{j-i} g_i`; the FFT route multiplies the two spectra pointwise. Either
//! way `f*g` and `g*f` are bitwise identical.

use std::cell::RefCell;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::GridFunction;
use crate::error::Result;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

/// Above this many sample pairs the FFT route is used.
pub const DIRECT_COST_LIMIT: usize = 1 << 18;

pub fn convolve(f: &GridFunction, g: &GridFunction) -> Result<GridFunction> {
    f.grid.ensure_same(&g.grid)?;
    let (Some(sf), Some(sg)) = (f.support_indices(), g.support_indices()) else {
        return Ok(GridFunction::zeros(f.grid));
    };
    let cost = (sf.1 - sf.0 + 1) * (sg.1 - sg.0 + 1);
    if cost <= DIRECT_COST_LIMIT {
        Ok(direct(f, g, sf, sg))
    } else {
        Ok(fft(f, g, sf, sg))
    }
}

/// Direct summation regardless of size.
pub fn convolve_direct(f: &GridFunction, g: &GridFunction) -> Result<GridFunction> {
    f.grid.ensure_same(&g.grid)?;
    match (f.support_indices(), g.support_indices()) {
        (Some(sf), Some(sg)) => Ok(direct(f, g, sf, sg)),
        _ => Ok(GridFunction::zeros(f.grid)),
    }
}

/// FFT route regardless of size.
pub fn convolve_fft(f: &GridFunction, g: &GridFunction) -> Result<GridFunction> {
    f.grid.ensure_same(&g.grid)?;
    match (f.support_indices(), g.support_indices()) {
        (Some(sf), Some(sg)) => Ok(fft(f, g, sf, sg)),
        _ => Ok(GridFunction::zeros(f.grid)),
    }
}

fn direct(f: &GridFunction, g: &GridFunction, sf: (usize, usize), sg: (usize, usize)) -> GridFunction {
    let n = f.grid.len();
    let h = f.grid.step();
    let real = |x: &GridFunction, s: (usize, usize)| x.samples[s.0..=s.1].iter().all(|z| z.im == 0.0);
    let out = if real(f, sf) && real(g, sg) {
        // work on the window holding both supports, padded so that every
        // output index of the window has a partner index inside it
        let o = sf.0.min(sg.0);
        let len = sf.1.max(sg.1) - o + 1;
        let local = |x: &GridFunction| {
            let mut v: Vec<f64> = x.samples[o..o + len].iter().map(|z| z.re).collect();
            v.resize(2 * len - 1, 0.0);
            v
        };
        let shift = |s: (usize, usize)| (s.0 - o, s.1 - o);
        let conv = folded_real(&local(f), &local(g), shift(sf), shift(sg));
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for (j, v) in conv.into_iter().enumerate() {
            if 2 * o + j >= n {
                break;
            }
            out[2 * o + j] = Complex64::new(v * h, 0.0);
        }
        out
    } else {
        folded(&f.samples, &g.samples, sf, sg)
            .into_iter()
            .map(|v| v * h)
            .collect()
    };
    GridFunction::from_parts_unchecked(f.grid, out)
}

/// Real-valued [`folded`] over contiguous slices: with reversed copies the
/// partner index `j - i` increases with `i`, and four accumulators split the
/// fold by `i mod 4`. The split is symmetric in `f` and `g`.
fn folded_real(fs: &[f64], gs: &[f64], sf: (usize, usize), sg: (usize, usize)) -> Vec<f64> {
    let n = fs.len();
    let frev: Vec<f64> = fs.iter().rev().copied().collect();
    let grev: Vec<f64> = gs.iter().rev().copied().collect();
    let mut out = vec![0.0; n];
    let lo_out = sf.0 + sg.0;
    let hi_out = (sf.1 + sg.1).min(n - 1);
    for j in lo_out..=hi_out {
        let (lo, hi) = fold_range(j, sf, sg);
        let end = (hi + 1).min(j.div_ceil(2)).max(lo);
        // index of f_{j-i} in the reversed copy is c + i
        let c = n - 1 - j;
        let (a, b) = (&fs[lo..end], &gs[lo..end]);
        let (ar, br) = (&grev[c + lo..c + end], &frev[c + lo..c + end]);
        let mut acc = [0.0f64; 4];
        let mut chunks = a.chunks_exact(4).zip(b.chunks_exact(4)).zip(ar.chunks_exact(4).zip(br.chunks_exact(4)));
        for ((x, y), (xr, yr)) in &mut chunks {
            for l in 0..4 {
                acc[l] += x[l] * xr[l] + yr[l] * y[l];
            }
        }
        let tail = a.len() - a.len() % 4;
        let mut rest = 0.0;
        for l in tail..a.len() {
            rest += a[l] * ar[l] + br[l] * b[l];
        }
        let mut total = ((acc[0] + acc[1]) + (acc[2] + acc[3])) + rest;
        if j % 2 == 0 && lo <= j / 2 && j / 2 <= hi {
            total += fs[j / 2] * gs[j / 2];
        }
        out[j] = total;
    }
    out
}

/// Fold window `[lo, hi]` for output index `j`: every `i` with `f_i g_{j-i}`
/// or `f_{j-i} g_i` possibly nonzero. Symmetric in the two supports.
fn fold_range(j: usize, sf: (usize, usize), sg: (usize, usize)) -> (usize, usize) {
    let a_lo = sf.0.max(j.saturating_sub(sg.1));
    let b_lo = sg.0.max(j.saturating_sub(sf.1));
    let a_hi = sf.1.min(j - sg.0.min(j));
    let b_hi = sg.1.min(j - sf.0.min(j));
    (a_lo.min(b_lo), a_hi.max(b_hi))
}

/// `Σ_{i+k=j} f_i g_k`, summed as `Σ_{i<k} (f_i g_k + f_k g_i) + f_m g_m`.
fn folded(fs: &[Complex64], gs: &[Complex64], sf: (usize, usize), sg: (usize, usize)) -> Vec<Complex64> {
    let n = fs.len();
    let zero = Complex64::new(0.0, 0.0);
    let mut out = vec![zero; n];
    let lo_out = sf.0 + sg.0;
    let hi_out = (sf.1 + sg.1).min(n - 1);
    for j in lo_out..=hi_out {
        let (lo, hi) = fold_range(j, sf, sg);
        let mut acc = zero;
        for i in lo..(hi + 1).min(j.div_ceil(2)) {
            let k = j - i;
            acc += fs[i] * gs[k] + fs[k] * gs[i];
        }
        if j % 2 == 0 && lo <= j / 2 && j / 2 <= hi {
            acc += fs[j / 2] * gs[j / 2];
        }
        out[j] = acc;
    }
    out
}

fn fft(f: &GridFunction, g: &GridFunction, sf: (usize, usize), sg: (usize, usize)) -> GridFunction {
    let n = f.grid.len();
    let h = f.grid.step();
    let lf = sf.1 - sf.0 + 1;
    let lg = sg.1 - sg.0 + 1;
    let size = (lf + lg - 1).next_power_of_two();
    let (forward, inverse): (Arc<dyn Fft<f64>>, Arc<dyn Fft<f64>>) = PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        (p.plan_fft_forward(size), p.plan_fft_inverse(size))
    });
    let pad = |src: &[Complex64]| {
        let mut buf = vec![Complex64::new(0.0, 0.0); size];
        buf[..src.len()].copy_from_slice(src);
        buf
    };
    let mut a = pad(&f.samples[sf.0..=sf.1]);
    let mut b = pad(&g.samples[sg.0..=sg.1]);
    forward.process(&mut a);
    forward.process(&mut b);
    for (x, y) in a.iter_mut().zip(&b) {
        *x *= *y;
    }
    inverse.process(&mut a);
    let scale = h / size as f64;
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    let offset = sf.0 + sg.0;
    for (k, z) in a.iter().take(lf + lg - 1).enumerate() {
        let j = offset + k;
        if j >= n {
            break;
        }
        out[j] = z * scale;
    }
    GridFunction::from_parts_unchecked(f.grid, out)
}
