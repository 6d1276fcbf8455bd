//! Sample sets for finite-horizon probes of asymptotic conditions.
//!
//! Every set is the sorted, deduplicated union of a uniform grid, a
//! geometric grid `2^(j/32)`, and the dyadic integers `2^k - 1, 2^k, 2^k + 1`.
//! The dyadic points carry the counterexamples built from binary digit
//! counts, so they are always included.

const UNIFORM_POINTS: usize = 2048;
const GEOMETRIC_STEPS_PER_OCTAVE: i32 = 32;
const GEOMETRIC_FLOOR_EXP: i32 = -12;

/// Sample points in `[lo, hi]`, both endpoints included.
pub fn sample_points(lo: f64, hi: f64) -> Vec<f64> {
    assert!(lo >= 0.0 && hi >= lo, "invalid sampling window [{lo}, {hi}]");
    let mut pts = Vec::with_capacity(UNIFORM_POINTS + 1024);
    pts.push(lo);
    pts.push(hi);
    if hi > lo {
        let step = (hi - lo) / UNIFORM_POINTS as f64;
        pts.extend((1..UNIFORM_POINTS).map(|i| lo + step * i as f64));
    }
    let mut j = GEOMETRIC_FLOOR_EXP * GEOMETRIC_STEPS_PER_OCTAVE;
    loop {
        let t = (j as f64 / GEOMETRIC_STEPS_PER_OCTAVE as f64).exp2();
        if t > hi {
            break;
        }
        if t >= lo {
            pts.push(t);
        }
        j += 1;
    }
    pts.extend(dyadic_points(lo, hi));
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts
}

/// The integers `2^k - 1`, `2^k`, `2^k + 1` (k ≥ 0) inside `[lo, hi]`.
pub fn dyadic_points(lo: f64, hi: f64) -> Vec<f64> {
    let mut out = Vec::new();
    let mut k = 0;
    while k < 1000 {
        let p = (k as f64).exp2();
        if p - 1.0 > hi {
            break;
        }
        for t in [p - 1.0, p, p + 1.0] {
            if t >= lo && t <= hi {
                out.push(t);
            }
        }
        k += 1;
    }
    out.sort_by(f64::total_cmp);
    out.dedup();
    out
}

/// Argmax / argmin helpers over `(point, value)` sequences; ties keep the
/// first point in iteration order.
pub(crate) fn arg_extreme<I>(values: I, max: bool) -> Option<(f64, f64)>
where
    I: IntoIterator<Item = (f64, f64)>,
{
    let mut best: Option<(f64, f64)> = None;
    for (t, v) in values {
        best = match best {
            None => Some((t, v)),
            Some((bt, bv)) => {
                let better = if max { v > bv } else { v < bv };
                if better {
                    Some((t, v))
                } else {
                    Some((bt, bv))
                }
            }
        };
    }
    best
}
