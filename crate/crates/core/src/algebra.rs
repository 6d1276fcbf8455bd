//! Checks of the Banach algebra structure: submultiplicativity of the
//! weighted norms and multiplicativity of the Laplace characters.

use num_complex::Complex64;

use crate::error::Result;
use crate::grid::{self, GridFunction};
use crate::measures::{self, Measure};
use crate::report::{CheckReport, Verdict, Witness};
use crate::weights::Weight;

/// `‖f*g‖_ω ≤ ‖f‖_ω ‖g‖_ω (1 + rel_tol)`.
pub fn check_banach(f: &GridFunction, g: &GridFunction, w: &Weight, rel_tol: f64) -> Result<CheckReport> {
    let lhs = grid::weighted_norm(&grid::convolve(f, g)?, w);
    let rhs = grid::weighted_norm(f, w) * grid::weighted_norm(g, w);
    Ok(banach_report("banach", lhs, rhs, rel_tol))
}

/// `‖μ*ν‖_ω ≤ ‖μ‖_ω ‖ν‖_ω (1 + rel_tol)`.
pub fn check_measure_banach(mu: &Measure, nu: &Measure, w: &Weight, rel_tol: f64) -> Result<CheckReport> {
    let lhs = measures::measure_norm(&measures::convolve_measures(mu, nu)?, w);
    let rhs = measures::measure_norm(mu, w) * measures::measure_norm(nu, w);
    Ok(banach_report("measure_banach", lhs, rhs, rel_tol))
}

fn banach_report(name: &str, lhs: f64, rhs: f64, rel_tol: f64) -> CheckReport {
    let ok = lhs <= rhs * (1.0 + rel_tol);
    let ratio = if rhs > 0.0 { lhs / rhs } else if lhs > 0.0 { f64::INFINITY } else { 0.0 };
    let mut r = CheckReport::new(name, if ok { Verdict::Pass } else { Verdict::Fail }, ratio)
        .param("product_norm", lhs)
        .param("norm_product", rhs)
        .param("rel_tol", rel_tol);
    if !ok {
        r.witness = vec![Witness::new(rhs, lhs)];
    }
    r
}

/// `|L(f*g)(z) - L(f)(z) L(g)(z)| ≤ tol` at every `z`.
pub fn check_character(f: &GridFunction, g: &GridFunction, zs: &[Complex64], tol: f64) -> Result<CheckReport> {
    let fg = grid::convolve(f, g)?;
    let mut errors = Vec::with_capacity(zs.len());
    for &z in zs {
        let lhs = grid::laplace(&fg, z)?;
        let rhs = grid::laplace(f, z)? * grid::laplace(g, z)?;
        errors.push((lhs - rhs).norm());
    }
    let worst = errors.iter().copied().fold(0.0, f64::max);
    let ok = worst <= tol;
    let mut r = CheckReport::new("character", if ok { Verdict::Pass } else { Verdict::Fail }, worst)
        .param("z", zs.iter().map(|z| vec![z.re, z.im]).collect::<Vec<_>>())
        .param("errors", errors.clone())
        .param("tol", tol);
    if !ok {
        r.witness = zs
            .iter()
            .zip(&errors)
            .filter(|(_, e)| **e > tol)
            .map(|(z, e)| Witness::pair(z.re, z.im, *e))
            .collect();
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{FunctionSpec, Grid};
    use crate::measures::Atom;

    fn grid() -> Grid {
        Grid::new(1.0 / 128.0, 16.0).unwrap()
    }

    #[test]
    fn boxes_satisfy_banach() {
        let f = FunctionSpec::Box { a: 0.0, b: 1.0, amp: 1.0 }.build(&grid()).unwrap();
        let g = FunctionSpec::Box { a: 0.5, b: 2.0, amp: -2.0 }.build(&grid()).unwrap();
        for w in [Weight::power(3.0).unwrap(), Weight::exponential(1.0).unwrap(), Weight::binary_pow(2.0).unwrap()] {
            assert!(check_banach(&f, &g, &w, 1e-9).unwrap().passed());
        }
    }

    #[test]
    fn non_weight_violates_banach() {
        // (1+t)^-1 is not submultiplicative, so the norm inequality breaks
        let w = Weight::pow(Weight::power(1.0).unwrap(), -1);
        let f = FunctionSpec::Box { a: 0.0, b: 4.0, amp: 1.0 }.build(&grid()).unwrap();
        let r = check_banach(&f, &f, &w, 1e-9).unwrap();
        assert_eq!(r.verdict, Verdict::Fail);
        assert!(r.extremum > 1.0);
    }

    #[test]
    fn measure_banach_with_atoms() {
        let mu = Measure::from_atoms(vec![Atom::real(1.0, 1.0), Atom::real(2.0, -0.5)]).unwrap();
        let nu = Measure::dirac(0.5).unwrap();
        let w = Weight::exp_sqrt(2.0).unwrap();
        assert!(check_measure_banach(&mu, &nu, &w, 1e-12).unwrap().passed());
    }

    #[test]
    fn character_on_boxes() {
        let f = FunctionSpec::Box { a: 0.0, b: 1.0, amp: 1.0 }.build(&grid()).unwrap();
        let zs = [Complex64::new(0.0, 0.0), Complex64::new(1.0, 1.0), Complex64::new(0.0, 5.0)];
        let r = check_character(&f, &f, &zs, 1e-10).unwrap();
        assert!(r.passed(), "{r:?}");
        assert!(check_character(&f, &f, &[Complex64::new(-1.0, 0.0)], 1.0).is_err());
    }
}
