//! End-to-end acceptance criteria, one printed PASS/FAIL line each.
//!
//! Run with `cargo test -p wconv-cli --test acceptance -- --nocapture`.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wconv_cli::checks::{random_function, random_measure};
use wconv_cli::{list_builtins, run_config, ExperimentConfig, DEFAULT_CONFIG};
use wconv_core::algebra::{check_banach, check_character, check_measure_banach};
use wconv_core::family::{check_condition_c, check_wein, check_weco};
use wconv_core::grid::{self, approximate_identity, convolve, laplace, weighted_norm};
use wconv_core::measures::convolve_measures;
use wconv_core::operators::{
    check_alpha_inequality, check_approximate_identity, check_dilation_norm_identity, check_semigroup_action,
    check_titchmarsh, derivation_on_dirac, endo_ai_check, TITCHMARSH_EPS_REL,
};
use wconv_core::weights::{check_integer_subadditive, check_subadditive_extension};
use wconv_core::{
    Atom, Complex64, DerivationOp, DilationEndo, FunctionSpec, Grid, GridFunction, IntegerSubadditive, Measure,
    Weight, WeightFamily,
};

/// `(a, b, true)` is the box on `[a, b)`, `(center, radius, false)` a bump.
type Shape = (f64, f64, bool);
type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn boxf(grid: &Grid, a: f64, b: f64) -> GridFunction {
    FunctionSpec::Box { a, b, amp: 1.0 }.build(grid).unwrap()
}

fn bump(grid: &Grid, center: f64, radius: f64) -> GridFunction {
    FunctionSpec::Bump { center, radius, amp: 1.0 }.build(grid).unwrap()
}

fn popcount_extension(x: f64) -> f64 {
    let m = x.floor();
    let theta = x - m;
    let lo = (m as u64).count_ones() as f64;
    let hi = (m as u64 + 1).count_ones() as f64;
    (1.0 - theta) * lo + theta * hi
}

fn popcount_subadditivity() -> Outcome {
    let max = 4096u64;
    let report = check_integer_subadditive(&IntegerSubadditive::popcount(2 * max), max).unwrap();
    let mut oracle = 0u64;
    for m in 0..=max {
        for n in 0..=max {
            oracle += u64::from((m + n).count_ones() > m.count_ones() + n.count_ones());
        }
    }
    let violations = report.parameters["violations"].as_u64().unwrap();
    outcome(
        report.passed() && violations == 0 && oracle == 0,
        format!("pairs 0..={max}, violations {violations}, oracle violations {oracle}"),
    )
}

fn subadditive_extension() -> Outcome {
    let (step, x_max, tol) = (1.0 / 64.0, 64.0, 1e-12);
    let report = check_subadditive_extension(&IntegerSubadditive::popcount(65), step, x_max, tol).unwrap();
    let nodes = (x_max / step) as usize;
    let mut oracle = 0usize;
    for i in 0..=nodes {
        for j in 0..=nodes - i {
            let (x, y) = (i as f64 * step, j as f64 * step);
            if popcount_extension(x + y) > popcount_extension(x) + popcount_extension(y) + tol {
                oracle += 1;
            }
        }
    }
    outcome(
        report.passed() && oracle == 0,
        format!("step 1/64 up to {x_max}, worst excess {:e}, oracle violations {oracle}", report.extremum),
    )
}

fn binary_counterexample() -> Outcome {
    let fam = WeightFamily::binary_pow_n(6);
    let mut ok = true;
    let mut notes = Vec::new();
    for n in [1, 2] {
        let r = check_condition_c(&fam, n, 1024.0, 1024.0).unwrap();
        let w = &r.witness[0];
        let at_mersenne = (w.point + 1.0).log2().fract() == 0.0 && w.point > 0.0;
        ok &= r.passed() && r.extremum == 1024.0 && at_mersenne;
        notes.push(format!("(c) n={n}: sup {} at t={}", r.extremum, w.point));
    }
    let r = check_wein(&fam, 1, 1024.0, 2.0).unwrap();
    ok &= r.verdict == wconv_core::Verdict::Fail && r.witness.len() == 5;
    for w in &r.witness {
        let m = w.pair.unwrap() as u32;
        let s = w.point;
        let dyadic = s > 0.0 && s.log2().fract() == 0.0;
        let exact = 2f64.powi(m as i32 - 1);
        let oracle = 2f64.powi(((m - 1) * (s as u64).count_ones()) as i32);
        ok &= dyadic && w.value == exact && oracle == exact;
    }
    notes.push(format!(
        "ratio divergence n=1 {}: {}",
        r.verdict,
        r.witness
            .iter()
            .map(|w| format!("m={} s={} ratio={}", w.pair.unwrap(), w.point, w.value))
            .collect::<Vec<_>>()
            .join(", ")
    ));
    outcome(ok, notes.join("; "))
}

fn derivation_dichotomy() -> Outcome {
    let power = WeightFamily::power_n(9);
    let mut ok = true;
    let mut worst_bound: f64 = 0.0;
    for n in 1..=8 {
        let r = check_weco(&power, n, 1024.0, 9).unwrap();
        let bound = r.bound.unwrap_or(f64::INFINITY);
        worst_bound = worst_bound.max(bound);
        ok &= r.passed() && r.selected_m == Some(n + 1) && bound <= 1.0 + 1e-12;
    }
    let frac = WeightFamily::frac_power(8);
    let r = check_weco(&frac, 2, 1024.0, 8).unwrap();
    ok &= r.verdict == wconv_core::Verdict::Fail && r.witness.len() == 6;
    let mut least_growth = f64::INFINITY;
    for w in &r.witness {
        let m = w.pair.unwrap();
        // t (1+t)^(1/m - 1/2) increases, so its sup over [0, T] sits at T
        let q = |t: f64| t * (1.0 + t).powf(1.0 / m - 0.5);
        let oracle = q(2048.0) / q(1024.0);
        least_growth = least_growth.min(w.value);
        ok &= w.value >= 1.5 && (w.value - oracle).abs() <= 1e-9 * oracle;
    }
    outcome(
        ok,
        format!(
            "(1+t)^n: m=n+1 for n<=8, largest bound {worst_bound}; (1+t)^(1-1/n), n=2: {} with least doubling growth {least_growth:.4}",
            r.verdict
        ),
    )
}

fn dilation_norm_identity() -> Outcome {
    let grid = Grid::default();
    let mut ok = true;
    let mut worst: f64 = 0.0;
    for f in [boxf(&grid, 0.0, 1.0), bump(&grid, 1.0, 0.5)] {
        for a in [0.5, 1.0, 2.0] {
            let r = check_dilation_norm_identity(a, &f, 1e-3).unwrap();
            worst = worst.max(r.extremum);
            ok &= r.passed();
        }
    }
    outcome(ok, format!("worst relative gap {worst:.3e} (tol 1e-3)"))
}

fn semigroup_identification() -> Outcome {
    let grid = Grid::default();
    let phi = DilationEndo::new(2.0).unwrap();
    let mut ok = true;
    let mut worst: f64 = 0.0;
    for f in [boxf(&grid, 0.0, 1.0), bump(&grid, 1.0, 0.5)] {
        for s in [0.5, 1.0, 2.0] {
            let r = check_semigroup_action(&phi, &f, s, 8.0).unwrap();
            worst = worst.max(r.parameters["gap_over_h_norm"].as_f64().unwrap());
            ok &= r.passed();
        }
    }
    let mut exact = true;
    for s in [0.5, 1.0, 2.0] {
        for t in [0.5, 1.0, 2.0] {
            let lhs = convolve_measures(&phi.semigroup(s).unwrap(), &phi.semigroup(t).unwrap()).unwrap();
            exact &= lhs == phi.semigroup(s + t).unwrap();
        }
    }
    outcome(ok && exact, format!("worst gap {worst:.3} h·‖f‖ (tol 8); atom semigroup exact: {exact}"))
}

fn leibniz_residual() -> Outcome {
    let steps = [1.0 / 256.0, 1.0 / 512.0, 1.0 / 1024.0, 1.0 / 2048.0];
    let w = Weight::power(2.0).unwrap();
    let mut constants = Vec::new();
    let mut residuals = Vec::new();
    for h in steps {
        let grid = Grid::new(h, 8.0).unwrap();
        let mu = Measure::from_atoms(vec![Atom::real(0.5, 1.0)])
            .unwrap()
            .with_density(boxf(&grid, 0.0, 0.25))
            .unwrap();
        let d = DerivationOp::new(mu);
        let r = d.leibniz_residual(&boxf(&grid, 0.0, 1.0), &boxf(&grid, 0.5, 2.0), &w).unwrap();
        residuals.push(r);
        constants.push(r / h);
    }
    // the criterion is read at the default step, h = 2^-10 -> 2^-11
    let (a, b) = (constants[2], constants[3]);
    let stable = (a == 0.0 && b == 0.0) || (a > 0.0 && b > 0.0 && a.max(b) <= 3.0 * a.min(b));
    let roundoff = residuals.iter().all(|r| *r <= 1e-12);
    outcome(
        stable && roundoff,
        format!(
            "C(2^-11)/C(2^-10) = {:.2}; sweep h = 2^-8..2^-11: residuals {:?}, C = residual/h {:?}",
            b / a,
            residuals.iter().map(|r| format!("{r:.2e}")).collect::<Vec<_>>(),
            constants.iter().map(|c| format!("{c:.2e}")).collect::<Vec<_>>()
        ),
    )
}

fn derivation_symbol() -> Outcome {
    let mu = Measure::from_atoms(vec![Atom::real(0.0, 1.5), Atom::real(0.5, -2.0), Atom::real(1.25, 0.75)]).unwrap();
    let d = DerivationOp::new(mu.clone());
    let mut exact = true;
    for t in [0.0, 0.25, 1.0, 3.0] {
        let oracle = Measure::from_atoms(
            mu.atoms().iter().map(|a| Atom::new(a.t + t, a.mass * t)).collect(),
        )
        .unwrap();
        exact &= derivation_on_dirac(&d, t).unwrap() == oracle;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let atoms = |rng: &mut ChaCha8Rng| -> Measure {
        let count = rng.random_range(1..5);
        Measure::from_atoms(
            (0..count)
                .map(|_| Atom::real(rng.random_range(0..32) as f64 / 8.0, rng.random_range(-2.0..2.0)))
                .collect(),
        )
        .unwrap()
    };
    let mut alpha_ok = 0;
    for _ in 0..20 {
        let d = DerivationOp::new(atoms(&mut rng));
        let nu = atoms(&mut rng);
        let r = check_alpha_inequality(&d, &nu).unwrap();
        let image = d.extend(&nu).unwrap();
        let lowest_in = nu.atoms()[0].t;
        let oracle = image.atoms().first().is_none_or(|a| a.t >= lowest_in);
        alpha_ok += usize::from(r.passed() && oracle);
    }
    outcome(
        exact && alpha_ok == 20,
        format!("symbol exact at t in {{0, 0.25, 1, 3}}: {exact}; α inequality {alpha_ok}/20"),
    )
}

fn box_transform(a: f64, b: f64, z: Complex64) -> Complex64 {
    if z == Complex64::new(0.0, 0.0) {
        Complex64::new(b - a, 0.0)
    } else {
        ((-z * a).exp() - (-z * b).exp()) / z
    }
}

fn character_property() -> Outcome {
    let zs = [
        Complex64::new(0.0, 0.0),
        Complex64::new(1.0, 0.0),
        Complex64::new(1.0, 1.0),
        Complex64::new(0.0, 5.0),
    ];
    let ((a1, b1), (a2, b2)) = ((0.0, 1.0), (0.5, 2.0));
    let mut discrete_ok = true;
    let mut errors = Vec::new();
    for h in [1.0 / 1024.0, 1.0 / 2048.0] {
        let grid = Grid::new(h, 8.0).unwrap();
        let (f, g) = (boxf(&grid, a1, b1), boxf(&grid, a2, b2));
        discrete_ok &= check_character(&f, &g, &zs, 1e-2).unwrap().passed();
        let fg = convolve(&f, &g).unwrap();
        errors.push(
            zs.iter()
                .map(|&z| (laplace(&fg, z).unwrap() - box_transform(a1, b1, z) * box_transform(a2, b2, z)).norm())
                .collect::<Vec<_>>(),
        );
    }
    let coarse_ok = errors[0].iter().all(|e| *e <= 1e-2);
    // halving, up to 20% slack on the ratio; an exact zero stays zero
    // halving, up to 20% slack on the ratio; errors that vanish in exact
    // arithmetic (z = 0 on node-aligned boxes) stay at roundoff
    let floor = 1e-12;
    let halves = errors[0]
        .iter()
        .zip(&errors[1])
        .all(|(e1, e2)| (*e2 <= 0.6 * e1 && *e2 >= 0.4 * e1) || (*e1 <= floor && *e2 <= floor));
    outcome(
        discrete_ok && coarse_ok && halves,
        format!(
            "error vs exact box transforms at h=2^-10 {:?}, at 2^-11 {:?}",
            errors[0].iter().map(|e| format!("{e:.2e}")).collect::<Vec<_>>(),
            errors[1].iter().map(|e| format!("{e:.2e}")).collect::<Vec<_>>()
        ),
    )
}

fn banach_inequalities() -> Outcome {
    let grid = Grid::default();
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let reach = grid.horizon() / 2.0;
    let mut checked = 0usize;
    let mut failures = 0usize;
    let mut worst: f64 = 0.0;
    for kind in list_builtins().weight_kinds {
        let w: Weight = serde_json::from_value(kind.example).unwrap();
        for _ in 0..100 {
            let f = random_function(&grid, reach, &mut rng).unwrap();
            let g = random_function(&grid, reach, &mut rng).unwrap();
            let mu = random_measure(&grid, reach, &mut rng).unwrap();
            let nu = random_measure(&grid, reach, &mut rng).unwrap();
            for r in [
                check_banach(&f, &g, &w, 1e-6).unwrap(),
                check_measure_banach(&mu, &nu, &w, 1e-6).unwrap(),
            ] {
                checked += 1;
                failures += usize::from(!r.passed());
                worst = worst.max(r.extremum);
            }
        }
    }
    outcome(
        failures == 0,
        format!("{checked} function and measure pairs, {failures} failures, largest ratio {worst:.6}"),
    )
}

fn approximate_identity_check() -> Outcome {
    let grid = Grid::default();
    let h = grid.step();
    let fam = WeightFamily::power_n(5);
    let f = bump(&grid, 1.0, 0.5);
    let ks: Vec<u32> = (4..=10).map(|e| 1 << e).collect();
    let endo_ks: Vec<u32> = (4..=9).map(|e| 1 << e).collect();
    let phi = DilationEndo::new(2.0).unwrap();
    let mut ok = true;
    let mut last_norms = Vec::new();
    let mut last_residuals = Vec::new();
    for n in 1..=4 {
        let r = check_approximate_identity(&fam, &f, &ks, n, 1e-3).unwrap();
        let norms: Vec<f64> = serde_json::from_value(r.parameters["identity_norms"].clone()).unwrap();
        let oracle: Vec<f64> = ks
            .iter()
            .map(|&k| {
                let nodes = (1.0 / (k as f64 * h)).round() as usize;
                (0..nodes).map(|j| h * k as f64 * (1.0 + j as f64 * h).powi(n as i32)).sum()
            })
            .collect();
        let agree = norms.iter().zip(&oracle).all(|(a, b)| (a - b).abs() <= 1e-12 * b);
        let w = fam.member(n).unwrap();
        let residual = weighted_norm(
            &convolve(&approximate_identity(1 << 10, &grid).unwrap(), &f).unwrap().sub(&f).unwrap(),
            &w,
        );
        let endo = endo_ai_check(&phi, &fam, &f, &endo_ks, n, 1e-3).unwrap();
        ok &= r.passed() && agree && residual < 1e-3 && endo.passed();
        last_norms.push(*norms.last().unwrap());
        last_residuals.push(endo.extremum);
    }
    outcome(
        ok,
        format!(
            "(1+t)^n, n<=4: ‖e_1024‖_n {last_norms:?}; dilated (c=2, k<=2^9) final residuals {last_residuals:?}"
        ),
    )
}

fn titchmarsh() -> Outcome {
    let grid = Grid::default();
    let h = grid.step();
    let cases: [(Shape, Shape); 10] = [
        ((0.0, 1.0, true), (0.0, 1.0, true)),
        ((0.25, 1.0, true), (0.5, 2.0, true)),
        ((1.0, 1.5, true), (3.0, 4.0, true)),
        ((0.1, 0.7, true), (2.3, 2.9, true)),
        ((1.0, 0.5, false), (1.0, 0.5, false)),
        ((2.0, 0.25, false), (0.75, 0.5, false)),
        ((0.3, 1.3, true), (1.5, 0.5, false)),
        ((1.7, 0.3, false), (4.0, 6.0, true)),
        ((5.0, 1.0, false), (0.125, 0.25, true)),
        ((3.3, 0.7, false), (2.2, 1.1, false)),
    ];
    let build = |(x, y, is_box): Shape| {
        if is_box {
            (boxf(&grid, x, y), x)
        } else {
            (bump(&grid, x, y), x - y)
        }
    };
    let mut passed = 0;
    let mut worst: f64 = 0.0;
    for (a, b) in cases {
        let ((f, af), (g, ag)) = (build(a), build(b));
        let r = check_titchmarsh(&f, &g, TITCHMARSH_EPS_REL).unwrap();
        // computed supports start at most two steps past the analytic ones:
        // one for the grid, one for bump tails that underflow to zero
        let near = |f: &GridFunction, truth: f64| {
            let a = grid::alpha_support(f, TITCHMARSH_EPS_REL).unwrap();
            a >= truth - 1e-12 && a <= truth + 2.0 * h
        };
        worst = worst.max(r.extremum);
        passed += usize::from(r.passed() && near(&f, af) && near(&g, ag));
    }
    outcome(passed == 10, format!("{passed}/10 cases, worst gap {:.2} h", worst / h))
}

fn determinism() -> Outcome {
    let mut cfg = ExperimentConfig::from_json(DEFAULT_CONFIG).unwrap();
    cfg.seed = 42;
    let first = run_config(&cfg).unwrap();
    let second = run_config(&cfg).unwrap();
    let (a, b) = (first.to_json(), second.to_json());
    outcome(
        a == b && first.passed(),
        format!("{} suites, {} bytes, identical: {}, aggregate {:?}", first.suites.len(), a.len(), a == b, first.aggregate),
    )
}

#[test]
fn acceptance_criteria() {
    let criteria: [Criterion; 13] = [
        ("popcount subadditivity", popcount_subadditivity),
        ("subadditive extension", subadditive_extension),
        ("binary-digit counterexample", binary_counterexample),
        ("derivation dichotomy", derivation_dichotomy),
        ("dilation norm identity", dilation_norm_identity),
        ("semigroup identification", semigroup_identification),
        ("Leibniz residual", leibniz_residual),
        ("derivation symbol", derivation_symbol),
        ("character property", character_property),
        ("Banach inequalities", banach_inequalities),
        ("approximate identity", approximate_identity_check),
        ("Titchmarsh", titchmarsh),
        ("determinism", determinism),
    ];
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = run();
        let label = if o.pass { "PASS" } else { "FAIL" };
        println!(
            "{label} criterion {:>2} {name} ({:.2}s): {}",
            i + 1,
            start.elapsed().as_secs_f64(),
            o.detail
        );
        if !o.pass {
            failed.push(i + 1);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
