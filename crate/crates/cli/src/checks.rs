//! Registry of the checks a suite can name, with typed parameters.

use std::fmt;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use wconv_core::operators::{self, TITCHMARSH_EPS_REL};
use wconv_core::weights::{self, IntegerSubadditive};
use wconv_core::{algebra, family, CheckReport, Complex64, DerivationOp, DilationEndo, FunctionSpec, Grid, GridFunction};

use crate::config::Objects;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TargetKind {
    Weight,
    Family,
    Function,
    Measure,
}

impl fmt::Display for TargetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TargetKind::Weight => "weight",
            TargetKind::Family => "family",
            TargetKind::Function => "function",
            TargetKind::Measure => "measure",
        })
    }
}

pub struct CheckDef {
    pub name: &'static str,
    pub targets: &'static [TargetKind],
    pub description: &'static str,
    pub parse: fn(&Map<String, Value>) -> Result<Job, String>,
    pub defaults: fn() -> Value,
}

fn parse<P: DeserializeOwned>(m: &Map<String, Value>) -> Result<P, String> {
    serde_json::from_value(Value::Object(m.clone())).map_err(|e| e.to_string())
}

fn defaults<P: Default + Serialize>() -> Value {
    serde_json::to_value(P::default()).expect("parameter structs serialize")
}

macro_rules! params {
    ($(#[$doc:meta])* $name:ident { $($field:ident : $ty:ty = $default:expr),* $(,)? }) => {
        $(#[$doc])*
        #[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
        #[serde(default, deny_unknown_fields)]
        pub struct $name {
            $(pub $field: $ty),*
        }

        impl Default for $name {
            fn default() -> Self {
                Self { $($field: $default),* }
            }
        }
    };
}

params!(SubmultiplicativeParams { pairs: usize = 256, range: f64 = 1000.0, rel_tol: f64 = 1e-12 });
params!(IntegerSubadditiveParams { max: u64 = 4096 });
params!(SubadditiveExtensionParams { step: f64 = 1.0 / 64.0, x_max: f64 = 64.0, tol: f64 = 1e-12 });
params!(RootLimitParams { horizon: f64 = 1e6, window: f64 = 1e3, tol: f64 = 1e-2 });
params!(TendsToInfinityParams { horizon: f64 = 1e4, thresholds: Vec<f64> = vec![10.0, 100.0] });
params!(MonotoneParams { horizon: f64 = 1024.0 });
params!(ConditionCParams { n: usize = 1, horizon: f64 = 1024.0, threshold: f64 = 1024.0 });
params!(ConditionDParams { t: f64 = 1.0, threshold: f64 = 100.0 });
params!(WeinParams { n: usize = 1, horizon: f64 = 1024.0, growth_threshold: f64 = 2.0 });
params!(
    /// `m_max` defaults to the family's `n_max`.
    WecoParams { n: usize = 1, horizon: f64 = 1024.0, m_max: Option<usize> = None }
);
params!(WecoPParams { n: usize = 1, p: f64 = 0.5, horizon: f64 = 1024.0, m_max: Option<usize> = None });
params!(ConvergenceFactorParams {
    n: usize = 1,
    m: usize = 2,
    r: f64 = 1.0,
    horizon: f64 = 1024.0,
    tol: f64 = 1e-3,
});
params!(BanachParams { rel_tol: f64 = 1e-6 });
params!(
    /// Seeded random box/bump pairs whose supports sum below the horizon.
    RandomBanachParams { pairs: usize = 100, rel_tol: f64 = 1e-6, measures: bool = true }
);
params!(CharacterParams {
    z: Vec<[f64; 2]> = vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 5.0]],
    tol: f64 = 1e-2,
});
params!(LeibnizParams { tol: f64 = 1e-9 });
params!(AlphaInequalityParams {});
params!(GhahramaniParams { horizon: f64 = 1024.0 });
params!(DerivationContinuityParams { n: usize = 1, m: usize = 2, horizon: f64 = 1024.0 });
params!(DilationNormParams { a: f64 = 1.0, tol: f64 = 1e-3 });
params!(SemigroupActionParams { c: f64 = 2.0, s: f64 = 1.0, tol_steps: f64 = 8.0 });
params!(ApproximateIdentityParams { n: usize = 1, k: Vec<u32> = dyadic_ks(4, 10), tol: f64 = 1e-3 });
params!(EndoAiParams { c: f64 = 2.0, n: usize = 1, k: Vec<u32> = dyadic_ks(4, 9), tol: f64 = 1e-3 });
params!(TitchmarshParams { eps_rel: f64 = TITCHMARSH_EPS_REL });

fn dyadic_ks(lo: u32, hi: u32) -> Vec<u32> {
    (lo..=hi).map(|e| 1 << e).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub enum Job {
    Submultiplicative(SubmultiplicativeParams),
    IntegerSubadditive(IntegerSubadditiveParams),
    SubadditiveExtension(SubadditiveExtensionParams),
    RootLimit(RootLimitParams),
    TendsToInfinity(TendsToInfinityParams),
    Monotone(MonotoneParams),
    ConditionC(ConditionCParams),
    ConditionD(ConditionDParams),
    Wein(WeinParams),
    Weco(WecoParams),
    WecoP(WecoPParams),
    ConvergenceFactor(ConvergenceFactorParams),
    Banach(BanachParams),
    MeasureBanach(BanachParams),
    RandomBanach(RandomBanachParams),
    Character(CharacterParams),
    Leibniz(LeibnizParams),
    AlphaInequality(AlphaInequalityParams),
    Ghahramani(GhahramaniParams),
    DerivationContinuity(DerivationContinuityParams),
    DilationNormIdentity(DilationNormParams),
    SemigroupAction(SemigroupActionParams),
    ApproximateIdentity(ApproximateIdentityParams),
    EndoAi(EndoAiParams),
    Titchmarsh(TitchmarshParams),
}

macro_rules! registry {
    ($($name:literal => $variant:ident($params:ty), [$($kind:ident),*], $desc:literal;)*) => {
        /// Every check, in catalog order.
        pub fn catalog() -> Vec<CheckDef> {
            vec![$(CheckDef {
                name: $name,
                targets: &[$(TargetKind::$kind),*],
                description: $desc,
                parse: |m| parse::<$params>(m).map(Job::$variant),
                defaults: defaults::<$params>,
            }),*]
        }
    };
}

registry! {
    "submultiplicative" => Submultiplicative(SubmultiplicativeParams), [Weight],
        "w(s+t) <= w(s) w(t) on seeded random pairs in [0, range]";
    "integer_subadditive" => IntegerSubadditive(IntegerSubadditiveParams), [],
        "exhaustive popcount subadditivity for 0 <= m, n <= max";
    "subadditive_extension" => SubadditiveExtension(SubadditiveExtensionParams), [],
        "subadditivity of the piecewise-linear popcount extension on a grid";
    "root_limit" => RootLimit(RootLimitParams), [Weight],
        "w(t)^(1/t) within tol of 1 on [horizon - window, horizon]";
    "tends_to_infinity" => TendsToInfinity(TendsToInfinityParams), [Weight],
        "w eventually above every threshold on [0, horizon]";
    "monotone" => Monotone(MonotoneParams), [Family],
        "w_n <= w_(n+1) on sampled points";
    "condition_c" => ConditionC(ConditionCParams), [Family],
        "sup of w_(n+1)/w_n above threshold";
    "condition_d" => ConditionD(ConditionDParams), [Family],
        "w_n(t) nondecreasing in n and above threshold";
    "wein" => Wein(WeinParams), [Family],
        "least m with w_m/w_n growing without bound";
    "weco" => Weco(WecoParams), [Family],
        "least m with t w_n(t)/w_m(t) bounded";
    "weco_p" => WecoP(WecoPParams), [Family],
        "least m with t^p w_n(t)/w_m(t) bounded";
    "convergence_factor" => ConvergenceFactor(ConvergenceFactorParams), [Family],
        "w_n(r+s)/w_m(s) below tol near the horizon";
    "banach" => Banach(BanachParams), [Weight, Function, Function],
        "|f*g|_w <= |f|_w |g|_w";
    "measure_banach" => MeasureBanach(BanachParams), [Weight, Measure, Measure],
        "|mu*nu|_w <= |mu|_w |nu|_w";
    "random_banach" => RandomBanach(RandomBanachParams), [Weight],
        "Banach inequalities on seeded random box/bump pairs";
    "character" => Character(CharacterParams), [Function, Function],
        "|L(f*g)(z) - L(f)(z) L(g)(z)| <= tol";
    "leibniz" => Leibniz(LeibnizParams), [Measure, Function, Function, Weight],
        "|D(f*g) - D(f)*g - f*D(g)|_w <= tol for D(f) = (Xf)*mu";
    "alpha_inequality" => AlphaInequality(AlphaInequalityParams), [Measure, Measure],
        "alpha(D(nu)) >= alpha(nu) for the derivation with symbol mu";
    "ghahramani_bound" => Ghahramani(GhahramaniParams), [Measure, Weight],
        "sup_t (t/w(t)) int w(t+s) d|mu|(s) finite";
    "derivation_continuity" => DerivationContinuity(DerivationContinuityParams), [Measure, Family],
        "continuity constant of D_mu from L1(w_m) to L1(w_n) finite";
    "dilation_norm_identity" => DilationNormIdentity(DilationNormParams), [Function],
        "|Phi(f)|_(exp_sqrt a) = |f|_(exp_sqrt a/sqrt2) for Phi(f)(t) = 2 f(2t)";
    "semigroup_action" => SemigroupAction(SemigroupActionParams), [Function],
        "Phi(delta_s * f) = delta_(s/c) * Phi(f) within tol_steps grid steps";
    "approximate_identity" => ApproximateIdentity(ApproximateIdentityParams), [Family, Function],
        "|e_k|_n -> 1 and e_k * f -> f in L1(w_n)";
    "endo_approximate_identity" => EndoAi(EndoAiParams), [Family, Function],
        "Phi(e_k) * f -> f in L1(w_n) for the dilation by c";
    "titchmarsh" => Titchmarsh(TitchmarshParams), [Function, Function],
        "alpha(f*g) = alpha(f) + alpha(g) within 2h";
}

pub fn find(name: &str) -> Option<CheckDef> {
    catalog().into_iter().find(|d| d.name == name)
}

/// A random box or bump supported in `[0, reach)`.
pub fn random_function(grid: &Grid, reach: f64, rng: &mut ChaCha8Rng) -> wconv_core::Result<GridFunction> {
    let h = grid.step();
    let amp = rng.random_range(-2.0..2.0);
    let spec = if rng.random_bool(0.5) {
        let a = (rng.random_range(0.0..reach * 0.75) / h).floor() * h;
        let b = (a + rng.random_range(h..reach * 0.25)).min(reach);
        FunctionSpec::Box { a, b, amp }
    } else {
        let radius = rng.random_range(0.05..reach * 0.125);
        let center = rng.random_range(radius..reach - radius);
        FunctionSpec::Bump { center, radius, amp }
    };
    spec.build(grid)
}

/// Up to three atoms on nodes in `[0, reach/2)` plus a random density there.
pub fn random_measure(grid: &Grid, reach: f64, rng: &mut ChaCha8Rng) -> wconv_core::Result<wconv_core::Measure> {
    let h = grid.step();
    let count = rng.random_range(1..4);
    let atoms = (0..count)
        .map(|_| {
            let t = (rng.random_range(0.0..reach * 0.5) / h).floor() * h;
            wconv_core::Atom::real(t, rng.random_range(-2.0..2.0))
        })
        .collect();
    let density = random_function(grid, reach * 0.5, rng)?;
    wconv_core::Measure::from_atoms(atoms)?.with_density(density)
}

/// Runs one target tuple of a suite.
pub fn execute(job: &Job, objs: &Objects, tuple: &[String], rng: &mut ChaCha8Rng) -> wconv_core::Result<CheckReport> {
    let weight = |i: usize| &objs.weights[&tuple[i]];
    let fam = |i: usize| &objs.families[&tuple[i]];
    let func = |i: usize| &objs.functions[&tuple[i]];
    let meas = |i: usize| &objs.measures[&tuple[i]];
    match job {
        Job::Submultiplicative(p) => {
            let pairs: Vec<(f64, f64)> = (0..p.pairs)
                .map(|i| {
                    if i % 2 == 0 {
                        (rng.random_range(0.0..=p.range), rng.random_range(0.0..=p.range))
                    } else {
                        let top = p.range.max(0.0) as u64;
                        (rng.random_range(0..=top) as f64, rng.random_range(0..=top) as f64)
                    }
                })
                .collect();
            weights::check_submultiplicative(weight(0), &pairs, p.rel_tol)
        }
        Job::IntegerSubadditive(p) => {
            weights::check_integer_subadditive(&IntegerSubadditive::popcount(2 * p.max), p.max)
        }
        Job::SubadditiveExtension(p) => {
            let v = IntegerSubadditive::popcount(p.x_max.ceil() as u64 + 1);
            weights::check_subadditive_extension(&v, p.step, p.x_max, p.tol)
        }
        Job::RootLimit(p) => weights::check_root_limit(weight(0), p.horizon, p.window, p.tol),
        Job::TendsToInfinity(p) => weights::check_tends_to_infinity(weight(0), p.horizon, &p.thresholds),
        Job::Monotone(p) => family::check_monotone(fam(0), p.horizon),
        Job::ConditionC(p) => family::check_condition_c(fam(0), p.n, p.horizon, p.threshold),
        Job::ConditionD(p) => family::check_condition_d(fam(0), p.t, p.threshold),
        Job::Wein(p) => family::check_wein(fam(0), p.n, p.horizon, p.growth_threshold),
        Job::Weco(p) => {
            let f = fam(0);
            family::check_weco(f, p.n, p.horizon, p.m_max.unwrap_or(f.n_max()))
        }
        Job::WecoP(p) => {
            let f = fam(0);
            family::check_weco_p(f, p.n, p.p, p.horizon, p.m_max.unwrap_or(f.n_max()))
        }
        Job::ConvergenceFactor(p) => family::check_convergence_factor(fam(0), p.n, p.m, p.r, p.horizon, p.tol),
        Job::Banach(p) => algebra::check_banach(func(1), func(2), weight(0), p.rel_tol),
        Job::MeasureBanach(p) => algebra::check_measure_banach(meas(1), meas(2), weight(0), p.rel_tol),
        Job::RandomBanach(p) => random_banach(p, weight(0), &objs.grid, rng),
        Job::Character(p) => {
            let zs: Vec<Complex64> = p.z.iter().map(|[re, im]| Complex64::new(*re, *im)).collect();
            algebra::check_character(func(0), func(1), &zs, p.tol)
        }
        Job::Leibniz(p) => {
            let d = DerivationOp::new(meas(0).clone());
            operators::check_leibniz(&d, func(1), func(2), weight(3), p.tol)
        }
        Job::AlphaInequality(_) => {
            operators::check_alpha_inequality(&DerivationOp::new(meas(0).clone()), meas(1))
        }
        Job::Ghahramani(p) => operators::ghahramani_report(meas(0), weight(1), p.horizon),
        Job::DerivationContinuity(p) => {
            operators::derivation_continuity_report(meas(0), fam(1), p.n, p.m, p.horizon)
        }
        Job::DilationNormIdentity(p) => operators::check_dilation_norm_identity(p.a, func(0), p.tol),
        Job::SemigroupAction(p) => {
            operators::check_semigroup_action(&DilationEndo::new(p.c)?, func(0), p.s, p.tol_steps)
        }
        Job::ApproximateIdentity(p) => operators::check_approximate_identity(fam(0), func(1), &p.k, p.n, p.tol),
        Job::EndoAi(p) => operators::endo_ai_check(&DilationEndo::new(p.c)?, fam(0), func(1), &p.k, p.n, p.tol),
        Job::Titchmarsh(p) => operators::check_titchmarsh(func(0), func(1), p.eps_rel),
    }
}

fn random_banach(
    p: &RandomBanachParams,
    w: &wconv_core::Weight,
    grid: &Grid,
    rng: &mut ChaCha8Rng,
) -> wconv_core::Result<CheckReport> {
    let reach = grid.horizon() / 2.0;
    if reach < 2.0 {
        return Err(wconv_core::Error::Parameter(format!(
            "random pairs need a horizon of at least 4, got {}",
            grid.horizon()
        )));
    }
    let mut worst: Option<CheckReport> = None;
    let mut failures = 0usize;
    for _ in 0..p.pairs {
        let mut reports = vec![algebra::check_banach(
            &random_function(grid, reach, rng)?,
            &random_function(grid, reach, rng)?,
            w,
            p.rel_tol,
        )?];
        if p.measures {
            reports.push(algebra::check_measure_banach(
                &random_measure(grid, reach, rng)?,
                &random_measure(grid, reach, rng)?,
                w,
                p.rel_tol,
            )?);
        }
        for r in reports {
            failures += usize::from(!r.passed());
            if worst.as_ref().is_none_or(|b| r.extremum > b.extremum) {
                worst = Some(r);
            }
        }
    }
    let worst = worst.unwrap_or_else(|| CheckReport::new("banach", wconv_core::Verdict::Pass, 0.0));
    let verdict = if failures == 0 { wconv_core::Verdict::Pass } else { wconv_core::Verdict::Fail };
    let mut r = CheckReport::new("random_banach", verdict, worst.extremum)
        .param("pairs", p.pairs)
        .param("measures", p.measures)
        .param("rel_tol", p.rel_tol)
        .param("failures", failures)
        .param("worst_kind", worst.check.clone());
    if failures > 0 {
        r.witness = worst.witness;
    }
    Ok(r)
}
