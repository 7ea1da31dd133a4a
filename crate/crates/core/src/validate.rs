//! Validation suites: numerical identities, normalisation, Monte Carlo
//! concordance and diffusion scaling, each reported as a list of checks with
//! the measured discrepancy and its tolerance.

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::density::{position_law, switch_count_probability};
use crate::error::Result;
use crate::extrema::{extremum_joint_law, ExtremumKind};
use crate::first_passage::{
    fpt_integral_equation_residual, fpt_law, fpt_switch_density, fpt_with_reversal_density,
};
use crate::kac::{convergence_check, default_time_grid, KacError, KacTargets};
use crate::meander::{meander_integral_equation_residual, meander_law, meander_switch_density, MeanderSign};
use crate::montecarlo::{run_campaign, SimulationConfig};
use crate::params::{State, TelegraphParams, VelocityRegime};
use crate::quadrature::Tolerance;
use crate::stats::chi_square_test;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Normalization,
    IntegralEquations,
    Duality,
    McKs,
    Kac,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    /// `measured <= tolerance`
    AtMost,
    /// `measured < tolerance`
    Below,
    /// `measured > tolerance`
    Above,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub measured: f64,
    pub relation: Relation,
    pub tolerance: f64,
    /// Number of evaluation points or samples behind `measured`.
    pub points: u64,
}

impl Check {
    pub fn new(name: &str, measured: f64, relation: Relation, tolerance: f64, points: u64) -> Self {
        let passed = match relation {
            Relation::AtMost => measured <= tolerance,
            Relation::Below => measured < tolerance,
            Relation::Above => measured > tolerance,
        };
        Check {
            name: name.to_string(),
            passed,
            measured,
            relation,
            tolerance,
            points,
        }
    }

    pub fn at_most(name: &str, measured: f64, tolerance: f64, points: u64) -> Self {
        Check::new(name, measured, Relation::AtMost, tolerance, points)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub suite: Suite,
    pub passed: bool,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kac_errors: Option<Vec<KacError>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ValidationOptions {
    pub paths: u64,
    pub seed: u64,
    pub kmax: u32,
}

impl Default for ValidationOptions {
    fn default() -> Self {
        ValidationOptions {
            paths: 100_000,
            seed: 42,
            kmax: 16,
        }
    }
}

pub fn run_suite(suite: Suite, opts: &ValidationOptions) -> Result<ValidationReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut kac_errors = None;
    let checks = match suite {
        Suite::Normalization => {
            let mut c = vec![
                check_position_normalization(&mut rng, 50, &[0.1, 1.0, 5.0])?,
                check_same_sign_properness(&mut rng, 20)?,
            ];
            c.extend(check_extrema_total_probability(2.0, 20)?);
            c
        }
        Suite::IntegralEquations => vec![
            check_passage_equations(&mut rng, 20, 5)?,
            check_meander_equations(&mut rng, 20, 5)?,
        ],
        Suite::Duality => {
            let mut c = check_duality(&mut rng, 100)?;
            c.push(check_interchange(&mut rng, 100)?);
            c.push(check_reversal(&mut rng, 100)?);
            c
        }
        Suite::McKs => monte_carlo_checks(opts.paths, opts.seed)?,
        Suite::Kac => {
            let (c, e) = kac_checks(opts.kmax)?;
            kac_errors = Some(e);
            c
        }
    };
    Ok(ValidationReport {
        suite,
        passed: checks.iter().all(|c| c.passed),
        checks,
        kac_errors,
    })
}

/// Random parameters; `regime` fixes the velocity signs.
pub fn random_params(rng: &mut ChaCha8Rng, regime: VelocityRegime) -> TelegraphParams {
    let l0 = rng.random_range(0.2..3.0);
    let l1 = rng.random_range(0.2..3.0);
    let (g0, g1) = match regime {
        VelocityRegime::OppositeSigns => (rng.random_range(0.3..3.0), -rng.random_range(0.3..3.0)),
        VelocityRegime::BothPositive => {
            let g1 = rng.random_range(0.2..2.0);
            (g1 + rng.random_range(0.2..2.0), g1)
        }
        VelocityRegime::BothNegative => {
            let g0 = -rng.random_range(0.2..2.0);
            (g0, g0 - rng.random_range(0.2..2.0))
        }
    };
    TelegraphParams::new(l0, l1, g0, g1).expect("sampled parameters are valid")
}

fn random_regime(rng: &mut ChaCha8Rng) -> VelocityRegime {
    match rng.random_range(0..3) {
        0 => VelocityRegime::BothPositive,
        1 => VelocityRegime::BothNegative,
        _ => VelocityRegime::OppositeSigns,
    }
}

fn random_state(rng: &mut ChaCha8Rng) -> State {
    if rng.random::<bool>() {
        State::One
    } else {
        State::Zero
    }
}

fn rel_error(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

/// Atom plus density of the position law integrate to one.
pub fn check_position_normalization(rng: &mut ChaCha8Rng, sets: usize, times: &[f64]) -> Result<Check> {
    let tol = Tolerance::absolute(1e-11);
    let mut worst = 0.0f64;
    for _ in 0..sets {
        let regime = random_regime(rng);
        let p = random_params(rng, regime);
        for &t in times {
            for state in [State::Zero, State::One] {
                worst = worst.max((position_law(&p, state, t)?.total_mass(&tol) - 1.0).abs());
            }
        }
    }
    Ok(Check::at_most("position law mass", worst, 1e-8, (sets * times.len() * 2) as u64))
}

/// With velocities of one sign every reachable level is crossed.
pub fn check_same_sign_properness(rng: &mut ChaCha8Rng, cases: usize) -> Result<Check> {
    let tol = Tolerance::absolute(1e-11);
    let mut worst = 0.0f64;
    for j in 0..cases {
        let (regime, sign) = if j % 2 == 0 {
            (VelocityRegime::BothPositive, 1.0)
        } else {
            (VelocityRegime::BothNegative, -1.0)
        };
        let p = random_params(rng, regime);
        let y = sign * rng.random_range(0.2..2.0);
        let state = random_state(rng);
        worst = worst.max((fpt_law(&p, state, y)?.total_mass(&tol) - 1.0).abs());
    }
    Ok(Check::at_most("same-sign passage mass", worst, 1e-8, cases as u64))
}

pub fn check_passage_equations(rng: &mut ChaCha8Rng, points: usize, n_max: u32) -> Result<Check> {
    let mut worst = 0.0f64;
    for _ in 0..points {
        let p = random_params(rng, VelocityRegime::OppositeSigns);
        let y = rng.random_range(0.1..2.0);
        let t = y / p.gamma0() + rng.random_range(0.05..3.0);
        for n in 1..=n_max {
            let (r0, r1) = fpt_integral_equation_residual(&p, t, y, n)?;
            worst = worst.max(r0).max(r1);
        }
    }
    Ok(Check::at_most("passage first-switch equations", worst, 1e-8, (points as u64) * n_max as u64))
}

pub fn check_meander_equations(rng: &mut ChaCha8Rng, points: usize, n_max: u32) -> Result<Check> {
    let mut worst = 0.0f64;
    for _ in 0..points {
        let p = random_params(rng, VelocityRegime::OppositeSigns);
        let t = rng.random_range(0.2..3.0);
        let x = p.gamma0() * t * rng.random_range(0.05..0.95);
        for n in 1..=n_max {
            let (r0, r1) = meander_integral_equation_residual(&p, t, x, n)?;
            worst = worst.max(r0).max(r1);
        }
    }
    Ok(Check::at_most("meander last-switch equations", worst, 1e-8, (points as u64) * n_max as u64))
}

/// Positive meander densities against passage densities at the same point.
pub fn check_duality(rng: &mut ChaCha8Rng, points: usize) -> Result<Vec<Check>> {
    let (mut even, mut odd) = (0.0f64, 0.0f64);
    for _ in 0..points {
        let p = random_params(rng, VelocityRegime::OppositeSigns);
        let t = rng.random_range(0.2..3.0);
        let x = p.gamma0() * t * rng.random_range(0.02..0.98);
        let n = rng.random_range(0..6u32);
        let (g0, l0, l1) = (p.gamma0(), p.lambda0(), p.lambda1());
        let g_even = meander_switch_density(&p, MeanderSign::Positive, t, x, 2 * n + 2)?;
        let f_even = fpt_switch_density(&p, State::Zero, t, x, 2 * n + 2)?;
        even = even.max(rel_error(g0 * g_even, f_even));
        let g_odd = meander_switch_density(&p, MeanderSign::Positive, t, x, 2 * n + 1)?;
        let f_odd = fpt_switch_density(&p, State::One, t, x, 2 * n + 1)?;
        odd = odd.max(rel_error(g0 * l1 * g_odd, l0 * f_odd));
    }
    Ok(vec![
        Check::at_most("meander/passage duality, even counts", even, 1e-12, points as u64),
        Check::at_most("meander/passage duality, odd counts", odd, 1e-12, points as u64),
    ])
}

/// Downward passage computed directly against the interchanged process.
pub fn check_interchange(rng: &mut ChaCha8Rng, points: usize) -> Result<Check> {
    let mut worst = 0.0f64;
    for _ in 0..points {
        let p = random_params(rng, VelocityRegime::OppositeSigns);
        let y = -rng.random_range(0.1..2.0);
        let t = y / p.gamma1() + rng.random_range(0.05..3.0);
        let state = random_state(rng);
        let n = rng.random_range(1..10u32);
        let direct = fpt_switch_density(&p, state, t, y, n)?;
        let mirrored = fpt_switch_density(&p.interchanged(), state.other(), t, -y, n)?;
        worst = worst.max(rel_error(direct, mirrored));
    }
    Ok(Check::at_most("downward passage by interchange", worst, 1e-12, points as u64))
}

/// Passage with reversal is the switching rate times the plain density.
pub fn check_reversal(rng: &mut ChaCha8Rng, points: usize) -> Result<Check> {
    let mut worst = 0.0f64;
    for _ in 0..points {
        let p = random_params(rng, VelocityRegime::OppositeSigns);
        let y = rng.random_range(0.1..2.0) * if rng.random::<bool>() { 1.0 } else { -1.0 };
        let earliest = if y > 0.0 { y / p.gamma0() } else { y / p.gamma1() };
        let t = earliest + rng.random_range(0.05..3.0);
        let state = random_state(rng);
        let n = rng.random_range(1..10u32);
        let rate = if y > 0.0 { p.lambda0() } else { p.lambda1() };
        let lhs = fpt_with_reversal_density(&p, state, t, y, n)?;
        worst = worst.max((lhs - rate * fpt_switch_density(&p, state, t, y, n)?).abs());
    }
    Ok(Check::at_most("passage with reversal", worst, 0.0, points as u64))
}

/// Masses of the three components and the terminal marginal of the joint
/// extremum law, symmetric unit parameters.
pub fn check_extrema_total_probability(t: f64, grid: usize) -> Result<Vec<Check>> {
    let p = TelegraphParams::symmetric_unit();
    let tol = Tolerance::absolute(1e-9);
    let mut checks = Vec::new();
    for kind in [ExtremumKind::Min, ExtremumKind::Max] {
        for state in [State::Zero, State::One] {
            let law = extremum_joint_law(&p, state, kind, t)?;
            let position = position_law(&p, state, t)?;
            let label = format!("{kind:?} from state {}", state.index()).to_lowercase();
            let mass = law.component_masses(&tol).total();
            checks.push(Check::at_most(&format!("extremum law mass, {label}"), (mass - 1.0).abs(), 5e-6, 1));

            let (lo, hi) = (p.gamma1() * t, p.gamma0() * t);
            let mut worst = 0.0f64;
            for j in 0..grid {
                let x = lo + (hi - lo) * (j as f64 + 0.5) / grid as f64;
                worst = worst.max((law.x_marginal_density(x, &tol) - position.density(x)).abs());
            }
            let atoms: f64 = law.x_marginal_atoms().iter().map(|a| a.mass).sum();
            worst = worst.max((atoms - position.atom_mass()).abs());
            checks.push(Check::at_most(
                &format!("extremum law terminal marginal, {label}"),
                worst,
                5e-6,
                grid as u64,
            ));
        }
    }
    Ok(checks)
}

/// Tolerances are stated for 10^5 paths and scale as `1/sqrt(paths)`.
pub fn monte_carlo_checks(paths: u64, seed: u64) -> Result<Vec<Check>> {
    let p = TelegraphParams::symmetric_unit();
    let t = 2.0;
    let scale = (1e5 / paths as f64).sqrt();
    let quad = Tolerance::absolute(1e-11);

    let campaign = run_campaign(&SimulationConfig::new(p, State::Zero, t, paths, seed)?)?;
    let summary = campaign.summary();
    let mut checks = Vec::new();

    let position = position_law(&p, State::Zero, t)?.tabulate_cdf(2048, f64::INFINITY);
    let ks = campaign.terminal_ks(|x| position.cdf(x), |x| position.cdf_left(x));
    checks.push(Check::at_most("terminal position KS", ks, 0.015 * scale, paths));

    let no_switch = summary.zero_switch_fraction - (-p.lambda0() * t).exp();
    checks.push(Check::at_most("no-switch fraction", no_switch.abs(), 0.005 * scale, paths));

    let max_n = summary.switch_counts.len() as u32 + 2;
    let probs = (0..=max_n)
        .map(|n| switch_count_probability(&p, State::Zero, t, n))
        .collect::<Result<Vec<_>>>()?;
    let chi = chi_square_test(&summary.switch_counts, &probs);
    checks.push(Check::new("switch count chi-square p-value", chi.p_value, Relation::Above, 1e-3, paths));

    let meander = meander_law(&p, MeanderSign::Positive, t)?;
    let meander_mass = meander.total_mass(&quad);
    checks.push(Check::at_most(
        "minimum at start fraction",
        (summary.min_at_start_fraction - meander_mass).abs(),
        0.01 * scale,
        paths,
    ));
    let conditional = meander.tabulate_cdf(2048, f64::INFINITY);
    let total = conditional.total();
    let kept: Vec<f64> = campaign
        .samples
        .iter()
        .filter(|s| s.min_value == 0.0)
        .map(|s| s.terminal)
        .collect();
    let ks = crate::stats::ks_statistic(&kept, |x| conditional.cdf(x) / total, |x| conditional.cdf_left(x) / total);
    checks.push(Check::at_most("meander conditional KS", ks, 0.02 * scale, kept.len() as u64));

    let joint = extremum_joint_law(&p, State::Zero, ExtremumKind::Min, t)?;
    let end_mass = joint.zeta_t.total_mass(&quad);
    checks.push(Check::at_most(
        "minimum at end fraction",
        (summary.min_at_end_fraction - end_mass).abs(),
        0.01 * scale,
        paths,
    ));

    // passage through y = 1 observed up to a long horizon
    let y = 1.0;
    let horizon = 50.0;
    let config = SimulationConfig::new(p, State::Zero, horizon, paths, seed.wrapping_add(1))?.with_threshold(y)?;
    let passage = run_campaign(&config)?;
    let fraction = passage.summary().passage_fraction.unwrap_or(0.0);
    let law = fpt_law(&p, State::Zero, y)?.tabulate_cdf(2048, horizon);
    let reached = law.total();
    checks.push(Check::at_most(
        "passage before horizon fraction",
        (fraction - reached).abs(),
        0.005 * scale,
        paths,
    ));
    let ks = passage.passage_ks(|s| law.cdf(s) / reached, |s| law.cdf_left(s) / reached);
    checks.push(Check::at_most(
        "conditional passage time KS",
        ks,
        0.015 * scale,
        passage.passage_times().len() as u64,
    ));
    Ok(checks)
}

/// Scales `1, 2, 4, ..., kmax`.
pub fn kac_scales(kmax: u32) -> Vec<f64> {
    let mut k = 1u32;
    let mut out = Vec::new();
    while k <= kmax.max(1) {
        out.push(k as f64);
        k *= 2;
    }
    out
}

pub fn kac_checks(kmax: u32) -> Result<(Vec<Check>, Vec<KacError>)> {
    let scales = kac_scales(kmax);
    let errors = convergence_check(
        &KacTargets::symmetric_unit(),
        1.0,
        &scales,
        &default_time_grid(),
        State::Zero,
    )?;
    let steps = errors
        .windows(2)
        .map(|w| w[1].error - w[0].error)
        .fold(f64::NEG_INFINITY, f64::max);
    let last = errors.last().expect("at least one scale");
    let checks = vec![
        Check::new("largest step up between successive scales", steps, Relation::Below, 0.0, errors.len() as u64),
        Check::at_most("final sup error", last.error, 0.02, 1),
        Check::new("final atom mass", last.atom_mass, Relation::Below, 1e-6, 1),
    ];
    Ok((checks, errors))
}
