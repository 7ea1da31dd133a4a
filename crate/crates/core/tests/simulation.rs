//! Closed forms against exact simulation.

use telegraph::density::position_switch_density;
use telegraph::extrema::{extremum_joint_law, ExtremumKind};
use telegraph::first_passage::{fpt_law, fpt_switch_density};
use telegraph::montecarlo::{run_campaign, Campaign, SimulationConfig};
use telegraph::quadrature::{integrate, Tolerance};
use telegraph::stats::binomial_standard_error;
use telegraph::{State, TelegraphParams};

const PATHS: u64 = 100_000;

fn campaign(state: State, horizon: f64, seed: u64, threshold: Option<f64>) -> Campaign {
    let mut config = SimulationConfig::new(TelegraphParams::symmetric_unit(), state, horizon, PATHS, seed).unwrap();
    if let Some(y) = threshold {
        config = config.with_threshold(y).unwrap();
    }
    run_campaign(&config).unwrap()
}

/// Empirical probability against its expectation, within four standard errors.
fn within_binomial(count: usize, p: f64) {
    let phat = count as f64 / PATHS as f64;
    let se = binomial_standard_error(p, PATHS);
    assert!((phat - p).abs() < 4.0 * se, "empirical {phat}, expected {p}, se {se}");
}

#[test]
fn extremum_components_match_frequencies() {
    let p = TelegraphParams::symmetric_unit();
    let t = 2.0;
    let tol = Tolerance::absolute(1e-9);
    for (seed, state) in [(1, State::Zero), (2, State::One)] {
        let c = campaign(state, t, seed, None);
        for kind in [ExtremumKind::Min, ExtremumKind::Max] {
            let m = extremum_joint_law(&p, state, kind, t).unwrap().component_masses(&tol);
            let time = |s: &telegraph::montecarlo::PathSample| match kind {
                ExtremumKind::Min => s.argmin_time,
                ExtremumKind::Max => s.argmax_time,
            };
            let at_start = c.samples.iter().filter(|s| time(s) == 0.0).count() as f64 / PATHS as f64;
            let at_end = c.samples.iter().filter(|s| time(s) == t).count() as f64 / PATHS as f64;
            assert!((at_start - m.zeta_zero).abs() < 0.01, "{state:?} {kind:?} {at_start} {m:?}");
            assert!((at_end - m.zeta_t).abs() < 0.01, "{state:?} {kind:?} {at_end} {m:?}");
            assert!((1.0 - at_start - at_end - m.regular).abs() < 0.01);
        }
    }
}

#[test]
fn switch_count_slices() {
    let p = TelegraphParams::symmetric_unit();
    let c = campaign(State::Zero, 2.0, 3, None);
    let tol = Tolerance::absolute(1e-12);
    for n in [1u32, 2] {
        let (lo, hi) = (-0.1, 0.1);
        let count = c
            .samples
            .iter()
            .filter(|s| s.switches == n && s.terminal > lo && s.terminal <= hi)
            .count();
        let prob = integrate(|x| position_switch_density(&p, State::Zero, 2.0, x, n).unwrap(), lo, hi, &tol).value;
        within_binomial(count, prob);
    }
}

#[test]
fn passage_with_two_switches() {
    let p = TelegraphParams::symmetric_unit();
    let c = campaign(State::Zero, 10.0, 4, Some(1.0));
    let (lo, hi) = (1.8, 2.2);
    let count = c
        .samples
        .iter()
        .filter(|s| s.first_passage_switches == Some(2) && s.fpt.is_some_and(|t| t > lo && t <= hi))
        .count();
    let tol = Tolerance::absolute(1e-12);
    let prob = integrate(|t| fpt_switch_density(&p, State::Zero, t, 1.0, 2).unwrap(), lo, hi, &tol).value;
    within_binomial(count, prob);
}

#[test]
fn symmetric_passage_by_long_horizon() {
    // the zero-drift law is proper but heavy tailed: compare at the horizon
    let p = TelegraphParams::symmetric_unit();
    let horizon = 200.0;
    let c = campaign(State::Zero, horizon, 5, Some(1.0));
    let tol = Tolerance::absolute(1e-12);
    let law = fpt_law(&p, State::Zero, 1.0).unwrap();
    let by_horizon = law.cdf(horizon, &tol);
    assert!((c.summary().passage_fraction.unwrap() - by_horizon).abs() < 0.01);
    assert!((law.total_mass(&tol) - 1.0).abs() < 1e-6);
}

#[test]
fn same_sign_passage_times_stay_in_window() {
    let p = TelegraphParams::new(1.0, 2.0, 2.0, 1.0).unwrap();
    let config = SimulationConfig::new(p, State::Zero, 2.0, 20_000, 6).unwrap().with_threshold(1.0).unwrap();
    let c = run_campaign(&config).unwrap();
    let times = c.passage_times();
    assert_eq!(times.len(), 20_000);
    assert!(times.iter().all(|&t| (0.5..=1.0).contains(&t)));
    let law = fpt_law(&p, State::Zero, 1.0).unwrap().tabulate_cdf(2048, f64::INFINITY);
    let ks = c.passage_ks(|t| law.cdf(t), |t| law.cdf_left(t));
    assert!(ks < 1.63 * 1.5 / (20_000f64).sqrt(), "{ks}");
}
