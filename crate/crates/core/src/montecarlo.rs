//! Exact event-driven simulation.
//!
//! Paths are piecewise linear, so extrema, passage times and terminal values
//! are computed from the switch skeleton without any time step. Each path
//! draws from its own ChaCha stream selected by `(seed, path_index)`, which
//! makes a campaign independent of scheduling and thread count.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Result, TelegraphError};
use crate::params::{State, TelegraphParams};
use crate::stats::ks_statistic;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimulationConfig {
    pub params: TelegraphParams,
    pub initial_state: State,
    pub horizon: f64,
    pub threshold: Option<f64>,
    pub paths: u64,
    pub seed: u64,
}

impl SimulationConfig {
    pub fn new(params: TelegraphParams, initial_state: State, horizon: f64, paths: u64, seed: u64) -> Result<Self> {
        let config = SimulationConfig {
            params,
            initial_state,
            horizon,
            threshold: None,
            paths,
            seed,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn with_threshold(mut self, y: f64) -> Result<Self> {
        self.threshold = Some(y);
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.horizon.is_finite() && self.horizon > 0.0) {
            return Err(TelegraphError::NonPositive {
                what: "horizon",
                value: self.horizon,
            });
        }
        if self.paths == 0 {
            return Err(TelegraphError::NonPositive {
                what: "paths",
                value: 0.0,
            });
        }
        match self.threshold {
            Some(0.0) => Err(TelegraphError::ZeroThreshold),
            Some(y) if !y.is_finite() => Err(TelegraphError::Domain(format!("threshold {y} is not finite"))),
            _ => Ok(()),
        }
    }
}

/// Summary of one simulated trajectory on `[0, horizon]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PathSample {
    pub terminal: f64,
    pub switches: u32,
    pub min_value: f64,
    pub max_value: f64,
    /// First time the running minimum is attained.
    pub argmin_time: f64,
    pub argmax_time: f64,
    /// First passage through the threshold, if it happens before the horizon.
    pub fpt: Option<f64>,
    pub first_passage_switches: Option<u32>,
}

fn path_rng(seed: u64, path_index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(path_index);
    rng
}

pub fn sample_path(config: &SimulationConfig, path_index: u64) -> PathSample {
    let p = &config.params;
    let horizon = config.horizon;
    let mut rng = path_rng(config.seed, path_index);

    let mut state = config.initial_state;
    let (mut time, mut pos) = (0.0f64, 0.0f64);
    let mut switches = 0u32;
    let (mut min_value, mut argmin_time) = (0.0, 0.0);
    let (mut max_value, mut argmax_time) = (0.0, 0.0);
    let mut fpt = None;
    let mut first_passage_switches = None;

    loop {
        let hold: f64 = Exp1.sample(&mut rng);
        let hold = hold / p.rate(state);
        let end = (time + hold).min(horizon);
        let v = p.velocity(state);
        let next = pos + v * (end - time);

        if let (None, Some(y)) = (fpt, config.threshold) {
            // a kink exactly on the level counts as passage at that instant
            let crossed = if y > 0.0 { next >= y } else { next <= y };
            if crossed {
                fpt = Some((time + (y - pos) / v).clamp(time, end));
                first_passage_switches = Some(switches);
            }
        }
        if next < min_value {
            min_value = next;
            argmin_time = end;
        }
        if next > max_value {
            max_value = next;
            argmax_time = end;
        }

        pos = next;
        time = end;
        if time >= horizon {
            break;
        }
        state = state.other();
        switches += 1;
    }

    PathSample {
        terminal: pos,
        switches,
        min_value,
        max_value,
        argmin_time,
        argmax_time,
        fpt,
        first_passage_switches,
    }
}

/// All samples of a campaign, in path-index order.
#[derive(Debug, Clone)]
pub struct Campaign {
    pub config: SimulationConfig,
    pub samples: Vec<PathSample>,
}

pub fn run_campaign(config: &SimulationConfig) -> Result<Campaign> {
    config.validate()?;
    let samples = (0..config.paths)
        .into_par_iter()
        .map(|i| sample_path(config, i))
        .collect();
    Ok(Campaign {
        config: *config,
        samples,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignSummary {
    pub paths: u64,
    pub mean_terminal: f64,
    pub zero_switch_fraction: f64,
    /// `switch_counts[n]` paths had exactly `n` switches.
    pub switch_counts: Vec<u64>,
    pub min_at_start_fraction: f64,
    pub min_at_end_fraction: f64,
    pub max_at_start_fraction: f64,
    pub max_at_end_fraction: f64,
    pub passage_fraction: Option<f64>,
    pub censored_fraction: Option<f64>,
}

impl Campaign {
    fn fraction(&self, pred: impl Fn(&PathSample) -> bool) -> f64 {
        self.samples.iter().filter(|s| pred(s)).count() as f64 / self.samples.len() as f64
    }

    pub fn terminals(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.terminal).collect()
    }

    /// Passage times observed before the horizon.
    pub fn passage_times(&self) -> Vec<f64> {
        self.samples.iter().filter_map(|s| s.fpt).collect()
    }

    pub fn summary(&self) -> CampaignSummary {
        let horizon = self.config.horizon;
        let n = self.samples.len();
        let max_switches = self.samples.iter().map(|s| s.switches).max().unwrap_or(0);
        let mut switch_counts = vec![0u64; max_switches as usize + 1];
        for s in &self.samples {
            switch_counts[s.switches as usize] += 1;
        }
        let mean_terminal = self.samples.iter().map(|s| s.terminal).sum::<f64>() / n as f64;
        let passage = self.config.threshold.map(|_| self.fraction(|s| s.fpt.is_some()));
        CampaignSummary {
            paths: n as u64,
            mean_terminal,
            zero_switch_fraction: switch_counts[0] as f64 / n as f64,
            switch_counts,
            min_at_start_fraction: self.fraction(|s| s.argmin_time == 0.0),
            min_at_end_fraction: self.fraction(|s| s.argmin_time == horizon),
            max_at_start_fraction: self.fraction(|s| s.argmax_time == 0.0),
            max_at_end_fraction: self.fraction(|s| s.argmax_time == horizon),
            passage_fraction: passage,
            censored_fraction: passage.map(|f| 1.0 - f),
        }
    }

    /// Equal-width histogram of terminal positions on `[lo, hi)`.
    pub fn terminal_histogram(&self, lo: f64, hi: f64, bins: usize) -> Vec<u64> {
        let mut counts = vec![0u64; bins];
        let width = (hi - lo) / bins as f64;
        for s in &self.samples {
            let k = ((s.terminal - lo) / width).floor();
            if k >= 0.0 && (k as usize) < bins {
                counts[k as usize] += 1;
            }
        }
        counts
    }

    /// KS distance of the terminal positions to `(cdf, cdf_left)`.
    pub fn terminal_ks<F, G>(&self, cdf: F, cdf_left: G) -> f64
    where
        F: Fn(f64) -> f64,
        G: Fn(f64) -> f64,
    {
        ks_statistic(&self.terminals(), cdf, cdf_left)
    }

    /// KS distance of the passage times, conditioned on passage before the
    /// horizon, to a CDF with the same conditioning.
    pub fn passage_ks<F, G>(&self, cdf: F, cdf_left: G) -> f64
    where
        F: Fn(f64) -> f64,
        G: Fn(f64) -> f64,
    {
        ks_statistic(&self.passage_times(), cdf, cdf_left)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(paths: u64) -> SimulationConfig {
        SimulationConfig::new(TelegraphParams::symmetric_unit(), State::Zero, 2.0, paths, 7).unwrap()
    }

    #[test]
    fn path_invariants() {
        let c = config(1).with_threshold(0.5).unwrap();
        for i in 0..2000 {
            let s = sample_path(&c, i);
            assert!(s.min_value <= 0.0 && s.max_value >= 0.0);
            assert!(s.min_value <= s.terminal && s.terminal <= s.max_value);
            assert!((0.0..=2.0).contains(&s.argmin_time) && (0.0..=2.0).contains(&s.argmax_time));
            if let Some(t) = s.fpt {
                assert!(t > 0.0 && t <= 2.0 && s.max_value >= 0.5);
                assert!(s.first_passage_switches.unwrap() <= s.switches);
            } else {
                assert!(s.max_value < 0.5);
            }
        }
    }

    #[test]
    fn zero_switch_path_is_linear() {
        let p = TelegraphParams::new(0.01, 0.01, 1.5, -0.5).unwrap();
        let c = SimulationConfig::new(p, State::One, 1.0, 1, 3).unwrap();
        let s = (0..100).map(|i| sample_path(&c, i)).find(|s| s.switches == 0).unwrap();
        assert_eq!(s.terminal, -0.5);
        assert_eq!((s.min_value, s.max_value), (-0.5, 0.0));
        assert_eq!((s.argmin_time, s.argmax_time), (1.0, 0.0));
    }

    #[test]
    fn same_sign_passage_inside_window() {
        let p = TelegraphParams::new(1.0, 2.0, 3.0, 0.5).unwrap();
        let c = SimulationConfig::new(p, State::Zero, 10.0, 1, 11).unwrap().with_threshold(1.5).unwrap();
        for i in 0..3000 {
            let t = sample_path(&c, i).fpt.unwrap();
            assert!((0.5..=3.0).contains(&t), "{t}");
        }
    }

    #[test]
    fn deterministic_across_pools() {
        let c = config(5000).with_threshold(1.0).unwrap();
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| run_campaign(&c).unwrap())
        };
        let (a, b) = (run(1), run(4));
        assert_eq!(a.samples, b.samples);
        assert_eq!(a.summary(), b.summary());
    }

    #[test]
    fn zero_switch_fraction() {
        let c = config(100_000);
        let s = run_campaign(&c).unwrap().summary();
        let p = (-2.0f64).exp();
        let se = (p * (1.0 - p) / 1e5).sqrt();
        assert!((s.zero_switch_fraction - p).abs() < 3.0 * se, "{}", s.zero_switch_fraction);
        assert_eq!(s.switch_counts.iter().sum::<u64>(), 100_000);
        // E Γ(t) = (1 - e^{-2t}) / 2 from state 0; the two starts cancel
        let drift = (1.0 - (-4.0f64).exp()) / 2.0;
        assert!((s.mean_terminal - drift).abs() < 0.01, "{}", s.mean_terminal);
        let mut other = c;
        other.initial_state = State::One;
        let t = run_campaign(&other).unwrap().summary();
        assert!((s.mean_terminal + t.mean_terminal).abs() < 0.02);
    }

    #[test]
    fn rejects_bad_config() {
        let p = TelegraphParams::symmetric_unit();
        assert!(SimulationConfig::new(p, State::Zero, 0.0, 10, 1).is_err());
        assert!(SimulationConfig::new(p, State::Zero, 1.0, 0, 1).is_err());
        assert!(config(1).with_threshold(0.0).is_err());
    }
}
