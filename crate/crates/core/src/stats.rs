//! Goodness-of-fit statistics against laws with atoms.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

/// Kolmogorov–Smirnov distance between the empirical law of `samples` and a
/// distribution given by `cdf(x) = P(X <= x)` and `cdf_left(x) = P(X < x)`.
///
/// The supremum is attained at a sample value, just before or at it, so both
/// one-sided limits are compared there. This keeps the statistic exact when the
/// reference law has atoms.
pub fn ks_statistic<F, G>(samples: &[f64], cdf: F, cdf_left: G) -> f64
where
    F: Fn(f64) -> f64,
    G: Fn(f64) -> f64,
{
    let mut xs = samples.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    let mut d = 0.0f64;
    let mut i = 0;
    while i < xs.len() {
        let v = xs[i];
        let mut j = i;
        while j < xs.len() && xs[j] == v {
            j += 1;
        }
        let before = i as f64 / n;
        let after = j as f64 / n;
        d = d.max((cdf_left(v) - before).abs()).max((cdf(v) - after).abs());
        i = j;
    }
    d
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChiSquareTest {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
}

/// Pearson χ² test of category counts against probabilities. Trailing
/// categories with expected count below 5 are pooled, together with whatever
/// mass `probs` leaves unaccounted for.
pub fn chi_square_test(observed: &[u64], probs: &[f64]) -> ChiSquareTest {
    let total = observed.iter().sum::<u64>() as f64;
    let len = observed.len().max(probs.len());
    let obs = |k: usize| observed.get(k).copied().unwrap_or(0) as f64;
    let prob = |k: usize| probs.get(k).copied().unwrap_or(0.0);

    let mut cells = Vec::new();
    let mut k = 0;
    while k < len && prob(k) * total >= 5.0 {
        cells.push((obs(k), prob(k) * total));
        k += 1;
    }
    let tail_obs: f64 = (k..len).map(obs).sum();
    let head_prob: f64 = cells.iter().map(|c| c.1).sum::<f64>() / total;
    let tail_exp = (1.0 - head_prob).max(0.0) * total;
    if tail_exp > 0.0 || tail_obs > 0.0 {
        cells.push((tail_obs, tail_exp));
    }

    let statistic: f64 = cells.iter().map(|&(o, e)| (o - e).powi(2) / e).sum();
    let dof = cells.len().saturating_sub(1).max(1);
    let p_value = ChiSquared::new(dof as f64).map_or(f64::NAN, |d| d.sf(statistic));
    ChiSquareTest {
        statistic,
        dof,
        p_value,
    }
}

/// Standard error of a binomial proportion.
pub fn binomial_standard_error(p: f64, n: u64) -> f64 {
    (p * (1.0 - p) / n as f64).sqrt()
}
