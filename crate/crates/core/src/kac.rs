//! Diffusion scaling of the first-passage law.
//!
//! Rates grow like `k^2` and speeds like `k` with fixed ratios. The passage
//! time through `y > 0` then converges to the inverse-Gaussian law of a
//! Brownian motion with drift `delta` and diffusivity `Sigma`.

use serde::{Deserialize, Serialize};

use crate::error::{Result, TelegraphError};
use crate::first_passage::{fpt_atom, fpt_density};
use crate::params::{State, TelegraphParams};

/// Limit targets of a scaled family. `sigma0 = sigma1 * nu` is forced so the
/// drift of the family converges.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KacTargets {
    nu: f64,
    sigma1: f64,
    delta: f64,
}

impl KacTargets {
    pub fn new(nu: f64, sigma1: f64, delta: f64) -> Result<Self> {
        for (what, value) in [("nu", nu), ("sigma1", sigma1)] {
            if !(value.is_finite() && value > 0.0) {
                return Err(TelegraphError::NonPositive { what, value });
            }
        }
        if !delta.is_finite() {
            return Err(TelegraphError::Domain(format!("drift {delta} is not finite")));
        }
        Ok(KacTargets { nu, sigma1, delta })
    }

    pub fn symmetric_unit() -> Self {
        KacTargets {
            nu: 1.0,
            sigma1: 1.0,
            delta: 0.0,
        }
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn sigma1(&self) -> f64 {
        self.sigma1
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn sigma0(&self) -> f64 {
        self.sigma1 * self.nu
    }

    /// Diffusivity of the limit: `s0 s1 / sqrt((s0^2 + s1^2) / 2)`.
    pub fn big_sigma(&self) -> f64 {
        let (s0, s1) = (self.sigma0(), self.sigma1);
        s0 * s1 / ((s0 * s0 + s1 * s1) / 2.0).sqrt()
    }
}

/// `lambda0 = nu^2 k^2`, `lambda1 = k^2`, `gamma0 = sigma0 nu k + delta`,
/// `gamma1 = -sigma1 k + delta`.
pub fn kac_family_member(targets: &KacTargets, k: f64) -> Result<TelegraphParams> {
    if !(k.is_finite() && k >= 1.0) {
        return Err(TelegraphError::Domain(format!("scale {k} must be at least 1")));
    }
    let KacTargets { nu, sigma1, delta } = *targets;
    TelegraphParams::new(
        nu * nu * k * k,
        k * k,
        targets.sigma0() * nu * k + delta,
        -sigma1 * k + delta,
    )
}

pub fn inverse_gaussian_fpt_density(t: f64, y: f64, sigma: f64, delta: f64) -> Result<f64> {
    for (what, value) in [("time", t), ("level", y), ("Sigma", sigma)] {
        if !(value.is_finite() && value > 0.0) {
            return Err(TelegraphError::NonPositive { what, value });
        }
    }
    let spread = sigma * sigma * t;
    let pre = y / ((2.0 * std::f64::consts::PI).sqrt() * sigma * t.powf(1.5));
    Ok(pre * (-(y - delta * t).powi(2) / (2.0 * spread)).exp())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KacError {
    pub k: f64,
    /// Sup-norm distance to the limit density over the time grid.
    pub error: f64,
    /// Grid time where the supremum is attained.
    pub worst_time: f64,
    /// Mass of the passage atom, missing from the density.
    pub atom_mass: f64,
}

/// 500 equispaced times on `[0.01, 5]`.
pub fn default_time_grid() -> Vec<f64> {
    let n = 500;
    (0..n).map(|j| 0.01 + (5.0 - 0.01) * j as f64 / (n - 1) as f64).collect()
}

pub fn convergence_check(
    targets: &KacTargets,
    y: f64,
    k_grid: &[f64],
    t_grid: &[f64],
    state: State,
) -> Result<Vec<KacError>> {
    if k_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(TelegraphError::Domain("scale grid must be increasing".into()));
    }
    let sigma = targets.big_sigma();
    k_grid
        .iter()
        .map(|&k| {
            let params = kac_family_member(targets, k)?;
            let mut worst = (0.0, f64::NAN);
            for &t in t_grid {
                let e = (fpt_density(&params, state, t, y)? - inverse_gaussian_fpt_density(t, y, sigma, targets.delta)?)
                    .abs();
                if e > worst.0 {
                    worst = (e, t);
                }
            }
            let atom_mass = fpt_atom(&params, state, y)?.map_or(0.0, |a| a.mass);
            Ok(KacError {
                k,
                error: worst.0,
                worst_time: worst.1,
                atom_mass,
            })
        })
        .collect()
}
