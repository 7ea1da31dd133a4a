//! Distributions made of finitely many atoms plus an absolutely continuous
//! part.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::quadrature::{integrate, integrate_to_infinity, Integral, Tolerance};

/// A point mass. `location` is a position or a time depending on the law.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub location: f64,
    pub mass: f64,
}

/// Open interval carrying the continuous part; `hi` may be `+∞`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Support {
    pub lo: f64,
    pub hi: f64,
}

impl Support {
    pub fn new(lo: f64, hi: f64) -> Self {
        debug_assert!(lo <= hi);
        Support { lo, hi }
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo < x && x < self.hi
    }

    pub fn is_bounded(&self) -> bool {
        self.hi.is_finite()
    }
}

type DensityFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Atoms plus a density on an open interval. The total mass may be below one
/// (defective laws) or zero (empty laws). Cheap to clone and safe to share.
#[derive(Clone)]
pub struct MixedLaw {
    atoms: Vec<Atom>,
    support: Option<Support>,
    density: DensityFn,
}

impl fmt::Debug for MixedLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MixedLaw")
            .field("atoms", &self.atoms)
            .field("support", &self.support)
            .finish_non_exhaustive()
    }
}

impl MixedLaw {
    pub fn new<F>(atoms: Vec<Atom>, support: Support, density: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        let atoms = atoms.into_iter().filter(|a| a.mass > 0.0).collect();
        MixedLaw {
            atoms,
            support: Some(support),
            density: Arc::new(density),
        }
    }

    /// The zero measure: an event that never happens.
    pub fn empty() -> Self {
        MixedLaw {
            atoms: Vec::new(),
            support: None,
            density: Arc::new(|_| 0.0),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_none() && self.atoms.is_empty()
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn support(&self) -> Option<Support> {
        self.support
    }

    /// Density of the continuous part; zero outside the open support.
    pub fn density(&self, x: f64) -> f64 {
        match self.support {
            Some(s) if s.contains(x) => (self.density)(x),
            _ => 0.0,
        }
    }

    pub fn atom_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.mass).sum()
    }

    /// Mass of the continuous part by adaptive quadrature over the support.
    pub fn continuous_mass(&self, tol: &Tolerance) -> Integral {
        match self.support {
            None => Integral {
                value: 0.0,
                error: 0.0,
                evaluations: 0,
                converged: true,
            },
            Some(s) if s.is_bounded() => integrate(|x| self.density(x), s.lo, s.hi, tol),
            Some(s) => integrate_to_infinity(|x| self.density(x), s.lo, tol),
        }
    }

    pub fn total_mass(&self, tol: &Tolerance) -> f64 {
        self.atom_mass() + self.continuous_mass(tol).value
    }

    /// `P(X <= x)` by direct quadrature (unnormalized for defective laws).
    pub fn cdf(&self, x: f64, tol: &Tolerance) -> f64 {
        let atoms: f64 = self
            .atoms
            .iter()
            .filter(|a| a.location <= x)
            .map(|a| a.mass)
            .sum();
        let cont = match self.support {
            Some(s) if x > s.lo => integrate(|u| self.density(u), s.lo, x.min(s.hi), tol).value,
            _ => 0.0,
        };
        atoms + cont
    }

    /// Tabulate the CDF on `cells + 1` equispaced nodes spanning the support,
    /// truncated at `cap` when the support is unbounded.
    pub fn tabulate_cdf(&self, cells: usize, cap: f64) -> TabulatedCdf {
        let cells = cells.max(1);
        let Some(s) = self.support else {
            return TabulatedCdf {
                lo: 0.0,
                step: 1.0,
                cumulative: vec![0.0, 0.0],
                slope: vec![0.0, 0.0],
                atoms: self.atoms.clone(),
            };
        };
        let hi = s.hi.min(cap);
        let step = (hi - s.lo) / cells as f64;
        let nudge = 1e-9 * step;
        let node = |k: usize| s.lo + step * k as f64;
        let slope: Vec<f64> = (0..=cells)
            .map(|k| (self.density)(node(k).clamp(s.lo + nudge, hi - nudge)))
            .collect();
        let tol = Tolerance::absolute(1e-13).with_rel(1e-12);
        let mut cumulative = Vec::with_capacity(cells + 1);
        let mut acc = 0.0;
        cumulative.push(0.0);
        for k in 0..cells {
            acc += integrate(|u| self.density(u), node(k), node(k + 1), &tol).value;
            cumulative.push(acc);
        }
        TabulatedCdf {
            lo: s.lo,
            step,
            cumulative,
            slope,
            atoms: self.atoms.clone(),
        }
    }
}

/// A CDF cached on an equispaced grid, with cubic Hermite interpolation of the
/// continuous part and exact atoms.
#[derive(Debug, Clone)]
pub struct TabulatedCdf {
    lo: f64,
    step: f64,
    cumulative: Vec<f64>,
    slope: Vec<f64>,
    atoms: Vec<Atom>,
}

impl TabulatedCdf {
    fn continuous(&self, x: f64) -> f64 {
        let last = self.cumulative.len() - 1;
        if x <= self.lo {
            return 0.0;
        }
        let pos = (x - self.lo) / self.step;
        if pos >= last as f64 {
            return self.cumulative[last];
        }
        let k = pos.floor() as usize;
        let u = pos - k as f64;
        let (f0, f1) = (self.cumulative[k], self.cumulative[k + 1]);
        let (d0, d1) = (self.slope[k] * self.step, self.slope[k + 1] * self.step);
        let u2 = u * u;
        let u3 = u2 * u;
        let v = (2.0 * u3 - 3.0 * u2 + 1.0) * f0
            + (u3 - 2.0 * u2 + u) * d0
            + (-2.0 * u3 + 3.0 * u2) * f1
            + (u3 - u2) * d1;
        v.clamp(f0.min(f1), f0.max(f1))
    }

    /// Total mass captured by the table.
    pub fn total(&self) -> f64 {
        self.cumulative[self.cumulative.len() - 1] + self.atoms.iter().map(|a| a.mass).sum::<f64>()
    }

    /// `P(X <= x)`.
    pub fn cdf(&self, x: f64) -> f64 {
        self.continuous(x)
            + self
                .atoms
                .iter()
                .filter(|a| a.location <= x)
                .map(|a| a.mass)
                .sum::<f64>()
    }

    /// `P(X < x)`.
    pub fn cdf_left(&self, x: f64) -> f64 {
        self.continuous(x)
            + self
                .atoms
                .iter()
                .filter(|a| a.location < x)
                .map(|a| a.mass)
                .sum::<f64>()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn half_atom_half_uniform() -> MixedLaw {
        MixedLaw::new(
            vec![Atom {
                location: 1.0,
                mass: 0.5,
            }],
            Support::new(0.0, 1.0),
            |_| 0.5,
        )
    }

    #[test]
    fn mass_and_cdf() {
        let law = half_atom_half_uniform();
        let tol = Tolerance::default();
        assert!((law.total_mass(&tol) - 1.0).abs() < 1e-14);
        assert!((law.cdf(0.5, &tol) - 0.25).abs() < 1e-14);
        assert!((law.cdf(1.0, &tol) - 1.0).abs() < 1e-14);
        assert_eq!(law.density(1.0), 0.0);
        assert_eq!(law.density(-0.1), 0.0);
    }

    #[test]
    fn table_matches_direct_cdf() {
        let law = MixedLaw::new(vec![], Support::new(0.0, f64::INFINITY), |x| (-x).exp());
        let table = law.tabulate_cdf(2048, 40.0);
        for x in [0.01, 0.3, 1.7, 5.0, 12.345] {
            assert!((table.cdf(x) - (1.0 - f64::exp(-x))).abs() < 1e-9, "{x}");
        }
        let tab = half_atom_half_uniform().tabulate_cdf(64, 10.0);
        assert!((tab.cdf_left(1.0) - 0.5).abs() < 1e-14);
        assert!((tab.cdf(1.0) - 1.0).abs() < 1e-14);
        assert!((tab.total() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn empty_law() {
        let law = MixedLaw::empty();
        assert!(law.is_empty());
        assert_eq!(law.total_mass(&Tolerance::default()), 0.0);
        assert_eq!(law.tabulate_cdf(16, 1.0).cdf(3.0), 0.0);
    }

    #[test]
    fn zero_mass_atoms_are_dropped() {
        let law = MixedLaw::new(
            vec![Atom {
                location: 0.0,
                mass: 0.0,
            }],
            Support::new(0.0, 1.0),
            |_| 1.0,
        );
        assert!(law.atoms().is_empty());
    }
}
