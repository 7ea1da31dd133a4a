//! Space-time quantities shared by every closed form.
//!
//! At a point `(t, x)` the time `t` splits into `xi0` spent moving at `gamma0`
//! and `xi1` spent at `gamma1`, so that `xi0 + xi1 = t` and
//! `gamma0*xi0 + gamma1*xi1 = x`.

use crate::error::{Result, TelegraphError};
use crate::params::{State, TelegraphParams};
use crate::series::{ln_power_term, LnSeries};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Kinematics {
    pub xi0: f64,
    pub xi1: f64,
    /// `lambda0 * lambda1 * xi0 * xi1`.
    pub z: f64,
    /// `exp(-lambda0*xi0 - lambda1*xi1) / (gamma0 - gamma1)`.
    pub theta: f64,
    pub ln_theta: f64,
}

/// `I0s·θ` and `I1s·θ`, formed in log space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledSeries {
    pub i0_theta: f64,
    pub i1_theta: f64,
}

pub fn kinematics(params: &TelegraphParams, t: f64, x: f64) -> Result<Kinematics> {
    if !(t.is_finite() && t > 0.0) {
        return Err(TelegraphError::NonPositive {
            what: "time",
            value: t,
        });
    }
    if !x.is_finite() {
        return Err(TelegraphError::Domain(format!("position must be finite (got {x})")));
    }
    Ok(Kinematics::at(params, t, x))
}

impl Kinematics {
    /// Unchecked evaluation; `t` is assumed positive and finite.
    pub(crate) fn at(params: &TelegraphParams, t: f64, x: f64) -> Self {
        let (l0, l1) = (params.lambda0(), params.lambda1());
        let (g0, g1) = (params.gamma0(), params.gamma1());
        let spread = g0 - g1;
        let xi0 = (x - g1 * t) / spread;
        let xi1 = (g0 * t - x) / spread;
        let ln_theta = -l0 * xi0 - l1 * xi1 - spread.ln();
        Kinematics {
            xi0,
            xi1,
            z: l0 * l1 * xi0 * xi1,
            theta: ln_theta.exp(),
            ln_theta,
        }
    }

    pub fn xi(&self, state: State) -> f64 {
        match state {
            State::Zero => self.xi0,
            State::One => self.xi1,
        }
    }

    /// Whether `(t, x)` lies strictly inside the cone `gamma1*t < x < gamma0*t`.
    pub fn inside_cone(&self) -> bool {
        self.xi0 > 0.0 && self.xi1 > 0.0
    }

    pub fn scaled_series(&self) -> ScaledSeries {
        let s = LnSeries::at(self.z);
        ScaledSeries {
            i0_theta: (s.ln_i0 + self.ln_theta).exp(),
            i1_theta: (s.ln_i1 + self.ln_theta).exp(),
        }
    }

    /// `zᵏ/(k!(k+shift)!) · θ`.
    pub fn power_theta(&self, k: u32, shift: u32) -> f64 {
        (ln_power_term(self.z, k, shift) + self.ln_theta).exp()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn symmetric_simplification() {
        let p = TelegraphParams::symmetric_unit();
        let k = kinematics(&p, 2.0, 0.0).unwrap();
        assert_eq!(k.xi0, 1.0);
        assert_eq!(k.xi1, 1.0);
        assert_eq!(k.z, 1.0);
        assert!(close(k.theta, (-2.0f64).exp() / 2.0, 1e-15));
    }

    #[test]
    fn asymmetric_point() {
        let p = TelegraphParams::new(2.0, 1.0, 3.0, -1.0).unwrap();
        let k = kinematics(&p, 1.0, 1.0).unwrap();
        // second route: solve the 2x2 system [1 1; g0 g1] (xi0, xi1) = (t, x) by Cramer's rule
        let det = -1.0 - 3.0;
        let xi0 = (-1.0 - 1.0) / det;
        let xi1 = (1.0 * 1.0 - 3.0 * 1.0) / det;
        assert!(close(k.xi0, xi0, 1e-15) && close(k.xi0, 0.5, 1e-15));
        assert!(close(k.xi1, xi1, 1e-15) && close(k.xi1, 0.5, 1e-15));
        assert!(close(k.z, 2.0 * 1.0 * xi0 * xi1, 1e-15));
        assert!(close(k.theta, (-1.5f64).exp() / 4.0, 1e-15));
    }

    #[test]
    fn cone_boundary() {
        let p = TelegraphParams::new(0.7, 1.3, 2.0, -0.5).unwrap();
        let k = kinematics(&p, 3.0, 6.0).unwrap();
        assert_eq!(k.xi1, 0.0);
        assert_eq!(k.z, 0.0);
        assert!(!k.inside_cone());
    }

    #[test]
    fn rejects_non_positive_time() {
        let p = TelegraphParams::symmetric_unit();
        assert!(kinematics(&p, 0.0, 0.0).is_err());
        assert!(kinematics(&p, -1.0, 0.0).is_err());
        assert!(kinematics(&p, 1.0, f64::NAN).is_err());
    }

    fn params() -> impl Strategy<Value = TelegraphParams> {
        (0.1f64..5.0, 0.1f64..5.0, 0.1f64..4.0, 0.1f64..4.0, prop::bool::ANY).prop_map(
            |(l0, l1, a, b, opposite)| {
                let (g0, g1) = if opposite { (a, -b) } else { (a + b, a) };
                TelegraphParams::new(l0, l1, g0, g1).unwrap()
            },
        )
    }

    proptest! {
        #[test]
        fn time_and_position_identities(p in params(), t in 0.01f64..10.0, u in 0.0f64..1.0) {
            let x = p.gamma1() * t + u * (p.gamma0() - p.gamma1()) * t;
            let k = kinematics(&p, t, x).unwrap();
            prop_assert!(close(k.xi0 + k.xi1, t, 1e-13));
            prop_assert!(close(p.gamma0() * k.xi0 + p.gamma1() * k.xi1, x, 1e-13 * t.max(1.0)));
            prop_assert!(k.z >= -1e-12);
            prop_assert!(k.theta > 0.0);
        }

        #[test]
        fn translation_identities(p in params(), t in 0.5f64..10.0, u in 0.0f64..1.0, frac in 0.0f64..1.0) {
            let x = p.gamma1() * t + u * (p.gamma0() - p.gamma1()) * t;
            let tau = frac * t;
            let k = Kinematics::at(&p, t, x);
            let along0 = Kinematics::at(&p, t - tau, x - p.gamma0() * tau);
            prop_assert!(close(along0.xi0, k.xi0 - tau, 1e-12));
            prop_assert!(close(along0.xi1, k.xi1, 1e-12));
            let along1 = Kinematics::at(&p, t - tau, x - p.gamma1() * tau);
            prop_assert!(close(along1.xi0, k.xi0, 1e-12));
            prop_assert!(close(along1.xi1, k.xi1 - tau, 1e-12));
        }
    }
}
