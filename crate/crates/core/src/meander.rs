//! Telegraphic meanders: paths that never cross their starting level.
//!
//! The positive meander is the event `{m_t = 0}` for a path started in state 0
//! (upward), the negative meander is `{M_t = 0}` for a path started in state 1.
//! With velocities of the same sign the meander is either the whole position
//! law or empty, and the functions below dispatch accordingly.

use serde::{Deserialize, Serialize};

use crate::density::{position_law, switch_density_at};
use crate::error::{Result, TelegraphError};
use crate::kinematics::Kinematics;
use crate::law::{Atom, MixedLaw, Support};
use crate::params::{State, TelegraphParams, VelocityRegime};
use crate::quadrature::{integrate, Tolerance};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum MeanderSign {
    Positive,
    Negative,
}

impl MeanderSign {
    /// The only initial state with a non-trivial meander of this sign.
    pub fn initial_state(self) -> State {
        match self {
            MeanderSign::Positive => State::Zero,
            MeanderSign::Negative => State::One,
        }
    }

    fn same_sign_dispatch(self, regime: VelocityRegime) -> bool {
        matches!(
            (self, regime),
            (MeanderSign::Positive, VelocityRegime::BothPositive)
                | (MeanderSign::Negative, VelocityRegime::BothNegative)
        )
    }
}

fn check_time(t: f64) -> Result<()> {
    if t.is_finite() && t > 0.0 {
        Ok(())
    } else {
        Err(TelegraphError::NonPositive {
            what: "time",
            value: t,
        })
    }
}

fn require_opposite(params: &TelegraphParams) -> Result<()> {
    match params.regime() {
        VelocityRegime::OppositeSigns => Ok(()),
        other => Err(TelegraphError::RegimeMismatch(other)),
    }
}

/// The no-switch meander path.
pub fn meander_atom(params: &TelegraphParams, sign: MeanderSign, t: f64) -> Result<Atom> {
    require_opposite(params)?;
    check_time(t)?;
    let state = sign.initial_state();
    Ok(Atom {
        location: params.velocity(state) * t,
        mass: (-params.rate(state) * t).exp(),
    })
}

/// Density of `{Γ(t) ∈ dx, meander, N(t) = n}`, `n >= 1`.
pub fn meander_switch_density(params: &TelegraphParams, sign: MeanderSign, t: f64, x: f64, n: u32) -> Result<f64> {
    check_time(t)?;
    if n == 0 {
        return Err(TelegraphError::SwitchCount(n));
    }
    Ok(switch_density_unchecked(params, sign, t, x, n))
}

pub(crate) fn switch_density_unchecked(p: &TelegraphParams, sign: MeanderSign, t: f64, x: f64, n: u32) -> f64 {
    let k = Kinematics::at(p, t, x);
    match p.regime() {
        VelocityRegime::OppositeSigns => {}
        regime if sign.same_sign_dispatch(regime) => {
            return switch_density_at(p, sign.initial_state(), &k, n);
        }
        _ => return 0.0,
    }
    let (l0, l1) = (p.lambda0(), p.lambda1());
    let (g0, g1) = (p.gamma0(), p.gamma1());
    let half = (n - 1) / 2;
    let odd = n % 2 == 1;
    match sign {
        MeanderSign::Positive => {
            if !(x > 0.0 && x < g0 * t) {
                return 0.0;
            }
            if odd {
                l0 / k.xi0 * k.power_theta(half, 0) * (x - g1 * k.xi1 / f64::from(half + 1)) / g0
            } else {
                l0 * l1 * k.power_theta(half, 1) * x / g0
            }
        }
        MeanderSign::Negative => {
            if !(x < 0.0 && x > g1 * t) {
                return 0.0;
            }
            if odd {
                l1 / k.xi1 * k.power_theta(half, 0) * (x - g0 * k.xi0 / f64::from(half + 1)) / g1
            } else {
                l0 * l1 * k.power_theta(half, 1) * x / g1
            }
        }
    }
}

/// Summed meander density (opposite signs only; caller checks the regime).
pub(crate) fn summed_density_opposite(p: &TelegraphParams, sign: MeanderSign, t: f64, x: f64) -> f64 {
    let (l0, l1) = (p.lambda0(), p.lambda1());
    let (g0, g1) = (p.gamma0(), p.gamma1());
    match sign {
        MeanderSign::Positive => {
            if !(x > 0.0 && x < g0 * t) {
                return 0.0;
            }
            let k = Kinematics::at(p, t, x);
            let s = k.scaled_series();
            l0 / g0 * (x / k.xi0 * s.i0_theta + (l1 * x - g1 * k.xi1 / k.xi0) * s.i1_theta)
        }
        MeanderSign::Negative => {
            if !(x < 0.0 && x > g1 * t) {
                return 0.0;
            }
            let k = Kinematics::at(p, t, x);
            let s = k.scaled_series();
            l1 / g1 * (x / k.xi1 * s.i0_theta + (l0 * x - g0 * k.xi0 / k.xi1) * s.i1_theta)
        }
    }
}

/// Law of `Γ(t)` on the meander event. Its total mass is `P_0{m_t = 0}`
/// (positive) or `P_1{M_t = 0}` (negative).
pub fn meander_law(params: &TelegraphParams, sign: MeanderSign, t: f64) -> Result<MixedLaw> {
    check_time(t)?;
    match params.regime() {
        VelocityRegime::OppositeSigns => {}
        regime if sign.same_sign_dispatch(regime) => return position_law(params, sign.initial_state(), t),
        _ => return Ok(MixedLaw::empty()),
    }
    let atom = meander_atom(params, sign, t)?;
    let p = *params;
    let support = match sign {
        MeanderSign::Positive => Support::new(0.0, p.gamma0() * t),
        MeanderSign::Negative => Support::new(p.gamma1() * t, 0.0),
    };
    Ok(MixedLaw::new(vec![atom], support, move |x| summed_density_opposite(&p, sign, t, x)))
}

/// `P_0{m_t = 0}` or `P_1{M_t = 0}`.
pub fn meander_mass(params: &TelegraphParams, sign: MeanderSign, t: f64, tol: &Tolerance) -> Result<f64> {
    Ok(meander_law(params, sign, t)?.total_mass(tol))
}

/// Residual of one equation obtained by conditioning the positive meander on
/// its last switch:
///
/// * even `m`: `g(t,x;m) = ∫_0^{x/gamma0} lambda1 e^{-lambda0 s} g(t-s, x-gamma0 s; m-1) ds`,
/// * odd `m`: `g(t,x;m) = ∫_0^{xi1(t,x)} lambda0 e^{-lambda1 s} g(t-s, x-gamma1 s; m-1) ds`,
///
/// with `g(·;0)` the no-switch atom.
pub fn meander_equation_residual(params: &TelegraphParams, t: f64, x: f64, m: u32) -> Result<f64> {
    let p = *params;
    require_opposite(&p)?;
    check_time(t)?;
    if !(x > 0.0 && x < p.gamma0() * t) {
        return Err(TelegraphError::Domain(format!(
            "position {x} outside the positive meander support (0, {})",
            p.gamma0() * t
        )));
    }
    if m == 0 {
        return Err(TelegraphError::SwitchCount(m));
    }
    let tol = Tolerance::absolute(1e-13).with_rel(1e-12);
    let (l0, l1) = (p.lambda0(), p.lambda1());
    let (g0, g1) = (p.gamma0(), p.gamma1());
    let g = |t: f64, x: f64, n: u32| switch_density_unchecked(&p, MeanderSign::Positive, t, x, n);
    let lhs = g(t, x, m);
    let rhs = if m.is_multiple_of(2) {
        integrate(|s| l1 * (-l0 * s).exp() * g(t - s, x - g0 * s, m - 1), 0.0, x / g0, &tol).value
    } else {
        let k = Kinematics::at(&p, t, x);
        if m == 1 {
            // the earlier path is the atom: last switch exactly at s = xi1
            l0 * (-l1 * k.xi1 - l0 * k.xi0).exp() / (g0 - g1)
        } else {
            integrate(|s| l0 * (-l1 * s).exp() * g(t - s, x - g1 * s, m - 1), 0.0, k.xi1, &tol).value
        }
    };
    Ok((lhs - rhs).abs())
}

/// Residuals of the pair of equations for `g(·;2n+2)` and `g(·;2n+1)`.
pub fn meander_integral_equation_residual(params: &TelegraphParams, t: f64, x: f64, n: u32) -> Result<(f64, f64)> {
    if n == 0 {
        return Err(TelegraphError::SwitchCount(n));
    }
    Ok((
        meander_equation_residual(params, t, x, 2 * n + 2)?,
        meander_equation_residual(params, t, x, 2 * n + 1)?,
    ))
}
