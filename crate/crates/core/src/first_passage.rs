//! Laws of the first passage time `T(y) = min{t > 0 : Γ(t) = y}`, jointly with
//! the number of switches before passage.
//!
//! * Both velocities share the sign of `y`: `T(y)` lives on the segment with
//!   ends `y/gamma0` and `y/gamma1`, and the law is proper.
//! * Both velocities point away from `y`: the level is never reached.
//! * Opposite signs: `T(y)` lives on a half-line and the law may be defective.
//!   Negative thresholds are handled by their own closed forms; the mirrored
//!   process ([`TelegraphParams::interchanged`]) gives an independent route.

use serde::{Deserialize, Serialize};

use crate::error::{Result, TelegraphError};
use crate::kinematics::Kinematics;
use crate::law::{Atom, MixedLaw, Support};
use crate::params::{State, TelegraphParams, VelocityRegime};
use crate::quadrature::{integrate, Tolerance};

/// A threshold together with the support of its passage time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdSpec {
    pub y: f64,
    /// `None` when the level is never reached.
    pub support: Option<Support>,
}

impl ThresholdSpec {
    pub fn new(params: &TelegraphParams, y: f64) -> Result<Self> {
        check_threshold(y)?;
        let (g0, g1) = (params.gamma0(), params.gamma1());
        let support = match (params.regime(), y > 0.0) {
            (VelocityRegime::BothPositive, true) => Some(Support::new(y / g0, y / g1)),
            (VelocityRegime::BothNegative, false) => Some(Support::new(y / g1, y / g0)),
            (VelocityRegime::BothPositive, false) | (VelocityRegime::BothNegative, true) => None,
            (VelocityRegime::OppositeSigns, true) => Some(Support::new(y / g0, f64::INFINITY)),
            (VelocityRegime::OppositeSigns, false) => Some(Support::new(y / g1, f64::INFINITY)),
        };
        Ok(ThresholdSpec { y, support })
    }

    pub fn is_reachable(&self) -> bool {
        self.support.is_some()
    }
}

fn check_threshold(y: f64) -> Result<()> {
    if y == 0.0 {
        Err(TelegraphError::ZeroThreshold)
    } else if !y.is_finite() {
        Err(TelegraphError::Domain(format!("threshold must be finite (got {y})")))
    } else {
        Ok(())
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

/// Passage without switches: present iff the initial velocity points at `y`.
pub fn fpt_atom(params: &TelegraphParams, state: State, y: f64) -> Result<Option<Atom>> {
    check_threshold(y)?;
    let arrival = y / params.velocity(state);
    Ok((arrival > 0.0).then(|| Atom {
        location: arrival,
        mass: (-params.rate(state) * arrival).exp(),
    }))
}

/// Density in `t` of `{T(y) ∈ dt, N(T) = n}`, `n >= 1`.
pub fn fpt_switch_density(params: &TelegraphParams, state: State, t: f64, y: f64, n: u32) -> Result<f64> {
    check_threshold(y)?;
    check_time(t)?;
    if n == 0 {
        return Err(TelegraphError::SwitchCount(n));
    }
    Ok(switch_density_unchecked(params, state, t, y, n))
}

/// Continuous part of the passage-time law, summed over switch counts.
pub fn fpt_density(params: &TelegraphParams, state: State, t: f64, y: f64) -> Result<f64> {
    check_threshold(y)?;
    check_time(t)?;
    Ok(summed_density_unchecked(params, state, t, y))
}

/// Whether `t` lies in the open support of the passage law of `y`.
fn in_support(params: &TelegraphParams, t: f64, y: f64) -> bool {
    let (g0, g1) = (params.gamma0(), params.gamma1());
    match (params.regime(), y > 0.0) {
        (VelocityRegime::BothPositive, true) => y / g0 < t && t < y / g1,
        (VelocityRegime::BothNegative, false) => y / g1 < t && t < y / g0,
        (VelocityRegime::OppositeSigns, true) => t > y / g0,
        (VelocityRegime::OppositeSigns, false) => t > y / g1,
        _ => false,
    }
}

pub(crate) fn switch_density_unchecked(p: &TelegraphParams, state: State, t: f64, y: f64, n: u32) -> f64 {
    if !in_support(p, t, y) {
        return 0.0;
    }
    let k = Kinematics::at(p, t, y);
    let half = (n - 1) / 2;
    let odd = n % 2 == 1;
    let (l0, l1) = (p.lambda0(), p.lambda1());
    let (g0, g1) = (p.gamma0(), p.gamma1());
    match p.regime() {
        VelocityRegime::BothPositive | VelocityRegime::BothNegative => {
            if odd {
                p.rate(state) * p.velocity(state.other()).abs() * k.power_theta(half, 0)
            } else {
                l0 * l1 * p.velocity(state).abs() * k.xi(state) * k.power_theta(half, 1)
            }
        }
        VelocityRegime::OppositeSigns => match (y > 0.0, state, odd) {
            // upward passage ends in state 0: even counts from 0, odd from 1
            (true, State::Zero, false) => l0 * l1 * y * k.power_theta(half, 1),
            (true, State::One, true) => {
                l1 / k.xi0 * k.power_theta(half, 0) * (y - g1 * k.xi1 / f64::from(half + 1))
            }
            // downward passage ends in state 1: odd counts from 0, even from 1
            (false, State::Zero, true) => {
                l0 / k.xi1 * k.power_theta(half, 0) * (-y + g0 * k.xi0 / f64::from(half + 1))
            }
            (false, State::One, false) => -l0 * l1 * y * k.power_theta(half, 1),
            _ => 0.0,
        },
    }
}

pub(crate) fn summed_density_unchecked(p: &TelegraphParams, state: State, t: f64, y: f64) -> f64 {
    if !in_support(p, t, y) {
        return 0.0;
    }
    let k = Kinematics::at(p, t, y);
    let s = k.scaled_series();
    let (l0, l1) = (p.lambda0(), p.lambda1());
    let (g0, g1) = (p.gamma0(), p.gamma1());
    match p.regime() {
        VelocityRegime::BothPositive | VelocityRegime::BothNegative => {
            let other = state.other();
            p.rate(state)
                * (p.velocity(other).abs() * s.i0_theta
                    + p.rate(other) * p.velocity(state).abs() * k.xi(state) * s.i1_theta)
        }
        VelocityRegime::OppositeSigns => match (y > 0.0, state) {
            (true, State::Zero) => l0 * l1 * y * s.i1_theta,
            (true, State::One) => l1 / k.xi0 * (y * s.i0_theta - g1 * k.xi1 * s.i1_theta),
            (false, State::Zero) => l0 / k.xi1 * (-y * s.i0_theta + g0 * k.xi0 * s.i1_theta),
            (false, State::One) => -l0 * l1 * y * s.i1_theta,
        },
    }
}

/// The full passage-time law: atom (if any) plus summed density.
///
/// In the opposite-signs regime the law may be defective; its total mass is
/// `P_i{T(y) < ∞}`. Unreachable levels give the empty law.
pub fn fpt_law(params: &TelegraphParams, state: State, y: f64) -> Result<MixedLaw> {
    let spec = ThresholdSpec::new(params, y)?;
    let Some(support) = spec.support else {
        return Ok(MixedLaw::empty());
    };
    let atoms = fpt_atom(params, state, y)?.into_iter().collect();
    let p = *params;
    Ok(MixedLaw::new(atoms, support, move |t| summed_density_unchecked(&p, state, t, y)))
}

/// Default simulation horizon for passage experiments:
/// `50 * max(1/lambda0, 1/lambda1, |y|/|gamma0|, |y|/|gamma1|)`.
pub fn default_horizon(params: &TelegraphParams, y: f64) -> f64 {
    let scales = [
        1.0 / params.lambda0(),
        1.0 / params.lambda1(),
        (y / params.gamma0()).abs(),
        (y / params.gamma1()).abs(),
    ];
    50.0 * scales.into_iter().fold(0.0, f64::max)
}

fn reversal_rate(params: &TelegraphParams, y: f64) -> Result<f64> {
    check_threshold(y)?;
    if params.regime() != VelocityRegime::OppositeSigns {
        return Err(TelegraphError::RegimeMismatch(params.regime()));
    }
    // passage upward happens in state 0, downward in state 1
    Ok(if y > 0.0 { params.lambda0() } else { params.lambda1() })
}

/// Density of `{T(y) ∈ dt, N(T) = n, N(T+) = n + 1}`: passage with a
/// simultaneous velocity reversal.
pub fn fpt_with_reversal_density(params: &TelegraphParams, state: State, t: f64, y: f64, n: u32) -> Result<f64> {
    let rate = reversal_rate(params, y)?;
    Ok(rate * fpt_switch_density(params, state, t, y, n)?)
}

/// The `n = 0` counterpart of [`fpt_with_reversal_density`].
pub fn fpt_with_reversal_atom(params: &TelegraphParams, state: State, y: f64) -> Result<Option<Atom>> {
    let rate = reversal_rate(params, y)?;
    Ok(fpt_atom(params, state, y)?.map(|a| Atom {
        location: a.location,
        mass: rate * a.mass,
    }))
}

/// Residual of one coupled equation obtained by conditioning on the first
/// switch, for an upward passage (`y > 0`) with velocities of opposite signs:
///
/// * from state 0: `f0(t,y;m) = ∫_0^{y/gamma0} lambda0 e^{-lambda0 τ} f1(t-τ, y-gamma0 τ; m-1) dτ`,
/// * from state 1: `f1(t,y;m) = ∫_0^{xi1(t,y)} lambda1 e^{-lambda1 τ} f0(t-τ, y-gamma1 τ; m-1) dτ`,
///
/// where `f0(·;0)` is the no-switch atom. Wrong-parity counts give `0 = 0`.
pub fn coupled_equation_residual(params: &TelegraphParams, state: State, t: f64, y: f64, m: u32) -> Result<f64> {
    let p = *params;
    if p.regime() != VelocityRegime::OppositeSigns {
        return Err(TelegraphError::RegimeMismatch(p.regime()));
    }
    if !(y.is_finite() && y > 0.0) {
        return Err(TelegraphError::Domain(format!("threshold must be positive (got {y})")));
    }
    check_time(t)?;
    if t <= y / p.gamma0() {
        return Err(TelegraphError::Domain(format!(
            "time {t} precedes the earliest passage {}",
            y / p.gamma0()
        )));
    }
    if m == 0 {
        return Err(TelegraphError::SwitchCount(m));
    }
    let tol = Tolerance::absolute(1e-13).with_rel(1e-12);
    let (g0, g1) = (p.gamma0(), p.gamma1());
    let lhs = switch_density_unchecked(&p, state, t, y, m);
    let rhs = match state {
        State::Zero => {
            let l0 = p.lambda0();
            integrate(
                |tau| l0 * (-l0 * tau).exp() * switch_density_unchecked(&p, State::One, t - tau, y - g0 * tau, m - 1),
                0.0,
                y / g0,
                &tol,
            )
            .value
        }
        State::One => {
            let l1 = p.lambda1();
            let xi1 = Kinematics::at(&p, t, y).xi1;
            if m == 1 {
                // the remaining path is the atom: switch exactly at tau = xi1
                let xi0 = t - xi1;
                l1 * (-l1 * xi1 - p.lambda0() * xi0).exp() * g0 / (g0 - g1)
            } else {
                integrate(
                    |tau| {
                        l1 * (-l1 * tau).exp()
                            * switch_density_unchecked(&p, State::Zero, t - tau, y - g1 * tau, m - 1)
                    },
                    0.0,
                    xi1,
                    &tol,
                )
                .value
            }
        }
    };
    Ok((lhs - rhs).abs())
}

/// Residuals of the pair of coupled equations for `f0(·;2n)` and `f1(·;2n+1)`.
pub fn fpt_integral_equation_residual(params: &TelegraphParams, t: f64, y: f64, n: u32) -> Result<(f64, f64)> {
    if n == 0 {
        return Err(TelegraphError::SwitchCount(n));
    }
    Ok((
        coupled_equation_residual(params, State::Zero, t, y, 2 * n)?,
        coupled_equation_residual(params, State::One, t, y, 2 * n + 1)?,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    const E2_HALF: f64 = 0.067_667_641_618_306_35;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
    }

    #[test]
    fn atoms() {
        let p = TelegraphParams::symmetric_unit();
        let a = fpt_atom(&p, State::Zero, 1.0).unwrap().unwrap();
        assert_eq!(a.location, 1.0);
        assert!((a.mass - (-1.0f64).exp()).abs() < 1e-16);
        assert!(fpt_atom(&p, State::One, 1.0).unwrap().is_none());
        let p = TelegraphParams::new(1.0, 2.0, 1.0, -2.0).unwrap();
        let a = fpt_atom(&p, State::One, -1.0).unwrap().unwrap();
        assert_eq!(a.location, 0.5);
        assert!((a.mass - (-1.0f64).exp()).abs() < 1e-16);
        assert!(fpt_atom(&p, State::One, 0.0).is_err());
    }

    #[test]
    fn low_order_opposite_sign_densities() {
        let p = TelegraphParams::symmetric_unit();
        let f = fpt_switch_density(&p, State::One, 2.0, 1.0, 1).unwrap();
        assert!(rel(f, E2_HALF) < 1e-15);
        let f = fpt_switch_density(&p, State::Zero, 2.0, 1.0, 2).unwrap();
        assert!(rel(f, E2_HALF) < 1e-15);
        for n in [1, 3, 5, 7] {
            assert_eq!(fpt_switch_density(&p, State::Zero, 2.7, 1.0, n).unwrap(), 0.0);
        }
        for n in [2, 4, 6] {
            assert_eq!(fpt_switch_density(&p, State::One, 2.7, 1.0, n).unwrap(), 0.0);
        }
        // before the earliest passage
        assert_eq!(fpt_switch_density(&p, State::One, 0.9, 1.0, 1).unwrap(), 0.0);
        assert!(fpt_switch_density(&p, State::One, 2.0, 1.0, 0).is_err());
    }

    #[test]
    fn same_sign_support_and_properness() {
        let p = TelegraphParams::new(1.0, 2.0, 2.0, 1.0).unwrap();
        let spec = ThresholdSpec::new(&p, 1.0).unwrap();
        assert_eq!(spec.support, Some(Support::new(0.5, 1.0)));
        for state in [State::Zero, State::One] {
            let law = fpt_law(&p, state, 1.0).unwrap();
            let m = law.total_mass(&Tolerance::absolute(1e-11));
            assert!((m - 1.0).abs() < 1e-8, "{state:?}: {m}");
        }
        let neg = TelegraphParams::new(0.7, 1.6, -0.5, -2.0).unwrap();
        for state in [State::Zero, State::One] {
            let law = fpt_law(&neg, state, -1.3).unwrap();
            let m = law.total_mass(&Tolerance::absolute(1e-11));
            assert!((m - 1.0).abs() < 1e-8, "{state:?}: {m}");
        }
    }

    #[test]
    fn unreachable_levels() {
        let p = TelegraphParams::new(1.0, 1.0, 2.0, 1.0).unwrap();
        assert!(!ThresholdSpec::new(&p, -1.0).unwrap().is_reachable());
        let law = fpt_law(&p, State::Zero, -1.0).unwrap();
        assert!(law.is_empty());
        assert_eq!(fpt_switch_density(&p, State::Zero, 1.0, -1.0, 3).unwrap(), 0.0);
        assert!(fpt_atom(&p, State::Zero, -1.0).unwrap().is_none());
    }

    #[test]
    fn symmetric_zero_drift_law_is_proper() {
        let p = TelegraphParams::symmetric_unit();
        let law = fpt_law(&p, State::Zero, 1.0).unwrap();
        let m = law.total_mass(&Tolerance::absolute(1e-10));
        assert!((m - 1.0).abs() < 1e-6, "{m}");
    }

    #[test]
    fn drift_away_gives_defective_law() {
        // stationary drift (1*1 - 1*3)/4 < 0, threshold above
        let p = TelegraphParams::new(3.0, 1.0, 1.0, -1.0).unwrap();
        assert!(p.drift() < 0.0);
        let m = fpt_law(&p, State::Zero, 1.0).unwrap().total_mass(&Tolerance::absolute(1e-10));
        assert!(m < 0.9 && m > 0.0, "{m}");
    }

    #[test]
    fn negative_threshold_matches_mirrored_process() {
        let p = TelegraphParams::new(2.0, 0.5, 3.0, -1.0).unwrap();
        let q = p.interchanged();
        for &(t, y) in &[(2.0, -0.7), (4.5, -2.5), (3.1, -0.01)] {
            for n in 1..8 {
                for state in [State::Zero, State::One] {
                    let direct = fpt_switch_density(&p, state, t, y, n).unwrap();
                    let mirrored = fpt_switch_density(&q, state.other(), t, -y, n).unwrap();
                    assert!((direct - mirrored).abs() <= 1e-12 * mirrored.abs().max(1e-300));
                }
            }
            for state in [State::Zero, State::One] {
                let direct = fpt_density(&p, state, t, y).unwrap();
                let mirrored = fpt_density(&q, state.other(), t, -y).unwrap();
                assert!(rel(direct, mirrored) < 1e-12);
            }
        }
    }

    #[test]
    fn partial_sums_reproduce_summed_density() {
        let cases = [
            (TelegraphParams::new(2.0, 0.5, 3.0, -1.0).unwrap(), 1.0),
            (TelegraphParams::new(2.0, 0.5, 3.0, -1.0).unwrap(), -1.0),
            (TelegraphParams::new(1.0, 2.0, 2.0, 1.0).unwrap(), 1.0),
            (TelegraphParams::new(1.0, 2.0, -1.0, -2.0).unwrap(), -1.0),
        ];
        for (p, y) in cases {
            let spec = ThresholdSpec::new(&p, y).unwrap().support.unwrap();
            let hi = if spec.is_bounded() { spec.hi } else { spec.lo + 4.0 };
            for j in 1..10 {
                let t = spec.lo + (hi - spec.lo) * j as f64 / 10.0;
                for state in [State::Zero, State::One] {
                    let sum: f64 = (1..=60).map(|n| fpt_switch_density(&p, state, t, y, n).unwrap()).sum();
                    let total = fpt_density(&p, state, t, y).unwrap();
                    assert!((sum - total).abs() < 1e-10, "{sum} vs {total}");
                }
            }
        }
    }

    #[test]
    fn coupled_equations_hold() {
        let p = TelegraphParams::symmetric_unit();
        let (a, b) = fpt_integral_equation_residual(&p, 3.0, 1.0, 1).unwrap();
        assert!(a < 1e-8 && b < 1e-8, "{a} {b}");
        let p = TelegraphParams::new(2.0, 0.5, 3.0, -1.0).unwrap();
        let (a, b) = fpt_integral_equation_residual(&p, 2.0, 1.0, 3).unwrap();
        assert!(a < 1e-8 && b < 1e-8, "{a} {b}");
        // first equation from state 1 with the atomic remainder
        assert!(coupled_equation_residual(&p, State::One, 2.0, 1.0, 1).unwrap() < 1e-14);
        // wrong parity: both sides vanish identically
        assert_eq!(coupled_equation_residual(&p, State::Zero, 2.0, 1.0, 3).unwrap(), 0.0);
        assert_eq!(coupled_equation_residual(&p, State::One, 2.0, 1.0, 4).unwrap(), 0.0);
        assert!(fpt_integral_equation_residual(&p, 0.2, 1.0, 1).is_err());
    }

    #[test]
    fn reversal_is_rate_times_passage() {
        let p = TelegraphParams::new(2.0, 1.0, 1.0, -1.0).unwrap();
        let plain = fpt_switch_density(&p, State::Zero, 2.0, 1.0, 2).unwrap();
        let rev = fpt_with_reversal_density(&p, State::Zero, 2.0, 1.0, 2).unwrap();
        assert_eq!(rev, 2.0 * plain);
        assert_eq!(fpt_with_reversal_density(&p, State::Zero, 2.0, 1.0, 3).unwrap(), 0.0);
        let atom = fpt_with_reversal_atom(&p, State::Zero, 1.0).unwrap().unwrap();
        assert_eq!(atom.mass, 2.0 * (-2.0f64).exp());
        let rev_down = fpt_with_reversal_density(&p, State::Zero, 2.0, -1.0, 1).unwrap();
        assert_eq!(rev_down, fpt_switch_density(&p, State::Zero, 2.0, -1.0, 1).unwrap());
        let same = TelegraphParams::new(1.0, 1.0, 2.0, 1.0).unwrap();
        assert!(fpt_with_reversal_density(&same, State::Zero, 0.7, 1.0, 1).is_err());
    }
}
