//! Joint law of the position `Γ(t)` and the switch count `N(t)`, and the
//! summed position law.

use crate::error::{Result, TelegraphError};
use crate::kinematics::{kinematics, Kinematics};
use crate::law::{Atom, MixedLaw, Support};
use crate::params::{State, TelegraphParams};
use crate::quadrature::{integrate, Tolerance};

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

/// Mass of the straight-line path without switches.
pub fn position_atom(params: &TelegraphParams, state: State, t: f64) -> Result<Atom> {
    check_time(t)?;
    Ok(Atom {
        location: params.velocity(state) * t,
        mass: (-params.rate(state) * t).exp(),
    })
}

/// Density of `Γ(t)` on the event `N(t) = n`, for `n >= 1`.
pub fn position_switch_density(
    params: &TelegraphParams,
    state: State,
    t: f64,
    x: f64,
    n: u32,
) -> Result<f64> {
    if n == 0 {
        return Err(TelegraphError::SwitchCount(n));
    }
    let k = kinematics(params, t, x)?;
    Ok(switch_density_at(params, state, &k, n))
}

pub(crate) fn switch_density_at(params: &TelegraphParams, state: State, k: &Kinematics, n: u32) -> f64 {
    if !k.inside_cone() {
        return 0.0;
    }
    let half = (n - 1) / 2;
    if n % 2 == 1 {
        params.rate(state) * k.power_theta(half, 0)
    } else {
        params.lambda0() * params.lambda1() * k.xi(state) * k.power_theta(half, 1)
    }
}

/// Density of the continuous part of `Γ(t)`, summed over all switch counts.
pub fn position_density(params: &TelegraphParams, state: State, t: f64, x: f64) -> Result<f64> {
    let k = kinematics(params, t, x)?;
    Ok(summed_density_at(params, state, &k))
}

pub(crate) fn summed_density_at(params: &TelegraphParams, state: State, k: &Kinematics) -> f64 {
    if !k.inside_cone() {
        return 0.0;
    }
    let s = k.scaled_series();
    let other = params.rate(state.other());
    params.rate(state) * (s.i0_theta + other * k.xi(state) * s.i1_theta)
}

/// Law of `Γ(t)` started in `state`: an atom at `gamma_i * t` plus a density
/// on `(gamma1 * t, gamma0 * t)`.
pub fn position_law(params: &TelegraphParams, state: State, t: f64) -> Result<MixedLaw> {
    let atom = position_atom(params, state, t)?;
    let p = *params;
    Ok(MixedLaw::new(
        vec![atom],
        Support::new(p.gamma1() * t, p.gamma0() * t),
        move |x| summed_density_at(&p, state, &Kinematics::at(&p, t, x)),
    ))
}

/// `P_i{N(t) = n}` by quadrature of the switch density (exact for `n = 0`).
pub fn switch_count_probability(params: &TelegraphParams, state: State, t: f64, n: u32) -> Result<f64> {
    check_time(t)?;
    if n == 0 {
        return Ok(position_atom(params, state, t)?.mass);
    }
    let p = *params;
    let r = integrate(
        |x| switch_density_at(&p, state, &Kinematics::at(&p, t, x), n),
        p.gamma1() * t,
        p.gamma0() * t,
        &Tolerance::absolute(1e-13).with_rel(1e-11),
    );
    Ok(r.value)
}

#[cfg(test)]
mod tests {
    use super::*;

    const E2_HALF: f64 = 0.067_667_641_618_306_35;

    #[test]
    fn atoms() {
        let p = TelegraphParams::symmetric_unit();
        let a = position_atom(&p, State::Zero, 1.0).unwrap();
        assert_eq!(a.location, 1.0);
        assert!((a.mass - (-1.0f64).exp()).abs() < 1e-16);
        let p = TelegraphParams::new(1.0, 2.0, 1.0, -1.0).unwrap();
        let a = position_atom(&p, State::One, 0.5).unwrap();
        assert_eq!(a.location, -0.5);
        assert!((a.mass - (-1.0f64).exp()).abs() < 1e-16);
        let a = position_atom(&p, State::Zero, 100.0).unwrap();
        assert!(a.mass < 1e-40 && a.mass > 0.0);
        assert!(position_atom(&p, State::Zero, 0.0).is_err());
    }

    #[test]
    fn low_order_switch_densities() {
        let p = TelegraphParams::symmetric_unit();
        let d1 = position_switch_density(&p, State::Zero, 2.0, 0.0, 1).unwrap();
        assert!((d1 - E2_HALF).abs() < 1e-16);
        let d2 = position_switch_density(&p, State::Zero, 2.0, 0.0, 2).unwrap();
        assert!((d2 - E2_HALF).abs() < 1e-16);
        assert_eq!(position_switch_density(&p, State::Zero, 2.0, 3.0, 5).unwrap(), 0.0);
        assert_eq!(position_switch_density(&p, State::One, 2.0, 2.0, 1).unwrap(), 0.0);
        assert!(position_switch_density(&p, State::Zero, 2.0, 0.0, 0).is_err());
    }

    #[test]
    fn density_tends_to_finite_limit_at_upper_edge() {
        let p = TelegraphParams::new(2.0, 1.0, 3.0, -1.0).unwrap();
        let t = 1.7;
        let limit = p.lambda0() * (1.0 + p.lambda1() * t) * (-p.lambda0() * t).exp() / 4.0;
        let near = position_density(&p, State::Zero, t, p.gamma0() * t - 1e-9).unwrap();
        assert!((near - limit).abs() < 1e-8 * limit);
        assert_eq!(position_density(&p, State::Zero, t, p.gamma0() * t).unwrap(), 0.0);
    }

    #[test]
    fn normalization() {
        let p = TelegraphParams::new(2.0, 1.0, 3.0, -1.0).unwrap();
        let law = position_law(&p, State::Zero, 1.7).unwrap();
        let m = law.total_mass(&Tolerance::absolute(1e-10));
        assert!((m - 1.0).abs() < 1e-8, "{m}");
    }

    #[test]
    fn partial_sums_reproduce_summed_density() {
        let p = TelegraphParams::new(0.8, 1.9, 1.5, -0.7).unwrap();
        let t = 2.3;
        for state in [State::Zero, State::One] {
            for j in 1..20 {
                let x = p.gamma1() * t + (p.gamma0() - p.gamma1()) * t * j as f64 / 20.0;
                let sum: f64 = (1..=40)
                    .map(|n| position_switch_density(&p, state, t, x, n).unwrap())
                    .sum();
                let total = position_density(&p, state, t, x).unwrap();
                assert!((sum - total).abs() < 1e-10, "{sum} {total}");
            }
        }
    }

    #[test]
    fn switch_counts_sum_to_one() {
        let p = TelegraphParams::new(1.3, 0.6, 2.0, 0.5).unwrap();
        let total: f64 = (0..40)
            .map(|n| switch_count_probability(&p, State::One, 1.5, n).unwrap())
            .sum();
        assert!((total - 1.0).abs() < 1e-9);
    }
}
