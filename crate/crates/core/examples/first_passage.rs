//! First-passage times through a level in the three velocity regimes.

use telegraph::first_passage::{default_horizon, fpt_atom, fpt_density, fpt_law, fpt_switch_density, ThresholdSpec};
use telegraph::quadrature::Tolerance;
use telegraph::{State, TelegraphParams};

fn report(name: &str, p: &TelegraphParams, y: f64) -> telegraph::Result<()> {
    let spec = ThresholdSpec::new(p, y)?;
    println!("{name}: regime {:?}, level {y}", p.regime());
    if !spec.is_reachable() {
        println!("  level never reached");
        return Ok(());
    }
    let tol = Tolerance::absolute(1e-11);
    for state in [State::Zero, State::One] {
        let law = fpt_law(p, state, y)?;
        let atom = fpt_atom(p, state, y)?;
        println!(
            "  from state {}: atom {:?}, P(T < ∞) = {:.8}",
            state.index(),
            atom.map(|a| (a.location, a.mass)),
            law.total_mass(&tol)
        );
    }
    Ok(())
}

fn main() -> telegraph::Result<()> {
    report("both up", &TelegraphParams::new(1.0, 2.0, 3.0, 0.5)?, 1.5)?;
    report("both down", &TelegraphParams::new(1.0, 2.0, -0.5, -3.0)?, -1.5)?;
    report("both up, level below", &TelegraphParams::new(1.0, 2.0, 3.0, 0.5)?, -1.0)?;

    // drift (gamma0 lambda1 + gamma1 lambda0) / (lambda0 + lambda1) decides
    // whether every level is eventually crossed
    let away = TelegraphParams::new(2.0, 1.0, 1.0, -2.0)?;
    println!("drift {:.3}", away.drift());
    report("drifting away", &away, 1.0)?;
    report("symmetric", &TelegraphParams::symmetric_unit(), 1.0)?;

    let p = TelegraphParams::symmetric_unit();
    println!("symmetric, y = 1, horizon for simulation {}", default_horizon(&p, 1.0));
    for t in [1.5, 2.0, 4.0] {
        let parts: Vec<String> = (1..=4)
            .map(|n| format!("{:.5}", fpt_switch_density(&p, State::Zero, t, 1.0, n).unwrap_or(0.0)))
            .collect();
        println!("  t = {t}: f0 = {:.6}  by count {}", fpt_density(&p, State::Zero, t, 1.0)?, parts.join(" "));
    }
    Ok(())
}
