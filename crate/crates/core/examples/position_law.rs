//! Position of an asymmetric telegraph particle at time t, split by the
//! number of velocity switches.

use telegraph::density::{position_atom, position_density, position_law, position_switch_density};
use telegraph::quadrature::Tolerance;
use telegraph::{kinematics, State, TelegraphParams};

fn main() -> telegraph::Result<()> {
    let p = TelegraphParams::new(2.0, 1.0, 3.0, -1.0)?;
    let t = 1.7;

    let atom = position_atom(&p, State::Zero, t)?;
    println!("no switch: Γ(t) = {} with probability {:.6}", atom.location, atom.mass);

    let x = 0.8;
    let k = kinematics(&p, t, x)?;
    println!("time split at x = {x}: {:.4} in state 0, {:.4} in state 1", k.xi0, k.xi1);
    for n in 1..=6 {
        println!("  p0(t, x; {n}) = {:.8}", position_switch_density(&p, State::Zero, t, x, n)?);
    }
    println!("  summed       = {:.8}", position_density(&p, State::Zero, t, x)?);

    let law = position_law(&p, State::Zero, t)?;
    let tol = Tolerance::absolute(1e-12);
    println!("total mass {:.12}", law.total_mass(&tol));
    for q in [-1.0, 0.0, 1.0, 3.0] {
        println!("P(Γ(t) <= {q:4}) = {:.6}", law.cdf(q, &tol));
    }
    Ok(())
}
