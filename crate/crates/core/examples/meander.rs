//! Paths that never cross their starting level, and how their densities
//! relate to passage densities read backwards in time.

use telegraph::first_passage::fpt_switch_density;
use telegraph::meander::{meander_atom, meander_law, meander_switch_density, MeanderSign};
use telegraph::quadrature::Tolerance;
use telegraph::{State, TelegraphParams};

fn main() -> telegraph::Result<()> {
    let p = TelegraphParams::new(1.5, 0.8, 1.2, -2.0)?;
    let tol = Tolerance::absolute(1e-11);
    for t in [0.5, 1.0, 2.0, 5.0] {
        let up = meander_law(&p, MeanderSign::Positive, t)?.total_mass(&tol);
        let down = meander_law(&p, MeanderSign::Negative, t)?.total_mass(&tol);
        println!("t = {t}: P0(stay above 0) = {up:.6}, P1(stay below 0) = {down:.6}");
    }

    let (t, x) = (2.0, 0.9);
    let atom = meander_atom(&p, MeanderSign::Positive, t)?;
    println!("straight path to {} with probability {:.6}", atom.location, atom.mass);
    for n in 1..=4 {
        let g = meander_switch_density(&p, MeanderSign::Positive, t, x, n)?;
        // time reversal turns a meander ending at x into a passage through x
        let f = if n % 2 == 0 {
            fpt_switch_density(&p, State::Zero, t, x, n)? / p.gamma0()
        } else {
            p.lambda0() * fpt_switch_density(&p, State::One, t, x, n)? / (p.gamma0() * p.lambda1())
        };
        println!("  g+(t, x; {n}) = {g:.10}  from passage {f:.10}");
    }
    Ok(())
}
