//! Fast switching with speeds of order sqrt(rate): the passage-time density
//! approaches the inverse Gaussian.

use telegraph::kac::{convergence_check, default_time_grid, kac_family_member, KacTargets};
use telegraph::State;

fn main() -> telegraph::Result<()> {
    let targets = KacTargets::new(1.0, 1.0, 0.0)?;
    let scales = [1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0];
    let grid = default_time_grid();
    for state in [State::Zero, State::One] {
        println!("from state {}", state.index());
        for e in convergence_check(&targets, 1.0, &scales, &grid, state)? {
            println!(
                "  k = {:3}: sup error {:.5} at t = {:.2}, atom {:.2e}",
                e.k, e.error, e.worst_time, e.atom_mass
            );
        }
    }

    let drifting = KacTargets::new(2.0, 1.0, 0.3)?;
    let p = kac_family_member(&drifting, 4.0)?;
    println!("nu = 2, delta = 0.3, k = 4: {p:?}, drift {}", p.drift());
    Ok(())
}
