//! Where and when the running minimum is attained.

use telegraph::density::position_density;
use telegraph::extrema::{extremum_joint_law, ExtremumKind};
use telegraph::quadrature::Tolerance;
use telegraph::{State, TelegraphParams};

fn main() -> telegraph::Result<()> {
    let p = TelegraphParams::new(2.0, 0.5, 3.0, -1.5)?;
    let t = 1.3;
    let tol = Tolerance::absolute(1e-9);

    for state in [State::Zero, State::One] {
        let law = extremum_joint_law(&p, state, ExtremumKind::Min, t)?;
        let m = law.component_masses(&tol);
        println!(
            "from state {}: min at start {:.6}, at end {:.6}, inside {:.6} (sum {:.8})",
            state.index(),
            m.zeta_zero,
            m.zeta_t,
            m.regular,
            m.total()
        );
        for x in [-1.0, 0.2, 1.5] {
            println!(
                "  density of Γ(t) at {x:4}: {:.8} rebuilt, {:.8} direct",
                law.x_marginal_density(x, &tol),
                position_density(&p, state, t, x)?
            );
        }
    }

    let law = extremum_joint_law(&p, State::Zero, ExtremumKind::Min, t)?;
    let r = law.regular.expect("opposite signs");
    println!("density of (time of minimum, minimum):");
    for s in [0.3, 0.6, 0.9] {
        let row: Vec<String> = [-0.9, -0.6, -0.3]
            .iter()
            .map(|&y| format!("{:.5}", r.time_level_density(s, y, &tol)))
            .collect();
        println!("  s = {s}: {}", row.join("  "));
    }
    Ok(())
}
