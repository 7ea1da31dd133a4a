//! Exact simulation compared with the closed forms.

use telegraph::density::position_law;
use telegraph::first_passage::fpt_law;
use telegraph::meander::{meander_mass, MeanderSign};
use telegraph::montecarlo::{run_campaign, sample_path, SimulationConfig};
use telegraph::quadrature::Tolerance;
use telegraph::{State, TelegraphParams};

fn main() -> telegraph::Result<()> {
    let p = TelegraphParams::symmetric_unit();
    let config = SimulationConfig::new(p, State::Zero, 2.0, 100_000, 42)?;
    println!("one path: {:?}", sample_path(&config, 0));

    let campaign = run_campaign(&config)?;
    let s = campaign.summary();
    println!("no switch: {:.5} vs {:.5}", s.zero_switch_fraction, (-2.0f64).exp());
    let tol = Tolerance::absolute(1e-11);
    println!(
        "minimum at start: {:.5} vs {:.5}",
        s.min_at_start_fraction,
        meander_mass(&p, MeanderSign::Positive, 2.0, &tol)?
    );
    let cdf = position_law(&p, State::Zero, 2.0)?.tabulate_cdf(2048, f64::INFINITY);
    println!("KS distance of Γ(2): {:.5}", campaign.terminal_ks(|x| cdf.cdf(x), |x| cdf.cdf_left(x)));

    let config = SimulationConfig::new(p, State::Zero, 50.0, 100_000, 43)?.with_threshold(1.0)?;
    let passage = run_campaign(&config)?;
    let law = fpt_law(&p, State::Zero, 1.0)?.tabulate_cdf(2048, 50.0);
    let reached = law.total();
    println!(
        "passage before t = 50: {:.5} vs {:.5}, censored {:.5}",
        passage.summary().passage_fraction.unwrap_or(0.0),
        reached,
        passage.summary().censored_fraction.unwrap_or(0.0)
    );
    println!(
        "KS distance of T(1) given T(1) < 50: {:.5}",
        passage.passage_ks(|t| law.cdf(t) / reached, |t| law.cdf_left(t) / reached)
    );
    Ok(())
}
