//! Acceptance run: one line per criterion, non-zero exit if any fails.

use std::process::Command;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use telegraph::validate::{
    check_duality, check_extrema_total_probability, check_interchange, check_meander_equations,
    check_passage_equations, check_position_normalization, check_reversal, check_same_sign_properness, kac_checks,
    monte_carlo_checks, Check,
};

struct Outcome {
    passed: bool,
    detail: String,
}

fn describe(checks: &[Check]) -> String {
    checks
        .iter()
        .map(|c| {
            let rel = match c.relation {
                telegraph::validate::Relation::AtMost => "<=",
                telegraph::validate::Relation::Below => "<",
                telegraph::validate::Relation::Above => ">",
            };
            format!("{}{} {:.3e} {rel} {:e}", if c.passed { "" } else { "!" }, c.name, c.measured, c.tolerance)
        })
        .collect::<Vec<_>>()
        .join("; ")
}

fn from_checks(checks: Vec<Check>) -> Outcome {
    Outcome {
        passed: checks.iter().all(|c| c.passed),
        detail: describe(&checks),
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn normalization() -> Outcome {
    from_checks(vec![check_position_normalization(&mut rng(1), 50, &[0.1, 1.0, 5.0]).unwrap()])
}

fn properness() -> Outcome {
    from_checks(vec![check_same_sign_properness(&mut rng(2), 20).unwrap()])
}

fn integral_equations() -> Outcome {
    let mut r = rng(3);
    from_checks(vec![
        check_passage_equations(&mut r, 20, 5).unwrap(),
        check_meander_equations(&mut r, 20, 5).unwrap(),
    ])
}

fn duality() -> Outcome {
    from_checks(check_duality(&mut rng(4), 100).unwrap())
}

fn interchange() -> Outcome {
    from_checks(vec![check_interchange(&mut rng(5), 100).unwrap()])
}

fn reversal() -> Outcome {
    from_checks(vec![check_reversal(&mut rng(6), 100).unwrap()])
}

fn monte_carlo() -> Outcome {
    let wanted = [
        "terminal position KS",
        "no-switch fraction",
        "minimum at start fraction",
        "conditional passage time KS",
    ];
    let checks = monte_carlo_checks(100_000, 42).unwrap();
    from_checks(checks.into_iter().filter(|c| wanted.contains(&c.name.as_str())).collect())
}

fn extrema() -> Outcome {
    from_checks(check_extrema_total_probability(2.0, 20).unwrap())
}

fn kac() -> Outcome {
    let (checks, errors) = kac_checks(16).unwrap();
    let mut out = from_checks(checks);
    let seq: Vec<String> = errors.iter().map(|e| format!("{:.4}", e.error)).collect();
    out.detail = format!("errors k=1..16: [{}]; {}", seq.join(", "), out.detail);
    out
}

fn validate_report(threads: &str, epoch: Option<&str>) -> Vec<u8> {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_telegraph"));
    cmd.args(["--threads", threads, "validate", "--suite", "mc-ks", "--seed", "42"]);
    match epoch {
        Some(e) => cmd.env("SOURCE_DATE_EPOCH", e),
        None => cmd.env_remove("SOURCE_DATE_EPOCH"),
    };
    cmd.output().expect("binary runs").stdout
}

fn reproducibility() -> Outcome {
    let pinned_1 = validate_report("1", Some("1700000000"));
    let pinned_4 = validate_report("4", Some("1700000000"));
    let first = validate_report("1", None);
    let path = std::env::temp_dir().join(format!("telegraph-acceptance-{}.json", std::process::id()));
    std::fs::write(&path, &first).unwrap();
    let rerun = Command::new(env!("CARGO_BIN_EXE_telegraph"))
        .args(["--threads", "4", "rerun", path.to_str().unwrap()])
        .output()
        .expect("binary runs")
        .stdout;
    let _ = std::fs::remove_file(&path);
    let same_epoch = !pinned_1.is_empty() && pinned_1 == pinned_4;
    let same_rerun = !first.is_empty() && first == rerun;
    Outcome {
        passed: same_epoch && same_rerun,
        detail: format!(
            "1 vs 4 threads identical: {same_epoch}; rerun of recorded manifest identical: {same_rerun} ({} bytes)",
            first.len()
        ),
    }
}

type Criterion = (u32, &'static str, f64, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 10] = [
        (1, "position law normalization", 10.0, normalization),
        (2, "same-sign passage properness", 5.0, properness),
        (3, "coupled integral equations", 30.0, integral_equations),
        (4, "meander/passage duality", f64::INFINITY, duality),
        (5, "downward passage by interchange", f64::INFINITY, interchange),
        (6, "passage with reversal", f64::INFINITY, reversal),
        (7, "Monte Carlo concordance", 60.0, monte_carlo),
        (8, "extremum law total probability", 120.0, extrema),
        (9, "diffusion scaling", 30.0, kac),
        (10, "report reproducibility", f64::INFINITY, reproducibility),
    ];
    let mut failed = 0;
    for (id, name, limit, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        let in_time = secs <= limit;
        let passed = outcome.passed && in_time;
        if !passed {
            failed += 1;
        }
        let budget = if limit.is_finite() { format!(" (limit {limit} s)") } else { String::new() };
        println!(
            "criterion {id:2} {} {name}: {} [{secs:.2} s{budget}]",
            if passed { "PASS" } else { "FAIL" },
            outcome.detail
        );
    }
    println!("{} of 10 criteria passed", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
