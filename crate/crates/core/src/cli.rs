//! Command-line front end.
//!
//! Grid commands write CSV whose first line is `# manifest: {...}` followed by
//! a header row; atoms, masses and other scalars go to a JSON block (`--json`
//! file, or stderr). `validate` writes a JSON report and exits with status 1
//! when a check fails. Usage errors exit with status 2.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::density::{position_law, position_switch_density};
use crate::error::{Result, TelegraphError};
use crate::extrema::{extremum_joint_law, ExtremumKind};
use crate::first_passage::{default_horizon, fpt_law, fpt_switch_density};
use crate::law::MixedLaw;
use crate::manifest::{RunManifest, SCHEMA_VERSION};
use crate::meander::{meander_law, meander_switch_density, MeanderSign};
use crate::params::{State, TelegraphParams};
use crate::quadrature::Tolerance;
use crate::validate::{run_suite, Suite, ValidationOptions};

#[derive(Debug, Parser)]
#[command(name = "telegraph", version, about = "Laws of the asymmetric telegraph process")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Write the main output to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Write the JSON block to this file instead of stderr.
    #[arg(long, global = true)]
    pub json: Option<PathBuf>,
    /// Worker threads for simulation (results do not depend on it).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, Subcommand, Serialize, Deserialize)]
#[serde(tag = "command", content = "parameters", rename_all = "lowercase")]
pub enum Command {
    /// Position law of Γ(t), optionally per switch count.
    Density(DensityArgs),
    /// First-passage-time law through a level.
    Fpt(FptArgs),
    /// Law of a path that stays on one side of its start.
    Meander(MeanderArgs),
    /// Components of the joint law of a running extremum.
    Extrema(ExtremaArgs),
    /// Run a validation suite.
    Validate(ValidateArgs),
    /// Re-run the command recorded in an output file.
    #[serde(skip)]
    Rerun(RerunArgs),
}

#[derive(Debug, Clone, Copy, Args, Serialize, Deserialize)]
pub struct ProcessArgs {
    /// Switching rate out of state 0.
    #[arg(long)]
    pub l0: f64,
    /// Switching rate out of state 1.
    #[arg(long)]
    pub l1: f64,
    /// Velocity in state 0.
    #[arg(long, allow_hyphen_values = true)]
    pub g0: f64,
    /// Velocity in state 1 (below g0).
    #[arg(long, allow_hyphen_values = true)]
    pub g1: f64,
}

impl ProcessArgs {
    fn params(&self) -> Result<TelegraphParams> {
        TelegraphParams::new(self.l0, self.l1, self.g0, self.g1)
    }
}

fn parse_state(s: &str) -> std::result::Result<u8, String> {
    match s {
        "0" => Ok(0),
        "1" => Ok(1),
        _ => Err(format!("initial state must be 0 or 1, got {s}")),
    }
}

fn state(i: u8) -> State {
    if i == 0 {
        State::Zero
    } else {
        State::One
    }
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct DensityArgs {
    #[command(flatten)]
    pub process: ProcessArgs,
    #[arg(long)]
    pub t: f64,
    /// Initial state.
    #[arg(long, value_parser = parse_state)]
    pub i: u8,
    /// Number of grid points.
    #[arg(long, default_value_t = 101)]
    pub grid: usize,
    /// Grid bounds; default to the reachable interval.
    #[arg(long, allow_hyphen_values = true)]
    pub xmin: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub xmax: Option<f64>,
    /// Restrict to these switch counts (comma separated).
    #[arg(long, value_delimiter = ',')]
    pub n: Vec<u32>,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct FptArgs {
    #[command(flatten)]
    pub process: ProcessArgs,
    /// Level to cross.
    #[arg(long, allow_hyphen_values = true)]
    pub y: f64,
    #[arg(long, value_parser = parse_state)]
    pub i: u8,
    #[arg(long, default_value_t = 101)]
    pub grid: usize,
    /// Right end of the time grid.
    #[arg(long)]
    pub tmax: Option<f64>,
    #[arg(long, value_delimiter = ',')]
    pub n: Vec<u32>,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct MeanderArgs {
    #[command(flatten)]
    pub process: ProcessArgs,
    #[arg(long, value_enum)]
    pub sign: MeanderSign,
    #[arg(long)]
    pub t: f64,
    #[arg(long, default_value_t = 101)]
    pub grid: usize,
    #[arg(long, value_delimiter = ',')]
    pub n: Vec<u32>,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct ExtremaArgs {
    #[command(flatten)]
    pub process: ProcessArgs,
    #[arg(long, value_enum)]
    pub kind: ExtremumKind,
    #[arg(long, value_parser = parse_state)]
    pub i: u8,
    #[arg(long)]
    pub t: f64,
    /// Points per axis.
    #[arg(long, default_value_t = 41)]
    pub grid: usize,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct ValidateArgs {
    #[arg(long, value_enum)]
    pub suite: Suite,
    /// Paths per Monte Carlo campaign.
    #[arg(long, default_value_t = 100_000)]
    pub paths: u64,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Largest diffusion scale (powers of two up to it are used).
    #[arg(long, default_value_t = 16)]
    pub kmax: u32,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct RerunArgs {
    /// A CSV or JSON file written by this tool.
    pub artifact: PathBuf,
}

/// Everything a command produces, before it is written anywhere.
#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub main: String,
    pub json: Option<String>,
    pub failed: bool,
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![(lo + hi) / 2.0],
        n => (0..n).map(|j| lo + (hi - lo) * j as f64 / (n - 1) as f64).collect(),
    }
}

fn interior_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    (0..points)
        .map(|j| lo + (hi - lo) * (j as f64 + 0.5) / points as f64)
        .collect()
}

fn check_grid(points: usize) -> Result<()> {
    if points == 0 {
        return Err(TelegraphError::Domain("grid needs at least one point".into()));
    }
    Ok(())
}

fn json_block(manifest: &RunManifest, body: serde_json::Value) -> String {
    let mut value = json!({ "schema_version": SCHEMA_VERSION, "manifest": manifest });
    if let (Some(obj), serde_json::Value::Object(extra)) = (value.as_object_mut(), body) {
        obj.extend(extra);
    }
    serde_json::to_string_pretty(&value).expect("JSON output serializes") + "\n"
}

/// CSV with a density column and optional per-count columns. With a count
/// filter the density column is the sum over the selected counts.
fn density_table(
    manifest: &RunManifest,
    variable: &str,
    points: &[f64],
    counts: &[u32],
    total: impl Fn(f64) -> Result<f64>,
    per_count: impl Fn(f64, u32) -> Result<f64>,
) -> Result<String> {
    let mut csv = manifest.csv_line() + "\n";
    csv.push_str(variable);
    csv.push_str(",density");
    for n in counts {
        write!(csv, ",density_n{n}").unwrap();
    }
    csv.push('\n');
    for &x in points {
        let (value, columns) = if counts.is_empty() {
            (total(x)?, Vec::new())
        } else {
            let cols = counts.iter().map(|&n| per_count(x, n)).collect::<Result<Vec<_>>>()?;
            (cols.iter().sum(), cols)
        };
        csv.push_str(&num(x));
        csv.push(',');
        csv.push_str(&num(value));
        for c in columns {
            csv.push(',');
            csv.push_str(&num(c));
        }
        csv.push('\n');
    }
    Ok(csv)
}

fn quad() -> Tolerance {
    Tolerance::absolute(1e-11)
}

fn law_summary(law: &MixedLaw) -> serde_json::Value {
    let mass = law.total_mass(&quad());
    json!({
        "atoms": law.atoms(),
        "total_mass": mass,
        "defect": 1.0 - mass,
    })
}

fn cmd_density(a: &DensityArgs, manifest: &RunManifest) -> Result<Output> {
    check_grid(a.grid)?;
    let p = a.process.params()?;
    let s = state(a.i);
    let law = position_law(&p, s, a.t)?;
    let lo = a.xmin.unwrap_or(p.gamma1() * a.t);
    let hi = a.xmax.unwrap_or(p.gamma0() * a.t);
    let main = density_table(
        manifest,
        "x",
        &grid(lo, hi, a.grid),
        &a.n,
        |x| Ok(law.density(x)),
        |x, n| if n == 0 { Ok(0.0) } else { position_switch_density(&p, s, a.t, x, n) },
    )?;
    let mut body = law_summary(&law);
    if !a.n.is_empty() && !a.n.contains(&0) {
        body["atoms"] = json!([]);
    }
    Ok(Output {
        main,
        json: Some(json_block(manifest, body)),
        failed: false,
    })
}

fn cmd_fpt(a: &FptArgs, manifest: &RunManifest) -> Result<Output> {
    check_grid(a.grid)?;
    let p = a.process.params()?;
    let s = state(a.i);
    let law = fpt_law(&p, s, a.y)?;
    let tmax = match (a.tmax, law.support()) {
        (Some(t), _) => t,
        (None, Some(sup)) if sup.is_bounded() => sup.hi,
        _ => default_horizon(&p, a.y),
    };
    let main = density_table(
        manifest,
        "t",
        &grid(0.0, tmax, a.grid),
        &a.n,
        |t| Ok(law.density(t)),
        |t, n| {
            if n == 0 || t <= 0.0 {
                Ok(0.0)
            } else {
                fpt_switch_density(&p, s, t, a.y, n)
            }
        },
    )?;
    let mut body = law_summary(&law);
    body["support"] = json!(law.support());
    if !a.n.is_empty() && !a.n.contains(&0) {
        body["atoms"] = json!([]);
    }
    Ok(Output {
        main,
        json: Some(json_block(manifest, body)),
        failed: false,
    })
}

fn cmd_meander(a: &MeanderArgs, manifest: &RunManifest) -> Result<Output> {
    check_grid(a.grid)?;
    let p = a.process.params()?;
    let law = meander_law(&p, a.sign, a.t)?;
    let (lo, hi) = match a.sign {
        MeanderSign::Positive => (0.0, p.gamma0().max(0.0) * a.t),
        MeanderSign::Negative => (p.gamma1().min(0.0) * a.t, 0.0),
    };
    let main = density_table(
        manifest,
        "x",
        &grid(lo, hi, a.grid),
        &a.n,
        |x| Ok(law.density(x)),
        |x, n| if n == 0 { Ok(0.0) } else { meander_switch_density(&p, a.sign, a.t, x, n) },
    )?;
    let mut body = law_summary(&law);
    if !a.n.is_empty() && !a.n.contains(&0) {
        body["atoms"] = json!([]);
    }
    Ok(Output {
        main,
        json: Some(json_block(manifest, body)),
        failed: false,
    })
}

/// Rows `component,s,y,x,density`; empty fields are integrated out.
fn cmd_extrema(a: &ExtremaArgs, manifest: &RunManifest) -> Result<Output> {
    check_grid(a.grid)?;
    let p = a.process.params()?;
    let t = a.t;
    let law = extremum_joint_law(&p, state(a.i), a.kind, t)?;
    let tol = Tolerance::absolute(1e-9);
    let (lo, hi) = (p.gamma1().min(0.0) * t, p.gamma0().max(0.0) * t);
    let xs = grid(lo, hi, a.grid);

    let mut csv = manifest.csv_line() + "\n";
    csv.push_str("component,s,y,x,density\n");
    let mut row = |component: &str, s: Option<f64>, y: Option<f64>, x: Option<f64>, d: f64| {
        let cell = |v: Option<f64>| v.map(num).unwrap_or_default();
        writeln!(csv, "{component},{},{},{},{}", cell(s), cell(y), cell(x), num(d)).unwrap();
    };
    for &x in &xs {
        row("zeta_zero", Some(0.0), Some(0.0), Some(x), law.zeta_zero.density(x));
    }
    for &x in &xs {
        row("zeta_t", Some(t), Some(x), Some(x), law.zeta_t.density(x));
    }
    if let Some(r) = law.regular {
        for &x in &xs {
            row("regular_x", None, None, Some(x), r.x_marginal(x, None, &tol));
        }
        let (ylo, yhi) = match a.kind {
            ExtremumKind::Min => (p.gamma1() * t, 0.0),
            ExtremumKind::Max => (0.0, p.gamma0() * t),
        };
        for s in interior_grid(0.0, t, a.grid) {
            for y in interior_grid(ylo, yhi, a.grid) {
                row("regular_sy", Some(s), Some(y), None, r.time_level_density(s, y, &tol));
            }
        }
        if r.has_passage_atom() {
            let v = p.velocity(state(a.i));
            for s in interior_grid(0.0, t, a.grid) {
                row("regular_line", Some(s), Some(v * s), None, r.passage_line_density(s, &tol));
            }
        }
    }

    let masses = law.component_masses(&tol);
    let body = json!({
        "kind": a.kind,
        "masses": {
            "zeta_zero": masses.zeta_zero,
            "zeta_t": masses.zeta_t,
            "regular": masses.regular,
            "total": masses.total(),
        },
        "zeta_zero_atoms": law.zeta_zero.atoms(),
        "zeta_t_atoms": law.zeta_t.atoms(),
    });
    Ok(Output {
        main: csv,
        json: Some(json_block(manifest, body)),
        failed: false,
    })
}

fn cmd_validate(a: &ValidateArgs, manifest: &RunManifest) -> Result<Output> {
    let opts = ValidationOptions {
        paths: a.paths,
        seed: a.seed,
        kmax: a.kmax,
    };
    let report = run_suite(a.suite, &opts)?;
    let body = serde_json::to_value(&report).expect("report serializes");
    Ok(Output {
        main: json_block(manifest, body),
        json: None,
        failed: !report.passed,
    })
}

fn manifest_for(command: &Command) -> Result<RunManifest> {
    let tagged = serde_json::to_value(command).map_err(|e| TelegraphError::Domain(e.to_string()))?;
    let name = tagged["command"].as_str().unwrap_or_default().to_string();
    let seed = match command {
        Command::Validate(v) => Some(v.seed),
        _ => None,
    };
    RunManifest::new(&name, &tagged["parameters"], seed)
}

fn command_from_manifest(m: &RunManifest) -> Result<Command> {
    serde_json::from_value(json!({ "command": m.command, "parameters": m.parameters }))
        .map_err(|e| TelegraphError::Domain(format!("manifest does not describe a command: {e}")))
}

/// Run one command. `timestamp` pins the manifest time (used by `rerun`).
pub fn execute(command: &Command, timestamp: Option<u64>) -> Result<Output> {
    if let Command::Rerun(r) = command {
        let text = std::fs::read_to_string(&r.artifact)
            .map_err(|e| TelegraphError::Domain(format!("{}: {e}", r.artifact.display())))?;
        let recorded = RunManifest::from_artifact(&text)?;
        return execute(&command_from_manifest(&recorded)?, Some(recorded.timestamp));
    }
    let mut manifest = manifest_for(command)?;
    if let Some(ts) = timestamp {
        manifest = manifest.with_timestamp(ts);
    }
    match command {
        Command::Density(a) => cmd_density(a, &manifest),
        Command::Fpt(a) => cmd_fpt(a, &manifest),
        Command::Meander(a) => cmd_meander(a, &manifest),
        Command::Extrema(a) => cmd_extrema(a, &manifest),
        Command::Validate(a) => cmd_validate(a, &manifest),
        Command::Rerun(_) => unreachable!("handled above"),
    }
}

fn emit(cli: &Cli, out: &Output) -> std::io::Result<()> {
    use std::io::Write;
    match &cli.out {
        Some(path) => std::fs::write(path, &out.main)?,
        None => std::io::stdout().write_all(out.main.as_bytes())?,
    }
    if let Some(block) = &out.json {
        match &cli.json {
            Some(path) => std::fs::write(path, block)?,
            None => std::io::stderr().write_all(block.as_bytes())?,
        }
    }
    Ok(())
}

/// Entry point of the binary; returns the process exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let run = || execute(&cli.command, None);
    let result = match cli.threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(run),
            Err(e) => Err(TelegraphError::Domain(e.to_string())),
        },
        None => run(),
    };
    match result {
        Ok(out) => match emit(&cli, &out) {
            Ok(()) => i32::from(out.failed),
            Err(e) => {
                eprintln!("error: {e}");
                2
            }
        },
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}
