//! Command-line interface: fidelity computation, closed-form extrema,
//! parameter sweeps, the verification suite, and subspace geometry.
//!
//! Exit codes: 0 success / all checks pass, 1 uncovered region or failed
//! check, 2 bad configuration or malformed input.

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use azfid::channels::{channel_class_extrema, pure_state_extrema, ChannelFamily};
use azfid::error::Error;
use azfid::fidelity::{alpha_z_fidelity_restricted, renyi_entropy, OrbitEvaluator, ParamPoint};
use azfid::geometry::{
    commuting_subspace_formula, intersection_dim, subspace_bounds, subspace_fidelity_trace,
    SubspacePair,
};
use azfid::io::{load_state_source, unitary_to_json, MatrixJson};
use azfid::linalg::HermitianMatrix;
use azfid::oracle::{run_property_suite, SuiteConfig};
use azfid::orbits::{orbit_max, orbit_min, ExtremumKind, OrbitExtremum};
use azfid::states::{substream, SubspaceProjector};

#[derive(Parser)]
#[command(name = "azfid", version, about = "Two-parameter fidelity between density matrices")]
struct Cli {
    /// Master seed; generator specs without an explicit seed and the verify
    /// suite derive their randomness from it.
    #[arg(long, global = true, env = "AZFID_SEED")]
    seed: Option<u64>,

    /// Emit a machine-readable JSON record instead of the human summary.
    #[arg(long, global = true)]
    json: bool,

    /// Write the primary output to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Slack for the CLI's internal consistency checks (achiever values,
    /// F vs T^(1/alpha)); violations are warnings on stderr.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tolerance: f64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Trace quantity, fidelity, and Renyi divergence of a state pair.
    Compute {
        /// State file or generator spec (ginibre:d=..,rank=..,seed=.. | maxmixed:d=..)
        #[arg(long)]
        rho: String,
        #[arg(long)]
        sigma: String,
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        z: f64,
    },
    /// Closed-form extremal value for the requested family, with its achiever.
    Extremal {
        #[arg(long)]
        rho: String,
        #[arg(long)]
        sigma: String,
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        z: f64,
        #[arg(long, value_enum)]
        target: ExtremalTarget,
    },
    /// CSV sweep over an (alpha, z) grid: fidelity plus orbit extrema.
    Sweep {
        #[arg(long)]
        rho: String,
        #[arg(long)]
        sigma: String,
        /// Comma-separated alpha grid (alpha = 1 rows are rejected).
        #[arg(long, value_delimiter = ',', required = true)]
        alphas: Vec<f64>,
        #[arg(long, value_delimiter = ',', required = true)]
        zs: Vec<f64>,
    },
    /// Run the verification suite and emit its JSON report.
    Verify {
        /// JSON file with a suite configuration (seed, checks, mc_trials,
        /// refine_steps); flags override its fields.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Run only these check ids (comma separated).
        #[arg(long, value_delimiter = ',')]
        checks: Option<Vec<String>>,
        /// Monte-Carlo trials per sandwich check.
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        refine_steps: Option<usize>,
    },
    /// Trace quantity, bounds, and intersection of a subspace pair.
    Subspace {
        #[arg(long)]
        dim: usize,
        /// Rank of the first subspace (random unless axes/file given).
        #[arg(long)]
        m: usize,
        /// Rank of the second subspace.
        #[arg(long)]
        n: usize,
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        z: f64,
        /// Coordinate axes of the first subspace, e.g. 0,1 (overrides random).
        #[arg(long, value_delimiter = ',')]
        axes_m: Option<Vec<usize>>,
        #[arg(long, value_delimiter = ',')]
        axes_n: Option<Vec<usize>>,
        /// Projector files in the JSON matrix format (override axes/random).
        #[arg(long)]
        proj_m: Option<PathBuf>,
        #[arg(long)]
        proj_n: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ExtremalTarget {
    OrbitMax,
    OrbitMin,
    ChannelAll,
    MixedUnitary,
    PureState,
}

fn main() {
    let cli = Cli::parse();
    std::process::exit(match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    });
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::UnsupportedRegion { .. } | Error::TargetOutOfRange { .. } | Error::Support => 1,
        _ => 2,
    }
}

fn seed_of(cli: &Cli) -> u64 {
    cli.seed.unwrap_or(42)
}

/// 17 significant digits; infinities as "inf".
fn fmt17(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{x:.16e}")
    }
}

fn finite_or_inf(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else if x > 0.0 {
        json!("inf")
    } else {
        json!("-inf")
    }
}

fn emit(cli: &Cli, text: String) -> azfid::Result<()> {
    match &cli.out {
        Some(path) => std::fs::write(path, text + "\n")?,
        None => println!("{text}"),
    }
    Ok(())
}

fn run(cli: Cli) -> azfid::Result<i32> {
    match &cli.command {
        Command::Compute { rho, sigma, alpha, z } => cmd_compute(&cli, rho, sigma, *alpha, *z),
        Command::Extremal {
            rho,
            sigma,
            alpha,
            z,
            target,
        } => cmd_extremal(&cli, rho, sigma, *alpha, *z, *target),
        Command::Sweep {
            rho,
            sigma,
            alphas,
            zs,
        } => cmd_sweep(&cli, rho, sigma, alphas, zs),
        Command::Verify {
            config,
            checks,
            trials,
            refine_steps,
        } => cmd_verify(&cli, config.as_deref(), checks.clone(), *trials, *refine_steps),
        Command::Subspace {
            dim,
            m,
            n,
            alpha,
            z,
            axes_m,
            axes_n,
            proj_m,
            proj_n,
        } => cmd_subspace(
            &cli,
            *dim,
            *m,
            *n,
            *alpha,
            *z,
            axes_m.as_deref(),
            axes_n.as_deref(),
            proj_m.as_deref(),
            proj_n.as_deref(),
        ),
    }
}

fn cmd_compute(cli: &Cli, rho_src: &str, sigma_src: &str, alpha: f64, z: f64) -> azfid::Result<i32> {
    let seed = seed_of(cli);
    let rho = load_state_source(rho_src, seed)?;
    let sigma = load_state_source(sigma_src, seed.wrapping_add(1))?;
    let p = ParamPoint::new(alpha, z)?;
    let (value, support_warning) = alpha_z_fidelity_restricted(&rho, &sigma, &p)?;
    let entropy = if alpha == 1.0 {
        None
    } else {
        Some(renyi_entropy(&rho, &sigma, &p)?)
    };

    let implied = value.trace_quantity.powf(1.0 / alpha);
    if (implied - value.fidelity).abs() > cli.tolerance * implied.abs().max(1.0) {
        eprintln!("warning: F deviates from T^(1/alpha) beyond tolerance");
    }
    if support_warning {
        eprintln!("warning: supp(rho) not contained in supp(sigma); value is support-restricted");
    }

    let record = json!({
        "alpha": alpha,
        "z": z,
        "region": p.region().to_string(),
        "T": value.trace_quantity,
        "F": value.fidelity,
        "S": entropy.map(finite_or_inf).unwrap_or(Value::Null),
        "support_warning": support_warning,
    });
    if cli.json {
        emit(cli, serde_json::to_string_pretty(&record).expect("serializable"))?;
    } else {
        let s_text = match entropy {
            Some(s) if s.is_finite() => format!("{s}"),
            Some(_) => "inf".into(),
            None => "undefined (alpha = 1)".into(),
        };
        emit(
            cli,
            format!(
                "region = {}\nT = {}\nF = {}\nS = {}",
                p.region(),
                value.trace_quantity,
                value.fidelity,
                s_text
            ),
        )?;
    }
    Ok(0)
}

fn orbit_record(ext: &OrbitExtremum, check: impl FnOnce(&OrbitExtremum) -> f64, tol: f64) -> Value {
    let achieved = check(ext);
    if ext.value.is_finite() && (achieved - ext.value).abs() > tol.max(1e-8) {
        eprintln!(
            "warning: achieving unitary reproduces {achieved}, closed form {}",
            ext.value
        );
    }
    json!({
        "value": finite_or_inf(ext.value),
        "kind": match ext.kind { ExtremumKind::Max => "max", ExtremumKind::Min => "min" },
        "branch": ext.branch.to_string(),
        "achiever": {
            "type": "unitary-conjugation",
            "unitary": unitary_to_json(&ext.achieving_unitary),
        },
    })
}

fn cmd_extremal(
    cli: &Cli,
    rho_src: &str,
    sigma_src: &str,
    alpha: f64,
    z: f64,
    target: ExtremalTarget,
) -> azfid::Result<i32> {
    let seed = seed_of(cli);
    let rho = load_state_source(rho_src, seed)?;
    let sigma = load_state_source(sigma_src, seed.wrapping_add(1))?;
    let p = ParamPoint::new(alpha, z)?;

    let record = match target {
        ExtremalTarget::OrbitMax | ExtremalTarget::OrbitMin => {
            let ext = match target {
                ExtremalTarget::OrbitMax => orbit_max(&rho, &sigma, &p)?,
                _ => orbit_min(&rho, &sigma, &p)?,
            };
            let eval = OrbitEvaluator::new(&rho, &sigma, &p)?;
            let mut rec = orbit_record(&ext, |e| eval.fidelity(&e.achieving_unitary), cli.tolerance);
            rec["target"] = json!(match target {
                ExtremalTarget::OrbitMax => "orbit-max",
                _ => "orbit-min",
            });
            rec
        }
        ExtremalTarget::PureState => {
            let ext = pure_state_extrema(&rho, &p)?;
            json!({
                "target": "pure-state",
                "value": ext.value,
                "kind": match ext.kind { ExtremumKind::Max => "max", ExtremumKind::Min => "min" },
                "achiever": {
                    "type": "pure-state",
                    "state": MatrixJson::from_cmatrix(ext.achiever.matrix()),
                },
            })
        }
        ExtremalTarget::ChannelAll => {
            let ext = channel_class_extrema(&rho, &sigma, ChannelFamily::All, &p)?;
            let pure = pure_state_extrema(&rho, &p)?;
            json!({
                "target": "channel-all",
                "value": ext.value,
                "kind": match ext.kind { ExtremumKind::Max => "max", ExtremumKind::Min => "min" },
                "achiever": {
                    "type": "replacement-channel",
                    "description": "replacement channel onto the extremal eigenvector of rho",
                    "state": MatrixJson::from_cmatrix(pure.achiever.matrix()),
                },
            })
        }
        ExtremalTarget::MixedUnitary => {
            let ext = channel_class_extrema(&rho, &sigma, ChannelFamily::MixedUnitary, &p)?;
            let pairing_unitary =
                azfid::orbits::achieving_unitary(&rho, &sigma, azfid::orbits::Pairing::Reversed)?;
            json!({
                "target": "mixed-unitary",
                "value": finite_or_inf(ext.value),
                "kind": match ext.kind { ExtremumKind::Max => "max", ExtremumKind::Min => "min" },
                "achiever": {
                    "type": "unitary-channel",
                    "description": "unitary channel with the reversed-pairing unitary",
                    "unitary": unitary_to_json(&pairing_unitary),
                },
            })
        }
    };

    if cli.json {
        emit(cli, serde_json::to_string_pretty(&record).expect("serializable"))?;
    } else {
        let value = &record["value"];
        let kind = record["kind"].as_str().unwrap_or("?");
        let target = record["target"].as_str().unwrap_or("?");
        let mut text = format!("target = {target}\nkind = {kind}\nvalue = {value}");
        if let Some(branch) = record.get("branch").and_then(Value::as_str) {
            text.push_str(&format!("\nbranch = {branch}"));
        }
        emit(cli, text)?;
    }
    Ok(0)
}

fn cmd_sweep(
    cli: &Cli,
    rho_src: &str,
    sigma_src: &str,
    alphas: &[f64],
    zs: &[f64],
) -> azfid::Result<i32> {
    if alphas.is_empty() || zs.is_empty() {
        return Err(Error::Config("alpha and z grids must be nonempty".into()));
    }
    if let Some(&bad) = alphas.iter().chain(zs).find(|&&x| !(x > 0.0)) {
        return Err(Error::Config(format!("grid values must be > 0, got {bad}")));
    }
    let seed = seed_of(cli);
    let rho = load_state_source(rho_src, seed)?;
    let sigma = load_state_source(sigma_src, seed.wrapping_add(1))?;

    let mut csv = String::from("alpha,z,region,T,F,S,orbit_max,orbit_min\n");
    for &alpha in alphas {
        if alpha == 1.0 {
            eprintln!("rejecting alpha = 1 rows: the Renyi map is singular there");
            continue;
        }
        for &z in zs {
            let p = ParamPoint::new(alpha, z)?;
            let (value, _) = alpha_z_fidelity_restricted(&rho, &sigma, &p)?;
            let entropy = renyi_entropy(&rho, &sigma, &p)?;
            let omax = orbit_max(&rho, &sigma, &p).map(|e| e.value).ok();
            let omin = orbit_min(&rho, &sigma, &p).map(|e| e.value).ok();
            csv.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                fmt17(alpha),
                fmt17(z),
                p.region(),
                fmt17(value.trace_quantity),
                fmt17(value.fidelity),
                fmt17(entropy),
                omax.map(fmt17).unwrap_or_default(),
                omin.map(fmt17).unwrap_or_default(),
            ));
        }
    }
    match &cli.out {
        Some(path) => std::fs::write(path, csv)?,
        None => print!("{csv}"),
    }
    Ok(0)
}

fn cmd_verify(
    cli: &Cli,
    config_path: Option<&std::path::Path>,
    checks: Option<Vec<String>>,
    trials: Option<usize>,
    refine_steps: Option<usize>,
) -> azfid::Result<i32> {
    let mut config = match config_path {
        Some(path) => {
            let text = std::fs::read_to_string(path)?;
            serde_json::from_str::<SuiteConfig>(&text)
                .map_err(|e| Error::Config(format!("bad suite config: {e}")))?
        }
        None => SuiteConfig::default(),
    };
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    if checks.is_some() {
        config.checks = checks;
    }
    if let Some(t) = trials {
        if t == 0 {
            return Err(Error::Config("trials must be >= 1".into()));
        }
        config.mc_trials = t;
    }
    if let Some(r) = refine_steps {
        config.refine_steps = r;
    }

    let reports = run_property_suite(&config)?;
    let mut all_pass = true;
    for report in &reports {
        all_pass &= report.pass;
        eprintln!(
            "{} {:<28} worst margin {:>13.3e}  ({} samples, {} ms)",
            if report.pass { "PASS" } else { "FAIL" },
            report.check_id,
            report.worst_margin,
            report.samples,
            report.runtime_ms
        );
    }
    let text = serde_json::to_string_pretty(&reports).expect("serializable");
    emit(cli, text)?;
    Ok(if all_pass { 0 } else { 1 })
}

#[allow(clippy::too_many_arguments)]
fn cmd_subspace(
    cli: &Cli,
    dim: usize,
    m: usize,
    n: usize,
    alpha: f64,
    z: f64,
    axes_m: Option<&[usize]>,
    axes_n: Option<&[usize]>,
    proj_m: Option<&std::path::Path>,
    proj_n: Option<&std::path::Path>,
) -> azfid::Result<i32> {
    let seed = seed_of(cli);
    let load_projector = |path: &std::path::Path| -> azfid::Result<SubspaceProjector> {
        let text = std::fs::read_to_string(path)?;
        let json: MatrixJson = serde_json::from_str(&text)
            .map_err(|e| Error::Config(format!("malformed JSON: {e}")))?;
        SubspaceProjector::new(HermitianMatrix::new(json.to_cmatrix()?)?)
    };
    let first = match (proj_m, axes_m) {
        (Some(path), _) => load_projector(path)?,
        (None, Some(axes)) => SubspaceProjector::coordinate(dim, axes)?,
        (None, None) => SubspaceProjector::random(dim, m, &mut substream(seed, 0))?,
    };
    let second = match (proj_n, axes_n) {
        (Some(path), _) => load_projector(path)?,
        (None, Some(axes)) => SubspaceProjector::coordinate(dim, axes)?,
        (None, None) => SubspaceProjector::random(dim, n, &mut substream(seed, 1))?,
    };
    if first.rank() != m || second.rank() != n {
        return Err(Error::Config(format!(
            "projector ranks ({}, {}) disagree with --m {m} / --n {n}",
            first.rank(),
            second.rank()
        )));
    }
    let pair = SubspacePair::new(first, second)?;
    let p = ParamPoint::new(alpha, z)?;
    let result = subspace_fidelity_trace(&pair, &p)?;
    let (lower, upper) = subspace_bounds(m, n, dim, alpha)?;
    let inter = intersection_dim(&pair);
    let commuting_value = commuting_subspace_formula(m, n, inter, alpha)?;

    if result.trace_quantity < lower - cli.tolerance
        || result.trace_quantity > upper + cli.tolerance
    {
        eprintln!("warning: trace quantity escapes the dimension-count bounds");
    }

    let record = json!({
        "dim": dim,
        "m": m,
        "n": n,
        "alpha": alpha,
        "z": z,
        "T": result.trace_quantity,
        "support_warning": result.support_warning,
        "lower": lower,
        "upper": upper,
        "intersection_dim": inter,
        "commuting_value": commuting_value,
    });
    if cli.json {
        emit(cli, serde_json::to_string_pretty(&record).expect("serializable"))?;
    } else {
        emit(
            cli,
            format!(
                "T = {}\nbounds = [{lower}, {upper}]\nintersection dim = {inter}\ncommuting closed form = {commuting_value}",
                result.trace_quantity
            ),
        )?;
    }
    Ok(0)
}
