//! Command-line front end: coupling tables, zone tables, scenario runs and
//! built-in presets. Exit codes: 0 success, 2 validation error, 3 runtime or
//! numerical error.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use motional::{
    f_scalar, parse_config, preset_text, run_scenario, zone_boundaries, Error, Scenario,
    SimulationConfig, PRESET_NAMES,
};

#[derive(Parser)]
#[command(
    name = "motional",
    version,
    about = "Nonlinear motional dynamics of a trapped atom in a truncated Fock space"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate the diagonal coupling values f_k(n; eta)
    Coupling {
        /// Read k/eta/cutoff from a one-mode scenario config
        #[arg(long)]
        config: Option<PathBuf>,
        /// Sideband order (overrides the config)
        #[arg(long)]
        k: Option<usize>,
        /// Lamb-Dicke parameter (overrides the config)
        #[arg(long)]
        eta: Option<f64>,
        /// Number of levels to tabulate
        #[arg(long)]
        cutoff: Option<usize>,
        /// Write the table here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tabulate the phase-space zone boundaries of a coupling
    Zones {
        /// Read k/eta from a one-mode scenario config
        #[arg(long)]
        config: Option<PathBuf>,
        /// Sideband order (overrides the config)
        #[arg(long)]
        k: Option<usize>,
        /// Lamb-Dicke parameter (overrides the config)
        #[arg(long)]
        eta: Option<f64>,
        /// Scan limit in vibrational quanta
        #[arg(long, default_value_t = 500)]
        n_max: usize,
        /// Write the table here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a scenario config and write its data files
    Evolve {
        /// Scenario configuration file
        #[arg(long)]
        config: PathBuf,
        /// Output directory (created if missing)
        #[arg(long)]
        out: PathBuf,
        /// Accept cutoffs below the coherent-state guidance
        #[arg(long)]
        override_cutoff: bool,
    },
    /// Print a built-in scenario preset config
    Preset {
        /// One of: splitting, squeezing, kerr
        name: String,
        /// Write the config here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(if err.is_validation() { 2 } else { 3 })
        }
    }
}

fn load_config(path: &PathBuf) -> Result<SimulationConfig, Error> {
    let text = fs::read_to_string(path)?;
    parse_config(&text)
}

fn one_mode_params(
    config: Option<&PathBuf>,
    k: Option<usize>,
    eta: Option<f64>,
) -> Result<(usize, f64, Option<usize>), Error> {
    let from_config = match config {
        Some(path) => {
            let cfg = load_config(path)?;
            match cfg.scenario {
                Scenario::OneMode { k, eta, cutoff, .. } => Some((k, eta, cutoff)),
                Scenario::ResonantMultimode { .. } => {
                    return Err(Error::Config(
                        "coupling and zone tables need a one_mode config".into(),
                    ))
                }
            }
        }
        None => None,
    };
    let k = k.or(from_config.map(|(k, _, _)| k)).ok_or_else(|| {
        Error::Config("specify --k or a --config with a one_mode scenario".into())
    })?;
    let eta = eta.or(from_config.map(|(_, e, _)| e)).ok_or_else(|| {
        Error::Config("specify --eta or a --config with a one_mode scenario".into())
    })?;
    Ok((k, eta, from_config.map(|(_, _, c)| c)))
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), Error> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn run(command: Command) -> Result<(), Error> {
    match command {
        Command::Coupling {
            config,
            k,
            eta,
            cutoff,
            out,
        } => {
            let (k, eta, cfg_cutoff) = one_mode_params(config.as_ref(), k, eta)?;
            let cutoff = cutoff.or(cfg_cutoff).unwrap_or(100);
            let mut text = String::from("n,f\n");
            for n in 0..cutoff {
                let _ = writeln!(text, "{},{}", n, f_scalar(k, n, eta)?);
            }
            emit(&text, out.as_ref())
        }
        Command::Zones {
            config,
            k,
            eta,
            n_max,
            out,
        } => {
            let (k, eta, _) = one_mode_params(config.as_ref(), k, eta)?;
            let zones = zone_boundaries(k, eta, n_max)?;
            let mut text = String::from("k,eta,n_lo,n_hi,n_star,radius\n");
            for (bracket, radius) in zones.brackets.iter().zip(&zones.radii) {
                let _ = writeln!(
                    text,
                    "{},{},{},{},{},{}",
                    zones.k,
                    zones.eta,
                    bracket.0,
                    bracket.1,
                    radius * radius,
                    radius
                );
            }
            emit(&text, out.as_ref())
        }
        Command::Evolve {
            config,
            out,
            override_cutoff,
        } => {
            let mut cfg = load_config(&config)?;
            if override_cutoff {
                cfg.override_cutoff = true;
            }
            let summary = run_scenario(&cfg, &out)?;
            println!(
                "wrote {} file(s) + summary.txt to {}",
                summary.files.len(),
                out.display()
            );
            println!("config_hash = {}", summary.config_hash);
            println!("max_norm_defect = {:e}", summary.max_norm_defect);
            for row in &summary.rows {
                let ratio = row
                    .stats
                    .ratio
                    .map_or("nan".to_string(), |r| format!("{r:.6}"));
                let peaks = row
                    .peak_count
                    .map_or(String::new(), |c| format!(", peaks {c}"));
                println!(
                    "{} {} : <n> {:.4}, var {:.4}, ratio {ratio}{peaks}",
                    summary.time_unit, row.time, row.stats.mean_n, row.stats.var_n
                );
            }
            Ok(())
        }
        Command::Preset { name, out } => {
            let text = preset_text(&name).map_err(|_| {
                Error::Config(format!(
                    "unknown preset `{name}`; available: {}",
                    PRESET_NAMES.join(", ")
                ))
            })?;
            emit(&text, out.as_ref())
        }
    }
}
