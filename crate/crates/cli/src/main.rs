use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use atomarray_cli::config::load_mapping;
use atomarray_cli::experiments::{entropy_sweep, time_grid, EntropySweep, InitialState};
use atomarray_cli::tools::{cz_verify, read_graph, transport_check, transport_plan, waveform_csv};
use atomarray_cli::{diff_reports, init_threads, load_report, run_experiment, CliError, Experiment, ExperimentConfig, NoiseSpec};
use atomarray_manybody::DetuningPreset;
use atomarray_transport::TrapParams;
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "atomarray-sim", version, about = "Reproduce the atom-array experiments from the command line")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a named experiment and write report, tables and manifest.
    Run {
        experiment: Experiment,
        #[arg(long)]
        shots: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// `zero`, `default` or a JSON noise file.
        #[arg(long, default_value = "default")]
        noise: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Heating checks and move planning.
    Transport {
        #[command(subcommand)]
        command: TransportCommand,
    },
    /// Sampled twin-copy entropies after a quench of the 8-atom chain.
    EntropyQuench {
        #[arg(long, value_enum, default_value = "ground")]
        initial: InitialState,
        /// μs
        #[arg(long, default_value_t = 2.0)]
        tmax: f64,
        /// μs
        #[arg(long, default_value_t = 0.05)]
        dt: f64,
        /// Shots per time point.
        #[arg(long, default_value_t = 2000)]
        shots: usize,
        #[arg(long, default_value_t = 40)]
        trajectories: usize,
        /// `zero`, `default` or a JSON mapping error model.
        #[arg(long, default_value = "default")]
        noise: String,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum, default_value = "fixed")]
        preset: Preset,
        /// Evolution cut before the mapping, ns.
        #[arg(long, default_value_t = 0.0)]
        cutoff_ns: f64,
        #[arg(long, default_value_t = 8)]
        atoms: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Fidelity, single-qubit phase and leakage of the detuned CZ pulse.
    CzVerify {
        #[arg(long, default_value_t = 3.6)]
        omega_mhz: f64,
        /// Defaults to 500 Ω.
        #[arg(long)]
        blockade_mhz: Option<f64>,
        #[arg(long)]
        json: bool,
    },
    /// Per-metric differences between two reports (files or run directories).
    Diff {
        a: PathBuf,
        b: PathBuf,
        /// Exit 1 when any delta is significant.
        #[arg(long)]
        check: bool,
    },
}

#[derive(Subcommand)]
enum TransportCommand {
    /// Per-move ΔN, retention and rule violations of a circuit JSON file.
    Check {
        circuit: PathBuf,
        #[arg(long)]
        n_max: Option<f64>,
    },
    /// Search a layout for a graph and plan its AOD waveforms.
    Plan {
        #[arg(long)]
        graph: PathBuf,
        /// Duration of each move, μs.
        #[arg(long = "T", default_value_t = 200.0)]
        t: f64,
        /// Plan JSON; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Waveform CSV of all moves back to back.
        #[arg(long)]
        waveform: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Preset {
    Fixed,
    ScaledToV0,
}

fn write_file(p: &PathBuf, bytes: &[u8]) -> Result<(), CliError> {
    if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    std::fs::write(p, bytes).map_err(|e| CliError::io(p, e))
}

fn print(s: &str) -> Result<(), CliError> {
    let mut out = std::io::stdout().lock();
    writeln!(out, "{s}").map_err(|e| CliError::io("stdout", e))
}

fn to_json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

fn main_inner() -> Result<ExitCode, CliError> {
    let cli = Cli::parse();
    init_threads()?;
    match cli.command {
        Command::Run { experiment, shots, seed, noise, out } => {
            let mut cfg = ExperimentConfig::new(experiment);
            cfg.shots = shots;
            cfg.seed = seed;
            cfg.noise = noise.parse()?;
            if let Some(o) = out {
                cfg.out = o;
            }
            let m = run_experiment(&cfg)?;
            print(&format!("{} -> {} ({})", experiment, cfg.out.display(), m.input_hash))?;
            let report = load_report(&cfg.out)?;
            for (k, v) in &report.metrics {
                if !k.contains(".t") || report.metrics.len() < 40 {
                    match v.stderr {
                        Some(s) => print(&format!("  {k} = {:.6} ± {:.6}", v.value, s))?,
                        None => print(&format!("  {k} = {:.6}", v.value))?,
                    }
                }
            }
        }
        Command::Transport { command: TransportCommand::Check { circuit, n_max } } => {
            let mut traps = TrapParams::bell_transport();
            if let Some(n) = n_max {
                traps.n_max = n;
            }
            let check = transport_check(&circuit, &traps)?;
            print(&to_json(&check))?;
            if !check.is_valid() {
                return Ok(ExitCode::from(2));
            }
        }
        Command::Transport { command: TransportCommand::Plan { graph, t, out, waveform } } => {
            let g = read_graph(&graph)?;
            let plan = transport_plan(&g, t, &TrapParams::bell_transport())?;
            let json = to_json(&plan);
            match out {
                Some(p) => write_file(&p, format!("{json}\n").as_bytes())?,
                None => print(&json)?,
            }
            if let Some(p) = waveform {
                write_file(&p, &waveform_csv(&plan.plans)?)?;
            }
        }
        Command::EntropyQuench { initial, tmax, dt, shots, trajectories, noise, seed, preset, cutoff_ns, atoms, out } => {
            let spec: NoiseSpec = noise.parse()?;
            let text = match &spec {
                NoiseSpec::File(p) => Some(atomarray_cli::config::read_text(p)?),
                _ => None,
            };
            let errs = load_mapping(&spec, text.as_deref())?;
            if !errs.is_zeroed() && seed.is_none() {
                return Err(CliError::Validation("a noisy quench needs --seed".into()));
            }
            let sweep = EntropySweep {
                initial,
                atoms,
                preset: match preset {
                    Preset::Fixed => DetuningPreset::Fixed,
                    Preset::ScaledToV0 => DetuningPreset::ScaledToV0,
                },
                times_us: time_grid(tmax, dt)?,
                shots,
                trajectories,
                seed: seed.unwrap_or(0),
                cutoff_ns,
            };
            let res = entropy_sweep(&sweep, &errs)?;
            let mut w = csv::Writer::from_writer(Vec::new());
            for r in &res.rows {
                w.serialize(r).map_err(|e| CliError::io(&out, e))?;
            }
            write_file(&out, &w.into_inner().map_err(|e| CliError::io(&out, e))?)?;
            print(&format!("{} rows -> {}", res.rows.len(), out.display()))?;
        }
        Command::CzVerify { omega_mhz, blockade_mhz, json } => {
            let r = cz_verify(omega_mhz, blockade_mhz.unwrap_or(500.0 * omega_mhz))?;
            if json {
                print(&to_json(&r))?;
            } else {
                print(&format!("fidelity {:.7}", r.fidelity))?;
                print(&format!("zeta {:.6}", r.zeta))?;
                print(&format!("leakage {:.3e}", r.leakage))?;
            }
        }
        Command::Diff { a, b, check } => {
            let d = diff_reports(&load_report(&a)?, &load_report(&b)?)?;
            print(&to_json(&d))?;
            if check && d.significant().next().is_some() {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match main_inner() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
