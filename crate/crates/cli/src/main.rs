//! `kaonbell` command-line front end.
//!
//! Exit codes: 0 success, 1 I/O failure or failed Monte Carlo validation,
//! 2 domain error, 3 infeasible local-realistic model, 64 usage error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use kaonbell::lr::LrModel;
use kaonbell::scan::{format_sig, ScanOutput};
use kaonbell::*;

const EXIT_FAILURE: u8 = 1;
const EXIT_DOMAIN: u8 = 2;
const EXIT_INFEASIBLE: u8 = 3;
const EXIT_USAGE: u8 = 64;

#[derive(Parser, Debug)]
#[command(
    name = "kaonbell",
    version,
    about = "Entangled neutral-kaon pairs: quantum mechanics against local realism"
)]
struct Cli {
    /// Decay constants file (`key = value` lines: gamma_s, gamma_l, delta_m, velocity).
    #[arg(long, global = true, env = "KAONBELL_CONFIG")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Quantum-mechanical joint (or single, without --o2) detection probability.
    #[command(allow_negative_numbers = true)]
    QmProb {
        #[arg(long)]
        o1: Outcome,
        #[arg(long)]
        tau1: f64,
        #[arg(long, requires = "tau2")]
        o2: Option<Outcome>,
        #[arg(long, requires = "o2")]
        tau2: Option<f64>,
    },
    /// Quantum-mechanical strangeness asymmetry at a time difference.
    #[command(allow_negative_numbers = true)]
    Asymmetry {
        #[arg(long)]
        dtau: f64,
    },
    /// Range of asymmetries reachable by local-realistic models.
    #[command(allow_negative_numbers = true)]
    LrBounds {
        #[arg(long)]
        tau1: f64,
        #[arg(long)]
        tau2: f64,
    },
    /// Scan the QM / local-realistic asymmetry gap along tau2 = alpha * tau1.
    #[command(allow_negative_numbers = true)]
    AsymmetryScan {
        #[arg(long, default_value_t = 1.5)]
        alpha: f64,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Scan the kaon Wigner function (or the spin-singlet one over theta with --spin).
    WignerScan {
        #[arg(long, default_value_t = 1.5)]
        p: f64,
        /// Use stable kaons.
        #[arg(long)]
        stable: bool,
        /// Scan the spin-singlet function over the analyzer angle instead.
        #[arg(long, conflicts_with_all = ["p", "stable"])]
        spin: bool,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Scan the CHSH combination.
    ChshScan {
        #[arg(long, default_value_t = 1.0)]
        p: f64,
        /// Normalize joints to undecayed pairs.
        #[arg(long)]
        renormalized: bool,
        /// Use stable kaons.
        #[arg(long)]
        stable: bool,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Sample the hidden-variable distribution and compare with the analytic table.
    #[command(allow_negative_numbers = true)]
    McValidate {
        #[arg(long)]
        tau1: f64,
        #[arg(long)]
        tau2: f64,
        #[arg(long, default_value_t = 1_000_000)]
        n: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Model JSON with tau1, tau2, p111_norm, p112_norm, p333_norm, p334_norm.
        #[arg(long, conflicts_with = "corner")]
        model: Option<PathBuf>,
        /// Built-in model when no --model file is given.
        #[arg(long, value_enum, default_value_t = Corner::Mid)]
        corner: Corner,
        /// Write the sampled table as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare with the CPLEAR asymmetry measurements.
    CplearCompare {
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args, Debug)]
struct GridArgs {
    /// Scan range `lo:hi` (times in K_S lifetimes, angles in radians for --spin).
    #[arg(long, value_parser = parse_range)]
    range: Option<(f64, f64)>,
    #[arg(long, default_value_t = scan::DEFAULT_STEPS)]
    steps: usize,
    /// Write the scan table as CSV.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Corner {
    Mid,
    Max,
    Min,
}

fn parse_range(s: &str) -> Result<(f64, f64), String> {
    let (lo, hi) = s.split_once(':').ok_or("expected lo:hi")?;
    let lo: f64 = lo
        .trim()
        .parse()
        .map_err(|_| format!("bad lower bound `{lo}`"))?;
    let hi: f64 = hi
        .trim()
        .parse()
        .map_err(|_| format!("bad upper bound `{hi}`"))?;
    Ok((lo, hi))
}

#[derive(Debug)]
enum Failure {
    Model(Error),
    Io(String),
    Validation(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Model(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Model(e) if e.is_infeasible() => EXIT_INFEASIBLE,
            Failure::Model(_) => EXIT_DOMAIN,
            Failure::Io(_) | Failure::Validation(_) => EXIT_FAILURE,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Model(e) => write!(f, "{e}"),
            Failure::Io(msg) | Failure::Validation(msg) => f.write_str(msg),
        }
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn grid_spec(grid: &GridArgs, default: (f64, f64)) -> Result<ScanSpec, Failure> {
    let (lo, hi) = grid.range.unwrap_or(default);
    Ok(ScanSpec::new(lo, hi, grid.steps)?)
}

fn emit_scan(out: ScanOutput, grid: &GridArgs) -> Result<(), Failure> {
    if let Some(path) = &grid.out {
        out.table.write_csv_file(path)?;
    }
    println!("{}", out.extremum.to_json());
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    let base = match &cli.config {
        Some(path) => DecayParams::from_config_file(path)?,
        None => DecayParams::default(),
    };
    let stable = |flag: bool| {
        if flag {
            DecayParams {
                velocity: base.velocity,
                ..DecayParams::stable()
            }
        } else {
            base
        }
    };

    match cli.command {
        Command::QmProb { o1, tau1, o2, tau2 } => {
            let value = match (o2, tau2) {
                (Some(o2), Some(tau2)) => qm_joint(&base, o1, o2, tau1, tau2)?.value,
                _ => qm_single(&base, o1, tau1)?,
            };
            println!("{}", format_sig(value));
        }
        Command::Asymmetry { dtau } => {
            println!("{}", format_sig(qm_asymmetry(&base, dtau)?));
        }
        Command::LrBounds { tau1, tau2 } => {
            let b = lr_asymmetry_bounds(&base, tau1, tau2)?;
            println!("[{}, {}]", format_sig(b.lo), format_sig(b.hi));
        }
        Command::AsymmetryScan { alpha, grid } => {
            let spec = grid_spec(&grid, scan::DEFAULT_RANGE)?;
            emit_scan(asymmetry_discrepancy_scan(&base, alpha, &spec)?, &grid)?;
        }
        Command::WignerScan {
            p,
            stable: st,
            spin,
            grid,
        } => {
            if spin {
                let spec = grid_spec(&grid, (0.0, std::f64::consts::PI))?;
                emit_scan(spin_wigner_scan(&spec)?, &grid)?;
            } else {
                let spec = grid_spec(&grid, scan::DEFAULT_RANGE)?;
                let cfg = WignerConfig::new(p)?;
                emit_scan(wigner_scan(&stable(st), &cfg, &spec)?, &grid)?;
            }
        }
        Command::ChshScan {
            p,
            renormalized,
            stable: st,
            grid,
        } => {
            let spec = grid_spec(&grid, scan::DEFAULT_RANGE)?;
            let cfg = ChshConfig::new(p, renormalized)?;
            let out = chsh_scan(&stable(st), &cfg, &spec)?;
            if let Some(path) = &grid.out {
                out.table.write_csv_file(path)?;
            }
            let json = serde_json::json!({
                "min": out.min.rounded(),
                "max": out.max.rounded(),
            });
            println!("{}", serde_json::to_string_pretty(&json).expect("json"));
        }
        Command::McValidate {
            tau1,
            tau2,
            n,
            seed,
            model,
            corner,
            out,
        } => {
            let model = match model {
                Some(path) => {
                    let text = fs::read_to_string(&path)
                        .map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
                    let m = LrModel::from_json(&base, &text)?;
                    if m.tau1 != tau1 || m.tau2 != tau2 {
                        return Err(Error::InvalidParameter {
                            name: "model".into(),
                            reason: format!(
                                "model times ({}, {}) differ from --tau1/--tau2 ({tau1}, {tau2})",
                                m.tau1, m.tau2
                            ),
                        }
                        .into());
                    }
                    m
                }
                None => match corner {
                    Corner::Mid => LrModel::midpoint(&base, tau1, tau2)?,
                    Corner::Max => LrModel::max_asymmetry(&base, tau1, tau2)?,
                    Corner::Min => LrModel::min_asymmetry(&base, tau1, tau2)?,
                },
            };
            let table = sample_pairs(
                &base,
                &SamplerConfig {
                    seed,
                    n_samples: n,
                    model,
                },
            )?;
            if let Some(path) = &out {
                write_file(path, &table.to_json())?;
            }
            report_mc(&table)?;
        }
        Command::CplearCompare { json } => {
            let report = cplear_compare(&base)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&report).expect("json"));
            } else {
                println!("{report}");
            }
        }
    }
    Ok(())
}

const MC_SIGMA: f64 = 4.0;
const MC_MIN_P_VALUE: f64 = 1e-3;

fn report_mc(table: &EmpiricalTable) -> Result<(), Failure> {
    println!("state,count,frequency,std_error,expected,z");
    let mut worst: f64 = 0.0;
    for i in 0..N_STATES {
        let est = table.state(i);
        let expected = table.expected[i];
        let sigma = (expected * (1.0 - expected) / table.n() as f64).sqrt();
        let d = (est.value - expected).abs();
        let z = if d == 0.0 { 0.0 } else { d / sigma };
        worst = worst.max(z);
        println!(
            "{},{},{},{},{},{}",
            i + 1,
            table.counts[i],
            format_sig(est.value),
            format_sig(est.std_error),
            format_sig(expected),
            format_sig(z)
        );
    }
    let p_value = table.chi_square_p_value();
    println!("max_z = {}", format_sig(worst));
    println!("chi_square_p = {}", format_sig(p_value));
    if worst <= MC_SIGMA && p_value > MC_MIN_P_VALUE {
        println!("validation: PASS");
        Ok(())
    } else {
        println!("validation: FAIL");
        Err(Failure::Validation(format!(
            "sampled table disagrees with the analytic one (max z {worst:.3}, p {p_value:.3e})"
        )))
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.code())
        }
    }
}
