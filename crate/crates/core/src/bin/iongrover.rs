use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use iongrover::decompose::GateTemplate;
use iongrover::experiments::{self, NoiseSettings, RunOptions};
use iongrover::grover::{OracleSpec, OracleStyle};
use iongrover::noise::NoiseConfig;
use iongrover::state::BasisLabel;
use iongrover::Result;

#[derive(Parser)]
#[command(name = "iongrover", version, about = "Grover search on simulated trapped-ion native gates")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Noise config JSON, or `fitted` to match a 0.896 Toffoli-3 fidelity
    #[arg(long, global = true)]
    noise: Option<String>,
    /// SPAM config JSON (eps0, eps1, crosstalk)
    #[arg(long, global = true)]
    spam: Option<PathBuf>,
    #[arg(long, global = true)]
    shots: Option<u64>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Truth table of a decomposed gate
    GateTable {
        #[arg(long, default_value = "toffoli3")]
        gate: String,
    },
    /// Single-iteration Grover search
    Grover {
        #[arg(long, default_value = "phase")]
        style: OracleStyle,
        /// Marked label, repeatable
        #[arg(long = "marked", required_unless_present = "all", conflicts_with = "all")]
        marked: Vec<String>,
        /// Run every oracle with `--t` solutions
        #[arg(long, requires = "t")]
        all: bool,
        #[arg(long)]
        t: Option<usize>,
        /// Data qubits for `--all`
        #[arg(long, default_value_t = 3)]
        n: usize,
    },
    /// Limited tomography of Toffoli-3
    Tomography,
    /// Toffoli-n XX and ancilla counts
    Costs {
        #[arg(default_value = "3..10")]
        range: String,
    },
}

fn options(common: &Common) -> Result<RunOptions> {
    let cfg = match common.noise.as_deref() {
        Some("fitted") | None => None,
        Some(path) => Some(NoiseConfig::load(Path::new(path))?),
    };
    let seed = common.seed.or(cfg.as_ref().map(|c| c.seed)).unwrap_or(0);
    let spam_cfg = match &common.spam {
        Some(p) => Some(NoiseConfig::load(p)?),
        None => cfg.clone().filter(|c| c.eps0 > 0.0 || c.eps1 > 0.0 || c.crosstalk > 0.0),
    };
    let noise = match (&common.noise, &cfg) {
        (Some(_), Some(c)) => Some(NoiseSettings::from_config(c)?),
        (Some(_), None) => Some(NoiseSettings::fitted(seed)?),
        _ => None,
    };
    Ok(RunOptions { noise, spam: spam_cfg.map(|c| c.spam()).transpose()?, shots: common.shots, seed })
}

fn out_dir(common: &Common) -> PathBuf {
    common.out.clone().unwrap_or_else(|| PathBuf::from("results"))
}

fn run(cli: Cli) -> Result<()> {
    let common = &cli.common;
    match cli.command {
        Command::GateTable { gate } => {
            let gate = GateTemplate::parse(&gate)?;
            let opts = options(common)?;
            let (tt, report) = experiments::gate_table(gate, &opts)?;
            let name = format!("gate_table_{}", gate.name());
            experiments::write_outputs(
                &out_dir(common),
                &[
                    (format!("{name}.csv"), experiments::truth_table_csv(&tt)?),
                    (format!("{name}.json"), report.to_json()?),
                ],
            )?;
            let r = &report.rows[0];
            println!("{}: xx_count {} fidelity {:.6}", r.gate, r.xx_count, r.fidelity_noiseless);
            if let Some(f) = r.fidelity_noisy {
                println!("noisy fidelity {f:.4} (p_xx {:?}, hardware {:?})", r.p_xx, r.hardware_value);
            }
        }
        Command::Grover { style, marked, all, t, n } => {
            let opts = options(common)?;
            let report = if all {
                experiments::grover_all(n, t.unwrap_or(1), style, &opts)?
            } else {
                let labels = marked.iter().map(|m| BasisLabel::parse(m)).collect::<Result<Vec<_>>>()?;
                let n = labels[0].len();
                let spec = OracleSpec::new(n, labels, style)?;
                if t.is_some_and(|t| t != spec.t()) {
                    return Err(iongrover::Error::Parameter(format!(
                        "--t {} does not match {} marked labels",
                        t.unwrap(),
                        spec.t()
                    )));
                }
                experiments::grover(&[spec], &opts)?
            };
            let file = match common.format {
                Format::Json => ("grover.json".to_string(), report.to_json()?),
                Format::Csv => ("grover.csv".to_string(), experiments::grover_csv(&report)?),
            };
            experiments::write_outputs(&out_dir(common), &[file])?;
            for r in &report.rows {
                println!(
                    "{} {}: asp {:.5} sso {:.5} xx {}",
                    r.marked.join(","),
                    r.style.name(),
                    r.asp,
                    r.sso,
                    r.xx_count
                );
            }
            if let Some(s) = &report.summary {
                print!(
                    "mean asp {:.4} over {} oracles (theory {:.5}, classical {:.5}",
                    s.mean_asp, s.count, s.theoretical_asp, s.classical_asp
                );
                match s.hardware_value {
                    Some(a) => println!(", hardware {a})"),
                    None => println!(")"),
                }
            }
        }
        Command::Tomography => {
            let opts = options(common)?;
            let (tt, report) = experiments::tomography(&opts)?;
            experiments::write_outputs(
                &out_dir(common),
                &[
                    ("tomography.csv".into(), experiments::truth_table_csv(&tt)?),
                    ("tomography.json".into(), report.to_json()?),
                ],
            )?;
            let r = &report.rows[0];
            match r.hardware_value {
                Some(a) => println!("success {:.4} (hardware {a})", r.success),
                None => println!("success {:.6}", r.success),
            }
        }
        Command::Costs { range } => {
            let (lo, hi) = experiments::parse_range(&range)?;
            let report = experiments::costs(lo, hi)?;
            let csv = experiments::costs_csv(&report)?;
            if let Some(dir) = &common.out {
                let file = match common.format {
                    Format::Json => ("costs.json".to_string(), report.to_json()?),
                    Format::Csv => ("costs.csv".to_string(), csv.clone()),
                };
                experiments::write_outputs(dir, &[file])?;
            }
            print!("{csv}");
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
