use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use css_ldpc::catalog::{Catalog, CssSystem};
use css_ldpc::ColumnSelection;
use css_ldpc_cli::config::SweepConfig;
use css_ldpc_cli::report::{eve_report, eve_single, format_eve_report, format_table1};
use css_ldpc_cli::sweep::{read_summary_csv, run_sweep, write_summary_csv, write_trials_csv};
use css_ldpc_cli::verify::verify_catalog;
use css_ldpc_cli::{CliError, CliResult};

#[derive(Parser)]
#[command(
    name = "css-ldpc",
    version,
    about = "LDPC-based CSS code pairs for BB84 post-processing"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum SelectionArg {
    Lightest,
    Heaviest,
}

#[derive(Subcommand)]
enum Command {
    /// Build a catalog code and its CSS pair and write the matrices.
    Construct {
        #[arg(long)]
        code: String,
        #[arg(long, value_enum, default_value = "lightest")]
        selection: SelectionArg,
        /// Output directory for h1.txt, h2.txt and header.txt.
        #[arg(long)]
        out: PathBuf,
    },
    /// Check dimensions, rates, mask checksums and the CSS identity.
    Verify {
        /// Restrict to these codes (repeatable).
        #[arg(long)]
        code: Vec<String>,
        /// Read masks from this directory instead of the embedded copies.
        #[arg(long)]
        mask_dir: Option<PathBuf>,
    },
    /// Run a block error sweep described by a config file.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// Summary CSV path; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write one row per trial here.
        #[arg(long)]
        trials_out: Option<PathBuf>,
    },
    /// Bound Eve's mutual information from a known delta or from sweeps.
    Eve {
        #[arg(long)]
        key_len: u32,
        #[arg(long, conflicts_with_all = ["c1", "c2perp"])]
        delta: Option<f64>,
        /// Summary CSV of a C1 coset sweep.
        #[arg(long, requires = "c2perp")]
        c1: Option<PathBuf>,
        /// Summary CSV of a C2perp coset sweep.
        #[arg(long, requires = "c1")]
        c2perp: Option<PathBuf>,
    },
    /// Coset coverage of a C2perp sweep next to the published table.
    Table1 {
        /// Sweep config to run.
        #[arg(long, conflicts_with = "summary")]
        config: Option<PathBuf>,
        /// Existing summary CSV instead of running a sweep.
        #[arg(long)]
        summary: Option<PathBuf>,
    },
}

fn output(path: Option<&Path>) -> CliResult<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Construct {
            code,
            selection,
            out,
        } => {
            let entry = Catalog::embedded()
                .entry(&code)
                .map_err(|e| CliError::Config(e.to_string()))?;
            let selection = match selection {
                SelectionArg::Lightest => ColumnSelection::Lightest,
                SelectionArg::Heaviest => ColumnSelection::Heaviest,
            };
            let system = CssSystem::new(&entry.id, entry.build()?, selection)?;
            std::fs::create_dir_all(&out)?;
            std::fs::write(out.join("h1.txt"), system.pair.h1().to_text())?;
            std::fs::write(out.join("h2.txt"), system.pair.h2().to_text())?;
            std::fs::write(out.join("header.txt"), system.pair.header_text())?;
            println!(
                "{}: {}x{}, rank h2 = {}, css dimension = {} -> {}",
                entry.id,
                system.pair.h1().rows(),
                system.pair.n(),
                system.pair.rank_h2(),
                system.pair.css_dimension(),
                out.display()
            );
        }
        Command::Verify { code, mask_dir } => {
            let report = verify_catalog(Catalog::embedded(), &code, mask_dir.as_deref());
            print!("{report}");
            if !report.pass() {
                return Err(CliError::Verification(report.failures().join("; ")));
            }
        }
        Command::Sweep {
            config,
            out,
            trials_out,
        } => {
            let cfg = SweepConfig::from_file(&config)?;
            let result = run_sweep(&cfg)?;
            write_summary_csv(&result.points, output(out.as_deref())?)?;
            if let Some(path) = trials_out {
                write_trials_csv(&result.trials, output(Some(&path))?)?;
            }
        }
        Command::Eve {
            key_len,
            delta,
            c1,
            c2perp,
        } => match (delta, c1, c2perp) {
            (Some(d), _, _) => print!("{}", eve_single(d, key_len)?),
            (None, Some(a), Some(b)) => {
                let a = read_summary_csv(File::open(&a)?)?;
                let b = read_summary_csv(File::open(&b)?)?;
                let rows = eve_report(&a, &b, key_len)?;
                print!("{}", format_eve_report(&rows, key_len)?);
            }
            _ => {
                return Err(CliError::Config(
                    "give either --delta or both --c1 and --c2perp".into(),
                ))
            }
        },
        Command::Table1 { config, summary } => {
            let points = match (config, summary) {
                (Some(c), _) => {
                    let cfg = SweepConfig::from_file(&c)?;
                    if !cfg.sweep.mode.decodes_c2perp() {
                        return Err(CliError::Config("table1 needs a c2perp sweep".into()));
                    }
                    run_sweep(&cfg)?.points
                }
                (None, Some(s)) => read_summary_csv(File::open(&s)?)?,
                (None, None) => return Err(CliError::Config("give --config or --summary".into())),
            };
            print!("{}", format_table1(&points));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
