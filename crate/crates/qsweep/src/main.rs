use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use qsweep::config::{self, FieldGrid, FileConfig, MeasureSet, Model, Output, Overrides};
use qsweep::record::render;
use qsweep::run::{self, ChainSolver, RunError};

#[derive(Parser)]
#[command(
    name = "qsweep",
    version,
    about = "Correlation-measure sweeps for tilted spin pairs and XY arrays"
)]
struct Cli {
    /// JSON config file; flags override its fields.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Number of sites.
    #[arg(long, global = true)]
    n: Option<usize>,

    /// Coupling anisotropy Jy/Jx.
    #[arg(long, global = true, allow_hyphen_values = true)]
    chi: Option<f64>,

    /// Sweep grid.
    #[arg(long, global = true, value_name = "MIN:MAX:POINTS", allow_hyphen_values = true)]
    grid: Option<String>,

    /// Comma separated list from D, I1, I2, I3, Iq(q), C.
    #[arg(long, global = true, value_name = "LIST")]
    measures: Option<String>,

    /// Output path; `-` writes to stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<String>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Angle sweep of the equal-weight tilted-pair family.
    Aligned,
    /// Field sweep of the cyclic XY ring, one record per (field, separation).
    Chain,
    /// Field sweep of the fully connected XY array.
    Lipkin,
    /// Report the factorizing field and residuals for a lattice spec.
    Factorize,
}

fn main() {
    let cli = Cli::parse();
    match real_main(cli) {
        Ok(()) => {}
        Err(err) => {
            eprintln!("qsweep: {err}");
            std::process::exit(err.exit_code());
        }
    }
}

fn load_file(path: &Option<PathBuf>) -> Result<FileConfig, RunError> {
    match path {
        Some(path) => FileConfig::from_path(path).map_err(|e| RunError::Config(e.to_string())),
        None => Ok(FileConfig::default()),
    }
}

fn overrides_from(cli: &Cli) -> Result<Overrides, RunError> {
    let grid = match &cli.grid {
        Some(text) => Some(text.parse::<FieldGrid>().map_err(|e| RunError::Config(e.to_string()))?),
        None => None,
    };
    let measures = match &cli.measures {
        Some(text) => {
            Some(MeasureSet::parse_list(text).map_err(|e| RunError::Config(e.to_string()))?)
        }
        None => None,
    };
    Ok(Overrides { n: cli.n, chi: cli.chi, grid, measures, out: cli.out.clone() })
}

fn write_output(output: &Output, text: &str) -> Result<(), RunError> {
    match output {
        Output::Stdout(_) => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
        Output::File(path, _) => {
            std::fs::write(path, text)?;
            eprintln!("wrote {path}");
            Ok(())
        }
    }
}

fn real_main(cli: Cli) -> Result<(), RunError> {
    let file = load_file(&cli.config)?;
    let flags = overrides_from(&cli)?;

    let model = match cli.command {
        Command::Aligned => Model::Aligned,
        Command::Chain => Model::CyclicNn,
        Command::Lipkin => Model::FullyConnected,
        Command::Factorize => {
            let model = file.model.unwrap_or(Model::CyclicNn);
            let n = flags
                .n
                .or(file.n)
                .ok_or_else(|| RunError::Config("config: n is required (flag --n or config)".into()))?;
            let chi = flags
                .chi
                .or(file.chi)
                .ok_or_else(|| RunError::Config("config: chi is required (flag --chi or config)".into()))?;
            let jx = file.jx.unwrap_or(1.0);
            let report = run::run_factorize(model, n, chi, jx)?;
            let text = run::render_factorize(&report);
            match &flags.out {
                Some(path) if path != "-" => {
                    std::fs::write(path, text)?;
                    eprintln!("wrote {path}");
                }
                _ => print!("{text}"),
            }
            return Ok(());
        }
    };

    let cfg = config::resolve(model, &file, &flags).map_err(|e| RunError::Config(e.to_string()))?;
    let records = match cli.command {
        Command::Aligned => run::run_aligned(&cfg)?,
        Command::Chain => run::run_chain(&cfg, ChainSolver::Auto)?,
        Command::Lipkin => run::run_lipkin(&cfg)?,
        Command::Factorize => unreachable!(),
    };

    let format = match &cfg.output {
        Output::Stdout(format) | Output::File(_, format) => *format,
    };
    let text = render(cfg.model, cfg.measures.deficit_q, &records, format);
    write_output(&cfg.output, &text)
}
