use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::anyhow;
use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use eqarea::scenario::{self, LadderParameter, OracleKind, Scenario};
use eqarea::shock::{Mode, Reinit};
use eqarea::Error;

#[derive(Parser, Debug)]
#[command(name = "eqarea", version, about = "Scalar conservation laws by characteristic flow and equal-area shocks")]
struct Cli {
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Override the scenario's solver mode.
    #[arg(long, global = true, value_enum)]
    mode: Option<ModeArg>,
    /// Override the scenario's reinitialisation cadence.
    #[arg(long, global = true, value_enum)]
    reinit: Option<ReinitArg>,
    /// Scenarios run concurrently (for `run` with several files).
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run scenarios and write curve samples, shock series and a summary.
    Run {
        #[arg(required = true)]
        configs: Vec<PathBuf>,
    },
    /// Final shock position error over a ladder of time steps or node counts.
    Convergence {
        config: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        ladder: Vec<f64>,
        #[arg(long, value_enum, default_value = "dt")]
        parameter: ParameterArg,
        /// Use a Godunov reference when no exact solution is known.
        #[arg(long)]
        godunov_fallback: bool,
        /// Exit with status 4 if any error exceeds this.
        #[arg(long)]
        threshold: Option<f64>,
    },
    /// Compare a scenario against a reference solution.
    Compare {
        config: PathBuf,
        /// triangle, riemann, front-tracking, godunov or auto.
        #[arg(long, default_value = "auto")]
        oracle: String,
        /// Godunov grid size.
        #[arg(long, default_value_t = 1 << 14)]
        cells: usize,
        /// Exit with status 4 if the shock position delta exceeds this.
        #[arg(long)]
        threshold: Option<f64>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Flow,
    Appendix,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ReinitArg {
    Never,
    AfterCollision,
    EveryOutput,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ParameterArg {
    Dt,
    N,
}

enum Failure {
    Config(anyhow::Error),
    Solver(anyhow::Error),
    Breach(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Config(_) => 2,
            Failure::Solver(_) => 3,
            Failure::Breach(_) => 4,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_config() {
            Failure::Config(e.into())
        } else {
            Failure::Solver(e.into())
        }
    }
}

fn load(cli: &Cli, path: &Path) -> Result<Scenario, Failure> {
    let mut sc = Scenario::from_file(path)?;
    if let Some(m) = cli.mode {
        sc.solver.mode = match m {
            ModeArg::Flow => Mode::Flow,
            ModeArg::Appendix => Mode::Appendix,
        };
    }
    if let Some(r) = cli.reinit {
        sc.solver.reinit = match r {
            ReinitArg::Never => Reinit::Never,
            ReinitArg::AfterCollision => Reinit::AfterCollision,
            ReinitArg::EveryOutput => Reinit::EveryOutput,
        };
    }
    Ok(sc)
}

fn io(e: Error, what: &str) -> Failure {
    Failure::Solver(anyhow::Error::from(e).context(what.to_string()))
}

fn run_one(cli: &Cli, path: &Path, dir: &Path) -> Result<(), Failure> {
    let sc = load(cli, path)?;
    let out = scenario::run(&sc).map_err(|e| Failure::from(e).context(&sc.name))?;
    scenario::write_run(&out, dir).map_err(|e| io(e, "writing run outputs"))?;
    let s = &out.summary;
    println!(
        "{}: {} output times, {} collisions, max drift/scale {:.3e}, {:.3}s -> {}",
        s.name,
        s.frames.len(),
        s.collisions.len(),
        s.max_drift_ratio,
        s.wall_time_s,
        dir.display()
    );
    if !s.conservation_ok {
        return Err(Failure::Breach(format!(
            "{}: area drift {:.3e} exceeds tolerance {:.3e}",
            s.name, s.max_drift_ratio, s.conservation_tolerance
        )));
    }
    Ok(())
}

impl Failure {
    fn context(self, what: &str) -> Self {
        match self {
            Failure::Config(e) => Failure::Config(e.context(what.to_string())),
            Failure::Solver(e) => Failure::Solver(e.context(what.to_string())),
            b => b,
        }
    }
}

fn execute(cli: &Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Run { configs } => {
            if configs.len() == 1 {
                return run_one(cli, &configs[0], &cli.out);
            }
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(cli.jobs.max(1))
                .build()
                .map_err(|e| Failure::Solver(anyhow!(e)))?;
            let results: Vec<Result<(), Failure>> = pool.install(|| {
                configs
                    .par_iter()
                    .map(|p| {
                        let stem = p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
                        run_one(cli, p, &cli.out.join(stem))
                    })
                    .collect()
            });
            // report every failure, exit with the most severe code
            let mut worst: Option<Failure> = None;
            for r in results {
                if let Err(f) = r {
                    report(&f);
                    if worst.as_ref().map_or(true, |w| f.code() > w.code()) {
                        worst = Some(f);
                    }
                }
            }
            worst.map_or(Ok(()), Err)
        }
        Command::Convergence { config, ladder, parameter, godunov_fallback, threshold } => {
            let sc = load(cli, config)?;
            let param = match parameter {
                ParameterArg::Dt => LadderParameter::Dt,
                ParameterArg::N => LadderParameter::N,
            };
            let rows = scenario::convergence(&sc, param, ladder, *godunov_fallback)?;
            std::fs::create_dir_all(&cli.out).map_err(|e| io(e.into(), "creating output directory"))?;
            scenario::write_csv(&cli.out.join("convergence.csv"), &rows).map_err(|e| io(e, "writing convergence table"))?;
            println!("{:>12} {:>14}", format!("{parameter:?}").to_lowercase(), "error");
            for r in &rows {
                println!("{:>12} {:>14.3e}", r.parameter, r.error);
            }
            if let Some(th) = threshold {
                if let Some(r) = rows.iter().find(|r| !(r.error <= *th)) {
                    return Err(Failure::Breach(format!("error {:.3e} at {} exceeds {th:.3e}", r.error, r.parameter)));
                }
            }
            Ok(())
        }
        Command::Compare { config, oracle, cells, threshold } => {
            let sc = load(cli, config)?;
            let kind = if oracle == "auto" {
                scenario::exact_oracle(&sc).ok_or_else(|| {
                    Failure::from(Error::NoOracle(format!("no exact oracle for `{}`; pass --oracle godunov", sc.name)))
                })?
            } else {
                oracle.parse::<OracleKind>()?
            };
            let report = scenario::compare(&sc, kind, *cells)?;
            std::fs::create_dir_all(&cli.out).map_err(|e| io(e.into(), "creating output directory"))?;
            scenario::write_json(&cli.out.join("compare.json"), &report).map_err(|e| io(e, "writing report"))?;
            println!("{report}");
            if let Some(th) = threshold {
                let delta = report.max_position_delta();
                if !(delta <= *th) {
                    return Err(Failure::Breach(format!("shock position delta {delta:.3e} exceeds {th:.3e}")));
                }
            }
            Ok(())
        }
    }
}

fn report(f: &Failure) {
    match f {
        Failure::Config(e) => eprintln!("config error: {e:#}"),
        Failure::Solver(e) => eprintln!("solver error: {e:#}"),
        Failure::Breach(msg) => eprintln!("threshold breach: {msg}"),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            report(&f);
            ExitCode::from(f.code())
        }
    }
}
