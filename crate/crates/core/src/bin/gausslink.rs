use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use gausslink::sweep::{run_selftest, run_sweep, SweepConfig, SweepError};

#[derive(Parser)]
#[command(name = "gausslink", version, about = "Parameter sweeps for microwave-optical transduction models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a sweep config and write its CSV grid
    Sweep {
        config: PathBuf,
        /// Directory for relative output paths
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write an SVG heatmap
        #[arg(long)]
        svg: bool,
        /// Worker threads (falls back to GAUSSLINK_JOBS)
        #[arg(long)]
        jobs: Option<usize>,
        /// Accepted for symmetry with `selftest`; sweeps are deterministic
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run the randomized oracle-equivalence checks
    Selftest {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        jobs: Option<usize>,
    },
}

fn jobs(flag: Option<usize>) -> Result<Option<usize>, String> {
    if flag.is_some() {
        return Ok(flag);
    }
    match std::env::var("GAUSSLINK_JOBS") {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .map(Some)
            .map_err(|_| format!("GAUSSLINK_JOBS=`{v}` is not a thread count")),
        Err(_) => Ok(None),
    }
}

fn pool(threads: Option<usize>) -> Result<rayon::ThreadPool, String> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        if n == 0 {
            return Err("--jobs must be at least 1".into());
        }
        builder = builder.num_threads(n);
    }
    builder.build().map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Sweep {
            config,
            out,
            svg,
            jobs: flag,
            seed: _,
        } => {
            let pool = match jobs(flag).and_then(pool) {
                Ok(p) => p,
                Err(e) => {
                    eprintln!("config error: {e}");
                    return ExitCode::from(2);
                }
            };
            let result = SweepConfig::load(&config)
                .map_err(SweepError::from)
                .and_then(|c| pool.install(|| run_sweep(&c, out.as_deref(), svg)));
            match result {
                Ok(done) => {
                    println!(
                        "wrote {} ({} rows, {} unstable)",
                        done.csv_path.display(),
                        done.rows,
                        done.unstable
                    );
                    if let Some(svg) = done.svg_path {
                        println!("wrote {}", svg.display());
                    }
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("{e}");
                    ExitCode::from(e.exit_code() as u8)
                }
            }
        }
        Command::Selftest { seed, jobs: flag } => {
            let pool = match jobs(flag).and_then(pool) {
                Ok(p) => p,
                Err(e) => {
                    eprintln!("config error: {e}");
                    return ExitCode::from(2);
                }
            };
            let report = pool.install(|| run_selftest(seed));
            for c in &report.checks {
                println!("{} {} (worst {:.3e})", if c.passed { "PASS" } else { "FAIL" }, c.name, c.worst);
            }
            if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(3)
            }
        }
    }
}
