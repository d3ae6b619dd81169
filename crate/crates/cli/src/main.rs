use std::fs;
use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use nlde_core::checks::seed_check;
use nlde_core::io::{parse_config, run_study};

/// Split-step spectral solver and convergence harness for the nonlinear
/// Dirac equation.
#[derive(Debug, Parser)]
#[command(name = "nlde", version)]
struct Cli {
    /// Study configuration (TOML).
    #[arg(required_unless_present = "seed_check")]
    config: Option<PathBuf>,

    /// Output directory; overrides `out` in the config.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,

    /// Worker threads (defaults to the number of cores).
    #[arg(long, value_name = "N")]
    threads: Option<usize>,

    /// Run the invariant suite and exit.
    #[arg(long)]
    seed_check: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();

    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("nlde: cannot start {n} threads: {e}");
            return ExitCode::FAILURE;
        }
    }

    if cli.seed_check {
        let mut ok = true;
        for c in seed_check() {
            let status = if c.passed() { "ok  " } else { "FAIL" };
            println!("{status} {:<40} {:.3e} (tol {:.0e})", c.name, c.value, c.tolerance);
            ok &= c.passed();
        }
        return if ok { ExitCode::SUCCESS } else { ExitCode::FAILURE };
    }

    let path = cli.config.expect("required unless --seed-check");
    let text = match fs::read_to_string(&path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("nlde: reading {}: {e}", path.display());
            return ExitCode::FAILURE;
        }
    };
    let mut config = match parse_config(&text) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("nlde: {}: {e}", path.display());
            return ExitCode::FAILURE;
        }
    };
    if let Some(out) = cli.out {
        config.out = out;
    }
    match run_study(&config, &config.out, &mut io::stdout().lock()) {
        Ok(report) => {
            for f in &report.files {
                println!("wrote {}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("nlde: {} study failed: {e}", config.study);
            ExitCode::FAILURE
        }
    }
}
