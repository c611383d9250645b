use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use hom2::Error;
use hom2_cli::{exit_code_for, render, run, Manifest, Overrides};

/// Two-dimensional homological algebra over Z and Z/n.
///
/// Exit status: 0 success or verdict true, 1 verdict false, 2 input error,
/// 3 capacity exceeded.
#[derive(Parser, Debug)]
#[command(name = "hom2", version)]
struct Cli {
    /// Manifest file (TOML, schema v1).
    manifest: PathBuf,
    /// Command to run; defaults to `[command].name` in the manifest.
    /// `fmt` prints the manifest in canonical form.
    command: Option<String>,
    /// Emit JSON instead of TOML.
    #[arg(long)]
    json: bool,
    /// Degree.
    #[arg(long)]
    n: Option<i64>,
    /// Resolution length.
    #[arg(long)]
    length: Option<usize>,
    #[arg(long)]
    depth: Option<usize>,
    /// `plain` or `augmented`.
    #[arg(long)]
    convention: Option<String>,
    /// Enumeration bound for oracle checks.
    #[arg(long)]
    cap: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok((text, code)) => {
            print!("{text}");
            ExitCode::from(code as u8)
        }
        Err(e) => {
            eprintln!("hom2: {e}");
            ExitCode::from(exit_code_for(&e) as u8)
        }
    }
}

fn execute(cli: &Cli) -> Result<(String, i32), Error> {
    let text = std::fs::read_to_string(&cli.manifest)
        .map_err(|e| Error::input(format!("{}: {e}", cli.manifest.display())))?;
    let manifest = Manifest::parse(&text)?;
    if cli.command.as_deref() == Some("fmt") {
        return Ok((manifest.to_canonical_string()?, 0));
    }
    let overrides = Overrides {
        n: cli.n,
        length: cli.length,
        depth: cli.depth,
        convention: cli.convention.clone(),
        cap: cli.cap,
        seed: cli.seed,
    };
    let out = run(&manifest, cli.command.as_deref(), &overrides)?;
    Ok((render(&out.document, cli.json)?, out.exit_code()))
}
