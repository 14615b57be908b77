use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use restriction_lab::manifest::{load_manifest, Format};
use restriction_lab::{emit, runner};

/// Numerical experiments for Fourier extension and restriction estimates.
#[derive(Parser)]
#[command(name = "restriction-lab", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the probes named in a manifest and emit reports.
    Run {
        manifest: PathBuf,
        /// Output directory (default: manifest `out_dir`, then `out`).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Comma-separated formats: csv,json.
        #[arg(long)]
        format: Option<String>,
        /// Worker threads (default: all cores).
        #[arg(long)]
        jobs: Option<usize>,
        /// Seed override; also settable via RESTRICTION_LAB_SEED.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// List the available probes.
    ListProbes,
    /// Parse and validate a manifest without running it.
    Validate { manifest: PathBuf },
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Run {
            manifest,
            out,
            format,
            jobs,
            seed,
        } => run_command(manifest, out, format, jobs, seed),
        Command::ListProbes => {
            for def in restriction_core::probes::registry() {
                println!("{:<20} {}", def.id, def.summary);
            }
            ExitCode::SUCCESS
        }
        Command::Validate { manifest } => match load_manifest(&manifest) {
            Ok(m) => {
                println!("ok: {} probe(s), seed {}", m.configs.len(), m.seed);
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("invalid manifest: {e}");
                ExitCode::from(2)
            }
        },
    }
}

fn run_command(
    manifest_path: PathBuf,
    out: Option<PathBuf>,
    format: Option<String>,
    jobs: Option<usize>,
    seed: Option<u64>,
) -> ExitCode {
    if let Some(n) = jobs {
        configure_jobs(n);
    }
    let mut manifest = match load_manifest(&manifest_path) {
        Ok(m) => m,
        Err(e) => {
            eprintln!("invalid manifest: {e}");
            return ExitCode::from(2);
        }
    };
    // seed precedence: --seed, then the environment, then the manifest
    let env_seed = match std::env::var("RESTRICTION_LAB_SEED") {
        Ok(v) => match v.parse::<u64>() {
            Ok(s) => Some(s),
            Err(_) => {
                eprintln!("RESTRICTION_LAB_SEED must be an unsigned integer, got `{v}`");
                return ExitCode::from(2);
            }
        },
        Err(_) => None,
    };
    if let Some(s) = seed.or(env_seed) {
        for c in &mut manifest.configs {
            c.seed = s;
        }
        manifest.seed = s;
    }
    let formats = match format {
        Some(list) => {
            let mut v = Vec::new();
            for item in list.split(',') {
                match Format::parse(item) {
                    Ok(f) => v.push(f),
                    Err(e) => {
                        eprintln!("{e}");
                        return ExitCode::from(2);
                    }
                }
            }
            v
        }
        None => manifest.formats.clone(),
    };
    let out_dir = out
        .or_else(|| manifest.out_dir.clone())
        .unwrap_or_else(|| PathBuf::from("out"));

    let reports = runner::run(&manifest);
    for r in &reports {
        let status = match (&r.error, r.verdict) {
            (Some(e), _) => format!("ERROR {e}"),
            (None, true) => "pass".into(),
            (None, false) => "FAIL".into(),
        };
        println!("{:<24} {:>8} ms  {}", r.label, r.runtime_ms, status);
    }
    if let Err(e) = emit::emit_all(&reports, &out_dir, &formats) {
        eprintln!("cannot write reports to {}: {e}", out_dir.display());
        return ExitCode::from(2);
    }
    match runner::exit_code(&reports) {
        0 => ExitCode::SUCCESS,
        code => ExitCode::from(code as u8),
    }
}

fn configure_jobs(n: usize) {
    if let Err(e) = restriction_core::exec::set_worker_count(n) {
        eprintln!("note: worker count not applied: {e}");
    }
}
