use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use hyperchaos::henon::HenonParams;
use hyperchaos::hset::HSetPairConfig;
use hyperchaos_certify::commands::{self, attractor_sample, build_report, MapKind, RunOptions};
use hyperchaos_certify::report::{periodic_orbit, ProofReport};

/// Computer-assisted proofs of symbolic dynamics and uniform hyperbolicity
/// for the 4th iterate of the 3D Hénon map H(x,y,z) = (a - y² - b z, x, y).
#[derive(Parser, Debug)]
#[command(name = "hyperchaos", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Verify the four covering relations a=>a, a=>b, b=>a, b=>b.
    VerifySymbolic(VerifyArgs),
    /// Verify the cone condition on the four chart-conjugated maps.
    VerifyHyperbolicity(VerifyArgs),
    /// Both of the above.
    VerifyAll(VerifyArgs),
    /// State the periodic orbit forced by a cyclic word over {a, b}.
    PeriodicOrbits {
        /// Report from a passing verify-symbolic or verify-all run.
        #[arg(long)]
        report: PathBuf,
        word: String,
    },
    /// Write a plain floating-point orbit sample as CSV (not rigorous).
    AttractorSample {
        #[arg(long, value_parser = parse_triple, default_value = "0.5,0.5,0.5")]
        seed: [f64; 3],
        #[arg(long, default_value_t = 1000)]
        transient: usize,
        #[arg(long, default_value_t = 100_000)]
        count: usize,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value = "1.76")]
        param_a: String,
        #[arg(long, default_value = "0.1")]
        param_b: String,
    },
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum MapArg {
    Henon,
    Identity,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Sub-boxes per local coordinate for condition (I).
    #[arg(long, value_delimiter = ',', default_values_t = [60, 60, 60])]
    body_grid: Vec<usize>,
    /// Parts per free coordinate of each exit face for condition (II).
    #[arg(long, value_delimiter = ',', default_values_t = [10, 10])]
    face_grid: Vec<usize>,
    /// Sub-boxes per local coordinate for the cone condition.
    #[arg(long, value_delimiter = ',', default_values_t = [25, 25, 25])]
    hyp_grid: Vec<usize>,
    #[arg(long, default_value_t = 4)]
    map_iterate: usize,
    #[arg(long, value_enum, default_value = "henon")]
    map: MapArg,
    #[arg(long, default_value = "1.76")]
    param_a: String,
    #[arg(long, default_value = "0.1")]
    param_b: String,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long)]
    workers: Option<usize>,
    /// Where to write the JSON proof report.
    #[arg(long)]
    report: Option<PathBuf>,
    /// JSON file with decimal-string definitions of h-sets `a` and `b`.
    #[arg(long)]
    hsets: Option<PathBuf>,
    #[arg(long, default_value_t = 16)]
    max_failures: usize,
}

fn parse_triple(s: &str) -> Result<[f64; 3], String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}")))
        .collect::<Result<_, _>>()?;
    v.try_into()
        .map_err(|_| "expected three comma-separated numbers".to_string())
}

impl VerifyArgs {
    fn options(&self) -> anyhow::Result<RunOptions> {
        let hsets = match &self.hsets {
            Some(p) => {
                let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
                serde_json::from_str::<HSetPairConfig>(&text).with_context(|| format!("parsing {}", p.display()))?
            }
            None => HSetPairConfig::standard(),
        };
        anyhow::ensure!(self.map_iterate >= 1, "--map-iterate must be at least 1");
        Ok(RunOptions {
            body_grid: self.body_grid.clone(),
            face_grid: self.face_grid.clone(),
            hyp_grid: self.hyp_grid.clone(),
            map_iterate: self.map_iterate,
            map_kind: match self.map {
                MapArg::Henon => MapKind::Henon,
                MapArg::Identity => MapKind::Identity,
            },
            param_a: self.param_a.clone(),
            param_b: self.param_b.clone(),
            workers: self.workers.unwrap_or_else(commands::default_workers),
            hsets,
            max_failures_reported: self.max_failures,
        })
    }
}

fn print_summary(report: &ProofReport) {
    if let Some(s) = &report.symbolic {
        for c in &s.certificates {
            println!(
                "covering {} => {}: {} (condition I failed boxes: {}/{}, condition II failed parts: {})",
                c.source,
                c.target,
                if c.passed { "PASS" } else { "FAIL" },
                c.condition_i.failed,
                c.condition_i.boxes,
                c.condition_ii.failed()
            );
        }
        println!("{}", s.conclusion);
    }
    if let Some(h) = &report.hyperbolicity {
        for m in &h.certificate.maps {
            println!(
                "cone condition f_{}: {} (skipped {}, positive definite {}, failed {})",
                m.pair,
                if m.passed() { "PASS" } else { "FAIL" },
                m.skipped_disjoint,
                m.positive_definite,
                m.failed
            );
        }
        println!("{}", h.conclusion);
    }
    println!("verdict: {}", if report.verdict { "PASS" } else { "FAIL" });
}

fn verify(args: &VerifyArgs, symbolic: bool, hyperbolicity: bool) -> anyhow::Result<ExitCode> {
    let opts = args.options()?;
    let report = build_report(&opts, symbolic, hyperbolicity)?;
    print_summary(&report);
    if let Some(path) = &args.report {
        report.write(path)?;
    }
    Ok(if report.verdict {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::VerifySymbolic(args) => verify(&args, true, false),
        Command::VerifyHyperbolicity(args) => verify(&args, false, true),
        Command::VerifyAll(args) => verify(&args, true, true),
        Command::PeriodicOrbits { report, word } => {
            let report = match ProofReport::read(&report) {
                Ok(r) => r,
                Err(e) => {
                    eprintln!("refusing: {e:#}");
                    return Ok(ExitCode::from(1));
                }
            };
            match periodic_orbit(&report, &word) {
                Ok(stmt) => {
                    println!("{}", stmt.statement);
                    for (name, hull) in &stmt.supports {
                        println!("|N_{name}| ⊆ {hull}");
                    }
                    Ok(ExitCode::SUCCESS)
                }
                Err(e) => {
                    eprintln!("refusing: {e}");
                    Ok(ExitCode::from(1))
                }
            }
        }
        Command::AttractorSample {
            seed,
            transient,
            count,
            out,
            param_a,
            param_b,
        } => {
            let params = HenonParams::from_decimals(&param_a, &param_b)?;
            let summary = attractor_sample(params, seed, transient, count, &out)?;
            match summary.diverged_at {
                None => {
                    println!("wrote {} points to {} (NON-RIGOROUS)", summary.rows, out.display());
                    Ok(ExitCode::SUCCESS)
                }
                Some(step) => {
                    eprintln!("orbit diverged at step {step}; wrote {} points", summary.rows);
                    Ok(ExitCode::from(1))
                }
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
