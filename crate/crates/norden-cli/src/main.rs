//! `norden` — load almost Norden manifold charts from JSON files and certify
//! the conjugate-connection and statistical-structure identities on them.
//!
//! Exit codes: 0 all checks passed (or were skipped on an unmet hypothesis),
//! 1 at least one identity check failed, 2 input or usage error.

mod format;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Result};
use clap::{Args, Parser, Subcommand};
use norden_core::manifold::ChartError;
use norden_core::{lab, Chart, RunConfig, Status, SuiteId};

use format::ManifoldFile;
use report::{render_class_table, render_report_table, reports_to_json, ClassRow};

#[derive(Parser)]
#[command(
    name = "norden",
    version,
    about = "Verification engine for almost Norden manifold identities"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Validate the structural axioms of a manifold file.
    Validate {
        file: PathBuf,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Classify a chart against the basic-class characteristic conditions.
    Classify {
        file: PathBuf,
        #[command(flatten)]
        run: RunArgs,
        /// Machine-readable output on stdout.
        #[arg(long)]
        json: bool,
    },
    /// Run identity check suites.
    Check {
        file: PathBuf,
        /// Suite identifier or "all".
        #[arg(long, default_value = "all")]
        suite: String,
        #[command(flatten)]
        run: RunArgs,
        /// JSON array of check reports on stdout, diagnostics on stderr.
        #[arg(long)]
        json: bool,
    },
    /// Emit a builtin manifold file on stdout.
    Builtin {
        /// One of: flat-kahler, conformal-flat.
        name: String,
        /// Half-dimension (2 or 3).
        #[arg(long)]
        n: usize,
        /// Conformal factor expression (conformal-flat only).
        #[arg(long)]
        u: Option<String>,
    },
}

#[derive(Args)]
struct RunArgs {
    /// Number of sample points.
    #[arg(long, default_value_t = 16)]
    points: usize,
    /// Seed selecting the sample-point offset.
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Base tolerance for the identity checks.
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    /// Difference-tensor parameters, comma separated.
    #[arg(
        long,
        value_delimiter = ',',
        allow_hyphen_values = true,
        default_value = "0.3,-0.7,0.2,0.5"
    )]
    lambda: Vec<f64>,
}

impl RunArgs {
    fn to_config(&self) -> Result<RunConfig> {
        if self.points == 0 {
            bail!("--points must be at least 1");
        }
        if self.tol.is_nan() || self.tol <= 0.0 {
            bail!("--tol must be positive");
        }
        if self.lambda.len() != 4 {
            bail!("--lambda takes exactly four comma-separated values");
        }
        Ok(RunConfig {
            points: self.points,
            seed: self.seed,
            tol: self.tol,
            lambda: [self.lambda[0], self.lambda[1], self.lambda[2], self.lambda[3]],
        })
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            // a structurally invalid chart is a failed validation (exit 1);
            // unreadable or malformed input is a usage error (exit 2)
            if e.downcast_ref::<ChartError>()
                .is_some_and(|c| matches!(c, ChartError::Axiom(_) | ChartError::AsymmetricEntry { .. }))
            {
                ExitCode::from(1)
            } else {
                ExitCode::from(2)
            }
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.cmd {
        Cmd::Validate { file, run } => {
            let cfg = run.to_config()?;
            let chart = format::load_chart(&file)?;
            let reports = run_suite_checked(&chart, SuiteId::Axioms, &cfg)?;
            let mut out = String::new();
            for r in &reports {
                render_report_table(r, &mut out);
            }
            print!("{out}");
            let failed = reports.iter().any(|r| r.status == Status::Fail);
            Ok(if failed { ExitCode::from(1) } else { ExitCode::SUCCESS })
        }
        Cmd::Classify { file, run, json } => {
            let cfg = run.to_config()?;
            let chart = format::load_chart(&file)?;
            let points = chart.sample_points(cfg.points, cfg.seed);
            let mut rows = Vec::with_capacity(points.len());
            for (i, p) in points.iter().enumerate() {
                let rep = chart.classify(p, cfg.tol).map_err(anyhow::Error::new)?;
                rows.push(ClassRow::new(i, &rep));
            }
            if json {
                println!("{}", serde_json::to_string(&rows).expect("serializable"));
            } else {
                let mut out = String::new();
                render_class_table(&rows, cfg.tol, &mut out);
                print!("{out}");
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Check {
            file,
            suite,
            run,
            json,
        } => {
            let cfg = run.to_config()?;
            let chart = format::load_chart(&file)?;
            let reports = if suite == "all" {
                lab::run_all(&chart, &cfg).map_err(anyhow::Error::new)?
            } else {
                let id = SuiteId::parse(&suite).ok_or_else(|| {
                    let valid: Vec<&str> = SuiteId::ALL.iter().map(|s| s.as_str()).collect();
                    anyhow!(
                        "unknown suite `{suite}`; valid identifiers: all, {}",
                        valid.join(", ")
                    )
                })?;
                run_suite_checked(&chart, id, &cfg)?
            };
            if json {
                println!("{}", reports_to_json(&reports));
                for r in &reports {
                    if let Some(note) = &r.note {
                        eprintln!("{}: {note}", r.check_id);
                    }
                }
            } else {
                let mut out = String::new();
                for r in &reports {
                    render_report_table(r, &mut out);
                }
                print!("{out}");
            }
            let failed = reports.iter().any(|r| r.status == Status::Fail);
            Ok(if failed { ExitCode::from(1) } else { ExitCode::SUCCESS })
        }
        Cmd::Builtin { name, n, u } => {
            let chart = builtin_chart(&name, n, u.as_deref())?;
            println!("{}", ManifoldFile::from_chart(&chart).to_json_pretty());
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn run_suite_checked(chart: &Chart, id: SuiteId, cfg: &RunConfig) -> Result<Vec<norden_core::CheckReport>> {
    lab::run_suite(chart, id, cfg).map_err(anyhow::Error::new)
}

fn builtin_chart(name: &str, n: usize, u: Option<&str>) -> Result<Chart> {
    if !(2..=3).contains(&n) {
        bail!("--n must be 2 or 3");
    }
    match name {
        "flat-kahler" => Chart::flat_kahler(n).map_err(|e| anyhow!("{e}")),
        "conformal-flat" => {
            let u = u.ok_or_else(|| anyhow!("conformal-flat requires --u <expr>"))?;
            Chart::conformal_flat(n, u).map_err(|e| anyhow!("invalid u expression: {e}"))
        }
        other => bail!("unknown builtin `{other}`; valid names: flat-kahler, conformal-flat"),
    }
}
