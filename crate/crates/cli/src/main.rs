use std::path::{Path, PathBuf};
use std::process::ExitCode;

use bgg_bundles::exactlin::{Field, DEFAULT_PRIME};
use bgg_bundles::pipeline::{
    anchor_check, cas_script, construct, report_cohomology, verify, BundleReport,
    ConstructionParams, PipelineError,
};
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "bgg-bundles",
    version,
    about = "Simple vector bundles on projective space from exterior modules"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build and verify a simple bundle of rank R and homological dimension L on P^N.
    Construct {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        l: usize,
        #[arg(long)]
        r: usize,
        /// `fp:P` for a prime P < 2^31, or `qq`.
        #[arg(long, default_value_t = Field::Fp(DEFAULT_PRIME))]
        field: Field,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Take L from the explicit block tensor instead of sampling it.
        #[arg(long)]
        explicit_anchor: bool,
        /// Prime for the exhaustive scan of a rebuilt instance; 0 skips it.
        #[arg(long)]
        exhaustive_field: Option<u32>,
        /// Random points checked over the working field.
        #[arg(long)]
        samples: Option<u64>,
        /// Extra twists below the structural range in the cohomology window.
        #[arg(long)]
        window_margin: Option<i64>,
        /// Use this multiplicity p instead of the smallest admissible one.
        #[arg(long)]
        multiplicity: Option<usize>,
        #[arg(long)]
        retries: Option<usize>,
        /// Record wall-clock timings (makes the report non-reproducible).
        #[arg(long)]
        timings: bool,
        /// Report path; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        emit_cas: Option<PathBuf>,
        #[arg(long)]
        emit_table: Option<PathBuf>,
    },
    /// Re-run every check of a report.
    Verify {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Check anchoring subspaces of k^U ⊗ k^W of dimension D.
    Anchor {
        #[arg(long)]
        u: usize,
        #[arg(long)]
        w: usize,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = Field::Fp(DEFAULT_PRIME))]
        field: Field,
    },
    /// Cohomology table of a report's bundle on a twist window.
    Cohomology {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, allow_negative_numbers = true)]
        t_lo: Option<i64>,
        #[arg(long, allow_negative_numbers = true)]
        t_hi: Option<i64>,
        #[arg(long)]
        json: bool,
    },
}

enum Failure {
    Pipeline(PipelineError),
    Io(String),
    Verification(String),
}

impl From<PipelineError> for Failure {
    fn from(e: PipelineError) -> Self {
        Failure::Pipeline(e)
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    std::fs::write(path, contents).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn read_report(path: &Path) -> Result<BundleReport, Failure> {
    let s = std::fs::read_to_string(path)
        .map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    Ok(BundleReport::from_json(&s)?)
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Construct {
            n,
            l,
            r,
            field,
            seed,
            explicit_anchor,
            exhaustive_field,
            samples,
            window_margin,
            multiplicity,
            retries,
            timings,
            out,
            emit_cas,
            emit_table,
        } => {
            let mut params = ConstructionParams::new(n, l, r);
            params.field = field;
            params.seed = seed;
            params.explicit_anchor = explicit_anchor;
            params.multiplicity = multiplicity;
            if let Some(q) = exhaustive_field {
                params.policy.exhaustive_field = (q != 0).then_some(q);
            }
            if let Some(k) = samples {
                params.policy.random_samples = k;
            }
            if let Some(m) = window_margin {
                params.policy.window_margin = Some(m);
            }
            if let Some(b) = retries {
                params.policy.retry_budget = b;
            }
            params.policy.record_timings = timings;
            let report = construct(&params)?;
            let v = &report.verification;
            eprintln!(
                "p = {}, dim L = {}, terms {:?}, rank {}, hom dim {}, hd {} (attempt {})",
                report.multiplicity,
                report.l_dim,
                report
                    .resolution
                    .terms
                    .iter()
                    .map(|t| t.rank)
                    .collect::<Vec<_>>(),
                v.rank,
                v.hom_dim,
                v.hd.hd,
                report.attempt + 1
            );
            match &out {
                Some(path) => write_file(path, &report.to_json())?,
                None => println!("{}", report.to_json()),
            }
            if let Some(path) = &emit_cas {
                write_file(path, &cas_script(&report))?;
            }
            if let Some(path) = &emit_table {
                write_file(path, &report.table_text())?;
            }
            Ok(())
        }
        Command::Verify { input } => {
            let report = read_report(&input)?;
            let verdict = verify(&report)?;
            for c in &verdict.checks {
                println!(
                    "{} {}: {}",
                    if c.passed { "PASS" } else { "FAIL" },
                    c.name,
                    c.detail
                );
            }
            if verdict.passed() {
                Ok(())
            } else {
                let names: Vec<&str> = verdict.failures().map(|c| c.name.as_str()).collect();
                Err(Failure::Verification(format!(
                    "failed checks: {}",
                    names.join(", ")
                )))
            }
        }
        Command::Anchor {
            u,
            w,
            d,
            seed,
            field,
        } => {
            let summary = anchor_check(field, u, w, d, seed)?;
            println!(
                "{}",
                serde_json::to_string_pretty(&summary).expect("summaries serialize")
            );
            if summary.anchoring() {
                Ok(())
            } else {
                Err(Failure::Verification(summary.sample_error.unwrap_or_else(
                    || "sampled subspace does not anchor".into(),
                )))
            }
        }
        Command::Cohomology {
            input,
            t_lo,
            t_hi,
            json,
        } => {
            let report = read_report(&input)?;
            let hd = &report.verification.hd;
            let table =
                report_cohomology(&report, t_lo.unwrap_or(hd.t_lo), t_hi.unwrap_or(hd.t_hi))?;
            if json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&table).expect("tables serialize")
                );
            } else {
                print!("{}", table.to_text());
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Pipeline(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Verification(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
