mod render;

use std::io::{Read, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rayon::prelude::*;

use gorecone_core::caselaw::Outcome;
use gorecone_core::pipeline::{self, AnalyzeOptions, SuiteRow};
use gorecone_core::poly::MonomialOrder;
use gorecone_core::semigroup::CurveSpec;
use gorecone_core::toricgen::CaseLabel;
use gorecone_core::Error;

const EXIT_MISMATCH: u8 = 1;
const EXIT_INVALID: u8 = 2;
const EXIT_BOUND: u8 = 3;

#[derive(Parser)]
#[command(name = "gorecone", version, about = "Tangent cones of Gorenstein monomial curves in A^4")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze the curve with multiplicities n1 < n2 < n3 < n4.
    Analyze {
        #[arg(num_args = 4, value_names = ["N1", "N2", "N3", "N4"], required = true)]
        n: Vec<u64>,
        /// Local degree order, e.g. x4,x2,x3,x1.
        #[arg(long)]
        order: Option<MonomialOrder>,
        /// Degree bound for graded computations.
        #[arg(long)]
        bound: Option<u32>,
        #[arg(long)]
        json: bool,
        /// Include per-stage wall times.
        #[arg(long)]
        timings: bool,
    },
    /// Print a seeded corpus of Gorenstein non-complete-intersection curves.
    GenCorpus {
        #[arg(long)]
        seed: u64,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        count: u64,
        #[arg(long)]
        case: Option<CaseLabel>,
    },
    /// Analyze every curve of a corpus and tabulate the outcomes.
    RunSuite {
        /// Corpus file; standard input when absent.
        #[arg(long)]
        corpus: Option<std::path::PathBuf>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long)]
        json: bool,
    },
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Spec(_) => EXIT_INVALID,
        Error::SearchBoundExceeded(_)
        | Error::CompletionBudgetExceeded(_)
        | Error::ReductionBudgetExceeded(_)
        | Error::DegreeBoundTooLarge(_) => EXIT_BOUND,
        _ => EXIT_MISMATCH,
    }
}

/// Writes to stdout, tolerating a closed pipe.
fn emit(s: &str) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(s.as_bytes()).and_then(|_| out.flush());
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Analyze { n, order, bound, json, timings } => analyze(&n, order, bound, json, timings),
        Command::GenCorpus { seed, count, case } => gen_corpus(seed, count as usize, case),
        Command::RunSuite { corpus, jobs, json } => run_suite(corpus, jobs, json),
    }
}

fn analyze(n: &[u64], order: Option<MonomialOrder>, bound: Option<u32>, json: bool, timings: bool) -> ExitCode {
    let spec = match CurveSpec::from_slice(n) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {}", Error::from(e));
            return ExitCode::from(EXIT_INVALID);
        }
    };
    if let Some(o) = &order {
        if !o.is_local() {
            eprintln!("error: --order must be a local order");
            return ExitCode::from(EXIT_INVALID);
        }
    }
    let opts = AnalyzeOptions { order, bound, timings, ..AnalyzeOptions::default() };
    let (report, _) = match pipeline::analyze(&spec, &opts) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(exit_code(&e));
        }
    };
    if json {
        emit(&(serde_json::to_string_pretty(&report).expect("report serializes") + "\n"));
    } else {
        emit(&render::report(&report));
    }
    if report.prediction.as_ref().is_some_and(|p| p.cm_uncovered) {
        eprintln!("warning: the Cohen-Macaulay criteria do not cover this curve");
    }
    if report.outcome() == Some(Outcome::Mismatch) {
        return ExitCode::from(EXIT_MISMATCH);
    }
    ExitCode::SUCCESS
}

fn gen_corpus(seed: u64, count: usize, case: Option<CaseLabel>) -> ExitCode {
    let (entries, log) = match pipeline::gen_corpus(seed, count, case) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(exit_code(&e));
        }
    };
    let mut out = format!("# seed {seed}, {} curves\n", entries.len());
    for e in &entries {
        out.push_str(&e.to_line());
        out.push('\n');
    }
    emit(&out);
    let rejected: usize = log.rejected.values().sum();
    eprintln!("drew {} tuples: {} rejected, {} filtered by case", log.drawn, rejected, log.filtered);
    for (reason, k) in &log.rejected {
        eprintln!("  {reason}: {k}");
    }
    if entries.len() < count {
        eprintln!("warning: only {} of {count} curves found", entries.len());
    }
    ExitCode::SUCCESS
}

fn run_suite(corpus: Option<std::path::PathBuf>, jobs: usize, json: bool) -> ExitCode {
    let text = match &corpus {
        Some(path) => std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display())),
        None => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).map(|_| s).map_err(|e| e.to_string())
        }
    };
    let specs = match text.and_then(|t| pipeline::parse_corpus(&t)) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_INVALID);
        }
    };
    if specs.is_empty() {
        eprintln!("error: the corpus is empty");
        return ExitCode::from(EXIT_INVALID);
    }
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_INVALID);
        }
    };
    let opts = AnalyzeOptions::default();
    let rows: Vec<SuiteRow> = pool.install(|| {
        specs
            .par_iter()
            .map(|n| match CurveSpec::from_slice(n) {
                Ok(spec) => SuiteRow::from_result(n, &pipeline::analyze(&spec, &opts)),
                Err(e) => SuiteRow::from_result(n, &Err(e.into())),
            })
            .collect()
    });
    if json {
        let doc = serde_json::json!({ "rows": rows, "coverage": pipeline::coverage(&rows) });
        emit(&(serde_json::to_string_pretty(&doc).expect("summary serializes") + "\n"));
    } else {
        emit(&render::suite(&rows));
    }
    if rows.iter().any(|r| r.outcome == Some(Outcome::Mismatch)) {
        ExitCode::from(EXIT_MISMATCH)
    } else if rows.iter().any(|r| r.bound_exceeded) {
        ExitCode::from(EXIT_BOUND)
    } else {
        ExitCode::SUCCESS
    }
}
