//! `traceform`: exact invariants and equivalence decisions for integral
//! trace forms of number fields.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;

use traceform_cli::{exit, parse, scan, verify};
use traceform_core::config::CoreConfig;
use traceform_core::decide::{decide_trace_equivalence, invariant_separation, Outcome};
use traceform_core::error::Error as CoreError;
use traceform_core::isometry::{is_isometric, IsometryOutcome};
use traceform_core::numfield::{field_from_poly, FundamentalConvention, NumberField};
use traceform_core::spectra::{compare_spectra, SpectrumComparison};
use traceform_core::traceform::{trace_gram, trace_zero_gram};

#[derive(Parser)]
#[command(
    name = "traceform",
    about = "Exact arithmetic for integral trace forms of number fields",
    version
)]
struct Cli {
    /// Seed for the randomized subroutines (equal-degree splitting,
    /// factorization, conjugacy search).
    #[arg(long, global = true, default_value_t = 0x5EED)]
    seed: u64,
    /// Effort multiplier for search/factorization budgets.
    #[arg(long, global = true, default_value_t = 1.0)]
    effort: f64,
    /// Override the per-degree discriminant bound used by `scan`.
    #[arg(long, global = true)]
    max_disc: Option<BigInt>,
    /// Fundamental-discriminant convention.
    #[arg(long, global = true, value_enum, default_value_t = FundamentalArg::QuadraticStyle)]
    fundamental: FundamentalArg,
    /// Worker threads for the parallel stages (0 = library default).
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    /// Cache file for per-field results.
    #[arg(long, global = true)]
    cache: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FundamentalArg {
    /// Squarefree, or 4m with m squarefree and m = 2,3 mod 4.
    QuadraticStyle,
    /// Squarefree only.
    StrictSquarefree,
}

impl From<FundamentalArg> for FundamentalConvention {
    fn from(a: FundamentalArg) -> Self {
        match a {
            FundamentalArg::QuadraticStyle => FundamentalConvention::QuadraticStyle,
            FundamentalArg::StrictSquarefree => FundamentalConvention::StrictSquarefree,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Field invariants: discriminant, signature, index, tameness, trace
    /// form determinants.
    Invariants {
        /// Polynomial: sparse expression (`x^3+2*x+11`) or coefficient list
        /// (`11,2,0,1`, constant first).
        #[arg(allow_hyphen_values = true)]
        poly: String,
    },
    /// Decide equivalence of the integral trace forms of two fields.
    Decide {
        #[arg(allow_hyphen_values = true)]
        poly1: String,
        #[arg(allow_hyphen_values = true)]
        poly2: String,
    },
    /// Integral equivalence of the trace-zero forms of two totally real
    /// fields.
    TzIsometric {
        #[arg(allow_hyphen_values = true)]
        poly1: String,
        #[arg(allow_hyphen_values = true)]
        poly2: String,
    },
    /// Batch scan of a field table for equal-discriminant groups.
    Scan {
        /// Table file: `label | c0,c1,...,cn | [expected_disc]` per line.
        table: PathBuf,
        /// Keep fields with non-fundamental discriminant.
        #[arg(long)]
        all_discs: bool,
        /// Drop fields that are not tame at every ramified prime.
        #[arg(long)]
        tame_only: bool,
    },
    /// Compare splitting-type spectra of two fields up to a bound.
    Spectra {
        #[arg(allow_hyphen_values = true)]
        poly1: String,
        #[arg(allow_hyphen_values = true)]
        poly2: String,
        #[arg(long, default_value_t = 1000)]
        bound: u64,
    },
    /// Check the built-in reference fixtures and print expected vs computed.
    VerifyPaper,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = CoreConfig {
        seed: cli.seed,
        ..CoreConfig::default()
    }
    .with_effort(cli.effort);
    if cli.jobs > 0 {
        traceform_core::par::configure_worker_threads(cli.jobs);
    }

    let code = match &cli.command {
        Command::Invariants { poly } => cmd_invariants(poly, &cfg),
        Command::Decide { poly1, poly2 } => cmd_decide(poly1, poly2, &cfg),
        Command::TzIsometric { poly1, poly2 } => cmd_tz_isometric(poly1, poly2, &cfg),
        Command::Scan { table, all_discs, tame_only } => cmd_scan(
            table,
            scan::ScanOptions {
                fundamental_only: !all_discs,
                convention: cli.fundamental.into(),
                tame_only: *tame_only,
                max_disc: cli.max_disc.clone(),
            },
            &cfg,
            cli.cache.as_deref(),
        ),
        Command::Spectra { poly1, poly2, bound } => cmd_spectra(poly1, poly2, *bound, &cfg),
        Command::VerifyPaper => cmd_verify(&cfg),
    };
    ExitCode::from(code as u8)
}

fn parse_field(input: &str, cfg: &CoreConfig) -> Result<NumberField, i32> {
    let coeffs = match parse::parse_poly(input) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("{e}");
            return Err(exit::PARSE);
        }
    };
    match field_from_poly(&coeffs, cfg) {
        Ok(k) => Ok(k),
        Err(CoreError::IrreducibilityUndetermined) => {
            eprintln!("irreducibility undetermined for {input}");
            Err(exit::IRREDUCIBILITY_UNDETERMINED)
        }
        Err(e) => {
            eprintln!("not a number field: {e}");
            Err(exit::PRECONDITION)
        }
    }
}

fn cmd_invariants(poly: &str, cfg: &CoreConfig) -> i32 {
    let k = match parse_field(poly, cfg) {
        Ok(k) => k,
        Err(code) => return code,
    };
    println!("polynomial      {}", k.min_poly());
    println!("degree          {}", k.degree());
    println!("disc            {} = {}", k.disc(), k.disc_factors());
    println!("signature       (r, s) = {:?}", k.signature());
    println!("index           {}", k.index());
    for p in k.ramified_primes() {
        println!("tameness at {p}: {:?}", k.tameness_at(&p));
    }
    let tg = trace_gram(&k);
    println!("trace form det  {}", tg.det());
    match trace_zero_gram(&k) {
        Ok(tz) => println!("trace-zero det  {}", tz.det()),
        Err(_) => println!("trace-zero det  n/a (degree 1)"),
    }
    exit::OK
}

fn cmd_decide(poly1: &str, poly2: &str, cfg: &CoreConfig) -> i32 {
    let (a, b) = match (parse_field(poly1, cfg), parse_field(poly2, cfg)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(c), _) | (_, Err(c)) => return c,
    };
    // Decisive invariant mismatches first.
    match invariant_separation(&a, &b, cfg) {
        Ok(Some(reason)) => {
            println!("verdict: not-equivalent");
            println!("separated by: {reason}");
            return exit::OK;
        }
        Ok(None) => {}
        Err(e) => {
            eprintln!("invariant comparison failed: {e}");
            return exit::UNDETERMINED;
        }
    }
    let v = decide_trace_equivalence(&a, &b, cfg);
    for step in &v.trace {
        println!(
            "step {:<34} [{}] {} -- {}",
            step.step,
            if step.passed { "ok" } else { "fail" },
            step.result,
            step.criterion
        );
    }
    match v.outcome {
        Outcome::Equivalent => {
            println!("verdict: equivalent");
            exit::OK
        }
        Outcome::NotEquivalent => {
            println!("verdict: not-equivalent");
            exit::OK
        }
        Outcome::SameSpinorGenus | Outcome::HypothesesNotMet | Outcome::Undetermined => {
            // Definite forms can still be decided outright by isometry.
            if a.is_totally_real() && b.is_totally_real() {
                let ga = trace_gram(&a);
                let gb = trace_gram(&b);
                match is_isometric(&ga, &gb, cfg) {
                    Ok(IsometryOutcome::Isometric { .. }) => {
                        println!("full trace forms isometric (witness verified)");
                        println!("verdict: equivalent");
                        return exit::OK;
                    }
                    Ok(IsometryOutcome::NotIsometric { separator }) => {
                        println!("full trace forms not isometric ({separator})");
                        if v.outcome == Outcome::SameSpinorGenus {
                            println!("note: forms lie in the same spinor genus");
                        }
                        println!("verdict: not-equivalent");
                        return exit::OK;
                    }
                    Err(e) => {
                        println!("isometry unavailable: {e}");
                    }
                }
            }
            println!("verdict: {}", v.outcome);
            exit::UNDETERMINED
        }
    }
}

fn cmd_tz_isometric(poly1: &str, poly2: &str, cfg: &CoreConfig) -> i32 {
    let (a, b) = match (parse_field(poly1, cfg), parse_field(poly2, cfg)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(c), _) | (_, Err(c)) => return c,
    };
    if !a.is_totally_real() || !b.is_totally_real() {
        eprintln!(
            "trace-zero isometry needs totally real fields (definite forms); \
             use `decide` for the indefinite pipeline"
        );
        return exit::PRECONDITION;
    }
    let (ta, tb) = match (trace_zero_gram(&a), trace_zero_gram(&b)) {
        (Ok(x), Ok(y)) => (x, y),
        _ => {
            eprintln!("degree must be at least 2");
            return exit::PRECONDITION;
        }
    };
    match is_isometric(&ta, &tb, cfg) {
        Ok(IsometryOutcome::Isometric { witness }) => {
            println!("verdict: isometric");
            println!("witness U with U^t G1 U = G2:");
            print!("{witness}");
            exit::OK
        }
        Ok(IsometryOutcome::NotIsometric { separator }) => {
            println!("verdict: not-isometric");
            println!("separated by: {separator}");
            exit::OK
        }
        Err(e) => {
            eprintln!("undetermined: {e}");
            exit::UNDETERMINED
        }
    }
}

fn cmd_scan(
    table: &PathBuf,
    opts: scan::ScanOptions,
    cfg: &CoreConfig,
    cache: Option<&std::path::Path>,
) -> i32 {
    let text = match std::fs::read_to_string(table) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("cannot read {}: {e}", table.display());
            return exit::PARSE;
        }
    };
    let report = scan::run_scan(&text, &opts, cfg, cache);
    print!("{}", report.render());
    exit::OK
}

fn cmd_spectra(poly1: &str, poly2: &str, bound: u64, cfg: &CoreConfig) -> i32 {
    let (a, b) = match (parse_field(poly1, cfg), parse_field(poly2, cfg)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(c), _) | (_, Err(c)) => return c,
    };
    match compare_spectra(&a, &b, bound) {
        Ok(SpectrumComparison::Consistent) => {
            println!("spectra consistent at every included prime <= {bound}");
            exit::OK
        }
        Ok(SpectrumComparison::DistinguishedAt { p, left, right }) => {
            println!("distinguished-at {p}");
            println!("  first:  {left}");
            println!("  second: {right}");
            exit::OK
        }
        Err(e) => {
            eprintln!("cannot compare: {e}");
            exit::PRECONDITION
        }
    }
}

fn cmd_verify(cfg: &CoreConfig) -> i32 {
    let (checks, all) = verify::run_all(cfg);
    print!("{}", verify::render(&checks));
    let passed = checks.iter().filter(|c| c.pass).count();
    println!("{passed}/{} checks passed", checks.len());
    if all {
        exit::OK
    } else {
        exit::FIXTURE_MISMATCH
    }
}
