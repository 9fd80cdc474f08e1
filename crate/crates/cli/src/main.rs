//! Command-line front end.
//!
//! Every subcommand is deterministic: all randomness is seeded and the seed
//! is echoed in the output, so identical invocations produce byte-identical
//! bytes. Exit status is 0 on success, 2 on invalid input, and 3 on an
//! internal invariant breach (which no input should be able to trigger).

use std::fmt;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde::Serialize;

use prehom::report::{cross_to_csv, scan_to_csv, to_sorted_json};
use prehom::{
    classify, enumerate_tree, equivalent, kac_decompose, minimize, orbit_rank, sparsity_pattern,
    CrossRow, Error, TensorTuple, DEFAULT_PRIME, DEFAULT_SEED, DEFAULT_TRIALS,
};

#[derive(Parser)]
#[command(
    name = "prehom",
    version,
    about = "Decide whether tensor product spaces C^{a_1} x ... x C^{a_n} are prehomogeneous",
    long_about = None
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TreeFormat {
    Dot,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ScanFormat {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Print the castling invariant N = sum(a_i^2) - prod(a_i) - (n-1)
    Invariant {
        /// Comma-separated dimensions, e.g. "3,35,92"
        tuple: String,
    },
    /// Decide prehomogeneity and report the rule, minimal tuple, and trace
    Classify {
        tuple: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Descend to the minimal element of the castling class
    Minimize {
        tuple: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Test whether two tuples are castling-equivalent
    Equiv {
        tuple1: String,
        tuple2: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Expand the castling tree below a tuple
    Tree {
        tuple: String,
        /// Dimension cutoff for tree nodes
        #[arg(long = "max-dim", value_parser = parse_biguint)]
        max_dim: BigUint,
        /// Depth cutoff (root has depth 0)
        #[arg(long = "max-depth", default_value_t = 3)]
        max_depth: usize,
        #[arg(long, value_enum, default_value_t = TreeFormat::Dot)]
        format: TreeFormat,
    },
    /// Block decomposition of the generic tensor of C^a x C^b x C^c
    Kac {
        a: u64,
        b: u64,
        c: u64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// List the (j,k,l) positions allowed to be non-zero instead
        #[arg(long)]
        sparsity: bool,
    },
    /// Verify prehomogeneity via finite-field orbit rank
    Oracle {
        tuple: String,
        #[arg(long, env = "PREHOM_PRIME", default_value_t = DEFAULT_PRIME)]
        prime: u64,
        #[arg(long, env = "PREHOM_TRIALS", default_value_t = DEFAULT_TRIALS)]
        trials: u32,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Classify every non-decreasing n-tuple with entries in [1, max]
    Scan {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        max: u64,
        /// Also run the rank oracle on every tuple and report both verdicts
        #[arg(long = "cross-check")]
        cross_check: bool,
        #[arg(long, value_enum, default_value_t = ScanFormat::Csv)]
        format: ScanFormat,
        #[arg(long, env = "PREHOM_PRIME", default_value_t = DEFAULT_PRIME)]
        prime: u64,
        #[arg(long, env = "PREHOM_TRIALS", default_value_t = DEFAULT_TRIALS)]
        trials: u32,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
}

fn parse_biguint(s: &str) -> Result<BigUint, String> {
    BigUint::from_str(s.trim()).map_err(|e| e.to_string())
}

enum CliError {
    Lib(Error),
    Input(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Lib(e) => write!(f, "{e}"),
            CliError::Input(msg) => write!(f, "{msg}"),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Lib(e) if e.is_internal() => 3,
            _ => 2,
        }
    }
}

fn parse_tuple(s: &str) -> Result<TensorTuple, CliError> {
    s.parse::<TensorTuple>().map_err(CliError::from)
}

fn require_positive(t: &TensorTuple, what: &str) -> Result<(), CliError> {
    if t.has_zero_entry() {
        return Err(CliError::Input(format!(
            "{what} requires positive entries; a zero-entry space is trivially prehomogeneous"
        )));
    }
    Ok(())
}

#[derive(Serialize)]
struct EquivReport {
    equivalent: bool,
    tuple1_minimal: TensorTuple,
    tuple2_minimal: TensorTuple,
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Invariant { tuple } => {
            let t = parse_tuple(&tuple)?;
            println!("{}", t.invariant_n());
        }
        Command::Classify { tuple, format } => {
            let t = parse_tuple(&tuple)?;
            let report = classify(&t)?;
            match format {
                Format::Text => println!("{}", report.summary()),
                Format::Json => println!("{}", json(&report)?),
            }
        }
        Command::Minimize { tuple, format } => {
            let t = parse_tuple(&tuple)?;
            require_positive(&t, "minimize")?;
            let trace = minimize(&t);
            match format {
                Format::Text => {
                    for step in &trace.steps {
                        println!(
                            "{} -> {} [j={}, q={}]",
                            step.source, step.result, step.replaced_index, step.complement_product
                        );
                    }
                    println!("terminal: {} [{} steps]", trace.terminal, trace.len());
                }
                Format::Json => println!("{}", json(&trace)?),
            }
        }
        Command::Equiv {
            tuple1,
            tuple2,
            format,
        } => {
            let t1 = parse_tuple(&tuple1)?;
            let t2 = parse_tuple(&tuple2)?;
            require_positive(&t1, "equiv")?;
            require_positive(&t2, "equiv")?;
            let report = EquivReport {
                equivalent: equivalent(&t1, &t2),
                tuple1_minimal: minimize(&t1).terminal,
                tuple2_minimal: minimize(&t2).terminal,
            };
            match format {
                Format::Text => println!("equivalent: {}", report.equivalent),
                Format::Json => println!("{}", json(&report)?),
            }
        }
        Command::Tree {
            tuple,
            max_dim,
            max_depth,
            format,
        } => {
            let t = parse_tuple(&tuple)?;
            require_positive(&t, "tree")?;
            let tree = enumerate_tree(&t, &max_dim, max_depth);
            match format {
                TreeFormat::Dot => print!("{}", tree.to_dot()),
                TreeFormat::Json => println!("{}", json(&tree)?),
            }
        }
        Command::Kac {
            a,
            b,
            c,
            format,
            sparsity,
        } => {
            let d = kac_decompose(a, b, c)?;
            if sparsity {
                let layout = d.layout();
                for (j, k, l) in sparsity_pattern(&d, &layout) {
                    println!("{j},{k},{l}");
                }
            } else {
                match format {
                    Format::Json => println!("{}", json(&d.report())?),
                    Format::Text => {
                        println!("a={} b={} c={}: n={} m={} i={}", d.a, d.b, d.c, d.n, d.m, d.i);
                        let terms: Vec<String> =
                            d.sequence.terms.iter().map(|t| t.to_string()).collect();
                        println!("sequence: {}", terms.join(","));
                        for (idx, block) in d.layout().blocks.iter().enumerate() {
                            println!(
                                "block {}: {} k={}..{} l={}..{}",
                                idx + 1,
                                block.kind,
                                block.k.lo,
                                block.k.hi,
                                block.l.lo,
                                block.l.hi
                            );
                        }
                    }
                }
            }
        }
        Command::Oracle {
            tuple,
            prime,
            trials,
            seed,
            format,
        } => {
            let t = parse_tuple(&tuple)?;
            let report = orbit_rank(&t, prime, trials, seed)?;
            match format {
                Format::Json => println!("{}", json(&report)?),
                Format::Text => {
                    println!(
                        "{}: {} (max_rank {} of dim_v {}, dim_g {}, isotropy estimate {}, prime {}, trials {}, seed {})",
                        report.tuple,
                        report.verdict,
                        report.max_rank,
                        report.dim_v,
                        report.dim_g,
                        report.isotropy_dim_estimate,
                        report.prime,
                        report.trials,
                        report.seed
                    );
                }
            }
        }
        Command::Scan {
            n,
            max,
            cross_check,
            format,
            prime,
            trials,
            seed,
        } => {
            if n < 3 {
                return Err(CliError::Input(format!(
                    "scan needs --n of at least 3, got {n}"
                )));
            }
            if max < 1 {
                return Err(CliError::Input("scan needs --max of at least 1".into()));
            }
            if cross_check {
                let rows: Vec<CrossRow> = prehom::scan(n, max)?
                    .into_iter()
                    .map(|c| {
                        let report = orbit_rank(&c.input, prime, trials, seed)?;
                        Ok(CrossRow {
                            tuple: c.input,
                            classifier_verdict: c.verdict,
                            oracle_verdict: report.verdict,
                            max_rank: report.max_rank,
                            dim_v: report.dim_v,
                        })
                    })
                    .collect::<Result<_, Error>>()?;
                match format {
                    ScanFormat::Csv => print!("{}", cross_to_csv(&rows)),
                    ScanFormat::Json => println!("{}", json(&rows)?),
                }
            } else {
                let rows = prehom::scan(n, max)?;
                match format {
                    ScanFormat::Csv => print!("{}", scan_to_csv(&rows)),
                    ScanFormat::Json => println!("{}", json(&rows)?),
                }
            }
        }
    }
    Ok(())
}

fn json<T: Serialize>(value: &T) -> Result<String, CliError> {
    to_sorted_json(value).map_err(|e| CliError::Input(format!("serialization failed: {e}")))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
