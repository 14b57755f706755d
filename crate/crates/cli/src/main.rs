//! Command line front end: exact residue part counts, estimate ratio
//! tables, certified residue orderings, ordering atlases, and the named
//! verification suites.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error,
//! 3 capacity or precision cap exceeded.

mod cache;
mod fmt;

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use kindiv_core::asymptotics::{d_hat, q_ratio};
use kindiv_core::bias::{euler_phi, order_count_at, ordering_at, BiasKey};
use kindiv_core::error::Error as CoreError;
use kindiv_core::exact::{d_exact, ExactQuery};
use kindiv_core::interval::PRECISION_CAP;
use kindiv_core::verify::{run_suite, Suite, SuiteParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
    Plain,
}

#[derive(Parser)]
#[command(
    name = "kindiv",
    version,
    about = "Statistics of parts in partitions with no part divisible by k, by residue class"
)]
struct Cli {
    /// Working precision in bits for all interval evaluation
    /// (64..=1024; env fallback KINDIV_PRECISION_BITS, flag wins).
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(64..=1024))]
    precision_bits: Option<u32>,

    /// Capacity limit for exact tables.
    #[arg(long, global = true, default_value_t = 1_000_000)]
    n_cap: usize,

    /// Worker threads for scans (1 = fully sequential).
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..=1024))]
    threads: u32,

    /// Skip the on-disk table cache.
    #[arg(long, global = true)]
    no_cache: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact number of parts congruent to r mod t among all k-indivisible
    /// partitions of n.
    Exact {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        t: u32,
        #[arg(long)]
        r: u32,
        #[arg(long)]
        n: usize,
    },
    /// Table of exact counts, estimates, and their ratio over a list of n.
    Qtable {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        t: u32,
        #[arg(long)]
        r: u32,
        /// Comma-separated list of n values.
        #[arg(long, value_delimiter = ',', required = true)]
        n_list: Vec<usize>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Certified most-common-first residue ordering for one (k, t).
    Ordering {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        t: u32,
    },
    /// All distinct orderings for a modulus, grouped with witnesses.
    Orderings {
        #[arg(long)]
        t: u32,
        /// Override the scan cap on k.
        #[arg(long)]
        k_cap: Option<u32>,
    },
    /// Ordering counts and totient ratios over a range of moduli.
    Ocount {
        #[arg(long)]
        t_min: u32,
        #[arg(long)]
        t_max: u32,
        #[arg(long)]
        k_cap: Option<u32>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Run a named verification suite and print its JSON report.
    Verify {
        #[arg(long)]
        suite: String,
        #[arg(long)]
        t: Option<u32>,
        #[arg(long)]
        t_min: Option<u32>,
        #[arg(long)]
        t_max: Option<u32>,
        #[arg(long)]
        n_max: Option<usize>,
        #[arg(long)]
        k_cap: Option<u32>,
        /// Restrict a multi-item suite to one item.
        #[arg(long)]
        item: Option<u32>,
    },
}

fn exit_code_for(err: &CoreError) -> u8 {
    match err {
        CoreError::CapacityExceeded { .. }
        | CoreError::PrecisionGuard { .. }
        | CoreError::BernoulliGuard { .. }
        | CoreError::EnumerationGuard { .. }
        | CoreError::ToleranceUnachievable { .. }
        | CoreError::TruncationBudget { .. } => 3,
        CoreError::Unresolved { .. } => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = if cli.threads > 1 {
        cli.threads as usize
    } else {
        1
    };
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global();
    match run(&cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}

fn resolve_precision(flag: Option<u32>) -> Result<u32, CoreError> {
    if let Some(p) = flag {
        return Ok(p);
    }
    match std::env::var("KINDIV_PRECISION_BITS") {
        Ok(raw) => {
            let p: u32 = raw.parse().map_err(|_| {
                CoreError::InvalidQuery(format!("KINDIV_PRECISION_BITS={raw} is not an integer"))
            })?;
            if !(64..=1024).contains(&p) {
                return Err(CoreError::InvalidQuery(format!(
                    "KINDIV_PRECISION_BITS={p} outside 64..=1024"
                )));
            }
            Ok(p)
        }
        Err(_) => Ok(192),
    }
}

fn run(cli: &Cli) -> Result<ExitCode, CoreError> {
    let prec = resolve_precision(cli.precision_bits)?;
    match &cli.command {
        Command::Exact { k, t, r, n } => {
            let query = ExactQuery::new(*k, *t, *r, *n)?;
            if *n > cli.n_cap {
                return Err(CoreError::CapacityExceeded {
                    n_max: *n,
                    cap: cli.n_cap,
                });
            }
            let table = cache::load_or_build(*k, *n, cli.n_cap, !cli.no_cache)?;
            println!("{}", d_exact(&query, &table)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Qtable {
            k,
            t,
            r,
            n_list,
            format,
        } => {
            let key = BiasKey::new(*k, *t)?;
            let n_max = *n_list.iter().max().expect("n-list nonempty");
            if n_max > cli.n_cap {
                return Err(CoreError::CapacityExceeded {
                    n_max,
                    cap: cli.n_cap,
                });
            }
            let table = cache::load_or_build(*k, n_max, cli.n_cap, !cli.no_cache)?;
            let row = |n: &usize| -> Result<(usize, String, String, String), CoreError> {
                let query = ExactQuery::new(*k, *t, *r, *n)?;
                let exact = d_exact(&query, &table)?;
                let est = d_hat(&key, *r, *n, prec)?;
                let ratio = q_ratio(&key, *r, *n, &table, prec)?;
                Ok((
                    *n,
                    exact.to_string(),
                    fmt::sci_sig(&est.value.midpoint().to_rational(), 6),
                    ratio.midpoint().to_decimal_string(5),
                ))
            };
            let rows: Vec<_> = if cli.threads > 1 {
                use rayon::prelude::*;
                n_list.par_iter().map(row).collect::<Result<_, _>>()?
            } else {
                n_list.iter().map(row).collect::<Result<_, _>>()?
            };
            match format {
                Format::Json => {
                    let objs: Vec<_> = rows
                        .iter()
                        .map(|(n, exact, est, q)| {
                            serde_json::json!({"n": n, "exact": exact, "estimate": est, "Q": q})
                        })
                        .collect();
                    println!("{}", serde_json::to_string_pretty(&objs).unwrap());
                }
                _ => {
                    println!("n,exact,estimate,Q");
                    for (n, exact, est, q) in rows {
                        println!("{n},{exact},{est},{q}");
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Ordering { k, t } => {
            let key = BiasKey::new(*k, *t)?;
            let ord = ordering_at(&key, prec, PRECISION_CAP)?;
            if !ord.certified {
                return Err(CoreError::Unresolved {
                    k: *k,
                    t: *t,
                    pairs: ord.unresolved_pairs,
                });
            }
            let words: Vec<String> = ord.sequence.iter().map(ToString::to_string).collect();
            println!("{}", words.join(" "));
            Ok(ExitCode::SUCCESS)
        }
        Command::Orderings { t, k_cap } => {
            let atlas = order_count_at(*t, *k_cap, prec, PRECISION_CAP)?;
            // Group lines ordered by smallest witness; the witness-free
            // guaranteed natural ordering prints last.
            let mut rows: Vec<(&Vec<u32>, &Vec<u32>)> = atlas.entries.iter().collect();
            rows.sort_by_key(|(seq, ks)| {
                (
                    ks.is_empty(),
                    ks.first().copied().unwrap_or(u32::MAX),
                    (*seq).clone(),
                )
            });
            for (seq, ks) in rows {
                let seq_s: Vec<String> = seq.iter().map(ToString::to_string).collect();
                let k_s = if ks.is_empty() {
                    "(all larger coprime k)".to_string()
                } else {
                    ks.iter()
                        .map(ToString::to_string)
                        .collect::<Vec<_>>()
                        .join(",")
                };
                println!("k = {k_s}: {}", seq_s.join(" "));
            }
            eprintln!(
                "{} distinct orderings (k scanned up to {})",
                atlas.count, atlas.k_max_searched
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Ocount {
            t_min,
            t_max,
            k_cap,
            format,
        } => {
            if t_min > t_max || *t_min < 2 {
                return Err(CoreError::InvalidQuery(format!(
                    "need 2 <= t_min <= t_max, got {t_min}..{t_max}"
                )));
            }
            let ts: Vec<u32> = (*t_min..=*t_max).collect();
            let row = |t: &u32| -> Result<(u32, usize, u32), CoreError> {
                let atlas = order_count_at(*t, *k_cap, prec, PRECISION_CAP)?;
                Ok((*t, atlas.count, euler_phi(*t)))
            };
            let rows: Vec<_> = if cli.threads > 1 {
                use rayon::prelude::*;
                ts.par_iter().map(row).collect::<Result<_, _>>()?
            } else {
                ts.iter().map(row).collect::<Result<_, _>>()?
            };
            match format {
                Format::Json => {
                    let objs: Vec<_> = rows
                        .iter()
                        .map(|(t, count, phi)| {
                            serde_json::json!({
                                "t": t, "orderings": count, "phi": phi,
                                "ratio": fmt::ratio6(*count as u64, u64::from(*phi)),
                            })
                        })
                        .collect();
                    println!("{}", serde_json::to_string_pretty(&objs).unwrap());
                }
                _ => {
                    println!("t,orderings,phi,ratio");
                    for (t, count, phi) in rows {
                        println!(
                            "{t},{count},{phi},{}",
                            fmt::ratio6(count as u64, u64::from(phi))
                        );
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify {
            suite,
            t,
            t_min,
            t_max,
            n_max,
            k_cap,
            item,
        } => {
            let suite: Suite = suite.parse()?;
            let params = SuiteParams {
                t: *t,
                t_min: *t_min,
                t_max: *t_max,
                n_max: *n_max,
                k_cap: *k_cap,
                item: *item,
                precision_bits: Some(prec),
            };
            let report = run_suite(suite, &params)?;
            println!("{}", report.to_json());
            if report.passed() {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(1))
            }
        }
    }
}
