//! Command-line front end: ring loading, expression evaluation, and one
//! subcommand per analysis.
//!
//! Exit codes: 0 for success and ok verdicts, 1 for mismatch/stuck/violation
//! verdicts, 2 for usage and definition errors.

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use freefusion::catalog;
use freefusion::cocenter;
use freefusion::expr;
use freefusion::grading;
use freefusion::normality::{self, ClosureOptions, Verdict};
use freefusion::ring::{ConsistencyReport, LetterRange, RingHandle};

#[derive(Parser)]
#[command(
    name = "freefusion",
    about = "Exact arithmetic in fusion semirings of free quantum groups",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    format: Format,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Json,
}

#[derive(Args)]
struct RingArg {
    /// Ring spec: `au`, `bu`, `aaut`, `refl:<s|inf>`, `group:<file>`,
    /// `table:<file>`, `freeprod:<spec,...>`, or a ring definition file.
    #[arg(long)]
    ring: String,
    /// Letter id range `lo:hi` for infinite alphabets.
    #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
    letter_bound: Option<LetterRange>,
}

fn parse_range(s: &str) -> Result<LetterRange, String> {
    let (lo, hi) = s
        .split_once(':')
        .ok_or_else(|| "expected `lo:hi`".to_owned())?;
    let lo: i64 = lo.trim().parse().map_err(|e| format!("bad lower bound: {e}"))?;
    let hi: i64 = hi.trim().parse().map_err(|e| format!("bad upper bound: {e}"))?;
    if lo > hi {
        return Err("empty range".into());
    }
    Ok(lo..=hi)
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate an expression and print its decomposition into simples.
    Decompose {
        #[command(flatten)]
        ring: RingArg,
        /// Expression, e.g. `[a] * [a]~ + 2 []`.
        expr: String,
    },
    /// List the simples up to a length bound.
    Simples {
        #[command(flatten)]
        ring: RingArg,
        #[arg(long)]
        max_len: usize,
    },
    /// Compute the universal grading group and the degree of each simple.
    ChainGroup {
        #[command(flatten)]
        ring: RingArg,
        /// Fall back to the bounded union-find oracle at this length.
        #[arg(long)]
        oracle_len: Option<usize>,
        /// Length bound for the degree listing.
        #[arg(long, default_value_t = 3)]
        max_len: usize,
    },
    /// The cocenter slice: simples of identity degree.
    Cocenter {
        #[command(flatten)]
        ring: RingArg,
        #[arg(long)]
        max_len: usize,
        /// Cross-check the degree kernel against both majorization
        /// characterizations.
        #[arg(long)]
        crosscheck: bool,
        #[arg(long, default_value_t = 2)]
        max_factors: usize,
    },
    /// Saturate the ad-invariant closure of a generator set.
    Adclosure {
        #[command(flatten)]
        ring: RingArg,
        /// Generators as word literals, e.g. `[a a*] [a* a]`.
        #[arg(long)]
        gens: String,
        #[arg(long)]
        max_len: usize,
        /// Use internal parallelism in the saturation loop.
        #[arg(long)]
        parallel: bool,
    },
    /// Bounded-scale simplicity check of the cocenter.
    Simplicity {
        #[command(flatten)]
        ring: RingArg,
        #[arg(long)]
        inner: usize,
        #[arg(long)]
        outer: usize,
        #[arg(long)]
        parallel: bool,
    },
    /// Validate a ring definition and report the first violated invariant.
    Validate {
        #[command(flatten)]
        ring: RingArg,
    },
    /// Compare the two constructions of a free product of free-datum rings.
    FreeprodCheck {
        /// Comma-separated datum specs, e.g. `bu,bu` or `au,refl:2`.
        #[arg(long)]
        rings: String,
        #[arg(long)]
        max_len: usize,
    },
}

enum Outcome {
    Ok,
    Failed,
}

fn emit<T: Serialize>(format: Format, value: &T, human: impl FnOnce()) {
    match format {
        Format::Json => {
            println!("{}", serde_json::to_string_pretty(value).expect("reports serialize"))
        }
        Format::Human => human(),
    }
}

fn load_ring(arg: &RingArg) -> Result<RingHandle, catalog::CatalogError> {
    catalog::ring_from_spec(&arg.ring)
}

fn run(cli: Cli) -> Result<Outcome, Box<dyn std::error::Error>> {
    let format = cli.format;
    match cli.command {
        Command::Decompose { ring, expr: source } => {
            let h = load_ring(&ring)?;
            let parsed = expr::parse(&h, &source)?;
            let value = expr::eval(&parsed, &h)?;
            emit(format, &value, || println!("{value}"));
            Ok(Outcome::Ok)
        }
        Command::Simples { ring, max_len } => {
            let h = load_ring(&ring)?;
            let space = h.letter_space();
            let simples: Vec<String> = h
                .enumerate_simples(max_len, ring.letter_bound.as_ref())?
                .iter()
                .map(|s| space.format_simple(&h, s))
                .collect();
            emit(format, &simples, || {
                for s in &simples {
                    println!("{s}");
                }
            });
            Ok(Outcome::Ok)
        }
        Command::ChainGroup { ring, oracle_len, max_len } => {
            let h = load_ring(&ring)?;
            let range = ring.letter_bound.as_ref();
            let group = match oracle_len {
                Some(len) => grading::chain_group_or_oracle(&h, len, range)?,
                None => grading::chain_group_of(&h)?,
            };
            // degree listings cannot exceed an oracle's own bound
            let listing_len = match (&group, oracle_len) {
                (grading::ChainGroup::Oracle(_), Some(len)) => max_len.min(len),
                _ => max_len,
            };
            let report = grading::chain_group_report(&h, &group, listing_len, range)?;
            emit(format, &report, || {
                println!("chain group: {}", report.kind);
                if !report.exact {
                    println!("  (bounded oracle; classes are a quotient from below)");
                }
                for (g, o) in report.generators.iter().zip(
                    report.orders.iter().chain(std::iter::repeat(&String::new())),
                ) {
                    if o.is_empty() || o == "inf" {
                        println!("  generator {g}");
                    } else {
                        println!("  generator {g} of order {o}");
                    }
                }
                for (s, d) in &report.degrees {
                    println!("  deg {s} = {d}");
                }
            });
            Ok(Outcome::Ok)
        }
        Command::Cocenter { ring, max_len, crosscheck, max_factors } => {
            let h = load_ring(&ring)?;
            let range = ring.letter_bound.as_ref();
            if crosscheck {
                let report = cocenter::crosscheck_alt_descr(&h, max_len, max_factors, range)?;
                emit(format, &report, || {
                    let verdict = if !report.ok {
                        "MISMATCH"
                    } else if report.fully_equal {
                        "ok"
                    } else {
                        "ok (with bound-sensitive gaps)"
                    };
                    println!(
                        "crosscheck at max_len {} max_factors {}: {}",
                        report.max_len, report.max_factors, verdict
                    );
                    println!("  degree kernel size: {}", report.kernel_size);
                    for w in &report.witnesses {
                        println!(
                            "  {} kernel={} a={} b={}{}",
                            w.simple,
                            w.in_degree_kernel,
                            w.in_char_a,
                            w.in_char_b,
                            if w.bound_sensitive { " (bound-sensitive)" } else { "" }
                        );
                    }
                });
                return Ok(if report.ok { Outcome::Ok } else { Outcome::Failed });
            }
            let slice = cocenter::cocenter_simples(&h, max_len, range)?;
            let report = cocenter::slice_report(&h, &slice, None);
            emit(format, &report, || {
                println!("cocenter simples up to length {}:", report.max_len);
                for e in &report.simples {
                    println!("  {}", e.simple);
                }
            });
            Ok(Outcome::Ok)
        }
        Command::Adclosure { ring, gens, max_len, parallel } => {
            let h = load_ring(&ring)?;
            let generators = expr::parse_words(&h, &gens)?;
            let opts = ClosureOptions::new(max_len)
                .with_letter_range(ring.letter_bound.clone())
                .with_parallel(parallel);
            let report = normality::ad_closure(&h, &generators, &opts)?;
            let space = h.letter_space();
            #[derive(Serialize)]
            struct AdClosureReport {
                max_len: usize,
                rounds: usize,
                hit_bound: bool,
                size: usize,
                members: Vec<String>,
            }
            let out = AdClosureReport {
                max_len,
                rounds: report.rounds,
                hit_bound: report.hit_bound,
                size: report.result.len(),
                members: report
                    .result
                    .simples
                    .iter()
                    .map(|s| space.format_simple(&h, s))
                    .collect(),
            };
            emit(format, &out, || {
                println!(
                    "ad-closure: {} members in {} rounds{}",
                    out.size,
                    out.rounds,
                    if out.hit_bound { " (hit length bound)" } else { "" }
                );
                for m in &out.members {
                    println!("  {m}");
                }
            });
            Ok(Outcome::Ok)
        }
        Command::Simplicity { ring, inner, outer, parallel } => {
            let h = load_ring(&ring)?;
            let opts = ClosureOptions::new(outer)
                .with_letter_range(ring.letter_bound.clone())
                .with_parallel(parallel);
            let report = normality::bounded_simplicity_check(&h, inner, outer, &opts)?;
            let ok = report.all_saturate();
            emit(format, &report, || {
                println!(
                    "simplicity check (inner {}, outer {}): cocenter slice has {} simples",
                    report.inner_len, report.outer_len, report.cocenter_size
                );
                for v in &report.verdicts {
                    match &v.verdict {
                        Verdict::Saturates => println!(
                            "  {} saturates ({} members, {} rounds{})",
                            v.generator,
                            v.closure_size,
                            v.rounds,
                            if v.hit_bound { ", hit bound" } else { "" }
                        ),
                        Verdict::Stuck { missing } => println!(
                            "  {} STUCK: closure of size {} never reaches {}",
                            v.generator, v.closure_size, missing
                        ),
                    }
                }
            });
            Ok(if ok { Outcome::Ok } else { Outcome::Failed })
        }
        Command::Validate { ring } => {
            let report = catalog::validate_spec(&ring.ring)?;
            let ok = report.is_ok();
            emit(format, &report, || match &report.outcome {
                catalog::ValidationOutcome::Ok => println!("{}: ok", report.spec),
                catalog::ValidationOutcome::DatumViolation(v)
                | catalog::ValidationOutcome::GroupViolation(v)
                | catalog::ValidationOutcome::TableViolation(v) => {
                    println!("{}: VIOLATION: {v}", report.spec)
                }
            });
            Ok(if ok { Outcome::Ok } else { Outcome::Failed })
        }
        Command::FreeprodCheck { rings, max_len } => {
            let mut data = Vec::new();
            for spec in rings.split(',') {
                let h = catalog::ring_from_spec(spec.trim())?;
                match h.as_free_datum() {
                    Some(d) => data.push(d.clone()),
                    None => {
                        return Err(format!(
                            "freeprod-check factors must be free-datum rings; `{}` is not",
                            spec.trim()
                        )
                        .into())
                    }
                }
            }
            let report = freefusion::ring::free_product_consistency(&data, max_len)?;
            let ok = matches!(report, ConsistencyReport::Agree { .. });
            emit(format, &report, || match &report {
                ConsistencyReport::Agree { pairs_checked } => {
                    println!("ok: {pairs_checked} simple pairs decompose identically")
                }
                ConsistencyReport::Mismatch(m) => {
                    println!("MISMATCH on {} · {}:", m.x, m.y);
                    println!("  via union datum:      {:?}", m.via_union_datum);
                    println!("  via string recursion: {:?}", m.via_string_recursion);
                }
            });
            Ok(if ok { Outcome::Ok } else { Outcome::Failed })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Failed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
