use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use fadcert_cli::{self as suites, BodyKind, RunReport};
use fadcert_core::automorphism::DEFAULT_ORDER_CUTOFF;
use fadcert_core::bounds::Group;
use fadcert_core::genset::{GenSetName, DEFAULT_CLOSURE_CAP};

#[derive(Parser)]
#[command(name = "fadcert", version, about = "Exact verification suites for free-group automorphisms, nerves and Helly checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for randomized suites.
    #[arg(long, global = true, default_value_t = suites::DEFAULT_SEED)]
    seed: u64,
    /// Largest order searched before giving up.
    #[arg(long, global = true, default_value_t = DEFAULT_ORDER_CUTOFF)]
    cutoff: u32,
    /// Largest group enumerated by closure.
    #[arg(long, global = true, default_value_t = DEFAULT_CLOSURE_CAP)]
    cap: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Replay the relation chains.
    Relations {
        #[arg(long, value_delimiter = ',', default_values_t = suites::DEFAULT_RANKS)]
        n: Vec<usize>,
    },
    /// Certify membership lines and generation witnesses.
    Generation {
        #[arg(long, value_delimiter = ',', default_values_t = suites::DEFAULT_RANKS)]
        n: Vec<usize>,
    },
    /// Orders, drawn diagram and finiteness certificates of a set.
    Pairs {
        #[arg(long, default_value = "Y2")]
        set: GenSetName,
        #[arg(long, default_value_t = 8)]
        n: usize,
    },
    /// Commutation graph in DOT format.
    Diagram {
        #[arg(long, default_value = "Y2")]
        set: GenSetName,
        #[arg(long, default_value_t = 8)]
        n: usize,
    },
    /// Dimension bounds: one rank, a sweep, or the full suite.
    Bounds {
        #[arg(long)]
        n: Option<u64>,
        #[arg(long, default_value = "aut")]
        group: Group,
        /// Inclusive range `a..b`.
        #[arg(long)]
        sweep: Option<String>,
        /// Upper end of the exhaustive implication check.
        #[arg(long, default_value_t = fadcert_core::bounds::DEFAULT_IMPLICATION_CAP)]
        implication_cap: u64,
    },
    /// Conjugate families, embedding and path counts.
    Families {
        #[arg(long, value_delimiter = ',', default_values_t = (4..=12).collect::<Vec<usize>>())]
        n: Vec<usize>,
    },
    /// Helly checks on fixed and random families.
    Helly {
        #[arg(long)]
        random: bool,
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long, default_value_t = 6)]
        sets: usize,
        #[arg(long)]
        trials: Option<usize>,
        /// `box` or `poly`; alternates when omitted.
        #[arg(long)]
        kind: Option<String>,
    },
    /// Swelling construction on random box families.
    Swelling {
        #[arg(long, default_value_t = suites::SWELLING_TRIALS)]
        trials: usize,
    },
    /// Reduced homology of joins of simplex boundaries.
    Homology {
        #[arg(long)]
        join_spheres: bool,
        #[arg(long, default_value_t = suites::JOIN_MAX_TOTAL)]
        max_total: u32,
    },
    /// Nerve of a union of cylinder families against the join of nerves.
    NerveJoin {
        #[arg(long, default_value_t = suites::NERVE_JOIN_TRIALS)]
        trials: usize,
    },
    /// Every suite with default parameters.
    All,
}

fn parse_range(text: &str) -> Result<(u64, u64)> {
    let (a, b) = text.split_once("..").context("expected a range `a..b`")?;
    let (a, b): (u64, u64) = (a.trim().parse()?, b.trim().parse()?);
    if a > b {
        bail!("empty range {text}");
    }
    Ok((a, b))
}

fn emit(reports: &[RunReport], json: bool) -> Result<bool> {
    if json {
        let doc = if reports.len() == 1 {
            serde_json::to_string_pretty(&reports[0])?
        } else {
            serde_json::to_string_pretty(reports)?
        };
        println!("{doc}");
    } else {
        for r in reports {
            print!("{}", r.render_text());
        }
    }
    Ok(reports.iter().all(|r| r.failed() == 0))
}

fn run(cli: Cli) -> Result<bool> {
    let c = &cli.common;
    let reports = match cli.command {
        Command::Relations { n } => vec![suites::relations(&n)?],
        Command::Generation { n } => vec![suites::generation(&n)?],
        Command::Pairs { set, n } => vec![suites::pairs(set, n, c.cutoff, c.cap)?],
        Command::Diagram { set, n } => {
            print!("{}", suites::diagram(set, n, c.cutoff)?);
            return Ok(true);
        }
        Command::Bounds { n, group, sweep, implication_cap } => {
            if let Some(range) = sweep {
                let (a, b) = parse_range(&range)?;
                if c.json {
                    let rows = fadcert_core::bounds::sweep(a, b, group)?;
                    println!("{}", serde_json::to_string_pretty(&rows)?);
                } else {
                    print!("{}", suites::bound_table(a, b, group)?);
                }
                return Ok(true);
            }
            if let Some(n) = n {
                let r = suites::bound_report(n, group)?;
                if c.json {
                    println!("{}", serde_json::to_string_pretty(&r)?);
                } else {
                    println!(
                        "n={} group={} m={} max_d_general={} max_d_simple={} rep_threshold={}",
                        r.n, r.group, r.m, r.max_d_general, r.max_d_simple, r.rep_threshold
                    );
                }
                return Ok(true);
            }
            vec![suites::bounds_suite(implication_cap)?]
        }
        Command::Families { n } => vec![suites::families(&n)?],
        Command::Helly { random, d, sets, trials, kind } => {
            let kind = match kind.as_deref() {
                None => None,
                Some("box") => Some(BodyKind::Box),
                Some("poly") => Some(BodyKind::Poly),
                Some(other) => bail!("unknown body kind `{other}`"),
            };
            if random {
                vec![suites::helly_random(d, sets, trials.unwrap_or(100), c.seed, kind)?]
            } else {
                vec![suites::helly_suite(c.seed, trials.unwrap_or(suites::HELLY_TRIALS))?]
            }
        }
        Command::Swelling { trials } => vec![suites::swelling_suite(c.seed, trials)?],
        Command::Homology { join_spheres: _, max_total } => vec![suites::homology_suite(max_total)?],
        Command::NerveJoin { trials } => vec![suites::nerve_join_suite(c.seed, trials)?],
        Command::All => suites::all(c.seed, c.cutoff, c.cap)?,
    };
    emit(&reports, c.json)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let outcome = run(cli);
    eprintln!("elapsed: {:.3} s", start.elapsed().as_secs_f64());
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
