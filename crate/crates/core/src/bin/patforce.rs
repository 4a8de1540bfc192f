use std::io::Write;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use patforce::forcing::{
    default_twist_cap, forced_patterns_with, is_twist_bounded, orp_spectrum, TwistVerdict,
};
use patforce::orders::{eta, orp_precedes, sharkovsky_precedes, star_precedes};
use patforce::verify::{
    self, classify_trichotomy, enumerate_patterns, nd_nbs, LemmaScale, VerificationReport,
};
use patforce::{Execution, MarkovGraph, OrpPair, Pattern};

#[derive(Parser)]
#[command(
    name = "patforce",
    version,
    about = "Forcing among cyclic patterns of interval maps"
)]
struct Cli {
    /// Read patterns in cycle notation, e.g. "(1 4 6 2 3 5)".
    #[arg(long, global = true)]
    cycles: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classifier summary of a pattern as JSON.
    Classify { pattern: String },
    /// The Štefan pattern of an odd period.
    Stefan { period: usize },
    /// Exit 0 if A forces B, 1 otherwise.
    Forces { a: String, b: String },
    /// Canonical patterns of the forced cycles of one period.
    Forced {
        pattern: String,
        #[arg(long)]
        period: usize,
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Over-rotation pairs of forced cycles of periods 2..=cap.
    Spectrum {
        pattern: String,
        #[arg(long)]
        cap: usize,
    },
    /// Markov graph of the P-linear map.
    Markov {
        pattern: String,
        #[arg(long)]
        dot: bool,
    },
    /// Order relations; exit 0 if true, 1 if false.
    Order {
        #[command(subcommand)]
        order: OrderCommand,
    },
    /// The pair eta(m).
    Eta { m: usize },
    /// Bounded twist verdict; exit 0 if twist up to the cap, 1 otherwise.
    Twist {
        pattern: String,
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Truncated ND and NBS period sets of the P-linear map.
    NdNbs {
        pattern: String,
        #[arg(long, default_value_t = 9)]
        cap: usize,
    },
    /// All patterns of a period as CSV.
    Enumerate(EnumerateArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
}

#[derive(Subcommand)]
enum OrderCommand {
    /// m ≫ s in order (*).
    Star { m: usize, s: usize },
    /// m ⊳ k in the Sharkovsky order.
    Sharkovsky { m: usize, k: usize },
    /// (p, q) ⋗ (r, s).
    Orp {
        p: usize,
        q: usize,
        r: usize,
        s: usize,
    },
}

#[derive(Args)]
struct EnumerateArgs {
    #[arg(long)]
    period: usize,
    #[arg(long, group = "filter")]
    no_division: bool,
    #[arg(long, group = "filter")]
    no_block_structure: bool,
    #[arg(long, group = "filter")]
    divergent: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    ForcingOrder,
    Trichotomy,
    NdToNbs,
    StefanOnly,
    StefanForcing,
    Closure,
    Lemmas,
    All,
}

#[derive(Args)]
struct VerifyArgs {
    suite: Suite,
    #[arg(long)]
    max_period: Option<usize>,
    #[arg(long)]
    cap: Option<usize>,
    /// Larger default scale: periods up to 8, cap 10.
    #[arg(long)]
    slow: bool,
    #[arg(long)]
    jobs: Option<usize>,
}

enum Outcome {
    Success,
    False,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(Outcome::Success) => ExitCode::SUCCESS,
        Ok(Outcome::False) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn truth(b: bool) -> Outcome {
    println!("{b}");
    if b {
        Outcome::Success
    } else {
        Outcome::False
    }
}

fn run(cli: &Cli) -> Result<Outcome> {
    let pattern = |text: &str| -> Result<Pattern> {
        let p = if cli.cycles {
            Pattern::from_cycle_notation(text)
        } else {
            text.parse()
        };
        p.with_context(|| format!("invalid pattern `{text}`"))
    };
    match &cli.command {
        Command::Classify { pattern: p } => {
            println!("{}", serde_json::to_string(&pattern(p)?.classify())?);
        }
        Command::Stefan { period } => println!("{}", Pattern::stefan(*period)?),
        Command::Forces { a, b } => {
            return Ok(truth(patforce::forces(&pattern(a)?, &pattern(b)?)?));
        }
        Command::Forced {
            pattern: p,
            period,
            jobs,
        } => {
            let found = forced_patterns_with(&pattern(p)?, *period, Execution::from_jobs(*jobs))?;
            let mut out = std::io::stdout().lock();
            for f in found {
                writeln!(out, "{f}")?;
            }
        }
        Command::Spectrum { pattern: p, cap } => {
            for o in orp_spectrum(&pattern(p)?, *cap)? {
                println!("{o}");
            }
        }
        Command::Markov { pattern: p, dot } => {
            let graph = MarkovGraph::new(&pattern(p)?)?;
            if *dot {
                print!("{}", graph.to_dot());
            } else {
                for i in 1..=graph.vertex_count() {
                    let succ: Vec<String> = graph
                        .successors(i)
                        .iter()
                        .map(|k| format!("J{k}"))
                        .collect();
                    println!("J{i} -> {}", succ.join(" "));
                }
            }
        }
        Command::Order { order } => {
            let b = match *order {
                OrderCommand::Star { m, s } => star_precedes(m, s)?,
                OrderCommand::Sharkovsky { m, k } => sharkovsky_precedes(m, k)?,
                OrderCommand::Orp { p, q, r, s } => {
                    let a = OrpPair::new(p, q)
                        .with_context(|| format!("({p},{q}) is not an over-rotation pair"))?;
                    let b = OrpPair::new(r, s)
                        .with_context(|| format!("({r},{s}) is not an over-rotation pair"))?;
                    orp_precedes(a, b)
                }
            };
            return Ok(truth(b));
        }
        Command::Eta { m } => println!("{}", eta(*m)?),
        Command::Twist { pattern: p, cap } => {
            let p = pattern(p)?;
            let cap = cap.unwrap_or_else(|| default_twist_cap(&p));
            return Ok(match is_twist_bounded(&p, cap)? {
                TwistVerdict::TwistUpTo(c) => {
                    println!("twist-up-to {c}");
                    Outcome::Success
                }
                TwistVerdict::NotTwist => {
                    println!("not-twist");
                    Outcome::False
                }
            });
        }
        Command::NdNbs { pattern: p, cap } => {
            if *cap < 3 {
                bail!("--cap must be at least 3");
            }
            let r = nd_nbs(&pattern(p)?, *cap)?;
            let case = classify_trichotomy(&r.nd, &r.nbs, *cap);
            println!(
                "{}",
                serde_json::to_string(&serde_json::json!({
                    "pattern": r.pattern.to_string(),
                    "cap": r.cap,
                    "nd": r.nd,
                    "nbs": r.nbs,
                    "case": case,
                }))?
            );
        }
        Command::Enumerate(args) => enumerate(args)?,
        Command::Verify(args) => return verify(args),
    }
    Ok(Outcome::Success)
}

#[derive(Serialize)]
struct CsvRow {
    pattern: String,
    orp_p: Option<usize>,
    orp_q: Option<usize>,
    convergent: bool,
    division: bool,
    doubling: bool,
    block_sizes: String,
}

fn enumerate(args: &EnumerateArgs) -> Result<()> {
    if args.period == 0 {
        bail!("--period must be positive");
    }
    let mut writer = csv::Writer::from_writer(std::io::stdout().lock());
    for p in enumerate_patterns(args.period) {
        let keep = if args.no_division {
            !p.has_division()
        } else if args.no_block_structure {
            !p.has_block_structure()
        } else if args.divergent {
            !p.is_convergent()
        } else {
            true
        };
        if !keep {
            continue;
        }
        let c = p.classify();
        let sizes: Vec<String> = c.block_sizes.iter().map(usize::to_string).collect();
        writer.serialize(CsvRow {
            pattern: p.to_string(),
            orp_p: c.orp.map(|o| o[0]),
            orp_q: c.orp.map(|o| o[1]),
            convergent: c.convergent,
            division: c.division,
            doubling: c.doubling,
            block_sizes: sizes.join(" "),
        })?;
    }
    writer.flush()?;
    Ok(())
}

fn verify(args: &VerifyArgs) -> Result<Outcome> {
    let exec = Execution::from_jobs(args.jobs);
    let (default_max, default_cap) = if args.slow { (8, 10) } else { (7, 9) };
    let max_period = args.max_period.unwrap_or(default_max);
    let cap = args.cap.unwrap_or(default_cap);
    let lemma_max = args.max_period.unwrap_or(10);
    if max_period < 3 || cap < max_period.min(3) {
        bail!("need --max-period >= 3 and --cap >= 3");
    }
    let run_one = |suite: Suite| -> VerificationReport {
        match suite {
            Suite::ForcingOrder => {
                verify::verify_forcing_order(max_period, cap.max(max_period), exec)
            }
            Suite::Trichotomy => verify::verify_trichotomy(max_period, cap.max(max_period), exec),
            Suite::NdToNbs => verify::verify_nd_forces_nbs(max_period, cap.max(max_period), exec),
            Suite::StefanOnly => verify::verify_stefan_only(max_period, cap, exec),
            Suite::StefanForcing => verify::verify_stefan_forcing(max_period, exec),
            Suite::Closure => verify::verify_downward_closure(max_period, cap, exec),
            Suite::Lemmas => verify::verify_lemmas(LemmaScale::new(lemma_max, cap), exec),
            Suite::All => unreachable!(),
        }
    };
    let reports: Vec<VerificationReport> = if args.suite == Suite::All {
        [
            Suite::ForcingOrder,
            Suite::Trichotomy,
            Suite::NdToNbs,
            Suite::StefanOnly,
            Suite::StefanForcing,
            Suite::Closure,
            Suite::Lemmas,
        ]
        .into_iter()
        .map(run_one)
        .collect()
    } else {
        vec![run_one(args.suite)]
    };
    let mut out = std::io::stdout().lock();
    let mut pass = true;
    for r in &reports {
        writeln!(out, "{}", serde_json::to_string(r)?)?;
        eprintln!("{}", r.summary());
        for v in &r.violations {
            eprintln!("  [{}] {}: {}", v.pattern, v.claim, v.witness);
        }
        pass &= r.pass;
    }
    Ok(if pass {
        Outcome::Success
    } else {
        Outcome::False
    })
}
