use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use wavelab::constructions::{
    extract_wave_main, extract_wave_strong, ezconst_coloring, product_coloring,
};
use wavelab::solvers::{exact_g_with, exact_p_with, recursive_upper_bound_g};
use wavelab::store::{Bound, Kind, Record, Store, Witness};
use wavelab::waves::{find_wave, is_wave};
use wavelab::{classify, Coloring, IntSet, Mode, Permutation, SearchLimits};

const EXIT_DOMAIN: u8 = 1;
const EXIT_INCOMPLETE: u8 = 3;

/// Exact computations and construction checks for permutation pattern waves.
#[derive(Parser)]
#[command(name = "wavelab", version)]
struct Cli {
    /// Cache file (defaults to $WAVELAB_CACHE, then ./wavelab-cache.txt).
    #[arg(long, global = true)]
    cache: Option<PathBuf>,
    /// Neither read nor write the cache.
    #[arg(long, global = true)]
    no_cache: bool,
    /// Node budget for exhaustive searches.
    #[arg(long, global = true, default_value_t = wavelab::solvers::DEFAULT_NODE_BUDGET)]
    budget: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ModeArg {
    /// Use weak waves (ties allowed between differences).
    #[arg(long)]
    weak: bool,
}

impl ModeArg {
    fn mode(&self) -> Mode {
        if self.weak {
            Mode::Weak
        } else {
            Mode::Strict
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Peaks, layers and exponent interval of a pattern.
    Classify { pi: Permutation },
    /// Whether a point sequence is a wave.
    Detect {
        #[arg(long)]
        pi: Permutation,
        #[arg(long)]
        seq: String,
        #[command(flatten)]
        mode: ModeArg,
    },
    /// Least wave inside a set.
    Search {
        #[arg(long)]
        pi: Permutation,
        #[arg(long)]
        set: String,
        /// Universe size; defaults to the largest element.
        #[arg(long)]
        n: Option<u64>,
        #[command(flatten)]
        mode: ModeArg,
    },
    /// Largest wave-free subset of [n].
    G {
        #[arg(long)]
        pi: Permutation,
        #[arg(long)]
        n: u64,
        #[command(flatten)]
        mode: ModeArg,
    },
    /// Least M forcing a monochromatic wave in every r-coloring of [M].
    P {
        #[arg(long)]
        pi: Permutation,
        #[arg(long)]
        r: u32,
        #[command(flatten)]
        mode: ModeArg,
    },
    /// Recursive upper bound on g(pi, n).
    Bound {
        #[arg(long)]
        pi: Permutation,
        #[arg(long)]
        n: u64,
    },
    /// Run the wave-extraction procedure on a set.
    Extract {
        #[arg(long)]
        pi: Permutation,
        #[arg(long)]
        set: String,
        #[arg(long)]
        n: Option<u64>,
        /// Drop values 1 and 2 instead of 1.
        #[arg(long)]
        strong: bool,
        /// Print every intermediate step.
        #[arg(long)]
        trace: bool,
    },
    /// Build a wave-free coloring from smaller ones.
    #[command(subcommand)]
    Construct(Construct),
    /// Write a table of g or P values as CSV.
    Table {
        #[arg(long, value_enum)]
        kind: TableKind,
        #[arg(long)]
        pi: Permutation,
        /// Largest n (kind g) or r (kind p).
        #[arg(long)]
        max: u64,
        #[arg(long, default_value_t = 1)]
        min: u64,
        #[arg(long)]
        csv: PathBuf,
        #[command(flatten)]
        mode: ModeArg,
    },
    /// Check that a coloring file has no monochromatic wave.
    Verify {
        #[arg(long)]
        coloring: PathBuf,
        #[arg(long)]
        pi: Permutation,
        #[command(flatten)]
        mode: ModeArg,
    },
}

/// Colorings are given inline (`1,1,2`) or read from a file with `@path`.
#[derive(Subcommand)]
enum Construct {
    /// Three-block coloring doubling the palette; pi must start with its maximum.
    Ezconst {
        #[arg(long)]
        pi: Permutation,
        #[arg(long)]
        c0: String,
        #[arg(long)]
        c0p: String,
        #[command(flatten)]
        mode: ModeArg,
    },
    /// Product coloring avoiding weak (left ⊖ right)-waves.
    Product {
        #[arg(long)]
        pi_l: Permutation,
        #[arg(long)]
        pi_r: Permutation,
        /// Palette of both input colorings.
        #[arg(long)]
        m: u32,
        #[arg(long)]
        cl: String,
        #[arg(long)]
        cr: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum TableKind {
    G,
    P,
}

enum Outcome {
    Done,
    /// A negative answer for a checking command.
    Rejected,
    Incomplete,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Outcome::Done) => ExitCode::SUCCESS,
        Ok(Outcome::Rejected) => ExitCode::from(EXIT_DOMAIN),
        Ok(Outcome::Incomplete) => ExitCode::from(EXIT_INCOMPLETE),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_DOMAIN)
        }
    }
}

fn run(cli: &Cli) -> Result<Outcome> {
    let limits = SearchLimits {
        node_budget: cli.budget,
    };
    match &cli.command {
        Command::Classify { pi } => {
            println!("{}", classify(pi)?);
        }
        Command::Detect { pi, seq, mode } => {
            let points = wavelab::waves::parse_points(seq)?;
            let answer = if is_wave(&points, pi, mode.mode()) { "wave" } else { "not a wave" };
            println!("{answer}");
        }
        Command::Search { pi, set, n, mode } => {
            let set = IntSet::parse(set, *n)?;
            match find_wave(&set, pi, mode.mode()) {
                Some(w) => println!("wave {w}"),
                None => println!("wave-free"),
            }
        }
        Command::G { pi, n, mode } => {
            let mut store = open_store(cli)?;
            let rec = density_record(&mut store, pi, *n, mode.mode(), limits)?;
            println!("{}", rec.value);
            println!("{}", rec.witness);
            return Ok(report_status(&rec));
        }
        Command::P { pi, r, mode } => {
            let mut store = open_store(cli)?;
            let rec = coloring_record(&mut store, pi, *r, mode.mode(), limits)?;
            println!("{}", rec.value);
            println!("{}", rec.witness);
            return Ok(report_status(&rec));
        }
        Command::Bound { pi, n } => {
            println!("{}", recursive_upper_bound_g(pi, *n)?);
        }
        Command::Extract {
            pi,
            set,
            n,
            strong,
            trace,
        } => {
            let set = IntSet::parse(set, *n)?;
            let result = if *strong {
                extract_wave_strong(&set, pi)
            } else {
                extract_wave_main(&set, pi)
            };
            match result {
                Ok((wave, t)) if *trace => println!("{t}\n{wave}"),
                Ok((wave, _)) => println!("{wave}"),
                Err(e) => {
                    println!("failed: {e}");
                    return Ok(Outcome::Rejected);
                }
            }
        }
        Command::Construct(Construct::Ezconst { pi, c0, c0p, mode }) => {
            let out = ezconst_coloring(pi, &read_coloring(c0)?, &read_coloring(c0p)?, mode.mode())?;
            println!("{out}");
        }
        Command::Construct(Construct::Product {
            pi_l,
            pi_r,
            m,
            cl,
            cr,
        }) => {
            let out = product_coloring(pi_l, pi_r, *m, &read_coloring(cl)?, &read_coloring(cr)?)?;
            println!("{out}");
        }
        Command::Table {
            kind,
            pi,
            max,
            min,
            csv,
            mode,
        } => return write_table(cli, *kind, pi, *min..=*max, csv, mode.mode(), limits),
        Command::Verify { coloring, pi, mode } => {
            let text = fs::read_to_string(coloring).with_context(|| format!("reading {}", coloring.display()))?;
            let c = Coloring::parse(&text, None)?;
            match c.monochromatic_wave(pi, mode.mode()) {
                None => println!("wave-free"),
                Some((color, w)) => {
                    println!("monochromatic wave {w} in color {color}");
                    return Ok(Outcome::Rejected);
                }
            }
        }
    }
    Ok(Outcome::Done)
}

fn report_status(rec: &Record) -> Outcome {
    match rec.status {
        Bound::Exact => Outcome::Done,
        Bound::LowerBound => {
            eprintln!("node budget exhausted: {} is a lower bound", rec.value);
            Outcome::Incomplete
        }
    }
}

fn open_store(cli: &Cli) -> Result<Store> {
    if cli.no_cache {
        return Ok(Store::in_memory());
    }
    let path = cli.cache.clone().unwrap_or_else(Store::default_path);
    Ok(Store::open(path)?)
}

/// The exact cached record, or a fresh computation (stored on the way out).
fn density_record(store: &mut Store, pi: &Permutation, n: u64, mode: Mode, limits: SearchLimits) -> Result<Record> {
    if let Some(rec) = store.get(Kind::G, pi, n, mode).filter(|r| r.status == Bound::Exact) {
        return Ok(rec.clone());
    }
    let rec = Record::from_density(&exact_g_with(pi, n, mode, limits)?);
    store.put(rec.clone())?;
    Ok(rec)
}

fn coloring_record(store: &mut Store, pi: &Permutation, r: u32, mode: Mode, limits: SearchLimits) -> Result<Record> {
    if let Some(rec) = store.get(Kind::P, pi, r as u64, mode).filter(|r| r.status == Bound::Exact) {
        return Ok(rec.clone());
    }
    let rec = Record::from_coloring(&exact_p_with(pi, r, mode, limits)?);
    store.put(rec.clone())?;
    Ok(rec)
}

fn write_table(
    cli: &Cli,
    kind: TableKind,
    pi: &Permutation,
    params: std::ops::RangeInclusive<u64>,
    path: &PathBuf,
    mode: Mode,
    limits: SearchLimits,
) -> Result<Outcome> {
    let mut store = open_store(cli)?;
    let mut out = csv::Writer::from_path(path).with_context(|| format!("cannot write {}", path.display()))?;
    out.write_record(["pattern", "param", "mode", "value", "status", "witness"])?;
    let mut outcome = Outcome::Done;
    for param in params {
        let rec = match kind {
            TableKind::G => density_record(&mut store, pi, param, mode, limits)?,
            TableKind::P => {
                let r = u32::try_from(param).context("palette too large")?;
                coloring_record(&mut store, pi, r, mode, limits)?
            }
        };
        if rec.status == Bound::LowerBound {
            outcome = Outcome::Incomplete;
        }
        let witness = match &rec.witness {
            Witness::Set(s) => s.to_string(),
            Witness::Coloring(c) => c.to_string(),
        };
        out.write_record([
            pi.to_string(),
            param.to_string(),
            mode.to_string(),
            rec.value.to_string(),
            rec.status.to_string(),
            witness,
        ])?;
    }
    out.flush()?;
    Ok(outcome)
}

fn read_coloring(arg: &str) -> Result<Coloring> {
    let text = match arg.strip_prefix('@') {
        Some(path) => fs::read_to_string(path).with_context(|| format!("reading {path}"))?,
        None => arg.to_string(),
    };
    if text.trim().is_empty() {
        bail!("empty coloring");
    }
    Ok(Coloring::parse(&text, None)?)
}
