//! Argument handling and command dispatch for the `linext` binary.

pub mod report;

use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};
use std::time::Instant;

use clap::{Parser, Subcommand};
use linext::checkpoint::fingerprint_bytes;
use linext::levelpass::{PassStats, StatsSink, DEFAULT_MAX_LEVEL_SIZE};
use linext::poset::parse_poset_json;
use linext::*;

use serde_json::{json, Value};

pub use report::{RunReport, SCHEMA};
use report::{LevelTiming, PassTiming, Timings};

#[derive(Debug, Parser)]
#[command(name = "linext", version, about = "Exact linear-extension combinatorics over the ideal lattice of a poset")]
pub struct Cli {
    /// Worker threads per level (default: available parallelism)
    #[arg(long, global = true)]
    pub workers: Option<usize>,

    /// Refuse to run if any level would hold more ideals than this
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_LEVEL_SIZE)]
    pub max_level_size: usize,

    /// Directory for per-level checkpoints; an interrupted run resumes from it
    #[arg(long, global = true)]
    pub checkpoint: Option<PathBuf>,

    /// Print the report as JSON
    #[arg(long, global = true)]
    pub json: bool,

    /// Leave timings out of the report
    #[arg(long, global = true)]
    pub no_timings: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Number of order ideals and their profile by cardinality
    Ideals {
        /// Poset file, or `-` for stdin
        poset: PathBuf,
        /// Also print the compressed rows
        #[arg(long)]
        dump_rows: bool,
    },
    /// Number of linear extensions
    Count { poset: PathBuf },
    /// Average rank of every element
    Avr { poset: PathBuf },
    /// Distribution of one element's position
    Rankdist {
        poset: PathBuf,
        #[arg(long)]
        element: String,
    },
    /// Probability that `a` precedes `b`
    Prec {
        poset: PathBuf,
        /// `a,b`
        #[arg(long)]
        pair: String,
    },
    /// Most balanced incomparable pair
    Scan13 { poset: PathBuf },
    /// Weighted jump number and an optimal extension
    Jump {
        poset: PathBuf,
        /// Lines `x y value`; unlisted pairs cost 1
        #[arg(long)]
        penalties: Option<PathBuf>,
    },
    /// Linear extensions meeting completion-time windows
    Schedule {
        poset: PathBuf,
        /// Lines `x duration lo hi`, `hi` may be `inf`
        #[arg(long)]
        windows: PathBuf,
    },
    /// Write a generated poset: antichain N | chain N | boolean M |
    /// thin LEVELS WIDTH COVERS | random N DENSITY
    Gen {
        kind: String,
        params: Vec<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write to a file instead of stdout
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Core(Error::Io(e))
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

pub mod exit {
    pub const OK: i32 = 0;
    pub const OTHER: i32 = 1;
    pub const USAGE: i32 = 2;
    pub const PARSE: i32 = 3;
    pub const VALIDATION: i32 = 4;
    pub const CEILING: i32 = 5;
    pub const IO: i32 = 6;
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        let CliError::Core(e) = self else {
            return exit::USAGE;
        };
        match e {
            Error::Parse { .. } | Error::DuplicateElement(_) | Error::UnknownElement(_) | Error::MalformedRow(_) => {
                exit::PARSE
            }
            Error::Cycle(_)
            | Error::InvalidParameter(_)
            | Error::NotAnIdeal(_)
            | Error::NotAMember { .. }
            | Error::WidthMismatch { .. }
            | Error::NotAnIdealFamily(_)
            | Error::NotALinearExtension(_)
            | Error::OracleCap { .. } => exit::VALIDATION,
            Error::LevelCeiling { .. } | Error::ExpansionCap { .. } => exit::CEILING,
            Error::Io(_) | Error::Checkpoint(_) => exit::IO,
            Error::MissingLowerCover { .. } => exit::OTHER,
        }
    }
}

/// What a command produced: a report, or raw text for `gen`.
pub enum Output {
    Report(RunReport),
    Text(String),
}

fn read_input(path: &Path) -> Result<Vec<u8>, CliError> {
    if path == Path::new("-") {
        let mut buf = Vec::new();
        std::io::stdin().read_to_end(&mut buf)?;
        return Ok(buf);
    }
    fs::read(path).map_err(|e| {
        std::io::Error::new(e.kind(), format!("{}: {e}", path.display())).into()
    })
}

fn load_poset(path: &Path) -> Result<(Poset, String), CliError> {
    let bytes = read_input(path)?;
    let text = String::from_utf8(bytes.clone()).map_err(|_| Error::Parse {
        line: 0,
        message: "file is not UTF-8".into(),
    })?;
    let poset = if text.trim_start().starts_with('{') {
        parse_poset_json(&text)?
    } else {
        parse_poset(&text)?
    };
    Ok((poset, fingerprint_bytes(&bytes)))
}

fn element(poset: &Poset, label: &str) -> Result<usize, CliError> {
    poset
        .index_of(label.trim())
        .map_err(|_| Error::InvalidParameter(format!("no element `{}` in the poset", label.trim())).into())
}

fn big(n: &BigUint) -> Value {
    Value::String(n.to_string())
}

fn exact(r: &BigRational) -> Value {
    serde_json::to_value(ExactRational::new(r)).expect("plain struct serializes")
}

fn labels(poset: &Poset, order: &[usize]) -> Value {
    order.iter().map(|&a| Value::String(poset.label(a).to_string())).collect()
}

struct Run {
    config: PassConfig,
    sink: StatsSink,
}

impl Run {
    fn new(cli: &Cli) -> Result<Self, CliError> {
        let mut config = match cli.workers {
            Some(0) => return Err(CliError::Usage("--workers must be at least 1".into())),
            Some(w) => PassConfig::with_workers(w),
            None => PassConfig::default(),
        };
        config.max_level_size = cli.max_level_size;
        config.checkpoint = cli.checkpoint.clone();
        let sink: StatsSink = Arc::new(Mutex::new(Vec::new()));
        config.stats = Some(sink.clone());
        Ok(Run { config, sink })
    }

    fn passes(&self) -> Vec<PassStats> {
        self.sink.lock().unwrap().clone()
    }
}

pub fn run(cli: &Cli) -> Result<Output, CliError> {
    let started = Instant::now();
    if let Command::Gen {
        kind,
        params,
        seed,
        output,
    } = &cli.command
    {
        let poset = generate(&gen_kind(kind, params, *seed)?)?;
        let text = if cli.json {
            serde_json::to_string_pretty(&poset.to_document()).expect("document serializes") + "\n"
        } else {
            poset.to_text()
        };
        return match output {
            Some(path) => {
                fs::write(path, text)?;
                Ok(Output::Text(String::new()))
            }
            None => Ok(Output::Text(text)),
        };
    }

    let run = Run::new(cli)?;
    let cfg = &run.config;
    let (name, path) = match &cli.command {
        Command::Ideals { poset, .. } => ("ideals", poset),
        Command::Count { poset } => ("count", poset),
        Command::Avr { poset } => ("avr", poset),
        Command::Rankdist { poset, .. } => ("rankdist", poset),
        Command::Prec { poset, .. } => ("prec", poset),
        Command::Scan13 { poset } => ("scan13", poset),
        Command::Jump { poset, .. } => ("jump", poset),
        Command::Schedule { poset, .. } => ("schedule", poset),
        Command::Gen { .. } => unreachable!("handled above"),
    };
    let (poset, digest) = load_poset(path)?;
    let mine = compress(&poset);

    let results = match &cli.command {
        Command::Ideals { dump_rows, .. } => {
            let profile: Vec<Value> = mine.rank_profile().iter().map(big).collect();
            let mut out = json!({ "ideals": big(&mine.cardinality()), "profile": profile });
            if *dump_rows {
                let rows: Vec<Value> = mine.rows().iter().map(|r| Value::String(r.to_string())).collect();
                out["row_dump"] = Value::Array(rows);
            }
            out
        }
        Command::Count { .. } => json!({ "count": big(&count_linear_extensions(&poset, cfg)?) }),
        Command::Avr { .. } => {
            let avr = average_ranks(&mine, cfg)?;
            let per: serde_json::Map<String, Value> = avr
                .iter()
                .enumerate()
                .map(|(a, r)| (poset.label(a).to_string(), exact(r)))
                .collect();
            json!({ "average_ranks": per })
        }
        Command::Rankdist { element: e, .. } => {
            let a = element(&poset, e)?;
            let dist = rank_distribution(&mine, a, cfg)?;
            let avr = average_ranks(&mine, cfg)?;
            let mean = dist.mean();
            json!({
                "element": poset.label(a),
                "counts": dist.counts.iter().map(big).collect::<Vec<_>>(),
                "probabilities": dist.probabilities().iter().map(exact).collect::<Vec<_>>(),
                "mean_rank": exact(&mean),
                "average_rank": exact(&avr[a]),
                "identity_holds": mean == avr[a],
                "total": big(&dist.total),
            })
        }
        Command::Prec { pair, .. } => {
            let (x, y) = pair
                .split_once(',')
                .ok_or_else(|| CliError::Usage(format!("--pair expects `a,b`, got `{pair}`")))?;
            let (a, b) = (element(&poset, x)?, element(&poset, y)?);
            let prec = precedence_count(&mine, a, b, cfg)?;
            json!({
                "pair": [poset.label(a), poset.label(b)],
                "count": big(&prec.count),
                "total": big(&prec.total),
                "probability": exact(&prec.probability()),
            })
        }
        Command::Scan13 { .. } => {
            let r = one_third_two_thirds_scan(&mine, cfg)?;
            json!({
                "pair": r.pair.map(|(a, b)| vec![poset.label(a), poset.label(b)]),
                "probability": r.probability.as_ref().map(exact),
                "balance": r.balance.as_ref().map(exact),
                "verdict": r.verdict.as_str(),
            })
        }
        Command::Jump { penalties, .. } => {
            let pen = match penalties {
                Some(p) => Penalties::parse(&poset, &String::from_utf8_lossy(&read_input(p)?))?,
                None => Penalties::unit(poset.len()),
            };
            let r = weighted_jump_number(&mine, &pen, cfg)?;
            json!({ "value": exact(&r.value), "extension": labels(&poset, &r.extension) })
        }
        Command::Schedule { windows, .. } => {
            let spec = ScheduleSpec::parse(&poset, &String::from_utf8_lossy(&read_input(windows)?))?;
            json!({ "count": big(&count_window_extensions(&mine, &spec, cfg)?) })
        }
        Command::Gen { .. } => unreachable!("handled above"),
    };

    let passes = run.passes();
    let timings = (!cli.no_timings).then(|| Timings {
        total_seconds: started.elapsed().as_secs_f64(),
        passes: passes
            .iter()
            .map(|p| PassTiming {
                algebra: p.algebra.clone(),
                resumed_from: p.resumed_from,
                levels: p
                    .levels
                    .iter()
                    .map(|l| LevelTiming {
                        level: l.level,
                        size: l.size,
                        seconds: l.elapsed.as_secs_f64(),
                    })
                    .collect(),
            })
            .collect(),
    });
    Ok(Output::Report(RunReport {
        schema: SCHEMA.into(),
        command: name.into(),
        input_digest: Some(digest),
        workers: cfg.workers,
        rows: Some(mine.rows().len()),
        peak_level_size: passes.iter().map(|p| p.peak_level_size).max(),
        results,
        timings,
    }))
}

fn gen_kind(kind: &str, params: &[String], seed: u64) -> Result<PosetKind, CliError> {
    let usage = |want: &str| CliError::Usage(format!("gen {kind} expects {want}"));
    let int = |i: usize, want: &str| -> Result<usize, CliError> {
        params.get(i).and_then(|s| s.parse().ok()).ok_or_else(|| usage(want))
    };
    let arity = |n: usize, want: &str| -> Result<(), CliError> {
        if params.len() == n {
            Ok(())
        } else {
            Err(usage(want))
        }
    };
    Ok(match kind {
        "antichain" => {
            arity(1, "N")?;
            PosetKind::Antichain(int(0, "N")?)
        }
        "chain" => {
            arity(1, "N")?;
            PosetKind::Chain(int(0, "N")?)
        }
        "boolean" | "boolean-trimmed" => {
            arity(1, "M")?;
            PosetKind::BooleanTrimmed(int(0, "M")?)
        }
        "thin" => {
            let want = "LEVELS WIDTH COVERS";
            arity(3, want)?;
            PosetKind::Thin {
                levels: int(0, want)?,
                width: int(1, want)?,
                lower_covers: int(2, want)?,
                seed,
            }
        }
        "random" => {
            let want = "N DENSITY";
            arity(2, want)?;
            let density: f64 = params[1].parse().map_err(|_| usage(want))?;
            if !(0.0..=1.0).contains(&density) {
                return Err(usage("DENSITY between 0 and 1"));
            }
            PosetKind::Random {
                n: int(0, want)?,
                density,
                seed,
            }
        }
        other => {
            return Err(CliError::Usage(format!(
                "unknown kind `{other}`; expected antichain, chain, boolean, thin or random"
            )))
        }
    })
}
