//! The `noodle` command-line tool.
//!
//! Every run prints one document (JSON by default) holding the tool version,
//! the fully resolved configuration and the result. Identical arguments give
//! byte-identical output unless `--timing` is passed.

mod output;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::enumeration::{
    enumerate_meanders, enumerate_partial_shapes, DiskCache, InMemory, ShapeSource, MAX_MEANDER_K,
    MAX_SHAPE_K,
};
use crate::error::{Error, Result};
use crate::kappa::{
    kappa_bounds, kappa_lower_terms, kappa_upper_terms, Arithmetic, DyadicRational, TruncationSpec,
};
use crate::nclattice::{
    distance_via_cc, gnp_meandric_system, typical_distance_experiment, HasseGraph, NCPartition,
    HASSE_CAP,
};
use crate::sampling::{
    estimate_kappa_finite, estimate_kappa_noodle, explore_component, explore_partial_shape,
    local_profile, sample_meandric_system, KappaEstimate, NoodleOracle, RandomSource,
};
use output::{opt, render_csv, render_json, Report};

/// Smallest half-size that counts as a long enumeration.
pub const LONG_K: usize = 4;
pub const DEFAULT_SEED: u64 = 1;
pub const CACHE_ENV: &str = "NOODLE_CACHE_DIR";

#[derive(Debug, Parser)]
#[command(
    name = "noodle",
    version,
    about = "Meandric systems, the infinite noodle and bounds on its loop density"
)]
struct Cli {
    /// Master seed for every random choice.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Output format; `nc-experiment` defaults to csv, everything else to json.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write to this file instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Enumeration cache directory. Falls back to $NOODLE_CACHE_DIR, then
    /// $XDG_CACHE_HOME/noodle, then $HOME/.cache/noodle.
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    /// Permit enumerations with k >= 4.
    #[arg(long, global = true)]
    allow_long: bool,
    /// Record wall-clock time in the output (makes it non-reproducible).
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
enum Shapes {
    /// Enumerate in memory.
    #[default]
    Memory,
    /// Read from the cache; missing files are an error.
    Cache,
    /// Read from the cache, enumerating and storing missing files.
    Fill,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
enum ExploreMode {
    /// Walk the loop through the start point.
    #[default]
    Component,
    /// Read rightward from 0 until its component escapes to the left.
    Partial,
}

#[derive(Debug, Args, Serialize)]
struct BoundArgs {
    /// Largest half-size of meanders and open shapes.
    #[arg(long, default_value_t = 3)]
    kmax: usize,
    /// Cap on every gap variable.
    #[arg(long, default_value_t = 30)]
    lmax: usize,
    #[arg(long, value_enum, default_value_t = Arithmetic::Auto)]
    arithmetic: Arithmetic,
    /// Where meanders and open shapes come from.
    #[arg(long, value_enum, default_value_t = Shapes::Memory)]
    shapes: Shapes,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
enum Command {
    /// Draw one uniform meandric system of size n.
    SampleMs {
        #[arg(long)]
        n: usize,
    },
    /// Mean of cc/n over uniform meandric systems of size n.
    EstimateKappaFinite {
        #[arg(long, default_value_t = 10_000)]
        n: usize,
        #[arg(long, default_value_t = 200)]
        samples: u64,
    },
    /// Mean of 2/|C_0| over independent infinite noodles, with a bracket for
    /// censored explorations.
    EstimateKappaNoodle {
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        /// Letter reads allowed per exploration.
        #[arg(long, default_value_t = 10_000)]
        budget: u64,
    },
    /// Explore one noodle drawn from the seed.
    NoodleExplore {
        #[arg(long, value_enum, default_value_t = ExploreMode::Component)]
        mode: ExploreMode,
        /// Start point for component mode.
        #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
        start: i64,
        #[arg(long, default_value_t = 10_000)]
        budget: u64,
    },
    /// List all meanders on 2k points.
    EnumerateMeanders {
        #[arg(long)]
        k: usize,
    },
    /// List all open shapes on 2k+1 points.
    EnumerateOpen {
        #[arg(long)]
        k: usize,
    },
    /// Rigorous truncated lower bound.
    KappaLower(BoundArgs),
    /// Rigorous truncated upper bound.
    KappaUpper(BoundArgs),
    /// Both bounds.
    KappaBounds(BoundArgs),
    /// Hasse-diagram distance between two non-crossing partitions.
    NcDistance {
        #[arg(long)]
        n: Option<usize>,
        /// Partition such as "1,2,3|4".
        #[arg(long)]
        pi: String,
        #[arg(long)]
        rho: String,
    },
    /// Check the distance identity against breadth-first search on all pairs.
    NcVerify {
        #[arg(long, default_value_t = 5)]
        n: usize,
    },
    /// Mean distances between uniform non-crossing partitions.
    NcExperiment {
        #[arg(long, default_value_t = 10_000)]
        n: usize,
        #[arg(long, default_value_t = 100)]
        samples: u64,
    },
    /// Total variation between local letter patterns and the uniform law.
    LocalProfile {
        #[arg(long, default_value_t = 10_000)]
        n: usize,
        /// Window radius.
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long, default_value_t = 100_000)]
        marks: u64,
    },
    /// Manage the enumeration cache.
    #[command(subcommand)]
    Cache(CacheCommand),
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "action", rename_all = "kebab-case")]
enum CacheCommand {
    /// Enumerate and store meanders and open shapes for k = 1..=kmax.
    Build {
        #[arg(long, default_value_t = 3)]
        kmax: usize,
    },
    /// Show the manifest.
    Inspect,
}

/// Parses `args` (including the program name), runs the command and
/// returns the process exit code: 0 on success, 2 on usage errors, 3 when a
/// size cap is hit or a cached file is missing, 1 otherwise.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

/// [`run`] with explicit output streams.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Resource(_) => 3,
        Error::Domain(_) | Error::Parse(_) => 2,
        _ => 1,
    }
}

fn resolve_cache_dir(flag: Option<&PathBuf>) -> PathBuf {
    if let Some(p) = flag {
        return p.clone();
    }
    let env = |k: &str| {
        std::env::var_os(k)
            .filter(|v| !v.is_empty())
            .map(PathBuf::from)
    };
    if let Some(p) = env(CACHE_ENV) {
        return p;
    }
    if let Some(p) = env("XDG_CACHE_HOME") {
        return p.join("noodle");
    }
    if let Some(p) = env("HOME") {
        return p.join(".cache").join("noodle");
    }
    PathBuf::from(".noodle-cache")
}

impl Command {
    fn uses_cache(&self) -> bool {
        match self {
            Command::KappaLower(b) | Command::KappaUpper(b) | Command::KappaBounds(b) => {
                b.shapes != Shapes::Memory
            }
            Command::Cache(_) => true,
            _ => false,
        }
    }

    fn default_format(&self) -> Format {
        match self {
            Command::NcExperiment { .. } => Format::Csv,
            _ => Format::Json,
        }
    }
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<()> {
    let format = cli.format.unwrap_or_else(|| cli.command.default_format());
    let cache_dir = cli
        .command
        .uses_cache()
        .then(|| resolve_cache_dir(cli.cache_dir.as_ref()));
    let config = json!({
        "seed": cli.seed,
        "format": format,
        "output": cli.output,
        "cache_dir": cache_dir,
        "allow_long": cli.allow_long,
        "command": cli.command,
    });
    let start = Instant::now();
    let report = dispatch(cli, cache_dir)?;
    let seconds = cli.timing.then(|| start.elapsed().as_secs_f64());
    let text = match format {
        Format::Json => render_json(&config, &report, seconds)?,
        Format::Csv => render_csv(&config, &report, seconds)?,
    };
    match &cli.output {
        Some(path) => std::fs::write(path, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn check_long(k: usize, allow_long: bool) -> Result<()> {
    if k >= LONG_K && !allow_long {
        return Err(Error::resource(format!(
            "k = {k} is a long-running enumeration; pass --allow-long"
        )));
    }
    Ok(())
}

fn estimate_report(e: &KappaEstimate, n: Option<usize>) -> Result<Report> {
    let mut json = serde_json::to_value(e)?;
    json["n"] = json!(n);
    let mut r = Report::new(
        &json,
        vec![
            "n",
            "samples",
            "budget",
            "seed",
            "point",
            "low",
            "high",
            "std_error",
            "censored",
        ],
    )?;
    r = r.row(vec![
        opt(n),
        e.samples.to_string(),
        opt(e.budget),
        e.seed.to_string(),
        e.point.to_string(),
        e.low.to_string(),
        e.high.to_string(),
        e.std_error.to_string(),
        e.censored.to_string(),
    ]);
    Ok(r)
}

fn word_rows<T: ToString>(k: usize, items: &[T]) -> Vec<Vec<String>> {
    items
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let text = s.to_string();
            let (u, l) = text.split_once('/').unwrap_or((&text, ""));
            vec![k.to_string(), i.to_string(), u.to_string(), l.to_string()]
        })
        .collect()
}

fn dyadic_cells(v: &DyadicRational) -> [String; 2] {
    [v.numerator().to_string(), v.denominator().to_string()]
}

const BOUND_HEADER: [&str; 6] = ["bound", "k", "count", "num", "den", "decimal"];

fn bound_row(
    bound: &str,
    k: &str,
    count: String,
    v: &DyadicRational,
    decimal: &str,
) -> Vec<String> {
    let [num, den] = dyadic_cells(v);
    vec![bound.into(), k.into(), count, num, den, decimal.into()]
}

fn dispatch(cli: &Cli, cache_dir: Option<PathBuf>) -> Result<Report> {
    let seed = cli.seed;
    let source = |shapes: Shapes| -> Box<dyn ShapeSource> {
        let dir = cache_dir.clone().unwrap_or_default();
        match shapes {
            Shapes::Memory => Box::new(InMemory),
            Shapes::Cache => Box::new(DiskCache::new(dir, false)),
            Shapes::Fill => Box::new(DiskCache::new(dir, true)),
        }
    };
    match &cli.command {
        Command::SampleMs { n } => {
            let mut rng = RandomSource::new(seed);
            let sys = sample_meandric_system(*n, &mut rng);
            let cc = sys.cc();
            let res = json!({"n": n, "upper": sys.upper().to_string(), "lower": sys.lower().to_string(), "cc": cc});
            Ok(
                Report::new(&res, vec!["n", "seed", "upper", "lower", "cc"])?.row(vec![
                    n.to_string(),
                    seed.to_string(),
                    sys.upper().to_string(),
                    sys.lower().to_string(),
                    cc.to_string(),
                ]),
            )
        }
        Command::EstimateKappaFinite { n, samples } => {
            estimate_report(&estimate_kappa_finite(*n, *samples, seed)?, Some(*n))
        }
        Command::EstimateKappaNoodle { samples, budget } => {
            estimate_report(&estimate_kappa_noodle(*samples, *budget, seed)?, None)
        }
        Command::NoodleExplore {
            mode,
            start,
            budget,
        } => {
            let mut o = NoodleOracle::new(seed);
            let r = match mode {
                ExploreMode::Component => explore_component(&mut o, *start, *budget)?,
                ExploreMode::Partial => explore_partial_shape(&mut o, *budget)?,
            };
            let shape = r
                .shape
                .as_ref()
                .map(|s| s.to_string())
                .or_else(|| r.partial_shape.as_ref().map(|p| p.to_string()));
            let status = serde_json::to_value(r.status)?;
            let points: Vec<String> = r.points.iter().map(i64::to_string).collect();
            Ok(Report::new(
                &r,
                vec![
                    "seed",
                    "status",
                    "steps",
                    "size",
                    "k",
                    "leftmost_is_zero",
                    "shape",
                    "points",
                ],
            )?
            .row(vec![
                seed.to_string(),
                status.as_str().unwrap_or_default().to_string(),
                r.steps.to_string(),
                opt(r.size),
                opt(r.k),
                opt(r.leftmost_is_zero),
                shape.unwrap_or_default(),
                points.join(" "),
            ]))
        }
        Command::EnumerateMeanders { k } => {
            check_long(*k, cli.allow_long)?;
            if *k > MAX_MEANDER_K {
                return Err(Error::resource(format!(
                    "meanders are capped at k = {MAX_MEANDER_K}"
                )));
            }
            let ms = enumerate_meanders(*k)?;
            let res = json!({"k": k, "count": ms.len(), "meanders": ms.iter().map(|m| m.to_string()).collect::<Vec<_>>()});
            Ok(Report::new(&res, vec!["k", "index", "upper", "lower"])?.rows(word_rows(*k, &ms)))
        }
        Command::EnumerateOpen { k } => {
            check_long(*k, cli.allow_long)?;
            if *k > MAX_SHAPE_K {
                return Err(Error::resource(format!(
                    "open shapes are capped at k = {MAX_SHAPE_K}"
                )));
            }
            let ps = enumerate_partial_shapes(*k)?;
            let res = json!({"k": k, "count": ps.len(), "shapes": ps.iter().map(|p| p.to_string()).collect::<Vec<_>>()});
            Ok(Report::new(&res, vec!["k", "index", "upper", "lower"])?.rows(word_rows(*k, &ps)))
        }
        Command::KappaLower(b) => {
            check_long(b.kmax, cli.allow_long)?;
            let spec = TruncationSpec::new(b.kmax, b.lmax).with_arithmetic(b.arithmetic);
            let per_k = kappa_lower_terms(&spec, source(b.shapes).as_ref())?;
            let lower: DyadicRational = per_k.iter().map(|c| c.value.clone()).sum();
            let decimal = lower.to_decimal_floor(12);
            let res =
                json!({"lower": lower, "decimal_lower": decimal, "spec": spec, "per_k": per_k});
            let rows = per_k.iter().map(|c| {
                bound_row(
                    "lower",
                    &c.k.to_string(),
                    c.count.to_string(),
                    &c.value,
                    &c.decimal,
                )
            });
            Ok(Report::new(&res, BOUND_HEADER.to_vec())?
                .rows(rows)
                .row(bound_row("lower", "total", String::new(), &lower, &decimal)))
        }
        Command::KappaUpper(b) => {
            check_long(b.kmax, cli.allow_long)?;
            let spec = TruncationSpec::new(b.kmax, b.lmax).with_arithmetic(b.arithmetic);
            let per_k = kappa_upper_terms(&spec, source(b.shapes).as_ref())?;
            let sub: DyadicRational = per_k.iter().map(|c| c.value.clone()).sum();
            let upper = (&DyadicRational::pow2_inv(2) - &sub).scale_pow2(1);
            let decimal = upper.to_decimal_ceil(12);
            let res =
                json!({"upper": upper, "decimal_upper": decimal, "spec": spec, "per_k": per_k});
            let rows = per_k.iter().map(|c| {
                bound_row(
                    "open_mass",
                    &c.k.to_string(),
                    c.count.to_string(),
                    &c.value,
                    &c.decimal,
                )
            });
            Ok(Report::new(&res, BOUND_HEADER.to_vec())?
                .rows(rows)
                .row(bound_row("upper", "total", String::new(), &upper, &decimal)))
        }
        Command::KappaBounds(b) => {
            check_long(b.kmax, cli.allow_long)?;
            let spec = TruncationSpec::new(b.kmax, b.lmax).with_arithmetic(b.arithmetic);
            let r = kappa_bounds(&spec, source(b.shapes).as_ref())?;
            let mut rows: Vec<Vec<String>> = Vec::new();
            for c in &r.per_k_lower {
                rows.push(bound_row(
                    "lower",
                    &c.k.to_string(),
                    c.count.to_string(),
                    &c.value,
                    &c.decimal,
                ));
            }
            for c in &r.per_k_upper {
                rows.push(bound_row(
                    "open_mass",
                    &c.k.to_string(),
                    c.count.to_string(),
                    &c.value,
                    &c.decimal,
                ));
            }
            rows.push(bound_row(
                "lower",
                "total",
                String::new(),
                &r.lower,
                &r.decimal_lower,
            ));
            rows.push(bound_row(
                "upper",
                "total",
                String::new(),
                &r.upper,
                &r.decimal_upper,
            ));
            Ok(Report::new(&r, BOUND_HEADER.to_vec())?.rows(rows))
        }
        Command::NcDistance { n, pi, rho } => {
            let parse = |flag: &str, s: &str| {
                NCPartition::parse(s).map_err(|e| Error::Parse(format!("--{flag}: {e}")))
            };
            let (a, b) = (parse("pi", pi)?, parse("rho", rho)?);
            for p in [&a, &b] {
                if let Some(n) = n {
                    if p.n() != *n {
                        return Err(Error::domain(format!("{p} is not a partition of 1..{n}")));
                    }
                }
            }
            let distance = distance_via_cc(&a, &b)?;
            let cc = gnp_meandric_system(&a, &b)?.cc();
            let bfs = if a.n() <= HASSE_CAP {
                Some(HasseGraph::new(a.n(), HASSE_CAP)?.distance(&a, &b)?)
            } else {
                None
            };
            let res = json!({"n": a.n(), "pi": a.to_string(), "rho": b.to_string(), "distance": distance, "cc": cc, "bfs_distance": bfs});
            Ok(Report::new(
                &res,
                vec!["n", "pi", "rho", "distance", "cc", "bfs_distance"],
            )?
            .row(vec![
                a.n().to_string(),
                a.to_string(),
                b.to_string(),
                distance.to_string(),
                cc.to_string(),
                opt(bfs),
            ]))
        }
        Command::NcVerify { n } => {
            let g = HasseGraph::new(*n, HASSE_CAP)?;
            let vs = g.vertices();
            let mut mismatches = Vec::new();
            for a in vs {
                let dist = g.distances_from(a)?;
                for (b, &d) in vs.iter().zip(&dist) {
                    if distance_via_cc(a, b)? != d {
                        mismatches.push(format!("{a} ~ {b}"));
                    }
                }
            }
            let pairs = vs.len() * vs.len();
            let res = json!({"n": n, "vertices": vs.len(), "edges": g.edge_count(), "pairs": pairs, "mismatches": mismatches});
            Ok(
                Report::new(&res, vec!["n", "vertices", "edges", "pairs", "mismatches"])?.row(
                    vec![
                        n.to_string(),
                        vs.len().to_string(),
                        g.edge_count().to_string(),
                        pairs.to_string(),
                        mismatches.len().to_string(),
                    ],
                ),
            )
        }
        Command::NcExperiment { n, samples } => {
            let e = typical_distance_experiment(*n, *samples, seed)?;
            Ok(Report::new(
                &e,
                vec!["n", "seed", "mean_d_over_n", "mean_d0_over_n", "samples"],
            )?
            .row(vec![
                e.n.to_string(),
                e.seed.to_string(),
                e.mean_d_over_n.to_string(),
                e.mean_d0_over_n.to_string(),
                e.samples.to_string(),
            ]))
        }
        Command::LocalProfile { n, k, marks } => {
            let p = local_profile(*n, *k, *marks, seed)?;
            Ok(Report::new(
                &p,
                vec!["n", "radius", "marks", "seed", "patterns_seen", "tv"],
            )?
            .row(vec![
                p.n.to_string(),
                p.radius.to_string(),
                p.marks.to_string(),
                p.seed.to_string(),
                p.patterns_seen.to_string(),
                p.tv.to_string(),
            ]))
        }
        Command::Cache(c) => {
            let dir = cache_dir.unwrap_or_default();
            if let CacheCommand::Build { kmax } = c {
                check_long(*kmax, cli.allow_long)?;
                let cache = DiskCache::new(&dir, true);
                for k in 1..=*kmax {
                    cache.meanders(k)?;
                    cache.partial_shapes(k)?;
                }
            }
            let m = DiskCache::new(&dir, false).manifest()?;
            let rows = m
                .entries
                .iter()
                .map(|(f, c)| vec![f.clone(), c.to_string()]);
            Ok(Report::new(&m, vec!["file", "records"])?.rows(rows))
        }
    }
}
