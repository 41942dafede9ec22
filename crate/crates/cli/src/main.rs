//! `csgeom`: distances, similarities, hyperball volumes, Monte-Carlo
//! estimates, and in-ball samples for conceptual spaces.
//!
//! Exit codes: 0 success, 2 I/O or parse error, 3 constraint violation,
//! 4 bad flag usage.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use csgeom_core::sampler::{mc_volume, predicted_hits, sample_in_ball};
use csgeom_core::space::{parse_space, parse_space_lenient, validate_weights};
use csgeom_core::volume::{
    ball_volume, radius_from_similarity, radius_from_volume, BallQuery,
};
use csgeom_core::{
    metric, Error, McConfig, Point, SimilarityParams, SpaceSpec, WeightSet,
};

const EXIT_PARSE: u8 = 2;
const EXIT_CONSTRAINT: u8 = 3;
const EXIT_USAGE: u8 = 4;

#[derive(Parser)]
#[command(name = "csgeom", about = "Geometry of conceptual spaces", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct SpaceArg {
    /// Path to the space-definition JSON file
    #[arg(long)]
    space: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form hyperball volume
    Volume {
        #[command(flatten)]
        space: SpaceArg,
        /// Ball radius
        #[arg(long)]
        r: f64,
        /// Apply the file's weights (uniform if the file has none)
        #[arg(long)]
        weighted: bool,
        #[arg(long)]
        json: bool,
    },
    /// Radius from a target volume, or from a similarity threshold
    Radius {
        #[command(flatten)]
        space: SpaceArg,
        /// Target volume (mutually exclusive with --alpha/--c)
        #[arg(long, allow_hyphen_values = true)]
        volume: Option<f64>,
        /// Minimal similarity to the center
        #[arg(long)]
        alpha: Option<f64>,
        /// Similarity sensitivity constant
        #[arg(long)]
        c: Option<f64>,
        #[arg(long)]
        weighted: bool,
        #[arg(long)]
        json: bool,
    },
    /// Combined distance between two points
    Distance {
        #[command(flatten)]
        space: SpaceArg,
        /// First point, comma-separated coordinates in space order
        #[arg(long)]
        x: String,
        /// Second point, comma-separated coordinates in space order
        #[arg(long)]
        y: String,
        #[arg(long)]
        json: bool,
    },
    /// Similarity exp(-c * d) between two points
    Similarity {
        #[command(flatten)]
        space: SpaceArg,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        /// Sensitivity constant
        #[arg(long)]
        c: f64,
        #[arg(long)]
        json: bool,
    },
    /// Monte-Carlo volume estimate with closed-form comparison
    Estimate {
        #[command(flatten)]
        space: SpaceArg,
        #[arg(long)]
        r: f64,
        #[arg(long, default_value_t = 1_000_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Trials per RNG substream
        #[arg(long, default_value_t = 65_536)]
        chunk: u64,
        #[arg(long)]
        weighted: bool,
        #[arg(long)]
        json: bool,
    },
    /// Uniform samples from the ball, as CSV
    Sample {
        #[command(flatten)]
        space: SpaceArg,
        #[arg(long)]
        r: f64,
        #[arg(long, default_value_t = 100)]
        count: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        weighted: bool,
        /// Output CSV path (stdout if omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Validate a space file, reporting each constraint
    Check {
        #[command(flatten)]
        space: SpaceArg,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }

    fn usage(message: impl Into<String>) -> Self {
        Failure::new(EXIT_USAGE, message)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Parse(_) => EXIT_PARSE,
            Error::InvalidArgument(_) => EXIT_USAGE,
            _ => EXIT_CONSTRAINT,
        };
        Failure::new(code, e.to_string())
    }
}

/// 12 significant digits, matching the library value to the last digit.
fn sig(v: f64) -> String {
    format!("{v:.11e}")
}

fn load_space(path: &PathBuf) -> Result<(SpaceSpec, Option<WeightSet>), Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::new(EXIT_PARSE, format!("cannot read {}: {e}", path.display())))?;
    Ok(parse_space(&text)?)
}

/// Resolves the weights for a query: file weights when present, the uniform
/// default when `--weighted` is given without a weights section, none
/// otherwise.
fn resolve_weights(
    spec: &SpaceSpec,
    file_weights: Option<WeightSet>,
    weighted: bool,
) -> Option<WeightSet> {
    match (file_weights, weighted) {
        (Some(w), _) => Some(w),
        (None, true) => Some(WeightSet::uniform(spec)),
        (None, false) => None,
    }
}

fn parse_point(spec: &SpaceSpec, text: &str) -> Result<Point, Failure> {
    let coords: Result<Vec<f64>, _> = text.split(',').map(|t| t.trim().parse::<f64>()).collect();
    let coords =
        coords.map_err(|e| Failure::usage(format!("cannot parse point `{text}`: {e}")))?;
    let p = Point::new(coords)?;
    spec.check_point(&p)?;
    Ok(p)
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Volume {
            space,
            r,
            weighted,
            json,
        } => {
            let (spec, file_w) = load_space(&space.space)?;
            let weights = resolve_weights(&spec, file_w, weighted);
            let q = BallQuery::new(&spec, weights.as_ref(), r)?;
            let v = ball_volume(&q)?;
            let value = v.value();
            let sizes = spec.domain_sizes();
            if json {
                println!(
                    "{}",
                    json!({
                        "n": spec.n(),
                        "k": spec.domain_count(),
                        "domain_sizes": sizes,
                        "r": r,
                        "weighted": weights.is_some(),
                        "log_volume": v.log_value(),
                        "volume": if value.is_finite() { Some(value) } else { None },
                    })
                );
            } else {
                println!("n: {}", spec.n());
                println!("k: {}", spec.domain_count());
                println!(
                    "domain sizes: {}",
                    sizes.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(" ")
                );
                println!("log-volume: {}", sig(v.log_value()));
                if value.is_finite() {
                    println!("volume: {}", sig(value));
                } else {
                    println!("volume: overflow: log-volume only");
                }
            }
            Ok(())
        }
        Command::Radius {
            space,
            volume,
            alpha,
            c,
            weighted,
            json,
        } => {
            let (spec, file_w) = load_space(&space.space)?;
            let r = match (volume, alpha, c) {
                (Some(v), None, None) => {
                    let weights = resolve_weights(&spec, file_w, weighted);
                    radius_from_volume(&spec, weights.as_ref(), v)?
                }
                (None, Some(alpha), Some(c)) => {
                    let params = SimilarityParams::new(c)?;
                    radius_from_similarity(params, alpha)?
                }
                _ => {
                    return Err(Failure::usage(
                        "give exactly one mode: --volume, or --alpha together with --c",
                    ))
                }
            };
            if json {
                println!("{}", json!({ "radius": r }));
            } else {
                println!("radius: {}", sig(r));
            }
            Ok(())
        }
        Command::Distance { space, x, y, json } => {
            let (spec, file_w) = load_space(&space.space)?;
            let weights = file_w.unwrap_or_else(|| WeightSet::uniform(&spec));
            let px = parse_point(&spec, &x)?;
            let py = parse_point(&spec, &y)?;
            let d = metric::combined_distance(&spec, &weights, &px, &py)?;
            if json {
                println!("{}", json!({ "distance": d }));
            } else {
                println!("distance: {}", sig(d));
            }
            Ok(())
        }
        Command::Similarity { space, x, y, c, json } => {
            let (spec, file_w) = load_space(&space.space)?;
            let weights = file_w.unwrap_or_else(|| WeightSet::uniform(&spec));
            let params = SimilarityParams::new(c)?;
            let px = parse_point(&spec, &x)?;
            let py = parse_point(&spec, &y)?;
            let s = metric::similarity(&spec, &weights, params, &px, &py)?;
            if json {
                println!("{}", json!({ "similarity": s }));
            } else {
                println!("similarity: {}", sig(s));
            }
            Ok(())
        }
        Command::Estimate {
            space,
            r,
            trials,
            seed,
            chunk,
            weighted,
            json,
        } => {
            let (spec, file_w) = load_space(&space.space)?;
            let weights = resolve_weights(&spec, file_w, weighted);
            let q = BallQuery::new(&spec, weights.as_ref(), r)?;
            let cfg = McConfig::new(trials, seed, chunk)?;
            if predicted_hits(&q, trials)? < 100.0 {
                eprintln!(
                    "warning: expected hit count below 100; the estimate will be noisy \
                     (the ball fills a tiny fraction of its bounding box)"
                );
            }
            let report = mc_volume(&q, &cfg)?;
            let exact = ball_volume(&q)?;
            let z = (report.volume_estimate - exact.value()) / report.std_error;
            if json {
                println!(
                    "{}",
                    json!({
                        "estimate": report.volume_estimate,
                        "std_error": report.std_error,
                        "trials": report.trials,
                        "hits": report.hits,
                        "bounding_box_volume": report.bounding_box_volume,
                        "seed": report.seed,
                        "chunk": chunk,
                        "exact": exact.value(),
                        "z_score": z,
                    })
                );
            } else {
                println!("estimate: {}", sig(report.volume_estimate));
                println!("std error: {}", sig(report.std_error));
                println!("trials: {}", report.trials);
                println!("hits: {}", report.hits);
                println!("bounding box volume: {}", sig(report.bounding_box_volume));
                println!("seed: {}", report.seed);
                println!("exact: {}", sig(exact.value()));
                println!("z-score: {}", sig(z));
            }
            Ok(())
        }
        Command::Sample {
            space,
            r,
            count,
            seed,
            weighted,
            out,
        } => {
            let (spec, file_w) = load_space(&space.space)?;
            let weights = resolve_weights(&spec, file_w, weighted);
            let q = BallQuery::new(&spec, weights.as_ref(), r)?;
            let points = sample_in_ball(&q, count, seed)?;
            let mut csv = String::new();
            csv.push_str(&spec.dimension_names().join(","));
            csv.push('\n');
            for p in &points {
                let row: Vec<String> = p.coords().iter().map(|c| format!("{c:.12e}")).collect();
                csv.push_str(&row.join(","));
                csv.push('\n');
            }
            match out {
                Some(path) => fs::write(&path, csv).map_err(|e| {
                    Failure::new(EXIT_PARSE, format!("cannot write {}: {e}", path.display()))
                })?,
                None => {
                    std::io::stdout().write_all(csv.as_bytes()).map_err(|e| {
                        Failure::new(EXIT_PARSE, format!("cannot write to stdout: {e}"))
                    })?;
                }
            }
            Ok(())
        }
        Command::Check { space } => cmd_check(&space.space),
    }
}

fn cmd_check(path: &PathBuf) -> Result<(), Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::new(EXIT_PARSE, format!("cannot read {}: {e}", path.display())))?;
    let (spec, weights) = match parse_space_lenient(&text) {
        Ok(parsed) => parsed,
        Err(e @ Error::Parse(_)) => return Err(e.into()),
        Err(e) => {
            println!("FAIL structure: {e}");
            return Err(Failure::new(EXIT_CONSTRAINT, "space file is invalid"));
        }
    };
    println!(
        "PASS structure: {} domains, {} dimensions, names unique",
        spec.domain_count(),
        spec.n()
    );
    let mut failed = false;
    match weights {
        None => println!("PASS weights: no weights section (uniform default applies)"),
        Some(w) => {
            // Run positivity/coverage first; sums only make sense after those.
            match validate_weights(&spec, &w) {
                Ok(()) => {
                    for d in spec.domains() {
                        let sum: f64 =
                            d.dimensions.iter().map(|dim| w.dimension_weight(dim).unwrap()).sum();
                        println!(
                            "PASS weights: dimension weights in `{}` sum to 1 (residual {:e})",
                            d.name,
                            (sum - 1.0).abs()
                        );
                    }
                    let dsum: f64 = w.domain_weights().values().sum();
                    let k = spec.domain_count() as f64;
                    println!(
                        "PASS weights: domain weights sum to {k} (residual {:e})",
                        (dsum - k).abs()
                    );
                }
                Err(e) => {
                    println!("FAIL weights: {e}");
                    failed = true;
                }
            }
        }
    }
    if failed {
        Err(Failure::new(EXIT_CONSTRAINT, "space file failed validation"))
    } else {
        Ok(())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
