//! The `coarseplane` command line.
//!
//! Exit codes: 0 success, 1 file i/o failure, 2 usage or validation error,
//! 3 search budget or geodesic cap exceeded.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::error::{Error, Result};
use crate::export::{to_dot, to_svg};
use crate::fraction::Fraction;
use crate::generators::{GeneratorSpec, Schedule};
use crate::hull::geodetic_hull;
use crate::iso::{
    cheeger_from_survey, core_vertices, survey_subsets, IsoProfile, SearchConfig, DEFAULT_BUDGET,
};
use crate::map::{load, to_json, FaceId, PlanarMap};
use crate::metric::Metric;
use crate::pipeline::{analyze, Caps, DEFAULT_DELTA_TRIALS, DEFAULT_GEODESIC_CAP};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

/// Environment variable holding the worker thread count.
pub const THREADS_VAR: &str = "COARSEPLANE_THREADS";

#[derive(Parser, Debug)]
#[command(
    name = "coarseplane",
    version,
    about = "Coarse geometry of plane graph windows"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a window as planar-map-v1.
    Gen(GenArgs),
    /// Run every measurement and write a report-v1 document.
    Analyze {
        #[arg(short, long)]
        input: PathBuf,
        #[command(flatten)]
        caps: CapArgs,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Trace the geodetic hull of one bounded face.
    Hull {
        #[arg(short, long)]
        input: PathBuf,
        /// Face index in trace order.
        #[arg(long)]
        face: usize,
        #[arg(long, default_value_t = DEFAULT_GEODESIC_CAP)]
        geodesic_cap: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Isoperimetric profile and Cheeger ratio over connected core subsets.
    Profile {
        #[arg(short, long)]
        input: PathBuf,
        /// Largest subset size enumerated.
        #[arg(long)]
        cap: usize,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        enum_budget: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Render a window as Graphviz DOT or SVG.
    Export {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(long, value_enum)]
        format: ExportFormat,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ExportFormat {
    Dot,
    Svg,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Family {
    Grid,
    Tessellation,
    Tree,
    G1,
    G2,
    Dyadic,
    DyadicSquare,
    Composite,
}

#[derive(Args, Debug)]
struct GenArgs {
    #[arg(value_enum)]
    family: Family,
    /// Grid side, or number of attached copies for composite.
    #[arg(long)]
    n: Option<usize>,
    /// Face length of the tessellation (also the base of g1/g2).
    #[arg(long, default_value_t = 4)]
    p: usize,
    /// Vertex degree of the tessellation.
    #[arg(long, default_value_t = 5)]
    q: usize,
    /// Combinatorial radius of the tessellation window.
    #[arg(long, default_value_t = 3)]
    r: usize,
    #[arg(long, default_value_t = 3)]
    degree: usize,
    #[arg(long)]
    radius: Option<usize>,
    #[arg(long)]
    levels: Option<usize>,
    #[arg(long)]
    width: Option<usize>,
    /// Side of the dyadic square.
    #[arg(long)]
    a: Option<usize>,
    /// Spoke lengths for g1/g2, one seeded core face each (comma separated).
    #[arg(long, value_delimiter = ',')]
    ns: Vec<usize>,
    /// Explicit g1/g2 schedule as FACE:N pairs (comma separated).
    #[arg(long, value_delimiter = ',')]
    faces: Vec<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CapArgs {
    #[arg(long, default_value_t = 6)]
    size_cap: usize,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    enum_budget: u64,
    #[arg(long, default_value_t = DEFAULT_GEODESIC_CAP)]
    geodesic_cap: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_DELTA_TRIALS)]
    delta_trials: usize,
}

fn need(value: Option<usize>, flag: &str, family: &str) -> Result<usize> {
    value.ok_or_else(|| Error::InvalidParameter(format!("{family} needs --{flag}")))
}

fn spec_of(args: &GenArgs) -> Result<GeneratorSpec> {
    let tess = GeneratorSpec::Tessellation {
        p: args.p,
        q: args.q,
        r: args.r,
    };
    Ok(match args.family {
        Family::Grid => GeneratorSpec::Grid {
            n: need(args.n, "n", "grid")?,
        },
        Family::Tessellation => tess,
        Family::Tree => GeneratorSpec::Tree {
            degree: args.degree,
            radius: need(args.radius, "radius", "tree")?,
        },
        Family::G1 | Family::G2 => {
            let schedule = if !args.faces.is_empty() {
                let pairs = args
                    .faces
                    .iter()
                    .map(|s| {
                        let (f, n) = s.split_once(':').ok_or_else(|| {
                            Error::InvalidParameter(format!("schedule entry {s:?} is not FACE:N"))
                        })?;
                        let parse = |t: &str| {
                            t.trim().parse::<usize>().map_err(|_| {
                                Error::InvalidParameter(format!(
                                    "schedule entry {s:?} is not FACE:N"
                                ))
                            })
                        };
                        Ok((parse(f)?, parse(n)?))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Schedule::Explicit(pairs)
            } else if !args.ns.is_empty() {
                Schedule::Seeded {
                    ns: args.ns.clone(),
                    seed: args.seed,
                }
            } else {
                return Err(Error::InvalidParameter("g1/g2 need --ns or --faces".into()));
            };
            let base = Box::new(tess);
            if matches!(args.family, Family::G1) {
                GeneratorSpec::G1 { base, schedule }
            } else {
                GeneratorSpec::G2 { base, schedule }
            }
        }
        Family::Dyadic => GeneratorSpec::Dyadic {
            levels: need(args.levels, "levels", "dyadic")?,
            width: need(args.width, "width", "dyadic")?,
        },
        Family::DyadicSquare => GeneratorSpec::DyadicSquare {
            a: need(args.a, "a", "dyadic-square")?,
        },
        Family::Composite => GeneratorSpec::Composite {
            n: need(args.n, "n", "composite")?,
            levels: need(args.levels, "levels", "composite")?,
        },
    })
}

enum Failure {
    Io(String),
    Domain(Error),
    /// Output was written but some measurement hit a budget or cap.
    Truncated,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Io(msg) => Failure::Io(msg),
            other => Failure::Domain(other),
        }
    }
}

fn emit(out: &mut dyn Write, path: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => {
            std::fs::write(p, text).map_err(|e| Failure::Io(format!("{}: {e}", p.display())))
        }
        None => out
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Io(e.to_string())),
    }
}

fn read(path: &PathBuf) -> Result<PlanarMap, Failure> {
    Ok(load(path)?)
}

fn execute(cli: Cli, out: &mut dyn Write) -> Result<(), Failure> {
    match cli.command {
        Command::Gen(args) => {
            let map = spec_of(&args)?.generate()?;
            emit(out, &args.output, &to_json(&map))
        }
        Command::Analyze {
            input,
            caps,
            output,
        } => {
            let map = read(&input)?;
            let caps = Caps {
                size_cap: caps.size_cap,
                budget: caps.enum_budget,
                geodesic_cap: caps.geodesic_cap,
                seed: caps.seed,
                delta_trials: caps.delta_trials,
            };
            let report = analyze(&map, caps)?;
            emit(out, &output, &report.to_json())?;
            if report.truncated() {
                return Err(Failure::Truncated);
            }
            Ok(())
        }
        Command::Hull {
            input,
            face,
            geodesic_cap,
            output,
        } => {
            let map = read(&input)?;
            if geodesic_cap == 0 {
                return Err(Error::InvalidParameter("geodesic cap must be positive".into()).into());
            }
            let metric = Metric::new(&map);
            let trace = geodetic_hull(&metric, FaceId::from(face), geodesic_cap)?;
            let mut text = serde_json::to_string_pretty(&trace.to_json(&map)).unwrap();
            text.push('\n');
            emit(out, &output, &text)
        }
        Command::Profile {
            input,
            cap,
            enum_budget,
            output,
        } => {
            let map = read(&input)?;
            if cap == 0 || enum_budget == 0 {
                return Err(
                    Error::InvalidParameter("cap and budget must be positive".into()).into(),
                );
            }
            let cfg = SearchConfig {
                size_cap: cap,
                budget: enum_budget,
            };
            let survey = survey_subsets(&map, &core_vertices(&map), cfg);
            let cheeger = cheeger_from_survey(&map, &survey, cfg)?;
            let profile = IsoProfile::from_survey(&survey);
            let labels =
                |vs: &[crate::map::VertexId]| vs.iter().map(|&v| map.label(v)).collect::<Vec<_>>();
            let doc = json!({
                "size_cap": cap,
                "states": survey.states,
                "exhaustive": survey.exhaustive,
                "cheeger": {
                    "ratio": Fraction::from(cheeger.ratio),
                    "witness": labels(&cheeger.witness),
                    "disconnected_bound": Fraction::from(cheeger.disconnected_bound),
                },
                "points": profile.points.iter().map(|w| json!({
                    "boundary": w.boundary,
                    "size": w.size,
                    "witness": labels(&w.vertices),
                })).collect::<Vec<_>>(),
            });
            let mut text = serde_json::to_string_pretty(&doc).unwrap();
            text.push('\n');
            emit(out, &output, &text)
        }
        Command::Export {
            input,
            format,
            output,
        } => {
            let map = read(&input)?;
            let text = match format {
                ExportFormat::Dot => to_dot(&map),
                ExportFormat::Svg => to_svg(&map),
            };
            emit(out, &output, &text)
        }
    }
}

fn configure_threads() -> Result<(), String> {
    let Ok(value) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| format!("{THREADS_VAR} must be a positive integer, got {value:?}"))?;
    // a pool may already exist when called from a test harness
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global();
    Ok(())
}

/// Parses `args` (program name first), runs the command and returns the
/// exit code. Results go to `out` or to the `-o` file, messages to `err`.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                return EXIT_INVALID;
            }
            let _ = write!(out, "{}", e.render());
            return EXIT_OK;
        }
    };
    if let Err(msg) = configure_threads() {
        let _ = writeln!(err, "error: {msg}");
        return EXIT_INVALID;
    }
    match execute(cli, out) {
        Ok(()) => EXIT_OK,
        Err(Failure::Io(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_IO
        }
        Err(Failure::Truncated) => {
            let _ = writeln!(err, "warning: a budget or cap was reached; the report marks the affected fields advisory");
            EXIT_BUDGET
        }
        Err(Failure::Domain(e)) => {
            let _ = writeln!(err, "error: {e}");
            if e.is_budget() {
                let _ = writeln!(
                    err,
                    "hint: raise --enum-budget / --geodesic-cap or lower --size-cap / --cap"
                );
                EXIT_BUDGET
            } else {
                EXIT_INVALID
            }
        }
    }
}

pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    run_with(
        args,
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    )
}
