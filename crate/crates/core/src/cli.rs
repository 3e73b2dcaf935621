//! Command-line front end.
//!
//! Exit codes: 0 success, 2 infeasible query, 64 usage error, 66 I/O error.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::cache::{ResultCache, CACHE_DIR_ENV};
use crate::coarray::difference_coarray;
use crate::output::{join, AnalysisRecord, DesignDocument, Format};
use crate::reference::{ReferenceFamily, ReferenceSpec};
use crate::search::{sweep_with, DesignResult, Landscape, Objective, SearchError, SweepOutcome};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INFEASIBLE: i32 = 2;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_IO: i32 = 66;

#[derive(Debug, Parser)]
#[command(
    name = "mlpa",
    version,
    about = "Exhaustive design of multi-level prime arrays"
)]
pub struct Cli {
    #[command(flatten)]
    pub common: CommonOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct CommonOpts {
    /// Cache directory for search results (overrides MLPA_CACHE_DIR)
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    /// Always recompute, never read or write the cache
    #[arg(long, global = true)]
    pub no_cache: bool,
    /// Number of worker threads (default: all cores)
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Find the optimal configuration for N elements over L levels
    Design {
        /// Total element count N
        #[arg(long)]
        elements: u32,
        /// Number of levels L
        #[arg(long)]
        levels: u32,
        /// unique, consecutive or joint
        #[arg(long, default_value = "unique")]
        objective: Objective,
        /// List every tied optimum instead of only the recommended one
        #[arg(long)]
        all_ties: bool,
        /// table, json or csv
        #[arg(long, default_value = "table")]
        format: Format,
        /// Also print positions in wavelengths (d = λ/2)
        #[arg(long)]
        wavelength: bool,
        /// Upper bound on every subarray element count
        #[arg(long)]
        max_count: Option<u32>,
    },
    /// Optimal spacings for both objectives over a range of N
    Sweep {
        /// Number of levels L
        #[arg(long)]
        levels: u32,
        /// Smallest N, inclusive
        #[arg(long)]
        min: u32,
        /// Largest N, inclusive
        #[arg(long)]
        max: u32,
        /// Output file (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value = "csv", value_parser = ["csv", "json"])]
        format: String,
    },
    /// Coarray metrics of an arbitrary geometry
    Analyze {
        /// Comma-separated nonnegative integer positions in units of d
        #[arg(long)]
        positions: String,
        /// table, json or csv
        #[arg(long, default_value = "table")]
        format: Format,
        /// Also print positions in wavelengths (d = λ/2)
        #[arg(long)]
        wavelength: bool,
    },
    /// Unit-spacing counts of MLPA optima and reference arrays versus N
    Compare {
        /// Level counts evaluated for the MLPA family
        #[arg(long, value_delimiter = ',', default_value = "3,4")]
        levels_list: Vec<u32>,
        /// Smallest N, inclusive
        #[arg(long)]
        min: u32,
        /// Largest N, inclusive
        #[arg(long)]
        max: u32,
        /// Any of mlpa, nested, coprime
        #[arg(long, value_delimiter = ',', default_value = "mlpa,nested,coprime")]
        families: Vec<String>,
        /// Output CSV file (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn io(path: &Path, e: std::io::Error) -> Self {
        Failure {
            code: EXIT_IO,
            message: format!("cannot write {}: {e}", path.display()),
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let outcome = match cli.common.threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| execute(&cli)),
            Err(e) => Err(Failure::usage(format!(
                "cannot start {n} worker threads: {e}"
            ))),
        },
        None => execute(&cli),
    };
    match outcome.and_then(|text| {
        stdout
            .write_all(text.as_bytes())
            .map_err(|e| Failure::io(Path::new("<stdout>"), e))
    }) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}

struct Runner {
    cache: Option<ResultCache>,
}

impl Runner {
    fn new(opts: &CommonOpts) -> Self {
        let dir = opts
            .cache_dir
            .clone()
            .or_else(|| std::env::var_os(CACHE_DIR_ENV).map(PathBuf::from));
        Runner {
            cache: dir.filter(|_| !opts.no_cache).map(ResultCache::new),
        }
    }

    fn landscape(&self, total: u32, levels: u32, bound: Option<u32>) -> Landscape {
        match &self.cache {
            Some(c) => c.get_or_explore(total, levels, bound).0,
            None => Landscape::explore(total, levels, bound),
        }
    }
}

/// Runs the command, returning the text destined for stdout.
fn execute(cli: &Cli) -> Result<String, Failure> {
    let runner = Runner::new(&cli.common);
    match &cli.command {
        Command::Design {
            elements,
            levels,
            objective,
            all_ties,
            format,
            wavelength,
            max_count,
        } => {
            let result = design(&runner, *elements, *levels, *objective, *max_count)?;
            let doc = DesignDocument::new(&result, *all_ties, *wavelength);
            emit(None, &doc.render(*format))
        }
        Command::Sweep {
            levels,
            min,
            max,
            out,
            format,
        } => {
            if *levels < 2 {
                return Err(Failure::usage("--levels must be at least 2"));
            }
            let text = sweep_output(&runner, *levels, *min, *max, format == "json");
            emit(out.as_deref(), &text)
        }
        Command::Analyze {
            positions,
            format,
            wavelength,
        } => {
            let positions = parse_positions(positions)?;
            let report =
                difference_coarray(&positions).map_err(|e| Failure::usage(e.to_string()))?;
            let record = AnalysisRecord::new(&positions, &report, *wavelength);
            emit(None, &record.render(*format))
        }
        Command::Compare {
            levels_list,
            min,
            max,
            families,
            out,
        } => {
            let families = families
                .iter()
                .map(|f| parse_family(f))
                .collect::<Result<Vec<_>, _>>()?;
            if levels_list.iter().any(|&l| l < 2) {
                return Err(Failure::usage(
                    "every entry of --levels-list must be at least 2",
                ));
            }
            let text = compare_output(&runner, levels_list, *min, *max, &families);
            emit(out.as_deref(), &text)
        }
    }
}

fn design(
    runner: &Runner,
    elements: u32,
    levels: u32,
    objective: Objective,
    bound: Option<u32>,
) -> Result<DesignResult, Failure> {
    if levels < 2 || elements < 1 {
        return Err(Failure::usage(
            "--levels must be at least 2 and --elements at least 1",
        ));
    }
    runner
        .landscape(elements, levels, bound)
        .resolve(objective)
        .map_err(|e| match e {
            SearchError::Infeasible { .. } => Failure {
                code: EXIT_INFEASIBLE,
                message: e.to_string(),
            },
            other => Failure::usage(other.to_string()),
        })
}

fn emit(out: Option<&Path>, text: &str) -> Result<String, Failure> {
    match out {
        Some(path) => fs::write(path, text)
            .map(|_| String::new())
            .map_err(|e| Failure::io(path, e)),
        None => Ok(text.to_string()),
    }
}

fn parse_positions(text: &str) -> Result<Vec<u64>, Failure> {
    let trimmed = text.trim();
    if trimmed.is_empty() {
        return Err(Failure::usage("--positions is empty"));
    }
    trimmed
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<u64>()
                .map_err(|_| Failure::usage(format!("malformed position {:?}", s.trim())))
        })
        .collect()
}

fn parse_family(name: &str) -> Result<Family, Failure> {
    match name.trim() {
        "mlpa" => Ok(Family::Mlpa),
        other => other
            .parse::<ReferenceFamily>()
            .map(Family::Reference)
            .map_err(Failure::usage),
    }
}

#[derive(Debug, Clone, Copy)]
enum Family {
    Mlpa,
    Reference(ReferenceFamily),
}

#[derive(Debug, Serialize)]
struct SweepRow {
    #[serde(rename = "N")]
    n: u32,
    #[serde(rename = "L")]
    l: u32,
    objective: Objective,
    status: &'static str,
    spacing: Vec<u32>,
    partition: Vec<u32>,
    l_ug: Option<u64>,
    l_cg: Option<u64>,
    v_delta: Option<u64>,
    aperture: Option<u64>,
    hole_count: Option<u64>,
    is_joint: Option<bool>,
    ties: Option<usize>,
}

fn sweep_rows(runner: &Runner, levels: u32, min: u32, max: u32) -> Vec<SweepRow> {
    let entries = sweep_with(levels, min..=max, |n, l| runner.landscape(n, l, None));
    let mut rows = Vec::new();
    for e in entries {
        for objective in [Objective::Unique, Objective::Consecutive] {
            let row = match &e.outcome {
                SweepOutcome::Infeasible => SweepRow {
                    n: e.total_elements,
                    l: levels,
                    objective,
                    status: "infeasible",
                    spacing: Vec::new(),
                    partition: Vec::new(),
                    l_ug: None,
                    l_cg: None,
                    v_delta: None,
                    aperture: None,
                    hole_count: None,
                    is_joint: None,
                    ties: None,
                },
                SweepOutcome::Feasible {
                    unique,
                    consecutive,
                } => {
                    let result = if objective == Objective::Unique {
                        unique
                    } else {
                        consecutive
                    };
                    let best = result.recommended().expect("single objective has optima");
                    SweepRow {
                        n: e.total_elements,
                        l: levels,
                        objective,
                        status: "ok",
                        spacing: best.config.spacing.spacings().to_vec(),
                        partition: best.config.partition.counts().to_vec(),
                        l_ug: Some(best.report.unique_count),
                        l_cg: Some(best.report.consecutive_count),
                        v_delta: Some(best.report.unit_spacing_count),
                        aperture: Some(best.config.aperture),
                        hole_count: Some(best.report.hole_count),
                        is_joint: Some(result.is_joint),
                        ties: Some(result.optima.len()),
                    }
                }
            };
            rows.push(row);
        }
    }
    rows
}

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(ToString::to_string).unwrap_or_default()
}

/// CSV (or JSON) trace of optimal spacings: one row per `(N, objective)`,
/// with spacing columns `S1..SL`.
fn sweep_output(runner: &Runner, levels: u32, min: u32, max: u32, json: bool) -> String {
    let rows = sweep_rows(runner, levels, min, max);
    if json {
        let mut s = serde_json::to_string_pretty(&rows).expect("serializable");
        s.push('\n');
        return s;
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header: Vec<String> = ["N", "L", "objective", "status"].map(String::from).to_vec();
    header.extend((1..=levels).map(|i| format!("S{i}")));
    header.extend(
        [
            "partition",
            "l_ug",
            "l_cg",
            "v_delta",
            "aperture",
            "hole_count",
            "is_joint",
            "ties",
        ]
        .map(String::from),
    );
    w.write_record(&header).expect("in-memory write");
    for r in &rows {
        let mut rec = vec![
            r.n.to_string(),
            r.l.to_string(),
            r.objective.to_string(),
            r.status.to_string(),
        ];
        if r.spacing.is_empty() {
            rec.extend((0..levels).map(|_| String::new()));
        } else {
            rec.extend(r.spacing.iter().map(ToString::to_string));
        }
        rec.extend([
            join(&r.partition),
            opt(&r.l_ug),
            opt(&r.l_cg),
            opt(&r.v_delta),
            opt(&r.aperture),
            opt(&r.hole_count),
            opt(&r.is_joint),
            opt(&r.ties),
        ]);
        w.write_record(&rec).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
}

pub const COMPARE_HEADER: [&str; 10] = [
    "N",
    "family",
    "levels",
    "objective",
    "params",
    "status",
    "v_delta",
    "l_ug",
    "l_cg",
    "aperture",
];

fn compare_output(
    runner: &Runner,
    levels_list: &[u32],
    min: u32,
    max: u32,
    families: &[Family],
) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(COMPARE_HEADER).expect("in-memory write");
    let mut row = |cols: [String; 10]| w.write_record(&cols).expect("in-memory write");
    for n in min.max(1)..=max {
        for family in families {
            match family {
                Family::Mlpa => {
                    for &l in levels_list {
                        let space = runner.landscape(n, l, None);
                        for objective in [Objective::Unique, Objective::Consecutive] {
                            let base = [
                                n.to_string(),
                                "mlpa".into(),
                                l.to_string(),
                                objective.to_string(),
                            ];
                            match space.resolve(objective) {
                                Ok(r) => {
                                    let c = r.recommended().expect("nonempty");
                                    row(concat(
                                        base,
                                        [
                                            join(c.config.spacing.spacings()),
                                            "ok".into(),
                                            c.report.unit_spacing_count.to_string(),
                                            c.report.unique_count.to_string(),
                                            c.report.consecutive_count.to_string(),
                                            c.config.aperture.to_string(),
                                        ],
                                    ));
                                }
                                Err(_) => row(concat(base, infeasible())),
                            }
                        }
                    }
                }
                Family::Reference(f) => {
                    let base = [n.to_string(), f.to_string(), String::new(), String::new()];
                    match ReferenceSpec::for_total(*f, n).map(|s| (s, s.positions())) {
                        Some((spec, Ok(p))) => {
                            let r = difference_coarray(&p).expect("nonempty");
                            row(concat(
                                base,
                                [
                                    format!("{};{}", spec.params.0, spec.params.1),
                                    "ok".into(),
                                    r.unit_spacing_count.to_string(),
                                    r.unique_count.to_string(),
                                    r.consecutive_count.to_string(),
                                    p.last().copied().unwrap_or(0).to_string(),
                                ],
                            ));
                        }
                        _ => row(concat(base, infeasible())),
                    }
                }
            }
        }
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
}

fn infeasible() -> [String; 6] {
    [
        String::new(),
        "infeasible".into(),
        String::new(),
        String::new(),
        String::new(),
        String::new(),
    ]
}

fn concat(a: [String; 4], b: [String; 6]) -> [String; 10] {
    let mut it = a.into_iter().chain(b);
    std::array::from_fn(|_| it.next().expect("ten fields"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut full = vec!["mlpa", "--no-cache"];
        full.extend_from_slice(args);
        let code = run(full, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn positions_parsing() {
        assert_eq!(parse_positions("0, 2,3").ok(), Some(vec![0, 2, 3]));
        assert!(parse_positions("0,-1").is_err());
        assert!(parse_positions("0,,1").is_err());
        assert!(parse_positions("").is_err());
    }

    #[test]
    fn bad_flags_exit_64() {
        assert_eq!(
            run_args(&["design", "--elements", "x", "--levels", "3"]).0,
            EXIT_USAGE
        );
        assert_eq!(run_args(&["frobnicate"]).0, EXIT_USAGE);
        assert_eq!(
            run_args(&[
                "design",
                "--elements",
                "8",
                "--levels",
                "3",
                "--objective",
                "best"
            ])
            .0,
            EXIT_USAGE
        );
        assert_eq!(run_args(&["--help"]).0, EXIT_OK);
    }

    #[test]
    fn sweep_header_for_empty_range() {
        let (code, out, _) = run_args(&["sweep", "--levels", "6", "--min", "40", "--max", "39"]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().count(), 1);
        assert!(out.starts_with("N,L,objective,status,S1,S2,S3,S4,S5,S6,partition"));
    }
}
