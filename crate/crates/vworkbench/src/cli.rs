//! Command line front end for the workbench.
//!
//! One binary, four subcommands. Machine-readable JSON goes to standard
//! output (or `--out`), a one-line human summary goes to standard error.
//! Exit codes are a stable contract:
//!
//! * `0` the command ran and every check passed,
//! * `1` the command ran and a check failed, or the tool itself broke,
//! * `2` the invocation or an input file was unusable,
//! * `3` an input object parsed fine but was rejected by structural
//!   validation (with the rejection witness in the report).
//!
//! `decompose` prints the bare certificate so that equal seeds give
//! byte-identical output. The other commands wrap their report in an
//! envelope carrying the tool version, the fully resolved configuration,
//! and wall-clock timing.

use std::fs;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::constructions::{criterion_audit, decompose_five};
use crate::cubelab::{
    enumerate_ultrafilters, four_point_of_matrix, sweep_geodesic_additivity, sweep_median_product,
    CubeComplex, CubeError, CubeSweep, DeltaL, SUBSET_CAP, ULTRA_WALL_CAP,
};
use crate::hyplab::{
    sweep_broken_geodesic, sweep_foot, sweep_line_model, sweep_projection_gap,
    sweep_projection_window, sweep_quasigeodesic, CheckReport, GEODESIC_CAP,
};
use crate::vcore::{random_element, VElement};

const REPORT_SCHEMA: &str = "vworkbench.report/1";
const AUDIT_TRIALS: u32 = 200;
const HYP_TRIALS: u32 = 150;
const CUBE_TRIALS: u32 = 12;

#[derive(Parser)]
#[command(name = "vworkbench", version, about = "Exact-arithmetic workbench: element \
factorization, randomized audits, and cube-complex metrics", disable_help_subcommand = true)]
struct Cli {
    /// Seed for every randomized sampler the command uses.
    #[arg(long, global = true, default_value_t = 7)]
    seed: u64,

    /// Trial count; each command has its own default.
    #[arg(long, global = true)]
    trials: Option<u32>,

    /// Worker threads for per-trial parallelism; 0 lets the runtime pick.
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,

    /// Write the JSON output here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Cap on geodesics enumerated per vertex pair.
    #[arg(long, global = true, default_value_t = GEODESIC_CAP)]
    budget_geodesics: u64,

    /// Leaf budget for randomly sampled elements.
    #[arg(long, global = true, default_value_t = 40)]
    budget_leaves: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Factor one element into five reducible pieces and self-check the result.
    Decompose {
        /// JSON file holding the element; omitted means a seeded random element.
        element: Option<PathBuf>,
    },
    /// Run the randomized factorization audit and emit its report.
    Audit,
    /// Re-run one named check suite on randomized instances.
    Verify {
        /// Check id: one of 2.4, 2.5, 2.6, 2.7, 2.8, 2.9, 2.15, 2.16.
        id: String,
    },
    /// Validate and measure a cube complex supplied as JSON.
    Cube {
        #[command(subcommand)]
        action: CubeAction,
    },
}

#[derive(Subcommand)]
enum CubeAction {
    /// Check the one-skeleton is median and summarize its hyperplanes.
    Check { file: PathBuf },
    /// Compute the level-L separation distance between two vertices.
    #[command(name = "deltaL")]
    DeltaL {
        file: PathBuf,
        /// Separation level L.
        #[arg(long, default_value_t = 0)]
        level: u32,
        /// First vertex; defaults to one end of a diameter pair.
        #[arg(long)]
        x: Option<u32>,
        /// Second vertex; defaults to the other end of the diameter pair.
        #[arg(long)]
        y: Option<u32>,
    },
    /// Enumerate ultrafilter-style orientations and match them to vertices.
    Ultrafilters { file: PathBuf },
}

/// Fully resolved settings, embedded verbatim in every report envelope.
#[derive(Serialize)]
struct RunConfig {
    command: String,
    seed: u64,
    trials: Option<u32>,
    jobs: usize,
    budget_leaves: usize,
    budget_geodesics: u64,
    budget_subsets: u64,
    budget_walls: usize,
    out: Option<String>,
    params: Value,
}

impl RunConfig {
    fn new(cli: &Cli, command: &str, trials: Option<u32>, params: Value) -> Self {
        RunConfig {
            command: command.into(),
            seed: cli.seed,
            trials,
            jobs: cli.jobs,
            budget_leaves: cli.budget_leaves,
            budget_geodesics: cli.budget_geodesics,
            budget_subsets: SUBSET_CAP as u64,
            budget_walls: ULTRA_WALL_CAP,
            out: cli.out.as_ref().map(|p| p.display().to_string()),
            params,
        }
    }
}

#[derive(Serialize)]
struct Envelope<T: Serialize> {
    schema: &'static str,
    version: &'static str,
    config: RunConfig,
    elapsed_ms: u64,
    report: T,
}

/// A terminal diagnostic: message to standard error, `code` as exit status.
struct Failure {
    code: i32,
    message: String,
}

fn usage(message: impl ToString) -> Failure {
    Failure { code: 2, message: message.to_string() }
}

fn internal(message: impl ToString) -> Failure {
    Failure { code: 1, message: message.to_string() }
}

pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version land on stdout and exit 0; real parse
            // errors land on stderr and exit 2.
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(&cli) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("vworkbench: {}", f.message);
            f.code
        }
    }
}

fn dispatch(cli: &Cli) -> Result<i32, Failure> {
    match &cli.command {
        Command::Decompose { element } => cmd_decompose(cli, element.as_deref()),
        Command::Audit => cmd_audit(cli),
        Command::Verify { id } => cmd_verify(cli, id),
        Command::Cube { action } => cmd_cube(cli, action),
    }
}

/// Writes `text` (already newline-terminated) to `--out` or stdout.
fn emit(cli: &Cli, text: &str) -> Result<(), Failure> {
    match &cli.out {
        Some(path) => fs::write(path, text)
            .map_err(|e| internal(format!("writing {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit_json<T: Serialize>(cli: &Cli, value: &T) -> Result<(), Failure> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| internal(format!("serializing report: {e}")))?;
    text.push('\n');
    emit(cli, &text)
}

fn emit_envelope<T: Serialize>(
    cli: &Cli,
    config: RunConfig,
    started: Instant,
    report: T,
) -> Result<(), Failure> {
    emit_json(cli, &Envelope {
        schema: REPORT_SCHEMA,
        version: env!("CARGO_PKG_VERSION"),
        config,
        elapsed_ms: started.elapsed().as_millis() as u64,
        report,
    })
}

fn cmd_decompose(cli: &Cli, element: Option<&std::path::Path>) -> Result<i32, Failure> {
    let g = match element {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| usage(format!("reading {}: {e}", path.display())))?;
            serde_json::from_str::<VElement>(&text)
                .map_err(|e| usage(format!("parsing {}: {e}", path.display())))?
        }
        None => random_element(&mut ChaCha8Rng::seed_from_u64(cli.seed), cli.budget_leaves),
    };
    let factorization = decompose_five(&g)
        .map_err(|e| internal(format!("decomposition failed: {e}")))?;
    factorization
        .validate()
        .map_err(|e| internal(format!("certificate failed its own check: {e}")))?;
    emit_json(cli, &factorization)?;
    let source = match element {
        Some(path) => format!("element from {}", path.display()),
        None => format!("random element (seed {})", cli.seed),
    };
    eprintln!("decompose: {source}: 5 reducible factors, product matches input");
    Ok(0)
}

fn cmd_audit(cli: &Cli) -> Result<i32, Failure> {
    let trials = cli.trials.unwrap_or(AUDIT_TRIALS);
    let config = RunConfig::new(cli, "audit", Some(trials), json!({}));
    let started = Instant::now();
    let run_audit = || criterion_audit(cli.seed, trials);
    let report = if cli.jobs > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cli.jobs)
            .build()
            .map_err(|e| internal(format!("thread pool: {e}")))?
            .install(run_audit)
    } else {
        run_audit()
    }
    .map_err(|e| internal(format!("audit aborted: {e}")))?;
    let failed = report.records.iter().filter(|r| !r.passed).count();
    let passed = report.passed;
    let n_value = report.n_value;
    emit_envelope(cli, config, started, report)?;
    if passed {
        eprintln!("audit: {trials} trials passed, N = {n_value}");
        Ok(0)
    } else {
        eprintln!("audit: {failed} of {trials} trials FAILED");
        Ok(1)
    }
}

/// The check-id table. Ids are part of the command contract; each maps to
/// one sweep, and this match is the only place the mapping lives.
fn cmd_verify(cli: &Cli, id: &str) -> Result<i32, Failure> {
    enum Suite {
        Graph(fn(u64, u32, u64) -> CheckReport),
        Line(fn(u64, u32) -> CheckReport),
        Cube(fn(u64, u32) -> CubeSweep),
    }
    let suite = match id {
        "2.4" => Suite::Graph(sweep_projection_window),
        "2.5" => Suite::Graph(sweep_quasigeodesic),
        "2.6" => Suite::Graph(sweep_broken_geodesic),
        "2.7" => Suite::Graph(sweep_foot),
        "2.8" => Suite::Graph(sweep_projection_gap),
        "2.9" => Suite::Line(sweep_line_model),
        "2.15" => Suite::Cube(sweep_geodesic_additivity),
        "2.16" => Suite::Cube(sweep_median_product),
        other => {
            return Err(usage(format!(
                "unknown check id {other}; known ids: 2.4 2.5 2.6 2.7 2.8 2.9 2.15 2.16"
            )))
        }
    };
    let default_trials = match suite {
        Suite::Cube(_) => CUBE_TRIALS,
        _ => HYP_TRIALS,
    };
    let trials = cli.trials.unwrap_or(default_trials);
    let config = RunConfig::new(cli, "verify", Some(trials), json!({ "id": id }));
    let started = Instant::now();
    let (passed, summary, report) = match suite {
        Suite::Graph(sweep) => {
            let rep = sweep(cli.seed, trials, cli.budget_geodesics);
            (rep.passed(), summarize_check(&rep), serde_json::to_value(rep))
        }
        Suite::Line(sweep) => {
            let rep = sweep(cli.seed, trials);
            (rep.passed(), summarize_check(&rep), serde_json::to_value(rep))
        }
        Suite::Cube(sweep) => {
            let rep = sweep(cli.seed, trials);
            let line = format!(
                "{} complexes, {} checks, {} violations",
                rep.complexes, rep.checks, rep.violations
            );
            (rep.passed(), line, serde_json::to_value(rep))
        }
    };
    let report = report.map_err(|e| internal(format!("serializing report: {e}")))?;
    emit_envelope(cli, config, started, report)?;
    eprintln!("verify {id}: {summary}");
    Ok(if passed { 0 } else { 1 })
}

fn summarize_check(rep: &CheckReport) -> String {
    format!(
        "{} instances, {} eligible, {} violations",
        rep.instances, rep.eligible, rep.violations
    )
}

#[derive(serde::Deserialize)]
struct ComplexFile {
    n: usize,
    edges: Vec<(u32, u32)>,
}

/// Errors that mean "well-formed graph, rejected by validation": these get
/// a report with a witness and exit code 3 rather than a bare diagnostic.
fn rejection_witness(e: &CubeError) -> Option<Value> {
    match e {
        CubeError::Disconnected => Some(json!(null)),
        CubeError::NotMedian { x, y, z, count } => {
            Some(json!({ "triple": [x, y, z], "medians": count }))
        }
        CubeError::BadWall(w) => Some(json!({ "wall": w })),
        CubeError::NotConvex { wall, u, v } => Some(json!({ "wall": wall, "pair": [u, v] })),
        _ => None,
    }
}

fn load_complex(path: &std::path::Path) -> Result<(ComplexFile, Result<CubeComplex, CubeError>), Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| usage(format!("reading {}: {e}", path.display())))?;
    let file: ComplexFile = serde_json::from_str(&text)
        .map_err(|e| usage(format!("parsing {}: {e}", path.display())))?;
    let built = CubeComplex::from_edges(file.n, &file.edges);
    match &built {
        Err(e) if rejection_witness(e).is_none() => {
            // Out-of-range vertices, self loops, duplicate edges: the file
            // itself is unusable, same footing as malformed JSON.
            Err(usage(format!("{}: {e}", path.display())))
        }
        _ => Ok((file, built)),
    }
}

fn cmd_cube(cli: &Cli, action: &CubeAction) -> Result<i32, Failure> {
    let (path, command, params) = match action {
        CubeAction::Check { file } => {
            (file, "cube check", json!({ "file": file.display().to_string() }))
        }
        CubeAction::DeltaL { file, level, x, y } => (
            file,
            "cube deltaL",
            json!({ "file": file.display().to_string(), "level": level, "x": x, "y": y }),
        ),
        CubeAction::Ultrafilters { file } => (
            file,
            "cube ultrafilters",
            json!({ "file": file.display().to_string() }),
        ),
    };
    let config = RunConfig::new(cli, command, None, params);
    let started = Instant::now();
    let (file, built) = load_complex(path)?;
    let complex = match built {
        Ok(c) => c,
        Err(e) => {
            let report = json!({
                "valid": false,
                "reason": e.to_string(),
                "witness": rejection_witness(&e),
            });
            emit_envelope(cli, config, started, report)?;
            eprintln!("{command}: rejected: {e}");
            return Ok(3);
        }
    };
    match action {
        CubeAction::Check { .. } => {
            let report = json!({
                "valid": true,
                "n": complex.len(),
                "edges": file.edges.len(),
                "hyperplanes": complex.walls().len(),
            });
            emit_envelope(cli, config, started, report)?;
            eprintln!(
                "{command}: median, {} vertices, {} edges, {} hyperplanes",
                complex.len(),
                file.edges.len(),
                complex.walls().len()
            );
            Ok(0)
        }
        CubeAction::DeltaL { level, x, y, .. } => {
            let (x, y) = pick_pair(&complex, *x, *y)?;
            let delta = DeltaL::new(&complex, *level).map_err(|e| internal(e.to_string()))?;
            let value = delta.distance(x, y);
            let mut report = json!({
                "level": level,
                "x": x,
                "y": y,
                "delta_l": value,
                "graph_distance": complex.dist(x, y),
            });
            if complex.len() <= 64 {
                let matrix = delta.metric_matrix().map_err(|e| internal(e.to_string()))?;
                let doubled = four_point_of_matrix(&matrix);
                report["four_point_delta"] = json!(doubled as f64 / 2.0);
            }
            emit_envelope(cli, config, started, report)?;
            eprintln!("{command}: level {level}, d({x}, {y}) = {value}");
            Ok(0)
        }
        CubeAction::Ultrafilters { .. } => {
            let principal = enumerate_ultrafilters(&complex).map_err(|e| internal(e.to_string()))?;
            let report = json!({
                "n": complex.len(),
                "count": principal.len(),
                "principal": principal,
            });
            emit_envelope(cli, config, started, report)?;
            eprintln!(
                "{command}: {} orientations, one per vertex",
                complex.len()
            );
            Ok(0)
        }
    }
}

/// Explicit vertices if given, else the lexicographically first pair
/// realizing the graph diameter.
fn pick_pair(c: &CubeComplex, x: Option<u32>, y: Option<u32>) -> Result<(u32, u32), Failure> {
    let n = c.len() as u32;
    if let (Some(x), Some(y)) = (x, y) {
        if x >= n || y >= n {
            return Err(usage(format!("vertex out of range (n = {n})")));
        }
        return Ok((x, y));
    }
    if x.is_some() != y.is_some() {
        return Err(usage("give both --x and --y, or neither"));
    }
    let mut best = (0, 0, 0);
    for u in 0..n {
        for v in u + 1..n {
            if c.dist(u, v) > best.2 {
                best = (u, v, c.dist(u, v));
            }
        }
    }
    Ok((best.0, best.1))
}
