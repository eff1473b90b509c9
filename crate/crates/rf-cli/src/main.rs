//! `rf`: build clique-constrained colorings end to end, verify and
//! certify coloring files, and inspect packing diagnostics and
//! repetition families. Every report is JSON with a schema version;
//! every command with fixed seeds is byte-reproducible.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use rf_core::coloring::{find_violations, repetitions, Edge, EdgeColoring, Vertex};
use rf_core::io::{parse_coloring, parse_universe, recover_packing, write_coloring, write_universe};
use rf_core::phase_a::PhaseAStats;
use rf_core::phase_b::{ListAssignment, PhaseBStats};
use rf_core::pipeline::{
    run_pipeline, PipelineConfig, PipelineError, REPORT_SEED_OFFSET,
};
use rf_core::sfamily::{dump_entries, enumerate_s, SFamilyEntry, UncoloredClasses};
use rf_core::stats::{quasi_report, QuasiReport};

const SCHEMA_VERSION: u32 = 1;
/// Anchors and anchor pairs sampled into the build-time report.
const REPORT_SAMPLE: usize = 24;

#[derive(Parser)]
#[command(name = "rf", version, about = "Colorings of complete graphs with few repeated colors on small cliques")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run both phases and write coloring, fixtures, certificate, stats,
    /// and manifest into a directory.
    Build(BuildArgs),
    /// Check the clique condition on a coloring file.
    Verify(VerifyArgs),
    /// Extract the counting certificate from a full coloring file.
    Certify(CertifyArgs),
    /// Report packing diagnostics for coloring files against a universe
    /// fixture.
    Stats(StatsArgs),
    /// List a repetition family around an uncolored edge.
    Sfamily(SfamilyArgs),
}

#[derive(clap::Args)]
struct BuildArgs {
    /// Number of vertices; at least 7.
    #[arg(long)]
    n: u32,
    /// Sharability exponent: the universe draws with probability n^(-delta).
    #[arg(long, default_value_t = 0.25)]
    delta: f64,
    /// Sharability probability, overriding the exponent form.
    #[arg(long, conflicts_with = "delta")]
    p: Option<f64>,
    /// Master seed; each phase derives its own at a fixed offset.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Consecutive failed proposals that stop the packing phase.
    #[arg(long)]
    max_failures: Option<u64>,
    /// Extra finishing-stage attempts after the first.
    #[arg(long, default_value_t = 50)]
    max_restarts: u32,
    /// Per-edge finishing list budget, overriding the formula value.
    #[arg(long)]
    db_override: Option<usize>,
    /// Output directory; created if absent.
    #[arg(long)]
    out: PathBuf,
}

#[derive(clap::Args)]
struct VerifyArgs {
    /// Coloring file to check.
    #[arg(long)]
    file: PathBuf,
    /// Clique size.
    #[arg(long, default_value_t = 5)]
    p: usize,
    /// Distinct colors every clique must see.
    #[arg(long, default_value_t = 8)]
    q: u64,
}

#[derive(clap::Args)]
struct CertifyArgs {
    /// Full coloring file to certify.
    #[arg(long)]
    file: PathBuf,
}

#[derive(clap::Args)]
struct StatsArgs {
    /// Universe fixture the colorings were packed against.
    #[arg(long)]
    universe: PathBuf,
    /// Coloring files to report on.
    #[arg(required = true)]
    files: Vec<PathBuf>,
    /// Anchors and anchor pairs to sample per report.
    #[arg(long, default_value_t = REPORT_SAMPLE)]
    sample: usize,
    /// Sampling seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(clap::Args)]
struct SfamilyArgs {
    /// Coloring file to enumerate in.
    #[arg(long)]
    file: PathBuf,
    /// Endpoints of the uncolored anchor edge.
    #[arg(long, num_args = 2, value_names = ["U", "V"])]
    edge: Vec<u32>,
    /// Subset size, 4 or 5.
    #[arg(long)]
    a: usize,
    /// Repetition count the subsets must carry.
    #[arg(long)]
    b: usize,
}

/// A command failure carrying its exit code: 1 verification, 2 parse or
/// usage, 3 finishing-stage exhaustion, 4 certificate precondition.
struct Failure {
    code: u8,
    message: String,
}

fn fail(code: u8, message: impl Into<String>) -> Failure {
    Failure { code, message: message.into() }
}

fn main() -> ExitCode {
    rf_core::init_threads_from_env();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Build(args) => cmd_build(&args),
        Command::Verify(args) => cmd_verify(&args),
        Command::Certify(args) => cmd_certify(&args),
        Command::Stats(args) => cmd_stats(&args),
        Command::Sfamily(args) => cmd_sfamily(&args),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("rf: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn read_file(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .map_err(|err| fail(2, format!("cannot read {}: {err}", path.display())))
}

fn load_coloring(path: &Path) -> Result<EdgeColoring, Failure> {
    parse_coloring(&read_file(path)?)
        .map_err(|err| fail(2, format!("{}: {err}", path.display())))
}

fn print_report<T: Serialize>(report: &T) {
    println!("{}", serde_json::to_string_pretty(report).expect("reports serialize"));
}

fn pretty<T: Serialize>(value: &T) -> String {
    let mut buf = serde_json::to_string_pretty(value).expect("reports serialize");
    buf.push('\n');
    buf
}

#[derive(Serialize)]
struct RunManifest {
    schema_version: u32,
    command: &'static str,
    config: PipelineConfig,
    artifacts: BTreeMap<&'static str, String>,
    versions: BTreeMap<&'static str, &'static str>,
    /// The only non-reproducible field; everything else is seed-determined.
    wall_clock_ms: u64,
}

#[derive(Serialize)]
struct StatsBundle<'a> {
    schema_version: u32,
    packing: &'a PhaseAStats,
    quasi: &'a QuasiReport,
    finishing: &'a PhaseBStats,
    lists: &'a ListAssignment,
}

fn cmd_build(args: &BuildArgs) -> Result<u8, Failure> {
    if args.n < 7 {
        return Err(fail(2, format!("--n must be at least 7, got {}", args.n)));
    }
    let mut config = PipelineConfig::new(args.n, args.seed);
    config.p = args.p.unwrap_or_else(|| f64::from(args.n).powf(-args.delta));
    config.max_failures = args.max_failures;
    config.max_restarts = args.max_restarts;
    config.d_b = args.db_override;

    let start = Instant::now();
    let out = run_pipeline(&config).map_err(|err| {
        let code = match &err {
            PipelineError::Verification { .. } => 1,
            PipelineError::PhaseB(_) => 3,
            PipelineError::Certificate(_) => 4,
            _ => 2,
        };
        fail(code, err.to_string())
    })?;

    let mut rng = ChaCha8Rng::seed_from_u64(args.seed.wrapping_add(REPORT_SEED_OFFSET));
    let quasi = quasi_report(&out.phase_a, REPORT_SAMPLE, &mut rng);

    fs::create_dir_all(&args.out)
        .map_err(|err| fail(2, format!("cannot create {}: {err}", args.out.display())))?;
    let write = |name: &'static str, content: String| -> Result<String, Failure> {
        let path = args.out.join(name);
        fs::write(&path, content)
            .map_err(|err| fail(2, format!("cannot write {}: {err}", path.display())))?;
        Ok(path.display().to_string())
    };
    let mut artifacts = BTreeMap::new();
    artifacts.insert("coloring", write("coloring.txt", write_coloring(&out.coloring))?);
    artifacts.insert("packing", write("packing.txt", write_coloring(out.phase_a.state.coloring()))?);
    artifacts.insert("universe", write("universe.txt", write_universe(&out.phase_a.universe))?);
    artifacts.insert("certificate", write("certificate.json", pretty(&out.certificate))?);
    let stats = StatsBundle {
        schema_version: SCHEMA_VERSION,
        packing: &out.phase_a.stats,
        quasi: &quasi,
        finishing: &out.phase_b_stats,
        lists: &out.lists,
    };
    artifacts.insert("stats", write("stats.json", pretty(&stats))?);

    let manifest = RunManifest {
        schema_version: SCHEMA_VERSION,
        command: "build",
        config,
        artifacts,
        versions: BTreeMap::from([("rf", env!("CARGO_PKG_VERSION"))]),
        wall_clock_ms: start.elapsed().as_millis() as u64,
    };
    write("manifest.json", pretty(&manifest))?;
    Ok(0)
}

#[derive(Serialize)]
struct VerifyReport {
    schema_version: u32,
    n: u32,
    p: usize,
    q: u64,
    colored_edges: usize,
    colors_used: usize,
    valid: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<Vec<Vertex>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness_repetitions: Option<usize>,
}

fn cmd_verify(args: &VerifyArgs) -> Result<u8, Failure> {
    let coloring = load_coloring(&args.file)?;
    let witness = find_violations(&coloring, args.p, args.q, Some(1)).into_iter().next();
    let report = VerifyReport {
        schema_version: SCHEMA_VERSION,
        n: coloring.n(),
        p: args.p,
        q: args.q,
        colored_edges: coloring.colored_count(),
        colors_used: coloring.colors_used(),
        valid: witness.is_none(),
        witness_repetitions: witness
            .as_ref()
            .map(|s| repetitions(&coloring, s).expect("witness subsets are in range").repetitions),
        witness,
    };
    print_report(&report);
    Ok(u8::from(!report.valid))
}

fn cmd_certify(args: &CertifyArgs) -> Result<u8, Failure> {
    let coloring = load_coloring(&args.file)?;
    let certificate = rf_core::certificate::certify(&coloring)
        .map_err(|err| fail(4, format!("{}: {err}", args.file.display())))?;
    print_report(&certificate);
    let n = u64::from(certificate.n);
    let sound = certificate.edge_sum == n * (n - 1) / 2
        && certificate.hit_sum <= certificate.hit_capacity
        && certificate.colors_used >= certificate.bound_ceil;
    Ok(u8::from(!sound))
}

#[derive(Serialize)]
struct FileReport {
    file: String,
    report: QuasiReport,
}

#[derive(Serialize)]
struct StatsReports {
    schema_version: u32,
    reports: Vec<FileReport>,
}

fn cmd_stats(args: &StatsArgs) -> Result<u8, Failure> {
    let universe = parse_universe(&read_file(&args.universe)?)
        .map_err(|err| fail(2, format!("{}: {err}", args.universe.display())))?;
    let mut reports = Vec::new();
    for file in &args.files {
        let coloring = load_coloring(file)?;
        let output = recover_packing(&universe, &coloring)
            .map_err(|err| fail(2, format!("{}: {err}", file.display())))?;
        let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
        reports.push(FileReport {
            file: file.display().to_string(),
            report: quasi_report(&output, args.sample, &mut rng),
        });
    }
    print_report(&StatsReports { schema_version: SCHEMA_VERSION, reports });
    Ok(0)
}

#[derive(Serialize)]
struct SfamilyReport {
    schema_version: u32,
    n: u32,
    edge: [Vertex; 2],
    subset_size: usize,
    repetitions: usize,
    count: usize,
    entries: Vec<SFamilyEntry>,
    /// One line per entry: sizes, subset, anchor, partner, case tag.
    rendered: String,
}

fn cmd_sfamily(args: &SfamilyArgs) -> Result<u8, Failure> {
    let [u, v] = args.edge[..] else {
        return Err(fail(2, "--edge takes exactly two endpoints"));
    };
    let coloring = load_coloring(&args.file)?;
    if u == v || v.max(u) >= coloring.n() {
        return Err(fail(2, format!("--edge {u} {v} is not an edge of K_{}", coloring.n())));
    }
    let classes = UncoloredClasses::single_class(&coloring);
    let anchor = Edge::new(u, v);
    let entries = enumerate_s(&coloring, &classes, anchor, args.a, args.b)
        .map_err(|err| fail(2, err.to_string()))?;
    let rendered = dump_entries(&coloring, &entries).map_err(|err| fail(2, err.to_string()))?;
    let report = SfamilyReport {
        schema_version: SCHEMA_VERSION,
        n: coloring.n(),
        edge: [anchor.lo(), anchor.hi()],
        subset_size: args.a,
        repetitions: args.b,
        count: entries.len(),
        entries,
        rendered,
    };
    print_report(&report);
    Ok(0)
}
