//! Command-line front end: sampling to edge-list files, decomposition
//! summaries, ball censuses, empirical ball distributions, and the
//! experiment suites.
//!
//! Exit codes: 0 all rows pass, 1 some row failed, 2 usage or config error,
//! 3 sampling budget exhausted. Data goes to stdout (or --out); diagnostics
//! go to stderr.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use locallim::decompose::{decompose, structure_stats, StructureStats};
use locallim::experiment::{self, ExperimentConfig};
use locallim::graph::{Graph, MultiGraph};
use locallim::limits::PlaneTree;
use locallim::localstats::{census, EmpiricalDist, Provenance, RootPolicy};
use locallim::rng::{RngState, STREAM_ROOT_DRAWS};
use locallim::samplers::{self, PlanarMethod, SampleError};

#[derive(Parser)]
#[command(name = "locallim", version, about = "Random-graph sampling and local-limit verification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Draw one graph and emit it as an edge-list document.
    Sample(SampleArgs),
    /// Decompose an edge-list file; prints structure counts as CSV.
    Decompose {
        file: PathBuf,
        /// Emit the full decomposition as JSON instead.
        #[arg(long)]
        json: bool,
    },
    /// Count vertices whose ball matches a plane tree.
    BallCensus {
        file: PathBuf,
        #[arg(long)]
        radius: usize,
        /// Comma-separated BFS child counts, e.g. "2,0,1".
        #[arg(long)]
        tree: String,
    },
    /// Empirical ball-code distribution from a sampler or a graph file.
    Dist(DistArgs),
    /// Run an experiment suite from a JSON config.
    Experiment { config: PathBuf },
    /// Re-render the CSV report from a manifest.
    Report { manifest: PathBuf },
}

#[derive(Args)]
struct SampleArgs {
    /// cayley | forest | gnm | noncomplex | complexpart | core | planar
    sampler: String,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    t: Option<usize>,
    #[arg(long)]
    q: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    /// Core edge-list file (complexpart sampler).
    #[arg(long)]
    core: Option<PathBuf>,
    /// Kernel edge-list file, loops and parallel edges allowed (core sampler).
    #[arg(long)]
    kernel: Option<PathBuf>,
    /// rejection | mcmc (planar sampler)
    #[arg(long, default_value = "rejection")]
    method: String,
    #[arg(long, default_value_t = 100_000)]
    budget: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0)]
    stream: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DistArgs {
    /// Sampler name (cayley | gnm | noncomplex | planar | forest) or a path
    /// to an edge-list file (per-graph mode: repeated root draws).
    source: String,
    #[arg(long, default_value = "uniform")]
    policy: String,
    #[arg(long, default_value_t = 1)]
    radius: usize,
    #[arg(short = 'N', long, default_value_t = 1000)]
    draws: u64,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    t: Option<usize>,
    #[arg(long, default_value_t = 100_000)]
    budget: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Emit CSV (code,count,frequency) instead of JSON.
    #[arg(long)]
    csv: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

enum CliError {
    Usage(String),
    Budget(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Budget(_) => 3,
        }
    }

    fn msg(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Budget(m) => m,
        }
    }
}

impl From<SampleError> for CliError {
    fn from(e: SampleError) -> Self {
        match e {
            SampleError::BudgetExhausted { .. } => CliError::Budget(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

fn read_file(path: &PathBuf) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))
}

fn write_output(out: &Option<PathBuf>, data: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, data)
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{data}");
            std::io::stdout().flush().ok();
            Ok(())
        }
    }
}

fn need<T: Copy>(v: Option<T>, what: &str) -> Result<T, CliError> {
    v.ok_or_else(|| CliError::Usage(format!("missing required parameter --{what}")))
}

fn run_sample(args: &SampleArgs) -> Result<(), CliError> {
    let mut rng = RngState::derive(args.seed, args.stream);
    let (graph, desc) = match args.sampler.as_str() {
        "cayley" => {
            let n = need(args.n, "n")?;
            (samplers::sample_cayley_tree(n, &mut rng)?, format!("cayley n={n}"))
        }
        "forest" => {
            let n = need(args.n, "n")?;
            let t = need(args.t, "t")?;
            (
                samplers::sample_forest(n, t, &mut rng)?.graph,
                format!("forest n={n} t={t}"),
            )
        }
        "gnm" => {
            let n = need(args.n, "n")?;
            let m = need(args.m, "m")?;
            (samplers::sample_gnm(n, m, &mut rng)?, format!("gnm n={n} m={m}"))
        }
        "noncomplex" => {
            let n = need(args.n, "n")?;
            let m = need(args.m, "m")?;
            (
                samplers::sample_noncomplex(n, m, args.budget, &mut rng)?,
                format!("noncomplex n={n} m={m}"),
            )
        }
        "complexpart" => {
            let q = need(args.q, "q")?;
            let path = args
                .core
                .as_ref()
                .ok_or_else(|| CliError::Usage("missing --core FILE".into()))?;
            let core = Graph::parse(&read_file(path)?)
                .map_err(|e| CliError::Usage(format!("core file: {e}")))?;
            (
                samplers::sample_complexpart(&core, q, &mut rng)?,
                format!("complexpart core={} q={q}", path.display()),
            )
        }
        "core" => {
            let k = need(args.k, "k")?;
            let path = args
                .kernel
                .as_ref()
                .ok_or_else(|| CliError::Usage("missing --kernel FILE".into()))?;
            let kernel = MultiGraph::parse(&read_file(path)?)
                .map_err(|e| CliError::Usage(format!("kernel file: {e}")))?;
            (
                samplers::sample_core_given_kernel(&kernel, k, args.budget, &mut rng)?,
                format!("core kernel={} k={k}", path.display()),
            )
        }
        "planar" => {
            let n = need(args.n, "n")?;
            let m = need(args.m, "m")?;
            let method = match args.method.as_str() {
                "rejection" => PlanarMethod::Rejection,
                "mcmc" => PlanarMethod::Mcmc,
                other => return Err(CliError::Usage(format!("unknown method {other:?}"))),
            };
            let s = samplers::sample_planar(n, m, method, args.budget, &mut rng)?;
            (
                s.graph,
                format!(
                    "planar n={n} m={m} method={}{}",
                    args.method,
                    if s.approximate { " (approximate)" } else { "" }
                ),
            )
        }
        other => return Err(CliError::Usage(format!("unknown sampler {other:?}"))),
    };
    let header = format!(
        "# sampler: {desc}\n# seed: {} stream: {}\n",
        args.seed, args.stream
    );
    write_output(&args.out, &format!("{header}{}", graph.to_edge_list()))
}

fn run_dist(args: &DistArgs) -> Result<(), CliError> {
    let policy = RootPolicy::parse(&args.policy)
        .ok_or_else(|| CliError::Usage(format!("unknown policy {:?}", args.policy)))?;
    let provenance = Provenance {
        sampler: args.source.clone(),
        params: format!("n={:?};m={:?};t={:?}", args.n, args.m, args.t),
        seed: args.seed,
        policy: policy.name().into(),
        radius: args.radius,
    };
    let mut dist = EmpiricalDist::new(provenance);
    let known_sampler = matches!(
        args.source.as_str(),
        "cayley" | "gnm" | "noncomplex" | "planar" | "forest"
    );
    if known_sampler {
        for i in 0..args.draws {
            let mut rng = RngState::derive(args.seed, i);
            let g = match args.source.as_str() {
                "cayley" => samplers::sample_cayley_tree(need(args.n, "n")?, &mut rng)?,
                "gnm" => samplers::sample_gnm(need(args.n, "n")?, need(args.m, "m")?, &mut rng)?,
                "noncomplex" => samplers::sample_noncomplex(
                    need(args.n, "n")?,
                    need(args.m, "m")?,
                    args.budget,
                    &mut rng,
                )?,
                "planar" => {
                    samplers::sample_planar(
                        need(args.n, "n")?,
                        need(args.m, "m")?,
                        PlanarMethod::Rejection,
                        args.budget,
                        &mut rng,
                    )?
                    .graph
                }
                "forest" => {
                    samplers::sample_forest(need(args.n, "n")?, need(args.t, "t")?, &mut rng)?.graph
                }
                _ => unreachable!(),
            };
            dist.record(&g, policy, args.radius, &mut rng);
        }
    } else {
        // per-graph mode: one fixed graph, repeated root draws
        let path = PathBuf::from(&args.source);
        let g = Graph::parse(&read_file(&path)?)
            .map_err(|e| CliError::Usage(format!("graph file: {e}")))?;
        let mut rng = RngState::derive(args.seed, STREAM_ROOT_DRAWS);
        for _ in 0..args.draws {
            dist.record(&g, policy, args.radius, &mut rng);
        }
    }
    if dist.total() == 0 {
        return Err(CliError::Usage(format!(
            "empty distribution: all {} samples skipped (policy target empty)",
            dist.skipped()
        )));
    }
    if dist.skipped() > 0 {
        eprintln!("skipped {} samples with empty policy target", dist.skipped());
    }
    let text = if args.csv {
        dist.to_csv()
    } else {
        format!("{:#}\n", dist.to_json())
    };
    write_output(&args.out, &text)
}

fn run_experiment(path: &PathBuf) -> Result<bool, CliError> {
    let config = ExperimentConfig::from_json(&read_file(path)?)
        .map_err(|e| CliError::Usage(format!("config: {e}")))?;
    let started = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let report = experiment::run_suite(&config, None)
        .map_err(|e| CliError::Usage(format!("suite: {e}")))?;
    let csv = report.to_csv();
    match &config.output {
        Some(p) => write_output(&Some(PathBuf::from(p)), &csv)?,
        None => write_output(&None, &csv)?,
    }
    if let Some(p) = &config.manifest {
        let manifest = experiment::manifest_json(&config, &report, started);
        write_output(
            &Some(PathBuf::from(p)),
            &format!("{}\n", serde_json::to_string_pretty(&manifest).unwrap()),
        )?;
    }
    for row in &report.rows {
        eprintln!(
            "{} {}/{}: observed {} vs reference {}",
            if row.pass { "pass" } else { "FAIL" },
            row.suite,
            row.statistic,
            experiment::format_sig(row.observed),
            experiment::format_sig(row.reference),
        );
    }
    Ok(report.all_pass())
}

fn run_report(path: &PathBuf) -> Result<bool, CliError> {
    let text = read_file(path)?;
    let manifest: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("manifest: {e}")))?;
    let rows: Vec<experiment::ReportRow> =
        serde_json::from_value(manifest["rows"].clone())
            .map_err(|e| CliError::Usage(format!("manifest rows: {e}")))?;
    let all_pass = rows.iter().all(|r| r.pass);
    write_output(&None, &experiment::render_csv(&rows))?;
    Ok(all_pass)
}

fn dispatch(cli: Cli) -> Result<bool, CliError> {
    match &cli.command {
        Command::Sample(args) => run_sample(args).map(|()| true),
        Command::Decompose { file, json } => {
            let g = Graph::parse(&read_file(file)?)
                .map_err(|e| CliError::Usage(format!("graph file: {e}")))?;
            let d = decompose(&g);
            let text = if *json {
                format!("{}\n", serde_json::to_string_pretty(&d).unwrap())
            } else {
                let s = structure_stats(&g, &d);
                format!("{}\n{}\n", StructureStats::CSV_HEADER, s.csv_row())
            };
            write_output(&None, &text).map(|()| true)
        }
        Command::BallCensus { file, radius, tree } => {
            let g = Graph::parse(&read_file(file)?)
                .map_err(|e| CliError::Usage(format!("graph file: {e}")))?;
            let t = PlaneTree::from_compact(&format!("{radius}:{tree}"))
                .map_err(|e| CliError::Usage(format!("plane tree: {e}")))?;
            let count = census(&g, *radius, &t);
            write_output(&None, &format!("{count}\n")).map(|()| true)
        }
        Command::Dist(args) => run_dist(args).map(|()| true),
        Command::Experiment { config } => run_experiment(config),
        Command::Report { manifest } => run_report(manifest),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(true) => ExitCode::from(0),
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {}", e.msg());
            ExitCode::from(e.code())
        }
    }
}
