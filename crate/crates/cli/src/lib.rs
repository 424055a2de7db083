//! The `motifcover` command line: catalog generation, cover analysis,
//! scoring of external covers and synthetic graph generation.
//!
//! [`run`] is the whole program minus process exit, so tests can drive it
//! in-process.

pub mod report;

use std::ffi::OsString;
use std::fmt;
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use motifcover::{
    cover_from_json, cover_to_json, derive_seed, generate_bjr, generate_catalog, greedy_cover, information_report,
    load_edge_list, max_catalog_size, named_motif, realize_uniform_cover, write_edge_list, CatalogFilter, CostModel,
    CoverError, EpsilonMode, GenerateError, LoadedGraph, LogStarVariant, MotifCatalog, MotifClass, PlantSpec,
    PlantTarget, Solution, SolverConfig,
};
use rayon::prelude::*;

use report::{CatalogEcho, ConfigEcho, Report, RunSummary, StepRow};

/// Environment variable overriding the worker thread count.
pub const THREADS_ENV: &str = "MOTIFCOVER_THREADS";

#[derive(Debug, Parser)]
#[command(name = "motifcover", version, about = "Network motifs as minimum-information subgraph covers")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Enumerate every connected motif class up to a size.
    Catalog(CatalogArgs),
    /// Find a low-information subgraph cover and report motif significance.
    Analyze(AnalyzeArgs),
    /// Score a given cover of a graph.
    Score(ScoreArgs),
    /// Generate a random graph with planted motif instances.
    Generate(GenerateArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FilterArg {
    Connected,
    Biconnected,
}

#[derive(Debug, Clone, Copy, Default, ValueEnum)]
pub enum FormatArg {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, Default, ValueEnum)]
pub enum LogStarArg {
    #[default]
    Universal,
    Plain,
}

#[derive(Debug, Clone, Copy, Default, ValueEnum)]
pub enum ModelArg {
    #[default]
    Uniform,
    Bjr,
}

#[derive(Debug, Args)]
pub struct CatalogArgs {
    #[arg(long)]
    pub directed: bool,
    #[arg(long)]
    pub max_size: usize,
    #[arg(long, value_enum, default_value = "connected")]
    pub filter: FilterArg,
    /// Write the catalog text form here.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CostArgs {
    /// Motif description cost: edge-list, zero or const:<bits>.
    #[arg(long, default_value = "edge-list", value_parser = parse_epsilon)]
    pub epsilon: EpsilonMode,
    #[arg(long, value_enum, default_value = "universal")]
    pub log_star: LogStarArg,
}

impl CostArgs {
    fn model(&self) -> CostModel {
        CostModel {
            epsilon: self.epsilon,
            log_star: match self.log_star {
                LogStarArg::Universal => LogStarVariant::Universal,
                LogStarArg::Plain => LogStarVariant::Plain,
            },
        }
    }
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value = "json")]
    pub format: FormatArg,
    /// Report destination; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("catalog").required(true).args(["candidates", "max_size"])))]
pub struct AnalyzeArgs {
    pub graph: PathBuf,
    #[arg(long)]
    pub directed: bool,
    /// Candidate motifs in catalog text form.
    #[arg(long)]
    pub candidates: Option<PathBuf>,
    /// Use every connected motif up to this size.
    #[arg(long)]
    pub max_size: Option<usize>,
    #[arg(long)]
    pub biconnected_only: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = motifcover::solver::DEFAULT_RESTARTS, value_parser = parse_positive)]
    pub restarts: usize,
    #[arg(long, default_value_t = 1, value_parser = parse_positive)]
    pub runs: usize,
    #[arg(long, default_value_t = motifcover::solver::DEFAULT_INSTANCE_CAP)]
    pub instance_cap: usize,
    /// Include the full cover listing in the JSON report.
    #[arg(long)]
    pub emit_cover: bool,
    /// Also write the cover JSON to this file.
    #[arg(long)]
    pub cover_out: Option<PathBuf>,
    #[command(flatten)]
    pub cost: CostArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ScoreArgs {
    pub graph: PathBuf,
    /// Cover JSON, or an analyze report that embeds one.
    pub cover: PathBuf,
    #[arg(long)]
    pub directed: bool,
    #[command(flatten)]
    pub cost: CostArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long, value_enum, default_value = "uniform")]
    pub model: ModelArg,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub directed: bool,
    /// Comma separated `motif=value`: a count for uniform, a density for bjr.
    #[arg(long)]
    pub plant: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Edge list destination; standard output when absent.
    #[arg(long)]
    pub out_graph: Option<PathBuf>,
    #[arg(long)]
    pub out_cover: Option<PathBuf>,
}

fn parse_epsilon(s: &str) -> std::result::Result<EpsilonMode, String> {
    s.parse().map_err(|e: motifcover::InfoError| e.to_string())
}

fn parse_positive(s: &str) -> std::result::Result<usize, String> {
    match s.parse::<usize>() {
        Ok(x) if x > 0 => Ok(x),
        _ => Err(format!("{s:?} is not a positive integer")),
    }
}

/// A failure with its process exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub const USAGE: i32 = 1;
    pub const INPUT: i32 = 2;
    pub const INFEASIBLE: i32 = 3;

    fn input(message: impl fmt::Display) -> Self {
        CliError { code: Self::INPUT, message: message.to_string() }
    }

    fn usage(message: impl fmt::Display) -> Self {
        CliError { code: Self::USAGE, message: message.to_string() }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

type Result<T> = std::result::Result<T, CliError>;

/// Parses `args` (program name first), runs the command and returns the
/// exit code. Diagnostics go to `err`; results go to `out` unless a file
/// destination was given.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                CliError::USAGE
            } else {
                let _ = write!(out, "{text}");
                0
            };
        }
    };
    // Output is buffered so the command can run inside a sized pool.
    let (mut out_buf, mut err_buf) = (Vec::new(), Vec::new());
    let result = match thread_pool() {
        Ok(Some(pool)) => pool.install(|| dispatch(cli.command, &mut out_buf, &mut err_buf)),
        Ok(None) => dispatch(cli.command, &mut out_buf, &mut err_buf),
        Err(e) => Err(e),
    };
    let _ = out.write_all(&out_buf).and_then(|_| out.flush());
    let _ = err.write_all(&err_buf);
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.code
        }
    }
}

fn thread_pool() -> Result<Option<rayon::ThreadPool>> {
    let Ok(value) = std::env::var(THREADS_ENV) else {
        return Ok(None);
    };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| CliError::usage(format!("{THREADS_ENV} must be a positive integer, got {value:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map(Some)
        .map_err(|e| CliError::usage(format!("cannot start {threads} worker threads: {e}")))
}

fn dispatch(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    match command {
        Command::Catalog(a) => cmd_catalog(&a, out),
        Command::Analyze(a) => cmd_analyze(&a, out, err),
        Command::Score(a) => cmd_score(&a, out),
        Command::Generate(a) => cmd_generate(&a, out, err),
    }
}

fn io_error(path: &Path, e: impl fmt::Display) -> CliError {
    CliError::input(format!("{}: {e}", path.display()))
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(|e| io_error(path, e))
}

fn load_graph(path: &Path, directed: bool) -> Result<LoadedGraph> {
    let file = File::open(path).map_err(|e| io_error(path, e))?;
    load_edge_list(BufReader::new(file), directed).map_err(|e| io_error(path, e))
}

pub fn cmd_catalog(a: &CatalogArgs, out: &mut dyn Write) -> Result<()> {
    let filter = match a.filter {
        FilterArg::Connected => CatalogFilter::Connected,
        FilterArg::Biconnected => CatalogFilter::Biconnected,
    };
    let catalog = generate_catalog(a.max_size, a.directed, filter).map_err(|e| {
        CliError::input(format!("{e} (supported: 2 to {})", max_catalog_size(a.directed)))
    })?;
    if let Some(path) = &a.out {
        let mut w = create(path)?;
        catalog.write(&mut w).and_then(|_| w.flush()).map_err(|e| io_error(path, e))?;
    }
    writeln!(out, "{}", catalog.len()).map_err(CliError::input)
}

struct CatalogChoice {
    catalog: MotifCatalog,
    echo: CatalogEcho,
}

fn choose_catalog(a: &AnalyzeArgs, err: &mut dyn Write) -> Result<CatalogChoice> {
    let filter = if a.biconnected_only { CatalogFilter::Biconnected } else { CatalogFilter::Connected };
    if let Some(path) = &a.candidates {
        let file = File::open(path).map_err(|e| io_error(path, e))?;
        let (mut catalog, injected) = MotifCatalog::read(BufReader::new(file)).map_err(|e| io_error(path, e))?;
        if catalog.directed() != a.directed {
            return Err(CliError::input(format!(
                "{}: candidate motifs are {} but the graph is read as {}",
                path.display(),
                if catalog.directed() { "directed" } else { "undirected" },
                if a.directed { "directed" } else { "undirected" }
            )));
        }
        if injected {
            let _ = writeln!(err, "warning: candidate catalog lacks the single edge; added it");
        }
        if a.biconnected_only {
            catalog = catalog.biconnected_only();
        }
        let echo = CatalogEcho {
            source: "file".into(),
            path: Some(path.display().to_string()),
            max_size: catalog.max_size(),
            filter: filter.to_string(),
            classes: catalog.len(),
            single_edge_injected: injected,
        };
        return Ok(CatalogChoice { catalog, echo });
    }
    let k = a.max_size.expect("clap requires a catalog source");
    let catalog = generate_catalog(k, a.directed, filter)
        .map_err(|e| CliError::input(format!("{e} (supported: 2 to {})", max_catalog_size(a.directed))))?;
    let echo = CatalogEcho {
        source: "generated".into(),
        path: None,
        max_size: k,
        filter: filter.to_string(),
        classes: catalog.len(),
        single_edge_injected: false,
    };
    Ok(CatalogChoice { catalog, echo })
}

/// Seed of run `i`: the base seed itself for the first run, so a single
/// run replays with `--seed` alone.
pub fn run_seed(seed: u64, i: usize) -> u64 {
    if i == 0 {
        seed
    } else {
        derive_seed(seed, &[i as u64])
    }
}

pub fn cmd_analyze(a: &AnalyzeArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    if a.emit_cover && matches!(a.output.format, FormatArg::Csv) {
        return Err(CliError::usage("--emit-cover needs the JSON format; use --cover-out with CSV"));
    }
    let lg = load_graph(&a.graph, a.directed)?;
    let g = &lg.graph;
    if g.edge_count() == 0 {
        return Err(CliError::input(format!("{}: graph has no edges", a.graph.display())));
    }
    if lg.duplicates > 0 {
        let _ = writeln!(err, "warning: {} duplicate edges collapsed", lg.duplicates);
    }
    let choice = choose_catalog(a, err)?;
    let model = a.cost.model();

    let seeds: Vec<u64> = (0..a.runs).map(|i| run_seed(a.seed, i)).collect();
    let solutions: Vec<Solution> = seeds
        .par_iter()
        .map(|&seed| {
            let mut cfg = SolverConfig::new(choice.catalog.clone());
            cfg.seed = seed;
            cfg.restarts = a.restarts;
            cfg.cost = model;
            cfg.instance_cap = a.instance_cap;
            cfg.biconnected_only = a.biconnected_only;
            greedy_cover(g, &cfg)
        })
        .collect::<std::result::Result<_, _>>()
        .map_err(CliError::input)?;

    let best = (0..solutions.len())
        .min_by(|&i, &j| solutions[i].report.sigma.total_cmp(&solutions[j].report.sigma).then(i.cmp(&j)))
        .expect("at least one run");
    let sol = &solutions[best];
    let path = a.graph.display().to_string();
    let mut report = Report::from_information("analyze", &path, lg.duplicates, &sol.report);
    report.config = Some(ConfigEcho {
        catalog: choice.echo,
        seed: a.seed,
        restarts: a.restarts,
        runs: a.runs,
        epsilon: model.epsilon.to_string(),
        log_star: match model.log_star {
            LogStarVariant::Universal => "universal".into(),
            LogStarVariant::Plain => "plain".into(),
        },
        instance_cap: a.instance_cap,
    });
    report.best_run = Some(best);
    report.steps = Some(sol.steps.iter().map(StepRow::from).collect());
    let runs: Vec<RunSummary> = solutions
        .iter()
        .zip(&seeds)
        .enumerate()
        .map(|(i, (s, &seed))| RunSummary {
            run: i,
            seed,
            sigma: s.report.sigma,
            counts: s.report.motifs.iter().map(|r| (r.motif.to_string(), r.count)).collect(),
        })
        .collect();
    if a.runs > 1 {
        for row in &mut report.motifs {
            let counts = runs.iter().map(|r| r.counts.get(&row.motif).copied().unwrap_or(0));
            let lo = counts.clone().min().unwrap_or(0);
            let hi = counts.max().unwrap_or(0);
            row.count_range = Some([lo, hi]);
        }
    }
    report.runs = Some(runs);

    let cover_json = cover_to_json(&sol.cover, Some(&lg.labels));
    if a.emit_cover {
        report.cover = Some(serde_json::from_str(&cover_json).expect("cover JSON is valid"));
    }
    if let Some(p) = &a.cover_out {
        let mut w = create(p)?;
        writeln!(w, "{cover_json}").and_then(|_| w.flush()).map_err(|e| io_error(p, e))?;
    }
    emit_report(&report, &a.output, out)
}

fn emit_report(report: &Report, o: &OutputArgs, out: &mut dyn Write) -> Result<()> {
    let write = |w: &mut dyn Write| -> std::io::Result<()> {
        match o.format {
            FormatArg::Json => report.write_json(&mut *w),
            FormatArg::Csv => report.write_csv(&mut *w).map_err(std::io::Error::other),
        }?;
        w.flush()
    };
    match &o.out {
        Some(p) => write(&mut create(p)?).map_err(|e| io_error(p, e)),
        None => write(out).map_err(CliError::input),
    }
}

pub fn cmd_score(a: &ScoreArgs, out: &mut dyn Write) -> Result<()> {
    let lg = load_graph(&a.graph, a.directed)?;
    let text = std::fs::read_to_string(&a.cover).map_err(|e| io_error(&a.cover, e))?;
    let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| io_error(&a.cover, e))?;
    let rows = match value {
        serde_json::Value::Object(mut obj) => obj
            .remove("cover")
            .ok_or_else(|| io_error(&a.cover, "object without a \"cover\" listing"))?,
        v => v,
    };
    let cover_error = |e: CoverError| match e {
        CoverError::Incomplete(missing) => {
            let names: Vec<String> = missing
                .iter()
                .map(|e| format!("({}, {})", lg.labels[e.0 as usize], lg.labels[e.1 as usize]))
                .collect();
            CliError::input(format!("cover misses {} edges: {}", missing.len(), names.join(" ")))
        }
        e => io_error(&a.cover, e),
    };
    let cover = cover_from_json(&rows.to_string(), &lg).map_err(cover_error)?;
    cover.validate(&lg.graph).map_err(cover_error)?;
    let info = information_report(&lg.graph, &cover, &a.cost.model()).map_err(CliError::input)?;
    let report = Report::from_information("score", &a.graph.display().to_string(), lg.duplicates, &info);
    emit_report(&report, &a.output, out)
}

/// Parses `motif=value,...` into a plan; aliases become canonical classes.
pub fn parse_plant(text: &str, directed: bool, model: ModelArg) -> Result<Vec<(MotifClass, PlantTarget)>> {
    let mut plan: Vec<(MotifClass, PlantTarget)> = Vec::new();
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (name, value) = item
            .split_once('=')
            .ok_or_else(|| CliError::input(format!("plant entry {item:?} is not motif=value")))?;
        let class = MotifClass::new(named_motif(name, directed).map_err(CliError::input)?);
        if !class.connected {
            return Err(CliError::input(format!("{name}: planted motifs must be connected")));
        }
        if plan.iter().any(|(c, _)| c.canonical == class.canonical) {
            return Err(CliError::input(format!("{name}: motif {} listed twice", class.id())));
        }
        let value = value.trim();
        let target = match model {
            ModelArg::Uniform => PlantTarget::Count(
                value
                    .parse()
                    .map_err(|_| CliError::input(format!("{name}: count {value:?} is not a non-negative integer")))?,
            ),
            ModelArg::Bjr => {
                let k: f64 = value
                    .parse()
                    .ok()
                    .filter(|k: &f64| k.is_finite() && *k >= 0.0)
                    .ok_or_else(|| CliError::input(format!("{name}: density {value:?} is not a non-negative number")))?;
                PlantTarget::Density(k)
            }
        };
        if matches!(target, PlantTarget::Count(0)) || matches!(target, PlantTarget::Density(k) if k == 0.0) {
            return Err(CliError::input(format!("{name}={value} plants nothing")));
        }
        plan.push((class, target));
    }
    if plan.is_empty() {
        return Err(CliError::input("empty plant specification"));
    }
    Ok(plan)
}

pub fn cmd_generate(a: &GenerateArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let plan = parse_plant(&a.plant, a.directed, a.model)?;
    let spec = PlantSpec { n: a.n, directed: a.directed, plan, seed: a.seed };
    let result = match a.model {
        ModelArg::Uniform => realize_uniform_cover(&spec),
        ModelArg::Bjr => generate_bjr(&spec),
    }
    .map_err(|e| match e {
        GenerateError::Infeasible { .. } | GenerateError::InfeasibleDensity { .. } | GenerateError::TooDense { .. } => {
            CliError { code: CliError::INFEASIBLE, message: e.to_string() }
        }
        e => CliError::input(e),
    })?;
    match &a.out_graph {
        Some(p) => {
            let mut w = create(p)?;
            write_edge_list(&result.graph, &mut w).and_then(|_| w.flush()).map_err(|e| io_error(p, e))?;
        }
        None => write_edge_list(&result.graph, &mut *out).map_err(CliError::input)?,
    }
    if let Some(p) = &a.out_cover {
        let mut w = create(p)?;
        writeln!(w, "{}", cover_to_json(&result.planted, None))
            .and_then(|_| w.flush())
            .map_err(|e| io_error(p, e))?;
    }
    let _ = writeln!(
        err,
        "planted {} instances: {} vertices, {} edges, {} edge collisions",
        result.planted.len(),
        result.graph.vertex_count(),
        result.graph.edge_count(),
        result.collisions
    );
    Ok(())
}
