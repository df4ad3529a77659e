//! `netcorr` command-line tool: estimate, detect, simulate.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use netcorr::mixture::weight_matrix;
use netcorr::netdetect::detect;
use netcorr::pipeline::{self, Topology};
use netcorr::simbench::{run_benchmark, summarize, Method};
use netcorr::{data, report, Error, Result};
use serde::de::DeserializeOwned;
use serde_json::json;

use netcorr_cli::config::RunConfig;

#[derive(Debug, Parser)]
#[command(
    name = "netcorr",
    version,
    about = "Network-guided correlation matrix estimation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Detect the topology and write the thresholded correlation estimate.
    Estimate(CommonArgs),
    /// Detect the topology only; writes the partition and reordered heatmaps.
    Detect(CommonArgs),
    /// Run the synthetic benchmark.
    Simulate(SimulateArgs),
}

fn parse_enum<T: DeserializeOwned>(s: &str) -> std::result::Result<T, String> {
    serde_json::from_value(serde_json::Value::String(s.replace('-', "_")))
        .map_err(|e| e.to_string())
}

#[derive(Debug, Args)]
struct CommonArgs {
    /// JSON config file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, visible_alias = "input")]
    input_path: Option<PathBuf>,
    #[arg(long, visible_alias = "out")]
    output_dir: Option<PathBuf>,
    /// The input CSV has no header row.
    #[arg(long)]
    no_header: bool,
    #[arg(long)]
    lambda0: Option<f64>,
    #[arg(long = "T", visible_alias = "t")]
    t: Option<f64>,
    #[arg(long)]
    c_max: Option<usize>,
    #[arg(long)]
    perm_iters: Option<usize>,
    #[arg(long)]
    alpha: Option<f64>,
    /// theoretical | empirical
    #[arg(long, value_parser = parse_enum::<netcorr::mixture::NullMode>)]
    null_mode: Option<netcorr::mixture::NullMode>,
    /// posterior | raw_z
    #[arg(long, value_parser = parse_enum::<netcorr::mixture::WeightMode>)]
    weight_mode: Option<netcorr::mixture::WeightMode>,
    /// complement | as_printed
    #[arg(long, value_parser = parse_enum::<netcorr::netdetect::StatOrientation>)]
    stat_orientation: Option<netcorr::netdetect::StatOrientation>,
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    standardize: Option<bool>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long)]
    kmeans_restarts: Option<usize>,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long)]
    replicates: Option<usize>,
    #[arg(long)]
    rho: Option<f64>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    p: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    clique_sizes: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',', value_parser = parse_enum::<Method>)]
    methods: Option<Vec<Method>>,
    #[arg(long, value_delimiter = ',')]
    t_grid: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    magnitude_grid: Option<Vec<f64>>,
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    shuffle_nodes: Option<bool>,
    #[arg(long)]
    record_runtime: bool,
}

macro_rules! overlay {
    ($cfg:expr, $args:expr, $($field:ident),+) => {
        $(if let Some(v) = $args.$field.clone() { $cfg.$field = v; })+
    };
}

impl CommonArgs {
    fn resolve(&self) -> Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::from_file(path)?,
            None => RunConfig::default(),
        };
        overlay!(
            cfg,
            self,
            output_dir,
            lambda0,
            t,
            c_max,
            alpha,
            null_mode,
            weight_mode,
            stat_orientation,
            standardize,
            seed,
            threads
        );
        if self.input_path.is_some() {
            cfg.input_path = self.input_path.clone();
        }
        if self.perm_iters.is_some() {
            cfg.perm_iters = self.perm_iters;
        }
        if self.kmeans_restarts.is_some() {
            cfg.kmeans_restarts = self.kmeans_restarts;
        }
        if self.no_header {
            cfg.has_header = false;
        }
        Ok(cfg)
    }
}

impl SimulateArgs {
    fn resolve(&self) -> Result<RunConfig> {
        let mut cfg = self.common.resolve()?;
        let sim = &mut cfg.simulate;
        overlay!(
            sim,
            self,
            replicates,
            rho,
            n,
            p,
            clique_sizes,
            methods,
            t_grid,
            magnitude_grid,
            shuffle_nodes
        );
        if self.record_runtime {
            sim.record_runtime = true;
        }
        Ok(cfg)
    }
}

fn log_stage(stage: &str, start: Instant, extra: serde_json::Value) {
    let mut line = json!({ "stage": stage, "ms": start.elapsed().as_secs_f64() * 1e3 });
    if let (Some(obj), serde_json::Value::Object(more)) = (line.as_object_mut(), extra) {
        obj.extend(more);
    }
    eprintln!("{line}");
}

fn prepare_output(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|source| Error::Io {
        path: dir.display().to_string(),
        source,
    })
}

fn load_input(cfg: &RunConfig) -> Result<data::DataMatrix> {
    let path = cfg
        .input_path
        .as_ref()
        .ok_or_else(|| Error::Input("no input path given (use --input-path)".into()))?;
    let start = Instant::now();
    let x = data::load_csv(path, cfg.has_header)?;
    log_stage("load", start, json!({ "n": x.n(), "p": x.p() }));
    Ok(x)
}

fn run_topology(cfg: &RunConfig, x: &data::DataMatrix) -> Result<Topology> {
    let pipe = cfg.pipeline();
    pipe.detect.validate()?;

    let start = Instant::now();
    let corr = pipeline::correlation(x, &pipe)?;
    log_stage("correlation", start, json!({}));

    let start = Instant::now();
    let (z, fit) = pipeline::mixture_stage(&corr, &pipe)?;
    let weights = weight_matrix(&z, &fit, pipe.weight_mode);
    log_stage("mixture", start, json!({ "pi0": fit.pi0() }));

    let start = Instant::now();
    let partition = detect(&weights, &pipe.detect)?;
    log_stage(
        "detect",
        start,
        json!({ "C": partition.c, "communities": partition.communities.len(), "significant": partition.significant.len() }),
    );
    Ok(Topology {
        corr,
        z,
        fit,
        weights,
        partition,
    })
}

fn cmd_estimate(cfg: &RunConfig) -> Result<()> {
    let x = load_input(cfg)?;
    let top = run_topology(cfg, &x)?;
    let start = Instant::now();
    let (odds, est) = pipeline::threshold(&top, cfg.t)?;
    log_stage("threshold", start, json!({ "kept": est.edge_count() }));

    let dir = &cfg.output_dir;
    prepare_output(dir)?;
    let names = x.column_names();
    let natural: Vec<usize> = (0..x.p()).collect();
    report::write_matrix_csv(&dir.join("r_hat.csv"), est.r_hat.values(), names, &natural)?;
    report::write_edges_csv(
        &dir.join("edges.csv"),
        &est,
        top.corr.values(),
        &top.z,
        names,
    )?;
    report::write_partition_json(&dir.join("partition.json"), &top.partition, names)?;
    report::write_mixture_json(&dir.join("mixture.json"), &top.fit)?;
    report::write_summary_json(&dir.join("summary.json"), &est, &odds)?;
    Ok(())
}

fn cmd_detect(cfg: &RunConfig) -> Result<()> {
    let x = load_input(cfg)?;
    let top = run_topology(cfg, &x)?;
    let dir = &cfg.output_dir;
    prepare_output(dir)?;
    let names = x.column_names();
    let order = top.partition.community_first_order();
    report::write_partition_json(&dir.join("partition.json"), &top.partition, names)?;
    report::write_matrix_csv(
        &dir.join("w_heatmap.csv"),
        top.weights.values(),
        names,
        &order,
    )?;
    report::write_matrix_csv(&dir.join("r_heatmap.csv"), top.corr.values(), names, &order)?;
    Ok(())
}

fn cmd_simulate(cfg: &RunConfig) -> Result<()> {
    let bench = cfg.bench();
    bench.validate()?;
    let start = Instant::now();
    let rows = run_benchmark(&bench)?;
    log_stage(
        "simulate",
        start,
        json!({ "replicates": bench.replicates, "rows": rows.len() }),
    );
    let dir = &cfg.output_dir;
    prepare_output(dir)?;
    report::write_bench_csv(&dir.join("bench.csv"), &rows)?;
    report::write_bench_summary_csv(&dir.join("bench_summary.csv"), &summarize(&rows))?;
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    let (cfg, command): (RunConfig, fn(&RunConfig) -> Result<()>) = match &cli.command {
        Command::Estimate(a) => (a.resolve()?, cmd_estimate),
        Command::Detect(a) => (a.resolve()?, cmd_detect),
        Command::Simulate(a) => (a.resolve()?, cmd_simulate),
    };
    if cfg.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.threads)
            .build_global()
            .map_err(|e| Error::Input(format!("thread pool: {e}")))?;
    }
    command(&cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!(
                "{}",
                json!({ "level": "error", "kind": e.kind(), "message": e.to_string() })
            );
            ExitCode::from(if e.is_numeric() { 3 } else { 2 })
        }
    }
}
