//! Synthetic planted-clique data, FP/FN scoring and the multi-method benchmark.

use std::fmt;
use std::time::Instant;

use nalgebra::DMatrix;
use rand::seq::SliceRandom;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::DataMatrix;
use crate::error::{Error, Result};
use crate::pipeline::{correlation, mixture_stage, threshold, topology, PipelineConfig};
use crate::rng::{derive_seed, task_rng, STREAM_REPLICATE, STREAM_SAMPLE, STREAM_SHUFFLE};
use crate::threshold::{magnitude_threshold, universal_threshold, ThresholdedEstimate, DEFAULT_T};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SyntheticSpec {
    pub p: usize,
    pub clique_sizes: Vec<usize>,
    pub rho: f64,
    pub n: usize,
    pub shuffle_nodes: bool,
    pub seed: u64,
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        Self {
            p: 100,
            clique_sizes: vec![15, 10],
            rho: 0.5,
            n: 25,
            shuffle_nodes: true,
            seed: 0,
        }
    }
}

impl SyntheticSpec {
    pub fn validate(&self) -> Result<()> {
        let planted: usize = self.clique_sizes.iter().sum();
        if planted > self.p {
            return Err(Error::Input(format!(
                "cliques cover {planted} nodes but p = {}",
                self.p
            )));
        }
        if self.p < 2 || self.n < 4 {
            return Err(Error::Input("need p >= 2 and n >= 4".into()));
        }
        if self.clique_sizes.iter().any(|&s| s < 2) {
            return Err(Error::Input("every clique needs at least two nodes".into()));
        }
        if !(self.rho > -1.0 && self.rho < 1.0) || self.rho == 0.0 {
            return Err(Error::Input(format!(
                "rho = {} must be nonzero and inside (-1,1)",
                self.rho
            )));
        }
        for &s in &self.clique_sizes {
            if 1.0 + (s as f64 - 1.0) * self.rho <= 0.0 {
                return Err(Error::Input(format!(
                    "rho = {} makes a {s}-node block indefinite",
                    self.rho
                )));
            }
        }
        Ok(())
    }

    /// The spec for replicate `r`, with its own derived seed.
    pub fn replicate(&self, r: usize) -> Self {
        Self {
            seed: derive_seed(self.seed, &[STREAM_REPLICATE, r as u64]),
            ..self.clone()
        }
    }

    pub fn true_edge_count(&self) -> usize {
        self.clique_sizes.iter().map(|s| s * (s - 1) / 2).sum()
    }

    pub fn null_edge_count(&self) -> usize {
        self.p * (self.p - 1) / 2 - self.true_edge_count()
    }
}

#[derive(Debug, Clone)]
pub struct Synthetic {
    pub data: DataMatrix,
    /// Planted edge indicator, diagonal false.
    pub truth: DMatrix<bool>,
    /// Population correlation matrix in the same node order as `data`.
    pub sigma: DMatrix<f64>,
}

/// Draw `n` rows from the block-correlation normal model of `spec`.
pub fn generate(spec: &SyntheticSpec) -> Result<Synthetic> {
    spec.validate()?;
    let p = spec.p;
    let mut block = vec![None; p];
    let mut start = 0;
    for (b, &s) in spec.clique_sizes.iter().enumerate() {
        block[start..start + s]
            .iter_mut()
            .for_each(|v| *v = Some(b));
        start += s;
    }
    let truth = DMatrix::from_fn(p, p, |i, j| {
        i != j && block[i].is_some() && block[i] == block[j]
    });
    let sigma = DMatrix::from_fn(p, p, |i, j| {
        if i == j {
            1.0
        } else if truth[(i, j)] {
            spec.rho
        } else {
            0.0
        }
    });
    let chol = sigma
        .clone()
        .cholesky()
        .ok_or_else(|| Error::Input("population correlation is not positive definite".into()))?;
    let l = chol.l();

    let mut rng = task_rng(spec.seed, &[STREAM_SAMPLE]);
    let normals = DMatrix::<f64>::from_fn(spec.n, p, |_, _| StandardNormal.sample(&mut rng));
    let mut x: DMatrix<f64> = normals * l.transpose();
    let (mut truth, mut sigma) = (truth, sigma);

    if spec.shuffle_nodes {
        let mut order: Vec<usize> = (0..p).collect();
        order.shuffle(&mut task_rng(spec.seed, &[STREAM_SHUFFLE]));
        x = x.select_columns(&order);
        truth = DMatrix::from_fn(p, p, |i, j| truth[(order[i], order[j])]);
        sigma = DMatrix::from_fn(p, p, |i, j| sigma[(order[i], order[j])]);
    }
    Ok(Synthetic {
        data: DataMatrix::new(x, None)?,
        truth,
        sigma,
    })
}

/// (false positives, false negatives) over the upper triangle.
pub fn score(estimate: &ThresholdedEstimate, truth: &DMatrix<bool>) -> Result<(usize, usize)> {
    let p = estimate.p();
    if truth.nrows() != p || truth.ncols() != p {
        return Err(Error::Input(format!(
            "estimate is {p}x{p} but truth is {}x{}",
            truth.nrows(),
            truth.ncols()
        )));
    }
    let (mut fp, mut fneg) = (0, 0);
    for i in 0..p {
        for j in (i + 1)..p {
            match (estimate.edges[(i, j)], truth[(i, j)]) {
                (true, false) => fp += 1,
                (false, true) => fneg += 1,
                _ => {}
            }
        }
    }
    Ok((fp, fneg))
}

/// Largest absolute entrywise deviation from the population matrix.
pub fn max_norm_error(estimate: &ThresholdedEstimate, sigma: &DMatrix<f64>) -> f64 {
    (estimate.r_hat.values() - sigma).amax()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Nice,
    Universal,
    Magnitude,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Nice => "NICE",
            Method::Universal => "universal",
            Method::Magnitude => "magnitude",
        })
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "nice" => Ok(Method::Nice),
            "universal" => Ok(Method::Universal),
            "magnitude" => Ok(Method::Magnitude),
            _ => Err(Error::Input(format!("unknown method {s:?}"))),
        }
    }
}

/// Tuning label as written to CSV: "None" or the numeric value.
pub fn tuning_label(tuning: Option<f64>) -> String {
    tuning.map_or_else(|| "None".to_string(), |t| t.to_string())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchResult {
    pub method: Method,
    pub tuning: Option<f64>,
    pub fp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
    pub replicate: usize,
    pub runtime_ms: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BenchConfig {
    pub spec: SyntheticSpec,
    pub methods: Vec<Method>,
    pub replicates: usize,
    /// Threshold constants for the universal rule.
    pub t_grid: Vec<f64>,
    /// Magnitude cutoffs on the sqrt(n)-scaled Fisher-Z scale.
    pub magnitude_grid: Vec<f64>,
    pub pipeline: PipelineConfig,
    /// Wall-clock timings make the table nondeterministic, so they are opt-in.
    pub record_runtime: bool,
}

/// Benchmark-only reductions of the detection budget; each replicate is one
/// full pipeline run.
pub const BENCH_PERM_ITERS: usize = 1_000;
pub const BENCH_KMEANS_RESTARTS: usize = 20;

impl Default for BenchConfig {
    fn default() -> Self {
        let mut pipeline = PipelineConfig::default();
        pipeline.detect.perm_iters = BENCH_PERM_ITERS;
        pipeline.detect.kmeans_restarts = BENCH_KMEANS_RESTARTS;
        Self {
            spec: SyntheticSpec::default(),
            methods: vec![Method::Nice, Method::Universal, Method::Magnitude],
            replicates: 100,
            t_grid: vec![2.0, DEFAULT_T, 8.0, 16.0],
            magnitude_grid: vec![2.0, 2.5, 3.0, 3.5, 4.0],
            pipeline,
            record_runtime: false,
        }
    }
}

impl BenchConfig {
    pub fn validate(&self) -> Result<()> {
        self.spec.validate()?;
        self.pipeline.detect.validate()?;
        if self.replicates == 0 {
            return Err(Error::Input("at least one replicate required".into()));
        }
        if self.methods.is_empty() {
            return Err(Error::Input("no methods selected".into()));
        }
        if self
            .t_grid
            .iter()
            .chain(&self.magnitude_grid)
            .any(|t| !(*t > 0.0))
        {
            return Err(Error::Input("tuning values must be positive".into()));
        }
        Ok(())
    }
}

/// Correlation cutoff matching a magnitude tuning value t: |z| * sqrt(n) > t.
pub fn magnitude_cutoff(t: f64, n: usize) -> f64 {
    (t / (n as f64).sqrt()).tanh()
}

fn elapsed_ms(start: Instant, record: bool) -> u64 {
    if record {
        start.elapsed().as_millis() as u64
    } else {
        0
    }
}

/// All method/tuning rows for one replicate.
pub fn run_replicate(cfg: &BenchConfig, replicate: usize) -> Result<Vec<BenchResult>> {
    let spec = cfg.spec.replicate(replicate);
    let synth = generate(&spec)?;
    let mut pipe = cfg.pipeline.clone();
    pipe.detect.seed = spec.seed;
    let corr = correlation(&synth.data, &pipe)?;
    let mut rows = Vec::new();
    let row = |method, tuning, (fp, fn_): (usize, usize), runtime_ms| BenchResult {
        method,
        tuning,
        fp,
        fn_,
        replicate,
        runtime_ms,
    };
    for &method in &cfg.methods {
        match method {
            Method::Nice => {
                let start = Instant::now();
                let top = topology(corr.clone(), &pipe)?;
                let (_, est) = threshold(&top, pipe.t)?;
                let ms = elapsed_ms(start, cfg.record_runtime);
                rows.push(row(method, None, score(&est, &synth.truth)?, ms));
            }
            Method::Universal => {
                let (z, fit) = mixture_stage(&corr, &pipe)?;
                for &t in &cfg.t_grid {
                    let start = Instant::now();
                    let est = universal_threshold(&corr, &z, &fit, t)?;
                    let ms = elapsed_ms(start, cfg.record_runtime);
                    rows.push(row(method, Some(t), score(&est, &synth.truth)?, ms));
                }
            }
            Method::Magnitude => {
                for &t in &cfg.magnitude_grid {
                    let start = Instant::now();
                    let est = magnitude_threshold(&corr, magnitude_cutoff(t, spec.n))?;
                    let ms = elapsed_ms(start, cfg.record_runtime);
                    rows.push(row(method, Some(t), score(&est, &synth.truth)?, ms));
                }
            }
        }
    }
    Ok(rows)
}

pub fn run_benchmark(cfg: &BenchConfig) -> Result<Vec<BenchResult>> {
    cfg.validate()?;
    let per_rep: Vec<Vec<BenchResult>> = (0..cfg.replicates)
        .into_par_iter()
        .map(|r| run_replicate(cfg, r))
        .collect::<Result<_>>()?;
    Ok(per_rep.into_iter().flatten().collect())
}

/// Linear-interpolation quantile of sorted data (the usual "type 7" rule).
pub fn quantile(sorted: &[f64], q: f64) -> f64 {
    assert!(!sorted.is_empty());
    let h = (sorted.len() - 1) as f64 * q.clamp(0.0, 1.0);
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub method: Method,
    pub tuning: Option<f64>,
    pub fp_med: f64,
    pub fp_q25: f64,
    pub fp_q75: f64,
    pub fn_med: f64,
    pub fn_q25: f64,
    pub fn_q75: f64,
}

/// Median and quartiles of FP and FN per (method, tuning), in first-seen order.
pub fn summarize(results: &[BenchResult]) -> Vec<SummaryRow> {
    let mut keys: Vec<(Method, Option<f64>)> = Vec::new();
    for r in results {
        if !keys.iter().any(|k| k.0 == r.method && k.1 == r.tuning) {
            keys.push((r.method, r.tuning));
        }
    }
    keys.into_iter()
        .map(|(method, tuning)| {
            let group = results
                .iter()
                .filter(|r| r.method == method && r.tuning == tuning);
            let mut fp: Vec<f64> = group.clone().map(|r| r.fp as f64).collect();
            let mut fneg: Vec<f64> = group.map(|r| r.fn_ as f64).collect();
            fp.sort_by(f64::total_cmp);
            fneg.sort_by(f64::total_cmp);
            SummaryRow {
                method,
                tuning,
                fp_med: quantile(&fp, 0.5),
                fp_q25: quantile(&fp, 0.25),
                fp_q75: quantile(&fp, 0.75),
                fn_med: quantile(&fneg, 0.5),
                fn_q25: quantile(&fneg, 0.25),
                fn_q75: quantile(&fneg, 0.75),
            }
        })
        .collect()
}
