//! Run configuration: built-in defaults, overlaid by a JSON file, overlaid by flags.

use std::path::{Path, PathBuf};

use netcorr::mixture::{MixtureOptions, NullMode, WeightMode};
use netcorr::netdetect::{DetectConfig, StatOrientation, DEFAULT_C_MAX};
use netcorr::pipeline::PipelineConfig;
use netcorr::simbench::{
    BenchConfig, Method, SyntheticSpec, BENCH_KMEANS_RESTARTS, BENCH_PERM_ITERS,
};
use netcorr::threshold::DEFAULT_T;
use netcorr::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub input_path: Option<PathBuf>,
    pub output_dir: PathBuf,
    pub has_header: bool,
    pub lambda0: f64,
    #[serde(rename = "T")]
    pub t: f64,
    pub c_max: usize,
    /// `None` means 10000 for estimate/detect and 1000 for simulate.
    pub perm_iters: Option<usize>,
    pub alpha: f64,
    pub null_mode: NullMode,
    pub weight_mode: WeightMode,
    pub stat_orientation: StatOrientation,
    pub standardize: bool,
    pub seed: u64,
    /// 0 uses every available core.
    pub threads: usize,
    /// `None` means 50 for estimate/detect and 20 for simulate.
    pub kmeans_restarts: Option<usize>,
    pub simulate: SimulateConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        let detect = DetectConfig::default();
        Self {
            input_path: None,
            output_dir: PathBuf::from("out"),
            has_header: true,
            lambda0: detect.lambda0,
            t: DEFAULT_T,
            c_max: DEFAULT_C_MAX,
            perm_iters: None,
            alpha: detect.alpha,
            null_mode: MixtureOptions::default().null_mode,
            weight_mode: WeightMode::default(),
            stat_orientation: detect.stat_orientation,
            standardize: false,
            seed: 0,
            threads: 0,
            kmeans_restarts: None,
            simulate: SimulateConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimulateConfig {
    pub p: usize,
    pub n: usize,
    pub rho: f64,
    pub clique_sizes: Vec<usize>,
    pub shuffle_nodes: bool,
    pub replicates: usize,
    pub methods: Vec<Method>,
    pub t_grid: Vec<f64>,
    pub magnitude_grid: Vec<f64>,
    pub record_runtime: bool,
}

impl Default for SimulateConfig {
    fn default() -> Self {
        let spec = SyntheticSpec::default();
        let bench = BenchConfig::default();
        Self {
            p: spec.p,
            n: spec.n,
            rho: spec.rho,
            clique_sizes: spec.clique_sizes,
            shuffle_nodes: spec.shuffle_nodes,
            replicates: bench.replicates,
            methods: bench.methods,
            t_grid: bench.t_grid,
            magnitude_grid: bench.magnitude_grid,
            record_runtime: false,
        }
    }
}

impl RunConfig {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse {
            row: e.line(),
            message: e.to_string(),
        })
    }

    /// Pipeline settings for estimate/detect.
    pub fn pipeline(&self) -> PipelineConfig {
        let detect = DetectConfig::default();
        self.pipeline_with(detect.perm_iters, detect.kmeans_restarts)
    }

    fn pipeline_with(&self, default_perm_iters: usize, default_restarts: usize) -> PipelineConfig {
        PipelineConfig {
            mixture: MixtureOptions {
                null_mode: self.null_mode,
                ..MixtureOptions::default()
            },
            weight_mode: self.weight_mode,
            detect: DetectConfig {
                lambda0: self.lambda0,
                c_max: self.c_max,
                kmeans_restarts: self.kmeans_restarts.unwrap_or(default_restarts),
                perm_iters: self.perm_iters.unwrap_or(default_perm_iters),
                alpha: self.alpha,
                seed: self.seed,
                stat_orientation: self.stat_orientation,
                ..DetectConfig::default()
            },
            t: self.t,
            standardize: self.standardize,
        }
    }

    pub fn bench(&self) -> BenchConfig {
        let s = &self.simulate;
        BenchConfig {
            spec: SyntheticSpec {
                p: s.p,
                clique_sizes: s.clique_sizes.clone(),
                rho: s.rho,
                n: s.n,
                shuffle_nodes: s.shuffle_nodes,
                seed: self.seed,
            },
            methods: s.methods.clone(),
            replicates: s.replicates,
            t_grid: s.t_grid.clone(),
            magnitude_grid: s.magnitude_grid.clone(),
            pipeline: self.pipeline_with(BENCH_PERM_ITERS, BENCH_KMEANS_RESTARTS),
            record_runtime: s.record_runtime,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_mirror_library() {
        let cfg = RunConfig::default();
        let pipe = cfg.pipeline();
        assert_eq!(pipe.detect, DetectConfig::default());
        assert_eq!(pipe.t, 4.0);
        assert_eq!(cfg.bench().pipeline, BenchConfig::default().pipeline);
    }

    #[test]
    fn json_round_trip() {
        let mut cfg = RunConfig::default();
        cfg.lambda0 = 0.3;
        cfg.simulate.rho = 0.7;
        let text = serde_json::to_string(&cfg).unwrap();
        assert!(text.contains("\"T\":4"));
        assert_eq!(RunConfig::from_json(&text).unwrap(), cfg);
    }

    #[test]
    fn partial_and_bad_files() {
        let cfg = RunConfig::from_json(r#"{"alpha": 0.01, "null_mode": "empirical"}"#).unwrap();
        assert_eq!(cfg.alpha, 0.01);
        assert_eq!(cfg.null_mode, NullMode::Empirical);
        assert_eq!(cfg.lambda0, 0.5);
        assert!(RunConfig::from_json(r#"{"alhpa": 0.01}"#).is_err());
        assert!(RunConfig::from_json("[1, 2").is_err());
    }
}
