//! End-to-end estimator: correlation, mixture fit, detection, thresholding.

use serde::{Deserialize, Serialize};

use crate::corr::{sample_correlation, z_matrix, CorrMatrix, ZMatrix};
use crate::data::DataMatrix;
use crate::error::Result;
use crate::mixture::{
    fit_mixture, weight_matrix, MixtureFit, MixtureOptions, WeightMatrix, WeightMode,
};
use crate::netdetect::{detect, DetectConfig, Partition};
use crate::threshold::{estimate_odds, nice_threshold, OddsPair, ThresholdedEstimate, DEFAULT_T};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PipelineConfig {
    pub mixture: MixtureOptions,
    pub weight_mode: WeightMode,
    pub detect: DetectConfig,
    pub t: f64,
    pub standardize: bool,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            mixture: MixtureOptions::default(),
            weight_mode: WeightMode::Posterior,
            detect: DetectConfig::default(),
            t: DEFAULT_T,
            standardize: false,
        }
    }
}

/// Everything up to and including detection.
#[derive(Debug, Clone)]
pub struct Topology {
    pub corr: CorrMatrix,
    pub z: ZMatrix,
    pub fit: MixtureFit,
    pub weights: WeightMatrix,
    pub partition: Partition,
}

#[derive(Debug, Clone)]
pub struct PipelineRun {
    pub topology: Topology,
    pub odds: OddsPair,
    pub estimate: ThresholdedEstimate,
}

pub fn correlation(data: &DataMatrix, cfg: &PipelineConfig) -> Result<CorrMatrix> {
    if cfg.standardize {
        sample_correlation(&data.standardized())
    } else {
        sample_correlation(data)
    }
}

/// Fisher-Z matrix and the two-groups fit over its off-diagonal entries.
pub fn mixture_stage(corr: &CorrMatrix, cfg: &PipelineConfig) -> Result<(ZMatrix, MixtureFit)> {
    let z = z_matrix(corr);
    let fit = fit_mixture(&z.upper_triangle(), corr.n(), &cfg.mixture)?;
    Ok((z, fit))
}

/// Mixture fit, weights and detected partition for a correlation matrix.
pub fn topology(corr: CorrMatrix, cfg: &PipelineConfig) -> Result<Topology> {
    cfg.detect.validate()?;
    let (z, fit) = mixture_stage(&corr, cfg)?;
    let weights = weight_matrix(&z, &fit, cfg.weight_mode);
    let partition = detect(&weights, &cfg.detect)?;
    Ok(Topology {
        corr,
        z,
        fit,
        weights,
        partition,
    })
}

/// Threshold a detected topology at constant `t`.
pub fn threshold(top: &Topology, t: f64) -> Result<(OddsPair, ThresholdedEstimate)> {
    let odds = estimate_odds(&top.z, &top.partition, &top.fit)?;
    let est = nice_threshold(&top.corr, &top.z, &top.partition, &top.fit, &odds, t)?;
    Ok((odds, est))
}

pub fn estimate(data: &DataMatrix, cfg: &PipelineConfig) -> Result<PipelineRun> {
    let top = topology(correlation(data, cfg)?, cfg)?;
    let (odds, estimate) = threshold(&top, cfg.t)?;
    Ok(PipelineRun {
        topology: top,
        odds,
        estimate,
    })
}
