//! Topology-guided hard thresholding of a sample correlation matrix.
//!
//! Edges inside a significant community are tested against the in-network
//! prior odds, every other edge against the out-network odds. Survivors keep
//! their sample correlation; everything else is set to zero.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::corr::{CorrMatrix, ZMatrix};
use crate::error::{Error, Result};
use crate::mixture::{refit_pi0, MixtureFit};
use crate::netdetect::Partition;

pub const DEFAULT_T: f64 = 4.0;

/// Prior null odds pi0/(1-pi0), infinite when pi0 = 1.
pub fn prior_odds(pi0: f64) -> f64 {
    if pi0 >= 1.0 {
        f64::INFINITY
    } else {
        pi0 / (1.0 - pi0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OddsPair {
    pub theta_in: f64,
    pub theta_out: f64,
    pub theta_all: f64,
    pub pi0_in: f64,
    pub pi0_out: f64,
    pub pi0_all: f64,
}

impl OddsPair {
    pub fn from_pi0(pi0_in: f64, pi0_out: f64, pi0_all: f64) -> Self {
        Self {
            theta_in: prior_odds(pi0_in),
            theta_out: prior_odds(pi0_out),
            theta_all: prior_odds(pi0_all),
            pi0_in,
            pi0_out,
            pi0_all,
        }
    }

    /// Both strata at the global odds; the rule then matches universal thresholding.
    pub fn uniform(pi0_all: f64) -> Self {
        Self::from_pi0(pi0_all, pi0_all, pi0_all)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stratum {
    In,
    Out,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdedEstimate {
    pub r_hat: CorrMatrix,
    pub edges: DMatrix<bool>,
    /// Absent for the magnitude rule, which does not use densities.
    pub bayes_factors: Option<DMatrix<f64>>,
    pub odds: Option<OddsPair>,
    /// Threshold constant (BF scale) or magnitude cutoff.
    pub t: f64,
    /// Per-edge stratum mask (true = in-network); all false outside the NICE rule.
    pub in_network: DMatrix<bool>,
}

impl ThresholdedEstimate {
    pub fn p(&self) -> usize {
        self.edges.nrows()
    }

    pub fn edge_count(&self) -> usize {
        let p = self.p();
        (0..p)
            .map(|i| ((i + 1)..p).filter(|&j| self.edges[(i, j)]).count())
            .sum()
    }

    pub fn stratum(&self, i: usize, j: usize) -> Stratum {
        if self.in_network[(i, j)] {
            Stratum::In
        } else {
            Stratum::Out
        }
    }

    /// Kept/dropped edge counts per stratum: (kept_in, kept_out, dropped_in, dropped_out).
    pub fn counts(&self) -> (usize, usize, usize, usize) {
        let p = self.p();
        let mut c = (0, 0, 0, 0);
        for i in 0..p {
            for j in (i + 1)..p {
                match (self.in_network[(i, j)], self.edges[(i, j)]) {
                    (true, true) => c.0 += 1,
                    (false, true) => c.1 += 1,
                    (true, false) => c.2 += 1,
                    (false, false) => c.3 += 1,
                }
            }
        }
        c
    }
}

/// f1(z)/f0(z) for every pair; the diagonal is 0.
pub fn bayes_factor_matrix(zm: &ZMatrix, fit: &MixtureFit) -> DMatrix<f64> {
    let p = zm.p();
    let mut bf = DMatrix::zeros(p, p);
    for i in 0..p {
        for j in (i + 1)..p {
            let v = fit.bayes_factor(zm.get(i, j));
            bf[(i, j)] = v;
            bf[(j, i)] = v;
        }
    }
    bf
}

/// Pairs whose endpoints share a significant community.
pub fn in_network_mask(partition: &Partition) -> DMatrix<bool> {
    let p = partition.p();
    let member = partition.significant_membership();
    DMatrix::from_fn(p, p, |i, j| {
        i != j && member[i].is_some() && member[i] == member[j]
    })
}

/// In/out prior odds with pi0 refitted on each stratum under the global f0, f1.
pub fn estimate_odds(zm: &ZMatrix, partition: &Partition, fit: &MixtureFit) -> Result<OddsPair> {
    if zm.p() != partition.p() {
        return Err(Error::Input("partition and z matrix sizes differ".into()));
    }
    let pi0_all = fit.pi0();
    if partition.significant.is_empty() {
        return Ok(OddsPair::uniform(pi0_all));
    }
    let mask = in_network_mask(partition);
    let p = zm.p();
    let (mut inside, mut outside) = (Vec::new(), Vec::new());
    for i in 0..p {
        for j in (i + 1)..p {
            if mask[(i, j)] {
                inside.push(zm.get(i, j));
            } else {
                outside.push(zm.get(i, j));
            }
        }
    }
    let refit = |s: &[f64]| {
        if s.is_empty() {
            Ok(pi0_all)
        } else {
            refit_pi0(s, fit)
        }
    };
    Ok(OddsPair::from_pi0(
        refit(&inside)?,
        refit(&outside)?,
        pi0_all,
    ))
}

/// Whether a Bayes factor clears `t * theta`; an infinite theta rejects everything.
pub fn survives(bf: f64, t: f64, theta: f64) -> bool {
    if theta.is_infinite() {
        return false;
    }
    bf >= t * theta
}

/// The two-stratum decision for every pair given precomputed Bayes factors.
pub fn nice_rule(
    bf: &DMatrix<f64>,
    in_network: &DMatrix<bool>,
    odds: &OddsPair,
    t: f64,
) -> DMatrix<bool> {
    let p = bf.nrows();
    DMatrix::from_fn(p, p, |i, j| {
        if i == j {
            return false;
        }
        let theta = if in_network[(i, j)] {
            odds.theta_in
        } else {
            odds.theta_out
        };
        survives(bf[(i, j)], t, theta)
    })
}

fn check_t(t: f64) -> Result<()> {
    if t > 0.0 && !t.is_nan() {
        Ok(())
    } else {
        Err(Error::Input(format!(
            "threshold constant must be positive, got {t}"
        )))
    }
}

fn apply(corr: &CorrMatrix, edges: &DMatrix<bool>) -> Result<CorrMatrix> {
    let p = corr.p();
    let values = DMatrix::from_fn(p, p, |i, j| {
        if i == j {
            1.0
        } else if edges[(i, j)] {
            corr.get(i, j)
        } else {
            0.0
        }
    });
    CorrMatrix::from_values(values, corr.n())
}

/// NICE estimate: stratum-specific Bayes-factor cutoffs.
pub fn nice_threshold(
    corr: &CorrMatrix,
    zm: &ZMatrix,
    partition: &Partition,
    fit: &MixtureFit,
    odds: &OddsPair,
    t: f64,
) -> Result<ThresholdedEstimate> {
    check_t(t)?;
    let bf = bayes_factor_matrix(zm, fit);
    let in_network = in_network_mask(partition);
    let edges = nice_rule(&bf, &in_network, odds, t);
    Ok(ThresholdedEstimate {
        r_hat: apply(corr, &edges)?,
        edges,
        bayes_factors: Some(bf),
        odds: Some(*odds),
        t,
        in_network,
    })
}

/// One cutoff for every edge: posterior odds pi1*f1/(pi0*f0) >= t.
pub fn universal_threshold(
    corr: &CorrMatrix,
    zm: &ZMatrix,
    fit: &MixtureFit,
    t: f64,
) -> Result<ThresholdedEstimate> {
    check_t(t)?;
    let p = corr.p();
    let bf = bayes_factor_matrix(zm, fit);
    let odds = OddsPair::uniform(fit.pi0());
    let in_network = DMatrix::from_element(p, p, false);
    let edges = nice_rule(&bf, &in_network, &odds, t);
    Ok(ThresholdedEstimate {
        r_hat: apply(corr, &edges)?,
        edges,
        bayes_factors: Some(bf),
        odds: Some(odds),
        t,
        in_network,
    })
}

/// Keep entries with |r| strictly above `cutoff`.
pub fn magnitude_threshold(corr: &CorrMatrix, cutoff: f64) -> Result<ThresholdedEstimate> {
    if !(cutoff >= 0.0) {
        return Err(Error::Input(format!(
            "magnitude cutoff must be >= 0, got {cutoff}"
        )));
    }
    let p = corr.p();
    let edges = DMatrix::from_fn(p, p, |i, j| i != j && corr.get(i, j).abs() > cutoff);
    Ok(ThresholdedEstimate {
        r_hat: apply(corr, &edges)?,
        edges,
        bayes_factors: None,
        odds: None,
        t: cutoff,
        in_network: DMatrix::from_element(p, p, false),
    })
}

/// Bayes-factor cutoff of the universal rule, t * pi0 / pi1.
pub fn universal_bf_cutoff(t: f64, pi0: f64, pi1: f64) -> f64 {
    if pi1 <= 0.0 {
        return f64::INFINITY;
    }
    t * pi0 / pi1
}

/// Global local-fdr level equivalent to a stratum cutoff: 1/(t * theta * (pi1/pi0)_all + 1).
/// With `inv_odds_all = 1` this is the plain link 1/(t*theta + 1).
pub fn fdr_link_cutoff(t: f64, theta: f64, inv_odds_all: f64) -> f64 {
    1.0 / (t * theta * inv_odds_all + 1.0)
}
