//! Network-guided estimation of large correlation matrices.
//!
//! The pipeline has two steps. First a community-plus-singleton topology is
//! detected from the sample correlations: edge statistics are turned into
//! posterior non-null weights, a penalised spectral objective picks the
//! partition, and a max-statistic permutation test keeps only communities that
//! stand out from shuffled weights. Second, each edge is hard-thresholded by
//! its Bayes factor against a cutoff scaled by the prior odds of its stratum
//! (inside a significant community or not).
//!
//! ```no_run
//! use netcorr::{data, pipeline};
//!
//! let x = data::load_csv("data.csv", true)?;
//! let run = pipeline::estimate(&x, &pipeline::PipelineConfig::default())?;
//! println!("{} significant communities", run.topology.partition.significant.len());
//! # Ok::<(), netcorr::Error>(())
//! ```

pub mod corr;
pub mod data;
pub mod error;
pub mod kmeans;
pub mod mixture;
pub mod netdetect;
pub mod pipeline;
pub mod report;
pub mod rng;
pub mod simbench;
pub mod threshold;

pub use error::{Error, Result};
