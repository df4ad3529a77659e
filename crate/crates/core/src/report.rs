//! File emitters for estimates, partitions, mixture diagnostics and benchmarks.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::corr::ZMatrix;
use crate::error::{Error, Result};
use crate::mixture::MixtureFit;
use crate::netdetect::Partition;
use crate::simbench::{tuning_label, BenchResult, SummaryRow};
use crate::threshold::{OddsPair, Stratum, ThresholdedEstimate};

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.display().to_string(),
        source,
    }
}

fn csv_err(path: &Path) -> impl Fn(csv::Error) -> Error + '_ {
    move |e| Error::Io {
        path: path.display().to_string(),
        source: e.into(),
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path).map_err(io_err(path))?))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut out = create(path)?;
    serde_json::to_writer_pretty(&mut out, value).map_err(|e| Error::Io {
        path: path.display().to_string(),
        source: e.into(),
    })?;
    writeln!(out).map_err(io_err(path))?;
    out.flush().map_err(io_err(path))
}

/// Square matrix with a header row of names and rows in `order`.
pub fn write_matrix_csv(
    path: &Path,
    m: &DMatrix<f64>,
    names: &[String],
    order: &[usize],
) -> Result<()> {
    let mut w = csv::Writer::from_writer(create(path)?);
    let e = csv_err(path);
    w.write_record(order.iter().map(|&i| names[i].as_str()))
        .map_err(&e)?;
    for &i in order {
        w.write_record(order.iter().map(|&j| m[(i, j)].to_string()))
            .map_err(&e)?;
    }
    w.flush().map_err(io_err(path))
}

/// One row per node pair: names, r, z, Bayes factor, stratum, kept.
pub fn write_edges_csv(
    path: &Path,
    est: &ThresholdedEstimate,
    corr: &DMatrix<f64>,
    z: &ZMatrix,
    names: &[String],
) -> Result<()> {
    let mut w = csv::Writer::from_writer(create(path)?);
    let e = csv_err(path);
    w.write_record(["i", "j", "r", "z", "bf", "stratum", "kept"])
        .map_err(&e)?;
    let p = est.p();
    for i in 0..p {
        for j in (i + 1)..p {
            let bf = est.bayes_factors.as_ref().map_or(f64::NAN, |b| b[(i, j)]);
            let stratum = match est.stratum(i, j) {
                Stratum::In => "in",
                Stratum::Out => "out",
            };
            w.write_record([
                names[i].clone(),
                names[j].clone(),
                corr[(i, j)].to_string(),
                z.get(i, j).to_string(),
                bf.to_string(),
                stratum.to_string(),
                u8::from(est.edges[(i, j)]).to_string(),
            ])
            .map_err(&e)?;
        }
    }
    w.flush().map_err(io_err(path))
}

#[derive(Debug, Serialize)]
struct PermutationJson<'a> {
    #[serde(rename = "M")]
    m: usize,
    alpha: f64,
    threshold: Option<f64>,
    statistics: &'a [f64],
    p_values: &'a [f64],
}

#[derive(Debug, Serialize)]
struct PartitionJson<'a> {
    #[serde(rename = "C")]
    c: usize,
    lambda0: f64,
    /// Node id to column name.
    nodes: &'a [String],
    communities: &'a [Vec<usize>],
    singletons: &'a [usize],
    significant: &'a [usize],
    criterion: f64,
    degenerate: bool,
    perm: Option<PermutationJson<'a>>,
}

pub fn partition_json(partition: &Partition, names: &[String]) -> serde_json::Value {
    let doc = PartitionJson {
        c: partition.c,
        lambda0: partition.lambda0,
        nodes: names,
        communities: &partition.communities,
        singletons: &partition.singletons,
        significant: &partition.significant,
        criterion: partition.criterion_value,
        degenerate: partition.degenerate,
        perm: partition.permutation.as_ref().map(|s| PermutationJson {
            m: s.iterations,
            alpha: s.alpha,
            threshold: s.threshold.is_finite().then_some(s.threshold),
            statistics: &s.observed,
            p_values: &s.p_values,
        }),
    };
    serde_json::to_value(doc).expect("partition serialises")
}

pub fn write_partition_json(path: &Path, partition: &Partition, names: &[String]) -> Result<()> {
    write_json(path, &partition_json(partition, names))
}

pub fn write_mixture_json(path: &Path, fit: &MixtureFit) -> Result<()> {
    write_json(path, &fit.diagnostics())
}

#[derive(Debug, Serialize)]
struct Counts {
    kept_in: usize,
    kept_out: usize,
    dropped_in: usize,
    dropped_out: usize,
}

#[derive(Debug, Serialize)]
struct OddsJson {
    theta_in: Option<f64>,
    theta_out: Option<f64>,
    theta_all: Option<f64>,
    pi0_in: f64,
    pi0_out: f64,
    pi0_all: f64,
}

#[derive(Debug, Serialize)]
struct SummaryJson {
    #[serde(rename = "T")]
    t: f64,
    odds: OddsJson,
    counts: Counts,
    kept_edges: usize,
}

/// JSON has no infinity; an infinite odds value is written as null.
fn finite(v: f64) -> Option<f64> {
    v.is_finite().then_some(v)
}

pub fn summary_json(est: &ThresholdedEstimate, odds: &OddsPair) -> serde_json::Value {
    let (kept_in, kept_out, dropped_in, dropped_out) = est.counts();
    let doc = SummaryJson {
        t: est.t,
        odds: OddsJson {
            theta_in: finite(odds.theta_in),
            theta_out: finite(odds.theta_out),
            theta_all: finite(odds.theta_all),
            pi0_in: odds.pi0_in,
            pi0_out: odds.pi0_out,
            pi0_all: odds.pi0_all,
        },
        counts: Counts {
            kept_in,
            kept_out,
            dropped_in,
            dropped_out,
        },
        kept_edges: kept_in + kept_out,
    };
    serde_json::to_value(doc).expect("summary serialises")
}

pub fn write_summary_json(path: &Path, est: &ThresholdedEstimate, odds: &OddsPair) -> Result<()> {
    write_json(path, &summary_json(est, odds))
}

pub fn write_bench_csv(path: &Path, rows: &[BenchResult]) -> Result<()> {
    let mut w = csv::Writer::from_writer(create(path)?);
    let e = csv_err(path);
    w.write_record(["method", "tuning", "replicate", "fp", "fn", "runtime_ms"])
        .map_err(&e)?;
    for r in rows {
        w.write_record([
            r.method.to_string(),
            tuning_label(r.tuning),
            r.replicate.to_string(),
            r.fp.to_string(),
            r.fn_.to_string(),
            r.runtime_ms.to_string(),
        ])
        .map_err(&e)?;
    }
    w.flush().map_err(io_err(path))
}

pub fn write_bench_summary_csv(path: &Path, rows: &[SummaryRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(create(path)?);
    let e = csv_err(path);
    w.write_record([
        "method", "tuning", "fp_med", "fp_q25", "fp_q75", "fn_med", "fn_q25", "fn_q75",
    ])
    .map_err(&e)?;
    for r in rows {
        let mut rec = vec![r.method.to_string(), tuning_label(r.tuning)];
        rec.extend(
            [r.fp_med, r.fp_q25, r.fp_q75, r.fn_med, r.fn_q25, r.fn_q75]
                .iter()
                .map(|v| v.to_string()),
        );
        w.write_record(&rec).map_err(&e)?;
    }
    w.flush().map_err(io_err(path))
}
