//! Sample correlation and the Fisher-Z transform.

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::data::DataMatrix;
use crate::error::{Error, Result};

/// Inputs within this distance of +-1 are clipped before the Fisher-Z transform.
pub const FISHER_CLIP: f64 = 1e-12;

/// Symmetric p x p correlation matrix with unit diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrMatrix {
    values: DMatrix<f64>,
    n: usize,
}

impl CorrMatrix {
    /// Wrap an existing matrix after validating symmetry, unit diagonal and range.
    pub fn from_values(values: DMatrix<f64>, n: usize) -> Result<Self> {
        let p = values.nrows();
        if values.ncols() != p {
            return Err(Error::Input("correlation matrix must be square".into()));
        }
        for i in 0..p {
            if values[(i, i)] != 1.0 {
                return Err(Error::Input(format!("diagonal entry {i} is not 1")));
            }
            for j in (i + 1)..p {
                let v = values[(i, j)];
                if v != values[(j, i)] {
                    return Err(Error::Input(format!("entry ({i},{j}) is not symmetric")));
                }
                if !(-1.0..=1.0).contains(&v) {
                    return Err(Error::Input(format!(
                        "entry ({i},{j}) = {v} outside [-1,1]"
                    )));
                }
            }
        }
        Ok(Self { values, n })
    }

    pub fn p(&self) -> usize {
        self.values.nrows()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &DMatrix<f64> {
        &self.values
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[(i, j)]
    }
}

/// Fisher-Z transformed correlations. The diagonal is stored as 0 and is never
/// part of an edge population.
#[derive(Debug, Clone, PartialEq)]
pub struct ZMatrix {
    values: DMatrix<f64>,
    n: usize,
}

impl ZMatrix {
    pub fn p(&self) -> usize {
        self.values.nrows()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[(i, j)]
    }

    pub fn values(&self) -> &DMatrix<f64> {
        &self.values
    }

    /// Off-diagonal upper-triangle values in row-major order.
    pub fn upper_triangle(&self) -> Vec<f64> {
        let p = self.p();
        let mut out = Vec::with_capacity(p * (p - 1) / 2);
        for i in 0..p {
            for j in (i + 1)..p {
                out.push(self.values[(i, j)]);
            }
        }
        out
    }
}

/// Pearson correlation of every column pair.
pub fn sample_correlation(data: &DataMatrix) -> Result<CorrMatrix> {
    let (n, p) = (data.n(), data.p());
    let x = data.values();

    let mut centred = x.clone();
    let mut norms = vec![0.0; p];
    for (j, mut col) in centred.column_iter_mut().enumerate() {
        let mean = col.iter().sum::<f64>() / n as f64;
        col.iter_mut().for_each(|v| *v -= mean);
        let ss: f64 = col.iter().map(|v| v * v).sum();
        if ss <= 0.0 || !ss.is_finite() {
            return Err(Error::Degenerate(format!(
                "column {} has zero variance",
                data.column_names()[j]
            )));
        }
        norms[j] = ss.sqrt();
    }

    // Upper triangle per row; each pair has a fixed summation order, so the
    // result does not depend on the thread count.
    let rows: Vec<Vec<f64>> = (0..p)
        .into_par_iter()
        .map(|i| {
            let ci = centred.column(i);
            ((i + 1)..p)
                .map(|j| {
                    let cj = centred.column(j);
                    let dot: f64 = ci.iter().zip(cj.iter()).map(|(a, b)| a * b).sum();
                    (dot / (norms[i] * norms[j])).clamp(-1.0, 1.0)
                })
                .collect()
        })
        .collect();

    let mut values = DMatrix::identity(p, p);
    for (i, row) in rows.into_iter().enumerate() {
        for (k, r) in row.into_iter().enumerate() {
            let j = i + 1 + k;
            values[(i, j)] = r;
            values[(j, i)] = r;
        }
    }
    Ok(CorrMatrix { values, n })
}

/// Fisher's Z transform, clipping |r| to at most 1 - 1e-12.
pub fn fisher_z(r: f64) -> Result<f64> {
    match r.abs() {
        a if a.is_nan() || a > 1.0 => Err(Error::Domain(format!("correlation {r} outside [-1,1]"))),
        _ => Ok(r.clamp(-1.0 + FISHER_CLIP, 1.0 - FISHER_CLIP).atanh()),
    }
}

/// Inverse Fisher-Z. The result is kept strictly inside (-1, 1) by the same clip.
pub fn fisher_z_inverse(z: f64) -> Result<f64> {
    if !z.is_finite() {
        return Err(Error::Domain(format!("non-finite z {z}")));
    }
    Ok(z.tanh().clamp(-1.0 + FISHER_CLIP, 1.0 - FISHER_CLIP))
}

pub fn z_matrix(corr: &CorrMatrix) -> ZMatrix {
    let p = corr.p();
    let values = DMatrix::from_fn(p, p, |i, j| {
        if i == j {
            0.0
        } else {
            // CorrMatrix entries are validated to lie in [-1, 1].
            fisher_z(corr.get(i, j)).expect("correlation in range")
        }
    });
    ZMatrix {
        values,
        n: corr.n(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn data(cols: &[Vec<f64>]) -> DataMatrix {
        let n = cols[0].len();
        let m = DMatrix::from_fn(n, cols.len(), |i, j| cols[j][i]);
        DataMatrix::new(m, None).unwrap()
    }

    #[test]
    fn self_and_anti_correlation() {
        let a = vec![1.0, 2.0, 4.0, 3.0, 7.0];
        let b: Vec<f64> = a.iter().map(|v| -v).collect();
        let c = vec![0.5, -1.0, 2.0, 2.5, 0.0];
        let r = sample_correlation(&data(&[a, b, c])).unwrap();
        assert_eq!(r.get(0, 0), 1.0);
        assert!((r.get(0, 1) + 1.0).abs() < 1e-15);
        assert_eq!(r.get(1, 2), r.get(2, 1));
    }

    #[test]
    fn zero_variance_column_is_named() {
        let d = data(&[vec![1.0, 2.0, 3.0, 4.0], vec![5.0; 4]]);
        match sample_correlation(&d) {
            Err(Error::Degenerate(msg)) => assert!(msg.contains("V2")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn fisher_values() {
        assert_eq!(fisher_z(0.0).unwrap(), 0.0);
        // 0.5 * ln(3) evaluated independently.
        assert!((fisher_z(0.5).unwrap() - 0.549_306_144_334_054_8).abs() < 1e-15);
        assert!((fisher_z_inverse(0.549_306_1).unwrap() - 0.5).abs() < 1e-6);
        for r in [-0.9, -0.3, 0.0, 0.3, 0.9] {
            let back = fisher_z_inverse(fisher_z(r).unwrap()).unwrap();
            assert!((back - r).abs() < 1e-12);
        }
        let big = fisher_z_inverse(20.0).unwrap();
        assert!(big > 1.0 - 1e-8 && big < 1.0);
        assert!(fisher_z(1.5).is_err());
        assert!(fisher_z(f64::NAN).is_err());
        assert!(fisher_z_inverse(f64::INFINITY).is_err());
        assert!(fisher_z(1.0).unwrap().is_finite());
    }

    #[test]
    fn z_matrix_of_identity_and_clipped() {
        let z = z_matrix(&CorrMatrix::from_values(DMatrix::identity(4, 4), 10).unwrap());
        assert!(z.upper_triangle().iter().all(|&v| v == 0.0));

        let mut m = DMatrix::identity(2, 2);
        m[(0, 1)] = 0.999_999_999_999_99;
        m[(1, 0)] = 0.999_999_999_999_99;
        let z = z_matrix(&CorrMatrix::from_values(m, 10).unwrap());
        assert!(z.get(0, 1).is_finite());
        assert_eq!(z.get(0, 1), z.get(1, 0));
    }

    #[test]
    fn from_values_rejects_asymmetry() {
        let mut m = DMatrix::identity(2, 2);
        m[(0, 1)] = 0.3;
        assert!(CorrMatrix::from_values(m, 5).is_err());
    }
}
