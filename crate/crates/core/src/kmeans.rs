//! Lloyd's k-means with k-means++ seeding and deterministic restarts.

use rand::Rng;
use rayon::prelude::*;

use crate::rng::{task_rng, STREAM_KMEANS};

/// Row-major point set.
#[derive(Debug, Clone, Copy)]
pub struct Points<'a> {
    data: &'a [f64],
    dim: usize,
}

impl<'a> Points<'a> {
    pub fn new(data: &'a [f64], dim: usize) -> Self {
        assert!(
            dim > 0 && data.len().is_multiple_of(dim),
            "ragged point buffer"
        );
        Self { data, dim }
    }

    pub fn len(&self) -> usize {
        self.data.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    fn row(&self, i: usize) -> &'a [f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Clustering {
    /// Cluster id per point, compacted to 0.. in order of first appearance.
    pub labels: Vec<usize>,
    /// Within-cluster sum of squares.
    pub wcss: f64,
    /// Restart that produced this clustering.
    pub restart: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KMeansParams {
    pub k: usize,
    pub restarts: usize,
    pub max_iter: usize,
    pub seed: u64,
}

#[inline]
fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn plus_plus<R: Rng>(points: Points<'_>, k: usize, rng: &mut R) -> Vec<f64> {
    let n = points.len();
    let dim = points.dim;
    let mut centroids = Vec::with_capacity(k * dim);
    centroids.extend_from_slice(points.row(rng.random_range(0..n)));
    let mut nearest: Vec<f64> = (0..n)
        .map(|i| sq_dist(points.row(i), &centroids[..dim]))
        .collect();

    for c in 1..k {
        let total: f64 = nearest.iter().sum();
        let pick = if total > 0.0 && total.is_finite() {
            let target = rng.random::<f64>() * total;
            let mut acc = 0.0;
            let mut chosen = n - 1;
            for (i, d) in nearest.iter().enumerate() {
                acc += d;
                if acc > target {
                    chosen = i;
                    break;
                }
            }
            chosen
        } else {
            rng.random_range(0..n)
        };
        centroids.extend_from_slice(points.row(pick));
        let new = &centroids[c * dim..(c + 1) * dim];
        for (i, d) in nearest.iter_mut().enumerate() {
            let dd = sq_dist(points.row(i), new);
            if dd < *d {
                *d = dd;
            }
        }
    }
    centroids
}

fn lloyd(
    points: Points<'_>,
    k: usize,
    mut centroids: Vec<f64>,
    max_iter: usize,
) -> (Vec<usize>, f64) {
    let n = points.len();
    let dim = points.dim;
    let mut labels = vec![usize::MAX; n];
    let mut dists = vec![0.0; n];
    let mut sums = vec![0.0; k * dim];
    let mut sizes = vec![0usize; k];

    for _ in 0..max_iter.max(1) {
        let mut changed = false;
        for i in 0..n {
            let row = points.row(i);
            let (mut best, mut best_d) = (0, f64::INFINITY);
            for c in 0..k {
                let d = sq_dist(row, &centroids[c * dim..(c + 1) * dim]);
                if d < best_d {
                    best = c;
                    best_d = d;
                }
            }
            if labels[i] != best {
                labels[i] = best;
                changed = true;
            }
            dists[i] = best_d;
        }
        if !changed {
            break;
        }

        sums.iter_mut().for_each(|s| *s = 0.0);
        sizes.iter_mut().for_each(|s| *s = 0);
        for (i, &c) in labels.iter().enumerate().take(n) {
            sizes[c] += 1;
            for (s, x) in sums[c * dim..(c + 1) * dim].iter_mut().zip(points.row(i)) {
                *s += x;
            }
        }
        for c in 0..k {
            let cent = &mut centroids[c * dim..(c + 1) * dim];
            if sizes[c] > 0 {
                let inv = 1.0 / sizes[c] as f64;
                for (x, s) in cent.iter_mut().zip(&sums[c * dim..(c + 1) * dim]) {
                    *x = s * inv;
                }
            } else {
                // Re-seed an empty cluster at the worst-served point.
                let far = (0..n).fold(0, |best, i| if dists[i] > dists[best] { i } else { best });
                cent.copy_from_slice(points.row(far));
                dists[far] = 0.0;
            }
        }
    }

    let wcss = (0..n)
        .map(|i| {
            sq_dist(
                points.row(i),
                &centroids[labels[i] * dim..(labels[i] + 1) * dim],
            )
        })
        .sum();
    (labels, wcss)
}

/// Relabel clusters 0.. in order of first appearance.
pub fn compact_labels(labels: &[usize]) -> Vec<usize> {
    let mut map = std::collections::HashMap::new();
    labels
        .iter()
        .map(|&l| {
            let next = map.len();
            *map.entry(l).or_insert(next)
        })
        .collect()
}

/// Best of `restarts` k-means runs by WCSS; ties go to the lowest restart index.
/// `task` is mixed into every restart's seed alongside the restart index.
pub fn kmeans(points: Points<'_>, params: &KMeansParams, task: u64) -> Clustering {
    let n = points.len();
    assert!(n > 0, "k-means on an empty point set");
    let k = params.k.clamp(1, n);
    let restarts = params.restarts.max(1);

    let runs: Vec<(Vec<usize>, f64)> = (0..restarts)
        .into_par_iter()
        .map(|r| {
            let mut rng = task_rng(params.seed, &[STREAM_KMEANS, task, r as u64]);
            let init = plus_plus(points, k, &mut rng);
            lloyd(points, k, init, params.max_iter)
        })
        .collect();

    let (restart, (labels, wcss)) = runs
        .into_iter()
        .enumerate()
        .fold(
            None::<(usize, (Vec<usize>, f64))>,
            |best, (r, run)| match best {
                Some(b) if b.1 .1 <= run.1 => Some(b),
                _ => Some((r, run)),
            },
        )
        .expect("at least one restart");
    Clustering {
        labels: compact_labels(&labels),
        wcss,
        restart,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn blobs() -> Vec<f64> {
        let mut pts = Vec::new();
        for (cx, cy) in [(0.0, 0.0), (10.0, 0.0), (0.0, 10.0)] {
            for k in 0..10 {
                let t = k as f64 * 0.6;
                pts.push(cx + 0.3 * t.cos());
                pts.push(cy + 0.3 * t.sin());
            }
        }
        pts
    }

    fn params(k: usize, seed: u64) -> KMeansParams {
        KMeansParams {
            k,
            restarts: 5,
            max_iter: 100,
            seed,
        }
    }

    #[test]
    fn separates_blobs() {
        let pts = blobs();
        let res = kmeans(Points::new(&pts, 2), &params(3, 1), 0);
        for b in 0..3 {
            let first = res.labels[b * 10];
            assert!(res.labels[b * 10..(b + 1) * 10].iter().all(|&l| l == first));
        }
        let distinct: std::collections::HashSet<_> = res.labels.iter().collect();
        assert_eq!(distinct.len(), 3);
    }

    #[test]
    fn deterministic_for_seed() {
        let pts = blobs();
        let a = kmeans(Points::new(&pts, 2), &params(4, 9), 3);
        let b = kmeans(Points::new(&pts, 2), &params(4, 9), 3);
        assert_eq!(a, b);
    }

    #[test]
    fn duplicate_points_and_k_equal_n() {
        let pts = vec![1.0, 1.0, 1.0, 5.0, 5.0];
        let res = kmeans(Points::new(&pts, 1), &params(5, 2), 0);
        assert_eq!(res.wcss, 0.0);
        assert_eq!(res.labels[0], res.labels[1]);
        assert_eq!(res.labels[3], res.labels[4]);
    }

    #[test]
    fn compaction_orders_by_first_use() {
        assert_eq!(compact_labels(&[4, 4, 1, 7, 1]), vec![0, 0, 1, 2, 1]);
    }
}
