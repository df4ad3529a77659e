#![allow(dead_code)]

use nalgebra::DMatrix;
use netcorr::mixture::WeightMatrix;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Every set partition of 0..n as a restricted-growth label vector.
pub fn set_partitions(n: usize) -> Vec<Vec<usize>> {
    fn rec(i: usize, labels: &mut Vec<usize>, next: usize, out: &mut Vec<Vec<usize>>) {
        if i == labels.len() {
            out.push(labels.clone());
            return;
        }
        for l in 0..=next {
            labels[i] = l;
            rec(i + 1, labels, next.max(l + 1), out);
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    let mut labels = vec![0; n];
    rec(1, &mut labels, 1, &mut out);
    out
}

pub fn block_count(labels: &[usize]) -> usize {
    labels.iter().max().map_or(0, |m| m + 1)
}

pub fn random_weights(rng: &mut ChaCha8Rng, p: usize, density: f64) -> WeightMatrix {
    let mut w = DMatrix::zeros(p, p);
    for i in 0..p {
        for j in (i + 1)..p {
            if rng.random::<f64>() < density {
                let v: f64 = rng.random();
                w[(i, j)] = v;
                w[(j, i)] = v;
            }
        }
    }
    WeightMatrix::from_values(w).unwrap()
}

/// Noisy planted blocks: first `sizes` nodes form cliques with weights near
/// `inside`, everything else is background noise below `outside`.
pub fn planted_weights(
    rng: &mut ChaCha8Rng,
    p: usize,
    sizes: &[usize],
    inside: f64,
    outside: f64,
) -> WeightMatrix {
    let mut block = vec![usize::MAX; p];
    let mut start = 0;
    for (b, &s) in sizes.iter().enumerate() {
        block[start..start + s].fill(b);
        start += s;
    }
    let mut w = DMatrix::zeros(p, p);
    for i in 0..p {
        for j in (i + 1)..p {
            let v = if block[i] != usize::MAX && block[i] == block[j] {
                (inside + 0.05 * (rng.random::<f64>() - 0.5)).clamp(0.0, 1.0)
            } else {
                outside * rng.random::<f64>()
            };
            w[(i, j)] = v;
            w[(j, i)] = v;
        }
    }
    WeightMatrix::from_values(w).unwrap()
}

/// Relabelled random circulant: every node has the same weighted degree.
pub fn regular_weights(rng: &mut ChaCha8Rng, p: usize) -> WeightMatrix {
    let mut c = vec![0.0; p];
    for d in 1..=p / 2 {
        let v: f64 = rng.random();
        c[d] = v;
        c[p - d] = v;
    }
    let mut order: Vec<usize> = (0..p).collect();
    order.shuffle(rng);
    let w = DMatrix::from_fn(p, p, |a, b| c[(order[b] + p - order[a]) % p]);
    WeightMatrix::from_values(w).unwrap()
}

/// Within-block weight sums S_c and block sizes.
fn blocks(w: &WeightMatrix, labels: &[usize]) -> (Vec<f64>, Vec<f64>, Vec<usize>) {
    let k = block_count(labels);
    let (mut within, mut volume, mut size) = (vec![0.0; k], vec![0.0; k], vec![0; k]);
    for i in 0..labels.len() {
        size[labels[i]] += 1;
        for j in 0..labels.len() {
            volume[labels[i]] += w.get(i, j);
            if j > i && labels[i] == labels[j] {
                within[labels[i]] += w.get(i, j);
            }
        }
    }
    (within, volume, size)
}

pub fn ratio_cut(w: &WeightMatrix, labels: &[usize]) -> f64 {
    let (within, volume, size) = blocks(w, labels);
    (0..size.len())
        .map(|c| (volume[c] - 2.0 * within[c]) / size[c] as f64)
        .sum()
}

/// Sum over blocks of the mean within-block weight times block size.
pub fn density_mass(w: &WeightMatrix, labels: &[usize]) -> f64 {
    let (within, _, size) = blocks(w, labels);
    (0..size.len())
        .map(|c| 2.0 * within[c] / size[c] as f64)
        .sum()
}

/// Brute-force criterion, written independently of the library.
pub fn criterion_oracle(w: &WeightMatrix, labels: &[usize], lambda0: f64) -> f64 {
    let (within, _, size) = blocks(w, labels);
    (0..size.len())
        .filter(|&c| size[c] >= 2 && within[c] > 0.0)
        .map(|c| {
            let edges = (size[c] * (size[c] - 1) / 2) as f64;
            within[c].powf(1.0 - lambda0) * (within[c] / edges).powf(lambda0)
        })
        .sum()
}

/// Whether the node sets of `labels` keep every group in `groups` together.
pub fn keeps_together(labels: &[usize], groups: &[Vec<usize>]) -> bool {
    groups
        .iter()
        .all(|g| g.iter().all(|&i| labels[i] == labels[g[0]]))
}

/// Check that a partition covers 0..p exactly once and is self-consistent.
pub fn partition_is_valid(part: &netcorr::netdetect::Partition) -> Result<(), String> {
    let p = part.assignment.len();
    let mut seen = vec![0usize; p];
    for c in &part.communities {
        if c.len() < 2 {
            return Err(format!("community {c:?} is too small"));
        }
        for &i in c {
            seen[i] += 1;
            if part.assignment[i] != part.assignment[c[0]] {
                return Err(format!("community {c:?} mixes clusters"));
            }
        }
    }
    for &i in &part.singletons {
        seen[i] += 1;
        if part
            .assignment
            .iter()
            .filter(|&&a| a == part.assignment[i])
            .count()
            != 1
        {
            return Err(format!("singleton {i} shares its cluster"));
        }
    }
    if let Some(i) = seen.iter().position(|&s| s != 1) {
        return Err(format!("node {i} appears {} times", seen[i]));
    }
    if part.assignment.iter().any(|&a| a >= part.c) {
        return Err("assignment label out of range".into());
    }
    if part
        .significant
        .iter()
        .any(|&s| s >= part.communities.len())
    {
        return Err("significant index out of range".into());
    }
    Ok(())
}
