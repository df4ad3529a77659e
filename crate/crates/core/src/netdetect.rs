//! Community-plus-singleton topology detection.
//!
//! For each candidate cluster count C the nodes are embedded with Laplacian
//! eigenvectors and clustered by k-means (the ratio-cut relaxation); the C whose
//! partition maximises the quality-quantity criterion wins. Communities of the
//! winning partition are then screened with a max-statistic permutation test on
//! the shuffled weight entries.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kmeans::{kmeans, KMeansParams, Points};
use crate::mixture::WeightMatrix;
use crate::rng::{task_rng, STREAM_PERMUTE};
use statrs::function::gamma::gamma_ur;

/// Weights are clipped to [WEIGHT_CLIP, 1 - WEIGHT_CLIP] before taking logs.
pub const WEIGHT_CLIP: f64 = 1e-12;
/// Community statistics are capped here; beyond it 1 - P underflows.
pub const STAT_CAP: f64 = 700.0;
/// A weight matrix whose entries are all below this is treated as structureless.
pub const DEGENERATE_WEIGHT: f64 = 1e-6;
pub const DEFAULT_C_MAX: usize = 200;

/// Which tail of the weights the community statistic sums.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StatOrientation {
    /// s = sum of -ln(w): large when weights are small.
    AsPrinted,
    /// s = sum of -ln(1 - w): large when weights are large.
    #[default]
    Complement,
}

/// How many Laplacian eigenvectors embed the nodes for a given C.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EmbedDims {
    /// Eigenvectors 2..=C (C - 1 columns), skipping the first.
    #[default]
    CMinusOne,
    /// Eigenvectors 1..=C.
    C,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DetectConfig {
    pub lambda0: f64,
    /// Candidate cluster counts; `None` means 2..=min(p - 1, c_max).
    pub c_grid: Option<Vec<usize>>,
    pub c_max: usize,
    pub kmeans_restarts: usize,
    pub kmeans_max_iter: usize,
    pub perm_iters: usize,
    pub alpha: f64,
    pub seed: u64,
    pub stat_orientation: StatOrientation,
    pub embed_dims: EmbedDims,
}

impl Default for DetectConfig {
    fn default() -> Self {
        Self {
            lambda0: 0.5,
            c_grid: None,
            c_max: DEFAULT_C_MAX,
            kmeans_restarts: 50,
            kmeans_max_iter: 300,
            perm_iters: 10_000,
            alpha: 0.05,
            seed: 0,
            stat_orientation: StatOrientation::Complement,
            embed_dims: EmbedDims::CMinusOne,
        }
    }
}

impl DetectConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.lambda0 > 0.0 && self.lambda0 < 1.0) {
            return Err(Error::Input(format!(
                "lambda0 {} must lie in (0,1)",
                self.lambda0
            )));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::Input(format!(
                "alpha {} must lie in (0,1)",
                self.alpha
            )));
        }
        if self.perm_iters < 100 {
            return Err(Error::Input(format!(
                "at least 100 permutations required, got {}",
                self.perm_iters
            )));
        }
        if self.kmeans_restarts == 0 || self.kmeans_max_iter == 0 {
            return Err(Error::Input(
                "k-means restarts and iterations must be positive".into(),
            ));
        }
        Ok(())
    }

    /// Cluster counts to try for `p` nodes, restricted to 2..=p-1.
    pub fn grid_for(&self, p: usize) -> Vec<usize> {
        let upper = p.saturating_sub(1);
        match &self.c_grid {
            Some(grid) => {
                let mut g: Vec<usize> = grid
                    .iter()
                    .copied()
                    .filter(|&c| c >= 2 && c <= upper)
                    .collect();
                g.sort_unstable();
                g.dedup();
                g
            }
            None => (2..=upper.min(self.c_max)).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PermutationSummary {
    pub iterations: usize,
    pub alpha: f64,
    /// (1 - alpha) quantile of the permutation max-statistics.
    pub threshold: f64,
    /// Observed statistic per community.
    pub observed: Vec<f64>,
    /// Share of permutations whose max-statistic reaches the observed value.
    pub p_values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Partition {
    /// Cluster id per node, in 0..c.
    pub assignment: Vec<usize>,
    pub c: usize,
    /// Clusters with at least two nodes, each sorted, ordered by first node.
    pub communities: Vec<Vec<usize>>,
    pub singletons: Vec<usize>,
    /// Indices into `communities` that passed the permutation test.
    pub significant: Vec<usize>,
    pub criterion_value: f64,
    pub lambda0: f64,
    /// Set when the weights carried no structure and detection was skipped.
    pub degenerate: bool,
    pub permutation: Option<PermutationSummary>,
}

impl Partition {
    fn from_assignment(w: &WeightMatrix, assignment: Vec<usize>, c: usize, lambda0: f64) -> Self {
        let criterion_value = quality_quantity_criterion(w, &assignment, lambda0);
        let clusters = cluster_members(&assignment);
        let mut communities = Vec::new();
        let mut singletons = Vec::new();
        for members in clusters {
            match members.len() {
                0 => {}
                1 => singletons.push(members[0]),
                _ => communities.push(members),
            }
        }
        communities.sort_by_key(|m| m[0]);
        singletons.sort_unstable();
        Self {
            assignment,
            c,
            communities,
            singletons,
            significant: Vec::new(),
            criterion_value,
            lambda0,
            degenerate: false,
            permutation: None,
        }
    }

    fn all_singletons(p: usize, lambda0: f64) -> Self {
        Self {
            assignment: (0..p).collect(),
            c: p,
            communities: Vec::new(),
            singletons: (0..p).collect(),
            significant: Vec::new(),
            criterion_value: 0.0,
            lambda0,
            degenerate: true,
            permutation: None,
        }
    }

    pub fn p(&self) -> usize {
        self.assignment.len()
    }

    /// Node sets of the significant communities.
    pub fn significant_communities(&self) -> impl Iterator<Item = &[usize]> {
        self.significant
            .iter()
            .map(|&i| self.communities[i].as_slice())
    }

    /// Per node, the index of its significant community, if any.
    pub fn significant_membership(&self) -> Vec<Option<usize>> {
        let mut out = vec![None; self.p()];
        for &c in &self.significant {
            for &v in &self.communities[c] {
                out[v] = Some(c);
            }
        }
        out
    }

    /// Node order placing significant communities first, then the other
    /// communities, then singletons.
    pub fn community_first_order(&self) -> Vec<usize> {
        let mut order = Vec::with_capacity(self.p());
        for &c in &self.significant {
            order.extend_from_slice(&self.communities[c]);
        }
        for (i, members) in self.communities.iter().enumerate() {
            if !self.significant.contains(&i) {
                order.extend_from_slice(members);
            }
        }
        order.extend_from_slice(&self.singletons);
        order
    }

    /// Express the partition in another node frame: node `k` here is node
    /// `order[k]` there.
    fn relabel(self, order: &[usize]) -> Self {
        let p = order.len();
        let mut assignment = vec![0; p];
        for (k, &orig) in order.iter().enumerate() {
            assignment[orig] = self.assignment[k];
        }
        let map_set = |s: &[usize]| {
            let mut v: Vec<usize> = s.iter().map(|&k| order[k]).collect();
            v.sort_unstable();
            v
        };
        let mut communities: Vec<(usize, Vec<usize>)> = self
            .communities
            .iter()
            .enumerate()
            .map(|(i, m)| (i, map_set(m)))
            .collect();
        communities.sort_by_key(|(_, m)| m[0]);
        let position: Vec<usize> = {
            let mut pos = vec![0; communities.len()];
            for (new, (old, _)) in communities.iter().enumerate() {
                pos[*old] = new;
            }
            pos
        };
        let mut significant: Vec<usize> = self.significant.iter().map(|&i| position[i]).collect();
        significant.sort_unstable();
        let permutation = self.permutation.map(|mut s| {
            let mut observed = vec![0.0; s.observed.len()];
            let mut p_values = vec![0.0; s.p_values.len()];
            for (old, &new) in position.iter().enumerate() {
                observed[new] = s.observed[old];
                p_values[new] = s.p_values[old];
            }
            s.observed = observed;
            s.p_values = p_values;
            s
        });
        Self {
            assignment: crate::kmeans::compact_labels(&assignment),
            c: self.c,
            communities: communities.into_iter().map(|(_, m)| m).collect(),
            singletons: map_set(&self.singletons),
            significant,
            criterion_value: self.criterion_value,
            lambda0: self.lambda0,
            degenerate: self.degenerate,
            permutation,
        }
    }
}

fn cluster_members(assignment: &[usize]) -> Vec<Vec<usize>> {
    let k = assignment.iter().copied().max().map_or(0, |m| m + 1);
    let mut clusters = vec![Vec::new(); k];
    for (node, &c) in assignment.iter().enumerate() {
        clusters[c].push(node);
    }
    clusters
}

/// Unnormalised Laplacian D - W.
pub fn laplacian(w: &WeightMatrix) -> DMatrix<f64> {
    let p = w.p();
    let mut l = -w.values().clone();
    for i in 0..p {
        l[(i, i)] = w.values().row(i).iter().sum::<f64>() - w.get(i, i);
    }
    l
}

/// Eigenpairs of a Laplacian sorted by ascending eigenvalue, eigenvectors
/// sign-normalised so their first clearly nonzero coordinate is positive.
#[derive(Debug, Clone)]
pub struct SpectralBasis {
    pub eigenvalues: Vec<f64>,
    /// Column k is the eigenvector of `eigenvalues[k]`.
    pub vectors: DMatrix<f64>,
}

impl SpectralBasis {
    pub fn new(laplacian: &DMatrix<f64>) -> Result<Self> {
        let p = laplacian.nrows();
        let eig = SymmetricEigen::try_new(laplacian.clone(), f64::EPSILON, 1_000 * p.max(10))
            .ok_or_else(|| Error::Numeric("symmetric eigensolver did not converge".into()))?;
        let mut idx: Vec<usize> = (0..p).collect();
        idx.sort_by(|&a, &b| {
            eig.eigenvalues[a]
                .total_cmp(&eig.eigenvalues[b])
                .then(a.cmp(&b))
        });
        let eigenvalues = idx.iter().map(|&k| eig.eigenvalues[k]).collect();
        let mut vectors = DMatrix::zeros(p, p);
        for (dst, &src) in idx.iter().enumerate() {
            let col = eig.eigenvectors.column(src);
            let flip = col
                .iter()
                .find(|v| v.abs() > 1e-10)
                .is_some_and(|&v| v < 0.0);
            let sign = if flip { -1.0 } else { 1.0 };
            for i in 0..p {
                vectors[(i, dst)] = sign * col[i];
            }
        }
        Ok(Self {
            eigenvalues,
            vectors,
        })
    }

    fn columns(c: usize, dims: EmbedDims) -> std::ops::Range<usize> {
        match dims {
            EmbedDims::CMinusOne => 1..c,
            EmbedDims::C => 0..c,
        }
    }

    /// Embedding for `c` clusters as a p x d matrix.
    pub fn embed(&self, c: usize, dims: EmbedDims) -> DMatrix<f64> {
        let cols = Self::columns(c, dims);
        self.vectors.columns(cols.start, cols.len()).into_owned()
    }

    fn embed_rows(&self, c: usize, dims: EmbedDims) -> (Vec<f64>, usize) {
        let cols = Self::columns(c, dims);
        let p = self.vectors.nrows();
        let d = cols.len();
        let mut buf = Vec::with_capacity(p * d);
        for i in 0..p {
            for k in cols.clone() {
                buf.push(self.vectors[(i, k)]);
            }
        }
        (buf, d)
    }
}

/// Laplacian eigenvectors 2..=C (or 1..=C) as a p x (C-1) (or p x C) matrix.
pub fn spectral_embed(l: &DMatrix<f64>, c: usize, dims: EmbedDims) -> Result<DMatrix<f64>> {
    let p = l.nrows();
    if c < 2 || c > p.saturating_sub(1) {
        return Err(Error::Input(format!(
            "cluster count {c} outside 2..={}",
            p.saturating_sub(1)
        )));
    }
    Ok(SpectralBasis::new(l)?.embed(c, dims))
}

fn cluster_basis(basis: &SpectralBasis, c: usize, cfg: &DetectConfig) -> Vec<usize> {
    let (rows, d) = basis.embed_rows(c, cfg.embed_dims);
    let params = KMeansParams {
        k: c,
        restarts: cfg.kmeans_restarts,
        max_iter: cfg.kmeans_max_iter,
        seed: cfg.seed,
    };
    kmeans(Points::new(&rows, d), &params, c as u64).labels
}

/// Spectral ratio-cut clustering of the nodes into `c` clusters.
pub fn cluster_for_c(w: &WeightMatrix, c: usize, cfg: &DetectConfig) -> Result<Vec<usize>> {
    let p = w.p();
    if c < 2 || c > p.saturating_sub(1) {
        return Err(Error::Input(format!(
            "cluster count {c} outside 2..={}",
            p.saturating_sub(1)
        )));
    }
    let basis = SpectralBasis::new(&laplacian(w))?;
    Ok(cluster_basis(&basis, c, cfg))
}

/// Sum over clusters of S_c^(1-lambda0) * (S_c/|E_c|)^lambda0, where S_c is the
/// within-cluster weight and |E_c| the within-cluster pair count.
pub fn quality_quantity_criterion(w: &WeightMatrix, assignment: &[usize], lambda0: f64) -> f64 {
    cluster_members(assignment)
        .iter()
        .filter(|m| m.len() >= 2)
        .map(|members| {
            let mut s = 0.0;
            for (a, &i) in members.iter().enumerate() {
                for &j in &members[a + 1..] {
                    s += w.get(i, j);
                }
            }
            if s <= 0.0 {
                return 0.0;
            }
            let pairs = (members.len() * (members.len() - 1) / 2) as f64;
            s * pairs.powf(-lambda0)
        })
        .sum()
}

fn is_degenerate(w: &WeightMatrix) -> bool {
    let p = w.p();
    (0..p).all(|i| ((i + 1)..p).all(|j| w.get(i, j) < DEGENERATE_WEIGHT))
}

/// Grid search over C; returns the criterion-maximising partition (ties toward
/// larger C) without the significance screen.
pub fn select_partition(w: &WeightMatrix, cfg: &DetectConfig) -> Result<Partition> {
    cfg.validate()?;
    let p = w.p();
    if p < 3 {
        return Err(Error::Input(format!(
            "detection needs at least 3 nodes, got {p}"
        )));
    }
    if is_degenerate(w) {
        return Ok(Partition::all_singletons(p, cfg.lambda0));
    }
    let grid = cfg.grid_for(p);
    if grid.is_empty() {
        return Err(Error::Input("empty cluster-count grid".into()));
    }
    let basis = SpectralBasis::new(&laplacian(w))?;
    let scored: Vec<(usize, Vec<usize>, f64)> = grid
        .par_iter()
        .map(|&c| {
            let labels = cluster_basis(&basis, c, cfg);
            let score = quality_quantity_criterion(w, &labels, cfg.lambda0);
            (c, labels, score)
        })
        .collect();
    let (c, labels, _) = scored
        .into_iter()
        .fold(None::<(usize, Vec<usize>, f64)>, |best, cand| match best {
            Some(b) if b.2 > cand.2 => Some(b),
            _ => Some(cand),
        })
        .expect("non-empty grid");
    Ok(Partition::from_assignment(w, labels, c, cfg.lambda0))
}

fn edge_term(w: f64, orientation: StatOrientation) -> f64 {
    let w = w.clamp(WEIGHT_CLIP, 1.0 - WEIGHT_CLIP);
    match orientation {
        StatOrientation::AsPrinted => -w.ln(),
        StatOrientation::Complement => -(1.0 - w).ln(),
    }
}

/// -ln(1 - P(k, s)) for k edges with summed log-term s, capped at 700.
pub fn gamma_statistic(k: usize, s: f64) -> Result<f64> {
    if k == 0 {
        return Err(Error::Domain("statistic needs at least one edge".into()));
    }
    if !s.is_finite() || s < 0.0 {
        return Err(Error::Numeric(format!(
            "edge sum {s} is not a finite non-negative value"
        )));
    }
    if s == 0.0 {
        return Ok(0.0);
    }
    let q = gamma_ur(k as f64, s);
    if q <= 0.0 {
        return Ok(STAT_CAP);
    }
    Ok((-q.ln()).clamp(0.0, STAT_CAP))
}

/// Incomplete-gamma tail statistic of one node set.
pub fn community_statistic(
    w: &WeightMatrix,
    community: &[usize],
    orientation: StatOrientation,
) -> Result<f64> {
    if community.len() < 2 {
        return Err(Error::Domain("a community needs at least two nodes".into()));
    }
    let mut s = 0.0;
    for (a, &i) in community.iter().enumerate() {
        for &j in &community[a + 1..] {
            s += edge_term(w.get(i, j), orientation);
        }
    }
    let k = community.len() * (community.len() - 1) / 2;
    gamma_statistic(k, s)
}

/// Index of the (1 - alpha) quantile in a sorted list of `m` statistics.
pub fn null_quantile_index(m: usize, alpha: f64) -> usize {
    let pos = ((1.0 - alpha) * m as f64 - 1e-9).ceil().max(0.0) as usize;
    pos.min(m - 1)
}

/// Screen the partition's communities against the max-statistic permutation null.
pub fn permutation_test(
    w: &WeightMatrix,
    mut partition: Partition,
    cfg: &DetectConfig,
) -> Result<Partition> {
    cfg.validate()?;
    partition.significant.clear();
    let m = cfg.perm_iters;
    if partition.communities.is_empty() {
        partition.permutation = Some(PermutationSummary {
            iterations: m,
            alpha: cfg.alpha,
            threshold: f64::NAN,
            observed: Vec::new(),
            p_values: Vec::new(),
        });
        return Ok(partition);
    }

    let p = w.p();
    let mut pool = Vec::with_capacity(p * (p - 1) / 2);
    for i in 0..p {
        for j in (i + 1)..p {
            pool.push(edge_term(w.get(i, j), cfg.stat_orientation));
        }
    }
    let sizes: Vec<usize> = partition
        .communities
        .iter()
        .map(|c| c.len() * (c.len() - 1) / 2)
        .collect();
    let draws: usize = sizes.iter().sum();
    let observed: Vec<f64> = partition
        .communities
        .iter()
        .map(|c| community_statistic(w, c, cfg.stat_orientation))
        .collect::<Result<_>>()?;

    let maxima: Vec<f64> = (0..m)
        .into_par_iter()
        .map(|iter| -> Result<f64> {
            let mut rng = task_rng(cfg.seed, &[STREAM_PERMUTE, iter as u64]);
            // Partial Fisher-Yates over the pool; displaced slots live in a map
            // so each permutation costs O(draws) rather than O(pool).
            let mut displaced: std::collections::HashMap<usize, usize> = Default::default();
            let mut best = 0.0f64;
            let mut t = 0usize;
            for &k in &sizes {
                let mut s = 0.0;
                for _ in 0..k {
                    let j = rng.random_range(t..pool.len());
                    let at_j = *displaced.get(&j).unwrap_or(&j);
                    let at_t = *displaced.get(&t).unwrap_or(&t);
                    displaced.insert(j, at_t);
                    s += pool[at_j];
                    t += 1;
                }
                best = best.max(gamma_statistic(k, s)?);
            }
            debug_assert_eq!(t, draws);
            Ok(best)
        })
        .collect::<Result<_>>()?;

    let mut sorted = maxima.clone();
    sorted.sort_by(f64::total_cmp);
    let threshold = sorted[null_quantile_index(m, cfg.alpha)];
    let p_values: Vec<f64> = observed
        .iter()
        .map(|&t0| maxima.iter().filter(|&&t| t >= t0).count() as f64 / m as f64)
        .collect();
    partition.significant = (0..observed.len())
        .filter(|&c| observed[c] > threshold)
        .collect();
    partition.permutation = Some(PermutationSummary {
        iterations: m,
        alpha: cfg.alpha,
        threshold,
        observed,
        p_values,
    });
    Ok(partition)
}

/// Node order that depends only on the multiset of weights in each row, so a
/// relabelled input maps to the same canonical matrix bit for bit.
pub fn canonical_order(w: &WeightMatrix) -> Vec<usize> {
    let p = w.p();
    let rows: Vec<(f64, Vec<f64>)> = (0..p)
        .map(|i| {
            let mut row: Vec<f64> = (0..p).filter(|&j| j != i).map(|j| w.get(i, j)).collect();
            row.sort_by(f64::total_cmp);
            (row.iter().sum(), row)
        })
        .collect();
    let mut order: Vec<usize> = (0..p).collect();
    order.sort_by(|&a, &b| {
        rows[b]
            .0
            .total_cmp(&rows[a].0)
            .then_with(|| {
                rows[b]
                    .1
                    .iter()
                    .zip(&rows[a].1)
                    .map(|(x, y)| x.total_cmp(y))
                    .find(|o| o.is_ne())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
            .then(a.cmp(&b))
    });
    order
}

/// Full detection: grid search and permutation screen, run in the canonical
/// node frame so the result is equivariant under relabelling of the input.
pub fn detect(w: &WeightMatrix, cfg: &DetectConfig) -> Result<Partition> {
    let order = canonical_order(w);
    let canon = w.permuted(&order);
    let partition = select_partition(&canon, cfg)?;
    let partition = permutation_test(&canon, partition, cfg)?;
    let mut out = partition.relabel(&order);
    out.criterion_value = quality_quantity_criterion(w, &out.assignment, cfg.lambda0);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn weights(p: usize, f: impl Fn(usize, usize) -> f64) -> WeightMatrix {
        WeightMatrix::from_values(DMatrix::from_fn(p, p, |i, j| {
            if i == j {
                0.0
            } else {
                f(i.min(j), i.max(j))
            }
        }))
        .unwrap()
    }

    fn planted(
        p: usize,
        blocks: &[std::ops::Range<usize>],
        inside: f64,
        outside: f64,
    ) -> WeightMatrix {
        weights(p, |i, j| {
            if blocks.iter().any(|b| b.contains(&i) && b.contains(&j)) {
                inside
            } else {
                outside
            }
        })
    }

    fn quick_cfg() -> DetectConfig {
        DetectConfig {
            kmeans_restarts: 10,
            perm_iters: 200,
            seed: 11,
            ..DetectConfig::default()
        }
    }

    #[test]
    fn laplacian_closed_forms() {
        assert_eq!(laplacian(&weights(3, |_, _| 0.0)), DMatrix::zeros(3, 3));
        let l = laplacian(&weights(2, |_, _| 1.0));
        assert_eq!(l, DMatrix::from_row_slice(2, 2, &[1.0, -1.0, -1.0, 1.0]));
    }

    #[test]
    fn disconnected_cliques_give_piecewise_constant_embedding() {
        let w = planted(9, &[0..5, 5..9], 1.0, 0.0);
        let u = spectral_embed(&laplacian(&w), 2, EmbedDims::CMinusOne).unwrap();
        assert_eq!(u.ncols(), 1);
        for block in [0..5, 5..9] {
            let vals: Vec<f64> = block.map(|i| u[(i, 0)]).collect();
            let mean = vals.iter().sum::<f64>() / vals.len() as f64;
            let var = vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / vals.len() as f64;
            assert!(var < 1e-8);
        }
        let gram = u.transpose() * &u;
        assert!((gram[(0, 0)] - 1.0).abs() < 1e-8);
        assert!(spectral_embed(&laplacian(&w), 9, EmbedDims::CMinusOne).is_err());
    }

    #[test]
    fn criterion_formula() {
        let w = weights(4, |i, j| (i + j) as f64 / 10.0);
        let total: f64 = [0.1, 0.2, 0.3, 0.3, 0.4, 0.5].iter().sum();
        let one = quality_quantity_criterion(&w, &[0, 0, 0, 0], 0.5);
        assert!((one - total.sqrt() * (total / 6.0).sqrt()).abs() < 1e-12);
        assert_eq!(quality_quantity_criterion(&w, &[0, 1, 2, 3], 0.5), 0.0);
        assert_eq!(
            quality_quantity_criterion(&weights(3, |_, _| 0.0), &[0, 0, 0], 0.5),
            0.0
        );
    }

    #[test]
    fn degenerate_weights_give_singletons() {
        let part = select_partition(&weights(6, |_, _| 0.0), &quick_cfg()).unwrap();
        assert!(part.degenerate);
        assert_eq!(part.c, 6);
        assert!(part.communities.is_empty());
        assert_eq!(part.singletons, (0..6).collect::<Vec<_>>());
    }

    #[test]
    fn planted_cliques_are_selected() {
        let w = planted(30, &[0..8, 8..14], 0.9, 0.01);
        let part = detect(&w, &quick_cfg()).unwrap();
        assert!(part.communities.contains(&(0..8).collect()));
        assert!(part.communities.contains(&(8..14).collect()));
        assert_eq!(part.significant.len(), 2, "{part:?}");
        let recomputed = quality_quantity_criterion(&w, &part.assignment, 0.5);
        assert!((recomputed - part.criterion_value).abs() < 1e-9);
    }

    #[test]
    fn pigeonhole_at_max_c() {
        let w = weights(10, |i, j| ((i * 7 + j * 3) % 5) as f64 / 5.0);
        let labels = cluster_for_c(&w, 9, &quick_cfg()).unwrap();
        let mut sizes = [0; 10];
        labels.iter().for_each(|&l| sizes[l] += 1);
        assert!(sizes.iter().filter(|&&s| s == 1 || s == 2).count() >= 8);
    }

    #[test]
    fn statistic_closed_forms() {
        let e1 = (-1.0f64).exp();
        let w = weights(2, |_, _| e1);
        let t = community_statistic(&w, &[0, 1], StatOrientation::AsPrinted).unwrap();
        assert!((t - 1.0).abs() < 1e-12);
        let ones = weights(4, |_, _| 1.0);
        assert!(
            community_statistic(&ones, &[0, 1, 2, 3], StatOrientation::AsPrinted).unwrap() < 1e-9
        );
        assert!(
            community_statistic(&ones, &[0, 1, 2, 3], StatOrientation::Complement).unwrap() > 1.0
        );
        assert!(community_statistic(&ones, &[2], StatOrientation::Complement).is_err());
    }

    #[test]
    fn quantile_index_rule() {
        assert_eq!(null_quantile_index(100, 0.05), 95);
        assert_eq!(null_quantile_index(1000, 0.05), 950);
        assert_eq!(null_quantile_index(100, 0.001), 99);
    }

    #[test]
    fn config_validation() {
        let bad = DetectConfig {
            perm_iters: 10,
            ..DetectConfig::default()
        };
        assert!(bad.validate().is_err());
        assert!(DetectConfig {
            lambda0: 1.0,
            ..DetectConfig::default()
        }
        .validate()
        .is_err());
        assert_eq!(DetectConfig::default().grid_for(100).last(), Some(&99));
        assert_eq!(DetectConfig::default().grid_for(500).last(), Some(&200));
    }

    #[test]
    fn canonical_order_is_relabelling_invariant() {
        let w = weights(7, |i, j| ((i * 13 + j * 7) % 11) as f64 / 11.0);
        let perm = [3, 6, 0, 5, 1, 4, 2];
        let wp = w.permuted(&perm);
        let a = w.permuted(&canonical_order(&w));
        let b = wp.permuted(&canonical_order(&wp));
        assert_eq!(a, b);
    }
}
