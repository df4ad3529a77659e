//! Two-groups empirical-Bayes model for edge statistics.
//!
//! The marginal density f of the Fisher-Z statistics is estimated by Lindsey's
//! method: a 120-bin histogram whose counts are fitted by a Poisson regression
//! on a degree-7 polynomial of the bin centres. The null f0 is either the
//! theoretical N(0, 1/(n-3)) or a central-matching fit. The non-null part is
//! whatever of f is left after removing pi0 * f0, clipped at zero, so that
//! pi0*f0 + pi1*f1 reproduces f wherever the clip is inactive and the local
//! fdr is exactly pi0*f0/f there.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::corr::ZMatrix;
use crate::error::{Error, Result};

pub const MIN_FIT_VALUES: usize = 200;
pub const DEFAULT_BINS: usize = 120;
pub const DEFAULT_DEGREE: usize = 7;
const PI0_FLOOR: f64 = 0.01;
const PI0_NULL_ONLY: f64 = 1.0 - 1e-6;
const LOG_FLOOR: f64 = 1e-300;
const PI0_WINDOW_SD: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NullMode {
    #[default]
    Theoretical,
    Empirical,
}

/// Where the non-null component may put mass.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sidedness {
    /// Non-null mass only at z > 0; negative edges are always null.
    #[default]
    Positive,
    TwoSided,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MixtureOptions {
    pub null_mode: NullMode,
    pub sidedness: Sidedness,
    pub bins: usize,
    pub degree: usize,
}

impl Default for MixtureOptions {
    fn default() -> Self {
        Self {
            null_mode: NullMode::Theoretical,
            sidedness: Sidedness::Positive,
            bins: DEFAULT_BINS,
            degree: DEFAULT_DEGREE,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalDensity {
    pub mean: f64,
    pub sd: f64,
}

impl NormalDensity {
    pub fn pdf(&self, z: f64) -> f64 {
        let u = (z - self.mean) / self.sd;
        (-0.5 * u * u).exp() / (self.sd * (2.0 * std::f64::consts::PI).sqrt())
    }
}

/// Legendre polynomials P_0..=P_degree at u.
fn legendre(u: f64, degree: usize, out: &mut [f64]) {
    out[0] = 1.0;
    if degree >= 1 {
        out[1] = u;
    }
    for k in 2..=degree {
        let k_f = k as f64;
        out[k] = ((2.0 * k_f - 1.0) * u * out[k - 1] - (k_f - 1.0) * out[k - 2]) / k_f;
    }
}

/// Exponential-polynomial density from a Lindsey fit, supported on [lo, hi].
/// Outside the support it is held at the boundary value.
#[derive(Debug, Clone, PartialEq)]
struct LindseyDensity {
    lo: f64,
    hi: f64,
    coeffs: Vec<f64>,
    log_norm: f64,
}

impl LindseyDensity {
    fn eval(&self, z: f64) -> f64 {
        let half = 0.5 * (self.hi - self.lo);
        let u = ((z - self.lo) / half - 1.0).clamp(-1.0, 1.0);
        let mut basis = [0.0; 16];
        legendre(u, self.coeffs.len() - 1, &mut basis);
        let eta: f64 = self.coeffs.iter().zip(&basis).map(|(c, b)| c * b).sum();
        (eta - self.log_norm).exp()
    }
}

/// Poisson regression of `counts` on the Legendre basis of `u` by damped Newton.
fn poisson_regression(u: &[f64], counts: &[f64], degree: usize) -> Result<Vec<f64>> {
    let k = u.len();
    let d = degree + 1;
    let mut design = DMatrix::zeros(k, d);
    let mut basis = vec![0.0; d];
    for (i, &ui) in u.iter().enumerate() {
        legendre(ui, degree, &mut basis);
        for j in 0..d {
            design[(i, j)] = basis[j];
        }
    }
    let y = DVector::from_column_slice(counts);
    let loglik = |beta: &DVector<f64>| -> f64 {
        let eta = &design * beta;
        eta.iter()
            .zip(y.iter())
            .map(|(e, yi)| yi * e - e.exp())
            .sum()
    };

    let mean = counts.iter().sum::<f64>() / k as f64;
    let mut beta = DVector::zeros(d);
    beta[0] = mean.ln();
    let mut current = loglik(&beta);

    for _ in 0..200 {
        let mu = (&design * &beta).map(f64::exp);
        let grad = design.transpose() * (&y - &mu);
        let mut hess = DMatrix::zeros(d, d);
        for i in 0..k {
            let row = design.row(i);
            hess += row.transpose() * row * mu[i];
        }
        let step = match hess.clone().cholesky() {
            Some(ch) => ch.solve(&grad),
            None => {
                let ridge = hess.diagonal().max() * 1e-10 + 1e-12;
                hess += DMatrix::identity(d, d) * ridge;
                hess.cholesky()
                    .ok_or_else(|| Error::Numeric("singular Poisson information matrix".into()))?
                    .solve(&grad)
            }
        };
        let mut scale = 1.0;
        let mut accepted = false;
        for _ in 0..40 {
            let trial = &beta + &step * scale;
            let value = loglik(&trial);
            if value.is_finite() && value >= current - 1e-12 * current.abs() {
                let gain = value - current;
                beta = trial;
                current = value;
                accepted = true;
                if gain.abs() <= 1e-12 * (current.abs() + 1.0) {
                    return Ok(beta.iter().copied().collect());
                }
                break;
            }
            scale *= 0.5;
        }
        if !accepted {
            // No ascent direction left; at the optimum up to rounding.
            return Ok(beta.iter().copied().collect());
        }
    }
    Ok(beta.iter().copied().collect())
}

fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

fn median(mut values: Vec<f64>) -> f64 {
    values.sort_by(f64::total_cmp);
    quantile_sorted(&values, 0.5)
}

/// Fitted two-groups decomposition f = pi0*f0 + pi1*f1.
#[derive(Debug, Clone, PartialEq)]
pub struct MixtureFit {
    pi0: f64,
    null: NormalDensity,
    marginal: LindseyDensity,
    grid: Vec<f64>,
    bin_width: f64,
    counts: Vec<f64>,
    sidedness: Sidedness,
    null_mode: NullMode,
    f1_zero: bool,
    /// Central interval around the null mode where f1 is held at zero.
    null_core: (f64, f64),
}

/// Plot-ready dump of a fit.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MixtureDiagnostics {
    pub pi0: f64,
    pub pi1: f64,
    pub null_mode: NullMode,
    pub null_mean: f64,
    pub null_sd: f64,
    pub bin_width: f64,
    pub grid: Vec<f64>,
    pub counts: Vec<f64>,
    pub f_hat: Vec<f64>,
    pub f0: Vec<f64>,
    pub f1: Vec<f64>,
    /// Trapezoid integral of f1 over the grid.
    pub f1_mass: f64,
}

pub fn fit_mixture(z_values: &[f64], n: usize, options: &MixtureOptions) -> Result<MixtureFit> {
    if z_values.len() < MIN_FIT_VALUES {
        return Err(Error::Input(format!(
            "mixture fit needs at least {MIN_FIT_VALUES} values, got {}",
            z_values.len()
        )));
    }
    if n < 4 {
        return Err(Error::Input(format!("sample size {n} must be at least 4")));
    }
    if options.bins < options.degree + 2 || options.degree == 0 || options.degree > 15 {
        return Err(Error::Input("unsupported histogram/polynomial size".into()));
    }
    if z_values.iter().any(|v| !v.is_finite()) {
        return Err(Error::Input("non-finite edge statistic".into()));
    }

    let mut sorted = z_values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let (min, max) = (sorted[0], sorted[sorted.len() - 1]);
    if max - min <= 0.0 {
        return Err(Error::Degenerate(
            "all edge statistics are identical".into(),
        ));
    }

    let bins = options.bins;
    let pad = (max - min) * 1e-3;
    let (lo, hi) = (min - pad, max + pad);
    let width = (hi - lo) / bins as f64;
    let mut counts = vec![0.0; bins];
    for &z in z_values {
        let b = (((z - lo) / width) as usize).min(bins - 1);
        counts[b] += 1.0;
    }
    let grid: Vec<f64> = (0..bins).map(|b| lo + (b as f64 + 0.5) * width).collect();
    let half = 0.5 * (hi - lo);
    let u: Vec<f64> = grid.iter().map(|z| (z - lo) / half - 1.0).collect();

    let coeffs = poisson_regression(&u, &counts, options.degree)?;
    let marginal = LindseyDensity {
        lo,
        hi,
        coeffs,
        log_norm: (z_values.len() as f64 * width).ln(),
    };

    let q25 = quantile_sorted(&sorted, 0.25);
    let q75 = quantile_sorted(&sorted, 0.75);
    let mut central: Vec<f64> = grid
        .iter()
        .copied()
        .filter(|z| (q25..=q75).contains(z))
        .collect();
    if central.is_empty() {
        central.push(median(z_values.to_vec()));
    }

    let theoretical = NormalDensity {
        mean: 0.0,
        sd: 1.0 / ((n - 3) as f64).sqrt(),
    };
    let null = match options.null_mode {
        NullMode::Theoretical => theoretical,
        NullMode::Empirical => central_matching(&marginal, &central).unwrap_or(theoretical),
    };

    // pi0 is read off within two null sds of the null mean, where f/f0 is
    // flat even when the realised null is a little narrower than f0.
    let mut pi0_grid: Vec<f64> = grid
        .iter()
        .copied()
        .filter(|z| (z - null.mean).abs() <= PI0_WINDOW_SD * null.sd)
        .collect();
    if pi0_grid.is_empty() {
        pi0_grid = central.clone();
    }
    let ratios: Vec<f64> = pi0_grid
        .iter()
        .map(|&z| marginal.eval(z) / null.pdf(z).max(LOG_FLOOR))
        .collect();
    let pi0 = median(ratios).min(1.0).clamp(PI0_FLOOR, 1.0);

    // No non-null mass near the null mode: whatever f has above pi0*f0 there
    // is Lindsey wiggle or null misfit.
    let core_lo = null.mean - PI0_WINDOW_SD * null.sd;
    let core_hi = null.mean + PI0_WINDOW_SD * null.sd;

    Ok(MixtureFit {
        pi0,
        null,
        marginal,
        grid,
        bin_width: width,
        counts,
        sidedness: options.sidedness,
        null_mode: options.null_mode,
        f1_zero: pi0 >= PI0_NULL_ONLY,
        null_core: (core_lo, core_hi),
    })
}

/// Quadratic fit of log f over the central grid: log f = a + b z + c z^2.
fn central_matching(marginal: &LindseyDensity, central: &[f64]) -> Option<NormalDensity> {
    if central.len() < 3 {
        return None;
    }
    let x = DMatrix::from_fn(central.len(), 3, |i, j| central[i].powi(j as i32));
    let y = DVector::from_iterator(
        central.len(),
        central.iter().map(|&z| marginal.eval(z).ln()),
    );
    let xtx = x.transpose() * &x;
    let coef = xtx.cholesky()?.solve(&(x.transpose() * y));
    let (b, c) = (coef[1], coef[2]);
    if !(c < 0.0) {
        return None;
    }
    let var = -1.0 / (2.0 * c);
    Some(NormalDensity {
        mean: b * var,
        sd: var.sqrt(),
    })
}

impl MixtureFit {
    pub fn pi0(&self) -> f64 {
        self.pi0
    }

    pub fn pi1(&self) -> f64 {
        1.0 - self.pi0
    }

    pub fn null(&self) -> NormalDensity {
        self.null
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn bin_width(&self) -> f64 {
        self.bin_width
    }

    /// Lindsey estimate of the marginal density.
    pub fn marginal(&self, z: f64) -> f64 {
        self.marginal.eval(z)
    }

    pub fn f0(&self, z: f64) -> f64 {
        self.null.pdf(z)
    }

    /// True where f1 is forced to zero (by sign convention, by a null-only fit,
    /// or because f fell below pi0*f0).
    pub fn f1_clipped(&self, z: f64) -> bool {
        self.f1_zero
            || (self.sidedness == Sidedness::Positive && z < 0.0)
            || (self.null_core.0 <= z && z <= self.null_core.1)
            || self.marginal(z) <= self.pi0 * self.f0(z)
    }

    pub fn f1(&self, z: f64) -> f64 {
        if self.f1_clipped(z) {
            0.0
        } else {
            (self.marginal(z) - self.pi0 * self.f0(z)) / self.pi1()
        }
    }

    /// Mixture density pi0*f0 + pi1*f1 used for posteriors.
    pub fn f(&self, z: f64) -> f64 {
        self.pi0 * self.f0(z) + self.pi1() * self.f1(z)
    }

    pub fn local_fdr(&self, z: f64) -> f64 {
        let null_part = self.pi0 * self.f0(z);
        let total = null_part + self.pi1() * self.f1(z);
        if total <= 0.0 {
            return 1.0;
        }
        (null_part / total).clamp(0.0, 1.0)
    }

    /// Bayes factor f1/f0; +inf where f0 underflows below 1e-300.
    pub fn bayes_factor(&self, z: f64) -> f64 {
        let f0 = self.f0(z);
        let f1 = self.f1(z);
        if f0 < LOG_FLOOR {
            if f1 > 0.0 {
                f64::INFINITY
            } else {
                0.0
            }
        } else {
            f1 / f0
        }
    }

    /// Trapezoid integral of `g` over the support grid.
    pub fn integrate(&self, g: impl Fn(f64) -> f64) -> f64 {
        let vals: Vec<f64> = self.grid.iter().map(|&z| g(z)).collect();
        vals.windows(2)
            .map(|w| 0.5 * (w[0] + w[1]) * self.bin_width)
            .sum()
    }

    pub fn diagnostics(&self) -> MixtureDiagnostics {
        MixtureDiagnostics {
            pi0: self.pi0,
            pi1: self.pi1(),
            null_mode: self.null_mode,
            null_mean: self.null.mean,
            null_sd: self.null.sd,
            bin_width: self.bin_width,
            grid: self.grid.clone(),
            counts: self.counts.clone(),
            f_hat: self.grid.iter().map(|&z| self.marginal(z)).collect(),
            f0: self.grid.iter().map(|&z| self.f0(z)).collect(),
            f1: self.grid.iter().map(|&z| self.f1(z)).collect(),
            f1_mass: self.integrate(|z| self.f1(z)),
        }
    }
}

/// Posterior probability that `z` comes from the non-null component, 1 - lfdr.
pub fn posterior_nonnull(fit: &MixtureFit, z: f64) -> f64 {
    1.0 - fit.local_fdr(z)
}

/// How edges are turned into network-detection weights.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightMode {
    /// Posterior non-null probability.
    #[default]
    Posterior,
    /// The Fisher-Z value itself, clamped to [0, 1].
    RawZ,
}

/// Symmetric p x p weights in [0, 1] with zero diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightMatrix {
    values: DMatrix<f64>,
}

impl WeightMatrix {
    pub fn from_values(values: DMatrix<f64>) -> Result<Self> {
        let p = values.nrows();
        if values.ncols() != p {
            return Err(Error::Input("weight matrix must be square".into()));
        }
        for i in 0..p {
            if values[(i, i)] != 0.0 {
                return Err(Error::Input(format!("weight diagonal {i} is not 0")));
            }
            for j in (i + 1)..p {
                let w = values[(i, j)];
                if w != values[(j, i)] || !(0.0..=1.0).contains(&w) {
                    return Err(Error::Input(format!("invalid weight at ({i},{j})")));
                }
            }
        }
        Ok(Self { values })
    }

    pub fn p(&self) -> usize {
        self.values.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[(i, j)]
    }

    pub fn values(&self) -> &DMatrix<f64> {
        &self.values
    }

    /// Same weights with nodes relabelled: node `k` of the result is node `order[k]`.
    pub fn permuted(&self, order: &[usize]) -> Self {
        let p = self.p();
        Self {
            values: DMatrix::from_fn(p, p, |a, b| self.values[(order[a], order[b])]),
        }
    }
}

pub fn weight_matrix(zm: &ZMatrix, fit: &MixtureFit, mode: WeightMode) -> WeightMatrix {
    let p = zm.p();
    let mut values = DMatrix::zeros(p, p);
    for i in 0..p {
        for j in (i + 1)..p {
            let z = zm.get(i, j);
            let w = match mode {
                WeightMode::Posterior => posterior_nonnull(fit, z),
                WeightMode::RawZ => z.clamp(0.0, 1.0),
            };
            values[(i, j)] = w;
            values[(j, i)] = w;
        }
    }
    WeightMatrix { values }
}

/// Maximum-likelihood pi0 for a subset of edges with f0 and f1 held fixed.
pub fn refit_pi0(z_subset: &[f64], fit: &MixtureFit) -> Result<f64> {
    if z_subset.is_empty() {
        return Err(Error::Input("cannot refit pi0 on an empty edge set".into()));
    }
    let mut sorted = z_subset.to_vec();
    sorted.sort_by(f64::total_cmp);
    let dens: Vec<(f64, f64)> = sorted.iter().map(|&z| (fit.f0(z), fit.f1(z))).collect();
    let loglik = |pi: f64| -> f64 {
        dens.iter()
            .map(|&(f0, f1)| (pi * f0 + (1.0 - pi) * f1).max(LOG_FLOOR).ln())
            .sum()
    };
    Ok(golden_max(loglik, 0.0, 1.0, 1e-6))
}

/// Golden-section maximisation of a concave function on [a, b]; the endpoints
/// are also considered so boundary optima are returned exactly.
fn golden_max(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = (a, b);
    let mut x1 = hi - ratio * (hi - lo);
    let mut x2 = lo + ratio * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > tol {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = f(x1);
        }
    }
    let mid = 0.5 * (lo + hi);
    let candidates = [(mid, f(mid)), (a, f(a)), (b, f(b))];
    candidates
        .into_iter()
        .fold((mid, f64::NEG_INFINITY), |best, c| {
            if c.1 > best.1 {
                c
            } else {
                best
            }
        })
        .0
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, Normal};

    fn draws(seed: u64, count: usize, parts: &[(f64, f64, f64)]) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = Vec::with_capacity(count);
        for &(share, mean, sd) in parts {
            let normal = Normal::new(mean, sd).unwrap();
            let k = (share * count as f64).round() as usize;
            out.extend((0..k).map(|_| normal.sample(&mut rng)));
        }
        out
    }

    const SD22: f64 = 0.213_200_716_355_610_2; // 1/sqrt(22)

    #[test]
    fn pure_null_gives_pi0_near_one() {
        let z = draws(1, 100_000, &[(1.0, 0.0, SD22)]);
        let fit = fit_mixture(&z, 25, &MixtureOptions::default()).unwrap();
        assert!(fit.pi0() >= 0.95, "pi0 = {}", fit.pi0());
    }

    #[test]
    fn two_normal_mixture() {
        let z = draws(2, 100_000, &[(0.9, 0.0, SD22), (0.1, 0.55, SD22)]);
        let fit = fit_mixture(&z, 25, &MixtureOptions::default()).unwrap();
        assert!((0.8..=1.0).contains(&fit.pi0()), "pi0 = {}", fit.pi0());
        assert!(posterior_nonnull(&fit, 0.0) < 0.5);
        let grid: Vec<f64> = (0..=100).map(|k| k as f64 / 100.0).collect();
        let post: Vec<f64> = grid.iter().map(|&z| posterior_nonnull(&fit, z)).collect();
        assert!(post.windows(2).all(|w| w[1] >= w[0] - 1e-12), "{post:?}");
    }

    #[test]
    fn densities_integrate_and_decompose() {
        let z = draws(3, 20_000, &[(0.95, 0.0, SD22), (0.05, 0.6, SD22)]);
        let fit = fit_mixture(&z, 25, &MixtureOptions::default()).unwrap();
        assert!((fit.integrate(|z| fit.marginal(z)) - 1.0).abs() < 1e-3);
        assert!((fit.integrate(|z| fit.f0(z)) - 1.0).abs() < 1e-3);
        for &g in fit.grid() {
            assert!(fit.f1(g) >= 0.0);
            if !fit.f1_clipped(g) {
                assert!((fit.f(g) - fit.marginal(g)).abs() < 1e-6);
                assert!(fit.marginal(g) >= fit.pi0() * fit.f0(g) - 1e-9);
            }
            assert_eq!(posterior_nonnull(&fit, g) + fit.local_fdr(g), 1.0);
        }
    }

    #[test]
    fn null_only_fit_has_no_signal() {
        // Underdispersed statistics make f exceed f0 in the centre; nothing there is signal.
        let z = draws(4, 5_000, &[(1.0, 0.0, SD22 * 0.7)]);
        let fit = fit_mixture(&z, 25, &MixtureOptions::default()).unwrap();
        assert!(fit.pi0() > 0.8);
        assert!(fit
            .grid()
            .iter()
            .all(|&g| posterior_nonnull(&fit, g) == 0.0));
    }

    #[test]
    fn refit_recovers_pure_strata() {
        let z = draws(5, 20_000, &[(0.9, 0.0, SD22), (0.1, 0.8, SD22)]);
        let fit = fit_mixture(&z, 25, &MixtureOptions::default()).unwrap();
        let null_part = draws(6, 500, &[(1.0, 0.0, SD22)]);
        let alt_part = draws(7, 500, &[(1.0, 0.8, SD22)]);
        assert!(refit_pi0(&null_part, &fit).unwrap() >= 0.9);
        assert!(refit_pi0(&alt_part, &fit).unwrap() <= 0.1);
        assert!(refit_pi0(&[], &fit).is_err());
    }

    #[test]
    fn empirical_null_tracks_shifted_centre() {
        let z = draws(8, 50_000, &[(0.95, 0.05, 0.3), (0.05, 1.2, 0.3)]);
        let options = MixtureOptions {
            null_mode: NullMode::Empirical,
            ..MixtureOptions::default()
        };
        let fit = fit_mixture(&z, 25, &options).unwrap();
        assert!((fit.null().mean - 0.05).abs() < 0.03, "{:?}", fit.null());
        assert!((fit.null().sd - 0.3).abs() < 0.03, "{:?}", fit.null());
    }

    #[test]
    fn fit_errors() {
        let opts = MixtureOptions::default();
        assert!(matches!(
            fit_mixture(&[0.1; 50], 25, &opts),
            Err(Error::Input(_))
        ));
        assert!(matches!(
            fit_mixture(&[0.1; 500], 25, &opts),
            Err(Error::Degenerate(_))
        ));
        assert!(fit_mixture(&[0.0; 500], 3, &opts).is_err());
    }

    #[test]
    fn golden_section_finds_interior_and_boundary() {
        assert!((golden_max(|x| -(x - 0.3f64).powi(2), 0.0, 1.0, 1e-9) - 0.3).abs() < 1e-6);
        assert_eq!(golden_max(|x| x, 0.0, 1.0, 1e-6), 1.0);
        assert_eq!(golden_max(|x| -x, 0.0, 1.0, 1e-6), 0.0);
    }
}
