//! Power-sum traces, their Monte Carlo second moments, and the brute-force
//! quadrature oracle at small dimension.
//!
//! `trace_power` reads `Tr(M^k) = sum_j e^{i k theta_j}` straight off a
//! spectrum; `trace_power_matrix` (in [`crate::cmv`]) recomputes it from
//! banded matrix powers, giving two independent routes. The quadrature
//! oracle integrates bounded symmetric observables against the angle density
//! proportional to `prod_{j<k} |e^{i theta_j} - e^{i theta_k}|^beta` on a
//! tensor grid, for dimensions 1..3 only.

use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};
use crate::rng::replica_rng;
use crate::sampler::{sample_cbe, BetaParam, UnitSpectrum};

/// A Monte Carlo estimate with its standard error.
#[derive(Debug, Clone, Copy)]
pub struct MomentEstimate {
    pub value: f64,
    pub std_error: f64,
    pub replicas: usize,
    pub seed: u64,
}

impl MomentEstimate {
    /// Mean and standard error of a sequence of replica values, reduced in
    /// fixed order.
    pub fn from_values(values: &[f64], seed: u64) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::parameter("need at least two replicas"));
        }
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
        Ok(MomentEstimate {
            value: mean,
            std_error: (var / n).sqrt(),
            replicas: values.len(),
            seed,
        })
    }

    pub fn distance_in_se(&self, reference: f64) -> f64 {
        (self.value - reference).abs() / self.std_error.max(f64::MIN_POSITIVE)
    }
}

/// `Tr(M^k) = sum_j e^{i k theta_j}`; `k = 0` gives the dimension.
pub fn trace_power(spectrum: &UnitSpectrum, k: i64) -> Complex64 {
    spectrum
        .angles()
        .iter()
        .map(|&t| Complex64::from_polar(1.0, k as f64 * t))
        .sum()
}

/// The second-moment estimate for one power, with its regime flag.
#[derive(Debug, Clone, Copy)]
pub struct TraceMoment {
    pub k: usize,
    pub estimate: MomentEstimate,
    /// `k <= n/2`; estimates beyond that range are computed anyway but
    /// flagged as outside the linear-growth regime.
    pub within_lemma_range: bool,
}

/// Monte Carlo `E|Tr(M^k)|^2` for every requested power, all powers sharing
/// the same spectra.
pub fn mc_trace_second_moments(
    n: usize,
    beta: BetaParam,
    ks: &[usize],
    replicas: usize,
    seed: u64,
) -> Result<Vec<TraceMoment>> {
    if replicas < 100 {
        return Err(Error::parameter(format!(
            "need at least 100 replicas, got {replicas}"
        )));
    }
    if ks.contains(&0) {
        return Err(Error::parameter("powers must be >= 1"));
    }
    let per_replica: Vec<Vec<f64>> = (0..replicas as u64)
        .into_par_iter()
        .map(|r| {
            let mut rng = replica_rng(seed, r);
            let spectrum = sample_cbe(n, beta, &mut rng)?;
            Ok(ks
                .iter()
                .map(|&k| trace_power(&spectrum, k as i64).norm_sqr())
                .collect())
        })
        .collect::<Result<_>>()?;
    ks.iter()
        .enumerate()
        .map(|(idx, &k)| {
            let values: Vec<f64> = per_replica.iter().map(|row| row[idx]).collect();
            Ok(TraceMoment {
                k,
                estimate: MomentEstimate::from_values(&values, seed)?,
                within_lemma_range: 2 * k <= n,
            })
        })
        .collect()
}

/// Monte Carlo `E|Tr(M^k)|^2` for a single power.
pub fn mc_trace_second_moment(
    n: usize,
    beta: BetaParam,
    k: usize,
    replicas: usize,
    seed: u64,
) -> Result<TraceMoment> {
    Ok(mc_trace_second_moments(n, beta, &[k], replicas, seed)?.remove(0))
}

/// A complex Monte Carlo mean with the standard error of its modulus.
#[derive(Debug, Clone, Copy)]
pub struct CrossMoment {
    pub mean: Complex64,
    pub std_error: f64,
    pub replicas: usize,
}

/// Monte Carlo `E[Tr(M^k) conj(Tr(M^k'))]`; rotation invariance makes this
/// vanish for `k != k'`.
pub fn mc_trace_cross_moment(
    n: usize,
    beta: BetaParam,
    k: usize,
    k_prime: usize,
    replicas: usize,
    seed: u64,
) -> Result<CrossMoment> {
    if replicas < 100 {
        return Err(Error::parameter(format!(
            "need at least 100 replicas, got {replicas}"
        )));
    }
    let values: Vec<Complex64> = (0..replicas as u64)
        .into_par_iter()
        .map(|r| {
            let mut rng = replica_rng(seed, r);
            let spectrum = sample_cbe(n, beta, &mut rng)?;
            Ok(trace_power(&spectrum, k as i64) * trace_power(&spectrum, k_prime as i64).conj())
        })
        .collect::<Result<_>>()?;
    let nrep = values.len() as f64;
    let mean = values.iter().sum::<Complex64>() / nrep;
    let var = values.iter().map(|v| (v - mean).norm_sqr()).sum::<f64>() / (nrep - 1.0);
    Ok(CrossMoment {
        mean,
        std_error: (var / nrep).sqrt(),
        replicas: values.len(),
    })
}

/// Default tensor-grid resolution per dimension.
fn default_nodes(n: usize) -> usize {
    match n {
        1 => 8192,
        2 => 2048,
        _ => 420,
    }
}

/// Brute-force expectation of a bounded symmetric observable of the angles
/// under the dimension-n ensemble, by tensor-grid quadrature (at least 400
/// nodes per dimension). Refuses `n > 3` on cost grounds.
pub fn cbe_quadrature_oracle<F>(
    n: usize,
    beta: BetaParam,
    nodes: Option<usize>,
    observable: F,
) -> Result<Complex64>
where
    F: Fn(&[f64]) -> Complex64,
{
    if n == 0 || n > 3 {
        return Err(Error::parameter(format!(
            "quadrature oracle supports dimensions 1..=3, got {n}"
        )));
    }
    let m = nodes.unwrap_or_else(|| default_nodes(n)).max(400);
    let grid: Vec<f64> = (0..m).map(|i| TAU * i as f64 / m as f64).collect();
    // Pairwise weight depends only on the index distance:
    // |e^{i a} - e^{i b}|^beta = (2 sin(pi d / m))^beta for d = |i - j|.
    let pair_weight: Vec<f64> = (0..m)
        .map(|d| (2.0 * (PI * d as f64 / m as f64).sin()).powf(beta.value()))
        .collect();

    let mut numerator = KahanComplex::default();
    let mut normalizer = Kahan::default();
    match n {
        1 => {
            for &a in &grid {
                numerator.add(observable(&[a]));
                normalizer.add(1.0);
            }
        }
        2 => {
            for i in 0..m {
                for j in (i + 1)..m {
                    let w = pair_weight[j - i];
                    numerator.add(observable(&[grid[i], grid[j]]) * w);
                    normalizer.add(w);
                }
            }
        }
        _ => {
            for i in 0..m {
                for j in (i + 1)..m {
                    let wij = pair_weight[j - i];
                    if wij == 0.0 {
                        continue;
                    }
                    for k in (j + 1)..m {
                        let w = wij * pair_weight[k - i] * pair_weight[k - j];
                        numerator.add(observable(&[grid[i], grid[j], grid[k]]) * w);
                        normalizer.add(w);
                    }
                }
            }
        }
    }
    let z = normalizer.total();
    if !(z > 0.0) {
        return Err(Error::consistency("oracle normalization vanished"));
    }
    Ok(numerator.total() / z)
}

/// Real-valued convenience wrapper around the oracle.
pub fn cbe_quadrature_oracle_real<F>(
    n: usize,
    beta: BetaParam,
    nodes: Option<usize>,
    observable: F,
) -> Result<f64>
where
    F: Fn(&[f64]) -> f64,
{
    cbe_quadrature_oracle(n, beta, nodes, |angles| {
        Complex64::new(observable(angles), 0.0)
    })
    .map(|v| v.re)
}

/// The observable `|sum_j e^{i k theta_j}|^2`.
pub fn power_sum_sq_observable(k: i64) -> impl Fn(&[f64]) -> f64 {
    move |angles: &[f64]| {
        let t: Complex64 = angles
            .iter()
            .map(|&a| Complex64::from_polar(1.0, k as f64 * a))
            .sum();
        t.norm_sqr()
    }
}

#[derive(Default)]
struct Kahan {
    sum: f64,
    carry: f64,
}

impl Kahan {
    #[inline]
    fn add(&mut self, v: f64) {
        let y = v - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }

    fn total(&self) -> f64 {
        self.sum
    }
}

#[derive(Default)]
struct KahanComplex {
    re: Kahan,
    im: Kahan,
}

impl KahanComplex {
    #[inline]
    fn add(&mut self, v: Complex64) {
        self.re.add(v.re);
        self.im.add(v.im);
    }

    fn total(&self) -> Complex64 {
        Complex64::new(self.re.total(), self.im.total())
    }
}
