//! Recovering the number of points in a bounded set from the configuration
//! outside it.
//!
//! The estimator is `int f_p - sum_{|x| > R} f_p(x)` over the periodized
//! configuration, for a sequence of band-limited `f_p` with weighted
//! seminorm and `sup_{[-R,R]} |f_p - 1|` both below `2^{-p}`. The exact
//! telescoping identity behind it, valid for any finite point multiset and
//! any `f`:
//!
//! ```text
//! N_{[-R,R]} = (sum_all f - int f) - sum_{|x| <= R} (f(x) - 1)
//!              + (int f - sum_{|x| > R} f(x)).
//! ```
//!
//! Two evaluation routes realize the periodized sum:
//!
//! * `Window`: every periodic copy lies beyond the certified reach of the
//!   mixture, so the sum truncates to the base window. The estimator then
//!   literally consumes only points with `|x| > R` and is bit-for-bit
//!   invariant under perturbations inside `(-R, R)`.
//! * `Spectral`: once the mixture spreads past the window, copies of every
//!   point carry mass; the periodized sum is evaluated exactly through its
//!   lattice Fourier coefficients (the zero mode cancels `int f`
//!   algebraically, so gigantic scales stay finite). This route is exact,
//!   with zero truncation error, but reads inside points too; unavoidable,
//!   because the periodic extension is generated by them.

use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::TAU;

use crate::bandlimited::{ReductionStep, ScaleMixture};
use crate::error::{Error, Result};
use crate::linstat::TAIL_BUDGET;
use crate::rng::replica_rng;
use crate::sampler::{renormalize, sample_cbe, BetaParam, RenormalizedConfiguration};

/// Default cap on the depth of the test-function sequence.
pub const P_MAX_CAP: usize = 5;

/// Certificates re-verified after constructing one test function.
#[derive(Debug, Clone)]
pub struct SequenceCertificate {
    pub p: usize,
    /// Re-measured weighted seminorm; must be <= 2^{-p}.
    pub h_half_norm: f64,
    /// Certified sup of |f_p - 1| on [-R, R]; must be <= 2^{-p}.
    pub sup_deviation: f64,
    /// Accepted norm-reduction steps with measured contraction factors.
    pub reduction_steps: Vec<ReductionStep>,
}

/// The sequence `f_0 .. f_{p_max}` with certificates.
#[derive(Debug, Clone)]
pub struct TestFunctionSequence {
    pub radius: f64,
    pub p_max: usize,
    pub mixtures: Vec<ScaleMixture>,
    pub certificates: Vec<SequenceCertificate>,
}

/// Build the sequence: for each `p`, reduce the seminorm to `2^{-p}`, then
/// flatten to `2^{-p}` on `[-R, R]`, re-verifying both bounds.
///
/// A resource failure names the largest achievable depth.
pub fn build_test_sequence(radius: f64, p_max: usize) -> Result<TestFunctionSequence> {
    if !(radius > 0.0) {
        return Err(Error::parameter("radius must be positive"));
    }
    if p_max > P_MAX_CAP {
        return Err(Error::parameter(format!(
            "sequence depth {p_max} exceeds the configured cap {P_MAX_CAP}"
        )));
    }
    let mut mixtures = Vec::with_capacity(p_max + 1);
    let mut certificates = Vec::with_capacity(p_max + 1);
    for p in 0..=p_max {
        let target = 0.5f64.powi(p as i32);
        let built = ScaleMixture::base()
            .reduce_norm_logged(target)
            .and_then(|(reduced, steps)| Ok((reduced.flatten(radius, target)?, steps)));
        let (mixture, steps) = match built {
            Ok(pair) => pair,
            Err(Error::Resource(msg)) => {
                return Err(Error::resource(format!(
                    "construction stops at p = {p}: {msg}; largest achievable p = {}",
                    p.saturating_sub(1)
                )));
            }
            Err(other) => return Err(other),
        };
        let h_half_norm = mixture.h_half_norm();
        let sup_deviation = mixture.certified_sup_deviation(radius, 1);
        if h_half_norm > target || sup_deviation > target {
            return Err(Error::consistency(format!(
                "certificates failed at p = {p}: norm {h_half_norm}, sup {sup_deviation}, \
                 target {target}"
            )));
        }
        mixtures.push(mixture);
        certificates.push(SequenceCertificate {
            p,
            h_half_norm,
            sup_deviation,
            reduction_steps: steps,
        });
    }
    Ok(TestFunctionSequence {
        radius,
        p_max,
        mixtures,
        certificates,
    })
}

/// Which evaluation route realized the periodized outside sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EstimatorRoute {
    Window,
    Spectral,
}

/// A window-count estimate with its route.
#[derive(Debug, Clone, Copy)]
pub struct WindowEstimate {
    pub value: f64,
    pub route: EstimatorRoute,
}

/// The three telescoping terms, evaluated route-consistently.
#[derive(Debug, Clone, Copy)]
pub struct DecompositionTerms {
    /// `sum_all f - int f` over the periodized configuration.
    pub fluctuation: f64,
    /// `sum_{|x| <= R} (f(x) - 1)`.
    pub inside_deviation: f64,
    /// `int f - sum_{|x| > R} f(x)`, the estimator itself.
    pub estimator: f64,
    /// Exact number of window points.
    pub window_count: usize,
    pub route: EstimatorRoute,
}

/// True when every periodic copy of every point falls beyond the certified
/// reach of the mixture, with total neglected mass below the tail budget.
fn window_route_applies(config: &RenormalizedConfiguration, mix: &ScaleMixture) -> bool {
    let base = mix.base_spec();
    let nf = config.period() as f64;
    let mut neglected = 0.0;
    for &(w, l) in mix.components() {
        if base.hard_radius * l > nf / 2.0 {
            return false;
        }
        // Copies sit at distance >= n/2: bound the periodized mass there.
        let tail = base
            .decay_bounds
            .iter()
            .map(|&(k, a)| {
                let kf = k as f64;
                let ratio = l / nf;
                a * ratio.powf(kf) * (0.5f64.powf(-kf) * 0.0 + 0.5f64.powf(1.0 - kf) / (kf - 1.0)
                    + 0.5f64.powf(-kf))
            })
            .fold(f64::INFINITY, f64::min);
        neglected += 2.0 * nf * w.abs() * tail;
    }
    neglected <= TAIL_BUDGET
}

/// `sum_j f(x_j)` over base points selected by a predicate.
fn window_sum(
    config: &RenormalizedConfiguration,
    mix: &ScaleMixture,
    mut keep: impl FnMut(f64) -> bool,
) -> f64 {
    let mut acc = 0.0;
    for &x in config.points() {
        if keep(x) {
            acc += mix.eval_time(x);
        }
    }
    acc
}

/// `sum_all f - int f` over the full periodized configuration, through the
/// lattice Fourier coefficients:
/// `sum_j sum_{0<|k|<=n/2} (fhat(k/n)/n) e^{2 pi i k x_j / n}`, plus the
/// zero-mode mismatch `(#points - n) fhat(0) / n`, which vanishes exactly
/// for genuine n-point configurations (keeping gigantic scales out of the
/// arithmetic there).
pub fn spectral_fluctuation(config: &RenormalizedConfiguration, mix: &ScaleMixture) -> f64 {
    let n = config.period();
    let nf = n as f64;
    let half = n as i64 / 2;
    let zero_mode =
        (config.points().len() as f64 - nf) * (mix.eval_freq(0.0) / nf);
    let coeffs: Vec<(i64, f64)> = (1..=half)
        .filter_map(|k| {
            let c = mix.eval_freq(k as f64 / nf) / nf;
            (c != 0.0).then_some((k, c))
        })
        .collect();
    if coeffs.is_empty() {
        return zero_mode;
    }
    let k_max = coeffs.last().unwrap().0;
    let mut acc = zero_mode;
    for &x in config.points() {
        let step = Complex64::from_polar(1.0, TAU * x / nf);
        // Walk e^{2 pi i k x / n} up the lattice, reading the needed modes.
        let mut rot = Complex64::new(1.0, 0.0);
        let mut next = 0usize;
        for k in 1..=k_max {
            rot *= step;
            if k % 256 == 0 {
                rot /= rot.norm();
            }
            if coeffs[next].0 == k {
                // Conjugate mode pairs to 2 c_k cos.
                acc += 2.0 * coeffs[next].1 * rot.re;
                next += 1;
                if next == coeffs.len() {
                    break;
                }
            }
        }
    }
    acc
}

/// The count estimator `int f - sum_{periodized, |x| > R} f(x)`.
pub fn window_estimate(
    config: &RenormalizedConfiguration,
    radius: f64,
    mix: &ScaleMixture,
) -> Result<WindowEstimate> {
    Ok(decomposition_terms(config, radius, mix)?.into())
}

impl From<DecompositionTerms> for WindowEstimate {
    fn from(terms: DecompositionTerms) -> Self {
        WindowEstimate {
            value: terms.estimator,
            route: terms.route,
        }
    }
}

/// Route-consistent evaluation of all three telescoping terms.
pub fn decomposition_terms(
    config: &RenormalizedConfiguration,
    radius: f64,
    mix: &ScaleMixture,
) -> Result<DecompositionTerms> {
    let half_period = config.period() as f64 / 2.0;
    if !(radius > 0.0) || radius >= half_period {
        return Err(Error::parameter(format!(
            "window radius must satisfy 0 < R < n/2 = {half_period}, got {radius}"
        )));
    }
    let window_count = config.count_in(-radius, radius);
    let inside_sum = window_sum(config, mix, |x| x.abs() <= radius);
    let inside_deviation = inside_sum - window_count as f64;
    if window_route_applies(config, mix) {
        // All copies certified zero: the periodized sums collapse to the
        // base window.
        let outside_sum = window_sum(config, mix, |x| x.abs() > radius);
        let fluctuation = (inside_sum + outside_sum) - mix.integral();
        Ok(DecompositionTerms {
            fluctuation,
            inside_deviation,
            estimator: mix.integral() - outside_sum,
            window_count,
            route: EstimatorRoute::Window,
        })
    } else {
        let fluctuation = spectral_fluctuation(config, mix);
        Ok(DecompositionTerms {
            fluctuation,
            inside_deviation,
            estimator: inside_sum - fluctuation,
            window_count,
            route: EstimatorRoute::Spectral,
        })
    }
}

/// A finite union of closed intervals.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalSet {
    intervals: Vec<(f64, f64)>,
}

impl IntervalSet {
    pub fn new(intervals: Vec<(f64, f64)>) -> Result<Self> {
        for &(a, b) in &intervals {
            if !(a <= b) || !a.is_finite() || !b.is_finite() {
                return Err(Error::parameter(format!("bad interval [{a}, {b}]")));
            }
        }
        Ok(IntervalSet { intervals })
    }

    pub fn empty() -> Self {
        IntervalSet { intervals: Vec::new() }
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    pub fn contains(&self, x: f64) -> bool {
        self.intervals.iter().any(|&(a, b)| x >= a && x <= b)
    }

    pub fn within(&self, radius: f64) -> bool {
        self.intervals
            .iter()
            .all(|&(a, b)| a >= -radius && b <= radius)
    }

    /// Parse `"a:b,c:d"`.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(Self::empty());
        }
        let intervals = text
            .split(',')
            .map(|piece| {
                let (a, b) = piece
                    .split_once(':')
                    .ok_or_else(|| Error::config(format!("interval `{piece}` is not a:b")))?;
                let a: f64 = a
                    .trim()
                    .parse()
                    .map_err(|e| Error::config(format!("bad interval endpoint: {e}")))?;
                let b: f64 = b
                    .trim()
                    .parse()
                    .map_err(|e| Error::config(format!("bad interval endpoint: {e}")))?;
                Ok((a, b))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(intervals)
    }

    pub fn to_flag_string(&self) -> String {
        self.intervals
            .iter()
            .map(|(a, b)| format!("{a}:{b}"))
            .collect::<Vec<_>>()
            .join(",")
    }
}

/// Count estimate for a set inside the window: the window estimator minus
/// the exact count in `[-R, R] \ B`.
pub fn estimate_set_count(
    config: &RenormalizedConfiguration,
    set: &IntervalSet,
    radius: f64,
    mix: &ScaleMixture,
) -> Result<f64> {
    if !set.within(radius) {
        return Err(Error::parameter(format!(
            "set {} not contained in [-{radius}, {radius}]",
            set.to_flag_string()
        )));
    }
    let window = window_estimate(config, radius, mix)?;
    let complement_count = config
        .points()
        .iter()
        .filter(|&&x| x.abs() <= radius && !set.contains(x))
        .count();
    Ok(window.value - complement_count as f64)
}

/// One replica/depth row of the recovery experiment.
#[derive(Debug, Clone, Copy)]
pub struct CountRecoveryRecord {
    pub replica: u64,
    pub p: usize,
    pub estimate: f64,
    pub true_count: i64,
    pub window_n: usize,
    pub seed: u64,
}

impl CountRecoveryRecord {
    /// Nearest-integer recovery; exact half-integer ties count as failures.
    pub fn exact_after_rounding(&self) -> bool {
        if (self.estimate - self.estimate.trunc()).abs() == 0.5 {
            return false;
        }
        self.estimate.round() as i64 == self.true_count
    }
}

/// Per-depth summary of the recovery experiment.
#[derive(Debug, Clone, Copy)]
pub struct RecoverySummary {
    pub p: usize,
    pub median_abs_error: f64,
    pub exact_fraction: f64,
    /// Empirical second moment of the fluctuation term at this depth.
    pub fluct_second_moment: f64,
    /// Largest telescoping defect
    /// `|fluct - inside_dev + estimator - count|` over the replicas.
    pub max_telescoping_defect: f64,
}

/// Full output of the recovery experiment.
#[derive(Debug)]
pub struct RecoveryReport {
    pub records: Vec<CountRecoveryRecord>,
    pub summaries: Vec<RecoverySummary>,
    pub sequence: TestFunctionSequence,
}

/// Sample `replicas` configurations and, for each depth `p`, recover the
/// count of `set` from the outside estimator. Records are emitted in
/// deterministic (replica, p) order.
pub fn recovery_experiment(
    n: usize,
    beta: BetaParam,
    radius: f64,
    set: &IntervalSet,
    p_max: usize,
    replicas: usize,
    seed: u64,
) -> Result<RecoveryReport> {
    if replicas < 2 {
        return Err(Error::parameter("need at least two replicas"));
    }
    if !(radius > 0.0) || radius >= n as f64 / 2.0 {
        return Err(Error::parameter(format!(
            "window radius must satisfy 0 < R < n/2, got {radius}"
        )));
    }
    if !set.within(radius) {
        return Err(Error::parameter("set must be contained in [-R, R]"));
    }
    let sequence = build_test_sequence(radius, p_max)?;
    let per_replica: Vec<Vec<(CountRecoveryRecord, f64, f64)>> = (0..replicas as u64)
        .into_par_iter()
        .map(|replica| {
            let mut rng = replica_rng(seed, replica);
            let spectrum = sample_cbe(n, beta, &mut rng)?;
            let config = renormalize(&spectrum);
            let true_count = config
                .points()
                .iter()
                .filter(|&&x| set.contains(x))
                .count() as i64;
            sequence
                .mixtures
                .iter()
                .enumerate()
                .map(|(p, mix)| {
                    let terms = decomposition_terms(&config, radius, mix)?;
                    let complement = terms.window_count as i64
                        - config
                            .points()
                            .iter()
                            .filter(|&&x| x.abs() <= radius && set.contains(x))
                            .count() as i64;
                    let estimate = terms.estimator - complement as f64;
                    let defect = (terms.fluctuation - terms.inside_deviation
                        + terms.estimator
                        - terms.window_count as f64)
                        .abs();
                    Ok((
                        CountRecoveryRecord {
                            replica,
                            p,
                            estimate,
                            true_count,
                            window_n: n,
                            seed,
                        },
                        terms.fluctuation,
                        defect,
                    ))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;

    let mut records = Vec::with_capacity(replicas * (p_max + 1));
    let mut summaries = Vec::with_capacity(p_max + 1);
    for p in 0..=p_max {
        let mut abs_errors: Vec<f64> = Vec::with_capacity(replicas);
        let mut exact = 0usize;
        let mut fluct_sq = 0.0;
        let mut max_defect: f64 = 0.0;
        for replica_rows in &per_replica {
            let (record, fluct, defect) = replica_rows[p];
            abs_errors.push((record.estimate - record.true_count as f64).abs());
            if record.exact_after_rounding() {
                exact += 1;
            }
            fluct_sq += fluct * fluct;
            max_defect = max_defect.max(defect);
        }
        abs_errors.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let median = if replicas % 2 == 1 {
            abs_errors[replicas / 2]
        } else {
            0.5 * (abs_errors[replicas / 2 - 1] + abs_errors[replicas / 2])
        };
        summaries.push(RecoverySummary {
            p,
            median_abs_error: median,
            exact_fraction: exact as f64 / replicas as f64,
            fluct_second_moment: fluct_sq / replicas as f64,
            max_telescoping_defect: max_defect,
        });
    }
    for replica_rows in per_replica {
        for (record, _, _) in replica_rows {
            records.push(record);
        }
    }
    Ok(RecoveryReport {
        records,
        summaries,
        sequence,
    })
}
