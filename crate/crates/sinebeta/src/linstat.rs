//! Linear statistics on the circle and on the line.
//!
//! For a band-limited time-side function `f`, the n-periodic renormalized
//! configuration satisfies the folding identity: with
//! `ghat(k) = fhat(k/n) / n` for `k != 0` (zero at zero, supported in
//! `|k| <= n/2`),
//!
//! ```text
//! sum_{x in E_n} f(x) - int f  =  sum_j g(e^{2 pi i theta_j}),
//! ```
//!
//! the left side summed over the full periodic extension. The module
//! computes both sides independently: the circle side through power-sum
//! traces, the line side by a direct periodized sum truncated at a
//! certified tail below 1e-8. The frequency-side Riemann functional
//! `(1/n) sum_{0<|k|<=n/2} |k/n| fhat(k/n)^2` upper-models the variance of
//! the line statistic and converges to the squared weighted seminorm.

use num_complex::Complex64;
use rayon::prelude::*;
use std::collections::BTreeMap;
use std::f64::consts::TAU;

use crate::bandlimited::ScaleMixture;
use crate::error::{Error, Result};
use crate::rng::replica_rng;
use crate::sampler::{renormalize, sample_cbe, BetaParam, RenormalizedConfiguration, UnitSpectrum};
use crate::trace_stats::{trace_power, MomentEstimate};

/// Certified ceiling for the neglected periodization tail.
pub const TAIL_BUDGET: f64 = 1e-8;

/// Hard cap on the number of periods summed on either side.
pub const PERIOD_CAP: usize = 1_000_000;

/// A function on the circle given by finitely many Fourier coefficients.
#[derive(Debug, Clone, Default)]
pub struct CircleFourierFunction {
    coeffs: BTreeMap<i64, Complex64>,
}

impl CircleFourierFunction {
    pub fn new(coeffs: BTreeMap<i64, Complex64>) -> Self {
        CircleFourierFunction { coeffs }
    }

    pub fn coeffs(&self) -> &BTreeMap<i64, Complex64> {
        &self.coeffs
    }

    pub fn coeff(&self, k: i64) -> Complex64 {
        self.coeffs
            .get(&k)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    /// Largest |k| carrying a nonzero coefficient.
    pub fn max_mode(&self) -> i64 {
        self.coeffs
            .keys()
            .map(|k| k.abs())
            .max()
            .unwrap_or(0)
    }

    /// Pointwise value `g(e^{2 pi i t}) = sum_k ghat(k) e^{2 pi i k t}`.
    pub fn value_at(&self, t: f64) -> Complex64 {
        self.coeffs
            .iter()
            .map(|(&k, &c)| c * Complex64::from_polar(1.0, TAU * k as f64 * t))
            .sum()
    }
}

/// `sum_{z in spectrum} g(z) = sum_k ghat(k) Tr(M^k)`.
///
/// Requires a vanishing zero mode and support within `[-n/2, n/2]`.
pub fn circle_linear_statistic(
    spectrum: &UnitSpectrum,
    g: &CircleFourierFunction,
) -> Result<Complex64> {
    let half_n = spectrum.n() as f64 / 2.0;
    if g.coeff(0).norm() != 0.0 {
        return Err(Error::parameter(
            "circle statistic requires a vanishing zero mode",
        ));
    }
    for (&k, &c) in g.coeffs() {
        if c.norm() != 0.0 && (k.abs() as f64) > half_n {
            return Err(Error::parameter(format!(
                "coefficient support |k| = {} exceeds n/2 = {half_n}",
                k.abs()
            )));
        }
    }
    Ok(g
        .coeffs()
        .iter()
        .map(|(&k, &c)| c * trace_power(spectrum, k))
        .sum())
}

/// Fold a band-limited mixture to circle coefficients at dimension `n`:
/// `ghat(k) = fhat(k/n)/n` for `k != 0`, zero mode dropped.
pub fn fold_to_circle(mix: &ScaleMixture, n: usize) -> CircleFourierFunction {
    let mut coeffs = BTreeMap::new();
    let half = n as i64 / 2;
    let nf = n as f64;
    for k in 1..=half {
        let v = mix.eval_freq(k as f64 / nf) / nf;
        if v != 0.0 {
            // fhat is real and even.
            coeffs.insert(k, Complex64::new(v, 0.0));
            coeffs.insert(-k, Complex64::new(v, 0.0));
        }
    }
    CircleFourierFunction::new(coeffs)
}

/// The truncation horizon for periodized sums of a mixture at period `n`,
/// with the certified bound on everything neglected beyond it.
///
/// Components evaluate to exactly zero past `hard_radius * L_i`, so the
/// horizon is one period beyond the furthest reach; the certificate bounds
/// the true mass out there through the derivative decay bounds at unit
/// point density.
pub fn periodization_horizon(mix: &ScaleMixture, n: usize) -> Result<(usize, f64)> {
    if mix.is_empty() {
        return Ok((0, 0.0));
    }
    let base = mix.base_spec();
    let nf = n as f64;
    let mut horizon = 0usize;
    let mut neglected = 0.0;
    for &(w, l) in mix.components() {
        let periods = (base.hard_radius * l / nf + 0.5).ceil();
        if periods > PERIOD_CAP as f64 {
            return Err(Error::resource(format!(
                "certified tail needs {periods} periods for scale {l} at period {n} \
                 (cap {PERIOD_CAP})"
            )));
        }
        let m_i = periods as usize;
        horizon = horizon.max(m_i);
        // sum_{m > M} bound((m - 1/2) n / L) <= min_k A_k (L/n)^k *
        // [ (M + 1/2)^{-k} + (M + 1/2)^{-(k-1)} / (k-1) ].
        let tail = base
            .decay_bounds
            .iter()
            .map(|&(k, a)| {
                let kf = k as f64;
                let ratio = l / nf;
                let m_half = m_i as f64 + 0.5;
                a * ratio.powf(kf) * (m_half.powf(-kf) + m_half.powf(-(kf - 1.0)) / (kf - 1.0))
            })
            .fold(f64::INFINITY, f64::min);
        neglected += 2.0 * nf * w.abs() * tail;
    }
    if !(neglected <= TAIL_BUDGET) {
        return Err(Error::resource(format!(
            "certified periodization tail {neglected:.3e} exceeds budget {TAIL_BUDGET:.0e}"
        )));
    }
    Ok((horizon, neglected))
}

/// `sum_{x in periodized configuration} f(x) - int f`, by direct summation
/// over the certified horizon. Deterministic summation order.
pub fn line_linear_statistic(
    config: &RenormalizedConfiguration,
    mix: &ScaleMixture,
) -> Result<f64> {
    if mix.is_empty() {
        return Ok(0.0);
    }
    let (horizon, _) = periodization_horizon(mix, config.period())?;
    let nf = config.period() as f64;
    let mut acc = 0.0;
    let mut carry = 0.0;
    for m in -(horizon as i64)..=(horizon as i64) {
        let shift = m as f64 * nf;
        for &x in config.points() {
            let v = mix.eval_time(x + shift);
            // Kahan step.
            let y = v - carry;
            let t = acc + y;
            carry = (t - acc) - y;
            acc = t;
        }
    }
    Ok(acc - mix.integral())
}

/// The frequency-side Riemann functional at lattice spacing `1/n`.
#[derive(Debug, Clone, Copy)]
pub struct RiemannFunctional {
    pub n: usize,
    pub value: f64,
}

/// `(1/n) sum_{0 < |k| <= n/2} |k/n| fhat(k/n)^2`.
pub fn riemann_functional(mix: &ScaleMixture, n: usize) -> RiemannFunctional {
    let nf = n as f64;
    let half = n as i64 / 2;
    let mut value = 0.0;
    for k in 1..=half {
        let x = k as f64 / nf;
        let v = mix.eval_freq(x);
        value += 2.0 * x * v * v;
    }
    RiemannFunctional {
        n,
        value: value / nf,
    }
}

/// Monte Carlo `E |sum f(x) - int f|^2` over the dimension-n ensemble.
pub fn mc_line_variance(
    n: usize,
    beta: BetaParam,
    mix: &ScaleMixture,
    replicas: usize,
    seed: u64,
) -> Result<MomentEstimate> {
    if replicas < 100 {
        return Err(Error::parameter(format!(
            "need at least 100 replicas, got {replicas}"
        )));
    }
    let values: Vec<f64> = (0..replicas as u64)
        .into_par_iter()
        .map(|r| {
            let mut rng = replica_rng(seed, r);
            let spectrum = sample_cbe(n, beta, &mut rng)?;
            let config = renormalize(&spectrum);
            let stat = line_linear_statistic(&config, mix)?;
            Ok(stat * stat)
        })
        .collect::<Result<_>>()?;
    MomentEstimate::from_values(&values, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trace_stats::cbe_quadrature_oracle_real;

    fn small_mixture() -> ScaleMixture {
        ScaleMixture::base().dilate_average(3.0).unwrap()
    }

    #[test]
    fn circle_statistic_single_mode_is_a_trace() {
        let spec = UnitSpectrum::from_angles(vec![0.4, 2.0, 5.1]).unwrap();
        let mut coeffs = BTreeMap::new();
        coeffs.insert(1, Complex64::new(1.0, 0.0));
        let g = CircleFourierFunction::new(coeffs);
        let stat = circle_linear_statistic(&spec, &g).unwrap();
        assert!((stat - trace_power(&spec, 1)).norm() < 1e-14);

        let zero = CircleFourierFunction::default();
        assert_eq!(
            circle_linear_statistic(&spec, &zero).unwrap(),
            Complex64::new(0.0, 0.0)
        );
    }

    #[test]
    fn circle_statistic_validates_support() {
        let spec = UnitSpectrum::from_angles(vec![0.4, 2.0]).unwrap();
        let mut with_zero = BTreeMap::new();
        with_zero.insert(0, Complex64::new(1.0, 0.0));
        assert!(circle_linear_statistic(&spec, &CircleFourierFunction::new(with_zero)).is_err());

        let mut wide = BTreeMap::new();
        wide.insert(2, Complex64::new(1.0, 0.0));
        assert!(circle_linear_statistic(&spec, &CircleFourierFunction::new(wide)).is_err());
    }

    #[test]
    fn folding_drops_zero_mode_and_far_support() {
        let g = fold_to_circle(&small_mixture(), 16);
        assert_eq!(g.coeff(0).norm(), 0.0);
        assert!(g.max_mode() <= 8);
        let expect = small_mixture().eval_freq(3.0 / 16.0) / 16.0;
        assert!((g.coeff(3).re - expect).abs() < 1e-15);
        assert!((g.coeff(-3).re - expect).abs() < 1e-15);
    }

    #[test]
    fn folded_function_matches_truncated_periodization() {
        // g(e^{2 pi i t}) = sum_m f(n (t + m)) - (1/n) int f, checked at the
        // certified truncation.
        let mix = small_mixture();
        let n = 16usize;
        let g = fold_to_circle(&mix, n);
        let (horizon, _) = periodization_horizon(&mix, n).unwrap();
        for &t in &[0.07, 0.31, 0.62, 0.93] {
            let mut direct = 0.0;
            for m in -(horizon as i64 + 1)..=(horizon as i64 + 1) {
                direct += mix.eval_time(n as f64 * (t + m as f64));
            }
            direct -= mix.integral() / n as f64;
            let folded = g.value_at(t);
            assert!(
                (folded.re - direct).abs() < 1e-6 && folded.im.abs() < 1e-10,
                "t={t}: folded {folded} vs direct {direct}"
            );
        }
    }

    #[test]
    fn line_statistic_matches_circle_statistic_per_sample() {
        let beta = BetaParam::new(2.0).unwrap();
        let mix = small_mixture();
        for r in 0..5 {
            let spectrum = sample_cbe(64, beta, &mut replica_rng(31, r)).unwrap();
            let config = renormalize(&spectrum);
            let line = line_linear_statistic(&config, &mix).unwrap();
            let circle =
                circle_linear_statistic(&spectrum, &fold_to_circle(&mix, 64)).unwrap();
            assert!(
                (line - circle.re).abs() < 1e-6 && circle.im.abs() < 1e-8,
                "replica {r}: line {line} vs circle {circle}"
            );
        }
    }

    #[test]
    fn line_statistic_empty_mixture_and_determinism() {
        let beta = BetaParam::new(1.0).unwrap();
        let spectrum = sample_cbe(32, beta, &mut replica_rng(77, 0)).unwrap();
        let config = renormalize(&spectrum);
        assert_eq!(
            line_linear_statistic(&config, &ScaleMixture::empty()).unwrap(),
            0.0
        );
        let a = line_linear_statistic(&config, &small_mixture()).unwrap();
        let b = line_linear_statistic(&config, &small_mixture()).unwrap();
        assert_eq!(a.to_bits(), b.to_bits());
    }

    #[test]
    fn riemann_functional_shrinks_toward_the_norm() {
        let mix = ScaleMixture::base();
        let target = mix.h_half_norm_sq();
        assert_eq!(riemann_functional(&ScaleMixture::empty(), 64).value, 0.0);
        let mut prev_gap = f64::INFINITY;
        for n in [64usize, 256, 1024, 4096] {
            let value = riemann_functional(&mix, n).value;
            let gap = (value - target).abs() / target;
            assert!(gap < prev_gap, "n={n}: gap {gap} prev {prev_gap}");
            prev_gap = gap;
        }
        assert!(prev_gap < 0.01, "relative gap at n=4096 is {prev_gap}");
    }

    #[test]
    fn band_limited_sampling_is_exact_at_dimension_two() {
        // At n = 2 every nonzero lattice frequency k/2 falls outside the
        // open support, so the line statistic vanishes identically.
        let beta = BetaParam::new(2.0).unwrap();
        let mix = ScaleMixture::base();
        for r in 0..3 {
            let spectrum = sample_cbe(2, beta, &mut replica_rng(5, r)).unwrap();
            let config = renormalize(&spectrum);
            let stat = line_linear_statistic(&config, &mix).unwrap();
            assert!(stat.abs() < 1e-8, "stat {stat}");
        }
    }

    #[test]
    fn mc_line_variance_matches_small_n_quadrature_oracle() {
        let beta = BetaParam::new(2.0).unwrap();
        let mix = ScaleMixture::base();
        let n = 3usize;
        let g = fold_to_circle(&mix, n);
        let c1 = g.coeff(1);
        let oracle = cbe_quadrature_oracle_real(n, beta, None, move |angles| {
            let t1: Complex64 = angles
                .iter()
                .map(|&a| Complex64::from_polar(1.0, a))
                .sum();
            (c1 * t1 + (c1 * t1).conj()).norm_sqr() / 4.0 * 4.0
        })
        .unwrap();
        // |ghat(1) Tr + conj|^2 = |2 Re(ghat(1) Tr)|^2.
        let mc = mc_line_variance(n, beta, &mix, 20_000, 404).unwrap();
        assert!(
            mc.distance_in_se(oracle) <= 3.0,
            "mc {} vs oracle {oracle} (se {})",
            mc.value,
            mc.std_error
        );
    }

    #[test]
    fn horizon_certificate_rejects_oversized_scales() {
        // A scale requiring more than the period cap must be refused.
        let mix = ScaleMixture::new(vec![(1.0, 1.0e9)]).unwrap();
        assert!(matches!(
            periodization_horizon(&mix, 16),
            Err(Error::Resource(_))
        ));
    }
}
