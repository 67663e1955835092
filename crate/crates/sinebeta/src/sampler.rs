//! Circular beta ensemble sampling through random recursion coefficients.
//!
//! Dimension-n spectra are drawn by the Killip–Nenciu recipe: independent
//! coefficients `alpha_k ~ Theta_{beta (n-k-1) + 1}`, where `Theta_nu` is the
//! rotation-invariant law on the closed unit disk with `|z|^2 ~ Beta(1, (nu-1)/2)`
//! (for `nu = 1`, the uniform law on the circle itself). The eigenangles of
//! the associated unitary matrix then follow the density proportional to
//! `prod_{j<k} |e^{i theta_j} - e^{i theta_k}|^beta`.
//!
//! Angle extraction goes through the Prüfer-phase solver in [`crate::prufer`];
//! the five-diagonal matrix route in [`crate::cmv`] serves as an independent
//! oracle at small dimension.

use num_complex::Complex64;
use rand::Rng;
use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::prufer::{self, SolveDiagnostics};

/// The ensemble parameter; strictly positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaParam(f64);

impl BetaParam {
    pub fn new(beta: f64) -> Result<Self> {
        if beta > 0.0 && beta.is_finite() {
            Ok(BetaParam(beta))
        } else {
            Err(Error::parameter(format!(
                "ensemble parameter must satisfy beta > 0, got {beta}"
            )))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Random recursion coefficients `alpha_0 .. alpha_{n-1}`: all strictly
/// inside the unit disk except the final one, which sits on the circle
/// (within 1e-12).
#[derive(Debug, Clone)]
pub struct VerblunskyCoefficients {
    alphas: Vec<Complex64>,
}

impl VerblunskyCoefficients {
    pub fn new(alphas: Vec<Complex64>) -> Result<Self> {
        if alphas.is_empty() {
            return Err(Error::parameter("coefficient sequence must be non-empty"));
        }
        let n = alphas.len();
        for (k, a) in alphas[..n - 1].iter().enumerate() {
            if !(a.norm() < 1.0) {
                return Err(Error::parameter(format!(
                    "|alpha_{k}| = {} must be < 1",
                    a.norm()
                )));
            }
        }
        if (alphas[n - 1].norm() - 1.0).abs() > 1e-12 {
            return Err(Error::parameter(format!(
                "|alpha_{}| = {} must be 1",
                n - 1,
                alphas[n - 1].norm()
            )));
        }
        Ok(VerblunskyCoefficients { alphas })
    }

    pub fn n(&self) -> usize {
        self.alphas.len()
    }

    pub fn alphas(&self) -> &[Complex64] {
        &self.alphas
    }
}

/// `n` eigenangles on `[0, 2 pi)`, sorted ascending. Ties have probability
/// zero; near-degenerate solves are surfaced through [`SolveDiagnostics`].
#[derive(Debug, Clone)]
pub struct UnitSpectrum {
    angles: Vec<f64>,
}

impl UnitSpectrum {
    pub fn from_angles(mut angles: Vec<f64>) -> Result<Self> {
        if angles.is_empty() {
            return Err(Error::parameter("spectrum must be non-empty"));
        }
        for &a in &angles {
            if !(0.0..TAU).contains(&a) {
                return Err(Error::parameter(format!("angle {a} outside [0, 2 pi)")));
            }
        }
        angles.sort_by(|a, b| a.partial_cmp(b).unwrap());
        Ok(UnitSpectrum { angles })
    }

    pub fn n(&self) -> usize {
        self.angles.len()
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    /// The spectrum as points on the unit circle.
    pub fn unit_values(&self) -> impl Iterator<Item = Complex64> + '_ {
        self.angles.iter().map(|&t| Complex64::from_polar(1.0, t))
    }
}

/// Eigenangles rescaled by `n / 2 pi` and reduced to the fundamental window
/// `[-n/2, n/2)`; the implied configuration is the n-periodic extension.
#[derive(Debug, Clone)]
pub struct RenormalizedConfiguration {
    points: Vec<f64>,
    period: usize,
}

impl RenormalizedConfiguration {
    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn period(&self) -> usize {
        self.period
    }

    /// Number of base-window points in the closed interval `[a, b]`.
    pub fn count_in(&self, a: f64, b: f64) -> usize {
        self.points.iter().filter(|&&x| x >= a && x <= b).count()
    }

    /// Build directly from window points (used by tests with hand-made
    /// configurations).
    pub fn from_points(mut points: Vec<f64>, period: usize) -> Result<Self> {
        let half = period as f64 / 2.0;
        for &x in &points {
            if !(-half..half).contains(&x) {
                return Err(Error::parameter(format!(
                    "point {x} outside the fundamental window [-{half}, {half})"
                )));
            }
        }
        points.sort_by(|a, b| a.partial_cmp(b).unwrap());
        Ok(RenormalizedConfiguration { points, period })
    }
}

/// The `Theta_nu` parameter used for coefficient `k` at dimension `n`.
pub fn theta_parameter(n: usize, beta: BetaParam, k: usize) -> f64 {
    beta.value() * (n - 1 - k) as f64 + 1.0
}

/// One draw from `Theta_nu`: uniform argument, `|z|^2 ~ Beta(1, (nu-1)/2)`
/// by inverse transform. `nu = 1` degenerates to the uniform circle law.
pub fn sample_theta(nu: f64, rng: &mut impl Rng) -> Result<Complex64> {
    if !(nu >= 1.0) {
        return Err(Error::parameter(format!("nu must be >= 1, got {nu}")));
    }
    // Radius first, then angle: the draw order is part of the
    // reproducibility contract.
    if nu == 1.0 {
        let _ = rng.gen::<f64>();
        let phi = TAU * rng.gen::<f64>();
        return Ok(Complex64::from_polar(1.0, phi));
    }
    let m = 0.5 * (nu - 1.0);
    let u: f64 = rng.gen();
    let mod_sq = 1.0 - (1.0 - u).powf(1.0 / m);
    let phi = TAU * rng.gen::<f64>();
    Ok(Complex64::from_polar(mod_sq.sqrt(), phi))
}

/// Independent coefficients `alpha_k ~ Theta_{beta (n-k-1) + 1}`; the last
/// one (`nu = 1`) lands on the circle.
pub fn sample_verblunsky(
    n: usize,
    beta: BetaParam,
    rng: &mut impl Rng,
) -> Result<VerblunskyCoefficients> {
    if n == 0 {
        return Err(Error::parameter("dimension must be >= 1"));
    }
    let mut alphas = Vec::with_capacity(n);
    for k in 0..n {
        alphas.push(sample_theta(theta_parameter(n, beta, k), rng)?);
    }
    VerblunskyCoefficients::new(alphas)
}

/// All eigenangles of the coefficient sequence, with solver diagnostics.
pub fn eigenangles_with_diagnostics(
    coeffs: &VerblunskyCoefficients,
) -> Result<(UnitSpectrum, SolveDiagnostics)> {
    let (angles, diag) = prufer::paraorthogonal_eigenangles(coeffs.alphas())?;
    if angles.len() != coeffs.n() {
        return Err(Error::consistency(format!(
            "located {} roots for dimension {}",
            angles.len(),
            coeffs.n()
        )));
    }
    Ok((UnitSpectrum::from_angles(angles)?, diag))
}

/// All eigenangles of the coefficient sequence.
pub fn eigenangles(coeffs: &VerblunskyCoefficients) -> Result<UnitSpectrum> {
    eigenangles_with_diagnostics(coeffs).map(|(s, _)| s)
}

/// One spectrum of the dimension-n ensemble.
pub fn sample_cbe(n: usize, beta: BetaParam, rng: &mut impl Rng) -> Result<UnitSpectrum> {
    eigenangles(&sample_verblunsky(n, beta, rng)?)
}

/// Map each angle to `n theta / 2 pi`, reduced to `[-n/2, n/2)`.
pub fn renormalize(spectrum: &UnitSpectrum) -> RenormalizedConfiguration {
    let n = spectrum.n();
    let mut points: Vec<f64> = spectrum
        .angles()
        .iter()
        .map(|&theta| reduce_to_window(n as f64 * theta / TAU, n))
        .collect();
    points.sort_by(|a, b| a.partial_cmp(b).unwrap());
    RenormalizedConfiguration { points, period: n }
}

/// Window reduction for a rescaled angle in `[0, n)`.
fn reduce_to_window(x: f64, n: usize) -> f64 {
    let half = n as f64 / 2.0;
    if x >= half {
        x - n as f64
    } else {
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::replica_rng;
    use crate::quad::gl32_composite;

    #[test]
    fn theta_nu_one_is_on_the_circle() {
        let mut rng = replica_rng(1, 0);
        for _ in 0..100 {
            let z = sample_theta(1.0, &mut rng).unwrap();
            assert!((z.norm() - 1.0).abs() <= f64::EPSILON);
        }
    }

    #[test]
    fn theta_nu_below_one_rejected() {
        let mut rng = replica_rng(1, 0);
        assert!(sample_theta(0.5, &mut rng).is_err());
    }

    #[test]
    fn theta_second_moment_matches_density_quadrature() {
        // E|z|^2 against the radial density m (1 - s)^{m - 1} on s in [0, 1].
        for (nu, samples, seed) in [(3.0, 200_000u64, 11u64), (5.0, 1_000_000, 12)] {
            let m = 0.5 * (nu - 1.0);
            let quadrature =
                gl32_composite(|s| s * m * (1.0 - s).powf(m - 1.0), 0.0, 1.0, 64);
            let closed_form = 2.0 / (nu + 1.0);
            assert!(
                (quadrature - closed_form).abs() < 1e-6,
                "nu={nu}: quadrature {quadrature} vs closed form {closed_form}"
            );

            let mut rng = replica_rng(seed, 0);
            let mut sum = 0.0;
            let mut sum_sq = 0.0;
            for _ in 0..samples {
                let v = sample_theta(nu, &mut rng).unwrap().norm_sqr();
                sum += v;
                sum_sq += v * v;
            }
            let mean = sum / samples as f64;
            let var = (sum_sq / samples as f64 - mean * mean).max(0.0);
            let se = (var / samples as f64).sqrt();
            assert!(
                (mean - quadrature).abs() <= 3.0 * se,
                "nu={nu}: mean {mean} vs {quadrature} (se {se})"
            );
        }
    }

    #[test]
    fn nu_ladder_matches_dimension() {
        let beta = BetaParam::new(2.0).unwrap();
        let nus: Vec<f64> = (0..3).map(|k| theta_parameter(3, beta, k)). collect();
        assert_eq!(nus, vec![5.0, 3.0, 1.0]);
    }

    #[test]
    fn single_coefficient_is_unimodular() {
        let mut rng = replica_rng(3, 0);
        for beta in [0.5, 1.0, 2.0, 4.0] {
            let c = sample_verblunsky(1, BetaParam::new(beta).unwrap(), &mut rng).unwrap();
            assert!((c.alphas()[0].norm() - 1.0).abs() <= f64::EPSILON);
        }
    }

    #[test]
    fn first_coefficient_moment_at_dimension_two() {
        // n=2, beta=4 puts nu=5 on the first coefficient: E|alpha_0|^2 = 1/3.
        let beta = BetaParam::new(4.0).unwrap();
        assert_eq!(theta_parameter(2, beta, 0), 5.0);
        let mut rng = replica_rng(21, 0);
        let samples = 200_000;
        let mut sum = 0.0;
        let mut sum_sq = 0.0;
        for _ in 0..samples {
            let v = sample_verblunsky(2, beta, &mut rng).unwrap().alphas()[0].norm_sqr();
            sum += v;
            sum_sq += v * v;
        }
        let mean = sum / samples as f64;
        let se = ((sum_sq / samples as f64 - mean * mean) / samples as f64).sqrt();
        assert!((mean - 1.0 / 3.0).abs() <= 3.0 * se, "mean {mean} se {se}");
    }

    #[test]
    fn dimension_one_angle_is_uniform() {
        // Kolmogorov-Smirnov distance of theta/2pi against uniform.
        let beta = BetaParam::new(2.7).unwrap();
        let samples = 100_000;
        let mut values: Vec<f64> = (0..samples)
            .map(|r| {
                let mut rng = replica_rng(5, r);
                sample_cbe(1, beta, &mut rng).unwrap().angles()[0] / TAU
            })
            .collect();
        values.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut ks: f64 = 0.0;
        for (i, &v) in values.iter().enumerate() {
            let empirical_hi = (i + 1) as f64 / samples as f64;
            let empirical_lo = i as f64 / samples as f64;
            ks = ks.max((empirical_hi - v).abs()).max((v - empirical_lo).abs());
        }
        assert!(ks < 0.01, "KS distance {ks}");
    }

    #[test]
    fn spectra_are_reproducible_and_sorted() {
        let beta = BetaParam::new(1.0).unwrap();
        let s1 = sample_cbe(32, beta, &mut replica_rng(9, 4)).unwrap();
        let s2 = sample_cbe(32, beta, &mut replica_rng(9, 4)).unwrap();
        assert_eq!(s1.angles(), s2.angles());
        for pair in s1.angles().windows(2) {
            assert!(pair[1] > pair[0]);
        }
        assert_eq!(s1.n(), 32);
    }

    #[test]
    fn rotation_invariance_of_power_sums() {
        // E[sum e^{i k theta_j}] vanishes for k >= 1.
        let beta = BetaParam::new(2.0).unwrap();
        let replicas = 4000;
        for k in [1i64, 2, 3] {
            let mut acc = Complex64::new(0.0, 0.0);
            let mut acc_sq = 0.0;
            for r in 0..replicas {
                let spec = sample_cbe(6, beta, &mut replica_rng(40, r)).unwrap();
                let t: Complex64 = spec
                    .unit_values()
                    .map(|z| z.powi(k as i32))
                    .sum();
                acc += t;
                acc_sq += t.norm_sqr();
            }
            let mean = acc / replicas as f64;
            let se = (acc_sq / replicas as f64 / replicas as f64).sqrt();
            assert!(
                mean.norm() <= 3.0 * se,
                "k={k}: |mean| {} vs se {se}",
                mean.norm()
            );
        }
    }

    #[test]
    fn renormalize_window_examples() {
        // theta = {0, pi/2, pi, 3pi/2} at n=4 lands on {-2, -1, 0, 1}.
        let spec = UnitSpectrum::from_angles(vec![
            0.0,
            std::f64::consts::FRAC_PI_2,
            std::f64::consts::PI,
            3.0 * std::f64::consts::FRAC_PI_2,
        ])
        .unwrap();
        let config = renormalize(&spec);
        assert_eq!(config.points(), &[-2.0, -1.0, 0.0, 1.0]);
        assert_eq!(config.period(), 4);

        // Window reduction at the boundary: x = n/2 maps to -n/2.
        assert_eq!(reduce_to_window(1.0, 2), -1.0);
        assert_eq!(reduce_to_window(0.9999, 2), 0.9999);
    }

    #[test]
    fn renormalize_postconditions_hold_on_samples() {
        let beta = BetaParam::new(4.0).unwrap();
        for r in 0..8 {
            let spec = sample_cbe(17, beta, &mut replica_rng(77, r)).unwrap();
            let config = renormalize(&spec);
            assert_eq!(config.points().len(), 17);
            for &x in config.points() {
                assert!((-8.5..8.5).contains(&x));
            }
        }
    }
}
