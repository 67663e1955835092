//! Five-diagonal unitary matrix built from recursion coefficients.
//!
//! `C = L M` with `L = Xi_0 (+) Xi_2 (+) ...`, `M = [1] (+) Xi_1 (+) Xi_3 (+) ...`,
//! where `Xi_k` is the 2x2 block `[[conj(alpha_k), rho_k], [rho_k, -alpha_k]]`,
//! `rho_k = sqrt(1 - |alpha_k|^2)`, and the final (unimodular) coefficient
//! contributes the trailing 1x1 block `[conj(alpha_{n-1})]` to whichever
//! factor its parity selects. Eigenvalues of `C` are the spectrum the
//! recursion coefficients encode, which makes banded powers of `C` an
//! independent oracle for power-sum traces.
//!
//! Storage is row-major banded; multiplying banded matrices adds bandwidths,
//! so `C^k` stays within `4k + 1` diagonals at `O(n k^2)` total cost.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::sampler::VerblunskyCoefficients;

/// A complex banded matrix (named for its role here: the unitary CMV
/// operator and its powers).
#[derive(Debug, Clone)]
pub struct BandedUnitary {
    n: usize,
    lower: usize,
    upper: usize,
    data: Vec<Complex64>,
}

impl BandedUnitary {
    fn zeros(n: usize, lower: usize, upper: usize) -> Self {
        BandedUnitary {
            n,
            lower,
            upper,
            data: vec![Complex64::new(0.0, 0.0); n * (lower + upper + 1)],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of stored diagonals.
    pub fn band_width(&self) -> usize {
        self.lower + self.upper + 1
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        if j + self.lower < i || j > i + self.upper {
            Complex64::new(0.0, 0.0)
        } else {
            self.data[i * self.band_width() + (j + self.lower - i)]
        }
    }

    #[inline]
    fn set(&mut self, i: usize, j: usize, value: Complex64) {
        let w = self.band_width();
        self.data[i * w + (j + self.lower - i)] = value;
    }

    /// The five-diagonal operator for a coefficient sequence.
    pub fn from_verblunsky(coeffs: &VerblunskyCoefficients) -> Self {
        let n = coeffs.n();
        let alphas = coeffs.alphas();
        let even = Self::block_factor(alphas, 0);
        if n == 1 {
            return even;
        }
        let odd = Self::block_factor(alphas, 1);
        even.mul(&odd)
    }

    /// Direct-sum factor with 2x2 blocks at coefficient indices of the given
    /// parity; rows not covered by a block carry an identity entry, and the
    /// final unimodular coefficient lands as a 1x1 block when its parity
    /// matches.
    fn block_factor(alphas: &[Complex64], parity: usize) -> Self {
        let n = alphas.len();
        let mut mat = Self::zeros(n, 1, 1);
        if parity == 1 {
            mat.set(0, 0, Complex64::new(1.0, 0.0));
        }
        let mut k = parity;
        while k + 1 < n {
            let alpha = alphas[k];
            let rho = (1.0 - alpha.norm_sqr()).max(0.0).sqrt();
            mat.set(k, k, alpha.conj());
            mat.set(k, k + 1, Complex64::new(rho, 0.0));
            mat.set(k + 1, k, Complex64::new(rho, 0.0));
            mat.set(k + 1, k + 1, -alpha);
            k += 2;
        }
        if k == n - 1 {
            mat.set(n - 1, n - 1, alphas[n - 1].conj());
        }
        mat
    }

    /// Banded product; bandwidths add.
    pub fn mul(&self, other: &BandedUnitary) -> BandedUnitary {
        let n = self.n;
        let lower = (self.lower + other.lower).min(n - 1);
        let upper = (self.upper + other.upper).min(n - 1);
        let mut out = Self::zeros(n, lower, upper);
        for i in 0..n {
            let j_lo = i.saturating_sub(lower);
            let j_hi = (i + upper).min(n - 1);
            for j in j_lo..=j_hi {
                let k_lo = i.saturating_sub(self.lower).max(j.saturating_sub(other.upper));
                let k_hi = (i + self.upper).min(j + other.lower).min(n - 1);
                let mut acc = Complex64::new(0.0, 0.0);
                let mut k = k_lo;
                while k <= k_hi {
                    acc += self.get(i, k) * other.get(k, j);
                    k += 1;
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> BandedUnitary {
        let mut out = Self::zeros(self.n, self.upper, self.lower);
        for i in 0..self.n {
            let j_lo = i.saturating_sub(self.lower);
            let j_hi = (i + self.upper).min(self.n - 1);
            for j in j_lo..=j_hi {
                out.set(j, i, self.get(i, j).conj());
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    /// `max_{i,j} |(C C^dagger - I)_{ij}|`, the on-demand unitarity check.
    pub fn unitarity_defect(&self) -> f64 {
        let prod = self.mul(&self.adjoint());
        let mut defect: f64 = 0.0;
        for i in 0..self.n {
            for j in i.saturating_sub(prod.lower)..=(i + prod.upper).min(self.n - 1) {
                let expect = if i == j { 1.0 } else { 0.0 };
                defect = defect.max((prod.get(i, j) - expect).norm());
            }
        }
        defect
    }
}

/// Trace of the k-th matrix power by repeated banded multiplication.
pub fn trace_power_matrix(matrix: &BandedUnitary, k: usize) -> Result<Complex64> {
    if k == 0 || k > matrix.n() {
        return Err(Error::parameter(format!(
            "matrix power oracle needs 1 <= k <= n, got k = {k}, n = {}",
            matrix.n()
        )));
    }
    let mut power = matrix.clone();
    for _ in 1..k {
        power = power.mul(matrix);
    }
    Ok(power.trace())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampler::{sample_verblunsky, BetaParam};
    use crate::rng::replica_rng;

    #[test]
    fn dimension_one_matrix_is_the_conjugate_coefficient() {
        let phi = 0.77;
        let coeffs = VerblunskyCoefficients::new(vec![Complex64::from_polar(1.0, phi)]).unwrap();
        let c = BandedUnitary::from_verblunsky(&coeffs);
        let t = trace_power_matrix(&c, 1).unwrap();
        assert!((t - Complex64::from_polar(1.0, -phi)).norm() < 1e-15);
    }

    #[test]
    fn operator_is_unitary() {
        let beta = BetaParam::new(2.0).unwrap();
        for (r, n) in [(0u64, 2usize), (1, 7), (2, 16), (3, 64)] {
            let coeffs = sample_verblunsky(n, beta, &mut replica_rng(14, r)).unwrap();
            let c = BandedUnitary::from_verblunsky(&coeffs);
            assert!(c.band_width() <= 5);
            let defect = c.unitarity_defect();
            assert!(defect < 1e-10, "n={n}: defect {defect}");
            // Tr(C C^dagger) = n.
            let t = c.mul(&c.adjoint()).trace();
            assert!((t.re - n as f64).abs() < 1e-8 && t.im.abs() < 1e-12);
        }
    }

    #[test]
    fn power_band_growth_and_bounds() {
        let beta = BetaParam::new(1.0).unwrap();
        let coeffs = sample_verblunsky(12, beta, &mut replica_rng(15, 0)).unwrap();
        let c = BandedUnitary::from_verblunsky(&coeffs);
        assert!(trace_power_matrix(&c, 0).is_err());
        assert!(trace_power_matrix(&c, 13).is_err());
        assert!(trace_power_matrix(&c, 12).is_ok());
    }
}
