//! The base frequency profile `b` and its inverse transform.
//!
//! `b(x) = c * exp(-1/(1/4 - x^2))` on (-1/2, 1/2), zero outside, with `c`
//! fixed so that the profile integrates to one. Its inverse transform
//! `F(s) = 2 * int_0^{1/2} b(x) cos(2 pi x s) dx` is the time-domain bump
//! every scale mixture is built from: F(0) = 1, and F decays faster than any
//! power of `s`.
//!
//! Because `F` is band-limited to [-1/2, 1/2] it oscillates slowly (at most
//! half a cycle per unit of `s`), so it interpolates extremely well on
//! unit-width Chebyshev panels. The panel cache below makes pointwise
//! evaluation cheap enough for the periodized sums in the linear-statistic
//! code; certified decay bounds `|F(s)| <= A_k / s^k` (from the total
//! variation of the k-th derivative of `b`) give hard truncation radii.

use std::sync::{OnceLock, RwLock};

use crate::quad::{chebyshev_eval, chebyshev_fit, gl32_composite, gl32_panel};

/// Orders at which derivative decay bounds are precomputed.
const BOUND_ORDERS: [u32; 7] = [2, 4, 6, 8, 12, 16, 20];

/// Chebyshev degree per unit panel of the time-domain transform.
const PANEL_DEGREE: usize = 20;

/// Panels are extended in chunks of this many units.
const PANEL_CHUNK: usize = 32;

/// Pointwise values certified below this level are treated as zero.
const HARD_ZERO_LEVEL: f64 = 1e-14;

/// The fixed base frequency profile with its derived constants and caches.
pub struct BumpSpec {
    /// Normalization `c` with `int b = 1`.
    pub norm_const: f64,
    /// `b(0) = c * e^{-4}`; also the integral of the time-domain bump.
    pub peak: f64,
    /// `int |x| b(x) dx`, the Lipschitz budget of the time-domain bump
    /// (divided by 2 pi).
    pub abs_moment: f64,
    /// `int |x| b(x)^2 dx`: squared weighted seminorm of the base profile.
    pub weighted_l2_sq: f64,
    /// `int b(x)^2 dx` (frequency-side L2; Parseval partner of the time side).
    pub l2_sq: f64,
    /// Certified decay bounds `(k, A_k)` with `|F(s)| <= A_k / |s|^k`.
    pub decay_bounds: Vec<(u32, f64)>,
    /// Radius beyond which `F` is certified below `HARD_ZERO_LEVEL` and the
    /// evaluator returns exactly 0.0.
    pub hard_radius: f64,
    panels: RwLock<Vec<Box<[f64]>>>,
}

impl BumpSpec {
    /// The shared standard profile. All mixtures refer to this instance.
    pub fn standard() -> &'static BumpSpec {
        static INSTANCE: OnceLock<BumpSpec> = OnceLock::new();
        INSTANCE.get_or_init(BumpSpec::build)
    }

    fn build() -> BumpSpec {
        let raw_integral = integrate_edge_refined(&mut |x| raw(x));
        let c = 1.0 / raw_integral;
        let abs_moment = c * integrate_edge_refined(&mut |x| x * raw(x));
        let weighted_l2 = c * c * integrate_edge_refined(&mut |x| x * raw(x) * raw(x));
        let l2 = c * c * integrate_edge_refined(&mut |x| raw(x) * raw(x));

        // Total variation of derivatives: b^{(k)} = b * N_k / D^{2k} with the
        // polynomial recurrence N_{k+1} = N_k' D^2 + 4k x D N_k - 2x N_k.
        let mut decay_bounds = Vec::new();
        let d_poly = vec![0.25, 0.0, -1.0];
        let d_sq = poly_mul(&d_poly, &d_poly);
        let mut n_poly = vec![1.0];
        let two_pi = std::f64::consts::TAU;
        for k in 0..=*BOUND_ORDERS.last().unwrap() {
            if BOUND_ORDERS.contains(&k) {
                let total_variation = c * integrate_edge_refined(&mut |x| {
                    let d = 0.25 - x * x;
                    raw(x) * poly_eval(&n_poly, x).abs() / d.powi(2 * k as i32)
                });
                decay_bounds.push((k, total_variation / two_pi.powi(k as i32)));
            }
            // Advance N_k -> N_{k+1}.
            let term1 = poly_mul(&poly_derivative(&n_poly), &d_sq);
            let term2 = poly_scale(&poly_mul(&poly_mul(&[0.0, 1.0], &d_poly), &n_poly), 4.0 * k as f64);
            let term3 = poly_scale(&poly_mul(&[0.0, 1.0], &n_poly), -2.0);
            n_poly = poly_add(&poly_add(&term1, &term2), &term3);
        }

        let hard_radius = decay_bounds
            .iter()
            .map(|&(k, a)| (a / HARD_ZERO_LEVEL).powf(1.0 / k as f64))
            .fold(f64::INFINITY, f64::min)
            .ceil();

        BumpSpec {
            norm_const: c,
            peak: c * (-4.0f64).exp(),
            abs_moment,
            weighted_l2_sq: weighted_l2,
            l2_sq: l2,
            decay_bounds,
            hard_radius,
            panels: RwLock::new(Vec::new()),
        }
    }

    /// The frequency profile `b(y)`; zero outside (-1/2, 1/2).
    pub fn freq_value(&self, y: f64) -> f64 {
        self.norm_const * raw(y.abs())
    }

    /// Time-domain bump via direct panelled quadrature.
    ///
    /// `panel_scale` multiplies the panel count; 1 is the standard
    /// resolution, 2 the refined cross-check.
    pub fn time_value_quadrature(&self, s: f64, panel_scale: usize) -> f64 {
        let s = s.abs();
        let panels = ((s / 4.0).ceil() as usize + 4) * panel_scale.max(1);
        let c = self.norm_const;
        2.0 * gl32_composite(
            |x| c * raw(x) * (std::f64::consts::TAU * x * s).cos(),
            0.0,
            0.5,
            panels,
        )
    }

    /// Time-domain bump through the Chebyshev panel cache.
    ///
    /// Exactly 0.0 beyond the certified `hard_radius`.
    pub fn time_value(&self, s: f64) -> f64 {
        let s = s.abs();
        if s >= self.hard_radius {
            return 0.0;
        }
        let idx = s as usize;
        {
            let panels = self.panels.read().unwrap();
            if let Some(coeffs) = panels.get(idx) {
                return chebyshev_eval(coeffs, idx as f64, idx as f64 + 1.0, s);
            }
        }
        self.extend_panels(idx);
        let panels = self.panels.read().unwrap();
        let coeffs = &panels[idx];
        chebyshev_eval(coeffs, idx as f64, idx as f64 + 1.0, s)
    }

    fn extend_panels(&self, needed: usize) {
        let mut panels = self.panels.write().unwrap();
        let target = (needed + 1).next_multiple_of(PANEL_CHUNK);
        while panels.len() < target {
            let j = panels.len();
            let coeffs = chebyshev_fit(
                &mut |s| self.time_value_quadrature(s, 1),
                j as f64,
                j as f64 + 1.0,
                PANEL_DEGREE,
            );
            panels.push(coeffs.into_boxed_slice());
        }
    }

    /// Certified pointwise bound `|F(s)| <= bound(s)` for `s > 1`.
    pub fn pointwise_bound(&self, s: f64) -> f64 {
        let s = s.abs();
        if s <= 1.0 {
            return 1.0;
        }
        self.decay_bounds
            .iter()
            .map(|&(k, a)| a / s.powi(k as i32))
            .fold(1.0, f64::min)
    }

    /// Smallest radius with certified `|F| <= eps` beyond it.
    pub fn tail_radius(&self, eps: f64) -> f64 {
        self.decay_bounds
            .iter()
            .map(|&(k, a)| (a / eps).powf(1.0 / k as f64))
            .fold(f64::INFINITY, f64::min)
            .max(1.0)
    }
}

/// Unnormalized profile on the half line; `x >= 1/2` maps to zero.
fn raw(x: f64) -> f64 {
    let d = 0.25 - x * x;
    if d <= 0.0 {
        0.0
    } else {
        (-1.0 / d).exp()
    }
}

/// Integrate an even integrand over [-1/2, 1/2] as 2x its half-line
/// integral, with geometric panel refinement toward the support edge where
/// derivative factors blow up; the integrand must vanish at the edge
/// faster than any pole.
fn integrate_edge_refined(f: &mut impl FnMut(f64) -> f64) -> f64 {
    let mut total = gl32_composite(&mut *f, 0.0, 0.25, 8);
    // Panels [1/2 - 1/4 * 2^-j, 1/2 - 1/4 * 2^-(j+1)] shrink toward 1/2.
    let mut lo = 0.25;
    for j in 1..=60 {
        let hi = 0.5 - 0.25 * 0.5f64.powi(j);
        let part = gl32_panel(f, lo, hi);
        total += part;
        lo = hi;
        if part.abs() < 1e-25 * total.abs() {
            break;
        }
    }
    2.0 * total
}

fn poly_eval(p: &[f64], x: f64) -> f64 {
    p.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

fn poly_derivative(p: &[f64]) -> Vec<f64> {
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(i, &c)| i as f64 * c)
        .collect()
}

fn poly_mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] += ai * bj;
        }
    }
    out
}

fn poly_add(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len().max(b.len())];
    for (i, &ai) in a.iter().enumerate() {
        out[i] += ai;
    }
    for (i, &bi) in b.iter().enumerate() {
        out[i] += bi;
    }
    out
}

fn poly_scale(a: &[f64], s: f64) -> Vec<f64> {
    a.iter().map(|&c| c * s).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn profile_is_normalized() {
        let b = BumpSpec::standard();
        let integral = integrate_edge_refined(&mut |x| b.freq_value(x));
        assert!((integral - 1.0).abs() < 1e-10, "int b = {integral}");
    }

    #[test]
    fn profile_support_and_sign() {
        let b = BumpSpec::standard();
        assert_eq!(b.freq_value(0.5), 0.0);
        assert_eq!(b.freq_value(-0.7), 0.0);
        assert!(b.freq_value(0.49999) >= 0.0);
        assert!(b.freq_value(0.0) > 0.0);
        assert!((b.freq_value(0.0) - b.peak).abs() < 1e-14);
    }

    #[test]
    fn transform_is_one_at_zero() {
        let b = BumpSpec::standard();
        assert!((b.time_value(0.0) - 1.0).abs() < 1e-9);
        assert!((b.time_value_quadrature(0.0, 2) - 1.0).abs() < 1e-11);
    }

    #[test]
    fn cache_matches_direct_quadrature() {
        let b = BumpSpec::standard();
        for &s in &[0.3, 1.7, 5.0, 9.25, 33.8, 120.4] {
            let cached = b.time_value(s);
            let direct = b.time_value_quadrature(s, 2);
            assert!(
                (cached - direct).abs() < 1e-11,
                "s={s}: cached={cached} direct={direct}"
            );
        }
    }

    #[test]
    fn decay_bounds_hold_pointwise() {
        let b = BumpSpec::standard();
        // Quadrature of the oscillatory integral bottoms out near 1e-15;
        // beyond that the certified bound is tighter than what can be
        // measured, so allow that floor.
        for &s in &[5.0, 20.0, 50.0, 80.0] {
            let val = b.time_value_quadrature(s, 2).abs();
            let bound = b.pointwise_bound(s) + 5e-15;
            assert!(val <= bound, "s={s}: |F|={val} bound={bound}");
        }
    }

    #[test]
    fn hard_radius_is_finite_and_enforced() {
        let b = BumpSpec::standard();
        assert!(b.hard_radius.is_finite());
        assert!(b.hard_radius > 10.0);
        assert_eq!(b.time_value(b.hard_radius + 0.5), 0.0);
    }

    #[test]
    fn constants_are_sane() {
        let b = BumpSpec::standard();
        assert!(b.norm_const > 1.0);
        assert!(b.peak > 0.0);
        assert!(b.abs_moment > 0.0 && b.abs_moment < 0.5);
        assert!(b.weighted_l2_sq > 0.0);
        // Weighted L2 below plain L2 times the max weight 1/2.
        assert!(b.weighted_l2_sq < 0.5 * b.l2_sq);
    }
}
