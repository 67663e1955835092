//! Eigenangle extraction by bisection on the monotone Prüfer phase.
//!
//! With Szegő recursion data `phi_{k+1} = z phi_k - conj(alpha_k) phi*_k`,
//! `phi*_{k+1} = phi*_k - alpha_k z phi_k`, the paraorthogonal polynomial
//! `Phi_n(z) = z phi_{n-1}(z) - conj(alpha_{n-1}) phi*_{n-1}(z)` (with
//! `|alpha_{n-1}| = 1`) has its n zeros on the unit circle. On the circle
//! the ratio `w(theta) = e^{i theta} phi_{n-1} / phi*_{n-1}` is unimodular
//! and satisfies the Möbius recursion
//!
//! ```text
//! w_0 = e^{i theta},     w_{k+1} = e^{i theta} (w_k - conj(alpha_k)) / (1 - alpha_k w_k),
//! ```
//!
//! whose phase lift obeys `psi_{k+1} = theta + psi_k - 2 arg(1 - alpha_k e^{i psi_k})`.
//! Since `|alpha_k| < 1`, the argument `1 - alpha_k e^{i psi}` stays in the
//! right half plane, so the principal branch is the continuous one: the lift
//! is globally well defined, smooth, strictly increasing in `theta`
//! (`psi' >= 1`), and gains exactly `2 pi n` per revolution. Zeros of `Phi_n`
//! are the solutions of `psi(theta) = -arg(alpha_{n-1}) mod 2 pi`, one per
//! branch, located by safeguarded Newton iteration inside scan brackets.
//!
//! The inner loop tracks `w` multiplicatively (no trig) together with the
//! integer winding of the lift; a cheap polynomial `atan2` with certified
//! error far below `pi/4` resolves each step's branch crossing, and a single
//! exact `atan2` at the end recovers the lift to full precision. The
//! derivative comes along for free: `psi'_{k+1} = 1 + psi'_k rho_k^2 / |u_k|^2`
//! with `rho_k^2 = 1 - |alpha_k|^2`.

use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, TAU};

use crate::error::{Error, Result};

/// Phase residual below which a root is accepted.
pub const PHASE_TOL: f64 = 1e-11;

/// Bracket width below which bisection gives up and takes the midpoint.
pub const BRACKET_FLOOR: f64 = 1e-13;

/// Counters describing one spectrum solve.
#[derive(Debug, Default, Clone, Copy)]
pub struct SolveDiagnostics {
    /// Brackets that collapsed to [`BRACKET_FLOOR`] before the phase
    /// residual was met (near-degenerate angle pairs).
    pub collapsed_brackets: usize,
    /// Largest accepted phase residual.
    pub max_phase_residual: f64,
}

/// The monotone phase lift of `z phi_{n-1} / phi*_{n-1}` on the circle.
pub struct PruferPhase<'a> {
    inner: &'a [Complex64],
    rho_sq: Vec<f64>,
}

impl<'a> PruferPhase<'a> {
    /// `inner` are the strictly-contractive coefficients
    /// `alpha_0 .. alpha_{n-2}`.
    pub fn new(inner: &'a [Complex64]) -> Self {
        let rho_sq = inner.iter().map(|a| 1.0 - a.norm_sqr()).collect();
        PruferPhase { inner, rho_sq }
    }

    /// The lift `psi(theta)` for `theta` in `[0, 2 pi]`.
    pub fn phase(&self, theta: f64) -> f64 {
        self.phase_and_derivative(theta).0
    }

    /// `(psi, d psi / d theta)`.
    pub fn phase_and_derivative(&self, theta: f64) -> (f64, f64) {
        let zrot = Complex64::from_polar(1.0, theta);
        let mut w = zrot;
        let mut p_cur = if theta > PI { theta - TAU } else { theta };
        let mut winding: i64 = if theta > PI { 1 } else { 0 };
        let mut dpsi = 1.0;
        for (k, alpha) in self.inner.iter().enumerate() {
            let u = Complex64::new(
                1.0 - (alpha.re * w.re - alpha.im * w.im),
                -(alpha.re * w.im + alpha.im * w.re),
            );
            let a = approx_arg(u.re, u.im);
            let inv_usq = 1.0 / (u.re * u.re + u.im * u.im);
            // w <- e^{i theta} w conj(u)^2 / |u|^2
            let cu2 = Complex64::new(u.re * u.re - u.im * u.im, -2.0 * u.re * u.im);
            let mut w_next = w * cu2;
            w_next = Complex64::new(
                (zrot.re * w_next.re - zrot.im * w_next.im) * inv_usq,
                (zrot.re * w_next.im + zrot.im * w_next.re) * inv_usq,
            );
            let p_next = approx_arg(w_next.re, w_next.im);
            // Exactly 2 pi q apart for the true principal values; approximate
            // args stay within ~0.02 of those, so the rounding is exact.
            let q = ((theta + p_cur - 2.0 * a - p_next) / TAU).round();
            winding += q as i64;
            dpsi = 1.0 + dpsi * self.rho_sq[k] * inv_usq;
            w = w_next;
            p_cur = p_next;
            if k % 128 == 127 {
                let inv = 1.0 / w.norm();
                w *= inv;
            }
        }
        (w.im.atan2(w.re) + TAU * winding as f64, dpsi)
    }

    /// The unimodular ratio `w(theta) = e^{i psi(theta)}` without winding
    /// bookkeeping: the cheap path for work inside a bracket whose phase
    /// span already pins the branch.
    pub fn ratio(&self, theta: f64) -> Complex64 {
        let zrot = Complex64::from_polar(1.0, theta);
        let mut w = zrot;
        for (k, alpha) in self.inner.iter().enumerate() {
            let u = Complex64::new(
                1.0 - (alpha.re * w.re - alpha.im * w.im),
                -(alpha.re * w.im + alpha.im * w.re),
            );
            let inv_usq = 1.0 / (u.re * u.re + u.im * u.im);
            let cu2 = Complex64::new(u.re * u.re - u.im * u.im, -2.0 * u.re * u.im);
            let wc = w * cu2;
            w = Complex64::new(
                (zrot.re * wc.re - zrot.im * wc.im) * inv_usq,
                (zrot.re * wc.im + zrot.im * wc.re) * inv_usq,
            );
            if k % 128 == 127 {
                let inv = 1.0 / w.norm();
                w *= inv;
            }
        }
        w
    }

    /// Slow reference lift: one exact `sin`/`cos`/`atan2` per step. Used to
    /// cross-check the multiplicative path.
    pub fn phase_reference(&self, theta: f64) -> f64 {
        let mut psi = theta;
        for alpha in self.inner {
            let e = Complex64::from_polar(1.0, psi);
            let u = Complex64::new(1.0, 0.0) - alpha * e;
            psi = theta + psi - 2.0 * u.im.atan2(u.re);
        }
        psi
    }

    /// Batched lift evaluation. The recursion is a serial dependency chain
    /// per point (division latency bound), so interleaving lanes through one
    /// coefficient pass is several times faster than point-by-point calls.
    /// Values are bit-identical to [`phase`](Self::phase).
    pub fn phases_batch(&self, thetas: &[f64]) -> Vec<f64> {
        const LANES: usize = 8;
        let mut out = vec![0.0; thetas.len()];
        for (chunk_idx, chunk) in thetas.chunks(LANES).enumerate() {
            let mut th = [*chunk.last().unwrap_or(&0.0); LANES];
            th[..chunk.len()].copy_from_slice(chunk);
            let mut zr = [0.0; LANES];
            let mut zi = [0.0; LANES];
            let mut wre = [0.0; LANES];
            let mut wim = [0.0; LANES];
            let mut p_cur = [0.0; LANES];
            let mut wind = [0.0f64; LANES];
            for l in 0..LANES {
                let (s, c) = th[l].sin_cos();
                zr[l] = c;
                zi[l] = s;
                wre[l] = c;
                wim[l] = s;
                if th[l] > PI {
                    p_cur[l] = th[l] - TAU;
                    wind[l] = 1.0;
                } else {
                    p_cur[l] = th[l];
                }
            }
            for (k, alpha) in self.inner.iter().enumerate() {
                let (ar, ai) = (alpha.re, alpha.im);
                for l in 0..LANES {
                    let ure = 1.0 - (ar * wre[l] - ai * wim[l]);
                    let uim = -(ar * wim[l] + ai * wre[l]);
                    let a = approx_arg(ure, uim);
                    let inv = 1.0 / (ure * ure + uim * uim);
                    let c2re = ure * ure - uim * uim;
                    let c2im = -2.0 * ure * uim;
                    let tre = wre[l] * c2re - wim[l] * c2im;
                    let tim = wre[l] * c2im + wim[l] * c2re;
                    let nre = (zr[l] * tre - zi[l] * tim) * inv;
                    let nim = (zr[l] * tim + zi[l] * tre) * inv;
                    let p_next = approx_arg(nre, nim);
                    wind[l] += ((th[l] + p_cur[l] - 2.0 * a - p_next) / TAU).round();
                    p_cur[l] = p_next;
                    wre[l] = nre;
                    wim[l] = nim;
                }
                if k % 128 == 127 {
                    for l in 0..LANES {
                        let inv = 1.0 / (wre[l] * wre[l] + wim[l] * wim[l]).sqrt();
                        wre[l] *= inv;
                        wim[l] *= inv;
                    }
                }
            }
            for (l, slot) in out[chunk_idx * LANES..].iter_mut().take(chunk.len()).enumerate()
            {
                *slot = wim[l].atan2(wre[l]) + TAU * wind[l];
            }
        }
        out
    }

    /// Batched ratio evaluation; see [`phases_batch`](Self::phases_batch).
    pub fn ratios_batch(&self, thetas: &[f64]) -> Vec<Complex64> {
        const LANES: usize = 8;
        let mut out = vec![Complex64::new(0.0, 0.0); thetas.len()];
        for (chunk_idx, chunk) in thetas.chunks(LANES).enumerate() {
            let mut th = [*chunk.last().unwrap_or(&0.0); LANES];
            th[..chunk.len()].copy_from_slice(chunk);
            let mut zr = [0.0; LANES];
            let mut zi = [0.0; LANES];
            let mut wre = [0.0; LANES];
            let mut wim = [0.0; LANES];
            for l in 0..LANES {
                let (s, c) = th[l].sin_cos();
                zr[l] = c;
                zi[l] = s;
                wre[l] = c;
                wim[l] = s;
            }
            for (k, alpha) in self.inner.iter().enumerate() {
                let (ar, ai) = (alpha.re, alpha.im);
                for l in 0..LANES {
                    let ure = 1.0 - (ar * wre[l] - ai * wim[l]);
                    let uim = -(ar * wim[l] + ai * wre[l]);
                    let inv = 1.0 / (ure * ure + uim * uim);
                    let c2re = ure * ure - uim * uim;
                    let c2im = -2.0 * ure * uim;
                    let tre = wre[l] * c2re - wim[l] * c2im;
                    let tim = wre[l] * c2im + wim[l] * c2re;
                    wre[l] = (zr[l] * tre - zi[l] * tim) * inv;
                    wim[l] = (zr[l] * tim + zi[l] * tre) * inv;
                }
                if k % 128 == 127 {
                    for l in 0..LANES {
                        let inv = 1.0 / (wre[l] * wre[l] + wim[l] * wim[l]).sqrt();
                        wre[l] *= inv;
                        wim[l] *= inv;
                    }
                }
            }
            for (l, slot) in out[chunk_idx * LANES..].iter_mut().take(chunk.len()).enumerate()
            {
                *slot = Complex64::new(wre[l], wim[l]);
            }
        }
        out
    }
}

/// All `n` zeros of the paraorthogonal polynomial on `[0, 2 pi)`, sorted,
/// with solve diagnostics.
///
/// `alphas` holds `alpha_0 .. alpha_{n-1}` with the final coefficient
/// unimodular.
pub fn paraorthogonal_eigenangles(
    alphas: &[Complex64],
) -> Result<(Vec<f64>, SolveDiagnostics)> {
    let n = alphas.len();
    if n == 0 {
        return Err(Error::parameter("need at least one recursion coefficient"));
    }
    let last = alphas[n - 1];
    if (last.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::parameter(format!(
            "final coefficient must be unimodular, |alpha| = {}",
            last.norm()
        )));
    }
    for (k, a) in alphas[..n - 1].iter().enumerate() {
        if a.norm() >= 1.0 {
            return Err(Error::parameter(format!(
                "coefficient {k} not strictly inside the disk (|alpha| = {})",
                a.norm()
            )));
        }
    }

    let eta = -last.im.atan2(last.re);
    if n == 1 {
        let theta = eta.rem_euclid(TAU);
        return Ok((vec![theta], SolveDiagnostics::default()));
    }

    let phase = PruferPhase::new(&alphas[..n - 1]);
    let grid = n.max(8);
    let scan_thetas: Vec<f64> = (0..=grid).map(|m| TAU * m as f64 / grid as f64).collect();
    let scan = phase.phases_batch(&scan_thetas);
    let total = scan[grid] - scan[0];
    if (total - TAU * n as f64).abs() > 1e-6 {
        return Err(Error::consistency(format!(
            "phase winding {:.6} != 2 pi n = {:.6}; root count would be wrong",
            total,
            TAU * n as f64
        )));
    }

    // The typical slope of the lift is n (total winding 2 pi n over one
    // revolution), so resolving the residual below n * BRACKET_FLOOR would
    // need brackets finer than the theta floor; the effective root accuracy
    // stays near tol / psi' ~ 1e-12.
    let tol = PHASE_TOL.max(8.0 * n as f64 * BRACKET_FLOOR);
    let first_branch = ((scan[0] - eta) / TAU).ceil();

    struct RootSolve {
        target: f64,
        dir_re: f64,
        dir_im: f64,
        lo: f64,
        hi: f64,
        // True residuals at the bracket ends (branch disambiguation) next
        // to the Illinois working values (deliberately damped to force
        // interpolation progress).
        f_lo: f64,
        f_hi: f64,
        w_lo: f64,
        w_hi: f64,
        side: i8,
        probe: f64,
        root: f64,
        residual: f64,
        done: bool,
        collapsed: bool,
    }

    let mut roots: Vec<RootSolve> = (0..n)
        .map(|i| {
            let target = eta + TAU * (first_branch + i as f64);
            let idx = scan.partition_point(|&p| p < target).clamp(1, grid);
            let (s, c) = target.sin_cos();
            RootSolve {
                target,
                dir_re: c,
                dir_im: s,
                lo: scan_thetas[idx - 1],
                hi: scan_thetas[idx],
                f_lo: scan[idx - 1] - target,
                f_hi: scan[idx] - target,
                w_lo: scan[idx - 1] - target,
                w_hi: scan[idx] - target,
                side: 0,
                probe: 0.0,
                root: 0.0,
                residual: 0.0,
                done: false,
                collapsed: false,
            }
        })
        .collect();

    // Illinois regula falsi in lockstep rounds over all unconverged roots:
    // bracket-preserving, superlinear, immune to the derivative spikes of
    // clustered roots. Once a bracket's phase span is below one turn the
    // branch is pinned and the cheap ratio evaluation takes over; both
    // evaluations run batched across roots.
    let mut active: Vec<usize> = (0..n).collect();
    let mut light_idx = Vec::with_capacity(n);
    let mut light_x = Vec::with_capacity(n);
    let mut full_idx = Vec::with_capacity(n);
    let mut full_x = Vec::with_capacity(n);
    for _round in 0..200 {
        if active.is_empty() {
            break;
        }
        light_idx.clear();
        light_x.clear();
        full_idx.clear();
        full_x.clear();
        for &i in &active {
            let r = &mut roots[i];
            let mut x = (r.lo * r.w_hi - r.hi * r.w_lo) / (r.w_hi - r.w_lo);
            if !(x > r.lo && x < r.hi) {
                x = 0.5 * (r.lo + r.hi);
            }
            r.probe = x;
            if r.f_hi - r.f_lo < TAU - 1e-6 {
                light_idx.push(i);
                light_x.push(x);
            } else {
                full_idx.push(i);
                full_x.push(x);
            }
        }
        let light_w = phase.ratios_batch(&light_x);
        let full_psi = phase.phases_batch(&full_x);

        for (&i, &w) in light_idx.iter().zip(light_w.iter()) {
            let r = &mut roots[i];
            let principal = (w.im * r.dir_re - w.re * r.dir_im)
                .atan2(w.re * r.dir_re + w.im * r.dir_im);
            // The true residual lies in (f_lo, f_hi), which spans less than
            // a turn: exactly one branch of the principal value fits, the
            // one nearest the interval midpoint.
            let residual =
                principal + TAU * ((0.5 * (r.f_lo + r.f_hi) - principal) / TAU).round();
            apply_update(r, residual, tol);
        }
        for (&i, &psi) in full_idx.iter().zip(full_psi.iter()) {
            let r = &mut roots[i];
            let residual = psi - r.target;
            apply_update(r, residual, tol);
        }
        active.retain(|&i| !roots[i].done);
    }

    fn apply_update(r: &mut RootSolve, residual: f64, tol: f64) {
        if residual.abs() <= tol {
            r.root = r.probe;
            r.residual = residual.abs();
            r.done = true;
            return;
        }
        if residual > 0.0 {
            r.hi = r.probe;
            r.f_hi = residual;
            r.w_hi = residual;
            if r.side == 1 {
                r.w_lo *= 0.5;
            }
            r.side = 1;
        } else {
            r.lo = r.probe;
            r.f_lo = residual;
            r.w_lo = residual;
            if r.side == -1 {
                r.w_hi *= 0.5;
            }
            r.side = -1;
        }
        if r.hi - r.lo <= BRACKET_FLOOR.max(f64::EPSILON * r.hi.abs()) {
            r.root = 0.5 * (r.lo + r.hi);
            r.residual = residual.abs();
            r.done = true;
            r.collapsed = true;
        }
    }

    let mut diagnostics = SolveDiagnostics::default();
    let mut angles = Vec::with_capacity(n);
    for r in &mut roots {
        if !r.done {
            // Round cap hit: take the bracket midpoint and flag it.
            r.root = 0.5 * (r.lo + r.hi);
            r.residual = r.f_hi.abs().min(r.f_lo.abs());
            r.collapsed = true;
        }
        if r.collapsed {
            diagnostics.collapsed_brackets += 1;
        }
        diagnostics.max_phase_residual = diagnostics.max_phase_residual.max(r.residual);
        angles.push(r.root.rem_euclid(TAU));
    }
    angles.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok((angles, diagnostics))
}

/// `|Phi_n(e^{i theta})|` under joint max-modulus renormalization of
/// `(phi, phi*)` per recursion step. Root acceptance is checked against this
/// residual times the grid sup of the same renormalized polynomial.
pub fn renormalized_residual(alphas: &[Complex64], theta: f64) -> f64 {
    let n = alphas.len();
    let z = Complex64::from_polar(1.0, theta);
    let mut phi = Complex64::new(1.0, 0.0);
    let mut phi_star = Complex64::new(1.0, 0.0);
    for alpha in &alphas[..n - 1] {
        let next = z * phi - alpha.conj() * phi_star;
        let next_star = phi_star - alpha * z * phi;
        let scale = next.norm().max(next_star.norm());
        phi = next / scale;
        phi_star = next_star / scale;
    }
    (z * phi - alphas[n - 1].conj() * phi_star).norm()
}

/// Quadratic atan2 with max error ~4e-3 rad and libm-compatible branch
/// behaviour (the sign of `im` decides the cut side, including signed
/// zero); only ever used to resolve integer branch crossings. Select-based
/// so batched lanes pipeline well.
#[inline(always)]
fn approx_arg(re: f64, im: f64) -> f64 {
    const C: f64 = 0.273;
    let abs_re = re.abs();
    let abs_im = im.abs();
    let big = abs_re.max(abs_im);
    let small = abs_re.min(abs_im);
    let t = small / big;
    let mut r = t * (FRAC_PI_4 + C * (1.0 - t));
    if abs_im > abs_re {
        r = FRAC_PI_2 - r;
    }
    if re < 0.0 {
        r = PI - r;
    }
    if im.is_sign_negative() {
        -r
    } else {
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn random_inner(n: usize, seed: u64) -> Vec<Complex64> {
        let mut rng = crate::rng::replica_rng(seed, 0);
        (0..n)
            .map(|_| {
                let r: f64 = rng.gen::<f64>().sqrt() * 0.6;
                let phi: f64 = TAU * rng.gen::<f64>();
                Complex64::from_polar(r, phi)
            })
            .collect()
    }

    #[test]
    fn approx_arg_error_bound() {
        for i in 0..1000 {
            let ang = TAU * i as f64 / 1000.0 - PI + 1e-9;
            let (im, re) = ang.sin_cos();
            let err = (approx_arg(re, im) - ang).abs();
            assert!(err < 5e-3, "angle {ang}: err {err}");
        }
    }

    #[test]
    fn fast_phase_matches_reference() {
        for seed in 0..4 {
            let inner = random_inner(40, seed);
            let phase = PruferPhase::new(&inner);
            for i in 0..25 {
                let theta = TAU * (i as f64 + 0.31) / 25.0;
                let fast = phase.phase(theta);
                let slow = phase.phase_reference(theta);
                assert!(
                    (fast - slow).abs() < 1e-9,
                    "seed {seed} theta {theta}: fast {fast} vs ref {slow}"
                );
            }
        }
    }

    #[test]
    fn phase_is_increasing_with_unit_floor_derivative() {
        let inner = random_inner(24, 9);
        let phase = PruferPhase::new(&inner);
        let mut prev = phase.phase(0.0);
        for i in 1..=64 {
            let theta = TAU * i as f64 / 64.0;
            let (psi, dpsi) = phase.phase_and_derivative(theta);
            assert!(psi > prev);
            assert!(dpsi >= 1.0);
            prev = psi;
        }
    }

    #[test]
    fn winding_gains_2pi_n_per_revolution() {
        let inner = random_inner(31, 2);
        let phase = PruferPhase::new(&inner);
        let total = phase.phase(TAU) - phase.phase(0.0);
        // 31 inner coefficients mean dimension 32.
        assert!((total - TAU * 32.0).abs() < 1e-8, "total {total}");
    }

    #[test]
    fn dimension_one_roots() {
        let (roots, _) = paraorthogonal_eigenangles(&[Complex64::new(1.0, 0.0)]).unwrap();
        assert_eq!(roots.len(), 1);
        assert!(roots[0].abs() < 1e-14);

        let phi = 2.2;
        let (roots, _) =
            paraorthogonal_eigenangles(&[Complex64::from_polar(1.0, phi)]).unwrap();
        assert!((roots[0] - (TAU - phi)).abs() < 1e-12);
    }

    #[test]
    fn roots_kill_the_paraorthogonal_polynomial() {
        for seed in 0..3 {
            let mut alphas = random_inner(15, 100 + seed);
            alphas.push(Complex64::from_polar(1.0, 1.234 + seed as f64));
            let (roots, diag) = paraorthogonal_eigenangles(&alphas).unwrap();
            assert_eq!(roots.len(), 16);
            // Residual tolerance scaled by the renormalized sup over a grid.
            let grid_sup = (0..64)
                .map(|m| renormalized_residual(&alphas, TAU * m as f64 / 64.0))
                .fold(0.0f64, f64::max);
            for &theta in &roots {
                let res = renormalized_residual(&alphas, theta);
                assert!(
                    res <= 1e-8 * grid_sup.max(1.0),
                    "residual {res} at theta {theta}"
                );
            }
            assert_eq!(diag.collapsed_brackets, 0);
            for pair in roots.windows(2) {
                assert!(pair[1] > pair[0]);
            }
        }
    }

    #[test]
    fn rejects_bad_coefficients() {
        // Final coefficient off the circle.
        assert!(paraorthogonal_eigenangles(&[Complex64::new(0.5, 0.0)]).is_err());
        // Interior coefficient on the circle.
        let alphas = vec![Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)];
        assert!(paraorthogonal_eigenangles(&alphas).is_err());
    }
}
