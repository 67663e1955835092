//! Band-limited test functions represented as finite mixtures of dilated
//! base bumps.
//!
//! A mixture with components `(w_i, L_i)`, all `L_i >= 1`, represents
//!
//! ```text
//! f(t)      = sum_i w_i F(t / L_i)          (time side)
//! fhat(x)   = sum_i w_i L_i b(L_i x)        (frequency side)
//! ```
//!
//! where `b` is the base profile of [`BumpSpec`] and `F` its inverse
//! transform. Every component keeps its frequency support inside
//! [-1/2, 1/2], and weights summing to one keep `f(0) = 1`.
//!
//! The weighted seminorm `(int |x| fhat(x)^2 dx)^{1/2}` is computed through
//! the pairwise scale-ratio integrals
//!
//! ```text
//! int |x| L_i b(L_i x) L_j b(L_j x) dx = I(L_j / L_i),
//! I(r) = r * int |u| b(u) b(r u) du = I(1/r),
//! ```
//!
//! so norms, dilation averages and the reduction loop stay exact mixture
//! algebra (up to 1-D quadrature) at any depth and any scale ratio. Pure
//! dilation leaves all ratios unchanged, hence the seminorm invariant.

use std::collections::BTreeMap;

use crate::bump::BumpSpec;
use crate::error::{Error, Result};
use crate::quad::gl32_composite;

/// Hard cap on mixture components during norm reduction.
pub const COMPONENT_CAP: usize = 1 << 14;

/// Hard cap on the flattening dilation.
pub const DILATION_CAP: f64 = (1u64 << 30) as f64;

/// Squared-norm factor a dilation-average step must reach to be accepted.
pub const CONTRACTION_FACTOR: f64 = 0.51;

/// A finite mixture of dilated base bumps; see the module docs.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaleMixture {
    /// `(weight, scale)` pairs, sorted by scale, scales deduplicated.
    components: Vec<(f64, f64)>,
}

/// One accepted step of the norm-reduction loop, for audit.
#[derive(Debug, Clone, Copy)]
pub struct ReductionStep {
    pub dilation: f64,
    pub norm_sq_before: f64,
    pub norm_sq_after: f64,
}

impl ScaleMixture {
    /// The undila­ted base bump: a single `(1, 1)` component.
    pub fn base() -> Self {
        ScaleMixture {
            components: vec![(1.0, 1.0)],
        }
    }

    /// The zero function (no components).
    pub fn empty() -> Self {
        ScaleMixture {
            components: Vec::new(),
        }
    }

    /// Build a mixture from `(weight, scale)` pairs. Scales must be >= 1 and
    /// finite so the frequency support stays inside [-1/2, 1/2].
    pub fn new(components: Vec<(f64, f64)>) -> Result<Self> {
        for &(w, l) in &components {
            if !w.is_finite() || !l.is_finite() {
                return Err(Error::parameter("mixture component not finite"));
            }
            if l < 1.0 {
                return Err(Error::parameter(format!(
                    "mixture scale {l} < 1 would push frequency support outside [-1/2, 1/2]"
                )));
            }
        }
        Ok(ScaleMixture {
            components: merge_components(components),
        })
    }

    pub fn components(&self) -> &[(f64, f64)] {
        &self.components
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn weight_sum(&self) -> f64 {
        self.components.iter().map(|c| c.0).sum()
    }

    pub fn max_scale(&self) -> f64 {
        self.components.iter().map(|c| c.1).fold(1.0, f64::max)
    }

    pub fn base_spec(&self) -> &'static BumpSpec {
        BumpSpec::standard()
    }

    /// Time-side value `f(t)`.
    pub fn eval_time(&self, t: f64) -> f64 {
        let base = self.base_spec();
        self.components
            .iter()
            .map(|&(w, l)| w * base.time_value(t / l))
            .sum()
    }

    /// Time-side value through the doubled-resolution quadrature path; the
    /// self-consistency oracle for `eval_time`.
    pub fn eval_time_refined(&self, t: f64) -> f64 {
        let base = self.base_spec();
        self.components
            .iter()
            .map(|&(w, l)| w * base.time_value_quadrature(t / l, 2))
            .sum()
    }

    /// Frequency-side value `fhat(x)`; identically zero for |x| >= 1/2.
    pub fn eval_freq(&self, x: f64) -> f64 {
        let base = self.base_spec();
        self.components
            .iter()
            .map(|&(w, l)| w * l * base.freq_value(l * x))
            .sum()
    }

    /// `int f(t) dt = fhat(0) = b(0) * sum_i w_i L_i`.
    pub fn integral(&self) -> f64 {
        let peak = self.base_spec().peak;
        peak * self
            .components
            .iter()
            .map(|&(w, l)| w * l)
            .sum::<f64>()
    }

    /// Squared weighted seminorm `int |x| fhat(x)^2 dx` via pairwise
    /// scale-ratio integrals.
    pub fn h_half_norm_sq(&self) -> f64 {
        let base = self.base_spec();
        let m = self.components.len();
        let mut total = 0.0;
        for i in 0..m {
            let (wi, li) = self.components[i];
            total += wi * wi * scale_cross(base, 1.0);
            for j in (i + 1)..m {
                let (wj, lj) = self.components[j];
                total += 2.0 * wi * wj * scale_cross(base, lj / li);
            }
        }
        total.max(0.0)
    }

    /// `(int |x| fhat(x)^2 dx)^{1/2}`.
    pub fn h_half_norm(&self) -> f64 {
        self.h_half_norm_sq().sqrt()
    }

    /// Cross term `2 int |x| fhat(x) L fhat(L x) dx` of a dilation average,
    /// as a sum of pairwise ratio integrals.
    fn dilation_cross(&self, dilation: f64) -> f64 {
        let base = self.base_spec();
        let mut cross = 0.0;
        for &(wi, li) in &self.components {
            for &(wj, lj) in &self.components {
                cross += wi * wj * scale_cross(base, dilation * lj / li);
            }
        }
        cross
    }

    /// Replace `f` by `(f + f(./L)) / 2`: every component splits into its
    /// original scale and the scale multiplied by `L`. Component count at
    /// most doubles; weights are preserved in total.
    pub fn dilate_average(&self, dilation: f64) -> Result<ScaleMixture> {
        if !(dilation > 1.0) || !dilation.is_finite() {
            return Err(Error::parameter(format!(
                "dilation must be > 1, got {dilation}"
            )));
        }
        let mut next = Vec::with_capacity(2 * self.components.len());
        for &(w, l) in &self.components {
            let scaled = l * dilation;
            if !scaled.is_finite() || scaled > 1e290 {
                return Err(Error::resource(format!(
                    "dilated scale {l} * {dilation} overflows the representable range"
                )));
            }
            next.push((0.5 * w, l));
            next.push((0.5 * w, scaled));
        }
        Ok(ScaleMixture {
            components: merge_components(next),
        })
    }

    /// Drive the weighted seminorm below `target` by repeated dilation
    /// averaging; each step searches the dilation by doubling from 2 until
    /// the squared norm contracts by at least [`CONTRACTION_FACTOR`].
    pub fn reduce_norm(&self, target: f64) -> Result<ScaleMixture> {
        self.reduce_norm_logged(target).map(|(mix, _)| mix)
    }

    /// As [`reduce_norm`](Self::reduce_norm), also returning the accepted
    /// steps with their measured contraction factors.
    pub fn reduce_norm_logged(&self, target: f64) -> Result<(ScaleMixture, Vec<ReductionStep>)> {
        if !(target > 0.0) {
            return Err(Error::parameter("norm target must be positive"));
        }
        let mut current = self.clone();
        let mut current_sq = current.h_half_norm_sq();
        let mut log = Vec::new();
        while current_sq.sqrt() > target {
            if current.components.len() * 2 > COMPONENT_CAP {
                return Err(Error::resource(format!(
                    "component cap {} reached at norm {:.6e} (target {:.6e})",
                    COMPONENT_CAP,
                    current_sq.sqrt(),
                    target
                )));
            }
            let mut dilation = 2.0;
            loop {
                if !(current.max_scale() * dilation).is_finite()
                    || current.max_scale() * dilation > 1e290
                {
                    return Err(Error::resource(format!(
                        "dilation search exceeds the representable scale range; \
                         achieved norm {:.6e} (target {:.6e})",
                        current_sq.sqrt(),
                        target
                    )));
                }
                // ||f_L||^2 = (||f||^2 + cross(L)) / 2 exactly, so the search
                // only needs the cross term.
                let candidate_sq = 0.5 * (current_sq + current.dilation_cross(dilation));
                if candidate_sq <= CONTRACTION_FACTOR * current_sq {
                    let candidate = current.dilate_average(dilation)?;
                    log.push(ReductionStep {
                        dilation,
                        norm_sq_before: current_sq,
                        norm_sq_after: candidate_sq,
                    });
                    current = candidate;
                    current_sq = candidate_sq;
                    break;
                }
                dilation *= 2.0;
            }
        }
        Ok((current, log))
    }

    /// Certified bound on `sup_{[-R, R]} |f - 1|`: a grid maximum plus a
    /// Lipschitz slack from `|f'| <= 2 pi sum_i w_i (int |x| b) / L_i`.
    pub fn certified_sup_deviation(&self, radius: f64, grid_scale: usize) -> f64 {
        let lip = self.lipschitz_bound();
        // Grid fine enough that the Lipschitz slack stays far below any
        // flatness target in use, so certificates track the true sup.
        let mut h = radius / 16.0;
        if lip > 0.0 {
            h = h.min(0.002 / lip).max(radius / 400_000.0);
        }
        h /= grid_scale.max(1) as f64;
        let steps = (radius / h).ceil() as usize;
        let mut dev: f64 = 0.0;
        for i in 0..=steps {
            let t = (i as f64 * h).min(radius);
            dev = dev.max((self.eval_time(t) - 1.0).abs());
        }
        // f is even, so scanning [0, R] covers [-R, R].
        dev + lip * h / 2.0
    }

    /// Upper bound on `sup |f'|`.
    pub fn lipschitz_bound(&self) -> f64 {
        let base = self.base_spec();
        std::f64::consts::TAU
            * base.abs_moment
            * self
                .components
                .iter()
                .map(|&(w, l)| w.abs() / l)
                .sum::<f64>()
    }

    /// Rescale all components by the smallest power-of-two dilation that
    /// certifies `sup_{[-R, R]} |f - 1| <= eps`. The seminorm depends only on
    /// scale ratios, so it is unchanged.
    pub fn flatten(&self, radius: f64, eps: f64) -> Result<ScaleMixture> {
        if !(eps > 0.0) {
            return Err(Error::parameter("flatten tolerance must be positive"));
        }
        if !(radius > 0.0) {
            return Err(Error::parameter("flatten radius must be positive"));
        }
        let mut dilation = 1.0;
        while dilation <= DILATION_CAP {
            let candidate = ScaleMixture {
                components: merge_components(
                    self.components
                        .iter()
                        .map(|&(w, l)| (w, l * dilation))
                        .collect(),
                ),
            };
            if candidate.certified_sup_deviation(radius, 1) <= eps {
                return Ok(candidate);
            }
            dilation *= 2.0;
        }
        Err(Error::resource(format!(
            "no dilation up to {DILATION_CAP:.0} certifies |f - 1| <= {eps} on [-{radius}, {radius}]"
        )))
    }

    /// Plain-text record: base normalization constant, then the
    /// `(weight, scale)` pairs, all with 17 significant digits.
    pub fn to_record(&self) -> String {
        let mut out = String::new();
        out.push_str("mixture-record v1\n");
        out.push_str(&format!("base_norm_const {:.16e}\n", self.base_spec().norm_const));
        out.push_str(&format!("components {}\n", self.components.len()));
        for &(w, l) in &self.components {
            out.push_str(&format!("{:.16e} {:.16e}\n", w, l));
        }
        out
    }

    /// Parse a record produced by [`to_record`](Self::to_record).
    pub fn from_record(text: &str) -> Result<ScaleMixture> {
        let mut lines = text.lines();
        let header = lines.next().unwrap_or_default();
        if header.trim() != "mixture-record v1" {
            return Err(Error::config(format!("unknown mixture record header: {header}")));
        }
        let norm_line = lines
            .next()
            .ok_or_else(|| Error::config("mixture record missing base_norm_const"))?;
        let norm_const: f64 = norm_line
            .trim()
            .strip_prefix("base_norm_const")
            .ok_or_else(|| Error::config("mixture record missing base_norm_const"))?
            .trim()
            .parse()
            .map_err(|e| Error::config(format!("bad base_norm_const: {e}")))?;
        let expect = BumpSpec::standard().norm_const;
        if (norm_const - expect).abs() > 1e-9 * expect {
            return Err(Error::config(format!(
                "mixture record base constant {norm_const} does not match this build ({expect})"
            )));
        }
        let count_line = lines
            .next()
            .ok_or_else(|| Error::config("mixture record missing component count"))?;
        let count: usize = count_line
            .trim()
            .strip_prefix("components")
            .ok_or_else(|| Error::config("mixture record missing component count"))?
            .trim()
            .parse()
            .map_err(|e| Error::config(format!("bad component count: {e}")))?;
        let mut components = Vec::with_capacity(count);
        for _ in 0..count {
            let line = lines
                .next()
                .ok_or_else(|| Error::config("mixture record truncated"))?;
            let mut parts = line.split_whitespace();
            let w: f64 = parts
                .next()
                .ok_or_else(|| Error::config("mixture record row missing weight"))?
                .parse()
                .map_err(|e| Error::config(format!("bad weight: {e}")))?;
            let l: f64 = parts
                .next()
                .ok_or_else(|| Error::config("mixture record row missing scale"))?
                .parse()
                .map_err(|e| Error::config(format!("bad scale: {e}")))?;
            components.push((w, l));
        }
        ScaleMixture::new(components)
    }
}

/// Merge components with bit-identical scales and drop exact zero weights;
/// sort by scale for deterministic layout.
fn merge_components(components: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
    let mut by_scale: BTreeMap<u64, (f64, f64)> = BTreeMap::new();
    for (w, l) in components {
        let entry = by_scale.entry(l.to_bits()).or_insert((0.0, l));
        entry.0 += w;
    }
    let mut out: Vec<(f64, f64)> = by_scale
        .into_values()
        .filter(|&(w, _)| w != 0.0)
        .collect();
    out.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
    out
}

/// `I(r) = r int |u| b(u) b(r u) du`, evaluated on the common support; the
/// pairwise building block of the weighted seminorm. Symmetric in r <-> 1/r.
fn scale_cross(base: &BumpSpec, ratio: f64) -> f64 {
    let r = if ratio >= 1.0 { ratio } else { 1.0 / ratio };
    // I(r) <= 2 b(0) (int v b) / r: negligible against every tolerance in
    // use once the ratio passes 1e17.
    if r > 1e17 {
        return 0.0;
    }
    // I(r) = (2 / r) int_0^{1/2} v b(v / r) b(v) dv after v = r u.
    (2.0 / r)
        * gl32_composite(
            |v| v * base.freq_value(v / r) * base.freq_value(v),
            0.0,
            0.5,
            8,
        )
}
