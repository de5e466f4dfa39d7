//! The explicit constant for symmetric planar domains.
//!
//! With `j = j₀,₁` and `h` a concave profile on `[0, 1/2]`, the integrals
//!
//! ```text
//! I_{p,k}(h) = ∫₀^{1/2} h(x)^p J_k(2jx)² dx,    ψ(p, h) = I_{p,0}(h) − I_{p,1}(h)
//! ```
//!
//! feed the functional `J(h) = ψ(1,h) + (2τ/3)ψ(3,h)w² + (τ²/5)ψ(5,h)w⁴`,
//! whose minimizer over concave `h` is `h(x) = 2x`. The quotient `Q(w)` and
//! its value `M = Q(0)` give the constant `4j²M ≈ 0.432` in
//! `μ₁ ≤ 4j²/D² − 0.432·w²/D⁴`.

use crate::error::{Error, Result};
use crate::fem2d::{neumann_eigs, neumann_eigs_thin, rescale_to_unit_aspect, THIN_ASPECT};
use crate::geometry::{bisector_asymmetry, diameter, width_orthogonal, ConvexPolygon};
use crate::specfun::{bessel_j_unchecked, bessel_zero, bisect, gauss_legendre, QuadratureRule};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::sync::OnceLock;

/// The constant as stated, rounded to three digits.
pub const EXPLICIT_CONSTANT: f64 = 0.432;

/// Largest relative vertex mismatch under reflection accepted as symmetric.
pub const SYMMETRY_TOL: f64 = 1e-9;

const PANELS: usize = 64;
const ORDER: usize = 16;
const CONCAVITY_TOL: f64 = 1e-12;

/// Concave piecewise-linear `h` on `[0, 1/2]` with values in `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConcaveH {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
}

impl ConcaveH {
    /// Validated profile with the normalization `h(1/2) = 1`.
    pub fn new(breakpoints: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        let h = ConcaveH::unnormalized(breakpoints, values)?;
        let top = *h.values.last().expect("non-empty");
        if (top - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidProfile(format!("h(1/2) must equal 1, got {top}")));
        }
        Ok(h)
    }

    /// Concave profile with values in `[0, 1]` but no endpoint normalization,
    /// e.g. `h ≡ 0`.
    pub fn unnormalized(breakpoints: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if breakpoints.len() < 2 || breakpoints.len() != values.len() {
            return Err(Error::InvalidProfile("need at least two breakpoints with one value each".into()));
        }
        if breakpoints[0] != 0.0 || *breakpoints.last().expect("non-empty") != 0.5 {
            return Err(Error::InvalidProfile("breakpoints must run from 0 to 1/2".into()));
        }
        if breakpoints.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidProfile("breakpoints must be strictly increasing".into()));
        }
        if values.iter().any(|v| !(0.0..=1.0).contains(v)) {
            return Err(Error::InvalidProfile("values must lie in [0, 1]".into()));
        }
        let slopes: Vec<f64> =
            breakpoints.windows(2).zip(values.windows(2)).map(|(x, v)| (v[1] - v[0]) / (x[1] - x[0])).collect();
        let scale = 1.0 + slopes.iter().fold(0.0_f64, |m, s| m.max(s.abs()));
        if let Some(i) = slopes.windows(2).position(|s| s[1] - s[0] > CONCAVITY_TOL * scale) {
            return Err(Error::InvalidProfile(format!("h is not concave at breakpoint {}", i + 1)));
        }
        Ok(ConcaveH { breakpoints, values })
    }

    /// The minimizer `h(x) = 2x`.
    pub fn linear() -> Self {
        ConcaveH { breakpoints: vec![0.0, 0.5], values: vec![0.0, 1.0] }
    }

    pub fn constant(c: f64) -> Result<Self> {
        ConcaveH::unnormalized(vec![0.0, 0.5], vec![c, c])
    }

    /// `h(0) = h0`, then the given nonincreasing nonnegative slopes between
    /// consecutive breakpoints, rescaled so that `h(1/2) = 1`.
    pub fn from_slopes(h0: f64, interior: &[f64], slopes: &[f64]) -> Result<Self> {
        if slopes.len() != interior.len() + 1 {
            return Err(Error::InvalidProfile("need one slope per segment".into()));
        }
        if !(h0 >= 0.0) || slopes.iter().any(|s| !(*s >= 0.0)) || slopes.windows(2).any(|s| s[1] > s[0]) {
            return Err(Error::InvalidProfile("need h0 >= 0 and nonincreasing nonnegative slopes".into()));
        }
        let mut breakpoints = Vec::with_capacity(interior.len() + 2);
        breakpoints.push(0.0);
        breakpoints.extend_from_slice(interior);
        breakpoints.push(0.5);
        let mut values = vec![h0];
        for (i, s) in slopes.iter().enumerate() {
            let last = values[i];
            values.push(last + s * (breakpoints[i + 1] - breakpoints[i]));
        }
        let top = *values.last().expect("non-empty");
        if !(top > 0.0) {
            return Err(Error::InvalidProfile("h vanishes identically".into()));
        }
        values.iter_mut().for_each(|v| *v = (*v / top).min(1.0));
        *values.last_mut().expect("non-empty") = 1.0;
        ConcaveH::new(breakpoints, values)
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn eval(&self, x: f64) -> f64 {
        let i = match self.breakpoints.binary_search_by(|b| b.total_cmp(&x)) {
            Ok(i) => return self.values[i],
            Err(0) => return self.values[0],
            Err(i) if i == self.breakpoints.len() => return *self.values.last().expect("non-empty"),
            Err(i) => i,
        };
        let (x0, x1) = (self.breakpoints[i - 1], self.breakpoints[i]);
        let t = (x - x0) / (x1 - x0);
        self.values[i - 1] * (1.0 - t) + self.values[i] * t
    }

    fn describe(&self) -> String {
        let pts: Vec<String> =
            self.breakpoints.iter().zip(&self.values).map(|(x, v)| format!("({x:.4}, {v:.4})")).collect();
        pts.join(" ")
    }
}

struct Fixed {
    j: f64,
    x0: f64,
    rule: QuadratureRule,
    i00: f64,
    psi1: f64,
    psi3: f64,
    psi5: f64,
    tau: f64,
}

fn fixed() -> &'static Fixed {
    static FIXED: OnceLock<Fixed> = OnceLock::new();
    FIXED.get_or_init(|| {
        let j = bessel_zero(0.0, 1).expect("first zero of J0");
        let g = |x: f64| bessel_j_unchecked(0.0, 2.0 * j * x) - bessel_j_unchecked(1.0, 2.0 * j * x);
        let x0 = bisect(&g, 0.2, 0.4, 1e-16);
        let rule = gauss_legendre(ORDER).expect("valid order");
        let one = ConcaveH::constant(1.0).expect("valid profile");
        let i00 = integrals(j, x0, &rule, &one, &[0])[0].0;
        let lin = integrals(j, x0, &rule, &ConcaveH::linear(), &[1, 3, 5]);
        let psi = |k: usize| lin[k].0 - lin[k].1;
        let (psi1, psi3, psi5) = (psi(0), psi(1), psi(2));
        let tau = j * j * psi3 / i00;
        Fixed { j, x0, rule, i00, psi1, psi3, psi5, tau }
    })
}

/// `(I_{p,0}(h), I_{p,1}(h))` for each requested power, in one quadrature pass
/// over panels aligned with the corners of `h` and with `x₀`.
fn integrals(j: f64, x0: f64, rule: &QuadratureRule, h: &ConcaveH, powers: &[i32]) -> Vec<(f64, f64)> {
    let mut breaks: Vec<f64> = h.breakpoints().to_vec();
    breaks.push(x0);
    breaks.sort_by(f64::total_cmp);
    breaks.dedup_by(|a, b| (*a - *b).abs() < 1e-15);
    let mut out = vec![(0.0, 0.0); powers.len()];
    for seg in breaks.windows(2) {
        let (lo, hi) = (seg[0], seg[1]);
        let panels = ((PANELS as f64 * (hi - lo) / 0.5).ceil() as usize).max(1);
        let width = (hi - lo) / panels as f64;
        for k in 0..panels {
            let a = lo + k as f64 * width;
            let b = if k + 1 == panels { hi } else { a + width };
            let (half, mid) = (0.5 * (b - a), 0.5 * (a + b));
            for (&t, &wt) in rule.nodes().iter().zip(rule.weights()) {
                let x = mid + half * t;
                let (j0, j1) = (bessel_j_unchecked(0.0, 2.0 * j * x), bessel_j_unchecked(1.0, 2.0 * j * x));
                let (g0, g1) = (j0 * j0 * wt * half, j1 * j1 * wt * half);
                let hx = h.eval(x);
                for (slot, &p) in out.iter_mut().zip(powers) {
                    let hp = hx.powi(p);
                    slot.0 += hp * g0;
                    slot.1 += hp * g1;
                }
            }
        }
    }
    out
}

/// `I_{p,kind}(h)` for `p ∈ {0, 1, 3, 5}` and `kind ∈ {0, 1}`.
pub fn bessel_integral(p: u32, h: &ConcaveH, kind: u32) -> Result<f64> {
    if ![0, 1, 3, 5].contains(&p) || kind > 1 {
        return Err(Error::Domain(format!("need p in {{0, 1, 3, 5}} and kind in {{0, 1}}, got p = {p}, kind = {kind}")));
    }
    let f = fixed();
    let (i0, i1) = integrals(f.j, f.x0, &f.rule, h, &[p as i32])[0];
    Ok(if kind == 0 { i0 } else { i1 })
}

/// `ψ(p, h) = I_{p,0}(h) − I_{p,1}(h)`.
pub fn psi(p: u32, h: &ConcaveH) -> Result<f64> {
    Ok(bessel_integral(p, h, 0)? - bessel_integral(p, h, 1)?)
}

/// `τ = j² ψ(3, 2x) / I_{0,0}(1)`, computed once.
pub fn tau() -> f64 {
    fixed().tau
}

/// The point `x₀ ∈ (0, 1/2)` where `J₀(2jx)² − J₁(2jx)²` changes sign.
pub fn sign_change_point() -> f64 {
    fixed().x0
}

fn check_w(w: f64, allow_zero: bool) -> Result<()> {
    let ok = if allow_zero { (0.0..=1.0).contains(&w) } else { w > 0.0 && w <= 1.0 };
    if ok {
        Ok(())
    } else {
        Err(Error::Domain(format!("w = {w} is outside {}", if allow_zero { "[0, 1]" } else { "(0, 1]" })))
    }
}

fn psi135(h: &ConcaveH) -> [f64; 3] {
    let f = fixed();
    let v = integrals(f.j, f.x0, &f.rule, h, &[1, 3, 5]);
    [v[0].0 - v[0].1, v[1].0 - v[1].1, v[2].0 - v[2].1]
}

/// `J(h) = ψ(1,h) + (2τ/3)ψ(3,h)w² + (τ²/5)ψ(5,h)w⁴`.
pub fn j_functional(h: &ConcaveH, w: f64) -> Result<f64> {
    check_w(w, false)?;
    let t = tau();
    let [p1, p3, p5] = psi135(h);
    Ok(p1 + 2.0 * t / 3.0 * p3 * w * w + t * t / 5.0 * p5 * w.powi(4))
}

/// `I_{1,0}(h) + (2τ/3)w² I_{3,0}(h) + (τ²/5)w⁴ I_{5,0}(h)`.
pub fn d_functional(h: &ConcaveH, w: f64) -> Result<f64> {
    check_w(w, false)?;
    let f = fixed();
    let t = f.tau;
    let v = integrals(f.j, f.x0, &f.rule, h, &[1, 3, 5]);
    Ok(v[0].0 + 2.0 * t / 3.0 * w * w * v[1].0 + t * t / 5.0 * w.powi(4) * v[2].0)
}

/// `Q(w)` evaluated with an arbitrary `τ`.
pub fn q_with_tau(t: f64, w: f64) -> Result<f64> {
    check_w(w, true)?;
    let f = fixed();
    let w2 = w * w;
    let num = 2.0 * t / 3.0 * f.psi3 + t * t / 5.0 * f.psi5 * w2 - t * t / (3.0 * f.j * f.j) * f.i00;
    let den = (1.0 + 2.0 * t / 3.0 * w2 + t * t / 5.0 * w2 * w2) * f.i00;
    Ok(num / den)
}

pub fn q(w: f64) -> Result<f64> {
    q_with_tau(tau(), w)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstantReport {
    #[serde(rename = "I00")]
    pub i00: f64,
    pub psi1: f64,
    pub psi3: f64,
    pub psi5: f64,
    pub tau: f64,
    pub x0: f64,
    #[serde(rename = "M")]
    pub m: f64,
    pub constant: f64,
    #[serde(rename = "Q_samples")]
    pub q_samples: Vec<(f64, f64)>,
}

impl ConstantReport {
    /// Largest deviation of the stored `τ` and constant from their
    /// recomposition out of the other fields.
    pub fn consistency_error(&self) -> f64 {
        let j = fixed().j;
        let tau_err = (self.tau - j * j * self.psi3 / self.i00).abs();
        let const_err = (self.constant - 4.0 * j * j * self.m).abs();
        tau_err.max(const_err)
    }
}

/// Number of `Q` samples on `[0, 1]` in the report.
pub const Q_SAMPLES: usize = 11;

pub fn explicit_constant() -> ConstantReport {
    let f = fixed();
    let m = f.j * f.j * f.psi3 * f.psi3 / (3.0 * f.i00 * f.i00);
    let q_samples = (0..Q_SAMPLES)
        .map(|i| {
            let w = i as f64 / (Q_SAMPLES - 1) as f64;
            (w, q(w).expect("w in [0, 1]"))
        })
        .collect();
    ConstantReport {
        i00: f.i00,
        psi1: f.psi1,
        psi3: f.psi3,
        psi5: f.psi5,
        tau: f.tau,
        x0: f.x0,
        m,
        constant: 4.0 * f.j * f.j * m,
        q_samples,
    }
}

/// Whether `Q(0)` at `τ` beats `τ ± δ` for `δ ∈ {0.01, 0.05, 0.1}`.
pub fn tau_optimality() -> bool {
    let t = tau();
    let best = q_with_tau(t, 0.0).expect("w = 0 is valid");
    [0.01, 0.05, 0.1]
        .iter()
        .all(|&d| [t - d, t + d].iter().all(|&s| q_with_tau(s, 0.0).expect("w = 0 is valid") < best))
}

/// Second difference of `τ ↦ Q(0)` over `{τ − δ, τ, τ + δ}` and the vertex
/// of the parabola through those three samples.
pub fn tau_parabola(delta: f64) -> (f64, f64) {
    let t = tau();
    let f = |s: f64| q_with_tau(s, 0.0).expect("w = 0 is valid");
    let (fm, f0, fp) = (f(t - delta), f(t), f(t + delta));
    let second = fm - 2.0 * f0 + fp;
    (second, t - delta * (fp - fm) / (2.0 * second))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinimizerReport {
    pub w: f64,
    pub min_j: f64,
    pub j_linear: f64,
    pub argmin_description: String,
    /// `min J − J(2x)` over every candidate other than `2x` itself.
    pub gap_to_2x: f64,
    pub n_candidates: usize,
    /// Smallest gap among the single-corner candidates with corner `a < x₀`.
    pub corner_gap: f64,
    /// Smallest gap among the affine candidates with `h(0) > 0`.
    pub affine_gap: f64,
}

/// `J(h) − J(2x)`.
pub fn gap_to_linear(h: &ConcaveH, w: f64) -> Result<f64> {
    Ok(j_functional(h, w)? - j_functional(&ConcaveH::linear(), w)?)
}

/// Single-corner profiles `0 → (a, c) → (1/2, 1)` with `a < x₀`, `c > 2a`.
pub fn corner_candidates() -> Vec<ConcaveH> {
    let x0 = sign_change_point();
    let mut out = Vec::new();
    for i in 1..=12 {
        let a = x0 * i as f64 / 13.0;
        for k in 1..=8 {
            let c = 2.0 * a + (1.0 - 2.0 * a) * k as f64 / 9.0;
            if let Ok(h) = ConcaveH::new(vec![0.0, a, 0.5], vec![0.0, c, 1.0]) {
                out.push(h);
            }
        }
    }
    out
}

/// Affine profiles `h0 + (1 − h0)·2x` with `h0 > 0`.
pub fn affine_candidates() -> Vec<ConcaveH> {
    (1..=20)
        .map(|i| {
            let h0 = i as f64 / 20.0;
            ConcaveH::new(vec![0.0, 0.5], vec![h0, 1.0]).expect("affine profile is valid")
        })
        .collect()
}

/// Random concave profile with at most `max_breakpoints` breakpoints.
pub fn random_concave_h<R: Rng>(rng: &mut R, max_breakpoints: usize) -> ConcaveH {
    loop {
        let n_interior = rng.gen_range(0..=max_breakpoints.saturating_sub(2));
        let mut interior: Vec<f64> = (0..n_interior).map(|_| rng.gen_range(0.0..0.5)).collect();
        interior.sort_by(f64::total_cmp);
        interior.dedup_by(|a, b| (*a - *b).abs() < 1e-6);
        interior.retain(|&x| x > 1e-6 && x < 0.5 - 1e-6);
        let mut slopes: Vec<f64> = (0..=interior.len()).map(|_| (rng.gen_range(-3.0..3.0_f64)).exp()).collect();
        if rng.gen_bool(0.2) {
            let flat = rng.gen_range(0..slopes.len());
            slopes[flat] = 0.0;
        }
        slopes.sort_by(|a, b| b.total_cmp(a));
        let h0 = if rng.gen_bool(0.3) { 0.0 } else { rng.gen_range(0.0..1.0) };
        if let Ok(h) = ConcaveH::from_slopes(h0, &interior, &slopes) {
            return h;
        }
    }
}

fn slopes_of(h: &ConcaveH) -> Vec<f64> {
    h.breakpoints()
        .windows(2)
        .zip(h.values().windows(2))
        .map(|(x, v)| ((v[1] - v[0]) / (x[1] - x[0])).max(0.0))
        .collect()
}

/// Random and structural search for concave `h` with `J(h) < J(2x)`.
/// `n_trials` random profiles are drawn; the best few are then improved by a
/// local random search on their slopes and offset.
pub fn minimizer_search(w: f64, n_trials: usize, seed: u64) -> Result<MinimizerReport> {
    check_w(w, false)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let j_linear = j_functional(&ConcaveH::linear(), w)?;
    let mut scored: Vec<(f64, ConcaveH)> = Vec::with_capacity(n_trials + 200);
    for _ in 0..n_trials {
        let h = random_concave_h(&mut rng, 16);
        scored.push((j_functional(&h, w)?, h));
    }
    let min_gap = |cands: Vec<ConcaveH>| -> Result<f64> {
        cands.iter().try_fold(f64::INFINITY, |m, h| Ok(m.min(j_functional(h, w)? - j_linear)))
    };
    let corner = corner_candidates();
    let affine = affine_candidates();
    let corner_gap = min_gap(corner.clone())?;
    let affine_gap = min_gap(affine.clone())?;
    for h in corner.into_iter().chain(affine) {
        scored.push((j_functional(&h, w)?, h));
    }
    scored.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut polished = Vec::new();
    for (start_j, start) in scored.iter().take(4) {
        let (mut best_j, mut best) = (*start_j, start.clone());
        let interior: Vec<f64> = best.breakpoints()[1..best.breakpoints().len() - 1].to_vec();
        let mut step = 0.5;
        for _ in 0..150 {
            let h0 = (best.values()[0] + step * 0.2 * rng.gen_range(-1.0..1.0)).clamp(0.0, 1.0);
            let mut slopes: Vec<f64> =
                slopes_of(&best).iter().map(|s| s * (step * rng.gen_range(-1.0..1.0_f64)).exp()).collect();
            slopes.sort_by(|a, b| b.total_cmp(a));
            if let Ok(h) = ConcaveH::from_slopes(h0, &interior, &slopes) {
                let jh = j_functional(&h, w)?;
                if jh < best_j {
                    best_j = jh;
                    best = h;
                    continue;
                }
            }
            step = (step * 0.97).max(1e-3);
        }
        polished.push((best_j, best));
    }
    let n_candidates = scored.len() + polished.len();
    scored.extend(polished);
    let (min_j, argmin) = scored
        .into_iter()
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .ok_or_else(|| Error::Optimizer("no candidates".into()))?;
    Ok(MinimizerReport {
        w,
        min_j,
        j_linear,
        argmin_description: argmin.describe(),
        gap_to_2x: min_j - j_linear,
        n_candidates,
        corner_gap,
        affine_gap,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymmetricBound {
    pub diameter: f64,
    pub width: f64,
    /// `μ₁` from the finite element solver.
    pub lhs: f64,
    /// `4j²/D² − 0.432·w²/D⁴`.
    pub rhs: f64,
    pub margin: f64,
    /// Whether the thin-domain solver was used.
    pub thin: bool,
    pub n_dof: usize,
}

/// Checks `μ₁ ≤ 4j²/D² − 0.432·w²/D⁴` on a polygon symmetric about the
/// perpendicular bisector of its diameter. Polygons of aspect below
/// [`THIN_ASPECT`] go through the thin-domain solver with `h_fem` measured
/// along the diameter; the rest are meshed directly at `h_fem`.
pub fn verify_symmetric_bound(poly: &ConvexPolygon, h_fem: f64) -> Result<SymmetricBound> {
    let asym = bisector_asymmetry(poly);
    if asym > SYMMETRY_TOL {
        return Err(Error::Domain(format!(
            "polygon is not symmetric about the bisector of its diameter (mismatch {asym:.3e} D)"
        )));
    }
    let d = diameter(poly);
    let width = width_orthogonal(poly, &d.direction);
    let aspect = rescale_to_unit_aspect(poly)?;
    let thin = aspect.width / aspect.diameter < THIN_ASPECT;
    let res = if thin { neumann_eigs_thin(poly, 1, h_fem)? } else { neumann_eigs(poly, 1, h_fem)? };
    let j = fixed().j;
    let lhs = res.values[1];
    let rhs = 4.0 * j * j / d.length.powi(2) - EXPLICIT_CONSTANT * width * width / d.length.powi(4);
    Ok(SymmetricBound { diameter: d.length, width, lhs, rhs, margin: rhs - lhs, thin, n_dof: res.n_dof })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn profile_validation() {
        assert!(ConcaveH::new(vec![0.0, 0.25, 0.5], vec![0.0, 0.2, 1.0]).is_err());
        assert!(ConcaveH::new(vec![0.0, 0.5], vec![0.0, 0.9]).is_err());
        assert!(ConcaveH::unnormalized(vec![0.0, 0.5], vec![0.0, 0.9]).is_ok());
        assert!(ConcaveH::new(vec![0.0, 0.6], vec![0.0, 1.0]).is_err());
        assert!(ConcaveH::unnormalized(vec![0.0, 0.5], vec![0.0, 1.2]).is_err());
        assert!((ConcaveH::linear().eval(0.2) - 0.4).abs() < 1e-15);
    }

    #[test]
    fn zero_power_ignores_profile() {
        let a = bessel_integral(0, &ConcaveH::linear(), 0).unwrap();
        let b = bessel_integral(0, &ConcaveH::new(vec![0.0, 0.1, 0.5], vec![0.5, 0.9, 1.0]).unwrap(), 0).unwrap();
        assert!((a - b).abs() < 1e-14);
        let zero = ConcaveH::constant(0.0).unwrap();
        for p in [1, 3, 5] {
            assert_eq!(psi(p, &zero).unwrap(), 0.0);
        }
        assert!(bessel_integral(2, &zero, 0).is_err());
    }

    #[test]
    fn integral_against_closed_form() {
        // ∫₀^{1/2} 2x J₀(2jx)² dx = (1/2j²)·∫₀^j t J₀(t)² dt = J₁(j)²/4
        let j = bessel_zero(0.0, 1).unwrap();
        let j1 = bessel_j_unchecked(1.0, j);
        let i10 = bessel_integral(1, &ConcaveH::linear(), 0).unwrap();
        assert!((i10 - 0.25 * j1 * j1).abs() < 1e-13, "{i10}");
        // reference value from an independent adaptive quadrature
        let i00 = bessel_integral(0, &ConcaveH::constant(1.0).unwrap(), 0).unwrap();
        assert!((i00 - 0.236_735_207_982_782_2).abs() < 1e-13, "{i00}");
    }

    #[test]
    fn linear_profile_identity() {
        assert!(psi(1, &ConcaveH::linear()).unwrap().abs() < 1e-12);
    }

    #[test]
    fn sign_change_point_brackets() {
        let x0 = sign_change_point();
        let j = bessel_zero(0.0, 1).unwrap();
        let g = |x: f64| bessel_j_unchecked(0.0, 2.0 * j * x).powi(2) - bessel_j_unchecked(1.0, 2.0 * j * x).powi(2);
        assert!(g(x0 - 1e-9) > 0.0 && g(x0 + 1e-9) < 0.0);
    }

    #[test]
    fn report_is_consistent() {
        let r = explicit_constant();
        assert!(r.consistency_error() < 1e-12);
        assert_eq!(r.q_samples.len(), Q_SAMPLES);
        assert!((r.q_samples[0].1 - r.m).abs() < 1e-15);
        let json = serde_json::to_value(&r).unwrap();
        assert!(json.get("I00").is_some() && json.get("Q_samples").is_some());
    }

    #[test]
    fn parabola_vertex_is_tau() {
        let (second, vertex) = tau_parabola(0.1);
        assert!(second < 0.0);
        assert!((vertex - tau()).abs() < 1e-9);
        assert!(tau_optimality());
    }

    #[test]
    fn structural_candidates_lose() {
        for w in [0.25, 0.5, 1.0] {
            for h in corner_candidates().iter().chain(affine_candidates().iter()) {
                assert!(gap_to_linear(h, w).unwrap() > 0.0, "{} at w = {w}", h.describe());
            }
        }
        assert_eq!(gap_to_linear(&ConcaveH::linear(), 0.5).unwrap(), 0.0);
    }
}
