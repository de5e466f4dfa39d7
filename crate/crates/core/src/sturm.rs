//! The weighted Neumann problem `−(p u′)′ = μ p u` on `(0, 1)`, the sharp
//! Kröger values `μ*_{k,d}` and their maximizing profiles.
//!
//! The weight is stored through its profile `q = p^{1/(d−1)}`, which is
//! concave and piecewise linear; `p = q^{d−1}` is then a piecewise
//! polynomial that the element quadrature integrates exactly.

use crate::eigen::{smallest_generalized, EigenOptions};
use crate::error::{Error, Result};
use crate::sparse::SparseSymmetric;
use crate::specfun::{bessel_zero, gauss_legendre};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Relative slack on the concavity of `q` (second differences, slope form).
pub const CONCAVITY_TOL: f64 = 1e-10;

/// Piecewise-linear profile `q` on `[0, 1]` housing the weight `p = q^{d−1}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawProfileWeight", into = "RawProfileWeight")]
pub struct ProfileWeight {
    breakpoints: Vec<f64>,
    q: Vec<f64>,
    dim: usize,
}

#[derive(Serialize, Deserialize)]
struct RawProfileWeight {
    d: usize,
    breakpoints: Vec<f64>,
    q: Vec<f64>,
}

impl TryFrom<RawProfileWeight> for ProfileWeight {
    type Error = Error;

    fn try_from(raw: RawProfileWeight) -> Result<Self> {
        ProfileWeight::new(raw.breakpoints, raw.q, raw.d)
    }
}

impl From<ProfileWeight> for RawProfileWeight {
    fn from(w: ProfileWeight) -> Self {
        RawProfileWeight { d: w.dim, breakpoints: w.breakpoints, q: w.q }
    }
}

impl ProfileWeight {
    pub fn new(breakpoints: Vec<f64>, q: Vec<f64>, dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidWeight(format!("dimension must be at least 2, got {dim}")));
        }
        if breakpoints.len() < 2 || breakpoints.len() != q.len() {
            return Err(Error::InvalidWeight(format!(
                "need matching breakpoints and values (got {} and {})",
                breakpoints.len(),
                q.len()
            )));
        }
        if breakpoints[0] != 0.0 || *breakpoints.last().expect("non-empty") != 1.0 {
            return Err(Error::InvalidWeight("breakpoints must start at 0 and end at 1".into()));
        }
        if breakpoints.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidWeight("breakpoints must be strictly increasing".into()));
        }
        if q.iter().any(|&v| !(v >= 0.0) || !v.is_finite()) {
            return Err(Error::InvalidWeight("profile values must be finite and nonnegative".into()));
        }
        if q.iter().all(|&v| v == 0.0) {
            return Err(Error::InvalidWeight("profile is identically zero".into()));
        }
        check_concave(&breakpoints, &q).map_err(Error::InvalidWeight)?;
        Ok(ProfileWeight { breakpoints, q, dim })
    }

    /// `q ≡ 1`.
    pub fn constant(dim: usize) -> Result<Self> {
        ProfileWeight::new(vec![0.0, 1.0], vec![1.0, 1.0], dim)
    }

    /// Symmetric tent with apex `q(1/2) = 1`.
    pub fn tent(dim: usize) -> Result<Self> {
        ProfileWeight::new(vec![0.0, 0.5, 1.0], vec![0.0, 1.0, 0.0], dim)
    }

    /// Symmetric isosceles trapezoid: `q = 1` on `[(1−plateau)/2, (1+plateau)/2]`,
    /// linear to zero at both ends. `plateau = 0` is the tent.
    pub fn trapezoid(plateau: f64, dim: usize) -> Result<Self> {
        if !(0.0..1.0).contains(&plateau) {
            return Err(Error::InvalidWeight(format!("plateau fraction must lie in [0, 1), got {plateau}")));
        }
        if plateau == 0.0 {
            return ProfileWeight::tent(dim);
        }
        let a = 0.5 * (1.0 - plateau);
        ProfileWeight::new(vec![0.0, a, 1.0 - a, 1.0], vec![0.0, 1.0, 1.0, 0.0], dim)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn q_values(&self) -> &[f64] {
        &self.q
    }

    /// Linear interpolation of `q`; zero outside `[0, 1]`.
    pub fn q(&self, x: f64) -> f64 {
        if !(0.0..=1.0).contains(&x) {
            return 0.0;
        }
        let i = match self.breakpoints.binary_search_by(|b| b.total_cmp(&x)) {
            Ok(i) => return self.q[i],
            Err(i) => i,
        };
        let (x0, x1) = (self.breakpoints[i - 1], self.breakpoints[i]);
        let t = (x - x0) / (x1 - x0);
        self.q[i - 1] * (1.0 - t) + self.q[i] * t
    }

    pub fn p(&self, x: f64) -> f64 {
        self.q(x).powi(self.dim as i32 - 1)
    }

    /// Weight `c·p`, i.e. profile `c^{1/(d−1)}·q`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        let f = c.powf(1.0 / (self.dim as f64 - 1.0));
        ProfileWeight::new(self.breakpoints.clone(), self.q.iter().map(|v| v * f).collect(), self.dim)
    }

    /// `x ↦ q(1 − x)`.
    pub fn reflected(&self) -> Result<Self> {
        let bp: Vec<f64> = self.breakpoints.iter().rev().map(|x| 1.0 - x).collect();
        let q: Vec<f64> = self.q.iter().rev().copied().collect();
        ProfileWeight::new(bp, q, self.dim)
    }

    pub fn with_dim(&self, dim: usize) -> Result<Self> {
        ProfileWeight::new(self.breakpoints.clone(), self.q.clone(), dim)
    }
}

pub(crate) fn check_concave(x: &[f64], v: &[f64]) -> std::result::Result<(), String> {
    let slopes: Vec<f64> = x.windows(2).zip(v.windows(2)).map(|(xs, vs)| (vs[1] - vs[0]) / (xs[1] - xs[0])).collect();
    let scale = 1.0 + slopes.iter().fold(0.0_f64, |m, s| m.max(s.abs()));
    for (i, w) in slopes.windows(2).enumerate() {
        if w[1] - w[0] > CONCAVITY_TOL * scale {
            return Err(format!("profile is not concave at breakpoint {}", i + 1));
        }
    }
    Ok(())
}

/// Ordered eigenvalues with eigenvectors on the solver mesh.
#[derive(Debug, Clone)]
pub struct EigenResult {
    pub values: Vec<f64>,
    /// Unit weighted-L² eigenvectors (`uᵀ M u = 1`) at the mesh nodes.
    pub vectors: Vec<Vec<f64>>,
    pub mesh_size: f64,
    pub residuals: Vec<f64>,
    pub n_dof: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EigenReport {
    pub mu: Vec<f64>,
    pub h: f64,
    pub n_dof: usize,
    pub residuals: Vec<f64>,
}

impl EigenResult {
    pub fn report(&self) -> EigenReport {
        EigenReport { mu: self.values.clone(), h: self.mesh_size, n_dof: self.n_dof, residuals: self.residuals.clone() }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.report()).expect("report serializes")
    }
}

/// Stiffness and mass matrices of the weighted problem on a uniform mesh of
/// `n_elems` P1 elements.
pub fn assemble_weighted(weight: &ProfileWeight, n_elems: usize) -> Result<(SparseSymmetric, SparseSymmetric)> {
    let d = weight.dim;
    let order = (d + 1).div_ceil(2) + 1;
    let rule = gauss_legendre(order)?;
    let h = 1.0 / n_elems as f64;
    let bp = weight.breakpoints();
    let mut kt = Vec::with_capacity(3 * n_elems);
    let mut mt = Vec::with_capacity(3 * n_elems);
    let mut cursor = 0usize;
    for e in 0..n_elems {
        let x0 = e as f64 * h;
        let x1 = if e + 1 == n_elems { 1.0 } else { (e + 1) as f64 * h };
        // split the element at interior breakpoints so p is polynomial on each piece
        let mut cuts = vec![x0];
        while cursor < bp.len() && bp[cursor] <= x0 {
            cursor += 1;
        }
        let mut c = cursor;
        while c < bp.len() && bp[c] < x1 {
            cuts.push(bp[c]);
            c += 1;
        }
        cuts.push(x1);
        let (mut kp, mut m00, mut m01, mut m11) = (0.0, 0.0, 0.0, 0.0);
        for piece in cuts.windows(2) {
            let (a, b) = (piece[0], piece[1]);
            let half = 0.5 * (b - a);
            let mid = 0.5 * (a + b);
            for (&t, &w) in rule.nodes().iter().zip(rule.weights()) {
                let x = mid + half * t;
                let p = weight.p(x) * w * half;
                let phi1 = (x - x0) / (x1 - x0);
                let phi0 = 1.0 - phi1;
                kp += p;
                m00 += p * phi0 * phi0;
                m01 += p * phi0 * phi1;
                m11 += p * phi1 * phi1;
            }
        }
        let inv_len2 = 1.0 / ((x1 - x0) * (x1 - x0));
        kt.push((e, e, kp * inv_len2));
        kt.push((e + 1, e + 1, kp * inv_len2));
        kt.push((e, e + 1, -kp * inv_len2));
        mt.push((e, e, m00));
        mt.push((e + 1, e + 1, m11));
        mt.push((e, e + 1, m01));
    }
    let k = SparseSymmetric::from_triplets(n_elems + 1, kt);
    let m = SparseSymmetric::from_triplets(n_elems + 1, mt);
    if let Some(node) = m.diagonal().iter().position(|&v| !(v > 0.0)) {
        return Err(Error::RankDeficientMass { node });
    }
    Ok((k, m))
}

/// First `k + 1` eigenvalues (including `μ_0 = 0`) of the weighted Neumann
/// problem, conforming P1 Galerkin on `n_elems` uniform elements.
pub fn sl_eigs(weight: &ProfileWeight, k: usize, n_elems: usize) -> Result<EigenResult> {
    if k == 0 {
        return Err(Error::Domain("k must be positive".into()));
    }
    if n_elems < 8 * k {
        return Err(Error::Domain(format!("need n_elems >= 8k = {}, got {n_elems}", 8 * k)));
    }
    let (kmat, mmat) = assemble_weighted(weight, n_elems)?;
    let pairs = smallest_generalized(&kmat, &mmat, k + 1, &EigenOptions::default())?;
    Ok(EigenResult {
        values: pairs.values,
        vectors: pairs.vectors,
        mesh_size: 1.0 / n_elems as f64,
        residuals: pairs.residuals,
        n_dof: n_elems + 1,
    })
}

/// Sharp upper bound `μ*_{k,d}` for `D² μ_k` over convex bodies in `ℝ^d`.
pub fn kroger_bound(k: usize, d: usize) -> Result<f64> {
    if !(1..=20).contains(&k) || !(2..=22).contains(&d) {
        return Err(Error::Domain(format!("kroger_bound supports 1 <= k <= 20 and 2 <= d <= 22, got k = {k}, d = {d}")));
    }
    let kf = k as f64;
    Ok(match d {
        2 => (2.0 * bessel_zero(0.0, 1)? + (kf - 1.0) * PI).powi(2),
        3 => ((kf + 1.0) * PI).powi(2),
        _ => {
            let nu = (d as f64 - 2.0) / 2.0;
            if k % 2 == 1 {
                4.0 * bessel_zero(nu, k.div_ceil(2))?.powi(2)
            } else {
                (bessel_zero(nu, k / 2)? + bessel_zero(nu, (k + 2) / 2)?).powi(2)
            }
        }
    })
}

/// Default mesh for the plateau search in [`maximizer_profile`].
pub const DEFAULT_OPTIMIZER_ELEMS: usize = 2048;

/// Maximizing profile of `μ_k` for dimension `d`.
///
/// * `k = 1`: the symmetric tent.
/// * `d = 2`, `k ≥ 2`: the symmetric trapezoid; its plateau fraction is
///   found by [`optimize_trapezoid`] unless given.
/// * `d ≥ 4`, `k ≥ 2`: with a plateau given, that symmetric trapezoid.
///   Otherwise the two-cone tent that attains `μ*_{k,d}`: symmetric for odd
///   `k`; for even `k` the apex sits at `j_{ν,k/2} / (j_{ν,k/2} + j_{ν,k/2+1})`,
///   `ν = (d − 2)/2`, where both cones carry a Neumann-matched Bessel mode
///   and meet at a common node. No symmetric trapezoid reaches the bound
///   in that case.
pub fn maximizer_profile(k: usize, d: usize, plateau: Option<f64>) -> Result<ProfileWeight> {
    if k == 0 || d < 2 {
        return Err(Error::Domain(format!("need k >= 1 and d >= 2, got k = {k}, d = {d}")));
    }
    if k == 1 {
        if plateau.is_some() {
            return Err(Error::Domain("the k = 1 maximizer is the tent; no plateau may be given".into()));
        }
        return ProfileWeight::tent(d);
    }
    if d == 3 {
        return Err(Error::Domain(
            "for d = 3 and k >= 2 the maximizers form a non-unique family; use strictness_check".into(),
        ));
    }
    match plateau {
        Some(p) => ProfileWeight::trapezoid(p, d),
        None if d == 2 => ProfileWeight::trapezoid(optimize_trapezoid(k, d, DEFAULT_OPTIMIZER_ELEMS)?.plateau, d),
        None => {
            let apex = cone_apex(k, d)?;
            ProfileWeight::new(vec![0.0, apex, 1.0], vec![0.0, 1.0, 0.0], d)
        }
    }
}

/// Apex position of the two-cone maximizer for `d ≥ 4`.
pub fn cone_apex(k: usize, d: usize) -> Result<f64> {
    if k == 0 || d < 4 {
        return Err(Error::Domain(format!("cone_apex needs k >= 1 and d >= 4, got k = {k}, d = {d}")));
    }
    if k % 2 == 1 {
        return Ok(0.5);
    }
    let nu = (d as f64 - 2.0) / 2.0;
    let (a, b) = (bessel_zero(nu, k / 2)?, bessel_zero(nu, k / 2 + 1)?);
    Ok(a / (a + b))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrapezoidOptimum {
    pub plateau: f64,
    pub mu_k: f64,
}

const PLATEAU_MAX: f64 = 0.999;

/// Maximizes `μ_k` over symmetric trapezoid profiles: a coarse scan of the
/// plateau fraction on `[0, 0.999]` followed by golden-section refinement
/// around the best sample.
pub fn optimize_trapezoid(k: usize, d: usize, n_elems: usize) -> Result<TrapezoidOptimum> {
    if k < 2 || d < 2 || d == 3 {
        return Err(Error::Domain(format!("optimize_trapezoid needs k >= 2 and d >= 2, d != 3 (got k = {k}, d = {d})")));
    }
    let eval = |plateau: f64| -> Result<f64> {
        let w = ProfileWeight::trapezoid(plateau, d)?;
        Ok(sl_eigs(&w, k, n_elems)?.values[k])
    };
    const SAMPLES: usize = 40;
    let grid: Vec<f64> = (0..=SAMPLES).map(|i| PLATEAU_MAX * i as f64 / SAMPLES as f64).collect();
    let values = grid.iter().map(|&p| eval(p)).collect::<Result<Vec<f64>>>()?;
    let best = values
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .ok_or_else(|| Error::Optimizer("empty plateau grid".into()))?;
    let mut lo = grid[best.saturating_sub(1)];
    let mut hi = grid[(best + 1).min(SAMPLES)];
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - ratio * (hi - lo);
    let mut x2 = lo + ratio * (hi - lo);
    let mut f1 = eval(x1)?;
    let mut f2 = eval(x2)?;
    while hi - lo > 1e-6 {
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = eval(x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = eval(x2)?;
        }
    }
    let candidates = [(values[best], grid[best]), (f1, x1), (f2, x2)];
    let (mu_k, plateau) = candidates.iter().copied().fold((f64::NEG_INFINITY, 0.0), |acc, c| if c.0 > acc.0 { c } else { acc });
    if !mu_k.is_finite() {
        return Err(Error::Optimizer("trapezoid search produced a non-finite eigenvalue".into()));
    }
    Ok(TrapezoidOptimum { plateau, mu_k })
}

/// Leading-order P1 eigenvalue error allowance at level `mu`: `μ²h²`, twelve
/// times the smooth-eigenfunction estimate `μ²h²/12`.
pub fn discretization_tolerance(mu: f64, n_elems: usize) -> f64 {
    let h = 1.0 / n_elems as f64;
    mu * mu * h * h
}

/// Whether the computed `μ_k` of `weight` stays below `μ*_{k,d}` up to the
/// discretization allowance.
pub fn strictness_check(weight: &ProfileWeight, k: usize, n_elems: usize) -> Result<bool> {
    let bound = kroger_bound(k, weight.dim())?;
    let mu = sl_eigs(weight, k, n_elems)?.values[k];
    Ok(mu <= bound + discretization_tolerance(bound, n_elems))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weight_validation() {
        assert!(ProfileWeight::new(vec![0.0, 0.5, 1.0], vec![1.0, 0.0, 1.0], 2).is_err());
        assert!(ProfileWeight::new(vec![0.0, 1.0], vec![0.0, 0.0], 2).is_err());
        assert!(ProfileWeight::new(vec![0.0, 1.0], vec![1.0, -0.1], 2).is_err());
        assert!(ProfileWeight::new(vec![0.1, 1.0], vec![1.0, 1.0], 2).is_err());
        assert!(ProfileWeight::new(vec![0.0, 1.0], vec![1.0, 1.0], 1).is_err());
        assert!(ProfileWeight::new(vec![0.0, 0.0, 1.0], vec![1.0, 1.0, 1.0], 2).is_err());
        let t = ProfileWeight::tent(3).unwrap();
        assert!((t.q(0.25) - 0.5).abs() < 1e-15);
        assert!((t.p(0.25) - 0.25).abs() < 1e-15);
        assert_eq!(t.q(1.5), 0.0);
    }

    #[test]
    fn weight_json_schema() {
        let w = ProfileWeight::trapezoid(0.25, 4).unwrap();
        let json = serde_json::to_value(&w).unwrap();
        assert_eq!(json["d"], 4);
        assert_eq!(json["breakpoints"].as_array().unwrap().len(), 4);
        let back: ProfileWeight = serde_json::from_value(json).unwrap();
        assert_eq!(back, w);
        let bad = r#"{"d": 2, "breakpoints": [0, 0.5, 1], "q": [1, 0, 1]}"#;
        assert!(serde_json::from_str::<ProfileWeight>(bad).is_err());
    }

    #[test]
    fn kroger_case_table() {
        let j01 = bessel_zero(0.0, 1).unwrap();
        assert!((kroger_bound(1, 2).unwrap() - 4.0 * j01 * j01).abs() < 1e-12);
        assert!((kroger_bound(1, 2).unwrap() - 23.1327439).abs() < 1e-6);
        assert!((kroger_bound(1, 3).unwrap() - 4.0 * PI * PI).abs() < 1e-12);
        let (a, b) = (bessel_zero(1.0, 1).unwrap(), bessel_zero(1.0, 2).unwrap());
        assert!((a - 3.8317).abs() < 1e-4 && (b - 7.0156).abs() < 1e-4);
        assert!((kroger_bound(2, 4).unwrap() - (a + b).powi(2)).abs() < 1e-12);
        assert!(kroger_bound(0, 2).is_err());
        assert!(kroger_bound(21, 2).is_err());
        assert!(kroger_bound(1, 23).is_err());
        assert!(kroger_bound(1, 1).is_err());
    }

    #[test]
    fn sl_preconditions() {
        let w = ProfileWeight::constant(2).unwrap();
        assert!(sl_eigs(&w, 0, 64).is_err());
        assert!(sl_eigs(&w, 3, 23).is_err());
        assert!(sl_eigs(&w, 3, 24).is_ok());
    }

    #[test]
    fn vanishing_weight_is_rank_deficient() {
        // q = 0 on [0, 0.5]: not concave, so the type rejects it up front;
        // assemble a zero weight on an interval through dimension 2 anyway by
        // testing the mass check directly with a weight vanishing at a node
        // only (allowed)
        let w = ProfileWeight::tent(2).unwrap();
        assert!(assemble_weighted(&w, 16).is_ok());
        let zero_interval = ProfileWeight::new(vec![0.0, 0.5, 1.0], vec![0.0, 0.0, 1.0], 2);
        assert!(zero_interval.is_err());
    }

    #[test]
    fn constant_weight_cosines() {
        let w = ProfileWeight::constant(2).unwrap();
        let r = sl_eigs(&w, 3, 512).unwrap();
        assert!(r.values[0].abs() < 1e-9 * r.values[1]);
        for k in 1..=3 {
            let exact = (k as f64 * PI).powi(2);
            assert!((r.values[k] - exact).abs() < 1e-6 * exact * 100.0, "k = {k}");
            assert!(r.values[k] >= exact);
        }
    }

    #[test]
    fn even_k_cone_attains_bound_but_trapezoids_fall_short() {
        let b = kroger_bound(2, 4).unwrap();
        let cone = sl_eigs(&maximizer_profile(2, 4, None).unwrap(), 2, 2048).unwrap().values[2];
        assert!((cone - b).abs() < 1e-5 * b, "{cone} vs {b}");
        let best = optimize_trapezoid(2, 4, 512).unwrap();
        assert!(best.mu_k < b * (1.0 - 5e-3), "{best:?}");
    }

    #[test]
    fn maximizer_profile_rules() {
        let t = maximizer_profile(1, 2, None).unwrap();
        assert_eq!(t.breakpoints(), &[0.0, 0.5, 1.0]);
        assert_eq!(t.q_values(), &[0.0, 1.0, 0.0]);
        assert_eq!(maximizer_profile(1, 5, None).unwrap().dim(), 5);
        assert!(maximizer_profile(1, 2, Some(0.2)).is_err());
        assert!(maximizer_profile(2, 3, Some(0.2)).is_err());
        let tr = maximizer_profile(2, 2, Some(0.3)).unwrap();
        assert!((tr.breakpoints()[1] - 0.35).abs() < 1e-15);
        let cone = maximizer_profile(2, 4, None).unwrap();
        let (a, b) = (bessel_zero(1.0, 1).unwrap(), bessel_zero(1.0, 2).unwrap());
        assert!((cone.breakpoints()[1] - a / (a + b)).abs() < 1e-15);
        assert_eq!(maximizer_profile(3, 5, None).unwrap().breakpoints(), &[0.0, 0.5, 1.0]);
    }
}
