//! Bessel functions of the first kind, their zeros, and Gauss–Legendre
//! quadrature.
//!
//! `J_ν(x)` is evaluated with three regimes:
//!
//! * the ascending power series when its terms decrease monotonically
//!   (`x²/4 ≤ ν + 1`) or `x ≤ 5`, where cancellation costs at most one digit;
//! * Miller's backward recurrence normalized by the Gegenbauer sum
//!   `(x/2)^f = Σ (f + 2k) Γ(f + k) / k! · J_{f+2k}(x)` up to `x = 60`;
//! * the Hankel asymptotic expansion beyond.

use crate::error::{Error, Result};
use std::f64::consts::PI;

const SERIES_MAX_X: f64 = 5.0;
const RECURRENCE_MAX_X: f64 = 60.0;
const RESCALE: f64 = 1e250;

/// `J_ν(x)` for real order `ν ≥ 0` and `x ≥ 0`.
pub fn bessel_j(nu: f64, x: f64) -> Result<f64> {
    if !nu.is_finite() || !x.is_finite() {
        return Err(Error::Domain(format!("bessel_j requires finite arguments, got nu = {nu}, x = {x}")));
    }
    if nu < 0.0 || x < 0.0 {
        return Err(Error::Domain(format!("bessel_j requires nu >= 0 and x >= 0, got nu = {nu}, x = {x}")));
    }
    Ok(bessel_j_unchecked(nu, x))
}

pub(crate) fn bessel_j_unchecked(nu: f64, x: f64) -> f64 {
    if x == 0.0 {
        return if nu == 0.0 { 1.0 } else { 0.0 };
    }
    if x <= SERIES_MAX_X || 0.25 * x * x <= nu + 1.0 {
        series(nu, x)
    } else if x <= RECURRENCE_MAX_X {
        backward_recurrence(nu, x)
    } else {
        hankel(nu, x)
    }
}

fn series(nu: f64, x: f64) -> f64 {
    let half = 0.5 * x;
    let lead = (nu * half.ln() - libm::lgamma(nu + 1.0)).exp();
    let q = -half * half;
    let mut term = 1.0;
    let mut sum = 1.0;
    for m in 1..200 {
        let m = m as f64;
        term *= q / (m * (m + nu));
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    lead * sum
}

fn backward_recurrence(nu: f64, x: f64) -> f64 {
    let whole = nu.floor() as usize;
    let frac = nu - nu.floor();
    let mut start = x.ceil().max(whole as f64) as usize + 40;
    if start % 2 == 1 {
        start += 1;
    }

    // Gegenbauer coefficients c_k, k = 0..=start/2.
    let gamma_f1 = libm::tgamma(frac + 1.0);
    let half_start = start / 2;
    let mut coef = Vec::with_capacity(half_start + 1);
    coef.push(gamma_f1);
    let mut ratio = gamma_f1;
    for k in 1..=half_start {
        if k >= 2 {
            ratio *= (frac + k as f64 - 1.0) / k as f64;
        }
        coef.push((frac + 2.0 * k as f64) * ratio);
    }

    let mut upper = 0.0_f64;
    let mut current = 1e-30_f64;
    let mut norm = if start % 2 == 0 { coef[half_start] * current } else { 0.0 };
    let mut wanted = if start == whole { current } else { 0.0 };
    for n in (1..=start).rev() {
        let lower = 2.0 * (frac + n as f64) / x * current - upper;
        upper = current;
        current = lower;
        let order = n - 1;
        if order == whole {
            wanted = current;
        }
        if order % 2 == 0 {
            norm += coef[order / 2] * current;
        }
        if current.abs() > RESCALE {
            current /= RESCALE;
            upper /= RESCALE;
            norm /= RESCALE;
            wanted /= RESCALE;
        }
    }
    wanted * (0.5 * x).powf(frac) / norm
}

fn hankel(nu: f64, x: f64) -> f64 {
    let mu = 4.0 * nu * nu;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut a = 1.0;
    let mut last = f64::INFINITY;
    for k in 1..60 {
        let kf = k as f64;
        a *= (mu - (2.0 * kf - 1.0).powi(2)) / (kf * 8.0 * x);
        if a.abs() > last || a == 0.0 {
            break;
        }
        last = a.abs();
        match k % 4 {
            1 => q += a,
            2 => p -= a,
            3 => q -= a,
            _ => p += a,
        }
        if a.abs() < 1e-17 {
            break;
        }
    }
    let chi = x - (0.5 * nu + 0.25) * PI;
    (2.0 / (PI * x)).sqrt() * (p * chi.cos() - q * chi.sin())
}

/// `J_ν'(x) = (ν/x) J_ν(x) − J_{ν+1}(x)`.
pub fn bessel_j_prime(nu: f64, x: f64) -> Result<f64> {
    let next = bessel_j(nu + 1.0, x)?;
    if x == 0.0 {
        return Ok(if nu == 1.0 {
            0.5
        } else if nu == 0.0 || nu > 1.0 {
            0.0
        } else {
            f64::INFINITY
        });
    }
    Ok(nu / x * bessel_j_unchecked(nu, x) - next)
}

/// McMahon's large-zero expansion for `j_{ν,m}`.
pub fn mcmahon_guess(nu: f64, m: usize) -> f64 {
    let beta = (m as f64 + 0.5 * nu - 0.25) * PI;
    let mu = 4.0 * nu * nu;
    let b8 = 8.0 * beta;
    beta - (mu - 1.0) / b8
        - 4.0 * (mu - 1.0) * (7.0 * mu - 31.0) / (3.0 * b8.powi(3))
        - 32.0 * (mu - 1.0) * (83.0 * mu * mu - 982.0 * mu + 3779.0) / (15.0 * b8.powi(5))
}

/// The `m`-th positive zero `j_{ν,m}` of `J_ν`, for `0 ≤ ν ≤ 10`, `1 ≤ m ≤ 20`.
pub fn bessel_zero(nu: f64, m: usize) -> Result<f64> {
    if !(0.0..=10.0).contains(&nu) || !(1..=20).contains(&m) {
        return Err(Error::Domain(format!("bessel_zero supports 0 <= nu <= 10 and 1 <= m <= 20, got nu = {nu}, m = {m}")));
    }
    let mut trace = Vec::new();
    if let Some(root) = newton_from_guess(nu, m, &mut trace) {
        if count_sign_changes(nu, root - 0.1) == m - 1 {
            return Ok(root);
        }
        trace.push(format!("newton root {root} is not the zero of index {m}"));
    }
    bracketed_zero(|t| bessel_j_unchecked(nu, t), m, 0.1, 1e-15)
        .map_err(|e| Error::RootNotConverged { what: format!("j_{{{nu},{m}}}"), trace: format!("{}; {e}", trace.join("; ")) })
}

fn newton_from_guess(nu: f64, m: usize, trace: &mut Vec<String>) -> Option<f64> {
    let mut t = mcmahon_guess(nu, m).max(nu + 0.5);
    for it in 0..60 {
        let f = bessel_j_unchecked(nu, t);
        let df = nu / t * f - bessel_j_unchecked(nu + 1.0, t);
        if df == 0.0 {
            trace.push(format!("iteration {it}: zero derivative at {t}"));
            return None;
        }
        let step = (f / df).clamp(-1.0, 1.0);
        trace.push(format!("iteration {it}: t = {t}, J = {f:e}"));
        t -= step;
        if t <= 0.0 {
            return None;
        }
        if step.abs() <= 4.0 * f64::EPSILON * t {
            return Some(t);
        }
    }
    None
}

fn count_sign_changes(nu: f64, upto: f64) -> usize {
    let step = 0.1;
    let mut count = 0;
    let mut t = 0.05;
    let mut prev = bessel_j_unchecked(nu, t);
    while t + step <= upto {
        t += step;
        let v = bessel_j_unchecked(nu, t);
        if v == 0.0 || (v < 0.0) != (prev < 0.0) {
            count += 1;
        }
        prev = v;
    }
    count
}

/// Finds the `m`-th sign change of `f` on `(0, ∞)` by scanning with `step`,
/// then refines it by bisection.
fn bracketed_zero(f: impl Fn(f64) -> f64, m: usize, step: f64, tol: f64) -> Result<f64> {
    let mut lo = 0.5 * step;
    let mut flo = f(lo);
    let mut found = 0;
    for _ in 0..100_000 {
        let hi = lo + step;
        let fhi = f(hi);
        if fhi == 0.0 || (fhi < 0.0) != (flo < 0.0) {
            found += 1;
            if found == m {
                return Ok(bisect(&f, lo, hi, tol));
            }
        }
        lo = hi;
        flo = fhi;
    }
    Err(Error::RootNotConverged { what: format!("sign change {m}"), trace: "scan exhausted".into() })
}

pub(crate) fn bisect(f: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let mut flo = f(lo);
    if f(hi) == 0.0 {
        return hi;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= tol * mid.abs().max(1.0) || mid == lo || mid == hi {
            return mid;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// The `m`-th positive zero `j'_{ν,m}` of `J_ν'` (the `x = 0` critical
/// point is not counted).
pub fn bessel_prime_zero(nu: f64, m: usize) -> Result<f64> {
    if !(0.0..=10.0).contains(&nu) || m == 0 {
        return Err(Error::Domain(format!("bessel_prime_zero supports 0 <= nu <= 10 and m >= 1, got nu = {nu}, m = {m}")));
    }
    let df = |t: f64| nu / t * bessel_j_unchecked(nu, t) - bessel_j_unchecked(nu + 1.0, t);
    bracketed_zero(df, m, 0.05, 1e-15)
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }
}

/// Gauss–Legendre rule of order `n` (exact for degree `2n − 1`), `1 ≤ n ≤ 256`.
pub fn gauss_legendre(n: usize) -> Result<QuadratureRule> {
    if !(1..=256).contains(&n) {
        return Err(Error::Domain(format!("gauss_legendre supports 1 <= n <= 256, got {n}")));
    }
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        // i-th largest root, Tricomi-style initial guess
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d.is_finite() {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[n - 1 - i] = x;
        nodes[i] = -x;
        weights[n - 1 - i] = w;
        weights[i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    Ok(QuadratureRule { nodes, weights })
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let nf = n as f64;
    (p1, nf * (x * p1 - p0) / (x * x - 1.0))
}

/// Composite Gauss–Legendre integral of `f` over `[a, b]` with `panels`
/// equal panels.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, rule: &QuadratureRule, panels: usize) -> Result<f64> {
    if !(a < b) {
        return Err(Error::Domain(format!("integrate requires a < b, got [{a}, {b}]")));
    }
    if panels == 0 {
        return Err(Error::Domain("integrate requires at least one panel".into()));
    }
    let width = (b - a) / panels as f64;
    let mut total = 0.0;
    for j in 0..panels {
        let lo = a + j as f64 * width;
        let hi = if j + 1 == panels { b } else { lo + width };
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        let mut panel = 0.0;
        for (&t, &w) in rule.nodes.iter().zip(&rule.weights) {
            let x = mid + half * t;
            let v = f(x);
            if !v.is_finite() {
                return Err(Error::NonFinite { x });
            }
            panel += w * v;
        }
        total += panel * half;
    }
    Ok(total)
}

/// Composite rule over consecutive segments `[breaks[i], breaks[i+1]]`,
/// distributing `total_panels` proportionally to segment length (at least
/// one panel per segment).
pub fn integrate_segments(f: impl Fn(f64) -> f64, breaks: &[f64], rule: &QuadratureRule, total_panels: usize) -> Result<f64> {
    let (first, last) = match (breaks.first(), breaks.last()) {
        (Some(&a), Some(&b)) if a < b => (a, b),
        _ => return Err(Error::Domain("integrate_segments needs at least two increasing breakpoints".into())),
    };
    let span = last - first;
    let mut total = 0.0;
    for pair in breaks.windows(2) {
        let (lo, hi) = (pair[0], pair[1]);
        if hi <= lo {
            continue;
        }
        let panels = ((total_panels as f64 * (hi - lo) / span).ceil() as usize).max(1);
        total += integrate(&f, lo, hi, rule, panels)?;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bessel_at_origin() {
        assert_eq!(bessel_j(0.0, 0.0).unwrap(), 1.0);
        assert_eq!(bessel_j(1.0, 0.0).unwrap(), 0.0);
        assert_eq!(bessel_j(2.5, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn negative_arguments_are_domain_errors() {
        assert!(matches!(bessel_j(-1.0, 1.0), Err(Error::Domain(_))));
        assert!(matches!(bessel_j(0.0, -1.0), Err(Error::Domain(_))));
        assert!(matches!(bessel_j(f64::NAN, 1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn half_integer_order_is_elementary() {
        for x in [1.0_f64, 2.0, 5.0, 7.5, 13.0, 30.0, 49.0, 70.0] {
            let exact = (2.0 / (PI * x)).sqrt() * x.sin();
            let got = bessel_j(0.5, x).unwrap();
            assert!((got - exact).abs() <= 1e-12, "x = {x}: {got} vs {exact}");
            // J_{3/2}(x) = sqrt(2/(πx)) (sin x / x − cos x)
            let exact = (2.0 / (PI * x)).sqrt() * (x.sin() / x - x.cos());
            let got = bessel_j(1.5, x).unwrap();
            assert!((got - exact).abs() <= 1e-12, "x = {x}: {got} vs {exact}");
        }
    }

    #[test]
    fn regimes_agree_at_their_seams() {
        for nu in [0.0, 0.3, 1.0, 2.5, 7.0, 10.0] {
            for x in [5.0, 8.0, 12.0] {
                let a = series(nu, x);
                let b = backward_recurrence(nu, x);
                // the series loses a few digits past x = 5
                assert!((a - b).abs() < 1e-11, "nu = {nu}, x = {x}: {a} vs {b}");
            }
            let x = 60.0;
            let a = backward_recurrence(nu, x);
            let b = hankel(nu, x);
            assert!((a - b).abs() < 1e-13, "nu = {nu}: {a} vs {b}");
        }
    }

    #[test]
    fn reference_values() {
        // scipy.special.jv
        let cases = [
            (0.0, 1.0, 0.7651976865579666),
            (0.0, 7.3, 0.28821694763501443),
            (1.0, 12.5, -0.16548380461475973),
            (2.5, 33.0, -0.1383313962349016),
            (0.3, 55.0, -0.10161056306285203),
            (7.0, 9.0, 0.327460879242453),
            (10.0, 45.0, -0.026971402475010925),
            (3.7, 80.0, -0.029829013748213097),
        ];
        for (nu, x, expected) in cases {
            let got = bessel_j(nu, x).unwrap();
            assert!((got - expected).abs() < 1e-13, "J_{nu}({x}) = {got}, expected {expected}");
        }
    }

    #[test]
    fn integer_order_three_term_recurrence() {
        for x in [0.7, 3.0, 8.0, 25.0, 48.0] {
            for n in 1..9 {
                let n = n as f64;
                let lhs = bessel_j(n - 1.0, x).unwrap() + bessel_j(n + 1.0, x).unwrap();
                let rhs = 2.0 * n / x * bessel_j(n, x).unwrap();
                assert!((lhs - rhs).abs() < 1e-12, "n = {n}, x = {x}");
            }
        }
    }

    #[test]
    fn known_zeros() {
        assert!((bessel_zero(0.0, 1).unwrap() - 2.404825557695773).abs() < 1e-13);
        assert!((bessel_zero(0.0, 2).unwrap() - 5.520078110286311).abs() < 1e-13);
        assert!((bessel_zero(0.5, 1).unwrap() - PI).abs() < 1e-13);
        assert!((bessel_zero(1.0, 1).unwrap() - 3.831705970207512).abs() < 1e-12);
        assert!((bessel_zero(1.0, 2).unwrap() - 7.015586669815619).abs() < 1e-12);
        assert!((bessel_zero(10.0, 1).unwrap() - 14.47550068655454).abs() < 1e-11);
    }

    #[test]
    fn zero_out_of_range() {
        assert!(bessel_zero(10.5, 1).is_err());
        assert!(bessel_zero(1.0, 0).is_err());
        assert!(bessel_zero(1.0, 21).is_err());
    }

    #[test]
    fn first_critical_point_of_j1() {
        let z = bessel_prime_zero(1.0, 1).unwrap();
        assert!((z - 1.841183781340659).abs() < 1e-12);
    }

    #[test]
    fn gauss_legendre_small_rules() {
        let r = gauss_legendre(1).unwrap();
        assert_eq!(r.nodes(), &[0.0]);
        assert!((r.weights()[0] - 2.0).abs() < 1e-15);
        let r2 = gauss_legendre(2).unwrap();
        let v = integrate(|x| x * x, -1.0, 1.0, &r2, 1).unwrap();
        assert!((v - 2.0 / 3.0).abs() < 1e-15);
        let r4 = gauss_legendre(4).unwrap();
        let v = integrate(|x| x.powi(6), -1.0, 1.0, &r4, 1).unwrap();
        assert!((v - 2.0 / 7.0).abs() < 1e-14);
        assert!(gauss_legendre(0).is_err());
        assert!(gauss_legendre(257).is_err());
    }

    #[test]
    fn integrate_reports_non_finite() {
        let r = gauss_legendre(3).unwrap();
        let err = integrate(|x| if x > 0.5 { f64::NAN } else { x }, 0.0, 1.0, &r, 2).unwrap_err();
        match err {
            Error::NonFinite { x } => assert!(x > 0.5),
            other => panic!("unexpected {other:?}"),
        }
        assert!(integrate(|x| x, 1.0, 0.0, &r, 1).is_err());
    }

    #[test]
    fn composite_sine() {
        let r = gauss_legendre(8).unwrap();
        let v = integrate(f64::sin, 0.0, PI, &r, 4).unwrap();
        assert!((v - 2.0).abs() < 1e-12);
        let one = integrate(|_| 1.0, 0.0, 1.0, &r, 1).unwrap();
        assert!((one - 1.0).abs() < 1e-15);
    }
}
