//! Experiment campaigns and the command-line front end.
//!
//! Every command produces a JSON document (with a `"schema": 1` field) or a
//! CSV table, and a list of violated inequalities. [`run`] writes the
//! artifacts and turns violations into a nonzero exit code with a
//! machine-readable report on stderr.

use crate::error::{Error, Result};
use crate::explicit::{self, verify_symmetric_bound};
use crate::fem2d::{
    column_mesh, extrapolated_eigs, mesh_eigs, mesh_polygon, rescale_to_unit_aspect, THIN_ASPECT,
};
use crate::geometry::{
    self, diameter, flatness, make_triangle, random_convex_polygon, read_polygon, ConvexPolygon, Vec2,
};
use crate::specfun::bessel_zero;
use crate::sturm::{self, kroger_bound, maximizer_profile, sl_eigs, ProfileWeight};
use clap::{Parser, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

pub const SCHEMA_VERSION: u32 = 1;

/// Slope-fit window for the sharpness sweep, in units of `w/D`.
pub const SLOPE_WINDOW: (f64, f64) = (0.02, 0.2);
/// Admissible range for the fitted deficit exponent.
pub const SLOPE_RANGE: (f64, f64) = (1.8, 2.2);
/// Relative agreement required between constructive and closed-form
/// Kröger values.
pub const KROGER_TABLE_TOL: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Neumann eigenvalues of a polygon.
    Mu,
    /// Weighted Sturm–Liouville eigenvalues.
    Sl,
    /// Table of sharp bounds with constructive cross-checks.
    Kroger,
    /// The explicit constant and its ingredients.
    Constant,
    /// Deficit exponent over superequilateral triangles.
    Sharpness,
    /// Bound verification on given polygons or triangles.
    Verify,
    /// Empirical constant over a family of domains.
    EstimateC,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    #[default]
    Json,
}

/// Domain families for [`estimate_c`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// Superequilateral triangles `T_α`.
    Triangles,
    /// Random polygons symmetric about the bisector of their diameter.
    Symmetric,
    /// Hulls of uniform points in rectangles of random aspect.
    Random,
    /// Triangles and symmetric polygons, alternating.
    #[default]
    Mixed,
}

fn default_schema() -> u32 {
    SCHEMA_VERSION
}
fn default_k() -> usize {
    1
}
fn default_d() -> usize {
    2
}
fn default_h() -> f64 {
    0.02
}
/// Aperture of the unit-diameter triangle with width `w`.
pub fn aperture_for_width(w: f64) -> f64 {
    2.0 * (0.5 / w).atan()
}
fn default_alpha_min() -> f64 {
    aperture_for_width(SLOPE_WINDOW.1)
}
fn default_alpha_max() -> f64 {
    aperture_for_width(SLOPE_WINDOW.0)
}
fn default_alpha_steps() -> usize {
    12
}
fn default_n() -> usize {
    100
}
fn default_n_elems() -> usize {
    sturm::DEFAULT_OPTIMIZER_ELEMS
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default = "default_schema")]
    pub schema: u32,
    pub command: Command,
    #[serde(default = "default_k")]
    pub k: usize,
    #[serde(default = "default_d")]
    pub d: usize,
    #[serde(default = "default_h")]
    pub h_target: f64,
    #[serde(default = "default_alpha_min")]
    pub alpha_min: f64,
    #[serde(default = "default_alpha_max")]
    pub alpha_max: f64,
    #[serde(default = "default_alpha_steps")]
    pub alpha_steps: usize,
    #[serde(default = "default_n")]
    pub n: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub format: Format,
    #[serde(default)]
    pub polygon: Option<PathBuf>,
    #[serde(default)]
    pub profile: Option<PathBuf>,
    #[serde(default)]
    pub symmetric: bool,
    #[serde(default = "default_n_elems")]
    pub n_elems: usize,
    #[serde(default)]
    pub family: Family,
}

impl ExperimentConfig {
    pub fn new(command: Command) -> Self {
        ExperimentConfig {
            schema: SCHEMA_VERSION,
            command,
            k: default_k(),
            d: default_d(),
            h_target: default_h(),
            alpha_min: default_alpha_min(),
            alpha_max: default_alpha_max(),
            alpha_steps: default_alpha_steps(),
            n: default_n(),
            seed: 0,
            out: None,
            format: Format::Json,
            polygon: None,
            profile: None,
            symmetric: false,
            n_elems: default_n_elems(),
            family: Family::Mixed,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let config: ExperimentConfig = serde_json::from_str(text)?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema != SCHEMA_VERSION {
            return Err(Error::Config(format!("unsupported schema {}, expected {SCHEMA_VERSION}", self.schema)));
        }
        if self.k == 0 {
            return Err(Error::Config("k must be at least 1".into()));
        }
        let fem = matches!(self.command, Command::Mu | Command::Sharpness | Command::Verify | Command::EstimateC);
        if fem && self.d != 2 {
            return Err(Error::Config(format!("the {:?} command is planar: d must be 2, got {}", self.command, self.d)));
        }
        if self.d < 2 {
            return Err(Error::Config(format!("d must be at least 2, got {}", self.d)));
        }
        if !(self.h_target > 0.0 && self.h_target.is_finite()) {
            return Err(Error::Config(format!("mesh size must be positive, got {}", self.h_target)));
        }
        let uses_alphas = matches!(self.command, Command::Sharpness)
            || (matches!(self.command, Command::Verify) && self.polygon.is_none());
        if uses_alphas {
            if !(self.alpha_min > PI / 3.0 && self.alpha_max < PI && self.alpha_min <= self.alpha_max) {
                return Err(Error::Config(format!(
                    "aperture range [{}, {}] must lie inside (pi/3, pi)",
                    self.alpha_min, self.alpha_max
                )));
            }
            if self.alpha_steps == 0 {
                return Err(Error::Config("alpha_steps must be at least 1".into()));
            }
        }
        if self.n_elems < 8 * self.k {
            return Err(Error::Config(format!("n_elems must be at least 8k = {}", 8 * self.k)));
        }
        Ok(())
    }

    pub fn alphas(&self) -> Vec<f64> {
        if self.alpha_steps == 1 {
            return vec![self.alpha_min];
        }
        (0..self.alpha_steps)
            .map(|i| self.alpha_min + (self.alpha_max - self.alpha_min) * i as f64 / (self.alpha_steps - 1) as f64)
            .collect()
    }
}

/// A failed inequality, named after the domain it failed on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub domain: String,
    pub check: String,
    pub detail: String,
}

impl Violation {
    fn new(domain: impl Into<String>, check: impl Into<String>, detail: impl Into<String>) -> Self {
        Violation { domain: domain.into(), check: check.into(), detail: detail.into() }
    }
}

/// Result of a command before it is written anywhere.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub json: Value,
    pub csv: String,
    /// Optional plot data `(file suffix, CSV)` written next to the main output.
    pub plots: Vec<(String, String)>,
    pub violations: Vec<Violation>,
}

fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

/// Eigenvalue estimate for a polygon: the Rayleigh–Ritz value on the finest
/// mesh (an upper bound) and, when requested, its Richardson extrapolation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MuEstimate {
    pub upper: f64,
    pub extrapolated: Option<f64>,
    /// `"thin"` (rescaled column mesh) or `"direct"` (isotropic mesh).
    pub method: String,
    pub n_dof: usize,
}

/// `μ_k` of a polygon at mesh size `h` relative to its diameter, through
/// the thin path when the aspect is below [`THIN_ASPECT`].
pub fn estimate_mu(poly: &ConvexPolygon, k: usize, h_rel: f64, extrapolate: bool) -> Result<MuEstimate> {
    let r = rescale_to_unit_aspect(poly)?;
    let h = h_rel * r.diameter;
    let thin = r.width / r.diameter < THIN_ASPECT;
    let (mesh, anisotropy) = if thin {
        (column_mesh(&r.polygon, h)?, (1.0, r.stretch * r.stretch))
    } else {
        (mesh_polygon(poly, h)?, (1.0, 1.0))
    };
    let method = if thin { "thin" } else { "direct" }.to_string();
    if extrapolate {
        let (fine, ex) = extrapolated_eigs(&mesh, k, anisotropy)?;
        Ok(MuEstimate { upper: fine.values[k], extrapolated: Some(ex[k]), method, n_dof: fine.n_dof })
    } else {
        let res = mesh_eigs(&mesh, k, anisotropy)?;
        Ok(MuEstimate { upper: res.values[k], extrapolated: None, method, n_dof: res.n_dof })
    }
}

/// Superequilateral triangle `T_α` with unit diameter (its base).
pub fn unit_triangle(alpha: f64) -> Result<ConvexPolygon> {
    make_triangle(alpha, 0.5 / (0.5 * alpha).sin())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub id: String,
    pub alpha: Option<f64>,
    pub diameter: f64,
    pub width: f64,
    pub a2: f64,
    /// Rayleigh–Ritz value of `μ_k` (upper bound).
    pub mu_k: f64,
    pub mu_k_extrapolated: Option<f64>,
    /// `μ*_{k,d} − μ_k·D²` from the upper bound, hence a lower estimate.
    pub deficit: f64,
    pub deficit_extrapolated: Option<f64>,
    /// `deficit·D²/a₂²`.
    pub normalized_deficit: f64,
    /// `deficit·D²/w²`.
    pub normalized_deficit_w: f64,
    pub method: String,
}

impl SweepRow {
    pub fn csv_header() -> &'static str {
        "id,alpha,D,w,a2,mu_k,mu_k_extrapolated,deficit,deficit_extrapolated,normalized_deficit,normalized_deficit_w,method"
    }

    pub fn csv_line(&self) -> String {
        let opt = |v: Option<f64>| v.map(fmt17).unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            self.id,
            opt(self.alpha),
            fmt17(self.diameter),
            fmt17(self.width),
            fmt17(self.a2),
            fmt17(self.mu_k),
            opt(self.mu_k_extrapolated),
            fmt17(self.deficit),
            opt(self.deficit_extrapolated),
            fmt17(self.normalized_deficit),
            fmt17(self.normalized_deficit_w),
            self.method
        )
    }
}

/// Computes a sweep row for one domain.
pub fn sweep_row(id: String, alpha: Option<f64>, poly: &ConvexPolygon, k: usize, h_rel: f64, extrapolate: bool) -> Result<SweepRow> {
    let fl = flatness(poly)?;
    let est = estimate_mu(poly, k, h_rel, extrapolate)?;
    let bound = kroger_bound(k, 2)?;
    let d2 = fl.diameter * fl.diameter;
    let deficit = bound - est.upper * d2;
    Ok(SweepRow {
        id,
        alpha,
        diameter: fl.diameter,
        width: fl.width,
        a2: fl.a2,
        mu_k: est.upper,
        mu_k_extrapolated: est.extrapolated,
        deficit,
        deficit_extrapolated: est.extrapolated.map(|m| bound - m * d2),
        normalized_deficit: deficit * d2 / (fl.a2 * fl.a2),
        normalized_deficit_w: deficit * d2 / (fl.width * fl.width),
        method: est.method,
    })
}

fn positivity_violations(row: &SweepRow) -> Vec<Violation> {
    let mut v = Vec::new();
    if !(row.deficit > 0.0) {
        v.push(Violation::new(&row.id, "kroger_strictness", format!("mu*D^2 deficit = {:e}", row.deficit)));
    }
    if !(row.normalized_deficit > 0.0) {
        v.push(Violation::new(&row.id, "normalized_deficit_positive", format!("{:e}", row.normalized_deficit)));
    }
    v
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub rows: Vec<SweepRow>,
    /// Least-squares slope of `log(deficit)` against `log(w)` over the rows
    /// with `w/D` in [`SLOPE_WINDOW`], using the extrapolated deficits.
    pub slope: f64,
    pub n_fit: usize,
}

/// Least-squares slope of `y` against `x`.
pub fn fit_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Deficits of `μ_1` over unit-diameter superequilateral triangles and the
/// fitted exponent of the deficit in `w`.
pub fn sharpness_sweep(alphas: &[f64], h_rel: f64) -> Result<SweepReport> {
    if alphas.iter().any(|&a| !(a > PI / 3.0 && a < PI)) {
        return Err(Error::Domain("apertures must lie in (pi/3, pi)".into()));
    }
    let rows = alphas
        .par_iter()
        .map(|&alpha| {
            let t = unit_triangle(alpha)?;
            sweep_row(format!("T({:.6})", alpha / PI), Some(alpha), &t, 1, h_rel, true)
        })
        .collect::<Result<Vec<_>>>()?;
    let widths: Vec<f64> = rows.iter().map(|r| r.width / r.diameter).collect();
    let (wmin, wmax) = widths.iter().fold((f64::INFINITY, 0.0_f64), |(lo, hi), &w| (lo.min(w), hi.max(w)));
    if !(wmax >= 10.0 * wmin * (1.0 - 1e-9)) {
        return Err(Error::Domain(format!("widths must span a decade, got [{wmin:.4}, {wmax:.4}]")));
    }
    let points: Vec<(f64, f64)> = rows
        .iter()
        .zip(&widths)
        .filter(|(_, &w)| w >= SLOPE_WINDOW.0 * (1.0 - 1e-9) && w <= SLOPE_WINDOW.1 * (1.0 + 1e-9))
        .filter_map(|(r, &w)| {
            let def = r.deficit_extrapolated.unwrap_or(r.deficit);
            (def > 0.0).then(|| (w.ln(), def.ln()))
        })
        .collect();
    let slope = fit_slope(&points).ok_or_else(|| Error::Domain("fewer than two rows inside the fit window".into()))?;
    Ok(SweepReport { rows, slope, n_fit: points.len() })
}

/// Lower and upper curves for `μ₁D²` on `T_α`: `4j²sin²(α/2)` and `4j²`.
pub fn triangle_bounds(alpha: f64) -> (f64, f64) {
    let j = bessel_zero(0.0, 1).expect("first zero of J0");
    (4.0 * j * j * (0.5 * alpha).sin().powi(2), 4.0 * j * j)
}

fn sweep_violations(report: &SweepReport) -> Vec<Violation> {
    let j = bessel_zero(0.0, 1).expect("first zero of J0");
    let mut v = Vec::new();
    for row in &report.rows {
        v.extend(positivity_violations(row));
        if let Some(alpha) = row.alpha {
            let (lower, upper) = triangle_bounds(alpha);
            let scaled = row.mu_k * row.diameter.powi(2);
            if !(scaled >= lower && scaled < upper) {
                v.push(Violation::new(&row.id, "triangle_sandwich", format!("{lower} <= {scaled} < {upper} fails")));
            }
            let w = row.width / row.diameter;
            if w <= 0.1 && row.deficit / (w * w) > 16.0 * j * j {
                v.push(Violation::new(&row.id, "deficit_curvature", format!("deficit/w^2 = {}", row.deficit / (w * w))));
            }
        }
    }
    if !(report.slope >= SLOPE_RANGE.0 && report.slope <= SLOPE_RANGE.1) {
        v.push(Violation::new("sweep", "exponent", format!("slope {} outside {SLOPE_RANGE:?}", report.slope)));
    }
    v
}

/// Random polygon symmetric about `x = 1/2` whose strict diameter is the
/// segment `[0, 1] × {0}`: mirrored hull of uniform points in
/// `[0.1, 0.9] × [−aspect/2, aspect/2]` with `aspect ≤ 0.6`.
pub fn random_symmetric_polygon<R: Rng>(rng: &mut R, n_points: usize, aspect: f64) -> Result<ConvexPolygon> {
    if !(aspect > 0.0 && aspect <= 0.6) {
        return Err(Error::Domain(format!("aspect must lie in (0, 0.6], got {aspect}")));
    }
    for _ in 0..64 {
        let mut pts = vec![Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0)];
        for _ in 0..n_points.max(2) {
            let p = Vec2::new(rng.gen_range(0.1..0.5), aspect * rng.gen_range(-0.5..0.5));
            pts.push(p);
            pts.push(Vec2::new(1.0 - p.x, p.y));
        }
        if let Ok(poly) = ConvexPolygon::from_hull(&pts) {
            if geometry::bisector_asymmetry(&poly) <= explicit::SYMMETRY_TOL {
                return Ok(poly);
            }
        }
    }
    Err(Error::InvalidPolygon("could not sample a symmetric hull".into()))
}

/// The `i`-th member of a seeded family.
pub fn family_member(family: Family, i: usize, seed: u64) -> Result<(String, Option<f64>, ConvexPolygon)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(i as u64));
    let family = match family {
        Family::Mixed if i % 2 == 0 => Family::Triangles,
        Family::Mixed => Family::Symmetric,
        f => f,
    };
    match family {
        Family::Triangles => {
            let alpha = rng.gen_range(0.36 * PI..0.95 * PI);
            Ok((format!("T{i}"), Some(alpha), unit_triangle(alpha)?))
        }
        Family::Symmetric => {
            let aspect = rng.gen_range(0.1..0.6);
            let n = rng.gen_range(2..8);
            Ok((format!("S{i}"), None, random_symmetric_polygon(&mut rng, n, aspect)?))
        }
        Family::Random | Family::Mixed => {
            let aspect = rng.gen_range(0.2..1.0);
            let n = rng.gen_range(3..16);
            Ok((format!("R{i}"), None, random_convex_polygon(&mut rng, n, aspect)?))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateReport {
    pub k: usize,
    pub rows: Vec<SweepRow>,
    /// Smallest `a₂`-normalized deficit over the family.
    pub c_empirical: f64,
    pub argmin: String,
    /// Smallest `w`-normalized deficit over the members symmetric about the
    /// bisector of their diameter (k = 1 only).
    pub c_w_symmetric: Option<f64>,
    /// Largest `w`-normalized deficit over triangles of aspect below 0.1.
    pub c_w_thin_triangles_max: Option<f64>,
}

/// Empirical constant: the infimum of the normalized deficit over `n`
/// seeded members of `family`.
pub fn estimate_c(k: usize, family: Family, n: usize, h_rel: f64, seed: u64) -> Result<EstimateReport> {
    if n == 0 {
        return Err(Error::Domain("need at least one domain".into()));
    }
    let members = (0..n).map(|i| family_member(family, i, seed)).collect::<Result<Vec<_>>>()?;
    let rows = members
        .par_iter()
        .map(|(id, alpha, poly)| sweep_row(id.clone(), *alpha, poly, k, h_rel, false))
        .collect::<Result<Vec<_>>>()?;
    let (c_empirical, argmin) = rows
        .iter()
        .map(|r| (r.normalized_deficit, r.id.clone()))
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .expect("non-empty family");
    let symmetric: Vec<f64> = if k == 1 {
        members
            .iter()
            .zip(&rows)
            .filter(|((_, _, p), _)| geometry::bisector_asymmetry(p) <= explicit::SYMMETRY_TOL)
            .map(|(_, r)| r.normalized_deficit_w)
            .collect()
    } else {
        Vec::new()
    };
    let thin_triangles: Vec<f64> = rows
        .iter()
        .filter(|r| r.alpha.is_some() && r.width / r.diameter < 0.1)
        .map(|r| r.normalized_deficit_w)
        .collect();
    Ok(EstimateReport {
        k,
        rows,
        c_empirical,
        argmin,
        c_w_symmetric: symmetric.iter().copied().reduce(f64::min),
        c_w_thin_triangles_max: thin_triangles.iter().copied().reduce(f64::max),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KrogerCell {
    pub k: usize,
    pub d: usize,
    pub bound: f64,
    /// `μ_k` of the maximizing profile; absent for `d = 3, k ≥ 2`.
    pub computed: Option<f64>,
    pub relative_error: Option<f64>,
    pub profile: Option<ProfileWeight>,
}

/// Sharp bounds for `1 ≤ k ≤ k_max`, `2 ≤ d ≤ d_max`, each cross-checked
/// against the eigenvalue of its maximizing profile.
pub fn kroger_table(k_max: usize, d_max: usize, n_elems: usize) -> Result<Vec<KrogerCell>> {
    let cells: Vec<(usize, usize)> = (2..=d_max).flat_map(|d| (1..=k_max).map(move |k| (k, d))).collect();
    cells
        .par_iter()
        .map(|&(k, d)| {
            let bound = kroger_bound(k, d)?;
            if d == 3 && k >= 2 {
                return Ok(KrogerCell { k, d, bound, computed: None, relative_error: None, profile: None });
            }
            let profile = maximizer_profile(k, d, None)?;
            let mu = sl_eigs(&profile, k, n_elems)?.values[k];
            Ok(KrogerCell { k, d, bound, computed: Some(mu), relative_error: Some((mu - bound) / bound), profile: Some(profile) })
        })
        .collect()
}

fn default_polygon(config: &ExperimentConfig) -> Result<(String, ConvexPolygon)> {
    match &config.polygon {
        Some(path) => Ok((path.display().to_string(), read_polygon(path)?)),
        None => Ok(("unit-square".into(), ConvexPolygon::rectangle(1.0, 1.0)?)),
    }
}

fn eigen_csv(values: &[f64]) -> String {
    let mut csv = String::from("index,mu\n");
    for (i, v) in values.iter().enumerate() {
        let _ = writeln!(csv, "{i},{}", fmt17(*v));
    }
    csv
}

fn run_mu(config: &ExperimentConfig) -> Result<Outcome> {
    let (name, poly) = default_polygon(config)?;
    let d = diameter(&poly).length;
    let mesh = mesh_polygon(&poly, config.h_target * d)?;
    let res = mesh_eigs(&mesh, config.k, (1.0, 1.0))?;
    let mut violations = Vec::new();
    if res.values[0].abs() > 1e-8 * res.values[1].abs().max(1.0) {
        violations.push(Violation::new(&name, "zero_mode", format!("mu_0 = {}", res.values[0])));
    }
    let bound = kroger_bound(config.k, 2)?;
    if !(res.values[config.k] * d * d < bound) {
        violations.push(Violation::new(&name, "kroger_strictness", format!("mu_k D^2 = {}", res.values[config.k] * d * d)));
    }
    let mut json = serde_json::to_value(res.report())?;
    json["schema"] = json!(SCHEMA_VERSION);
    json["domain"] = json!(name);
    json["diameter"] = json!(d);
    Ok(Outcome { json, csv: eigen_csv(&res.values), plots: Vec::new(), violations })
}

fn run_sl(config: &ExperimentConfig) -> Result<Outcome> {
    let weight = match &config.profile {
        Some(path) => serde_json::from_str::<ProfileWeight>(&std::fs::read_to_string(path)?)?,
        None => maximizer_profile(config.k, config.d, None).or_else(|_| ProfileWeight::tent(config.d))?,
    };
    let res = sl_eigs(&weight, config.k, config.n_elems)?;
    let mut violations = Vec::new();
    let bound = kroger_bound(config.k, weight.dim())?;
    let tol = sturm::discretization_tolerance(bound, config.n_elems);
    if res.values[config.k] > bound + tol {
        violations.push(Violation::new("profile", "kroger_bound", format!("mu_k = {} > {bound}", res.values[config.k])));
    }
    let mut json = serde_json::to_value(res.report())?;
    json["schema"] = json!(SCHEMA_VERSION);
    json["weight"] = serde_json::to_value(&weight)?;
    json["bound"] = json!(bound);
    Ok(Outcome { json, csv: eigen_csv(&res.values), plots: Vec::new(), violations })
}

fn run_kroger(config: &ExperimentConfig) -> Result<Outcome> {
    let table = kroger_table(config.k, config.d, config.n_elems)?;
    let mut csv = String::from("k,d,bound,computed,relative_error\n");
    let mut violations = Vec::new();
    for c in &table {
        let opt = |v: Option<f64>| v.map(fmt17).unwrap_or_default();
        let _ = writeln!(csv, "{},{},{},{},{}", c.k, c.d, fmt17(c.bound), opt(c.computed), opt(c.relative_error));
        if let Some(e) = c.relative_error {
            if e.abs() > KROGER_TABLE_TOL {
                violations.push(Violation::new(format!("k={},d={}", c.k, c.d), "kroger_table", format!("relative error {e:e}")));
            }
        }
    }
    let json = json!({ "schema": SCHEMA_VERSION, "cells": table });
    Ok(Outcome { json, csv, plots: Vec::new(), violations })
}

/// Grid of `Q` samples used for the monotonicity check.
pub const Q_GRID: usize = 101;

/// First grid index where `Q` decreases on a `Q_GRID`-point grid, if any.
pub fn q_first_decrease() -> Option<(f64, f64, f64)> {
    let q: Vec<f64> = (0..Q_GRID).map(|i| explicit::q(i as f64 / (Q_GRID - 1) as f64).expect("w in [0, 1]")).collect();
    q.windows(2)
        .position(|w| w[1] < w[0])
        .map(|i| (i as f64 / (Q_GRID - 1) as f64, q[i], q[i + 1]))
}

fn run_constant(_config: &ExperimentConfig) -> Result<Outcome> {
    let report = explicit::explicit_constant();
    let mut violations = Vec::new();
    if !(0.428..=0.434).contains(&report.constant) {
        violations.push(Violation::new("explicit-constant", "constant_window", format!("{}", report.constant)));
    }
    if report.consistency_error() > 1e-12 {
        violations.push(Violation::new("explicit-constant", "report_consistency", format!("{:e}", report.consistency_error())));
    }
    if !explicit::tau_optimality() {
        violations.push(Violation::new("explicit-constant", "tau_optimality", "Q(0) is not locally maximal in tau"));
    }
    if let Some((w, a, b)) = q_first_decrease() {
        violations.push(Violation::new(
            "explicit-constant",
            "q_monotone",
            format!("Q decreases after w = {w:.2}: {a:.10} -> {b:.10}"),
        ));
    }
    let mut json = serde_json::to_value(&report)?;
    json["schema"] = json!(SCHEMA_VERSION);
    let mut csv = String::from("quantity,value\n");
    for (name, v) in [
        ("I00", report.i00),
        ("psi(1,2x)", report.psi1),
        ("psi(3,2x)", report.psi3),
        ("psi(5,2x)", report.psi5),
        ("tau", report.tau),
        ("x0", report.x0),
        ("M", report.m),
        ("constant", report.constant),
    ] {
        let _ = writeln!(csv, "{name},{}", fmt17(v));
    }
    Ok(Outcome { json, csv, plots: Vec::new(), violations })
}

/// Human-readable table of the explicit-constant report.
pub fn constant_table(report: &explicit::ConstantReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{:<12} {:>22}", "quantity", "value");
    for (name, v) in [
        ("I00", report.i00),
        ("psi(3,2x)", report.psi3),
        ("psi(5,2x)", report.psi5),
        ("tau", report.tau),
        ("x0", report.x0),
        ("M", report.m),
        ("constant", report.constant),
    ] {
        let _ = writeln!(s, "{name:<12} {v:>22.15}");
    }
    s
}

fn rows_csv(rows: &[SweepRow]) -> String {
    let mut csv = String::from(SweepRow::csv_header());
    csv.push('\n');
    for r in rows {
        csv.push_str(&r.csv_line());
        csv.push('\n');
    }
    csv
}

fn run_sharpness(config: &ExperimentConfig) -> Result<Outcome> {
    let report = sharpness_sweep(&config.alphas(), config.h_target)?;
    let violations = sweep_violations(&report);
    let mut deficit_plot = String::from("w,deficit\n");
    let mut bounds_plot = String::from("w,lower_bound,upper_bound,mu_d2\n");
    for r in &report.rows {
        let w = r.width / r.diameter;
        let _ = writeln!(deficit_plot, "{},{}", fmt17(w), fmt17(r.deficit_extrapolated.unwrap_or(r.deficit)));
        let (lo, hi) = triangle_bounds(r.alpha.expect("triangle rows"));
        let _ = writeln!(bounds_plot, "{},{},{},{}", fmt17(w), fmt17(lo), fmt17(hi), fmt17(r.mu_k * r.diameter.powi(2)));
    }
    let json = json!({ "schema": SCHEMA_VERSION, "slope": report.slope, "n_fit": report.n_fit, "rows": report.rows });
    Ok(Outcome {
        json,
        csv: rows_csv(&report.rows),
        plots: vec![("deficit".into(), deficit_plot), ("bounds".into(), bounds_plot)],
        violations,
    })
}

fn run_verify(config: &ExperimentConfig) -> Result<Outcome> {
    let domains: Vec<(String, Option<f64>, ConvexPolygon)> = match &config.polygon {
        Some(path) => vec![(path.display().to_string(), None, read_polygon(path)?)],
        None => config
            .alphas()
            .into_iter()
            .map(|a| Ok((format!("T({:.6})", a / PI), Some(a), unit_triangle(a)?)))
            .collect::<Result<_>>()?,
    };
    let mut violations = Vec::new();
    if config.symmetric {
        let results = domains
            .par_iter()
            .map(|(id, _, p)| verify_symmetric_bound(p, config.h_target * diameter(p).length).map(|b| (id.clone(), b)))
            .collect::<Result<Vec<_>>>()?;
        let mut csv = String::from("id,D,w,lhs,rhs,margin,thin\n");
        for (id, b) in &results {
            let _ = writeln!(csv, "{id},{},{},{},{},{},{}", fmt17(b.diameter), fmt17(b.width), fmt17(b.lhs), fmt17(b.rhs), fmt17(b.margin), b.thin);
            if !(b.margin >= 0.0) {
                violations.push(Violation::new(id, "explicit_bound", format!("margin = {:e}", b.margin)));
            }
        }
        let rows: Vec<Value> = results.iter().map(|(id, b)| json!({ "id": id, "result": b })).collect();
        Ok(Outcome { json: json!({ "schema": SCHEMA_VERSION, "rows": rows }), csv, plots: Vec::new(), violations })
    } else {
        let rows = domains
            .par_iter()
            .map(|(id, alpha, p)| sweep_row(id.clone(), *alpha, p, config.k, config.h_target, false))
            .collect::<Result<Vec<_>>>()?;
        for r in &rows {
            violations.extend(positivity_violations(r));
        }
        Ok(Outcome { json: json!({ "schema": SCHEMA_VERSION, "rows": rows }), csv: rows_csv(&rows), plots: Vec::new(), violations })
    }
}

fn run_estimate_c(config: &ExperimentConfig) -> Result<Outcome> {
    let report = estimate_c(config.k, config.family, config.n, config.h_target, config.seed)?;
    let mut violations = Vec::new();
    for r in &report.rows {
        violations.extend(positivity_violations(r));
    }
    if let Some(c) = report.c_w_symmetric {
        if c < explicit::EXPLICIT_CONSTANT {
            violations.push(Violation::new("symmetric-family", "explicit_constant", format!("min w-normalized deficit {c}")));
        }
    }
    let mut json = serde_json::to_value(&report)?;
    json["schema"] = json!(SCHEMA_VERSION);
    Ok(Outcome { json, csv: rows_csv(&report.rows), plots: Vec::new(), violations })
}

/// Runs a validated configuration without touching the filesystem (apart
/// from reading input polygons and profiles).
pub fn execute(config: &ExperimentConfig) -> Result<Outcome> {
    config.validate()?;
    match config.command {
        Command::Mu => run_mu(config),
        Command::Sl => run_sl(config),
        Command::Kroger => run_kroger(config),
        Command::Constant => run_constant(config),
        Command::Sharpness => run_sharpness(config),
        Command::Verify => run_verify(config),
        Command::EstimateC => run_estimate_c(config),
    }
}

fn plot_path(out: &Path, suffix: &str) -> PathBuf {
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "out".into());
    out.with_file_name(format!("{stem}.{suffix}.csv"))
}

fn render(outcome: &Outcome, format: Format) -> Result<String> {
    Ok(match format {
        Format::Json => serde_json::to_string_pretty(&outcome.json)? + "\n",
        Format::Csv => outcome.csv.clone(),
    })
}

/// Writes the outcome (to `config.out` or stdout) and returns the exit
/// code: 0 when no inequality was violated, 1 otherwise, 2 on errors.
pub fn run(config: &ExperimentConfig) -> i32 {
    let outcome = match execute(config) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let written = render(&outcome, config.format).and_then(|text| {
        match &config.out {
            Some(path) => {
                std::fs::write(path, text)?;
                for (suffix, csv) in &outcome.plots {
                    std::fs::write(plot_path(path, suffix), csv)?;
                }
                if config.command == Command::Constant {
                    let report: explicit::ConstantReport = serde_json::from_value(outcome.json.clone())?;
                    print!("{}", constant_table(&report));
                }
            }
            None => print!("{text}"),
        }
        Ok(())
    });
    if let Err(e) = written {
        eprintln!("error: {e}");
        return 2;
    }
    if outcome.violations.is_empty() {
        0
    } else {
        let report = json!({ "schema": SCHEMA_VERSION, "violations": outcome.violations });
        eprintln!("{}", serde_json::to_string(&report).expect("violations serialize"));
        1
    }
}

/// Command-line interface of the `kroger` binary.
#[derive(Debug, Parser)]
#[command(name = "kroger", about = "Neumann eigenvalue bounds on convex domains", version)]
pub struct Cli {
    /// Command to run; may come from --config instead.
    #[arg(value_enum)]
    pub command: Option<Command>,
    /// JSON file mirroring the experiment configuration; flags given on
    /// the command line override its fields.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub d: Option<usize>,
    /// Mesh size relative to the diameter.
    #[arg(long = "h")]
    pub h: Option<f64>,
    /// Smallest aperture in radians.
    #[arg(long)]
    pub alpha_min: Option<f64>,
    /// Largest aperture in radians.
    #[arg(long)]
    pub alpha_max: Option<f64>,
    #[arg(long)]
    pub alpha_steps: Option<usize>,
    /// Single aperture in radians (sets the range to one point).
    #[arg(long, conflicts_with_all = ["alpha_min", "alpha_max", "alpha_steps"])]
    pub alpha: Option<f64>,
    /// Number of domains in a family.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Polygon file (JSON array of [x, y] or one "x y" pair per line).
    #[arg(long)]
    pub polygon: Option<PathBuf>,
    /// Profile weight JSON {"d", "breakpoints", "q"} for the sl command.
    #[arg(long)]
    pub profile: Option<PathBuf>,
    /// Check the explicit bound for symmetric domains.
    #[arg(long)]
    pub symmetric: bool,
    /// Number of elements for one-dimensional problems.
    #[arg(long)]
    pub n_elems: Option<usize>,
    #[arg(long, value_enum)]
    pub family: Option<Family>,
}

impl Cli {
    pub fn into_config(self) -> Result<ExperimentConfig> {
        let mut config = match (&self.config, self.command) {
            (Some(path), _) => {
                let mut c: ExperimentConfig = serde_json::from_str(&std::fs::read_to_string(path)?)?;
                if let Some(cmd) = self.command {
                    c.command = cmd;
                }
                c
            }
            (None, Some(cmd)) => ExperimentConfig::new(cmd),
            (None, None) => return Err(Error::Config("a command or --config is required".into())),
        };
        macro_rules! set {
            ($field:ident, $value:expr) => {
                if let Some(v) = $value {
                    config.$field = v;
                }
            };
        }
        set!(k, self.k);
        set!(d, self.d);
        set!(h_target, self.h);
        set!(alpha_min, self.alpha_min);
        set!(alpha_max, self.alpha_max);
        set!(alpha_steps, self.alpha_steps);
        set!(n, self.n);
        set!(seed, self.seed);
        set!(format, self.format);
        set!(n_elems, self.n_elems);
        set!(family, self.family);
        if let Some(a) = self.alpha {
            config.alpha_min = a;
            config.alpha_max = a;
            config.alpha_steps = 1;
        }
        if self.out.is_some() {
            config.out = self.out;
        }
        if self.polygon.is_some() {
            config.polygon = self.polygon;
        }
        if self.profile.is_some() {
            config.profile = self.profile;
        }
        config.symmetric |= self.symmetric;
        config.validate()?;
        Ok(config)
    }
}

/// Entry point shared by the binary and tests.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match cli.into_config() {
        Ok(config) => run(&config),
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}
