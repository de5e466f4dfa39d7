//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any criterion fails.

use kroger_stability::explicit::{self, minimizer_search, psi, tau_optimality, verify_symmetric_bound, ConcaveH};
use kroger_stability::fem2d::{mesh_eigs, mesh_polygon, neumann_eigs};
use kroger_stability::geometry::{self, flatness, random_convex_polygon, section_moment, ConvexPolygon};
use kroger_stability::harness::{
    estimate_mu, kroger_table, random_symmetric_polygon, sharpness_sweep, unit_triangle, SLOPE_RANGE,
};
use kroger_stability::specfun::{bessel_prime_zero, bessel_zero};
use kroger_stability::sturm::{sl_eigs, ProfileWeight};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::f64::consts::PI;
use std::time::{Duration, Instant};

type Check = std::result::Result<String, String>;

fn j01() -> f64 {
    bessel_zero(0.0, 1).unwrap()
}

fn within(x: f64, target: f64, tol: f64) -> bool {
    (x - target).abs() <= tol
}

fn criterion_1() -> Check {
    let r = explicit::explicit_constant();
    let ok = within(r.tau, -0.569, 0.005) && within(r.m, 0.0186, 5e-4) && within(r.constant, 0.432, 0.003);
    let detail = format!("tau = {:.6}, M = {:.6}, constant = {:.6}", r.tau, r.m, r.constant);
    if ok { Ok(detail) } else { Err(detail) }
}

fn criterion_2() -> Check {
    let p1 = psi(1, &ConcaveH::linear()).map_err(|e| e.to_string())?;
    let detail = format!("psi(1, 2x) = {p1:.3e}");
    if p1.abs() <= 1e-10 { Ok(detail) } else { Err(detail) }
}

fn criterion_3() -> Check {
    let table = kroger_table(5, 5, 2048).map_err(|e| e.to_string())?;
    let mut worst: f64 = 0.0;
    let mut checked = 0;
    for cell in &table {
        if cell.d == 3 && cell.k >= 2 {
            continue;
        }
        let e = cell.relative_error.ok_or(format!("no constructive value for k={}, d={}", cell.k, cell.d))?;
        worst = worst.max(e.abs());
        checked += 1;
    }
    let detail = format!("{checked} cells, worst relative error {worst:.2e}");
    if checked == 16 && worst <= 1e-3 { Ok(detail) } else { Err(detail) }
}

fn criterion_4() -> Check {
    let square = ConvexPolygon::rectangle(1.0, 1.0).unwrap();
    let sq = neumann_eigs(&square, 2, 0.02).map_err(|e| e.to_string())?;
    let disk = ConvexPolygon::regular(256, 1.0).unwrap();
    let dk = neumann_eigs(&disk, 1, 0.02).map_err(|e| e.to_string())?;
    let pi2 = PI * PI;
    let jp = bessel_prime_zero(1.0, 1).unwrap().powi(2);
    let rel = |a: f64, b: f64| (a - b).abs() / b;
    let errs = [rel(sq.values[1], pi2), rel(sq.values[2], pi2), rel(dk.values[1], jp)];
    let detail = format!(
        "square mu1 = {:.5}, mu2 = {:.5}; disk mu1 = {:.5} (exact {jp:.5}); worst rel err {:.2e}",
        sq.values[1],
        sq.values[2],
        dk.values[1],
        errs.iter().cloned().fold(0.0, f64::max)
    );
    if errs.iter().all(|&e| e <= 0.01) { Ok(detail) } else { Err(detail) }
}

fn random_polygons(n: usize, seed: u64) -> Vec<ConvexPolygon> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let aspect = 10f64.powf(rng.gen_range(-1.3..0.0));
            let pts = rng.gen_range(3..20);
            random_convex_polygon(&mut rng, pts, aspect).unwrap()
        })
        .collect()
}

fn triangle_alphas(n: usize) -> Vec<f64> {
    (0..n).map(|i| PI / 3.0 + (i as f64 + 0.5) * (2.0 * PI / 3.0) / n as f64).collect()
}

fn criterion_5() -> Check {
    let bound = 4.0 * j01() * j01();
    let mut domains = random_polygons(200, 20251019);
    for a in triangle_alphas(20) {
        domains.push(unit_triangle(a).unwrap());
    }
    let scaled: Vec<f64> = domains
        .par_iter()
        .map(|p| {
            let d = geometry::diameter(p).length;
            estimate_mu(p, 1, 0.02, false).map(|m| m.upper * d * d)
        })
        .collect::<kroger_stability::Result<_>>()
        .map_err(|e| e.to_string())?;
    let violations = scaled.iter().filter(|&&s| !(s < bound)).count();
    let max = scaled.iter().cloned().fold(0.0, f64::max);
    let detail = format!("{} domains, {violations} violations, max D^2 mu1 = {max:.6} < {bound:.6}", scaled.len());
    if violations == 0 { Ok(detail) } else { Err(detail) }
}

fn criterion_6() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut domains: Vec<ConvexPolygon> = triangle_alphas(20).into_iter().map(|a| unit_triangle(a).unwrap()).collect();
    while domains.len() < 50 {
        let aspect = rng.gen_range(0.05..0.6);
        let n = rng.gen_range(2..8);
        domains.push(random_symmetric_polygon(&mut rng, n, aspect).unwrap());
    }
    let margins: Vec<f64> = domains
        .par_iter()
        .map(|p| verify_symmetric_bound(p, 0.02 * geometry::diameter(p).length).map(|b| b.margin))
        .collect::<kroger_stability::Result<_>>()
        .map_err(|e| e.to_string())?;
    let min = margins.iter().cloned().fold(f64::INFINITY, f64::min);
    let detail = format!("{} symmetric domains, min margin {min:.4e}", margins.len());
    if min >= 0.0 { Ok(detail) } else { Err(detail) }
}

fn criterion_7() -> Check {
    let j2 = 4.0 * j01() * j01();
    let ratios: Vec<(f64, f64)> = triangle_alphas(20)
        .par_iter()
        .map(|&a| {
            let t = unit_triangle(a)?;
            estimate_mu(&t, 1, 0.02, false).map(|m| (a, m.upper / j2))
        })
        .collect::<kroger_stability::Result<_>>()
        .map_err(|e| e.to_string())?;
    let bad: Vec<String> = ratios
        .iter()
        .filter(|(a, r)| !((0.5 * a).sin().powi(2) <= *r && *r < 1.0))
        .map(|(a, r)| format!("alpha/pi = {:.4}: {r:.6}", a / PI))
        .collect();
    let detail = format!("{} apertures, {} outside [sin^2(alpha/2), 1)", ratios.len(), bad.len());
    if bad.is_empty() { Ok(detail) } else { Err(format!("{detail}: {}", bad.join("; "))) }
}

fn criterion_8() -> Check {
    let alphas: Vec<f64> = (0..12)
        .map(|i| {
            let w = 0.2 * 10f64.powf(-(i as f64) / 11.0);
            kroger_stability::harness::aperture_for_width(w)
        })
        .collect();
    let r = sharpness_sweep(&alphas, 0.02).map_err(|e| e.to_string())?;
    let detail = format!("slope {:.4} from {} rows", r.slope, r.n_fit);
    if r.slope >= SLOPE_RANGE.0 && r.slope <= SLOPE_RANGE.1 { Ok(detail) } else { Err(detail) }
}

fn criterion_9() -> Check {
    let reports: Vec<_> = [0.25, 0.5, 1.0]
        .par_iter()
        .map(|&w| minimizer_search(w, 2000, 9))
        .collect::<kroger_stability::Result<_>>()
        .map_err(|e| e.to_string())?;
    let worst = reports
        .iter()
        .flat_map(|r| [r.gap_to_2x, r.corner_gap, r.affine_gap])
        .fold(f64::INFINITY, f64::min);
    let detail = format!(
        "min J - J(2x) over {} candidates per w: {worst:.3e}",
        reports.iter().map(|r| r.n_candidates).min().unwrap_or(0)
    );
    if worst >= -1e-8 { Ok(detail) } else { Err(detail) }
}

fn criterion_10() -> Check {
    let m = explicit::explicit_constant().m;
    let q: Vec<f64> = (0..=100).map(|i| explicit::q(i as f64 / 100.0).unwrap()).collect();
    let decreases: Vec<usize> = (0..100).filter(|&i| q[i + 1] < q[i]).collect();
    let q0_ok = within(q[0], m, 1e-12);
    let tau_ok = tau_optimality();
    let argmax = (0..=100).max_by(|&a, &b| q[a].total_cmp(&q[b])).unwrap();
    let detail = format!(
        "Q(0) = M: {q0_ok}; tau optimal: {tau_ok}; {} decreasing steps (first after w = {}), max Q = {:.10} at w = {}, Q(1) = {:.10}",
        decreases.len(),
        decreases.first().map(|&i| format!("{:.2}", i as f64 / 100.0)).unwrap_or("-".into()),
        q[argmax],
        argmax as f64 / 100.0,
        q[100]
    );
    if decreases.is_empty() && q0_ok && tau_ok { Ok(detail) } else { Err(detail) }
}

fn criterion_11() -> Check {
    let polys = random_polygons(200, 11);
    let mut semiaxis_fail = 0;
    let mut axis_fail = 0;
    let mut ratio = (f64::INFINITY, 0.0_f64);
    let mut worst_moment: f64 = 0.0;
    for p in &polys {
        let f = flatness(p).map_err(|e| e.to_string())?;
        let r = f.width / f.a2;
        ratio = (ratio.0.min(r), ratio.1.max(r));
        if !f.semiaxis_sandwich_holds(1e-9) {
            semiaxis_fail += 1;
        }
        if !f.axis_sandwich_holds(1e-9) {
            axis_fail += 1;
        }
        let (x0, x1) = p.x_range();
        for i in 1..10 {
            let s = section_moment(p, x0 + (x1 - x0) * i as f64 / 10.0).map_err(|e| e.to_string())?;
            worst_moment = worst_moment.max((s.m2 / s.length.powi(3) - 1.0 / 12.0).abs());
        }
    }
    let detail = format!(
        "a2 <= w <= 2a2 fails on {semiaxis_fail}/200 (w/a2 in [{:.3}, {:.3}]); full-axis 2a2 <= w <= 4a2 fails on {axis_fail}/200; section moment error {worst_moment:.1e}",
        ratio.0, ratio.1
    );
    if semiaxis_fail == 0 && worst_moment <= 1e-12 { Ok(detail) } else { Err(detail) }
}

fn criterion_12() -> Check {
    let weights = [
        ProfileWeight::tent(2).unwrap(),
        ProfileWeight::trapezoid(0.3, 3).unwrap(),
        ProfileWeight::new(vec![0.0, 0.2, 1.0], vec![0.1, 1.0, 0.3], 4).unwrap(),
    ];
    let mut worst_scale: f64 = 0.0;
    let mut worst_reflect: f64 = 0.0;
    for w in &weights {
        let mut prev: Option<Vec<f64>> = None;
        for n in [128, 256, 512, 1024] {
            let mu = sl_eigs(w, 3, n).map_err(|e| e.to_string())?.values;
            if let Some(p) = &prev {
                if (1..=3).any(|k| mu[k] > p[k] * (1.0 + 1e-12)) {
                    return Err(format!("1-D eigenvalue increased under refinement at n = {n}"));
                }
            }
            prev = Some(mu);
        }
        let base = sl_eigs(w, 3, 512).map_err(|e| e.to_string())?.values;
        let scaled = sl_eigs(&w.scaled(3.7).unwrap(), 3, 512).map_err(|e| e.to_string())?.values;
        let refl = sl_eigs(&w.reflected().unwrap(), 3, 512).map_err(|e| e.to_string())?.values;
        for k in 1..=3 {
            worst_scale = worst_scale.max((scaled[k] - base[k]).abs() / base[k]);
            worst_reflect = worst_reflect.max((refl[k] - base[k]).abs() / base[k]);
        }
    }
    let mut mesh = mesh_polygon(&unit_triangle(0.6 * PI).unwrap(), 0.08).map_err(|e| e.to_string())?;
    let mut prev: Option<Vec<f64>> = None;
    for _ in 0..3 {
        let mu = mesh_eigs(&mesh, 3, (1.0, 1.0)).map_err(|e| e.to_string())?.values;
        if let Some(p) = &prev {
            if (1..=3).any(|k| mu[k] > p[k] * (1.0 + 1e-12)) {
                return Err("2-D eigenvalue increased under refinement".into());
            }
        }
        prev = Some(mu);
        mesh = mesh.refined();
    }
    let detail = format!("refinement monotone; scaling rel dev {worst_scale:.1e}; reflection rel dev {worst_reflect:.1e}");
    if worst_scale <= 1e-10 && worst_reflect <= 1e-10 { Ok(detail) } else { Err(detail) }
}

fn main() {
    let criteria: [(&str, fn() -> Check, Duration); 12] = [
        ("explicit constant", criterion_1, Duration::from_secs(1)),
        ("Bessel identity", criterion_2, Duration::from_secs(1)),
        ("Kroger table", criterion_3, Duration::from_secs(30)),
        ("FEM oracles", criterion_4, Duration::from_secs(60)),
        ("Kroger strictness", criterion_5, Duration::from_secs(300)),
        ("explicit bound, symmetric domains", criterion_6, Duration::from_secs(300)),
        ("triangle sandwich", criterion_7, Duration::from_secs(180)),
        ("exponent sharpness", criterion_8, Duration::from_secs(300)),
        ("variational minimizer", criterion_9, Duration::from_secs(120)),
        ("Q monotonicity", criterion_10, Duration::from_secs(1)),
        ("geometry sandwich", criterion_11, Duration::from_secs(60)),
        ("solver invariants", criterion_12, Duration::from_secs(120)),
    ];
    let mut failed = Vec::new();
    for (i, (name, check, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let (ok, detail) = match result {
            Ok(d) if elapsed <= *budget => (true, d),
            Ok(d) => (false, format!("{d}; over runtime budget {budget:?}")),
            Err(d) => (false, d),
        };
        println!(
            "criterion {:>2} {} {name}: {detail} [{:.2} s]",
            i + 1,
            if ok { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64()
        );
        if !ok {
            failed.push(i + 1);
        }
    }
    if failed.is_empty() {
        println!("all criteria passed");
    } else {
        println!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
