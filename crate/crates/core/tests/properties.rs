//! Property-based invariants.

use kroger_stability::explicit::{j_functional, ConcaveH};
use kroger_stability::geometry::{
    diameter, flatness, format_polygon, john_certificate, john_ellipse, parse_polygon, random_convex_polygon, Vec2,
};
use kroger_stability::sturm::{sl_eigs, ProfileWeight};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn polygon(seed: u64, n: usize, aspect: f64) -> kroger_stability::geometry::ConvexPolygon {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_convex_polygon(&mut rng, n, aspect).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn diameter_and_width_are_rigid_invariants(
        seed in any::<u64>(), n in 3usize..24, aspect in 0.05f64..1.0,
        angle in -3.2f64..3.2, scale in 0.1f64..10.0, dx in -5.0f64..5.0, dy in -5.0f64..5.0,
    ) {
        let p = polygon(seed, n, aspect);
        let q = p.transformed(Vec2::new(dx, dy), angle, scale).unwrap();
        let (fp, fq) = (flatness(&p).unwrap(), flatness(&q).unwrap());
        prop_assert!((fq.diameter - scale * fp.diameter).abs() <= 1e-9 * fq.diameter);
        prop_assert!((fq.width - scale * fp.width).abs() <= 1e-8 * fq.diameter);
        prop_assert!(fp.width <= fp.diameter * (1.0 + 1e-12));
        prop_assert!((fq.a2 - scale * fp.a2).abs() <= 1e-6 * fq.diameter);
    }

    #[test]
    fn diameter_dominates_all_vertex_pairs(seed in any::<u64>(), n in 3usize..24, aspect in 0.05f64..1.0) {
        let p = polygon(seed, n, aspect);
        let d = diameter(&p).length;
        for a in p.vertices() {
            for b in p.vertices() {
                prop_assert!((a - b).norm() <= d * (1.0 + 1e-12));
            }
        }
    }

    #[test]
    fn john_ellipse_is_inscribed(seed in any::<u64>(), n in 3usize..16, aspect in 0.1f64..1.0) {
        let p = polygon(seed, n, aspect);
        let e = john_ellipse(&p).unwrap();
        for i in 0..64 {
            let x = e.boundary_point(i as f64 / 64.0 * std::f64::consts::TAU);
            prop_assert!(p.contains(&x, 1e-9 * diameter(&p).length));
        }
        let (inner, outer) = john_certificate(&p, &e);
        prop_assert!(inner <= 1e-9 * diameter(&p).length && outer <= 1e-9, "{} {}", inner, outer);
    }

    #[test]
    fn polygon_text_round_trip(seed in any::<u64>(), n in 3usize..24, aspect in 0.05f64..1.0) {
        let p = polygon(seed, n, aspect);
        let q = parse_polygon(&format_polygon(&p)).unwrap();
        prop_assert_eq!(p.vertices(), q.vertices());
    }

    #[test]
    fn sturm_liouville_invariances(
        a in 0.0f64..1.0, b in 0.0f64..1.0, peak in 0.05f64..0.95, d in 2usize..6, c in 0.01f64..100.0,
    ) {
        let w = ProfileWeight::new(vec![0.0, peak, 1.0], vec![a * 0.5, 1.0, b * 0.5], d).unwrap();
        let base = sl_eigs(&w, 2, 256).unwrap().values;
        let scaled = sl_eigs(&w.scaled(c).unwrap(), 2, 256).unwrap().values;
        let refl = sl_eigs(&w.reflected().unwrap(), 2, 256).unwrap().values;
        let fine = sl_eigs(&w, 2, 512).unwrap().values;
        for k in 1..=2 {
            prop_assert!((scaled[k] - base[k]).abs() <= 1e-10 * base[k]);
            prop_assert!((refl[k] - base[k]).abs() <= 1e-10 * base[k]);
            prop_assert!(fine[k] <= base[k] * (1.0 + 1e-12));
        }
        let json = serde_json::to_string(&w).unwrap();
        prop_assert_eq!(serde_json::from_str::<ProfileWeight>(&json).unwrap(), w);
    }

    #[test]
    fn linear_profile_minimizes_the_functional(
        h0 in 0.0f64..1.0, x1 in 0.01f64..0.49, s1 in 0.0f64..10.0, ratio in 0.0f64..1.0,
        w in prop::sample::select(vec![0.25, 0.5, 1.0]),
    ) {
        let Ok(h) = ConcaveH::from_slopes(h0, &[x1], &[s1, s1 * ratio]) else { return Ok(()); };
        let j = j_functional(&h, w).unwrap();
        let j_lin = j_functional(&ConcaveH::linear(), w).unwrap();
        prop_assert!(j >= j_lin - 1e-8, "J = {} < J(2x) = {}", j, j_lin);
    }
}
