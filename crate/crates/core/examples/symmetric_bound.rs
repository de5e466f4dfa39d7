//! Checking D²μ_1 ≤ 4j² − c·w² on domains symmetric about the bisector.

use kroger_stability::explicit::verify_symmetric_bound;
use kroger_stability::geometry::{lens, symmetric_trapezoid};
use kroger_stability::harness::{random_symmetric_polygon, unit_triangle};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

fn main() -> kroger_stability::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let domains = vec![
        ("T(0.8 pi)", unit_triangle(0.8 * PI)?),
        ("trapezoid", symmetric_trapezoid(0.3, 0.15)?),
        ("lens", lens(16, 0.1)?),
        ("random symmetric", random_symmetric_polygon(&mut rng, 5, 0.4)?),
    ];
    println!("{:<18} {:>8} {:>12} {:>12} {:>10} {:>6}", "domain", "w", "D^2 mu_1", "bound", "margin", "thin");
    for (name, p) in &domains {
        let b = verify_symmetric_bound(p, 0.02)?;
        println!("{name:<18} {:>8.4} {:>12.6} {:>12.6} {:>10.2e} {:>6}", b.width, b.lhs, b.rhs, b.margin, b.thin);
    }
    Ok(())
}
