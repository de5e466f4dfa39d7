//! Diameter, width and John ellipse of a few convex polygons.

use kroger_stability::geometry::{self, flatness, john_certificate, john_ellipse, make_triangle, ConvexPolygon};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

fn main() -> kroger_stability::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let shapes = vec![
        ("unit square", ConvexPolygon::rectangle(1.0, 1.0)?),
        ("hexagon", ConvexPolygon::regular(6, 1.0)?),
        ("T(0.9 pi)", make_triangle(0.9 * PI, 1.0)?),
        ("random 12-point hull", geometry::random_convex_polygon(&mut rng, 12, 0.3)?),
    ];
    println!("{:<22} {:>10} {:>10} {:>10} {:>10} {:>10}", "shape", "D", "w", "a1", "a2", "w/a2");
    for (name, p) in &shapes {
        let f = flatness(p)?;
        println!(
            "{name:<22} {:>10.6} {:>10.6} {:>10.6} {:>10.6} {:>10.4}",
            f.diameter, f.width, f.a1, f.a2, f.width / f.a2
        );
    }

    let (_, hull) = &shapes[3];
    let e = john_ellipse(hull)?;
    let (inner, outer) = john_certificate(hull, &e);
    println!("John ellipse of the random hull: {e:?}");
    println!("support excess of E over the edges {inner:.3e}, vertex gauge excess over 2 {outer:.3e}");
    println!("{}", geometry::polygon_to_json(hull));
    Ok(())
}
