//! Flat domains: anisotropic rescaling and the one-dimensional limit.

use kroger_stability::fem2d::{neumann_eigs, neumann_eigs_thin};
use kroger_stability::geometry::{make_triangle, profile, ConvexPolygon};
use kroger_stability::sturm::sl_eigs;
use std::f64::consts::PI;

fn main() -> kroger_stability::Result<()> {
    let strip = ConvexPolygon::rectangle(1.0, 0.01)?;
    let thin = neumann_eigs_thin(&strip, 1, 0.02)?;
    println!("1 x 0.01 rectangle: mu_1 = {:.6}, pi^2 = {:.6}", thin.values[1], PI * PI);

    for alpha in [0.85, 0.9, 0.95] {
        let t = make_triangle(alpha * PI, 1.0)?;
        let d = kroger_stability::geometry::diameter(&t).length;
        let two_d = neumann_eigs_thin(&t, 1, 0.02 * d)?.values[1] * d * d;
        let one_d = sl_eigs(&profile(&t)?, 1, 2048)?.values[1];
        println!("T({alpha} pi): D^2 mu_1 = {two_d:.6}, profile limit {one_d:.6}");
    }

    // A fat domain goes through the isotropic mesher instead.
    let fat = make_triangle(0.5 * PI, 1.0)?;
    println!("T(0.5 pi): mu_1 = {:.6}", neumann_eigs(&fat, 1, 0.03)?.values[1]);
    Ok(())
}
