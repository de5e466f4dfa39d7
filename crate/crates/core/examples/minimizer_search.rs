//! Searching concave profiles h for the minimum of the quadratic functional.

use kroger_stability::explicit::{j_functional, minimizer_search, ConcaveH};

fn main() -> kroger_stability::Result<()> {
    for w in [0.25, 0.5, 1.0] {
        let r = minimizer_search(w, 500, 1)?;
        println!(
            "w = {w}: min J = {:.10} at {} (J(2x) = {:.10}, {} candidates, corner gap {:.2e}, affine gap {:.2e})",
            r.min_j, r.argmin_description, r.j_linear, r.n_candidates, r.corner_gap, r.affine_gap
        );
    }
    let flat = ConcaveH::constant(1.0)?;
    println!("J(constant 1, w = 0.5) = {:.10}", j_functional(&flat, 0.5)?);
    Ok(())
}
