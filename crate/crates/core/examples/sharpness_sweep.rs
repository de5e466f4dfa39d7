//! Deficit of μ_1 over superequilateral triangles as they flatten.

use kroger_stability::harness::{aperture_for_width, sharpness_sweep};

fn main() -> kroger_stability::Result<()> {
    let alphas: Vec<f64> = [0.2, 0.14, 0.1, 0.07, 0.05, 0.035, 0.02].iter().map(|&w| aperture_for_width(w)).collect();
    let report = sharpness_sweep(&alphas, 0.02)?;
    println!("{:>8} {:>14} {:>14} {:>10}", "w", "deficit", "deficit/w^2", "method");
    for r in &report.rows {
        let def = r.deficit_extrapolated.unwrap_or(r.deficit);
        println!("{:>8.4} {:>14.6e} {:>14.4} {:>10}", r.width, def, def / r.width.powi(2), r.method);
    }
    println!("fitted exponent {:.4} over {} rows", report.slope, report.n_fit);
    Ok(())
}
