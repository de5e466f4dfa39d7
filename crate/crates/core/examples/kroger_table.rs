//! Sharp bounds for D²μ_k with the eigenvalue of each maximizing profile.

use kroger_stability::harness::kroger_table;

fn main() -> kroger_stability::Result<()> {
    let table = kroger_table(4, 6, 2048)?;
    println!("{:>3} {:>3} {:>20} {:>20} {:>11}", "k", "d", "bound", "profile mu_k", "rel err");
    for c in &table {
        match (c.computed, c.relative_error) {
            (Some(mu), Some(e)) => println!("{:>3} {:>3} {:>20.12} {:>20.12} {:>11.2e}", c.k, c.d, c.bound, mu, e),
            _ => println!("{:>3} {:>3} {:>20.12} {:>20} {:>11}", c.k, c.d, c.bound, "-", "-"),
        }
    }
    Ok(())
}
