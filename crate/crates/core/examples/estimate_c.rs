//! Empirical stability constant over seeded families of domains.

use kroger_stability::harness::{estimate_c, Family};

fn main() -> kroger_stability::Result<()> {
    for family in [Family::Triangles, Family::Symmetric, Family::Random] {
        let r = estimate_c(1, family, 12, 0.03, 5)?;
        println!(
            "{family:?}: min deficit*D^2/a2^2 = {:.4} ({}), symmetric min deficit*D^2/w^2 = {:?}",
            r.c_empirical, r.argmin, r.c_w_symmetric
        );
    }
    Ok(())
}
