//! Weighted eigenvalues -(p u')' = μ p u with p = q^(d-1) for concave q.

use kroger_stability::sturm::{kroger_bound, optimize_trapezoid, sl_eigs, ProfileWeight};

fn main() -> kroger_stability::Result<()> {
    let n = 2048;
    let profiles = [
        ("constant, d=2", ProfileWeight::constant(2)?),
        ("tent, d=2", ProfileWeight::tent(2)?),
        ("trapezoid 0.4, d=2", ProfileWeight::trapezoid(0.4, 2)?),
        ("tent, d=5", ProfileWeight::tent(5)?),
        ("skewed, d=3", ProfileWeight::new(vec![0.0, 0.3, 1.0], vec![0.2, 1.0, 0.0], 3)?),
    ];
    for (name, w) in &profiles {
        let res = sl_eigs(w, 3, n)?;
        let mu: Vec<String> = res.values.iter().map(|v| format!("{v:.6}")).collect();
        println!("{name:<20} mu = [{}]", mu.join(", "));
    }

    let best = optimize_trapezoid(2, 2, n)?;
    println!(
        "best d=2 trapezoid for k=2: plateau {:.5}, mu_2 {:.6} (bound {:.6})",
        best.plateau,
        best.mu_k,
        kroger_bound(2, 2)?
    );
    Ok(())
}
