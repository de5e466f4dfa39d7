//! The explicit stability constant and the functional behind it.

use kroger_stability::explicit::{self, tau_optimality, tau_parabola};
use kroger_stability::harness::constant_table;

fn main() -> kroger_stability::Result<()> {
    let report = explicit::explicit_constant();
    print!("{}", constant_table(&report));
    println!("consistency error {:.2e}", report.consistency_error());
    println!("tau locally optimal: {}", tau_optimality());
    let (second, vertex) = tau_parabola(1e-3);
    println!("second difference in tau {second:.4e}, parabola vertex {vertex:.10}");

    println!("{:>6} {:>14}", "w", "Q(w)");
    for (w, q) in &report.q_samples {
        println!("{w:>6.2} {q:>14.10}");
    }
    Ok(())
}
