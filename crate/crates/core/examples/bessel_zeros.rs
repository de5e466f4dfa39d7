//! Bessel functions, their zeros and Gauss–Legendre quadrature.

use kroger_stability::specfun::{bessel_j, bessel_prime_zero, bessel_zero, gauss_legendre, integrate};

fn main() -> kroger_stability::Result<()> {
    println!("{:>6} {:>4} {:>22} {:>14}", "nu", "m", "j_{nu,m}", "J_nu(j)");
    for nu in [0.0, 0.5, 1.0, 2.5] {
        for m in 1..=3 {
            let j = bessel_zero(nu, m)?;
            println!("{nu:>6.1} {m:>4} {j:>22.16} {:>14.2e}", bessel_j(nu, j)?);
        }
    }
    println!("first zero of J1': {:.16}", bessel_prime_zero(1.0, 1)?);

    // ∫_0^j J0(x) x dx = j·J1(j), which vanishes at a zero of J1.
    let j11 = bessel_zero(1.0, 1)?;
    let rule = gauss_legendre(16)?;
    let integral = integrate(|x| bessel_j(0.0, x).unwrap() * x, 0.0, j11, &rule, 8)?;
    println!("int_0^j11 J0(x) x dx = {integral:.3e}");
    Ok(())
}
