//! Chebyshev U_n under the Sato-Tate measure: orthonormality and the
//! mass of an angular interval.

use std::f64::consts::PI;

use expsum::chebyshev::{cheb_u_angle, st_integrate, st_mass_below, ChebCoeffs};

fn main() -> expsum::Result<()> {
    for (m, n) in [(0, 0), (3, 3), (2, 5), (10, 10)] {
        let v = st_integrate(|t| cheb_u_angle(m, t) * cheb_u_angle(n, t), 1e-11)?;
        println!("<U_{m}, U_{n}> = {v:.10}");
    }
    println!("mu_ST[0, pi/4] = {:.6}", st_mass_below(PI / 4.0));

    // the trace 2 cos(theta) is U_1
    let c = ChebCoeffs::by_quadrature(|t| 2.0 * t.cos(), 4, &[], 1e-12)?;
    println!("2cos expands as {:.3?}", c.coefficients);
    Ok(())
}
