//! Approximant pair for the interval [0, 1/4] and the constant term that
//! feeds the detector argument.

use expsum::selberg::{choose_l, delta_report, selberg_pair};

fn main() -> expsum::Result<()> {
    for l in [47, 151] {
        let pr = selberg_pair(0.0, 0.25, l)?;
        println!(
            "L = {l}: int alpha = {:.6}, int beta = {:.3e}, target {:.6}, tilt {:.2e}, scale {:.6}",
            pr.alpha_integral(),
            pr.beta_integral(),
            pr.target_integral(),
            pr.tilt,
            pr.scale
        );
    }
    for z in [1, 3, 5] {
        let d = delta_report(z, 4, choose_l(z, 4)?)?;
        let verdict = if d.meets_bound() { "meets" } else { "misses" };
        println!(
            "z = {z}, L = {}: Delta = {:.4e} {verdict} {:.4e}",
            d.l, d.value, d.bound
        );
    }
    Ok(())
}
