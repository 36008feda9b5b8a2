//! Parameters a with Kl(an, 1) >= sqrt 2 and Kl(-an, 1) <= -sqrt 2 for odd
//! n <= z, and the harmonic lower bound on M along the detector set.

use expsum::experiments::{detector_chain, sign_pattern_search, SignPattern};
use expsum::families::kloosterman_master;
use expsum::OddPrime;

fn main() -> expsum::Result<()> {
    let p = OddPrime::new(10007)?;
    let table = kloosterman_master(p)?;
    for z in [1, 3] {
        let r = sign_pattern_search(&table, &SignPattern::dilations(z, p)?)?;
        println!(
            "z = {z}: {} members, density {:.5} (predicted {:.5})",
            r.count, r.density, r.predicted_density
        );
    }
    let chain = detector_chain(p, 1)?;
    let held = chain.rows.iter().filter(|r| r.holds).count();
    let min = chain
        .rows
        .iter()
        .map(|r| r.max)
        .fold(f64::INFINITY, f64::min);
    println!(
        "detector set: {} rows, {held} satisfy the chain, min M = {min:.4}, floor {:.4}",
        chain.rows.len(),
        chain.floor
    );
    Ok(())
}
