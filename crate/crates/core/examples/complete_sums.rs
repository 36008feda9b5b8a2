//! Normalized Kloosterman and Birch sums, and the reduction Kl(a,b) = Kl(ab,1).

use expsum::families::complete_sum;
use expsum::{FamilySpec, OddPrime};

fn main() -> expsum::Result<()> {
    let p = OddPrime::new(10007)?;
    for (name, fam) in [
        ("Kl(a,1)", FamilySpec::kloosterman(1)),
        ("Kl(a,3)", FamilySpec::kloosterman(3)),
        ("Bi(a,1)", FamilySpec::birch()),
    ] {
        let vals: Vec<f64> = (1..=5)
            .map(|a| complete_sum(&fam, a, p))
            .collect::<Result<_, _>>()?;
        println!("{name:8} a=1..5: {vals:.4?}");
    }
    // Kl(2,3) and Kl(6,1) coincide
    let lhs = complete_sum(&FamilySpec::kloosterman(3), 2, p)?;
    let rhs = complete_sum(&FamilySpec::kloosterman(1), 6, p)?;
    println!("Kl(2,3) = {lhs:.12}, Kl(6,1) = {rhs:.12}");
    Ok(())
}
