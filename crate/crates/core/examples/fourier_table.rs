//! One member's whole Fourier table by a single prime-length transform,
//! checked against the direct O(p^2) method.

use std::time::Instant;

use expsum::families::member_table;
use expsum::{FamilySpec, OddPrime, TransformMethod};

fn main() -> expsum::Result<()> {
    let p = OddPrime::new(4099)?;
    let fam = FamilySpec::birch();
    let t0 = Instant::now();
    let fast = member_table(&fam, 11, p, TransformMethod::ChirpDft)?;
    let t1 = Instant::now();
    let slow = member_table(&fam, 11, p, TransformMethod::Direct)?;
    let t2 = Instant::now();
    let diff = fast
        .values
        .iter()
        .zip(&slow.values)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    println!(
        "p = {p}: chirp {:?}, direct {:?}, max |diff| {diff:.2e}",
        t1 - t0,
        t2 - t1
    );
    println!("sup |K(y)| = {:.6}", fast.sup_norm());
    Ok(())
}
