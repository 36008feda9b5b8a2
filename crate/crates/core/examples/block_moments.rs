//! Mean of |S(t_a, [alpha p, beta p))|^2k over a, for shrinking blocks.

use expsum::experiments::block_moment;
use expsum::{FamilySpec, OddPrime};

fn main() -> expsum::Result<()> {
    let p = OddPrime::new(1009)?;
    let fam = FamilySpec::kloosterman(1);
    for k in [1, 2] {
        for w in [0.5, 0.125, 1.0 / 32.0] {
            let v = block_moment(&fam, p, 0.25, 0.25 + w, k)?;
            println!("k = {k}, width {w:.4}: {v:.6}");
        }
    }
    Ok(())
}
