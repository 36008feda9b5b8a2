//! Largest short-window sums next to sqrt(H) p^eps and the 2 sqrt(H) log p envelope.

use expsum::incomplete::{default_windows, short_sum_extremum};
use expsum::{FamilySpec, OddPrime};

fn main() -> expsum::Result<()> {
    let p = OddPrime::new(100003)?;
    for h in default_windows(p) {
        let r = short_sum_extremum(&FamilySpec::kloosterman(1), 1, p, h)?;
        println!(
            "H = {h:>4}: max {:7.3} at {:>6}; sqrt(H) p^0.05 = {:6.2}, p^0.1 = {:6.2}, envelope {:6.2}",
            r.max, r.argmax_start, r.ref_eps_005, r.ref_eps_010, r.envelope
        );
    }
    Ok(())
}
