//! M(t) = max_H |S(t, H)| for a few shifts, against the Polya-Vinogradov
//! bound ||K|| log 3p.

use expsum::families::member_table;
use expsum::incomplete::{prefix_profile, pv_ratio};
use expsum::{FamilySpec, OddPrime, TransformMethod};

fn main() -> expsum::Result<()> {
    let p = OddPrime::new(10007)?;
    let fam = FamilySpec::kloosterman(1);
    println!("{:>6} {:>9} {:>7} {:>8}", "a", "M", "argmax", "PV ratio");
    for a in [1, 2, 3, 5000, 10006] {
        let prof = prefix_profile(&fam, a, p)?;
        let table = member_table(&fam, a, p, TransformMethod::ChirpDft)?;
        println!(
            "{a:>6} {:>9.4} {:>7} {:>8.4}",
            prof.max,
            prof.argmax_h,
            pv_ratio(&prof, &table)?
        );
    }
    Ok(())
}
