//! Fejer-smoothed Fourier lower bound for M(t) next to the exact maximum.

use expsum::families::member_table;
use expsum::fejer::{default_alpha_grid, default_n_list, estimator_lower_bound, fejer_kernel};
use expsum::incomplete::prefix_profile;
use expsum::{FamilySpec, OddPrime, TransformMethod};

fn main() -> expsum::Result<()> {
    println!(
        "F_8 at 0, 1/16, 1/2: {:.4} {:.4} {:.4}",
        fejer_kernel(8, 0.0),
        fejer_kernel(8, 1.0 / 16.0),
        fejer_kernel(8, 0.5)
    );

    let p = OddPrime::new(10007)?;
    let fam = FamilySpec::kloosterman(1);
    let (ns, alphas) = (default_n_list(p), default_alpha_grid());
    for a in [1, 7, 77] {
        let table = member_table(&fam, a, p, TransformMethod::ChirpDft)?;
        let est = estimator_lower_bound(&table, &ns, &alphas)?;
        let m = prefix_profile(&fam, a, p)?.max;
        println!(
            "a = {a:>3}: estimator {:.4} (alpha {:.4}, N {}), M = {m:.4}",
            est.value, est.best_alpha, est.best_n
        );
    }
    Ok(())
}
