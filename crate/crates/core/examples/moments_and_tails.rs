//! Even moments of M over the family and the tail fraction #{a : M > A}.

use expsum::experiments::{max_scan, moments_from_scan, tail_distribution, Sampling};
use expsum::{FamilySpec, OddPrime};

fn main() -> expsum::Result<()> {
    let p = OddPrime::new(10007)?;
    let scan = max_scan(&FamilySpec::kloosterman(1), p, Sampling::for_prime(p, 1))?;
    let rep = moments_from_scan(&scan, &[1, 2, 3, 4])?;
    for ((k, m), root) in rep.ks.iter().zip(&rep.moments).zip(rep.roots()) {
        println!(
            "k = {k}: E[M^2k] = {m:12.4}, root {root:.4}, (log k)^2k = {:.3}",
            rep.logk_curve[(*k - 1) as usize]
        );
    }
    let grid: Vec<f64> = (0..8).map(|i| 0.5 * i as f64).collect();
    for (a, f) in tail_distribution(&scan, &grid) {
        println!("P(M > {a:.1}) = {f:.4}");
    }
    Ok(())
}
