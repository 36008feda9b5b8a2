//! Sums of U_m(Kl(a)) U_n(Kl(2a)) over a, scaled by 1/sqrt p. Apart from
//! the n = 0 mass they stay bounded.

use expsum::experiments::equidist_matrix;
use expsum::families::kloosterman_master;
use expsum::{MoebiusMap, OddPrime};

fn main() -> expsum::Result<()> {
    let p = OddPrime::new(10007)?;
    let table = kloosterman_master(p)?;
    let maps = [MoebiusMap::dilation(1, p)?, MoebiusMap::dilation(2, p)?];
    let r = equidist_matrix(&table, &maps, 3)?;
    for s in r.singles.iter().filter(|s| s.map == 0) {
        println!("sum U_{}(Kl(a)) / sqrt p = {:9.4}", s.n, s.value);
    }
    for x in &r.pairs {
        println!(
            "sum U_{}(Kl(a)) U_{}(Kl(2a)) / sqrt p = {:8.4}",
            x.m, x.n, x.value
        );
    }
    Ok(())
}
