//! Randomized invariants.

mod common;

use num_complex::Complex64;
use proptest::prelude::*;

use expsum::chebyshev::{cheb_u, cheb_u_angle};
use expsum::families::{
    batch_complete_sums, complete_sum, complete_sum_complex, kloosterman_master, master_table,
    FamilyEvaluator,
};
use expsum::fejer::{fejer_kernel, odd_harmonic_bound};
use expsum::incomplete::{profile_with, range_sum};
use expsum::modular::{mod_inverse, root_of_unity};
use expsum::{FamilySpec, MoebiusMap, OddPrime, ProjPoint};

const PRIMES: [u64; 8] = [3, 5, 7, 101, 1009, 7919, 10007, 65537];

fn any_prime() -> impl Strategy<Value = OddPrime> {
    prop::sample::select(PRIMES.to_vec()).prop_map(|p| OddPrime::new(p).unwrap())
}

fn prime_and_unit() -> impl Strategy<Value = (OddPrime, u64)> {
    any_prime().prop_flat_map(|p| (Just(p), 1..p.get()))
}

fn prime_and_map() -> impl Strategy<Value = (OddPrime, [i64; 4])> {
    prop::sample::select(vec![5u64, 7, 101, 1009])
        .prop_flat_map(|p| {
            (
                Just(OddPrime::new(p).unwrap()),
                prop::array::uniform4(-(p as i64)..(p as i64)),
            )
        })
        .prop_filter("nondegenerate", |(p, [a, b, c, d])| {
            (a * d - b * c).rem_euclid(p.get() as i64) != 0
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn inverse_is_an_involution((p, x) in prime_and_unit()) {
        let y = mod_inverse(x, p).unwrap();
        prop_assert_eq!(p.mul(x, y), 1);
        prop_assert_eq!(mod_inverse(y, p).unwrap(), x);
    }

    #[test]
    fn roots_multiply(p in any_prime(), j in -1_000_000i64..1_000_000, k in -1_000_000i64..1_000_000) {
        let lhs = root_of_unity(j, p) * root_of_unity(k, p);
        prop_assert!((lhs - root_of_unity(j + k, p)).norm() < 1e-10);
    }

    #[test]
    fn moebius_inverse_undoes((p, [a, b, c, d]) in prime_and_map(), x in 0u64..1009) {
        let m = MoebiusMap::new(a, b, c, d, p).unwrap();
        let pt = ProjPoint::Finite(x % p.get());
        prop_assert_eq!(m.inverse().apply(m.apply(pt)), pt);
        prop_assert_eq!(m.compose(&m.inverse()), MoebiusMap::identity(p));
        prop_assert_eq!(m.inverse().apply(m.apply(ProjPoint::Infinity)), ProjPoint::Infinity);
    }

    #[test]
    fn compose_is_application((p, [a, b, c, d]) in prime_and_map(), (_, [e, f, g, h]) in prime_and_map(), x in 0u64..1009) {
        let m = MoebiusMap::new(a, b, c, d, p).unwrap();
        let Ok(n) = MoebiusMap::new(e, f, g, h, p) else { return Ok(()) };
        let pt = ProjPoint::Finite(x % p.get());
        prop_assert_eq!(m.compose(&n).apply(pt), m.apply(n.apply(pt)));
    }

    #[test]
    fn complete_sums_are_real_and_bounded((p, a) in prime_and_unit()) {
        for fam in [FamilySpec::kloosterman(1), FamilySpec::kloosterman(2), FamilySpec::birch(), FamilySpec::birch_dilate()] {
            let z = complete_sum_complex(&fam, a, p).unwrap();
            prop_assert!(z.norm() <= 2.0 + 1e-9);
            prop_assert!(z.im.abs() <= 1e-9);
        }
    }

    #[test]
    fn kloosterman_collapses((p, a) in prime_and_unit(), b in 1u64..65537) {
        let b = b % p.get();
        prop_assume!(b != 0);
        let lhs = complete_sum(&FamilySpec::kloosterman(b as i64), a, p).unwrap();
        let rhs = complete_sum(&FamilySpec::kloosterman(1), p.mul(a, b), p).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-9);
    }

    #[test]
    fn fejer_is_nonnegative_and_symmetric(n in 1u64..2048, theta in 0.0f64..1.0) {
        let v = fejer_kernel(n, theta);
        prop_assert!(v >= 0.0);
        prop_assert!((v - fejer_kernel(n, 1.0 - theta)).abs() <= 1e-9 * n as f64);
        prop_assert!(v <= n as f64 * (1.0 + 1e-12));
    }

    #[test]
    fn chebyshev_recurrence_matches_sines(n in 0u64..=200, theta in 0.001f64..3.14) {
        let d = (cheb_u(n, 2.0 * theta.cos()).unwrap() - cheb_u_angle(n, theta)).abs();
        prop_assert!(d <= 1e-8, "n={} theta={} diff={}", n, theta, d);
    }

    #[test]
    fn odd_harmonics_grow_with_z(extra in prop::collection::vec(0.0f64..0.6, 8)) {
        // v_n sign(n) >= sqrt 2 for every supplied n
        let mut vals = std::collections::BTreeMap::new();
        for (i, e) in extra.chunks(2).enumerate() {
            let n = 2 * i as i64 + 1;
            vals.insert(n, std::f64::consts::SQRT_2 + e[0]);
            vals.insert(-n, -std::f64::consts::SQRT_2 - e[1]);
        }
        let mut prev = 0.0;
        for z in [1u64, 3, 5, 7] {
            let v = odd_harmonic_bound(&vals, z).unwrap();
            prop_assert!(v >= prev);
            prev = v;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn prefix_and_range_sums_telescope(a in 1u64..1009, n in 1u64..1000, h in 0u64..1000) {
        let p = OddPrime::new(1009).unwrap();
        prop_assume!(n + h < p.get());
        let fam = FamilySpec::kloosterman(1);
        let ev = FamilyEvaluator::new(&fam, p).unwrap();
        let path = profile_with(&ev, a, true).full_prefix.unwrap();
        let r = range_sum(&fam, a, p, n, h).unwrap();
        let end = (n + h + 1) as usize;
        let s_end = if end < p.as_usize() {
            path[end]
        } else {
            path[end - 1] + ev.value(a, end as u64 - 1) / p.sqrt()
        };
        let diff = (s_end - path[n as usize]) * p.sqrt();
        prop_assert!((r - diff).norm() <= 1e-9 * p.sqrt());
    }

    #[test]
    fn shift_tables_are_translates_of_the_master(b in 1i64..50, a in 1u64..1009) {
        let p = OddPrime::new(1009).unwrap();
        let fam = FamilySpec::kloosterman(b);
        let member = batch_complete_sums(&fam, a, p).unwrap();
        let master = master_table(&fam, p).unwrap();
        for y in 0..p.get() {
            let tau = fam.fourier_map(y as i64, p).unwrap();
            let expect = master.real_at(tau.apply(ProjPoint::Finite(a)));
            prop_assert!((member.get(y).re - expect).abs() <= 1e-9);
        }
    }
}

#[test]
fn moebius_maps_permute_the_line() {
    for p in [3u64, 5, 7, 101, 1009] {
        let q = OddPrime::new(p).unwrap();
        for (a, b, c, d) in [
            (1, 1, 0, 1),
            (2, 0, 0, 1),
            (0, 1, 1, 0),
            (3, 5, 7, 2),
            (1, 0, 1, 1),
        ] {
            let Ok(m) = MoebiusMap::new(a, b, c, d, q) else {
                continue;
            };
            let mut seen = vec![false; p as usize + 1];
            for x in (0..p).map(ProjPoint::Finite).chain([ProjPoint::Infinity]) {
                let i = m.apply(x).finite().map_or(p as usize, |v| v as usize);
                assert!(!seen[i], "{m:?} is not injective over {p}");
                seen[i] = true;
            }
        }
    }
}

#[test]
fn master_table_entries_are_real() {
    let p = OddPrime::new(7919).unwrap();
    let t = kloosterman_master(p).unwrap();
    assert!(t
        .values
        .iter()
        .all(|z: &Complex64| z.im.abs() <= 1e-9 && z.norm() <= 2.0 + 1e-9));
}
