//! Built-in checks behind the `selftest` subcommand. Each check recomputes
//! its target through an independent path (direct sums, quadrature,
//! closed forms) and compares at a fixed tolerance.

use std::f64::consts::{PI, SQRT_2};
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::chebyshev::st_mass_below;
use crate::error::Result;
use crate::experiments::{
    detector_chain, equidist_matrix, max_moments, sign_pattern_search, Direction, Sampling,
    SignCondition, SignPattern,
};
use crate::families::{
    batch_complete_sums, complete_sum, kloosterman_master, master_table, FamilyEvaluator,
    FamilySpec,
};
use crate::fejer::{fejer_kernel, fitted_constant, reconstruction_error};
use crate::incomplete::{profile_with, pv_ratio};
use crate::modular::{MoebiusMap, OddPrime};
use crate::quadrature::integrate_with_breaks;
use crate::selberg::{choose_l, delta_report, selberg_pair};
use crate::spectral::{direct_entry, Kernel};

#[derive(Debug, Clone, Serialize)]
pub struct SelfCheck {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

fn prime(p: u64) -> OddPrime {
    OddPrime::new(p).expect("fixed primes are prime")
}

fn run(name: &'static str, f: impl FnOnce() -> Result<(bool, String)>) -> SelfCheck {
    let t = Instant::now();
    let (passed, detail) = f().unwrap_or_else(|e| (false, format!("error: {e}")));
    SelfCheck {
        name,
        passed,
        detail,
        seconds: t.elapsed().as_secs_f64(),
    }
}

fn weil_bound() -> Result<(bool, String)> {
    let mut worst = (0.0f64, 0.0f64);
    for p in [101, 1009, 10007] {
        for fam in [FamilySpec::kloosterman_dilate(), FamilySpec::birch()] {
            let t = master_table(&fam, prime(p))?;
            for z in &t.values[1..] {
                worst = (worst.0.max(z.norm()), worst.1.max(z.im.abs()));
            }
        }
    }
    Ok((
        worst.0 <= 2.0 + 1e-9 && worst.1 <= 1e-9,
        format!("max |K| = {:.12}, max |Im K| = {:.2e}", worst.0, worst.1),
    ))
}

fn chirp_vs_direct() -> Result<(bool, String)> {
    let p = prime(10007);
    let fam = FamilySpec::kloosterman(1);
    let table = batch_complete_sums(&fam, 3, p)?;
    let samples = FamilyEvaluator::new(&fam, p)?.samples(3);
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let y = rng.gen_range(0..p.get());
        let d = -direct_entry(&samples, p, Kernel::Positive, y);
        worst = worst.max((d - table.get(y)).norm());
    }
    Ok((worst <= 1e-6, format!("max deviation {worst:.2e}")))
}

fn multiplicative_collapse() -> Result<(bool, String)> {
    let p = prime(10007);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let a = rng.gen_range(1..p.get());
        let b = rng.gen_range(1..p.get());
        let lhs = complete_sum(&FamilySpec::kloosterman(b as i64), a, p)?;
        let rhs = complete_sum(&FamilySpec::kloosterman(1), p.mul(a, b), p)?;
        worst = worst.max((lhs - rhs).abs());
    }
    Ok((worst <= 1e-9, format!("max deviation {worst:.2e}")))
}

fn polya_vinogradov() -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    for p in [101, 1009] {
        let p = prime(p);
        for fam in [FamilySpec::kloosterman(1), FamilySpec::birch_dilate()] {
            let ev = FamilyEvaluator::new(&fam, p)?;
            for a in 1..p.get() {
                let t = crate::families::member_table_with(
                    &ev,
                    a,
                    crate::families::TransformMethod::ChirpDft,
                )?;
                worst = worst.max(pv_ratio(&profile_with(&ev, a, false), &t)?);
            }
        }
    }
    Ok((worst <= 1.0, format!("max M / (||K|| log 3p) = {worst:.4}")))
}

fn fourier_expansion() -> Result<(bool, String)> {
    let p = prime(1009);
    let fam = FamilySpec::kloosterman(1);
    let ev = FamilyEvaluator::new(&fam, p)?;
    let mut better = 0;
    let mut c_fit: f64 = 0.0;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..50 {
        let a = rng.gen_range(1..p.get());
        let table =
            crate::families::member_table_with(&ev, a, crate::families::TransformMethod::ChirpDft)?;
        let path = profile_with(&ev, a, true).full_prefix.expect("path kept");
        let (mut e16, mut e504) = (0.0f64, 0.0f64);
        for j in 0..20 {
            let alpha = (j as f64 + 0.5) / 20.0;
            e16 = e16.max(reconstruction_error(&table, &path, alpha, 16)?);
            e504 = e504.max(reconstruction_error(&table, &path, alpha, 504)?);
        }
        if e16 > e504 {
            better += 1;
        }
        c_fit = c_fit.max(fitted_constant(e504, p, 504));
    }
    Ok((
        better >= 48 && c_fit <= 10.0,
        format!("{better}/50 improve, fitted C = {c_fit:.4}"),
    ))
}

fn fejer() -> Result<(bool, String)> {
    let mut ok = true;
    let mut worst: f64 = 0.0;
    for n in [4u64, 64, 1024] {
        ok &= fejer_kernel(n, 0.0) == n as f64;
        let breaks: Vec<f64> = (0..=n).map(|j| j as f64 / n as f64).collect();
        let v = integrate_with_breaks(|t| fejer_kernel(n, t), &breaks, 1e-12)?;
        worst = worst.max((v - 1.0).abs());
        ok &= (0..10_000).all(|i| fejer_kernel(n, i as f64 / 1e4) >= 0.0);
    }
    Ok((ok && worst <= 1e-9, format!("max |int - 1| = {worst:.2e}")))
}

fn selberg() -> Result<(bool, String)> {
    let mut ok = true;
    let mut notes = Vec::new();
    for (u, v) in [(0.0, 0.25), (0.75, 1.0)] {
        for l in [47u64, 151] {
            let pr = selberg_pair(u, v, l)?;
            let (r, s) = pr.grid_violations();
            let cap = (8.0 + 3.0 * l as f64) / ((2 * l + 2) as f64).powi(2);
            let good = r <= 0.0
                && s <= 0.0
                && pr.alpha_cheb.max_abs() <= 1.0 + 1e-6
                && pr.beta_cheb.max_abs() <= 1.0 + 1e-6
                && pr.alpha_cheb.degree() as u64 <= 2 * l
                && pr.beta_l2_squared() <= cap;
            ok &= good;
            notes.push(format!("({u},{v},L={l}) I={:.6}", pr.alpha_integral()));
        }
    }
    Ok((ok, notes.join("; ")))
}

fn delta_bound() -> Result<(bool, String)> {
    let mut ok = true;
    let mut notes = Vec::new();
    for z in [1u64, 3, 5] {
        let r = delta_report(z, 4, choose_l(z, 4)?)?;
        ok &= r.meets_bound();
        notes.push(format!("z={z}: {:.4e} vs {:.4e}", r.value, r.bound));
    }
    Ok((ok, notes.join("; ")))
}

fn equidistribution() -> Result<(bool, String)> {
    let p = prime(10007);
    let t = kloosterman_master(p)?;
    let r = equidist_matrix(&t, &[MoebiusMap::identity(p)], 8)?;
    let ok = r
        .singles
        .iter()
        .filter(|s| s.n >= 1)
        .all(|s| s.value.abs() <= 4.0 * ((s.n + 1) as f64).powi(2));
    let worst = r
        .singles
        .iter()
        .filter(|s| s.n >= 1)
        .map(|s| s.value.abs())
        .fold(0.0, f64::max);
    Ok((ok, format!("max |sigma_n| = {worst:.3}")))
}

fn sign_search() -> Result<(bool, String)> {
    let p = prime(10007);
    let t = kloosterman_master(p)?;
    let one = SignPattern::new(
        vec![SignCondition {
            map: MoebiusMap::identity(p),
            direction: Direction::AtLeast,
            harmonic: Some(1),
        }],
        SQRT_2,
    )?;
    let d1 = sign_pattern_search(&t, &one)?.density;
    let two = sign_pattern_search(&t, &SignPattern::dilations(1, p)?)?;
    let ok =
        (0.045..=0.182).contains(&d1) && two.count > 0 && (0.00275..=0.0248).contains(&two.density);
    Ok((
        ok,
        format!(
            "one condition {d1:.5} (mu_ST = {:.6}), two conditions {:.5}",
            st_mass_below(PI / 4.0),
            two.density
        ),
    ))
}

fn detector() -> Result<(bool, String)> {
    let r = detector_chain(prime(100_003), 3)?;
    let ok = r
        .rows
        .iter()
        .all(|row| row.holds && row.harmonic_bound >= r.floor - 1e-12);
    Ok((
        ok,
        format!("{} members, floor {:.4}", r.rows.len(), r.floor),
    ))
}

fn moments() -> Result<(bool, String)> {
    let p = prime(1009);
    let fam = FamilySpec::kloosterman_dilate();
    let r = max_moments(&fam, p, &[1, 2, 3], Sampling::Exhaustive)?;
    // naive recomputation: plain running sums, no compensation
    let mut brute = [0.0f64; 3];
    for a in 1..p.get() {
        let mut s = Complex64::new(0.0, 0.0);
        let mut m: f64 = 0.0;
        for x in 0..p.get() - 1 {
            s += crate::families::phase_value(&fam, a, x, p);
            m = m.max(s.norm() / p.sqrt());
        }
        for (k, b) in brute.iter_mut().enumerate() {
            *b += m.powi(2 * (k as i32 + 1)) / (p.get() - 1) as f64;
        }
    }
    let rel = r
        .moments
        .iter()
        .zip(&brute)
        .map(|(x, y)| ((x - y) / y).abs())
        .fold(0.0, f64::max);
    let roots = r.roots();
    let mono = roots.windows(2).all(|w| w[0] <= w[1]);
    Ok((
        rel <= 1e-6 && mono,
        format!("max relative deviation {rel:.2e}"),
    ))
}

fn determinism() -> Result<(bool, String)> {
    let p = prime(1009);
    let fam = FamilySpec::kloosterman(1);
    let once = |threads: usize| -> Result<Vec<u64>> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| crate::Error::Integrity(e.to_string()))?;
        let r = pool.install(|| max_moments(&fam, p, &[1, 2, 3], Sampling::Exhaustive))?;
        Ok(r.moments.iter().map(|m| m.to_bits()).collect())
    };
    let same = once(1)? == once(4)?;
    Ok((
        same,
        if same {
            "bit-identical".into()
        } else {
            "differs across worker counts".into()
        },
    ))
}

/// Runs every check in order.
pub fn run_all() -> Vec<SelfCheck> {
    vec![
        run("weil_bound", weil_bound),
        run("chirp_vs_direct", chirp_vs_direct),
        run("multiplicative_collapse", multiplicative_collapse),
        run("polya_vinogradov", polya_vinogradov),
        run("fourier_expansion", fourier_expansion),
        run("fejer_kernel", fejer),
        run("selberg_pair", selberg),
        run("delta_bound", delta_bound),
        run("equidistribution", equidistribution),
        run("sign_search", sign_search),
        run("detector_chain", detector),
        run("moments", moments),
        run("determinism", determinism),
    ]
}
