//! Command-line front end. `dispatch` parses arguments, runs one
//! subcommand, writes its artifacts and returns the process exit code.

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::experiments::{
    block_moment, block_shape, detector_pattern, equidist_matrix, max_scan, moments_from_scan,
    sign_pattern_search, tail_distribution, Direction, Sampling, SignCondition, SignPattern,
    DEFAULT_SEED,
};
use crate::families::{
    complete_sum_complex, member_table, FamilyEvaluator, FamilySpec, LaurentTerm, SignConvention,
    TransformMethod,
};
use crate::fejer::{default_alpha_grid, default_n_list, estimator_lower_bound};
use crate::incomplete::{default_windows, profile_with, pv_ratio, short_sum_with};
use crate::modular::{MoebiusMap, OddPrime};
use crate::report::{
    cache_dir, cache_table, fmt_float, load_table, write_csv_file, write_json_file, RunManifest,
    TableKey,
};
use crate::selberg::{choose_l, delta_report, selberg_pair};

#[derive(Parser, Debug)]
#[command(
    name = "expsum",
    version,
    about = "Complete and incomplete exponential sums over prime fields"
)]
struct Cli {
    /// Directory for CSV/JSON artifacts and manifests.
    #[arg(long, global = true, default_value = "expsum-out")]
    out: PathBuf,
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum FamilyName {
    Kloosterman,
    KloostermanDilate,
    KloostermanCurve,
    Birch,
    BirchDilate,
    BirchCurve,
    Laurent,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum SignArg {
    Plus,
    Minus,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum MethodArg {
    Chirp,
    Direct,
}

#[derive(Args, Debug, Clone)]
struct FamilyArgs {
    #[arg(long, value_enum, default_value = "kloosterman")]
    family: FamilyName,
    /// Shift `b` of the Kloosterman family.
    #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
    b: i64,
    /// Curve parameter `m`.
    #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
    m: i64,
    /// Laurent terms as `coefficient:exponent`, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    terms: Vec<String>,
    #[arg(long, value_enum, default_value = "minus")]
    sign: SignArg,
}

impl FamilyArgs {
    fn spec(&self) -> Result<FamilySpec> {
        let f = match self.family {
            FamilyName::Kloosterman => FamilySpec::kloosterman(self.b),
            FamilyName::KloostermanDilate => FamilySpec::kloosterman_dilate(),
            FamilyName::KloostermanCurve => FamilySpec::kloosterman_curve(self.m),
            FamilyName::Birch => FamilySpec::birch(),
            FamilyName::BirchDilate => FamilySpec::birch_dilate(),
            FamilyName::BirchCurve => FamilySpec::birch_curve(self.m),
            FamilyName::Laurent => FamilySpec::laurent(parse_terms(&self.terms)?),
        };
        Ok(f.with_sign(match self.sign {
            SignArg::Plus => SignConvention::Plus,
            SignArg::Minus => SignConvention::Minus,
        }))
    }
}

fn parse_terms(raw: &[String]) -> Result<Vec<LaurentTerm>> {
    raw.iter()
        .map(|t| {
            let (c, e) = t
                .split_once(':')
                .ok_or_else(|| Error::domain(format!("Laurent term '{t}' is not c:e")))?;
            let coefficient = c
                .trim()
                .parse()
                .map_err(|_| Error::domain(format!("bad coefficient in '{t}'")))?;
            let exponent = e
                .trim()
                .parse()
                .map_err(|_| Error::domain(format!("bad exponent in '{t}'")))?;
            Ok(LaurentTerm {
                exponent,
                coefficient,
            })
        })
        .collect()
}

#[derive(Args, Debug, Clone)]
struct ScanArgs {
    /// Single parameter `a`.
    #[arg(long, conflicts_with = "all")]
    a: Option<u64>,
    /// Every `a` in `F_p^x` (or a seeded sample above the exhaustive cap).
    #[arg(long)]
    all: bool,
    /// Sample size for sampled mode.
    #[arg(long)]
    sample: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// One normalized complete sum.
    Sum {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        a: u64,
        #[arg(long)]
        p: u64,
    },
    /// The Fourier table `K_a(y)` of one member.
    Table {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        a: u64,
        #[arg(long)]
        p: u64,
        #[arg(long, value_enum, default_value = "chirp")]
        method: MethodArg,
        /// Read and write the binary cache.
        #[arg(long)]
        cache: bool,
    },
    /// `M(t_a)` and its argmax.
    Maxscan {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        p: u64,
        #[command(flatten)]
        scan: ScanArgs,
    },
    /// Short-interval extrema for the sampled window lengths.
    Shortscan {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        a: u64,
        #[arg(long)]
        p: u64,
        /// Window lengths; defaults to p^0.45, p^0.5, p^0.55 rounded up.
        #[arg(long, value_delimiter = ',')]
        h: Vec<u64>,
    },
    /// Fourier lower-bound estimator next to the true maximum.
    Estimator {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        p: u64,
        #[command(flatten)]
        scan: ScanArgs,
    },
    /// Selberg approximant pair, or the constant term with `--delta`.
    Selberg {
        #[arg(long, default_value_t = 0.0)]
        u: f64,
        #[arg(long, default_value_t = 0.25)]
        v: f64,
        #[arg(long)]
        l: Option<u64>,
        #[arg(long)]
        delta: bool,
        #[arg(long, default_value_t = 1)]
        z: u64,
        #[arg(long, default_value_t = 4)]
        gamma: u64,
    },
    /// Parameters whose transformed sums clear `+-sqrt 2`.
    Signsearch {
        #[arg(long)]
        p: u64,
        /// Harmonic pattern `n = +-1, +-3, ..., +-z` over `Kl(a n, 1; p)`.
        #[arg(long, default_value_t = 1)]
        z: u64,
        /// Use the single condition `Kl(a, 1; p) >= sqrt 2` instead.
        #[arg(long)]
        single: bool,
    },
    /// Moments of `M(t_a)`.
    Moments {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        p: u64,
        #[arg(long, value_delimiter = ',', default_value = "1,2,3")]
        k: Vec<u32>,
        #[arg(long)]
        sample: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Fraction of `a` with `M(t_a) > A`.
    Tails {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        p: u64,
        #[arg(long, value_delimiter = ',', default_value = "0,0.5,1,1.5,2,2.5,3")]
        grid: Vec<f64>,
        #[arg(long)]
        sample: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Chebyshev sums of `Kl(tau a, 1; p)` over dilation maps.
    Equidist {
        #[arg(long)]
        p: u64,
        #[arg(
            long,
            value_delimiter = ',',
            default_value = "1,2",
            allow_hyphen_values = true
        )]
        dilations: Vec<i64>,
        #[arg(long, default_value_t = 8)]
        d_max: u32,
    },
    /// Moments of normalized block sums over `(alpha p, beta p]`.
    Blockmoment {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        beta: f64,
        #[arg(long, default_value_t = 1)]
        k: u32,
    },
    /// Runs the built-in checks.
    Selftest,
}

struct Ctx {
    out: PathBuf,
    manifest: RunManifest,
}

impl Ctx {
    fn path(&self, name: &str) -> PathBuf {
        self.out.join(name)
    }
}

fn scan_sampling(scan: &ScanArgs, p: OddPrime) -> Sampling {
    match scan.sample {
        Some(size) => Sampling::Sampled {
            size,
            seed: scan.seed,
        },
        None => Sampling::for_prime(p, scan.seed),
    }
}

fn seed_of(s: Sampling) -> Option<u64> {
    match s {
        Sampling::Exhaustive => None,
        Sampling::Sampled { seed, .. } => Some(seed),
    }
}

fn parameters(scan: &ScanArgs, p: OddPrime) -> Result<(Vec<u64>, Sampling)> {
    match (scan.a, scan.all) {
        (Some(a), _) => Ok((vec![a], Sampling::Exhaustive)),
        (None, true) => {
            let s = scan_sampling(scan, p);
            Ok((s.parameters(p)?, s))
        }
        (None, false) => Err(Error::domain("give --a or --all")),
    }
}

fn run(cmd: Command, ctx: &mut Ctx) -> Result<()> {
    use rayon::prelude::*;
    match cmd {
        Command::Sum { family, a, p } => {
            let f = family.spec()?;
            let p = OddPrime::new(p)?;
            f.validate_parameter(a, p)?;
            let z = complete_sum_complex(&f, a, p)?;
            if f.is_weil_family() {
                let v = crate::families::complete_sum(&f, a, p)?;
                println!("{v:.6}");
            } else {
                println!("{:.6} {:+.6}i", z.re, z.im);
            }
            ctx.manifest.p = Some(p.get());
            ctx.manifest.family = Some(f.slug());
            write_csv_file(
                &ctx.path("sum.csv"),
                &["p", "family", "a", "re", "im"],
                [vec![
                    p.to_string(),
                    f.slug(),
                    a.to_string(),
                    fmt_float(z.re),
                    fmt_float(z.im),
                ]],
            )
        }
        Command::Table {
            family,
            a,
            p,
            method,
            cache,
        } => {
            let f = family.spec()?;
            let p = OddPrime::new(p)?;
            f.validate_parameter(a, p)?;
            let method = match method {
                MethodArg::Chirp => TransformMethod::ChirpDft,
                MethodArg::Direct => TransformMethod::Direct,
            };
            let key = TableKey {
                p,
                source: crate::families::TableSource::Member {
                    family: f.clone(),
                    parameter: a,
                },
                method,
            };
            let dir = cache_dir();
            let cached = if cache { load_table(&dir, &key)? } else { None };
            let table = match cached {
                Some(t) => {
                    ctx.manifest.cache_hits += 1;
                    t
                }
                None => {
                    let t = member_table(&f, a, p, method)?;
                    if cache {
                        cache_table(&dir, &t)?;
                    }
                    t
                }
            };
            ctx.manifest.p = Some(p.get());
            ctx.manifest.family = Some(f.slug());
            let rows = table
                .values
                .iter()
                .enumerate()
                .map(|(y, z)| vec![y.to_string(), fmt_float(z.re), fmt_float(z.im)]);
            write_csv_file(&ctx.path("table.csv"), &["y", "re", "im"], rows)
        }
        Command::Maxscan { family, p, scan } => {
            let f = family.spec()?;
            let p = OddPrime::new(p)?;
            let (params, sampling) = parameters(&scan, p)?;
            for &a in &params {
                f.validate_parameter(a, p)?;
            }
            let ev = FamilyEvaluator::new(&f, p)?;
            let rows: Vec<Vec<String>> = params
                .par_iter()
                .map(|&a| {
                    let pr = profile_with(&ev, a, false);
                    vec![a.to_string(), fmt_float(pr.max), pr.argmax_h.to_string()]
                })
                .collect();
            ctx.manifest.p = Some(p.get());
            ctx.manifest.family = Some(f.slug());
            ctx.manifest.seed = seed_of(sampling);
            write_csv_file(&ctx.path("maxscan.csv"), &["a", "M", "argmax_H"], rows)
        }
        Command::Shortscan { family, a, p, h } => {
            let f = family.spec()?;
            let p = OddPrime::new(p)?;
            f.validate_parameter(a, p)?;
            let windows = if h.is_empty() {
                default_windows(p).to_vec()
            } else {
                h
            };
            let ev = FamilyEvaluator::new(&f, p)?;
            let mut rows = Vec::new();
            for w in windows {
                if w < 1 || w >= p.get() - 1 {
                    return Err(Error::domain(format!("window H = {w} outside [1, p - 1)")));
                }
                let r = short_sum_with(&ev, a, w);
                rows.push(vec![
                    p.to_string(),
                    f.slug(),
                    a.to_string(),
                    w.to_string(),
                    fmt_float(r.max),
                    r.argmax_start.to_string(),
                    fmt_float(r.ref_eps_005),
                    fmt_float(r.ref_eps_010),
                    fmt_float(r.envelope),
                ]);
            }
            ctx.manifest.p = Some(p.get());
            ctx.manifest.family = Some(f.slug());
            write_csv_file(
                &ctx.path("shortscan.csv"),
                &[
                    "p",
                    "family",
                    "a",
                    "H",
                    "max",
                    "argmax_N",
                    "ref_eps_0.05",
                    "ref_eps_0.10",
                    "envelope",
                ],
                rows,
            )
        }
        Command::Estimator { family, p, scan } => {
            let f = family.spec()?;
            let p = OddPrime::new(p)?;
            let (params, sampling) = parameters(&scan, p)?;
            for &a in &params {
                f.validate_parameter(a, p)?;
            }
            let ev = FamilyEvaluator::new(&f, p)?;
            let (ns, alphas) = (default_n_list(p), default_alpha_grid());
            let rows = params
                .par_iter()
                .map(|&a| {
                    let t = crate::families::member_table_with(&ev, a, TransformMethod::ChirpDft)?;
                    let pr = profile_with(&ev, a, false);
                    let est = estimator_lower_bound(&t, &ns, &alphas)?;
                    Ok(vec![
                        a.to_string(),
                        fmt_float(est.value),
                        fmt_float(est.best_alpha),
                        est.best_n.to_string(),
                        est.terms_used.to_string(),
                        fmt_float(pr.max),
                        fmt_float(pv_ratio(&pr, &t)?),
                    ])
                })
                .collect::<Result<Vec<_>>>()?;
            ctx.manifest.p = Some(p.get());
            ctx.manifest.family = Some(f.slug());
            ctx.manifest.seed = seed_of(sampling);
            write_csv_file(
                &ctx.path("estimator.csv"),
                &[
                    "a",
                    "estimator",
                    "best_alpha",
                    "best_N",
                    "terms_used",
                    "M",
                    "pv_ratio",
                ],
                rows,
            )
        }
        Command::Selberg {
            u,
            v,
            l,
            delta,
            z,
            gamma,
        } => {
            let l = match l {
                Some(l) => l,
                None => choose_l(z, gamma)?,
            };
            if delta {
                let r = delta_report(z, gamma, l)?;
                write_json_file(&ctx.path("delta.json"), &r)?;
                println!("delta = {:.6e}, bound = {:.6e}", r.value, r.bound);
                if !r.meets_bound() {
                    return Err(Error::Integrity(format!(
                        "constant term {:.6e} below the bound {:.6e}",
                        r.value, r.bound
                    )));
                }
                return Ok(());
            }
            let pair = selberg_pair(u, v, l)?;
            let summary = serde_json::json!({
                "u": u,
                "v": v,
                "L": l,
                "tilt": pair.tilt,
                "alpha_integral": pair.alpha_integral(),
                "beta_integral": pair.beta_integral(),
                "target_integral": pair.target_integral(),
                "beta_l2_squared": pair.beta_l2_squared(),
                "beta_l2_cap": (8.0 + 3.0 * l as f64) / ((2 * l + 2) as f64).powi(2),
                "alpha_cheb": pair.alpha_cheb.coefficients,
                "beta_cheb": pair.beta_cheb.coefficients,
            });
            write_json_file(&ctx.path("selberg.json"), &summary)
        }
        Command::Signsearch { p, z, single } => {
            let p = OddPrime::new(p)?;
            let table = crate::families::kloosterman_master(p)?;
            let pattern = if single {
                SignPattern::new(
                    vec![SignCondition {
                        map: MoebiusMap::identity(p),
                        direction: Direction::AtLeast,
                        harmonic: Some(1),
                    }],
                    std::f64::consts::SQRT_2,
                )?
            } else {
                detector_pattern(z, p)?
            };
            let r = sign_pattern_search(&table, &pattern)?;
            ctx.manifest.p = Some(p.get());
            ctx.manifest.family = r.family.clone();
            write_json_file(&ctx.path("signsearch.json"), &r)?;
            let rows = r.members.iter().enumerate().map(|(i, a)| {
                vec![
                    a.to_string(),
                    r.member_max
                        .as_ref()
                        .map_or("NaN".into(), |m| fmt_float(m[i])),
                    r.member_harmonic_bound
                        .as_ref()
                        .map_or("NaN".into(), |h| fmt_float(h[i])),
                ]
            });
            write_csv_file(
                &ctx.path("signsearch.csv"),
                &["a", "M", "harmonic_bound"],
                rows,
            )
        }
        Command::Moments {
            family,
            p,
            k,
            sample,
            seed,
        } => {
            let f = family.spec()?;
            let p = OddPrime::new(p)?;
            let sampling = match sample {
                Some(size) => Sampling::Sampled { size, seed },
                None => Sampling::for_prime(p, seed),
            };
            let r = moments_from_scan(&max_scan(&f, p, sampling)?, &k)?;
            ctx.manifest.p = Some(p.get());
            ctx.manifest.family = Some(f.slug());
            ctx.manifest.seed = seed_of(sampling);
            let rows = (0..r.ks.len()).map(|i| {
                vec![
                    p.to_string(),
                    r.family.clone(),
                    r.ks[i].to_string(),
                    fmt_float(r.moments[i]),
                    fmt_float(r.logk_curve[i]),
                    fmt_float(r.loglogp_curve[i]),
                    fmt_float(r.pk_curve[i]),
                ]
            });
            write_csv_file(
                &ctx.path("moments.csv"),
                &[
                    "p",
                    "family",
                    "k",
                    "moment",
                    "logk_curve",
                    "loglogp_curve",
                    "Pk_curve",
                ],
                rows,
            )
        }
        Command::Tails {
            family,
            p,
            grid,
            sample,
            seed,
        } => {
            let f = family.spec()?;
            let p = OddPrime::new(p)?;
            let sampling = match sample {
                Some(size) => Sampling::Sampled { size, seed },
                None => Sampling::for_prime(p, seed),
            };
            let scan = max_scan(&f, p, sampling)?;
            ctx.manifest.p = Some(p.get());
            ctx.manifest.family = Some(f.slug());
            ctx.manifest.seed = seed_of(sampling);
            let rows = tail_distribution(&scan, &grid)
                .into_iter()
                .map(|(a, fr)| vec![fmt_float(a), fmt_float(fr)]);
            write_csv_file(&ctx.path("tails.csv"), &["A", "fraction"], rows)
        }
        Command::Equidist {
            p,
            dilations,
            d_max,
        } => {
            let p = OddPrime::new(p)?;
            let maps = dilations
                .iter()
                .map(|&y| MoebiusMap::dilation(y, p))
                .collect::<Result<Vec<_>>>()?;
            let r = equidist_matrix(&crate::families::kloosterman_master(p)?, &maps, d_max)?;
            ctx.manifest.p = Some(p.get());
            ctx.manifest.family = Some(FamilySpec::kloosterman_dilate().slug());
            write_json_file(&ctx.path("equidist.json"), &r)
        }
        Command::Blockmoment {
            family,
            p,
            alpha,
            beta,
            k,
        } => {
            let f = family.spec()?;
            let p = OddPrime::new(p)?;
            let v = block_moment(&f, p, alpha, beta, k)?;
            ctx.manifest.p = Some(p.get());
            ctx.manifest.family = Some(f.slug());
            write_csv_file(
                &ctx.path("blockmoment.csv"),
                &[
                    "p",
                    "family",
                    "alpha",
                    "beta",
                    "k",
                    "value",
                    "shape_unit_constants",
                ],
                [vec![
                    p.to_string(),
                    f.slug(),
                    fmt_float(alpha),
                    fmt_float(beta),
                    k.to_string(),
                    fmt_float(v),
                    fmt_float(block_shape(k, beta - alpha, p, 1.0, 1.0)),
                ]],
            )
        }
        Command::Selftest => {
            let checks = crate::selftest::run_all();
            for c in &checks {
                println!(
                    "{} {:<24} {:>7.2}s  {}",
                    if c.passed { "PASS" } else { "FAIL" },
                    c.name,
                    c.seconds,
                    c.detail
                );
            }
            write_json_file(&ctx.path("selftest.json"), &checks)?;
            let failed: Vec<&str> = checks
                .iter()
                .filter(|c| !c.passed)
                .map(|c| c.name)
                .collect();
            if failed.is_empty() {
                Ok(())
            } else {
                Err(Error::Integrity(format!(
                    "self-test failures: {}",
                    failed.join(", ")
                )))
            }
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Sum { .. } => "sum",
        Command::Table { .. } => "table",
        Command::Maxscan { .. } => "maxscan",
        Command::Shortscan { .. } => "shortscan",
        Command::Estimator { .. } => "estimator",
        Command::Selberg { .. } => "selberg",
        Command::Signsearch { .. } => "signsearch",
        Command::Moments { .. } => "moments",
        Command::Tails { .. } => "tails",
        Command::Equidist { .. } => "equidist",
        Command::Blockmoment { .. } => "blockmoment",
        Command::Selftest => "selftest",
    }
}

fn write_manifest(out: &Path, name: &str, m: &RunManifest) -> Result<()> {
    write_json_file(&out.join(format!("{name}.manifest.json")), m)
}

/// Runs the command line `argv` (including the program name) and returns
/// the exit code: 0 on success, 1 for domain errors, 2 for numerical
/// integrity failures.
pub fn dispatch<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let argv: Vec<std::ffi::OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e)
            if matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            ) =>
        {
            let _ = e.print();
            return 0;
        }
        Err(e) => {
            let msg = e.to_string();
            eprintln!("{}", msg.lines().next().unwrap_or("invalid arguments"));
            return 1;
        }
    };
    let started = Instant::now();
    let name = command_name(&cli.command);
    let mut ctx = Ctx {
        out: cli.out.clone(),
        manifest: RunManifest::new(
            argv.iter()
                .map(|s| s.to_string_lossy().into_owned())
                .collect(),
        ),
    };
    let result = match cli.threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| run(cli.command, &mut ctx)),
            Err(e) => Err(Error::domain(format!(
                "cannot start {n} worker threads: {e}"
            ))),
        },
        None => run(cli.command, &mut ctx),
    };
    ctx.manifest.wall_time_s = started.elapsed().as_secs_f64();
    // the manifest is written even when the command fails
    if let Err(e) = write_manifest(&ctx.out, name, &ctx.manifest) {
        eprintln!("error: could not write manifest: {e}");
    }
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
