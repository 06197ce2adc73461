use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::init::{random_perp_state, random_tilde_state};
use crate::basis::ModeIndex;
use crate::coupling::{
    build_tensor, gaunt, gaunt_signed, sum_sq_bound, sum_sq_channel, sum_sq_closed_form, BoundChannel, GauntKey,
};
use crate::operator::{fourier_multiplier_oracle, trilinear_sides};
use crate::solver::{integrate_numeric, solve_cascade, IntegratorConfig, Method};
use crate::specfun::{assoc_legendre_unchecked, gauss_legendre, ylm_norm};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Fast,
    Full,
}

impl FromStr for Level {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fast" => Ok(Level::Fast),
            "full" => Ok(Level::Full),
            _ => Err(Error::Config(format!("unknown verify level `{s}` (expected fast or full)"))),
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Level::Fast => "fast",
            Level::Full => "full",
        })
    }
}

/// One named check: `value` is compared against `limit`, `margin` is
/// `limit - value` (positive on success).
#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub value: f64,
    pub limit: f64,
    pub margin: f64,
    pub detail: String,
}

impl CheckResult {
    pub fn new(name: &str, value: f64, limit: f64, detail: String) -> Self {
        CheckResult { name: name.to_string(), passed: value <= limit, value, limit, margin: limit - value, detail }
    }
}

/// Whether the A² channel sum attains its closed form.
#[derive(Debug, Clone, Serialize)]
pub struct A2Finding {
    pub equality_holds: bool,
    pub closed_form: &'static str,
    pub max_relative_gap: f64,
    pub max_ratio_to_bound: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub level: Level,
    pub seed: u64,
    pub passed: bool,
    pub checks: Vec<CheckResult>,
    pub a2_equality: A2Finding,
}

/// Gaunt values against a higher-order quadrature and under index
/// permutation, for `l1 ∈ {1, 2}` and `l2 <= lmax`.
pub fn check_gaunt_exactness(lmax: i32) -> CheckResult {
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for l1 in 1..=2 {
        for l2 in 0..=lmax {
            for l3 in (l2 - l1).max(0)..=(l2 + l1) {
                for m1 in -l1..=l1 {
                    for m2 in -l2..=l2 {
                        let m3 = -m1 - m2;
                        if m3.abs() > l3 {
                            continue;
                        }
                        let key = GauntKey { l1, m1, l2, m2, l3, m3 };
                        let g = gaunt(&key);
                        let reference = if key.vanishes() { 0.0 } else { overintegrated_gaunt(&key) };
                        let perm = gaunt_signed(l3, m3, l1, m1, l2, m2);
                        worst = worst.max((g - reference).abs()).max((g - perm).abs());
                        count += 1;
                    }
                }
            }
        }
    }
    CheckResult::new("gaunt_exactness", worst, 1e-13, format!("{count} integrals, l1 in {{1,2}}, l2 <= {lmax}"))
}

fn overintegrated_gaunt(key: &GauntKey) -> f64 {
    let rule = gauss_legendre(((key.l1 + key.l2 + key.l3) / 2 + 6) as usize);
    let (l1, l2, l3) = (key.l1 as usize, key.l2 as usize, key.l3 as usize);
    let (a1, a2, a3) = (key.m1.unsigned_abs() as usize, key.m2.unsigned_abs() as usize, key.m3.unsigned_abs() as usize);
    let norm = ylm_norm(l1, a1) * ylm_norm(l2, a2) * ylm_norm(l3, a3);
    2.0 * std::f64::consts::PI
        * norm
        * rule.integrate(|x| {
            assoc_legendre_unchecked(l1, a1, x) * assoc_legendre_unchecked(l2, a2, x) * assoc_legendre_unchecked(l3, a3, x)
        })
}

/// Closed forms of the A¹/A³ channel sums and the three coefficient bounds
/// for `2 <= n <= nmax`, `l <= lmax`, all `|m*| <= l`. Returns the checks and
/// the A² finding.
pub fn check_coefficient_identities(nmax: i32, lmax: i32) -> (Vec<CheckResult>, A2Finding) {
    let mut identity: f64 = 0.0;
    let mut bound: f64 = f64::NEG_INFINITY;
    let mut a2_gap: f64 = 0.0;
    let mut a2_ratio: f64 = 0.0;
    for n in 2..=nmax {
        for l in 0..=lmax {
            for m_star in -l..=l {
                for ch in [BoundChannel::A1, BoundChannel::A3] {
                    let s = sum_sq_channel(ch, n, l, m_star);
                    let c = sum_sq_closed_form(ch, n, l);
                    identity = identity.max((s - c).abs() / c.abs().max(1.0));
                }
                let s1 = sum_sq_channel(BoundChannel::A1, n, l, m_star);
                bound = bound.max(s1 / sum_sq_bound(BoundChannel::A1, n, l) - 1.0);
                if l >= 1 {
                    let s2 = sum_sq_channel(BoundChannel::A2, n, l, m_star);
                    let c2 = sum_sq_closed_form(BoundChannel::A2, n, l);
                    a2_gap = a2_gap.max((s2 - c2).abs() / c2.abs().max(1.0));
                    let r = s2 / sum_sq_bound(BoundChannel::A2, n, l);
                    a2_ratio = a2_ratio.max(r);
                    bound = bound.max(r - 1.0);
                }
                if l >= 2 {
                    let s3 = sum_sq_channel(BoundChannel::A3, n, l, m_star);
                    bound = bound.max(s3 / sum_sq_bound(BoundChannel::A3, n, l) - 1.0);
                }
            }
        }
    }
    let scope = format!("2 <= n <= {nmax}, l <= {lmax}");
    let checks = vec![
        CheckResult::new("coefficient_sum_identities", identity, 1e-11, format!("A1 and A3 closed forms, {scope}")),
        CheckResult::new("coefficient_bounds", bound, 1e-12, format!("max relative excess over the A1/A2/A3 bounds, {scope}")),
    ];
    let finding = A2Finding {
        equality_holds: a2_gap <= 1e-11,
        closed_form: "8n(2n+2l+1)l(l+1)/(3(2l+3)(2l-1))",
        max_relative_gap: a2_gap,
        max_ratio_to_bound: a2_ratio,
    };
    (checks, finding)
}

/// Samples the trilinear estimate; `value` is the largest ratio of left to
/// right side.
pub fn check_trilinear(truncation: u32, triples: usize, alphas: &[f64], rng: &mut ChaCha8Rng) -> Result<CheckResult> {
    let tensor = build_tensor(truncation)?;
    let mut worst: f64 = 0.0;
    for &alpha in alphas {
        for _ in 0..triples {
            let f = random_tilde_state(rng, truncation, 0.8)?;
            let g = random_tilde_state(rng, truncation, 0.8)?;
            let h = random_tilde_state(rng, truncation, 0.8)?;
            let (lhs, rhs) = trilinear_sides(&f, &g, &h, &tensor, alpha)?;
            worst = worst.max(lhs / rhs);
        }
    }
    Ok(CheckResult::new(
        "trilinear_estimate",
        worst,
        1.0,
        format!("N = {truncation}, {triples} triples per alpha in {alphas:?}; value is max lhs/rhs"),
    ))
}

/// Uniform sample in the ball of radius `radius`, away from the origin.
pub fn random_xi(rng: &mut ChaCha8Rng, radius: f64) -> [f64; 3] {
    loop {
        let v = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
        let r2: f64 = v.iter().map(|x| x * x).sum();
        if r2 <= 1.0 && r2 > 1e-4 {
            return [radius * v[0], radius * v[1], radius * v[2]];
        }
    }
}

/// Fourier-multiplier identities for every driver and every target with
/// shell `<= max_shell`.
pub fn check_fourier(max_shell: u32, samples: usize, rng: &mut ChaCha8Rng) -> Result<CheckResult> {
    let mut drivers = vec![ModeIndex { n: 1, l: 0, m: 0 }];
    drivers.extend((-2..=2).map(|m| ModeIndex { n: 0, l: 2, m }));
    let mut worst: f64 = 0.0;
    let mut pairs = 0;
    for target in ModeIndex::all_up_to(max_shell) {
        let xis: Vec<[f64; 3]> = (0..samples).map(|_| random_xi(rng, 3.0)).collect();
        for &d in &drivers {
            worst = worst.max(fourier_multiplier_oracle(d, target, &xis)?);
            pairs += 1;
        }
    }
    Ok(CheckResult::new(
        "fourier_multiplier",
        worst,
        1e-10,
        format!("{pairs} driver/target pairs, target shell <= {max_shell}, {samples} samples each"),
    ))
}

/// Cascade against the full quadratic ETD-RK4 system, `dt = 1e-3` on `[0, 1]`.
pub fn check_cascade_vs_numeric(truncation: u32, seed: u64, s2: f64) -> Result<CheckResult> {
    let tensor = build_tensor(truncation)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let init = random_perp_state(&mut rng, truncation, s2, 0.5)?;
    let cfg = IntegratorConfig { method: Method::EtdRk4, dt: 1e-3, t_final: 1.0, c1: 0.05, alpha: 0.0 };
    let series = integrate_numeric(&init, &tensor, &cfg)?;
    let exact = solve_cascade(&init, &tensor)?;
    let worst = series.iter().map(|(t, s)| exact.state_at(*t).max_abs_diff(s)).fold(0.0, f64::max);
    Ok(CheckResult::new(
        "cascade_vs_etd_rk4",
        worst,
        1e-6,
        format!("N = {truncation}, s2 = {s2}, max mode-wise |difference| on t in [0, 1]"),
    ))
}

/// Runs the oracle suites at the requested depth.
pub fn verify(level: Level, seed: u64) -> Result<VerifyReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (lmax, nmax, tri_n, triples, fourier_shell, cascade_n) = match level {
        Level::Fast => (6, 6, 6, 20, 6, 6),
        Level::Full => (12, 12, 20, 100, 6, 10),
    };
    let mut checks = vec![check_gaunt_exactness(lmax)];
    let (coef_checks, a2_equality) = check_coefficient_identities(nmax, lmax);
    checks.extend(coef_checks);
    checks.push(check_trilinear(tri_n, triples, &[0.0, -1.0, -2.0], &mut rng)?);
    checks.push(check_fourier(fourier_shell, 10, &mut rng)?);
    checks.push(check_cascade_vs_numeric(cascade_n, rng.gen(), 0.3)?);
    let passed = checks.iter().all(|c| c.passed);
    Ok(VerifyReport { level, seed, passed, checks, a2_equality })
}
