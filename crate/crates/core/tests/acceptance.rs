//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.

use std::process::ExitCode;
use std::time::Instant;

use landau_spectral::basis::{lambda_eig, project, s2_norm, weighted_norm, ModeIndex, NormSpec};
use landau_spectral::cli::{
    check_cascade_vs_numeric, check_coefficient_identities, check_fourier, check_trilinear, dirac_coefficient,
    init_example_dirac, random_perp_state, random_xi,
};
use landau_spectral::coupling::build_tensor;
use landau_spectral::operator::{moment_integral_oracle, MomentKind, MomentOrders};
use landau_spectral::solver::{diagnostics, integrate_numeric, solve_cascade, IntegratorConfig, Method};
use landau_spectral::Result;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Result<Outcome> {
    Ok(Outcome { passed, detail })
}

fn eigenvalue_table() -> Result<Outcome> {
    let fixed = [(0, 0, 0.0), (0, 1, 0.0), (1, 0, 0.0), (0, 2, 12.0)];
    let mut ok = fixed.iter().all(|&(n, l, v)| lambda_eig(n, l) == v);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut drawn = 0;
    while drawn < 50 {
        let (n, l) = (rng.gen_range(0..40u32), rng.gen_range(0..40u32));
        if 2 * n + l <= 2 {
            continue;
        }
        let expected = (2 * (2 * n + l) + l * (l + 1)) as f64;
        ok &= lambda_eig(n, l) == expected;
        drawn += 1;
    }
    outcome(ok, "4 fixed values and 50 random (n,l) exact".into())
}

fn exact_decay() -> Result<Outcome> {
    let truncation = 8;
    let tensor = build_tensor(truncation)?;
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let init = random_perp_state(&mut rng, truncation, 0.3, 0.5)?;
    let shell2: Vec<ModeIndex> = (-2..=2).map(|m| ModeIndex { n: 0, l: 2, m }).collect();

    let cascade = solve_cascade(&init, &tensor)?;
    let mut cascade_err: f64 = 0.0;
    for i in 0..=100 {
        let t = i as f64 * 0.02;
        for &mode in &shell2 {
            let expected = init.get(mode) * (-12.0 * t).exp();
            cascade_err = cascade_err.max((cascade.eval(mode, t) - expected).norm());
        }
    }

    let cfg = IntegratorConfig { method: Method::EtdRk4, dt: 1e-3, t_final: 1.0, c1: 0.05, alpha: 0.0 };
    let series = integrate_numeric(&init, &tensor, &cfg)?;
    let (t_end, last) = series.last().expect("nonempty series");
    let mut etd_rel: f64 = 0.0;
    for &mode in &shell2 {
        let expected = init.get(mode) * (-12.0 * t_end).exp();
        etd_rel = etd_rel.max((last.get(mode) - expected).norm() / expected.norm());
    }
    outcome(
        cascade_err <= 1e-12 && etd_rel <= 1e-9 && (t_end - 1.0).abs() < 1e-12,
        format!("cascade max abs error {cascade_err:.3e} (<= 1e-12), etd-rk4 relative error at t=1 {etd_rel:.3e} (<= 1e-9)"),
    )
}

fn coefficient_identities() -> Result<Outcome> {
    let (checks, a2) = check_coefficient_identities(12, 12);
    let detail = checks
        .iter()
        .map(|c| format!("{} {:.3e} (<= {:.0e})", c.name, c.value, c.limit))
        .chain(std::iter::once(format!(
            "A2 closed form attained: {} (gap {:.3e}, max ratio to bound {:.4})",
            a2.equality_holds, a2.max_relative_gap, a2.max_ratio_to_bound
        )))
        .collect::<Vec<_>>()
        .join("; ");
    outcome(checks.iter().all(|c| c.passed), detail)
}

fn expansion_oracle() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let c = check_fourier(4, 10, &mut rng)?;
    outcome(c.passed, format!("{}: max relative error {:.3e} (<= 1e-10)", c.detail, c.value))
}

fn moment_integrals() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(51);
    let mut kinds: Vec<MomentKind> = (-1..=1).map(|m1| MomentKind::Orth1 { m1 }).collect();
    kinds.extend((-2..=2).map(|m2| MomentKind::Orth2 { m2 }));
    kinds.push(MomentKind::Orth3);
    let mut worst: f64 = 0.0;
    for kind in kinds {
        let samples: Vec<[f64; 3]> = (0..5).map(|_| random_xi(&mut rng, 3.0)).collect();
        worst = worst.max(moment_integral_oracle(kind, &samples, MomentOrders::default())?);
    }
    let unit = [0.0, 0.6, 0.8];
    let orth3 = MomentKind::Orth3.closed_form(unit);
    let orth3_err = (orth3.re + 6f64.sqrt() / 3.0).abs() + orth3.im.abs();
    let orth3_quad = moment_integral_oracle(MomentKind::Orth3, &[unit], MomentOrders::default())?;
    outcome(
        worst <= 1e-8 && orth3_err <= 1e-15 && orth3_quad <= 1e-8,
        format!(
            "max relative error {worst:.3e} over 5 points per moment (<= 1e-8); orth-3 at |v|=1 equals -sqrt(6)/3, quadrature error {orth3_quad:.3e}"
        ),
    )
}

fn trilinear_inequality() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(61);
    let c = check_trilinear(20, 100, &[0.0, -1.0, -2.0], &mut rng)?;
    outcome(c.passed, format!("{}: max lhs/rhs {:.4}, violation margin {:.4}", c.detail, c.value, c.margin))
}

fn energy_decay() -> Result<Outcome> {
    let truncation = 16;
    let (alpha, c1) = (-2.0, 0.05);
    let tensor = build_tensor(truncation)?;
    let cfg = IntegratorConfig { method: Method::EtdRk4, dt: 0.01, t_final: 2.0, c1, alpha };
    let mut worst_step = f64::NEG_INFINITY;
    let mut worst_bound = f64::NEG_INFINITY;
    for seed in 0..10 {
        let mut rng = ChaCha8Rng::seed_from_u64(700 + seed);
        let s2 = 0.3 * rng.gen_range(0.5..=1.0);
        let init = random_perp_state(&mut rng, truncation, s2, 0.5)?;
        let series = integrate_numeric(&init, &tensor, &cfg)?;
        let rows = diagnostics(&series, alpha, c1)?;
        let initial = rows[0].q_alpha_norm.powi(2);
        for pair in rows.windows(2) {
            worst_step = worst_step.max(pair[1].gs_norm.powi(2) - pair[0].gs_norm.powi(2));
        }
        for row in &rows {
            worst_bound = worst_bound.max(row.gs_norm.powi(2) - initial);
        }
    }
    outcome(
        worst_step <= 1e-10 && worst_bound <= 1e-10,
        format!("10 seeds, N=16: max per-step increase {worst_step:.3e} (<= 1e-10), max excess over initial {worst_bound:.3e}"),
    )
}

fn reduction_equivalence() -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    let mut runs = 0;
    for truncation in [4, 6, 8, 10] {
        for seed in 0..3 {
            let c = check_cascade_vs_numeric(truncation, 800 + seed, 0.3)?;
            worst = worst.max(c.value);
            runs += 1;
        }
    }
    outcome(worst <= 1e-6, format!("{runs} runs with N in {{4,6,8,10}}: max mode-wise difference {worst:.3e} (<= 1e-6)"))
}

fn example_datum() -> Result<Outcome> {
    let kmax = 400;
    let state = init_example_dirac(2 * kmax)?;
    // c_k² = c_{k-1}² (k + 1/2) / k with c_0 = 1.
    let mut sq = 1.0f64;
    let mut coef_err: f64 = 0.0;
    for k in 1..=kmax {
        sq *= (k as f64 + 0.5) / k as f64;
        if k >= 2 {
            let expected = sq.sqrt();
            coef_err = coef_err.max((dirac_coefficient(k) - expected).abs() / expected);
            coef_err = coef_err.max((state.get(ModeIndex { n: k, l: 0, m: 0 }).re - expected).abs() / expected);
        }
    }
    let s2 = s2_norm(&state);

    let spec = NormSpec::shubin(-1.6);
    let mut prev = weighted_norm(&project(&state, 398), &spec)?;
    let mut increment: f64 = 0.0;
    let mut sq_increment: f64 = 0.0;
    for k in 200..=kmax {
        let cur = weighted_norm(&project(&state, 2 * k), &spec)?;
        increment = increment.max(cur - prev);
        sq_increment = sq_increment.max(cur * cur - prev * prev);
        prev = cur;
    }
    let band = (10..=kmax).all(|k| (0.9..=1.3).contains(&(dirac_coefficient(k) / (k as f64).powf(0.25))));
    outcome(
        coef_err <= 1e-12 && s2 == 0.0 && increment < 1e-3 && band,
        format!(
            "coefficient error {coef_err:.3e}, s2_norm {s2}, max increment of ||S_2k g|| for k >= 200: {increment:.3e} (< 1e-3; squared-norm increment {sq_increment:.3e}), c_k/k^(1/4) in [0.9,1.3]: {band}"
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Result<Outcome>); 9] = [
        ("eigenvalue_table", eigenvalue_table),
        ("exact_decay", exact_decay),
        ("coefficient_identities", coefficient_identities),
        ("expansion_oracle", expansion_oracle),
        ("moment_integrals", moment_integrals),
        ("trilinear_inequality", trilinear_inequality),
        ("energy_decay", energy_decay),
        ("reduction_equivalence", reduction_equivalence),
        ("example_datum", example_datum),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (passed, detail) = match check() {
            Ok(o) => (o.passed, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        if !passed {
            failures += 1;
        }
        println!(
            "{} {} {name}: {detail} [{:.2} s]",
            if passed { "PASS" } else { "FAIL" },
            i + 1,
            start.elapsed().as_secs_f64()
        );
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failures} criteria failed");
        ExitCode::FAILURE
    }
}
