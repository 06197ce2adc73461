//! Independent numerical oracles for the eigenbasis and the Gaunt integrals.

use std::f64::consts::PI;

use landau_spectral::basis::{phi_eval, psi_hat, ModeIndex};
use landau_spectral::coupling::{gaunt, GauntKey};
use landau_spectral::specfun::gauss_hermite;
use landau_spectral::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Tensor Gauss–Hermite nodes for `∫ F(v) e^{-|v|²/2} dv` as `(v, weight)`.
fn hermite_grid(order: usize) -> Vec<([f64; 3], f64)> {
    let rule = gauss_hermite(order);
    let s = 2f64.sqrt();
    let mut out = Vec::with_capacity(order.pow(3));
    for (&x, &wx) in rule.nodes.iter().zip(&rule.weights) {
        for (&y, &wy) in rule.nodes.iter().zip(&rule.weights) {
            for (&z, &wz) in rule.nodes.iter().zip(&rule.weights) {
                out.push(([s * x, s * y, s * z], 2f64.powf(1.5) * wx * wy * wz));
            }
        }
    }
    out
}

#[test]
fn eigenbasis_is_orthonormal_through_shell_six() {
    let grid = hermite_grid(10);
    let modes: Vec<ModeIndex> = ModeIndex::all_up_to(6).collect();
    // φ e^{|v|²/4} is polynomial, so the Gram entries are exact at this order.
    let values: Vec<Vec<Complex64>> = modes
        .iter()
        .map(|&m| {
            grid.iter()
                .map(|(v, _)| phi_eval(m, *v) * (v.iter().map(|x| x * x).sum::<f64>() / 4.0).exp())
                .collect()
        })
        .collect();
    let mut worst: f64 = 0.0;
    for (i, a) in values.iter().enumerate() {
        for (j, b) in values.iter().enumerate().skip(i) {
            let gram: Complex64 = grid.iter().zip(a.iter().zip(b)).map(|((_, w), (x, y))| x * y.conj() * *w).sum();
            let expected = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((gram - expected).norm());
        }
    }
    assert!(worst < 1e-9, "max Gram deviation {worst:e}");
}

#[test]
fn fourier_transform_matches_direct_quadrature() {
    let order = 48;
    let rule = gauss_hermite(order);
    let s = 2f64.sqrt();
    let nodes: Vec<f64> = rule.nodes.iter().map(|x| s * x).collect();
    let weights: Vec<f64> = rule.weights.iter().map(|w| s * w).collect();
    let sqrt_mu0 = (2.0 * PI).powf(-0.75);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let xis: Vec<[f64; 3]> = (0..10)
        .map(|_| loop {
            let v: [f64; 3] = [rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)];
            if v.iter().map(|x| x * x).sum::<f64>() <= 9.0 {
                break v;
            }
        })
        .collect();
    let modes: Vec<ModeIndex> = ModeIndex::all_up_to(4).collect();
    let mut worst: f64 = 0.0;
    for &mode in &modes {
        // √μ φ e^{|v|²/2} sampled on the grid.
        let mut samples = Vec::with_capacity(order.pow(3));
        for &x in &nodes {
            for &y in &nodes {
                for &z in &nodes {
                    let v = [x, y, z];
                    let r2 = x * x + y * y + z * z;
                    samples.push(sqrt_mu0 * phi_eval(mode, v) * (r2 / 4.0).exp());
                }
            }
        }
        for xi in &xis {
            let phase = |k: usize| -> Vec<Complex64> {
                nodes.iter().zip(&weights).map(|(&x, &w)| Complex64::from_polar(w, -x * xi[k])).collect()
            };
            let (p1, p2, p3) = (phase(0), phase(1), phase(2));
            let mut sum = Complex64::default();
            let mut idx = 0;
            for a in &p1 {
                for b in &p2 {
                    let ab = a * b;
                    for c in &p3 {
                        sum += samples[idx] * ab * c;
                        idx += 1;
                    }
                }
            }
            let expected = psi_hat(mode, *xi);
            worst = worst.max((sum - expected).norm());
        }
    }
    assert!(worst < 1e-8, "max |ψ̂ - quadrature| = {worst:e}");
}

fn factorial(n: i32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// Wigner 3j symbol by the Racah formula.
fn wigner_3j(j1: i32, j2: i32, j3: i32, m1: i32, m2: i32, m3: i32) -> f64 {
    if m1 + m2 + m3 != 0 || j3 < (j1 - j2).abs() || j3 > j1 + j2 || m1.abs() > j1 || m2.abs() > j2 || m3.abs() > j3 {
        return 0.0;
    }
    let triangle = factorial(j1 + j2 - j3) * factorial(j1 - j2 + j3) * factorial(-j1 + j2 + j3) / factorial(j1 + j2 + j3 + 1);
    let pre = (triangle
        * factorial(j1 + m1)
        * factorial(j1 - m1)
        * factorial(j2 + m2)
        * factorial(j2 - m2)
        * factorial(j3 + m3)
        * factorial(j3 - m3))
    .sqrt();
    let kmin = 0.max(j2 - j3 - m1).max(j1 - j3 + m2);
    let kmax = (j1 + j2 - j3).min(j1 - m1).min(j2 + m2);
    let mut sum = 0.0;
    for k in kmin..=kmax {
        let denom = factorial(k)
            * factorial(j1 + j2 - j3 - k)
            * factorial(j1 - m1 - k)
            * factorial(j2 + m2 - k)
            * factorial(j3 - j2 + m1 + k)
            * factorial(j3 - j1 - m2 + k);
        sum += if k % 2 == 0 { 1.0 } else { -1.0 } / denom;
    }
    let sign = if (j1 - j2 - m3).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    sign * pre * sum
}

/// Phase between harmonics with and without the `(-1)^m` factor for `m > 0`.
fn phase(m: i32) -> f64 {
    if m > 0 && m % 2 == 1 {
        -1.0
    } else {
        1.0
    }
}

#[test]
fn gaunt_matches_wigner_3j() {
    let mut worst: f64 = 0.0;
    for l1 in 0..=4i32 {
        for l2 in 0..=6 {
            for l3 in 0..=8 {
                for m1 in -l1..=l1 {
                    for m2 in -l2..=l2 {
                        let m3 = -m1 - m2;
                        if m3.abs() > l3 {
                            continue;
                        }
                        let cs = (((2 * l1 + 1) * (2 * l2 + 1) * (2 * l3 + 1)) as f64 / (4.0 * PI)).sqrt()
                            * wigner_3j(l1, l2, l3, 0, 0, 0)
                            * wigner_3j(l1, l2, l3, m1, m2, m3);
                        let expected = phase(m1) * phase(m2) * phase(m3) * cs;
                        let got = gaunt(&GauntKey { l1, m1, l2, m2, l3, m3 });
                        worst = worst.max((got - expected).abs());
                    }
                }
            }
        }
    }
    assert!(worst < 1e-13, "max deviation {worst:e}");
}

#[test]
fn gaunt_known_values() {
    let g = gaunt(&GauntKey { l1: 2, m1: 0, l2: 2, m2: 0, l3: 4, m3: 0 });
    assert!((g - 3.0 / (7.0 * PI.sqrt())).abs() < 1e-15);
    let g = gaunt(&GauntKey { l1: 0, m1: 0, l2: 3, m2: 2, l3: 3, m3: -2 });
    assert!((g - 1.0 / (2.0 * PI.sqrt())).abs() < 1e-15);
}
