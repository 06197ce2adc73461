//! Special functions and quadrature rules underlying the eigenbasis.
//!
//! Conventions: the associated Legendre functions carry no Condon–Shortley
//! phase, and spherical harmonics use the first coordinate axis as polar
//! axis, `σ = (cos θ, sin θ cos φ, sin θ sin φ)`. With these choices
//! `conj(Y_l^m) = Y_l^{-m}` holds literally.

use std::f64::consts::PI;
use std::sync::OnceLock;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::{Error, Result};

/// Gauss-type quadrature rule. Nodes are strictly increasing.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub order: usize,
}

impl QuadratureRule {
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// `ln Γ(x)` for `x > 0`.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("ln_gamma requires x > 0, got {x}")));
    }
    Ok(statrs::function::gamma::ln_gamma(x))
}

/// Generalized Laguerre polynomial `L_n^{(α)}(x)` by the three-term
/// recurrence `(k+1) L_{k+1} = (2k+α+1-x) L_k - (k+α) L_{k-1}`.
pub fn laguerre(n: usize, alpha: f64, x: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut cur = 1.0 + alpha - x;
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + alpha + 1.0 - x) * cur - (kf + alpha) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Legendre polynomial `P_l(x)`.
pub fn legendre(l: usize, x: f64) -> f64 {
    if l == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut cur = x;
    for k in 1..l {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0) * x * cur - kf * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Associated Legendre function `P_l^m(x)` for `0 <= m <= l`, without the
/// Condon–Shortley phase: `P_m^m(x) = (2m-1)!! (1-x²)^{m/2} >= 0`.
pub fn assoc_legendre(l: usize, m: usize, x: f64) -> Result<f64> {
    if m > l {
        return Err(Error::Index(format!("assoc_legendre requires m <= l, got l={l}, m={m}")));
    }
    if x.abs() > 1.0 + 1e-14 {
        return Err(Error::Domain(format!("assoc_legendre requires |x| <= 1, got {x}")));
    }
    Ok(assoc_legendre_unchecked(l, m, x.clamp(-1.0, 1.0)))
}

pub(crate) fn assoc_legendre_unchecked(l: usize, m: usize, x: f64) -> f64 {
    let s = ((1.0 - x) * (1.0 + x)).max(0.0).sqrt();
    let mut pmm = 1.0;
    for k in 0..m {
        pmm *= (2 * k + 1) as f64 * s;
    }
    if l == m {
        return pmm;
    }
    let mut prev = pmm;
    let mut cur = x * (2 * m + 1) as f64 * pmm;
    for ll in (m + 2)..=l {
        let next = (x * (2 * ll - 1) as f64 * cur - (ll + m - 1) as f64 * prev) / (ll - m) as f64;
        prev = cur;
        cur = next;
    }
    cur
}

/// Orthonormalisation factor `N_{l,m} = sqrt((2l+1)(l-|m|)! / (4π (l+|m|)!))`.
pub fn ylm_norm(l: usize, m: usize) -> f64 {
    // (l-m)!/(l+m)! as a product of 2m factors
    let mut ratio = 1.0;
    for k in (l - m + 1)..=(l + m) {
        ratio /= k as f64;
    }
    ((2 * l + 1) as f64 * ratio / (4.0 * PI)).sqrt()
}

/// Complex spherical harmonic `Y_l^m(θ, φ) = N_{l,m} P_l^{|m|}(cos θ) e^{imφ}`.
pub fn ylm(l: usize, m: i32, theta: f64, phi: f64) -> Result<Complex64> {
    let am = m.unsigned_abs() as usize;
    if am > l {
        return Err(Error::Index(format!("ylm requires |m| <= l, got l={l}, m={m}")));
    }
    Ok(ylm_cos(l, m, theta.cos(), phi))
}

/// Same as [`ylm`] but takes `cos θ` directly; indices must be valid.
pub(crate) fn ylm_cos(l: usize, m: i32, cos_theta: f64, phi: f64) -> Complex64 {
    let am = m.unsigned_abs() as usize;
    let radial = ylm_norm(l, am) * assoc_legendre_unchecked(l, am, cos_theta.clamp(-1.0, 1.0));
    Complex64::from_polar(radial, m as f64 * phi)
}

/// Spherical coordinates of `v` with the first axis as polar axis:
/// returns `(|v|, cos θ, φ)`. At the origin the direction is taken along the
/// polar axis.
pub fn polar_coordinates(v: [f64; 3]) -> (f64, f64, f64) {
    let r = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    if r == 0.0 {
        return (0.0, 1.0, 0.0);
    }
    let cos_theta = (v[0] / r).clamp(-1.0, 1.0);
    let phi = v[2].atan2(v[1]);
    (r, cos_theta, phi)
}

/// Gauss–Legendre rule on `[-1, 1]` with `order` nodes, Newton-iterated from
/// Chebyshev-like initial guesses.
///
/// Panics if `order == 0`.
pub fn gauss_legendre(order: usize) -> QuadratureRule {
    assert!(order >= 1, "gauss_legendre requires order >= 1");
    let n = order;
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let half = n.div_ceil(2);
    for i in 0..half {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d.is_finite() {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    QuadratureRule { nodes, weights, order }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut prev = 1.0;
    let mut cur = x;
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0) * x * cur - kf * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    let d = n as f64 * (x * cur - prev) / (x * x - 1.0);
    (cur, d)
}

const CACHED_LEGENDRE_ORDERS: usize = 160;

/// Shared Gauss–Legendre rules for orders `1..160`, built on first use.
pub fn cached_gauss_legendre(order: usize) -> &'static QuadratureRule {
    static RULES: OnceLock<Vec<QuadratureRule>> = OnceLock::new();
    let rules = RULES.get_or_init(|| (1..=CACHED_LEGENDRE_ORDERS).map(gauss_legendre).collect());
    assert!(
        (1..=CACHED_LEGENDRE_ORDERS).contains(&order),
        "cached Gauss-Legendre rules cover orders 1..={CACHED_LEGENDRE_ORDERS}"
    );
    &rules[order - 1]
}

/// Gauss rule from the three-term recurrence of the orthonormal polynomials
/// `x p_k = b_{k+1} p_{k+1} + a_k p_k + b_k p_{k-1}` (Golub–Welsch), with
/// Newton-polished nodes and Christoffel weights `1 / Σ_k p_k(x)²`.
fn gauss_from_recurrence(order: usize, a: impl Fn(usize) -> f64, b: impl Fn(usize) -> f64, mu0: f64) -> QuadratureRule {
    assert!(order >= 1, "quadrature order must be >= 1");
    let n = order;
    let mut jacobi = DMatrix::<f64>::zeros(n, n);
    for k in 0..n {
        jacobi[(k, k)] = a(k);
        if k + 1 < n {
            let off = b(k + 1);
            jacobi[(k, k + 1)] = off;
            jacobi[(k + 1, k)] = off;
        }
    }
    let mut nodes: Vec<f64> = SymmetricEigen::new(jacobi).eigenvalues.iter().copied().collect();
    nodes.sort_by(|x, y| x.partial_cmp(y).unwrap());

    let p0 = 1.0 / mu0.sqrt();
    // values of p_0..p_n and derivative of p_n
    let eval = |x: f64| -> (f64, f64, f64) {
        let mut p_prev = 0.0;
        let mut p = p0;
        let mut d_prev = 0.0;
        let mut d = 0.0;
        let mut sum_sq = p * p;
        for k in 0..n {
            let bk1 = b(k + 1);
            let bk = if k == 0 { 0.0 } else { b(k) };
            let p_next = ((x - a(k)) * p - bk * p_prev) / bk1;
            let d_next = (p + (x - a(k)) * d - bk * d_prev) / bk1;
            p_prev = p;
            p = p_next;
            d_prev = d;
            d = d_next;
            if k + 1 < n {
                sum_sq += p * p;
            }
        }
        (p, d, sum_sq)
    };
    let mut weights = Vec::with_capacity(n);
    for x in nodes.iter_mut() {
        for _ in 0..3 {
            let (p, d, _) = eval(*x);
            if d == 0.0 || !d.is_finite() {
                break;
            }
            let step = p / d;
            if !step.is_finite() || step.abs() > 1e-6 * (1.0 + x.abs()) {
                break;
            }
            *x -= step;
        }
        let (_, _, sum_sq) = eval(*x);
        weights.push(1.0 / sum_sq);
    }
    QuadratureRule { nodes, weights, order }
}

/// Generalized Gauss–Laguerre rule for the weight `x^α e^{-x}` on `[0, ∞)`.
pub fn gauss_laguerre(order: usize, alpha: f64) -> Result<QuadratureRule> {
    if !(alpha > -1.0) {
        return Err(Error::Domain(format!("gauss_laguerre requires alpha > -1, got {alpha}")));
    }
    let mu0 = ln_gamma(alpha + 1.0)?.exp();
    Ok(gauss_from_recurrence(
        order,
        |k| 2.0 * k as f64 + alpha + 1.0,
        |k| (k as f64 * (k as f64 + alpha)).sqrt(),
        mu0,
    ))
}

/// Gauss–Hermite rule for the weight `e^{-x²}` on the real line.
pub fn gauss_hermite(order: usize) -> QuadratureRule {
    let mut rule = gauss_from_recurrence(order, |_| 0.0, |k| (k as f64 / 2.0).sqrt(), PI.sqrt());
    // enforce the reflection symmetry of the weight exactly
    let n = rule.order;
    for i in 0..n / 2 {
        let j = n - 1 - i;
        let x = 0.5 * (rule.nodes[j] - rule.nodes[i]);
        let w = 0.5 * (rule.weights[i] + rule.weights[j]);
        rule.nodes[i] = -x;
        rule.nodes[j] = x;
        rule.weights[i] = w;
        rule.weights[j] = w;
    }
    if n % 2 == 1 {
        rule.nodes[n / 2] = 0.0;
    }
    rule
}

/// Product rule on the unit sphere: Gauss–Legendre in `cos θ` times the
/// trapezoid rule in `φ`. Exact for spherical polynomials whose
/// `cos θ`-degree is below `2·polar_order` and whose azimuthal frequencies are
/// below `azimuthal_points`.
#[derive(Debug, Clone)]
pub struct SphereRule {
    /// `(cos θ, φ, weight)` triples.
    pub points: Vec<(f64, f64, f64)>,
}

impl SphereRule {
    pub fn new(polar_order: usize, azimuthal_points: usize) -> Self {
        let gl = gauss_legendre(polar_order);
        let dphi = 2.0 * PI / azimuthal_points as f64;
        let mut points = Vec::with_capacity(polar_order * azimuthal_points);
        for (&x, &w) in gl.nodes.iter().zip(&gl.weights) {
            for j in 0..azimuthal_points {
                points.push((x, j as f64 * dphi, w * dphi));
            }
        }
        SphereRule { points }
    }

    /// Unit vector for a `(cos θ, φ)` pair, polar axis first.
    pub fn direction(cos_theta: f64, phi: f64) -> [f64; 3] {
        let s = ((1.0 - cos_theta) * (1.0 + cos_theta)).max(0.0).sqrt();
        [cos_theta, s * phi.cos(), s * phi.sin()]
    }
}
