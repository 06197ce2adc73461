//! Linear and bilinear collision operators in coefficient space, plus
//! independent oracles for the expansion identities behind them.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::basis::{
    apply_h_power, inner_product, lambda_eig, phi_eval, project_tilde, psi_hat, weighted_norm, ModeIndex, NormSpec,
    SpectralState,
};
use crate::coupling::{a1, a2, a3, drift_source, CouplingTensor};
use crate::specfun::{gauss_laguerre, polar_coordinates, ylm_cos, SphereRule};
use crate::{Error, Result};

/// Constant `4√3/3 + √2` of the trilinear estimate.
pub const TRILINEAR_CONSTANT: f64 = 4.0 * 1.7320508075688772 / 3.0 + std::f64::consts::SQRT_2;

/// `𝓛 g`: multiplies each amplitude by `λ_{n,l}`.
pub fn apply_linear(state: &SpectralState) -> SpectralState {
    state.map_amplitudes(|mode, z| z * lambda_eig(mode.n, mode.l))
}

fn check_truncation(tensor: &CouplingTensor, found: u32) -> Result<()> {
    if found != tensor.truncation() {
        return Err(Error::DimensionMismatch { expected: tensor.truncation(), found });
    }
    Ok(())
}

/// `(𝐋(f, g), φ_{n,l,m})` for every mode with shell `<= N`.
pub fn apply_bilinear(f: &SpectralState, g: &SpectralState, tensor: &CouplingTensor) -> Result<SpectralState> {
    check_truncation(tensor, f.truncation())?;
    check_truncation(tensor, g.truncation())?;
    let plan = BilinearPlan::new(tensor);
    let layout = tensor.layout();
    let fd = f.to_dense(layout);
    let gd = g.to_dense(layout);
    let mut out = vec![Complex64::default(); layout.len()];
    plan.apply(&fd, &gd, &mut out);
    SpectralState::from_dense(layout, g.t, &out)
}

/// Flattened tensor for repeated dense application.
#[derive(Debug, Clone)]
pub struct BilinearPlan {
    row_start: Vec<usize>,
    source: Vec<u32>,
    driver: Vec<u32>,
    coef: Vec<f64>,
    /// Dense indices of the nine driver modes with shell `<= 2`.
    driver_slots: Vec<usize>,
}

impl BilinearPlan {
    pub fn new(tensor: &CouplingTensor) -> Self {
        let layout = tensor.layout();
        let mut row_start = vec![0];
        let (mut source, mut driver, mut coef) = (Vec::new(), Vec::new(), Vec::new());
        for target in layout.modes() {
            for e in tensor.entries(target) {
                source.push(layout.index(e.source).expect("source inside truncation") as u32);
                driver.push(layout.index(e.driver()).expect("driver inside truncation") as u32);
                coef.push(e.coef);
            }
            row_start.push(source.len());
        }
        let driver_slots = (0..=2).flat_map(|k| layout.shell_range(k)).collect();
        BilinearPlan { row_start, source, driver, coef, driver_slots }
    }

    pub fn len(&self) -> usize {
        self.row_start.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `out = 𝐋(f, g)` on dense vectors in layout order.
    pub fn apply(&self, f: &[Complex64], g: &[Complex64], out: &mut [Complex64]) {
        if self.driver_slots.iter().all(|&i| f[i] == Complex64::default()) {
            out.iter_mut().for_each(|z| *z = Complex64::default());
            return;
        }
        out.par_iter_mut().enumerate().with_min_len(256).for_each(|(row, slot)| {
            let mut acc = Complex64::default();
            for j in self.row_start[row]..self.row_start[row + 1] {
                acc += self.coef[j] * f[self.driver[j] as usize] * g[self.source[j] as usize];
            }
            *slot = acc;
        });
    }
}

/// Both sides of the trilinear estimate
/// `|(𝐋(S̃f, S̃g), H^α S̃h)| <= K ‖S̃_2 f‖ ‖H^{(α+1)/2} S̃_{N-2} g‖ ‖H^{(α+1)/2} S̃_N h‖`.
pub fn trilinear_sides(
    f: &SpectralState,
    g: &SpectralState,
    h: &SpectralState,
    tensor: &CouplingTensor,
    alpha: f64,
) -> Result<(f64, f64)> {
    let n = tensor.truncation();
    let ft = project_tilde(f, n);
    let gt = project_tilde(g, n);
    let ht = project_tilde(h, n);
    let image = apply_bilinear(&ft, &gt, tensor)?;
    let lhs = inner_product(&image, &apply_h_power(&ht, alpha)).norm();
    let s2 = project_tilde(f, 2).l2_norm();
    let gw = weighted_norm(&project_tilde(g, n.saturating_sub(2)), &NormSpec::shubin(alpha + 1.0))?;
    let hw = weighted_norm(&ht, &NormSpec::shubin(alpha + 1.0))?;
    Ok((lhs, TRILINEAR_CONSTANT * s2 * gw * hw))
}

/// Fourier-side check of the expansions of `𝐋(φ_driver, φ_target)` for the
/// drivers `(1,0,0)` and `(0,2,m2)`.
///
/// The left side is the Fourier multiplier of the driver applied to
/// `ψ̂_target`; the right side is the expansion in `ψ̂` of the shifted modes.
/// Returns the largest deviation over the samples, relative to the largest
/// magnitude among the terms at that sample.
pub fn fourier_multiplier_oracle(driver: ModeIndex, target: ModeIndex, xi_samples: &[[f64; 3]]) -> Result<f64> {
    let radial_driver = driver == ModeIndex { n: 1, l: 0, m: 0 };
    if !radial_driver && !(driver.n == 0 && driver.l == 2) {
        return Err(Error::Domain(format!("driver {driver} is neither (1,0,0) nor (0,2,m2)")));
    }
    let (n, l, m) = (target.n as i32, target.l as i32, target.m);
    let mut worst: f64 = 0.0;
    for &xi in xi_samples {
        let (r, cos_theta, phi) = polar_coordinates(xi);
        if r < 1e-8 {
            return Err(Error::DegenerateSample { norm: r });
        }
        let psi = |n: i32, l: i32, m: i32| -> Complex64 {
            if n < 0 || l < 0 || m.abs() > l {
                return Complex64::default();
            }
            psi_hat(ModeIndex { n: n as u32, l: l as u32, m }, xi)
        };
        let (lhs, terms): (Complex64, Vec<Complex64>) = if radial_driver {
            let mult = 2.0 * 6f64.sqrt() / 3.0 * r * r;
            (mult * psi(n, l, m), vec![drift_source(n, l) * psi(n + 1, l, m)])
        } else {
            let m2 = driver.m;
            let mult = 4.0 * (PI / 15.0).sqrt() * r * r * ylm_cos(2, m2, cos_theta, phi);
            let mm = m + m2;
            (
                mult * psi(n, l, m),
                vec![
                    a1(n, l, m, m2) * psi(n + 2, l - 2, mm),
                    a2(n, l, m, m2) * psi(n + 1, l, mm),
                    a3(n, l, m, m2) * psi(n, l + 2, mm),
                ],
            )
        };
        let rhs: Complex64 = terms.iter().sum();
        let scale = terms.iter().map(|z| z.norm()).fold(lhs.norm(), f64::max);
        if scale > 0.0 {
            worst = worst.max((lhs - rhs).norm() / scale);
        }
    }
    Ok(worst)
}

/// The three velocity moments of the collision invariants' neighbours.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MomentKind {
    /// `∫ (v·v*) Ψ_{0,1,m1}(v*) dv* = √(4π/3) |v| Y_1^{m1}(σ)`.
    Orth1 { m1: i32 },
    /// `∫ (v·v*)² Ψ_{0,2,m2}(v*) dv* = √(16π/15) |v|² Y_2^{m2}(σ)`.
    Orth2 { m2: i32 },
    /// `∫ (v·v*)² Ψ_{1,0,0}(v*) dv* = -(√6/3) |v|²`.
    Orth3,
}

impl MomentKind {
    fn mode_and_power(&self) -> (ModeIndex, i32) {
        match *self {
            MomentKind::Orth1 { m1 } => (ModeIndex { n: 0, l: 1, m: m1 }, 1),
            MomentKind::Orth2 { m2 } => (ModeIndex { n: 0, l: 2, m: m2 }, 2),
            MomentKind::Orth3 => (ModeIndex { n: 1, l: 0, m: 0 }, 2),
        }
    }

    /// Closed form at `v`.
    pub fn closed_form(&self, v: [f64; 3]) -> Complex64 {
        let (r, c, p) = polar_coordinates(v);
        match *self {
            MomentKind::Orth1 { m1 } => (4.0 * PI / 3.0).sqrt() * r * ylm_cos(1, m1, c, p),
            MomentKind::Orth2 { m2 } => (16.0 * PI / 15.0).sqrt() * r * r * ylm_cos(2, m2, c, p),
            MomentKind::Orth3 => Complex64::new(-(6f64.sqrt()) / 3.0 * r * r, 0.0),
        }
    }
}

/// Quadrature sizes for [`moment_integral_oracle`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MomentOrders {
    /// Gauss–Laguerre nodes in `x = |v*|²/2`.
    pub radial: usize,
    /// Gauss–Legendre nodes in `cos θ`.
    pub polar: usize,
    /// Trapezoid points in `φ`.
    pub azimuthal: usize,
}

impl MomentOrders {
    /// Smallest sizes integrating every moment integrand exactly.
    pub const MINIMUM: MomentOrders = MomentOrders { radial: 2, polar: 3, azimuthal: 5 };
}

impl Default for MomentOrders {
    fn default() -> Self {
        MomentOrders { radial: 4, polar: 6, azimuthal: 9 }
    }
}

/// Computes a moment integral by radial Gauss–Laguerre times a sphere
/// product rule and returns the largest error against the closed form over
/// the samples, relative to `max(|closed form|, |v|^p)`.
pub fn moment_integral_oracle(which: MomentKind, v_samples: &[[f64; 3]], orders: MomentOrders) -> Result<f64> {
    let min = MomentOrders::MINIMUM;
    if orders.radial < min.radial || orders.polar < min.polar || orders.azimuthal < min.azimuthal {
        return Err(Error::QuadratureOrder(format!(
            "orders {orders:?} cannot integrate the moment exactly; need at least {min:?}"
        )));
    }
    let (mode, power) = which.mode_and_power();
    if mode.m.unsigned_abs() > mode.l {
        return Err(Error::Index(format!("invalid moment mode {mode}")));
    }
    // Ψ(v*) = √μ φ(v*) behaves like e^{-x} · polynomial with x = |v*|²/2;
    // r² dr = √2 x^{1/2} dx.
    let radial = gauss_laguerre(orders.radial, 0.5)?;
    let sphere = SphereRule::new(orders.polar, orders.azimuthal);
    let sqrt_mu0 = (2.0 * PI).powf(-0.75);
    let mut nodes = Vec::with_capacity(radial.order * sphere.points.len());
    for (&x, &wx) in radial.nodes.iter().zip(&radial.weights) {
        let r = (2.0 * x).sqrt();
        for &(c, p, ws) in &sphere.points {
            let d = SphereRule::direction(c, p);
            let vs = [r * d[0], r * d[1], r * d[2]];
            let psi = sqrt_mu0 * (-r * r / 4.0 + x).exp() * phi_eval(mode, vs);
            nodes.push((vs, 2f64.sqrt() * wx * ws, psi));
        }
    }
    let mut worst: f64 = 0.0;
    for &v in v_samples {
        let norm = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if norm == 0.0 {
            return Err(Error::DegenerateSample { norm });
        }
        let value: Complex64 = nodes
            .iter()
            .map(|(vs, w, psi)| {
                let dot = v[0] * vs[0] + v[1] * vs[1] + v[2] * vs[2];
                w * dot.powi(power) * psi
            })
            .sum();
        let want = which.closed_form(v);
        let scale = want.norm().max(norm.powi(power));
        worst = worst.max((value - want).norm() / scale);
    }
    Ok(worst)
}
