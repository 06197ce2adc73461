//! Fixed-step integrators for the full quadratic system
//! `g' + λ g = 𝐋(g, g)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::cascade::solve_cascade;
use crate::basis::{lambda_eig, ModeIndex, SpectralState};
use crate::coupling::CouplingTensor;
use crate::operator::BilinearPlan;
use crate::{Error, Result};

/// Largest `dt · max λ` accepted by classical RK4 (its real-axis stability
/// limit).
pub const RK4_STABILITY_BOUND: f64 = 2.785;

/// Upper limit for the Gelfand–Shilov rate `c1`.
pub const C1_LIMIT: f64 = 16.0 / 11.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Cascade,
    #[default]
    EtdRk4,
    Rk4,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegratorConfig {
    pub method: Method,
    pub dt: f64,
    pub t_final: f64,
    pub c1: f64,
    pub alpha: f64,
}

impl IntegratorConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::Config(format!("dt must be positive, got {}", self.dt)));
        }
        if !(self.t_final > 0.0 && self.t_final.is_finite()) {
            return Err(Error::Config(format!("t_final must be positive, got {}", self.t_final)));
        }
        if self.dt > self.t_final {
            return Err(Error::Config(format!("dt = {} exceeds t_final = {}", self.dt, self.t_final)));
        }
        if !(0.0..C1_LIMIT).contains(&self.c1) {
            return Err(Error::Config(format!("c1 must lie in [0, 16/11), got {}", self.c1)));
        }
        if !(self.alpha <= 0.0) {
            return Err(Error::Config(format!("alpha must be <= 0, got {}", self.alpha)));
        }
        Ok(())
    }

    /// Output times `0, dt, 2dt, ...`, with the last step shortened to land
    /// on `t_final`.
    pub fn time_grid(&self) -> Vec<f64> {
        let ratio = self.t_final / self.dt;
        let steps = if (ratio - ratio.round()).abs() < 1e-9 * ratio.max(1.0) { ratio.round() } else { ratio.ceil() } as usize;
        (0..=steps).map(|j| if j == steps { self.t_final } else { j as f64 * self.dt }).collect()
    }
}

/// Integrates from `init` and returns the state at every grid time,
/// including `t = 0`.
///
/// `etd-rk4` treats `-λ g` exactly (Cox–Matthews exponential RK4), `rk4` is
/// the classical scheme and is rejected when `dt · max λ` exceeds
/// [`RK4_STABILITY_BOUND`]. `cascade` evaluates the closed-form solution on
/// the same grid.
pub fn integrate_numeric(init: &SpectralState, tensor: &CouplingTensor, cfg: &IntegratorConfig) -> Result<Vec<(f64, SpectralState)>> {
    cfg.validate()?;
    if init.truncation() != tensor.truncation() {
        return Err(Error::DimensionMismatch { expected: tensor.truncation(), found: init.truncation() });
    }
    let grid = cfg.time_grid();
    if cfg.method == Method::Cascade {
        return Ok(solve_cascade(init, tensor)?.sample(&grid));
    }
    let layout = tensor.layout();
    let modes: Vec<ModeIndex> = layout.modes().collect();
    let lambdas: Vec<f64> = modes.iter().map(|m| lambda_eig(m.n, m.l)).collect();
    let max_lambda = lambdas.iter().copied().fold(0.0, f64::max);
    if cfg.method == Method::Rk4 && cfg.dt * max_lambda > RK4_STABILITY_BOUND {
        return Err(Error::StepSize { dt: cfg.dt, max_lambda, bound: RK4_STABILITY_BOUND });
    }
    let plan = BilinearPlan::new(tensor);
    let mut u = init.to_dense(layout);
    let mut out = Vec::with_capacity(grid.len());
    out.push((0.0, SpectralState::from_dense(layout, 0.0, &u)?));
    let mut stepper: Box<dyn Stepper> = match cfg.method {
        Method::EtdRk4 => Box::new(EtdRk4::new(lambdas.clone(), cfg.dt)),
        _ => Box::new(Rk4 { lambdas: lambdas.clone() }),
    };
    for w in grid.windows(2) {
        let h = w[1] - w[0];
        stepper.step(&plan, &mut u, h);
        if let Some(i) = u.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::NonFinite { mode: modes[i], t: w[1] });
        }
        out.push((w[1], SpectralState::from_dense(layout, w[1], &u)?));
    }
    Ok(out)
}

trait Stepper {
    fn step(&mut self, plan: &BilinearPlan, u: &mut [Complex64], h: f64);
}

fn nonlinear(plan: &BilinearPlan, u: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::default(); u.len()];
    plan.apply(u, u, &mut out);
    out
}

struct Rk4 {
    lambdas: Vec<f64>,
}

impl Rk4 {
    fn rhs(&self, plan: &BilinearPlan, u: &[Complex64]) -> Vec<Complex64> {
        let mut n = nonlinear(plan, u);
        for ((z, &l), &x) in n.iter_mut().zip(&self.lambdas).zip(u) {
            *z -= l * x;
        }
        n
    }
}

impl Stepper for Rk4 {
    fn step(&mut self, plan: &BilinearPlan, u: &mut [Complex64], h: f64) {
        let axpy = |a: &[Complex64], k: &[Complex64], s: f64| -> Vec<Complex64> { a.iter().zip(k).map(|(x, y)| x + y * s).collect() };
        let k1 = self.rhs(plan, u);
        let k2 = self.rhs(plan, &axpy(u, &k1, h / 2.0));
        let k3 = self.rhs(plan, &axpy(u, &k2, h / 2.0));
        let k4 = self.rhs(plan, &axpy(u, &k3, h));
        for i in 0..u.len() {
            u[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    }
}

/// `φ_1, φ_2, φ_3` at `z`.
fn phi_functions(z: f64) -> (f64, f64, f64) {
    if z.abs() < 1.0 {
        // φ_k(z) = Σ_j z^j / (j+k)!
        let (mut p1, mut p2, mut p3) = (0.0, 0.0, 0.0);
        let mut zj = 1.0;
        let mut fact = 1.0; // (j+1)!
        for j in 0..30 {
            fact *= (j + 1) as f64;
            let f2 = fact * (j + 2) as f64;
            let f3 = f2 * (j + 3) as f64;
            p1 += zj / fact;
            p2 += zj / f2;
            p3 += zj / f3;
            zj *= z;
        }
        (p1, p2, p3)
    } else {
        let e = z.exp();
        let p1 = (e - 1.0) / z;
        let p2 = (e - 1.0 - z) / (z * z);
        let p3 = (e - 1.0 - z - z * z / 2.0) / (z * z * z);
        (p1, p2, p3)
    }
}

/// Per-mode coefficients of the Cox–Matthews scheme for one step size.
struct EtdCoefficients {
    h: f64,
    e: Vec<f64>,
    e2: Vec<f64>,
    q: Vec<f64>,
    f1: Vec<f64>,
    f2: Vec<f64>,
    f3: Vec<f64>,
}

impl EtdCoefficients {
    fn new(lambdas: &[f64], h: f64) -> Self {
        let mut c = EtdCoefficients { h, e: vec![], e2: vec![], q: vec![], f1: vec![], f2: vec![], f3: vec![] };
        for &l in lambdas {
            let z = -l * h;
            let (p1, p2, p3) = phi_functions(z);
            let (half1, _, _) = phi_functions(z / 2.0);
            c.e.push(z.exp());
            c.e2.push((z / 2.0).exp());
            c.q.push(h / 2.0 * half1);
            c.f1.push(h * (p1 - 3.0 * p2 + 4.0 * p3));
            c.f2.push(h * (p2 - 2.0 * p3));
            c.f3.push(h * (-p2 + 4.0 * p3));
        }
        c
    }
}

struct EtdRk4 {
    lambdas: Vec<f64>,
    full: EtdCoefficients,
    last: Option<EtdCoefficients>,
}

impl EtdRk4 {
    fn new(lambdas: Vec<f64>, h: f64) -> Self {
        let full = EtdCoefficients::new(&lambdas, h);
        EtdRk4 { lambdas, full, last: None }
    }
}

impl Stepper for EtdRk4 {
    fn step(&mut self, plan: &BilinearPlan, u: &mut [Complex64], h: f64) {
        let c = if (h - self.full.h).abs() <= 1e-12 * self.full.h {
            &self.full
        } else {
            if self.last.as_ref().is_none_or(|c| c.h != h) {
                self.last = Some(EtdCoefficients::new(&self.lambdas, h));
            }
            self.last.as_ref().unwrap()
        };
        let nu = nonlinear(plan, u);
        let a: Vec<Complex64> = (0..u.len()).map(|i| c.e2[i] * u[i] + c.q[i] * nu[i]).collect();
        let na = nonlinear(plan, &a);
        let b: Vec<Complex64> = (0..u.len()).map(|i| c.e2[i] * u[i] + c.q[i] * na[i]).collect();
        let nb = nonlinear(plan, &b);
        let cc: Vec<Complex64> = (0..u.len()).map(|i| c.e2[i] * a[i] + c.q[i] * (2.0 * nb[i] - nu[i])).collect();
        let nc = nonlinear(plan, &cc);
        for i in 0..u.len() {
            u[i] = c.e[i] * u[i] + c.f1[i] * nu[i] + 2.0 * c.f2[i] * (na[i] + nb[i]) + c.f3[i] * nc[i];
        }
    }
}
