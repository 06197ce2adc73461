//! Exact solution of the shell cascade as sums of polynomial-times-exponential
//! terms.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::basis::{lambda_eig, ModeIndex, SpectralState};
use crate::coupling::{Channel, CouplingTensor};
use crate::{Error, Result};

/// Rates closer than this are merged and treated as resonant.
pub const RATE_MERGE_TOL: f64 = 1e-9;

/// Null-space amplitudes above this reject an initial datum.
pub const NULL_SPACE_TOL: f64 = 1e-12;

/// `poly(t) e^{-rate t}` with `poly` in ascending coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpTerm {
    pub rate: f64,
    pub poly: Vec<Complex64>,
}

impl ExpTerm {
    pub fn eval(&self, t: f64) -> Complex64 {
        let p = self.poly.iter().rev().fold(Complex64::default(), |acc, &c| acc * t + c);
        p * (-self.rate * t).exp()
    }
}

fn poly_add(a: &mut Vec<Complex64>, b: &[Complex64]) {
    if a.len() < b.len() {
        a.resize(b.len(), Complex64::default());
    }
    for (x, y) in a.iter_mut().zip(b) {
        *x += y;
    }
}

fn poly_derivative(p: &[Complex64]) -> Vec<Complex64> {
    p.iter().enumerate().skip(1).map(|(k, &c)| c * k as f64).collect()
}

fn poly_integral(p: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::default()];
    out.extend(p.iter().enumerate().map(|(k, &c)| c / (k + 1) as f64));
    out
}

/// Trajectory of one mode: a sum of [`ExpTerm`]s with pairwise distinct rates.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ModeTrajectory {
    pub terms: Vec<ExpTerm>,
}

impl ModeTrajectory {
    pub fn constant_decay(rate: f64, amplitude: Complex64) -> Self {
        let mut out = ModeTrajectory::default();
        out.add(ExpTerm { rate, poly: vec![amplitude] });
        out
    }

    pub fn eval(&self, t: f64) -> Complex64 {
        self.terms.iter().map(|term| term.eval(t)).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(|t| t.poly.iter().all(|c| *c == Complex64::default()))
    }

    /// Adds a term, merging it into an existing one with a nearby rate.
    pub fn add(&mut self, term: ExpTerm) {
        if let Some(existing) = self.terms.iter_mut().find(|t| (t.rate - term.rate).abs() < RATE_MERGE_TOL) {
            poly_add(&mut existing.poly, &term.poly);
        } else {
            self.terms.push(term);
        }
    }

    /// Adds `scale · e^{-shift t} · other`.
    pub fn add_scaled_shifted(&mut self, other: &ModeTrajectory, scale: Complex64, shift: f64) {
        for term in &other.terms {
            let poly = term.poly.iter().map(|&c| c * scale).collect();
            self.add(ExpTerm { rate: term.rate + shift, poly });
        }
    }
}

/// Solves `g' + λ g = forcing(t)`, `g(0) = g0` by variation of constants.
///
/// A forcing term `q(t) e^{-bt}` with `λ ≠ b` contributes `r(t) e^{-bt}`,
/// `r = Σ_k (-1)^k q^{(k)} / (λ-b)^{k+1}`; when `b` is within
/// [`RATE_MERGE_TOL`] of `λ` it contributes `(∫_0^t q) e^{-bt}` instead.
pub fn solve_linear_mode(lambda: f64, g0: Complex64, forcing: &ModeTrajectory) -> ModeTrajectory {
    let mut out = ModeTrajectory::default();
    let mut at_zero = Complex64::default();
    for term in &forcing.terms {
        let d = lambda - term.rate;
        let poly = if d.abs() < RATE_MERGE_TOL {
            poly_integral(&term.poly)
        } else {
            let mut r = vec![Complex64::default(); term.poly.len()];
            let mut deriv = term.poly.clone();
            let mut factor = 1.0 / d;
            while !deriv.is_empty() {
                for (x, y) in r.iter_mut().zip(&deriv) {
                    *x += y * factor;
                }
                deriv = poly_derivative(&deriv);
                factor *= -1.0 / d;
            }
            r
        };
        at_zero += poly.first().copied().unwrap_or_default();
        out.add(ExpTerm { rate: term.rate, poly });
    }
    out.add(ExpTerm { rate: lambda, poly: vec![g0 - at_zero] });
    out
}

/// Closed-form trajectory of every mode with shell `<= N`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpPolyTrajectory {
    truncation: u32,
    modes: BTreeMap<ModeIndex, ModeTrajectory>,
}

impl ExpPolyTrajectory {
    pub fn truncation(&self) -> u32 {
        self.truncation
    }

    /// Trajectory of `mode`; `None` means identically zero.
    pub fn mode(&self, mode: ModeIndex) -> Option<&ModeTrajectory> {
        self.modes.get(&mode)
    }

    pub fn eval(&self, mode: ModeIndex, t: f64) -> Complex64 {
        self.modes.get(&mode).map_or_else(Complex64::default, |m| m.eval(t))
    }

    pub fn state_at(&self, t: f64) -> SpectralState {
        let mut state = SpectralState::new(self.truncation).expect("truncation validated").with_time(t);
        for (&mode, traj) in &self.modes {
            state.set(mode, traj.eval(t)).expect("mode inside truncation");
        }
        state
    }

    pub fn sample(&self, times: &[f64]) -> Vec<(f64, SpectralState)> {
        times.iter().map(|&t| (t, self.state_at(t))).collect()
    }

    pub fn modes(&self) -> impl Iterator<Item = (ModeIndex, &ModeTrajectory)> {
        self.modes.iter().map(|(&m, t)| (m, t))
    }
}

/// Rejects data with a null-space amplitude above [`NULL_SPACE_TOL`].
pub fn require_null_complement(init: &SpectralState) -> Result<()> {
    for mode in ModeIndex::null_space() {
        let amplitude = init.get(mode).norm();
        if amplitude > NULL_SPACE_TOL {
            return Err(Error::NotInNullComplement { mode, amplitude });
        }
    }
    Ok(())
}

/// Exact cascade solution for initial data orthogonal to the collision
/// invariants.
///
/// Shell-2 modes `(0,2,m)` decay as `e^{-12t}`; every mode of shell `k > 2`
/// is driven by those five modes times the shell `k-2` trajectories. Shells
/// are solved in increasing order, modes within a shell in parallel.
pub fn solve_cascade(init: &SpectralState, tensor: &CouplingTensor) -> Result<ExpPolyTrajectory> {
    if init.truncation() != tensor.truncation() {
        return Err(Error::DimensionMismatch { expected: tensor.truncation(), found: init.truncation() });
    }
    require_null_complement(init)?;
    let n = tensor.truncation();
    let mut modes: BTreeMap<ModeIndex, ModeTrajectory> = BTreeMap::new();
    let mut drivers = [Complex64::default(); 5];
    for m2 in -2..=2 {
        let mode = ModeIndex { n: 0, l: 2, m: m2 };
        let g0 = init.get(mode);
        drivers[(m2 + 2) as usize] = g0;
        if g0 != Complex64::default() {
            modes.insert(mode, ModeTrajectory::constant_decay(12.0, g0));
        }
    }
    let shell2_rate = lambda_eig(0, 2);
    for k in 3..=n {
        let solved: Vec<(ModeIndex, ModeTrajectory)> = ModeIndex::shell_modes(k)
            .collect::<Vec<_>>()
            .into_par_iter()
            .filter_map(|target| {
                let mut forcing = ModeTrajectory::default();
                for e in tensor.entries(target) {
                    if !matches!(e.channel, Channel::A1 | Channel::A2 | Channel::A3) {
                        continue;
                    }
                    let driver = drivers[(e.m_driver + 2) as usize];
                    if driver == Complex64::default() {
                        continue;
                    }
                    if let Some(src) = modes.get(&e.source) {
                        forcing.add_scaled_shifted(src, e.coef * driver, shell2_rate);
                    }
                }
                let g0 = init.get(target);
                if forcing.terms.is_empty() && g0 == Complex64::default() {
                    return None;
                }
                Some((target, solve_linear_mode(lambda_eig(target.n, target.l), g0, &forcing)))
            })
            .collect();
        modes.extend(solved);
    }
    Ok(ExpPolyTrajectory { truncation: n, modes })
}
