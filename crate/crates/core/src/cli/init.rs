use std::f64::consts::{LN_2, PI};
use std::fs::File;
use std::io::BufReader;
use std::path::Path;

use num_complex::Complex64;
use rand::Rng;

use crate::basis::{nullspace_residual, read_state_csv, ModeIndex, SpectralState};
use crate::solver::NULL_SPACE_TOL;
use crate::specfun::ln_gamma;
use crate::Result;

/// `√(2Γ(k+3/2) / (√π k!))`, the `(k,0,0)` coefficient of the Dirac example.
pub fn dirac_coefficient(k: u32) -> f64 {
    let k = k as f64;
    let lg = |x: f64| ln_gamma(x).expect("positive argument");
    (0.5 * (LN_2 + lg(k + 1.5) - 0.5 * PI.ln() - lg(k + 1.0))).exp()
}

/// Radial datum with `g_{k,0,0} = dirac_coefficient(k)` for `2 <= k <= N/2`.
pub fn init_example_dirac(truncation: u32) -> Result<SpectralState> {
    let mut state = SpectralState::new(truncation)?;
    for k in 2..=truncation / 2 {
        state.set(ModeIndex { n: k, l: 0, m: 0 }, Complex64::new(dirac_coefficient(k), 0.0))?;
    }
    Ok(state)
}

pub fn init_single_mode(mode: ModeIndex, amplitude: Complex64, truncation: u32) -> Result<SpectralState> {
    let mut state = SpectralState::new(truncation)?;
    state.set(ModeIndex::new(mode.n, mode.l, mode.m)?, amplitude)?;
    Ok(state)
}

/// A state read from disk together with its null-space status.
#[derive(Debug, Clone)]
pub struct LoadedState {
    pub state: SpectralState,
    pub in_null_complement: bool,
}

pub fn init_from_file(path: &Path, truncation: u32) -> Result<LoadedState> {
    let state = read_state_csv(BufReader::new(File::open(path)?), truncation)?;
    let in_null_complement = nullspace_residual(&state) <= NULL_SPACE_TOL;
    Ok(LoadedState { state, in_null_complement })
}

/// Real-valued random datum orthogonal to the collision invariants.
///
/// Shell-2 amplitudes are rescaled so that `‖S̃_2 g‖ = s2_norm`; shell `k >= 3`
/// amplitudes are uniform in `[-1, 1]` scaled by `tail_decay^{k-2}`.
pub fn random_perp_state<R: Rng>(rng: &mut R, truncation: u32, s2_norm: f64, tail_decay: f64) -> Result<SpectralState> {
    let mut state = SpectralState::new(truncation)?;
    let draw = |rng: &mut R, mode: ModeIndex, scale: f64| -> Complex64 {
        let re = rng.gen_range(-1.0..1.0) * scale;
        let im = if mode.m == 0 { 0.0 } else { rng.gen_range(-1.0..1.0) * scale };
        Complex64::new(re, im)
    };
    let mut shell2 = Vec::new();
    for m in 0..=2 {
        shell2.push((m, draw(rng, ModeIndex { n: 0, l: 2, m }, 1.0)));
    }
    let norm: f64 = shell2.iter().map(|(m, z)| if *m == 0 { 1.0 } else { 2.0 } * z.norm_sqr()).sum::<f64>().sqrt();
    let scale = if norm > 0.0 { s2_norm / norm } else { 0.0 };
    for (m, z) in shell2 {
        state.set(ModeIndex { n: 0, l: 2, m }, z * scale)?;
        state.set(ModeIndex { n: 0, l: 2, m: -m }, (z * scale).conj())?;
    }
    for k in 3..=truncation {
        let scale = tail_decay.powi(k as i32 - 2);
        for mode in ModeIndex::shell_modes(k).filter(|m| m.m >= 0) {
            let z = draw(rng, mode, scale);
            state.set(mode, z)?;
            state.set(mode.conjugate(), z.conj())?;
        }
    }
    Ok(state)
}

/// Random complex state supported on `S̃_N`, entries uniform in the unit
/// square, shell `k` scaled by `tail_decay^{k-2}`.
pub fn random_tilde_state<R: Rng>(rng: &mut R, truncation: u32, tail_decay: f64) -> Result<SpectralState> {
    let mut state = SpectralState::new(truncation)?;
    for mode in ModeIndex::all_up_to(truncation).filter(|m| m.shell() >= 2 && !m.is_null_space()) {
        let scale = tail_decay.powi(mode.shell() as i32 - 2);
        let z = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) * scale;
        state.set(mode, z)?;
    }
    Ok(state)
}
