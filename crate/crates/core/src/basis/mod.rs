//! Mode indexing, eigenfunctions, projections and weighted norms.
//!
//! A mode `(n, l, m)` lives in shell `k = 2n + l`. Modes are ordered by
//! shell, then `n`, then `m`. The harmonic oscillator `H = -Δ + |v|²/4` acts
//! on mode `(n, l, m)` by the factor `2n + l + 3/2`, so powers of `H` and the
//! Gelfand–Shilov weights `e^{c t H}` are diagonal in coefficient space.

mod io;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::f64::consts::{LN_2, PI};
use std::fmt;

use num_complex::Complex64;

use crate::specfun::{laguerre, ln_gamma, polar_coordinates, ylm_cos};
use crate::{Error, Result};

pub use io::{read_state_csv, write_state_csv};

/// Basis label `(n, l, m)` with `|m| <= l`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ModeIndex {
    pub n: u32,
    pub l: u32,
    pub m: i32,
}

impl ModeIndex {
    pub fn new(n: u32, l: u32, m: i32) -> Result<Self> {
        if m.unsigned_abs() > l {
            return Err(Error::Index(format!("mode ({n},{l},{m}) has |m| > l")));
        }
        Ok(ModeIndex { n, l, m })
    }

    /// Shell index `2n + l`.
    pub fn shell(&self) -> u32 {
        2 * self.n + self.l
    }

    /// Eigenvalue of `H` on this mode, `2n + l + 3/2`.
    pub fn shubin_weight(&self) -> f64 {
        self.shell() as f64 + 1.5
    }

    /// True for the five collision invariants `(0,0,0)`, `(0,1,·)`, `(1,0,0)`.
    pub fn is_null_space(&self) -> bool {
        self.shell() <= 2 && self.n + self.l < 2
    }

    /// The mode with opposite azimuthal order.
    pub fn conjugate(&self) -> Self {
        ModeIndex { m: -self.m, ..*self }
    }

    /// Modes of shell `k` in canonical order.
    pub fn shell_modes(k: u32) -> impl Iterator<Item = ModeIndex> {
        (0..=k / 2).flat_map(move |n| {
            let l = k - 2 * n;
            (-(l as i32)..=l as i32).map(move |m| ModeIndex { n, l, m })
        })
    }

    /// All modes with shell `<= truncation` in canonical order.
    pub fn all_up_to(truncation: u32) -> impl Iterator<Item = ModeIndex> {
        (0..=truncation).flat_map(ModeIndex::shell_modes)
    }

    /// The five null-space modes.
    pub fn null_space() -> [ModeIndex; 5] {
        [
            ModeIndex { n: 0, l: 0, m: 0 },
            ModeIndex { n: 0, l: 1, m: -1 },
            ModeIndex { n: 0, l: 1, m: 0 },
            ModeIndex { n: 0, l: 1, m: 1 },
            ModeIndex { n: 1, l: 0, m: 0 },
        ]
    }
}

impl Ord for ModeIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.shell(), self.n, self.m).cmp(&(other.shell(), other.n, other.m))
    }
}

impl PartialOrd for ModeIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ModeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.n, self.l, self.m)
    }
}

/// Number of modes in shell `k`: `Σ_{2n+l=k} (2l+1) = (k+1)(k+2)/2`.
pub fn shell_size(k: u32) -> usize {
    ((k as usize + 1) * (k as usize + 2)) / 2
}

/// Dense indexing of all modes with shell `<= truncation`, in canonical
/// order.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeLayout {
    truncation: u32,
    shell_start: Vec<usize>,
}

impl ModeLayout {
    pub fn new(truncation: u32) -> Self {
        let mut shell_start = Vec::with_capacity(truncation as usize + 2);
        let mut acc = 0;
        for k in 0..=truncation {
            shell_start.push(acc);
            acc += shell_size(k);
        }
        shell_start.push(acc);
        ModeLayout { truncation, shell_start }
    }

    pub fn truncation(&self) -> u32 {
        self.truncation
    }

    pub fn len(&self) -> usize {
        *self.shell_start.last().unwrap()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Index of `mode`, or `None` if it lies outside the truncation.
    pub fn index(&self, mode: ModeIndex) -> Option<usize> {
        let k = mode.shell();
        if k > self.truncation || mode.m.unsigned_abs() > mode.l {
            return None;
        }
        let n = mode.n as usize;
        let within = n * (2 * k as usize + 1) - 2 * n * n.saturating_sub(1);
        Some(self.shell_start[k as usize] + within + (mode.m + mode.l as i32) as usize)
    }

    /// Index range occupied by shell `k`.
    pub fn shell_range(&self, k: u32) -> std::ops::Range<usize> {
        self.shell_start[k as usize]..self.shell_start[k as usize + 1]
    }

    pub fn modes(&self) -> impl Iterator<Item = ModeIndex> {
        ModeIndex::all_up_to(self.truncation)
    }
}

/// Truncated coefficient vector. Absent modes are exactly zero.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralState {
    truncation: u32,
    pub t: f64,
    coeffs: BTreeMap<ModeIndex, Complex64>,
}

impl SpectralState {
    /// Zero state with truncation `N >= 2`.
    pub fn new(truncation: u32) -> Result<Self> {
        if truncation < 2 {
            return Err(Error::Domain(format!("truncation must be >= 2, got {truncation}")));
        }
        Ok(SpectralState { truncation, t: 0.0, coeffs: BTreeMap::new() })
    }

    pub fn truncation(&self) -> u32 {
        self.truncation
    }

    pub fn with_time(mut self, t: f64) -> Self {
        self.t = t;
        self
    }

    pub fn get(&self, mode: ModeIndex) -> Complex64 {
        self.coeffs.get(&mode).copied().unwrap_or_default()
    }

    /// Stores an amplitude; zero amplitudes are dropped.
    pub fn set(&mut self, mode: ModeIndex, value: Complex64) -> Result<()> {
        if mode.m.unsigned_abs() > mode.l {
            return Err(Error::Index(format!("mode {mode} has |m| > l")));
        }
        if mode.shell() > self.truncation {
            return Err(Error::Index(format!("mode {mode} lies beyond truncation {}", self.truncation)));
        }
        if value == Complex64::default() {
            self.coeffs.remove(&mode);
        } else {
            self.coeffs.insert(mode, value);
        }
        Ok(())
    }

    /// Nonzero amplitudes in canonical order.
    pub fn iter(&self) -> impl Iterator<Item = (ModeIndex, Complex64)> + '_ {
        self.coeffs.iter().map(|(&k, &v)| (k, v))
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Dense vector in [`ModeLayout`] order. The layout truncation must be at
    /// least the state's.
    pub fn to_dense(&self, layout: &ModeLayout) -> Vec<Complex64> {
        let mut out = vec![Complex64::default(); layout.len()];
        for (mode, z) in self.iter() {
            if let Some(i) = layout.index(mode) {
                out[i] = z;
            }
        }
        out
    }

    pub fn from_dense(layout: &ModeLayout, t: f64, values: &[Complex64]) -> Result<Self> {
        if values.len() != layout.len() {
            return Err(Error::Domain(format!(
                "dense vector has length {}, layout expects {}",
                values.len(),
                layout.len()
            )));
        }
        let mut state = SpectralState::new(layout.truncation())?.with_time(t);
        for (mode, &z) in layout.modes().zip(values) {
            if z != Complex64::default() {
                state.coeffs.insert(mode, z);
            }
        }
        Ok(state)
    }

    /// Largest `|g_{n,l,-m} - conj(g_{n,l,m})|`; zero for real-valued data.
    pub fn reality_defect(&self) -> f64 {
        self.iter()
            .map(|(mode, z)| (self.get(mode.conjugate()) - z.conj()).norm())
            .fold(0.0, f64::max)
    }

    /// Largest mode-wise `|a - b|`.
    pub fn max_abs_diff(&self, other: &SpectralState) -> f64 {
        let a = self.iter().map(|(mode, z)| (z - other.get(mode)).norm());
        let b = other.iter().map(|(mode, z)| (z - self.get(mode)).norm());
        a.chain(b).fold(0.0, f64::max)
    }

    /// Plain ℓ² norm of the coefficients.
    pub fn l2_norm(&self) -> f64 {
        self.coeffs.values().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub(crate) fn map_amplitudes(&self, mut f: impl FnMut(ModeIndex, Complex64) -> Complex64) -> SpectralState {
        let coeffs = self
            .coeffs
            .iter()
            .map(|(&mode, &z)| (mode, f(mode, z)))
            .filter(|(_, z)| *z != Complex64::default())
            .collect();
        SpectralState { truncation: self.truncation, t: self.t, coeffs }
    }

    fn filtered(&self, truncation: u32, keep: impl Fn(&ModeIndex) -> bool) -> SpectralState {
        let coeffs = self.coeffs.iter().filter(|(m, _)| keep(m)).map(|(&k, &v)| (k, v)).collect();
        SpectralState { truncation: truncation.max(2), t: self.t, coeffs }
    }
}

/// Eigenvalue of the linearized collision operator on shell `(n, l)`.
pub fn lambda_eig(n: u32, l: u32) -> f64 {
    match (n, l) {
        (0, 0) | (0, 1) | (1, 0) => 0.0,
        (0, 2) => 12.0,
        _ => {
            let k = (2 * n + l) as f64;
            let l = l as f64;
            2.0 * k + l * (l + 1.0)
        }
    }
}

/// `ln` of the radial normalisation `(n!/(√2 Γ(n+l+3/2)))^{1/2}`.
fn ln_phi_norm(n: u32, l: u32) -> f64 {
    let lg = |x: f64| ln_gamma(x).expect("positive argument");
    0.5 * (lg(n as f64 + 1.0) - 0.5 * LN_2 - lg(n as f64 + l as f64 + 1.5))
}

/// `φ_{n,l,m}(v) = c_{n,l} (|v|/√2)^l e^{-|v|²/4} L_n^{(l+1/2)}(|v|²/2) Y_l^m(v/|v|)`.
pub fn phi_eval(mode: ModeIndex, v: [f64; 3]) -> Complex64 {
    let (r, cos_theta, phi) = polar_coordinates(v);
    if r == 0.0 && mode.l > 0 {
        return Complex64::default();
    }
    let x = r * r / 2.0;
    let ln_power = if mode.l == 0 { 0.0 } else { mode.l as f64 * (r / 2f64.sqrt()).ln() };
    let radial = (ln_phi_norm(mode.n, mode.l) + ln_power - r * r / 4.0).exp()
        * laguerre(mode.n as usize, mode.l as f64 + 0.5, x);
    radial * ylm_cos(mode.l as usize, mode.m, cos_theta, phi)
}

/// `B_{n,l} = (-i)^l (2π)^{3/4} (√2 n! Γ(n+l+3/2) 2^{2n+l})^{-1/2}`.
pub fn fourier_prefactor(n: u32, l: u32) -> Complex64 {
    let lg = |x: f64| ln_gamma(x).expect("positive argument");
    let k = (2 * n + l) as f64;
    let ln_mag = 0.75 * (2.0 * PI).ln()
        - 0.5 * (0.5 * LN_2 + lg(n as f64 + 1.0) + lg(n as f64 + l as f64 + 1.5) + k * LN_2);
    let phase = match l % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, -1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, 1.0),
    };
    phase * ln_mag.exp()
}

/// Fourier transform of `√μ φ_{n,l,m}` with `f̂(ξ) = ∫ e^{-iv·ξ} f(v) dv`:
/// `B_{n,l} |ξ|^{2n+l} e^{-|ξ|²/2} Y_l^m(ξ/|ξ|)`.
pub fn psi_hat(mode: ModeIndex, xi: [f64; 3]) -> Complex64 {
    let (r, cos_theta, phi) = polar_coordinates(xi);
    let k = mode.shell();
    if r == 0.0 && k > 0 {
        return Complex64::default();
    }
    let ln_power = if k == 0 { 0.0 } else { k as f64 * r.ln() };
    let b = fourier_prefactor(mode.n, mode.l);
    b * (ln_power - r * r / 2.0).exp() * ylm_cos(mode.l as usize, mode.m, cos_theta, phi)
}

/// `S_N`: keeps modes with shell `<= N`.
pub fn project(state: &SpectralState, truncation: u32) -> SpectralState {
    state.filtered(truncation, |m| m.shell() <= truncation)
}

/// `S̃_N`: keeps modes with `2 <= 2n+l <= N` and `n+l >= 2`.
pub fn project_tilde(state: &SpectralState, truncation: u32) -> SpectralState {
    state.filtered(truncation, |m| {
        let k = m.shell();
        (2..=truncation).contains(&k) && m.n + m.l >= 2
    })
}

/// Exponent and weights for `‖e^{c1 t H} H^{α/2} g‖`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormSpec {
    pub alpha: f64,
    pub c1: f64,
    pub t: f64,
}

impl NormSpec {
    /// Plain Shubin norm `Q^α`.
    pub fn shubin(alpha: f64) -> Self {
        NormSpec { alpha, c1: 0.0, t: 0.0 }
    }

    /// `ln` of the squared weight `e^{2 c1 t s} s^α` for Shubin weight `s`.
    fn ln_weight(&self, s: f64) -> f64 {
        let exp_part = if self.c1 == 0.0 || self.t == 0.0 { 0.0 } else { 2.0 * self.c1 * self.t * s };
        exp_part + self.alpha * s.ln()
    }
}

/// `√(Σ e^{2 c1 t s} s^α |g|²)` with `s = 2n+l+3/2`, accumulated in log space.
pub fn weighted_norm(state: &SpectralState, spec: &NormSpec) -> Result<f64> {
    let v = ln_weighted_norm(state, spec)?.exp();
    check_finite(v, state, spec)
}

fn check_finite(v: f64, state: &SpectralState, spec: &NormSpec) -> Result<f64> {
    if v.is_finite() {
        return Ok(v);
    }
    let (shell, log_weight) = heaviest_term(state, spec);
    Err(Error::Overflow { shell, log_weight })
}

fn heaviest_term(state: &SpectralState, spec: &NormSpec) -> (u32, f64) {
    state
        .iter()
        .map(|(mode, z)| (mode.shell(), spec.ln_weight(mode.shubin_weight()) + 2.0 * z.norm().ln()))
        .fold((0, f64::NEG_INFINITY), |acc, cur| if cur.1 > acc.1 { cur } else { acc })
}

/// `ln` of [`weighted_norm`]; finite even when the norm itself is not
/// representable. Returns `-inf` for the zero state.
pub fn ln_weighted_norm(state: &SpectralState, spec: &NormSpec) -> Result<f64> {
    let terms: Vec<(u32, f64)> = state
        .iter()
        .map(|(mode, z)| (mode.shell(), spec.ln_weight(mode.shubin_weight()) + 2.0 * z.norm().ln()))
        .collect();
    let max = terms.iter().map(|t| t.1).fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return Ok(f64::NEG_INFINITY);
    }
    if !max.is_finite() {
        let (shell, log_weight) = heaviest_term(state, spec);
        return Err(Error::Overflow { shell, log_weight });
    }
    let sum = neumaier_sum(terms.iter().map(|&(_, t)| (t - max).exp()));
    Ok(0.5 * (max + sum.ln()))
}

/// Compensated summation.
pub(crate) fn neumaier_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// ℓ² norm of the five `(0,2,m)` amplitudes, i.e. `‖S̃_2 g‖`.
pub fn s2_norm(state: &SpectralState) -> f64 {
    ModeIndex::shell_modes(2)
        .filter(|m| m.l == 2)
        .map(|m| state.get(m).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// ℓ² norm of the null-space amplitudes.
pub fn nullspace_residual(state: &SpectralState) -> f64 {
    ModeIndex::null_space().iter().map(|&m| state.get(m).norm_sqr()).sum::<f64>().sqrt()
}

/// `H^p g`: multiplies each amplitude by `(2n+l+3/2)^p`.
pub fn apply_h_power(state: &SpectralState, p: f64) -> SpectralState {
    state.map_amplitudes(|mode, z| z * mode.shubin_weight().powf(p))
}

/// `⟨f, g⟩ = Σ f_a conj(g_a)`.
pub fn inner_product(f: &SpectralState, g: &SpectralState) -> Complex64 {
    f.iter().map(|(mode, z)| z * g.get(mode).conj()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mode(n: u32, l: u32, m: i32) -> ModeIndex {
        ModeIndex::new(n, l, m).unwrap()
    }

    fn single(m: ModeIndex, z: Complex64, n: u32) -> SpectralState {
        let mut s = SpectralState::new(n).unwrap();
        s.set(m, z).unwrap();
        s
    }

    #[test]
    fn lambda_examples() {
        assert_eq!(lambda_eig(0, 0), 0.0);
        assert_eq!(lambda_eig(0, 1), 0.0);
        assert_eq!(lambda_eig(1, 0), 0.0);
        assert_eq!(lambda_eig(0, 2), 12.0);
        assert_eq!(lambda_eig(1, 2), 14.0);
        assert_eq!(lambda_eig(0, 3), 18.0);
    }

    #[test]
    fn mode_validation() {
        assert!(matches!(ModeIndex::new(0, 2, 3), Err(Error::Index(_))));
        assert!(ModeIndex::new(0, 2, -2).is_ok());
    }

    #[test]
    fn shell_counts_and_order() {
        for k in 0..=20 {
            let direct: usize = (0..=k / 2).map(|n| 2 * (k - 2 * n) as usize + 1).sum();
            assert_eq!(ModeIndex::shell_modes(k).count(), direct);
            assert_eq!(shell_size(k), direct);
        }
        let all: Vec<_> = ModeIndex::all_up_to(12).collect();
        assert!(all.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn layout_indexes_are_dense() {
        let layout = ModeLayout::new(15);
        for (i, m) in layout.modes().enumerate() {
            assert_eq!(layout.index(m), Some(i), "{m}");
        }
        assert_eq!(layout.index(mode(0, 16, 0)), None);
        assert_eq!(layout.len(), (0..=15).map(shell_size).sum::<usize>());
    }

    #[test]
    fn null_space_membership() {
        let nulls: Vec<_> = ModeIndex::all_up_to(6).filter(|m| m.is_null_space()).collect();
        assert_eq!(nulls, ModeIndex::null_space().to_vec());
    }

    #[test]
    fn phi_examples() {
        let sqrt_mu = |v: [f64; 3]| (2.0 * PI).powf(-0.75) * (-(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]) / 4.0).exp();
        let z = phi_eval(mode(0, 0, 0), [0.0; 3]);
        assert!((z.re - (2.0 * PI).powf(-0.75)).abs() < 1e-15 && z.im == 0.0);
        for v in [[0.3, -1.2, 0.7], [1.5, 0.2, 0.0], [-0.4, 0.9, 2.1]] {
            let got = phi_eval(mode(0, 1, 0), v);
            assert!((got.re - v[0] * sqrt_mu(v)).abs() < 1e-15 && got.im.abs() < 1e-15);
            let got = phi_eval(mode(0, 1, 1), v);
            let want = Complex64::new(v[1], v[2]) / 2f64.sqrt() * sqrt_mu(v);
            assert!((got - want).norm() < 1e-15);
            let got = phi_eval(mode(1, 0, 0), v);
            let r2 = v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
            let want = (3.0 - r2) / 6f64.sqrt() * sqrt_mu(v);
            assert!((got.re - want).abs() < 1e-15);
        }
        assert_eq!(phi_eval(mode(0, 2, 1), [0.0; 3]), Complex64::default());
    }

    #[test]
    fn psi_hat_examples() {
        let z = psi_hat(mode(0, 0, 0), [0.0; 3]);
        assert!((z - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        for m in -1..=1 {
            let b = fourier_prefactor(0, 1);
            assert!(b.re.abs() < 1e-16 && b.im < 0.0);
            let z = psi_hat(mode(0, 1, m), [0.2, 0.4, 0.3]);
            assert!(z.norm() > 0.0);
        }
        assert!(psi_hat(mode(2, 3, 1), [40.0, 0.0, 3.0]).norm() < 1e-300);
    }

    #[test]
    fn project_tilde_examples() {
        let s = single(mode(1, 0, 0), Complex64::new(1.0, 0.0), 4);
        assert!(project_tilde(&s, 4).is_empty());
        let z = Complex64::new(0.2, -0.7);
        let s = single(mode(0, 2, 1), z, 4);
        assert_eq!(project_tilde(&s, 4).get(mode(0, 2, 1)), z);
        let s = single(mode(0, 3, 0), z, 4);
        assert!(project_tilde(&s, 2).is_empty());
    }

    #[test]
    fn weighted_norm_examples() {
        let s = single(mode(0, 2, 0), Complex64::new(1.0, 0.0), 4);
        assert!((weighted_norm(&s, &NormSpec::shubin(0.0)).unwrap() - 1.0).abs() < 1e-15);
        assert!((weighted_norm(&s, &NormSpec::shubin(-2.0)).unwrap() - 2.0 / 7.0).abs() < 1e-15);
        let empty = SpectralState::new(4).unwrap();
        assert_eq!(weighted_norm(&empty, &NormSpec::shubin(-1.0)).unwrap(), 0.0);
    }

    #[test]
    fn weighted_norm_overflow_reports_shell() {
        let mut s = SpectralState::new(40).unwrap();
        s.set(mode(0, 2, 0), Complex64::new(1.0, 0.0)).unwrap();
        s.set(mode(3, 34, 0), Complex64::new(1.0, 0.0)).unwrap();
        let spec = NormSpec { alpha: 0.0, c1: 1.0, t: 20.0 };
        match weighted_norm(&s, &spec) {
            Err(Error::Overflow { shell, .. }) => assert_eq!(shell, 40),
            other => panic!("expected overflow, got {other:?}"),
        }
        // the logarithm stays finite
        assert!(ln_weighted_norm(&s, &spec).unwrap().is_finite());
        // tiny amplitude compensates a huge weight
        let mut s = SpectralState::new(40).unwrap();
        s.set(mode(3, 34, 0), Complex64::new(1e-300, 0.0)).unwrap();
        let v = weighted_norm(&s, &NormSpec { alpha: 0.0, c1: 1.0, t: 9.0 }).unwrap();
        assert!((v.ln() - (9.0 * 41.5 + (1e-300f64).ln())).abs() < 1e-9);
    }

    #[test]
    fn s2_norm_examples() {
        let empty = SpectralState::new(4).unwrap();
        assert_eq!(s2_norm(&empty), 0.0);
        let s = single(mode(0, 2, 0), Complex64::new(0.3, 0.0), 4);
        assert!((s2_norm(&s) - 0.3).abs() < 1e-16);
        let mut s = single(mode(0, 2, 1), Complex64::new(0.3, 0.0), 4);
        s.set(mode(0, 2, -1), Complex64::new(0.3, 0.0)).unwrap();
        assert!((s2_norm(&s) - 0.3 * 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn state_rejects_out_of_range_modes() {
        let mut s = SpectralState::new(3).unwrap();
        assert!(s.set(mode(1, 2, 0), Complex64::new(1.0, 0.0)).is_err());
        assert!(SpectralState::new(1).is_err());
    }

    #[test]
    fn dense_round_trip() {
        let layout = ModeLayout::new(6);
        let mut s = SpectralState::new(6).unwrap().with_time(0.25);
        s.set(mode(1, 3, -2), Complex64::new(0.5, 1.5)).unwrap();
        s.set(mode(3, 0, 0), Complex64::new(-2.0, 0.0)).unwrap();
        let dense = s.to_dense(&layout);
        assert_eq!(SpectralState::from_dense(&layout, 0.25, &dense).unwrap(), s);
    }

    #[test]
    fn neumaier_is_compensated() {
        let v = neumaier_sum([1.0, 1e100, 1.0, -1e100]);
        assert_eq!(v, 2.0);
    }
}
