//! Gaunt integrals, collision coupling coefficients and the coupling tensor.
//!
//! Only drivers with shell `<= 2` couple in the bilinear collision operator,
//! so every target mode `(n, l, m)` receives seven channels:
//!
//! | channel | driver        | source            |
//! |---------|---------------|-------------------|
//! | `diag`  | `(0,0,0)`     | `(n, l, m)`       |
//! | `minus` | `(0,1,m1)`    | `(n-1, l+1, m-m1)`|
//! | `plus`  | `(0,1,m1)`    | `(n, l-1, m-m1)`  |
//! | `drift` | `(1,0,0)`     | `(n-1, l, m)`     |
//! | `a1`    | `(0,2,m2)`    | `(n-2, l+2, m-m2)`|
//! | `a2`    | `(0,2,m2)`    | `(n-1, l, m-m2)`  |
//! | `a3`    | `(0,2,m2)`    | `(n, l-2, m-m2)`  |
//!
//! Indices are signed here; any coefficient whose indices leave the valid
//! range (`n < 0`, `l < 0`, `|m| > l`) is zero.

mod cache;

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::basis::{ModeIndex, ModeLayout};
use crate::specfun::{assoc_legendre_unchecked, cached_gauss_legendre, ylm_norm};
use crate::{Error, Result};

pub use cache::{cache_file_path, load_or_build, read_tensor, resolve_cache_dir, write_tensor, CacheStatus, TENSOR_DIR_ENV};

/// Largest truncation [`build_tensor`] accepts.
pub const DEFAULT_MAX_SHELL: u32 = 64;

/// Six indices of a triple spherical-harmonic integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GauntKey {
    pub l1: i32,
    pub m1: i32,
    pub l2: i32,
    pub m2: i32,
    pub l3: i32,
    pub m3: i32,
}

impl GauntKey {
    pub fn new(l1: i32, m1: i32, l2: i32, m2: i32, l3: i32, m3: i32) -> Result<Self> {
        for (l, m) in [(l1, m1), (l2, m2), (l3, m3)] {
            if l < 0 || m.abs() > l {
                return Err(Error::Index(format!("invalid harmonic index (l={l}, m={m})")));
            }
        }
        Ok(GauntKey { l1, m1, l2, m2, l3, m3 })
    }

    /// True when a selection rule forces the integral to vanish.
    pub fn vanishes(&self) -> bool {
        let GauntKey { l1, m1, l2, m2, l3, m3 } = *self;
        m1 + m2 + m3 != 0 || l3 < (l1 - l2).abs() || l3 > l1 + l2 || (l1 + l2 + l3) % 2 != 0
    }
}

/// `∫_{S²} Y_{l1}^{m1} Y_{l2}^{m2} Y_{l3}^{m3} dω`.
///
/// After the azimuthal integral the integrand is a polynomial of degree
/// `l1+l2+l3` in `cos θ`, so Gauss–Legendre of order `(l1+l2+l3)/2 + 1` is
/// exact.
pub fn gaunt(key: &GauntKey) -> f64 {
    if key.vanishes() {
        return 0.0;
    }
    let GauntKey { l1, m1, l2, m2, l3, m3 } = *key;
    let total = (l1 + l2 + l3) as usize;
    let rule = cached_gauss_legendre(total / 2 + 1);
    let (l1, l2, l3) = (l1 as usize, l2 as usize, l3 as usize);
    let (a1, a2, a3) = (m1.unsigned_abs() as usize, m2.unsigned_abs() as usize, m3.unsigned_abs() as usize);
    let norm = ylm_norm(l1, a1) * ylm_norm(l2, a2) * ylm_norm(l3, a3);
    let integral = rule.integrate(|x| {
        assoc_legendre_unchecked(l1, a1, x) * assoc_legendre_unchecked(l2, a2, x) * assoc_legendre_unchecked(l3, a3, x)
    });
    2.0 * PI * norm * integral
}

/// [`gaunt`] with signed indices; zero whenever an index pair is invalid.
pub fn gaunt_signed(l1: i32, m1: i32, l2: i32, m2: i32, l3: i32, m3: i32) -> f64 {
    match GauntKey::new(l1, m1, l2, m2, l3, m3) {
        Ok(key) => gaunt(&key),
        Err(_) => 0.0,
    }
}

fn valid(n: i32, l: i32, m: i32) -> bool {
    n >= 0 && l >= 0 && m.abs() <= l
}

/// `C̃^{m1,m}_{l,lp} = ∫ Y_1^{m1} Y_l^m Y_{lp}^{-m1-m}`, the coefficient of
/// `Y_{lp}^{m1+m}` in `Y_1^{m1} Y_l^m`; `lp` is `l-1` or `l+1`.
pub fn coef_tilde_c(m1: i32, m: i32, l: i32, lp: i32) -> f64 {
    gaunt_signed(1, m1, l, m, lp, -m1 - m)
}

/// `C^{m2,m}_{l,lp} = ∫ Y_2^{m2} Y_l^m Y_{lp}^{-m2-m}`; `lp` is `l-2`, `l` or `l+2`.
pub fn coef_c(m2: i32, m: i32, l: i32, lp: i32) -> f64 {
    gaunt_signed(2, m2, l, m, lp, -m2 - m)
}

/// `A⁻_{n,l,m,m1} = 4√(π/3) (l-1) √(2(n+1)) C̃^{m1,m}_{l,l-1}`.
pub fn a_minus(n: i32, l: i32, m: i32, m1: i32) -> f64 {
    if !valid(n, l, m) {
        return 0.0;
    }
    4.0 * (PI / 3.0).sqrt() * (l - 1) as f64 * (2.0 * (n + 1) as f64).sqrt() * coef_tilde_c(m1, m, l, l - 1)
}

/// `A⁺_{n,l,m,m1} = 4√(π/3) (l+2) √(2n+2l+3) C̃^{m1,m}_{l,l+1}`.
pub fn a_plus(n: i32, l: i32, m: i32, m1: i32) -> f64 {
    if !valid(n, l, m) {
        return 0.0;
    }
    4.0 * (PI / 3.0).sqrt() * (l + 2) as f64 * ((2 * n + 2 * l + 3) as f64).sqrt() * coef_tilde_c(m1, m, l, l + 1)
}

/// `A¹_{n,l,m,m2} = -4√(π/15) √(4(n+2)(n+1)) C^{m2,m}_{l,l-2}`.
pub fn a1(n: i32, l: i32, m: i32, m2: i32) -> f64 {
    if !valid(n, l, m) {
        return 0.0;
    }
    let nf = n as f64;
    -4.0 * (PI / 15.0).sqrt() * (4.0 * (nf + 2.0) * (nf + 1.0)).sqrt() * coef_c(m2, m, l, l - 2)
}

/// `A²_{n,l,m,m2} = 4√(π/15) √(2(n+1)(2n+2l+3)) C^{m2,m}_{l,l}`.
pub fn a2(n: i32, l: i32, m: i32, m2: i32) -> f64 {
    if !valid(n, l, m) {
        return 0.0;
    }
    let (nf, lf) = (n as f64, l as f64);
    4.0 * (PI / 15.0).sqrt() * (2.0 * (nf + 1.0) * (2.0 * nf + 2.0 * lf + 3.0)).sqrt() * coef_c(m2, m, l, l)
}

/// `A³_{n,l,m,m2} = -4√(π/15) √((2n+2l+5)(2n+2l+3)) C^{m2,m}_{l,l+2}`.
pub fn a3(n: i32, l: i32, m: i32, m2: i32) -> f64 {
    if !valid(n, l, m) {
        return 0.0;
    }
    let s = (2 * n + 2 * l) as f64;
    -4.0 * (PI / 15.0).sqrt() * ((s + 5.0) * (s + 3.0)).sqrt() * coef_c(m2, m, l, l + 2)
}

/// Coefficient of `φ_{n+1,l,m}` in `L(φ_{1,0,0}, φ_{n,l,m})`:
/// `(4/3) √(3(n+1)(2n+2l+3))`.
pub fn drift_source(n: i32, l: i32) -> f64 {
    if n < 0 || l < 0 {
        return 0.0;
    }
    4.0 / 3.0 * (3.0 * (n + 1) as f64 * (2 * n + 2 * l + 3) as f64).sqrt()
}

/// Drift coefficient seen by target `(n, l, ·)` from source `(n-1, l, ·)`:
/// `(4/3) √(3n(2n+2l+1))`.
pub fn drift_target(n: i32, l: i32) -> f64 {
    drift_source(n - 1, l)
}

/// Diagonal coefficient `-(2(2n+l) + l(l+1))` multiplying `f_{0,0,0}`.
pub fn diag_coefficient(n: i32, l: i32) -> f64 {
    -((2 * (2 * n + l) + l * (l + 1)) as f64)
}

/// The seven channels of the bilinear operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Channel {
    Diag,
    Minus,
    Plus,
    Drift,
    A1,
    A2,
    A3,
}

impl Channel {
    pub const ALL: [Channel; 7] = [Channel::Diag, Channel::Minus, Channel::Plus, Channel::Drift, Channel::A1, Channel::A2, Channel::A3];

    pub fn name(&self) -> &'static str {
        match self {
            Channel::Diag => "diag",
            Channel::Minus => "minus",
            Channel::Plus => "plus",
            Channel::Drift => "drift",
            Channel::A1 => "a1",
            Channel::A2 => "a2",
            Channel::A3 => "a3",
        }
    }

    /// Driver mode for azimuthal index `m_driver` (ignored for `diag` and
    /// `drift`).
    pub fn driver(&self, m_driver: i32) -> ModeIndex {
        match self {
            Channel::Diag => ModeIndex { n: 0, l: 0, m: 0 },
            Channel::Drift => ModeIndex { n: 1, l: 0, m: 0 },
            Channel::Minus | Channel::Plus => ModeIndex { n: 0, l: 1, m: m_driver },
            Channel::A1 | Channel::A2 | Channel::A3 => ModeIndex { n: 0, l: 2, m: m_driver },
        }
    }

    /// Shell offset between target and source.
    pub fn shell_drop(&self) -> u32 {
        match self {
            Channel::Diag => 0,
            Channel::Minus | Channel::Plus => 1,
            _ => 2,
        }
    }

    fn driver_range(&self) -> std::ops::RangeInclusive<i32> {
        match self {
            Channel::Diag | Channel::Drift => 0..=0,
            Channel::Minus | Channel::Plus => -1..=1,
            _ => -2..=2,
        }
    }

    /// Source `(n, l)` for target `(n, l)`.
    fn source_nl(&self, n: i32, l: i32) -> (i32, i32) {
        match self {
            Channel::Diag => (n, l),
            Channel::Minus => (n - 1, l + 1),
            Channel::Plus => (n, l - 1),
            Channel::Drift => (n - 1, l),
            Channel::A1 => (n - 2, l + 2),
            Channel::A2 => (n - 1, l),
            Channel::A3 => (n, l - 2),
        }
    }

    /// Coefficient coupling driver `m_driver` and source `(sn, sl, sm)`.
    fn coefficient(&self, target: ModeIndex, sn: i32, sl: i32, sm: i32, m_driver: i32) -> f64 {
        match self {
            Channel::Diag => diag_coefficient(target.n as i32, target.l as i32),
            Channel::Drift => drift_target(target.n as i32, target.l as i32),
            Channel::Minus => a_minus(sn, sl, sm, m_driver),
            Channel::Plus => a_plus(sn, sl, sm, m_driver),
            Channel::A1 => a1(sn, sl, sm, m_driver),
            Channel::A2 => a2(sn, sl, sm, m_driver),
            Channel::A3 => a3(sn, sl, sm, m_driver),
        }
    }
}

impl fmt::Display for Channel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Channel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Channel::ALL
            .iter()
            .copied()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Domain(format!("unknown channel `{s}`")))
    }
}

/// One term `coef · f_driver · g_source` contributing to a target mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TensorEntry {
    pub channel: Channel,
    pub source: ModeIndex,
    pub m_driver: i32,
    pub coef: f64,
}

impl TensorEntry {
    pub fn driver(&self) -> ModeIndex {
        self.channel.driver(self.m_driver)
    }
}

/// Nonzero channel entries of one target mode, in channel order.
pub fn target_entries(target: ModeIndex) -> Vec<TensorEntry> {
    let (n, l, m) = (target.n as i32, target.l as i32, target.m);
    let mut out = Vec::new();
    for channel in Channel::ALL {
        let (sn, sl) = channel.source_nl(n, l);
        if sn < 0 || sl < 0 {
            continue;
        }
        for md in channel.driver_range() {
            let sm = m - md;
            if sm.abs() > sl {
                continue;
            }
            let coef = channel.coefficient(target, sn, sl, sm, md);
            if coef != 0.0 {
                let source = ModeIndex { n: sn as u32, l: sl as u32, m: sm };
                out.push(TensorEntry { channel, source, m_driver: md, coef });
            }
        }
    }
    out
}

/// Precomputed bilinear couplings for every target mode with shell `<= N`.
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingTensor {
    truncation: u32,
    layout: ModeLayout,
    entries: Vec<Vec<TensorEntry>>,
}

impl CouplingTensor {
    pub(crate) fn from_entries(truncation: u32, entries: Vec<Vec<TensorEntry>>) -> Self {
        CouplingTensor { truncation, layout: ModeLayout::new(truncation), entries }
    }

    pub fn truncation(&self) -> u32 {
        self.truncation
    }

    pub fn layout(&self) -> &ModeLayout {
        &self.layout
    }

    /// Entries of `target`; empty beyond the truncation.
    pub fn entries(&self, target: ModeIndex) -> &[TensorEntry] {
        match self.layout.index(target) {
            Some(i) => &self.entries[i],
            None => &[],
        }
    }

    pub fn channel(&self, target: ModeIndex, channel: Channel) -> impl Iterator<Item = &TensorEntry> {
        self.entries(target).iter().filter(move |e| e.channel == channel)
    }

    /// `(target, entry)` pairs in canonical target order.
    pub fn iter(&self) -> impl Iterator<Item = (ModeIndex, &TensorEntry)> {
        self.layout.modes().zip(&self.entries).flat_map(|(t, es)| es.iter().map(move |e| (t, e)))
    }

    pub fn num_entries(&self) -> usize {
        self.entries.iter().map(Vec::len).sum()
    }
}

/// Builds the tensor for truncation `N`, up to [`DEFAULT_MAX_SHELL`].
pub fn build_tensor(truncation: u32) -> Result<CouplingTensor> {
    build_tensor_with_limit(truncation, DEFAULT_MAX_SHELL)
}

pub fn build_tensor_with_limit(truncation: u32, max_shell: u32) -> Result<CouplingTensor> {
    if truncation < 2 {
        return Err(Error::Domain(format!("truncation must be >= 2, got {truncation}")));
    }
    if truncation > max_shell {
        return Err(Error::Capacity { requested: truncation, max: max_shell });
    }
    let layout = ModeLayout::new(truncation);
    let targets: Vec<ModeIndex> = layout.modes().collect();
    let entries = targets.par_iter().map(|&t| target_entries(t)).collect();
    Ok(CouplingTensor { truncation, layout, entries })
}

/// Channels carrying the Prop-style coefficient bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundChannel {
    A1,
    A2,
    A3,
}

/// `Σ_{m2} A_{source, m*-m2, m2}²` over the sources feeding target
/// `(n, l, m*)` through the given channel.
pub fn sum_sq_channel(channel: BoundChannel, n: i32, l: i32, m_star: i32) -> f64 {
    (-2..=2)
        .map(|m2| {
            let sm = m_star - m2;
            let c = match channel {
                BoundChannel::A1 => a1(n - 2, l + 2, sm, m2),
                BoundChannel::A2 => a2(n - 1, l, sm, m2),
                BoundChannel::A3 => a3(n, l - 2, sm, m2),
            };
            c * c
        })
        .sum()
}

/// Exact value of [`sum_sq_channel`] (independent of `m*`).
pub fn sum_sq_closed_form(channel: BoundChannel, n: i32, l: i32) -> f64 {
    let (n, l) = (n as f64, l as f64);
    match channel {
        BoundChannel::A1 => 8.0 * n * (n - 1.0) * (l + 2.0) * (l + 1.0) / ((2.0 * l + 3.0) * (2.0 * l + 1.0)),
        BoundChannel::A2 => 8.0 / 3.0 * n * (2.0 * n + 2.0 * l + 1.0) * l * (l + 1.0) / ((2.0 * l + 3.0) * (2.0 * l - 1.0)),
        BoundChannel::A3 => {
            2.0 * (2.0 * n + 2.0 * l + 1.0) * (2.0 * n + 2.0 * l - 1.0) * l * (l - 1.0) / ((2.0 * l + 1.0) * (2.0 * l - 1.0))
        }
    }
}

/// Upper bound on [`sum_sq_channel`] (`A2` for `l >= 1`, `A3` for `l >= 2`).
pub fn sum_sq_bound(channel: BoundChannel, n: i32, l: i32) -> f64 {
    let (n, l) = (n as f64, l as f64);
    match channel {
        BoundChannel::A1 => 16.0 * n * (n - 1.0) / 3.0,
        BoundChannel::A2 => 4.0 * n * (2.0 * n + 2.0 * l + 1.0) / 3.0,
        BoundChannel::A3 => (2.0 * n + 2.0 * l + 1.0) * (2.0 * n + 2.0 * l - 1.0) / 2.0,
    }
}
