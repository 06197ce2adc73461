//! Norm diagnostics along a trajectory and the smallness test on initial
//! data.

use serde::Serialize;

use crate::basis::{nullspace_residual, s2_norm, weighted_norm, NormSpec, SpectralState};
use crate::operator::TRILINEAR_CONSTANT;
use crate::Result;

/// One sample of the diagnostics table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiagnosticsRow {
    pub t: f64,
    /// `‖g‖_{Q^α}`.
    pub q_alpha_norm: f64,
    /// `‖e^{c1 t H} H^{α/2} g‖`.
    pub gs_norm: f64,
    pub s2_norm: f64,
    pub nullspace_residual: f64,
    /// `c1 ∫_0^t ‖e^{c1 τ H} g‖²_{Q^{α+1}} dτ`, trapezoid rule on the samples
    /// (first-order accurate in the sample spacing for nonsmooth data).
    pub energy_integral: f64,
}

impl DiagnosticsRow {
    pub const CSV_HEADER: &'static str = "t,q_alpha_norm,gs_norm,s2_norm,nullspace_residual,energy_integral";

    pub fn csv_line(&self) -> String {
        format!(
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
            self.t, self.q_alpha_norm, self.gs_norm, self.s2_norm, self.nullspace_residual, self.energy_integral
        )
    }
}

/// Diagnostics for a time series of states, in order.
pub fn diagnostics(series: &[(f64, SpectralState)], alpha: f64, c1: f64) -> Result<Vec<DiagnosticsRow>> {
    let mut rows = Vec::with_capacity(series.len());
    let mut integral = 0.0;
    let mut prev: Option<(f64, f64)> = None;
    for (t, state) in series {
        let t = *t;
        let q_alpha_norm = weighted_norm(state, &NormSpec::shubin(alpha))?;
        let gs_norm = weighted_norm(state, &NormSpec { alpha, c1, t })?;
        let dissipation = weighted_norm(state, &NormSpec { alpha: alpha + 1.0, c1, t })?.powi(2);
        if let Some((t0, d0)) = prev {
            integral += 0.5 * (t - t0) * (d0 + dissipation);
        }
        prev = Some((t, dissipation));
        rows.push(DiagnosticsRow {
            t,
            q_alpha_norm,
            gs_norm,
            s2_norm: s2_norm(state),
            nullspace_residual: nullspace_residual(state),
            energy_integral: c1 * integral,
        });
    }
    Ok(rows)
}

/// Outcome of [`check_smallness`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SmallnessCheck {
    pub pass: bool,
    pub c0: f64,
    pub s2: f64,
    /// `c0 - s2`; negative on failure.
    pub margin: f64,
}

/// Threshold `c0(c1) = (16/11 - 3c1/2) / (4√3/3 + √2)`.
pub fn smallness_threshold(c1: f64) -> f64 {
    (16.0 / 11.0 - 1.5 * c1) / TRILINEAR_CONSTANT
}

/// Compares `‖S̃_2 g_0‖` with `c0(c1)`; meaningful for `0 <= c1 < 32/33`.
pub fn check_smallness(init: &SpectralState, c1: f64) -> SmallnessCheck {
    let c0 = smallness_threshold(c1);
    let s2 = s2_norm(init);
    SmallnessCheck { pass: s2 <= c0, c0, s2, margin: c0 - s2 }
}
