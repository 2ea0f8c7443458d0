//! Convolution-type transparent conditions for the Dirac system.
//!
//! The continuous relation at an outflow end is
//!
//! ```text
//! χ(t) = ±[ d/dt J(t) + i m J(t) ],   J(t) = ∫₀ᵗ I₀(m(t−τ)) φ(τ) dτ
//! ```
//!
//! with `+` at a right end and `−` at a left end. The vertex condition for
//! the interior-only problem has the same shape with an extra factor `A`.
//!
//! Boundary `φ` lives at half-integer time levels. Sample `s_k` of the
//! history is `φ` at level `k − 1/2`, so `s_0` is the initial value and the
//! samples are uniformly spaced by `Δt`. `J` is evaluated at half-integer
//! levels with the trapezoid rule over the samples, and `χ` at integer
//! level `n` is
//!
//! ```text
//! χⁿ = (J^{n+1/2} − J^{n−1/2}) / Δt + i m (J^{n+1/2} + J^{n−1/2}) / 2
//! ```
//!
//! which is centred on `tⁿ`. For `m = 0` every coefficient except the last
//! two cancels exactly and `χⁿ = (s_n + s_{n+1}) / 2`, the time-average of
//! `φ` at level `n`.

use num_complex::Complex64;

use super::kernel::BesselKernel;
use crate::error::BoundaryError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn sign(self) -> f64 {
        match self {
            Side::Left => -1.0,
            Side::Right => 1.0,
        }
    }
}

/// Trapezoid weight of node `k` on a grid of `intervals` intervals.
fn trapezoid_weight(k: usize, intervals: usize) -> f64 {
    if intervals == 0 || k > intervals {
        0.0
    } else if k == 0 || k == intervals {
        0.5
    } else {
        1.0
    }
}

/// Splits the unsigned convolution at integer level `n = known.len() − 1`
/// into `coef · s_{n+1} + rest`, where `known = [s_0, …, s_n]` and `s_{n+1}`
/// is the not-yet-computed sample.
pub fn split_convolution(known: &[Complex64], kernel: &BesselKernel) -> (Complex64, Complex64) {
    assert!(!known.is_empty(), "convolution needs at least the initial sample");
    let n = known.len() - 1;
    let newest = n + 1;
    let half_m_dt = 0.5 * kernel.mass() * kernel.dt();
    let coefficient = |k: usize| {
        let upper = trapezoid_weight(k, newest) * kernel.get(newest - k);
        let lower = if k <= n { trapezoid_weight(k, n) * kernel.get(n - k) } else { 0.0 };
        Complex64::new(upper - lower, half_m_dt * (upper + lower))
    };
    let mut rest = Complex64::new(0.0, 0.0);
    for (k, s) in known.iter().enumerate() {
        rest += coefficient(k) * s;
    }
    (coefficient(newest), rest)
}

fn convolution_at(history: &[Complex64], level: usize, kernel: &BesselKernel) -> Result<Complex64, BoundaryError> {
    let need = level + 2;
    if history.len() < need {
        return Err(BoundaryError::MissingHistory { have: history.len(), need });
    }
    let (coef, rest) = split_convolution(&history[..=level], kernel);
    Ok(coef * history[level + 1] + rest)
}

/// `χ` at an outer end at integer level `level`, given boundary samples
/// `s_0..=s_{level+1}`.
pub fn apply_end_tbc(
    side: Side,
    history: &[Complex64],
    kernel: &BesselKernel,
    level: usize,
) -> Result<Complex64, BoundaryError> {
    Ok(convolution_at(history, level, kernel)? * side.sign())
}

/// `χ₁` at the vertex for the interior-only problem, `A` times the right-end
/// relation.
pub fn apply_vertex_tbc(
    history: &[Complex64],
    kernel: &BesselKernel,
    factor: f64,
    level: usize,
) -> Result<Complex64, BoundaryError> {
    Ok(convolution_at(history, level, kernel)? * factor)
}

/// One transparent boundary node: its sample history and the scale
/// `±A` applied to the convolution.
#[derive(Clone, Debug)]
pub struct ConvolutionBoundary {
    scale: f64,
    history: Vec<Complex64>,
    last_chi: Complex64,
}

impl ConvolutionBoundary {
    pub fn end(side: Side, initial: Complex64) -> Self {
        Self::scaled(side.sign(), initial)
    }

    pub fn vertex(factor: f64, initial: Complex64) -> Self {
        Self::scaled(factor, initial)
    }

    fn scaled(scale: f64, initial: Complex64) -> Self {
        Self { scale, history: vec![initial], last_chi: Complex64::new(0.0, 0.0) }
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn history(&self) -> &[Complex64] {
        &self.history
    }

    /// Boundary `χ` from the most recent step.
    pub fn last_chi(&self) -> Complex64 {
        self.last_chi
    }

    /// Advances the boundary node by one half-cell finite-volume step with
    /// the convolution closing the flux, returning the new boundary `φ`.
    ///
    /// The node update is `(a s_new − ā s_old)/2 = λ·flux`, where `flux` is
    /// `χ_in − χ_b` at a right end and `χ_b − χ_in` at a left end, and
    /// `χ_b = scale·(coef·s_new + rest)` is implicit in `s_new`.
    pub(crate) fn advance(
        &mut self,
        kernel: &BesselKernel,
        lambda: f64,
        a: Complex64,
        chi_inside: Complex64,
        inside_is_left: bool,
    ) -> Complex64 {
        let old = *self.history.last().expect("history starts non-empty");
        let (coef, rest) = split_convolution(&self.history, kernel);
        // Both orientations reduce to the same denominator because the
        // scale carries the sign of the end.
        let orient = if inside_is_left { 1.0 } else { -1.0 };
        let s = self.scale * orient;
        let rhs = a.conj() * 0.5 * old + lambda * orient * chi_inside - lambda * s * rest;
        let new = rhs / (a * 0.5 + lambda * s * coef);
        self.history.push(new);
        self.last_chi = (coef * new + rest) * self.scale;
        new
    }
}
