//! Vertex coupling for the star graph.
//!
//! The weighted conditions tie the bond traces together as
//!
//! ```text
//! α₁φ₁(0) = α₂φ₂(0) = … = α_Nφ_N(0)
//! χ₁(0)/α₁ = Σ_{j≥2} χ_j(0)/α_j
//! ```
//!
//! and plain Kirchhoff coupling is the special case `α_j = 1`. In the
//! stepper the vertex is one shared unknown `v = α_jφ_j(0)` advanced by a
//! finite-volume update over the half cells that meet there; see
//! [`vertex_weight`] and [`vertex_flux`].

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::BoundaryError;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum VertexMode {
    /// Continuity of `φ` and `Σχ_j = 0`.
    Kirchhoff,
    /// α-weighted continuity and flux balance.
    WeightedKirchhoff,
    /// Convolution condition on `χ₁` with prefactor `A`; only for the
    /// interior problem on bond 1.
    TransparentVertex { factor: f64 },
}

/// Trace values of every bond at the vertex.
#[derive(Clone, Debug, PartialEq)]
pub struct VertexValues {
    pub phi: Vec<Complex64>,
    pub chi: Vec<Complex64>,
}

fn effective_alphas(mode: VertexMode, alphas: &[f64]) -> Result<Vec<f64>, BoundaryError> {
    match mode {
        VertexMode::Kirchhoff => Ok(vec![1.0; alphas.len()]),
        VertexMode::WeightedKirchhoff => Ok(alphas.to_vec()),
        VertexMode::TransparentVertex { .. } => Err(BoundaryError::ModeMismatch { active: alphas.len() }),
    }
}

/// Projects vertex traces onto the vertex conditions.
///
/// Bond 1's traces are kept. The outgoing `φ_j` become `(α₁/α_j)φ₁`, and the
/// outgoing `χ_j` become `(α₁/α_j)χ₁/A` with `A = α₁²Σ_{j≥2}α_j⁻²`, which
/// splits the flux the way a transmitted wave does.
pub fn apply_vertex(mode: VertexMode, values: &VertexValues, alphas: &[f64]) -> Result<VertexValues, BoundaryError> {
    let n = alphas.len();
    if values.phi.len() != n || values.chi.len() != n {
        return Err(BoundaryError::VertexArity { got: values.phi.len().min(values.chi.len()), expected: n });
    }
    let alphas = effective_alphas(mode, alphas)?;
    let a1 = alphas[0];
    let factor = crate::graph::transparency_factor(&alphas);
    let mut out = values.clone();
    for (j, alpha) in alphas.iter().enumerate().skip(1) {
        let ratio = a1 / alpha;
        out.phi[j] = values.phi[0] * ratio;
        out.chi[j] = values.chi[0] * (ratio / factor);
    }
    Ok(out)
}

/// Largest violation of the continuity chain and of the flux balance.
pub fn vertex_residuals(mode: VertexMode, values: &VertexValues, alphas: &[f64]) -> Result<(f64, f64), BoundaryError> {
    let alphas = effective_alphas(mode, alphas)?;
    let common = values.phi[0] * alphas[0];
    let continuity = values
        .phi
        .iter()
        .zip(&alphas)
        .map(|(p, a)| (p * a - common).norm())
        .fold(0.0, f64::max);
    let outgoing: Complex64 = values.chi[1..].iter().zip(&alphas[1..]).map(|(c, a)| c / a).sum();
    let balance = (values.chi[0] / alphas[0] - outgoing).norm();
    Ok((continuity, balance))
}

/// Node weight of the shared vertex unknown `v`: half a cell per bond, each
/// carrying `φ_j = v/α_j`.
pub fn vertex_weight(alphas: &[f64]) -> f64 {
    0.5 * alphas.iter().map(|a| a.powi(-2)).sum::<f64>()
}

/// Net `χ` flux into the vertex cell: `χ₁/α₁` from the last half-node of
/// bond 1 minus `Σ χ_j/α_j` from the first half-node of each outgoing bond.
pub fn vertex_flux(chi_incoming: Complex64, chi_outgoing: impl Iterator<Item = Complex64>, alphas: &[f64]) -> Complex64 {
    let mut flux = chi_incoming / alphas[0];
    for (c, a) in chi_outgoing.zip(&alphas[1..]) {
        flux -= c / a;
    }
    flux
}
