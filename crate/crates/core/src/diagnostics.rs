//! Observables: partial and total norms, reflection coefficient, transmitted
//! fractions, the discrete conserved energy and the self-adjointness
//! boundary form.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::DiagnosticsError;
use crate::field::{BondField, SpinorField};
use crate::graph::{Orientation, StarGraph};

/// Reflection below this counts as fully transmitted.
pub const TRANSMITTED_THRESHOLD: f64 = 0.02;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsRecord {
    pub t: f64,
    pub partial_norms: Vec<f64>,
    pub total_norm: f64,
    pub energy: f64,
    pub reflection: f64,
}

/// `Σ|φ|²` with trapezoid end weights plus `Σ|χ|²`, both times `Δx`.
fn bond_norm(f: &BondField, dx: f64) -> f64 {
    let n = f.phi.len();
    let mut phi: f64 = f.phi.iter().map(|v| v.norm_sqr()).sum();
    phi -= 0.5 * (f.phi[0].norm_sqr() + f.phi[n - 1].norm_sqr());
    let chi: f64 = f.chi.iter().map(|v| v.norm_sqr()).sum();
    dx * (phi + chi)
}

/// `N_j = ∫ |φ_j|² + |χ_j|² dx` over bond `bond` (0-based).
pub fn partial_norm(field: &SpinorField, graph: &StarGraph, bond: usize) -> f64 {
    bond_norm(&field.bonds[bond], graph.dx())
}

pub fn partial_norms(field: &SpinorField, graph: &StarGraph) -> Vec<f64> {
    (0..field.bonds.len()).map(|j| partial_norm(field, graph, j)).collect()
}

pub fn total_norm(field: &SpinorField, graph: &StarGraph) -> f64 {
    partial_norms(field, graph).iter().sum()
}

/// `R = N₁ / Σ N_j`.
pub fn reflection_coefficient(partial_norms: &[f64]) -> Result<f64, DiagnosticsError> {
    let total: f64 = partial_norms.iter().sum();
    if total <= 0.0 {
        return Err(DiagnosticsError::ZeroNorm);
    }
    Ok(partial_norms[0] / total)
}

/// `N_j / Σ_{k≥2} N_k` for each outgoing bond, once the reflection has
/// dropped below `threshold`.
pub fn transmitted_fractions(partial_norms: &[f64], threshold: f64) -> Result<Vec<f64>, DiagnosticsError> {
    let reflection = reflection_coefficient(partial_norms)?;
    if reflection > threshold {
        return Err(DiagnosticsError::NotTransmitted { reflection, threshold });
    }
    let outgoing: f64 = partial_norms[1..].iter().sum();
    Ok(partial_norms[1..].iter().map(|n| n / outgoing).collect())
}

/// Discrete energy `‖φ‖² + ‖χ‖² + (Δt/Δx) Re(Dφ, χ)` of the stored pair,
/// with `(Dφ)_{c} = φ_{c+1} − φ_c`. The leap-frog step conserves it exactly
/// for a closed system.
pub fn energy(field: &SpinorField, graph: &StarGraph, dt: f64) -> f64 {
    let dx = graph.dx();
    field
        .bonds
        .iter()
        .map(|f| {
            let coupling: f64 =
                f.chi.iter().enumerate().map(|(c, chi)| ((f.phi[c + 1] - f.phi[c]) * chi.conj()).re).sum();
            bond_norm(f, dx) + dt * coupling
        })
        .sum()
}

/// Boundary form `Ω(ψ, ϕ) = ⟨Dψ, ϕ⟩ − ⟨ψ, Dϕ⟩` written as endpoint terms:
/// for a bond on `[lo, hi]`, `i[(φ v̄ + χ ū)(lo) − (φ v̄ + χ ū)(hi)]`, where
/// `(u, v)` are the components of `ϕ`. The second field is conjugated as in
/// the graph scalar product. `χ` traces come from the two-point
/// extrapolation in [`SpinorField::vertex_traces`].
pub fn boundary_form(psi: &SpinorField, varphi: &SpinorField, graph: &StarGraph) -> Complex64 {
    let pv = psi.vertex_traces(graph);
    let pf = psi.far_traces(graph);
    let qv = varphi.vertex_traces(graph);
    let qf = varphi.far_traces(graph);
    let term = |phi: Complex64, chi: Complex64, u: Complex64, v: Complex64| phi * v.conj() + chi * u.conj();
    let mut total = Complex64::new(0.0, 0.0);
    for (j, bond) in graph.bonds()[..psi.bonds.len()].iter().enumerate() {
        let at_vertex = term(pv.phi[j], pv.chi[j], qv.phi[j], qv.chi[j]);
        let at_far = term(pf.phi[j], pf.chi[j], qf.phi[j], qf.chi[j]);
        total += match bond.orientation {
            Orientation::IncomingToVertex => at_far - at_vertex,
            Orientation::OutgoingFromVertex => at_vertex - at_far,
        };
    }
    total * Complex64::i()
}

/// Largest trace magnitude, the natural scale for [`boundary_form`].
pub fn trace_scale(field: &SpinorField, graph: &StarGraph) -> f64 {
    let v = field.vertex_traces(graph);
    let f = field.far_traces(graph);
    v.phi.iter().chain(&v.chi).chain(&f.phi).chain(&f.chi).map(|c| c.norm()).fold(0.0, f64::max)
}

/// Snapshot of every observable. `reference_norm` replaces the current
/// total in the reflection ratio when the outgoing bonds are not simulated.
pub fn record(field: &SpinorField, graph: &StarGraph, dt: f64, reference_norm: Option<f64>) -> DiagnosticsRecord {
    let partial_norms = partial_norms(field, graph);
    let total_norm: f64 = partial_norms.iter().sum();
    let denominator = reference_norm.unwrap_or(total_norm);
    let reflection = if denominator > 0.0 { partial_norms[0] / denominator } else { 0.0 };
    DiagnosticsRecord {
        t: field.time_level as f64 * dt,
        energy: energy(field, graph, dt),
        partial_norms,
        total_norm,
        reflection,
    }
}
