//! Staggered spinor storage and initial data.
//!
//! After `n` steps a bond holds `φ` at the integer nodes for time level
//! `n − 1/2` and `χ` at the half-nodes for time level `n`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::boundary::{apply_vertex, VertexMode, VertexValues};
use crate::error::{BoundaryError, SolverError};
use crate::graph::{Bond, Orientation, StarGraph};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

#[derive(Clone, Debug, PartialEq)]
pub struct BondField {
    /// `cells + 1` values at integer nodes.
    pub phi: Vec<Complex64>,
    /// `cells` values at half-nodes.
    pub chi: Vec<Complex64>,
}

impl BondField {
    pub fn zeros(cells: usize) -> Self {
        Self { phi: vec![ZERO; cells + 1], chi: vec![ZERO; cells] }
    }

    pub fn cells(&self) -> usize {
        self.chi.len()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpinorField {
    /// One entry per simulated bond, in graph order.
    pub bonds: Vec<BondField>,
    pub time_level: usize,
}

impl SpinorField {
    /// Zero field on the first `active` bonds of `graph`.
    pub fn zeros(graph: &StarGraph, active: usize) -> Self {
        let bonds = graph.bonds()[..active].iter().map(|b| BondField::zeros(b.cells())).collect();
        Self { bonds, time_level: 0 }
    }

    pub fn values(&self) -> impl Iterator<Item = &Complex64> {
        self.bonds.iter().flat_map(|b| b.phi.iter().chain(b.chi.iter()))
    }

    fn values_mut(&mut self) -> impl Iterator<Item = &mut Complex64> {
        self.bonds.iter_mut().flat_map(|b| b.phi.iter_mut().chain(b.chi.iter_mut()))
    }

    pub fn max_abs(&self) -> f64 {
        self.values().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.values().all(|v| v.re.is_finite() && v.im.is_finite())
    }

    pub fn scale(&mut self, factor: Complex64) {
        for v in self.values_mut() {
            *v *= factor;
        }
    }

    /// `a·x + b·y` on fields of identical shape.
    pub fn linear_combination(a: Complex64, x: &SpinorField, b: Complex64, y: &SpinorField) -> SpinorField {
        let mut out = x.clone();
        for (o, v) in out.values_mut().zip(y.values()) {
            *o = a * *o + b * v;
        }
        out
    }

    /// Traces at the vertex: `φ` at the vertex node of each bond and `χ`
    /// extrapolated from the two nearest half-nodes, `(3χ_near − χ_next)/2`.
    pub fn vertex_traces(&self, graph: &StarGraph) -> VertexValues {
        let mut phi = Vec::with_capacity(self.bonds.len());
        let mut chi = Vec::with_capacity(self.bonds.len());
        for (f, b) in self.bonds.iter().zip(graph.bonds()) {
            phi.push(f.phi[b.vertex_node()]);
            chi.push(extrapolate_chi(f, b, true));
        }
        VertexValues { phi, chi }
    }

    /// Traces at the far (truncated) end of each bond.
    pub fn far_traces(&self, graph: &StarGraph) -> VertexValues {
        let mut phi = Vec::with_capacity(self.bonds.len());
        let mut chi = Vec::with_capacity(self.bonds.len());
        for (f, b) in self.bonds.iter().zip(graph.bonds()) {
            phi.push(f.phi[b.far_node()]);
            chi.push(extrapolate_chi(f, b, false));
        }
        VertexValues { phi, chi }
    }

    /// Rewrites the vertex node values and the half-nodes next to the vertex
    /// so that the traces satisfy the vertex conditions of `mode`.
    pub fn enforce_vertex(&mut self, graph: &StarGraph, mode: VertexMode) -> Result<(), BoundaryError> {
        let traces = self.vertex_traces(graph);
        let fixed = apply_vertex(mode, &traces, &graph.alphas()[..self.bonds.len()])?;
        for ((f, b), (p, c)) in self.bonds.iter_mut().zip(graph.bonds()).zip(fixed.phi.iter().zip(&fixed.chi)) {
            f.phi[b.vertex_node()] = *p;
            let (near, next) = near_half_nodes(b, true);
            // Solve (3χ_near − χ_next)/2 = c for χ_near.
            f.chi[near] = (c * 2.0 + f.chi[next]) / 3.0;
        }
        Ok(())
    }
}

fn near_half_nodes(bond: &Bond, at_vertex: bool) -> (usize, usize) {
    let last = bond.cells() - 1;
    let vertex_is_right = bond.orientation == Orientation::IncomingToVertex;
    if vertex_is_right == at_vertex {
        (last, last.saturating_sub(1))
    } else {
        (0, 1.min(last))
    }
}

fn extrapolate_chi(f: &BondField, bond: &Bond, at_vertex: bool) -> Complex64 {
    let (near, next) = near_half_nodes(bond, at_vertex);
    if near == next {
        return f.chi[near];
    }
    (f.chi[near] * 3.0 - f.chi[next]) * 0.5
}

/// `G(x) = (2πσ²)^{-1/4} exp(−(x−x₀)²/(4σ²))`.
pub fn gaussian(x: f64, x0: f64, sigma: f64) -> f64 {
    let s2 = sigma * sigma;
    (2.0 * std::f64::consts::PI * s2).powf(-0.25) * (-(x - x0) * (x - x0) / (4.0 * s2)).exp()
}

/// Spinor `G(x)·(1, 1)ᵀ` sampled on one bond: `φ` at integer nodes, `χ` at
/// half-nodes, both at `t = 0`.
pub fn gaussian_spinor(x0: f64, sigma: f64, bond: &Bond) -> Result<BondField, SolverError> {
    if !(sigma.is_finite() && sigma > 0.0) {
        return Err(SolverError::InitialCondition(format!("sigma must be positive, got {sigma}")));
    }
    if !bond.contains(x0) {
        let (lo, hi) = bond.range();
        return Err(SolverError::InitialCondition(format!(
            "x0 = {x0} lies outside bond {} ([{lo}, {hi}])",
            bond.id
        )));
    }
    let cells = bond.cells();
    let phi = (0..=cells).map(|j| Complex64::new(gaussian(bond.node_x(j), x0, sigma), 0.0)).collect();
    let chi = (0..cells).map(|c| Complex64::new(gaussian(bond.half_x(c), x0, sigma), 0.0)).collect();
    Ok(BondField { phi, chi })
}

/// Gaussian wave packet placed on one bond, every other bond at rest.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaussianPacket {
    pub x0: f64,
    pub sigma: f64,
    /// 0-based index of the bond carrying the packet.
    pub bond: usize,
    /// Rescale to unit total norm before applying `amplitude`.
    pub normalize: bool,
    pub amplitude: f64,
}

impl GaussianPacket {
    pub fn new(x0: f64, sigma: f64, bond: usize) -> Self {
        Self { x0, sigma, bond, normalize: true, amplitude: 1.0 }
    }

    pub fn unnormalized(mut self) -> Self {
        self.normalize = false;
        self
    }
}

/// Builds the stored initial state (`φ^{-1/2}`, `χ⁰`).
///
/// `χ⁰` is the sampled packet. `φ^{-1/2}` is obtained by a backward
/// half-step Taylor expansion `φ(−Δt/2) ≈ φ(0) + (Δt/2)(∂ₓχ + i m φ)` at the
/// interior nodes, which keeps the start-up error at second order. Vertex and
/// end nodes keep their `t = 0` samples; the vertex is then made consistent
/// with `vertex_mode`. With `normalize` set, the stored state is scaled to
/// unit total norm.
pub fn initial_field(
    graph: &StarGraph,
    active: usize,
    packet: &GaussianPacket,
    mass: f64,
    dt: f64,
    vertex_mode: VertexMode,
) -> Result<SpinorField, SolverError> {
    if packet.bond >= active {
        return Err(SolverError::InitialCondition(format!(
            "packet bond {} is not part of the simulated domain ({} bonds)",
            packet.bond + 1,
            active
        )));
    }
    let mut field = SpinorField::zeros(graph, active);
    let bond = graph.bond(packet.bond);
    let mut sampled = gaussian_spinor(packet.x0, packet.sigma, bond)?;
    let dx = bond.dx;
    let cells = bond.cells();
    let backward: Vec<Complex64> = (1..cells)
        .map(|j| {
            let dchi = (sampled.chi[j] - sampled.chi[j - 1]) / dx;
            sampled.phi[j] + (dchi + Complex64::new(0.0, mass) * sampled.phi[j]) * (0.5 * dt)
        })
        .collect();
    sampled.phi[1..cells].copy_from_slice(&backward);
    field.bonds[packet.bond] = sampled;

    if active > 1 {
        if let VertexMode::TransparentVertex { .. } = vertex_mode {
            return Err(BoundaryError::ModeMismatch { active }.into());
        }
        let traces = field.vertex_traces(graph);
        let fixed = apply_vertex(vertex_mode, &traces, &graph.alphas())?;
        for (f, b) in field.bonds.iter_mut().zip(graph.bonds()) {
            f.phi[b.vertex_node()] = fixed.phi[b.id - 1];
        }
    }

    if packet.normalize {
        let norm = crate::diagnostics::total_norm(&field, graph);
        if norm > 0.0 {
            field.scale(Complex64::new(norm.sqrt().recip(), 0.0));
        }
    }
    if packet.amplitude != 1.0 {
        field.scale(Complex64::new(packet.amplitude, 0.0));
    }
    Ok(field)
}
