//! Boundary conditions: Bessel memory kernel, convolution conditions at the
//! truncated ends and at the vertex, and the weighted vertex coupling.

mod kernel;
mod tbc;
mod vertex;

use serde::{Deserialize, Serialize};

pub use kernel::BesselKernel;
pub use tbc::{apply_end_tbc, apply_vertex_tbc, split_convolution, ConvolutionBoundary, Side};
pub use vertex::{apply_vertex, vertex_flux, vertex_residuals, vertex_weight, VertexMode, VertexValues};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EndMode {
    /// `φ = 0` at the truncated end.
    Dirichlet,
    /// Convolution condition, outgoing waves leave without reflection.
    Transparent,
}

/// Vertex and end conditions for one simulation.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryPolicy {
    pub vertex: VertexMode,
    /// One entry per bond of the graph, far end only.
    pub ends: Vec<EndMode>,
}

impl BoundaryPolicy {
    pub fn new(vertex: VertexMode, ends: Vec<EndMode>) -> Self {
        Self { vertex, ends }
    }

    /// Closed system: Kirchhoff vertex, Dirichlet ends.
    pub fn closed(bonds: usize) -> Self {
        Self::new(VertexMode::Kirchhoff, vec![EndMode::Dirichlet; bonds])
    }

    /// Number of bonds actually simulated: bond 1 alone for the transparent
    /// vertex, every bond otherwise.
    pub fn active_bonds(&self, graph_bonds: usize) -> usize {
        match self.vertex {
            VertexMode::TransparentVertex { .. } => 1,
            _ => graph_bonds,
        }
    }
}
