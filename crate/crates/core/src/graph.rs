//! Star-graph topology: one vertex, one incoming bond and `N - 1` outgoing
//! bonds, each truncated to a finite length and discretized with a shared
//! grid spacing.
//!
//! Coordinates follow the usual quantum-graph convention. The incoming bond
//! `b_1` covers `[-L_1, 0]`, every outgoing bond `b_j` covers `[0, L_j]`, and
//! the vertex sits at coordinate `0` on all of them.

use serde::{Deserialize, Serialize};

use crate::error::GraphError;

/// Relative slack allowed when checking that a bond length is a whole
/// number of cells.
const COMMENSURATE_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Orientation {
    IncomingToVertex,
    OutgoingFromVertex,
}

/// Construction input for one bond.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BondSpec {
    pub alpha: f64,
    pub length: f64,
    pub dx: f64,
}

impl BondSpec {
    pub fn new(alpha: f64, length: f64, dx: f64) -> Self {
        Self { alpha, length, dx }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Bond {
    /// 1-based bond index.
    pub id: usize,
    pub orientation: Orientation,
    pub length: f64,
    pub dx: f64,
    pub alpha: f64,
    cells: usize,
}

impl Bond {
    /// Number of grid cells. The bond carries `cells + 1` integer nodes and
    /// `cells` half-nodes.
    pub fn cells(&self) -> usize {
        self.cells
    }

    /// Coordinate interval `(lo, hi)` covered by the bond.
    pub fn range(&self) -> (f64, f64) {
        match self.orientation {
            Orientation::IncomingToVertex => (-self.length, 0.0),
            Orientation::OutgoingFromVertex => (0.0, self.length),
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        let (lo, hi) = self.range();
        x >= lo && x <= hi
    }

    /// Coordinate of integer node `j`.
    pub fn node_x(&self, j: usize) -> f64 {
        match self.orientation {
            Orientation::IncomingToVertex => (j as f64 - self.cells as f64) * self.dx,
            Orientation::OutgoingFromVertex => j as f64 * self.dx,
        }
    }

    /// Coordinate of half-node `c`, the midpoint of cell `c` (between nodes
    /// `c` and `c + 1`).
    pub fn half_x(&self, c: usize) -> f64 {
        match self.orientation {
            Orientation::IncomingToVertex => (c as f64 + 0.5 - self.cells as f64) * self.dx,
            Orientation::OutgoingFromVertex => (c as f64 + 0.5) * self.dx,
        }
    }

    /// Index of the integer node that coincides with the vertex.
    pub fn vertex_node(&self) -> usize {
        match self.orientation {
            Orientation::IncomingToVertex => self.cells,
            Orientation::OutgoingFromVertex => 0,
        }
    }

    /// Index of the integer node at the truncated far end.
    pub fn far_node(&self) -> usize {
        match self.orientation {
            Orientation::IncomingToVertex => 0,
            Orientation::OutgoingFromVertex => self.cells,
        }
    }

    pub fn spec(&self) -> BondSpec {
        BondSpec::new(self.alpha, self.length, self.dx)
    }
}

/// Validated star graph. Immutable once built.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<BondSpec>", into = "Vec<BondSpec>")]
pub struct StarGraph {
    bonds: Vec<Bond>,
}

impl StarGraph {
    pub fn bonds(&self) -> &[Bond] {
        &self.bonds
    }

    pub fn bond(&self, index: usize) -> &Bond {
        &self.bonds[index]
    }

    pub fn len(&self) -> usize {
        self.bonds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bonds.is_empty()
    }

    pub fn dx(&self) -> f64 {
        self.bonds[0].dx
    }

    pub fn alphas(&self) -> Vec<f64> {
        self.bonds.iter().map(|b| b.alpha).collect()
    }

    pub fn specs(&self) -> Vec<BondSpec> {
        self.bonds.iter().map(Bond::spec).collect()
    }

    /// `α₁⁻² − Σ_{j≥2} α_j⁻²`. The vertex is transparent exactly when this
    /// vanishes.
    pub fn sum_rule_residual(&self) -> f64 {
        sum_rule_residual(&self.alphas())
    }

    /// Prefactor `A = α₁² Σ_{j≥2} α_j⁻²` of the vertex convolution condition.
    pub fn transparency_factor(&self) -> f64 {
        transparency_factor(&self.alphas())
    }

    /// Copy of this graph with the incoming weight replaced.
    pub fn with_alpha1(&self, alpha1: f64) -> Result<StarGraph, GraphError> {
        let mut specs = self.specs();
        specs[0].alpha = alpha1;
        build_star_graph(&specs)
    }
}

impl TryFrom<Vec<BondSpec>> for StarGraph {
    type Error = GraphError;

    fn try_from(specs: Vec<BondSpec>) -> Result<Self, Self::Error> {
        build_star_graph(&specs)
    }
}

impl From<StarGraph> for Vec<BondSpec> {
    fn from(graph: StarGraph) -> Self {
        graph.specs()
    }
}

/// Builds a star graph from per-bond `(alpha, length, dx)` triples. The
/// first entry becomes the incoming bond, the rest are outgoing.
pub fn build_star_graph(specs: &[BondSpec]) -> Result<StarGraph, GraphError> {
    if specs.len() < 2 {
        return Err(GraphError::TooFewBonds(specs.len()));
    }
    let dx = specs[0].dx;
    let mut bonds = Vec::with_capacity(specs.len());
    for (i, s) in specs.iter().enumerate() {
        let id = i + 1;
        if !(s.alpha.is_finite() && s.alpha > 0.0) {
            return Err(GraphError::NonPositive { bond: id, field: "alpha", value: s.alpha });
        }
        if !(s.length.is_finite() && s.length > 0.0) {
            return Err(GraphError::NonPositive { bond: id, field: "length", value: s.length });
        }
        if !(s.dx.is_finite() && s.dx > 0.0) {
            return Err(GraphError::NonPositive { bond: id, field: "dx", value: s.dx });
        }
        if s.dx != dx {
            return Err(GraphError::NonUniformSpacing { bond: id, dx: s.dx, expected: dx });
        }
        let ratio = s.length / s.dx;
        let cells = ratio.round();
        if cells < 1.0 || (ratio - cells).abs() > COMMENSURATE_TOL * ratio.max(1.0) {
            return Err(GraphError::NotCommensurate { bond: id, length: s.length, dx: s.dx });
        }
        bonds.push(Bond {
            id,
            orientation: if i == 0 {
                Orientation::IncomingToVertex
            } else {
                Orientation::OutgoingFromVertex
            },
            length: s.length,
            dx: s.dx,
            alpha: s.alpha,
            cells: cells as usize,
        });
    }
    Ok(StarGraph { bonds })
}

pub fn sum_rule_residual(alphas: &[f64]) -> f64 {
    let outgoing: f64 = alphas[1..].iter().map(|a| a.powi(-2)).sum();
    alphas[0].powi(-2) - outgoing
}

pub fn transparency_factor(alphas: &[f64]) -> f64 {
    let outgoing: f64 = alphas[1..].iter().map(|a| a.powi(-2)).sum();
    alphas[0] * alphas[0] * outgoing
}
