//! Relativistic wave packets on metric star graphs.
//!
//! A staggered leap-frog discretization of the 1+1D Dirac system on each
//! bond, coupled at the vertex by (weighted) Kirchhoff conditions or by a
//! convolution-type transparent condition, with transparent or Dirichlet
//! conditions at the truncated bond ends. When the bond weights satisfy
//! `α₁⁻² = Σ_{j≥2} α_j⁻²` the weighted vertex lets an incoming packet pass
//! without reflection.
//!
//! - [`graph`]: star topology, grids and the sum-rule check.
//! - [`field`], [`solver`]: spinor storage, initial data, the stepper and the run loop.
//! - [`boundary`]: Bessel kernel, convolution conditions and vertex coupling.
//! - [`diagnostics`]: norms, reflection, energy, boundary form.
//! - [`config`], [`experiment`]: config files, runs, sweeps and CSV/JSON output.

pub mod bessel;
pub mod boundary;
pub mod config;
pub mod diagnostics;
pub mod error;
pub mod experiment;
pub mod field;
pub mod graph;
pub mod solver;

pub use boundary::{BoundaryPolicy, EndMode, VertexMode};
pub use diagnostics::DiagnosticsRecord;
pub use error::{Error, Result};
pub use field::{GaussianPacket, SpinorField};
pub use graph::{build_star_graph, BondSpec, StarGraph};
pub use solver::{run, SimParams, SimulationSetup, Stepper};
