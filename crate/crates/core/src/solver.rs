//! Staggered leap-frog stepper for `∂ₜφ = −∂ₓχ − i m φ`,
//! `∂ₜχ = −∂ₓφ + i m χ` on every bond of a star graph.
//!
//! One step maps `(φ^{n−1/2}, χⁿ)` to `(φ^{n+1/2}, χ^{n+1})`. The mass term
//! is averaged over the two time levels it connects, so with `a = 1 + i mΔt/2`
//! and `λ = Δt/Δx`
//!
//! ```text
//! a φ^{n+1/2}_j     = ā φ^{n−1/2}_j − λ (χⁿ_{j+1/2} − χⁿ_{j−1/2})
//! ā χ^{n+1}_{j−1/2} = a χⁿ_{j−1/2}  − λ (φ^{n+1/2}_j − φ^{n+1/2}_{j−1})
//! ```
//!
//! Vertex and end nodes are advanced by half-cell finite-volume updates whose
//! boundary flux comes from the active [`BoundaryPolicy`].

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::boundary::{
    apply_vertex, vertex_flux, vertex_weight, BesselKernel, BoundaryPolicy, ConvolutionBoundary, EndMode, Side,
    VertexMode, VertexValues,
};
use crate::diagnostics::{self, DiagnosticsRecord};
use crate::error::{BoundaryError, SolverError};
use crate::field::{initial_field, GaussianPacket, SpinorField};
use crate::graph::{Orientation, StarGraph};

/// Default ratio between the overflow threshold and the initial maximum.
pub const DEFAULT_OVERFLOW_FACTOR: f64 = 1e6;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimParams {
    pub mass: f64,
    pub dt: f64,
    pub dx: f64,
    pub n_steps: usize,
}

impl SimParams {
    pub fn courant(&self) -> f64 {
        self.dt / self.dx
    }

    /// Checks positivity and the CFL bound `Δt/Δx ≤ 1`.
    pub fn validate(&self) -> Result<(), SolverError> {
        if !(self.mass.is_finite() && self.mass >= 0.0) {
            return Err(SolverError::InvalidParams { field: "mass", reason: format!("must be >= 0, got {}", self.mass) });
        }
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(SolverError::InvalidParams { field: "dt", reason: format!("must be > 0, got {}", self.dt) });
        }
        if !(self.dx.is_finite() && self.dx > 0.0) {
            return Err(SolverError::InvalidParams { field: "dx", reason: format!("must be > 0, got {}", self.dx) });
        }
        self.check_cfl()
    }

    pub fn check_cfl(&self) -> Result<(), SolverError> {
        let ratio = self.courant();
        if ratio > 1.0 {
            return Err(SolverError::Cfl { ratio });
        }
        Ok(())
    }
}

/// Advances one [`SpinorField`] under a fixed graph, parameter set and
/// boundary policy. Owns the convolution histories of every transparent
/// boundary.
#[derive(Debug)]
pub struct Stepper<'g> {
    graph: &'g StarGraph,
    params: SimParams,
    vertex: VertexMode,
    ends: Vec<EndMode>,
    active: usize,
    kernel: BesselKernel,
    far: Vec<Option<ConvolutionBoundary>>,
    vertex_tbc: Option<ConvolutionBoundary>,
    guard: f64,
    vertex_values: Option<VertexValues>,
}

impl<'g> Stepper<'g> {
    /// Seeds the boundary histories from `field`, which must be at time
    /// level 0 and live on the active bonds of `policy`.
    pub fn new(
        graph: &'g StarGraph,
        params: SimParams,
        policy: &BoundaryPolicy,
        field: &SpinorField,
    ) -> Result<Self, SolverError> {
        params.validate()?;
        if params.dx != graph.dx() {
            return Err(SolverError::InvalidParams {
                field: "dx",
                reason: format!("{} does not match the graph spacing {}", params.dx, graph.dx()),
            });
        }
        if policy.ends.len() != graph.len() {
            return Err(SolverError::InvalidParams {
                field: "end_mode",
                reason: format!("{} entries for {} bonds", policy.ends.len(), graph.len()),
            });
        }
        let active = policy.active_bonds(graph.len());
        if field.bonds.len() != active {
            return Err(BoundaryError::ModeMismatch { active: field.bonds.len() }.into());
        }
        if field.time_level != 0 {
            return Err(SolverError::InvalidParams {
                field: "time_level",
                reason: "boundary histories can only be seeded at level 0".into(),
            });
        }
        if graph.bonds()[..active].iter().any(|b| b.cells() < 2) {
            return Err(SolverError::InvalidParams { field: "length", reason: "every bond needs at least 2 cells".into() });
        }
        let kernel = BesselKernel::new(params.mass, params.dt, params.n_steps)?;
        let far = graph.bonds()[..active]
            .iter()
            .zip(&field.bonds)
            .zip(&policy.ends)
            .map(|((bond, f), mode)| match mode {
                EndMode::Dirichlet => None,
                EndMode::Transparent => {
                    let side = match bond.orientation {
                        Orientation::IncomingToVertex => Side::Left,
                        Orientation::OutgoingFromVertex => Side::Right,
                    };
                    Some(ConvolutionBoundary::end(side, f.phi[bond.far_node()]))
                }
            })
            .collect();
        let vertex_tbc = match policy.vertex {
            VertexMode::TransparentVertex { factor } => {
                Some(ConvolutionBoundary::vertex(factor, field.bonds[0].phi[graph.bond(0).vertex_node()]))
            }
            _ => None,
        };
        Ok(Self {
            graph,
            params,
            vertex: policy.vertex,
            ends: policy.ends.clone(),
            active,
            kernel,
            far,
            vertex_tbc,
            guard: DEFAULT_OVERFLOW_FACTOR * field.max_abs(),
            vertex_values: None,
        })
    }

    /// Replaces the overflow threshold by `factor × initial max |value|`.
    pub fn with_overflow_factor(mut self, factor: f64, initial_max: f64) -> Self {
        self.guard = factor * initial_max;
        self
    }

    pub fn params(&self) -> &SimParams {
        &self.params
    }

    pub fn active_bonds(&self) -> usize {
        self.active
    }

    pub fn kernel(&self) -> &BesselKernel {
        &self.kernel
    }

    /// Transparent far-end boundary of bond `bond` (0-based), if any.
    pub fn far_boundary(&self, bond: usize) -> Option<&ConvolutionBoundary> {
        self.far.get(bond).and_then(Option::as_ref)
    }

    pub fn vertex_boundary(&self) -> Option<&ConvolutionBoundary> {
        self.vertex_tbc.as_ref()
    }

    /// Vertex traces after the last step, projected onto the vertex
    /// conditions. `None` before the first step and in interior-only mode.
    pub fn vertex_values(&self) -> Option<&VertexValues> {
        self.vertex_values.as_ref()
    }

    pub fn step(&mut self, field: &mut SpinorField) -> Result<(), SolverError> {
        let SimParams { mass, dt, dx, .. } = self.params;
        let lambda = dt / dx;
        let a = Complex64::new(1.0, 0.5 * mass * dt);
        let p = a.conj() / a;
        let q = lambda / a;

        for f in field.bonds.iter_mut() {
            let cells = f.cells();
            for j in 1..cells {
                f.phi[j] = p * f.phi[j] - q * (f.chi[j] - f.chi[j - 1]);
            }
        }

        let graph = self.graph;
        match self.vertex {
            VertexMode::TransparentVertex { .. } => {
                let f = &mut field.bonds[0];
                let last = f.cells() - 1;
                let tbc = self.vertex_tbc.as_mut().expect("seeded in new");
                let node = graph.bond(0).vertex_node();
                f.phi[node] = tbc.advance(&self.kernel, lambda, a, f.chi[last], true);
            }
            mode => {
                let alphas = match mode {
                    VertexMode::Kirchhoff => vec![1.0; self.active],
                    _ => graph.alphas(),
                };
                let weight = vertex_weight(&alphas);
                let incoming = &field.bonds[0];
                let v_old = incoming.phi[graph.bond(0).vertex_node()] * alphas[0];
                let flux = vertex_flux(
                    incoming.chi[incoming.cells() - 1],
                    field.bonds[1..].iter().map(|f| f.chi[0]),
                    &alphas,
                );
                let v_new = p * v_old + q * (flux / weight);
                for (f, (bond, alpha)) in field.bonds.iter_mut().zip(graph.bonds().iter().zip(&alphas)) {
                    f.phi[bond.vertex_node()] = v_new / alpha;
                }
            }
        }

        for (j, f) in field.bonds.iter_mut().enumerate() {
            let bond = graph.bond(j);
            let node = bond.far_node();
            match (self.ends[j], self.far[j].as_mut()) {
                (EndMode::Transparent, Some(tbc)) => {
                    let (chi_in, inside_is_left) = match bond.orientation {
                        Orientation::IncomingToVertex => (f.chi[0], false),
                        Orientation::OutgoingFromVertex => (f.chi[f.cells() - 1], true),
                    };
                    f.phi[node] = tbc.advance(&self.kernel, lambda, a, chi_in, inside_is_left);
                }
                _ => f.phi[node] = Complex64::new(0.0, 0.0),
            }
        }

        let pc = p.conj();
        let qc = q.conj();
        for f in field.bonds.iter_mut() {
            for c in 0..f.cells() {
                f.chi[c] = pc * f.chi[c] - qc * (f.phi[c + 1] - f.phi[c]);
            }
        }
        field.time_level += 1;

        if self.active > 1 {
            let traces = field.vertex_traces(graph);
            let alphas = graph.alphas();
            self.vertex_values = Some(apply_vertex(self.vertex, &traces, &alphas)?);
        }

        let max = field.max_abs();
        if !max.is_finite() || max > self.guard {
            return Err(SolverError::Instability { step: field.time_level, value: max, guard: self.guard });
        }
        Ok(())
    }
}

/// Everything needed for one simulation run.
#[derive(Clone, Debug, PartialEq)]
pub struct SimulationSetup {
    pub graph: StarGraph,
    pub params: SimParams,
    pub policy: BoundaryPolicy,
    pub packet: GaussianPacket,
    /// Diagnostics are recorded every `sample_every` steps and at the end.
    pub sample_every: usize,
    /// Steps at which a copy of the field is kept.
    pub snapshot_steps: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Snapshot {
    pub step: usize,
    pub t: f64,
    pub field: SpinorField,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunOutput {
    pub records: Vec<DiagnosticsRecord>,
    pub snapshots: Vec<Snapshot>,
    pub final_field: SpinorField,
}

impl SimulationSetup {
    pub fn active_bonds(&self) -> usize {
        self.policy.active_bonds(self.graph.len())
    }

    pub fn initial_field(&self) -> Result<SpinorField, SolverError> {
        initial_field(
            &self.graph,
            self.active_bonds(),
            &self.packet,
            self.params.mass,
            self.params.dt,
            self.policy.vertex,
        )
    }
}

/// Runs `setup.params.n_steps` steps, recording diagnostics and snapshots.
pub fn run(setup: &SimulationSetup) -> Result<RunOutput, SolverError> {
    run_with(setup, |_, _| {})
}

/// As [`run`], calling `observe` after every step with the stepper and the
/// new field.
pub fn run_with(
    setup: &SimulationSetup,
    mut observe: impl FnMut(&Stepper<'_>, &SpinorField),
) -> Result<RunOutput, SolverError> {
    let graph = &setup.graph;
    let dt = setup.params.dt;
    let mut field = setup.initial_field()?;
    let mut stepper = Stepper::new(graph, setup.params, &setup.policy, &field)?;
    let interior_only = stepper.active_bonds() < graph.len();
    let reference = interior_only.then(|| diagnostics::total_norm(&field, graph));
    let every = setup.sample_every.max(1);

    let mut records = vec![diagnostics::record(&field, graph, dt, reference)];
    let mut snapshots = Vec::new();
    let take_snapshot = |field: &SpinorField, snapshots: &mut Vec<Snapshot>| {
        for _ in setup.snapshot_steps.iter().filter(|&&s| s == field.time_level) {
            snapshots.push(Snapshot { step: field.time_level, t: field.time_level as f64 * dt, field: field.clone() });
        }
    };
    take_snapshot(&field, &mut snapshots);

    let n = setup.params.n_steps;
    for _ in 0..n {
        stepper.step(&mut field)?;
        observe(&stepper, &field);
        let level = field.time_level;
        if level % every == 0 || level == n {
            records.push(diagnostics::record(&field, graph, dt, reference));
        }
        take_snapshot(&field, &mut snapshots);
    }
    Ok(RunOutput { records, snapshots, final_field: field })
}
