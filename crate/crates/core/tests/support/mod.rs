#![allow(dead_code)]

pub mod oracles;

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use dirac_graph::boundary::{BoundaryPolicy, EndMode, VertexMode};
use dirac_graph::diagnostics::{boundary_form, trace_scale};
use dirac_graph::field::{BondField, SpinorField};
use dirac_graph::graph::{build_star_graph, BondSpec, StarGraph};
use dirac_graph::solver::{run, run_with, SimParams, SimulationSetup};
use dirac_graph::GaussianPacket;

pub const SQRT_2_3: f64 = 0.816496580927726;
pub const SQRT_2: f64 = std::f64::consts::SQRT_2;

pub fn star(alphas: &[f64], length: f64, dx: f64) -> StarGraph {
    let specs: Vec<BondSpec> = alphas.iter().map(|&a| BondSpec::new(a, length, dx)).collect();
    build_star_graph(&specs).unwrap()
}

/// The canonical transparent star run to `t = 10`.
pub fn canonical_setup(alphas: &[f64], vertex: VertexMode) -> SimulationSetup {
    let graph = star(alphas, 20.0, 0.0125);
    let n = graph.len();
    SimulationSetup {
        graph,
        params: SimParams { mass: 0.01, dt: 0.01, dx: 0.0125, n_steps: 1000 },
        policy: BoundaryPolicy::new(vertex, vec![EndMode::Dirichlet; n]),
        packet: GaussianPacket::new(-5.0, 0.9, 0),
        sample_every: 1,
        snapshot_steps: vec![],
    }
}

/// Density at the integer nodes, with `χ` averaged from the neighbouring
/// half-nodes (one-sided at the ends).
pub fn node_density(f: &BondField) -> Vec<f64> {
    let cells = f.chi.len();
    (0..=cells)
        .map(|j| {
            let chi = match j {
                0 => f.chi[0],
                j if j == cells => f.chi[cells - 1],
                j => (f.chi[j - 1] + f.chi[j]) * 0.5,
            };
            f.phi[j].norm_sqr() + chi.norm_sqr()
        })
        .collect()
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

pub fn field_bits(f: &SpinorField) -> Vec<(u64, u64)> {
    f.values().map(|v| (v.re.to_bits(), v.im.to_bits())).collect()
}

pub fn random_field(graph: &StarGraph, rng: &mut ChaCha8Rng) -> SpinorField {
    let mut f = SpinorField::zeros(graph, graph.len());
    for b in &mut f.bonds {
        for v in b.phi.iter_mut().chain(b.chi.iter_mut()) {
            *v = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        }
    }
    f
}

/// Random field satisfying the vertex conditions of `mode` and `φ = 0` at
/// every far end.
pub fn admissible(graph: &StarGraph, mode: VertexMode, rng: &mut ChaCha8Rng) -> SpinorField {
    let mut f = random_field(graph, rng);
    f.enforce_vertex(graph, mode).unwrap();
    for (b, bond) in f.bonds.iter_mut().zip(graph.bonds()) {
        b.phi[bond.far_node()] = Complex64::new(0.0, 0.0);
    }
    f
}

pub fn relative_form(psi: &SpinorField, varphi: &SpinorField, graph: &StarGraph) -> f64 {
    boundary_form(psi, varphi, graph).norm() / (trace_scale(psi, graph) * trace_scale(varphi, graph))
}

/// Interval `[−10, 10]` as an invisible two-bond vertex.
pub fn line_setup(dx: f64, dt: f64, t: f64, mass: f64, x0: f64, sigma: f64) -> SimulationSetup {
    SimulationSetup {
        graph: star(&[1.0, 1.0], 10.0, dx),
        params: SimParams { mass, dt, dx, n_steps: (t / dt).round() as usize },
        policy: BoundaryPolicy::new(VertexMode::Kirchhoff, vec![EndMode::Dirichlet; 2]),
        packet: GaussianPacket::new(x0, sigma, 0).unnormalized(),
        sample_every: 1000,
        snapshot_steps: vec![],
    }
}

/// L∞ error of the stored `φ^{n−1/2}` and `χⁿ` against `exact(x, t)`.
pub fn line_error(setup: &SimulationSetup, exact: impl Fn(f64, f64) -> (Complex64, Complex64)) -> f64 {
    let out = run(setup).unwrap();
    let t = setup.params.n_steps as f64 * setup.params.dt;
    let mut err: f64 = 0.0;
    for (f, bond) in out.final_field.bonds.iter().zip(setup.graph.bonds()) {
        for (j, v) in f.phi.iter().enumerate() {
            err = err.max((v - exact(bond.node_x(j), t - 0.5 * setup.params.dt).0).norm());
        }
        for (c, v) in f.chi.iter().enumerate() {
            err = err.max((v - exact(bond.half_x(c), t).1).norm());
        }
    }
    err
}

/// Canonical packet crossing the interval `[−10, 10]` until `t = 25`.
pub fn open_interval(ends: EndMode) -> SimulationSetup {
    SimulationSetup {
        graph: star(&[1.0, 1.0], 10.0, 0.0125),
        params: SimParams { mass: 0.01, dt: 0.01, dx: 0.0125, n_steps: 2500 },
        policy: BoundaryPolicy::new(VertexMode::Kirchhoff, vec![ends; 2]),
        packet: GaussianPacket::new(-5.0, 0.9, 0),
        sample_every: 100,
        snapshot_steps: vec![],
    }
}

/// Bond-1 node densities at every step.
pub fn bond_one_densities(setup: &SimulationSetup) -> Vec<Vec<f64>> {
    let mut out = vec![node_density(&setup.initial_field().unwrap().bonds[0])];
    run_with(setup, |_, f| out.push(node_density(&f.bonds[0]))).unwrap();
    out
}
