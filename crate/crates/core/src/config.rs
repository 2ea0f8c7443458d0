//! Experiment configuration files.
//!
//! Configs are TOML. Unknown keys are rejected, missing required keys are
//! reported together. The layout:
//!
//! ```toml
//! [graph]
//! dx = 0.0125
//!
//! [[graph.bond]]          # first entry is the incoming bond
//! alpha = 0.816496580927726
//! length = 20.0           # default 20
//! end_mode = "dirichlet"  # or "transparent"; default "dirichlet"
//!
//! [simulation]
//! mass = 0.01
//! dt = 0.01
//! t_final = 10.0          # or `steps = 1000`
//!
//! [initial]
//! x0 = -5.0
//! sigma = 0.9
//! bond = 1                # 1-based, default 1
//! normalize = true        # default true
//! amplitude = 1.0         # default 1
//!
//! [boundary]
//! vertex_mode = "weighted"  # kirchhoff | weighted | transparent
//!
//! [output]                # optional
//! sample_every = 10
//! snapshot_times = [0.0, 4.0, 6.0, 10.0]
//!
//! [sweep]                 # optional
//! param = "alpha1"
//! from = 0.4
//! to = 1.4
//! points = 51
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::boundary::{BoundaryPolicy, EndMode, VertexMode};
use crate::error::ConfigError;
use crate::field::{gaussian_spinor, GaussianPacket};
use crate::graph::{build_star_graph, BondSpec, StarGraph};
use crate::solver::{SimParams, SimulationSetup};

pub const DEFAULT_BOND_LENGTH: f64 = 20.0;
pub const DEFAULT_SAMPLE_EVERY: usize = 10;

const REQUIRED_KEYS: &[&str] = &[
    "graph.dx",
    "graph.bond",
    "simulation.mass",
    "simulation.dt",
    "simulation.t_final",
    "initial.x0",
    "initial.sigma",
    "boundary.vertex_mode",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VertexModeName {
    Kirchhoff,
    Weighted,
    Transparent,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepParam {
    Alpha1,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub param: SweepParam,
    pub from: f64,
    pub to: f64,
    pub points: usize,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(self.from.is_finite() && self.to.is_finite() && self.from > 0.0 && self.to > 0.0) {
            return Err(invalid("sweep.from/to", format!("alpha range must be positive, got [{}, {}]", self.from, self.to)));
        }
        if self.points < 2 {
            return Err(invalid("sweep.points", format!("need at least 2 points, got {}", self.points)));
        }
        Ok(())
    }

    /// Evenly spaced values including both endpoints.
    pub fn values(&self) -> Vec<f64> {
        let span = self.to - self.from;
        let last = (self.points - 1) as f64;
        (0..self.points)
            .map(|k| if k + 1 == self.points { self.to } else { self.from + span * k as f64 / last })
            .collect()
    }
}

/// Fully validated description of one run (and optionally a sweep).
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub graph: StarGraph,
    pub ends: Vec<EndMode>,
    pub params: SimParams,
    pub packet: GaussianPacket,
    pub vertex_mode: VertexModeName,
    pub sample_every: usize,
    pub snapshot_times: Vec<f64>,
    pub sweep: Option<SweepSpec>,
    pub output_dir: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn policy(&self) -> BoundaryPolicy {
        let vertex = match self.vertex_mode {
            VertexModeName::Kirchhoff => VertexMode::Kirchhoff,
            VertexModeName::Weighted => VertexMode::WeightedKirchhoff,
            VertexModeName::Transparent => VertexMode::TransparentVertex { factor: self.graph.transparency_factor() },
        };
        BoundaryPolicy::new(vertex, self.ends.clone())
    }

    pub fn t_final(&self) -> f64 {
        self.params.n_steps as f64 * self.params.dt
    }

    pub fn snapshot_steps(&self) -> Vec<usize> {
        self.snapshot_times.iter().map(|t| (t / self.params.dt).round() as usize).collect()
    }

    pub fn setup(&self) -> SimulationSetup {
        SimulationSetup {
            graph: self.graph.clone(),
            params: self.params,
            policy: self.policy(),
            packet: self.packet.clone(),
            sample_every: self.sample_every,
            snapshot_steps: self.snapshot_steps(),
        }
    }

    /// Same experiment with the incoming bond weight replaced.
    pub fn with_alpha1(&self, alpha1: f64) -> Result<Self, ConfigError> {
        let mut out = self.clone();
        out.graph = self.graph.with_alpha1(alpha1)?;
        Ok(out)
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    graph: RawGraph,
    simulation: RawSimulation,
    initial: RawInitial,
    boundary: RawBoundary,
    #[serde(default)]
    output: RawOutput,
    sweep: Option<SweepSpec>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGraph {
    dx: f64,
    bond: Vec<RawBond>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBond {
    alpha: f64,
    length: Option<f64>,
    end_mode: Option<EndMode>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSimulation {
    mass: f64,
    dt: f64,
    t_final: Option<f64>,
    steps: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInitial {
    x0: f64,
    sigma: f64,
    bond: Option<usize>,
    normalize: Option<bool>,
    amplitude: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBoundary {
    vertex_mode: VertexModeName,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    sample_every: Option<usize>,
    snapshot_times: Option<Vec<f64>>,
    dir: Option<PathBuf>,
}

fn invalid(field: &str, reason: impl Into<String>) -> ConfigError {
    ConfigError::Invalid { field: field.to_string(), reason: reason.into() }
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rfind('\n').map_or(before.len(), |p| before.len() - p - 1) + 1;
    (line, column)
}

fn parse_error(origin: &str, text: &str, err: toml::de::Error) -> ConfigError {
    let (line, column) = err.span().map_or((0, 0), |s| line_col(text, s.start));
    ConfigError::Parse { path: origin.to_string(), line, column, message: err.message().trim().to_string() }
}

fn missing_keys(table: &toml::Table) -> Vec<String> {
    let mut missing = Vec::new();
    for key in REQUIRED_KEYS {
        let (section, name) = key.split_once('.').expect("dotted key");
        let sec = table.get(section).and_then(toml::Value::as_table);
        let present = match (sec, name) {
            (Some(s), "t_final") => s.contains_key("t_final") || s.contains_key("steps"),
            (Some(s), n) => s.contains_key(n),
            (None, _) => false,
        };
        if !present {
            missing.push(if name == "t_final" { "simulation.t_final (or simulation.steps)".into() } else { key.to_string() });
        }
    }
    if let Some(bonds) = table.get("graph").and_then(|g| g.get("bond")).and_then(toml::Value::as_array) {
        for (i, b) in bonds.iter().enumerate() {
            if b.get("alpha").is_none() {
                missing.push(format!("graph.bond[{}].alpha", i + 1));
            }
        }
    }
    missing
}

/// Parses and validates config text. `origin` names the source in errors.
pub fn parse_config(text: &str, origin: &str) -> Result<ExperimentConfig, ConfigError> {
    let table: toml::Table = toml::from_str(text).map_err(|e| parse_error(origin, text, e))?;
    let missing = missing_keys(&table);
    if !missing.is_empty() {
        return Err(ConfigError::MissingKeys { path: origin.to_string(), keys: missing });
    }
    let raw: RawConfig = toml::from_str(text).map_err(|e| parse_error(origin, text, e))?;
    validate(raw)
}

pub fn load_config(path: impl AsRef<Path>) -> Result<ExperimentConfig, ConfigError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read { path: path.to_path_buf(), source })?;
    parse_config(&text, &path.display().to_string())
}

fn validate(raw: RawConfig) -> Result<ExperimentConfig, ConfigError> {
    let dx = raw.graph.dx;
    let specs: Vec<BondSpec> = raw
        .graph
        .bond
        .iter()
        .map(|b| BondSpec::new(b.alpha, b.length.unwrap_or(DEFAULT_BOND_LENGTH), dx))
        .collect();
    let graph = build_star_graph(&specs)?;
    let ends: Vec<EndMode> = raw.graph.bond.iter().map(|b| b.end_mode.unwrap_or(EndMode::Dirichlet)).collect();

    let sim = raw.simulation;
    let n_steps = match (sim.t_final, sim.steps) {
        (Some(_), Some(_)) => return Err(invalid("simulation.steps", "give either t_final or steps, not both")),
        (None, Some(steps)) => steps,
        (Some(t), None) => {
            if !(t.is_finite() && t >= 0.0) {
                return Err(invalid("simulation.t_final", format!("must be >= 0, got {t}")));
            }
            let steps = (t / sim.dt).round();
            if (steps * sim.dt - t).abs() > 1e-9 * t.max(1.0) {
                return Err(invalid("simulation.t_final", format!("{t} is not a whole number of steps of {}", sim.dt)));
            }
            steps as usize
        }
        (None, None) => unreachable!("checked by missing_keys"),
    };
    let params = SimParams { mass: sim.mass, dt: sim.dt, dx, n_steps };
    params.validate().map_err(|e| invalid("simulation.dt", e.to_string()))?;

    let bond = raw.initial.bond.unwrap_or(1);
    if bond == 0 || bond > graph.len() {
        return Err(invalid("initial.bond", format!("must be in 1..={}, got {bond}", graph.len())));
    }
    if raw.boundary.vertex_mode == VertexModeName::Transparent && bond != 1 {
        return Err(invalid("initial.bond", "the transparent vertex mode simulates bond 1 only"));
    }
    let packet = GaussianPacket {
        x0: raw.initial.x0,
        sigma: raw.initial.sigma,
        bond: bond - 1,
        normalize: raw.initial.normalize.unwrap_or(true),
        amplitude: raw.initial.amplitude.unwrap_or(1.0),
    };
    if !packet.amplitude.is_finite() {
        return Err(invalid("initial.amplitude", "must be finite"));
    }
    gaussian_spinor(packet.x0, packet.sigma, graph.bond(packet.bond)).map_err(|e| invalid("initial", e.to_string()))?;

    let sample_every = raw.output.sample_every.unwrap_or(DEFAULT_SAMPLE_EVERY);
    if sample_every == 0 {
        return Err(invalid("output.sample_every", "must be >= 1"));
    }
    let t_final = n_steps as f64 * params.dt;
    let snapshot_times = raw.output.snapshot_times.unwrap_or_default();
    for &t in &snapshot_times {
        if !(t >= 0.0 && t <= t_final * (1.0 + 1e-12)) {
            return Err(invalid("output.snapshot_times", format!("{t} lies outside [0, {t_final}]")));
        }
    }
    if let Some(sweep) = &raw.sweep {
        sweep.validate()?;
    }

    Ok(ExperimentConfig {
        graph,
        ends,
        params,
        packet,
        vertex_mode: raw.boundary.vertex_mode,
        sample_every,
        snapshot_times,
        sweep: raw.sweep,
        output_dir: raw.output.dir,
    })
}
