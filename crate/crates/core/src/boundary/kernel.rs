use crate::bessel::bessel_i0;
use crate::error::BoundaryError;

/// Precomputed samples `I₀(m·kΔt)` of the transparent-boundary memory kernel.
#[derive(Clone, Debug, PartialEq)]
pub struct BesselKernel {
    mass: f64,
    dt: f64,
    samples: Vec<f64>,
}

impl BesselKernel {
    /// Samples for `k = 0..=n_steps + 1`, enough for a run of `n_steps`.
    pub fn new(mass: f64, dt: f64, n_steps: usize) -> Result<Self, BoundaryError> {
        let samples = (0..=n_steps + 1)
            .map(|k| bessel_i0(mass * k as f64 * dt))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self { mass, dt, samples })
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    /// `I₀(m·kΔt)`; evaluated on demand past the precomputed range.
    pub fn get(&self, k: usize) -> f64 {
        match self.samples.get(k) {
            Some(&v) => v,
            // Argument is non-negative by construction.
            None => bessel_i0(self.mass * k as f64 * self.dt).unwrap_or(f64::INFINITY),
        }
    }
}
