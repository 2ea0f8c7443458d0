//! Reference solutions computed independently of the library.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// `I₀(z) = Σ (z²/4)^k / (k!)²` summed in exact rational arithmetic on the
/// binary value of `z`. Stops once the tail bound `t_{k+1}/(1 − r)`, with
/// `r = (z²/4)/(k+2)²`, is below `2⁻¹⁰⁰` of the partial sum.
pub fn bessel_series_reference(z: f64, max_terms: usize) -> Result<f64, String> {
    let z = BigRational::from_float(z).ok_or("non-finite argument")?;
    let q = &z * &z / BigRational::from_integer(BigInt::from(4));
    let tolerance = BigRational::new(BigInt::one(), BigInt::one() << 100u32);
    let mut term = BigRational::one();
    let mut sum = BigRational::zero();
    for k in 0..max_terms {
        sum += &term;
        let next_k = BigRational::from_integer(BigInt::from(k + 1));
        term = term * &q / (&next_k * &next_k);
        let after = BigRational::from_integer(BigInt::from(k + 2));
        let after_sq = &after * &after;
        if after_sq > q {
            let bound = &term * &after_sq / (&after_sq - &q);
            if bound < &sum * &tolerance {
                return sum.to_f64().ok_or_else(|| "sum overflows f64".to_string());
            }
        }
    }
    Err(format!("series did not converge within {max_terms} terms"))
}

/// Whole-line solution of `∂ₜφ = −∂ₓχ − i m φ`, `∂ₜχ = −∂ₓφ + i m χ` for the
/// initial data `G(x)(1, 1)` with `G(x) = (2πσ²)^{-1/4} exp(−(x−x₀)²/(4σ²))`.
///
/// In Fourier space the system is `∂ₜψ̂ = −iHψ̂` with `H = [[m, k], [k, −m]]`,
/// so `ψ̂(t) = (cos Et − i sin Et H/E) ψ̂(0)` with `E = √(k² + m²)`. The
/// inverse transform is a trapezoid sum over `k`, which converges
/// spectrally for the Gaussian spectrum.
pub fn free_line_solution(x: f64, t: f64, mass: f64, x0: f64, sigma: f64) -> (Complex64, Complex64) {
    let k_max = 7.0 / sigma;
    let dk = 0.01;
    let count = (2.0 * k_max / dk).ceil() as usize;
    let amp = (2.0 * std::f64::consts::PI * sigma * sigma).powf(-0.25) * (4.0 * std::f64::consts::PI).sqrt() * sigma;
    let mut phi = Complex64::new(0.0, 0.0);
    let mut chi = Complex64::new(0.0, 0.0);
    for i in 0..=count {
        let k = -k_max + i as f64 * dk;
        let spectrum = amp * (-sigma * sigma * k * k).exp();
        let wave = Complex64::from_polar(spectrum, k * (x - x0));
        let e = (k * k + mass * mass).sqrt();
        let (s, c) = (e * t).sin_cos();
        let sin_over_e = if e > 0.0 { s / e } else { t };
        phi += wave * Complex64::new(c, -sin_over_e * (mass + k));
        chi += wave * Complex64::new(c, -sin_over_e * (k - mass));
    }
    let scale = dk / (2.0 * std::f64::consts::PI);
    (phi * scale, chi * scale)
}

/// Massless exact solution `φ = R(x−t) + L(x+t)`, `χ = R(x−t) − L(x+t)` for
/// initial data `(φ, χ) = (R + L, R − L)`.
pub fn dalembert(right: impl Fn(f64) -> f64, left: impl Fn(f64) -> f64, x: f64, t: f64) -> (f64, f64) {
    let r = right(x - t);
    let l = left(x + t);
    (r + l, r - l)
}

/// Plain staggered leap-frog on a single interval with `φ = 0` at both
/// ends. `phi` has one more entry than `chi`.
pub fn line_leapfrog(phi: &mut [Complex64], chi: &mut [Complex64], mass: f64, dt: f64, dx: f64, steps: usize) {
    let a = Complex64::new(1.0, 0.5 * mass * dt);
    let p = a.conj() / a;
    let q = (dt / dx) / a;
    let (pc, qc) = (p.conj(), q.conj());
    let last = phi.len() - 1;
    for _ in 0..steps {
        for j in 1..last {
            phi[j] = p * phi[j] - q * (chi[j] - chi[j - 1]);
        }
        phi[0] = Complex64::new(0.0, 0.0);
        phi[last] = Complex64::new(0.0, 0.0);
        for c in 0..chi.len() {
            chi[c] = pc * chi[c] - qc * (phi[c + 1] - phi[c]);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn series_reference_small_argument() {
        assert_eq!(bessel_series_reference(0.0, 10).unwrap(), 1.0);
        assert!(bessel_series_reference(30.0, 5).is_err());
    }

    #[test]
    fn massless_fourier_solution_translates() {
        let g = |x: f64| (2.0 * std::f64::consts::PI * 0.25f64).powf(-0.25) * (-(x + 1.0) * (x + 1.0) / 1.0).exp();
        for &x in &[-1.0, 0.3, 1.7, 2.0] {
            let (phi, chi) = free_line_solution(x, 1.5, 0.0, -1.0, 0.5);
            assert!((phi.re - g(x - 1.5)).abs() < 1e-12 && phi.im.abs() < 1e-12);
            assert!((chi.re - g(x - 1.5)).abs() < 1e-12 && chi.im.abs() < 1e-12);
        }
    }
}
