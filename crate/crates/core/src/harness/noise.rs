//! Measurement-noise models applied additively to the measured attitude.
//!
//! Noise is sampled once per integration step and held for the step. The
//! generator is ChaCha8 seeded from the scenario seed, so every run of a
//! scenario reproduces the same noise sequence on any platform.

use crate::linalg::{Mat2, Mat3};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

/// Additive measurement-noise specification.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NoiseSpec {
    /// Exact measurements.
    None,
    /// Sampled band-limited white noise: each matrix entry receives an
    /// independent Gaussian draw with variance `power / dt`, redrawn every
    /// step and held for the step.
    GaussianPerStep { power: f64 },
    /// The same scalar `amplitude * sin(frequency * t)` added to every entry.
    Sinusoid { amplitude: f64, frequency: f64 },
}

impl NoiseSpec {
    /// Field-level validation; returns `(field, message)` on failure.
    pub fn validate(&self) -> Result<(), (&'static str, String)> {
        match self {
            NoiseSpec::None => Ok(()),
            NoiseSpec::GaussianPerStep { power } => {
                if !(power.is_finite() && *power >= 0.0) {
                    Err(("noise.power", format!("must be finite and >= 0, got {power}")))
                } else {
                    Ok(())
                }
            }
            NoiseSpec::Sinusoid { amplitude, frequency } => {
                if !(amplitude.is_finite() && *amplitude >= 0.0) {
                    Err(("noise.amplitude", format!("must be finite and >= 0, got {amplitude}")))
                } else if !frequency.is_finite() {
                    Err(("noise.frequency", format!("must be finite, got {frequency}")))
                } else {
                    Ok(())
                }
            }
        }
    }
}

/// Step-synchronous noise source bound to a seed and step size.
#[derive(Debug, Clone)]
pub struct NoiseSampler {
    spec: NoiseSpec,
    rng: ChaCha8Rng,
    /// Per-entry standard deviation for the Gaussian model: `sqrt(power/dt)`.
    sigma: f64,
}

impl NoiseSampler {
    pub fn new(spec: NoiseSpec, seed: u64, dt: f64) -> Self {
        let sigma = match spec {
            NoiseSpec::GaussianPerStep { power } => (power / dt).sqrt(),
            _ => 0.0,
        };
        Self { spec, rng: ChaCha8Rng::seed_from_u64(seed), sigma }
    }

    fn scalar(&mut self, t: f64) -> Option<f64> {
        match self.spec {
            NoiseSpec::None => None,
            NoiseSpec::GaussianPerStep { .. } => None,
            NoiseSpec::Sinusoid { amplitude, frequency } => {
                if amplitude == 0.0 {
                    None
                } else {
                    Some(amplitude * (frequency * t).sin())
                }
            }
        }
    }

    fn gaussian_entry(&mut self) -> f64 {
        let n: f64 = StandardNormal.sample(&mut self.rng);
        self.sigma * n
    }

    /// Additive noise matrix for the measurement taken at time `t`.
    pub fn sample_mat3(&mut self, t: f64) -> Mat3 {
        match self.spec {
            NoiseSpec::GaussianPerStep { .. } if self.sigma > 0.0 => {
                let mut m = Mat3::zeros();
                // Row-major draw order, part of the reproducibility contract.
                for i in 0..3 {
                    for j in 0..3 {
                        m[(i, j)] = self.gaussian_entry();
                    }
                }
                m
            }
            _ => match self.scalar(t) {
                Some(s) => Mat3::from_element(s),
                None => Mat3::zeros(),
            },
        }
    }

    pub fn sample_mat2(&mut self, t: f64) -> Mat2 {
        match self.spec {
            NoiseSpec::GaussianPerStep { .. } if self.sigma > 0.0 => {
                let mut m = Mat2::zeros();
                for i in 0..2 {
                    for j in 0..2 {
                        m[(i, j)] = self.gaussian_entry();
                    }
                }
                m
            }
            _ => match self.scalar(t) {
                Some(s) => Mat2::from_element(s),
                None => Mat2::zeros(),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_variance_matches_power_over_dt() {
        let power = 1e-5;
        let dt = 1e-3;
        let mut sampler = NoiseSampler::new(NoiseSpec::GaussianPerStep { power }, 1, dt);
        let n = 1_000_000 / 9;
        let mut sum = 0.0;
        let mut sum_sq = 0.0;
        let mut count = 0usize;
        for _ in 0..n {
            let m = sampler.sample_mat3(0.0);
            for x in m.iter() {
                sum += x;
                sum_sq += x * x;
                count += 1;
            }
        }
        let mean = sum / count as f64;
        let var = sum_sq / count as f64 - mean * mean;
        let target = power / dt;
        assert!(
            (var - target).abs() <= 0.02 * target,
            "empirical variance {var:.4e} vs target {target:.4e}"
        );
    }

    #[test]
    fn same_seed_reproduces_sequence() {
        let spec = NoiseSpec::GaussianPerStep { power: 1e-4 };
        let mut a = NoiseSampler::new(spec, 99, 1e-3);
        let mut b = NoiseSampler::new(spec, 99, 1e-3);
        for k in 0..100 {
            let t = k as f64 * 1e-3;
            assert_eq!(a.sample_mat3(t), b.sample_mat3(t));
        }
    }

    #[test]
    fn zero_power_equals_no_noise() {
        let mut zero = NoiseSampler::new(NoiseSpec::GaussianPerStep { power: 0.0 }, 7, 1e-3);
        let mut none = NoiseSampler::new(NoiseSpec::None, 7, 1e-3);
        for k in 0..10 {
            let t = k as f64 * 1e-3;
            assert_eq!(zero.sample_mat3(t), none.sample_mat3(t));
            assert_eq!(zero.sample_mat2(t), none.sample_mat2(t));
        }
    }

    #[test]
    fn sinusoid_is_rank_one_constant_entry() {
        let mut s =
            NoiseSampler::new(NoiseSpec::Sinusoid { amplitude: 0.1, frequency: 1e4 }, 0, 1e-3);
        let t = 0.4567;
        let m = s.sample_mat3(t);
        let expected = 0.1 * (1e4 * t).sin();
        assert!(m.iter().all(|x| *x == expected));
    }
}
