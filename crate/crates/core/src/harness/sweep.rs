//! One-dimensional parameter sweeps over a base scenario.
//!
//! Supported parameter paths:
//!
//! | path | modes | effect |
//! |------|-------|--------|
//! | `gains.gamma` | so3 (scalar gamma), so2 | sets the matrix-correction gain |
//! | `gains.kappa` | so2 | sets the speed-correction gain |
//! | `gains.k_scale_j0` | so3 | sets `K = value * J0` |
//! | `gains.k_scale_identity` | so3 | sets `K = value * I` |
//! | `noise.power` | gaussian noise | sets the per-step noise power |
//! | `noise.amplitude` | sinusoidal noise | sets the noise amplitude |
//! | `noise.frequency` | sinusoidal noise | sets the noise frequency |
//! | `integrator.dt` | both | sets the step size |
//! | `horizon` | both | sets the simulation horizon |
//!
//! Every row reuses the base scenario's seed, so rows differ only in the
//! swept parameter.

use super::metrics::Metrics;
use super::noise::NoiseSpec;
use super::scenario::Scenario;
use super::HarnessError;
use crate::linalg::Mat3;
use crate::so3::MatrixGain;

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub value: f64,
    pub metrics: Metrics,
}

fn unknown(path: &str, detail: &str) -> HarnessError {
    HarnessError::UnknownParameter(format!("{path} ({detail})"))
}

/// Sets one scenario field addressed by a parameter path.
pub fn apply_parameter(scenario: &mut Scenario, path: &str, value: f64) -> Result<(), HarnessError> {
    match path {
        "gains.gamma" => match scenario {
            Scenario::So3(s) => {
                s.gains.gamma = MatrixGain::Scalar(value);
                Ok(())
            }
            Scenario::So2(s) => {
                s.gains.gamma = value;
                Ok(())
            }
        },
        "gains.kappa" => match scenario {
            Scenario::So2(s) => {
                s.gains.kappa = value;
                Ok(())
            }
            Scenario::So3(_) => Err(unknown(path, "only defined in so2 mode")),
        },
        "gains.k_scale_j0" => match scenario {
            Scenario::So3(s) => {
                s.gains.k = value * s.inertia;
                Ok(())
            }
            Scenario::So2(_) => Err(unknown(path, "only defined in so3 mode")),
        },
        "gains.k_scale_identity" => match scenario {
            Scenario::So3(s) => {
                s.gains.k = value * Mat3::identity();
                Ok(())
            }
            Scenario::So2(_) => Err(unknown(path, "only defined in so3 mode")),
        },
        "noise.power" => {
            let noise = match scenario {
                Scenario::So3(s) => &mut s.noise,
                Scenario::So2(s) => &mut s.noise,
            };
            match noise {
                NoiseSpec::GaussianPerStep { power } => {
                    *power = value;
                    Ok(())
                }
                _ => Err(unknown(path, "noise kind is not gaussian_per_step")),
            }
        }
        "noise.amplitude" => {
            let noise = match scenario {
                Scenario::So3(s) => &mut s.noise,
                Scenario::So2(s) => &mut s.noise,
            };
            match noise {
                NoiseSpec::Sinusoid { amplitude, .. } => {
                    *amplitude = value;
                    Ok(())
                }
                _ => Err(unknown(path, "noise kind is not sinusoid")),
            }
        }
        "noise.frequency" => {
            let noise = match scenario {
                Scenario::So3(s) => &mut s.noise,
                Scenario::So2(s) => &mut s.noise,
            };
            match noise {
                NoiseSpec::Sinusoid { frequency, .. } => {
                    *frequency = value;
                    Ok(())
                }
                _ => Err(unknown(path, "noise kind is not sinusoid")),
            }
        }
        "integrator.dt" => {
            match scenario {
                Scenario::So3(s) => s.integrator.dt = value,
                Scenario::So2(s) => s.integrator.dt = value,
            }
            Ok(())
        }
        "horizon" => {
            scenario.set_horizon(value);
            Ok(())
        }
        other => Err(HarnessError::UnknownParameter(other.to_string())),
    }
}

/// Runs the base scenario once per value with the parameter substituted,
/// returning one metrics row per value in input order.
pub fn sweep(base: &Scenario, path: &str, values: &[f64]) -> Result<Vec<SweepRow>, HarnessError> {
    let mut rows = Vec::with_capacity(values.len());
    for &value in values {
        let mut scenario = base.clone();
        apply_parameter(&mut scenario, path, value)?;
        let (_, metrics) = super::run(&scenario)?;
        rows.push(SweepRow { value, metrics });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::presets::preset;
    use crate::harness::run;

    #[test]
    fn unknown_parameter_rejected() {
        let mut s = preset("wu-so3-K1").unwrap();
        assert!(matches!(
            apply_parameter(&mut s, "gains.bogus", 1.0),
            Err(HarnessError::UnknownParameter(_))
        ));
        assert!(matches!(
            apply_parameter(&mut s, "gains.kappa", 1.0),
            Err(HarnessError::UnknownParameter(_))
        ));
    }

    #[test]
    fn single_value_sweep_equals_run() {
        let mut base = preset("so2-demo").unwrap();
        base.set_horizon(1.0);
        let rows = sweep(&base, "gains.gamma", &[40.0]).unwrap();
        assert_eq!(rows.len(), 1);
        let (_, metrics) = run(&base).unwrap();
        assert_eq!(rows[0].metrics, metrics);
    }

    #[test]
    fn k_scale_sets_gain_matrix() {
        let mut s = preset("wu-so3-K1").unwrap();
        apply_parameter(&mut s, "gains.k_scale_j0", 10.0).unwrap();
        let Scenario::So3(inner) = &s else { panic!() };
        assert_eq!(inner.gains.k, 10.0 * inner.inertia);
        apply_parameter(&mut s, "gains.k_scale_identity", 5.0).unwrap();
        let Scenario::So3(inner) = &s else { panic!() };
        assert_eq!(inner.gains.k, 5.0 * Mat3::identity());
    }
}
