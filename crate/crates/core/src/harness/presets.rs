//! Named preset scenarios.
//!
//! The `wu-so3-*` family shares one rigid body — inertia diag(5, 1, 2),
//! initial attitude a quarter-pi rotation about the first axis, initial
//! speed (1, -1.5, 2.5) — and varies the observer gains:
//!
//! - `wu-so3-K1`: K = 100 J0, gamma = 20
//! - `wu-so3-K2`: K = 10 J0,  gamma = 20
//! - `wu-so3-K3`: K = 30 J0,  gamma = 20
//! - `wu-so3-K4a`: K = 5 I,   gamma = 20
//! - `wu-so3-K4b`: K = 100 J0, gamma = 1000
//! - `wu-so3-noisy`: the K1 tuning with per-step Gaussian measurement noise
//!   of power 1e-5 and a 20 s horizon so every comparison tuning is past its
//!   transient.
//!
//! The SO(2) presets spin at 10 rad/s from theta = pi/2 with gamma = 40,
//! kappa = 200; `so2-noisy` adds the high-frequency sinusoidal measurement
//! noise `0.1 sin(1e4 t)`.

use super::noise::NoiseSpec;
use super::scenario::{GainsConfigSo2, GainsConfigSo3, Scenario, ScenarioSo2, ScenarioSo3, TorqueConfig};
use super::HarnessError;
use crate::integrate::IntegratorConfig;
use crate::linalg::{so3_exp, Mat2, Mat3, Vec3};
use crate::so3::MatrixGain;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

pub const PRESET_NAMES: &[&str] = &[
    "wu-so3-K1",
    "wu-so3-K2",
    "wu-so3-K3",
    "wu-so3-K4a",
    "wu-so3-K4b",
    "wu-so3-noisy",
    "so2-demo",
    "so2-noisy",
];

const DEFAULT_SEED: u64 = 42;

fn wu_body() -> (Mat3, Mat3, Vec3) {
    let j0 = Mat3::from_diagonal(&Vec3::new(5.0, 1.0, 2.0));
    let r0 = so3_exp(&Vec3::new(FRAC_PI_4, 0.0, 0.0)).into_matrix();
    let omega0 = Vec3::new(1.0, -1.5, 2.5);
    // q(0) = R0 J0 R0^T w(0): the momentum matching the initial speed.
    let q0 = r0 * j0 * r0.transpose() * omega0;
    (j0, r0, q0)
}

fn wu_scenario(k: Mat3, gamma: f64, noise: NoiseSpec, horizon: f64) -> ScenarioSo3 {
    let (j0, r0, q0) = wu_body();
    ScenarioSo3 {
        inertia: j0,
        attitude0: r0,
        momentum0: q0,
        matrix_estimate0: r0,
        momentum_estimate0: Vec3::zeros(),
        gains: GainsConfigSo3 { k, gamma: MatrixGain::Scalar(gamma) },
        torque: TorqueConfig::Zero,
        noise,
        integrator: IntegratorConfig::default(),
        horizon,
        seed: DEFAULT_SEED,
    }
}

fn so2_scenario(noise: NoiseSpec) -> ScenarioSo2 {
    ScenarioSo2 {
        inertia: 1.0,
        theta0: FRAC_PI_2,
        omega0: 10.0,
        matrix_estimate0: Mat2::identity(),
        speed_estimate0: 0.0,
        gains: GainsConfigSo2 { gamma: 40.0, kappa: 200.0 },
        torque: TorqueConfig::Zero,
        noise,
        integrator: IntegratorConfig::default(),
        horizon: 5.0,
        seed: DEFAULT_SEED,
    }
}

/// Looks up a preset scenario by name.
pub fn preset(name: &str) -> Result<Scenario, HarnessError> {
    let (j0, _, _) = wu_body();
    let scenario = match name {
        "wu-so3-K1" => Scenario::So3(wu_scenario(100.0 * j0, 20.0, NoiseSpec::None, 5.0)),
        "wu-so3-K2" => Scenario::So3(wu_scenario(10.0 * j0, 20.0, NoiseSpec::None, 5.0)),
        "wu-so3-K3" => Scenario::So3(wu_scenario(30.0 * j0, 20.0, NoiseSpec::None, 5.0)),
        "wu-so3-K4a" => Scenario::So3(wu_scenario(5.0 * Mat3::identity(), 20.0, NoiseSpec::None, 5.0)),
        "wu-so3-K4b" => Scenario::So3(wu_scenario(100.0 * j0, 1000.0, NoiseSpec::None, 5.0)),
        "wu-so3-noisy" => Scenario::So3(wu_scenario(
            100.0 * j0,
            20.0,
            NoiseSpec::GaussianPerStep { power: 1e-5 },
            20.0,
        )),
        "so2-demo" => Scenario::So2(so2_scenario(NoiseSpec::None)),
        "so2-noisy" => {
            Scenario::So2(so2_scenario(NoiseSpec::Sinusoid { amplitude: 0.1, frequency: 1e4 }))
        }
        other => return Err(HarnessError::UnknownPreset(other.to_string())),
    };
    Ok(scenario)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn k1_preset_fields() {
        let s = preset("wu-so3-K1").unwrap();
        let Scenario::So3(s) = s else { panic!("expected so3") };
        assert_eq!(s.inertia, Mat3::from_diagonal(&Vec3::new(5.0, 1.0, 2.0)));
        assert_eq!(s.gains.k, 100.0 * s.inertia);
        assert_eq!(s.gains.gamma, MatrixGain::Scalar(20.0));
        assert_eq!(s.momentum_estimate0, Vec3::zeros());
        assert_eq!(s.matrix_estimate0, s.attitude0);
        // Initial speed recovered from the stored momentum.
        let r0 = s.attitude0;
        let w0 = r0 * s.inertia.try_inverse().unwrap() * r0.transpose() * s.momentum0;
        assert_relative_eq!(w0, Vec3::new(1.0, -1.5, 2.5), epsilon = 1e-12);
    }

    #[test]
    fn so2_demo_fields() {
        let s = preset("so2-demo").unwrap();
        let Scenario::So2(s) = s else { panic!("expected so2") };
        assert_eq!(s.gains.gamma, 40.0);
        assert_eq!(s.gains.kappa, 200.0);
        assert_eq!(s.omega0, 10.0);
        assert_eq!(s.theta0, FRAC_PI_2);
        assert_eq!(s.matrix_estimate0, Mat2::identity());
    }

    #[test]
    fn unknown_preset_rejected() {
        assert!(matches!(preset("nonexistent"), Err(HarnessError::UnknownPreset(_))));
    }

    #[test]
    fn all_presets_validate() {
        for name in PRESET_NAMES {
            preset(name).unwrap().validate().unwrap();
        }
    }
}
