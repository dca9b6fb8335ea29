//! Experiment harness: scenario descriptions, noise models, presets,
//! trajectory records, metrics, CSV output, and parameter sweeps.

pub mod csv;
pub mod metrics;
pub mod noise;
pub mod presets;
pub mod scenario;
pub mod sweep;
pub mod trajectory;

pub use csv::{csv_bytes, write_csv, write_csv_file, write_sweep_csv, write_sweep_csv_file};
pub use metrics::{compare_convergence, Metrics};
pub use noise::{NoiseSampler, NoiseSpec};
pub use presets::{preset, PRESET_NAMES};
pub use scenario::{Ready, Scenario, ScenarioSo2, ScenarioSo3};
pub use sweep::{apply_parameter, sweep, SweepRow};
pub use trajectory::{Trajectory, TrajectorySo2, TrajectorySo3};

use crate::integrate::{self, IntegrateError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid scenario: {field}: {message}")]
    Validation { field: String, message: String },
    #[error("config parse error: {0}")]
    Parse(String),
    #[error("unknown preset `{0}` (known: wu-so3-K1, wu-so3-K2, wu-so3-K3, wu-so3-K4a, wu-so3-K4b, wu-so3-noisy, so2-demo, so2-noisy)")]
    UnknownPreset(String),
    #[error("unknown sweep parameter `{0}`")]
    UnknownParameter(String),
    #[error(transparent)]
    Integrate(#[from] IntegrateError),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

/// Validates and simulates a scenario, returning the sampled trajectory and
/// its metrics. Deterministic for a fixed seed.
pub fn run(scenario: &Scenario) -> Result<(Trajectory, Metrics), HarnessError> {
    let trajectory = match scenario.validate()? {
        Ready::So3(r) => {
            let mut noise = NoiseSampler::new(r.noise, r.seed, r.integrator.dt);
            Trajectory::So3(integrate::co_simulate_so3(
                &r.plant0,
                &r.observer0,
                &r.gains,
                &r.inertia,
                &r.torque,
                &mut noise,
                &r.integrator,
                r.horizon,
            )?)
        }
        Ready::So2(r) => {
            let mut noise = NoiseSampler::new(r.noise, r.seed, r.integrator.dt);
            Trajectory::So2(integrate::co_simulate_so2(
                &r.plant0,
                &r.observer0,
                &r.gains,
                r.inertia,
                &r.torque,
                &mut noise,
                &r.integrator,
                r.horizon,
            )?)
        }
    };
    let threshold = Metrics::default_threshold(&trajectory);
    let window = metrics::DEFAULT_WINDOW.min(scenario.horizon());
    let metrics = Metrics::from_trajectory(&trajectory, threshold, window);
    Ok((trajectory, metrics))
}
