//! Scenario definitions: the JSON-facing experiment description and its
//! validation into typed model objects.
//!
//! A scenario document is a single JSON object whose `mode` key selects the
//! SO(3) or SO(2) variant; the remaining keys mirror the scenario fields
//! one-for-one. Matrices are row-major nested arrays. Unknown keys are
//! rejected, and every invariant is re-validated after parsing.

use super::noise::NoiseSpec;
use super::HarnessError;
use crate::integrate::IntegratorConfig;
use crate::linalg::{Mat2, Mat3, RotationMatrix3, Vec3};
use crate::so2;
use crate::so3;
use crate::torque::{TorqueKind, TorqueProfile};
use serde::{Deserialize, Serialize};

/// Serde helpers: 3x3 matrices as row-major `[[f64; 3]; 3]`.
pub(crate) mod mat3_rows {
    use super::Mat3;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(m: &Mat3, s: S) -> Result<S::Ok, S::Error> {
        let rows: [[f64; 3]; 3] = [
            [m[(0, 0)], m[(0, 1)], m[(0, 2)]],
            [m[(1, 0)], m[(1, 1)], m[(1, 2)]],
            [m[(2, 0)], m[(2, 1)], m[(2, 2)]],
        ];
        rows.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Mat3, D::Error> {
        let rows = <[[f64; 3]; 3]>::deserialize(d)?;
        Ok(Mat3::from_fn(|i, j| rows[i][j]))
    }
}

/// Serde helpers: 2x2 matrices as row-major `[[f64; 2]; 2]`.
pub(crate) mod mat2_rows {
    use super::Mat2;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(m: &Mat2, s: S) -> Result<S::Ok, S::Error> {
        let rows: [[f64; 2]; 2] = [[m[(0, 0)], m[(0, 1)]], [m[(1, 0)], m[(1, 1)]]];
        rows.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Mat2, D::Error> {
        let rows = <[[f64; 2]; 2]>::deserialize(d)?;
        Ok(Mat2::from_fn(|i, j| rows[i][j]))
    }
}

/// Serde helpers: 3-vectors as `[f64; 3]`.
pub(crate) mod vec3_arr {
    use super::Vec3;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &Vec3, s: S) -> Result<S::Ok, S::Error> {
        [v.x, v.y, v.z].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec3, D::Error> {
        let a = <[f64; 3]>::deserialize(d)?;
        Ok(Vec3::new(a[0], a[1], a[2]))
    }
}

/// Torque signal description as it appears in a config document. Declared
/// bounds are optional; omitted bounds default to the tightest bounds the
/// signal satisfies.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TorqueConfig<V> {
    Zero,
    Constant {
        value: V,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        k_u_radius: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        m: Option<f64>,
    },
    Sinusoid {
        amplitude: V,
        frequency: f64,
        #[serde(default)]
        phase: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        k_u_radius: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        m: Option<f64>,
    },
}

impl<V> Default for TorqueConfig<V> {
    fn default() -> Self {
        TorqueConfig::Zero
    }
}

fn build_torque<V, W>(
    config: &TorqueConfig<V>,
    convert: impl Fn(&V) -> W,
) -> Result<TorqueProfile<W>, HarnessError>
where
    W: crate::torque::TorqueValue,
{
    let (kind, declared) = match config {
        TorqueConfig::Zero => (TorqueKind::Zero, None),
        TorqueConfig::Constant { value, k_u_radius, m } => {
            (TorqueKind::Constant(convert(value)), Some((*k_u_radius, *m)))
        }
        TorqueConfig::Sinusoid { amplitude, frequency, phase, k_u_radius, m } => (
            TorqueKind::Sinusoid { amplitude: convert(amplitude), frequency: *frequency, phase: *phase },
            Some((*k_u_radius, *m)),
        ),
    };
    let tight = TorqueProfile::new(kind).map_err(|e| HarnessError::Validation {
        field: "torque".into(),
        message: e.to_string(),
    })?;
    match declared {
        None | Some((None, None)) => Ok(tight),
        Some((sup, rate)) => TorqueProfile::with_declared_bounds(
            kind,
            sup.unwrap_or_else(|| tight.sup_bound()),
            rate.unwrap_or_else(|| tight.rate_bound()),
        )
        .map_err(|e| {
            let field = match e {
                crate::torque::TorqueError::SupBoundViolated { .. } => "torque.k_u_radius",
                crate::torque::TorqueError::RateBoundViolated { .. } => "torque.m",
                crate::torque::TorqueError::NonFinite => "torque",
            };
            HarnessError::Validation { field: field.into(), message: e.to_string() }
        }),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GainsConfigSo3 {
    #[serde(with = "mat3_rows")]
    pub k: Mat3,
    pub gamma: so3::MatrixGain,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GainsConfigSo2 {
    pub gamma: f64,
    pub kappa: f64,
}

/// SO(3) experiment description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSo3 {
    /// Body inertia matrix, kg·m².
    #[serde(with = "mat3_rows")]
    pub inertia: Mat3,
    /// Initial plant attitude (must be a rotation matrix).
    #[serde(with = "mat3_rows")]
    pub attitude0: Mat3,
    /// Initial inertial angular momentum, N·m·s.
    #[serde(with = "vec3_arr")]
    pub momentum0: Vec3,
    /// Initial observer matrix state (any finite 3x3 matrix).
    #[serde(with = "mat3_rows")]
    pub matrix_estimate0: Mat3,
    #[serde(with = "vec3_arr")]
    pub momentum_estimate0: Vec3,
    pub gains: GainsConfigSo3,
    #[serde(default)]
    pub torque: TorqueConfig<[f64; 3]>,
    #[serde(default = "default_noise")]
    pub noise: NoiseSpec,
    #[serde(default)]
    pub integrator: IntegratorConfig,
    /// Simulation horizon, s.
    pub horizon: f64,
    #[serde(default)]
    pub seed: u64,
}

/// SO(2) experiment description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSo2 {
    /// Inertia about the spin axis, kg·m².
    pub inertia: f64,
    /// Initial wrapped angular position, rad in (-pi, pi].
    pub theta0: f64,
    /// Initial angular speed, rad/s.
    pub omega0: f64,
    #[serde(with = "mat2_rows")]
    pub matrix_estimate0: Mat2,
    pub speed_estimate0: f64,
    pub gains: GainsConfigSo2,
    #[serde(default)]
    pub torque: TorqueConfig<f64>,
    #[serde(default = "default_noise")]
    pub noise: NoiseSpec,
    #[serde(default)]
    pub integrator: IntegratorConfig,
    pub horizon: f64,
    #[serde(default)]
    pub seed: u64,
}

fn default_noise() -> NoiseSpec {
    NoiseSpec::None
}

/// A full experiment description in either mode.
#[derive(Debug, Clone, PartialEq)]
pub enum Scenario {
    So3(ScenarioSo3),
    So2(ScenarioSo2),
}

/// Validated, typed model objects ready to simulate.
pub struct ReadySo3 {
    pub plant0: so3::PlantState,
    pub observer0: so3::ObserverState,
    pub gains: so3::Gains,
    pub inertia: so3::Inertia,
    pub torque: TorqueProfile<Vec3>,
    pub noise: NoiseSpec,
    pub integrator: IntegratorConfig,
    pub horizon: f64,
    pub seed: u64,
}

pub struct ReadySo2 {
    pub plant0: so2::PlantState,
    pub observer0: so2::ObserverState,
    pub gains: so2::Gains,
    pub inertia: f64,
    pub torque: TorqueProfile<f64>,
    pub noise: NoiseSpec,
    pub integrator: IntegratorConfig,
    pub horizon: f64,
    pub seed: u64,
}

pub enum Ready {
    So3(Box<ReadySo3>),
    So2(Box<ReadySo2>),
}

fn invalid(field: &str, message: impl Into<String>) -> HarnessError {
    HarnessError::Validation { field: field.to_string(), message: message.into() }
}

fn check_common(integrator: &IntegratorConfig, horizon: f64, noise: &NoiseSpec) -> Result<(), HarnessError> {
    if !integrator.is_valid_dt() {
        return Err(invalid(
            "integrator.dt",
            format!("must satisfy 0 < dt <= 0.1, got {}", integrator.dt),
        ));
    }
    if !(horizon.is_finite() && horizon > 0.0) {
        return Err(invalid("horizon", format!("must be positive, got {horizon}")));
    }
    noise.validate().map_err(|(field, message)| invalid(field, message))
}

impl ScenarioSo3 {
    pub fn validate(&self) -> Result<ReadySo3, HarnessError> {
        check_common(&self.integrator, self.horizon, &self.noise)?;
        let inertia =
            so3::Inertia::new(self.inertia).map_err(|e| invalid("inertia", e.to_string()))?;
        let attitude = RotationMatrix3::from_matrix(self.attitude0)
            .map_err(|e| invalid("attitude0", e.to_string()))?;
        if !self.momentum0.iter().all(|x| x.is_finite()) {
            return Err(invalid("momentum0", "entries must be finite"));
        }
        if !self.matrix_estimate0.iter().all(|x| x.is_finite()) {
            return Err(invalid("matrix_estimate0", "entries must be finite"));
        }
        if !self.momentum_estimate0.iter().all(|x| x.is_finite()) {
            return Err(invalid("momentum_estimate0", "entries must be finite"));
        }
        let gains = so3::Gains::new(self.gains.k, self.gains.gamma).map_err(|e| {
            let field = match e {
                so3::So3Error::CorrectionGainNotPositive(_) => "gains.gamma",
                _ => "gains.k",
            };
            invalid(field, e.to_string())
        })?;
        let torque = build_torque(&self.torque, |a| Vec3::new(a[0], a[1], a[2]))?;
        Ok(ReadySo3 {
            plant0: so3::PlantState { attitude, momentum: self.momentum0 },
            observer0: so3::ObserverState {
                matrix_estimate: self.matrix_estimate0,
                momentum_estimate: self.momentum_estimate0,
            },
            gains,
            inertia,
            torque,
            noise: self.noise,
            integrator: self.integrator,
            horizon: self.horizon,
            seed: self.seed,
        })
    }
}

impl ScenarioSo2 {
    pub fn validate(&self) -> Result<ReadySo2, HarnessError> {
        check_common(&self.integrator, self.horizon, &self.noise)?;
        if !(self.inertia.is_finite() && self.inertia > 0.0) {
            return Err(invalid("inertia", format!("must be positive, got {}", self.inertia)));
        }
        let attitude = so2::from_wrapped_angle(self.theta0)
            .map_err(|e| invalid("theta0", e.to_string()))?;
        if !self.omega0.is_finite() {
            return Err(invalid("omega0", "must be finite"));
        }
        if !self.matrix_estimate0.iter().all(|x| x.is_finite()) {
            return Err(invalid("matrix_estimate0", "entries must be finite"));
        }
        if !self.speed_estimate0.is_finite() {
            return Err(invalid("speed_estimate0", "must be finite"));
        }
        let gains = so2::Gains::new(self.gains.gamma, self.gains.kappa).map_err(|e| {
            let field = if self.gains.gamma.is_finite() && self.gains.gamma > 0.0 {
                "gains.kappa"
            } else {
                "gains.gamma"
            };
            invalid(field, e.to_string())
        })?;
        let torque = build_torque(&self.torque, |a| *a)?;
        Ok(ReadySo2 {
            plant0: so2::PlantState { attitude, speed: self.omega0 },
            observer0: so2::ObserverState {
                matrix_estimate: self.matrix_estimate0,
                speed_estimate: self.speed_estimate0,
            },
            gains,
            inertia: self.inertia,
            torque,
            noise: self.noise,
            integrator: self.integrator,
            horizon: self.horizon,
            seed: self.seed,
        })
    }
}

impl Scenario {
    pub fn mode(&self) -> &'static str {
        match self {
            Scenario::So3(_) => "so3",
            Scenario::So2(_) => "so2",
        }
    }

    pub fn horizon(&self) -> f64 {
        match self {
            Scenario::So3(s) => s.horizon,
            Scenario::So2(s) => s.horizon,
        }
    }

    pub fn set_horizon(&mut self, horizon: f64) {
        match self {
            Scenario::So3(s) => s.horizon = horizon,
            Scenario::So2(s) => s.horizon = horizon,
        }
    }

    pub fn seed(&self) -> u64 {
        match self {
            Scenario::So3(s) => s.seed,
            Scenario::So2(s) => s.seed,
        }
    }

    pub fn set_seed(&mut self, seed: u64) {
        match self {
            Scenario::So3(s) => s.seed = seed,
            Scenario::So2(s) => s.seed = seed,
        }
    }

    pub fn validate(&self) -> Result<Ready, HarnessError> {
        match self {
            Scenario::So3(s) => Ok(Ready::So3(Box::new(s.validate()?))),
            Scenario::So2(s) => Ok(Ready::So2(Box::new(s.validate()?))),
        }
    }

    /// Parses a scenario from a JSON config document. The `mode` key selects
    /// the variant; all other keys are validated against that variant's
    /// schema with unknown keys rejected.
    pub fn from_json_str(text: &str) -> Result<Scenario, HarnessError> {
        let mut value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| HarnessError::Parse(e.to_string()))?;
        let obj = value
            .as_object_mut()
            .ok_or_else(|| HarnessError::Parse("config root must be a JSON object".into()))?;
        let mode = obj
            .remove("mode")
            .ok_or_else(|| HarnessError::Parse("missing field `mode`".into()))?;
        let mode = mode
            .as_str()
            .map(str::to_owned)
            .ok_or_else(|| HarnessError::Parse("`mode` must be a string".into()))?;
        match mode.as_str() {
            "so3" => serde_json::from_value::<ScenarioSo3>(value)
                .map(Scenario::So3)
                .map_err(|e| HarnessError::Parse(e.to_string())),
            "so2" => serde_json::from_value::<ScenarioSo2>(value)
                .map(Scenario::So2)
                .map_err(|e| HarnessError::Parse(e.to_string())),
            other => Err(HarnessError::Parse(format!("unknown mode `{other}`"))),
        }
    }

    /// Serializes the scenario to a pretty-printed JSON config document with
    /// the `mode` key first.
    pub fn to_json_string(&self) -> String {
        let (mode, mut value) = match self {
            Scenario::So3(s) => ("so3", serde_json::to_value(s).expect("scenario serializes")),
            Scenario::So2(s) => ("so2", serde_json::to_value(s).expect("scenario serializes")),
        };
        let obj = value.as_object_mut().expect("scenario is an object");
        let mut ordered = serde_json::Map::new();
        ordered.insert("mode".to_string(), serde_json::Value::String(mode.to_string()));
        for (k, v) in obj.iter() {
            ordered.insert(k.clone(), v.clone());
        }
        serde_json::to_string_pretty(&serde_json::Value::Object(ordered))
            .expect("scenario serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::presets::{preset, PRESET_NAMES};

    #[test]
    fn json_roundtrip_is_value_identical() {
        for name in PRESET_NAMES {
            let s = preset(name).unwrap();
            let text = s.to_json_string();
            let back = Scenario::from_json_str(&text).unwrap();
            assert_eq!(back, s, "roundtrip mismatch for {name}");
        }
    }

    #[test]
    fn unknown_top_level_key_rejected() {
        let mut text = preset("wu-so3-K1").unwrap().to_json_string();
        text = text.replacen('{', "{\n  \"surprise\": 1,", 1);
        let err = Scenario::from_json_str(&text).unwrap_err();
        assert!(err.to_string().contains("surprise"), "error was: {err}");
    }

    #[test]
    fn missing_mode_rejected() {
        let err = Scenario::from_json_str("{}").unwrap_err();
        assert!(err.to_string().contains("mode"));
    }

    #[test]
    fn unknown_mode_rejected() {
        let err = Scenario::from_json_str("{\"mode\": \"so4\"}").unwrap_err();
        assert!(err.to_string().contains("so4"));
    }

    #[test]
    fn negative_dt_names_field() {
        let mut s = preset("wu-so3-K1").unwrap();
        if let Scenario::So3(ref mut inner) = s {
            inner.integrator.dt = -1.0;
        }
        let err = s.validate().unwrap_err();
        assert!(err.to_string().contains("integrator.dt"), "error was: {err}");
    }

    #[test]
    fn bad_attitude_names_field() {
        let mut s = preset("wu-so3-K1").unwrap();
        if let Scenario::So3(ref mut inner) = s {
            inner.attitude0 = Mat3::identity() * 2.0;
        }
        let err = s.validate().unwrap_err();
        assert!(err.to_string().contains("attitude0"));
    }

    #[test]
    fn theta0_out_of_range_names_field() {
        let mut s = preset("so2-demo").unwrap();
        if let Scenario::So2(ref mut inner) = s {
            inner.theta0 = 7.0;
        }
        let err = s.validate().unwrap_err();
        assert!(err.to_string().contains("theta0"));
    }

    #[test]
    fn torque_bounds_validated() {
        let mut s = preset("wu-so3-K1").unwrap();
        if let Scenario::So3(ref mut inner) = s {
            inner.torque = TorqueConfig::Constant {
                value: [1.0, 0.0, 0.0],
                k_u_radius: Some(0.5),
                m: None,
            };
        }
        let err = s.validate().unwrap_err();
        assert!(err.to_string().contains("torque.k_u_radius"));
    }
}
