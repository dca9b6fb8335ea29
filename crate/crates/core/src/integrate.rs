//! Fixed-step time integration.
//!
//! The plant attitude is stepped geometrically through the exponential map,
//! so it stays on its rotation group by construction. The observer state is
//! deliberately unconstrained, so it is stepped with classical ambient-space
//! methods. Co-simulation runs both in lockstep: at each step the observer
//! receives the measurement taken at the step start and holds it for the
//! whole step.

use crate::harness::noise::NoiseSampler;
use crate::harness::trajectory::{SampleSo2, SampleSo3, TrajectorySo2, TrajectorySo3};
use crate::linalg::{rot2, so3_exp, Mat2, Mat3, RotationMatrix2, Vec3};
use crate::so2;
use crate::so3;
use crate::torque::TorqueProfile;
use nalgebra::SVector;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IntegrateError {
    /// A stage or state became NaN/Inf; usually blown-up gains or a step
    /// size too large for them.
    #[error("non-finite value encountered at t = {t}")]
    NonFinite { t: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlantMethod {
    /// Exponential-map midpoint step; the attitude never leaves the group.
    LieMidpoint,
    /// Classical RK4 on the flattened state, with the orthonormality defect
    /// tracked in the trajectory.
    AmbientRk4WithMonitor,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ObserverMethod {
    Rk4,
    Euler,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IntegratorConfig {
    /// Step size in seconds; must satisfy `0 < dt <= 0.1`.
    pub dt: f64,
    pub plant_method: PlantMethod,
    pub observer_method: ObserverMethod,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self { dt: 1e-3, plant_method: PlantMethod::LieMidpoint, observer_method: ObserverMethod::Rk4 }
    }
}

impl IntegratorConfig {
    pub fn is_valid_dt(&self) -> bool {
        self.dt.is_finite() && self.dt > 0.0 && self.dt <= 0.1
    }
}

/// One classical fourth-order Runge-Kutta step on a flat state.
pub fn rk4_step<const N: usize>(
    rhs: impl Fn(f64, &SVector<f64, N>) -> SVector<f64, N>,
    t: f64,
    x: &SVector<f64, N>,
    dt: f64,
) -> Result<SVector<f64, N>, IntegrateError> {
    let k1 = rhs(t, x);
    let k2 = rhs(t + dt / 2.0, &(x + (dt / 2.0) * k1));
    let k3 = rhs(t + dt / 2.0, &(x + (dt / 2.0) * k2));
    let k4 = rhs(t + dt, &(x + dt * k3));
    let next = x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if next.iter().all(|v| v.is_finite()) {
        Ok(next)
    } else {
        Err(IntegrateError::NonFinite { t })
    }
}

/// One explicit Euler step on a flat state.
pub fn euler_step<const N: usize>(
    rhs: impl Fn(f64, &SVector<f64, N>) -> SVector<f64, N>,
    t: f64,
    x: &SVector<f64, N>,
    dt: f64,
) -> Result<SVector<f64, N>, IntegrateError> {
    let next = x + dt * rhs(t, x);
    if next.iter().all(|v| v.is_finite()) {
        Ok(next)
    } else {
        Err(IntegrateError::NonFinite { t })
    }
}

/// Exponential-map midpoint step for the SO(3) plant.
///
/// The angular speed is evaluated at an explicit Euler half-step and the
/// attitude is advanced by its exponential: `R+ = exp(dt [w_mid]x) R`, which
/// is a product of rotations and needs no renormalization. The momentum gets
/// the matching midpoint update `q+ = q + dt u(t + dt/2)`.
pub fn lie_midpoint_step_so3(
    state: &so3::PlantState,
    t: f64,
    torque: &TorqueProfile<Vec3>,
    inertia: &so3::Inertia,
    dt: f64,
) -> so3::PlantState {
    let omega0 = so3::omega_true(state, inertia);
    let r_half = so3_exp(&((dt / 2.0) * omega0)) * state.attitude;
    let q_half = state.momentum + (dt / 2.0) * torque.eval(t);
    let omega_mid = inertia.inv_in_inertial(r_half.matrix()) * q_half;
    so3::PlantState {
        attitude: so3_exp(&(dt * omega_mid)) * state.attitude,
        momentum: state.momentum + dt * torque.eval(t + dt / 2.0),
    }
}

/// Exponential-map midpoint step for the SO(2) plant:
/// `R+ = rot2(dt w_mid) R` with the speed advanced by the midpoint torque.
pub fn lie_midpoint_step_so2(
    state: &so2::PlantState,
    t: f64,
    torque: &TorqueProfile<f64>,
    inertia: f64,
    dt: f64,
) -> so2::PlantState {
    let speed_half = state.speed + (dt / 2.0) * torque.eval(t) / inertia;
    so2::PlantState {
        attitude: rot2(dt * speed_half) * state.attitude,
        speed: state.speed + dt * torque.eval(t + dt / 2.0) / inertia,
    }
}

fn flatten_obs3(o: &so3::ObserverState) -> SVector<f64, 12> {
    let mut x = SVector::<f64, 12>::zeros();
    for i in 0..3 {
        for j in 0..3 {
            x[3 * i + j] = o.matrix_estimate[(i, j)];
        }
    }
    for i in 0..3 {
        x[9 + i] = o.momentum_estimate[i];
    }
    x
}

fn unflatten_obs3(x: &SVector<f64, 12>) -> so3::ObserverState {
    let mut m = Mat3::zeros();
    for i in 0..3 {
        for j in 0..3 {
            m[(i, j)] = x[3 * i + j];
        }
    }
    so3::ObserverState {
        matrix_estimate: m,
        momentum_estimate: Vec3::new(x[9], x[10], x[11]),
    }
}

fn flatten_obs2(o: &so2::ObserverState) -> SVector<f64, 5> {
    SVector::<f64, 5>::from([
        o.matrix_estimate[(0, 0)],
        o.matrix_estimate[(0, 1)],
        o.matrix_estimate[(1, 0)],
        o.matrix_estimate[(1, 1)],
        o.speed_estimate,
    ])
}

fn unflatten_obs2(x: &SVector<f64, 5>) -> so2::ObserverState {
    so2::ObserverState {
        matrix_estimate: Mat2::new(x[0], x[1], x[2], x[3]),
        speed_estimate: x[4],
    }
}

fn orthonormality_defect3(r: &Mat3) -> f64 {
    (r.transpose() * r - Mat3::identity()).norm()
}

fn orthonormality_defect2(r: &Mat2) -> f64 {
    (r.transpose() * r - Mat2::identity()).norm()
}

/// Lockstep plant/observer simulation on SO(3).
///
/// At each step the observer receives `R_meas = R + eta(t_k)`, held constant
/// over the step; the true plant advances by the configured plant method.
/// Records state, speeds, Lyapunov values and attractor distance at every
/// sample.
#[allow(clippy::too_many_arguments)]
pub fn co_simulate_so3(
    plant0: &so3::PlantState,
    observer0: &so3::ObserverState,
    gains: &so3::Gains,
    inertia: &so3::Inertia,
    torque: &TorqueProfile<Vec3>,
    noise: &mut NoiseSampler,
    config: &IntegratorConfig,
    horizon: f64,
) -> Result<TrajectorySo3, IntegrateError> {
    let dt = config.dt;
    let steps = (horizon / dt).round() as usize;
    let mut samples = Vec::with_capacity(steps + 1);
    let mut attitude = plant0.attitude.into_matrix();
    let mut momentum = plant0.momentum;
    let mut observer = *observer0;
    let mut max_drift = 0.0f64;

    for k in 0..=steps {
        let t = k as f64 * dt;
        let r_meas = attitude + noise.sample_mat3(t);

        let omega = inertia.inv_in_inertial(&attitude) * momentum;
        let omega_hat = so3::omega_hat(&r_meas, &observer.momentum_estimate, inertia);
        let r_tilde = attitude - observer.matrix_estimate;
        let q_tilde = momentum - observer.momentum_estimate;
        let v = so3::lyapunov_v(&r_tilde, &q_tilde, gains);
        let vdot = so3::lyapunov_vdot(&r_tilde, gains);
        let dist = so3::dist_to_attractor(&r_tilde, &q_tilde);
        max_drift = max_drift.max(orthonormality_defect3(&attitude));
        if !(v.is_finite() && omega_hat.iter().all(|x| x.is_finite())) {
            return Err(IntegrateError::NonFinite { t });
        }
        samples.push(SampleSo3 {
            t,
            attitude,
            momentum,
            matrix_estimate: observer.matrix_estimate,
            momentum_estimate: observer.momentum_estimate,
            omega,
            omega_hat,
            v,
            vdot,
            dist,
        });
        if k == steps {
            break;
        }

        // Observer step with the measurement frozen over the step.
        let obs_rhs = |stage_t: f64, x: &SVector<f64, 12>| {
            let o = unflatten_obs3(x);
            let u = torque.eval(stage_t);
            let (dm, dq) = so3::observer_rhs(&o, &r_meas, &u, gains, inertia);
            flatten_obs3(&so3::ObserverState { matrix_estimate: dm, momentum_estimate: dq })
        };
        let flat = flatten_obs3(&observer);
        let next = match config.observer_method {
            ObserverMethod::Rk4 => rk4_step(obs_rhs, t, &flat, dt)?,
            ObserverMethod::Euler => euler_step(obs_rhs, t, &flat, dt)?,
        };
        observer = unflatten_obs3(&next);

        // Plant step.
        match config.plant_method {
            PlantMethod::LieMidpoint => {
                let state = so3::PlantState {
                    attitude: crate::linalg::RotationMatrix3::new_unchecked(attitude),
                    momentum,
                };
                let next = lie_midpoint_step_so3(&state, t, torque, inertia, dt);
                attitude = next.attitude.into_matrix();
                momentum = next.momentum;
            }
            PlantMethod::AmbientRk4WithMonitor => {
                let plant_rhs = |stage_t: f64, x: &SVector<f64, 12>| {
                    let mut r = Mat3::zeros();
                    for i in 0..3 {
                        for j in 0..3 {
                            r[(i, j)] = x[3 * i + j];
                        }
                    }
                    let q = Vec3::new(x[9], x[10], x[11]);
                    let dr = crate::linalg::skew(&(inertia.inv_in_inertial(&r) * q)) * r;
                    let du = torque.eval(stage_t);
                    let mut out = SVector::<f64, 12>::zeros();
                    for i in 0..3 {
                        for j in 0..3 {
                            out[3 * i + j] = dr[(i, j)];
                        }
                    }
                    for i in 0..3 {
                        out[9 + i] = du[i];
                    }
                    out
                };
                let mut flat = SVector::<f64, 12>::zeros();
                for i in 0..3 {
                    for j in 0..3 {
                        flat[3 * i + j] = attitude[(i, j)];
                    }
                }
                for i in 0..3 {
                    flat[9 + i] = momentum[i];
                }
                let next = rk4_step(plant_rhs, t, &flat, dt)?;
                for i in 0..3 {
                    for j in 0..3 {
                        attitude[(i, j)] = next[3 * i + j];
                    }
                }
                momentum = Vec3::new(next[9], next[10], next[11]);
            }
        }
    }

    Ok(TrajectorySo3 { dt, samples, max_orthonormality_drift: max_drift })
}

/// Lockstep plant/observer simulation on SO(2).
///
/// The measurement pathway mirrors a sensor reporting wrapped angular
/// positions: the plant attitude is mapped to its wrapped angle and back to
/// SO(2) before noise is added, so the observer only ever sees the image of
/// a wrapped measurement.
#[allow(clippy::too_many_arguments)]
pub fn co_simulate_so2(
    plant0: &so2::PlantState,
    observer0: &so2::ObserverState,
    gains: &so2::Gains,
    inertia: f64,
    torque: &TorqueProfile<f64>,
    noise: &mut NoiseSampler,
    config: &IntegratorConfig,
    horizon: f64,
) -> Result<TrajectorySo2, IntegrateError> {
    let dt = config.dt;
    let steps = (horizon / dt).round() as usize;
    let mut samples = Vec::with_capacity(steps + 1);
    let mut attitude = plant0.attitude.into_matrix();
    let mut speed = plant0.speed;
    let mut observer = *observer0;
    let mut max_drift = 0.0f64;

    for k in 0..=steps {
        let t = k as f64 * dt;
        let theta = so2::to_wrapped_angle(&RotationMatrix2::new_unchecked(attitude));
        let wrapped = so2::from_wrapped_angle(theta)
            .expect("wrapped angle of a rotation is in range")
            .into_matrix();
        let r_meas = wrapped + noise.sample_mat2(t);

        let r_tilde = attitude - observer.matrix_estimate;
        let v = so2::lyapunov_v(&r_tilde, speed - observer.speed_estimate, gains);
        let vdot = so2::lyapunov_vdot(&r_tilde, gains);
        let dist = so2::dist_to_attractor(&r_tilde, speed - observer.speed_estimate);
        let theta_hat = so2::filtered_angle(&observer.matrix_estimate).ok();
        max_drift = max_drift.max(orthonormality_defect2(&attitude));
        if !(v.is_finite() && observer.speed_estimate.is_finite()) {
            return Err(IntegrateError::NonFinite { t });
        }
        samples.push(SampleSo2 {
            t,
            theta,
            omega: speed,
            omega_hat: observer.speed_estimate,
            theta_hat,
            v,
            vdot,
            dist,
        });
        if k == steps {
            break;
        }

        let obs_rhs = |_stage_t: f64, x: &SVector<f64, 5>| {
            let o = unflatten_obs2(x);
            let (dm, dw) = so2::observer_rhs(&o, &r_meas, gains);
            flatten_obs2(&so2::ObserverState { matrix_estimate: dm, speed_estimate: dw })
        };
        let flat = flatten_obs2(&observer);
        let next = match config.observer_method {
            ObserverMethod::Rk4 => rk4_step(obs_rhs, t, &flat, dt)?,
            ObserverMethod::Euler => euler_step(obs_rhs, t, &flat, dt)?,
        };
        observer = unflatten_obs2(&next);

        match config.plant_method {
            PlantMethod::LieMidpoint => {
                let state = so2::PlantState {
                    attitude: RotationMatrix2::new_unchecked(attitude),
                    speed,
                };
                let next = lie_midpoint_step_so2(&state, t, torque, inertia, dt);
                attitude = next.attitude.into_matrix();
                speed = next.speed;
            }
            PlantMethod::AmbientRk4WithMonitor => {
                let plant_rhs = |stage_t: f64, x: &SVector<f64, 5>| {
                    let r = Mat2::new(x[0], x[1], x[2], x[3]);
                    let w = x[4];
                    let dr = w * so2::spin_generator() * r;
                    SVector::<f64, 5>::from([
                        dr[(0, 0)],
                        dr[(0, 1)],
                        dr[(1, 0)],
                        dr[(1, 1)],
                        torque.eval(stage_t) / inertia,
                    ])
                };
                let flat = SVector::<f64, 5>::from([
                    attitude[(0, 0)],
                    attitude[(0, 1)],
                    attitude[(1, 0)],
                    attitude[(1, 1)],
                    speed,
                ]);
                let next = rk4_step(plant_rhs, t, &flat, dt)?;
                attitude = Mat2::new(next[0], next[1], next[2], next[3]);
                speed = next[4];
            }
        }
    }

    Ok(TrajectorySo2 { dt, samples, max_orthonormality_drift: max_drift })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::RotationMatrix3;
    use approx::assert_relative_eq;

    #[test]
    fn rk4_zero_rhs_is_identity() {
        let x = SVector::<f64, 3>::from([1.0, -2.0, 3.0]);
        let next = rk4_step(|_, _| SVector::<f64, 3>::zeros(), 0.0, &x, 0.1).unwrap();
        assert_eq!(next, x);
    }

    #[test]
    fn rk4_scalar_decay_matches_expansion() {
        // x' = -x, x(0) = 1, one step of dt = 0.1.
        let x = SVector::<f64, 1>::from([1.0]);
        let next = rk4_step(|_, x| -x, 0.0, &x, 0.1).unwrap();
        assert!((next[0] - 0.9048375).abs() <= 1e-6, "got {}", next[0]);
    }

    #[test]
    fn rk4_reports_non_finite() {
        let x = SVector::<f64, 1>::from([1.0]);
        let r = rk4_step(|_, x| x * f64::INFINITY, 2.5, &x, 0.1);
        assert_eq!(r, Err(IntegrateError::NonFinite { t: 2.5 }));
    }

    #[test]
    fn rk4_fourth_order_convergence() {
        // Global error on x' = -x over [0, 1] should shrink ~16x per halving.
        let err = |dt: f64| {
            let mut x = SVector::<f64, 1>::from([1.0]);
            let n = (1.0 / dt).round() as usize;
            for k in 0..n {
                x = rk4_step(|_, x| -x, k as f64 * dt, &x, dt).unwrap();
            }
            (x[0] - (-1.0f64).exp()).abs()
        };
        let e1 = err(0.02);
        let e2 = err(0.01);
        let ratio = e1 / e2;
        assert!((12.0..=20.0).contains(&ratio), "order ratio {ratio}");
    }

    #[test]
    fn lie_midpoint_fixed_point_at_zero_speed() {
        let inertia = so3::Inertia::new(Mat3::from_diagonal(&Vec3::new(5.0, 1.0, 2.0))).unwrap();
        let state = so3::PlantState { attitude: RotationMatrix3::identity(), momentum: Vec3::zeros() };
        let next = lie_midpoint_step_so3(&state, 0.0, &TorqueProfile::zero(), &inertia, 1e-3);
        assert_eq!(next.attitude.matrix(), state.attitude.matrix());
        assert_eq!(next.momentum, state.momentum);
    }

    #[test]
    fn lie_midpoint_constant_speed_closed_form() {
        // J0 = I and q = e3 gives constant w = e3; after n steps the attitude
        // is exactly the rotation by n*dt about e3.
        let inertia = so3::Inertia::new(Mat3::identity()).unwrap();
        let mut state = so3::PlantState {
            attitude: RotationMatrix3::identity(),
            momentum: Vec3::new(0.0, 0.0, 1.0),
        };
        let dt = 1e-3;
        let n = 1571;
        for k in 0..n {
            state = lie_midpoint_step_so3(&state, k as f64 * dt, &TorqueProfile::zero(), &inertia, dt);
        }
        let t_end = n as f64 * dt;
        let exact = so3_exp(&Vec3::new(0.0, 0.0, t_end));
        assert!((state.attitude.matrix() - exact.matrix()).norm() <= 1e-6);
        assert!((state.attitude.matrix().determinant() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn lie_midpoint_second_order_convergence() {
        // Constant torque makes w vary; compare against a fine reference.
        let inertia = so3::Inertia::new(Mat3::from_diagonal(&Vec3::new(5.0, 1.0, 2.0))).unwrap();
        let torque = TorqueProfile::new(crate::torque::TorqueKind::Constant(Vec3::new(
            0.05, -0.02, 0.03,
        )))
        .unwrap();
        let run = |dt: f64| {
            let mut state = so3::PlantState {
                attitude: RotationMatrix3::identity(),
                momentum: Vec3::new(1.0, 0.5, -0.3),
            };
            let n = (2.0 / dt).round() as usize;
            for k in 0..n {
                state = lie_midpoint_step_so3(&state, k as f64 * dt, &torque, &inertia, dt);
            }
            state
        };
        let reference = run(1e-5);
        let err = |dt: f64| {
            let s = run(dt);
            (s.attitude.matrix() - reference.attitude.matrix()).norm()
        };
        let ratio = err(4e-3) / err(2e-3);
        assert!((3.0..=5.0).contains(&ratio), "order ratio {ratio}");
    }

    #[test]
    fn lie_midpoint_so2_constant_speed_exact() {
        let mut state = so2::PlantState { attitude: rot2(0.0), speed: 2.0 };
        let dt = 1e-3;
        for k in 0..500 {
            state = lie_midpoint_step_so2(&state, k as f64 * dt, &TorqueProfile::zero(), 1.0, dt);
        }
        let exact = rot2(2.0 * 0.5);
        assert_relative_eq!(*state.attitude.matrix(), *exact.matrix(), epsilon = 1e-12);
        assert_relative_eq!(state.speed, 2.0);
    }
}
