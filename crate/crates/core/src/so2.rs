//! Fixed-axis specialization: plant and observer on SO(2), wrapped-angle
//! measurement maps, and the closed-form nearest-rotation projection.
//!
//! Plant (attitude `R` in SO(2), angular speed `w`, torque `u`, inertia `J`):
//!
//! ```text
//! dR/dt = w S R,    dw/dt = u / J,    S = | 0 -1 |
//!                                         | 1  0 |
//! ```
//!
//! Observer (matrix state `Rh` free in R^{2x2}, speed estimate `wh`):
//!
//! ```text
//! dRh/dt = wh S R + gamma (R - Rh),    dwh/dt = kappa trace((R - Rh)^T S R)
//! ```
//!
//! Angular positions are exchanged with the outside world as wrapped angles
//! in `(-pi, pi]`; the bijection with SO(2) picks `+pi` for the half-turn.

use crate::linalg::{frobenius_inner, rot2, Mat2, RotationMatrix2};
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum So2Error {
    #[error("angle {0} is outside (-pi, pi]; wrap it before converting")]
    AngleOutOfRange(f64),
    #[error("projection is degenerate: every rotation is equally near; no angle is defined")]
    DegenerateProjection,
    #[error("gain must be positive, got {0}")]
    GainNotPositive(f64),
}

/// Generator of planar rotations: `rot2(t) = exp(t S)`.
#[inline]
pub fn spin_generator() -> Mat2 {
    Mat2::new(0.0, -1.0, 1.0, 0.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlantState {
    pub attitude: RotationMatrix2,
    /// Angular speed, rad/s.
    pub speed: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObserverState {
    pub matrix_estimate: Mat2,
    pub speed_estimate: f64,
}

impl ObserverState {
    pub fn is_finite(&self) -> bool {
        self.matrix_estimate.iter().all(|x| x.is_finite()) && self.speed_estimate.is_finite()
    }
}

/// Observer gains: matrix correction `gamma` (as `gamma * id`) and speed
/// correction `kappa`, both positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gains {
    gamma: f64,
    kappa: f64,
}

impl Gains {
    pub fn new(gamma: f64, kappa: f64) -> Result<Self, So2Error> {
        if !(gamma.is_finite() && gamma > 0.0) {
            return Err(So2Error::GainNotPositive(gamma));
        }
        if !(kappa.is_finite() && kappa > 0.0) {
            return Err(So2Error::GainNotPositive(kappa));
        }
        Ok(Self { gamma, kappa })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }
}

/// Result of projecting a 2x2 matrix onto SO(2).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProjectionResult {
    /// The unique nearest rotation.
    Unique(RotationMatrix2),
    /// Input is symmetric with zero trace (within tolerance): every rotation
    /// is equally near, the minimizer set is all of SO(2).
    Degenerate,
}

/// Plant right-hand side: `(dR, dw) = (w S R, u / J)`.
pub fn plant_rhs(state: &PlantState, torque: f64, inertia: f64) -> (Mat2, f64) {
    (state.speed * spin_generator() * state.attitude.matrix(), torque / inertia)
}

/// Observer right-hand side given the measured attitude matrix (any finite
/// 2x2 matrix; noise enters by passing `R + eta`).
pub fn observer_rhs(observer: &ObserverState, r_meas: &Mat2, gains: &Gains) -> (Mat2, f64) {
    let s = spin_generator();
    let r_tilde = r_meas - observer.matrix_estimate;
    let d_matrix = observer.speed_estimate * s * r_meas + gains.gamma() * r_tilde;
    let d_speed = gains.kappa() * (r_tilde.transpose() * s * r_meas).trace();
    (d_matrix, d_speed)
}

/// Maps a wrapped angle in `(-pi, pi]` to its rotation matrix.
pub fn from_wrapped_angle(theta: f64) -> Result<RotationMatrix2, So2Error> {
    if !(theta.is_finite() && -PI < theta && theta <= PI) {
        return Err(So2Error::AngleOutOfRange(theta));
    }
    Ok(rot2(theta))
}

/// Maps a rotation to its wrapped angle in `(-pi, pi]` via `atan2(R21, R11)`.
///
/// The half-turn is reported as `+pi`, never `-pi`.
pub fn to_wrapped_angle(r: &RotationMatrix2) -> f64 {
    let m = r.matrix();
    let theta = m[(1, 0)].atan2(m[(0, 0)]);
    // atan2 returns -pi for (-0.0, x<0); fold it onto the +pi representative.
    if theta == -PI {
        PI
    } else {
        theta
    }
}

/// Matrices for which the nearest-rotation problem is degenerate: symmetric
/// with zero trace. Detection uses a relative tolerance so the branch is
/// reachable in floating point.
fn degeneracy_tolerance(h: &Mat2) -> f64 {
    1e-12 * f64::max(1.0, h.norm())
}

/// Closed-form projection onto SO(2), minimizing `|R - H|_F` over rotations.
///
/// Off the degenerate set the minimizer is
///
/// ```text
/// | a/r  b/r |        a = h11 + h22,  b = h12 - h21,
/// |-b/r  a/r |        r = sqrt(a^2 + b^2),
/// ```
///
/// which depends only on the direction of `(a, b)` and is therefore invariant
/// to positive scaling of `H`.
pub fn project(h: &Mat2) -> ProjectionResult {
    let a = h[(0, 0)] + h[(1, 1)];
    let b = h[(0, 1)] - h[(1, 0)];
    let tol = degeneracy_tolerance(h);
    if a.abs() <= tol && b.abs() <= tol {
        return ProjectionResult::Degenerate;
    }
    let r = a.hypot(b);
    let theta = a / r;
    let digamma = b / r;
    ProjectionResult::Unique(RotationMatrix2::new_unchecked(Mat2::new(
        theta, digamma, -digamma, theta,
    )))
}

/// Wrapped angle of the nearest rotation to the observer's matrix state.
///
/// Returns an error on degenerate inputs: the minimizer set is then all of
/// SO(2) and a filter must not invent a value.
pub fn filtered_angle(matrix_estimate: &Mat2) -> Result<f64, So2Error> {
    match project(matrix_estimate) {
        ProjectionResult::Unique(r) => Ok(to_wrapped_angle(&r)),
        ProjectionResult::Degenerate => Err(So2Error::DegenerateProjection),
    }
}

/// Lyapunov function of the error coordinates `Rt = R - Rh`, `wt = w - wh`:
/// `V = 1/2 <Rt, Rt>_F + wt^2 / (2 kappa)`.
pub fn lyapunov_v(r_tilde: &Mat2, speed_tilde: f64, gains: &Gains) -> f64 {
    0.5 * frobenius_inner(r_tilde, r_tilde) + 0.5 * speed_tilde * speed_tilde / gains.kappa()
}

/// `dV/dt = -gamma <Rt, Rt>_F` along the noise-free error dynamics.
pub fn lyapunov_vdot(r_tilde: &Mat2, gains: &Gains) -> f64 {
    -gains.gamma() * frobenius_inner(r_tilde, r_tilde)
}

/// Distance of the error coordinates to the zero-error set.
pub fn dist_to_attractor(r_tilde: &Mat2, speed_tilde: f64) -> f64 {
    (frobenius_inner(r_tilde, r_tilde) + speed_tilde * speed_tilde).sqrt()
}
