//! Rigid-body plant on SO(3) and the manifold-free angular-speed observer.
//!
//! Plant (attitude `R`, inertial angular momentum `q`, torque `u`):
//!
//! ```text
//! dR/dt = [R J0^-1 R^T q]x R
//! dq/dt = u
//! w     = R J0^-1 R^T q
//! ```
//!
//! Observer (matrix state `Rh` free in R^{3x3}, momentum estimate `qh`):
//!
//! ```text
//! dRh/dt = [R J0^-1 R^T qh]x R + G(R - Rh)
//! dqh/dt = u + K R J0^-1 R^T vee(M - M^T),   M = (R - Rh) R^T
//! wh     = R J0^-1 R^T qh
//! ```
//!
//! with `K` symmetric positive definite and `G` a positive-definite
//! correction map. The observer's matrix state is deliberately not confined
//! to SO(3); only the estimation errors `R - Rh` and `q - qh` converge.

use crate::linalg::{frobenius_inner, skew, vee, Mat3, RotationMatrix3, Vec3};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum So3Error {
    #[error("gain matrix K is not symmetric: |K - K^T|_F = {defect:.3e}")]
    GainNotSymmetric { defect: f64 },
    #[error("gain matrix K is not positive definite")]
    GainNotPositiveDefinite,
    #[error("correction gain must be positive, got {0}")]
    CorrectionGainNotPositive(f64),
    #[error("inertia matrix is not symmetric positive definite")]
    InertiaNotSpd,
    #[error("inertia inverse check failed: |J0 J0^-1 - I|_F = {defect:.3e}")]
    InertiaInverseDefect { defect: f64 },
    #[error("value has non-finite entries")]
    NonFinite,
}

/// True system state: attitude and inertial angular momentum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlantState {
    pub attitude: RotationMatrix3,
    /// Angular momentum in the inertial frame, N·m·s.
    pub momentum: Vec3,
}

/// Observer state. The matrix component is a free 3x3 matrix, not a rotation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObserverState {
    pub matrix_estimate: Mat3,
    pub momentum_estimate: Vec3,
}

impl ObserverState {
    pub fn is_finite(&self) -> bool {
        self.matrix_estimate.iter().all(|x| x.is_finite())
            && self.momentum_estimate.iter().all(|x| x.is_finite())
    }
}

/// The positive-definite correction map `G` applied to the matrix error.
///
/// Only the parametric family actually used in practice is representable:
/// scalar multiples of the identity map and right-multiplication by a
/// positive diagonal weight matrix. Both satisfy `G(0) = 0` and
/// `<G(M), M>_F > 0` for `M != 0`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatrixGain {
    /// `G(M) = gamma * M`.
    Scalar(f64),
    /// `G(M) = M * diag(w)`.
    Diagonal([f64; 3]),
}

impl MatrixGain {
    pub fn apply(&self, m: &Mat3) -> Mat3 {
        match self {
            MatrixGain::Scalar(g) => m * *g,
            MatrixGain::Diagonal(w) => m * Mat3::from_diagonal(&Vec3::new(w[0], w[1], w[2])),
        }
    }

    fn validate(&self) -> Result<(), So3Error> {
        match self {
            MatrixGain::Scalar(g) => {
                if !(g.is_finite() && *g > 0.0) {
                    return Err(So3Error::CorrectionGainNotPositive(*g));
                }
            }
            MatrixGain::Diagonal(w) => {
                for wi in w {
                    if !(wi.is_finite() && *wi > 0.0) {
                        return Err(So3Error::CorrectionGainNotPositive(*wi));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Observer gains: SPD momentum gain `K` (inverse cached for the Lyapunov
/// function) and the matrix correction map.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gains {
    k: Mat3,
    k_inv: Mat3,
    gamma: MatrixGain,
}

impl Gains {
    pub fn new(k: Mat3, gamma: MatrixGain) -> Result<Self, So3Error> {
        if !k.iter().all(|x| x.is_finite()) {
            return Err(So3Error::NonFinite);
        }
        let defect = (k - k.transpose()).norm();
        if defect > 1e-9 * (1.0 + k.norm()) {
            return Err(So3Error::GainNotSymmetric { defect });
        }
        let chol = nalgebra::Cholesky::new(k).ok_or(So3Error::GainNotPositiveDefinite)?;
        let k_inv = chol.inverse();
        gamma.validate()?;
        Ok(Self { k, k_inv, gamma })
    }

    pub fn k(&self) -> &Mat3 {
        &self.k
    }

    pub fn k_inv(&self) -> &Mat3 {
        &self.k_inv
    }

    pub fn gamma(&self) -> &MatrixGain {
        &self.gamma
    }
}

/// Body inertia in a body-fixed frame, with its inverse cached.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Inertia {
    j0: Mat3,
    j0_inv: Mat3,
}

impl Inertia {
    pub fn new(j0: Mat3) -> Result<Self, So3Error> {
        if !j0.iter().all(|x| x.is_finite()) {
            return Err(So3Error::NonFinite);
        }
        if (j0 - j0.transpose()).norm() > 1e-9 * (1.0 + j0.norm()) {
            return Err(So3Error::InertiaNotSpd);
        }
        let chol = nalgebra::Cholesky::new(j0).ok_or(So3Error::InertiaNotSpd)?;
        let j0_inv = chol.inverse();
        let defect = (j0 * j0_inv - Mat3::identity()).norm();
        if defect > 1e-10 {
            return Err(So3Error::InertiaInverseDefect { defect });
        }
        Ok(Self { j0, j0_inv })
    }

    pub fn j0(&self) -> &Mat3 {
        &self.j0
    }

    pub fn j0_inv(&self) -> &Mat3 {
        &self.j0_inv
    }

    /// `R J0^-1 R^T`, the inertia inverse seen from the inertial frame.
    #[inline]
    pub fn inv_in_inertial(&self, r: &Mat3) -> Mat3 {
        r * self.j0_inv * r.transpose()
    }
}

/// Plant right-hand side: `(dR, dq) = ([R J0^-1 R^T q]x R, u)`.
pub fn plant_rhs(state: &PlantState, torque: &Vec3, inertia: &Inertia) -> (Mat3, Vec3) {
    let r = state.attitude.matrix();
    let omega = inertia.inv_in_inertial(r) * state.momentum;
    (skew(&omega) * r, *torque)
}

/// Angular speed of the plant in the inertial frame: `w = R J0^-1 R^T q`.
pub fn omega_true(state: &PlantState, inertia: &Inertia) -> Vec3 {
    inertia.inv_in_inertial(state.attitude.matrix()) * state.momentum
}

/// Innovation `vee(M - M^T)` with `M = (R - Rh) R^T`.
///
/// Accepts arbitrary (possibly noisy, off-manifold) measured matrices;
/// `M - M^T` is skew by construction for any inputs.
pub fn innovation(r_meas: &Mat3, matrix_estimate: &Mat3) -> Vec3 {
    let m = (r_meas - matrix_estimate) * r_meas.transpose();
    vee(&(m - m.transpose())).expect("M - M^T is skew by construction")
}

/// Observer right-hand side given the measured attitude matrix.
///
/// The measurement may be any finite matrix; additive measurement noise
/// enters simply by passing `R + eta` here.
pub fn observer_rhs(
    observer: &ObserverState,
    r_meas: &Mat3,
    torque: &Vec3,
    gains: &Gains,
    inertia: &Inertia,
) -> (Mat3, Vec3) {
    let inv_inertial = inertia.inv_in_inertial(r_meas);
    let r_tilde = r_meas - observer.matrix_estimate;
    let d_matrix = skew(&(inv_inertial * observer.momentum_estimate)) * r_meas
        + gains.gamma().apply(&r_tilde);
    let d_momentum =
        torque + gains.k() * inv_inertial * innovation(r_meas, &observer.matrix_estimate);
    (d_matrix, d_momentum)
}

/// Observer output: `wh = R J0^-1 R^T qh` evaluated on the measured matrix.
pub fn omega_hat(r_meas: &Mat3, momentum_estimate: &Vec3, inertia: &Inertia) -> Vec3 {
    inertia.inv_in_inertial(r_meas) * momentum_estimate
}

/// Lyapunov function `V = 1/2 <Rt, Rt>_F + 1/2 qt^T K^-1 qt` of the error
/// coordinates `Rt = R - Rh`, `qt = q - qh`.
pub fn lyapunov_v(r_tilde: &Mat3, q_tilde: &Vec3, gains: &Gains) -> f64 {
    0.5 * frobenius_inner(r_tilde, r_tilde) + 0.5 * q_tilde.dot(&(gains.k_inv() * q_tilde))
}

/// Time derivative of the Lyapunov function along the noise-free error
/// dynamics: `dV/dt = -<Rt, G(Rt)>_F`, nonpositive by positive definiteness
/// of the correction map.
pub fn lyapunov_vdot(r_tilde: &Mat3, gains: &Gains) -> f64 {
    -frobenius_inner(r_tilde, &gains.gamma().apply(r_tilde))
}

/// Distance of the error coordinates to the attractor where both estimation
/// errors vanish: `sqrt(|Rt|_F^2 + |qt|^2)`.
pub fn dist_to_attractor(r_tilde: &Mat3, q_tilde: &Vec3) -> f64 {
    (frobenius_inner(r_tilde, r_tilde) + q_tilde.norm_squared()).sqrt()
}
