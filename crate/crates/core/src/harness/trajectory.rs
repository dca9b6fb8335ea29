//! Uniformly sampled simulation records.

use crate::linalg::{Mat3, Vec3};

/// One sample of an SO(3) co-simulation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleSo3 {
    pub t: f64,
    /// True plant attitude.
    pub attitude: Mat3,
    pub momentum: Vec3,
    pub matrix_estimate: Mat3,
    pub momentum_estimate: Vec3,
    pub omega: Vec3,
    /// Observer output, computed on the measured (possibly noisy) matrix.
    pub omega_hat: Vec3,
    pub v: f64,
    pub vdot: f64,
    /// Distance to the zero-error attractor.
    pub dist: f64,
}

/// One sample of an SO(2) co-simulation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleSo2 {
    pub t: f64,
    /// Wrapped angular position of the plant, in (-pi, pi].
    pub theta: f64,
    pub omega: f64,
    pub omega_hat: f64,
    /// Filtered angle from the projection; `None` when the projection is
    /// degenerate at this instant (gap sample).
    pub theta_hat: Option<f64>,
    pub v: f64,
    pub vdot: f64,
    pub dist: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrajectorySo3 {
    pub dt: f64,
    pub samples: Vec<SampleSo3>,
    /// Largest `|R^T R - I|_F` of the plant attitude seen during the run.
    pub max_orthonormality_drift: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrajectorySo2 {
    pub dt: f64,
    pub samples: Vec<SampleSo2>,
    pub max_orthonormality_drift: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Trajectory {
    So3(TrajectorySo3),
    So2(TrajectorySo2),
}

impl Trajectory {
    pub fn dt(&self) -> f64 {
        match self {
            Trajectory::So3(t) => t.dt,
            Trajectory::So2(t) => t.dt,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Trajectory::So3(t) => t.samples.len(),
            Trajectory::So2(t) => t.samples.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn times(&self) -> Vec<f64> {
        match self {
            Trajectory::So3(t) => t.samples.iter().map(|s| s.t).collect(),
            Trajectory::So2(t) => t.samples.iter().map(|s| s.t).collect(),
        }
    }

    /// Norm of the speed estimation error at each sample.
    pub fn speed_error_norms(&self) -> Vec<f64> {
        match self {
            Trajectory::So3(t) => {
                t.samples.iter().map(|s| (s.omega - s.omega_hat).norm()).collect()
            }
            Trajectory::So2(t) => {
                t.samples.iter().map(|s| (s.omega - s.omega_hat).abs()).collect()
            }
        }
    }

    pub fn lyapunov_values(&self) -> Vec<f64> {
        match self {
            Trajectory::So3(t) => t.samples.iter().map(|s| s.v).collect(),
            Trajectory::So2(t) => t.samples.iter().map(|s| s.v).collect(),
        }
    }

    pub fn dist_values(&self) -> Vec<f64> {
        match self {
            Trajectory::So3(t) => t.samples.iter().map(|s| s.dist).collect(),
            Trajectory::So2(t) => t.samples.iter().map(|s| s.dist).collect(),
        }
    }

    pub fn final_dist(&self) -> f64 {
        match self {
            Trajectory::So3(t) => t.samples.last().map(|s| s.dist).unwrap_or(0.0),
            Trajectory::So2(t) => t.samples.last().map(|s| s.dist).unwrap_or(0.0),
        }
    }

    pub fn max_orthonormality_drift(&self) -> f64 {
        match self {
            Trajectory::So3(t) => t.max_orthonormality_drift,
            Trajectory::So2(t) => t.max_orthonormality_drift,
        }
    }
}
