//! Bounded input-torque signals.
//!
//! Torques are deterministic selections from a family of bounded signals with
//! bounded derivative. Each profile carries declared bounds (`sup_bound` on
//! the signal norm, `rate_bound` on its derivative norm) that are checked
//! against the generated signal at construction.

use crate::linalg::Vec3;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TorqueError {
    #[error("declared sup bound {declared:.3e} is below the signal's actual bound {actual:.3e}")]
    SupBoundViolated { declared: f64, actual: f64 },
    #[error("declared rate bound {declared:.3e} is below the signal's actual bound {actual:.3e}")]
    RateBoundViolated { declared: f64, actual: f64 },
    #[error("torque parameters must be finite")]
    NonFinite,
}

/// Value type a torque signal takes: a 3-vector on SO(3), a scalar on SO(2).
pub trait TorqueValue: Copy + std::fmt::Debug {
    fn zero() -> Self;
    fn norm(&self) -> f64;
    fn scaled(&self, s: f64) -> Self;
    fn is_finite(&self) -> bool;
}

impl TorqueValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn norm(&self) -> f64 {
        self.abs()
    }
    fn scaled(&self, s: f64) -> Self {
        self * s
    }
    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }
}

impl TorqueValue for Vec3 {
    fn zero() -> Self {
        Vec3::zeros()
    }
    fn norm(&self) -> f64 {
        nalgebra::Vector3::norm(self)
    }
    fn scaled(&self, s: f64) -> Self {
        self * s
    }
    fn is_finite(&self) -> bool {
        self.iter().all(|x| x.is_finite())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TorqueKind<V> {
    Zero,
    Constant(V),
    Sinusoid { amplitude: V, frequency: f64, phase: f64 },
}

/// A torque signal together with its validated bounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TorqueProfile<V> {
    kind: TorqueKind<V>,
    sup_bound: f64,
    rate_bound: f64,
}

impl<V: TorqueValue> TorqueProfile<V> {
    /// Builds a profile with the tightest bounds the signal satisfies.
    pub fn new(kind: TorqueKind<V>) -> Result<Self, TorqueError> {
        let (sup, rate) = Self::tight_bounds(&kind)?;
        Ok(Self { kind, sup_bound: sup, rate_bound: rate })
    }

    /// Builds a profile with caller-declared bounds, rejecting declarations
    /// the signal does not satisfy.
    pub fn with_declared_bounds(
        kind: TorqueKind<V>,
        sup_bound: f64,
        rate_bound: f64,
    ) -> Result<Self, TorqueError> {
        let (sup, rate) = Self::tight_bounds(&kind)?;
        if !(sup_bound.is_finite() && rate_bound.is_finite()) {
            return Err(TorqueError::NonFinite);
        }
        if sup_bound < sup {
            return Err(TorqueError::SupBoundViolated { declared: sup_bound, actual: sup });
        }
        if rate_bound < rate {
            return Err(TorqueError::RateBoundViolated { declared: rate_bound, actual: rate });
        }
        Ok(Self { kind, sup_bound, rate_bound })
    }

    pub fn zero() -> Self {
        Self { kind: TorqueKind::Zero, sup_bound: 0.0, rate_bound: 0.0 }
    }

    fn tight_bounds(kind: &TorqueKind<V>) -> Result<(f64, f64), TorqueError> {
        match kind {
            TorqueKind::Zero => Ok((0.0, 0.0)),
            TorqueKind::Constant(c) => {
                if !c.is_finite() {
                    return Err(TorqueError::NonFinite);
                }
                Ok((c.norm(), 0.0))
            }
            TorqueKind::Sinusoid { amplitude, frequency, phase } => {
                if !(amplitude.is_finite() && frequency.is_finite() && phase.is_finite()) {
                    return Err(TorqueError::NonFinite);
                }
                Ok((amplitude.norm(), frequency.abs() * amplitude.norm()))
            }
        }
    }

    pub fn eval(&self, t: f64) -> V {
        match &self.kind {
            TorqueKind::Zero => V::zero(),
            TorqueKind::Constant(c) => *c,
            TorqueKind::Sinusoid { amplitude, frequency, phase } => {
                amplitude.scaled((frequency * t + phase).sin())
            }
        }
    }

    pub fn kind(&self) -> &TorqueKind<V> {
        &self.kind
    }

    /// Declared bound on `|u(t)|`.
    pub fn sup_bound(&self) -> f64 {
        self.sup_bound
    }

    /// Declared bound on `|du/dt|` where the signal is differentiable.
    pub fn rate_bound(&self) -> f64 {
        self.rate_bound
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_profile_bounds() {
        let p: TorqueProfile<Vec3> = TorqueProfile::zero();
        assert_eq!(p.sup_bound(), 0.0);
        assert_eq!(p.rate_bound(), 0.0);
        assert_eq!(p.eval(3.7), Vec3::zeros());
    }

    #[test]
    fn constant_profile_tight_bounds() {
        let c = Vec3::new(0.3, -0.4, 0.0);
        let p = TorqueProfile::new(TorqueKind::Constant(c)).unwrap();
        assert_eq!(p.sup_bound(), 0.5);
        assert_eq!(p.rate_bound(), 0.0);
        assert_eq!(p.eval(10.0), c);
    }

    #[test]
    fn sinusoid_respects_declared_bounds() {
        let kind = TorqueKind::Sinusoid { amplitude: 2.0_f64, frequency: 3.0, phase: 0.0 };
        let p = TorqueProfile::with_declared_bounds(kind, 2.5, 7.0).unwrap();
        assert_eq!(p.sup_bound(), 2.5);
        // Sampled signal stays inside the declared sup bound.
        for k in 0..1000 {
            let t = k as f64 * 0.013;
            assert!(p.eval(t).norm() <= p.sup_bound());
        }
    }

    #[test]
    fn sinusoid_rejects_too_small_declared_bounds() {
        let kind = TorqueKind::Sinusoid { amplitude: 2.0_f64, frequency: 3.0, phase: 0.0 };
        assert!(matches!(
            TorqueProfile::with_declared_bounds(kind, 1.0, 7.0),
            Err(TorqueError::SupBoundViolated { .. })
        ));
        assert!(matches!(
            TorqueProfile::with_declared_bounds(kind, 2.0, 5.9),
            Err(TorqueError::RateBoundViolated { .. })
        ));
    }
}
