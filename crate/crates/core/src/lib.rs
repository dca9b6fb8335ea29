//! Angular-speed estimation for rigid bodies from attitude measurements.
//!
//! The observers implemented here estimate the angular speed of a rotating
//! body from measurements of its attitude alone. Their defining feature is
//! that the matrix-valued observer state is *not* constrained to the rotation
//! group: it evolves freely in the ambient space of square matrices, which
//! keeps both the dynamics and the convergence analysis elementary. The price
//! is that the matrix state is not a usable attitude estimate; on SO(2) a
//! closed-form nearest-rotation projection recovers one.
//!
//! Crate layout:
//! - [`linalg`] — fixed-size vectors/matrices, skew/vee operators, rotation
//!   newtypes, exponential maps.
//! - [`torque`] — bounded input-torque signals shared by both plants.
//! - [`so3`] — rigid-body plant on SO(3), the unconstrained observer, and
//!   Lyapunov instrumentation.
//! - [`so2`] — the fixed-axis specialization, wrapped-angle measurement maps,
//!   and the nearest-rotation projection.
//! - [`integrate`] — fixed-step geometric and classical steppers plus the
//!   lockstep plant/observer co-simulation loop.
//! - [`harness`] — scenarios, presets, noise models, metrics, CSV output,
//!   and parameter sweeps.
//! - [`checks`] — randomized property suites backing `spinobs check`.

pub mod checks;
pub mod harness;
pub mod integrate;
pub mod linalg;
pub mod so2;
pub mod so3;
pub mod torque;
