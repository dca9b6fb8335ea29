//! Randomized property suites behind the `check` CLI command.
//!
//! Each suite replays the analytical facts the observers rest on as
//! independent numerical experiments: trace identities, kernel properties,
//! Lyapunov monotonicity against finite differences, and a brute-force grid
//! oracle for the nearest-rotation projection. Suites are deterministic for
//! a given seed.

use crate::harness::scenario::{GainsConfigSo3, Scenario, ScenarioSo3, TorqueConfig};
use crate::harness::{run, NoiseSpec, Trajectory};
use crate::integrate::IntegratorConfig;
use crate::linalg::{frobenius_inner, skew, so3_exp, vee, Mat2, Mat3, Vec3};
use crate::so2::{self, ProjectionResult};
use crate::so3::MatrixGain;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use std::f64::consts::PI;

/// Outcome of one property check.
#[derive(Debug, Clone)]
pub struct PropertyReport {
    pub name: &'static str,
    pub passed: bool,
    /// Statistics on success, counterexample on failure.
    pub detail: String,
}

impl PropertyReport {
    fn pass(name: &'static str, detail: String) -> Self {
        Self { name, passed: true, detail }
    }

    fn fail(name: &'static str, detail: String) -> Self {
        Self { name, passed: false, detail }
    }
}

fn normal_vec3(rng: &mut ChaCha8Rng) -> Vec3 {
    Vec3::new(
        StandardNormal.sample(rng),
        StandardNormal.sample(rng),
        StandardNormal.sample(rng),
    )
}

fn normal_mat3(rng: &mut ChaCha8Rng) -> Mat3 {
    Mat3::from_fn(|_, _| StandardNormal.sample(rng))
}

fn normal_mat2(rng: &mut ChaCha8Rng) -> Mat2 {
    Mat2::from_fn(|_, _| StandardNormal.sample(rng))
}

const TRIALS: usize = 10_000;

/// trace([w]x Theta) = w^T vee(Theta^T - Theta) for all w, Theta.
fn property_trace_identity(rng: &mut ChaCha8Rng) -> PropertyReport {
    let name = "linalg.trace_identity";
    let mut worst = 0.0f64;
    for _ in 0..TRIALS {
        let omega = normal_vec3(rng);
        let theta = normal_mat3(rng);
        let lhs = (skew(&omega) * theta).trace();
        // Theta^T - Theta is skew by construction.
        let rhs = omega.dot(&vee(&(theta.transpose() - theta)).expect("skew part"));
        let err = (lhs - rhs).abs();
        if err > worst {
            worst = err;
        }
        if err > 1e-10 {
            return PropertyReport::fail(
                name,
                format!("counterexample: |lhs - rhs| = {err:.3e} for omega = {omega:?}"),
            );
        }
    }
    PropertyReport::pass(name, format!("{TRIALS} trials, worst |lhs - rhs| = {worst:.3e}"))
}

/// For nonsingular Theta: [w]x Theta = 0 iff w = 0.
fn property_kernel(rng: &mut ChaCha8Rng) -> PropertyReport {
    let name = "linalg.kernel_of_skew_product";
    let mut done = 0usize;
    let mut min_norm = f64::INFINITY;
    while done < TRIALS {
        let theta = normal_mat3(rng);
        if theta.determinant().abs() <= 1e-6 {
            continue;
        }
        let omega = normal_vec3(rng);
        if omega.norm() < 1e-6 {
            continue;
        }
        let product_norm = (skew(&omega) * theta).norm();
        if product_norm <= 0.0 {
            return PropertyReport::fail(
                name,
                format!("[w]x Theta vanished for nonzero w = {omega:?}"),
            );
        }
        min_norm = min_norm.min(product_norm);
        done += 1;
        // The forward direction is exact: skew(0) Theta = 0.
        if (skew(&Vec3::zeros()) * theta).norm() != 0.0 {
            return PropertyReport::fail(name, "skew(0) Theta != 0".to_string());
        }
    }
    PropertyReport::pass(name, format!("{TRIALS} trials, min |[w]x Theta|_F = {min_norm:.3e}"))
}

/// vee(skew(v)) = v and exp([v]x) is a proper rotation.
fn property_skew_vee_exp(rng: &mut ChaCha8Rng) -> PropertyReport {
    let name = "linalg.skew_vee_exp";
    let mut worst_det = 0.0f64;
    let mut worst_orth = 0.0f64;
    for _ in 0..TRIALS {
        let v = normal_vec3(rng) * 2.0;
        if vee(&skew(&v)).expect("skew output is skew") != v {
            return PropertyReport::fail(name, format!("vee(skew(v)) != v for v = {v:?}"));
        }
        let r = so3_exp(&v);
        let det_err = (r.matrix().determinant() - 1.0).abs();
        let orth_err = (r.matrix().transpose() * r.matrix() - Mat3::identity()).norm();
        worst_det = worst_det.max(det_err);
        worst_orth = worst_orth.max(orth_err);
        if det_err > 1e-12 || orth_err > 1e-12 {
            return PropertyReport::fail(
                name,
                format!("exp([v]x) defects: det {det_err:.3e}, orth {orth_err:.3e} at v = {v:?}"),
            );
        }
    }
    PropertyReport::pass(
        name,
        format!("{TRIALS} trials, worst det defect {worst_det:.3e}, worst orth defect {worst_orth:.3e}"),
    )
}

pub fn linalg_suite(seed: u64) -> Vec<PropertyReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    vec![
        property_trace_identity(&mut rng),
        property_kernel(&mut rng),
        property_skew_vee_exp(&mut rng),
    ]
}

/// A randomized noise-free SO(3) scenario with moderate gains, suitable for
/// step-resolution Lyapunov checks at dt = 1e-4.
pub fn random_lyapunov_scenario(rng: &mut ChaCha8Rng) -> Scenario {
    let j0 = Mat3::from_diagonal(&Vec3::new(5.0, 1.0, 2.0));
    let a = normal_mat3(rng);
    let scale: f64 = rng.random_range(1.0..30.0);
    let k = scale * (a * a.transpose() + 0.5 * Mat3::identity());
    // Symmetrize exactly; the product picks up last-bit asymmetry.
    let k = 0.5 * (k + k.transpose());
    let gamma = if rng.random_range(0..4usize) == 0 {
        MatrixGain::Diagonal([
            rng.random_range(5.0..40.0),
            rng.random_range(5.0..40.0),
            rng.random_range(5.0..40.0),
        ])
    } else {
        MatrixGain::Scalar(rng.random_range(5.0..40.0))
    };
    let attitude0 = so3_exp(&normal_vec3(rng)).into_matrix();
    let momentum0 = 3.0 * normal_vec3(rng);
    let matrix_estimate0 = attitude0 + 0.5 * normal_mat3(rng);
    let momentum_estimate0 = momentum0 + 2.0 * normal_vec3(rng);
    Scenario::So3(ScenarioSo3 {
        inertia: j0,
        attitude0,
        momentum0,
        matrix_estimate0,
        momentum_estimate0,
        gains: GainsConfigSo3 { k, gamma },
        torque: TorqueConfig::Zero,
        noise: NoiseSpec::None,
        integrator: IntegratorConfig { dt: 1e-4, ..IntegratorConfig::default() },
        horizon: 0.5,
        seed: 0,
    })
}

const LYAPUNOV_SCENARIOS: usize = 20;
/// Per-step tolerance for monotonicity: V may not grow by more than
/// `1e-9 * (1 + V)` over one step.
const V_STEP_TOL: f64 = 1e-9;
/// Relative tolerance for the finite-difference match of dV/dt.
const VDOT_REL_TOL: f64 = 0.01;
/// Samples with |dV/dt| below this floor are skipped in the relative check.
const VDOT_FLOOR: f64 = 1e-9;

fn lyapunov_checks(rng: &mut ChaCha8Rng) -> Vec<PropertyReport> {
    let mut worst_increase = f64::NEG_INFINITY;
    let mut worst_rel = 0.0f64;
    for trial in 0..LYAPUNOV_SCENARIOS {
        let scenario = random_lyapunov_scenario(rng);
        let (traj, _) = match run(&scenario) {
            Ok(out) => out,
            Err(e) => {
                return vec![PropertyReport::fail(
                    "lyapunov.simulation",
                    format!("trial {trial} failed to simulate: {e}"),
                )]
            }
        };
        let Trajectory::So3(traj) = traj else { unreachable!() };
        let dt = traj.dt;
        for pair in traj.samples.windows(2) {
            let (s0, s1) = (&pair[0], &pair[1]);
            let increase = (s1.v - s0.v) - V_STEP_TOL * (1.0 + s0.v);
            worst_increase = worst_increase.max(increase);
            if increase > 0.0 {
                return vec![PropertyReport::fail(
                    "lyapunov.v_nonincreasing",
                    format!(
                        "trial {trial}: V rose from {} to {} at t = {} (tolerance exceeded by {increase:.3e})",
                        s0.v, s1.v, s0.t
                    ),
                )];
            }
            if s0.vdot.abs() >= VDOT_FLOOR {
                let fd = (s1.v - s0.v) / dt;
                let rel = (fd - s0.vdot).abs() / s0.vdot.abs();
                worst_rel = worst_rel.max(rel);
                if rel > VDOT_REL_TOL {
                    return vec![PropertyReport::fail(
                        "lyapunov.fd_matches_vdot",
                        format!(
                            "trial {trial}: finite difference {fd:.6e} vs dV/dt {:.6e} at t = {} (relative error {rel:.3e})",
                            s0.vdot, s0.t
                        ),
                    )];
                }
            }
        }
    }
    vec![
        PropertyReport::pass(
            "lyapunov.v_nonincreasing",
            format!(
                "{LYAPUNOV_SCENARIOS} scenarios, worst step increase over tolerance = {worst_increase:.3e}"
            ),
        ),
        PropertyReport::pass(
            "lyapunov.fd_matches_vdot",
            format!("{LYAPUNOV_SCENARIOS} scenarios, worst relative mismatch = {worst_rel:.3e}"),
        ),
    ]
}

pub fn lyapunov_suite(seed: u64) -> Vec<PropertyReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    lyapunov_checks(&mut rng)
}

/// Number of angular grid points in the brute-force projection oracle.
pub const PROJECTION_GRID: usize = 3600;

/// Brute-force oracle for the nearest-rotation problem: minimizes
/// `|rot2(theta) - H|_F^2` over an angular grid, independently of the
/// closed-form projection. Returns `(best_theta, best_objective)`.
pub fn grid_search_nearest_rotation(h: &Mat2, grid: usize) -> (f64, f64) {
    let mut best_theta = 0.0;
    let mut best_obj = f64::INFINITY;
    for k in 0..grid {
        let theta = -PI + (k as f64 + 0.5) * (2.0 * PI / grid as f64);
        let (s, c) = theta.sin_cos();
        let d00 = c - h[(0, 0)];
        let d01 = -s - h[(0, 1)];
        let d10 = s - h[(1, 0)];
        let d11 = c - h[(1, 1)];
        let obj = d00 * d00 + d01 * d01 + d10 * d10 + d11 * d11;
        if obj < best_obj {
            best_obj = obj;
            best_theta = theta;
        }
    }
    (best_theta, best_obj)
}

fn projection_objective(h: &Mat2, r: &Mat2) -> f64 {
    let d = r - h;
    frobenius_inner(&d, &d)
}

fn projection_optimality(rng: &mut ChaCha8Rng) -> PropertyReport {
    let name = "projection.grid_optimality";
    let mut worst_gap = f64::NEG_INFINITY;
    for _ in 0..TRIALS {
        let h = 2.0 * normal_mat2(rng);
        match so2::project(&h) {
            ProjectionResult::Unique(p) => {
                let closed = projection_objective(&h, p.matrix());
                let (_, grid) = grid_search_nearest_rotation(&h, PROJECTION_GRID);
                let gap = closed - grid;
                worst_gap = worst_gap.max(gap);
                if gap > 1e-9 {
                    return PropertyReport::fail(
                        name,
                        format!(
                            "closed-form objective {closed:.9e} above grid minimum {grid:.9e} for H = {h:?}"
                        ),
                    );
                }
            }
            // Gaussian draws hit the degenerate set only at roundoff level.
            ProjectionResult::Degenerate => continue,
        }
    }
    PropertyReport::pass(
        name,
        format!("{TRIALS} matrices vs {PROJECTION_GRID}-point grid, worst objective gap = {worst_gap:.3e}"),
    )
}

fn projection_scaling_invariance(rng: &mut ChaCha8Rng) -> PropertyReport {
    let name = "projection.scaling_invariance";
    let mut worst = 0.0f64;
    for _ in 0..TRIALS {
        let h = normal_mat2(rng);
        let c: f64 = rng.random_range(0.01..100.0);
        if let (ProjectionResult::Unique(a), ProjectionResult::Unique(b)) =
            (so2::project(&h), so2::project(&(c * h)))
        {
            let diff = (a.matrix() - b.matrix()).norm();
            worst = worst.max(diff);
            if diff > 1e-9 {
                return PropertyReport::fail(
                    name,
                    format!("projection changed by {diff:.3e} under scaling c = {c} for H = {h:?}"),
                );
            }
        }
    }
    PropertyReport::pass(name, format!("{TRIALS} trials, worst difference = {worst:.3e}"))
}

fn projection_degenerate_detection(rng: &mut ChaCha8Rng) -> PropertyReport {
    let name = "projection.degenerate_detection";
    for _ in 0..TRIALS {
        let a: f64 = StandardNormal.sample(rng);
        let b: f64 = StandardNormal.sample(rng);
        // Symmetric and trace-free: the degenerate set.
        let h = Mat2::new(a, b, b, -a);
        if so2::project(&h) != ProjectionResult::Degenerate {
            return PropertyReport::fail(name, format!("missed degenerate input H = {h:?}"));
        }
    }
    PropertyReport::pass(name, format!("{TRIALS} symmetric trace-free matrices detected"))
}

fn projection_local_lipschitz(rng: &mut ChaCha8Rng) -> PropertyReport {
    let name = "projection.local_lipschitz";
    let mut done = 0usize;
    let mut worst = 0.0f64;
    while done < TRIALS {
        let h = 2.0 * normal_mat2(rng);
        // Distance to the degenerate set is hypot(a, b) / sqrt(2).
        let a = h[(0, 0)] + h[(1, 1)];
        let b = h[(0, 1)] - h[(1, 0)];
        if a.hypot(b) / std::f64::consts::SQRT_2 < 0.1 {
            continue;
        }
        let delta = normal_mat2(rng);
        let delta = delta * (1e-4 / delta.norm());
        let (ProjectionResult::Unique(p0), ProjectionResult::Unique(p1)) =
            (so2::project(&h), so2::project(&(h + delta)))
        else {
            continue;
        };
        let lipschitz = (p1.matrix() - p0.matrix()).norm() / delta.norm();
        worst = worst.max(lipschitz);
        if lipschitz > 100.0 {
            return PropertyReport::fail(
                name,
                format!("local Lipschitz estimate {lipschitz:.3e} > 100 at H = {h:?}"),
            );
        }
        done += 1;
    }
    PropertyReport::pass(name, format!("{TRIALS} trials, worst local Lipschitz estimate = {worst:.2}"))
}

pub fn projection_suite(seed: u64) -> Vec<PropertyReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    vec![
        projection_optimality(&mut rng),
        projection_scaling_invariance(&mut rng),
        projection_degenerate_detection(&mut rng),
        projection_local_lipschitz(&mut rng),
    ]
}

pub fn all_suites(seed: u64) -> Vec<PropertyReport> {
    let mut reports = linalg_suite(seed);
    reports.extend(lyapunov_suite(seed));
    reports.extend(projection_suite(seed));
    reports
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rot2;

    #[test]
    fn linalg_suite_passes() {
        for report in linalg_suite(12345) {
            assert!(report.passed, "{}: {}", report.name, report.detail);
        }
    }

    #[test]
    fn grid_oracle_agrees_with_rot2_inputs() {
        // For H already on SO(2) the grid minimum is near zero.
        let h = rot2(0.77).into_matrix();
        let (theta, obj) = grid_search_nearest_rotation(&h, PROJECTION_GRID);
        assert!((theta - 0.77).abs() < 2.0 * PI / PROJECTION_GRID as f64);
        assert!(obj < 1e-5);
    }
}
