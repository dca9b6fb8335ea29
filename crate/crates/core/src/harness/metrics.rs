//! Scalar summaries of a trajectory.

use super::trajectory::Trajectory;
use serde::Serialize;
use std::cmp::Ordering;

/// Absolute floor on the convergence threshold, so scenarios that start on
/// the attractor (zero initial error) report convergence at t = 0 instead of
/// chasing roundoff.
pub const THRESHOLD_FLOOR: f64 = 1e-6;

/// Default steady-state window length in seconds (clamped to the horizon).
pub const DEFAULT_WINDOW: f64 = 2.0;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Metrics {
    /// Speed-error threshold used for `convergence_time`.
    pub convergence_threshold: f64,
    /// First sample time after which the speed error stays below the
    /// threshold for the rest of the horizon; `None` if it never does.
    pub convergence_time: Option<f64>,
    /// Length of the trailing window used for `steady_state_rms`.
    pub steady_state_window: f64,
    /// RMS of the speed error over the trailing window.
    pub steady_state_rms: f64,
    /// Largest single-step increase of the Lyapunov function (0 if it never
    /// increases).
    pub max_v_increase: f64,
    /// Distance to the attractor at the final sample.
    pub final_d: f64,
}

impl Metrics {
    /// Computes all metrics from a trajectory. Metrics are pure functions of
    /// the trajectory: recomputation yields identical values.
    pub fn from_trajectory(traj: &Trajectory, threshold: f64, window: f64) -> Self {
        let errors = traj.speed_error_norms();
        let times = traj.times();
        let v = traj.lyapunov_values();

        let convergence_time = convergence_time(&times, &errors, threshold);

        let t_end = times.last().copied().unwrap_or(0.0);
        let window_start = t_end - window;
        let tail: Vec<f64> = times
            .iter()
            .zip(errors.iter())
            .filter(|(t, _)| **t >= window_start)
            .map(|(_, e)| *e)
            .collect();
        let steady_state_rms = if tail.is_empty() {
            0.0
        } else {
            (tail.iter().map(|e| e * e).sum::<f64>() / tail.len() as f64).sqrt()
        };

        let max_v_increase = v
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(0.0f64, f64::max);

        Metrics {
            convergence_threshold: threshold,
            convergence_time,
            steady_state_window: window,
            steady_state_rms,
            max_v_increase,
            final_d: traj.final_dist(),
        }
    }

    /// Default threshold: 2% of the initial speed-error norm, floored at
    /// [`THRESHOLD_FLOOR`].
    pub fn default_threshold(traj: &Trajectory) -> f64 {
        let e0 = traj.speed_error_norms().first().copied().unwrap_or(0.0);
        f64::max(0.02 * e0, THRESHOLD_FLOOR)
    }
}

/// First time after which the error stays at or below the threshold.
fn convergence_time(times: &[f64], errors: &[f64], threshold: f64) -> Option<f64> {
    if times.is_empty() {
        return None;
    }
    // Scan backwards for the last sample above the threshold.
    match errors.iter().rposition(|e| *e > threshold) {
        None => Some(times[0]),
        Some(idx) if idx + 1 < times.len() => Some(times[idx + 1]),
        Some(_) => None,
    }
}

/// Orders convergence times with `None` (never converged) greater than any
/// finite time.
pub fn compare_convergence(a: Option<f64>, b: Option<f64>) -> Ordering {
    match (a, b) {
        (Some(x), Some(y)) => x.partial_cmp(&y).unwrap_or(Ordering::Equal),
        (Some(_), None) => Ordering::Less,
        (None, Some(_)) => Ordering::Greater,
        (None, None) => Ordering::Equal,
    }
}

/// One-line human-readable rendering used by the CLI text summary.
pub fn format_text_summary(m: &Metrics) -> String {
    let ct = match m.convergence_time {
        Some(t) => format!("{t:.6}"),
        None => "NotConverged".to_string(),
    };
    format!(
        "convergence_threshold: {:.6e}\nconvergence_time: {}\nsteady_state_window: {}\nsteady_state_rms: {:.6e}\nmax_v_increase: {:.6e}\nfinal_d: {:.6e}",
        m.convergence_threshold, ct, m.steady_state_window, m.steady_state_rms, m.max_v_increase, m.final_d
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn convergence_time_basic() {
        let times = vec![0.0, 1.0, 2.0, 3.0];
        assert_eq!(convergence_time(&times, &[5.0, 3.0, 0.5, 0.2], 1.0), Some(2.0));
        assert_eq!(convergence_time(&times, &[0.1, 0.2, 0.3, 0.4], 1.0), Some(0.0));
        assert_eq!(convergence_time(&times, &[5.0, 0.1, 0.1, 2.0], 1.0), None);
    }

    #[test]
    fn compare_convergence_orders_none_last() {
        assert_eq!(compare_convergence(Some(1.0), Some(2.0)), Ordering::Less);
        assert_eq!(compare_convergence(Some(10.0), None), Ordering::Less);
        assert_eq!(compare_convergence(None, Some(0.1)), Ordering::Greater);
        assert_eq!(compare_convergence(None, None), Ordering::Equal);
    }
}
