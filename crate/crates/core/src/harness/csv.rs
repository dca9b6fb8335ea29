//! CSV serialization of trajectories and sweep tables.
//!
//! Floats are written with 17 significant digits so a parse of the file
//! recovers the exact f64 bit patterns.

use super::sweep::SweepRow;
use super::trajectory::{Trajectory, TrajectorySo2, TrajectorySo3};
use std::io::{self, Write};
use std::path::Path;

pub const SO3_HEADER: &str = "t,R11,R12,R13,R21,R22,R23,R31,R32,R33,q1,q2,q3,Rhat11,Rhat12,Rhat13,Rhat21,Rhat22,Rhat23,Rhat31,Rhat32,Rhat33,qhat1,qhat2,qhat3,w1,w2,w3,what1,what2,what3,err_w1,err_w2,err_w3,V,Vdot,dist_A";

pub const SO2_HEADER: &str =
    "t,theta,omega,omega_hat,err_omega,theta_hat,V,Vdot,dist_W,degenerate_flag";

/// 17-significant-digit scientific notation; round-trips every f64 exactly.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn write_so3(traj: &TrajectorySo3, w: &mut impl Write) -> io::Result<()> {
    writeln!(w, "{SO3_HEADER}")?;
    let mut fields: Vec<String> = Vec::with_capacity(37);
    for s in &traj.samples {
        fields.clear();
        fields.push(format_float(s.t));
        for i in 0..3 {
            for j in 0..3 {
                fields.push(format_float(s.attitude[(i, j)]));
            }
        }
        for i in 0..3 {
            fields.push(format_float(s.momentum[i]));
        }
        for i in 0..3 {
            for j in 0..3 {
                fields.push(format_float(s.matrix_estimate[(i, j)]));
            }
        }
        for i in 0..3 {
            fields.push(format_float(s.momentum_estimate[i]));
        }
        for i in 0..3 {
            fields.push(format_float(s.omega[i]));
        }
        for i in 0..3 {
            fields.push(format_float(s.omega_hat[i]));
        }
        for i in 0..3 {
            fields.push(format_float(s.omega[i] - s.omega_hat[i]));
        }
        fields.push(format_float(s.v));
        fields.push(format_float(s.vdot));
        fields.push(format_float(s.dist));
        writeln!(w, "{}", fields.join(","))?;
    }
    Ok(())
}

fn write_so2(traj: &TrajectorySo2, w: &mut impl Write) -> io::Result<()> {
    writeln!(w, "{SO2_HEADER}")?;
    for s in &traj.samples {
        let (theta_hat, degenerate) = match s.theta_hat {
            Some(th) => (format_float(th), 0),
            None => ("NaN".to_string(), 1),
        };
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{},{}",
            format_float(s.t),
            format_float(s.theta),
            format_float(s.omega),
            format_float(s.omega_hat),
            format_float(s.omega - s.omega_hat),
            theta_hat,
            format_float(s.v),
            format_float(s.vdot),
            format_float(s.dist),
            degenerate
        )?;
    }
    Ok(())
}

/// Writes a trajectory as CSV: header row, then one row per sample.
pub fn write_csv(traj: &Trajectory, w: &mut impl Write) -> io::Result<()> {
    match traj {
        Trajectory::So3(t) => write_so3(t, w),
        Trajectory::So2(t) => write_so2(t, w),
    }
}

pub fn write_csv_file(traj: &Trajectory, path: &Path) -> io::Result<()> {
    let mut file = io::BufWriter::new(std::fs::File::create(path)?);
    write_csv(traj, &mut file)?;
    file.flush()
}

/// Renders a trajectory CSV into a byte buffer (handy for determinism checks).
pub fn csv_bytes(traj: &Trajectory) -> Vec<u8> {
    let mut buf = Vec::new();
    write_csv(traj, &mut buf).expect("writing to memory cannot fail");
    buf
}

pub const SWEEP_HEADER: &str =
    "param,value,convergence_threshold,convergence_time,steady_state_window,steady_state_rms,max_v_increase,final_d";

/// Writes a metrics table: one row per swept value.
pub fn write_sweep_csv(param: &str, rows: &[SweepRow], w: &mut impl Write) -> io::Result<()> {
    writeln!(w, "{SWEEP_HEADER}")?;
    for row in rows {
        let ct = match row.metrics.convergence_time {
            Some(t) => format_float(t),
            None => "NotConverged".to_string(),
        };
        writeln!(
            w,
            "{},{},{},{},{},{},{},{}",
            param,
            format_float(row.value),
            format_float(row.metrics.convergence_threshold),
            ct,
            format_float(row.metrics.steady_state_window),
            format_float(row.metrics.steady_state_rms),
            format_float(row.metrics.max_v_increase),
            format_float(row.metrics.final_d)
        )?;
    }
    Ok(())
}

pub fn write_sweep_csv_file(param: &str, rows: &[SweepRow], path: &Path) -> io::Result<()> {
    let mut file = io::BufWriter::new(std::fs::File::create(path)?);
    write_sweep_csv(param, rows, &mut file)?;
    file.flush()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::trajectory::{SampleSo2, SampleSo3};
    use crate::linalg::{Mat3, Vec3};

    #[test]
    fn float_format_roundtrips_exactly() {
        for x in [
            0.0,
            -0.0,
            1.0,
            std::f64::consts::PI,
            1.468e-3,
            -7.213_482_194_382_4e17,
            f64::MIN_POSITIVE,
            4.9e-324,
        ] {
            let parsed: f64 = format_float(x).parse().unwrap();
            assert_eq!(parsed.to_bits(), x.to_bits(), "roundtrip failed for {x}");
        }
    }

    #[test]
    fn empty_trajectory_writes_header_only() {
        let traj = Trajectory::So3(TrajectorySo3 {
            dt: 1e-3,
            samples: vec![],
            max_orthonormality_drift: 0.0,
        });
        let bytes = csv_bytes(&traj);
        let text = String::from_utf8(bytes).unwrap();
        assert_eq!(text.lines().count(), 1);
        assert_eq!(text.lines().next().unwrap(), SO3_HEADER);
    }

    #[test]
    fn sample_count_matches_line_count() {
        let sample = SampleSo3 {
            t: 0.0,
            attitude: Mat3::identity(),
            momentum: Vec3::zeros(),
            matrix_estimate: Mat3::identity(),
            momentum_estimate: Vec3::zeros(),
            omega: Vec3::zeros(),
            omega_hat: Vec3::zeros(),
            v: 0.0,
            vdot: 0.0,
            dist: 0.0,
        };
        let traj = Trajectory::So3(TrajectorySo3 {
            dt: 1e-3,
            samples: vec![sample; 10],
            max_orthonormality_drift: 0.0,
        });
        let text = String::from_utf8(csv_bytes(&traj)).unwrap();
        assert_eq!(text.lines().count(), 11);
        assert_eq!(text.lines().nth(1).unwrap().split(',').count(), 37);
    }

    #[test]
    fn so2_write_then_parse_is_bit_identical() {
        let samples = vec![
            SampleSo2 {
                t: 0.0,
                theta: std::f64::consts::FRAC_PI_2,
                omega: 10.0,
                omega_hat: 0.0,
                theta_hat: Some(0.123456789),
                v: 2.0,
                vdot: -1.5,
                dist: 3.0,
            },
            SampleSo2 {
                t: 1e-3,
                theta: -2.5,
                omega: 10.0,
                omega_hat: 0.5,
                theta_hat: None,
                v: 1.9,
                vdot: -1.4,
                dist: 2.9,
            },
        ];
        let traj = Trajectory::So2(TrajectorySo2 {
            dt: 1e-3,
            samples: samples.clone(),
            max_orthonormality_drift: 0.0,
        });
        let text = String::from_utf8(csv_bytes(&traj)).unwrap();
        for (line, sample) in text.lines().skip(1).zip(&samples) {
            let fields: Vec<&str> = line.split(',').collect();
            assert_eq!(fields.len(), 10);
            let t: f64 = fields[0].parse().unwrap();
            assert_eq!(t.to_bits(), sample.t.to_bits());
            let theta: f64 = fields[1].parse().unwrap();
            assert_eq!(theta.to_bits(), sample.theta.to_bits());
            match sample.theta_hat {
                Some(th) => {
                    let parsed: f64 = fields[5].parse().unwrap();
                    assert_eq!(parsed.to_bits(), th.to_bits());
                    assert_eq!(fields[9], "0");
                }
                None => {
                    assert!(fields[5].parse::<f64>().unwrap().is_nan());
                    assert_eq!(fields[9], "1");
                }
            }
        }
    }
}
