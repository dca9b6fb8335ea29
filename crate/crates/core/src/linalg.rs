//! Fixed-size linear algebra for the 2D and 3D rotation groups.
//!
//! Everything here is a stack value type; the rotation newtypes validate
//! group membership at construction and are immutable afterwards.

use nalgebra::{Matrix2, Matrix3, SMatrix, Vector2, Vector3};
use thiserror::Error;

pub type Vec3 = Vector3<f64>;
pub type Vec2 = Vector2<f64>;
pub type Mat3 = Matrix3<f64>;
pub type Mat2 = Matrix2<f64>;

/// Default tolerance on `|R^T R - I|_F` when validating a rotation matrix.
pub const DEFAULT_ORTH_TOL: f64 = 1e-9;
/// Default tolerance on `|M + M^T|_F` when extracting a vector from a skew matrix.
pub const DEFAULT_SKEW_TOL: f64 = 1e-9;

/// Below this angle the Rodrigues coefficients switch to their Taylor
/// expansions to avoid cancellation in `sin(t)/t` and `(1-cos(t))/t^2`.
const SMALL_ANGLE: f64 = 1e-8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinalgError {
    #[error("matrix is not skew-symmetric: |M + M^T|_F = {defect:.3e} exceeds tolerance {tol:.3e}")]
    NotSkew { defect: f64, tol: f64 },
    #[error("matrix is not orthonormal: |R^T R - I|_F = {defect:.3e} exceeds tolerance {tol:.3e}")]
    NotOrthonormal { defect: f64, tol: f64 },
    #[error("matrix determinant {det:.3e} is not positive")]
    NonPositiveDeterminant { det: f64 },
    #[error("matrix has non-finite entries")]
    NonFinite,
}

/// A validated element of SO(3).
///
/// Construction checks `|R^T R - I|_F <= tol` and `det R > 0`; products and
/// exponentials of valid rotations stay valid up to roundoff, so internal
/// code composes them without re-validation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotationMatrix3(Mat3);

impl RotationMatrix3 {
    pub fn identity() -> Self {
        Self(Mat3::identity())
    }

    pub fn from_matrix(m: Mat3) -> Result<Self, LinalgError> {
        Self::from_matrix_with_tol(m, DEFAULT_ORTH_TOL)
    }

    pub fn from_matrix_with_tol(m: Mat3, tol: f64) -> Result<Self, LinalgError> {
        if !m.iter().all(|x| x.is_finite()) {
            return Err(LinalgError::NonFinite);
        }
        let defect = (m.transpose() * m - Mat3::identity()).norm();
        if defect > tol {
            return Err(LinalgError::NotOrthonormal { defect, tol });
        }
        let det = m.determinant();
        if det <= 0.0 {
            return Err(LinalgError::NonPositiveDeterminant { det });
        }
        Ok(Self(m))
    }

    /// Wraps a matrix known to lie on SO(3) by construction.
    pub(crate) fn new_unchecked(m: Mat3) -> Self {
        Self(m)
    }

    pub fn matrix(&self) -> &Mat3 {
        &self.0
    }

    pub fn into_matrix(self) -> Mat3 {
        self.0
    }

    pub fn transpose(&self) -> Self {
        Self(self.0.transpose())
    }
}

impl std::ops::Mul for RotationMatrix3 {
    type Output = RotationMatrix3;

    fn mul(self, rhs: RotationMatrix3) -> RotationMatrix3 {
        RotationMatrix3(self.0 * rhs.0)
    }
}

/// A validated element of SO(2).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotationMatrix2(Mat2);

impl RotationMatrix2 {
    pub fn identity() -> Self {
        Self(Mat2::identity())
    }

    pub fn from_matrix(m: Mat2) -> Result<Self, LinalgError> {
        Self::from_matrix_with_tol(m, DEFAULT_ORTH_TOL)
    }

    pub fn from_matrix_with_tol(m: Mat2, tol: f64) -> Result<Self, LinalgError> {
        if !m.iter().all(|x| x.is_finite()) {
            return Err(LinalgError::NonFinite);
        }
        let defect = (m.transpose() * m - Mat2::identity()).norm();
        if defect > tol {
            return Err(LinalgError::NotOrthonormal { defect, tol });
        }
        let det = m.determinant();
        if det <= 0.0 {
            return Err(LinalgError::NonPositiveDeterminant { det });
        }
        Ok(Self(m))
    }

    pub(crate) fn new_unchecked(m: Mat2) -> Self {
        Self(m)
    }

    pub fn matrix(&self) -> &Mat2 {
        &self.0
    }

    pub fn into_matrix(self) -> Mat2 {
        self.0
    }
}

impl std::ops::Mul for RotationMatrix2 {
    type Output = RotationMatrix2;

    fn mul(self, rhs: RotationMatrix2) -> RotationMatrix2 {
        RotationMatrix2(self.0 * rhs.0)
    }
}

/// Skew-symmetric matrix of a 3-vector, so that `skew(v) * w == v × w`.
///
/// ```text
/// [v]x = |  0   -v3   v2 |
///        |  v3   0   -v1 |
///        | -v2   v1   0  |
/// ```
#[inline]
pub fn skew(v: &Vec3) -> Mat3 {
    Mat3::new(0.0, -v.z, v.y, v.z, 0.0, -v.x, -v.y, v.x, 0.0)
}

/// Inverse of [`skew`] on the skew-symmetric matrices.
///
/// Fails with [`LinalgError::NotSkew`] when `|M + M^T|_F` exceeds the default
/// tolerance, which signals the caller passed a matrix that is not skew.
pub fn vee(m: &Mat3) -> Result<Vec3, LinalgError> {
    vee_with_tol(m, DEFAULT_SKEW_TOL)
}

pub fn vee_with_tol(m: &Mat3, tol: f64) -> Result<Vec3, LinalgError> {
    let defect = (m + m.transpose()).norm();
    if defect > tol {
        return Err(LinalgError::NotSkew { defect, tol });
    }
    Ok(Vec3::new(m[(2, 1)], m[(0, 2)], m[(1, 0)]))
}

/// Frobenius inner product `<A, B>_F = trace(A^T B)`.
#[inline]
pub fn frobenius_inner<const N: usize>(a: &SMatrix<f64, N, N>, b: &SMatrix<f64, N, N>) -> f64 {
    (a.transpose() * b).trace()
}

/// Exponential map so(3) -> SO(3) via the Rodrigues formula.
///
/// `exp([v]x) = I + sin(t)/t [v]x + (1 - cos(t))/t^2 [v]x^2` with `t = |v|`;
/// for `t < 1e-8` the coefficients use their second-order Taylor expansions.
pub fn so3_exp(v: &Vec3) -> RotationMatrix3 {
    let theta = v.norm();
    let k = skew(v);
    let theta2 = theta * theta;
    let (a, b) = if theta < SMALL_ANGLE {
        (1.0 - theta2 / 6.0, 0.5 - theta2 / 24.0)
    } else {
        (theta.sin() / theta, (1.0 - theta.cos()) / theta2)
    };
    RotationMatrix3::new_unchecked(Mat3::identity() + a * k + b * (k * k))
}

/// Planar rotation by `theta` radians:
///
/// ```text
/// rot2(t) = | cos t  -sin t |
///           | sin t   cos t |
/// ```
#[inline]
pub fn rot2(theta: f64) -> RotationMatrix2 {
    let (s, c) = theta.sin_cos();
    RotationMatrix2::new_unchecked(Mat2::new(c, -s, s, c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    #[test]
    fn skew_of_zero_is_zero() {
        assert_eq!(skew(&Vec3::zeros()), Mat3::zeros());
    }

    #[test]
    fn skew_of_e1_matches_definition() {
        let m = skew(&Vec3::new(1.0, 0.0, 0.0));
        let expected = Mat3::new(0.0, 0.0, 0.0, 0.0, 0.0, -1.0, 0.0, 1.0, 0.0);
        assert_eq!(m, expected);
    }

    #[test]
    fn vee_of_zero_is_zero() {
        assert_eq!(vee(&Mat3::zeros()).unwrap(), Vec3::zeros());
    }

    #[test]
    fn vee_inverts_skew() {
        let v = Vec3::new(1.0, -1.5, 2.5);
        assert_eq!(vee(&skew(&v)).unwrap(), v);
    }

    #[test]
    fn vee_rejects_non_skew() {
        let m = Mat3::new(0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
        assert!(matches!(vee(&m), Err(LinalgError::NotSkew { .. })));
    }

    #[test]
    fn frobenius_identity_with_itself() {
        let i = Mat3::identity();
        assert_eq!(frobenius_inner(&i, &i), 3.0);
    }

    #[test]
    fn frobenius_with_zero() {
        let a = Mat3::new(1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0);
        assert_eq!(frobenius_inner(&a, &Mat3::zeros()), 0.0);
    }

    #[test]
    fn so3_exp_of_zero_is_identity() {
        assert_eq!(*so3_exp(&Vec3::zeros()).matrix(), Mat3::identity());
    }

    #[test]
    fn so3_exp_quarter_pi_about_e1() {
        let r = so3_exp(&Vec3::new(FRAC_PI_4, 0.0, 0.0));
        let h = FRAC_PI_4.cos(); // = sqrt(2)/2
        let expected = Mat3::new(1.0, 0.0, 0.0, 0.0, h, -h, 0.0, h, h);
        assert_relative_eq!(*r.matrix(), expected, epsilon = 1e-15);
    }

    #[test]
    fn so3_exp_small_angle_fallback_continuous() {
        // Values straddling the Taylor threshold must agree closely.
        let below = so3_exp(&Vec3::new(9e-9, 0.0, 0.0));
        let above = so3_exp(&Vec3::new(1.1e-8, 0.0, 0.0));
        assert_abs_diff_eq!(*below.matrix(), *above.matrix(), epsilon = 1e-14);
    }

    #[test]
    fn rot2_basics() {
        assert_eq!(*rot2(0.0).matrix(), Mat2::identity());
        let q = rot2(FRAC_PI_2);
        assert_relative_eq!(*q.matrix(), Mat2::new(0.0, -1.0, 1.0, 0.0), epsilon = 1e-15);
    }

    #[test]
    fn rot2_periodicity() {
        let theta = 0.7;
        let a = rot2(theta);
        let b = rot2(theta + 2.0 * PI);
        assert_abs_diff_eq!(*a.matrix(), *b.matrix(), epsilon = 1e-12);
    }

    #[test]
    fn rotation3_rejects_non_orthonormal() {
        let m = Mat3::identity() * 1.5;
        assert!(matches!(
            RotationMatrix3::from_matrix(m),
            Err(LinalgError::NotOrthonormal { .. })
        ));
    }

    #[test]
    fn rotation3_rejects_reflection() {
        let m = Mat3::from_diagonal(&Vec3::new(1.0, 1.0, -1.0));
        assert!(matches!(
            RotationMatrix3::from_matrix(m),
            Err(LinalgError::NonPositiveDeterminant { .. })
        ));
    }

    #[test]
    fn rotation2_rejects_non_finite() {
        let m = Mat2::new(f64::NAN, 0.0, 0.0, 1.0);
        assert!(matches!(
            RotationMatrix2::from_matrix(m),
            Err(LinalgError::NonFinite)
        ));
    }

    fn vec3_strategy(range: f64) -> impl Strategy<Value = Vec3> {
        (-range..range, -range..range, -range..range).prop_map(|(x, y, z)| Vec3::new(x, y, z))
    }

    fn mat3_strategy(range: f64) -> impl Strategy<Value = Mat3> {
        proptest::collection::vec(-range..range, 9)
            .prop_map(|v| Mat3::from_row_slice(&v))
    }

    proptest! {
        #[test]
        fn skew_is_antisymmetric(v in vec3_strategy(10.0)) {
            let m = skew(&v);
            prop_assert_eq!(m + m.transpose(), Mat3::zeros());
        }

        #[test]
        fn skew_acts_as_cross_product(v in vec3_strategy(10.0), w in vec3_strategy(10.0)) {
            let lhs = skew(&v) * w;
            let rhs = v.cross(&w);
            prop_assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + v.norm() * w.norm()));
        }

        #[test]
        fn vee_skew_roundtrip(v in vec3_strategy(100.0)) {
            prop_assert_eq!(vee(&skew(&v)).unwrap(), v);
        }

        #[test]
        fn frobenius_matches_elementwise_sum(a in mat3_strategy(10.0), b in mat3_strategy(10.0)) {
            // Independent element-wise route.
            let brute: f64 = a.iter().zip(b.iter()).map(|(x, y)| x * y).sum();
            prop_assert!((frobenius_inner(&a, &b) - brute).abs() <= 1e-12 * (1.0 + brute.abs()));
        }

        #[test]
        fn so3_exp_is_orthogonal(v in vec3_strategy(6.0)) {
            let r = so3_exp(&v);
            let defect = (r.matrix().transpose() * r.matrix() - Mat3::identity()).norm();
            prop_assert!(defect <= 1e-12);
            prop_assert!((r.matrix().determinant() - 1.0).abs() <= 1e-12);
        }

        #[test]
        fn so3_exp_inverse_is_transpose(v in vec3_strategy(6.0)) {
            let r = so3_exp(&v);
            let rinv = so3_exp(&(-v));
            prop_assert!((rinv.matrix() - r.matrix().transpose()).norm() <= 1e-12);
        }
    }
}
