//! Rigid-body transforms, roll-pitch-yaw angles and joint twists.
//!
//! [`Transform`] is the common currency of the crate: every representation is
//! converted to and from chains of homogeneous SE(3) transforms. Values are
//! plain `Copy` data and all operations are pure.

use std::f64::consts::{PI, TAU};
use std::ops::Mul;

use nalgebra::{Matrix3, Matrix4, Unit, Vector3};

use crate::error::{Error, Result};
use crate::model::JointKind;

pub type Vec3 = Vector3<f64>;
pub type UnitVec3 = Unit<Vector3<f64>>;

/// Tolerance for validity checks (orthonormality, unit length).
pub const VALIDITY_TOL: f64 = 1e-9;
/// Tolerance for algebraic identities such as `T * T^-1 = I`.
pub const IDENTITY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub fn unit(self) -> Vec3 {
        match self {
            Axis::X => Vec3::x(),
            Axis::Y => Vec3::y(),
            Axis::Z => Vec3::z(),
        }
    }
}

/// Wraps an angle into `(-pi, pi]`.
pub fn normalize_angle(angle: f64) -> f64 {
    let mut r = angle.rem_euclid(TAU);
    if r > PI {
        r -= TAU;
    }
    // rem_euclid can round up to exactly TAU
    if r <= -PI {
        r += TAU;
    }
    r + 0.0
}

/// Homogeneous transform with an implicit `[0, 0, 0, 1]` bottom row.
///
/// The rotation block is stored as a plain matrix so that malformed input can
/// be represented and reported by validation; use [`Transform::is_valid`] or
/// [`Transform::try_from_matrix`] where the invariant matters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transform {
    rotation: Matrix3<f64>,
    translation: Vec3,
}

impl Default for Transform {
    fn default() -> Self {
        Self::identity()
    }
}

impl Transform {
    pub fn identity() -> Self {
        Self {
            rotation: Matrix3::identity(),
            translation: Vec3::zeros(),
        }
    }

    pub fn from_parts(rotation: Matrix3<f64>, translation: Vec3) -> Self {
        Self {
            rotation,
            translation,
        }
    }

    pub fn from_rotation(rotation: Matrix3<f64>) -> Self {
        Self::from_parts(rotation, Vec3::zeros())
    }

    pub fn from_translation(translation: Vec3) -> Self {
        Self::from_parts(Matrix3::identity(), translation)
    }

    /// Builds a transform from a 4x4 matrix, rejecting anything that is not
    /// an SE(3) element within `tol`.
    pub fn try_from_matrix(m: &Matrix4<f64>, tol: f64) -> Result<Self> {
        if !is_valid_se3(m, tol) {
            return Err(Error::Parse("matrix is not a valid SE(3) transform".into()));
        }
        Ok(Self::from_matrix_unchecked(m))
    }

    /// Takes the upper 3x4 block as-is; the bottom row is ignored.
    pub fn from_matrix_unchecked(m: &Matrix4<f64>) -> Self {
        Self {
            rotation: m.fixed_view::<3, 3>(0, 0).into_owned(),
            translation: m.fixed_view::<3, 1>(0, 3).into_owned(),
        }
    }

    /// Row-major 16 numbers, bottom row included.
    pub fn from_row_major(values: &[f64; 16]) -> Self {
        Self::from_matrix_unchecked(&Matrix4::from_row_slice(values))
    }

    pub fn to_row_major(&self) -> [f64; 16] {
        let m = self.to_matrix();
        let mut out = [0.0; 16];
        for r in 0..4 {
            for c in 0..4 {
                out[r * 4 + c] = m[(r, c)];
            }
        }
        out
    }

    pub fn to_matrix(&self) -> Matrix4<f64> {
        let mut m = Matrix4::identity();
        m.fixed_view_mut::<3, 3>(0, 0).copy_from(&self.rotation);
        m.fixed_view_mut::<3, 1>(0, 3).copy_from(&self.translation);
        m
    }

    /// Pure rotation about a principal axis.
    pub fn rot(axis: Axis, angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        let r = match axis {
            Axis::X => Matrix3::new(1.0, 0.0, 0.0, 0.0, c, -s, 0.0, s, c),
            Axis::Y => Matrix3::new(c, 0.0, s, 0.0, 1.0, 0.0, -s, 0.0, c),
            Axis::Z => Matrix3::new(c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0),
        };
        Self::from_rotation(r)
    }

    pub fn rot_x(angle: f64) -> Self {
        Self::rot(Axis::X, angle)
    }

    pub fn rot_y(angle: f64) -> Self {
        Self::rot(Axis::Y, angle)
    }

    pub fn rot_z(angle: f64) -> Self {
        Self::rot(Axis::Z, angle)
    }

    /// Pure translation by `d` along a principal axis.
    pub fn trans_axis(axis: Axis, d: f64) -> Self {
        Self::from_translation(axis.unit() * d)
    }

    /// Standard DH partial transform `Rz(theta) Tz(d) Tx(a) Rx(alpha)`.
    pub fn dh(a: f64, d: f64, alpha: f64, theta: f64) -> Self {
        let (st, ct) = theta.sin_cos();
        let (sa, ca) = alpha.sin_cos();
        Self::from_parts(
            Matrix3::new(ct, -st * ca, st * sa, st, ct * ca, -ct * sa, 0.0, sa, ca),
            Vec3::new(a * ct, a * st, d),
        )
    }

    pub fn rotation(&self) -> &Matrix3<f64> {
        &self.rotation
    }

    pub fn translation(&self) -> &Vec3 {
        &self.translation
    }

    pub fn x_axis(&self) -> Vec3 {
        self.rotation.column(0).into_owned()
    }

    pub fn y_axis(&self) -> Vec3 {
        self.rotation.column(1).into_owned()
    }

    pub fn z_axis(&self) -> Vec3 {
        self.rotation.column(2).into_owned()
    }

    /// `self * other`, with `other` expressed in the frame of `self`.
    pub fn compose(&self, other: &Transform) -> Transform {
        Transform {
            rotation: self.rotation * other.rotation,
            translation: self.rotation * other.translation + self.translation,
        }
    }

    /// Inverse assuming an orthonormal rotation block.
    pub fn inverse(&self) -> Transform {
        let rt = self.rotation.transpose();
        Transform {
            rotation: rt,
            translation: -(rt * self.translation),
        }
    }

    pub fn transform_point(&self, p: &Vec3) -> Vec3 {
        self.rotation * p + self.translation
    }

    pub fn transform_vector(&self, v: &Vec3) -> Vec3 {
        self.rotation * v
    }

    /// Largest element-wise difference of the 3x4 blocks.
    pub fn max_abs_diff(&self, other: &Transform) -> f64 {
        let dr = (self.rotation - other.rotation).abs().max();
        let dt = (self.translation - other.translation).abs().max();
        dr.max(dt)
    }

    pub fn approx_eq(&self, other: &Transform, tol: f64) -> bool {
        self.max_abs_diff(other) <= tol
    }

    pub fn is_valid(&self, tol: f64) -> bool {
        rotation_defect(&self.rotation).is_some_and(|d| d <= tol)
            && self.translation.iter().all(|v| v.is_finite())
    }

    /// Nearest proper rigid transform, projecting the rotation block onto
    /// SO(3) through its polar decomposition.
    pub fn orthonormalized(&self) -> Transform {
        Transform {
            rotation: nearest_rotation(&self.rotation),
            translation: self.translation,
        }
    }
}

impl Mul for Transform {
    type Output = Transform;

    fn mul(self, rhs: Transform) -> Transform {
        self.compose(&rhs)
    }
}

impl Mul<&Transform> for &Transform {
    type Output = Transform;

    fn mul(self, rhs: &Transform) -> Transform {
        self.compose(rhs)
    }
}

/// Worst violation among `R^T R = I` and `det R = 1`, or `None` if the
/// matrix contains non-finite values.
fn rotation_defect(r: &Matrix3<f64>) -> Option<f64> {
    if !r.iter().all(|v| v.is_finite()) {
        return None;
    }
    let ortho = (r.transpose() * r - Matrix3::identity()).abs().max();
    let det = (r.determinant() - 1.0).abs();
    Some(ortho.max(det))
}

/// `max |R^T R - I|`, infinite for non-finite input.
pub(crate) fn orthonormality_error(r: &Matrix3<f64>) -> f64 {
    if !r.iter().all(|v| v.is_finite()) {
        return f64::INFINITY;
    }
    (r.transpose() * r - Matrix3::identity()).abs().max()
}

fn nearest_rotation(r: &Matrix3<f64>) -> Matrix3<f64> {
    let svd = r.svd(true, true);
    let u = svd.u.expect("svd u");
    let v_t = svd.v_t.expect("svd v_t");
    let mut fix = Matrix3::identity();
    if (u * v_t).determinant() < 0.0 {
        fix[(2, 2)] = -1.0;
    }
    u * fix * v_t
}

/// True iff `m` is an SE(3) element within `tol`: orthonormal rotation block,
/// determinant +1, finite translation and bottom row `[0, 0, 0, 1]`.
pub fn is_valid_se3(m: &Matrix4<f64>, tol: f64) -> bool {
    let bottom = [m[(3, 0)], m[(3, 1)], m[(3, 2)], m[(3, 3)] - 1.0];
    if bottom.iter().any(|v| !v.is_finite() || v.abs() > tol) {
        return false;
    }
    Transform::from_matrix_unchecked(m).is_valid(tol)
}

/// Fixed-axis roll-pitch-yaw angles, `R = Rz(yaw) Ry(pitch) Rx(roll)`.
///
/// This is the convention of the URDF `rpy` attribute.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Rpy {
    pub roll: f64,
    pub pitch: f64,
    pub yaw: f64,
}

impl Rpy {
    pub fn new(roll: f64, pitch: f64, yaw: f64) -> Self {
        Self { roll, pitch, yaw }
    }
}

pub fn rpy_to_rotation(roll: f64, pitch: f64, yaw: f64) -> Matrix3<f64> {
    let (sr, cr) = roll.sin_cos();
    let (sp, cp) = pitch.sin_cos();
    let (sy, cy) = yaw.sin_cos();
    Matrix3::new(
        cy * cp,
        cy * sp * sr - sy * cr,
        cy * sp * cr + sy * sr,
        sy * cp,
        sy * sp * sr + cy * cr,
        sy * sp * cr - cy * sr,
        -sp,
        cp * sr,
        cp * cr,
    )
}

/// Inverse of [`rpy_to_rotation`]. Pitch lies in `[-pi/2, pi/2]`; in gimbal
/// lock roll is set to zero and yaw carries the remaining freedom.
pub fn rotation_to_rpy(r: &Matrix3<f64>) -> Rpy {
    let cos_pitch = r[(0, 0)].hypot(r[(1, 0)]);
    let pitch = (-r[(2, 0)]).atan2(cos_pitch);
    if cos_pitch < VALIDITY_TOL {
        let yaw = (-r[(0, 1)]).atan2(r[(1, 1)]);
        return Rpy::new(0.0, pitch, normalize_angle(yaw));
    }
    let roll = r[(2, 1)].atan2(r[(2, 2)]);
    let yaw = r[(1, 0)].atan2(r[(0, 0)]);
    Rpy::new(normalize_angle(roll), pitch, normalize_angle(yaw))
}

/// Normalized twist `(omega, v)` of a single joint axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Screw {
    pub omega: Vec3,
    pub v: Vec3,
}

impl Screw {
    pub fn new(omega: Vec3, v: Vec3) -> Self {
        Self { omega, v }
    }

    /// Revolute screw about the line through `point` along `axis`.
    pub fn revolute(axis: &UnitVec3, point: &Vec3) -> Self {
        Self::new(axis.into_inner(), -axis.cross(point))
    }

    pub fn prismatic(direction: &UnitVec3) -> Self {
        Self::new(Vec3::zeros(), direction.into_inner())
    }

    pub fn from_array(s: [f64; 6]) -> Self {
        Self::new(Vec3::new(s[0], s[1], s[2]), Vec3::new(s[3], s[4], s[5]))
    }

    pub fn to_array(&self) -> [f64; 6] {
        [
            self.omega.x,
            self.omega.y,
            self.omega.z,
            self.v.x,
            self.v.y,
            self.v.z,
        ]
    }

    /// Revolute if `|omega| = 1`, prismatic if `omega = 0` and `|v| = 1`.
    pub fn kind(&self, tol: f64) -> Result<JointKind> {
        let w = self.omega.norm();
        if !w.is_finite() || !self.v.norm().is_finite() {
            return Err(Error::InvalidScrew("non-finite component".into()));
        }
        if (w - 1.0).abs() <= tol {
            Ok(JointKind::Revolute)
        } else if w <= tol && (self.v.norm() - 1.0).abs() <= tol {
            Ok(JointKind::Prismatic)
        } else {
            Err(Error::InvalidScrew(
                "screw neither unit-revolute nor prismatic".into(),
            ))
        }
    }

    /// `omega . v`; zero for pure revolute joints.
    pub fn pitch(&self) -> f64 {
        self.omega.dot(&self.v)
    }

    /// Rescales to a unit screw and removes any pitch component.
    ///
    /// Intended for rounded input data; the axis line is preserved.
    pub fn projected(&self) -> Screw {
        let w = self.omega.norm();
        if w > VALIDITY_TOL {
            let omega = self.omega / w;
            let v = self.v / w;
            Screw::new(omega, v - omega * omega.dot(&v))
        } else {
            Screw::new(Vec3::zeros(), self.v.normalize())
        }
    }
}

fn skew(w: &Vec3) -> Matrix3<f64> {
    Matrix3::new(0.0, -w.z, w.y, w.z, 0.0, -w.x, -w.y, w.x, 0.0)
}

/// Matrix exponential of the twist `s` scaled by the joint value `q`.
pub fn twist_exp(s: &Screw, q: f64) -> Result<Transform> {
    match s.kind(VALIDITY_TOL)? {
        JointKind::Prismatic => Ok(Transform::from_translation(s.v * q)),
        JointKind::Revolute => {
            let w = skew(&s.omega);
            let w2 = w * w;
            let (sq, cq) = q.sin_cos();
            let rotation = Matrix3::identity() + w * sq + w2 * (1.0 - cq);
            let g = Matrix3::identity() * q + w * (1.0 - cq) + w2 * (q - sq);
            Ok(Transform::from_parts(rotation, g * s.v))
        }
    }
}
