//! The four kinematic representations and their validation.
//!
//! [`GjdModel`] is the hub: every joint frame expressed absolutely in the
//! base frame at the home configuration, z-axis along the joint axis.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Diagnostic, Error, Result};
use crate::se3::{self, rotation_to_rpy, rpy_to_rotation, Screw, Transform, Vec3};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum JointKind {
    Revolute,
    Prismatic,
}

impl JointKind {
    /// Joint motion about/along the local z-axis.
    pub fn motion(self, q: f64) -> Transform {
        match self {
            JointKind::Revolute => Transform::rot_z(q),
            JointKind::Prismatic => Transform::trans_axis(se3::Axis::Z, q),
        }
    }
}

impl fmt::Display for JointKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            JointKind::Revolute => "revolute",
            JointKind::Prismatic => "prismatic",
        })
    }
}

/// Four standard DH parameters of one partial transform.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DhParams {
    pub a: f64,
    pub d: f64,
    pub alpha: f64,
    pub theta: f64,
}

impl DhParams {
    pub fn new(a: f64, d: f64, alpha: f64, theta: f64) -> Self {
        Self { a, d, alpha, theta }
    }

    pub fn transform(&self) -> Transform {
        Transform::dh(self.a, self.d, self.alpha, self.theta)
    }

    fn is_finite(&self) -> bool {
        [self.a, self.d, self.alpha, self.theta]
            .iter()
            .all(|v| v.is_finite())
    }
}

/// One joint row. The stored `theta` (revolute) or `d` (prismatic) is the
/// home offset of the joint variable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DhRow {
    pub params: DhParams,
    pub kind: JointKind,
}

impl DhRow {
    pub fn new(a: f64, d: f64, alpha: f64, theta: f64, kind: JointKind) -> Self {
        Self {
            params: DhParams::new(a, d, alpha, theta),
            kind,
        }
    }

    pub fn revolute(a: f64, d: f64, alpha: f64, theta: f64) -> Self {
        Self::new(a, d, alpha, theta, JointKind::Revolute)
    }

    pub fn prismatic(a: f64, d: f64, alpha: f64, theta: f64) -> Self {
        Self::new(a, d, alpha, theta, JointKind::Prismatic)
    }

    pub fn home_offset(&self) -> f64 {
        match self.kind {
            JointKind::Revolute => self.params.theta,
            JointKind::Prismatic => self.params.d,
        }
    }

    /// Partial transform with the joint displaced by `q` from home.
    pub fn transform_at(&self, q: f64) -> Transform {
        let mut p = self.params;
        match self.kind {
            JointKind::Revolute => p.theta += q,
            JointKind::Prismatic => p.d += q,
        }
        p.transform()
    }
}

/// Standard DH table: a fixed base row, one row per joint and a tool offset.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct DhModel {
    pub base: DhParams,
    pub rows: Vec<DhRow>,
    pub tool: Transform,
}

/// Product-of-exponentials model: base-frame screws and home tool pose.
#[derive(Debug, Clone, PartialEq)]
pub struct PoeModel {
    pub m: Transform,
    pub screws: Vec<Screw>,
}

impl PoeModel {
    /// Joint kinds inferred from the screws (`omega = 0` means prismatic).
    pub fn kinds(&self, tol: f64) -> Result<Vec<JointKind>> {
        self.screws.iter().map(|s| s.kind(tol)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RpyXyzRow {
    pub roll: f64,
    pub pitch: f64,
    pub yaw: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl RpyXyzRow {
    pub fn new(roll: f64, pitch: f64, yaw: f64, x: f64, y: f64, z: f64) -> Self {
        Self {
            roll,
            pitch,
            yaw,
            x,
            y,
            z,
        }
    }

    pub fn from_array(v: [f64; 6]) -> Self {
        Self::new(v[0], v[1], v[2], v[3], v[4], v[5])
    }

    pub fn to_array(&self) -> [f64; 6] {
        [self.roll, self.pitch, self.yaw, self.x, self.y, self.z]
    }

    /// `Trans(x, y, z) Rz(yaw) Ry(pitch) Rx(roll)`
    pub fn to_transform(&self) -> Transform {
        Transform::from_parts(
            rpy_to_rotation(self.roll, self.pitch, self.yaw),
            Vec3::new(self.x, self.y, self.z),
        )
    }

    pub fn from_transform(t: &Transform) -> Self {
        let rpy = rotation_to_rpy(t.rotation());
        let p = t.translation();
        Self::new(rpy.roll, rpy.pitch, rpy.yaw, p.x, p.y, p.z)
    }

    pub fn is_zero(&self) -> bool {
        self.to_array().iter().all(|v| *v == 0.0)
    }
}

/// Chain of partial transforms: base row, one row per joint, tool row.
#[derive(Debug, Clone, PartialEq)]
pub struct RpyXyzModel {
    pub rows: Vec<RpyXyzRow>,
    pub kinds: Vec<JointKind>,
}

/// Global joint description: absolute joint frames plus the tool frame.
#[derive(Debug, Clone, PartialEq)]
pub struct GjdModel {
    pub joint_frames: Vec<Transform>,
    pub kinds: Vec<JointKind>,
    pub tool_frame: Transform,
}

impl GjdModel {
    /// Frame `i` for `i` in `0..=n`, where frame 0 is the base.
    pub(crate) fn frame_or_base(&self, i: usize) -> Transform {
        if i == 0 {
            Transform::identity()
        } else {
            self.joint_frames[i - 1]
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Representation {
    Dh,
    Poe,
    RpyXyz,
    Gjd,
}

impl Representation {
    pub fn as_str(self) -> &'static str {
        match self {
            Representation::Dh => "dh",
            Representation::Poe => "poe",
            Representation::RpyXyz => "rpyxyz",
            Representation::Gjd => "gjd",
        }
    }
}

impl fmt::Display for Representation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Representation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dh" => Ok(Representation::Dh),
            "poe" => Ok(Representation::Poe),
            "rpyxyz" => Ok(Representation::RpyXyz),
            "gjd" => Ok(Representation::Gjd),
            other => Err(Error::Parse(format!("unknown representation `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Model {
    Dh(DhModel),
    Poe(PoeModel),
    RpyXyz(RpyXyzModel),
    Gjd(GjdModel),
}

impl Model {
    pub fn representation(&self) -> Representation {
        match self {
            Model::Dh(_) => Representation::Dh,
            Model::Poe(_) => Representation::Poe,
            Model::RpyXyz(_) => Representation::RpyXyz,
            Model::Gjd(_) => Representation::Gjd,
        }
    }

    pub fn joint_count(&self) -> usize {
        match self {
            Model::Dh(m) => m.rows.len(),
            Model::Poe(m) => m.screws.len(),
            Model::RpyXyz(m) => m.kinds.len(),
            Model::Gjd(m) => m.joint_frames.len(),
        }
    }
}

impl From<DhModel> for Model {
    fn from(m: DhModel) -> Self {
        Model::Dh(m)
    }
}

impl From<PoeModel> for Model {
    fn from(m: PoeModel) -> Self {
        Model::Poe(m)
    }
}

impl From<RpyXyzModel> for Model {
    fn from(m: RpyXyzModel) -> Self {
        Model::RpyXyz(m)
    }
}

impl From<GjdModel> for Model {
    fn from(m: GjdModel) -> Self {
        Model::Gjd(m)
    }
}

/// Invariant checking; an empty result means the model is valid.
pub trait Validate {
    fn validate(&self, tol: f64) -> Vec<Diagnostic>;

    fn ensure_valid(&self, tol: f64) -> Result<()> {
        let diagnostics = self.validate(tol);
        if diagnostics.is_empty() {
            Ok(())
        } else {
            Err(Error::Invalid(diagnostics))
        }
    }
}

fn check_transform(location: &str, t: &Transform, tol: f64, out: &mut Vec<Diagnostic>) {
    let r = t.rotation();
    if !r.iter().chain(t.translation().iter()).all(|v| v.is_finite()) {
        out.push(Diagnostic::new(location, "non-finite entries"));
        return;
    }
    if se3::orthonormality_error(r) > tol {
        out.push(Diagnostic::new(location, "rotation not orthonormal"));
    } else if r.determinant() < 0.0 {
        out.push(Diagnostic::new(location, "improper rotation (det = -1)"));
    } else if (r.determinant() - 1.0).abs() > tol {
        out.push(Diagnostic::new(location, "rotation determinant differs from 1"));
    }
}

fn check_finite(location: &str, values: &[f64], out: &mut Vec<Diagnostic>) {
    if values.iter().any(|v| !v.is_finite()) {
        out.push(Diagnostic::new(location, "non-finite value"));
    }
}

impl Validate for DhModel {
    fn validate(&self, tol: f64) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        if !self.base.is_finite() {
            out.push(Diagnostic::new("base", "non-finite value"));
        }
        for (i, row) in self.rows.iter().enumerate() {
            if !row.params.is_finite() {
                out.push(Diagnostic::new(format!("rows[{i}]"), "non-finite value"));
            }
        }
        check_transform("tool", &self.tool, tol, &mut out);
        out
    }
}

impl Validate for PoeModel {
    fn validate(&self, tol: f64) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        check_transform("m", &self.m, tol, &mut out);
        for (i, s) in self.screws.iter().enumerate() {
            let location = format!("screws[{i}]");
            match s.kind(tol) {
                Err(_) => out.push(Diagnostic::new(
                    location,
                    "screw neither unit-revolute nor prismatic",
                )),
                Ok(JointKind::Revolute) if s.pitch().abs() > tol => out.push(Diagnostic::new(
                    location,
                    "screw has non-zero pitch (helical joints are not supported)",
                )),
                Ok(_) => {}
            }
        }
        out
    }
}

impl Validate for RpyXyzModel {
    fn validate(&self, _tol: f64) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        if self.rows.len() != self.kinds.len() + 2 {
            out.push(Diagnostic::new(
                "rows",
                format!(
                    "expected {} rows (base, one per joint, tool), found {}",
                    self.kinds.len() + 2,
                    self.rows.len()
                ),
            ));
        }
        for (i, row) in self.rows.iter().enumerate() {
            check_finite(&format!("rows[{i}]"), &row.to_array(), &mut out);
        }
        out
    }
}

impl Validate for GjdModel {
    fn validate(&self, tol: f64) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        if self.joint_frames.len() != self.kinds.len() {
            out.push(Diagnostic::new(
                "kinds",
                format!(
                    "{} joint frames but {} joint kinds",
                    self.joint_frames.len(),
                    self.kinds.len()
                ),
            ));
        }
        for (i, frame) in self.joint_frames.iter().enumerate() {
            check_transform(&format!("frames[{i}]"), frame, tol, &mut out);
        }
        check_transform("tool", &self.tool_frame, tol, &mut out);
        out
    }
}

impl Validate for Model {
    fn validate(&self, tol: f64) -> Vec<Diagnostic> {
        match self {
            Model::Dh(m) => m.validate(tol),
            Model::Poe(m) => m.validate(tol),
            Model::RpyXyz(m) => m.validate(tol),
            Model::Gjd(m) => m.validate(tol),
        }
    }
}
