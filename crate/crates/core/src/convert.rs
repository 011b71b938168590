//! Mappings between representations, all routed through [`GjdModel`].
//!
//! Joint `i`'s hub frame is the frame whose local z is joint `i`'s axis and
//! in which the joint variable acts as `Rz(q)` or `Tz(q)`. For DH input that
//! is the frame after rows `0..i-1`, before row `i` applies its variable.
//!
//! Frames derived from bare axis lines are placed along common normals:
//!
//! * coincident axes share the previous frame;
//! * coincident but opposed axes take the previous frame turned by `Rx(pi)`;
//! * skew or parallel axes get their origin at the foot of the common normal
//!   on the new axis, x pointing back toward the previous axis (parallel
//!   normals start at the previous origin);
//! * intersecting axes get their origin at the intersection with
//!   `x = omega_i x z_{i-1}`.
//!
//! The base frame serves as frame 0 with its z-axis as the first line. A
//! prismatic screw carries no position, so its axis is anchored at the
//! previously placed origin.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::line::{
    classify_pair, common_perpendicular, intersection_point, screw_axis_point, Line, LineRelation,
};
use crate::model::{
    DhModel, DhParams, DhRow, GjdModel, JointKind, Model, PoeModel, Representation, RpyXyzModel, RpyXyzRow,
    Validate,
};
use crate::se3::{normalize_angle, Screw, Transform, UnitVec3, Vec3, VALIDITY_TOL};

/// Converts between representations with a fixed numeric tolerance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Converter {
    pub tol: f64,
}

impl Default for Converter {
    fn default() -> Self {
        Self { tol: VALIDITY_TOL }
    }
}

impl Converter {
    pub fn new(tol: f64) -> Self {
        Self { tol }
    }

    pub fn dh_to_gjd(&self, dh: &DhModel) -> Result<GjdModel> {
        dh.ensure_valid(self.tol)?;
        let mut current = dh.base.transform();
        let mut joint_frames = Vec::with_capacity(dh.rows.len());
        for row in &dh.rows {
            joint_frames.push(current);
            current = current * row.params.transform();
        }
        Ok(GjdModel {
            joint_frames,
            kinds: dh.rows.iter().map(|r| r.kind).collect(),
            tool_frame: current * dh.tool,
        })
    }

    pub fn poe_to_gjd(&self, poe: &PoeModel) -> Result<GjdModel> {
        poe.ensure_valid(self.tol)?;
        let kinds = poe.kinds(self.tol)?;
        let mut previous = Transform::identity();
        let mut joint_frames = Vec::with_capacity(poe.screws.len());
        for (screw, kind) in poe.screws.iter().zip(&kinds) {
            let axis = match kind {
                JointKind::Revolute => {
                    Line::new(screw_axis_point(screw)?, UnitVec3::new_normalize(screw.omega))
                }
                JointKind::Prismatic => Line::new(*previous.translation(), UnitVec3::new_normalize(screw.v)),
            };
            previous = place_joint_frame(&previous, &axis, self.tol)?;
            joint_frames.push(previous);
        }
        Ok(GjdModel {
            joint_frames,
            kinds,
            tool_frame: poe.m,
        })
    }

    pub fn rpyxyz_to_gjd(&self, model: &RpyXyzModel) -> Result<GjdModel> {
        model.ensure_valid(self.tol)?;
        let mut partials = model.rows.iter().map(RpyXyzRow::to_transform);
        // validated: at least two rows
        let base = partials.next().unwrap_or_default();
        let mut current = base;
        let mut joint_frames = Vec::with_capacity(model.kinds.len());
        for _ in &model.kinds {
            current = current * partials.next().unwrap_or_default();
            joint_frames.push(current);
        }
        let tool_frame = current * partials.next().unwrap_or_default();
        Ok(GjdModel {
            joint_frames,
            kinds: model.kinds.clone(),
            tool_frame,
        })
    }

    pub fn gjd_to_rpyxyz(&self, g: &GjdModel) -> Result<RpyXyzModel> {
        g.ensure_valid(self.tol)?;
        let n = g.joint_frames.len();
        let mut rows = Vec::with_capacity(n + 2);
        rows.push(RpyXyzRow::default());
        for i in 1..=n {
            let partial = g.frame_or_base(i - 1).inverse() * g.joint_frames[i - 1];
            rows.push(RpyXyzRow::from_transform(&partial));
        }
        let tool = g.frame_or_base(n).inverse() * g.tool_frame;
        rows.push(RpyXyzRow::from_transform(&tool));
        Ok(RpyXyzModel {
            rows,
            kinds: g.kinds.clone(),
        })
    }

    pub fn gjd_to_poe(&self, g: &GjdModel) -> Result<PoeModel> {
        g.ensure_valid(self.tol)?;
        let screws = g
            .joint_frames
            .iter()
            .zip(&g.kinds)
            .map(|(frame, kind)| {
                let z = UnitVec3::new_normalize(frame.z_axis());
                match kind {
                    JointKind::Revolute => Screw::revolute(&z, frame.translation()),
                    JointKind::Prismatic => Screw::prismatic(&z),
                }
            })
            .collect();
        Ok(PoeModel {
            m: g.tool_frame,
            screws,
        })
    }

    /// Extracts a DH table. Frames that already form a DH chain are used as
    /// they are; otherwise every joint axis is re-framed by the common-normal
    /// placement first. A tool that no DH row can reach gets a best-fit last
    /// row plus a residual tool transform.
    pub fn gjd_to_dh(&self, g: &GjdModel) -> Result<DhModel> {
        g.ensure_valid(self.tol)?;
        let n = g.joint_frames.len();
        if n == 0 {
            return Ok(DhModel {
                base: DhParams::default(),
                rows: Vec::new(),
                tool: g.tool_frame,
            });
        }
        let frames = if self.is_dh_chain(&g.joint_frames) {
            g.joint_frames.clone()
        } else {
            self.reframe(g)?
        };

        let base = extract_dh(&frames[0]);
        let mut rows = Vec::with_capacity(n);
        for i in 0..n - 1 {
            let partial = frames[i].inverse() * frames[i + 1];
            rows.push(DhRow {
                params: extract_dh(&partial),
                kind: g.kinds[i],
            });
        }

        let last_frame = frames[n - 1];
        let to_tool = last_frame.inverse() * g.tool_frame;
        let last = extract_dh(&to_tool);
        let tool = if has_dh_structure(&to_tool, self.tol) {
            Transform::identity()
        } else {
            (last_frame * last.transform()).inverse() * g.tool_frame
        };
        rows.push(DhRow {
            params: last,
            kind: g.kinds[n - 1],
        });
        Ok(DhModel { base, rows, tool })
    }

    fn is_dh_chain(&self, frames: &[Transform]) -> bool {
        has_dh_structure(&frames[0], self.tol)
            && frames
                .windows(2)
                .all(|w| has_dh_structure(&(w[0].inverse() * w[1]), self.tol))
    }

    fn reframe(&self, g: &GjdModel) -> Result<Vec<Transform>> {
        let mut previous = Transform::identity();
        g.joint_frames
            .iter()
            .map(|frame| {
                let axis = Line::new(*frame.translation(), UnitVec3::new_normalize(frame.z_axis()));
                previous = place_joint_frame(&previous, &axis, self.tol)?;
                Ok(previous)
            })
            .collect()
    }

    pub fn to_gjd(&self, model: &Model) -> Result<GjdModel> {
        match model {
            Model::Dh(m) => self.dh_to_gjd(m),
            Model::Poe(m) => self.poe_to_gjd(m),
            Model::RpyXyz(m) => self.rpyxyz_to_gjd(m),
            Model::Gjd(m) => {
                m.ensure_valid(self.tol)?;
                Ok(m.clone())
            }
        }
    }

    pub fn from_gjd(&self, g: &GjdModel, target: Representation) -> Result<Model> {
        Ok(match target {
            Representation::Dh => Model::Dh(self.gjd_to_dh(g)?),
            Representation::Poe => Model::Poe(self.gjd_to_poe(g)?),
            Representation::RpyXyz => Model::RpyXyz(self.gjd_to_rpyxyz(g)?),
            Representation::Gjd => Model::Gjd(g.clone()),
        })
    }

    /// Source to hub to target.
    pub fn convert(&self, model: &Model, target: Representation) -> Result<Model> {
        let hub = self.to_gjd(model)?;
        self.from_gjd(&hub, target)
    }
}

pub fn dh_to_gjd(dh: &DhModel) -> Result<GjdModel> {
    Converter::default().dh_to_gjd(dh)
}

pub fn poe_to_gjd(poe: &PoeModel) -> Result<GjdModel> {
    Converter::default().poe_to_gjd(poe)
}

pub fn rpyxyz_to_gjd(model: &RpyXyzModel) -> Result<GjdModel> {
    Converter::default().rpyxyz_to_gjd(model)
}

pub fn gjd_to_rpyxyz(g: &GjdModel) -> Result<RpyXyzModel> {
    Converter::default().gjd_to_rpyxyz(g)
}

pub fn gjd_to_dh(g: &GjdModel) -> Result<DhModel> {
    Converter::default().gjd_to_dh(g)
}

pub fn gjd_to_poe(g: &GjdModel) -> Result<PoeModel> {
    Converter::default().gjd_to_poe(g)
}

pub fn convert(model: &Model, target: Representation) -> Result<Model> {
    Converter::default().convert(model, target)
}

/// Places the frame of a joint whose axis is `axis`, relative to the
/// previously placed frame.
pub fn place_joint_frame(previous: &Transform, axis: &Line, tol: f64) -> Result<Transform> {
    let previous_axis = Line::new(
        *previous.translation(),
        UnitVec3::new_normalize(previous.z_axis()),
    );
    let z = axis.direction.into_inner();
    let (origin, x) = match classify_pair(&previous_axis, axis, tol) {
        LineRelation::Coincident => return Ok(*previous),
        LineRelation::CoincidentOpposite => return Ok(*previous * Transform::rot_x(PI)),
        LineRelation::Skew | LineRelation::Parallel => {
            let (on_previous, on_axis) = common_perpendicular(&previous_axis, axis, tol)?;
            (on_axis, on_previous - on_axis)
        }
        LineRelation::IntersectingAtAngle => {
            let origin = intersection_point(&previous_axis, axis, tol)?;
            (origin, z.cross(&previous_axis.direction))
        }
    };
    frame_from_axes(origin, x, z)
}

fn frame_from_axes(origin: Vec3, x: Vec3, z: Vec3) -> Result<Transform> {
    let x = x - z * x.dot(&z);
    let norm = x.norm();
    if !norm.is_finite() || norm == 0.0 {
        return Err(Error::Conversion("degenerate x-axis while placing frame".into()));
    }
    let x = x / norm;
    let y = z.cross(&x);
    Ok(Transform::from_parts(
        nalgebra::Matrix3::from_columns(&[x, y, z]),
        origin,
    ))
}

/// Whether `t` equals `Rz(theta) Tz(d) Tx(a) Rx(alpha)` for some parameters:
/// zero `(3,1)` rotation entry and translation in the plane spanned by z and
/// the rotated x-axis.
pub fn has_dh_structure(t: &Transform, tol: f64) -> bool {
    let r = t.rotation();
    let p = t.translation();
    r[(2, 0)].abs() < tol && (p.x * r[(1, 0)] - p.y * r[(0, 0)]).abs() < tol
}

/// Closed-form DH parameters of a partial transform. Exact when
/// [`has_dh_structure`] holds, a best fit otherwise.
pub fn extract_dh(t: &Transform) -> DhParams {
    let r = t.rotation();
    let p = t.translation();
    let theta = r[(1, 0)].atan2(r[(0, 0)]);
    let alpha = r[(2, 1)].atan2(r[(2, 2)]);
    let (s, c) = theta.sin_cos();
    DhParams {
        a: p.x * c + p.y * s,
        d: p.z,
        alpha: normalize_angle(alpha),
        theta: normalize_angle(theta),
    }
}
