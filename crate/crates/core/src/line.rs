//! Joint axes as spatial lines and the pairwise relations used to place
//! DH-convention frames.

use crate::error::{Error, Result};
use crate::model::JointKind;
use crate::se3::{Screw, UnitVec3, Vec3, VALIDITY_TOL};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Line {
    pub point: Vec3,
    pub direction: UnitVec3,
}

impl Line {
    pub fn new(point: Vec3, direction: UnitVec3) -> Self {
        Self { point, direction }
    }

    /// Normalizes `direction`; panics on a zero vector.
    pub fn through(point: Vec3, direction: Vec3) -> Self {
        Self::new(point, UnitVec3::new_normalize(direction))
    }

    pub fn distance_to_point(&self, p: &Vec3) -> f64 {
        let d = p - self.point;
        (d - self.direction.into_inner() * d.dot(&self.direction)).norm()
    }

    /// Orthogonal projection of `p` onto the line.
    pub fn foot_of(&self, p: &Vec3) -> Vec3 {
        self.point + self.direction.into_inner() * (p - self.point).dot(&self.direction)
    }

    pub fn flipped(&self) -> Line {
        Line::new(self.point, -self.direction)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LineRelation {
    Skew,
    /// Distinct lines with parallel or anti-parallel directions.
    Parallel,
    Coincident,
    /// Same line, opposite directions.
    CoincidentOpposite,
    IntersectingAtAngle,
}

pub fn classify_pair(l1: &Line, l2: &Line, tol: f64) -> LineRelation {
    let d1 = l1.direction.into_inner();
    let d2 = l2.direction.into_inner();
    let cross = d1.cross(&d2);
    if cross.norm() < tol {
        if l1.distance_to_point(&l2.point) < tol {
            if d1.dot(&d2) > 0.0 {
                LineRelation::Coincident
            } else {
                LineRelation::CoincidentOpposite
            }
        } else {
            LineRelation::Parallel
        }
    } else {
        let normal = cross.normalize();
        if (l2.point - l1.point).dot(&normal).abs() < tol {
            LineRelation::IntersectingAtAngle
        } else {
            LineRelation::Skew
        }
    }
}

/// Closest points of two non-parallel lines, `(on l1, on l2)`.
fn closest_points(l1: &Line, l2: &Line) -> (Vec3, Vec3) {
    let d1 = l1.direction.into_inner();
    let d2 = l2.direction.into_inner();
    let w = l1.point - l2.point;
    let b = d1.dot(&d2);
    let d = d1.dot(&w);
    let e = d2.dot(&w);
    let denom = 1.0 - b * b;
    let s = (b * e - d) / denom;
    let t = (e - b * d) / denom;
    (l1.point + d1 * s, l2.point + d2 * t)
}

/// Feet `(p1, p2)` of the common perpendicular, `p1` on `l1` and `p2` on `l2`.
///
/// For parallel lines the perpendicular is anchored at `l1.point`.
pub fn common_perpendicular(l1: &Line, l2: &Line, tol: f64) -> Result<(Vec3, Vec3)> {
    match classify_pair(l1, l2, tol) {
        LineRelation::Skew => Ok(closest_points(l1, l2)),
        LineRelation::Parallel => Ok((l1.point, l2.foot_of(&l1.point))),
        other => Err(Error::NoUniqueNormal(other)),
    }
}

/// Intersection of two lines meeting at an angle; the returned point lies
/// exactly on `l2`.
pub fn intersection_point(l1: &Line, l2: &Line, tol: f64) -> Result<Vec3> {
    match classify_pair(l1, l2, tol) {
        LineRelation::IntersectingAtAngle => Ok(closest_points(l1, l2).1),
        _ => Err(Error::NotIntersecting),
    }
}

/// Point of a revolute screw axis closest to the origin, `omega x v`.
pub fn screw_axis_point(s: &Screw) -> Result<Vec3> {
    match s.kind(VALIDITY_TOL)? {
        JointKind::Revolute => Ok(s.omega.cross(&s.v)),
        JointKind::Prismatic => Err(Error::InvalidScrew(
            "prismatic screw carries no axis position".into(),
        )),
    }
}
