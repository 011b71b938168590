//! Forward kinematics for every representation.
//!
//! Joint values are displacements from the home configuration; any home
//! offset lives inside the model. Agreement of these evaluators across
//! converted models is what defines a correct conversion.

use crate::error::{Error, Result};
use crate::model::{DhModel, GjdModel, Model, PoeModel, RpyXyzModel};
use crate::se3::{twist_exp, Transform};

fn check_len(expected: usize, q: &[f64]) -> Result<()> {
    if expected != q.len() {
        return Err(Error::JointCountMismatch {
            expected,
            actual: q.len(),
        });
    }
    Ok(())
}

/// `base * prod A_i(q_i) * tool`
pub fn fk_dh(dh: &DhModel, q: &[f64]) -> Result<Transform> {
    check_len(dh.rows.len(), q)?;
    let chain = dh
        .rows
        .iter()
        .zip(q)
        .fold(dh.base.transform(), |acc, (row, &qi)| acc * row.transform_at(qi));
    Ok(chain * dh.tool)
}

/// `prod exp([S_i] q_i) * M`
pub fn fk_poe(poe: &PoeModel, q: &[f64]) -> Result<Transform> {
    check_len(poe.screws.len(), q)?;
    let mut acc = Transform::identity();
    for (s, &qi) in poe.screws.iter().zip(q) {
        acc = acc * twist_exp(s, qi)?;
    }
    Ok(acc * poe.m)
}

/// `row_1 row_2 M(q_1) row_3 M(q_2) ... row_{n+1} M(q_n) row_{n+2}`, with the
/// joint motion acting about/along the local z-axis.
pub fn fk_rpyxyz(model: &RpyXyzModel, q: &[f64]) -> Result<Transform> {
    check_len(model.kinds.len(), q)?;
    let n = model.kinds.len();
    if model.rows.len() != n + 2 {
        return Err(Error::Invalid(crate::model::Validate::validate(model, 0.0)));
    }
    let mut acc = model.rows[0].to_transform();
    for ((row, kind), &qi) in model.rows[1..].iter().zip(&model.kinds).zip(q) {
        acc = acc * row.to_transform() * kind.motion(qi);
    }
    Ok(acc * model.rows[n + 1].to_transform())
}

/// `prod (J_{i-1}^-1 J_i) M(q_i) * J_n^-1 J_{n+1}` with `J_0 = I`.
pub fn fk_gjd(g: &GjdModel, q: &[f64]) -> Result<Transform> {
    check_len(g.joint_frames.len(), q)?;
    if g.kinds.len() != g.joint_frames.len() {
        return Err(Error::Invalid(crate::model::Validate::validate(g, 0.0)));
    }
    let n = g.joint_frames.len();
    let mut acc = Transform::identity();
    for i in 1..=n {
        let partial = g.frame_or_base(i - 1).inverse() * g.joint_frames[i - 1];
        acc = acc * partial * g.kinds[i - 1].motion(q[i - 1]);
    }
    Ok(acc * (g.frame_or_base(n).inverse() * g.tool_frame))
}

/// Common forward-kinematics interface over all representations.
pub trait ForwardKinematics {
    fn joint_count(&self) -> usize;

    fn forward(&self, q: &[f64]) -> Result<Transform>;

    fn home(&self) -> Result<Transform> {
        self.forward(&vec![0.0; self.joint_count()])
    }
}

impl ForwardKinematics for DhModel {
    fn joint_count(&self) -> usize {
        self.rows.len()
    }

    fn forward(&self, q: &[f64]) -> Result<Transform> {
        fk_dh(self, q)
    }
}

impl ForwardKinematics for PoeModel {
    fn joint_count(&self) -> usize {
        self.screws.len()
    }

    fn forward(&self, q: &[f64]) -> Result<Transform> {
        fk_poe(self, q)
    }
}

impl ForwardKinematics for RpyXyzModel {
    fn joint_count(&self) -> usize {
        self.kinds.len()
    }

    fn forward(&self, q: &[f64]) -> Result<Transform> {
        fk_rpyxyz(self, q)
    }
}

impl ForwardKinematics for GjdModel {
    fn joint_count(&self) -> usize {
        self.joint_frames.len()
    }

    fn forward(&self, q: &[f64]) -> Result<Transform> {
        fk_gjd(self, q)
    }
}

impl ForwardKinematics for Model {
    fn joint_count(&self) -> usize {
        Model::joint_count(self)
    }

    fn forward(&self, q: &[f64]) -> Result<Transform> {
        match self {
            Model::Dh(m) => fk_dh(m, q),
            Model::Poe(m) => fk_poe(m, q),
            Model::RpyXyz(m) => fk_rpyxyz(m, q),
            Model::Gjd(m) => fk_gjd(m, q),
        }
    }
}
