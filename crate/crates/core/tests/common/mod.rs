#![allow(dead_code)]

use std::f64::consts::{FRAC_PI_2, PI};
use std::path::PathBuf;

use kinconv::io::read_model;
use kinconv::model::{
    DhModel, DhParams, DhRow, GjdModel, JointKind, Model, PoeModel, RpyXyzModel, RpyXyzRow,
};
use kinconv::se3::{Screw, Transform, Vec3};
use kinconv::ForwardKinematics;
use nalgebra::{Matrix3, Quaternion, UnitQuaternion};
use rand::Rng;

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

pub fn load(name: &str) -> Model {
    read_model(fixture(name)).expect("fixture parses").model
}

pub fn rrpr_poe() -> PoeModel {
    match load("rrpr_poe.json") {
        Model::Poe(m) => m,
        other => panic!("unexpected {:?}", other.representation()),
    }
}

pub fn rrpr_dh() -> DhModel {
    match load("rrpr_dh.json") {
        Model::Dh(m) => m,
        other => panic!("unexpected {:?}", other.representation()),
    }
}

pub fn rrpr_dh_uncorrected() -> DhModel {
    match load("rrpr_dh_uncorrected.json") {
        Model::Dh(m) => m,
        other => panic!("unexpected {:?}", other.representation()),
    }
}

pub fn rrpr_rpyxyz() -> RpyXyzModel {
    match load("rrpr_rpyxyz.json") {
        Model::RpyXyz(m) => m,
        other => panic!("unexpected {:?}", other.representation()),
    }
}

/// The rounded 3R data, raw.
pub fn three_r_rounded() -> PoeModel {
    match load("three_r_rounded.json") {
        Model::Poe(m) => m,
        other => panic!("unexpected {:?}", other.representation()),
    }
}

/// The rounded 3R data projected onto unit zero-pitch screws and SE(3).
pub fn three_r_poe() -> PoeModel {
    let raw = three_r_rounded();
    PoeModel {
        m: raw.m.orthonormalized(),
        screws: raw.screws.iter().map(Screw::projected).collect(),
    }
}

/// Reference DH table of the 3R robot with its (projected) tool offset.
pub fn three_r_reference_dh() -> DhModel {
    let tool = Transform::from_row_major(&[
        0.651, -0.438, -0.619, 0.105, //
        0.653, 0.739, 0.163, 0.394, //
        0.386, -0.511, 0.767, -0.121, //
        0.0, 0.0, 0.0, 1.0,
    ])
    .orthonormalized();
    DhModel {
        base: DhParams::new(0.0, 0.0, -0.592, 1.7502),
        rows: vec![
            DhRow::revolute(-0.204, 0.088, 0.658, 1.758),
            DhRow::revolute(-0.078, -0.325, 0.467, -0.866),
            DhRow::revolute(-0.515, 0.314, -2.184, -1.743),
        ],
        tool,
    }
}

/// Reference RPY-XYZ table of the 3R robot.
pub fn three_r_reference_rpy() -> RpyXyzModel {
    let rows = [
        [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [0.0998, -0.5851, 0.0, 0.0, 0.0, 0.0],
        [0.6423, 0.1577, -3.0111, 0.2071, 0.0272, 0.0332],
        [0.3616, -0.3037, 0.0622, -0.1089, -0.0199, -0.1006],
        [-2.6489, 0.8582, -2.5611, 0.1168, 0.5115, -0.1124],
    ];
    RpyXyzModel {
        rows: rows.into_iter().map(RpyXyzRow::from_array).collect(),
        kinds: vec![JointKind::Revolute; 3],
    }
}

// ---------------------------------------------------------------------------
// Oracles

pub type M4 = [[f64; 4]; 4];

fn mat_mul(a: &M4, b: &M4) -> M4 {
    let mut c = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            c[i][j] = (0..4).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    c
}

fn to_m4(t: &Transform) -> M4 {
    let v = t.to_row_major();
    let mut m = [[0.0; 4]; 4];
    for (i, row) in m.iter_mut().enumerate() {
        row.copy_from_slice(&v[4 * i..4 * i + 4]);
    }
    m
}

fn from_m4(m: &M4) -> Transform {
    let mut v = [0.0; 16];
    for i in 0..4 {
        v[4 * i..4 * i + 4].copy_from_slice(&m[i]);
    }
    Transform::from_row_major(&v)
}

/// Matrix exponential by scaling and squaring of a truncated Taylor series.
pub fn expm(a: &M4) -> M4 {
    let norm: f64 = a.iter().flatten().map(|v| v.abs()).sum();
    let squarings = if norm > 0.25 {
        (norm / 0.25).log2().ceil() as u32
    } else {
        0
    };
    let scale = 2f64.powi(squarings as i32);
    let a: M4 = a.map(|r| r.map(|v| v / scale));
    let mut result = [[0.0; 4]; 4];
    let mut term = [[0.0; 4]; 4];
    for i in 0..4 {
        result[i][i] = 1.0;
        term[i][i] = 1.0;
    }
    for k in 1..30 {
        term = mat_mul(&term, &a).map(|r| r.map(|v| v / k as f64));
        for i in 0..4 {
            for j in 0..4 {
                result[i][j] += term[i][j];
            }
        }
    }
    for _ in 0..squarings {
        result = mat_mul(&result, &result);
    }
    result
}

/// Product of exponentials evaluated with a generic matrix exponential.
pub fn poe_oracle(poe: &PoeModel, q: &[f64]) -> Transform {
    let mut acc = [[0.0; 4]; 4];
    for (i, row) in acc.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    for (s, &qi) in poe.screws.iter().zip(q) {
        let (w, v) = (s.omega * qi, s.v * qi);
        let twist = [
            [0.0, -w.z, w.y, v.x],
            [w.z, 0.0, -w.x, v.y],
            [-w.y, w.x, 0.0, v.z],
            [0.0, 0.0, 0.0, 0.0],
        ];
        acc = mat_mul(&acc, &expm(&twist));
    }
    from_m4(&mat_mul(&acc, &to_m4(&poe.m)))
}

/// Oriented joint axis `(omega, v)` of each revolute joint, read back from
/// forward kinematics alone: `fk(q e_i) fk(0)^-1 = exp([S_i] q)`, taken at
/// `q = pi/2` where the rotation block gives `[omega]` exactly.
pub fn revolute_axes<F: ForwardKinematics>(model: &F, kinds: &[JointKind]) -> Vec<Option<(Vec3, Vec3)>> {
    let home_inv = model.home().unwrap().inverse();
    let n = kinds.len();
    (0..n)
        .map(|i| {
            if kinds[i] == JointKind::Prismatic {
                return None;
            }
            let mut q = vec![0.0; n];
            q[i] = FRAC_PI_2;
            let t = model.forward(&q).unwrap() * home_inv;
            let r = t.rotation();
            let k = (r - r.transpose()) / 2.0;
            let w = Vec3::new(k[(2, 1)], k[(0, 2)], k[(1, 0)]);
            let g = Matrix3::identity() * FRAC_PI_2 + k + k * k * (FRAC_PI_2 - 1.0);
            let v = g.lu().solve(t.translation()).unwrap();
            Some((w, v))
        })
        .collect()
}

pub fn kinds_of(model: &Model) -> Vec<JointKind> {
    match model {
        Model::Dh(m) => m.rows.iter().map(|r| r.kind).collect(),
        Model::Poe(m) => m.kinds(1e-9).unwrap(),
        Model::RpyXyz(m) => m.kinds.clone(),
        Model::Gjd(m) => m.kinds.clone(),
    }
}

fn unit(v: Vec3) -> Vec3 {
    v / v.norm()
}

/// A frame placed on an axis line, built by solving the 2x2 normal
/// equations of the closest-point problem with Cramer's rule.
pub fn oracle_frame(prev: &Transform, point: Vec3, dir: Vec3, tol: f64) -> Transform {
    let o = *prev.translation();
    let z = prev.z_axis();
    let w = unit(dir);
    let r = point - o;
    let b = z.dot(&w);
    let denom = 1.0 - b * b;
    let (origin, x) = if z.cross(&w).norm() < tol {
        let perp = r - w * r.dot(&w);
        if perp.norm() < tol {
            return if b > 0.0 {
                *prev
            } else {
                *prev * Transform::rot_x(PI)
            };
        }
        (o + perp, unit(-perp))
    } else {
        // minimise |o + s z - point - t w|
        let s = (r.dot(&z) - b * r.dot(&w)) / denom;
        let t = (b * r.dot(&z) - r.dot(&w)) / denom;
        let p1 = o + z * s;
        let p2 = point + w * t;
        if (p1 - p2).norm() < tol {
            (p2, unit(w.cross(&z)))
        } else {
            (p2, unit(p1 - p2))
        }
    };
    let y = w.cross(&x);
    Transform::from_parts(Matrix3::from_columns(&[x, y, w]), origin)
}

/// DH parameters `(a, d, alpha, theta)` from `prev` to `next`, read off
/// axis dot products. Exact when one DH row reaches `next`; otherwise theta
/// and alpha come from the x and y axes of `next` respectively.
pub fn oracle_dh(prev: &Transform, next: &Transform) -> [f64; 4] {
    let (xp, yp, zp, op) = (prev.x_axis(), prev.y_axis(), prev.z_axis(), *prev.translation());
    let (xn, yn, zn, on) = (next.x_axis(), next.y_axis(), next.z_axis(), *next.translation());
    let theta = xn.dot(&yp).atan2(xn.dot(&xp));
    let alpha = zp.dot(&yn).atan2(zp.dot(&zn));
    let x_common = xp * theta.cos() + yp * theta.sin();
    let d = (on - op).dot(&zp);
    let a = (on - op).dot(&x_common);
    [a, d, alpha, theta]
}

pub struct OracleDh {
    pub frames: Vec<Transform>,
    pub base: [f64; 4],
    pub rows: Vec<[f64; 4]>,
    pub tool: Transform,
}

/// Independent PoE to DH reduction for revolute-only chains.
pub fn oracle_poe_to_dh(poe: &PoeModel, tol: f64) -> OracleDh {
    let mut prev = Transform::identity();
    let mut frames = Vec::new();
    for s in &poe.screws {
        let point = s.omega.cross(&s.v) / s.omega.norm_squared();
        prev = oracle_frame(&prev, point, s.omega, tol);
        frames.push(prev);
    }
    let base = oracle_dh(&Transform::identity(), &frames[0]);
    let mut rows: Vec<[f64; 4]> = frames.windows(2).map(|w| oracle_dh(&w[0], &w[1])).collect();
    let last_frame = *frames.last().unwrap();
    let last = oracle_dh(&last_frame, &poe.m);
    rows.push(last);
    let tool = (last_frame * Transform::dh(last[0], last[1], last[2], last[3])).inverse() * poe.m;
    OracleDh {
        frames,
        base,
        rows,
        tool,
    }
}

/// `[roll, pitch, yaw, x, y, z]` of a transform with `R = Rz Ry Rx`.
pub fn oracle_rpy(t: &Transform) -> [f64; 6] {
    let r = t.rotation();
    let roll = r[(2, 1)].atan2(r[(2, 2)]);
    let pitch = (-r[(2, 0)]).atan2(r[(2, 1)].hypot(r[(2, 2)]));
    let yaw = r[(1, 0)].atan2(r[(0, 0)]);
    let p = t.translation();
    [roll, pitch, yaw, p.x, p.y, p.z]
}

pub fn max_abs(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Difference of two angles folded into `[0, pi]`.
pub fn angle_diff(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(2.0 * PI);
    d.min(2.0 * PI - d)
}

/// All numbers of a model in a fixed order, for exact comparisons.
pub fn flatten(model: &Model) -> Vec<f64> {
    let mut out = Vec::new();
    match model {
        Model::Dh(m) => {
            out.extend([m.base.a, m.base.d, m.base.alpha, m.base.theta]);
            for r in &m.rows {
                out.extend([r.params.a, r.params.d, r.params.alpha, r.params.theta]);
            }
            out.extend(m.tool.to_row_major());
        }
        Model::Poe(m) => {
            out.extend(m.m.to_row_major());
            for s in &m.screws {
                out.extend(s.to_array());
            }
        }
        Model::RpyXyz(m) => {
            for r in &m.rows {
                out.extend(r.to_array());
            }
        }
        Model::Gjd(m) => {
            for f in &m.joint_frames {
                out.extend(f.to_row_major());
            }
            out.extend(m.tool_frame.to_row_major());
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Random models

pub fn random_rotation<R: Rng>(rng: &mut R) -> Matrix3<f64> {
    let q = Quaternion::new(
        rng.random_range(-1.0..1.0),
        rng.random_range(-1.0..1.0),
        rng.random_range(-1.0..1.0),
        rng.random_range(-1.0..1.0),
    );
    UnitQuaternion::from_quaternion(q)
        .to_rotation_matrix()
        .into_inner()
}

pub fn random_transform<R: Rng>(rng: &mut R) -> Transform {
    let t = Vec3::new(
        rng.random_range(-1.0..1.0),
        rng.random_range(-1.0..1.0),
        rng.random_range(-1.0..1.0),
    );
    Transform::from_parts(random_rotation(rng), t)
}

pub fn random_kind<R: Rng>(rng: &mut R) -> JointKind {
    if rng.random_bool(0.3) {
        JointKind::Prismatic
    } else {
        JointKind::Revolute
    }
}

/// Arbitrary joint frames: generic skew axes.
pub fn random_gjd<R: Rng>(rng: &mut R, n: usize) -> GjdModel {
    GjdModel {
        joint_frames: (0..n).map(|_| random_transform(rng)).collect(),
        kinds: (0..n).map(|_| random_kind(rng)).collect(),
        tool_frame: random_transform(rng),
    }
}

/// DH chains biased toward the special cases (parallel, orthogonal and
/// intersecting axes) that real robots have.
pub fn random_dh<R: Rng>(rng: &mut R, n: usize) -> DhModel {
    let length = |rng: &mut R| {
        if rng.random_bool(0.3) {
            0.0
        } else {
            rng.random_range(-0.5..0.5)
        }
    };
    let twist = |rng: &mut R| match rng.random_range(0..5) {
        0 => 0.0,
        1 => FRAC_PI_2,
        2 => -FRAC_PI_2,
        3 => PI,
        _ => rng.random_range(-PI..PI),
    };
    let base = DhParams::new(length(rng), length(rng), twist(rng), rng.random_range(-PI..PI));
    let rows = (0..n)
        .map(|_| {
            let (a, d, alpha) = (length(rng), length(rng), twist(rng));
            DhRow::new(a, d, alpha, rng.random_range(-PI..PI), random_kind(rng))
        })
        .collect();
    let tool = if rng.random_bool(0.5) {
        Transform::identity()
    } else {
        random_transform(rng)
    };
    DhModel { base, rows, tool }
}

pub fn random_q<R: Rng>(rng: &mut R, kinds: &[JointKind]) -> Vec<f64> {
    kinds
        .iter()
        .map(|k| match k {
            JointKind::Revolute => rng.random_range(-PI..PI),
            JointKind::Prismatic => rng.random_range(-0.5..0.5),
        })
        .collect()
}
