//! Conversion between robot kinematic representations: standard DH,
//! product of exponentials, RPY-XYZ rows and a joint-frame hub (GJD) through
//! which every conversion is routed.

pub mod cli;
pub mod convert;
pub mod error;
pub mod io;
pub mod kinematics;
pub mod line;
pub mod model;
pub mod se3;
pub mod urdf;

pub use convert::{convert, Converter};
pub use error::{Diagnostic, Error, Result};
pub use io::{load_model, parse_document, save_model, ModelDocument};
pub use kinematics::{fk_dh, fk_gjd, fk_poe, fk_rpyxyz, ForwardKinematics};
pub use line::{Line, LineRelation};
pub use model::{
    DhModel, DhParams, DhRow, GjdModel, JointKind, Model, PoeModel, Representation, RpyXyzModel, RpyXyzRow,
    Validate,
};
pub use se3::{Rpy, Screw, Transform};
pub use urdf::{export_urdf, UrdfDocument};
