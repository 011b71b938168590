//! Minimal URDF generation from an RPY-XYZ chain.
//!
//! Links are `base_link`, `link_1..link_n` and `tool_link`. Joint `i` carries
//! row `i + 1` as its origin (the base row is composed into the first joint),
//! always rotates/slides along local z, and the tool row becomes the fixed
//! joint `tool_fixed`. No inertial, visual or collision data is emitted.

use std::f64::consts::TAU;
use std::fmt::Write as _;

use crate::error::Result;
use crate::model::{JointKind, RpyXyzModel, RpyXyzRow, Validate};
use crate::se3::VALIDITY_TOL;

pub const REVOLUTE_LIMIT: f64 = TAU;
pub const PRISMATIC_LIMIT: f64 = 1.0;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UrdfDocument {
    pub name: String,
    pub xml: String,
}

/// Shortest decimal that round-trips to the same `f64`.
pub fn format_number(v: f64) -> String {
    if v == 0.0 {
        "0".to_string()
    } else {
        format!("{v}")
    }
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

fn origin(row: &RpyXyzRow) -> String {
    format!(
        "<origin xyz=\"{} {} {}\" rpy=\"{} {} {}\"/>",
        format_number(row.x),
        format_number(row.y),
        format_number(row.z),
        format_number(row.roll),
        format_number(row.pitch),
        format_number(row.yaw),
    )
}

fn link_name(i: usize) -> String {
    if i == 0 {
        "base_link".to_string()
    } else {
        format!("link_{i}")
    }
}

pub fn export_urdf(model: &RpyXyzModel, name: &str) -> Result<UrdfDocument> {
    model.ensure_valid(VALIDITY_TOL)?;
    let n = model.kinds.len();

    // base row folded into the first origin; exact when the base row is zero
    let first = if model.rows[0].is_zero() {
        model.rows[1]
    } else {
        RpyXyzRow::from_transform(&(model.rows[0].to_transform() * model.rows[1].to_transform()))
    };
    let origin_of = |i: usize| if i == 1 { first } else { model.rows[i] };

    let mut xml = String::new();
    xml.push_str("<?xml version=\"1.0\"?>\n");
    let _ = writeln!(xml, "<robot name=\"{}\">", escape(name));
    for i in 0..=n {
        let _ = writeln!(xml, "  <link name=\"{}\"/>", link_name(i));
    }
    xml.push_str("  <link name=\"tool_link\"/>\n");

    for (i, kind) in model.kinds.iter().enumerate().map(|(i, k)| (i + 1, k)) {
        let (ty, limit) = match kind {
            JointKind::Revolute => ("revolute", REVOLUTE_LIMIT),
            JointKind::Prismatic => ("prismatic", PRISMATIC_LIMIT),
        };
        let _ = writeln!(xml, "  <joint name=\"joint_{i}\" type=\"{ty}\">");
        let _ = writeln!(xml, "    <parent link=\"{}\"/>", link_name(i - 1));
        let _ = writeln!(xml, "    <child link=\"{}\"/>", link_name(i));
        let _ = writeln!(xml, "    {}", origin(&origin_of(i)));
        xml.push_str("    <axis xyz=\"0 0 1\"/>\n");
        let _ = writeln!(
            xml,
            "    <limit lower=\"{}\" upper=\"{}\" effort=\"0\" velocity=\"0\"/>",
            format_number(-limit),
            format_number(limit)
        );
        xml.push_str("  </joint>\n");
    }

    let tool_origin = if n == 0 { first } else { model.rows[n + 1] };
    xml.push_str("  <joint name=\"tool_fixed\" type=\"fixed\">\n");
    let _ = writeln!(xml, "    <parent link=\"{}\"/>", link_name(n));
    xml.push_str("    <child link=\"tool_link\"/>\n");
    let _ = writeln!(xml, "    {}", origin(&tool_origin));
    xml.push_str("  </joint>\n");
    xml.push_str("</robot>\n");

    Ok(UrdfDocument {
        name: name.to_string(),
        xml,
    })
}
