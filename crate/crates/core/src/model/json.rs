//! Feeder JSON format (version 1).
//!
//! ```text
//! { "n_nodes": int, "slack": int,
//!   "slack_voltage": [[re,im],[re,im],[re,im]],          // optional
//!   "branches": [ { "from": int, "to": int,
//!                   "z": 3x3 of [re,im], "b_from": 3x3, "b_to": 3x3 } ],
//!   "loads": [ { "node": int, "connection": "wye"|"delta", "s": 3 of [re,im] } ],
//!   "base": { "kV": number, "MVA": number } }             // optional
//! ```
//!
//! Indices are 0-based. Complex numbers are `[re, im]` pairs in per-unit.
//! `b_from`/`b_to` are the shunt admittances already lumped at each end.
//! Parallel branches must be merged before writing the file. Load power is
//! consumption: positive real part draws active power from the network.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::error::Category;

use super::{
    validate_feeder, Base, Branch, Connection, FeederModel, Load, Matrix3, NodeId, PhaseField,
    Severity,
};
use crate::error::{Error, Result};

pub const FORMAT_VERSION: u32 = 1;

pub type Pair = [f64; 2];
type Mat = [[Pair; 3]; 3];

pub fn pair(c: Complex64) -> Pair {
    [c.re, c.im]
}

pub fn complex(p: Pair) -> Complex64 {
    Complex64::new(p[0], p[1])
}

fn mat(m: &Matrix3) -> Mat {
    m.0.map(|row| row.map(pair))
}

fn matrix3(m: Mat) -> Matrix3 {
    Matrix3(m.map(|row| row.map(complex)))
}

/// 3×N nested `[re, im]` pairs, indexed `[phase][node]`.
pub fn field_to_json(field: &PhaseField) -> Vec<Vec<Pair>> {
    (0..3)
        .map(|p| field.phase(p).iter().copied().map(pair).collect())
        .collect()
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FeederFile {
    n_nodes: usize,
    slack: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    slack_voltage: Option<[Pair; 3]>,
    branches: Vec<BranchFile>,
    #[serde(default)]
    loads: Vec<LoadFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    base: Option<BaseFile>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BranchFile {
    from: usize,
    to: usize,
    z: Mat,
    b_from: Mat,
    b_to: Mat,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LoadFile {
    node: usize,
    connection: Connection,
    s: [Pair; 3],
}

#[derive(Serialize, Deserialize)]
struct BaseFile {
    #[serde(rename = "kV")]
    kv: f64,
    #[serde(rename = "MVA")]
    mva: f64,
}

/// Parses the feeder schema without checking feeder invariants.
pub fn parse_feeder_unchecked(text: &str) -> Result<FeederModel> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let file: FeederFile = serde_path_to_error::deserialize(de).map_err(|err| {
        let path = err.path().to_string();
        let inner = err.into_inner();
        match inner.classify() {
            Category::Data => Error::Schema {
                path,
                message: strip_position(&inner),
            },
            _ => Error::Syntax {
                line: inner.line(),
                column: inner.column(),
                message: strip_position(&inner),
            },
        }
    })?;

    Ok(FeederModel {
        n_nodes: file.n_nodes,
        slack: NodeId(file.slack),
        slack_voltage: file
            .slack_voltage
            .map(|v| v.map(complex))
            .unwrap_or_else(super::balanced_voltage),
        branches: file
            .branches
            .into_iter()
            .map(|b| Branch {
                from: NodeId(b.from),
                to: NodeId(b.to),
                z: matrix3(b.z),
                b_from: matrix3(b.b_from),
                b_to: matrix3(b.b_to),
            })
            .collect(),
        loads: file
            .loads
            .into_iter()
            .map(|l| Load {
                node: NodeId(l.node),
                connection: l.connection,
                s: l.s.map(complex),
            })
            .collect(),
        base: file.base.map(|b| Base {
            kv: b.kv,
            mva: b.mva,
        }),
    })
}

/// Parses and validates a feeder. The first error-severity diagnostic is
/// returned as [`Error::Semantic`]; warnings are accepted silently.
pub fn parse_feeder(text: &str) -> Result<FeederModel> {
    let feeder = parse_feeder_unchecked(text)?;
    if let Some(d) = validate_feeder(&feeder)
        .into_iter()
        .find(|d| d.severity == Severity::Error)
    {
        return Err(Error::Semantic {
            path: d.path,
            message: d.message,
        });
    }
    Ok(feeder)
}

pub fn serialize_feeder(f: &FeederModel) -> String {
    let file = FeederFile {
        n_nodes: f.n_nodes,
        slack: f.slack.0,
        slack_voltage: Some(f.slack_voltage.map(pair)),
        branches: f
            .branches
            .iter()
            .map(|b| BranchFile {
                from: b.from.0,
                to: b.to.0,
                z: mat(&b.z),
                b_from: mat(&b.b_from),
                b_to: mat(&b.b_to),
            })
            .collect(),
        loads: f
            .loads
            .iter()
            .map(|l| LoadFile {
                node: l.node.0,
                connection: l.connection,
                s: l.s.map(pair),
            })
            .collect(),
        base: f.base.map(|b| BaseFile {
            kv: b.kv,
            mva: b.mva,
        }),
    };
    serde_json::to_string(&file).expect("feeder values are finite")
}

// serde_json appends " at line L column C" to its messages; the location is
// reported separately.
fn strip_position(err: &serde_json::Error) -> String {
    let text = err.to_string();
    match text.rfind(" at line ") {
        Some(idx) => text[..idx].to_string(),
        None => text,
    }
}
