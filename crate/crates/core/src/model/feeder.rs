use std::collections::HashSet;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::Matrix3;

/// One of the three phase conductors of a hyper-node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Phase {
    A,
    B,
    C,
}

impl Phase {
    pub const ALL: [Phase; 3] = [Phase::A, Phase::B, Phase::C];

    pub const fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(index: usize) -> Option<Phase> {
        Self::ALL.get(index).copied()
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Phase::A => "a",
            Phase::B => "b",
            Phase::C => "c",
        };
        f.write_str(name)
    }
}

/// 0-based hyper-node index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(pub usize);

impl NodeId {
    pub const fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// π-model line section. The shunt halves are stored already lumped per end.
#[derive(Debug, Clone, PartialEq)]
pub struct Branch {
    pub from: NodeId,
    pub to: NodeId,
    /// Series impedance.
    pub z: Matrix3,
    pub b_from: Matrix3,
    pub b_to: Matrix3,
}

impl Branch {
    pub fn series(from: usize, to: usize, z: Matrix3) -> Self {
        Branch {
            from: NodeId(from),
            to: NodeId(to),
            z,
            b_from: Matrix3::zeros(),
            b_to: Matrix3::zeros(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Connection {
    Wye,
    Delta,
}

/// Constant-power load. `s` is per phase for wye, per leg (ab, bc, ca) for
/// delta. Positive real part means consumption.
#[derive(Debug, Clone, PartialEq)]
pub struct Load {
    pub node: NodeId,
    pub connection: Connection,
    pub s: [Complex64; 3],
}

impl Load {
    pub fn wye(node: usize, s: [Complex64; 3]) -> Self {
        Load {
            node: NodeId(node),
            connection: Connection::Wye,
            s,
        }
    }

    pub fn delta(node: usize, s: [Complex64; 3]) -> Self {
        Load {
            node: NodeId(node),
            connection: Connection::Delta,
            s,
        }
    }

    pub fn total_power(&self) -> Complex64 {
        self.s.iter().sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Base {
    pub kv: f64,
    pub mva: f64,
}

/// A three-phase feeder: hyper-nodes joined by branches, with one slack node.
#[derive(Debug, Clone, PartialEq)]
pub struct FeederModel {
    pub n_nodes: usize,
    pub slack: NodeId,
    pub slack_voltage: [Complex64; 3],
    pub branches: Vec<Branch>,
    pub loads: Vec<Load>,
    /// Informational only.
    pub base: Option<Base>,
}

/// Balanced positive-sequence unit voltages: 1∠0°, 1∠−120°, 1∠+120°.
pub fn balanced_voltage() -> [Complex64; 3] {
    let third = 2.0 * std::f64::consts::PI / 3.0;
    [
        Complex64::new(1.0, 0.0),
        Complex64::from_polar(1.0, -third),
        Complex64::from_polar(1.0, third),
    ]
}

impl FeederModel {
    pub fn new(n_nodes: usize, slack: usize) -> Self {
        FeederModel {
            n_nodes,
            slack: NodeId(slack),
            slack_voltage: balanced_voltage(),
            branches: Vec::new(),
            loads: Vec::new(),
            base: None,
        }
    }

    pub fn with_branch(mut self, branch: Branch) -> Self {
        self.branches.push(branch);
        self
    }

    pub fn with_load(mut self, load: Load) -> Self {
        self.loads.push(load);
        self
    }

    pub fn total_load(&self) -> Complex64 {
        self.loads.iter().map(Load::total_power).sum()
    }

    pub fn is_valid(&self) -> bool {
        !validate_feeder(self)
            .iter()
            .any(|d| d.severity == Severity::Error)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Severity {
    Warning,
    Error,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Severity::Warning => f.write_str("warning"),
            Severity::Error => f.write_str("error"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostic {
    pub severity: Severity,
    /// JSON-style location, e.g. `branches[3].to`.
    pub path: String,
    pub message: String,
}

impl Diagnostic {
    fn error(path: impl Into<String>, message: impl Into<String>) -> Self {
        Diagnostic {
            severity: Severity::Error,
            path: path.into(),
            message: message.into(),
        }
    }

    fn warning(path: impl Into<String>, message: impl Into<String>) -> Self {
        Diagnostic {
            severity: Severity::Warning,
            path: path.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}: {}", self.severity, self.path, self.message)
    }
}

/// Checks every feeder invariant. Returns an empty list iff the feeder is
/// well formed; asymmetric matrices are reported as warnings only.
pub fn validate_feeder(f: &FeederModel) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let n = f.n_nodes;

    if n < 2 {
        out.push(Diagnostic::error(
            "n_nodes",
            format!("at least 2 hyper-nodes required, found {n}"),
        ));
    }
    if f.slack.0 >= n {
        out.push(Diagnostic::error(
            "slack",
            format!("slack node {} out of range for {n} nodes", f.slack),
        ));
    }
    if f.slack_voltage.iter().any(|x| !x.is_finite()) {
        out.push(Diagnostic::error("slack_voltage", "non-finite value"));
    }

    let mut seen = HashSet::new();
    let mut edges_ok = true;
    for (e, br) in f.branches.iter().enumerate() {
        let at = |field: &str| format!("branches[{e}].{field}");
        for (field, node) in [("from", br.from), ("to", br.to)] {
            if node.0 >= n {
                edges_ok = false;
                out.push(Diagnostic::error(
                    at(field),
                    format!("branch {e} references node {node}, but n_nodes is {n}"),
                ));
            }
        }
        if br.from == br.to {
            edges_ok = false;
            out.push(Diagnostic::error(
                at("to"),
                format!("branch {e} connects node {} to itself", br.from),
            ));
        }
        let key = (br.from.min(br.to), br.from.max(br.to));
        if !seen.insert(key) {
            out.push(Diagnostic::error(
                format!("branches[{e}]"),
                format!(
                    "branch {e} duplicates the pair {{{}, {}}}; merge parallel branches first",
                    key.0, key.1
                ),
            ));
        }
        for (field, m) in [("z", &br.z), ("b_from", &br.b_from), ("b_to", &br.b_to)] {
            if !m.is_finite() {
                out.push(Diagnostic::error(at(field), "non-finite value"));
            }
        }
        if br.z.is_singular() {
            out.push(Diagnostic::error(
                at("z"),
                format!(
                    "singular series impedance (|det| = {:e})",
                    br.z.determinant().norm()
                ),
            ));
        }
        for (field, m) in [("z", &br.z), ("b_from", &br.b_from), ("b_to", &br.b_to)] {
            if m.asymmetry() > 1e-12 * m.max_abs() {
                out.push(Diagnostic::warning(
                    at(field),
                    format!(
                        "non-symmetric {field} (max |m_rc - m_cr| = {:e})",
                        m.asymmetry()
                    ),
                ));
            }
        }
    }

    for (l, load) in f.loads.iter().enumerate() {
        if load.node.0 >= n {
            out.push(Diagnostic::error(
                format!("loads[{l}].node"),
                format!("load {l} references node {}, but n_nodes is {n}", load.node),
            ));
        } else if load.node == f.slack {
            out.push(Diagnostic::error(
                format!("loads[{l}].node"),
                format!("load {l} sits on the slack node {}", load.node),
            ));
        }
        if load.s.iter().any(|x| !x.is_finite()) {
            out.push(Diagnostic::error(
                format!("loads[{l}].s"),
                "non-finite value",
            ));
        }
    }

    if n >= 2 && edges_ok {
        let unreached = unreachable_nodes(f);
        if !unreached.is_empty() {
            let listed: Vec<String> = unreached.iter().take(8).map(|k| k.to_string()).collect();
            let more = if unreached.len() > 8 { ", ..." } else { "" };
            out.push(Diagnostic::error(
                "branches",
                format!(
                    "feeder is disconnected: {} node(s) unreachable from node 0 ({}{more})",
                    unreached.len(),
                    listed.join(", ")
                ),
            ));
        }
    }

    out
}

fn unreachable_nodes(f: &FeederModel) -> Vec<usize> {
    let n = f.n_nodes;
    let mut adjacency = vec![Vec::new(); n];
    for br in &f.branches {
        adjacency[br.from.0].push(br.to.0);
        adjacency[br.to.0].push(br.from.0);
    }
    let mut visited = vec![false; n];
    let mut stack = vec![0];
    visited[0] = true;
    while let Some(k) = stack.pop() {
        for &m in &adjacency[k] {
            if !visited[m] {
                visited[m] = true;
                stack.push(m);
            }
        }
    }
    (0..n).filter(|&k| !visited[k]).collect()
}
