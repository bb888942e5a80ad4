use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed JSON text.
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    /// Well-formed JSON that does not match the feeder schema.
    #[error("schema error at `{path}`: {message}")]
    Schema { path: String, message: String },

    /// Schema-valid input that violates a feeder invariant.
    #[error("semantic error at `{path}`: {message}")]
    Semantic { path: String, message: String },

    #[error("singular series impedance on branch {branch}: |det(z)| = {det:e}")]
    SingularImpedance { branch: usize, det: f64 },

    #[error("singular 3x3 matrix: |det| = {det:e} is below the threshold {threshold:e}")]
    SingularMatrix { det: f64, threshold: f64 },

    #[error("shape mismatch: expected {expected} nodes, found {found}")]
    ShapeMismatch { expected: usize, found: usize },

    #[error("corrupt sparse structure: {0}")]
    CorruptStructure(String),

    #[error("zero diagonal admittance at phase {phase}, node {node}")]
    ZeroDiagonal { phase: usize, node: usize },

    #[error("network admittance restricted to non-slack nodes is singular")]
    SingularNetwork,

    #[error("undervoltage at phase {phase}, node {node}: |v| = {magnitude:e}")]
    Undervoltage {
        phase: usize,
        node: usize,
        magnitude: f64,
    },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
