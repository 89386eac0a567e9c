use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong across the crate.
///
/// Validation failures carry enough context to point at the offending pair or
/// value; callers that need exit-code style triage can match on the variant.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("expected {expected} pairs for {n_qubits} qubits, got {got}")]
    Shape {
        n_qubits: u32,
        expected: usize,
        got: usize,
    },

    /// A 2x2 pair block is not positive semidefinite: negative weight, a
    /// coherence exceeding sqrt(a*b), or a coherence on a zero-weight pair.
    #[error("pair {pair} violates positivity ({detail})")]
    PositivityViolation { pair: usize, detail: String },

    #[error("diagonal weights sum to {total:.17e}, expected 1")]
    Normalization { total: f64 },

    #[error("pair index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("operands disagree in size: {left} vs {right} qubits")]
    DimensionMismatch { left: u32, right: u32 },

    #[error("sigma is not a permutation of 0..{n}")]
    InvalidPermutation { n: u32 },

    #[error("{name} = {value} outside [{lo}, {hi}]")]
    Range {
        name: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("{0}")]
    Domain(String),

    /// Input text that is not the expected JSON interchange format. Distinct
    /// from the semantic validation variants so callers can tell a mangled
    /// file from a well-formed description of an invalid state.
    #[error("invalid JSON: {0}")]
    Json(String),

    #[error("{n_qubits} qubits exceeds the explicit-storage limit of {max}")]
    StorageLimit { n_qubits: u32, max: u32 },

    #[error("initial concurrence is zero; no half-life exists")]
    NoEntanglement,

    #[error("not a density matrix: {0}")]
    NotDensityMatrix(String),

    #[error("matrix has support outside pairs {{1, {pair}}}")]
    NotTwoPairSupport { pair: usize },

    #[error("entry ({row}, {col}) with magnitude {magnitude:.3e} violates X form")]
    XFormViolation {
        row: usize,
        col: usize,
        magnitude: f64,
    },

    #[error("analytic and simulated values disagree: {0}")]
    VerificationMismatch(String),
}
