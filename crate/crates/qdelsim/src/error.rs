//! Error types shared across the crate.

use thiserror::Error;

/// Errors from finite field construction and arithmetic.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("extension degree {0} outside the supported range 1..=16")]
    UnsupportedDegree(u32),
    #[error("modulus {0:#x} is reducible over GF(2)")]
    ReducibleModulus(u32),
    #[error("x is not a primitive element modulo {0:#x}")]
    NotPrimitive(u32),
    #[error("value {value} is not an element of GF(2^{degree})")]
    OutOfRange { value: u32, degree: u32 },
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("zero cannot be raised to a negative power")]
    ZeroNegativePower,
    #[error("bit string has length {got}, expected {want}")]
    BitLength { got: usize, want: usize },
}

/// Errors from classical code construction and decoding.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodeError {
    #[error("parameter constraint violated: {0}")]
    InvalidParams(String),
    #[error("word length {got} does not match code length {want}")]
    WordLength { got: usize, want: usize },
    #[error("{got} erasures exceed the erasure capability {max}")]
    TooManyErasures { got: usize, max: usize },
    #[error("unerased symbols are inconsistent with every codeword")]
    Inconsistent,
    #[error("code with {0} codewords is too large for brute-force enumeration")]
    TooLarge(u128),
}

/// Errors from the sparse state engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum StateError {
    #[error("qubit index {index} out of range for {num_qubits} qubits")]
    IndexOutOfRange { index: usize, num_qubits: usize },
    #[error("duplicate qubit index {0}")]
    DuplicateIndex(usize),
    #[error("qubit counts differ: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("total outcome probability {0} below tolerance")]
    ProbabilityUnderflow(f64),
}

/// Errors from the quantum Reed-Solomon encoder/decoder.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum QrsError {
    #[error("logical state has {got} qubits, code expects {want}")]
    LogicalDimension { got: usize, want: usize },
    #[error("state has {got} qubits, code expects {want}")]
    PhysicalDimension { got: usize, want: usize },
    #[error("{got} erased blocks exceed the correctable maximum {max}")]
    TooManyErasures { got: usize, max: usize },
    #[error("erased block index {0} out of range 1..={1}")]
    BlockOutOfRange(usize, usize),
    #[error("Knill-Laflamme residual {0:.3e} exceeds tolerance; code construction is broken")]
    KnillLaflammeViolation(f64),
    #[error("recovered state leaked weight {0:.3e} outside the reachable subspace")]
    DecodeFailure(f64),
    #[error("code space of dimension {0} too large to enumerate")]
    TooLarge(u128),
}

/// Umbrella error for the end-to-end pipeline and CLI layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    State(#[from] StateError),
    #[error(transparent)]
    Qrs(#[from] QrsError),
    #[error(transparent)]
    Loc(#[from] LocError),
    #[error("configuration error: {0}")]
    Config(String),
}

/// Errors from the block error locator.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum LocError {
    #[error("received {got} qubits, locator needs at least {min} (more than {max} deletions?)")]
    TooFewQubits { got: usize, min: usize, max: usize },
    #[error("received {got} qubits, more than the encoded length {max}")]
    TooManyQubits { got: usize, max: usize },
    #[error("window measurement for block {block} is not deterministic (max branch probability {prob})")]
    NondeterministicWindow { block: usize, prob: f64 },
    #[error("window outcome {outcome} for block {block} is not of the form 0..01..1")]
    MalformedWindow { block: usize, outcome: String },
    #[error("state error during location: {0}")]
    State(#[from] StateError),
}
