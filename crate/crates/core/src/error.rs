use thiserror::Error;

/// Errors raised by state validation and the measure computations.
///
/// Every variant that reports an invariant violation carries the measured
/// violation so callers can tell a rounding slip from corrupted input.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("BadDimension: {rows}x{cols} is not a square 2^M x 2^M matrix with M >= 1")]
    BadDimension { rows: usize, cols: usize },

    #[error("NotHermitian: max |rho_ij - conj(rho_ji)| = {violation:e}")]
    NotHermitian { violation: f64 },

    #[error("TraceNotOne: trace = {trace}, |trace - 1| = {violation:e}")]
    TraceNotOne { trace: f64, violation: f64 },

    #[error("NotPSD: minimum eigenvalue {min_eigenvalue:e} is below the tolerance")]
    NotPsd { min_eigenvalue: f64 },

    #[error("NotNormalized: |norm - 1| = {violation:e}")]
    NotNormalized { violation: f64 },

    #[error("BadLength: {len} amplitudes is not 2^M with M >= 1")]
    BadLength { len: usize },

    #[error("NotUnitVector: |norm - 1| = {violation:e}")]
    NotUnitVector { violation: f64 },

    #[error("BlochVectorTooLong: norm = {norm}")]
    BlochVectorTooLong { norm: f64 },

    #[error("QubitOutOfRange: qubit {qubit} in a {num_qubits}-qubit system")]
    QubitOutOfRange { qubit: usize, num_qubits: usize },

    #[error("DimensionMismatch: {left:?} vs {right:?}")]
    DimensionMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },

    #[error("ImaginaryExpectation: imaginary part {imag:e} exceeds tolerance")]
    ImaginaryExpectation { imag: f64 },

    #[error("NonRealMetric: imaginary part {imag:e} in metric entry")]
    NonRealMetric { imag: f64 },

    #[error("WrongDirectionCount: expected {expected}, got {got}")]
    WrongDirectionCount { expected: usize, got: usize },

    #[error("AsymmetryTooLarge: max |A_ij - A_ji| = {violation:e}")]
    AsymmetryTooLarge { violation: f64 },

    #[error("BadWeights: {reason}")]
    BadWeights { reason: String },

    #[error("NonPureBase: member {index} has purity {purity}")]
    NonPureBase { index: usize, purity: f64 },

    #[error("NonIsometric: max |V^dag V - I| = {violation:e}")]
    NonIsometric { violation: f64 },

    #[error("CountMismatch: expected {expected} members, got {got}")]
    CountMismatch { expected: usize, got: usize },

    #[error("NotTwoQubit: state has {num_qubits} qubits")]
    NotTwoQubit { num_qubits: usize },

    #[error("OutsideTetrahedron: correlation vector {c:?} violates a vertex plane by {violation:e}")]
    OutsideTetrahedron { c: [f64; 3], violation: f64 },

    #[error("ParameterOutOfRange: {name} = {value} outside [{min}, {max}]")]
    ParameterOutOfRange {
        name: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },

    #[error("InvalidOptions: {0}")]
    InvalidOptions(String),

    #[error("Parse: {0}")]
    Parse(String),
}

impl Error {
    /// Short stable name of the violated invariant, used in CLI reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::BadDimension { .. } => "BadDimension",
            Error::NotHermitian { .. } => "NotHermitian",
            Error::TraceNotOne { .. } => "TraceNotOne",
            Error::NotPsd { .. } => "NotPSD",
            Error::NotNormalized { .. } => "NotNormalized",
            Error::BadLength { .. } => "BadLength",
            Error::NotUnitVector { .. } => "NotUnitVector",
            Error::BlochVectorTooLong { .. } => "BlochVectorTooLong",
            Error::QubitOutOfRange { .. } => "QubitOutOfRange",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::ImaginaryExpectation { .. } => "ImaginaryExpectation",
            Error::NonRealMetric { .. } => "NonRealMetric",
            Error::WrongDirectionCount { .. } => "WrongDirectionCount",
            Error::AsymmetryTooLarge { .. } => "AsymmetryTooLarge",
            Error::BadWeights { .. } => "BadWeights",
            Error::NonPureBase { .. } => "NonPureBase",
            Error::NonIsometric { .. } => "NonIsometric",
            Error::CountMismatch { .. } => "CountMismatch",
            Error::NotTwoQubit { .. } => "NotTwoQubit",
            Error::OutsideTetrahedron { .. } => "OutsideTetrahedron",
            Error::ParameterOutOfRange { .. } => "ParameterOutOfRange",
            Error::InvalidOptions(_) => "InvalidOptions",
            Error::Parse(_) => "Parse",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
