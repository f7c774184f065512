use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },
    #[error("malformed number `{0}`")]
    MalformedNumber(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("form is not homogeneous (found total degrees {0} and {1})")]
    NonHomogeneous(usize, usize),
    #[error("binary forms must have even degree, got {0}")]
    OddDegree(usize),
    #[error("matrix is not symmetric at ({0}, {1})")]
    NonSymmetric(usize, usize),
    #[error("non-finite coefficient")]
    NonFinite,
    #[error("operands use different coefficient backends")]
    MixedBackend,
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("index {index} outside {lo}..={hi}")]
    IndexOutOfRange { index: usize, lo: usize, hi: usize },
    #[error("operation undefined for the zero form")]
    ZeroForm,
    #[error("form is not nonnegative")]
    NotNonnegative,
    #[error("invalid partition selection: {0}")]
    InvalidSelection(String),
    #[error("real-rootedness check failed: {0}")]
    RealRootCheckFailed(String),
    #[error("enumeration needs {needed} selections, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("root clustering is ambiguous: {0}")]
    ClusteringAmbiguous(String),
    #[error("root finding failed: {0}")]
    RootFinding(String),
    #[error("matrix is not positive semidefinite")]
    NotPsd,
    #[error("matrix is not orthogonal (deviation {0:e})")]
    NotOrthogonal(f64),
    #[error("form is not a positive sum of even powers of linear forms")]
    NotInQ,
    #[error("no usable node polynomial found: {0}")]
    NodeSearchExhausted(String),
    #[error("invalid certificate: {0}")]
    Certificate(String),
}

impl Error {
    /// True for failures that are statements about the input (not a member,
    /// not nonnegative, not PSD) rather than malformed input or numerics.
    pub fn is_mathematical_negative(&self) -> bool {
        matches!(self, Error::NotNonnegative | Error::NotPsd | Error::NotInQ)
    }

    /// True for failures of the numerical machinery.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::RealRootCheckFailed(_)
                | Error::ClusteringAmbiguous(_)
                | Error::RootFinding(_)
                | Error::NodeSearchExhausted(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
