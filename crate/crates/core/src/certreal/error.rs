use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum CertError {
    #[error("zero polynomial has no roots to isolate")]
    ZeroPolynomial,

    #[error("interval does not isolate a single root (contains {count})")]
    NotIsolating { count: usize },

    #[error("precision ceiling reached at index {n}")]
    PrecisionExhausted { n: u64 },

    #[error("degree {got} below supported minimum {min}")]
    BadDegree { got: usize, min: usize },

    #[error("window bound violated: {what}")]
    WindowViolation { what: String },

    #[error("certificate failed: {what}")]
    NotCertified { what: String },

    #[error("empty window: lo >= hi")]
    EmptyWindow,

    #[error("exponent range exceeded during {op}")]
    ExponentOverflow { op: String },

    #[error("polynomial must be monic")]
    NotMonic,

    #[error("sign undecided at index {n} (enclosure straddles zero)")]
    Undecided { n: u64 },

    #[error("sequences disagree at index {n}: {detail}")]
    ChainMismatch { n: u64, detail: String },

    #[error("invalid parameter: {what}")]
    BadParameter { what: String },
}

pub type CertResult<T> = Result<T, CertError>;
