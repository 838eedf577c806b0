use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("grading group mismatch: {0} vs {1}")]
    GroupMismatch(String, String),

    #[error("unordered grading group {0}")]
    UnorderedGrading(String),

    #[error("invalid grading group: {0}")]
    InvalidGroup(String),

    #[error("map not additive: {0}")]
    NotAdditive(String),

    #[error("base ring mismatch: {0} vs {1}")]
    BaseMismatch(String, String),

    #[error("elements belong to different rings ({0} vs {1})")]
    RingMismatch(String, String),

    #[error("{0} is not a modular base ring")]
    NotModular(String),

    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),

    #[error("relation not homogeneous: grades {{{first},{second}}} in `{relation}`")]
    NonHomogeneousRelation {
        index: usize,
        relation: String,
        first: String,
        second: String,
    },

    #[error("relation {0} is not monic univariate")]
    NonMonicRelation(String),

    #[error("per-degree linear reduction needs a field base, got {0}")]
    NotAField(String),

    #[error("negative exponent on non-unit {0}")]
    NegativeExponent(String),

    #[error("zero element has no support")]
    ZeroElement,

    #[error("{0} is not a unit")]
    NotUnit(String),

    #[error("cap exceeded: {0}")]
    CapExceeded(String),

    #[error("ring is infinite: {0}")]
    InfiniteRing(String),

    #[error("unsupported ring family: {0}")]
    Unsupported(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("theorem violation: {0}")]
    TheoremViolation(String),

    #[error("{line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },

    #[error("gallery item {id} failed check `{check}`: expected {expected}, got {actual}")]
    GalleryCheck {
        id: String,
        check: String,
        expected: String,
        actual: String,
    },
}

impl Error {
    /// Process exit code used by the command line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::CapExceeded(_) => 2,
            Error::TheoremViolation(_) => 3,
            _ => 1,
        }
    }
}
