use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("degree bound {bound} is too low: generator `{generator}` has degree {degree}")]
    BoundTooLow { generator: String, degree: usize, bound: usize },

    #[error("degree bound {bound} is too low: {needed} required for {what}")]
    InsufficientBound { what: String, needed: usize, bound: usize },

    #[error("mismatched degree bounds {0} and {1}")]
    BoundMismatch(usize, usize),

    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),

    #[error("invalid simplicial set: {0}")]
    InvalidSSet(String),

    #[error("not a simplicial map: {0}")]
    NotSimplicial(String),

    #[error("maps are not composable: {0}")]
    NotComposable(String),

    #[error("invalid category: {0}")]
    InvalidCategory(String),

    #[error("invalid poset: {0}")]
    InvalidPoset(String),

    #[error("invalid sieve: {0}")]
    InvalidSieve(String),

    #[error("invalid topology: {0}")]
    InvalidTopology(String),

    #[error("invalid presheaf: {0}")]
    InvalidPresheaf(String),

    #[error("{what} is not a Kan complex up to degree {bound}: unfillable horn at n={n}, k={k}")]
    NotKan { what: String, bound: usize, n: usize, k: usize },

    #[error("horn filler lemma violated: {0}")]
    NoFiller(String),

    #[error("local epimorphism criteria disagree at object {object}, element {element}")]
    CriterionMismatch { object: String, element: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("schema violation at {pointer}: {message}")]
    Schema { pointer: String, message: String },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}
