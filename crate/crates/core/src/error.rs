use thiserror::Error;

/// Errors raised by matrix construction, weighting, axiom checks and the
/// proof-chain machinery. Index fields are 0-based; messages print them
/// 1-based.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square: row {} has {found} entries, expected {expected}", row + 1)]
    NonSquare {
        row: usize,
        found: usize,
        expected: usize,
    },
    #[error("entry ({},{}) is not a positive number: {literal:?}", row + 1, col + 1)]
    NonPositive {
        row: usize,
        col: usize,
        literal: String,
    },
    #[error("entries ({a},{b}) and ({b},{a}) are not reciprocal: product {product}", a = i + 1, b = j + 1)]
    ReciprocityViolation { i: usize, j: usize, product: f64 },
    #[error("matrix has {0} alternatives, at least 2 are required")]
    TooSmall(usize),
    #[error("alternative {} out of range for {n} alternatives", index + 1)]
    IndexOutOfRange { index: usize, n: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("empty list of matrices")]
    EmptyList,
    #[error("aggregation invariance needs at least 2 matrices, got {0}")]
    TooFewMatrices(usize),
    #[error(
        "power iteration did not converge in {iterations} iterations (last change {last_change:e})"
    )]
    NoConvergence { iterations: usize, last_change: f64 },
    #[error("method {0} has no weight form")]
    NoWeightForm(&'static str),
    #[error("indices overlap: modified cell ({},{}) must be disjoint from pair ({},{})", k + 1, l + 1, i + 1, j + 1)]
    OverlappingIndices {
        k: usize,
        l: usize,
        i: usize,
        j: usize,
    },
    #[error("operation needs at least {required} alternatives, matrix has {n}")]
    DimensionTooSmall { required: usize, n: usize },
    #[error("value {value} is not an increase over the current entry {current}")]
    NotAnIncrease { value: f64, current: f64 },
    #[error("new value {0} equals the current entry")]
    UnchangedValue(f64),
    #[error("rows {} and {} have unequal products (log difference {log_diff:.3e})", i + 1, j + 1)]
    UnequalRowProducts { i: usize, j: usize, log_diff: f64 },
    #[error("unknown case {0:?}")]
    UnknownCase(String),
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("invalid exponent: {0}")]
    InvalidExponent(String),
    #[error("invalid weight vector: {0}")]
    InvalidWeights(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("proof chain invariant violated: {0}")]
    ChainInvariant(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
