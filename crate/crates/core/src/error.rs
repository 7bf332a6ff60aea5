use thiserror::Error;

/// Everything that can go wrong in the library.
///
/// Variants marked as bug signals indicate an internal inconsistency, never a
/// bad input; they exist so that callers see a structured error instead of a panic.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("shape mismatch: expected gl({0}|{1}), found gl({2}|{3})")]
    ShapeMismatch(usize, usize, usize, usize),
    #[error("index {index} out of range 1..={bound}")]
    IndexOutOfRange { index: usize, bound: usize },
    #[error("weight {0} is vanishing (repeated rho-shifted entries)")]
    VanishingWeight(String),
    #[error("weight {0} is not dominant")]
    NotDominant(String),
    #[error("weights are not comparable: {0}")]
    NotComparable(String),
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("weight {0} does not lie on the atypical lattice of the ambient weight")]
    CoordinateMismatch(String),
    #[error("tuple {0:?} is not lexical")]
    NotLexical(Vec<i64>),
    #[error("weight {0} is typical")]
    TypicalWeight(String),
    #[error("block degrees differ: block has r={block}, target has r={target}")]
    BlockDegreesDiffer { block: usize, target: usize },
    #[error("invalid block: {0}")]
    InvalidBlock(String),
    #[error("composition window too small: {0}")]
    WindowTooSmall(String),
    #[error("exact division failed (bug signal): {0}")]
    ExactDivisionFailure(String),
    #[error("non-integer multiplicity (bug signal): {0}")]
    NonIntegerMultiplicity(String),
    #[error("non-integer dimension (bug signal): {0}")]
    NonIntegerDimension(String),
    #[error("internal consistency check failed (bug signal): {0}")]
    Internal(String),
}

impl Error {
    /// True for errors caused by malformed input text.
    pub fn is_parse(&self) -> bool {
        matches!(self, Error::Parse(_))
    }

    /// Stable machine-readable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Parse(_) => "parse",
            Error::ShapeMismatch(..) => "shape_mismatch",
            Error::IndexOutOfRange { .. } => "index_out_of_range",
            Error::VanishingWeight(_) => "vanishing_weight",
            Error::NotDominant(_) => "not_dominant",
            Error::NotComparable(_) => "not_comparable",
            Error::DegreeMismatch { .. } => "degree_mismatch",
            Error::CoordinateMismatch(_) => "coordinate_mismatch",
            Error::NotLexical(_) => "not_lexical",
            Error::TypicalWeight(_) => "typical_weight",
            Error::BlockDegreesDiffer { .. } => "block_degrees_differ",
            Error::InvalidBlock(_) => "invalid_block",
            Error::WindowTooSmall(_) => "window_too_small",
            Error::ExactDivisionFailure(_) => "exact_division_failure",
            Error::NonIntegerMultiplicity(_) => "non_integer_multiplicity",
            Error::NonIntegerDimension(_) => "non_integer_dimension",
            Error::Internal(_) => "internal",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
