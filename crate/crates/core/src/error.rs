use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    #[error("vector {0} is not a root (self-intersection {1}, expected -2)")]
    NotARoot(String, i64),

    #[error("matrix does not lie in W(E7): {0}")]
    NotInGroup(String),

    #[error("group enumeration exceeded the element budget of {budget}")]
    EnumerationBudget { budget: usize },

    #[error("invalid permutation of 1..7: {0:?}")]
    InvalidPermutation(Vec<usize>),

    #[error("unknown class label {label:?}; valid labels are {valid}")]
    UnknownClass { label: String, valid: String },

    #[error("{0} is not a possible Picard trace; possible traces are -6, -4, -3, -2, -1, 0, 1, 2, 3, 4, 5, 6, 8")]
    UnknownTrace(i64),

    #[error(
        "q = {0} is not an odd prime power; the counting formulas hold only in odd characteristic \
         (plugging in q = 2 gives 135 surfaces of trace 8, but over F_2 there are none)"
    )]
    NotOddPrimePower(u64),

    #[error("invalid field parameters: {0}")]
    InvalidField(String),

    #[error("data transcription error in row {row}: {detail}")]
    DataIntegrity { row: String, detail: String },

    #[error("class data could not be parsed: {0}")]
    DataFormat(#[from] serde_json::Error),

    #[error("letter assignment failed: {0}")]
    LetterAssignment(String),

    #[error("search of {estimate} candidates exceeds the budget of {budget}")]
    OverBudget { estimate: u128, budget: u128 },

    #[error("invalid cycle type {0:?}: must be a partition of 7")]
    InvalidCycleType(Vec<usize>),

    #[error("internal error: {0}")]
    Internal(String),
}
