use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("words must have at least one letter")]
    EmptyWord,
    #[error("letter {letter} is outside the alphabet [1, {n}]")]
    LetterOutOfRange { letter: u32, n: u32 },
    #[error("alphabet size must be at least {min}, got {n}")]
    AlphabetTooSmall { n: u32, min: u32 },
    #[error("arity mismatch: expected {expected}, got {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("alphabet mismatch: {left} vs {right}")]
    AlphabetMismatch { left: u32, right: u32 },
    #[error("index {index} is outside 1..={max}")]
    IndexOutOfRange { index: u64, max: u64 },
    #[error("[n]^m with n = {n}, m = {arity} does not fit in 64-bit indices")]
    IndexOverflow { n: u32, arity: usize },
    #[error("words must differ")]
    DegenerateCycle,
    #[error("word {0} appears more than once in the cycle list")]
    RepeatedWord(String),
    #[error("map is not a permutation: {0}")]
    NotAPermutation(String),
    #[error("materialization needs about {estimate} support entries, budget is {budget}")]
    BudgetExceeded { estimate: u128, budget: usize },
    #[error("operation requires an unstable transposition")]
    StableInput,
    #[error("unsupported format `{0}`")]
    UnknownFormat(String),
    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },
    #[error("verification aborted after {completed} of {total} instances: {cause}")]
    Aborted { completed: usize, total: usize, cause: Box<Error> },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("no rank in 1..={rank_upper} passes the prefix check")]
    RankNotFound { rank_upper: usize },
}

impl Error {
    /// Whether this error, or the one that aborted a run, is a budget overrun.
    pub fn is_budget(&self) -> bool {
        match self {
            Error::BudgetExceeded { .. } => true,
            Error::Aborted { cause, .. } => cause.is_budget(),
            _ => false,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
