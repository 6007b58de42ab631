use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("symbol {ch:?} at position {pos} is not in the alphabet")]
    UnknownSymbol { ch: char, pos: usize },
    #[error("alphabet symbol {0:?} is declared twice")]
    DuplicateSymbol(char),
    #[error("alphabet symbol {0:?} is reserved")]
    ReservedSymbol(char),
    #[error("alphabet must contain between 1 and 255 symbols")]
    AlphabetSize,
    #[error("rule {rule} has an empty left-hand side")]
    EmptyLhs { rule: usize },
    #[error("rule {rule} has identical sides")]
    TrivialRule { rule: usize },
    #[error("rule {rule} uses a symbol outside the alphabet")]
    SymbolOutsideAlphabet { rule: usize },
    #[error("rules {first} and {second} share a left-hand side")]
    DuplicateLhs { first: usize, second: usize },
    #[error("rewriting did not terminate within {budget} steps")]
    StepBudgetExceeded { budget: usize },
    #[error("presentation line {line}: {message}")]
    Presentation { line: usize, message: String },
    #[error("cannot orient an equation between identical words")]
    Unorientable,
    #[error("completion was exhausted; the outcome is not a complete system")]
    NotCompleted,
    #[error("family index must be at least 1")]
    InvalidFamilyIndex,
    #[error("word is reducible: a rule applies at offset {offset}")]
    NotNormalForm { offset: usize },
    #[error("decomposition out of range: {0}")]
    Range(String),
    #[error("integer overflow in exact arithmetic")]
    Overflow,
    #[error("closure over {words} words exceeds the configured cap of {cap}")]
    MemoryGuard { words: u128, cap: usize },
    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
