use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("stage-too-large: V_{stage} is beyond the limit {cap}")]
    StageTooLarge { stage: usize, cap: usize },
    #[error("not-a-pair: set is not a Kuratowski pair")]
    NotAPair,

    #[error("arity-exceeds-context: formula of arity {arity} renamed from a context of {context}")]
    ArityExceedsContext { arity: usize, context: usize },
    #[error("invalid renaming: {0}")]
    InvalidRenaming(String),
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("env-too-short: formula of arity {arity} needs that many entries, got {len}")]
    EnvTooShort { arity: usize, len: usize },
    #[error("env-not-in-model: environment entry {index} is not in the model")]
    EnvNotInModel { index: usize },
    #[error("arity-too-large: arity {arity} exceeds the limit {limit}")]
    ArityTooLarge { arity: usize, limit: usize },
    #[error("unknown-axiom: {0}")]
    UnknownAxiom(String),

    #[error("not-well-founded: relation has a cycle")]
    NotWellFounded,
    #[error("functional-accessed-undefined-predecessor: {0}")]
    UndefinedPredecessor(String),

    #[error("not-reflexive: {0} is not below itself")]
    NotReflexive(String),
    #[error("not-transitive: {0}")]
    NotTransitive(String),
    #[error("not-antisymmetric: {0}")]
    NotAntisymmetric(String),
    #[error("no-top: {0}")]
    NoTop(String),
    #[error("invalid poset: {0}")]
    InvalidPoset(String),
    #[error("poset-too-large: {size} conditions exceeds the scan cap {cap}")]
    PosetTooLarge { size: usize, cap: usize },
    #[error("density violated: family member {0} is not dense")]
    DensityViolated(usize),
    #[error("not-minimal: {0} is not a minimal condition")]
    NotMinimal(String),

    #[error("pow-name-too-large: 2^{cells} candidates exceeds the cap")]
    PowNameTooLarge { cells: usize },
    #[error("model-too-large: {size} elements exceeds the cap {cap}")]
    ModelTooLarge { size: usize, cap: usize },
    #[error("name {0} is not in the ground model")]
    NameNotInModel(String),

    #[error("config: {0}")]
    Config(String),
}

impl Error {
    /// Errors caused by a resource limit rather than bad input.
    pub fn is_cap(&self) -> bool {
        matches!(
            self,
            Error::StageTooLarge { .. }
                | Error::PosetTooLarge { .. }
                | Error::PowNameTooLarge { .. }
                | Error::ModelTooLarge { .. }
        )
    }
}
