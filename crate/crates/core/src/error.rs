use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("constant polynomial")]
    ConstantPolynomial,
    #[error("polynomial does not have simple zeros")]
    NotSimpleZeros,
    #[error("square completion needs d >= 2, got {0}")]
    SquareDegree(usize),
    #[error("square completion needs {expected} coefficients, got {got}")]
    SquareCoefficients { expected: usize, got: usize },
    #[error("chart undefined")]
    ChartUndefined,
    #[error("point off surface")]
    OffSurface,
    #[error("overshear sides differ")]
    SideMismatch,
    #[error("expression depth {0} exceeds limit of {max}", max = crate::entire::MAX_DEPTH)]
    TooDeep(usize),
    #[error("word length {0} exceeds limit of {max}", max = crate::autos::MAX_WORD_LEN)]
    WordTooLong(usize),
    #[error("near ramification/axis")]
    NearSingular,
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown identifier `{0}`")]
    UnknownIdentifier(String),
    #[error("need at least 3 estimates, got {0}")]
    TooFewEstimates(usize),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("unknown check `{name}`; registry: {}", registry.join(", "))]
    UnknownCheck { name: String, registry: Vec<String> },
    #[error("bad word json: {0}")]
    WordJson(String),
}

pub type Result<T> = std::result::Result<T, Error>;
