use thiserror::Error;

/// Failures raised by the algebraic and geometric layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid generator set: {0}")]
    Generators(String),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("generator index {index} out of range for {rank} generators")]
    GeneratorOutOfRange { index: usize, rank: usize },
    #[error("cannot flip a leaf")]
    FlipLeaf,
    #[error("the empty word has no pairing tree")]
    EmptyWordTree,
    #[error("move closure exceeded the cap of {cap} presentations")]
    ClosureCap { cap: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },
    #[error("integer overflow in lattice arithmetic")]
    Overflow,
    #[error("invalid plane: {0}")]
    Plane(String),
    #[error("invalid loop: {0}")]
    Loop(String),
    #[error("loop touches puncture {0}")]
    TouchesPuncture(usize),
    #[error("corridor to base {base} is blocked by puncture {puncture}")]
    RerouteBlocked { base: String, puncture: usize },
    #[error("vertex {vertex} lies on the downward ray of puncture {puncture}; perturb the loop")]
    PerturbationRequired { vertex: usize, puncture: usize },
    #[error("{0}")]
    Domain(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    pub fn is_syntax(&self) -> bool {
        matches!(self, Error::Parse(_))
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

/// Syntax error with a 1-based position and the set of tokens that would have
/// been accepted there.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at {line}:{column}: expected {}, found {found}", .expected.join(" | "))]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub expected: Vec<String>,
    pub found: String,
}

impl ParseError {
    pub fn new(line: usize, column: usize, expected: &[&str], found: impl Into<String>) -> Self {
        ParseError { line, column, expected: expected.iter().map(|s| s.to_string()).collect(), found: found.into() }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
