use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    // group axioms
    #[error("Cayley table is not a Latin square ({0})")]
    NotLatinSquare(String),
    #[error("operation is not associative: ({0}*{1})*{2} != {0}*({1}*{2})")]
    NonAssociative(usize, usize, usize),
    #[error("table has no identity element")]
    NoIdentity,
    #[error("element {0} has no inverse")]
    NoInverse(usize),
    #[error("invalid group action: {0}")]
    InvalidAction(String),
    #[error("unknown group name `{0}`")]
    UnknownGroup(String),

    // metric spaces
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("distance matrix is not symmetric at ({0}, {1})")]
    AsymmetricMatrix(usize, usize),
    #[error("distance matrix has a negative, non-finite or nonzero-diagonal entry at ({0}, {1})")]
    BadEntry(usize, usize),
    #[error("triangle inequality fails: d({0},{2}) > d({0},{1}) + d({1},{2})")]
    TriangleViolation(usize, usize, usize),
    #[error("group element {0} does not act isometrically on the pair ({1}, {2})")]
    NonIsometricAction(usize, usize, usize),
    #[error("the two spaces carry different groups")]
    GroupMismatch,
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("bad parameters: {0}")]
    BadParams(String),

    // solvers
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("relation is empty")]
    EmptyRelation,
    #[error("relation is not a G-correspondence: {0}")]
    NotCorrespondence(String),
    #[error("glued distance is not a metric: {0}")]
    GluingNotMetric(String),

    // filtrations and persistence
    #[error("simplex budget exceeded: more than {0} simplices")]
    SizeBudgetExceeded(usize),
    #[error("characteristic {p} cannot split an element of order {order}")]
    BadCharacteristic { p: u64, order: usize },
    #[error("group action does not preserve filtration values (simplex {0})")]
    NonInvariantAction(usize),
    #[error("barcodes have {0} and {1} infinite bars")]
    InfiniteDistance(usize, usize),
    #[error("barcodes have different degrees ({0} vs {1})")]
    DegreeMismatch(usize, usize),

    // formulas
    #[error("domain error: {0}")]
    DomainError(String),

    // io
    #[error("parse error at line {line}, column {column}: {msg}")]
    ParseError { line: usize, column: usize, msg: String },
    #[error("schema error in field `{field}`: {msg}")]
    SchemaError { field: String, msg: String },
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::ParseError { line: e.line(), column: e.column(), msg: e.to_string() }
    }
}
