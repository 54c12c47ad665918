use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("order relation has a cycle through `{0}`")]
    Cycle(String),

    #[error("duplicate element `{0}`")]
    DuplicateElement(String),

    #[error("unknown element `{0}`")]
    UnknownElement(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("set {0} is not an order ideal")]
    NotAnIdeal(String),

    #[error("element {element} is not a member of {set}")]
    NotAMember { element: usize, set: String },

    #[error("bitstring has width {found}, expected {expected}")]
    WidthMismatch { expected: usize, found: usize },

    #[error("family is not the ideal family of a poset: {0}")]
    NotAnIdealFamily(String),

    #[error("malformed multivalued row: {0}")]
    MalformedRow(String),

    #[error("expansion of {size} bitstrings exceeds the cap of {cap}")]
    ExpansionCap { size: String, cap: usize },

    #[error("level {level} holds {size} ideals, above the configured ceiling of {cap}")]
    LevelCeiling { level: usize, size: String, cap: usize },

    #[error("lower cover {key} of a level-{level} ideal is missing from the previous level")]
    MissingLowerCover { level: usize, key: String },

    #[error("not a linear extension: {0}")]
    NotALinearExtension(String),

    #[error("oracle refuses {what} on {n} elements (cap {cap})")]
    OracleCap { what: &'static str, n: usize, cap: usize },

    #[error("checkpoint: {0}")]
    Checkpoint(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
