use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("field not totally real / unsupported: radicand {0}")]
    NotTotallyReal(i64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("element of {found} does not lie in {target}")]
    NotInField { found: String, target: String },
    #[error("degenerate form")]
    DegenerateForm,
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("{0} is not an index-2 subfield of {1}")]
    NotIndexTwo(String, String),
    #[error("rank mismatch: expected {expected}, got {found}")]
    RankMismatch { expected: usize, found: usize },
    #[error("form is not admissible")]
    NotAdmissible,
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("line {line}: unsupported label: {msg}")]
    UnsupportedLabel { line: usize, msg: String },
    #[error("element literal: {0}")]
    Literal(String),
    #[error("nested radical in element literal: {0}")]
    NestedRadical(String),
    #[error("disconnected diagram")]
    Disconnected,
    #[error("line {line}: duplicate edge {i}-{j}")]
    DuplicateEdge { line: usize, i: usize, j: usize },
    #[error("not a hyperbolic polytope of dimension {n}: signature (+{pos}, -{neg}, 0x{zero})")]
    NotHyperbolic {
        n: usize,
        pos: usize,
        neg: usize,
        zero: usize,
    },
    #[error("no full-rank principal minor")]
    NoFullRankMinor,
    #[error("{0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
