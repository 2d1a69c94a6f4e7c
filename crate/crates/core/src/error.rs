use thiserror::Error;

use crate::poly::VarId;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CombinatoricsError {
    #[error("image list {0:?} is not a bijection of [1, n]")]
    NotABijection(Vec<usize>),
    #[error("point {point} lies outside the ground set [1, {ground}]")]
    OutOfGround { point: usize, ground: usize },
    #[error("ground sets differ: [1, {left}] vs [1, {right}]")]
    GroundMismatch { left: usize, right: usize },
    #[error("blocks do not partition [1, {ground}]: {reason}")]
    NotAPartition { ground: usize, reason: String },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("scalars live in different fields ({0} vs {1})")]
    FieldMismatch(String, String),
    #[error("no substitution given for variable {0}")]
    MissingVariable(VarId),
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot parse polynomial: {0}")]
    Parse(String),
    #[error("{0} is not a prime greater than 2")]
    NotPrime(u64),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuiverError {
    #[error("cannot read quiver: {0}")]
    Parse(String),
    #[error("quiver is invalid:\n  {}", .0.join("\n  "))]
    Invalid(Vec<String>),
    #[error("not a zigzag quiver:\n  {}", .0.join("\n  "))]
    NotZigzag(Vec<String>),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("could not sample an invertible matrix after {0} attempts")]
    SingularSample(usize),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DpError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("evaluation needs {rows}x{cols} permutations (bound {bound}); cap is {cap}")]
    CapExceeded {
        rows: usize,
        cols: usize,
        cap: usize,
        bound: String,
    },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeneratorError {
    #[error("multidegree does not match the quiver: {0}")]
    Degree(String),
    #[error("quintuple is not admissible: {0}")]
    NotAdmissible(String),
    #[error("operation needs characteristic zero")]
    NeedsCharZero,
    #[error(transparent)]
    Dp(#[from] DpError),
    #[error(transparent)]
    Combinatorics(#[from] CombinatoricsError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VerifyError {
    #[error("monomial basis has {size} elements; cap is {cap}")]
    CapExceeded { size: usize, cap: usize },
    #[error(transparent)]
    Quiver(#[from] QuiverError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Generator(#[from] GeneratorError),
}
