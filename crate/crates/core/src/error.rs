use thiserror::Error;

/// Errors shared by every module in the crate. Mathematical precondition
/// failures get their own variants so the CLI can map them to exit codes.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1")]
    DegreeZero,
    #[error("no embedding F_{p}^{source_deg} -> F_{p}^{target_deg}: {source_deg} does not divide {target_deg}")]
    IncompatibleTower {
        p: u64,
        source_deg: usize,
        target_deg: usize,
    },
    #[error("expected {expected} coordinates, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("{0} is not a root of f(X,0)")]
    NotARoot(String),
    #[error("{0} is not a simple root of f(X,0)")]
    NotSimple(String),
    #[error("lifted order {have} is below the required order {needed}")]
    OrderTooSmall { needed: usize, have: usize },
    #[error("powers table covers degree {have_degree} at order {have_order}; need degree {need_degree} at order {need_order}")]
    TableTooSmall {
        need_degree: usize,
        need_order: usize,
        have_degree: usize,
        have_order: usize,
    },
    #[error("deg_X f(X,0) = {got} is below the total degree {expected}")]
    DegreeDrop { expected: usize, got: usize },
    #[error("f(X,0) is squarefull: it has no simple root in any extension")]
    Squarefull,
    #[error("search would enumerate {candidates} candidates, over the ceiling {ceiling}")]
    BudgetExceeded { candidates: u64, ceiling: u64 },
    #[error("slice parameters sized for n = {got}, polynomial has n = {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("f has a linear factor over the algebraic closure: {0}")]
    HasLinearFactor(String),
    #[error("f is not absolutely irreducible (factor of degree {0} found)")]
    NotAbsolutelyIrreducible(usize),
    #[error("domain error: {0}")]
    DomainError(String),
    #[error("parse error at byte {offset}: {msg}")]
    Parse { offset: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
