use thiserror::Error;

use crate::smd::Vertex;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("not a semicomplete multipartite digraph: {0}")]
    NotAnSmd(String),
    #[error("unknown vertex {0}")]
    UnknownVertex(Vertex),
    #[error("vertex set is empty")]
    EmptySet,
    #[error("target class size {alpha} is smaller than the largest class ({max})")]
    AlphaTooSmall { alpha: usize, max: usize },
    #[error("digraph is not weakly connected")]
    Disconnected,
    #[error("union of the two paths contains a directed cycle")]
    UnionCyclic,
    #[error("vertices {0} and {1} share a color class")]
    ColorClash(Vertex, Vertex),
    #[error("not a path: {0}")]
    NotAPath(String),
    #[error("digraph is not strong")]
    NotStrong,
    #[error("digraph is strong")]
    IsStrong,
    #[error("digraph is not 2-strong")]
    Not2Strong,
    #[error("start vertex does not lie in an earlier linear part than the end vertex")]
    WrongOrder,
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("adding a 2-cycle inside a color class of size {0} breaks the multipartite structure")]
    WouldBreakSmd(usize),
    #[error("D-{{x,y}} has only {0} color classes, at least 5 are required")]
    TooFewClasses(usize),
    #[error(
        "independence number {0} exceeds 2; unilateral connectivity no longer implies a \
         Hamiltonian path (the bioriented K_1,3 is strong but not traceable)"
    )]
    AlphaTooLarge(usize),
    #[error("digraph is not unilaterally connected")]
    NotUnilateral,
    #[error("bad bounds (a={a}, b={b}): {reason}")]
    BadBounds { a: usize, b: usize, reason: String },
    #[error("bounds (a={a}, b={b}) are not supported by the reduction")]
    UnsupportedBounds { a: usize, b: usize },
    #[error("lift mode {mode} requires {required}, instance has (a={a}, b={b}, alpha={alpha})")]
    ModeBoundsMismatch { mode: &'static str, required: String, a: usize, b: usize, alpha: usize },
    #[error("path is not a witness of the instance: {0}")]
    NotAWitness(String),
    #[error("assignment does not satisfy clause {0}")]
    NotSatisfying(usize),
    #[error("instance size {size} exceeds exhaustive search limit {limit}")]
    TooLarge { size: usize, limit: usize },
    #[error("rejection sampling exhausted after {0} attempts")]
    RejectionExhausted(usize),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}
