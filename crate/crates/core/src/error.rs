use thiserror::Error;

/// Library-wide error type.
///
/// Validation failures carry a witness wherever the failing law has one
/// (an associativity triple, a non-cocycle pair, a failing subgroup/degree).
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("not a group: {reason} (witness {witness:?})")]
    NotAGroup {
        reason: &'static str,
        witness: (usize, usize, usize),
    },
    #[error("not a group action: fails at g={g}, h={h}, point={point}")]
    NotAnAction { g: usize, h: usize, point: usize },
    #[error("group is trivial")]
    TrivialGroup,
    #[error("operation requires a G-set")]
    MissingGSet,
    #[error("modules are defined over different groups")]
    GroupMismatch,
    #[error("matrix does not define a homomorphism of presented modules: {0}")]
    IllFormedMap(&'static str),
    #[error("map is not equivariant (fails at group element {0})")]
    NotEquivariant(usize),
    #[error("unsupported cohomology degree {0}")]
    UnsupportedDegree(i8),
    #[error("character group requested for an infinite group")]
    InfiniteGroup,
    #[error("Hom(T,-) applied to the sequence is not exact at position {0}")]
    HomNotExact(usize),
    #[error("not a 1-cocycle: fails at pair (g={g}, h={h})")]
    NotACocycle { g: usize, h: usize },
    #[error("sequences cannot be spliced: end and start modules differ")]
    BoundaryMismatch,
    #[error("no envelope found; tried candidates: {tried:?}")]
    NoEnvelopeFound { tried: Vec<String> },
    #[error("envelope validation failed: {0}")]
    ValidationFailed(String),
    #[error("expected an isomorphism but the map is not bijective: {0}")]
    NotAnIsomorphism(&'static str),
    #[error("transport failed: the trace duality has no solution for this character")]
    TransportFailed,
    #[error("diagram check failed at {0}")]
    DiagramFailure(String),
    #[error("the given elements do not generate the group")]
    NotGenerating,
    #[error("cokernel is not free of the expected rank: {0}")]
    CokernelNotFree(String),
    #[error("exact arithmetic result does not fit in 64 bits")]
    ResultTooLarge,
    #[error("linear system has no solution")]
    NoSolution,
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
