use thiserror::Error;

/// Every failure the pipeline can report. Variants carry the witnessing
/// indices so a failed check can be reproduced by hand.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("multiplication table is malformed: {0}")]
    MalformedTable(String),
    #[error("not associative: ({0}*{1})*{2} != {0}*({1}*{2})")]
    NotAssociative(usize, usize, usize),
    #[error("no two-sided identity element")]
    NoIdentity,
    #[error("element {0} has no inverse")]
    NoInverse(usize),

    #[error("matrix is not Hermitian (deviation {0:e})")]
    NotHermitian(f64),
    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("real 2-cochain fails the cocycle identity at ({0}, {1}, {2}) by {3:e}")]
    NotACocycle(usize, usize, usize, f64),

    #[error("rho({0}) is not an automorphism of G")]
    RhoNotAutomorphism(usize),
    #[error("rho({0})rho({1}) != Ad_tau({0},{1}) rho({0}{1})")]
    RhoCompositionFails(usize, usize),
    #[error("tau fails the twisted cocycle identity at ({0}, {1}, {2})")]
    TauCocycleFails(usize, usize, usize),
    #[error("not normalized at {0}")]
    NotNormalized(String),

    #[error("cocycle identity fails at ({0}, {1}, {2}) by {3:e}")]
    CocycleIdentityFails(usize, usize, usize, f64),
    #[error("cocycle value at ({0}, {1}) does not have unit modulus")]
    NotUnitModulus(usize, usize),

    #[error("derived twist data inconsistent: {0}")]
    InternalConsistency(String),

    #[error("algebra block decomposition is defective: {0}")]
    NotSemisimpleDetected(String),
    #[error("block dimension rounding failed: {0}")]
    RoundingFailure(String),
    #[error("no usable projection after {0} seeds")]
    DegenerateProjection(usize),
    #[error("intertwiner space has dimension {0} (expected 0 or 1)")]
    SchurViolation(usize),
    #[error("twisted representation invalid: {0}")]
    InvalidRepresentation(String),

    #[error("no dual point matches the transported class of point {point} along {arrow}")]
    ClassNotFound { point: usize, arrow: usize },
    #[error("Schur scalar check failed at point {point}, arrows ({q1}, {q2}): deviation {deviation:e}")]
    NotScalar { point: usize, q1: usize, q2: usize, deviation: f64 },

    #[error("{side} module axiom fails at ({0}, {1})", side = .2)]
    ModuleAxiomFails(usize, usize, String),
    #[error("twisted multiplicativity fails at ({0}, {1}) by {2:e}")]
    MultiplicativityFails(usize, usize, f64),
    #[error("no isomorphism found: {0}")]
    NoIsomorphismFound(String),

    #[error("groupoid invalid: {0}")]
    InvalidGroupoid(String),
    #[error("groupoid extension invalid: {0}")]
    InvalidGroupoidExtension(String),

    #[error("parse error: {0}")]
    Parse(String),
    #[error("{0}")]
    Usage(String),
}

pub type Result<T> = std::result::Result<T, Error>;
