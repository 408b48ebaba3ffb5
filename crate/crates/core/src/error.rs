//! Error type shared by all modules.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("not positive definite: {0}")]
    NotPositive(String),
    #[error("functional flagged normalized but Tr(Q) = {0}")]
    NotNormalized(f64),
    #[error("shape mismatch: {0}")]
    BadShape(String),
    #[error("operands belong to different GNS contexts")]
    ContextMismatch,
    #[error("operands live on different tensor spaces")]
    SpaceMismatch,
    #[error("operator is not a projection (residual {0:.3e})")]
    NotProjection(f64),
    #[error("subspace is not an operator bimodule: {0}")]
    NotBimodule(String),
    #[error("adjacency axioms failed: {0:?}")]
    AxiomsFail(Vec<u8>),
    #[error("u0 and u1 loop verdicts disagree")]
    InconsistentVerdict,
    #[error("context is not classical (blocks of size 1 with counting measure)")]
    NotClassicalContext,
    #[error("matrix entries are not 0/1 within tolerance")]
    NotZeroOne,
    #[error("Kraus map is not unital (residual {0:.3e})")]
    NotUnital(f64),
    #[error("channel range leaves the target algebra (residual {0:.3e})")]
    RangeViolation(f64),
    #[error("functional is not the restriction of the ambient trace")]
    NotTraceRestriction,
    #[error("stochastic table invalid: {0}")]
    NotStochastic(String),
    #[error("candidate does not preserve the state")]
    NotStatePreserving,
    #[error("commutation and fixed-point automorphism criteria disagree")]
    VerdictMismatch,
    #[error("super-operator equivalence violated: {0}")]
    EquivalenceViolation(String),
    #[error("instance too large: {0}")]
    TooLarge(String),
    #[error("deformation parameter must satisfy 0 < q <= 1, got {0}")]
    BadQ(f64),
    #[error("operator does not lie in the span of B ⊗ B^op (residual {0:.3e})")]
    NotInOperatorSpan(f64),
    #[error("document error: {0}")]
    Document(String),
}
