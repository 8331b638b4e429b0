use alloc::string::String;
use core::fmt;

/// Hypothesis of an extension builder that can fail.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Clause {
    /// The core bracket is not critical, or its `c` is not negative.
    CoreCritical,
    /// The core type has a zero eigenvalue (core not nilpotent).
    CorePositive,
    /// An action map does not commute with `D_λ`.
    Commutation,
    /// An action map is not normal.
    Normality,
    /// Some nonzero generator acts by `L = R = 0`.
    NonVanishing,
    /// An action map is not a derivation of the core.
    Derivation,
    /// A semisimple generator does not act skew-Hermitianly.
    Skewness,
    /// The designated center / semisimple split of the reductive part is wrong.
    ReductiveSplit,
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Clause::CoreCritical => "core criticality",
            Clause::CorePositive => "core positivity",
            Clause::Commutation => "(i) commutation with D",
            Clause::Normality => "(ii) normality",
            Clause::NonVanishing => "(ii) non-vanishing",
            Clause::Derivation => "derivation property",
            Clause::Skewness => "skewness",
            Clause::ReductiveSplit => "reductive split",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("dimension must be at least 1")]
    EmptyDimension,
    #[error("coefficient at index {index} is not finite")]
    NonFinite { index: usize },
    #[error("matrix is singular or ill-conditioned (condition number {condition:e})")]
    IllConditioned { condition: f64 },
    #[error("the zero bracket has no projective class")]
    ZeroBracket,
    #[error("map is not Hermitian (defect {defect:e})")]
    NotHermitian { defect: f64 },
    #[error("no integer type fits the spectrum (worst error {error:e})")]
    IrrationalType { error: f64 },
    #[error("degenerate type: the critical-value denominator vanishes")]
    DegenerateType,
    #[error("type multiplicities sum to {sum}, expected {n}")]
    TypeDimension { sum: usize, n: usize },
    #[error("invalid type: {0}")]
    InvalidType(&'static str),
    #[error("map is not a derivation (defect {defect:e})")]
    NotDerivation { defect: f64 },
    #[error("bracket is not critical (tangent residual {residual:e})")]
    NotCritical { residual: f64 },
    #[error("bracket is not symmetric Leibniz (left residual {left:e}, right residual {right:e})")]
    NotSymmetricLeibniz { left: f64, right: f64 },
    #[error("hypothesis {clause} fails (residual {residual:e})")]
    HypothesisViolation { clause: Clause, residual: f64 },
    #[error("Gram matrix is not positive definite (eigenvalue ratio {ratio:e})")]
    GramNotPositive { ratio: f64 },
    #[error("bracket is not a Lie algebra (anticommutativity {anticommutativity:e}, Jacobi {jacobi:e})")]
    NotLie { anticommutativity: f64, jacobi: f64 },
    #[error("assembled bracket is not critical (tangent residual {residual:e})")]
    CertificationFailed { residual: f64 },
    #[error("unknown catalog entry `{0}`")]
    UnknownAlgebra(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = core::result::Result<T, Error>;
