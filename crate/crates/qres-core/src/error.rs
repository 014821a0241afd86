//! Error type shared across the crate.

use thiserror::Error;

/// Everything that can go wrong when building or transforming a resolution.
///
/// Variants are deliberately flat: callers (and the CLI) match on the kind,
/// the message carries the specifics.
#[derive(Debug, Error)]
pub enum Error {
    /// Group action has a pseudo-reflection that fixes no coordinate axis
    /// properly, i.e. gcd(d, a, b) > 1: the action is not faithful on any
    /// effective model.
    #[error("non-effective action: {0}")]
    NonEffectiveAction(String),

    /// An operation required a normalized (small) quotient type and got one
    /// with gcd(d, a) > 1 or gcd(d, b) > 1.
    #[error("type is not normalized: {0}")]
    NotNormalized(String),

    /// Blow-up weights must be positive and coprime.
    #[error("bad weight vector: {0}")]
    BadWeight(String),

    /// Order of vanishing asked for the zero germ.
    #[error("empty support: {0}")]
    EmptySupport(String),

    /// The curve germ is not invariant under the ambient group action.
    #[error("curve is not invariant: {0}")]
    NonInvariantCurve(String),

    /// Input germ has repeated branches or otherwise violates the
    /// reduced-curve assumptions.
    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    /// A dual graph failed structural validation.
    #[error("malformed graph: {0}")]
    MalformedGraph(String),

    /// Intersection matrix is singular, so there is no dual basis.
    #[error("singular intersection matrix: {0}")]
    SingularMatrix(String),

    /// Local intersection of a branch with itself was requested.
    #[error("same branch: {0}")]
    SameBranch(String),

    /// Branch pair that never meets an exceptional divisor in common.
    #[error("detached branch: {0}")]
    DetachedBranch(String),

    /// Weight vector of a weighted projective plane must have gcd 1.
    #[error("weights are not coprime: {0}")]
    NonCoprimeWeights(String),

    /// A covering transform needs d | s (or the double-point analogue) and
    /// the input graph does not satisfy it.
    #[error("divisibility violation: {0}")]
    DivisibilityViolation(String),

    /// Graph data is internally inconsistent for the requested operation
    /// (missing multiplicities, non-integral genus, ...).
    #[error("inconsistent data: {0}")]
    InconsistentData(String),

    /// Continued fraction expansion of d/k needs k >= 1.
    #[error("bad fraction: {0}")]
    BadFraction(String),

    /// A quantity that must be an integer came out fractional.
    #[error("integrality violation: {0}")]
    IntegralityViolation(String),

    /// Polynomial factor outside the recognized shapes (monomial, binomial,
    /// binomial power plus monomial).
    #[error("unsupported factor shape: {0}")]
    UnsupportedFactorShape(String),

    /// Coefficient arithmetic left the exact representable class
    /// (e.g. a root that is not rational times a root of unity).
    #[error("unsupported coefficient: {0}")]
    UnsupportedCoefficient(String),

    /// Syntactic problem in a polynomial, type string or JSON document.
    #[error("parse error: {0}")]
    ParseError(String),

    /// Invariant broken inside the library; always a bug.
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Stable machine-readable tag, used by the CLI for structured output.
    pub fn code(&self) -> &'static str {
        match self {
            Error::NonEffectiveAction(_) => "non-effective-action",
            Error::NotNormalized(_) => "not-normalized",
            Error::BadWeight(_) => "bad-weight",
            Error::EmptySupport(_) => "empty-support",
            Error::NonInvariantCurve(_) => "non-invariant-curve",
            Error::DegenerateInput(_) => "degenerate-input",
            Error::MalformedGraph(_) => "malformed-graph",
            Error::SingularMatrix(_) => "singular-matrix",
            Error::SameBranch(_) => "same-branch",
            Error::DetachedBranch(_) => "detached-branch",
            Error::NonCoprimeWeights(_) => "non-coprime-weights",
            Error::DivisibilityViolation(_) => "divisibility-violation",
            Error::InconsistentData(_) => "inconsistent-data",
            Error::BadFraction(_) => "bad-fraction",
            Error::IntegralityViolation(_) => "integrality-violation",
            Error::UnsupportedFactorShape(_) => "unsupported-factor-shape",
            Error::UnsupportedCoefficient(_) => "unsupported-coefficient",
            Error::ParseError(_) => "parse-error",
            Error::Internal(_) => "internal",
        }
    }

    /// True for the syntactic failures (exit code 2 in the CLI); everything
    /// else is a domain error (exit code 1).
    pub fn is_syntactic(&self) -> bool {
        matches!(
            self,
            Error::ParseError(_)
                | Error::UnsupportedFactorShape(_)
                | Error::UnsupportedCoefficient(_)
        )
    }
}
