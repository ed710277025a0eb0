use thiserror::Error;

/// Errors raised by the coefficient, polynomial and spectral routines.
///
/// Variants fall into two groups: input validation failures (the caller
/// handed us something outside the domain) and numerical-contract
/// violations (a computed quantity broke an invariant that holds in exact
/// arithmetic). [`Error::is_numerical`] separates the two.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("not a chain sequence: minimal parameter m[{0}] = {1} is outside [0, 1)")]
    NotAChainSequence(usize, f64),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("maximal parameters did not stabilise within tolerance {tol:e} (last change {last_change:e})")]
    NoConvergence { tol: f64, last_change: f64 },
    #[error("backward iteration reached a non-positive parameter M[{0}] = {1}")]
    DivisionByZero(usize, f64),
    #[error("|alpha[{0}]| = {1} is not strictly inside the unit disk")]
    OutsideDisk(usize, f64),
    #[error("degenerate denominator 1 - Re(tau alpha) = {1:e} at index {0}")]
    DegenerateDenominator(usize, f64),
    #[error("internal invariant violated: {0}")]
    InternalInvariant(String),
    #[error("no sign change in bracket {j} at level {level}: [{lo}, {hi}] with values ({f_lo:e}, {f_hi:e})")]
    BracketFailure {
        level: usize,
        j: usize,
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("zero {x} of W_{k} (index {j}) lies inside the forbidden interval")]
    GapViolated { k: usize, j: usize, x: f64 },
    #[error("R_n(1) = {0:e} is too close to zero for the weight at z = 1")]
    NodeAtOne(f64),
    #[error("quadrature weight {j} is not positive: {value:e}")]
    NegativeWeight { j: usize, value: f64 },
    #[error("discriminant has imaginary residual {residual:e} at theta = {theta}")]
    NonRealDiscriminant { theta: f64, residual: f64 },
    #[error("found {found} solutions of Delta = {target} (expected {expected})")]
    RootCountMismatch {
        target: f64,
        found: usize,
        expected: usize,
    },
    #[error("found {found} zeros of phi*_p - phi_p on the circle (expected {expected})")]
    CandidateCountMismatch { found: usize, expected: usize },
    #[error("denominator 1 - w tau_j(w) alpha_j vanished at j = {0}")]
    DenominatorVanished(usize),
    #[error("point is not a pure-point candidate: |tau_p(w) - 1| = {0:e}")]
    NotACandidate(f64),
    #[error("theta = {0} is not strictly inside a band")]
    OffBand(f64),
    #[error("sequence too short: {0}")]
    TooShort(String),
}

impl Error {
    /// True for failures of a numerical contract rather than of input validation.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NoConvergence { .. }
                | Error::InternalInvariant(_)
                | Error::BracketFailure { .. }
                | Error::GapViolated { .. }
                | Error::NegativeWeight { .. }
                | Error::NonRealDiscriminant { .. }
                | Error::RootCountMismatch { .. }
                | Error::CandidateCountMismatch { .. }
                | Error::DenominatorVanished(_)
        )
    }

    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NotAChainSequence(..) => "NotAChainSequence",
            Error::InvalidParameters(_) => "InvalidParameters",
            Error::NoConvergence { .. } => "NoConvergence",
            Error::DivisionByZero(..) => "DivisionByZero",
            Error::OutsideDisk(..) => "OutsideDisk",
            Error::DegenerateDenominator(..) => "DegenerateDenominator",
            Error::InternalInvariant(_) => "InternalInvariant",
            Error::BracketFailure { .. } => "BracketFailure",
            Error::HypothesisViolated(_) => "HypothesisViolated",
            Error::GapViolated { .. } => "GapViolated",
            Error::NodeAtOne(_) => "NodeAtOne",
            Error::NegativeWeight { .. } => "NegativeWeight",
            Error::NonRealDiscriminant { .. } => "NonRealDiscriminant",
            Error::RootCountMismatch { .. } => "RootCountMismatch",
            Error::CandidateCountMismatch { .. } => "CandidateCountMismatch",
            Error::DenominatorVanished(_) => "DenominatorVanished",
            Error::NotACandidate(_) => "NotACandidate",
            Error::OffBand(_) => "OffBand",
            Error::TooShort(_) => "TooShort",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
