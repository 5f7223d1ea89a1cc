//! Error type shared by all modules.

/// Errors produced by problem construction, series computation, period
/// evaluation, integration and diagnostics.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// Constructor parameters describe no usable dynamics.
    #[error("degenerate problem: {0}")]
    DegenerateProblem(String),

    /// A coefficient (or state) stopped being finite; `index` is where
    /// divergence was detected.
    #[error("non-finite value at index {index}")]
    NonFinite { index: usize },

    /// The initial value sits at a critical point of the potential; the
    /// solution is constant and has no period.
    #[error("initial value is an equilibrium of the potential")]
    Equilibrium,

    /// No bounded potential well contains the initial value.
    #[error("motion from the initial value is unbounded")]
    NonPeriodic,

    /// A turning point is a double root of E - V; the period diverges.
    #[error("turning point is degenerate (separatrix)")]
    Separatrix,

    /// Node doubling (or another iteration) hit its cap without meeting
    /// the convergence target.
    #[error("no convergence within {limit} {what}")]
    NoConvergence { what: &'static str, limit: usize },

    /// Elliptic modulus outside [0, 1).
    #[error("elliptic modulus {k} outside [0, 1)")]
    ModulusOutOfRange { k: f64 },

    /// The closed-form Duffing period only covers the hardening branch.
    #[error("closed form requires beta >= 0 (hardening); got {beta}")]
    OutOfBranch { beta: f64 },

    /// The tail-growth objective has no interior minimum in the bracket.
    #[error("no interior minimum of the tail objective in [{lo}, {hi}]")]
    NoMinimum { lo: f64, hi: f64 },

    /// Adaptive step size fell below the representable floor.
    #[error("step size underflow at t = {t}")]
    StepUnderflow { t: f64 },

    /// The operation requires the shifted-quadratic form (B = D = 0).
    #[error("series is not in shifted-quadratic form (B = D = 0 required)")]
    WrongForm,

    /// The coefficient tail is exactly zero; a decay fit is undefined.
    #[error("series terminates: coefficients vanish from index {tail_start}")]
    AllZero { tail_start: usize },

    /// The trajectory velocity never changes sign.
    #[error("no turning point: velocity never changes sign")]
    NoTurning,

    /// Precondition violation on an argument.
    #[error("invalid input: {0}")]
    Domain(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// `true` for errors caused by invalid arguments rather than by the
    /// numerics of a well-posed computation.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::DegenerateProblem(_)
                | Error::ModulusOutOfRange { .. }
                | Error::OutOfBranch { .. }
                | Error::WrongForm
                | Error::Domain(_)
        )
    }

    /// Short machine-readable tag for the error kind.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DegenerateProblem(_) => "DegenerateProblem",
            Error::NonFinite { .. } => "NonFinite",
            Error::Equilibrium => "Equilibrium",
            Error::NonPeriodic => "NonPeriodic",
            Error::Separatrix => "Separatrix",
            Error::NoConvergence { .. } => "NoConvergence",
            Error::ModulusOutOfRange { .. } => "ModulusOutOfRange",
            Error::OutOfBranch { .. } => "OutOfBranch",
            Error::NoMinimum { .. } => "NoMinimum",
            Error::StepUnderflow { .. } => "StepUnderflow",
            Error::WrongForm => "WrongForm",
            Error::AllZero { .. } => "AllZero",
            Error::NoTurning => "NoTurning",
            Error::Domain(_) => "Domain",
        }
    }
}
