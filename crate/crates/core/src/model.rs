//! Oscillator problems in the general autonomous form
//!
//! ```text
//!     v'' = A + B v + C v^2 + D v^3,    v(0) = v0,  v'(0) = 0
//! ```
//!
//! plus the shift / normalization maps that bring the two concrete
//! equations
//!
//! ```text
//!     u'' + w^2 u = -b u^2      (quadratic)
//!     u'' + w^2 u = -b u^3      (cubic / Duffing)
//! ```
//!
//! into that form. Initial velocity is identically zero and is not a field.

use crate::error::{Error, Result};

/// Provenance of a [`GeneralProblem`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProblemLabel {
    Raw,
    ShiftedQuadratic,
    Cubic,
    NormalizedCubic,
}

impl ProblemLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            ProblemLabel::Raw => "raw",
            ProblemLabel::ShiftedQuadratic => "shifted-quadratic",
            ProblemLabel::Cubic => "cubic",
            ProblemLabel::NormalizedCubic => "normalized-cubic",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "raw" => Some(ProblemLabel::Raw),
            "shifted-quadratic" => Some(ProblemLabel::ShiftedQuadratic),
            "cubic" => Some(ProblemLabel::Cubic),
            "normalized-cubic" => Some(ProblemLabel::NormalizedCubic),
            _ => None,
        }
    }
}

/// An autonomous oscillator `v'' = A + B v + C v^2 + D v^3` started from
/// rest at `v(0) = v0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneralProblem {
    /// Constant force term A.
    pub a: f64,
    /// Linear coefficient B.
    pub b: f64,
    /// Quadratic coefficient C.
    pub c: f64,
    /// Cubic coefficient D.
    pub d: f64,
    /// Initial value; the initial velocity is always zero.
    pub v0: f64,
    pub label: ProblemLabel,
}

impl GeneralProblem {
    /// Right-hand side `v'' = A + B v + C v^2 + D v^3`.
    ///
    /// Written with the powers grouped first so that the constructors'
    /// exact cancellations (trivial solution, equilibria) survive in
    /// floating point.
    #[inline]
    pub fn force(&self, v: f64) -> f64 {
        self.a + self.b * v + self.c * (v * v) + self.d * (v * v * v)
    }

    /// d(force)/dv.
    #[inline]
    pub fn force_prime(&self, v: f64) -> f64 {
        self.b + 2.0 * self.c * v + 3.0 * self.d * (v * v)
    }

    fn check_nondegenerate(&self) -> Result<()> {
        if self.b == 0.0 && self.c == 0.0 && self.d == 0.0 && self.a == 0.0 {
            return Err(Error::DegenerateProblem(
                "all force coefficients vanish".into(),
            ));
        }
        Ok(())
    }

    /// Build directly from the four force coefficients, labeled raw.
    pub fn from_coefficients(a: f64, b: f64, c: f64, d: f64, v0: f64) -> Result<Self> {
        let problem = GeneralProblem {
            a,
            b,
            c,
            d,
            v0,
            label: ProblemLabel::Raw,
        };
        problem.check_nondegenerate()?;
        Ok(problem)
    }
}

/// Record of the variable change applied by a constructor, so series
/// solutions in `v` can be reported in the original variable `u` via
/// `u = scale * v - offset`, and periods in normalized time can be
/// reported in physical time via `t_physical = t_normalized / time_scale`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShiftRecord {
    /// Constant subtracted to recover `u` from `scale * v`.
    pub offset: f64,
    /// Amplitude ratio (`u = scale * v - offset`).
    pub scale: f64,
    /// Time dilation of the normalized problem (1 when time is untouched).
    pub time_scale: f64,
}

impl ShiftRecord {
    pub fn identity() -> Self {
        ShiftRecord {
            offset: 0.0,
            scale: 1.0,
            time_scale: 1.0,
        }
    }
}

/// Shift the quadratic oscillator `u'' + omega^2 u = -beta u^2` to
/// `v'' = A - beta v^2` with `A = omega^4 / (4 beta)` by writing
/// `u = v - omega^2 / (2 beta)`.
///
/// `A` is stored as `beta * offset^2` (the same value in exact
/// arithmetic); this makes the constant-solution cancellation
/// `A + C v0^2 = 0` exact in floating point when `a0 = -omega^2/beta`.
pub fn make_quadratic_shifted(
    omega: f64,
    beta: f64,
    a0: f64,
) -> Result<(GeneralProblem, ShiftRecord)> {
    if beta == 0.0 {
        return Err(Error::DegenerateProblem(
            "beta = 0: the shift omega^2/(2 beta) is singular; use make_raw".into(),
        ));
    }
    if !omega.is_finite() || omega <= 0.0 {
        return Err(Error::Domain(format!("omega must be positive, got {omega}")));
    }
    let offset = omega * omega / (2.0 * beta);
    let problem = GeneralProblem {
        a: beta * (offset * offset),
        b: 0.0,
        c: -beta,
        d: 0.0,
        v0: a0 + offset,
        label: ProblemLabel::ShiftedQuadratic,
    };
    let shift = ShiftRecord {
        offset,
        scale: 1.0,
        time_scale: 1.0,
    };
    Ok((problem, shift))
}

/// Build `v'' = -omega^2 v - beta2 v^2 - beta3 v^3` directly, without any
/// variable change.
pub fn make_raw(omega: f64, beta2: f64, beta3: f64, a0: f64) -> Result<GeneralProblem> {
    if !omega.is_finite() || omega < 0.0 {
        return Err(Error::Domain(format!(
            "omega must be non-negative, got {omega}"
        )));
    }
    let problem = GeneralProblem {
        a: 0.0,
        b: -(omega * omega),
        c: -beta2,
        d: -beta3,
        v0: a0,
        label: ProblemLabel::Raw,
    };
    problem.check_nondegenerate()?;
    Ok(problem)
}

/// The cubic oscillator `u'' + omega^2 u = -beta u^3` in physical time.
pub fn make_cubic(omega: f64, beta: f64, a0: f64) -> Result<GeneralProblem> {
    if !omega.is_finite() || omega < 0.0 {
        return Err(Error::Domain(format!(
            "omega must be non-negative, got {omega}"
        )));
    }
    let problem = GeneralProblem {
        a: 0.0,
        b: -(omega * omega),
        c: 0.0,
        d: -beta,
        v0: a0,
        label: ProblemLabel::Cubic,
    };
    problem.check_nondegenerate()?;
    Ok(problem)
}

/// Normalize the cubic oscillator with `u = a0 v`, `t = omega x`:
/// `v'' + v + bt v^3 = 0`, `v(0) = 1`, where `bt = beta a0^2 / omega^2`.
///
/// Substituting `u = a0 v`, `t = omega x` into `u'' + omega^2 u = -beta u^3`
/// gives the exponent 2 on omega; the resulting trajectory rescales onto
/// the raw one, which the tests check against the integrator.
pub fn make_cubic_normalized(
    omega: f64,
    beta: f64,
    a0: f64,
) -> Result<(GeneralProblem, ShiftRecord)> {
    if a0 == 0.0 {
        return Err(Error::DegenerateProblem(
            "a0 = 0: amplitude normalization is singular".into(),
        ));
    }
    if !omega.is_finite() || omega <= 0.0 {
        return Err(Error::Domain(format!("omega must be positive, got {omega}")));
    }
    let beta_tilde = beta * a0 * a0 / (omega * omega);
    let problem = GeneralProblem {
        a: 0.0,
        b: -1.0,
        c: 0.0,
        d: -beta_tilde,
        v0: 1.0,
        label: ProblemLabel::NormalizedCubic,
    };
    let shift = ShiftRecord {
        offset: 0.0,
        scale: a0,
        time_scale: omega,
    };
    Ok((problem, shift))
}

/// Map a value of the transformed variable back to the original one:
/// `u = scale * v - offset`.
pub fn unshift(value: f64, shift: &ShiftRecord) -> f64 {
    shift.scale * value - shift.offset
}
