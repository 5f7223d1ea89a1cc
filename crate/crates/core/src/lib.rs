//! Series solutions of anharmonic oscillators.
//!
//! The library solves autonomous oscillators `v'' = A + B v + C v^2 + D v^3`
//! started from rest, in two expansions:
//!
//! * sin-power series `v(t) = sum c_n sin^n(Omega t)` ([`sin_series`]),
//!   whose coefficients obey a Cauchy-product recursion and converge
//!   exactly when `Omega = pi/T`;
//! * Taylor series `v(t) = sum b_k t^k` ([`taylor_series`]), the same
//!   function in power form.
//!
//! The period `T` comes from energy-integral quadrature, from an AGM
//! elliptic closed form for the hardening cubic, or from calibrating the
//! recursion's coefficient tail ([`period`]). An adaptive Runge-Kutta
//! 5(4) integrator ([`oracle`]) provides independent reference
//! trajectories, and [`diagnostics`] machine-checks positivity,
//! convergence, the quarter-period sum identity and the coefficient
//! decay bounds.
//!
//! All values are immutable after construction and every operation is a
//! pure function, safe to call concurrently.

pub mod diagnostics;
pub mod error;
pub mod jsonio;
pub mod model;
pub mod oracle;
pub mod period;
mod series_arith;
pub mod sin_series;
pub mod taylor_series;

pub use error::{Error, Result};
pub use model::{
    make_cubic, make_cubic_normalized, make_quadratic_shifted, make_raw, unshift, GeneralProblem,
    ProblemLabel, ShiftRecord,
};
pub use oracle::{detect_turning_points, integrate, Trajectory};
pub use period::{
    calibrate_frequency, elliptic_k_agm, period_by_calibration, period_by_quadrature,
    period_duffing_closed_form, potential_energy, turning_points, PeriodEstimate, PeriodMethod,
};
pub use sin_series::{
    compute_sin_coefficients, evaluate_sin_series, ode_residual, quarter_period_sums,
    SinPowerSeries,
};
pub use taylor_series::{
    compute_taylor_coefficients, evaluate_taylor, sin_series_to_taylor, TaylorSeries,
};
