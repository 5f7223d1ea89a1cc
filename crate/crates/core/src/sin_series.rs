//! Sin-power series solutions `v(t) = sum_n c_n sin^n(Omega t)`.
//!
//! Substituting the ansatz into `v'' = A + B v + C v^2 + D v^3` and using
//!
//! ```text
//!     v'' = Omega^2 * sum_n [ n(n-1) s^(n-2) (1 - s^2) - n s^n ] c_n,
//!     s = sin(Omega t),
//! ```
//!
//! matching powers of `s` gives
//!
//! ```text
//!     2 Omega^2 c_2                  = A + B c0 + C c0^2 + D c0^3
//!     (n+1)(n+2) c_{n+2} = n^2 c_n + (B c_n + C (c*c)_n + D (c*c*c)_n) / Omega^2
//! ```
//!
//! for `n >= 1`, where `*` is the Cauchy product. `c_1 = 0` (zero initial
//! velocity), and all odd coefficients vanish by induction.
//!
//! `Omega` is an explicit input: the recursion is well defined for any
//! positive value, but the series converges only at `Omega = pi/T`.
//! Callers choose `Omega = omega` (reproducing the printed coefficient
//! formulas), `pi/T` from quadrature, or a calibrated value.

use crate::error::{Error, Result};
use crate::model::GeneralProblem;
use crate::series_arith::{conv_at, COMPENSATION_THRESHOLD};

/// Coefficients `c_0..c_N` of `v(t) = sum c_n sin^n(Omega t)` for a
/// specific problem and series frequency.
#[derive(Debug, Clone, PartialEq)]
pub struct SinPowerSeries {
    /// Series frequency Omega (`pi/T` for the exact solution).
    pub omega_series: f64,
    coeffs: Vec<f64>,
    /// The problem these coefficients solve.
    pub problem: GeneralProblem,
    /// Truncation order N (`coeffs.len() == N + 1`).
    pub n_terms: usize,
}

impl SinPowerSeries {
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Assemble a series from parts, without running the recursion.
    /// Used by diagnostics tests with synthetic coefficient sequences.
    pub fn from_raw_parts(problem: GeneralProblem, omega_series: f64, coeffs: Vec<f64>) -> Self {
        let n_terms = coeffs.len().saturating_sub(1);
        SinPowerSeries {
            omega_series,
            coeffs,
            problem,
            n_terms,
        }
    }

    /// The same series truncated to order `n <= n_terms`. The recursion
    /// never looks ahead, so the prefix equals a fresh computation with
    /// the same summation mode.
    pub fn truncated(&self, n: usize) -> Self {
        let n = n.min(self.n_terms);
        SinPowerSeries {
            omega_series: self.omega_series,
            coeffs: self.coeffs[..=n].to_vec(),
            problem: self.problem,
            n_terms: n,
        }
    }

    /// Coefficients of `v''` as a power series in `s = sin(Omega t)`:
    /// `d_m = Omega^2 [ (m+1)(m+2) c_{m+2} - m^2 c_m ]`.
    pub fn second_derivative_coeffs(&self) -> Vec<f64> {
        let om2 = self.omega_series * self.omega_series;
        let n = self.n_terms;
        (0..=n)
            .map(|m| {
                let next = if m + 2 <= n { self.coeffs[m + 2] } else { 0.0 };
                om2 * (((m + 1) * (m + 2)) as f64 * next - (m * m) as f64 * self.coeffs[m])
            })
            .collect()
    }
}

/// Run the coefficient recursion for `problem` at series frequency
/// `omega_series`, keeping orders `0..=n_terms`.
pub fn compute_sin_coefficients(
    problem: &GeneralProblem,
    omega_series: f64,
    n_terms: usize,
) -> Result<SinPowerSeries> {
    if !omega_series.is_finite() || omega_series <= 0.0 {
        return Err(Error::Domain(format!(
            "omega_series must be positive, got {omega_series}"
        )));
    }
    if n_terms < 2 {
        return Err(Error::Domain(format!("n_terms must be >= 2, got {n_terms}")));
    }
    let compensated = n_terms > COMPENSATION_THRESHOLD;
    let om2 = omega_series * omega_series;
    let p = problem;

    let mut c = vec![0.0; n_terms + 1];
    c[0] = p.v0;
    // n = 0 balance: 2 Omega^2 c2 = v''(0).
    c[2] = p.force(c[0]) / (2.0 * om2);

    let need_square = p.c != 0.0 || p.d != 0.0;
    let need_cube = p.d != 0.0;
    // sq[m] = (c*c)_m, maintained incrementally; the cube is the Cauchy
    // product of sq with c, so the cubic path reuses the quadratic one.
    let mut sq = vec![0.0; n_terms + 1];
    if need_square {
        sq[0] = c[0] * c[0];
    }

    for n in 1..=n_terms.saturating_sub(2) {
        if need_square {
            sq[n] = conv_at(&c, &c, n, compensated);
        }
        let cube_n = if need_cube {
            conv_at(&sq, &c, n, compensated)
        } else {
            0.0
        };
        let nonlinear = p.b * c[n] + p.c * sq[n] + p.d * cube_n;
        let value = ((n * n) as f64 * c[n] + nonlinear / om2) / (((n + 1) * (n + 2)) as f64);
        if !value.is_finite() {
            return Err(Error::NonFinite { index: n + 2 });
        }
        c[n + 2] = value;
    }

    Ok(SinPowerSeries {
        omega_series,
        coeffs: c,
        problem: *problem,
        n_terms,
    })
}

/// Horner evaluation of the ansatz at time `t`.
pub fn evaluate_sin_series(series: &SinPowerSeries, t: f64) -> f64 {
    let s = (series.omega_series * t).sin();
    let mut acc = 0.0;
    for &cn in series.coeffs.iter().rev() {
        acc = acc * s + cn;
    }
    acc
}

/// Residual `v''(t) - (A + B v + C v^2 + D v^3)` with `v''` taken
/// analytically from the ansatz. Zero for an exact (terminating) series.
pub fn ode_residual(series: &SinPowerSeries, t: f64) -> f64 {
    let s = (series.omega_series * t).sin();
    let d = series.second_derivative_coeffs();
    let mut vpp = 0.0;
    for &dm in d.iter().rev() {
        vpp = vpp * s + dm;
    }
    let v = evaluate_sin_series(series, t);
    vpp - series.problem.force(v)
}

/// The sums `S = sum c_n` and `M = sum n c_n` entering the quarter-period
/// identity.
pub fn quarter_period_sums(series: &SinPowerSeries) -> (f64, f64) {
    let mut s = 0.0;
    let mut m = 0.0;
    for (n, &cn) in series.coeffs.iter().enumerate() {
        s += cn;
        m += n as f64 * cn;
    }
    (s, m)
}
