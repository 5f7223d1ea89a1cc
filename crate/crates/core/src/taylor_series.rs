//! Taylor (power) series solutions `v(t) = sum_k b_k t^k` of the same
//! problems, and conversion of a sin-power series to Taylor form.
//!
//! Matching powers of `t` in `v'' = A + B v + C v^2 + D v^3` gives
//!
//! ```text
//!     (k+1)(k+2) b_{k+2} = A [k=0] + B b_k + C (b*b)_k + D (b*b*b)_k,
//! ```
//!
//! with `b_0 = v0`, `b_1 = 0`; odd coefficients vanish by induction.

use crate::error::{Error, Result};
use crate::model::GeneralProblem;
use crate::series_arith::{conv_at, truncated_mul, COMPENSATION_THRESHOLD};
use crate::sin_series::SinPowerSeries;

/// Coefficients `b_0..b_M` of `v(t) = sum b_k t^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct TaylorSeries {
    coeffs: Vec<f64>,
    pub problem: GeneralProblem,
    /// Truncation order M (`coeffs.len() == M + 1`).
    pub n_terms: usize,
}

impl TaylorSeries {
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn from_raw_parts(problem: GeneralProblem, coeffs: Vec<f64>) -> Self {
        let n_terms = coeffs.len().saturating_sub(1);
        TaylorSeries {
            coeffs,
            problem,
            n_terms,
        }
    }

    /// Convergence-radius estimate: median of `|b_{2k} / b_{2k+2}|^(1/2)`
    /// over the tail half of the nonzero even coefficients. `None` when
    /// fewer than four consecutive ratios exist (e.g. terminating series).
    /// Used only for warnings, never to gate evaluation.
    pub fn radius_estimate(&self) -> Option<f64> {
        let even: Vec<(usize, f64)> = self
            .coeffs
            .iter()
            .enumerate()
            .step_by(2)
            .filter(|(_, &b)| b != 0.0)
            .map(|(k, &b)| (k, b))
            .collect();
        let mut ratios: Vec<f64> = even
            .windows(2)
            .filter(|w| w[1].0 == w[0].0 + 2)
            .map(|w| (w[0].1 / w[1].1).abs().sqrt())
            .collect();
        if ratios.len() < 4 {
            return None;
        }
        let tail = ratios.split_off(ratios.len() / 2);
        let mut tail = tail;
        tail.sort_by(|a, b| a.partial_cmp(b).unwrap());
        Some(tail[tail.len() / 2])
    }
}

/// Run the Taylor coefficient recursion.
pub fn compute_taylor_coefficients(
    problem: &GeneralProblem,
    n_terms: usize,
) -> Result<TaylorSeries> {
    if n_terms < 2 {
        return Err(Error::Domain(format!("n_terms must be >= 2, got {n_terms}")));
    }
    let compensated = n_terms > COMPENSATION_THRESHOLD;
    let p = problem;
    let mut b = vec![0.0; n_terms + 1];
    b[0] = p.v0;

    let need_square = p.c != 0.0 || p.d != 0.0;
    let need_cube = p.d != 0.0;
    let mut sq = vec![0.0; n_terms + 1];

    for k in 0..=n_terms - 2 {
        if need_square {
            sq[k] = conv_at(&b, &b, k, compensated);
        }
        let cube_k = if need_cube {
            conv_at(&sq, &b, k, compensated)
        } else {
            0.0
        };
        let constant = if k == 0 { p.a } else { 0.0 };
        let value =
            (constant + p.b * b[k] + p.c * sq[k] + p.d * cube_k) / (((k + 1) * (k + 2)) as f64);
        if !value.is_finite() {
            return Err(Error::NonFinite { index: k + 2 });
        }
        b[k + 2] = value;
    }

    Ok(TaylorSeries {
        coeffs: b,
        problem: *problem,
        n_terms,
    })
}

/// Convert a sin-power series to a Taylor series in `t` by composing the
/// even part with the Taylor expansion of `w(t) = sin^2(Omega t)`:
///
/// ```text
///     sin^2(x) = sum_{j>=1} (-1)^(j+1) 2^(2j-1) x^(2j) / (2j)!
/// ```
///
/// Orders above `n_terms` never feed back into lower ones, so the result
/// is the exact truncation of the composed series.
///
/// Requires a series with only even nonzero coefficients (the recursion
/// guarantees this; violating it is a caller bug).
pub fn sin_series_to_taylor(series: &SinPowerSeries, n_terms: usize) -> TaylorSeries {
    let c = series.coeffs();
    assert!(
        c.iter().skip(1).step_by(2).all(|&x| x == 0.0),
        "sin_series_to_taylor requires even-only coefficients"
    );
    let len = n_terms + 1;
    let omega = series.omega_series;

    // Taylor coefficients of w(t) = sin^2(Omega t).
    let mut w = vec![0.0; len];
    let mut j = 1usize;
    let mut pow2 = 2.0; // 2^(2j-1)
    let mut fact = 2.0; // (2j)!
    let mut ompow = omega * omega; // Omega^(2j)
    while 2 * j < len {
        let sign = if j % 2 == 1 { 1.0 } else { -1.0 };
        w[2 * j] = sign * pow2 * ompow / fact;
        j += 1;
        pow2 *= 4.0;
        fact *= ((2 * j - 1) * (2 * j)) as f64;
        ompow *= omega * omega;
    }

    // Horner in w over the even sin coefficients:
    // result = c0 + w (c2 + w (c4 + ...)).
    let m_max = series.n_terms / 2;
    let mut acc = vec![0.0; len];
    for m in (0..=m_max).rev() {
        acc = truncated_mul(&acc, &w, len);
        acc[0] += c[2 * m];
    }

    TaylorSeries {
        coeffs: acc,
        problem: series.problem,
        n_terms,
    }
}

/// Horner evaluation at time `t`.
pub fn evaluate_taylor(series: &TaylorSeries, t: f64) -> f64 {
    let mut acc = 0.0;
    for &bk in series.coeffs.iter().rev() {
        acc = acc * t + bk;
    }
    acc
}
