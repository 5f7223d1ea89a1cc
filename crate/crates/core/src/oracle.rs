//! Ground-truth trajectories from an embedded Dormand-Prince 5(4) pair
//! with PI step control and fifth-order dense output. One fixed tableau;
//! the oracle stays boring and auditable.

use crate::error::{Error, Result};
use crate::model::GeneralProblem;

/// Step bookkeeping for a completed integration.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct IntegrationStats {
    pub steps_accepted: usize,
    pub steps_rejected: usize,
    pub fn_evals: usize,
}

/// Sampled trajectory `(t, v, v')` at equally spaced times.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    pub velocities: Vec<f64>,
    /// Requested tolerance.
    pub tol: f64,
    pub stats: IntegrationStats,
}

impl Trajectory {
    /// Maximum drift of `v'^2/2 + V(v)` from its initial value.
    pub fn energy_drift(&self, problem: &GeneralProblem) -> f64 {
        let e0 = 0.5 * self.velocities[0] * self.velocities[0]
            + crate::period::potential_energy(problem, self.values[0]);
        self.values
            .iter()
            .zip(&self.velocities)
            .map(|(&v, &vp)| {
                (0.5 * vp * vp + crate::period::potential_energy(problem, v) - e0).abs()
            })
            .fold(0.0, f64::max)
    }
}

#[derive(Clone, Copy)]
struct State {
    v: f64,
    vp: f64,
}

impl State {
    #[inline]
    fn axpy(self, h: f64, k: [Deriv; 7], coef: [f64; 7]) -> State {
        let mut v = self.v;
        let mut vp = self.vp;
        for i in 0..7 {
            if coef[i] != 0.0 {
                v += h * coef[i] * k[i].dv;
                vp += h * coef[i] * k[i].dvp;
            }
        }
        State { v, vp }
    }
}

#[derive(Clone, Copy, Default)]
struct Deriv {
    dv: f64,
    dvp: f64,
}

#[inline]
fn deriv(p: &GeneralProblem, s: State) -> Deriv {
    Deriv {
        dv: s.vp,
        dvp: p.force(s.v),
    }
}

// Dormand-Prince 5(4) tableau.
const A3: [f64; 7] = [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0, 0.0];
const A4: [f64; 7] = [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0, 0.0];
const A5: [f64; 7] = [
    19372.0 / 6561.0,
    -25360.0 / 2187.0,
    64448.0 / 6561.0,
    -212.0 / 729.0,
    0.0,
    0.0,
    0.0,
];
const A6: [f64; 7] = [
    9017.0 / 3168.0,
    -355.0 / 33.0,
    46732.0 / 5247.0,
    49.0 / 176.0,
    -5103.0 / 18656.0,
    0.0,
    0.0,
];
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const ERR: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];
const D: [f64; 7] = [
    -12715105075.0 / 11282082432.0,
    0.0,
    87487479700.0 / 32700410799.0,
    -10690763975.0 / 1880347072.0,
    701980252875.0 / 199316789632.0,
    -1453857185.0 / 822651844.0,
    69997945.0 / 29380423.0,
];

const SAFETY: f64 = 0.9;
const BETA: f64 = 0.04;
const FAC_MIN: f64 = 0.2; // max shrink per step is 1/5
const FAC_MAX: f64 = 10.0;
const MAX_STEPS: usize = 5_000_000;

struct DenseSegment {
    t0: f64,
    h: f64,
    cont: [[f64; 2]; 5],
}

impl DenseSegment {
    fn eval(&self, t: f64) -> (f64, f64) {
        let th = (t - self.t0) / self.h;
        let th1 = 1.0 - th;
        let c = &self.cont;
        let mut out = [0.0; 2];
        for (i, o) in out.iter_mut().enumerate() {
            *o = c[0][i] + th * (c[1][i] + th1 * (c[2][i] + th * (c[3][i] + th1 * c[4][i])));
        }
        (out[0], out[1])
    }
}

/// Initial step size from the standard two-derivative heuristic.
fn initial_step(p: &GeneralProblem, y0: State, tol: f64, t_end: f64) -> f64 {
    let f0 = deriv(p, y0);
    let sc_v = tol * (1.0 + y0.v.abs());
    let sc_vp = tol * (1.0 + y0.vp.abs());
    let d0 = ((y0.v / sc_v).powi(2) + (y0.vp / sc_vp).powi(2)).sqrt();
    let d1 = ((f0.dv / sc_v).powi(2) + (f0.dvp / sc_vp).powi(2)).sqrt();
    let h0 = if d0 < 1e-5 || d1 < 1e-5 {
        1e-6
    } else {
        0.01 * d0 / d1
    };
    let y1 = State {
        v: y0.v + h0 * f0.dv,
        vp: y0.vp + h0 * f0.dvp,
    };
    let f1 = deriv(p, y1);
    let d2 = (((f1.dv - f0.dv) / sc_v).powi(2) + ((f1.dvp - f0.dvp) / sc_vp).powi(2)).sqrt() / h0;
    let d_max = d1.max(d2);
    let h1 = if d_max <= 1e-15 {
        (h0 * 1e-3).max(1e-6)
    } else {
        (0.01 / d_max).powf(0.2)
    };
    h1.min(100.0 * h0).min(t_end)
}

/// Integrate `problem` to `t_end`, sampling `samples` equally spaced
/// points (including both endpoints) from the dense output.
pub fn integrate(
    problem: &GeneralProblem,
    t_end: f64,
    tol: f64,
    samples: usize,
) -> Result<Trajectory> {
    if !t_end.is_finite() || t_end <= 0.0 {
        return Err(Error::Domain(format!("t_end must be positive, got {t_end}")));
    }
    if !(1e-13..=1e-3).contains(&tol) {
        return Err(Error::Domain(format!(
            "tol must lie in [1e-13, 1e-3], got {tol}"
        )));
    }
    if samples < 2 {
        return Err(Error::Domain(format!("samples must be >= 2, got {samples}")));
    }

    let p = problem;
    let sample_times: Vec<f64> = (0..samples)
        .map(|i| t_end * i as f64 / (samples - 1) as f64)
        .collect();

    let mut stats = IntegrationStats::default();
    let mut values = Vec::with_capacity(samples);
    let mut velocities = Vec::with_capacity(samples);
    values.push(p.v0);
    velocities.push(0.0);
    let mut next_sample = 1usize;

    let mut t = 0.0;
    let mut y = State { v: p.v0, vp: 0.0 };
    let mut k1 = deriv(p, y);
    stats.fn_evals += 2;
    let mut h = initial_step(p, y, tol, t_end);
    let mut facold = 1e-4_f64;
    let expo1 = 0.2 - BETA * 0.75;

    let mut k = [Deriv::default(); 7];
    for _ in 0..MAX_STEPS {
        if t >= t_end {
            break;
        }
        if h < 16.0 * f64::EPSILON * t.abs().max(1.0) {
            return Err(Error::StepUnderflow { t });
        }
        if t + h > t_end {
            h = t_end - t;
        }

        k[0] = k1;
        k[1] = deriv(p, y.axpy(h, k, [0.2, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]));
        k[2] = deriv(p, y.axpy(h, k, A3));
        k[3] = deriv(p, y.axpy(h, k, A4));
        k[4] = deriv(p, y.axpy(h, k, A5));
        k[5] = deriv(p, y.axpy(h, k, A6));
        let y_new = y.axpy(h, k, B5);
        k[6] = deriv(p, y_new);
        stats.fn_evals += 6;

        if !(y_new.v.is_finite() && y_new.vp.is_finite()) {
            return Err(Error::NonFinite {
                index: stats.steps_accepted,
            });
        }

        let sc_v = tol * (1.0 + y.v.abs().max(y_new.v.abs()));
        let sc_vp = tol * (1.0 + y.vp.abs().max(y_new.vp.abs()));
        let mut ev = 0.0;
        let mut evp = 0.0;
        for i in 0..7 {
            ev += ERR[i] * k[i].dv;
            evp += ERR[i] * k[i].dvp;
        }
        let err = (0.5 * ((h * ev / sc_v).powi(2) + (h * evp / sc_vp).powi(2))).sqrt();

        if err <= 1.0 {
            // Accept; sample everything that falls inside this step.
            if next_sample < samples {
                let mut cont = [[0.0; 2]; 5];
                let y_arr = [y.v, y.vp];
                let yn_arr = [y_new.v, y_new.vp];
                let k1_arr = [k[0].dv, k[0].dvp];
                let k7_arr = [k[6].dv, k[6].dvp];
                for i in 0..2 {
                    let ydiff = yn_arr[i] - y_arr[i];
                    let bspl = h * k1_arr[i] - ydiff;
                    cont[0][i] = y_arr[i];
                    cont[1][i] = ydiff;
                    cont[2][i] = bspl;
                    cont[3][i] = ydiff - h * k7_arr[i] - bspl;
                    let mut dsum = 0.0;
                    for (j, dj) in D.iter().enumerate() {
                        dsum += dj * if i == 0 { k[j].dv } else { k[j].dvp };
                    }
                    cont[4][i] = h * dsum;
                }
                let seg = DenseSegment { t0: t, h, cont };
                while next_sample < samples && sample_times[next_sample] <= t + h {
                    let (v, vp) = seg.eval(sample_times[next_sample]);
                    values.push(v);
                    velocities.push(vp);
                    next_sample += 1;
                }
            }

            let fac11 = err.powf(expo1);
            let fac = (fac11 / facold.powf(BETA) / SAFETY).clamp(1.0 / FAC_MAX, 1.0 / FAC_MIN);
            facold = err.max(1e-4);
            t += h;
            y = y_new;
            k1 = k[6]; // FSAL
            stats.steps_accepted += 1;
            h /= fac;
        } else {
            stats.steps_rejected += 1;
            let fac11 = err.powf(expo1);
            h /= (fac11 / SAFETY).min(1.0 / FAC_MIN);
        }
    }
    if t < t_end {
        return Err(Error::NoConvergence {
            what: "integration steps",
            limit: MAX_STEPS,
        });
    }
    // Exact final state for the last sample (dense output already wrote
    // it, but the step endpoint is the more accurate value).
    *values.last_mut().unwrap() = y.v;
    *velocities.last_mut().unwrap() = y.vp;

    Ok(Trajectory {
        times: sample_times,
        values,
        velocities,
        tol,
        stats,
    })
}

/// Amplitudes at velocity sign changes, refined with the cubic Hermite
/// interpolant of `(v, v')` on the bracketing sample interval.
pub fn detect_turning_points(traj: &Trajectory) -> Result<Vec<f64>> {
    let n = traj.times.len();
    let mut out = Vec::new();
    for i in 0..n - 1 {
        let (t0, t1) = (traj.times[i], traj.times[i + 1]);
        let (v0, v1) = (traj.values[i], traj.values[i + 1]);
        let (p0, p1) = (traj.velocities[i], traj.velocities[i + 1]);
        if p0 == 0.0 && i == 0 {
            continue; // the initial rest point is not a detected crossing
        }
        if p0 * p1 > 0.0 {
            continue;
        }
        if p0 == 0.0 {
            out.push(v0);
            continue;
        }
        // Hermite cubic for v on [t0, t1]; its derivative has the
        // bracketed root of v'.
        let h = t1 - t0;
        let hermite = |s: f64| -> f64 {
            let h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
            let h10 = s * (1.0 - s) * (1.0 - s);
            let h01 = s * s * (3.0 - 2.0 * s);
            let h11 = s * s * (s - 1.0);
            h00 * v0 + h10 * h * p0 + h01 * v1 + h11 * h * p1
        };
        let dhermite = |s: f64| -> f64 {
            let d00 = 6.0 * s * s - 6.0 * s;
            let d10 = 3.0 * s * s - 4.0 * s + 1.0;
            let d01 = -d00;
            let d11 = 3.0 * s * s - 2.0 * s;
            d00 * v0 / h + d10 * p0 + d01 * v1 / h + d11 * p1
        };
        let (mut lo, mut hi) = (0.0, 1.0);
        let flo = dhermite(lo);
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if dhermite(mid).signum() == flo.signum() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        out.push(hermite(0.5 * (lo + hi)));
    }
    if out.is_empty() {
        return Err(Error::NoTurning);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{make_cubic, make_quadratic_shifted, make_raw};
    use std::f64::consts::PI;

    #[test]
    fn harmonic_returns_to_start() {
        let p = make_raw(1.0, 0.0, 0.0, 1.0).unwrap();
        let traj = integrate(&p, 2.0 * PI, 1e-10, 65).unwrap();
        assert!((traj.values.last().unwrap() - 1.0).abs() < 1e-9);
        assert_eq!(traj.values[0], 1.0);
        assert_eq!(traj.velocities[0], 0.0);
    }

    #[test]
    fn equilibrium_stays_constant() {
        let (p, _) = make_quadratic_shifted(1.0, 1.0, -1.0).unwrap();
        let traj = integrate(&p, 10.0, 1e-10, 33).unwrap();
        for &v in &traj.values {
            assert_eq!(v, p.v0);
        }
    }

    #[test]
    fn duffing_periodicity_closure() {
        let p = make_cubic(1.0, 1.0, 1.0).unwrap();
        let t = crate::period::period_by_quadrature(&p, 16).unwrap().t_period;
        let traj = integrate(&p, t, 1e-11, 129).unwrap();
        assert!(
            (traj.values.last().unwrap() - 1.0).abs() < 1e-8,
            "closure error {}",
            (traj.values.last().unwrap() - 1.0).abs()
        );
    }

    #[test]
    fn energy_drift_within_budget() {
        let p = make_cubic(1.0, 1.0, 1.0).unwrap();
        let traj = integrate(&p, 20.0, 1e-9, 257).unwrap();
        let e0 = 0.75_f64;
        assert!(traj.energy_drift(&p) <= 100.0 * traj.tol * (1.0 + e0.abs()));
    }

    #[test]
    fn dense_output_matches_tight_reference() {
        let p = make_cubic(1.0, 1.0, 1.0).unwrap();
        let loose = integrate(&p, 5.0, 1e-7, 41).unwrap();
        let tight = integrate(&p, 5.0, 1e-13, 41).unwrap();
        let max_err = loose
            .values
            .iter()
            .zip(&tight.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(max_err < 1e-5, "{max_err}");
    }

    #[test]
    fn self_convergence_monotone_in_tol() {
        let p = make_cubic(1.0, 0.7, 0.9).unwrap();
        let reference = integrate(&p, 8.0, 1e-13, 33).unwrap();
        let mut prev = f64::INFINITY;
        for tol in [1e-5, 1e-7, 1e-9, 1e-11] {
            let traj = integrate(&p, 8.0, tol, 33).unwrap();
            let err = traj
                .values
                .iter()
                .zip(&reference.values)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            assert!(
                err <= prev * 1.5 + 1e-12,
                "tol {tol}: err {err} worse than previous {prev}"
            );
            prev = err;
        }
    }

    #[test]
    fn time_symmetry_over_one_period() {
        let (p, _) = make_quadratic_shifted(1.0, 1.0, 0.1).unwrap();
        let t = crate::period::period_by_quadrature(&p, 16).unwrap().t_period;
        let traj = integrate(&p, t, 1e-11, 129).unwrap();
        let n = traj.values.len();
        for i in 0..n {
            let diff = (traj.values[i] - traj.values[n - 1 - i]).abs();
            assert!(diff <= 10.0 * 1e-11 * (1.0 + traj.values[i].abs()) + 1e-9);
        }
    }

    #[test]
    fn turning_detection_harmonic_and_quadratic() {
        // Spanning 1.25 periods keeps both turning families away from
        // the trajectory endpoints.
        let p = make_raw(1.0, 0.0, 0.0, 1.0).unwrap();
        let traj = integrate(&p, 2.5 * PI, 1e-11, 321).unwrap();
        let turns = detect_turning_points(&traj).unwrap();
        assert!((turns[0] - -1.0).abs() < 1e-8);
        assert!((turns[1] - 1.0).abs() < 1e-8);

        // Symmetric quartic well: same amplitudes.
        let d = make_cubic(1.0, 1.0, 1.0).unwrap();
        let t = crate::period::period_by_quadrature(&d, 16).unwrap().t_period;
        let traj = integrate(&d, 1.25 * t, 1e-11, 321).unwrap();
        let turns = detect_turning_points(&traj).unwrap();
        assert!((turns[0] - -1.0).abs() < 1e-8);
        assert!((turns[1] - 1.0).abs() < 1e-8);

        let (q, _) = make_quadratic_shifted(1.0, 1.0, 0.1).unwrap();
        let (xm, _) = crate::period::turning_points(&q).unwrap();
        let t = crate::period::period_by_quadrature(&q, 16).unwrap().t_period;
        let traj = integrate(&q, 1.25 * t, 1e-11, 641).unwrap();
        let turns = detect_turning_points(&traj).unwrap();
        assert!(
            (turns[0] - xm).abs() < 1e-8,
            "detected {} vs deflated {}",
            turns[0],
            xm
        );
    }

    #[test]
    fn no_turning_error() {
        let p = make_raw(1.0, 0.0, 0.0, 1.0).unwrap();
        let traj = integrate(&p, 0.5, 1e-9, 17).unwrap();
        assert_eq!(detect_turning_points(&traj), Err(Error::NoTurning));
    }

    #[test]
    fn tolerance_validation() {
        let p = make_raw(1.0, 0.0, 0.0, 1.0).unwrap();
        assert!(matches!(
            integrate(&p, 1.0, 1e-14, 17),
            Err(Error::Domain(_))
        ));
        assert!(matches!(integrate(&p, 1.0, 0.01, 17), Err(Error::Domain(_))));
    }
}
