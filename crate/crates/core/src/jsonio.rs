//! JSON and CSV rendering with a fixed 17-significant-digit float format
//! (enough for exact f64 round trips), plus the parsers for reloading
//! serialized series and problems.

use crate::diagnostics::{DiagnosticsReport, ScanOutcome};
use crate::error::{Error, Result};
use crate::model::{GeneralProblem, ProblemLabel, ShiftRecord};
use crate::oracle::Trajectory;
use crate::period::PeriodEstimate;
use crate::sin_series::SinPowerSeries;
use crate::taylor_series::TaylorSeries;
use serde_json::Value;

/// Render a double with 17 significant digits; parsing the result
/// recovers the identical bits.
pub fn fmt_g17(x: f64) -> String {
    format!("{x:.16e}")
}

fn json_array(values: &[f64]) -> String {
    let items: Vec<String> = values.iter().map(|&v| fmt_g17(v)).collect();
    format!("[{}]", items.join(","))
}

impl GeneralProblem {
    /// `{"A":., "B":., "C":., "D":., "v0":., "label":., "shift":{...}}`;
    /// `shift` is `null` for problems built without a variable change.
    pub fn to_json(&self, shift: Option<&ShiftRecord>) -> String {
        let shift_json = match shift {
            Some(s) => format!(
                "{{\"offset\":{},\"scale\":{},\"time_scale\":{}}}",
                fmt_g17(s.offset),
                fmt_g17(s.scale),
                fmt_g17(s.time_scale)
            ),
            None => "null".into(),
        };
        format!(
            "{{\"A\":{},\"B\":{},\"C\":{},\"D\":{},\"v0\":{},\"label\":\"{}\",\"shift\":{}}}",
            fmt_g17(self.a),
            fmt_g17(self.b),
            fmt_g17(self.c),
            fmt_g17(self.d),
            fmt_g17(self.v0),
            self.label.as_str(),
            shift_json
        )
    }
}

impl SinPowerSeries {
    /// `{"omega_series":., "coefficients":[...], "n_terms":N}`.
    pub fn to_json(&self) -> String {
        format!(
            "{{\"omega_series\":{},\"coefficients\":{},\"n_terms\":{}}}",
            fmt_g17(self.omega_series),
            json_array(self.coeffs()),
            self.n_terms
        )
    }

    /// Two-column CSV `index,coefficient`.
    pub fn to_csv(&self) -> String {
        coefficients_csv(self.coeffs())
    }
}

impl TaylorSeries {
    /// Same shape as the sin series, tagged with `"type":"taylor"` and
    /// without a frequency.
    pub fn to_json(&self) -> String {
        format!(
            "{{\"type\":\"taylor\",\"coefficients\":{},\"n_terms\":{}}}",
            json_array(self.coeffs()),
            self.n_terms
        )
    }

    pub fn to_csv(&self) -> String {
        coefficients_csv(self.coeffs())
    }
}

fn coefficients_csv(coeffs: &[f64]) -> String {
    let mut out = String::from("index,coefficient\n");
    for (i, &c) in coeffs.iter().enumerate() {
        out.push_str(&format!("{i},{}\n", fmt_g17(c)));
    }
    out
}

impl PeriodEstimate {
    /// `{"T":., "omega":., "turning_points":[x-, x+], "method":., "err":.}`.
    pub fn to_json(&self) -> String {
        format!(
            "{{\"T\":{},\"omega\":{},\"turning_points\":[{},{}],\"method\":\"{}\",\"err\":{}}}",
            fmt_g17(self.t_period),
            fmt_g17(self.omega),
            fmt_g17(self.x_minus),
            fmt_g17(self.x_plus),
            self.method.as_str(),
            fmt_g17(self.err_estimate)
        )
    }

    pub fn to_csv(&self) -> String {
        format!(
            "T,omega,x_minus,x_plus,method,err\n{},{},{},{},{},{}\n",
            fmt_g17(self.t_period),
            fmt_g17(self.omega),
            fmt_g17(self.x_minus),
            fmt_g17(self.x_plus),
            self.method.as_str(),
            fmt_g17(self.err_estimate)
        )
    }
}

impl Trajectory {
    /// CSV with header `t,v,v_prime`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,v,v_prime\n");
        for i in 0..self.times.len() {
            out.push_str(&format!(
                "{},{},{}\n",
                fmt_g17(self.times[i]),
                fmt_g17(self.values[i]),
                fmt_g17(self.velocities[i])
            ));
        }
        out
    }
}

fn json_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn scan_to_json(scan: &ScanOutcome) -> String {
    let violations: Vec<String> = scan
        .violations
        .iter()
        .take(16)
        .map(|v| {
            format!(
                "{{\"at\":{},\"lhs\":{},\"rhs\":{}}}",
                fmt_g17(v.at),
                fmt_g17(v.lhs),
                fmt_g17(v.rhs)
            )
        })
        .collect();
    format!(
        "{{\"name\":\"{}\",\"grid\":{},\"violations\":[{}]}}",
        json_escape(&scan.name),
        scan.points,
        violations.join(",")
    )
}

pub fn scans_to_json(scans: &[ScanOutcome]) -> String {
    let items: Vec<String> = scans.iter().map(scan_to_json).collect();
    format!("[{}]", items.join(","))
}

impl DiagnosticsReport {
    pub fn to_json(&self) -> String {
        let identity = match &self.identity {
            Some(r) => format!(
                "{{\"lhs\":{},\"rhs\":{},\"residual\":{},\"n_terms\":{}}}",
                fmt_g17(r.lhs),
                fmt_g17(r.rhs),
                fmt_g17(r.residual),
                r.n_terms
            ),
            None => "null".into(),
        };
        let decay = match &self.decay {
            Some(d) => {
                let bound = match &d.bound {
                    Some(b) => format!(
                        "{{\"epsilon\":{},\"k\":{},\"holds\":{},\"worst_index\":{}}}",
                        fmt_g17(b.epsilon),
                        fmt_g17(b.k),
                        b.holds,
                        b.worst_index
                    ),
                    None => "null".into(),
                };
                format!(
                    "{{\"alpha_fit\":{},\"k_fit\":{},\"R_fit\":{},\"better\":\"{}\",\"bound\":{}}}",
                    fmt_g17(d.alpha_fit),
                    fmt_g17(d.k_fit),
                    fmt_g17(d.geometric_ratio),
                    d.better.as_str(),
                    bound
                )
            }
            None => match self.terminated_at {
                Some(n) => format!("{{\"terminated\":true,\"tail_start\":{n}}}"),
                None => "null".into(),
            },
        };
        let checks: Vec<String> = self
            .checks
            .iter()
            .map(|c| {
                format!(
                    "{{\"name\":\"{}\",\"passed\":{},\"detail\":\"{}\"}}",
                    c.name,
                    c.passed,
                    json_escape(&c.detail)
                )
            })
            .collect();
        format!(
            "{{\"positivity\":{},\"identity\":{},\"decay\":{},\"scans\":{},\"checks\":[{}]}}",
            self.positivity,
            identity,
            decay,
            scans_to_json(&self.scans),
            checks.join(",")
        )
    }
}

fn get_f64(v: &Value, key: &str) -> Result<f64> {
    v.get(key)
        .and_then(Value::as_f64)
        .ok_or_else(|| Error::Domain(format!("missing or non-numeric field '{key}'")))
}

fn get_f64_array(v: &Value, key: &str) -> Result<Vec<f64>> {
    let arr = v
        .get(key)
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Domain(format!("missing array field '{key}'")))?;
    arr.iter()
        .map(|x| {
            x.as_f64()
                .ok_or_else(|| Error::Domain(format!("non-numeric entry in '{key}'")))
        })
        .collect()
}

/// Parse a problem object (the `"shift"` value, when present and non-null,
/// is returned alongside).
pub fn parse_problem_json(v: &Value) -> Result<(GeneralProblem, Option<ShiftRecord>)> {
    let label = v
        .get("label")
        .and_then(Value::as_str)
        .and_then(ProblemLabel::parse)
        .unwrap_or(ProblemLabel::Raw);
    let problem = GeneralProblem {
        a: get_f64(v, "A")?,
        b: get_f64(v, "B")?,
        c: get_f64(v, "C")?,
        d: get_f64(v, "D")?,
        v0: get_f64(v, "v0")?,
        label,
    };
    let shift = match v.get("shift") {
        Some(Value::Null) | None => None,
        Some(s) => Some(ShiftRecord {
            offset: get_f64(s, "offset")?,
            scale: get_f64(s, "scale")?,
            time_scale: get_f64(s, "time_scale")?,
        }),
    };
    Ok((problem, shift))
}

/// A series reloaded from JSON; enough to evaluate it.
#[derive(Debug, Clone, PartialEq)]
pub enum LoadedSeries {
    Sin { omega_series: f64, coefficients: Vec<f64> },
    Taylor { coefficients: Vec<f64> },
}

/// Parse either series shape from a JSON value (the object itself or a
/// solve document carrying it under `"series"`).
pub fn parse_series_json(text: &str) -> Result<LoadedSeries> {
    let root: Value =
        serde_json::from_str(text).map_err(|e| Error::Domain(format!("invalid JSON: {e}")))?;
    let v = root.get("series").unwrap_or(&root);
    if v.get("omega_series").is_some() {
        Ok(LoadedSeries::Sin {
            omega_series: get_f64(v, "omega_series")?,
            coefficients: get_f64_array(v, "coefficients")?,
        })
    } else if v.get("type").and_then(Value::as_str) == Some("taylor") {
        Ok(LoadedSeries::Taylor {
            coefficients: get_f64_array(v, "coefficients")?,
        })
    } else {
        Err(Error::Domain("unrecognized series JSON shape".into()))
    }
}

impl LoadedSeries {
    /// Horner evaluation identical to the in-memory series evaluators.
    pub fn evaluate(&self, t: f64) -> f64 {
        match self {
            LoadedSeries::Sin {
                omega_series,
                coefficients,
            } => {
                let s = (omega_series * t).sin();
                coefficients.iter().rev().fold(0.0, |acc, &c| acc * s + c)
            }
            LoadedSeries::Taylor { coefficients } => {
                coefficients.iter().rev().fold(0.0, |acc, &c| acc * t + c)
            }
        }
    }
}
