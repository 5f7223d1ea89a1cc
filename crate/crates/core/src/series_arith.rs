//! Truncated power-series arithmetic shared by the coefficient recursions
//! and the sin-to-Taylor conversion: single-index Cauchy products and
//! full truncated multiplication.
//!
//! Above [`COMPENSATION_THRESHOLD`] terms the convolutions switch to
//! Neumaier compensated summation to limit rounding growth.

/// Truncation order beyond which convolutions use compensated summation.
pub(crate) const COMPENSATION_THRESHOLD: usize = 128;

/// Neumaier (improved Kahan) running sum.
#[derive(Clone, Copy, Default)]
pub(crate) struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.sum + self.comp
    }
}

/// Single coefficient of the Cauchy product: `sum_{r=0..=n} a[r] * b[n-r]`.
#[inline]
pub(crate) fn conv_at(a: &[f64], b: &[f64], n: usize, compensated: bool) -> f64 {
    if compensated {
        let mut s = CompensatedSum::default();
        for r in 0..=n {
            s.add(a[r] * b[n - r]);
        }
        s.value()
    } else {
        let mut s = 0.0;
        for r in 0..=n {
            s += a[r] * b[n - r];
        }
        s
    }
}

/// Truncated product of two coefficient vectors, keeping orders `0..len`.
pub(crate) fn truncated_mul(a: &[f64], b: &[f64], len: usize) -> Vec<f64> {
    let mut out = vec![0.0; len];
    for (i, &ai) in a.iter().enumerate().take(len) {
        if ai == 0.0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate().take(len - i) {
            out[i + j] += ai * bj;
        }
    }
    out
}
