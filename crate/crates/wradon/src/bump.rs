//! Smooth transition and bump functions.
//!
//! Everything here is built from the exponential glue
//! `sigma(x) = h(x) / (h(x) + h(1-x))` with `h(x) = exp(-1/x)` for `x > 0`,
//! which is exactly 0 for `x <= 0` and exactly 1 for `x >= 1`. The plateaus
//! are exact in floating point, not merely within tolerance.

use serde::{Deserialize, Serialize};

fn h(x: f64) -> f64 {
    if x > 0.0 {
        (-1.0 / x).exp()
    } else {
        0.0
    }
}

fn h_prime(x: f64) -> f64 {
    if x > 0.0 {
        (-1.0 / x).exp() / (x * x)
    } else {
        0.0
    }
}

/// Monotone C-infinity step: 0 for `x <= 0`, 1 for `x >= 1`.
pub fn smooth_step(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x >= 1.0 {
        1.0
    } else {
        let a = h(x);
        a / (a + h(1.0 - x))
    }
}

/// Derivative of [`smooth_step`].
pub fn smooth_step_deriv(x: f64) -> f64 {
    if x <= 0.0 || x >= 1.0 {
        0.0
    } else {
        let a = h(x);
        let b = h(1.0 - x);
        let da = h_prime(x);
        let db = h_prime(1.0 - x);
        // (a/(a+b))' = (a'b + a b') / (a+b)^2
        (da * b + a * db) / ((a + b) * (a + b))
    }
}

/// Piecewise-smooth bump: 0 outside `[rise_start, fall_end]`, exactly 1 on
/// `[rise_end, fall_start]`, strictly inside (0, 1) on the open transition
/// intervals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BumpSpec {
    pub rise_start: f64,
    pub rise_end: f64,
    pub fall_start: f64,
    pub fall_end: f64,
}

impl BumpSpec {
    pub fn new(rise_start: f64, rise_end: f64, fall_start: f64, fall_end: f64) -> Self {
        assert!(
            rise_start.is_finite()
                && rise_end.is_finite()
                && fall_start.is_finite()
                && fall_end.is_finite(),
            "bump breakpoints must be finite"
        );
        assert!(
            rise_start < rise_end && rise_end <= fall_start && fall_start < fall_end,
            "bump breakpoints must satisfy rise_start < rise_end <= fall_start < fall_end"
        );
        Self {
            rise_start,
            rise_end,
            fall_start,
            fall_end,
        }
    }

    /// The profile of Eq-style support [4/5, 6/5] with unit plateau on
    /// [9/10, 11/10].
    pub fn phi_default() -> Self {
        Self::new(0.8, 0.9, 1.1, 1.2)
    }

    pub fn eval(&self, t: f64) -> f64 {
        if t <= self.rise_start || t >= self.fall_end {
            return 0.0;
        }
        let rise = smooth_step((t - self.rise_start) / (self.rise_end - self.rise_start));
        let fall = smooth_step((self.fall_end - t) / (self.fall_end - self.fall_start));
        rise * fall
    }

    pub fn deriv(&self, t: f64) -> f64 {
        if t <= self.rise_start || t >= self.fall_end {
            return 0.0;
        }
        let wr = self.rise_end - self.rise_start;
        let wf = self.fall_end - self.fall_start;
        let xr = (t - self.rise_start) / wr;
        let xf = (self.fall_end - t) / wf;
        let rise = smooth_step(xr);
        let fall = smooth_step(xf);
        smooth_step_deriv(xr) / wr * fall - rise * smooth_step_deriv(xf) / wf
    }

    pub fn support(&self) -> (f64, f64) {
        (self.rise_start, self.fall_end)
    }

    pub fn plateau(&self) -> (f64, f64) {
        (self.rise_end, self.fall_start)
    }

    /// Maximum of |bump'| by dense sampling plus golden-section refinement
    /// around the best sample.
    pub fn deriv_max(&self) -> f64 {
        let mut best_x = self.rise_start;
        let mut best = 0.0f64;
        let (a, b) = self.support();
        let n = 20_000;
        for i in 0..=n {
            let t = a + (b - a) * i as f64 / n as f64;
            let d = self.deriv(t).abs();
            if d > best {
                best = d;
                best_x = t;
            }
        }
        let step = (b - a) / n as f64;
        let refined = golden_max(|t| self.deriv(t).abs(), best_x - step, best_x + step);
        best.max(refined)
    }

    /// Maximum of the bump itself (1 whenever the plateau is non-empty,
    /// which `new` enforces).
    pub fn value_max(&self) -> f64 {
        1.0
    }
}

/// Golden-section search for the maximum of a unimodal function on [a, b].
fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut c = b - (b - a) * INV_PHI;
    let mut d = a + (b - a) * INV_PHI;
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..200 {
        if (b - a).abs() < 1e-14 {
            break;
        }
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - (b - a) * INV_PHI;
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + (b - a) * INV_PHI;
            fd = f(d);
        }
    }
    fc.max(fd)
}
