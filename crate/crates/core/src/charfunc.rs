//! The characteristic function `f` that defines the algebra.
//!
//! `f` is restricted to real polynomials so that every downstream root
//! isolation problem has a known degree bound. Three shapes are supported:
//! linear `f(x) = r*x - s`, quadratic `f(x) = t*x^2 + r*x - s`, and a general
//! coefficient list in ascending degree order.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tol;

/// Magnitude at which clamped iteration pins escaped orbits.
/// Kept above the divergence guard so sign dynamics survive the clamp.
const CLAMP: f64 = 1e13;

/// A polynomial characteristic function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum CharFunc {
    /// `f(x) = r*x - s`
    Linear { r: f64, s: f64 },
    /// `f(x) = t*x^2 + r*x - s`, `t != 0`
    Quadratic { t: f64, r: f64, s: f64 },
    /// Coefficients in ascending degree order: `coeffs[k] * x^k`
    Polynomial { coeffs: Vec<f64> },
}

impl CharFunc {
    pub fn linear(r: f64, s: f64) -> Self {
        CharFunc::Linear { r, s }
    }

    pub fn quadratic(t: f64, r: f64, s: f64) -> Result<Self> {
        if t == 0.0 {
            return Err(Error::InvalidFunction(
                "quadratic requires t != 0; use the linear kind".into(),
            ));
        }
        Ok(CharFunc::Quadratic { t, r, s })
    }

    pub fn polynomial(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidFunction("empty coefficient list".into()));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidFunction("non-finite coefficient".into()));
        }
        Ok(CharFunc::Polynomial { coeffs })
    }

    /// Checks invariants after deserialization (serde bypasses constructors).
    pub fn validate(&self) -> Result<()> {
        match self {
            CharFunc::Linear { r, s } => {
                if !(r.is_finite() && s.is_finite()) {
                    return Err(Error::InvalidFunction("non-finite parameter".into()));
                }
            }
            CharFunc::Quadratic { t, r, s } => {
                if !(t.is_finite() && r.is_finite() && s.is_finite()) {
                    return Err(Error::InvalidFunction("non-finite parameter".into()));
                }
                if *t == 0.0 {
                    return Err(Error::InvalidFunction(
                        "quadratic requires t != 0; use the linear kind".into(),
                    ));
                }
            }
            CharFunc::Polynomial { coeffs } => {
                CharFunc::polynomial(coeffs.clone())?;
            }
        }
        Ok(())
    }

    /// Coefficients in ascending degree order.
    pub fn coeffs(&self) -> Vec<f64> {
        match self {
            CharFunc::Linear { r, s } => vec![-s, *r],
            CharFunc::Quadratic { t, r, s } => vec![-s, *r, *t],
            CharFunc::Polynomial { coeffs } => coeffs.clone(),
        }
    }

    /// Degree after dropping trailing zero coefficients.
    pub fn degree(&self) -> usize {
        let coeffs = self.coeffs();
        let mut deg = coeffs.len() - 1;
        while deg > 0 && coeffs[deg] == 0.0 {
            deg -= 1;
        }
        deg
    }

    /// Evaluates `f(x)`. Non-finite input is a domain error.
    pub fn eval(&self, x: f64) -> Result<f64> {
        if !x.is_finite() {
            return Err(Error::Domain(format!("eval at non-finite x = {x}")));
        }
        Ok(self.eval_unchecked(x))
    }

    /// Horner evaluation without the domain check.
    pub(crate) fn eval_unchecked(&self, x: f64) -> f64 {
        match self {
            CharFunc::Linear { r, s } => r * x - s,
            CharFunc::Quadratic { t, r, s } => (t * x + r) * x - s,
            CharFunc::Polynomial { coeffs } => {
                let mut acc = 0.0;
                for &c in coeffs.iter().rev() {
                    acc = acc * x + c;
                }
                acc
            }
        }
    }

    /// `f'(x)`.
    pub fn derivative(&self, x: f64) -> f64 {
        match self {
            CharFunc::Linear { r, .. } => *r,
            CharFunc::Quadratic { t, r, .. } => 2.0 * t * x + r,
            CharFunc::Polynomial { coeffs } => {
                let mut acc = 0.0;
                for k in (1..coeffs.len()).rev() {
                    acc = acc * x + coeffs[k] * k as f64;
                }
                acc
            }
        }
    }

    /// The orbit `x0, f(x0), ..., f^m(x0)` (length `m + 1`).
    ///
    /// Aborts with [`Error::Diverged`] as soon as an iterate leaves the
    /// divergence guard; the error carries the step index.
    pub fn iterate(&self, x0: f64, m: usize) -> Result<Vec<f64>> {
        if !x0.is_finite() {
            return Err(Error::Domain(format!("iterate from non-finite x0 = {x0}")));
        }
        let mut orbit = Vec::with_capacity(m + 1);
        orbit.push(x0);
        let mut x = x0;
        for step in 1..=m {
            x = self.eval_unchecked(x);
            if !x.is_finite() || x.abs() > tol::DIVERGENCE_GUARD {
                return Err(Error::Diverged {
                    step,
                    magnitude: x.abs(),
                });
            }
            orbit.push(x);
        }
        Ok(orbit)
    }

    /// `f^m(x0)` with divergence guard.
    pub fn iterate_last(&self, x0: f64, m: usize) -> Result<f64> {
        Ok(*self.iterate(x0, m)?.last().expect("orbit is non-empty"))
    }

    /// Orbit that survives divergence by clamping escaped iterates to
    /// `+-1e13`. Once clamped, magnitudes are meaningless but signs still
    /// follow the true escape dynamics (the leading term dominates far out),
    /// which is all bracketing scans need. Returns the orbit and the first
    /// step at which the guard tripped, if any.
    pub(crate) fn iterate_clamped(&self, x0: f64, m: usize) -> (Vec<f64>, Option<usize>) {
        let mut orbit = Vec::with_capacity(m + 1);
        orbit.push(x0);
        let mut escaped_at = None;
        let mut x = x0;
        for step in 1..=m {
            x = self.eval_unchecked(x);
            if !x.is_finite() || x.abs() > tol::DIVERGENCE_GUARD {
                escaped_at.get_or_insert(step);
                x = if x.is_nan() { CLAMP } else { x.clamp(-CLAMP, CLAMP) };
            }
            orbit.push(x);
        }
        (orbit, escaped_at)
    }

    /// Derivative of `f^d` at `x` by the chain rule, along with `f^d(x)`.
    pub(crate) fn iterate_with_derivative(&self, x: f64, d: usize) -> (f64, f64) {
        let mut y = x;
        let mut deriv = 1.0;
        for _ in 0..d {
            deriv *= self.derivative(y);
            y = self.eval_unchecked(y);
        }
        (y, deriv)
    }
}

impl std::fmt::Display for CharFunc {
    fn fmt(&self, out: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CharFunc::Linear { r, s } => write!(out, "f(x) = {r}*x - ({s})"),
            CharFunc::Quadratic { t, r, s } => write!(out, "f(x) = {t}*x^2 + {r}*x - ({s})"),
            CharFunc::Polynomial { coeffs } => write!(out, "f(x) = poly{coeffs:?}"),
        }
    }
}
