//! The special flat function family
//! `R * exp(-1/x^2) * (1/x)^j0 * sum_j (1/x)^{i_j} T_j(sin(1/x), cos(1/x))`,
//! extended by 0 at x = 0.
//!
//! The family is closed under differentiation, so symbolic derivatives of
//! any order stay exactly representable. Values are flat at 0: every
//! derivative tends to 0, faster than any power of x.
//!
//! f64 evaluation of members underflows for small |x| (the exponential
//! factor drops below the subnormal range around |x| < 0.037). Sign and
//! log-magnitude queries therefore factor the envelope out and stay exact
//! far past the underflow edge; all structure-sensitive numerics (root
//! isolation, tangency certification) are built on those.

use serde::{Deserialize, Serialize};

use crate::error::CurveError;
use crate::poly::{sign_of, Poly2};
use crate::tol::UNDERFLOW_EXP;

/// One summand `(1/x)^i * T(sin(1/x), cos(1/x))`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Term {
    /// Non-negative reciprocal power i_j.
    pub i: u32,
    /// Bivariate polynomial T_j in (s, c).
    #[serde(rename = "T")]
    pub trig: Poly2,
}

/// A member of the flat oscillating family.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SDCRAnFn {
    /// Nonzero overall scale R.
    #[serde(rename = "R")]
    pub scale: f64,
    /// Leading reciprocal exponent j0 (any integer).
    pub j0: i64,
    /// Non-empty term list.
    pub terms: Vec<Term>,
}

impl SDCRAnFn {
    pub fn new(scale: f64, j0: i64, terms: Vec<Term>) -> Result<Self, CurveError> {
        if scale == 0.0 || !scale.is_finite() {
            return Err(CurveError::InvalidFamily("scale R must be nonzero and finite".into()));
        }
        if terms.is_empty() || terms.iter().all(|t| t.trig.is_zero()) {
            return Err(CurveError::InvalidFamily("term list must be non-empty".into()));
        }
        Ok(SDCRAnFn { scale, j0, terms })
    }

    /// `R * exp(-1/x^2) * sin^2(1/x)`, the oscillating factor used by the
    /// sphere constructions.
    pub fn flat_sine_squared(scale: f64) -> Self {
        SDCRAnFn::new(scale, 0, vec![Term { i: 0, trig: Poly2::monomial(2, 0, 1.0) }])
            .expect("fixed well-formed member")
    }

    /// `R * exp(-1/x^2)`, the bare envelope.
    pub fn envelope(scale: f64) -> Self {
        SDCRAnFn::new(scale, 0, vec![Term { i: 0, trig: Poly2::constant(1.0) }])
            .expect("fixed well-formed member")
    }

    /// The oscillator sum `S(t) = sum_j t^{i_j} T_j(sin t, cos t)`, t = 1/x.
    fn oscillator(&self, t: f64) -> f64 {
        let (s, c) = (t.sin(), t.cos());
        let mut acc = 0.0;
        for term in &self.terms {
            acc += t.powi(term.i as i32) * term.trig.eval(s, c);
        }
        acc
    }

    /// f64 value. Exactly 0 at x = 0, and flushed to 0 once the exponential
    /// factor leaves the representable range (evaluated first, so no NaN
    /// from the companion reciprocal powers).
    pub fn eval(&self, x: f64) -> f64 {
        if x == 0.0 {
            return 0.0;
        }
        let neg_t2 = -1.0 / (x * x);
        if neg_t2 < UNDERFLOW_EXP {
            return 0.0;
        }
        let t = 1.0 / x;
        self.scale * neg_t2.exp() * powi64(t, self.j0) * self.oscillator(t)
    }

    /// Exact mathematical sign of the value, valid far below the f64
    /// underflow edge: the strictly positive envelope is factored out.
    pub fn eval_sign(&self, x: f64) -> i8 {
        if x == 0.0 {
            return 0;
        }
        let t = 1.0 / x;
        let lead = if t > 0.0 || self.j0 % 2 == 0 { 1 } else { -1 };
        sign_of(self.scale) * lead * sign_of(self.oscillator(t))
    }

    /// Natural log of |value|; `-inf` where the oscillator vanishes.
    pub fn eval_log_abs(&self, x: f64) -> f64 {
        if x == 0.0 {
            return f64::NEG_INFINITY;
        }
        let t = 1.0 / x;
        let osc = self.oscillator(t);
        if osc == 0.0 {
            return f64::NEG_INFINITY;
        }
        self.scale.abs().ln() - t * t + self.j0 as f64 * t.abs().ln() + osc.abs().ln()
    }

    /// Symbolic derivative; stays in the family.
    ///
    /// With t = 1/x each summand e^{-t^2} t^{j0+i} T differentiates to
    /// `e^{-t^2} [ 2 t^{j0+i+3} T - (j0+i) t^{j0+i+1} T
    ///            + t^{j0+i+2} (s dT/dc - c dT/ds) ]`.
    pub fn derivative(&self) -> SDCRAnFn {
        let mut terms: Vec<Term> = Vec::new();
        let mut push = |i: u32, trig: Poly2| {
            if trig.is_zero() {
                return;
            }
            if let Some(existing) = terms.iter_mut().find(|t| t.i == i) {
                existing.trig = existing.trig.add(&trig);
            } else {
                terms.push(Term { i, trig });
            }
        };
        for term in &self.terms {
            let k = self.j0 + term.i as i64;
            push(term.i + 3, term.trig.scale(2.0));
            push(term.i + 1, term.trig.scale(-(k as f64)));
            push(term.i + 2, term.trig.rotational_derivative());
        }
        terms.retain(|t| !t.trig.is_zero());
        terms.sort_by_key(|t| t.i);
        debug_assert!(!terms.is_empty(), "derivative of a nonzero member is nonzero");
        SDCRAnFn { scale: self.scale, j0: self.j0, terms }
    }

    /// n-fold derivative.
    pub fn derivative_n(&self, n: u32) -> SDCRAnFn {
        let mut f = self.clone();
        for _ in 0..n {
            f = f.derivative();
        }
        f
    }

    pub fn scaled(&self, k: f64) -> Result<SDCRAnFn, CurveError> {
        SDCRAnFn::new(self.scale * k, self.j0, self.terms.clone())
    }
}

/// x^n for i64 exponents (f64::powi takes i32).
fn powi64(x: f64, n: i64) -> f64 {
    if n.unsigned_abs() <= i32::MAX as u64 {
        x.powi(n as i32)
    } else {
        x.powf(n as f64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn sin2() -> SDCRAnFn {
        SDCRAnFn::flat_sine_squared(1.0)
    }

    #[test]
    fn zero_at_origin_and_at_sine_zeros() {
        let f = sin2();
        assert_eq!(f.eval(0.0), 0.0);
        // x = 1/pi: sin(pi) vanishes up to rounding of 1/pi
        assert!(f.eval(1.0 / PI).abs() < 1e-30);
        assert_eq!(f.eval_sign(0.0), 0);
    }

    #[test]
    fn closed_form_value_at_two_over_pi() {
        // e^{-pi^2/4} * sin^2(pi/2) = e^{-pi^2/4}
        let f = sin2();
        let expect = (-(PI * PI) / 4.0).exp();
        assert!((f.eval(2.0 / PI) - expect).abs() < 1e-15 * expect.max(1.0));
        assert!((expect - 0.0848).abs() < 1e-4);
    }

    #[test]
    fn underflow_flushes_to_zero_but_sign_survives() {
        let f = sin2();
        let x = 0.01; // -1/x^2 = -10000, far below the representable range
        assert_eq!(f.eval(x), 0.0);
        assert_eq!(f.eval_sign(x), 1);
        assert!(f.eval_log_abs(x) < -9000.0);
    }

    #[test]
    fn envelope_derivative_is_two_over_x_cubed() {
        let f = SDCRAnFn::envelope(1.0);
        let d = f.derivative();
        assert_eq!(d.terms.len(), 1);
        assert_eq!(d.terms[0].i, 3);
        assert_eq!(d.terms[0].trig, Poly2::constant(2.0));
        for &x in &[0.3, 0.7, 1.5] {
            let expect = (-1.0f64 / (x * x)).exp() * 2.0 / (x * x * x);
            assert!((d.eval(x) - expect).abs() <= 1e-12 * expect.abs());
        }
    }

    #[test]
    fn derivative_is_linear_in_scale() {
        let f = sin2();
        let g = f.scaled(2.0).unwrap();
        let x = 0.5;
        assert!((g.derivative().eval(x) - 2.0 * f.derivative().eval(x)).abs() < 1e-18);
    }

    #[test]
    fn rejects_degenerate_members() {
        assert!(SDCRAnFn::new(0.0, 0, vec![Term { i: 0, trig: Poly2::constant(1.0) }]).is_err());
        assert!(SDCRAnFn::new(1.0, 0, vec![]).is_err());
    }

    #[test]
    fn log_abs_matches_direct_eval_where_representable() {
        let f = sin2();
        for &x in &[0.3, 0.5, 1.1] {
            let direct = f.eval(x).abs().ln();
            assert!((f.eval_log_abs(x) - direct).abs() < 1e-9);
        }
    }
}
