//! One-dimensional function model: polynomials, flat oscillating members,
//! polynomial compositions, and the one-sided flat exponential.
//!
//! Besides plain f64 evaluation every function answers sign queries that
//! stay exact beyond the f64 underflow range of its flat factors. The sweep
//! machinery depends on that: membership of a point whose defining value is
//! 1e-350 must still be decided correctly.

use serde::{Deserialize, Serialize};

use crate::error::CurveError;
use crate::poly::{sign_of, Polynomial};
use crate::sdcran::SDCRAnFn;

fn poly_one() -> Polynomial {
    Polynomial::constant(1.0)
}

/// Polynomial piece on a closed window.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Piece {
    pub window: [f64; 2],
    pub poly: Polynomial,
}

/// A real function of one variable with known analyticity structure.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Fn1D {
    /// Real polynomial; analytic everywhere.
    Polynomial { coeffs: Polynomial },
    /// Flat oscillating family member; analytic off 0, flat at 0.
    #[serde(rename = "sdcran")]
    SDCRAn(SDCRAnFn),
    /// outer(inner(x)) with polynomial outer.
    Composition { outer: Polynomial, inner: Box<Fn1D> },
    /// 0 for x <= 0 and `e^{-1/x} q(1/x)` for x > 0. The classic one-sided
    /// flat function is q = 1; derivatives stay in this shape.
    ExampleOne {
        #[serde(default = "poly_one")]
        q: Polynomial,
    },
    /// Piecewise polynomial; 0 outside all windows.
    PiecewiseBlend { pieces: Vec<Piece> },
}

impl Fn1D {
    pub fn polynomial(coeffs: Vec<f64>) -> Self {
        Fn1D::Polynomial { coeffs: Polynomial::new(coeffs) }
    }

    pub fn sdcran(f: SDCRAnFn) -> Self {
        Fn1D::SDCRAn(f)
    }

    pub fn example_one() -> Self {
        Fn1D::ExampleOne { q: poly_one() }
    }

    /// outer(inner(x)).
    pub fn compose(outer: Polynomial, inner: Fn1D) -> Self {
        Fn1D::Composition { outer, inner: Box::new(inner) }
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Fn1D::Polynomial { coeffs } => coeffs.eval(x),
            Fn1D::SDCRAn(f) => f.eval(x),
            Fn1D::Composition { outer, inner } => outer.eval(inner.eval(x)),
            Fn1D::ExampleOne { q } => {
                if x <= 0.0 {
                    0.0
                } else {
                    let t = 1.0 / x;
                    if -t < crate::tol::UNDERFLOW_EXP {
                        0.0
                    } else {
                        (-t).exp() * q.eval(t)
                    }
                }
            }
            Fn1D::PiecewiseBlend { pieces } => pieces
                .iter()
                .find(|p| x >= p.window[0] && x <= p.window[1])
                .map_or(0.0, |p| p.poly.eval(x)),
        }
    }

    /// Exact mathematical sign of the value, robust to flat-factor underflow.
    pub fn eval_sign(&self, x: f64) -> i8 {
        match self {
            Fn1D::Polynomial { coeffs } => sign_of(coeffs.eval(x)),
            Fn1D::SDCRAn(f) => f.eval_sign(x),
            Fn1D::Composition { outer, inner } => {
                let v = inner.eval(x);
                if v != 0.0 {
                    sign_of(outer.eval(v))
                } else {
                    // true inner value is an underflowed infinitesimal (or a
                    // genuine zero); the lowest-order coefficient decides
                    match inner.eval_sign(x) {
                        0 => sign_of(outer.eval(0.0)),
                        s => outer.sign_near_zero(s),
                    }
                }
            }
            Fn1D::ExampleOne { q } => {
                if x <= 0.0 {
                    0
                } else {
                    sign_of(q.eval(1.0 / x))
                }
            }
            Fn1D::PiecewiseBlend { .. } => sign_of(self.eval(x)),
        }
    }

    /// ln |f(x)|, computed without evaluating underflowing envelopes.
    pub fn eval_log_abs(&self, x: f64) -> f64 {
        match self {
            Fn1D::Polynomial { coeffs } => coeffs.eval(x).abs().ln(),
            Fn1D::SDCRAn(f) => f.eval_log_abs(x),
            Fn1D::Composition { outer, inner } => {
                let v = inner.eval(x);
                if v != 0.0 {
                    outer.eval(v).abs().ln()
                } else {
                    let inner_log = inner.eval_log_abs(x);
                    if inner_log == f64::NEG_INFINITY {
                        let v0 = outer.eval(0.0);
                        return v0.abs().ln();
                    }
                    // |outer(v)| ~ |a_k| |v|^k for the lowest nonzero order k
                    match outer.0.iter().enumerate().find(|(_, &c)| c != 0.0) {
                        Some((k, &c)) => c.abs().ln() + k as f64 * inner_log,
                        None => f64::NEG_INFINITY,
                    }
                }
            }
            Fn1D::ExampleOne { q } => {
                if x <= 0.0 {
                    f64::NEG_INFINITY
                } else {
                    let t = 1.0 / x;
                    -t + q.eval(t).abs().ln()
                }
            }
            Fn1D::PiecewiseBlend { .. } => self.eval(x).abs().ln(),
        }
    }

    /// First-derivative value at x.
    pub fn deriv_eval(&self, x: f64) -> f64 {
        match self {
            Fn1D::Polynomial { coeffs } => coeffs.derivative().eval(x),
            Fn1D::SDCRAn(f) => f.derivative().eval(x),
            Fn1D::Composition { outer, inner } => {
                outer.derivative().eval(inner.eval(x)) * inner.deriv_eval(x)
            }
            Fn1D::ExampleOne { q } => exp_recip_derivative(q).map_or(0.0, |d| {
                if x <= 0.0 {
                    0.0
                } else {
                    let t = 1.0 / x;
                    if -t < crate::tol::UNDERFLOW_EXP {
                        0.0
                    } else {
                        (-t).exp() * d.eval(t)
                    }
                }
            }),
            Fn1D::PiecewiseBlend { pieces } => pieces
                .iter()
                .find(|p| x >= p.window[0] && x <= p.window[1])
                .map_or(0.0, |p| p.poly.derivative().eval(x)),
        }
    }

    /// Exact sign of the first derivative; the chain rule keeps it exact
    /// through compositions whose inner values underflow.
    pub fn deriv_sign(&self, x: f64) -> i8 {
        match self {
            Fn1D::Polynomial { coeffs } => sign_of(coeffs.derivative().eval(x)),
            Fn1D::SDCRAn(f) => f.derivative().eval_sign(x),
            Fn1D::Composition { outer, inner } => {
                let dout = outer.derivative();
                let v = inner.eval(x);
                let souter = if v != 0.0 {
                    sign_of(dout.eval(v))
                } else {
                    match inner.eval_sign(x) {
                        0 => sign_of(dout.eval(0.0)),
                        s => dout.sign_near_zero(s),
                    }
                };
                souter * inner.deriv_sign(x)
            }
            Fn1D::ExampleOne { q } => {
                if x <= 0.0 {
                    0
                } else {
                    exp_recip_derivative(q).map_or(0, |d| sign_of(d.eval(1.0 / x)))
                }
            }
            Fn1D::PiecewiseBlend { .. } => sign_of(self.deriv_eval(x)),
        }
    }

    /// Points where the function is not real analytic.
    pub fn analyticity_gap(&self) -> Vec<f64> {
        match self {
            Fn1D::Polynomial { .. } => vec![],
            Fn1D::SDCRAn(_) | Fn1D::ExampleOne { .. } => vec![0.0],
            Fn1D::Composition { inner, .. } => inner.analyticity_gap(),
            Fn1D::PiecewiseBlend { pieces } => {
                let mut pts: Vec<f64> = pieces.iter().flat_map(|p| p.window).collect();
                pts.sort_by(f64::total_cmp);
                pts.dedup_by(|a, b| (*a - *b).abs() < 1e-15);
                pts
            }
        }
    }

    /// Smooth and real analytic off a set with dense complement.
    pub fn is_dran(&self) -> bool {
        true
    }

    /// Whether the analytic restriction extends complex-analytically; a
    /// structural flag per family, not a verification.
    pub fn is_dcran(&self) -> bool {
        match self {
            Fn1D::Polynomial { .. } | Fn1D::SDCRAn(_) => true,
            Fn1D::Composition { inner, .. } => inner.is_dcran(),
            Fn1D::ExampleOne { .. } | Fn1D::PiecewiseBlend { .. } => false,
        }
    }

    /// True when the function carries reciprocal trig oscillation
    /// accumulating at its gap (the seeding heuristics key off this).
    pub fn has_flat_oscillation(&self) -> bool {
        match self {
            Fn1D::SDCRAn(_) => true,
            Fn1D::Composition { inner, .. } => inner.has_flat_oscillation(),
            _ => false,
        }
    }

    /// n-th derivative value; symbolic, exact for the closed families.
    pub fn nth_deriv_eval(&self, x: f64, n: u32) -> Result<f64, CurveError> {
        if n == 0 {
            return Ok(self.eval(x));
        }
        if let Fn1D::PiecewiseBlend { pieces } = self {
            let v = pieces
                .iter()
                .find(|p| x >= p.window[0] && x <= p.window[1])
                .map_or(0.0, |p| {
                    let mut q = p.poly.clone();
                    for _ in 0..n {
                        q = q.derivative();
                    }
                    q.eval(x)
                });
            return Ok(v);
        }
        let mut sym = SymFn::from_fn1d(self);
        for _ in 0..n {
            sym = sym.derivative();
        }
        Ok(sym.eval(x))
    }
}

/// Derivative of e^{-1/x} q(1/x): with t = 1/x the new factor is
/// t^2 (q(t) - q'(t)).
fn exp_recip_derivative(q: &Polynomial) -> Option<Polynomial> {
    let mut diff: Vec<f64> = vec![0.0; 2];
    let dq = q.derivative();
    let deg = q.0.len().max(dq.0.len());
    for k in 0..deg {
        let v = q.0.get(k).copied().unwrap_or(0.0) - dq.0.get(k).copied().unwrap_or(0.0);
        diff.push(v);
    }
    let p = Polynomial::new(diff);
    if p.is_zero() {
        None
    } else {
        Some(p)
    }
}

/// Derivative-closed symbolic expression layer used for n-th derivatives of
/// compositions (products appear under the chain rule and do not collapse
/// back into the base families).
#[derive(Clone, Debug)]
enum SymFn {
    Const(f64),
    Poly(Polynomial),
    SD(SDCRAnFn),
    /// e^{-1/x} q(1/x) on x > 0, else 0.
    ExpRecip(Polynomial),
    /// outer polynomial of inner.
    PolyOf(Polynomial, Box<SymFn>),
    Sum(Vec<SymFn>),
    Prod(Box<SymFn>, Box<SymFn>),
}

impl SymFn {
    fn from_fn1d(f: &Fn1D) -> SymFn {
        match f {
            Fn1D::Polynomial { coeffs } => SymFn::Poly(coeffs.clone()),
            Fn1D::SDCRAn(g) => SymFn::SD(g.clone()),
            Fn1D::Composition { outer, inner } => {
                SymFn::PolyOf(outer.clone(), Box::new(SymFn::from_fn1d(inner)))
            }
            Fn1D::ExampleOne { q } => SymFn::ExpRecip(q.clone()),
            Fn1D::PiecewiseBlend { .. } => unreachable!("handled by nth_deriv_eval"),
        }
    }

    fn eval(&self, x: f64) -> f64 {
        match self {
            SymFn::Const(c) => *c,
            SymFn::Poly(p) => p.eval(x),
            SymFn::SD(f) => f.eval(x),
            SymFn::ExpRecip(q) => Fn1D::ExampleOne { q: q.clone() }.eval(x),
            SymFn::PolyOf(p, f) => p.eval(f.eval(x)),
            SymFn::Sum(fs) => fs.iter().map(|f| f.eval(x)).sum(),
            SymFn::Prod(a, b) => a.eval(x) * b.eval(x),
        }
    }

    fn derivative(&self) -> SymFn {
        match self {
            SymFn::Const(_) => SymFn::Const(0.0),
            SymFn::Poly(p) => SymFn::Poly(p.derivative()),
            SymFn::SD(f) => SymFn::SD(f.derivative()),
            SymFn::ExpRecip(q) => match exp_recip_derivative(q) {
                Some(d) => SymFn::ExpRecip(d),
                None => SymFn::Const(0.0),
            },
            SymFn::PolyOf(p, f) => SymFn::Prod(
                Box::new(SymFn::PolyOf(p.derivative(), f.clone())),
                Box::new(f.derivative()),
            ),
            SymFn::Sum(fs) => SymFn::Sum(fs.iter().map(|f| f.derivative()).collect()),
            SymFn::Prod(a, b) => SymFn::Sum(vec![
                SymFn::Prod(Box::new(a.derivative()), b.clone()),
                SymFn::Prod(a.clone(), Box::new(b.derivative())),
            ]),
        }
    }
}

/// Per-order outcome of a flatness check.
#[derive(Clone, Debug, Serialize)]
pub struct OrderReport {
    pub order: u32,
    /// Smallest grid index from which all samples stayed below tol.
    pub k0: Option<u32>,
    pub max_tail_value: f64,
}

/// Result of certifying that derivatives vanish toward the gap point.
#[derive(Clone, Debug, Serialize)]
pub struct FlatnessReport {
    pub pass: bool,
    pub tol: f64,
    pub orders: Vec<OrderReport>,
    /// First violating (order, x) when the certificate fails.
    pub failure: Option<(u32, f64)>,
}

/// Checks |f^(j)(x_k)| < tol on the geometric grid x_k = 2^-k, k = 4..40,
/// for j = 1..=max_order, via symbolic derivatives. Passes when each order
/// stays below tol from some k0 on.
pub fn flatness_certificate(
    f: &Fn1D,
    max_order: u32,
    tol: f64,
) -> Result<FlatnessReport, CurveError> {
    if max_order > 6 {
        return Err(CurveError::UnsupportedOrder { order: max_order });
    }
    let mut orders = Vec::new();
    let mut failure = None;
    for order in 1..=max_order {
        let values: Vec<(u32, f64)> = (4..=40)
            .map(|k| (k, 2f64.powi(-(k as i32))))
            .map(|(k, x)| (k, f.nth_deriv_eval(x, order).map(f64::abs).unwrap_or(f64::INFINITY)))
            .collect();
        let k0 = values
            .iter()
            .position(|&(_, v)| v < tol)
            .filter(|&p| values[p..].iter().all(|&(_, v)| v < tol))
            .map(|p| values[p].0);
        let max_tail = values.last().map(|&(_, v)| v).unwrap_or(0.0);
        if k0.is_none() && failure.is_none() {
            let first = values.iter().find(|&&(_, v)| v >= tol).expect("some violation");
            failure = Some((order, 2f64.powi(-(first.0 as i32))));
        }
        orders.push(OrderReport { order, k0, max_tail_value: max_tail });
    }
    Ok(FlatnessReport { pass: failure.is_none(), tol, orders, failure })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    /// c0 = p(c(x)) with p(v) = v(R0 - v), c = R e^{-1/x^2} sin^2(1/x).
    fn c0(r0: f64, r: f64) -> Fn1D {
        Fn1D::compose(
            Polynomial::new(vec![0.0, r0, -1.0]),
            Fn1D::sdcran(SDCRAnFn::flat_sine_squared(r)),
        )
    }

    #[test]
    fn composition_evaluates_exactly() {
        let f = c0(1.0, 0.01);
        let x = 0.7;
        let c = 0.01 * (-1.0f64 / (x * x)).exp() * (1.0f64 / x).sin().powi(2);
        assert!((f.eval(x) - c * (1.0 - c)).abs() < 1e-18);
    }

    #[test]
    fn composition_sign_is_exact_past_underflow() {
        let f = c0(1.0, 0.01);
        // deep in the underflow zone the raw value is 0.0 but the true
        // value is a positive infinitesimal
        let x = 0.013;
        assert_eq!(f.eval(x), 0.0);
        assert_eq!(f.eval_sign(x), 1);
        // at a reciprocal-of-k-pi point the sine factor genuinely vanishes
        assert_eq!(f.eval_sign(0.0), 0);
    }

    #[test]
    fn composition_zero_set_is_reciprocal_pi() {
        let f = c0(1.0, 0.01);
        for k in 1..=5 {
            let x = 1.0 / (k as f64 * PI);
            assert!(f.eval(x).abs() < 1e-30, "k = {k}");
        }
        // strictly positive between zeros
        assert!(f.eval(2.0 / (3.0 * PI)) > 0.0);
    }

    #[test]
    fn deriv_eval_matches_finite_differences() {
        let f = c0(1.0, 0.01);
        for &x in &[0.3, 0.55, 0.9] {
            let h = 1e-6;
            let fd = (f.eval(x + h) - f.eval(x - h)) / (2.0 * h);
            let d = f.deriv_eval(x);
            assert!((fd - d).abs() <= 1e-6 * d.abs().max(1e-12), "x = {x}: {fd} vs {d}");
        }
    }

    #[test]
    fn nth_deriv_of_composition_matches_stencil() {
        let f = c0(1.0, 0.01);
        let x = 0.6;
        let h = 1e-3;
        let d2 = (f.eval(x + h) - 2.0 * f.eval(x) + f.eval(x - h)) / (h * h);
        let sym = f.nth_deriv_eval(x, 2).unwrap();
        assert!((d2 - sym).abs() <= 1e-5 * sym.abs().max(1e-10));
    }

    #[test]
    fn flatness_passes_for_flat_families() {
        let f = Fn1D::sdcran(SDCRAnFn::flat_sine_squared(1.0));
        let report = flatness_certificate(&f, 4, 1e-8).unwrap();
        assert!(report.pass, "{:?}", report.failure);

        let g = Fn1D::example_one();
        assert!(flatness_certificate(&g, 3, 1e-8).unwrap().pass);
    }

    #[test]
    fn flatness_fails_for_x_squared_at_order_two() {
        let f = Fn1D::polynomial(vec![0.0, 0.0, 1.0]);
        let report = flatness_certificate(&f, 2, 1e-8).unwrap();
        assert!(!report.pass);
        let (order, _) = report.failure.unwrap();
        assert_eq!(order, 2);
    }

    #[test]
    fn example_one_is_dran_not_dcran() {
        let f = Fn1D::example_one();
        assert!(f.is_dran());
        assert!(!f.is_dcran());
        assert_eq!(f.analyticity_gap(), vec![0.0]);
        assert_eq!(f.eval(-1.0), 0.0);
        assert!(f.eval(0.5) > 0.0);

        let g = Fn1D::sdcran(SDCRAnFn::flat_sine_squared(2.0));
        assert!(g.is_dcran());
        assert_eq!(g.analyticity_gap(), vec![0.0]);
        assert!(Fn1D::polynomial(vec![1.0]).analyticity_gap().is_empty());
    }

    #[test]
    fn serde_schema_round_trip() {
        let f = c0(1.0, 0.01);
        let json = serde_json::to_string(&f).unwrap();
        assert!(json.contains("\"kind\":\"composition\""));
        assert!(json.contains("\"kind\":\"sdcran\""));
        assert!(json.contains("\"R\":0.01"));
        let back: Fn1D = serde_json::from_str(&json).unwrap();
        assert_eq!(back.eval(0.4), f.eval(0.4));
    }
}
