//! Plane boundary curves: periodic parabola chains, circles, function
//! graphs, and affine images of these. Curves know how to evaluate their
//! height profile, locate vertical tangents (x1-extrema along the curve),
//! and report where they stop being analytic.

use serde::{Deserialize, Serialize};

use crate::error::CurveError;
use crate::fn1d::Fn1D;
use crate::poly::sign_of;
use crate::roots::{isolate_roots, reciprocal_seeds, IsolateOpts, Profile1D};
use crate::tol::BISECT_X_TOL;

/// Affine plane map x -> A x + b.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AffineMap {
    pub matrix: [[f64; 2]; 2],
    pub translation: [f64; 2],
}

impl AffineMap {
    pub fn identity() -> Self {
        AffineMap { matrix: [[1.0, 0.0], [0.0, 1.0]], translation: [0.0, 0.0] }
    }

    pub fn rotation(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        AffineMap { matrix: [[c, -s], [s, c]], translation: [0.0, 0.0] }
    }

    /// Diagonal scale followed by translation.
    pub fn scale_translate(sx: f64, sy: f64, tx: f64, ty: f64) -> Self {
        AffineMap { matrix: [[sx, 0.0], [0.0, sy]], translation: [tx, ty] }
    }

    pub fn apply(&self, p: [f64; 2]) -> [f64; 2] {
        [
            self.matrix[0][0] * p[0] + self.matrix[0][1] * p[1] + self.translation[0],
            self.matrix[1][0] * p[0] + self.matrix[1][1] * p[1] + self.translation[1],
        ]
    }

    pub fn apply_vector(&self, v: [f64; 2]) -> [f64; 2] {
        [
            self.matrix[0][0] * v[0] + self.matrix[0][1] * v[1],
            self.matrix[1][0] * v[0] + self.matrix[1][1] * v[1],
        ]
    }

    pub fn det(&self) -> f64 {
        self.matrix[0][0] * self.matrix[1][1] - self.matrix[0][1] * self.matrix[1][0]
    }

    pub fn inverse(&self) -> Option<AffineMap> {
        let d = self.det();
        if d == 0.0 || !d.is_finite() {
            return None;
        }
        let inv = [
            [self.matrix[1][1] / d, -self.matrix[0][1] / d],
            [-self.matrix[1][0] / d, self.matrix[0][0] / d],
        ];
        let bt = [
            -(inv[0][0] * self.translation[0] + inv[0][1] * self.translation[1]),
            -(inv[1][0] * self.translation[0] + inv[1][1] * self.translation[1]),
        ];
        Some(AffineMap { matrix: inv, translation: bt })
    }

    /// self after `first` (i.e. x -> self(first(x))).
    pub fn compose(&self, first: &AffineMap) -> AffineMap {
        let m = [
            [
                self.matrix[0][0] * first.matrix[0][0] + self.matrix[0][1] * first.matrix[1][0],
                self.matrix[0][0] * first.matrix[0][1] + self.matrix[0][1] * first.matrix[1][1],
            ],
            [
                self.matrix[1][0] * first.matrix[0][0] + self.matrix[1][1] * first.matrix[1][0],
                self.matrix[1][0] * first.matrix[0][1] + self.matrix[1][1] * first.matrix[1][1],
            ],
        ];
        AffineMap { matrix: m, translation: self.apply(first.translation) }
    }
}

/// A boundary curve in the (x1, x2) plane. The sweep direction is x1.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PlaneCurve {
    /// x1 = vertex + sign (x2 - nearest center)^2 with centers
    /// offset + k period; a single parabola when period is absent.
    ParabolaChain {
        offset: f64,
        sign: f64,
        #[serde(default)]
        period: Option<f64>,
        vertex: f64,
    },
    /// The locus x1^2 + x2^2 = level.
    Circle { level: f64 },
    /// The graph {(f(t), t)}, parametrized by t = x2.
    FnGraph { f: Fn1D },
    /// {A p + b : p on base}, parametrized like the base.
    Transformed { base: Box<PlaneCurve>, map: AffineMap },
}

impl PlaneCurve {
    /// The chain reproducing S1: vertices at height -1/2 over x2 = 4k.
    pub fn s1_chain() -> Self {
        PlaneCurve::ParabolaChain { offset: 0.0, sign: 1.0, period: Some(4.0), vertex: -0.5 }
    }

    /// The chain reproducing S2: vertices at height +1/2 over x2 = 4k + 2.
    pub fn s2_chain() -> Self {
        PlaneCurve::ParabolaChain { offset: 2.0, sign: -1.0, period: Some(4.0), vertex: 0.5 }
    }

    pub fn transformed(self, map: AffineMap) -> Self {
        PlaneCurve::Transformed { base: Box::new(self), map }
    }

    fn nearest_center(offset: f64, period: Option<f64>, x2: f64) -> f64 {
        match period {
            Some(p) => offset + p * ((x2 - offset) / p).round(),
            None => offset,
        }
    }

    /// Curve point at parameter p.
    pub fn point_at(&self, p: f64) -> [f64; 2] {
        match self {
            PlaneCurve::ParabolaChain { .. } => {
                [self.height_at(p).expect("chain is a graph"), p]
            }
            PlaneCurve::Circle { level } => {
                let r = level.max(0.0).sqrt();
                [r * p.cos(), r * p.sin()]
            }
            PlaneCurve::FnGraph { f } => [f.eval(p), p],
            PlaneCurve::Transformed { base, map } => map.apply(base.point_at(p)),
        }
    }

    /// x1 as a function of x2, for curves that are graphs over x2.
    pub fn height_at(&self, x2: f64) -> Option<f64> {
        match self {
            PlaneCurve::ParabolaChain { offset, sign, period, vertex } => {
                let d = x2 - Self::nearest_center(*offset, *period, x2);
                Some(vertex + sign * d * d)
            }
            PlaneCurve::FnGraph { f } => Some(f.eval(x2)),
            PlaneCurve::Circle { .. } | PlaneCurve::Transformed { .. } => None,
        }
    }

    /// d x1 / d p along the curve.
    pub fn x1_deriv_at(&self, p: f64) -> f64 {
        match self {
            PlaneCurve::ParabolaChain { offset, sign, period, .. } => {
                2.0 * sign * (p - Self::nearest_center(*offset, *period, p))
            }
            PlaneCurve::Circle { level } => -level.max(0.0).sqrt() * p.sin(),
            PlaneCurve::FnGraph { f } => f.deriv_eval(p),
            PlaneCurve::Transformed { base, map } => {
                let [dx1, dx2] = base.tangent_at(p);
                map.matrix[0][0] * dx1 + map.matrix[0][1] * dx2
            }
        }
    }

    /// Exact sign of d x1 / d p, robust to flat-factor underflow.
    pub fn x1_deriv_sign(&self, p: f64) -> i8 {
        match self {
            PlaneCurve::FnGraph { f } => f.deriv_sign(p),
            PlaneCurve::Transformed { base, map } => {
                let a = map.matrix[0];
                match base.as_ref() {
                    PlaneCurve::FnGraph { f } if a[1] != 0.0 => {
                        // a0 f'(p) + a1: an underflowed f' cannot flip the
                        // a1 term, so the f64 sum sign is already exact
                        sign_of(a[0] * f.deriv_eval(p) + a[1])
                    }
                    PlaneCurve::FnGraph { f } => {
                        sign_of(a[0]) * f.deriv_sign(p)
                    }
                    _ => sign_of(self.x1_deriv_at(p)),
                }
            }
            _ => sign_of(self.x1_deriv_at(p)),
        }
    }

    /// Tangent vector d(point)/dp.
    pub fn tangent_at(&self, p: f64) -> [f64; 2] {
        match self {
            PlaneCurve::ParabolaChain { .. } => [self.x1_deriv_at(p), 1.0],
            PlaneCurve::Circle { level } => {
                let r = level.max(0.0).sqrt();
                [-r * p.sin(), r * p.cos()]
            }
            PlaneCurve::FnGraph { .. } => [self.x1_deriv_at(p), 1.0],
            PlaneCurve::Transformed { base, map } => map.apply_vector(base.tangent_at(p)),
        }
    }

    /// Parameters where the curve is not analytic (or not smooth).
    pub fn gap_params(&self) -> Vec<f64> {
        match self {
            PlaneCurve::ParabolaChain { .. } | PlaneCurve::Circle { .. } => vec![],
            PlaneCurve::FnGraph { f } => f.analyticity_gap(),
            PlaneCurve::Transformed { base, .. } => base.gap_params(),
        }
    }

    /// Whether the curve carries reciprocal trig oscillation at its gaps.
    pub fn has_flat_oscillation(&self) -> bool {
        match self {
            PlaneCurve::FnGraph { f } => f.has_flat_oscillation(),
            PlaneCurve::Transformed { base, .. } => base.has_flat_oscillation(),
            _ => false,
        }
    }

    /// Parameter interval covering all curve points inside the window box.
    /// Circle windows overlap past one full turn so that extrema sitting at
    /// the angular seam are still bracketed by a sign change.
    pub fn param_window(&self, window: &crate::region::Rect) -> [f64; 2] {
        const PI: f64 = std::f64::consts::PI;
        match self {
            PlaneCurve::Circle { .. } => [-PI - 0.2, PI + 0.2],
            PlaneCurve::ParabolaChain { .. } | PlaneCurve::FnGraph { .. } => {
                [window.x2[0], window.x2[1]]
            }
            PlaneCurve::Transformed { base, map } => {
                // conservative: bounding box of the inverse-mapped window
                let inv = map.inverse().expect("transform must be invertible");
                let corners = [
                    [window.x1[0], window.x2[0]],
                    [window.x1[0], window.x2[1]],
                    [window.x1[1], window.x2[0]],
                    [window.x1[1], window.x2[1]],
                ];
                let pre: Vec<[f64; 2]> = corners.iter().map(|&c| inv.apply(c)).collect();
                let lo = pre.iter().map(|p| p[1]).fold(f64::INFINITY, f64::min);
                let hi = pre.iter().map(|p| p[1]).fold(f64::NEG_INFINITY, f64::max);
                match base.as_ref() {
                    PlaneCurve::Circle { .. } => [-PI - 0.2, PI + 0.2],
                    _ => [lo, hi],
                }
            }
        }
    }
}

/// Whether a curve extremum is a local max or min of x1 along the curve.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ExtremumKind {
    Max,
    Min,
}

/// A vertical tangent of a curve: d x1/dp = 0 with a sign change.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Tangency {
    pub param: f64,
    pub point: [f64; 2],
    pub height: f64,
    pub kind: ExtremumKind,
    /// ln of the height magnitude relative to the gap height; meaningful
    /// for flat oscillating curves whose heights underflow f64.
    pub log_height: f64,
}

struct TangentProfile<'a> {
    curve: &'a PlaneCurve,
    seed_cap: usize,
}

impl Profile1D for TangentProfile<'_> {
    fn value(&self, p: f64) -> f64 {
        self.curve.x1_deriv_at(p)
    }

    fn sign(&self, p: f64) -> i8 {
        self.curve.x1_deriv_sign(p)
    }

    fn deriv_sign(&self, _p: f64) -> i8 {
        0 // second derivative unused: tangential mode is off
    }

    fn seed_points(&self, bracket: [f64; 2]) -> Vec<f64> {
        if self.curve.has_flat_oscillation() {
            self.curve
                .gap_params()
                .iter()
                .flat_map(|&g| reciprocal_seeds(g, bracket, self.seed_cap))
                .collect()
        } else {
            vec![]
        }
    }

    fn oscillation_gap(&self) -> Option<f64> {
        if self.curve.has_flat_oscillation() {
            self.curve.gap_params().first().copied()
        } else {
            None
        }
    }
}

/// Options for vertical-tangent search.
#[derive(Clone, Copy, Debug)]
pub struct TangentOpts {
    pub density: usize,
    pub tol: f64,
    /// Drop tangencies whose height falls outside this range before any
    /// accumulation accounting (a height-truncated analysis window must not
    /// trip the detector on events it will never sweep).
    pub height_clip: Option<[f64; 2]>,
    /// Check growth of the tangency count under grid refinement near gaps.
    pub detect_accumulation: bool,
}

impl Default for TangentOpts {
    fn default() -> Self {
        TangentOpts {
            density: 1024,
            tol: BISECT_X_TOL,
            height_clip: None,
            detect_accumulation: true,
        }
    }
}

/// Parameters in the window where d x1/dp changes sign, tagged as maxima or
/// minima of x1 along the curve.
pub fn vertical_tangents(
    curve: &PlaneCurve,
    window: [f64; 2],
    opts: TangentOpts,
) -> Result<Vec<Tangency>, CurveError> {
    let pass = |density: usize| -> Result<Vec<Tangency>, CurveError> {
        let profile = TangentProfile { curve, seed_cap: density * 4 };
        let roots = isolate_roots(
            &profile,
            window,
            IsolateOpts { density, tol: opts.tol, tangential: false, residual: 0.0 },
        )?;
        let mut out = Vec::with_capacity(roots.len());
        for r in roots {
            // a derivative jump (chain seam kink) changes sign without
            // vanishing; a genuine tangent collapses relative to its flanks.
            // Flat-oscillation curves have continuous derivatives: no kinks.
            if !curve.has_flat_oscillation() {
                let h = 1e-7 * (1.0 + r.x.abs());
                let vc = curve.x1_deriv_at(r.x).abs();
                let flank =
                    curve.x1_deriv_at(r.x - h).abs().max(curve.x1_deriv_at(r.x + h).abs());
                if vc > 1e-3 * flank {
                    continue;
                }
            }
            let kind = if r.left_sign > 0 { ExtremumKind::Max } else { ExtremumKind::Min };
            let point = curve.point_at(r.x);
            let log_height = curve_log_height(curve, r.x);
            out.push(Tangency { param: r.x, point, height: point[0], kind, log_height });
        }
        if let Some([lo, hi]) = opts.height_clip {
            out.retain(|t| t.height >= lo && t.height <= hi);
        }
        Ok(out)
    };

    let base = pass(opts.density)?;
    if opts.detect_accumulation && curve.has_flat_oscillation() {
        if let Some(&gap) = curve.gap_params().first() {
            if gap >= window[0] - 1e-12 && gap <= window[1] + 1e-12 {
                let refined = pass(opts.density * 2)?;
                let near = |ts: &[Tangency]| {
                    ts.iter().filter(|t| (t.param - gap).abs() < 0.25 * (window[1] - window[0])).count()
                };
                let (n0, n1) = (near(&base), near(&refined));
                if n1 > n0 && n1 >= 4 {
                    let focus = curve.point_at(gap);
                    return Err(CurveError::AccumulationSuspected { x1: focus[0], x2: focus[1] });
                }
            }
        }
    }
    Ok(base)
}

/// ln |height - gap height| along the curve, exact for flat oscillating
/// graphs far below f64 underflow. For other curves, plain log of the value.
fn curve_log_height(curve: &PlaneCurve, p: f64) -> f64 {
    match curve {
        PlaneCurve::FnGraph { f } => f.eval_log_abs(p),
        PlaneCurve::Transformed { base, .. } => curve_log_height(base, p),
        _ => curve.point_at(p)[0].abs().ln(),
    }
}

/// Upper estimate of sup |f'| on the window: dense-grid max times a safety
/// factor of 2. Gap points are skipped.
pub fn sup_abs_derivative(f: &Fn1D, window: [f64; 2], grid: usize) -> f64 {
    let gaps = f.analyticity_gap();
    let mut max = 0.0f64;
    for i in 0..=grid {
        let x = window[0] + (window[1] - window[0]) * i as f64 / grid as f64;
        if gaps.iter().any(|&g| (x - g).abs() < 1e-12) {
            continue;
        }
        max = max.max(f.deriv_eval(x).abs());
    }
    2.0 * max
}
