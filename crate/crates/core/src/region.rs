//! Planar regions cut out by curve constraints, and their vertical slices.
//!
//! A region is the set where every constraint's defining function g is >= 0,
//! intersected with an analysis window. Slicing at a height x1 produces the
//! x2-interval decomposition that drives the Reeb sweep.
//!
//! Slicing decides membership by exact sign, not by f64 magnitude: the flat
//! boundary functions of the sphere scenarios evaluate to 0.0 on a whole
//! neighborhood of their gap, and tolerance-slack membership there would
//! replace a discrete set of degenerate contours with a spurious interval.

use serde::{Deserialize, Serialize};

use crate::curve::{vertical_tangents, ExtremumKind, PlaneCurve, TangentOpts};
use crate::error::{CurveError, RegionError};
use crate::poly::sign_of;
use crate::roots::{isolate_roots, reciprocal_seeds, IsolateOpts, Profile1D, Root};
use crate::tol::{CORNER_TOL, ENDPOINT_RESIDUAL, EVENT_DEDUP_TOL};

/// Axis-aligned analysis window.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub x1: [f64; 2],
    pub x2: [f64; 2],
}

impl Rect {
    pub fn new(x1: [f64; 2], x2: [f64; 2]) -> Self {
        Rect { x1, x2 }
    }

    pub fn contains(&self, p: [f64; 2]) -> bool {
        p[0] >= self.x1[0] && p[0] <= self.x1[1] && p[1] >= self.x2[0] && p[1] <= self.x2[1]
    }
}

/// Which closed half of a curve the region lies in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    /// x1 >= height(x2) for graph-like curves.
    Above,
    /// x1 <= height(x2) for graph-like curves.
    Below,
    /// level - x1^2 - x2^2 >= 0 for circles.
    Inside,
    /// The complement side of a circle.
    Outside,
}

/// One closed half-constraint `g(x1, x2) >= 0`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Constraint {
    pub curve: PlaneCurve,
    pub side: Side,
}

impl Constraint {
    pub fn new(curve: PlaneCurve, side: Side) -> Self {
        Constraint { curve, side }
    }

    /// Defining function value. For transformed curves the point is pulled
    /// back through the inverse map and the base constraint applies.
    pub fn g(&self, p: [f64; 2]) -> f64 {
        match &self.curve {
            PlaneCurve::Transformed { base, map } => {
                let inv = map.inverse().expect("constraint transform must be invertible");
                Constraint { curve: (**base).clone(), side: self.side }.g(inv.apply(p))
            }
            PlaneCurve::Circle { level } => {
                let v = level - p[0] * p[0] - p[1] * p[1];
                match self.side {
                    Side::Inside => v,
                    Side::Outside => -v,
                    _ => v,
                }
            }
            curve => {
                let h = curve.height_at(p[1]).expect("graph-like curve");
                match self.side {
                    Side::Above => p[0] - h,
                    Side::Below => h - p[0],
                    _ => p[0] - h,
                }
            }
        }
    }

    /// Exact sign of g, robust to flat-factor underflow in the curve height.
    pub fn g_sign(&self, p: [f64; 2]) -> i8 {
        match &self.curve {
            PlaneCurve::Transformed { base, map } => {
                let inv = map.inverse().expect("invertible");
                Constraint { curve: (**base).clone(), side: self.side }.g_sign(inv.apply(p))
            }
            PlaneCurve::FnGraph { f } => {
                let v = self.g(p);
                if v != 0.0 {
                    sign_of(v)
                } else {
                    // x1 cancels the (possibly underflowed) height exactly;
                    // the true sign is decided by the function structure
                    let s = f.eval_sign(p[1]);
                    let vs = sign_of(p[0]);
                    let diff = match (vs, s) {
                        (0, s) => -s,
                        (vs, 0) => vs,
                        (vs, s) if vs != s => vs,
                        _ => 0, // same side and both rounded together: boundary
                    };
                    match self.side {
                        Side::Below => -diff,
                        _ => diff,
                    }
                }
            }
            _ => sign_of(self.g(p)),
        }
    }

    /// Analytic d g / d x2 at fixed x1.
    fn g_x2_deriv(&self, p: [f64; 2]) -> f64 {
        match &self.curve {
            PlaneCurve::Transformed { base, map } => {
                let inv = map.inverse().expect("invertible");
                let pre = inv.apply(p);
                let col = [inv.matrix[0][1], inv.matrix[1][1]];
                let inner = Constraint { curve: (**base).clone(), side: self.side };
                let grad = inner.g_gradient(pre);
                grad[0] * col[0] + grad[1] * col[1]
            }
            PlaneCurve::Circle { level: _ } => match self.side {
                Side::Outside => 2.0 * p[1],
                _ => -2.0 * p[1],
            },
            curve => {
                let d = curve.x1_deriv_at(p[1]);
                match self.side {
                    Side::Above => -d,
                    Side::Below => d,
                    _ => -d,
                }
            }
        }
    }

    /// Analytic gradient of g.
    pub fn g_gradient(&self, p: [f64; 2]) -> [f64; 2] {
        match &self.curve {
            PlaneCurve::Transformed { base, map } => {
                let inv = map.inverse().expect("invertible");
                let pre = inv.apply(p);
                let inner = Constraint { curve: (**base).clone(), side: self.side };
                let g = inner.g_gradient(pre);
                [
                    g[0] * inv.matrix[0][0] + g[1] * inv.matrix[1][0],
                    g[0] * inv.matrix[0][1] + g[1] * inv.matrix[1][1],
                ]
            }
            PlaneCurve::Circle { .. } => {
                let s = if self.side == Side::Outside { 1.0 } else { -1.0 };
                [s * 2.0 * p[0], s * 2.0 * p[1]]
            }
            curve => {
                let d = curve.x1_deriv_at(p[1]);
                match self.side {
                    Side::Below => [-1.0, d],
                    _ => [1.0, -d],
                }
            }
        }
    }

    /// Gap images: (x2 of the plane point, underlying curve param) where the
    /// constraint stops being analytic.
    fn gap_images(&self) -> Vec<(f64, f64)> {
        self.curve
            .gap_params()
            .iter()
            .map(|&g| (self.curve.point_at(g)[1], g))
            .collect()
    }
}

/// Where a slice endpoint comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum EndpointSource {
    Constraint(usize),
    Window,
}

/// One maximal closed x2-interval of a slice. Degenerate intervals are
/// isolated boundary-touch points.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct SliceInterval {
    pub lo: f64,
    pub hi: f64,
    pub lo_source: EndpointSource,
    pub hi_source: EndpointSource,
    pub degenerate: bool,
}

impl SliceInterval {
    pub fn len(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn is_empty(&self) -> bool {
        self.hi < self.lo
    }

    pub fn overlaps(&self, other: &SliceInterval, tol: f64) -> bool {
        self.lo <= other.hi + tol && other.lo <= self.hi + tol
    }

    pub fn truncated_lo(&self) -> bool {
        self.lo_source == EndpointSource::Window
    }

    pub fn truncated_hi(&self) -> bool {
        self.hi_source == EndpointSource::Window
    }
}

/// The slice of a region at one height.
#[derive(Clone, Debug, Serialize)]
pub struct Slice {
    pub height: f64,
    pub intervals: Vec<SliceInterval>,
}

impl Slice {
    /// Intervals of positive length (degenerate points carry no contour
    /// topology on their own).
    pub fn solid_intervals(&self) -> impl Iterator<Item = &SliceInterval> {
        self.intervals.iter().filter(|iv| !iv.degenerate)
    }
}

/// A planar region: constraint intersection within a window, optionally
/// spatially periodic in x2.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PlanarRegion {
    pub constraints: Vec<Constraint>,
    pub window: Rect,
    #[serde(default)]
    pub period: Option<f64>,
}

impl PlanarRegion {
    pub fn new(constraints: Vec<Constraint>, window: Rect) -> Self {
        PlanarRegion { constraints, window, period: None }
    }

    pub fn periodic(mut self, period: f64) -> Self {
        self.period = Some(period);
        self
    }

    /// Tolerance-slack membership: window plus every g >= -tol.
    pub fn contains(&self, p: [f64; 2], tol: f64) -> bool {
        self.window.contains(p) && self.constraints.iter().all(|c| c.g(p) >= -tol)
    }

    /// Exact-sign membership (used by slicing and sampling filters).
    pub fn contains_exact(&self, p: [f64; 2]) -> bool {
        self.window.contains(p) && self.constraints.iter().all(|c| c.g_sign(p) >= 0)
    }
}

struct SliceProfile<'a> {
    constraint: &'a Constraint,
    x1: f64,
}

impl Profile1D for SliceProfile<'_> {
    fn value(&self, x2: f64) -> f64 {
        self.constraint.g([self.x1, x2])
    }

    fn sign(&self, x2: f64) -> i8 {
        self.constraint.g_sign([self.x1, x2])
    }

    fn deriv_sign(&self, x2: f64) -> i8 {
        // exact through underflow: an underflowed curve slope cannot flip
        // the polynomial part, and the pure-graph case defers to the curve
        match &self.constraint.curve {
            PlaneCurve::FnGraph { f } => {
                let d = f.deriv_sign(x2);
                match self.constraint.side {
                    Side::Below => d,
                    _ => -d,
                }
            }
            _ => sign_of(self.constraint.g_x2_deriv([self.x1, x2])),
        }
    }

    fn seed_points(&self, bracket: [f64; 2]) -> Vec<f64> {
        if self.constraint.curve.has_flat_oscillation() {
            self.constraint
                .gap_images()
                .iter()
                .flat_map(|&(x2, _)| reciprocal_seeds(x2, bracket, 2048))
                .collect()
        } else {
            vec![]
        }
    }

    fn oscillation_gap(&self) -> Option<f64> {
        if self.constraint.curve.has_flat_oscillation() {
            self.constraint.gap_images().first().map(|&(x2, _)| x2)
        } else {
            None
        }
    }
}

#[derive(Clone, Copy, Debug)]
struct Bound {
    x: f64,
    source: EndpointSource,
}

#[derive(Clone, Copy, Debug)]
struct Piece {
    lo: Bound,
    hi: Bound,
    degenerate: bool,
}

/// Feasible set of one constraint along a slice line.
fn constraint_feasible(
    constraint: &Constraint,
    index: usize,
    x1: f64,
    window: [f64; 2],
    density: usize,
    tol: f64,
) -> Result<Vec<Piece>, CurveError> {
    let profile = SliceProfile { constraint, x1 };
    let roots = isolate_roots(
        &profile,
        window,
        IsolateOpts { density, tol, tangential: true, residual: ENDPOINT_RESIDUAL },
    )?;

    // candidate breakpoints with midpoint signs between them
    let mut cuts = vec![window[0]];
    cuts.extend(roots.iter().map(|r| r.x).filter(|&x| x > window[0] && x < window[1]));
    cuts.push(window[1]);

    let src = EndpointSource::Constraint(index);
    let is_root = |x: f64| roots.iter().any(|r| (r.x - x).abs() <= tol * 10.0);
    let mut pieces: Vec<Piece> = Vec::new();
    let mut open: Option<Bound> = None;
    // the sign at the window edge decides whether the first cell is feasible
    for w in 0..cuts.len() - 1 {
        let (a, b) = (cuts[w], cuts[w + 1]);
        let mid = 0.5 * (a + b);
        let feasible = profile.sign(mid) >= 0;
        if feasible {
            if open.is_none() {
                let source = if w == 0 && !is_root(a) { EndpointSource::Window } else { src };
                open = Some(Bound { x: a, source });
            }
        } else if let Some(lo) = open.take() {
            pieces.push(Piece { lo, hi: Bound { x: a, source: src }, degenerate: false });
        }
    }
    if let Some(lo) = open.take() {
        let b = *cuts.last().unwrap();
        let source = if is_root(b) { src } else { EndpointSource::Window };
        pieces.push(Piece { lo, hi: Bound { x: b, source }, degenerate: false });
    }

    // isolated touch points: tangential roots inside infeasible surroundings
    for r in roots.iter().filter(|r| r.tangential) {
        let inside = pieces.iter().any(|p| r.x >= p.lo.x - tol && r.x <= p.hi.x + tol);
        if !inside {
            pieces.push(Piece {
                lo: Bound { x: r.x, source: src },
                hi: Bound { x: r.x, source: src },
                degenerate: true,
            });
        }
    }
    pieces.sort_by(|p, q| p.lo.x.total_cmp(&q.lo.x));
    Ok(pieces)
}

fn intersect_piece(a: &Piece, b: &Piece) -> Option<Piece> {
    let lo = if a.lo.x >= b.lo.x { a.lo } else { b.lo };
    let hi = if a.hi.x <= b.hi.x { a.hi } else { b.hi };
    if hi.x < lo.x {
        return None;
    }
    Some(Piece { lo, hi, degenerate: hi.x == lo.x || a.degenerate || b.degenerate })
}

/// Options controlling slice computation.
#[derive(Clone, Copy, Debug)]
pub struct SliceOpts {
    pub density: usize,
    pub tol: f64,
}

impl Default for SliceOpts {
    fn default() -> Self {
        SliceOpts { density: 512, tol: crate::tol::BISECT_X_TOL }
    }
}

/// The set {x2 : (x1, x2) in region ∩ window} as maximal closed intervals.
pub fn slice(region: &PlanarRegion, x1: f64, opts: SliceOpts) -> Result<Slice, RegionError> {
    slice_on(region, x1, region.window.x2, opts)
}

/// Slice over an explicit x2 range (the periodic sweep slices one period).
pub fn slice_on(
    region: &PlanarRegion,
    x1: f64,
    x2_range: [f64; 2],
    opts: SliceOpts,
) -> Result<Slice, RegionError> {
    if x1 < region.window.x1[0] - 1e-12 || x1 > region.window.x1[1] + 1e-12 {
        return Err(RegionError::HeightOutsideWindow { height: x1 });
    }
    let mut acc = vec![Piece {
        lo: Bound { x: x2_range[0], source: EndpointSource::Window },
        hi: Bound { x: x2_range[1], source: EndpointSource::Window },
        degenerate: false,
    }];
    for (i, c) in region.constraints.iter().enumerate() {
        let feas = constraint_feasible(c, i, x1, x2_range, opts.density, opts.tol)?;
        let mut next = Vec::new();
        for a in &acc {
            for b in &feas {
                if let Some(p) = intersect_piece(a, b) {
                    next.push(p);
                }
            }
        }
        next.sort_by(|p, q| p.lo.x.total_cmp(&q.lo.x));
        acc = next;
        if acc.is_empty() {
            break;
        }
    }
    let intervals = acc
        .into_iter()
        .map(|p| SliceInterval {
            lo: p.lo.x,
            hi: p.hi.x,
            lo_source: p.lo.source,
            hi_source: p.hi.source,
            degenerate: p.degenerate || p.hi.x - p.lo.x == 0.0,
        })
        .collect();
    Ok(Slice { height: x1, intervals })
}

/// How a candidate critical height arises.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EventKind {
    VertexTangency,
    Corner,
    End,
}

/// A witness point for an event, with its generating structure.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct EventWitness {
    pub point: [f64; 2],
    pub kind: EventKind,
    /// Direction of the extremum for tangency witnesses.
    pub extremum: Option<ExtremumKind>,
}

/// A deduplicated candidate critical height.
#[derive(Clone, Debug, Serialize)]
pub struct Event {
    pub height: f64,
    pub witnesses: Vec<EventWitness>,
}

impl Event {
    pub fn kind(&self) -> EventKind {
        // tangency and corner witnesses outrank window ends
        self.witnesses
            .iter()
            .map(|w| w.kind)
            .min_by_key(|k| match k {
                EventKind::VertexTangency => 0,
                EventKind::Corner => 1,
                EventKind::End => 2,
            })
            .unwrap_or(EventKind::End)
    }
}

/// Whether a boundary point actually lies on the region's boundary: all
/// other constraints hold there within tolerance.
fn on_region_boundary(region: &PlanarRegion, skip: usize, p: [f64; 2]) -> bool {
    region.window.contains(p)
        && region
            .constraints
            .iter()
            .enumerate()
            .all(|(j, c)| j == skip || c.g(p) >= -1e-7)
}

/// Candidate critical heights of the height function on the region:
/// vertical tangencies of boundary curves, pairwise constraint corners, and
/// window end heights, deduplicated within tolerance.
pub fn boundary_events(
    region: &PlanarRegion,
    opts: SliceOpts,
) -> Result<Vec<Event>, RegionError> {
    let mut raw: Vec<EventWitness> = Vec::new();

    for (i, c) in region.constraints.iter().enumerate() {
        let pw = c.curve.param_window(&region.window);
        let tangents = vertical_tangents(
            &c.curve,
            pw,
            TangentOpts {
                density: opts.density.max(1024),
                tol: opts.tol,
                height_clip: Some([region.window.x1[0] - 1e-9, region.window.x1[1] + 1e-9]),
                detect_accumulation: true,
            },
        )
        .map_err(RegionError::Curve)?;
        for t in tangents {
            if on_region_boundary(region, i, t.point) {
                raw.push(EventWitness {
                    point: t.point,
                    kind: EventKind::VertexTangency,
                    extremum: Some(t.kind),
                });
            }
        }
    }

    for (i, ci) in region.constraints.iter().enumerate() {
        for (j, cj) in region.constraints.iter().enumerate().skip(i + 1) {
            for p in curve_pair_intersections(ci, cj, region, opts)? {
                if region.window.contains(p)
                    && on_region_boundary(region, i, p)
                    && on_region_boundary(region, j, p)
                {
                    raw.push(EventWitness { point: p, kind: EventKind::Corner, extremum: None });
                }
            }
        }
    }

    for end in [region.window.x1[0], region.window.x1[1]] {
        let sl = slice(region, end, opts)?;
        if let Some(iv) = sl.intervals.first() {
            raw.push(EventWitness {
                point: [end, 0.5 * (iv.lo + iv.hi)],
                kind: EventKind::End,
                extremum: None,
            });
        }
    }

    raw.sort_by(|a, b| a.point[0].total_cmp(&b.point[0]));
    let mut events: Vec<Event> = Vec::new();
    for w in raw {
        match events.last_mut() {
            Some(e) if (w.point[0] - e.height).abs() <= EVENT_DEDUP_TOL => {
                // circle seams and corner solvers can report one boundary
                // point twice; keep distinct witnesses only
                if !e
                    .witnesses
                    .iter()
                    .any(|v| (v.point[1] - w.point[1]).abs() < 1e-7 && v.kind == w.kind)
                {
                    e.witnesses.push(w);
                }
            }
            _ => events.push(Event { height: w.point[0], witnesses: vec![w] }),
        }
    }
    Ok(events)
}

/// Intersection points of two constraint curves: root-find one constraint's
/// g along the other's parametrization.
fn curve_pair_intersections(
    ci: &Constraint,
    cj: &Constraint,
    region: &PlanarRegion,
    opts: SliceOpts,
) -> Result<Vec<[f64; 2]>, RegionError> {
    struct AlongCurve<'a> {
        carrier: &'a PlaneCurve,
        g_of: &'a Constraint,
    }
    impl Profile1D for AlongCurve<'_> {
        fn value(&self, p: f64) -> f64 {
            self.g_of.g(self.carrier.point_at(p))
        }
        fn deriv_sign(&self, _p: f64) -> i8 {
            0
        }
        fn seed_points(&self, bracket: [f64; 2]) -> Vec<f64> {
            if self.carrier.has_flat_oscillation() {
                self.carrier
                    .gap_params()
                    .iter()
                    .flat_map(|&g| reciprocal_seeds(g, bracket, 512))
                    .collect()
            } else {
                vec![]
            }
        }
    }

    let profile = AlongCurve { carrier: &ci.curve, g_of: cj };
    let pw = ci.curve.param_window(&region.window);
    let roots: Vec<Root> = isolate_roots(
        &profile,
        pw,
        IsolateOpts {
            density: opts.density.max(512),
            tol: CORNER_TOL,
            tangential: false,
            residual: 0.0,
        },
    )
    .map_err(RegionError::Curve)?;
    Ok(roots.iter().map(|r| ci.curve.point_at(r.x)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::AffineMap;
    use crate::fn1d::Fn1D;
    use crate::poly::Polynomial;
    use crate::sdcran::SDCRAnFn;
    use std::f64::consts::PI;

    fn thm1_region() -> PlanarRegion {
        PlanarRegion::new(
            vec![
                Constraint::new(PlaneCurve::s1_chain(), Side::Below),
                Constraint::new(PlaneCurve::s2_chain(), Side::Above),
            ],
            Rect::new([-1.0, 1.0], [-6.0, 6.0]),
        )
        .periodic(4.0)
    }

    fn case1_region(r0: f64, r: f64) -> PlanarRegion {
        let c0 = Fn1D::compose(
            Polynomial::new(vec![0.0, r0, -1.0]),
            Fn1D::sdcran(SDCRAnFn::flat_sine_squared(r)),
        );
        let m = 1.1 * r0.sqrt();
        PlanarRegion::new(
            vec![
                Constraint::new(PlaneCurve::Circle { level: r0 }, Side::Inside),
                Constraint::new(PlaneCurve::FnGraph { f: c0 }, Side::Above),
            ],
            Rect::new([-m, m], [-m, m]),
        )
    }

    #[test]
    fn thm1_slice_at_zero_has_six_intervals() {
        let region = thm1_region();
        let sl = slice(&region, 0.0, SliceOpts::default()).unwrap();
        assert_eq!(sl.intervals.len(), 6, "{:?}", sl.intervals);
        let r = 0.5f64.sqrt();
        let expected: Vec<[f64; 2]> = (-3..3)
            .map(|k| [2.0 * k as f64 + r, 2.0 * k as f64 + 2.0 - r])
            .collect();
        for (iv, e) in sl.intervals.iter().zip(&expected) {
            assert!((iv.lo - e[0]).abs() < 1e-9, "{} vs {}", iv.lo, e[0]);
            assert!((iv.hi - e[1]).abs() < 1e-9);
            assert!(!iv.degenerate);
        }
    }

    #[test]
    fn thm1_slice_above_half_only_s1_active() {
        let region = thm1_region();
        let sl = slice(&region, 0.9, SliceOpts::default()).unwrap();
        let r = 1.4f64.sqrt();
        // interior intervals [4j + r, 4j + 4 - r]; the window clips the
        // outermost pieces
        let interior: Vec<&SliceInterval> =
            sl.intervals.iter().filter(|iv| !iv.truncated_lo() && !iv.truncated_hi()).collect();
        assert_eq!(interior.len(), 2);
        assert!((interior[0].lo - (-4.0 + r)).abs() < 1e-9);
        assert!((interior[0].hi - (-r)).abs() < 1e-9);
        assert!((interior[1].lo - r).abs() < 1e-9);
        assert!((interior[1].hi - (4.0 - r)).abs() < 1e-9);
    }

    #[test]
    fn slice_outside_strip_errors() {
        let region = thm1_region();
        assert!(matches!(
            slice(&region, 1.5, SliceOpts::default()),
            Err(RegionError::HeightOutsideWindow { .. })
        ));
    }

    #[test]
    fn thm1_contains_examples() {
        let region = thm1_region();
        assert!(region.contains([0.0, 1.0], 1e-9));
        assert!(!region.contains([0.0, 0.0], 1e-9)); // inside the S1 bite
        assert!(!region.contains([0.0, 100.0], 1e-9)); // outside window
    }

    #[test]
    fn case1_slice_at_zero_is_degenerate_points() {
        let region = case1_region(1.0, 0.01);
        let sl = slice(&region, 0.0, SliceOpts::default()).unwrap();
        assert!(!sl.intervals.is_empty());
        assert!(sl.intervals.iter().all(|iv| iv.degenerate), "{:?}", &sl.intervals[..4]);
        // 0 and the first reciprocal-of-k-pi points on both sides are found
        for target in [0.0, 1.0 / PI, -1.0 / PI, 1.0 / (2.0 * PI), 1.0 / (5.0 * PI)] {
            assert!(
                sl.intervals.iter().any(|iv| (iv.lo - target).abs() < 1e-9),
                "missing degenerate point at {target}"
            );
        }
        // nothing outside the disk
        assert!(sl.intervals.iter().all(|iv| iv.lo.abs() <= 1.0 + 1e-9));
    }

    #[test]
    fn case1_slice_above_corner_is_full_chord() {
        let region = case1_region(1.0, 0.01);
        // corner height is ~2.6e-3; above it the slice is the circle chord
        let h = 0.1;
        let sl = slice(&region, h, SliceOpts::default()).unwrap();
        assert_eq!(sl.solid_intervals().count(), 1);
        let iv = sl.intervals.iter().find(|iv| !iv.degenerate).unwrap();
        let chord = (1.0f64 - h * h).sqrt();
        assert!((iv.lo + chord).abs() < 1e-9);
        assert!((iv.hi - chord).abs() < 1e-9);
    }

    #[test]
    fn thm1_boundary_events() {
        let region = thm1_region();
        let events = boundary_events(&region, SliceOpts::default()).unwrap();
        let heights: Vec<f64> = events.iter().map(|e| e.height).collect();
        assert_eq!(events.len(), 4, "{heights:?}");
        for (e, (h, k)) in events.iter().zip([
            (-1.0, EventKind::End),
            (-0.5, EventKind::VertexTangency),
            (0.5, EventKind::VertexTangency),
            (1.0, EventKind::End),
        ]) {
            assert!((e.height - h).abs() < 1e-9);
            assert_eq!(e.kind(), k);
        }
        // three chain vertices witness each interior event on this window
        assert_eq!(events[1].witnesses.len(), 3);
    }

    #[test]
    fn disk_boundary_events_at_sqrt_level() {
        let region = PlanarRegion::new(
            vec![Constraint::new(PlaneCurve::Circle { level: 1.0 }, Side::Inside)],
            Rect::new([-1.1, 1.1], [-1.1, 1.1]),
        );
        let events = boundary_events(&region, SliceOpts::default()).unwrap();
        assert_eq!(events.len(), 2);
        assert!((events[0].height + 1.0).abs() < 1e-9);
        assert!((events[1].height - 1.0).abs() < 1e-9);
        assert!(events.iter().all(|e| e.kind() == EventKind::VertexTangency));
    }

    #[test]
    fn case1_boundary_events_accumulate() {
        let region = case1_region(1.0, 0.01);
        match boundary_events(&region, SliceOpts::default()) {
            Err(RegionError::Curve(CurveError::AccumulationSuspected { x1, x2 })) => {
                assert!(x1.abs() < 1e-9 && x2.abs() < 1e-9);
            }
            other => panic!("expected accumulation, got {other:?}"),
        }
    }

    #[test]
    fn case1_corners_found_near_circle_extremes() {
        let region = case1_region(1.0, 0.01);
        let c0 = &region.constraints[1];
        let circle = &region.constraints[0];
        let pts =
            curve_pair_intersections(c0, circle, &region, SliceOpts::default()).unwrap();
        let in_window: Vec<&[f64; 2]> = pts.iter().filter(|p| region.window.contains(**p)).collect();
        assert_eq!(in_window.len(), 2, "{pts:?}");
        for p in in_window {
            assert!(p[1].abs() > 0.999 && p[1].abs() < 1.0001);
            assert!(p[0] > 0.0 && p[0] < 0.01);
        }
    }

    #[test]
    fn periodic_slices_shift_by_period() {
        let region = thm1_region();
        for &h in &[-0.7, 0.0, 0.3, 0.8] {
            let sl = slice_on(&region, h, [-2.0, 2.0], SliceOpts::default()).unwrap();
            let shifted = slice_on(&region, h, [2.0, 6.0], SliceOpts::default()).unwrap();
            assert_eq!(sl.intervals.len(), shifted.intervals.len());
            for (a, b) in sl.intervals.iter().zip(&shifted.intervals) {
                assert!((a.lo + 4.0 - b.lo).abs() < 1e-9);
                assert!((a.hi + 4.0 - b.hi).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn transformed_constraint_pulls_back_through_inverse() {
        // rotate the half-plane constraint x1 >= 0 by 90 degrees: the region
        // side becomes x2 >= 0
        let line = PlaneCurve::FnGraph { f: Fn1D::polynomial(vec![0.0]) };
        let rot = line.transformed(AffineMap::rotation(std::f64::consts::FRAC_PI_2));
        let c = Constraint::new(rot, Side::Above);
        assert!(c.g([0.0, 1.0]) > 0.0);
        assert!(c.g([0.0, -1.0]) < 0.0);
        assert!(c.g([1.0, 0.0]).abs() < 1e-12);
    }
}
