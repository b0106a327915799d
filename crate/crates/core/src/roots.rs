//! Certified root isolation on an interval.
//!
//! Sign changes on a sampled grid are refined by bisection. Flat oscillating
//! targets get two extra treatments: the grid is seeded uniformly in 1/x so
//! that features accumulating at the gap are not missed, and roots where the
//! profile touches zero without a sign change (double zeros of the sine
//! factor) are located by bisecting the derivative sign and accepting the
//! critical point when the residual vanishes.

use crate::error::CurveError;
use crate::fn1d::Fn1D;
use crate::poly::sign_of;
use crate::tol::BISECT_X_TOL;

/// A located root of `value(x) = 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Root {
    pub x: f64,
    /// True when the profile touches zero without changing sign.
    pub tangential: bool,
    /// Profile sign just left of the root (the bracketing cell's left sign).
    pub left_sign: i8,
}

/// What the isolation engine needs from a scalar profile.
pub trait Profile1D {
    fn value(&self, x: f64) -> f64;

    /// Exact sign where the family supports it; falls back to the f64 value.
    fn sign(&self, x: f64) -> i8 {
        sign_of(self.value(x))
    }

    /// Sign of the derivative, used for tangential-root location.
    fn deriv_sign(&self, x: f64) -> i8;

    /// ln |value|; overridden where the value underflows f64.
    fn log_abs(&self, x: f64) -> f64 {
        self.value(x).abs().ln()
    }

    /// Extra sample points concentrating wherever the profile oscillates.
    fn seed_points(&self, _bracket: [f64; 2]) -> Vec<f64> {
        vec![]
    }

    /// Gap point whose neighborhood may hide unresolvable oscillation.
    fn oscillation_gap(&self) -> Option<f64> {
        None
    }
}

/// `f(x) - target` as a profile.
pub struct FnProfile<'a> {
    pub f: &'a Fn1D,
    pub target: f64,
}

impl Profile1D for FnProfile<'_> {
    fn value(&self, x: f64) -> f64 {
        self.f.eval(x) - self.target
    }

    fn sign(&self, x: f64) -> i8 {
        if self.target == 0.0 {
            self.f.eval_sign(x)
        } else {
            sign_of(self.value(x))
        }
    }

    fn deriv_sign(&self, x: f64) -> i8 {
        self.f.deriv_sign(x)
    }

    fn log_abs(&self, x: f64) -> f64 {
        if self.target == 0.0 {
            self.f.eval_log_abs(x)
        } else {
            self.value(x).abs().ln()
        }
    }

    fn seed_points(&self, bracket: [f64; 2]) -> Vec<f64> {
        if self.f.has_flat_oscillation() {
            reciprocal_seeds(0.0, bracket, 4096)
        } else {
            vec![]
        }
    }

    fn oscillation_gap(&self) -> Option<f64> {
        if self.f.has_flat_oscillation() {
            Some(0.0)
        } else {
            None
        }
    }
}

/// Sample points adapted to reciprocal trig oscillation around a gap.
///
/// In u = 1/(x - gap) coordinates the features of
/// `exp(-u^2) * T(sin u, cos u)` sit near multiples of pi/2, and the
/// envelope pushes extrema to within ~1/u of those points. Each
/// quarter-period point therefore gets a two-sided geometric offset ladder
/// in addition to the coarse pi/8-uniform fill.
pub fn reciprocal_seeds(gap: f64, bracket: [f64; 2], max_seeds: usize) -> Vec<f64> {
    const LADDER: [f64; 9] = [-4.0, -2.0, -1.0, -0.5, -0.25, 0.25, 0.5, 1.0, 2.0];
    let half_pi = std::f64::consts::FRAC_PI_2;
    let mut seeds = Vec::new();
    for side in [1.0f64, -1.0] {
        // distance range from the gap on this side, clipped to the bracket
        let (dmin, dmax) = if side > 0.0 {
            ((bracket[0] - gap).max(0.0), bracket[1] - gap)
        } else {
            ((gap - bracket[1]).max(0.0), gap - bracket[0])
        };
        if dmax <= 0.0 {
            continue;
        }
        let mut push = |d: f64, seeds: &mut Vec<f64>| {
            if d >= dmin && d <= dmax {
                let x = gap + side * d;
                if x >= bracket[0] && x <= bracket[1] {
                    seeds.push(x);
                }
            }
        };
        // coarse fill, uniform in u
        let u_lo = 1.0 / dmax;
        let mut u = u_lo;
        let mut count = 0usize;
        while count < max_seeds / 2 {
            push(1.0 / u, &mut seeds);
            u += half_pi / 4.0;
            count += 1;
            if dmin > 0.0 && 1.0 / u < dmin {
                break;
            }
        }
        // offset ladders at quarter-period points
        let m_lo = (u_lo / half_pi).floor().max(1.0) as u64;
        let mut count = 0usize;
        for m in m_lo.. {
            let u0 = m as f64 * half_pi;
            push(1.0 / u0, &mut seeds);
            for off in LADDER {
                let u = u0 + off / u0;
                if u > 0.0 {
                    push(1.0 / u, &mut seeds);
                }
            }
            count += LADDER.len() + 1;
            if count >= max_seeds / 2 || (dmin > 0.0 && 1.0 / u0 < dmin) {
                break;
            }
        }
    }
    seeds
}

/// Options for one isolation pass.
#[derive(Clone, Copy, Debug)]
pub struct IsolateOpts {
    pub density: usize,
    pub tol: f64,
    /// Look for touch-roots via derivative sign changes.
    pub tangential: bool,
    /// Residual |value| accepted at a tangential critical point.
    pub residual: f64,
}

impl Default for IsolateOpts {
    fn default() -> Self {
        IsolateOpts { density: 512, tol: BISECT_X_TOL, tangential: true, residual: 1e-9 }
    }
}

/// Sorted roots of `profile = 0` on the bracket.
pub fn isolate_roots<P: Profile1D>(
    profile: &P,
    bracket: [f64; 2],
    opts: IsolateOpts,
) -> Result<Vec<Root>, CurveError> {
    let [a, b] = bracket;
    if !(a < b) {
        return Ok(vec![]);
    }
    let mut grid: Vec<f64> = (0..=opts.density)
        .map(|i| a + (b - a) * i as f64 / opts.density as f64)
        .collect();
    grid.extend(profile.seed_points(bracket));
    if let Some(g) = profile.oscillation_gap() {
        if g > a && g < b {
            grid.push(g);
        }
    }
    grid.retain(|x| x.is_finite());
    grid.sort_by(f64::total_cmp);
    grid.dedup();

    let signs: Vec<i8> = grid.iter().map(|&x| profile.sign(x)).collect();
    let mut roots: Vec<Root> = Vec::new();

    for w in 0..grid.len() - 1 {
        let (x0, x1) = (grid[w], grid[w + 1]);
        let (s0, s1) = (signs[w], signs[w + 1]);
        if s0 == 0 {
            let surround = if w == 0 { s1 } else { signs[w - 1] };
            roots.push(Root {
                x: x0,
                tangential: s1 != 0 && s1 == surround,
                left_sign: surround,
            });
            continue;
        }
        if s1 == 0 {
            continue; // handled as the left end of the next cell
        }
        if s0 != s1 {
            let x = bisect_sign(|x| profile.sign(x), x0, x1, s0, opts.tol);
            roots.push(Root { x, tangential: false, left_sign: s0 });
        } else if opts.tangential {
            // same-sign cell: a double zero hides where the derivative flips
            let (d0, d1) = (profile.deriv_sign(x0), profile.deriv_sign(x1));
            if d0 != 0 && d1 != 0 && d0 != d1 {
                let xc = bisect_sign(|x| profile.deriv_sign(x), x0, x1, d0, opts.tol);
                // a genuine touch collapses by orders of magnitude relative
                // to the cell ends; a mere interior extremum does not (its
                // log-magnitude certifies that even past f64 underflow)
                let collapse = profile.log_abs(xc)
                    <= profile.log_abs(x0).max(profile.log_abs(x1)) - 6.0;
                if collapse && profile.value(xc).abs() <= opts.residual {
                    roots.push(Root { x: xc, tangential: true, left_sign: s0 });
                }
            }
        }
    }
    if grid.len() >= 2 {
        let last = grid.len() - 1;
        if signs[last] == 0 {
            roots.push(Root { x: grid[last], tangential: false, left_sign: signs[last - 1] });
        }
    }

    roots.sort_by(|p, q| p.x.total_cmp(&q.x));
    roots.dedup_by(|p, q| {
        if (p.x - q.x).abs() <= opts.tol.max(1e-12) * 10.0 {
            q.tangential = q.tangential && p.tangential;
            true
        } else {
            false
        }
    });

    // unresolvable oscillation: alternating signs in cells the grid can no
    // longer subdivide near the gap
    if let Some(g) = profile.oscillation_gap() {
        let unresolved = grid
            .windows(2)
            .zip(signs.windows(2))
            .filter(|(xs, ss)| {
                ss[0] != 0 && ss[1] != 0 && ss[0] != ss[1] && (xs[1] - xs[0]) < opts.tol
            })
            .filter(|(xs, _)| (xs[0] - g).abs() < 0.1 * (b - a).abs())
            .count();
        if unresolved > 4 {
            return Err(CurveError::TooOscillatory { near: g });
        }
    }

    Ok(roots)
}

fn bisect_sign<F: Fn(f64) -> i8>(sign: F, mut lo: f64, mut hi: f64, s_lo: i8, tol: f64) -> f64 {
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let sm = sign(mid);
        if sm == 0 {
            return mid;
        }
        if sm == s_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Spec-facing wrapper: sorted solutions of `f(x) = target` on the bracket.
pub fn roots_in_interval(
    f: &Fn1D,
    target: f64,
    bracket: [f64; 2],
    tol: f64,
    density: usize,
) -> Result<Vec<Root>, CurveError> {
    let profile = FnProfile { f, target };
    isolate_roots(
        &profile,
        bracket,
        IsolateOpts { density, tol, tangential: true, residual: tol.max(1e-12) },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Polynomial;
    use crate::sdcran::SDCRAnFn;
    use std::f64::consts::PI;

    #[test]
    fn quadratic_roots_at_half_sqrt_two() {
        // x^2 - 1/2 = 0 (the chain vertex parabola at j = 0)
        let f = Fn1D::polynomial(vec![-0.5, 0.0, 1.0]);
        let roots = roots_in_interval(&f, 0.0, [-2.0, 2.0], 1e-12, 512).unwrap();
        assert_eq!(roots.len(), 2);
        let r = 0.5f64.sqrt();
        assert!((roots[0].x + r).abs() < 1e-10);
        assert!((roots[1].x - r).abs() < 1e-10);
    }

    #[test]
    fn identity_root_at_zero() {
        let f = Fn1D::polynomial(vec![0.0, 1.0]);
        let roots = roots_in_interval(&f, 0.0, [-1.0, 1.0], 1e-12, 64).unwrap();
        assert_eq!(roots.len(), 1);
        assert!(roots[0].x.abs() < 1e-10);
    }

    #[test]
    fn touching_roots_of_c0_land_on_reciprocal_pi() {
        // c0 = c (R0 - c) vanishes exactly at 1/(k pi); these are double
        // zeros, invisible to sign changes
        let c0 = Fn1D::compose(
            Polynomial::new(vec![0.0, 1.0, -1.0]),
            Fn1D::sdcran(SDCRAnFn::flat_sine_squared(0.01)),
        );
        let eps = 1e-3;
        let bracket = [1.0 / (5.0 * PI) - eps, 1.0 / PI + eps];
        let roots = roots_in_interval(&c0, 0.0, bracket, 1e-12, 512).unwrap();
        let expected: Vec<f64> = (1..=5).rev().map(|k| 1.0 / (k as f64 * PI)).collect();
        assert_eq!(roots.len(), 5, "{roots:?}");
        for (r, e) in roots.iter().zip(&expected) {
            assert!((r.x - e).abs() < 1e-9, "{} vs {}", r.x, e);
            assert!(r.tangential);
            assert!(c0.eval(r.x).abs() < 1e-12);
        }
    }

    #[test]
    fn superset_under_density_doubling() {
        let f = Fn1D::polynomial(vec![0.0, -1.0, 0.0, 1.0]); // x(x^2-1)
        let coarse = roots_in_interval(&f, 0.0, [-2.0, 2.0], 1e-12, 64).unwrap();
        let fine = roots_in_interval(&f, 0.0, [-2.0, 2.0], 1e-12, 128).unwrap();
        for r in &coarse {
            assert!(fine.iter().any(|q| (q.x - r.x).abs() < 1e-9));
        }
    }

    #[test]
    fn reciprocal_seeds_concentrate_at_gap() {
        let seeds = reciprocal_seeds(0.0, [0.0, 1.0], 64);
        assert!(seeds.len() > 16);
        assert!(seeds.iter().all(|&x| (0.0..=1.0).contains(&x)));
        let min = seeds.iter().cloned().fold(f64::INFINITY, f64::min);
        assert!(min < 0.05, "innermost seed {min}");
    }
}
