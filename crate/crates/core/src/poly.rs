//! Dense polynomial arithmetic: univariate over x and bivariate over the
//! formal pair (s, c) standing for (sin(1/x), cos(1/x)).

use serde::{Deserialize, Serialize};

/// Univariate polynomial, dense coefficients in ascending degree order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Polynomial(pub Vec<f64>);

impl Polynomial {
    pub fn new(coeffs: Vec<f64>) -> Self {
        let mut p = Polynomial(coeffs);
        p.trim();
        p
    }

    pub fn constant(c: f64) -> Self {
        Polynomial(vec![c])
    }

    pub fn zero() -> Self {
        Polynomial(vec![])
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0.0)
    }

    pub fn degree(&self) -> usize {
        self.0.iter().rposition(|&c| c != 0.0).unwrap_or(0)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn derivative(&self) -> Polynomial {
        if self.0.len() <= 1 {
            return Polynomial::zero();
        }
        Polynomial::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| k as f64 * c)
                .collect(),
        )
    }

    pub fn scale(&self, k: f64) -> Polynomial {
        Polynomial::new(self.0.iter().map(|&c| c * k).collect())
    }

    /// Sign of p(v) for v approaching 0 from the side of `side` (+1 or -1).
    /// Decided by the lowest-order nonzero coefficient, which dominates for
    /// arguments too small to evaluate in f64.
    pub fn sign_near_zero(&self, side: i8) -> i8 {
        for (k, &c) in self.0.iter().enumerate() {
            if c != 0.0 {
                let parity = if k % 2 == 0 { 1 } else { side };
                return sign_of(c) * parity;
            }
        }
        0
    }

    fn trim(&mut self) {
        while self.0.last() == Some(&0.0) {
            self.0.pop();
        }
    }
}

pub(crate) fn sign_of(v: f64) -> i8 {
    if v > 0.0 {
        1
    } else if v < 0.0 {
        -1
    } else {
        0
    }
}

/// Bivariate polynomial in (s, c); `coeffs[i][j]` multiplies s^i c^j.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Poly2(pub Vec<Vec<f64>>);

impl Poly2 {
    pub fn new(coeffs: Vec<Vec<f64>>) -> Self {
        let mut p = Poly2(coeffs);
        p.trim();
        p
    }

    pub fn constant(v: f64) -> Self {
        Poly2(vec![vec![v]])
    }

    /// s^i c^j monomial.
    pub fn monomial(i: usize, j: usize, v: f64) -> Self {
        let mut rows = vec![vec![0.0; j + 1]; i + 1];
        rows[i][j] = v;
        Poly2(rows)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|row| row.iter().all(|&c| c == 0.0))
    }

    pub fn eval(&self, s: f64, c: f64) -> f64 {
        let mut acc = 0.0;
        let mut si = 1.0;
        for row in &self.0 {
            let mut rc = 0.0;
            for &coef in row.iter().rev() {
                rc = rc * c + coef;
            }
            acc += si * rc;
            si *= s;
        }
        acc
    }

    pub fn add(&self, other: &Poly2) -> Poly2 {
        let rows = self.0.len().max(other.0.len());
        let mut out = Vec::with_capacity(rows);
        for i in 0..rows {
            let a = self.0.get(i).map(|r| r.as_slice()).unwrap_or(&[]);
            let b = other.0.get(i).map(|r| r.as_slice()).unwrap_or(&[]);
            let cols = a.len().max(b.len());
            let mut row = vec![0.0; cols];
            for (j, slot) in row.iter_mut().enumerate() {
                *slot = a.get(j).copied().unwrap_or(0.0) + b.get(j).copied().unwrap_or(0.0);
            }
            out.push(row);
        }
        Poly2::new(out)
    }

    pub fn scale(&self, k: f64) -> Poly2 {
        Poly2::new(
            self.0
                .iter()
                .map(|row| row.iter().map(|&c| c * k).collect())
                .collect(),
        )
    }

    /// Multiply by s (raises every s-degree by one).
    pub fn mul_s(&self) -> Poly2 {
        let mut rows = vec![vec![]];
        rows.extend(self.0.iter().cloned());
        Poly2::new(rows)
    }

    /// Multiply by c (raises every c-degree by one).
    pub fn mul_c(&self) -> Poly2 {
        Poly2::new(
            self.0
                .iter()
                .map(|row| {
                    let mut r = vec![0.0];
                    r.extend(row.iter().cloned());
                    r
                })
                .collect(),
        )
    }

    pub fn partial_s(&self) -> Poly2 {
        if self.0.len() <= 1 {
            return Poly2::constant(0.0);
        }
        Poly2::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, row)| row.iter().map(|&c| c * i as f64).collect())
                .collect(),
        )
    }

    pub fn partial_c(&self) -> Poly2 {
        Poly2::new(
            self.0
                .iter()
                .map(|row| {
                    if row.len() <= 1 {
                        vec![]
                    } else {
                        row.iter()
                            .enumerate()
                            .skip(1)
                            .map(|(j, &c)| c * j as f64)
                            .collect()
                    }
                })
                .collect(),
        )
    }

    /// s*dT/dc - c*dT/ds: the derivative of T(sin u, cos u) in -u direction.
    /// Preserves total degree.
    pub fn rotational_derivative(&self) -> Poly2 {
        self.partial_c().mul_s().add(&self.partial_s().mul_c().scale(-1.0))
    }

    fn trim(&mut self) {
        for row in &mut self.0 {
            while row.last() == Some(&0.0) {
                row.pop();
            }
        }
        while self.0.last().map(|r| r.is_empty()) == Some(true) {
            self.0.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn horner_eval_matches_naive() {
        let p = Polynomial::new(vec![1.0, -2.0, 3.0]);
        assert_eq!(p.eval(2.0), 1.0 - 4.0 + 12.0);
        assert_eq!(p.derivative().0, vec![-2.0, 6.0]);
    }

    #[test]
    fn sign_near_zero_uses_lowest_coefficient() {
        // p(v) = v*(R0 - v): sign near 0+ is +, near 0- is -.
        let p = Polynomial::new(vec![0.0, 1.0, -1.0]);
        assert_eq!(p.sign_near_zero(1), 1);
        assert_eq!(p.sign_near_zero(-1), -1);
        // even lowest power keeps the coefficient sign on both sides
        let q = Polynomial::new(vec![0.0, 0.0, -3.0]);
        assert_eq!(q.sign_near_zero(1), -1);
        assert_eq!(q.sign_near_zero(-1), -1);
    }

    #[test]
    fn poly2_eval_and_rotation() {
        // T = s^2
        let t = Poly2::monomial(2, 0, 1.0);
        let (s, c) = (0.6, 0.8);
        assert!((t.eval(s, c) - 0.36).abs() < 1e-15);
        // s*dT/dc - c*dT/ds = -2sc, which is d/d(-u) sin^2 u = ... sign checked by eval
        let r = t.rotational_derivative();
        assert!((r.eval(s, c) + 2.0 * s * c).abs() < 1e-15);
    }
}
