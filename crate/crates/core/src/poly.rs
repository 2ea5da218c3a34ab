//! Dense real bivariate polynomials in triangular monomial storage.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative threshold under which a monomial coefficient counts as zero when
/// determining the actual total degree.
pub const DEGREE_DROP_REL: f64 = 1e-12;

/// Coefficients of `x^i y^j` for `i + j <= degree_bound`.
///
/// Storage is grouped by total degree `d = i + j`, with `j` increasing inside a
/// group, so `index(i, j) = d (d + 1) / 2 + j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BivariatePoly {
    degree_bound: usize,
    coeffs: Vec<f64>,
}

#[inline]
fn index(i: usize, j: usize) -> usize {
    let d = i + j;
    d * (d + 1) / 2 + j
}

#[inline]
fn len_for(degree: usize) -> usize {
    (degree + 1) * (degree + 2) / 2
}

impl BivariatePoly {
    pub fn zero(degree_bound: usize) -> Self {
        Self {
            degree_bound,
            coeffs: vec![0.0; len_for(degree_bound)],
        }
    }

    /// Builds from `(i, j, coefficient)` terms; repeated exponents accumulate.
    /// The bound is trimmed to the actual total degree.
    pub fn from_terms<I: IntoIterator<Item = (usize, usize, f64)>>(terms: I) -> Self {
        let terms: Vec<_> = terms.into_iter().collect();
        let bound = terms.iter().map(|&(i, j, _)| i + j).max().unwrap_or(0);
        let mut p = Self::zero(bound);
        for (i, j, c) in terms {
            p.coeffs[index(i, j)] += c;
        }
        p.trimmed()
    }

    pub fn degree_bound(&self) -> usize {
        self.degree_bound
    }

    pub fn coeff(&self, i: usize, j: usize) -> f64 {
        if i + j > self.degree_bound {
            0.0
        } else {
            self.coeffs[index(i, j)]
        }
    }

    pub(crate) fn add_to(&mut self, i: usize, j: usize, value: f64) {
        assert!(i + j <= self.degree_bound);
        self.coeffs[index(i, j)] += value;
    }

    /// Nonzero terms as `(i, j, coefficient)`, grouped by total degree.
    pub fn terms(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..=self.degree_bound)
            .flat_map(|d| (0..=d).map(move |j| (d - j, j)))
            .map(|(i, j)| (i, j, self.coeffs[index(i, j)]))
            .filter(|&(_, _, c)| c != 0.0)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0.0)
    }

    /// Highest total degree carrying a coefficient above
    /// [`DEGREE_DROP_REL`] times the largest coefficient.
    pub fn total_degree(&self) -> Option<usize> {
        let scale = self.max_abs_coeff();
        if scale == 0.0 {
            return None;
        }
        (0..=self.degree_bound)
            .rev()
            .find(|&d| (0..=d).any(|j| self.coeffs[index(d - j, j)].abs() >= DEGREE_DROP_REL * scale))
    }

    /// Drops negligible top-degree groups so that the bound equals the actual
    /// degree. Zero polynomials keep bound 0.
    pub fn trimmed(mut self) -> Self {
        let degree = self.total_degree().unwrap_or(0);
        if degree < self.degree_bound {
            self.coeffs.truncate(len_for(degree));
            self.degree_bound = degree;
        }
        self
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        // Horner in x over each power of y
        let mut acc = 0.0;
        for j in (0..=self.degree_bound).rev() {
            let mut row = 0.0;
            for i in (0..=self.degree_bound - j).rev() {
                row = row * x + self.coeffs[index(i, j)];
            }
            acc = acc * y + row;
        }
        acc
    }

    /// Value and analytic gradient.
    pub fn eval_with_gradient(&self, x: f64, y: f64) -> (f64, [f64; 2]) {
        let mut v = 0.0;
        let mut gx = 0.0;
        let mut gy = 0.0;
        let mut yp = 1.0; // y^j
        let mut yp_m1 = 0.0; // j y^{j-1}
        for j in 0..=self.degree_bound {
            let mut xp = 1.0;
            let mut xp_m1 = 0.0;
            for i in 0..=self.degree_bound - j {
                let c = self.coeffs[index(i, j)];
                if c != 0.0 {
                    v += c * xp * yp;
                    gx += c * xp_m1 * yp;
                    gy += c * xp * yp_m1;
                }
                xp_m1 = (i + 1) as f64 * xp;
                xp *= x;
            }
            yp_m1 = (j + 1) as f64 * yp;
            yp *= y;
        }
        (v, [gx, gy])
    }

    /// Coefficients in `x` of `p(x, y)` at fixed `y`, lowest power first.
    pub fn restrict_y(&self, y: f64) -> Vec<f64> {
        let mut out = vec![0.0; self.degree_bound + 1];
        let mut yp = 1.0;
        for j in 0..=self.degree_bound {
            for (i, slot) in out.iter_mut().enumerate().take(self.degree_bound - j + 1) {
                *slot += self.coeffs[index(i, j)] * yp;
            }
            yp *= y;
        }
        out
    }

    pub fn partial_x(&self) -> Self {
        let bound = self.degree_bound.saturating_sub(1);
        let mut out = Self::zero(bound);
        for (i, j, c) in self.terms() {
            if i > 0 {
                out.coeffs[index(i - 1, j)] += c * i as f64;
            }
        }
        out
    }

    pub fn partial_y(&self) -> Self {
        let bound = self.degree_bound.saturating_sub(1);
        let mut out = Self::zero(bound);
        for (i, j, c) in self.terms() {
            if j > 0 {
                out.coeffs[index(i, j - 1)] += c * j as f64;
            }
        }
        out
    }

    pub fn laplacian(&self) -> Self {
        let bound = self.degree_bound.saturating_sub(2);
        let mut out = Self::zero(bound);
        for (i, j, c) in self.terms() {
            if i > 1 {
                out.coeffs[index(i - 2, j)] += c * (i * (i - 1)) as f64;
            }
            if j > 1 {
                out.coeffs[index(i, j - 2)] += c * (j * (j - 1)) as f64;
            }
        }
        out
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            degree_bound: self.degree_bound,
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let bound = self.degree_bound.max(other.degree_bound);
        let mut out = Self::zero(bound);
        for (i, j, c) in self.terms().chain(other.terms()) {
            out.coeffs[index(i, j)] += c;
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.degree_bound + other.degree_bound);
        for (i, j, a) in self.terms() {
            for (k, l, b) in other.terms() {
                out.coeffs[index(i + k, j + l)] += a * b;
            }
        }
        out
    }

    /// `p(sx * x, sy * y)`.
    pub fn rescale_args(&self, sx: f64, sy: f64) -> Self {
        let mut out = self.clone();
        for (i, j, c) in self.terms() {
            out.coeffs[index(i, j)] = c * sx.powi(i as i32) * sy.powi(j as i32);
        }
        out
    }

    /// Component of exact total degree `d`.
    pub fn homogeneous_part(&self, d: usize) -> Self {
        let mut out = Self::zero(d);
        if d <= self.degree_bound {
            for j in 0..=d {
                out.coeffs[index(d - j, j)] = self.coeffs[index(d - j, j)];
            }
        }
        out
    }

    /// True when every nonzero coefficient sits in a single total degree.
    pub fn is_homogeneous(&self) -> bool {
        let mut degrees = self.terms().map(|(i, j, _)| i + j);
        match degrees.next() {
            None => true,
            Some(d) => degrees.all(|e| e == d),
        }
    }

    /// `(-1)^d p(-x, -y) == p` for every term of degree `d` with matching parity.
    pub fn parity_defect(&self, parity: usize) -> f64 {
        self.terms()
            .filter(|&(i, j, _)| (i + j) % 2 != parity % 2)
            .fold(0.0, |m, (_, _, c)| m.max(c.abs()))
    }

    /// `integral of exp(-alpha (x^2 + y^2)) p(x, y) q(x, y)` over the plane,
    /// evaluated from the Gaussian monomial moment table.
    pub fn gaussian_inner(&self, other: &Self, alpha: f64) -> f64 {
        let moments = GaussianMoments::new(self.degree_bound + other.degree_bound, alpha);
        let mut total = 0.0;
        for (i, j, a) in self.terms() {
            for (k, l, b) in other.terms() {
                total += a * b * moments.get(i + k) * moments.get(j + l);
            }
        }
        total
    }

    /// `integral of exp(-alpha r^2) x^a y^b p(x, y)`.
    pub fn gaussian_moment(&self, a: usize, b: usize, alpha: f64) -> f64 {
        let moments = GaussianMoments::new(self.degree_bound + a.max(b), alpha);
        self.terms()
            .map(|(i, j, c)| c * moments.get(i + a) * moments.get(j + b))
            .sum()
    }
}

/// `m_k = integral of x^k exp(-alpha x^2) dx`: zero for odd `k`, and
/// `sqrt(pi / alpha) (k - 1)!! / (2 alpha)^{k/2}` for even `k`.
#[derive(Debug, Clone)]
pub struct GaussianMoments {
    values: Vec<f64>,
}

impl GaussianMoments {
    pub fn new(max_k: usize, alpha: f64) -> Self {
        let mut values = vec![0.0; max_k + 1];
        values[0] = (std::f64::consts::PI / alpha).sqrt();
        let mut k = 2;
        while k <= max_k {
            values[k] = values[k - 2] * (k - 1) as f64 / (2.0 * alpha);
            k += 2;
        }
        Self { values }
    }

    pub fn get(&self, k: usize) -> f64 {
        self.values[k]
    }
}

/// Rejects zero polynomials.
pub(crate) fn nonzero(p: &BivariatePoly) -> Result<()> {
    if p.is_zero() {
        Err(Error::ZeroPolynomial)
    } else {
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn cubic() -> BivariatePoly {
        BivariatePoly::from_terms([
            (3, 0, 1.5),
            (2, 1, -0.7),
            (1, 2, 0.3),
            (0, 3, 2.0),
            (1, 0, -1.1),
            (0, 1, 0.4),
            (0, 0, 0.25),
        ])
    }

    #[test]
    fn eval_matches_terms() {
        let p = cubic();
        let (x, y): (f64, f64) = (0.7, -1.3);
        let direct: f64 = p.terms().map(|(i, j, c)| c * x.powi(i as i32) * y.powi(j as i32)).sum();
        assert!((p.eval(x, y) - direct).abs() < 1e-13);
        assert!((p.eval_with_gradient(x, y).0 - direct).abs() < 1e-13);
        let row = p.restrict_y(y);
        let horner = row.iter().rev().fold(0.0, |acc, c| acc * x + c);
        assert!((horner - direct).abs() < 1e-13);
    }

    #[test]
    fn gradient_matches_partials() {
        let p = cubic();
        let (x, y) = (-0.4, 2.1);
        let (_, g) = p.eval_with_gradient(x, y);
        assert!((g[0] - p.partial_x().eval(x, y)).abs() < 1e-12);
        assert!((g[1] - p.partial_y().eval(x, y)).abs() < 1e-12);
    }

    #[test]
    fn trimming_and_degree() {
        let p = BivariatePoly::from_terms([(2, 0, 1e-20), (1, 0, 1.0)]);
        assert_eq!(p.degree_bound(), 1);
        assert_eq!(p.total_degree(), Some(1));
        assert_eq!(BivariatePoly::zero(3).total_degree(), None);
    }

    #[test]
    fn homogeneity() {
        let p = cubic();
        assert!(!p.is_homogeneous());
        assert!(p.homogeneous_part(3).is_homogeneous());
        assert_eq!(p.homogeneous_part(3).coeff(1, 2), 0.3);
        assert_eq!(p.homogeneous_part(3).coeff(1, 0), 0.0);
    }

    #[test]
    fn moments() {
        let m = GaussianMoments::new(6, 1.0);
        assert!((m.get(0) - PI.sqrt()).abs() < 1e-15);
        assert!((m.get(2) - PI.sqrt() / 2.0).abs() < 1e-15);
        assert!((m.get(4) - 3.0 * PI.sqrt() / 4.0).abs() < 1e-15);
        assert_eq!(m.get(3), 0.0);
        let x = BivariatePoly::from_terms([(1, 0, 1.0)]);
        assert!((x.gaussian_inner(&x, 1.0) - PI / 2.0).abs() < 1e-14);
    }

    proptest! {
        #[test]
        fn product_evaluates_as_product(
            a in prop::collection::vec(-3.0f64..3.0, 10),
            b in prop::collection::vec(-3.0f64..3.0, 6),
            x in -2.0f64..2.0, y in -2.0f64..2.0,
        ) {
            let p = BivariatePoly { degree_bound: 3, coeffs: a };
            let q = BivariatePoly { degree_bound: 2, coeffs: b };
            let lhs = p.mul(&q).eval(x, y);
            let rhs = p.eval(x, y) * q.eval(x, y);
            prop_assert!((lhs - rhs).abs() <= 1e-10 * (1.0 + rhs.abs()));
        }

        #[test]
        fn laplacian_matches_second_partials(
            a in prop::collection::vec(-3.0f64..3.0, 15),
            x in -2.0f64..2.0, y in -2.0f64..2.0,
        ) {
            let p = BivariatePoly { degree_bound: 4, coeffs: a };
            let lap = p.partial_x().partial_x().add(&p.partial_y().partial_y());
            prop_assert!((p.laplacian().eval(x, y) - lap.eval(x, y)).abs() < 1e-9);
        }
    }
}
