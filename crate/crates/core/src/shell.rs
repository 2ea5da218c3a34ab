//! Fixed-shell states of the 2D isotropic oscillator and their
//! Gaussian–polynomial form `psi = exp(-alpha r^2 / 2) P_N(x, y)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hermite1d::{dimensionless_norm, HermiteTable};
use crate::poly::nonzero;
pub use crate::poly::BivariatePoly;

/// Largest supported shell index.
pub const MAX_SHELL: usize = 12;

/// Tolerance on `sum c_n^2 = 1` for a state built with [`ShellState::new`].
pub const NORMALIZATION_TOL: f64 = 1e-12;

/// A real state in shell `N`: `psi = sum_n c_n phi_n(x) phi_{N-n}(y)`.
///
/// `coeffs[n]` is the amplitude of `Phi_{n, N-n}`, i.e. `n` quanta along `x`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShellState {
    shell: usize,
    coeffs: Vec<f64>,
    alpha: f64,
}

impl ShellState {
    /// Validates an already normalized coefficient vector.
    pub fn new(shell: usize, coeffs: Vec<f64>, alpha: f64) -> Result<Self> {
        let norm_sq = Self::validate(shell, &coeffs, alpha)?;
        if (norm_sq - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::NotNormalized(norm_sq));
        }
        Ok(Self { shell, coeffs, alpha })
    }

    /// Rescales `coeffs` to unit norm. Returns the state together with the
    /// original `sum c_n^2`.
    pub fn normalized(shell: usize, coeffs: Vec<f64>, alpha: f64) -> Result<(Self, f64)> {
        let norm_sq = Self::validate(shell, &coeffs, alpha)?;
        let inv = norm_sq.sqrt().recip();
        let state = Self {
            shell,
            coeffs: coeffs.into_iter().map(|c| c * inv).collect(),
            alpha,
        };
        Ok((state, norm_sq))
    }

    /// The product state `Phi_{n, N-n}`.
    pub fn basis(shell: usize, n: usize, alpha: f64) -> Result<Self> {
        let mut coeffs = vec![0.0; shell + 1];
        if n > shell {
            return Err(Error::CoefficientCount {
                shell,
                expected: shell + 1,
                got: n + 1,
            });
        }
        coeffs[n] = 1.0;
        Self::new(shell, coeffs, alpha)
    }

    fn validate(shell: usize, coeffs: &[f64], alpha: f64) -> Result<f64> {
        if shell > MAX_SHELL {
            return Err(Error::ShellTooLarge(shell));
        }
        if coeffs.len() != shell + 1 {
            return Err(Error::CoefficientCount {
                shell,
                expected: shell + 1,
                got: coeffs.len(),
            });
        }
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::InvalidAlpha(alpha));
        }
        let norm_sq: f64 = coeffs.iter().map(|c| c * c).sum();
        if !(norm_sq > 0.0 && norm_sq.is_finite()) {
            return Err(Error::ZeroState);
        }
        Ok(norm_sq)
    }

    pub fn shell(&self) -> usize {
        self.shell
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// `E_N / (hbar omega) = N + 1`.
    pub fn energy(&self) -> f64 {
        (self.shell + 1) as f64
    }

    /// `(n_x, n_y)` of each basis component, in coefficient order.
    pub fn quantum_numbers(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..=self.shell).map(move |n| (n, self.shell - n))
    }

    /// When the state is a single product state `Phi_{n, N-n}`, returns `n`.
    pub fn separable_index(&self) -> Option<usize> {
        let mut nonzero = self.coeffs.iter().enumerate().filter(|(_, c)| c.abs() > 1e-14);
        let (n, _) = nonzero.next()?;
        nonzero.next().is_none().then_some(n)
    }
}

fn hermite_product_poly(shell: usize, coeffs: &[f64], scale: impl Fn(usize) -> f64) -> BivariatePoly {
    let table = HermiteTable::new(shell);
    let mut out = BivariatePoly::zero(shell);
    for (n, &c) in coeffs.iter().enumerate() {
        if c == 0.0 {
            continue;
        }
        let weight = c * scale(n);
        for (i, &hx) in table.row(n).iter().enumerate() {
            if hx == 0 {
                continue;
            }
            for (j, &hy) in table.row(shell - n).iter().enumerate() {
                if hy != 0 {
                    out.add_to(i, j, weight * (hx * hy) as f64);
                }
            }
        }
    }
    out
}

fn sqrt_binomial(n: usize, k: usize) -> f64 {
    let mut b = 1.0;
    for i in 0..k {
        b = b * (n - i) as f64 / (i + 1) as f64;
    }
    b.sqrt()
}

/// `Q_N(xi, eta) = sum_n c_n sqrt(binom(N, n)) H_n(xi) H_{N-n}(eta)` at its
/// natural Hermite scale, in `xi = sqrt(alpha) x`, `eta = sqrt(alpha) y`.
pub fn build_dimensionless_poly(state: &ShellState) -> BivariatePoly {
    let n_shell = state.shell;
    hermite_product_poly(n_shell, &state.coeffs, |n| sqrt_binomial(n_shell, n)).trimmed()
}

/// `P_N(x, y)` in physical coordinates with every 1D normalization constant
/// included, so that `exp(-alpha r^2) P_N^2` integrates to one.
pub fn build_affine_poly(state: &ShellState) -> BivariatePoly {
    let n_shell = state.shell;
    let alpha = state.alpha;
    // phi_n(x) = alpha^{1/4} c_n H_n(sqrt(alpha) x) exp(-alpha x^2 / 2)
    let dimless = hermite_product_poly(n_shell, &state.coeffs, |n| {
        alpha.sqrt() * dimensionless_norm(n) * dimensionless_norm(n_shell - n)
    });
    let s = alpha.sqrt();
    dimless.rescale_args(s, s).trimmed()
}

/// Normalized position density, bound to one state so the polynomial is
/// built once.
#[derive(Debug, Clone)]
pub struct Density {
    poly: BivariatePoly,
    alpha: f64,
}

impl Density {
    pub fn new(state: &ShellState) -> Self {
        Self {
            poly: build_affine_poly(state),
            alpha: state.alpha,
        }
    }

    pub fn poly(&self) -> &BivariatePoly {
        &self.poly
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        let p = self.poly.eval(x, y);
        (-self.alpha * (x * x + y * y)).exp() * p * p
    }
}

/// `rho(x, y) = exp(-alpha (x^2 + y^2)) P_N(x, y)^2`.
pub fn density_eval(state: &ShellState, x: f64, y: f64) -> f64 {
    Density::new(state).eval(x, y)
}

/// Degree-`d` homogeneous component, `d` being the actual total degree.
pub fn top_homogeneous(poly: &BivariatePoly) -> Result<BivariatePoly> {
    nonzero(poly)?;
    let d = poly.total_degree().ok_or(Error::ZeroPolynomial)?;
    Ok(poly.homogeneous_part(d))
}

/// `f(theta) = top(cos theta, sin theta)`; its zeros on `[0, pi)` are the
/// asymptotic nodal directions.
pub fn angular_function(top: &BivariatePoly, theta: f64) -> Result<f64> {
    if !top.is_homogeneous() {
        return Err(Error::NotHomogeneous);
    }
    Ok(top.eval(theta.cos(), theta.sin()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermite1d::phi_eval;
    use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};

    fn n2(a: f64, b: f64, c: f64) -> ShellState {
        ShellState::normalized(2, vec![c, b, a], 1.0).unwrap().0
    }

    fn assert_proportional(p: &BivariatePoly, q: &BivariatePoly) {
        let (i0, j0, c0) = q.terms().max_by(|a, b| a.2.abs().total_cmp(&b.2.abs())).unwrap();
        let ratio = p.coeff(i0, j0) / c0;
        assert!(ratio.abs() > 0.0);
        for d in 0..=p.degree_bound().max(q.degree_bound()) {
            for j in 0..=d {
                let (a, b) = (p.coeff(d - j, j), ratio * q.coeff(d - j, j));
                assert!((a - b).abs() < 1e-12 * (1.0 + a.abs()), "({},{}) {a} vs {b}", d - j, j);
            }
        }
    }

    #[test]
    fn state_validation() {
        assert!(matches!(
            ShellState::new(2, vec![1.0, 0.0], 1.0),
            Err(Error::CoefficientCount { .. })
        ));
        assert!(matches!(ShellState::new(1, vec![0.0, 0.0], 1.0), Err(Error::ZeroState)));
        assert!(matches!(
            ShellState::new(1, vec![1.0, 1.0], 1.0),
            Err(Error::NotNormalized(_))
        ));
        assert!(ShellState::new(1, vec![0.6, 0.8], 0.0).is_err());
        assert!(ShellState::new(13, vec![0.0; 14], 1.0).is_err());
        let (s, n) = ShellState::normalized(1, vec![3.0, 4.0], 1.0).unwrap();
        assert_eq!(n, 25.0);
        assert!((s.coeffs()[0] - 0.6).abs() < 1e-15);
        assert_eq!(s.energy(), 2.0);
    }

    #[test]
    fn dimensionless_n2_structure() {
        let (a, b, c) = (0.3, -0.5, 0.8);
        let q = build_dimensionless_poly(&n2(a, b, c));
        let s = (a * a + b * b + c * c).sqrt();
        let (a, b, c) = (a / s, b / s, c / s);
        let expected = BivariatePoly::from_terms([
            (2, 0, SQRT_2 * a),
            (1, 1, 2.0 * b),
            (0, 2, SQRT_2 * c),
            (0, 0, -(a + c) / SQRT_2),
        ]);
        assert_proportional(&q, &expected);
        // natural scale: dividing by 2 sqrt 2 gives the compact form exactly
        assert!((q.coeff(2, 0) / (2.0 * SQRT_2) - SQRT_2 * a).abs() < 1e-14);
    }

    #[test]
    fn dimensionless_n1_and_phi22() {
        let s = ShellState::new(1, vec![0.6, 0.8], 1.0).unwrap();
        let q = build_dimensionless_poly(&s);
        assert_proportional(&q, &BivariatePoly::from_terms([(1, 0, 0.8), (0, 1, 0.6)]));
        let q4 = build_dimensionless_poly(&ShellState::basis(4, 2, 1.0).unwrap());
        let expected = BivariatePoly::from_terms([(2, 0, 2.0), (0, 0, -1.0)])
            .mul(&BivariatePoly::from_terms([(0, 2, 2.0), (0, 0, -1.0)]));
        assert_proportional(&q4, &expected);
    }

    #[test]
    fn affine_n2_matches_closed_form() {
        for &alpha in &[1.0, 2.5] {
            let (a, b, c) = (0.5, 0.5, FRAC_1_SQRT_2);
            let state = ShellState::new(2, vec![c, b, a], alpha).unwrap();
            let p = build_affine_poly(&state);
            // closed form has norm pi / alpha, ours is unit-normalized
            let k = (alpha / PI).sqrt();
            let expected = [
                (2, 0, SQRT_2 * alpha * a),
                (1, 1, 2.0 * alpha * b),
                (0, 2, SQRT_2 * alpha * c),
                (0, 0, -(a + c) / SQRT_2),
            ];
            for (i, j, v) in expected {
                assert!((p.coeff(i, j) - k * v).abs() < 1e-13, "alpha={alpha} ({i},{j})");
            }
        }
    }

    #[test]
    fn affine_n3_endpoint() {
        let s = ShellState::new(3, vec![0.0, 0.0, 1.0, 0.0], 1.7).unwrap();
        let p = build_affine_poly(&s);
        // y (2 alpha x^2 - 1)
        let expected = BivariatePoly::from_terms([(2, 1, 2.0 * 1.7), (0, 1, -1.0)]);
        assert_proportional(&p, &expected);
    }

    #[test]
    fn density_examples() {
        let s = ShellState::new(1, vec![0.0, 1.0], 1.0).unwrap();
        assert!((density_eval(&s, 1.0, 0.0) - 2.0 / PI * (-1.0f64).exp()).abs() < 1e-15);
        let circle = n2(0.5f64.sqrt(), 0.0, 0.5f64.sqrt());
        assert!(density_eval(&circle, 1.0, 0.0).abs() < 1e-30);
        assert!(density_eval(&circle, 0.6, 0.8).abs() < 1e-30);
    }

    #[test]
    fn density_matches_basis_sum() {
        let s = ShellState::normalized(4, vec![0.2, -0.7, 0.1, 0.5, 0.3], 1.3)
            .unwrap()
            .0;
        let d = Density::new(&s);
        for &(x, y) in &[(0.3, -0.2), (1.4, 0.9), (-2.0, 0.5)] {
            let psi: f64 = s
                .quantum_numbers()
                .zip(s.coeffs())
                .map(|((nx, ny), c)| c * phi_eval(nx, x, 1.3).unwrap() * phi_eval(ny, y, 1.3).unwrap())
                .sum();
            assert!((d.eval(x, y) - psi * psi).abs() < 1e-12 * (psi * psi).max(1e-300));
        }
    }

    #[test]
    fn top_and_angular() {
        let s = ShellState::new(1, vec![0.6, 0.8], 1.0).unwrap();
        let top = top_homogeneous(&build_dimensionless_poly(&s)).unwrap();
        let theta = f64::atan2(-0.8, 0.6);
        assert!(angular_function(&top, theta).unwrap().abs() < 1e-15);
        let p = build_dimensionless_poly(&n2(0.3, 0.4, 0.5));
        assert!(matches!(angular_function(&p, 0.1), Err(Error::NotHomogeneous)));
        let top = top_homogeneous(&p).unwrap();
        assert_eq!(top.coeff(0, 0), 0.0);
        assert!(top.coeff(2, 0) != 0.0);
        assert!(top_homogeneous(&BivariatePoly::zero(2)).is_err());
    }

    #[test]
    fn separable_index() {
        assert_eq!(ShellState::basis(3, 2, 1.0).unwrap().separable_index(), Some(2));
        assert_eq!(n2(0.5, 0.5, 0.5).separable_index(), None);
    }
}
