//! Physicists' Hermite polynomials and the one-dimensional oscillator
//! eigenfunctions built from them.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::quad::integrate_adaptive;

/// Largest order the integer coefficient table can hold without overflow.
pub const MAX_TABLE_ORDER: usize = 20;

/// Dimensionless cutoff for the outer intervals of the 1D weights.
const TAIL_CUTOFF: f64 = 10.0;
const WEIGHT_ABS_TOL: f64 = 1e-12;

/// Monomial coefficients of `H_0 ..= H_max_order`, built row by row from the
/// three-term recurrence. `row(n)[k]` multiplies `z^k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HermiteTable {
    max_order: usize,
    rows: Vec<Vec<i64>>,
}

impl HermiteTable {
    pub fn new(max_order: usize) -> Self {
        assert!(
            max_order <= MAX_TABLE_ORDER,
            "Hermite table limited to order {MAX_TABLE_ORDER}"
        );
        let mut rows: Vec<Vec<i64>> = Vec::with_capacity(max_order + 1);
        rows.push(vec![1]);
        if max_order >= 1 {
            rows.push(vec![0, 2]);
        }
        for n in 1..max_order {
            // H_{n+1} = 2z H_n - 2n H_{n-1}
            let mut next = vec![0i64; n + 2];
            for (k, &c) in rows[n].iter().enumerate() {
                next[k + 1] += 2 * c;
            }
            for (k, &c) in rows[n - 1].iter().enumerate() {
                next[k] -= 2 * n as i64 * c;
            }
            rows.push(next);
        }
        Self { max_order, rows }
    }

    pub fn max_order(&self) -> usize {
        self.max_order
    }

    pub fn row(&self, n: usize) -> &[i64] {
        &self.rows[n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[i64]> {
        self.rows.iter().map(Vec::as_slice)
    }
}

/// `H_n(z)` by upward recurrence.
pub fn hermite_eval(n: usize, z: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 2.0 * z;
    for k in 1..n {
        let next = 2.0 * z * cur - 2.0 * k as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `(H_n(z), H_n'(z))`, using `H_n' = 2n H_{n-1}`.
pub fn hermite_eval_with_derivative(n: usize, z: f64) -> (f64, f64) {
    if n == 0 {
        return (1.0, 0.0);
    }
    let mut prev = 1.0;
    let mut cur = 2.0 * z;
    for k in 1..n {
        let next = 2.0 * z * cur - 2.0 * k as f64 * prev;
        prev = cur;
        cur = next;
    }
    (cur, 2.0 * n as f64 * prev)
}

/// Zeros of `H_n`, strictly increasing.
///
/// Eigenvalues of the symmetric Jacobi matrix of the monic recurrence, each
/// polished with two Newton steps and then symmetrized about the origin.
pub fn hermite_zeros(n: usize) -> Vec<f64> {
    if n == 0 {
        return Vec::new();
    }
    let jacobi = DMatrix::from_fn(n, n, |i, j| {
        if i + 1 == j || j + 1 == i {
            (i.max(j) as f64 / 2.0).sqrt()
        } else {
            0.0
        }
    });
    let mut zeros: Vec<f64> = SymmetricEigen::new(jacobi).eigenvalues.iter().copied().collect();
    for z in zeros.iter_mut() {
        for _ in 0..2 {
            let (h, dh) = hermite_eval_with_derivative(n, *z);
            if dh != 0.0 {
                *z -= h / dh;
            }
        }
    }
    zeros.sort_by(f64::total_cmp);
    for k in 0..n / 2 {
        let m = 0.5 * (zeros[n - 1 - k] - zeros[k]);
        zeros[k] = -m;
        zeros[n - 1 - k] = m;
    }
    if n % 2 == 1 {
        zeros[n / 2] = 0.0;
    }
    zeros
}

/// `1 / sqrt(2^n n! sqrt(pi))`, the normalization of `H_n(z) e^{-z^2/2}` in
/// dimensionless units.
pub fn dimensionless_norm(n: usize) -> f64 {
    let mut c = std::f64::consts::PI.powf(-0.25);
    for k in 1..=n {
        c /= (2.0 * k as f64).sqrt();
    }
    c
}

/// Normalized 1D oscillator eigenfunction `phi_n(x)` for `alpha = m omega / hbar`.
pub fn phi_eval(n: usize, x: f64, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::InvalidAlpha(alpha));
    }
    let z = alpha.sqrt() * x;
    Ok(alpha.powf(0.25) * dimensionless_norm(n) * hermite_eval(n, z) * (-0.5 * z * z).exp())
}

fn density_1d(n: usize, z: f64) -> f64 {
    let c = dimensionless_norm(n);
    let v = c * hermite_eval(n, z);
    v * v * (-z * z).exp()
}

/// Probabilities of `|phi_n|^2` on the `n + 1` intervals cut out by the zeros
/// of `H_n`. The list is symmetric and sums to one.
pub fn domain_weights_1d(n: usize) -> Vec<f64> {
    let mut cuts = Vec::with_capacity(n + 2);
    cuts.push(-TAIL_CUTOFF);
    cuts.extend(hermite_zeros(n));
    cuts.push(TAIL_CUTOFF);
    let mut weights: Vec<f64> = cuts
        .windows(2)
        .map(|w| integrate_adaptive(&|z| density_1d(n, z), w[0], w[1], WEIGHT_ABS_TOL))
        .collect();
    let len = weights.len();
    for k in 0..len / 2 {
        let m = 0.5 * (weights[k] + weights[len - 1 - k]);
        weights[k] = m;
        weights[len - 1 - k] = m;
    }
    weights
}

/// Shannon entropy of [`domain_weights_1d`].
pub fn sdom_1d(n: usize) -> f64 {
    shannon_of_weights(&domain_weights_1d(n))
}

/// `-sum p ln p`, skipping zero entries.
pub fn shannon_of_weights(weights: &[f64]) -> f64 {
    weights.iter().filter(|&&p| p > 0.0).map(|&p| -p * p.ln()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{LN_2, PI};

    #[test]
    fn table_rows_match_closed_forms() {
        let t = HermiteTable::new(4);
        assert_eq!(t.row(0), &[1]);
        assert_eq!(t.row(1), &[0, 2]);
        assert_eq!(t.row(2), &[-2, 0, 4]);
        assert_eq!(t.row(3), &[0, -12, 0, 8]);
        assert_eq!(t.row(4), &[12, 0, -48, 0, 16]);
    }

    #[test]
    fn table_parity_and_degree() {
        let t = HermiteTable::new(MAX_TABLE_ORDER);
        for (n, row) in t.rows().enumerate() {
            assert_eq!(row.len(), n + 1);
            assert_ne!(row[n], 0);
            for (k, &c) in row.iter().enumerate() {
                if (k + n) % 2 == 1 {
                    assert_eq!(c, 0, "H_{n} has a wrong-parity term z^{k}");
                }
            }
        }
    }

    #[test]
    fn eval_examples() {
        assert_eq!(hermite_eval(2, 1.0), 2.0);
        assert_eq!(hermite_eval(0, 7.3), 1.0);
        assert_eq!(hermite_eval(4, 0.0), 12.0);
    }

    #[test]
    fn eval_agrees_with_table() {
        let t = HermiteTable::new(12);
        for n in 0..=12 {
            for &z in &[-2.3, -0.4, 0.0, 0.9, 1.7] {
                let mono: f64 = t
                    .row(n)
                    .iter()
                    .enumerate()
                    .map(|(k, &c)| c as f64 * f64::powi(z, k as i32))
                    .sum();
                let rec = hermite_eval(n, z);
                assert!((mono - rec).abs() <= 1e-9 * (1.0 + rec.abs()), "n={n} z={z}");
            }
        }
    }

    #[test]
    fn zeros_small_orders() {
        assert_eq!(hermite_zeros(1), vec![0.0]);
        let z2 = hermite_zeros(2);
        assert!((z2[1] - 1.0 / 2f64.sqrt()).abs() < 1e-14);
        assert_eq!(z2[0], -z2[1]);
        let z3 = hermite_zeros(3);
        assert!((z3[2] - 1.5f64.sqrt()).abs() < 1e-14);
        assert_eq!(z3[1], 0.0);
    }

    #[test]
    fn zeros_are_polished_and_increasing() {
        for n in 1..=12 {
            let zs = hermite_zeros(n);
            assert_eq!(zs.len(), n);
            for w in zs.windows(2) {
                assert!(w[0] < w[1]);
            }
            for &z in &zs {
                // scale by the polynomial's size near the zero
                let (_, dh) = hermite_eval_with_derivative(n, z);
                assert!(hermite_eval(n, z).abs() < 1e-12 * dh.abs().max(1.0), "n={n} z={z}");
            }
        }
    }

    #[test]
    fn phi_examples() {
        assert!((phi_eval(0, 0.0, 1.0).unwrap() - PI.powf(-0.25)).abs() < 1e-15);
        assert_eq!(phi_eval(1, 0.0, 1.0).unwrap(), 0.0);
        // numerically normalized (4x^2 - 2) e^{-x^2/2} at x = 1, scipy quad
        assert!((phi_eval(2, 1.0, 1.0).unwrap() - 0.322_144_182_556_738).abs() < 1e-13);
        assert!(matches!(phi_eval(0, 0.0, 0.0), Err(Error::InvalidAlpha(_))));
        assert!(phi_eval(0, 0.0, -1.0).is_err());
    }

    #[test]
    fn weights_examples() {
        let w0 = domain_weights_1d(0);
        assert_eq!(w0.len(), 1);
        assert!((w0[0] - 1.0).abs() < 1e-12);
        let w1 = domain_weights_1d(1);
        assert!((w1[0] - 0.5).abs() < 1e-12 && (w1[1] - 0.5).abs() < 1e-12);
        assert!((sdom_1d(0)).abs() < 1e-12);
        assert!((sdom_1d(1) - LN_2).abs() < 1e-12);
    }

    #[test]
    fn weights_sum_to_one_and_are_symmetric() {
        for n in 0..=8 {
            let w = domain_weights_1d(n);
            assert_eq!(w.len(), n + 1);
            assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-10, "n={n}");
            for j in 0..w.len() {
                assert_eq!(w[j], w[n - j]);
            }
        }
    }
}
