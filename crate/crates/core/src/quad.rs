//! One-dimensional quadrature building blocks: an adaptive Gauss–Kronrod
//! integrator for the 1D weights and composite Gauss–Legendre panel rules for
//! the tensor-product entropy integrals.

use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;

// Kronrod abscissae and weights of the 15-point rule; the odd entries are the
// 7-point Gauss nodes.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

const MAX_DEPTH: u32 = 48;

/// Single 15-point Kronrod estimate with the embedded 7-point Gauss error
/// estimate.
pub fn gauss_kronrod_15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for k in 0..7 {
        let dx = half * XGK[k];
        let pair = f(center - dx) + f(center + dx);
        kronrod += WGK[k] * pair;
        if k % 2 == 1 {
            gauss += WG[k / 2] * pair;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

/// Adaptive bisection on Gauss–Kronrod panels until each panel's error
/// estimate is below its share of `abs_tol`.
pub fn integrate_adaptive<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, abs_tol: f64) -> f64 {
    fn recurse<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
        let (value, err) = gauss_kronrod_15(f, a, b);
        if err <= tol || depth >= MAX_DEPTH {
            return value;
        }
        let mid = 0.5 * (a + b);
        recurse(f, a, mid, 0.5 * tol, depth + 1) + recurse(f, mid, b, 0.5 * tol, depth + 1)
    }
    if a == b {
        return 0.0;
    }
    recurse(f, a, b, abs_tol, 0)
}

/// Composite Gauss–Legendre rule on `[a, b]` split into equal panels.
#[derive(Debug, Clone)]
pub struct PanelRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl PanelRule {
    pub fn new(a: f64, b: f64, panels: usize, order: usize) -> Self {
        let order = NonZeroUsize::new(order.max(1)).unwrap();
        let rule = GaussLegendre::new(order);
        let width = (b - a) / panels as f64;
        let mut nodes = Vec::with_capacity(panels * order.get());
        let mut weights = Vec::with_capacity(panels * order.get());
        for p in 0..panels {
            let lo = a + p as f64 * width;
            for &(x, w) in rule.as_node_weight_pairs() {
                nodes.push(lo + 0.5 * width * (x + 1.0));
                weights.push(0.5 * width * w);
            }
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kronrod_is_exact_on_polynomials() {
        let (v, err) = gauss_kronrod_15(&|x: f64| x.powi(12) - 3.0 * x.powi(5), -1.0, 2.0);
        let exact = (2f64.powi(13) + 1.0) / 13.0 - 3.0 * (64.0 - 1.0) / 6.0;
        assert!((v - exact).abs() < 1e-10 * exact.abs());
        assert!(err < 1e-6);
    }

    #[test]
    fn adaptive_gaussian() {
        let v = integrate_adaptive(&|x: f64| (-x * x).exp(), -10.0, 10.0, 1e-13);
        assert!((v - std::f64::consts::PI.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn adaptive_handles_kink() {
        let v = integrate_adaptive(&|x: f64| x.abs().sqrt(), -1.0, 1.0, 1e-12);
        assert!((v - 4.0 / 3.0).abs() < 1e-10);
    }

    #[test]
    fn panel_rule_weights_sum_to_length() {
        let rule = PanelRule::new(-3.0, 5.0, 17, 6);
        assert_eq!(rule.len(), 17 * 6);
        let total: f64 = rule.weights.iter().sum();
        assert!((total - 8.0).abs() < 1e-12);
        assert!((rule.integrate(|x| x * x) - (125.0 + 27.0) / 3.0).abs() < 1e-10);
    }
}
