//! Nodal domains on a node grid: sign field, 4-connected components,
//! Gaussian-weighted domain probabilities and their Shannon entropy.
//!
//! Grids live in dimensionless coordinates `xi = sqrt(alpha) x`. The weight of
//! a component is the node-centred Riemann sum of the density over its nodes.

pub mod contour;

use petgraph::unionfind::UnionFind;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hermite1d::{domain_weights_1d, sdom_1d, shannon_of_weights};
use crate::poly::BivariatePoly;
use crate::quad::integrate_adaptive;
use crate::shell::{build_affine_poly, ShellState};

pub use contour::{contour_polylines, polylines_to_svg, polylines_to_text, Polyline};

pub const DEFAULT_HALF_WIDTH: f64 = 8.0;
pub const DEFAULT_SUBDIVISIONS: usize = 180;
pub const REFINED_SUBDIVISIONS: usize = 720;
pub const DEFAULT_SIGN_EPS: f64 = 1e-12;
/// Components lighter than this before normalization are discarded.
pub const MIN_COMPONENT_WEIGHT: f64 = 1e-14;

/// `(n + 1)^2` nodes at `-L + i * 2L / n` along each axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub half_width: f64,
    pub subdivisions: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            half_width: DEFAULT_HALF_WIDTH,
            subdivisions: DEFAULT_SUBDIVISIONS,
        }
    }
}

impl GridSpec {
    pub fn new(half_width: f64, subdivisions: usize) -> Result<Self> {
        let g = Self {
            half_width,
            subdivisions,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.half_width > 0.0 && self.half_width.is_finite()) {
            return Err(Error::InvalidGrid(format!(
                "half-width {} must be positive",
                self.half_width
            )));
        }
        if self.subdivisions < 16 {
            return Err(Error::InvalidGrid(format!(
                "need at least 16 subdivisions, got {}",
                self.subdivisions
            )));
        }
        Ok(())
    }

    pub fn cell(&self) -> f64 {
        2.0 * self.half_width / self.subdivisions as f64
    }

    /// Nodes per axis.
    pub fn side(&self) -> usize {
        self.subdivisions + 1
    }

    pub fn coord(&self, i: usize) -> f64 {
        -self.half_width + i as f64 * self.cell()
    }

    pub fn refined(&self) -> Self {
        Self {
            subdivisions: 2 * self.subdivisions,
            ..*self
        }
    }

    /// Twice the window at the same cell size.
    pub fn widened(&self) -> Self {
        Self {
            half_width: 2.0 * self.half_width,
            subdivisions: 2 * self.subdivisions,
        }
    }
}

/// Node signs in row-major order (`index = j * side + i`, `i` along `x`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignField {
    pub grid: GridSpec,
    pub signs: Vec<i8>,
}

impl SignField {
    pub fn get(&self, i: usize, j: usize) -> i8 {
        self.signs[j * self.grid.side() + i]
    }
}

/// Sign of `poly` at each node, `0` where `|poly| <= eps`. The polynomial is
/// evaluated in grid coordinates.
pub fn sign_field(poly: &BivariatePoly, grid: &GridSpec, eps: f64) -> SignField {
    let side = grid.side();
    let mut signs = Vec::with_capacity(side * side);
    for j in 0..side {
        let row = poly.restrict_y(grid.coord(j));
        for i in 0..side {
            let x = grid.coord(i);
            let v = row.iter().rev().fold(0.0, |a, c| a * x + c);
            signs.push(if v > eps {
                1
            } else if v < -eps {
                -1
            } else {
                0
            });
        }
    }
    SignField { grid: *grid, signs }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Component {
    pub sign: i8,
    /// Node indices, increasing.
    pub nodes: Vec<usize>,
}

/// 4-connected components of equal nonzero sign, numbered in scan order of
/// their first node.
pub fn label_components(field: &SignField) -> Vec<Component> {
    let side = field.grid.side();
    let total = side * side;
    let mut uf: UnionFind<usize> = UnionFind::new(total);
    for j in 0..side {
        for i in 0..side {
            let k = j * side + i;
            let s = field.signs[k];
            if s == 0 {
                continue;
            }
            if i + 1 < side && field.signs[k + 1] == s {
                uf.union(k, k + 1);
            }
            if j + 1 < side && field.signs[k + side] == s {
                uf.union(k, k + side);
            }
        }
    }
    let mut slot_of_root: Vec<Option<usize>> = vec![None; total];
    let mut components: Vec<Component> = Vec::new();
    for k in 0..total {
        let s = field.signs[k];
        if s == 0 {
            continue;
        }
        let root = uf.find(k);
        let slot = *slot_of_root[root].get_or_insert_with(|| {
            components.push(Component {
                sign: s,
                nodes: Vec::new(),
            });
            components.len() - 1
        });
        components[slot].nodes.push(k);
    }
    components
}

/// Labelled nodal domains with normalized weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodalPartition {
    pub field: SignField,
    pub components: Vec<Component>,
    pub weights: Vec<f64>,
    /// Riemann mass of all nodes before discarding and normalizing.
    pub raw_mass: f64,
}

impl NodalPartition {
    pub fn count(&self) -> usize {
        self.components.len()
    }

    pub fn grid(&self) -> &GridSpec {
        &self.field.grid
    }

    /// Component index of each node, `None` on nodal or discarded nodes.
    pub fn node_labels(&self) -> Vec<Option<usize>> {
        let mut labels = vec![None; self.field.signs.len()];
        for (c, comp) in self.components.iter().enumerate() {
            for &k in &comp.nodes {
                labels[k] = Some(c);
            }
        }
        labels
    }
}

/// The affine polynomial in dimensionless grid coordinates,
/// `P(xi / sqrt(alpha), eta / sqrt(alpha))`.
pub fn grid_polynomial(poly: &BivariatePoly, alpha: f64) -> BivariatePoly {
    let s = alpha.sqrt().recip();
    poly.rescale_args(s, s)
}

/// Sign field, components and Riemann weights of `rho = exp(-alpha r^2) P^2`
/// for an affine polynomial `P` in physical coordinates.
pub fn domain_weights(poly: &BivariatePoly, grid: &GridSpec, alpha: f64) -> Result<NodalPartition> {
    domain_weights_eps(poly, grid, alpha, DEFAULT_SIGN_EPS)
}

pub fn domain_weights_eps(poly: &BivariatePoly, grid: &GridSpec, alpha: f64, eps: f64) -> Result<NodalPartition> {
    grid.validate()?;
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::InvalidAlpha(alpha));
    }
    let q = grid_polynomial(poly, alpha);
    let field = sign_field(&q, grid, eps);
    let side = grid.side();
    let cell = grid.cell();
    let measure = cell * cell / alpha;
    let mut density = Vec::with_capacity(side * side);
    for j in 0..side {
        let eta = grid.coord(j);
        let row = q.restrict_y(eta);
        for i in 0..side {
            let xi = grid.coord(i);
            let v = row.iter().rev().fold(0.0, |a, c| a * xi + c);
            density.push((-(xi * xi + eta * eta)).exp() * v * v * measure);
        }
    }
    let raw_mass: f64 = density.iter().sum();
    let mut components = Vec::new();
    let mut masses = Vec::new();
    for comp in label_components(&field) {
        let m: f64 = comp.nodes.iter().map(|&k| density[k]).sum();
        if m >= MIN_COMPONENT_WEIGHT {
            components.push(comp);
            masses.push(m);
        }
    }
    let total: f64 = masses.iter().sum();
    let weights = masses.iter().map(|m| m / total).collect();
    Ok(NodalPartition {
        field,
        components,
        weights,
        raw_mass,
    })
}

pub fn partition_state(state: &ShellState, grid: &GridSpec) -> Result<NodalPartition> {
    domain_weights(&build_affine_poly(state), grid, state.alpha())
}

pub fn sdom(partition: &NodalPartition) -> f64 {
    shannon_of_weights(&partition.weights)
}

/// `S_dom` of the product state `Phi_{n_plus, n_minus}`.
pub fn endpoint_separable_sdom(n_plus: usize, n_minus: usize) -> f64 {
    sdom_1d(n_plus) + sdom_1d(n_minus)
}

/// Domain weights known in closed form or by one-dimensional quadrature.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalyticDomains {
    pub weights: Vec<f64>,
}

impl AnalyticDomains {
    pub fn count(&self) -> usize {
        self.weights.len()
    }

    pub fn sdom(&self) -> f64 {
        shannon_of_weights(&self.weights)
    }
}

/// Product weights `p_j q_k` of `Phi_{n_x, n_y}`, `x` index outer.
pub fn separable_domains(n_x: usize, n_y: usize) -> AnalyticDomains {
    let wx = domain_weights_1d(n_x);
    let wy = domain_weights_1d(n_y);
    AnalyticDomains {
        weights: wx.iter().flat_map(|p| wy.iter().map(move |q| p * q)).collect(),
    }
}

/// `Phi_{2,0} + Phi_{0,2}` over root two: nodal circle `r = 1 / sqrt(alpha)`
/// with inner mass `1 - 2/e`.
pub fn circle_domains() -> AnalyticDomains {
    let inner = 1.0 - 2.0 * (-1.0f64).exp();
    AnalyticDomains {
        weights: vec![inner, 1.0 - inner],
    }
}

/// `(Phi_{1,2} + Phi_{3,0})` over root two: the line `xi = 0` and the ellipse
/// `(2/sqrt3) xi^2 + 2 eta^2 = sqrt3 + 1`, four domains. Weights ordered
/// inner-left, inner-right, outer-left, outer-right.
pub fn line_ellipse_domains() -> Result<AnalyticDomains> {
    let state = ShellState::new(
        3,
        vec![
            0.0,
            std::f64::consts::FRAC_1_SQRT_2,
            0.0,
            std::f64::consts::FRAC_1_SQRT_2,
        ],
        1.0,
    )?;
    let p = build_affine_poly(&state);
    let rho = |x: f64, y: f64| {
        let v = p.eval(x, y);
        v * v * (-(x * x + y * y)).exp()
    };
    let s3 = 3f64.sqrt();
    let rhs = s3 + 1.0;
    let x_max = (rhs * s3 / 2.0).sqrt();
    // right half of the ellipse interior
    let inner_right = integrate_adaptive(
        &|x: f64| {
            let y_max = ((rhs - 2.0 / s3 * x * x) / 2.0).max(0.0).sqrt();
            integrate_adaptive(&|y| rho(x, y), -y_max, y_max, 1e-13)
        },
        0.0,
        x_max,
        1e-12,
    );
    let outer_right = 0.5 - inner_right;
    Ok(AnalyticDomains {
        weights: vec![inner_right, inner_right, outer_right, outer_right],
    })
}

/// For each component of `next`, the component of `prev` with the largest
/// node overlap; ties go to the heavier candidate. Both partitions must share
/// a grid.
pub fn match_components(prev: &NodalPartition, next: &NodalPartition) -> Result<Vec<Option<usize>>> {
    if prev.field.grid != next.field.grid {
        return Err(Error::InvalidGrid("matching needs identical grids".into()));
    }
    let labels = prev.node_labels();
    let mut out = Vec::with_capacity(next.count());
    for comp in &next.components {
        let mut overlap = vec![0usize; prev.count()];
        for &k in &comp.nodes {
            if let Some(c) = labels[k] {
                overlap[c] += 1;
            }
        }
        let best = overlap
            .iter()
            .enumerate()
            .filter(|(_, &o)| o > 0)
            .max_by(|(a, oa), (b, ob)| oa.cmp(ob).then(prev.weights[*a].total_cmp(&prev.weights[*b])))
            .map(|(c, _)| c);
        out.push(best);
    }
    Ok(out)
}

/// Largest weight change between matched components; unmatched components
/// count with their full weight.
pub fn max_weight_change(prev: &NodalPartition, next: &NodalPartition) -> Result<f64> {
    let matching = match_components(prev, next)?;
    Ok(matching
        .iter()
        .zip(&next.weights)
        .map(|(m, w)| match m {
            Some(c) => (w - prev.weights[*c]).abs(),
            None => *w,
        })
        .fold(0.0, f64::max))
}
