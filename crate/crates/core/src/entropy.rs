//! Differential Shannon entropies of fixed-shell densities.
//!
//! Position entropies use tensor-product Gauss–Legendre panels with panel
//! doubling until successive estimates agree to `abs_tol`. The integrand
//! `-rho ln rho` has only integrable logarithmic singularities on the nodal
//! curve, and is set to zero where `rho < 1e-300`. Moments (norms, `<r^2>`,
//! marginal reductions) never go through quadrature: they come from the
//! exact Gaussian monomial moment table.
//!
//! Logarithms are taken of densities in physical units with `hbar = 1`; at the
//! default `alpha = m = omega = 1` every quantity is dimensionless.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{BivariatePoly, GaussianMoments};
use crate::polyalgebra::StratumDiagnostics;
use crate::quad::{integrate_adaptive, PanelRule};
use crate::shell::{build_affine_poly, ShellState};

/// Below this the `u ln u` integrand is taken at its limit, zero.
pub const DENSITY_FLOOR: f64 = 1e-300;

/// Negative mutual information down to this value is treated as quadrature
/// noise and reported as zero.
pub const MI_NOISE_FLOOR: f64 = 1e-6;

/// Tolerance between the direct `-<ln rho>` estimate and the
/// `alpha <r^2> - 2 <ln |P|>` decomposition using the exact moment.
pub const DECOMPOSITION_TOL: f64 = 5e-5;

/// Required agreement of `alpha <r^2>` with `N + 1`.
pub const MOMENT_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadConfig {
    /// Half-width of the integration square, dimensionless.
    pub half_width: f64,
    /// Panels per axis on the first pass.
    pub panels_per_axis: usize,
    /// Target agreement between successive panel doublings.
    pub abs_tol: f64,
    /// Gauss–Legendre nodes per panel and axis.
    pub order: usize,
    /// Panel count beyond which doubling stops.
    pub max_panels: usize,
}

impl Default for QuadConfig {
    fn default() -> Self {
        Self {
            half_width: 10.0,
            panels_per_axis: 400,
            abs_tol: 1e-6,
            order: 4,
            max_panels: 1600,
        }
    }
}

impl QuadConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.half_width >= 8.0 && self.half_width.is_finite()) {
            return Err(Error::InvalidQuadConfig(format!(
                "half_width must be >= 8, got {}",
                self.half_width
            )));
        }
        if self.panels_per_axis < 100 {
            return Err(Error::InvalidQuadConfig(format!(
                "panels_per_axis must be >= 100, got {}",
                self.panels_per_axis
            )));
        }
        if self.abs_tol.is_nan() || self.abs_tol <= 0.0 || self.order == 0 {
            return Err(Error::InvalidQuadConfig("abs_tol and order must be positive".into()));
        }
        Ok(())
    }
}

/// Result of the position-entropy integration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PositionEntropy {
    pub value: f64,
    /// `alpha <r^2> - 2 <ln |P|>` with the exact moment `N + 1`.
    pub decomposition: f64,
    /// Difference between the last two panel levels.
    pub change: f64,
    pub panels: usize,
}

struct Pass {
    neg_rho_ln_rho: f64,
    rho_ln_p_sq: f64,
}

fn position_pass(poly: &BivariatePoly, alpha: f64, half_width: f64, panels: usize, order: usize) -> Pass {
    let rule = PanelRule::new(-half_width, half_width, panels, order);
    let gauss: Vec<f64> = rule.nodes.iter().map(|x| -alpha * x * x).collect();
    let mut total = 0.0;
    let mut log_part = 0.0;
    for (iy, &y) in rule.nodes.iter().enumerate() {
        let row = poly.restrict_y(y);
        let (wy, gy) = (rule.weights[iy], gauss[iy]);
        let mut acc = 0.0;
        let mut acc_log = 0.0;
        for (ix, &x) in rule.nodes.iter().enumerate() {
            let p = row.iter().rev().fold(0.0, |a, c| a * x + c);
            let p_sq = p * p;
            let log_gauss = gauss[ix] + gy;
            let rho = log_gauss.exp() * p_sq;
            if rho > DENSITY_FLOOR {
                let ln_p_sq = p_sq.ln();
                acc -= rule.weights[ix] * rho * (log_gauss + ln_p_sq);
                acc_log += rule.weights[ix] * rho * ln_p_sq;
            }
        }
        total += wy * acc;
        log_part += wy * acc_log;
    }
    Pass {
        neg_rho_ln_rho: total,
        rho_ln_p_sq: log_part,
    }
}

/// `S_r = -integral rho ln rho` with refinement diagnostics.
///
/// The first estimate at `panels_per_axis` is compared against one at half
/// that count; the panel count then doubles until the change drops below
/// `abs_tol` or `max_panels` would be exceeded.
pub fn shannon_position_detailed(state: &ShellState, cfg: &QuadConfig) -> Result<PositionEntropy> {
    cfg.validate()?;
    let poly = build_affine_poly(state);
    let alpha = state.alpha();
    let half_width = cfg.half_width / alpha.sqrt();
    let mut panels = cfg.panels_per_axis;
    let mut prev = position_pass(&poly, alpha, half_width, panels / 2, cfg.order);
    loop {
        let cur = position_pass(&poly, alpha, half_width, panels, cfg.order);
        let change = (cur.neg_rho_ln_rho - prev.neg_rho_ln_rho).abs();
        if change < cfg.abs_tol || panels * 2 > cfg.max_panels {
            let value = cur.neg_rho_ln_rho;
            if change >= cfg.abs_tol {
                return Err(Error::QuadratureNotConverged {
                    estimate: value,
                    change,
                    tol: cfg.abs_tol,
                });
            }
            let decomposition = (state.shell() + 1) as f64 - cur.rho_ln_p_sq;
            if (decomposition - value).abs() > DECOMPOSITION_TOL {
                return Err(Error::QuadratureNotConverged {
                    estimate: value,
                    change: (decomposition - value).abs(),
                    tol: DECOMPOSITION_TOL,
                });
            }
            return Ok(PositionEntropy {
                value,
                decomposition,
                change,
                panels,
            });
        }
        prev = cur;
        panels *= 2;
    }
}

pub fn shannon_position(state: &ShellState, cfg: &QuadConfig) -> Result<f64> {
    shannon_position_detailed(state, cfg).map(|r| r.value)
}

/// `rho_x(x) = exp(-alpha x^2) sum_k m_k x^k` with the transverse variable
/// integrated out exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct Marginal {
    pub alpha: f64,
    /// Polynomial factor, lowest power first.
    pub poly: Vec<f64>,
}

impl Marginal {
    pub fn eval(&self, x: f64) -> f64 {
        let p = self.poly.iter().rev().fold(0.0, |a, c| a * x + c);
        p * (-self.alpha * x * x).exp()
    }

    fn neg_u_ln_u(&self, x: f64) -> f64 {
        let p = self.poly.iter().rev().fold(0.0, |a, c| a * x + c);
        let u = p * (-self.alpha * x * x).exp();
        if u > DENSITY_FLOOR {
            -u * (p.ln() - self.alpha * x * x)
        } else {
            0.0
        }
    }
}

/// Marginal density along `x` (`along_x = true`) or `y`.
pub fn marginal(state: &ShellState, along_x: bool) -> Marginal {
    let p = build_affine_poly(state);
    let sq = p.mul(&p);
    let alpha = state.alpha();
    let deg = sq.degree_bound();
    let moments = GaussianMoments::new(deg, alpha);
    let mut poly = vec![0.0; deg + 1];
    for (i, j, c) in sq.terms() {
        let (keep, drop) = if along_x { (i, j) } else { (j, i) };
        poly[keep] += c * moments.get(drop);
    }
    Marginal { alpha, poly }
}

fn entropy_1d(m: &Marginal, cfg: &QuadConfig) -> f64 {
    let w = cfg.half_width / m.alpha.sqrt();
    // split at the origin so symmetric zeros there sit on a panel edge
    integrate_adaptive(&|x| m.neg_u_ln_u(x), -w, 0.0, 1e-3 * cfg.abs_tol)
        + integrate_adaptive(&|x| m.neg_u_ln_u(x), 0.0, w, 1e-3 * cfg.abs_tol)
}

/// `(S_x, S_y)`.
pub fn marginal_entropies(state: &ShellState, cfg: &QuadConfig) -> Result<(f64, f64)> {
    cfg.validate()?;
    Ok((
        entropy_1d(&marginal(state, true), cfg),
        entropy_1d(&marginal(state, false), cfg),
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MutualInformation {
    pub value: f64,
    /// Set when a slightly negative raw value was reported as zero.
    pub clamped: bool,
}

/// `I = S_x + S_y - S_r` from already computed entropies.
pub fn mutual_information_from(s_x: f64, s_y: f64, s_r: f64) -> MutualInformation {
    let raw = s_x + s_y - s_r;
    if raw < 0.0 && raw > -MI_NOISE_FLOOR {
        MutualInformation {
            value: 0.0,
            clamped: true,
        }
    } else {
        MutualInformation {
            value: raw,
            clamped: false,
        }
    }
}

pub fn mutual_information(state: &ShellState, cfg: &QuadConfig) -> Result<MutualInformation> {
    let s_r = shannon_position(state, cfg)?;
    let (s_x, s_y) = marginal_entropies(state, cfg)?;
    Ok(mutual_information_from(s_x, s_y, s_r))
}

/// `S_p = S_r + 2 ln(m omega)` with `hbar = 1`.
pub fn momentum_entropy(s_r: f64, m_omega: f64) -> f64 {
    s_r + 2.0 * m_omega.ln()
}

/// `alpha <r^2>` from the exact moment table. Errors when it misses `N + 1`
/// by more than [`MOMENT_TOL`].
pub fn radial_second_moment(state: &ShellState) -> Result<f64> {
    let p = build_affine_poly(state);
    let alpha = state.alpha();
    let sq = p.mul(&p);
    let value = alpha * (sq.gaussian_moment(2, 0, alpha) + sq.gaussian_moment(0, 2, alpha));
    let expected = state.energy();
    if (value - expected).abs() > MOMENT_TOL {
        return Err(Error::MomentCheck { got: value, expected });
    }
    Ok(value)
}

/// Bialynicki-Birula–Mycielski lower bound `2 ln(e pi)` on `S_r + S_p` in two
/// dimensions with `hbar = 1`.
pub fn entropic_bound() -> f64 {
    2.0 * (std::f64::consts::E * std::f64::consts::PI).ln()
}

/// Warnings attached to a report row.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Flag {
    /// Negative mutual information within noise was reported as zero.
    MiClamped,
    /// A finer or wider grid changed the domain count.
    UnresolvedStratum,
    /// Domain data taken from the separable or endpoint closed forms.
    AnalyticEndpoint,
    /// A sub-computation failed; the message names it.
    Failed(String),
}

impl std::fmt::Display for Flag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Flag::MiClamped => f.write_str("mi-clamped"),
            Flag::UnresolvedStratum => f.write_str("unresolved-stratum"),
            Flag::AnalyticEndpoint => f.write_str("analytic-endpoint"),
            Flag::Failed(what) => write!(f, "failed:{what}"),
        }
    }
}

/// One path point. Quantities that failed to compute are `None`, and the
/// reason sits in `flags`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntropyReport {
    pub t: f64,
    pub coeffs: Vec<f64>,
    pub s_r: Option<f64>,
    pub s_x: Option<f64>,
    pub s_y: Option<f64>,
    pub mutual_info: Option<f64>,
    pub s_p: Option<f64>,
    pub entropic_sum: Option<f64>,
    pub s_dom: Option<f64>,
    pub n_domains: Option<usize>,
    pub domain_weights: Vec<f64>,
    pub radial_moment: Option<f64>,
    pub diagnostics: StratumDiagnostics,
    pub flags: Vec<Flag>,
}

impl EntropyReport {
    pub fn has_failures(&self) -> bool {
        self.flags.iter().any(|f| matches!(f, Flag::Failed(_)))
    }
}
