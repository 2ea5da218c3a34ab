//! Algebraic diagnostics on shell polynomials: critical points, the
//! critical-value diagnostic, conic and cubic discriminants, and the
//! multiplicities of asymptotic nodal directions.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use nalgebra::{Matrix2, SymmetricEigen, Vector2};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{nonzero, BivariatePoly};
use crate::shell::{build_affine_poly, top_homogeneous, ShellState};

/// Default critical-point search half-width, dimensionless.
pub const DEFAULT_SEARCH_BOX: f64 = 6.0;
pub const SEED_GRID: usize = 25;
pub const MERGE_RADIUS: f64 = 1e-6;
const MAX_ITERATIONS: usize = 60;
const MAX_HALVINGS: usize = 30;
const RESIDUAL_REL: f64 = 1e-10;

/// Relative `|f'|` threshold separating simple from repeated ray directions.
pub const SIMPLE_ROOT_REL: f64 = 1e-8;
pub const RAY_SCAN_POINTS: usize = 720;
/// Zeros closer than this, in radians, count as one repeated direction.
pub const RAY_MERGE_RADIUS: f64 = 1e-6;

/// Threshold on `|P| / ||P||_G` treated as an exact finite singularity.
pub const SINGULAR_VALUE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalPoint {
    pub location: [f64; 2],
    pub value: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Ray {
    /// Direction angle in `[0, pi)`.
    pub angle: f64,
    pub simple: bool,
}

/// Stratum data for one state. Fields that do not apply to the state's shell
/// are `None`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct StratumDiagnostics {
    pub det_q: Option<f64>,
    pub affine_d: Option<f64>,
    pub conic_discriminant: Option<f64>,
    pub delta_inf: Option<f64>,
    pub r_fin: Option<f64>,
    /// `None` when no critical point was found.
    pub delta_crit: Option<f64>,
    pub ray_angles: Vec<Ray>,
}

/// Value and analytic gradient.
pub fn eval_with_gradient(poly: &BivariatePoly, x: f64, y: f64) -> (f64, [f64; 2]) {
    poly.eval_with_gradient(x, y)
}

struct GradientSystem {
    poly: BivariatePoly,
    px: BivariatePoly,
    py: BivariatePoly,
    pxx: BivariatePoly,
    pxy: BivariatePoly,
    pyy: BivariatePoly,
}

impl GradientSystem {
    fn new(poly: &BivariatePoly) -> Self {
        let px = poly.partial_x();
        let py = poly.partial_y();
        Self {
            poly: poly.clone(),
            pxx: px.partial_x(),
            pxy: px.partial_y(),
            pyy: py.partial_y(),
            px,
            py,
        }
    }

    fn gradient(&self, p: Vector2<f64>) -> Vector2<f64> {
        Vector2::new(self.px.eval(p.x, p.y), self.py.eval(p.x, p.y))
    }

    fn hessian(&self, p: Vector2<f64>) -> Matrix2<f64> {
        let xy = self.pxy.eval(p.x, p.y);
        Matrix2::new(self.pxx.eval(p.x, p.y), xy, xy, self.pyy.eval(p.x, p.y))
    }

    /// Newton direction through the pseudo-inverse of the Hessian, so flat
    /// directions do not blow the step up.
    fn step(&self, p: Vector2<f64>, g: Vector2<f64>) -> Option<Vector2<f64>> {
        let eig = SymmetricEigen::new(self.hessian(p));
        let scale = eig.eigenvalues.amax();
        if scale == 0.0 {
            return None;
        }
        let mut step = Vector2::zeros();
        for k in 0..2 {
            let lambda = eig.eigenvalues[k];
            if lambda.abs() > 1e-12 * scale {
                let v = eig.eigenvectors.column(k);
                step += v * (v.dot(&g) / lambda);
            }
        }
        Some(-step)
    }

    fn solve(&self, seed: Vector2<f64>, tol: f64) -> Option<(Vector2<f64>, f64)> {
        let mut p = seed;
        let mut g = self.gradient(p);
        let mut r = g.norm();
        for _ in 0..MAX_ITERATIONS {
            if r < tol {
                return Some((p, r));
            }
            let dir = self.step(p, g)?;
            let mut lambda = 1.0;
            let mut accepted = false;
            for _ in 0..=MAX_HALVINGS {
                let trial = p + dir * lambda;
                let gt = self.gradient(trial);
                let rt = gt.norm();
                if rt < r {
                    p = trial;
                    g = gt;
                    r = rt;
                    accepted = true;
                    break;
                }
                lambda *= 0.5;
            }
            if !accepted {
                break;
            }
        }
        (r < tol).then_some((p, r))
    }
}

/// Real solutions of `grad P = 0` inside `[-half_width, half_width]^2`, from
/// damped Newton started on a 25 x 25 seed grid. Points closer than
/// [`MERGE_RADIUS`] are merged; output is sorted lexicographically by location.
pub fn critical_points(poly: &BivariatePoly, half_width: f64) -> Vec<CriticalPoint> {
    assert!(half_width > 0.0, "search box must be positive");
    let system = GradientSystem::new(poly);
    let tol = RESIDUAL_REL * (1.0 + poly.max_abs_coeff());
    let mut found: Vec<CriticalPoint> = Vec::new();
    let spacing = 2.0 * half_width / (SEED_GRID - 1) as f64;
    for i in 0..SEED_GRID {
        for j in 0..SEED_GRID {
            let seed = Vector2::new(-half_width + i as f64 * spacing, -half_width + j as f64 * spacing);
            let Some((p, residual)) = system.solve(seed, tol) else {
                continue;
            };
            if p.x.abs() > half_width || p.y.abs() > half_width {
                continue;
            }
            let duplicate = found
                .iter_mut()
                .find(|c| (c.location[0] - p.x).hypot(c.location[1] - p.y) < MERGE_RADIUS);
            match duplicate {
                Some(c) if c.residual <= residual => {}
                Some(c) => {
                    c.location = [p.x, p.y];
                    c.residual = residual;
                    c.value = system.poly.eval(p.x, p.y);
                }
                None => found.push(CriticalPoint {
                    location: [p.x, p.y],
                    value: system.poly.eval(p.x, p.y),
                    residual,
                }),
            }
        }
    }
    found.sort_by(|a, b| {
        a.location[0]
            .total_cmp(&b.location[0])
            .then(a.location[1].total_cmp(&b.location[1]))
    });
    found
}

/// `sqrt(integral exp(-alpha r^2) P^2)` from the exact moment table.
pub fn gaussian_norm(poly: &BivariatePoly, alpha: f64) -> Result<f64> {
    nonzero(poly)?;
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::InvalidAlpha(alpha));
    }
    Ok(poly.gaussian_inner(poly, alpha).sqrt())
}

/// `min |P(x_c)| / ||P||_G` over the critical points in the box; `None` when
/// there are none.
pub fn critical_value_diagnostic(poly: &BivariatePoly, alpha: f64, half_width: f64) -> Result<Option<f64>> {
    let norm = gaussian_norm(poly, alpha)?;
    Ok(critical_value_from(&critical_points(poly, half_width), norm))
}

fn critical_value_from(points: &[CriticalPoint], norm: f64) -> Option<f64> {
    points.iter().map(|c| c.value.abs() / norm).min_by(f64::total_cmp)
}

fn require_shell(state: &ShellState, shell: usize, diagnostic: &'static str) -> Result<()> {
    if state.shell() != shell {
        return Err(Error::DiagnosticNotApplicable {
            diagnostic,
            shell: state.shell(),
        });
    }
    Ok(())
}

/// Conic data for `N = 2` in the form `sqrt2 a x^2 + 2 b xy + sqrt2 c y^2`
/// scaled by `alpha`, with `a = c_2`, `b = c_1`, `c = c_0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConicData {
    pub det_q: f64,
    pub affine_d: f64,
    pub conic_discriminant: f64,
}

pub fn conic_data(state: &ShellState) -> Result<ConicData> {
    require_shell(state, 2, "conic")?;
    let c = state.coeffs();
    let (a, b, c0) = (c[2], c[1], c[0]);
    let alpha = state.alpha();
    let det_q = alpha * alpha * (2.0 * a * c0 - b * b);
    let affine_d = -(a + c0) * FRAC_1_SQRT_2;
    Ok(ConicData {
        det_q,
        affine_d,
        conic_discriminant: affine_d * det_q,
    })
}

/// Shape of a non-degenerate-or-not conic from the sign of `det Q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConicType {
    Ellipse,
    Hyperbola,
    RankDegenerate,
}

impl ConicData {
    pub fn conic_type(&self, tol: f64) -> ConicType {
        if self.det_q > tol {
            ConicType::Ellipse
        } else if self.det_q < -tol {
            ConicType::Hyperbola
        } else {
            ConicType::RankDegenerate
        }
    }
}

pub fn conic_diagnostics(state: &ShellState) -> Result<StratumDiagnostics> {
    let conic = conic_data(state)?;
    let mut d = generic_diagnostics(state, DEFAULT_SEARCH_BOX)?;
    d.det_q = Some(conic.det_q);
    d.affine_d = Some(conic.affine_d);
    d.conic_discriminant = Some(conic.conic_discriminant);
    Ok(d)
}

/// Coefficients of the affine cubic
/// `A x^3 + B x^2 y + C x y^2 + D y^3 + E x + F y`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CubicData {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub e: f64,
    pub f: f64,
    /// Projective discriminant of the binary cubic part.
    pub delta_inf: f64,
    /// Top part evaluated on the line `p x + q y = 0`.
    pub r_fin: f64,
    pub p: f64,
    pub q: f64,
}

/// Extracts the cubic coefficients and checks the linear Hermite constraint
/// `E = -(3A + C) / (2 alpha)`, `F = -(B + 3D) / (2 alpha)`, equivalently
/// `P = H - lap(H) / (4 alpha)` for the top part `H`.
pub fn cubic_data(state: &ShellState) -> Result<CubicData> {
    require_shell(state, 3, "cubic")?;
    let poly = build_affine_poly(state);
    let alpha = state.alpha();
    let (a, b, c, d) = (poly.coeff(3, 0), poly.coeff(2, 1), poly.coeff(1, 2), poly.coeff(0, 3));
    let (e, f) = (poly.coeff(1, 0), poly.coeff(0, 1));
    let p = 3.0 * a + c;
    let q = b + 3.0 * d;
    let scale = poly.max_abs_coeff();
    let defect = (e + p / (2.0 * alpha)).abs().max((f + q / (2.0 * alpha)).abs());
    if defect > 1e-10 * scale {
        return Err(Error::HermiteConstraint(defect / scale));
    }
    let top = poly.homogeneous_part(3);
    let rebuilt = top.add(&top.laplacian().scaled(-0.25 / alpha));
    let lap_defect = rebuilt.add(&poly.scaled(-1.0)).max_abs_coeff();
    if lap_defect > 1e-10 * scale {
        return Err(Error::HermiteConstraint(lap_defect / scale));
    }
    let delta_inf =
        b * b * c * c - 4.0 * a * c.powi(3) - 4.0 * b.powi(3) * d - 27.0 * a * a * d * d + 18.0 * a * b * c * d;
    let r_fin = a * q.powi(3) - b * p * q * q + c * p * p * q - d * p.powi(3);
    Ok(CubicData {
        a,
        b,
        c,
        d,
        e,
        f,
        delta_inf,
        r_fin,
        p,
        q,
    })
}

pub fn cubic_diagnostics(state: &ShellState) -> Result<StratumDiagnostics> {
    let cubic = cubic_data(state)?;
    let mut d = generic_diagnostics(state, DEFAULT_SEARCH_BOX)?;
    d.delta_inf = Some(cubic.delta_inf);
    d.r_fin = Some(cubic.r_fin);
    Ok(d)
}

/// Critical-value diagnostic and asymptotic rays; `half_width` is
/// dimensionless and scaled by `1 / sqrt(alpha)` for the search.
pub fn generic_diagnostics(state: &ShellState, half_width: f64) -> Result<StratumDiagnostics> {
    let poly = build_affine_poly(state);
    let alpha = state.alpha();
    let delta_crit = critical_value_diagnostic(&poly, alpha, half_width / alpha.sqrt())?;
    let ray_angles = if state.shell() == 0 {
        Vec::new()
    } else {
        asymptotic_rays(&top_homogeneous(&poly)?)?
    };
    Ok(StratumDiagnostics {
        delta_crit,
        ray_angles,
        ..Default::default()
    })
}

/// Every diagnostic that applies to the state's shell.
pub fn diagnose(state: &ShellState) -> Result<StratumDiagnostics> {
    match state.shell() {
        2 => conic_diagnostics(state),
        3 => cubic_diagnostics(state),
        _ => generic_diagnostics(state, DEFAULT_SEARCH_BOX),
    }
}

fn angular_derivative(top: &BivariatePoly, theta: f64) -> f64 {
    let (s, c) = theta.sin_cos();
    let (_, [gx, gy]) = top.eval_with_gradient(c, s);
    -s * gx + c * gy
}

/// Zeros of `f(theta) = top(cos theta, sin theta)` on `[0, pi)`, each tagged
/// simple when `|f'| > 1e-8 max |f|`.
///
/// Sign changes on a 720-point scan are bisected; local minima of `|f|`
/// without a sign change are refined by Newton on `f'` and kept when `f`
/// vanishes there, which catches even-multiplicity zeros.
pub fn asymptotic_rays(top: &BivariatePoly) -> Result<Vec<Ray>> {
    nonzero(top)?;
    if !top.is_homogeneous() {
        return Err(Error::NotHomogeneous);
    }
    let f = |theta: f64| top.eval(theta.cos(), theta.sin());
    let n = RAY_SCAN_POINTS;
    let thetas: Vec<f64> = (0..=n).map(|k| PI * k as f64 / n as f64).collect();
    let values: Vec<f64> = thetas.iter().map(|&t| f(t)).collect();
    let max_f = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if max_f == 0.0 {
        return Err(Error::DegenerateAngularFunction);
    }
    let zero_tol = 1e-10 * max_f;
    let mut roots: Vec<f64> = Vec::new();
    for k in 0..n {
        let (t0, t1) = (thetas[k], thetas[k + 1]);
        let (f0, f1) = (values[k], values[k + 1]);
        if f0 == 0.0 {
            roots.push(t0);
        } else if f0 * f1 < 0.0 {
            roots.push(bisect(&f, t0, t1, f0));
        }
    }
    // periodic extension: f(theta + pi) = (-1)^d f(theta)
    let wrap = |k: isize| -> f64 {
        let n = n as isize;
        let d = top.total_degree().unwrap_or(0);
        let sign = if d.is_multiple_of(2) { 1.0 } else { -1.0 };
        if k < 0 {
            sign * values[(k + n) as usize]
        } else if k > n {
            sign * values[(k - n) as usize]
        } else {
            values[k as usize]
        }
    };
    for k in 0..n as isize {
        let (prev, cur, next) = (wrap(k - 1), wrap(k), wrap(k + 1));
        if cur != 0.0 && cur * prev > 0.0 && cur * next > 0.0 && cur.abs() <= prev.abs() && cur.abs() <= next.abs() {
            if let Some(theta) = minimize_abs(
                top,
                thetas[k as usize] - PI / n as f64,
                thetas[k as usize] + PI / n as f64,
            ) {
                if f(theta).abs() <= zero_tol {
                    roots.push(theta);
                }
            }
        }
    }
    let mut rays: Vec<Ray> = Vec::new();
    for theta in roots {
        let angle = theta.rem_euclid(PI);
        let angle = if PI - angle < 1e-12 { 0.0 } else { angle };
        let simple = angular_derivative(top, angle).abs() > SIMPLE_ROOT_REL * max_f;
        // a repeated zero perturbed by rounding splits into a pair about
        // sqrt(eps) apart; report it once, as repeated
        let close = rays.iter_mut().find(|r| {
            let gap = (r.angle - angle).abs();
            gap.min(PI - gap) < RAY_MERGE_RADIUS
        });
        match close {
            Some(r) if (r.angle - angle).abs() < 1e-12 => {}
            Some(r) => r.simple = false,
            None => rays.push(Ray { angle, simple }),
        }
    }
    rays.sort_by(|a, b| a.angle.total_cmp(&b.angle));
    Ok(rays)
}

fn bisect(f: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, mut f_lo: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if fm * f_lo < 0.0 {
            hi = mid;
        } else {
            lo = mid;
            f_lo = fm;
        }
    }
    0.5 * (lo + hi)
}

/// Newton on `f'` started at the bracket centre, falling back to golden
/// section when Newton leaves the bracket.
fn minimize_abs(top: &BivariatePoly, lo: f64, hi: f64) -> Option<f64> {
    let fp = |t: f64| angular_derivative(top, t);
    // f'' by differentiating the angular derivative numerically is fragile;
    // use the analytic second derivative of the homogeneous form instead
    let hxx = top.partial_x().partial_x();
    let hxy = top.partial_x().partial_y();
    let hyy = top.partial_y().partial_y();
    let fpp = |t: f64| {
        let (s, c) = t.sin_cos();
        let (_, [gx, gy]) = top.eval_with_gradient(c, s);
        let (xx, xy, yy) = (hxx.eval(c, s), hxy.eval(c, s), hyy.eval(c, s));
        s * s * xx - 2.0 * s * c * xy + c * c * yy - c * gx - s * gy
    };
    let mut t = 0.5 * (lo + hi);
    for _ in 0..50 {
        let d2 = fpp(t);
        if d2 == 0.0 {
            break;
        }
        let next = t - fp(t) / d2;
        if !(lo..=hi).contains(&next) {
            return golden(top, lo, hi);
        }
        if (next - t).abs() < 1e-15 {
            return Some(next);
        }
        t = next;
    }
    Some(t)
}

fn golden(top: &BivariatePoly, mut lo: f64, mut hi: f64) -> Option<f64> {
    let g = |t: f64| top.eval(t.cos(), t.sin()).abs();
    let r = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..100 {
        let a = hi - r * (hi - lo);
        let b = lo + r * (hi - lo);
        if g(a) < g(b) {
            hi = b;
        } else {
            lo = a;
        }
    }
    Some(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shell::{angular_function, build_dimensionless_poly};

    fn n2_sym(t: f64) -> ShellState {
        let s = ((1.0 - t * t) / 2.0).sqrt();
        ShellState::new(2, vec![s, t, s], 1.0).unwrap()
    }

    fn n3_three(t: f64) -> ShellState {
        let s = ((1.0 - t * t) / 2.0).sqrt();
        ShellState::new(3, vec![0.0, s, t, s], 1.0).unwrap()
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let p = BivariatePoly::from_terms([(3, 0, 0.7), (1, 2, -1.1), (0, 3, 0.4), (2, 1, 0.3), (1, 0, -0.8)]);
        let (x, y) = (0.37, -1.21);
        let (_, g) = eval_with_gradient(&p, x, y);
        let h = 1e-6;
        let fx = (p.eval(x + h, y) - p.eval(x - h, y)) / (2.0 * h);
        let fy = (p.eval(x, y + h) - p.eval(x, y - h)) / (2.0 * h);
        assert!((g[0] - fx).abs() < 1e-6 * fx.abs().max(1.0));
        assert!((g[1] - fy).abs() < 1e-6 * fy.abs().max(1.0));
    }

    #[test]
    fn n1_has_no_critical_points() {
        let s = ShellState::new(1, vec![0.6, 0.8], 1.0).unwrap();
        let p = build_affine_poly(&s);
        assert!(critical_points(&p, 6.0).is_empty());
        assert_eq!(critical_value_diagnostic(&p, 1.0, 6.0).unwrap(), None);
    }

    #[test]
    fn n2_conic_has_single_critical_point_at_origin() {
        let p = build_affine_poly(&n2_sym(0.4));
        let cps = critical_points(&p, 6.0);
        assert_eq!(cps.len(), 1);
        assert!(cps[0].location[0].abs() < 1e-12 && cps[0].location[1].abs() < 1e-12);
        let norm = gaussian_norm(&p, 1.0).unwrap();
        let expected = p.coeff(0, 0).abs() / norm;
        let got = critical_value_diagnostic(&p, 1.0, 6.0).unwrap().unwrap();
        assert!((got - expected).abs() < 1e-14);
    }

    #[test]
    fn coordinate_cross_is_singular() {
        let p = build_affine_poly(&n2_sym(1.0));
        assert_eq!(critical_value_diagnostic(&p, 1.0, 6.0).unwrap(), Some(0.0));
    }

    #[test]
    fn norm_examples() {
        let x = BivariatePoly::from_terms([(1, 0, 1.0)]);
        assert!((gaussian_norm(&x, 1.0).unwrap() - (PI / 2.0).sqrt()).abs() < 1e-14);
        let three_x = x.scaled(3.0);
        assert!((gaussian_norm(&three_x, 1.0).unwrap() - 3.0 * (PI / 2.0).sqrt()).abs() < 1e-13);
        let p = build_affine_poly(&n3_three(0.3));
        assert!((gaussian_norm(&p, 1.0).unwrap() - 1.0).abs() < 1e-12);
        assert!(gaussian_norm(&BivariatePoly::zero(2), 1.0).is_err());
    }

    #[test]
    fn delta_crit_is_scale_invariant() {
        let p = build_affine_poly(&n3_three(0.5));
        let a = critical_value_diagnostic(&p, 1.0, 6.0).unwrap().unwrap();
        let b = critical_value_diagnostic(&p.scaled(17.5), 1.0, 6.0).unwrap().unwrap();
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn conic_along_symmetric_path() {
        for &t in &[0.0, 0.3, 0.7, 0.95] {
            let c = conic_data(&n2_sym(t)).unwrap();
            assert!((c.det_q - (1.0 - 2.0 * t * t)).abs() < 1e-14);
        }
        assert_eq!(conic_data(&n2_sym(0.4)).unwrap().conic_type(1e-12), ConicType::Ellipse);
        assert_eq!(
            conic_data(&n2_sym(0.9)).unwrap().conic_type(1e-12),
            ConicType::Hyperbola
        );
        let c = 0.5f64.sqrt();
        let crossing = ShellState::new(2, vec![c, 0.0, -c], 1.0).unwrap();
        assert_eq!(conic_data(&crossing).unwrap().affine_d, 0.0);
        assert!(conic_data(&n3_three(0.2)).is_err());
    }

    #[test]
    fn cubic_strata_along_three_state_path() {
        let t_inf = (4.0 - 2.0 * 3f64.sqrt()).sqrt();
        let t_red = ((3.0 - 3f64.sqrt()) / 2.0).sqrt();
        assert!(cubic_data(&n3_three(t_inf)).unwrap().delta_inf.abs() < 1e-12);
        assert!(cubic_data(&n3_three(t_red)).unwrap().r_fin.abs() < 1e-12);
        assert!(cubic_data(&n3_three(0.0)).unwrap().r_fin.abs() < 1e-14);
        let away = cubic_data(&n3_three(0.5)).unwrap();
        assert!(away.delta_inf.abs() > 1e-3 && away.r_fin.abs() > 1e-3);
        assert!(cubic_data(&n2_sym(0.5)).is_err());
    }

    #[test]
    fn rays_of_a_line() {
        let top = BivariatePoly::from_terms([(1, 0, 0.6), (0, 1, 0.8)]);
        let rays = asymptotic_rays(&top).unwrap();
        assert_eq!(rays.len(), 1);
        assert!(rays[0].simple);
        assert!(angular_function(&top, rays[0].angle).unwrap().abs() < 1e-14);
    }

    #[test]
    fn parallel_lines_share_a_repeated_direction() {
        let p = build_dimensionless_poly(&n2_sym(FRAC_1_SQRT_2));
        let rays = asymptotic_rays(&top_homogeneous(&p).unwrap()).unwrap();
        assert_eq!(rays.len(), 1, "{rays:?}");
        assert!(!rays[0].simple);
    }

    #[test]
    fn monomial_top_multiplicities() {
        // x^2 y: y = 0 simple, x = 0 double
        let top = BivariatePoly::from_terms([(2, 1, 1.0)]);
        let rays = asymptotic_rays(&top).unwrap();
        assert_eq!(rays.len(), 2, "{rays:?}");
        assert!(rays[0].angle.abs() < 1e-12 && rays[0].simple);
        assert!((rays[1].angle - PI / 2.0).abs() < 1e-9 && !rays[1].simple);
    }

    #[test]
    fn rays_reject_bad_input() {
        let affine = BivariatePoly::from_terms([(1, 0, 1.0), (0, 0, 1.0)]);
        assert!(matches!(asymptotic_rays(&affine), Err(Error::NotHomogeneous)));
        assert!(asymptotic_rays(&BivariatePoly::zero(2)).is_err());
    }
}
