//! One-parameter coefficient families, sweeps along them, and localization of
//! stratum crossings.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::entropy::{
    marginal_entropies, momentum_entropy, mutual_information_from, radial_second_moment, shannon_position_detailed,
    EntropyReport, Flag, QuadConfig,
};
use crate::error::{Error, Result};
use crate::nodal::{circle_domains, line_ellipse_domains, partition_state, sdom, separable_domains, GridSpec};
use crate::polyalgebra::{conic_data, cubic_data, diagnose, StratumDiagnostics};
use crate::shell::ShellState;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PathKind {
    N1Rotation,
    N2Symmetric,
    N3ThreeState,
    General,
}

impl PathKind {
    pub const ALL: [PathKind; 4] = [
        PathKind::N1Rotation,
        PathKind::N2Symmetric,
        PathKind::N3ThreeState,
        PathKind::General,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PathKind::N1Rotation => "n1-rotation",
            PathKind::N2Symmetric => "n2-symmetric",
            PathKind::N3ThreeState => "n3-three-state",
            PathKind::General => "general",
        }
    }
}

impl fmt::Display for PathKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PathKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PathKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::UnknownPath(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StratumKind {
    /// `det Q = 0`: parallel-line conic.
    RankDegenerate,
    /// Finite affine singularity of the nodal curve.
    FiniteAffine,
    /// Repeated real asymptotic direction.
    Projective,
    /// Zero of the finite line–cubic resultant.
    ReducibleResultant,
    /// Reducible nodal curve at a path end.
    ReducibleEndpoint,
}

impl fmt::Display for StratumKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StratumKind::RankDegenerate => "rank-degenerate",
            StratumKind::FiniteAffine => "finite-affine",
            StratumKind::Projective => "projective",
            StratumKind::ReducibleResultant => "reducible-resultant",
            StratumKind::ReducibleEndpoint => "reducible-endpoint",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Stratum {
    pub t: f64,
    pub kind: StratumKind,
}

/// `t -> ShellState` for one of the built-in families.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientPath {
    pub kind: PathKind,
    pub shell: usize,
    pub alpha: f64,
    pub documented_strata: Vec<Stratum>,
}

/// `sqrt(4 - 2 sqrt3)`: repeated asymptotic direction on the three-state path.
pub fn t_infinity() -> f64 {
    (4.0 - 2.0 * 3f64.sqrt()).sqrt()
}

/// `sqrt((3 - sqrt3) / 2)`: interior zero of the finite resultant.
pub fn t_reducible() -> f64 {
    ((3.0 - 3f64.sqrt()) / 2.0).sqrt()
}

/// `shell` is used only by the general family; the others have a fixed shell.
pub fn make_path(kind: PathKind, shell: usize) -> Result<CoefficientPath> {
    make_path_with_alpha(kind, shell, 1.0)
}

pub fn make_path_with_alpha(kind: PathKind, shell: usize, alpha: f64) -> Result<CoefficientPath> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::InvalidAlpha(alpha));
    }
    let (shell, documented_strata) = match kind {
        PathKind::N1Rotation => (1, Vec::new()),
        PathKind::N2Symmetric => (
            2,
            vec![
                Stratum {
                    t: FRAC_1_SQRT_2,
                    kind: StratumKind::RankDegenerate,
                },
                Stratum {
                    t: 1.0,
                    kind: StratumKind::FiniteAffine,
                },
            ],
        ),
        PathKind::N3ThreeState => (
            3,
            vec![
                Stratum {
                    t: 0.0,
                    kind: StratumKind::ReducibleEndpoint,
                },
                Stratum {
                    t: t_infinity(),
                    kind: StratumKind::Projective,
                },
                Stratum {
                    t: t_reducible(),
                    kind: StratumKind::ReducibleResultant,
                },
                Stratum {
                    t: 1.0,
                    kind: StratumKind::ReducibleEndpoint,
                },
            ],
        ),
        PathKind::General => {
            if shell == 0 {
                return Err(Error::GeneralShellZero);
            }
            if shell > crate::shell::MAX_SHELL {
                return Err(Error::ShellTooLarge(shell));
            }
            (shell, Vec::new())
        }
    };
    Ok(CoefficientPath {
        kind,
        shell,
        alpha,
        documented_strata,
    })
}

impl CoefficientPath {
    pub fn name(&self) -> String {
        match self.kind {
            PathKind::General => format!("general-N{}", self.shell),
            k => k.name().to_string(),
        }
    }

    /// Normalized coefficients `c_0 ..= c_N` at `t`.
    pub fn coeffs(&self, t: f64) -> Result<Vec<f64>> {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::ParameterOutOfRange(t));
        }
        let r = (1.0 - t * t).max(0.0).sqrt();
        let s = r * FRAC_1_SQRT_2;
        let c = match self.kind {
            PathKind::N1Rotation => vec![t, r],
            PathKind::N2Symmetric => vec![s, t, s],
            PathKind::N3ThreeState => vec![0.0, s, t, s],
            PathKind::General => {
                let n = self.shell;
                let mut c = vec![0.0; n + 1];
                c[0] += s;
                c[n] += s;
                c[n.div_ceil(2)] += t;
                // only N = 1 overlaps the end states with the centre state
                let norm = c.iter().map(|v| v * v).sum::<f64>().sqrt();
                c.iter().map(|v| v / norm).collect()
            }
        };
        Ok(c)
    }

    pub fn state(&self, t: f64) -> Result<ShellState> {
        let c = self.coeffs(t)?;
        match ShellState::new(self.shell, c.clone(), self.alpha) {
            Err(Error::NotNormalized(_)) => Ok(ShellState::normalized(self.shell, c, self.alpha)?.0),
            other => other,
        }
    }

    /// 61 uniform points plus every documented stratum and its `+-1e-3`
    /// neighbours inside `[0, 1]`.
    pub fn default_t_grid(&self) -> Vec<f64> {
        self.t_grid(61)
    }

    /// `steps` uniform points on `[0, 1]` plus the documented strata and
    /// their neighbours.
    pub fn t_grid(&self, steps: usize) -> Vec<f64> {
        let steps = steps.max(2);
        let mut ts: Vec<f64> = (0..steps).map(|k| k as f64 / (steps - 1) as f64).collect();
        for s in &self.documented_strata {
            for t in [s.t - 1e-3, s.t, s.t + 1e-3] {
                if (0.0..=1.0).contains(&t) {
                    ts.push(t);
                }
            }
        }
        sorted_unique(ts)
    }
}

fn sorted_unique(mut ts: Vec<f64>) -> Vec<f64> {
    ts.sort_by(f64::total_cmp);
    ts.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    ts
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Diagnostic {
    DetQ,
    DeltaInf,
    RFin,
}

impl Diagnostic {
    pub fn name(self) -> &'static str {
        match self {
            Diagnostic::DetQ => "det_q",
            Diagnostic::DeltaInf => "delta_inf",
            Diagnostic::RFin => "r_fin",
        }
    }

    fn shell(self) -> usize {
        match self {
            Diagnostic::DetQ => 2,
            Diagnostic::DeltaInf | Diagnostic::RFin => 3,
        }
    }

    /// Documented strata this diagnostic must reproduce.
    fn kinds(self) -> &'static [StratumKind] {
        match self {
            Diagnostic::DetQ => &[StratumKind::RankDegenerate],
            Diagnostic::DeltaInf => &[StratumKind::Projective],
            Diagnostic::RFin => &[StratumKind::ReducibleResultant, StratumKind::ReducibleEndpoint],
        }
    }

    pub fn value(self, state: &ShellState) -> Result<f64> {
        match self {
            Diagnostic::DetQ => Ok(conic_data(state)?.det_q),
            Diagnostic::DeltaInf => Ok(cubic_data(state)?.delta_inf),
            Diagnostic::RFin => Ok(cubic_data(state)?.r_fin),
        }
    }
}

impl FromStr for Diagnostic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [Diagnostic::DetQ, Diagnostic::DeltaInf, Diagnostic::RFin]
            .into_iter()
            .find(|d| d.name() == s || d.name().replace('_', "-") == s)
            .ok_or_else(|| Error::UnknownPath(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StratumEvent {
    pub t: f64,
    /// Documented stratum within `1e-9`, if any.
    pub matched: Option<StratumKind>,
}

const EVENT_SCAN: usize = 1000;
const EVENT_TOL: f64 = 1e-13;
const MATCH_TOL: f64 = 1e-9;

/// Zeros of the diagnostic along the path: sign changes on a 1000-interval
/// scan bisected below `1e-13`, plus exact zeros at scan points. Every
/// documented stratum of the matching kind must be found.
pub fn stratum_events(path: &CoefficientPath, diagnostic: Diagnostic) -> Result<Vec<StratumEvent>> {
    if path.shell != diagnostic.shell() {
        return Err(Error::DiagnosticNotApplicable {
            diagnostic: diagnostic.name(),
            shell: path.shell,
        });
    }
    let f = |t: f64| -> Result<f64> { diagnostic.value(&path.state(t)?) };
    let ts: Vec<f64> = (0..=EVENT_SCAN).map(|k| k as f64 / EVENT_SCAN as f64).collect();
    let vals: Vec<f64> = ts.iter().map(|&t| f(t)).collect::<Result<_>>()?;
    let scale = vals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut roots = Vec::new();
    for k in 0..=EVENT_SCAN {
        if vals[k].abs() <= 1e-14 * scale {
            roots.push(ts[k]);
            continue;
        }
        if k < EVENT_SCAN && vals[k] * vals[k + 1] < 0.0 && vals[k + 1].abs() > 1e-14 * scale {
            let (mut lo, mut hi, mut flo) = (ts[k], ts[k + 1], vals[k]);
            while hi - lo > EVENT_TOL {
                let mid = 0.5 * (lo + hi);
                let fm = f(mid)?;
                if fm == 0.0 {
                    lo = mid;
                    hi = mid;
                    break;
                }
                if (fm < 0.0) == (flo < 0.0) {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            roots.push(0.5 * (lo + hi));
        }
    }
    let events: Vec<StratumEvent> = roots
        .into_iter()
        .map(|t| StratumEvent {
            t,
            matched: path
                .documented_strata
                .iter()
                .find(|s| (s.t - t).abs() < MATCH_TOL)
                .map(|s| s.kind),
        })
        .collect();
    for s in &path.documented_strata {
        if diagnostic.kinds().contains(&s.kind) && !events.iter().any(|e| (e.t - s.t).abs() < MATCH_TOL) {
            return Err(Error::StratumNotBracketed {
                t: s.t,
                kind: s.kind.to_string(),
            });
        }
    }
    Ok(events)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub grid: GridSpec,
    pub quad: QuadConfig,
    /// Recount domains on a finer and on a wider grid and flag disagreements.
    pub refinement_check: bool,
    /// Use closed-form domain data at registered endpoints.
    pub analytic_endpoints: bool,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            grid: GridSpec::default(),
            quad: QuadConfig::default(),
            refinement_check: true,
            analytic_endpoints: true,
        }
    }
}

/// Closed-form domain data registered for this path at `t`, if any.
fn analytic_domains(
    path: &CoefficientPath,
    state: &ShellState,
    t: f64,
) -> Result<Option<crate::nodal::AnalyticDomains>> {
    if t != 0.0 && t != 1.0 {
        return Ok(None);
    }
    if let Some(n) = state.separable_index() {
        return Ok(Some(separable_domains(n, state.shell() - n)));
    }
    match (path.kind, t == 0.0) {
        (PathKind::N2Symmetric, true) => Ok(Some(circle_domains())),
        (PathKind::N3ThreeState, true) => Ok(Some(line_ellipse_domains()?)),
        _ => Ok(None),
    }
}

/// Full report for one state; failures are recorded in `flags`.
pub fn report_state(path: Option<&CoefficientPath>, state: &ShellState, t: f64, cfg: &SweepConfig) -> EntropyReport {
    let mut flags = Vec::new();
    let fail = |what: &str, e: Error, flags: &mut Vec<Flag>| flags.push(Flag::Failed(format!("{what}: {e}")));

    let s_r = match shannon_position_detailed(state, &cfg.quad) {
        Ok(r) => Some(r.value),
        Err(e) => {
            fail("S_r", e, &mut flags);
            None
        }
    };
    let (s_x, s_y) = match marginal_entropies(state, &cfg.quad) {
        Ok((x, y)) => (Some(x), Some(y)),
        Err(e) => {
            fail("marginals", e, &mut flags);
            (None, None)
        }
    };
    let mutual_info = match (s_x, s_y, s_r) {
        (Some(x), Some(y), Some(r)) => {
            let mi = mutual_information_from(x, y, r);
            if mi.clamped {
                flags.push(Flag::MiClamped);
            }
            Some(mi.value)
        }
        _ => None,
    };
    let s_p = s_r.map(|r| momentum_entropy(r, state.alpha()));
    let entropic_sum = s_r.zip(s_p).map(|(r, p)| r + p);

    let analytic = if cfg.analytic_endpoints {
        match path.map(|p| analytic_domains(p, state, t)).transpose() {
            Ok(a) => a.flatten(),
            Err(e) => {
                fail("endpoint", e, &mut flags);
                None
            }
        }
    } else {
        None
    };
    let (s_dom, n_domains, domain_weights) = if let Some(a) = analytic {
        flags.push(Flag::AnalyticEndpoint);
        (Some(a.sdom()), Some(a.count()), a.weights)
    } else {
        match partition_state(state, &cfg.grid) {
            Ok(part) => {
                if cfg.refinement_check {
                    // a finer cell catches near-touching branches, a wider
                    // window catches branches that close far out
                    let recount = [cfg.grid.refined(), cfg.grid.widened()]
                        .iter()
                        .map(|g| partition_state(state, g).map(|p| p.count()))
                        .collect::<Result<Vec<_>>>();
                    match recount {
                        Ok(c) if c.iter().any(|&n| n != part.count()) => flags.push(Flag::UnresolvedStratum),
                        Ok(_) => {}
                        Err(e) => fail("refined grid", e, &mut flags),
                    }
                }
                (Some(sdom(&part)), Some(part.count()), part.weights)
            }
            Err(e) => {
                fail("nodal", e, &mut flags);
                (None, None, Vec::new())
            }
        }
    };

    let diagnostics = match diagnose(state) {
        Ok(d) => d,
        Err(e) => {
            fail("diagnostics", e, &mut flags);
            StratumDiagnostics::default()
        }
    };
    let radial_moment = match radial_second_moment(state) {
        Ok(m) => Some(m),
        Err(e) => {
            fail("moment", e, &mut flags);
            None
        }
    };
    EntropyReport {
        t,
        coeffs: state.coeffs().to_vec(),
        s_r,
        s_x,
        s_y,
        mutual_info,
        s_p,
        entropic_sum,
        s_dom,
        n_domains,
        domain_weights,
        radial_moment,
        diagnostics,
        flags,
    }
}

/// One report per `t`, in input order. A point that cannot even build its
/// state yields a report with every value absent and a failure flag.
pub fn sweep(path: &CoefficientPath, t_values: &[f64], cfg: &SweepConfig) -> Vec<EntropyReport> {
    t_values
        .par_iter()
        .map(|&t| match path.state(t) {
            Ok(state) => report_state(Some(path), &state, t, cfg),
            Err(e) => EntropyReport {
                t,
                coeffs: Vec::new(),
                s_r: None,
                s_x: None,
                s_y: None,
                mutual_info: None,
                s_p: None,
                entropic_sum: None,
                s_dom: None,
                n_domains: None,
                domain_weights: Vec::new(),
                radial_moment: None,
                diagnostics: StratumDiagnostics::default(),
                flags: vec![Flag::Failed(format!("state: {e}"))],
            },
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_kinds() {
        for k in PathKind::ALL {
            assert_eq!(k.name().parse::<PathKind>().unwrap(), k);
        }
        assert!(matches!("n4-spiral".parse::<PathKind>(), Err(Error::UnknownPath(_))));
    }

    #[test]
    fn endpoint_coefficients() {
        let n2 = make_path(PathKind::N2Symmetric, 0).unwrap();
        assert_eq!(n2.coeffs(1.0).unwrap(), vec![0.0, 1.0, 0.0]);
        let n3 = make_path(PathKind::N3ThreeState, 0).unwrap();
        let c = n3.coeffs(0.0).unwrap();
        assert_eq!(c[0], 0.0);
        assert_eq!(c[2], 0.0);
        assert!((c[1] - FRAC_1_SQRT_2).abs() < 1e-15 && (c[3] - FRAC_1_SQRT_2).abs() < 1e-15);
        let g4 = make_path(PathKind::General, 4).unwrap();
        assert_eq!(g4.coeffs(1.0).unwrap(), vec![0.0, 0.0, 1.0, 0.0, 0.0]);
        assert_eq!(g4.state(1.0).unwrap().separable_index(), Some(2));
        assert!(n2.coeffs(1.2).is_err());
    }

    #[test]
    fn paths_stay_normalized() {
        let mut paths: Vec<CoefficientPath> = [PathKind::N1Rotation, PathKind::N2Symmetric, PathKind::N3ThreeState]
            .into_iter()
            .map(|k| make_path(k, 0).unwrap())
            .collect();
        paths.extend((1..=6).map(|n| make_path(PathKind::General, n).unwrap()));
        for p in &paths {
            for k in 0..=1000 {
                let t = k as f64 / 1000.0;
                let c = p.state(t).unwrap();
                let norm: f64 = c.coeffs().iter().map(|v| v * v).sum();
                assert!((norm - 1.0).abs() < 1e-12, "{} t={t}", p.name());
            }
        }
    }

    #[test]
    fn det_q_event_is_one_over_root_two() {
        let p = make_path(PathKind::N2Symmetric, 0).unwrap();
        let ev = stratum_events(&p, Diagnostic::DetQ).unwrap();
        assert_eq!(ev.len(), 1);
        assert!((ev[0].t - FRAC_1_SQRT_2).abs() < 1e-12);
        assert_eq!(ev[0].matched, Some(StratumKind::RankDegenerate));
    }

    #[test]
    fn cubic_events() {
        let p = make_path(PathKind::N3ThreeState, 0).unwrap();
        let inf = stratum_events(&p, Diagnostic::DeltaInf).unwrap();
        assert!(inf.iter().any(|e| (e.t - t_infinity()).abs() < 1e-12));
        let fin = stratum_events(&p, Diagnostic::RFin).unwrap();
        let interior: Vec<f64> = fin.iter().map(|e| e.t).filter(|&t| t > 0.0 && t < 1.0).collect();
        assert_eq!(interior.len(), 1);
        assert!((interior[0] - t_reducible()).abs() < 1e-12);
        assert!(stratum_events(&p, Diagnostic::DetQ).is_err());
    }

    #[test]
    fn default_grid_contains_strata_neighbours() {
        let p = make_path(PathKind::N2Symmetric, 0).unwrap();
        let ts = p.default_t_grid();
        assert!(ts.iter().any(|&t| (t - (FRAC_1_SQRT_2 - 1e-3)).abs() < 1e-15));
        assert!(ts.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(*ts.last().unwrap(), 1.0);
    }

    #[test]
    fn sweep_records_bad_parameter_without_aborting() {
        let p = make_path(PathKind::N1Rotation, 0).unwrap();
        let cfg = SweepConfig {
            quad: QuadConfig {
                panels_per_axis: 100,
                ..Default::default()
            },
            ..Default::default()
        };
        let out = sweep(&p, &[0.5, 1.5], &cfg);
        assert_eq!(out.len(), 2);
        assert!(!out[0].has_failures());
        assert!(out[1].has_failures());
        assert_eq!(out[0].n_domains, Some(2));
    }
}
