//! CSV and JSON serialization of sweep rows, and the single-state diagnosis
//! report.
//!
//! CSV floats use `{:.16e}` (17 significant digits), which reads back to the
//! same bits. JSON floats use the shortest round-trip form.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::entropy::{EntropyReport, Flag};
use crate::error::{Error, Result};
use crate::nodal::contour::{contour_polylines, DEFAULT_CONTOUR_SUBDIVISIONS, DEFAULT_WINDOW};
use crate::nodal::{grid_polynomial, GridSpec};
use crate::paths::{report_state, SweepConfig};
use crate::polyalgebra::{critical_points, CriticalPoint, StratumDiagnostics, DEFAULT_SEARCH_BOX};
use crate::shell::{build_affine_poly, ShellState};

pub const SCHEMA: &str = "oscishell/1";
pub const CSV_HEADER: &str = "t,S_r,S_x,S_y,I_xy,S_p,S_sum,S_dom,n_domains,det_q,delta_inf,r_fin,delta_crit,flags";

pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

fn opt(v: Option<f64>) -> String {
    v.map(format_float).unwrap_or_default()
}

/// Flags joined by `;`, with separators inside messages blanked out.
pub fn flags_field(flags: &[Flag]) -> String {
    flags
        .iter()
        .map(|f| f.to_string().replace([',', ';', '\n', '"'], " "))
        .collect::<Vec<_>>()
        .join(";")
}

pub fn csv_row(r: &EntropyReport) -> String {
    let d = &r.diagnostics;
    [
        format_float(r.t),
        opt(r.s_r),
        opt(r.s_x),
        opt(r.s_y),
        opt(r.mutual_info),
        opt(r.s_p),
        opt(r.entropic_sum),
        opt(r.s_dom),
        r.n_domains.map(|n| n.to_string()).unwrap_or_default(),
        opt(d.det_q),
        opt(d.delta_inf),
        opt(d.r_fin),
        opt(d.delta_crit),
        flags_field(&r.flags),
    ]
    .join(",")
}

pub fn to_csv(reports: &[EntropyReport]) -> String {
    let mut out = String::with_capacity(256 * (reports.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in reports {
        out.push_str(&csv_row(r));
        out.push('\n');
    }
    out
}

/// One CSV row read back: numeric columns in header order (`n_domains`
/// included as a float) and the raw flags field.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvRow {
    pub values: Vec<Option<f64>>,
    pub flags: String,
}

pub fn parse_csv(text: &str) -> Result<Vec<CsvRow>> {
    let mut lines = text.lines();
    if lines.next() != Some(CSV_HEADER) {
        return Err(Error::Parse("missing or unexpected CSV header".into()));
    }
    let columns = CSV_HEADER.split(',').count();
    lines
        .filter(|l| !l.is_empty())
        .map(|line| {
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != columns {
                return Err(Error::Parse(format!("expected {columns} fields, got {}", fields.len())));
            }
            let values = fields[..columns - 1]
                .iter()
                .map(|f| {
                    if f.is_empty() {
                        Ok(None)
                    } else {
                        f.parse::<f64>()
                            .map(Some)
                            .map_err(|e| Error::Parse(format!("`{f}`: {e}")))
                    }
                })
                .collect::<Result<_>>()?;
            Ok(CsvRow {
                values,
                flags: fields[columns - 1].to_string(),
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepDocument {
    pub schema: String,
    pub path: String,
    pub shell: usize,
    pub alpha: f64,
    pub reports: Vec<EntropyReport>,
}

impl SweepDocument {
    pub fn new(path: String, shell: usize, alpha: f64, reports: Vec<EntropyReport>) -> Self {
        Self {
            schema: SCHEMA.to_string(),
            path,
            shell,
            alpha,
            reports,
        }
    }
}

pub fn to_json<T: Serialize>(doc: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(doc).map_err(|e| Error::Parse(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

pub fn sweep_from_json(text: &str) -> Result<SweepDocument> {
    let doc: SweepDocument = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    if doc.schema != SCHEMA {
        return Err(Error::Parse(format!("unsupported schema `{}`", doc.schema)));
    }
    Ok(doc)
}

/// Everything known about one state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagnosisReport {
    pub schema: String,
    pub shell: usize,
    pub alpha: f64,
    pub coeffs: Vec<f64>,
    /// `sum c_n^2` of the coefficients as given, before normalization.
    pub input_norm_sq: f64,
    /// Monomial terms `(i, j, c)` of `P(x, y)`, `c x^i y^j`.
    pub polynomial: Vec<(usize, usize, f64)>,
    pub diagnostics: StratumDiagnostics,
    pub critical_points: Vec<CriticalPoint>,
    /// Zero-contour polylines inside the default plotting window.
    pub contour_pieces: usize,
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
    pub flags: Vec<Flag>,
}

pub fn diagnosis(state: &ShellState, input_norm_sq: f64, cfg: &SweepConfig) -> DiagnosisReport {
    let r = report_state(None, state, 0.0, cfg);
    let poly = build_affine_poly(state);
    let alpha = state.alpha();
    let window = GridSpec {
        half_width: DEFAULT_WINDOW,
        subdivisions: DEFAULT_CONTOUR_SUBDIVISIONS,
    };
    DiagnosisReport {
        schema: SCHEMA.to_string(),
        shell: state.shell(),
        alpha,
        coeffs: state.coeffs().to_vec(),
        input_norm_sq,
        polynomial: poly.terms().collect(),
        diagnostics: r.diagnostics,
        critical_points: critical_points(&poly, DEFAULT_SEARCH_BOX / alpha.sqrt()),
        contour_pieces: contour_polylines(&grid_polynomial(&poly, alpha), &window).len(),
        s_r: r.s_r,
        s_x: r.s_x,
        s_y: r.s_y,
        mutual_info: r.mutual_info,
        s_p: r.s_p,
        entropic_sum: r.entropic_sum,
        s_dom: r.s_dom,
        n_domains: r.n_domains,
        domain_weights: r.domain_weights,
        radial_moment: r.radial_moment,
        flags: r.flags,
    }
}

fn line(out: &mut String, label: &str, v: Option<f64>) {
    let _ = match v {
        Some(v) => writeln!(out, "{label:<22}{}", format_float(v)),
        None => writeln!(out, "{label:<22}-"),
    };
}

pub fn render_text(d: &DiagnosisReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "shell N = {}, alpha = {}", d.shell, format_float(d.alpha));
    let coeffs: Vec<String> = d.coeffs.iter().map(|c| format_float(*c)).collect();
    let _ = writeln!(out, "coefficients          {}", coeffs.join(", "));
    let _ = writeln!(out, "P(x, y) terms:");
    for (i, j, c) in &d.polynomial {
        let _ = writeln!(out, "  {:>24}  x^{i} y^{j}", format_float(*c));
    }
    let g = &d.diagnostics;
    line(&mut out, "det_q", g.det_q);
    line(&mut out, "affine_d", g.affine_d);
    line(&mut out, "conic_discriminant", g.conic_discriminant);
    line(&mut out, "delta_inf", g.delta_inf);
    line(&mut out, "r_fin", g.r_fin);
    let _ = writeln!(out, "critical points       {}", d.critical_points.len());
    for c in &d.critical_points {
        let _ = writeln!(
            out,
            "  ({}, {})  P = {}",
            format_float(c.location[0]),
            format_float(c.location[1]),
            format_float(c.value)
        );
    }
    line(&mut out, "delta_crit", g.delta_crit);
    let _ = writeln!(out, "asymptotic rays       {}", g.ray_angles.len());
    for r in &g.ray_angles {
        let kind = if r.simple { "simple" } else { "repeated" };
        let _ = writeln!(out, "  theta = {}  {kind}", format_float(r.angle));
    }
    let _ = writeln!(out, "contour pieces        {}", d.contour_pieces);
    match d.n_domains {
        Some(n) => {
            let _ = writeln!(out, "nodal domains         {n}");
        }
        None => {
            let _ = writeln!(out, "nodal domains         -");
        }
    }
    for (k, w) in d.domain_weights.iter().enumerate() {
        let _ = writeln!(out, "  p_{k} = {}", format_float(*w));
    }
    line(&mut out, "S_dom", d.s_dom);
    line(&mut out, "S_r", d.s_r);
    line(&mut out, "S_x", d.s_x);
    line(&mut out, "S_y", d.s_y);
    line(&mut out, "I_xy", d.mutual_info);
    line(&mut out, "S_p", d.s_p);
    line(&mut out, "S_r + S_p", d.entropic_sum);
    let _ = writeln!(
        out,
        "alpha<r^2>            {} (expected {})",
        d.radial_moment.map(format_float).unwrap_or_else(|| "-".into()),
        d.shell + 1
    );
    let _ = writeln!(out, "flags                 {}", flags_field(&d.flags));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entropy::QuadConfig;
    use crate::paths::{make_path, sweep, PathKind};

    fn quick() -> SweepConfig {
        SweepConfig {
            quad: QuadConfig {
                panels_per_axis: 200,
                abs_tol: 1e-4,
                ..Default::default()
            },
            refinement_check: false,
            ..Default::default()
        }
    }

    #[test]
    fn csv_round_trip_is_bit_exact() {
        let path = make_path(PathKind::N2Symmetric, 2).unwrap();
        let reports = sweep(&path, &[0.0, 0.3, 1.0], &quick());
        let text = to_csv(&reports);
        let rows = parse_csv(&text).unwrap();
        assert_eq!(rows.len(), 3);
        for (row, r) in rows.iter().zip(&reports) {
            assert_eq!(row.values[0].unwrap().to_bits(), r.t.to_bits());
            assert_eq!(row.values[1].unwrap().to_bits(), r.s_r.unwrap().to_bits());
            assert_eq!(row.values[7].unwrap().to_bits(), r.s_dom.unwrap().to_bits());
            assert_eq!(row.values[9].unwrap().to_bits(), r.diagnostics.det_q.unwrap().to_bits());
            // no cubic data on N = 2
            assert_eq!(row.values[10], None);
        }
        assert!(rows[2].flags.contains("analytic-endpoint"));
    }

    #[test]
    fn json_round_trip_is_exact() {
        let path = make_path(PathKind::N1Rotation, 1).unwrap();
        let reports = sweep(&path, &[0.2, 0.7], &quick());
        let doc = SweepDocument::new(path.name(), 1, 1.0, reports);
        let back = sweep_from_json(&to_json(&doc).unwrap()).unwrap();
        assert_eq!(back, doc);
    }

    #[test]
    fn rejects_other_schema() {
        let text = r#"{"schema":"other","path":"x","shell":1,"alpha":1.0,"reports":[]}"#;
        assert!(sweep_from_json(text).is_err());
        assert!(parse_csv("a,b\n").is_err());
    }

    #[test]
    fn flags_never_break_columns() {
        let flags = vec![Flag::MiClamped, Flag::Failed("a, b; c".into())];
        let f = flags_field(&flags);
        assert!(!f.contains(','));
        assert_eq!(f.split(';').count(), 2);
    }

    #[test]
    fn diagnosis_of_cross() {
        let s = ShellState::new(2, vec![0.0, 1.0, 0.0], 1.0).unwrap();
        let d = diagnosis(&s, 1.0, &quick());
        assert_eq!(d.n_domains, Some(4));
        assert!(d.diagnostics.det_q.unwrap() < 0.0);
        assert_eq!(d.critical_points.len(), 1);
        let text = render_text(&d);
        assert!(text.contains("nodal domains         4"));
        let back: DiagnosisReport = serde_json::from_str(&to_json(&d).unwrap()).unwrap();
        assert_eq!(back, d);
    }
}
