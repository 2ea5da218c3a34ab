//! WebAssembly bindings for the static demo page in `www/`: nodal curves of a
//! path state as SVG, a full single-state diagnosis, and a nodal-domain scan
//! along a path.

use std::str::FromStr;

use serde::Serialize;
use wasm_bindgen::prelude::*;

use oscishell::entropy::QuadConfig;
use oscishell::nodal::contour::DEFAULT_CONTOUR_SUBDIVISIONS;
use oscishell::nodal::{contour_polylines, grid_polynomial, partition_state, polylines_to_svg, sdom, GridSpec};
use oscishell::paths::{make_path, CoefficientPath, PathKind, SweepConfig};
use oscishell::report::{diagnosis, to_json};
use oscishell::shell::{build_affine_poly, ShellState};

type Result<T> = std::result::Result<T, String>;

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn path(name: &str, shell: usize) -> Result<CoefficientPath> {
    make_path(PathKind::from_str(name).map_err(err)?, shell).map_err(err)
}

/// Lighter than the command-line defaults so the page stays responsive.
fn demo_config() -> SweepConfig {
    SweepConfig {
        quad: QuadConfig {
            panels_per_axis: 200,
            abs_tol: 1e-5,
            max_panels: 800,
            ..QuadConfig::default()
        },
        refinement_check: false,
        ..SweepConfig::default()
    }
}

pub fn path_coeffs_impl(name: &str, shell: usize, t: f64) -> Result<Vec<f64>> {
    path(name, shell)?.coeffs(t).map_err(err)
}

pub fn contour_svg_impl(name: &str, shell: usize, t: f64, window: f64) -> Result<String> {
    let state = path(name, shell)?.state(t).map_err(err)?;
    let poly = grid_polynomial(&build_affine_poly(&state), state.alpha());
    let grid = GridSpec::new(window, DEFAULT_CONTOUR_SUBDIVISIONS).map_err(err)?;
    let lines = contour_polylines(&poly, &grid);
    Ok(polylines_to_svg(&[(format!("t = {t:.4}"), lines)], window))
}

pub fn diagnose_impl(shell: usize, coeffs: &[f64], alpha: f64) -> Result<String> {
    let (state, norm_sq) = ShellState::normalized(shell, coeffs.to_vec(), alpha).map_err(err)?;
    to_json(&diagnosis(&state, norm_sq, &demo_config())).map_err(err)
}

#[derive(Debug, Serialize)]
pub struct ScanPoint {
    pub t: f64,
    pub n_domains: usize,
    pub s_dom: f64,
}

pub fn domain_scan_impl(name: &str, shell: usize, steps: usize) -> Result<Vec<ScanPoint>> {
    if steps < 2 {
        return Err("need at least two steps".into());
    }
    let p = path(name, shell)?;
    let grid = GridSpec::default();
    (0..steps)
        .map(|k| {
            let t = k as f64 / (steps - 1) as f64;
            let part = partition_state(&p.state(t).map_err(err)?, &grid).map_err(err)?;
            Ok(ScanPoint {
                t,
                n_domains: part.count(),
                s_dom: sdom(&part),
            })
        })
        .collect()
}

#[wasm_bindgen]
pub fn path_coeffs(name: &str, shell: usize, t: f64) -> std::result::Result<Vec<f64>, JsError> {
    path_coeffs_impl(name, shell, t).map_err(|e| JsError::new(&e))
}

/// Nodal curves of the path state at `t` as a standalone SVG document.
#[wasm_bindgen]
pub fn contour_svg(name: &str, shell: usize, t: f64, window: f64) -> std::result::Result<String, JsError> {
    contour_svg_impl(name, shell, t, window).map_err(|e| JsError::new(&e))
}

/// Diagnosis report as JSON; coefficients need not be normalized.
#[wasm_bindgen]
pub fn diagnose(shell: usize, coeffs: Vec<f64>, alpha: f64) -> std::result::Result<String, JsError> {
    diagnose_impl(shell, &coeffs, alpha).map_err(|e| JsError::new(&e))
}

/// `[{t, n_domains, s_dom}, ...]` on a uniform grid of `steps` points.
#[wasm_bindgen]
pub fn domain_scan(name: &str, shell: usize, steps: usize) -> std::result::Result<String, JsError> {
    domain_scan_impl(name, shell, steps)
        .and_then(|v| serde_json::to_string(&v).map_err(err))
        .map_err(|e| JsError::new(&e))
}
