//! Nodal-curve geometry at the documented special points of the paths.

use std::f64::consts::FRAC_1_SQRT_2;

use oscishell::nodal::contour::{contour_polylines, DEFAULT_CONTOUR_SUBDIVISIONS, DEFAULT_WINDOW};
use oscishell::nodal::{grid_polynomial, GridSpec, Polyline};
use oscishell::paths::{make_path, PathKind};
use oscishell::shell::build_affine_poly;

fn contour(kind: PathKind, t: f64) -> Vec<Polyline> {
    let state = make_path(kind, 3).unwrap().state(t).unwrap();
    let poly = grid_polynomial(&build_affine_poly(&state), state.alpha());
    contour_polylines(
        &poly,
        &GridSpec::new(DEFAULT_WINDOW, DEFAULT_CONTOUR_SUBDIVISIONS).unwrap(),
    )
}

/// Largest distance of any vertex from the chord through the end points.
fn straightness(line: &Polyline) -> f64 {
    let a = line.points[0];
    let b = *line.points.last().unwrap();
    let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
    let len = dx.hypot(dy);
    line.points
        .iter()
        .map(|p| ((p[0] - a[0]) * dy - (p[1] - a[1]) * dx).abs() / len)
        .fold(0.0, f64::max)
}

#[test]
fn circle_at_n2_start() {
    let lines = contour(PathKind::N2Symmetric, 0.0);
    assert_eq!(lines.len(), 1);
    assert!(lines[0].closed);
    for p in &lines[0].points {
        assert!((p[0].hypot(p[1]) - 1.0).abs() < 1e-9);
    }
}

#[test]
fn parallel_lines_at_rank_degenerate_point() {
    let lines = contour(PathKind::N2Symmetric, FRAC_1_SQRT_2);
    assert_eq!(lines.len(), 2);
    let dirs: Vec<f64> = lines
        .iter()
        .map(|l| {
            assert!(!l.closed);
            assert!(straightness(l) < 1e-9);
            let (a, b) = (l.points[0], *l.points.last().unwrap());
            (b[1] - a[1]).atan2(b[0] - a[0]).rem_euclid(std::f64::consts::PI)
        })
        .collect();
    assert!((dirs[0] - dirs[1]).abs() < 1e-9);
}

#[test]
fn three_lines_at_n3_end() {
    let lines = contour(PathKind::N3ThreeState, 1.0);
    assert_eq!(lines.len(), 3);
    let mut horizontal = 0;
    let mut vertical = 0;
    for l in &lines {
        assert!(straightness(l) < 1e-9);
        if l.points.iter().all(|p| p[1].abs() < 1e-9) {
            horizontal += 1;
        }
        if l.points.iter().all(|p| (p[0].abs() - 0.5f64.sqrt()).abs() < 1e-9) {
            vertical += 1;
        }
    }
    assert_eq!((horizontal, vertical), (1, 2));
}
