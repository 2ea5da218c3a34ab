//! Zero-level polylines by marching squares.
//!
//! Edge crossings are located by bisection on the polynomial itself, so each
//! vertex sits on the curve to near machine precision rather than at the
//! linear-interpolation estimate. A saddle cell holding a singular point of
//! the curve is drawn as two straight strands through that point; other saddle
//! cells are resolved by the sign at the cell centre. Segments are chained
//! through shared edge keys.

use std::collections::HashMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::GridSpec;
use crate::poly::BivariatePoly;

pub const DEFAULT_CONTOUR_SUBDIVISIONS: usize = 321;
pub const DEFAULT_WINDOW: f64 = 3.2;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polyline {
    pub points: Vec<[f64; 2]>,
    pub closed: bool,
}

/// Edge between node `(i, j)` and `(i + 1, j)` (horizontal) or `(i, j + 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Edge {
    H(usize, usize),
    V(usize, usize),
}

fn crossing(poly: &BivariatePoly, a: [f64; 2], b: [f64; 2], fa: f64, fb: f64) -> [f64; 2] {
    if fa == 0.0 {
        return a;
    }
    if fb == 0.0 {
        return b;
    }
    let (mut lo, mut hi, mut flo) = (0.0, 1.0, fa);
    let at = |s: f64| [a[0] + s * (b[0] - a[0]), a[1] + s * (b[1] - a[1])];
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        let p = at(mid);
        let fm = poly.eval(p[0], p[1]);
        if fm == 0.0 {
            return p;
        }
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    at(0.5 * (lo + hi))
}

/// Singular point (`P = grad P = 0`) inside the cell with lower-left corner
/// `(x0, y0)` and side `h`, by Newton on the gradient from the centre.
fn singular_point(poly: &BivariatePoly, x0: f64, y0: f64, h: f64, corner_scale: f64) -> Option<[f64; 2]> {
    let px = poly.partial_x();
    let py = poly.partial_y();
    let (pxx, pxy, pyy) = (px.partial_x(), px.partial_y(), py.partial_y());
    let (mut x, mut y) = (x0 + 0.5 * h, y0 + 0.5 * h);
    for _ in 0..30 {
        let (gx, gy) = (px.eval(x, y), py.eval(x, y));
        let (a, b, d) = (pxx.eval(x, y), pxy.eval(x, y), pyy.eval(x, y));
        let det = a * d - b * b;
        if det == 0.0 || !det.is_finite() {
            return None;
        }
        let (dx, dy) = ((d * gx - b * gy) / det, (a * gy - b * gx) / det);
        x -= dx;
        y -= dy;
        if dx.hypot(dy) < 1e-15 * h {
            break;
        }
    }
    let inside = x >= x0 && x <= x0 + h && y >= y0 && y <= y0 + h;
    (inside && poly.eval(x, y).abs() <= SINGULAR_REL * corner_scale).then_some([x, y])
}

/// `|P|` at a crossing relative to the largest corner value of its cell.
const SINGULAR_REL: f64 = 1e-9;

/// Edge crossings along a strand, each with the singular point that follows it.
type Chain = Vec<(Edge, Option<[f64; 2]>)>;

/// Zero contour of `poly` (evaluated in grid coordinates) on the grid square.
pub fn contour_polylines(poly: &BivariatePoly, grid: &GridSpec) -> Vec<Polyline> {
    let side = grid.side();
    let n = grid.subdivisions;
    let mut values = vec![0.0; side * side];
    for j in 0..side {
        let row = poly.restrict_y(grid.coord(j));
        for i in 0..side {
            let x = grid.coord(i);
            values[j * side + i] = row.iter().rev().fold(0.0, |a, c| a * x + c);
        }
    }
    let v = |i: usize, j: usize| values[j * side + i];
    // zero counts as positive so every edge has a definite crossing state
    let neg = |i: usize, j: usize| v(i, j) < 0.0;
    let node = |i: usize, j: usize| [grid.coord(i), grid.coord(j)];

    let mut points: HashMap<Edge, [f64; 2]> = HashMap::new();
    let mut point_of = |e: Edge| -> [f64; 2] {
        *points.entry(e).or_insert_with(|| {
            let (a, b) = match e {
                Edge::H(i, j) => ((i, j), (i + 1, j)),
                Edge::V(i, j) => ((i, j), (i, j + 1)),
            };
            crossing(poly, node(a.0, a.1), node(b.0, b.1), v(a.0, a.1), v(b.0, b.1))
        })
    };

    // a segment joins two edge crossings, optionally through a singular point
    let mut segments: Vec<(Edge, Edge, Option<[f64; 2]>)> = Vec::new();
    for j in 0..n {
        for i in 0..n {
            // corners: 0 = (i, j), 1 = (i+1, j), 2 = (i+1, j+1), 3 = (i, j+1)
            let case = (neg(i, j) as u8)
                | (neg(i + 1, j) as u8) << 1
                | (neg(i + 1, j + 1) as u8) << 2
                | (neg(i, j + 1) as u8) << 3;
            let bottom = Edge::H(i, j);
            let right = Edge::V(i + 1, j);
            let top = Edge::H(i, j + 1);
            let left = Edge::V(i, j);
            let pairs: Vec<(Edge, Edge, Option<[f64; 2]>)> = match case {
                0 | 15 => vec![],
                1 | 14 => vec![(left, bottom, None)],
                2 | 13 => vec![(bottom, right, None)],
                3 | 12 => vec![(left, right, None)],
                4 | 11 => vec![(right, top, None)],
                6 | 9 => vec![(bottom, top, None)],
                7 | 8 => vec![(left, top, None)],
                5 | 10 => {
                    let scale = [v(i, j), v(i + 1, j), v(i + 1, j + 1), v(i, j + 1)]
                        .iter()
                        .fold(0.0f64, |m, c| m.max(c.abs()));
                    if let Some(p) = singular_point(poly, grid.coord(i), grid.coord(j), grid.cell(), scale) {
                        segments.push((bottom, top, Some(p)));
                        segments.push((left, right, Some(p)));
                        continue;
                    }
                    let center = poly.eval(
                        0.5 * (grid.coord(i) + grid.coord(i + 1)),
                        0.5 * (grid.coord(j) + grid.coord(j + 1)),
                    );
                    // corner 0 shares the centre's sign: it stays connected
                    // to corner 2 and corners 1, 3 are cut off
                    let center_like_0 = (center < 0.0) == neg(i, j);
                    if center_like_0 {
                        vec![(bottom, right, None), (top, left, None)]
                    } else {
                        vec![(left, bottom, None), (right, top, None)]
                    }
                }
                _ => unreachable!(),
            };
            segments.extend(pairs);
        }
    }

    let mut incident: HashMap<Edge, Vec<usize>> = HashMap::new();
    for (k, &(a, b, _)) in segments.iter().enumerate() {
        incident.entry(a).or_default().push(k);
        incident.entry(b).or_default().push(k);
    }
    let mut used = vec![false; segments.len()];
    let mut lines: Vec<Polyline> = Vec::new();
    // returns the crossings visited, with any singular point between them
    let walk = |start: usize, from: Edge, used: &mut Vec<bool>| -> (Chain, bool) {
        let mut chain = vec![(from, None)];
        let mut seg = start;
        let mut at = from;
        loop {
            used[seg] = true;
            let (a, b, via) = segments[seg];
            let next = if a == at { b } else { a };
            chain.push((next, via));
            if next == from {
                return (chain, true);
            }
            let Some(&cont) = incident[&next].iter().find(|&&s| !used[s]) else {
                return (chain, false);
            };
            seg = cont;
            at = next;
        }
    };
    // open chains start at edges with a single incident segment
    let mut order: Vec<usize> = (0..segments.len()).collect();
    order.sort_by_key(|&k| {
        let (a, b, _) = segments[k];
        !(incident[&a].len() == 1 || incident[&b].len() == 1)
    });
    for k in order {
        if used[k] {
            continue;
        }
        let (a, b, _) = segments[k];
        let from = if incident[&a].len() == 1 || incident[&b].len() != 1 {
            a
        } else {
            b
        };
        let (chain, closed) = walk(k, from, &mut used);
        let mut pts: Vec<[f64; 2]> = Vec::with_capacity(chain.len());
        for (e, via) in chain {
            for p in via.into_iter().chain(std::iter::once(point_of(e))) {
                if pts.last() != Some(&p) {
                    pts.push(p);
                }
            }
        }
        if pts.len() >= 2 {
            lines.push(Polyline { points: pts, closed });
        }
    }
    lines
}

/// One polyline per line, vertices `x,y` separated by spaces. Closed lines
/// repeat their first vertex.
pub fn polylines_to_text(lines: &[Polyline]) -> String {
    let mut out = String::new();
    for line in lines {
        let body: Vec<String> = line
            .points
            .iter()
            .map(|p| format!("{:.16e},{:.16e}", p[0], p[1]))
            .collect();
        out.push_str(&body.join(" "));
        out.push('\n');
    }
    out
}

/// Static SVG 1.1 with the window as view box, `y` pointing up.
pub fn polylines_to_svg(groups: &[(String, Vec<Polyline>)], window: f64) -> String {
    let size = 2.0 * window;
    let mut out = String::new();
    let cols = groups.len().max(1);
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{}" height="320" viewBox="0 0 {} {}">"#,
        320 * cols,
        size * cols as f64,
        size
    );
    for (k, (label, lines)) in groups.iter().enumerate() {
        let dx = k as f64 * size + window;
        let _ = writeln!(out, r#"<g transform="translate({dx} {window}) scale(1 -1)">"#);
        let _ = writeln!(
            out,
            r#"<rect x="{}" y="{}" width="{size}" height="{size}" fill="none" stroke="gray" stroke-width="{}"/>"#,
            -window,
            -window,
            size / 400.0
        );
        for line in lines {
            let mut d = String::new();
            for (i, p) in line.points.iter().enumerate() {
                let _ = write!(d, "{}{:.6},{:.6} ", if i == 0 { "M" } else { "L" }, p[0], p[1]);
            }
            if line.closed {
                d.push('Z');
            }
            let _ = writeln!(
                out,
                r#"<path d="{}" fill="none" stroke="black" stroke-width="{}"/>"#,
                d.trim_end(),
                size / 200.0
            );
        }
        let _ = writeln!(out, "</g>");
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" font-size="{}" font-family="sans-serif">{}</text>"#,
            k as f64 * size + size * 0.03,
            size * 0.07,
            size * 0.05,
            label
        );
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> GridSpec {
        GridSpec::new(DEFAULT_WINDOW, DEFAULT_CONTOUR_SUBDIVISIONS).unwrap()
    }

    #[test]
    fn circle_is_one_closed_line() {
        let p = BivariatePoly::from_terms([(2, 0, 1.0), (0, 2, 1.0), (0, 0, -1.0)]);
        let lines = contour_polylines(&p, &grid());
        assert_eq!(lines.len(), 1);
        assert!(lines[0].closed);
        for q in &lines[0].points {
            assert!((q[0].hypot(q[1]) - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn line_through_origin() {
        let (a, b) = (0.6, 0.8);
        let p = BivariatePoly::from_terms([(1, 0, a), (0, 1, b)]);
        let lines = contour_polylines(&p, &grid());
        assert_eq!(lines.len(), 1);
        assert!(!lines[0].closed);
        let dir = (-a).atan2(b);
        for q in &lines[0].points {
            assert!(p.eval(q[0], q[1]).abs() < 1e-12);
            let cross = q[0] * dir.sin() - q[1] * dir.cos();
            assert!(cross.abs() < 1e-12);
        }
    }

    #[test]
    fn crossing_lines_split_into_four_arms_or_two_lines() {
        // xy: the saddle sits between nodes for an odd grid
        let p = BivariatePoly::from_terms([(1, 1, 1.0)]);
        let lines = contour_polylines(&p, &grid());
        let total: usize = lines.iter().map(|l| l.points.len()).sum();
        assert!(lines.len() == 2 || lines.len() == 4, "{}", lines.len());
        assert!(total > 600);
    }

    #[test]
    fn text_and_svg_formats() {
        let p = BivariatePoly::from_terms([(1, 0, 1.0)]);
        let lines = contour_polylines(&p, &GridSpec::new(1.0, 17).unwrap());
        let text = polylines_to_text(&lines);
        assert_eq!(text.lines().count(), 1);
        assert!(text
            .lines()
            .next()
            .unwrap()
            .split(' ')
            .all(|v| v.split(',').count() == 2));
        let svg = polylines_to_svg(&[("x=0".into(), lines)], 1.0);
        assert!(svg.starts_with("<?xml") && svg.contains("<path") && svg.trim_end().ends_with("</svg>"));
        assert!(svg.contains(r#"fill="none""#));
    }
}
