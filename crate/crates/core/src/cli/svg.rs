//! Deterministic SVG 1.1 drawings of webs, strands and flows.

use std::fmt::Write as _;

use crate::error::Result;
use crate::stranding::{binary_to_strands, flows, StrandDir, Stranding};
use crate::webgraph::{Pt, WebGraph};

/// Strand color `c` uses entry `c - 1`, wrapping after eight.
pub const PALETTE: [&str; 8] = [
    "#1f5fbf", "#d62728", "#2ca02c", "#ff7f0e", "#8e44ad", "#17a2a2", "#8c564b", "#e377c2",
];

const SCALE: f64 = 60.0;
const MARGIN: f64 = 40.0;
const STRAND_GAP: f64 = 3.0;

pub fn strand_color(c: usize) -> &'static str {
    PALETTE[(c + PALETTE.len() - 1) % PALETTE.len()]
}

struct Frame {
    min_x: f64,
    max_y: f64,
}

impl Frame {
    fn map(&self, p: Pt) -> (f64, f64) {
        (
            (p.x - self.min_x) * SCALE + MARGIN,
            (self.max_y - p.y) * SCALE + MARGIN,
        )
    }
}

fn path_data(pts: &[(f64, f64)]) -> String {
    let mut d = String::new();
    for (i, &(x, y)) in pts.iter().enumerate() {
        let _ = write!(d, "{}{:.2},{:.2}", if i == 0 { "M" } else { " L" }, x, y);
    }
    d
}

/// Shifts each point along the averaged left normal of its neighbouring segments.
fn offset(pts: &[(f64, f64)], by: f64) -> Vec<(f64, f64)> {
    let normal = |a: (f64, f64), b: (f64, f64)| {
        let (dx, dy) = (b.0 - a.0, b.1 - a.1);
        let len = (dx * dx + dy * dy).sqrt().max(1e-9);
        (-dy / len, dx / len)
    };
    (0..pts.len())
        .map(|i| {
            let mut nx = 0.0;
            let mut ny = 0.0;
            if i > 0 {
                let n = normal(pts[i - 1], pts[i]);
                nx += n.0;
                ny += n.1;
            }
            if i + 1 < pts.len() {
                let n = normal(pts[i], pts[i + 1]);
                nx += n.0;
                ny += n.1;
            }
            let len = (nx * nx + ny * ny).sqrt().max(1e-9);
            (pts[i].0 + by * nx / len, pts[i].1 + by * ny / len)
        })
        .collect()
}

fn midpoint(pts: &[(f64, f64)]) -> ((f64, f64), (f64, f64)) {
    let lens: Vec<f64> = pts
        .windows(2)
        .map(|w| ((w[1].0 - w[0].0).powi(2) + (w[1].1 - w[0].1).powi(2)).sqrt())
        .collect();
    let total: f64 = lens.iter().sum();
    let mut acc = 0.0;
    for (i, l) in lens.iter().enumerate() {
        if acc + l >= total / 2.0 && *l > 0.0 {
            let t = (total / 2.0 - acc) / l;
            let (a, b) = (pts[i], pts[i + 1]);
            let p = (a.0 + t * (b.0 - a.0), a.1 + t * (b.1 - a.1));
            return (p, ((b.0 - a.0) / l, (b.1 - a.1) / l));
        }
        acc += l;
    }
    (pts[0], (1.0, 0.0))
}

fn arrow(out: &mut String, at: (f64, f64), dir: (f64, f64), color: &str, size: f64) {
    let (ux, uy) = dir;
    let tip = (at.0 + ux * size, at.1 + uy * size);
    let left = (
        at.0 - ux * size - uy * size * 0.8,
        at.1 - uy * size + ux * size * 0.8,
    );
    let right = (
        at.0 - ux * size + uy * size * 0.8,
        at.1 - uy * size - ux * size * 0.8,
    );
    let _ = writeln!(
        out,
        r#"  <polygon points="{:.2},{:.2} {:.2},{:.2} {:.2},{:.2}" fill="{color}"/>"#,
        tip.0, tip.1, left.0, left.1, right.0, right.1
    );
}

/// Draws `g`, optionally with the strands of `stranding` and the `(i, j)` flows.
pub fn render_svg(
    g: &WebGraph,
    stranding: Option<&Stranding>,
    flow_pair: Option<(usize, usize)>,
) -> Result<String> {
    let mut pts_all: Vec<Pt> = g.boundary.iter().map(|b| Pt::new(b.x, 0.0)).collect();
    let mut lines = Vec::new();
    for e in &g.edges {
        let p = g.polyline(e)?;
        pts_all.extend(p.iter().copied());
        lines.push(p);
    }
    pts_all.extend(g.interior.iter().map(|v| Pt::new(v.x, v.y)));
    let min_x = pts_all
        .iter()
        .map(|p| p.x)
        .fold(f64::INFINITY, f64::min)
        .min(0.0);
    let max_x = pts_all
        .iter()
        .map(|p| p.x)
        .fold(f64::NEG_INFINITY, f64::max)
        .max(1.0);
    let min_y = pts_all
        .iter()
        .map(|p| p.y)
        .fold(f64::INFINITY, f64::min)
        .min(-1.0);
    let frame = Frame { min_x, max_y: 0.0 };
    let width = (max_x - min_x) * SCALE + 2.0 * MARGIN;
    let height = -min_y * SCALE + 2.0 * MARGIN;

    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}">"#
    );
    let _ = writeln!(out, r#"  <rect width="100%" height="100%" fill="white"/>"#);
    let (ax0, ay) = frame.map(Pt::new(min_x, 0.0));
    let (ax1, _) = frame.map(Pt::new(max_x, 0.0));
    let _ = writeln!(
        out,
        r#"  <line x1="{:.2}" y1="{ay:.2}" x2="{:.2}" y2="{ay:.2}" stroke="gray" stroke-dasharray="6,4"/>"#,
        ax0 - 20.0,
        ax1 + 20.0
    );

    if let Some((i, j)) = flow_pair {
        if let Some(s) = stranding {
            let lookup = g.edge_lookup();
            for comp in flows(g, s)?.into_iter().filter(|c| c.pair == (i, j)) {
                for (id, _) in &comp.traversals {
                    let mapped: Vec<(f64, f64)> =
                        lines[lookup[id]].iter().map(|&p| frame.map(p)).collect();
                    let _ = writeln!(
                        out,
                        r#"  <path d="{}" fill="none" stroke="gold" stroke-opacity="0.6" stroke-width="12" stroke-linecap="round"/>"#,
                        path_data(&mapped)
                    );
                }
            }
        }
    }

    for (e, line) in g.edges.iter().zip(&lines) {
        let mapped: Vec<(f64, f64)> = line.iter().map(|&p| frame.map(p)).collect();
        let _ = writeln!(
            out,
            r#"  <path id="{}" d="{}" fill="none" stroke="black" stroke-width="2"/>"#,
            e.id,
            path_data(&mapped)
        );
        let (mid, dir) = midpoint(&mapped);
        arrow(&mut out, mid, dir, "black", 5.0);
        let _ = writeln!(
            out,
            r#"  <text x="{:.2}" y="{:.2}" font-size="11" font-family="sans-serif">{}</text>"#,
            mid.0 + 6.0,
            mid.1 - 6.0,
            e.weight
        );
        if let Some(label) = stranding.and_then(|s| s.label(&e.id)) {
            let strands = binary_to_strands(&label);
            let count = strands.len() as f64;
            for (slot, (c, dir)) in strands.iter().enumerate() {
                let shift = (slot as f64 - (count - 1.0) / 2.0) * STRAND_GAP + 5.0;
                let mut path = offset(&mapped, shift);
                if *dir == StrandDir::Against {
                    path.reverse();
                }
                let color = strand_color(*c);
                let _ = writeln!(
                    out,
                    r#"  <path d="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#,
                    path_data(&path)
                );
                let (m, d) = midpoint(&path);
                arrow(&mut out, m, d, color, 3.0);
            }
        }
    }

    for b in &g.boundary {
        let (x, y) = frame.map(Pt::new(b.x, 0.0));
        let _ = writeln!(
            out,
            r#"  <circle cx="{x:.2}" cy="{y:.2}" r="4" fill="black"/>"#
        );
        let _ = writeln!(
            out,
            r#"  <text x="{x:.2}" y="{:.2}" font-size="11" font-family="sans-serif" text-anchor="middle">{}</text>"#,
            y - 10.0,
            b.id
        );
    }
    for v in &g.interior {
        let (x, y) = frame.map(Pt::new(v.x, v.y));
        let _ = writeln!(
            out,
            r#"  <circle cx="{x:.2}" cy="{y:.2}" r="3.5" fill="black"/>"#
        );
    }
    out.push_str("</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::stranding::base_stranding;

    #[test]
    fn drawing_is_deterministic_and_complete() {
        let g = corpus::running_example();
        let s = base_stranding(&g).unwrap();
        let a = render_svg(&g, Some(&s), Some((1, 2))).unwrap();
        let b = render_svg(&g, Some(&s), Some((1, 2))).unwrap();
        assert_eq!(a, b);
        assert!(a.starts_with("<?xml"));
        assert!(a.contains(r#"version="1.1""#));
        assert_eq!(a.matches("<path id=").count(), g.edges.len());
        assert_eq!(a.matches(r#"r="4""#).count(), g.boundary.len());
        assert!(a.contains(strand_color(1)));
        assert!(a.trim_end().ends_with("</svg>"));
    }

    #[test]
    fn palette_wraps() {
        assert_eq!(strand_color(1), PALETTE[0]);
        assert_eq!(strand_color(9), PALETTE[0]);
    }

    #[test]
    fn loops_draw() {
        let svg = render_svg(&corpus::loop_web(3, 1), None, None).unwrap();
        assert_eq!(svg.matches("<path id=").count(), 1);
    }
}
