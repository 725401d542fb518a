//! SVG renderings of contour plots and plabic graphs.
//!
//! Fixed styling and `{:.2}` coordinate formatting keep the output
//! deterministic. Contour regions are tinted by a hash of their label so the
//! same basis gets the same color in every plot.

use std::fmt::Write as _;

use crate::plabic::{GeneralizedPlabicGraph, VertexKind};
use crate::tropical::{ContourPlot, VertexClass};

const SIZE: f64 = 720.0;
const MARGIN: f64 = 44.0;

fn label_hue(label: &str) -> u32 {
    // FNV-1a, folded to a hue.
    let mut h: u32 = 0x811c9dc5;
    for b in label.bytes() {
        h ^= b as u32;
        h = h.wrapping_mul(0x01000193);
    }
    h % 360
}

struct Frame {
    xmin: f64,
    ymin: f64,
    scale: f64,
    height: f64,
}

impl Frame {
    fn new(xmin: f64, xmax: f64, ymin: f64, ymax: f64) -> Frame {
        let w = (xmax - xmin).max(1e-9);
        let h = (ymax - ymin).max(1e-9);
        let scale = (SIZE - 2.0 * MARGIN) / w.max(h);
        Frame { xmin, ymin, scale, height: h * scale + 2.0 * MARGIN }
    }

    fn width(&self) -> f64 {
        // Unused dimension stays square with the margins.
        self.height
    }

    /// Math coordinates to SVG (y grows downward).
    fn map(&self, p: (f64, f64)) -> (f64, f64) {
        (
            MARGIN + (p.0 - self.xmin) * self.scale,
            self.height - MARGIN - (p.1 - self.ymin) * self.scale,
        )
    }
}

fn open_svg(out: &mut String, w: f64, h: f64) {
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:.0}\" height=\"{:.0}\" \
         viewBox=\"0 0 {:.0} {:.0}\" font-family=\"monospace\">",
        w, h, w, h
    );
    let _ = writeln!(out, "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>");
}

pub fn contour_svg(plot: &ContourPlot) -> String {
    let f = Frame::new(plot.bbox.xmin, plot.bbox.xmax, plot.bbox.ymin, plot.bbox.ymax);
    let mut out = String::new();
    open_svg(&mut out, f.width(), f.height);
    for r in &plot.regions {
        if r.polygon.len() < 3 {
            continue;
        }
        let mut pts = String::new();
        for &p in &r.polygon {
            let (x, y) = f.map(p);
            let _ = write!(pts, "{:.2},{:.2} ", x, y);
        }
        let _ = writeln!(
            out,
            "<polygon points=\"{}\" fill=\"hsl({},45%,93%)\" stroke=\"none\"/>",
            pts.trim_end(),
            label_hue(&r.basis.label())
        );
    }
    for e in &plot.edges {
        let (x0, y0) = f.map(e.p0);
        let (x1, y1) = f.map(e.p1);
        let _ = writeln!(
            out,
            "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" \
             stroke=\"black\" stroke-width=\"1.6\"/>",
            x0, y0, x1, y1
        );
        let (mx, my) = f.map(((e.p0.0 + e.p1.0) / 2.0, (e.p0.1 + e.p1.1) / 2.0));
        let _ = writeln!(
            out,
            "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"10\" fill=\"#888\" dx=\"3\">[{},{}]</text>",
            mx, my, e.stype.0, e.stype.1
        );
    }
    for v in &plot.vertices {
        let (x, y) = f.map(v.pos);
        let _ = match v.class {
            VertexClass::TrivalentBlack => writeln!(
                out,
                "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"3.4\" fill=\"black\"/>",
                x, y
            ),
            VertexClass::TrivalentWhite => writeln!(
                out,
                "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"3.4\" fill=\"white\" \
                 stroke=\"black\" stroke-width=\"1.4\"/>",
                x, y
            ),
            VertexClass::XCrossing => writeln!(
                out,
                "<rect x=\"{:.2}\" y=\"{:.2}\" width=\"6\" height=\"6\" fill=\"#c33\" \
                 transform=\"rotate(45 {:.2} {:.2})\"/>",
                x - 3.0,
                y - 3.0,
                x,
                y
            ),
            VertexClass::Degenerate => writeln!(
                out,
                "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"4\" fill=\"#e80\"/>",
                x, y
            ),
        };
    }
    for r in &plot.regions {
        if r.polygon.is_empty() {
            continue;
        }
        let cx = r.polygon.iter().map(|p| p.0).sum::<f64>() / r.polygon.len() as f64;
        let cy = r.polygon.iter().map(|p| p.1).sum::<f64>() / r.polygon.len() as f64;
        let (x, y) = f.map((cx, cy));
        let _ = writeln!(
            out,
            "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"13\" fill=\"#222\" \
             text-anchor=\"middle\">{}</text>",
            x, y, r.basis.label()
        );
    }
    out.push_str("</svg>\n");
    out
}

/// Positions from the graph when present; otherwise boundary vertices go on a
/// circle in counterclockwise order and interior vertices relax to the
/// average of their neighbors.
fn layout(g: &GeneralizedPlabicGraph) -> Vec<(f64, f64)> {
    if let Some(p) = g.positions() {
        return p.to_vec();
    }
    let nv = g.vertex_count();
    let boundary = g.boundary_ccw();
    let nb = boundary.len().max(1) as f64;
    let mut pos = vec![(0.0, 0.0); nv];
    let mut fixed = vec![false; nv];
    for (i, &v) in boundary.iter().enumerate() {
        let a = std::f64::consts::PI / 2.0 + 2.0 * std::f64::consts::PI * i as f64 / nb;
        pos[v] = (a.cos(), a.sin());
        fixed[v] = true;
    }
    let mut nbrs = vec![Vec::new(); nv];
    for &(a, b) in g.edges() {
        nbrs[a].push(b);
        nbrs[b].push(a);
    }
    for _ in 0..300 {
        for v in 0..nv {
            if fixed[v] || nbrs[v].is_empty() {
                continue;
            }
            let (mut sx, mut sy) = (0.0, 0.0);
            for &w in &nbrs[v] {
                sx += pos[w].0;
                sy += pos[w].1;
            }
            let m = nbrs[v].len() as f64;
            pos[v] = (sx / m, sy / m);
        }
    }
    pos
}

pub fn graph_svg(g: &GeneralizedPlabicGraph) -> String {
    let pos = layout(g);
    let (mut xmin, mut xmax, mut ymin, mut ymax) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for &(x, y) in &pos {
        xmin = xmin.min(x);
        xmax = xmax.max(x);
        ymin = ymin.min(y);
        ymax = ymax.max(y);
    }
    let f = Frame::new(xmin, xmax, ymin, ymax);
    let mut out = String::new();
    open_svg(&mut out, f.width(), f.height);
    for &(a, b) in g.edges() {
        let (x0, y0) = f.map(pos[a]);
        let (x1, y1) = f.map(pos[b]);
        let _ = writeln!(
            out,
            "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" \
             stroke=\"black\" stroke-width=\"1.4\"/>",
            x0, y0, x1, y1
        );
    }
    for (v, kind) in g.kinds().iter().enumerate() {
        let (x, y) = f.map(pos[v]);
        let _ = match kind {
            VertexKind::Black => writeln!(
                out,
                "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"5\" fill=\"black\"/>",
                x, y
            ),
            VertexKind::White => writeln!(
                out,
                "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"5\" fill=\"white\" \
                 stroke=\"black\" stroke-width=\"1.6\"/>",
                x, y
            ),
            VertexKind::Crossing => writeln!(
                out,
                "<rect x=\"{:.2}\" y=\"{:.2}\" width=\"8\" height=\"8\" fill=\"white\" \
                 stroke=\"#c33\" stroke-width=\"1.6\" transform=\"rotate(45 {:.2} {:.2})\"/>",
                x - 4.0,
                y - 4.0,
                x,
                y
            ),
            VertexKind::Boundary(l) => {
                let _ = writeln!(
                    out,
                    "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"2.4\" fill=\"#555\"/>",
                    x, y
                );
                // Label just outside the boundary circle.
                let c = f.map((0.0, 0.0));
                let (dx, dy) = (x - c.0, y - c.1);
                let n = (dx * dx + dy * dy).sqrt().max(1e-9);
                writeln!(
                    out,
                    "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"14\" fill=\"#222\" \
                     text-anchor=\"middle\" dominant-baseline=\"middle\">{}</text>",
                    x + 18.0 * dx / n,
                    y + 18.0 * dy / n,
                    l
                )
            }
        };
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grassmann::validate_kappa;
    use crate::le_plabic::build_g_minus;
    use crate::lediagram::LeDiagram;
    use crate::tropical::{contour_plot, tropical_field};

    #[test]
    fn contour_svg_is_deterministic_and_complete() {
        let kappa = validate_kappa(&[-3.0, -1.0, 0.5, 2.0], 2).unwrap();
        let point = LeDiagram::all_plus(2, 4, vec![2, 2]).unwrap().random_point(5);
        let field = tropical_field(&point, &kappa).unwrap();
        let plot = contour_plot(&field, -8.0, None).unwrap();
        let s1 = contour_svg(&plot);
        let s2 = contour_svg(&plot);
        assert_eq!(s1, s2);
        assert!(s1.starts_with("<svg"));
        assert!(s1.ends_with("</svg>\n"));
        assert_eq!(s1.matches("<polygon").count(), plot.regions.len());
        assert_eq!(s1.matches("<line").count(), plot.edges.len());
        for r in &plot.regions {
            assert!(s1.contains(&format!(">{}</text>", r.basis.label())));
        }
    }

    #[test]
    fn graph_svg_draws_every_edge_and_boundary_label() {
        let g = build_g_minus(&LeDiagram::all_plus(2, 4, vec![2, 2]).unwrap());
        let s = graph_svg(&g);
        assert!(s.starts_with("<svg"));
        assert_eq!(s.matches("<line").count(), g.edges().len());
        for l in 1..=4 {
            assert!(s.contains(&format!(">{}</text>", l)));
        }
        assert_eq!(s, graph_svg(&g));
    }
}
