//! SVG drawing of a polygon with its diameter graph.

use std::fmt::Write as _;

use crate::diamgraph::DiameterGraph;
use crate::geometry::{ConvexPolygon, Point2};

const BOUNDARY_STROKE: &str = "#1b3a5c";
const CHORD_STROKE: &str = "#c4452b";
const SIZE_PX: f64 = 640.0;

/// Standalone SVG: the boundary as one closed path and every diameter as a
/// `<line>`. The view box fits the polygon with a 5% margin; y points up.
pub fn emit_svg(p: &ConvexPolygon, g: &DiameterGraph) -> String {
    // SVG y grows downward; flip so the drawing matches the coordinates.
    let pts: Vec<Point2> = p.vertices().iter().map(|v| Point2::new(v.x, -v.y)).collect();
    let (mut min, mut max) = (pts[0], pts[0]);
    for q in &pts {
        min = Point2::new(min.x.min(q.x), min.y.min(q.y));
        max = Point2::new(max.x.max(q.x), max.y.max(q.y));
    }
    let extent = (max.x - min.x).max(max.y - min.y);
    let margin = 0.05 * extent;
    let (w, h) = (max.x - min.x + 2.0 * margin, max.y - min.y + 2.0 * margin);
    let stroke = 0.004 * extent;
    let num = |x: f64| {
        let s = format!("{:.6}", x);
        if s == "-0.000000" {
            "0.000000".to_string()
        } else {
            s
        }
    };

    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{} {} {} {}\" width=\"{}\" height=\"{}\">",
        num(min.x - margin),
        num(min.y - margin),
        num(w),
        num(h),
        SIZE_PX.round(),
        (SIZE_PX * h / w).round()
    );
    let _ = writeln!(out, "  <title>{}-gon with {} diameters</title>", pts.len(), g.edges.len());
    let _ = writeln!(
        out,
        "  <g stroke=\"{CHORD_STROKE}\" stroke-width=\"{}\" stroke-linecap=\"round\">",
        num(0.6 * stroke)
    );
    for &(a, b) in &g.edges {
        let _ = writeln!(
            out,
            "    <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"/>",
            num(pts[a].x),
            num(pts[a].y),
            num(pts[b].x),
            num(pts[b].y)
        );
    }
    out.push_str("  </g>\n");
    let mut d = String::new();
    for (i, q) in pts.iter().enumerate() {
        let _ = write!(d, "{}{} {} ", if i == 0 { "M" } else { "L" }, num(q.x), num(q.y));
    }
    d.push('Z');
    let _ = writeln!(
        out,
        "  <path d=\"{d}\" fill=\"none\" stroke=\"{BOUNDARY_STROKE}\" stroke-width=\"{}\" stroke-linejoin=\"round\"/>",
        num(stroke)
    );
    let _ = writeln!(out, "  <g fill=\"{BOUNDARY_STROKE}\">");
    for q in &pts {
        let _ = writeln!(
            out,
            "    <circle cx=\"{}\" cy=\"{}\" r=\"{}\"/>",
            num(q.x),
            num(q.y),
            num(1.5 * stroke)
        );
    }
    out.push_str("  </g>\n</svg>\n");
    out
}

/// Boundary segments in an SVG produced by [`emit_svg`]: one per `M`/`L`
/// vertex of the closed path.
pub fn boundary_segments(svg: &str) -> usize {
    svg.lines()
        .filter(|l| l.trim_start().starts_with("<path"))
        .map(|l| l.matches(['M', 'L']).count())
        .sum()
}

pub fn chord_segments(svg: &str) -> usize {
    svg.matches("<line ").count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::regular_small;
    use crate::diamgraph::extract;

    #[test]
    fn triangle_counts() {
        let p = regular_small(3).unwrap();
        let g = extract(&p, 1e-6).unwrap();
        let svg = emit_svg(&p, &g);
        assert_eq!(boundary_segments(&svg), 3);
        assert_eq!(chord_segments(&svg), 3);
        assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
        assert_eq!(svg, emit_svg(&p, &g));
    }
}
