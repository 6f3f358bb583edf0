//! Self-contained SVG scatter of a root set in the complex plane.

use std::f64::consts::TAU;
use std::fmt::Write as _;

use crate::roots::ComplexRootSet;

const SIZE: f64 = 800.0;
const MARGIN: f64 = 40.0;

/// Render the roots of `set` with axes, the unit circle and `r` guide rays at
/// angles `2 pi k / r`. Roots of multiplicity above one get a `xm` label.
/// The view is square and symmetric about the origin, sized to the largest
/// modulus (at least 1.25 so the unit circle always fits).
pub fn render_svg(set: &ComplexRootSet, r: usize, title: &str) -> String {
    let extent = set.roots.iter().map(|root| root.value.norm()).fold(1.0_f64, f64::max) * 1.25;
    let scale = (SIZE / 2.0 - MARGIN) / extent;
    let cx = SIZE / 2.0;
    let to_px = |re: f64, im: f64| (cx + re * scale, cx - im * scale);

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(out, "<title>{}</title>", escape(title));

    // axes
    let _ = writeln!(
        out,
        r##"<line x1="{MARGIN}" y1="{cx}" x2="{:.2}" y2="{cx}" stroke="#444" stroke-width="1"/>"##,
        SIZE - MARGIN
    );
    let _ = writeln!(
        out,
        r##"<line x1="{cx}" y1="{MARGIN}" x2="{cx}" y2="{:.2}" stroke="#444" stroke-width="1"/>"##,
        SIZE - MARGIN
    );

    // guide rays
    for k in 0..r.max(1) {
        let angle = TAU * k as f64 / r.max(1) as f64;
        let (x, y) = to_px(extent * angle.cos(), extent * angle.sin());
        let _ = writeln!(
            out,
            r##"<line x1="{cx}" y1="{cx}" x2="{x:.2}" y2="{y:.2}" stroke="#9ab" stroke-width="1" stroke-dasharray="4 4"/>"##
        );
    }

    let _ = writeln!(
        out,
        r##"<circle cx="{cx}" cy="{cx}" r="{:.2}" fill="none" stroke="#888" stroke-width="1"/>"##,
        scale
    );

    for root in &set.roots {
        let (x, y) = to_px(root.value.re, root.value.im);
        let _ = writeln!(out, r##"<circle cx="{x:.2}" cy="{y:.2}" r="3.5" fill="#c23"/>"##);
        if root.multiplicity > 1 {
            let _ = writeln!(
                out,
                r##"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="12" fill="#222">x{}</text>"##,
                x + 6.0,
                y - 6.0,
                root.multiplicity
            );
        }
    }

    let _ = writeln!(
        out,
        r##"<text x="{MARGIN}" y="24" font-family="sans-serif" font-size="16" fill="#222">{}</text>"##,
        escape(title)
    );
    out.push_str("</svg>\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
