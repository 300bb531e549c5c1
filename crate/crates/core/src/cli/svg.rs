//! Checkerboard SVG of the level-n tiles over the two-square window.

use std::fmt::Write as _;

use num_bigint::BigInt;

use crate::budget::Budget;
use crate::error::Result;
use crate::exact::{rational_to_f64, Rational};
use crate::pillow::{Axis, LattesTypeMap, LevelGeometry};

/// SVG units per unit length.
pub const SCALE: i64 = 512;
const DARK: &str = "#1f1f1f";
const LIGHT: &str = "#f2f2f2";
const STROKE: &str = "#7f7f7f";
const CONE: &str = "#c0392b";

/// Cells whose interior meets the interior of `[0,2] × [0,1]`, sorted.
pub fn visible_cells(geo: &LevelGeometry) -> Vec<(i64, i64)> {
    let [a, b, c, d] = geo.power();
    let xs = [0, 2 * a, b, 2 * a + b];
    let ys = [0, 2 * c, d, 2 * c + d];
    let det = i128::from(geo.det());
    let mut cells = Vec::new();
    for i in *xs.iter().min().unwrap()..*xs.iter().max().unwrap() {
        for j in *ys.iter().min().unwrap()..*ys.iter().max().unwrap() {
            let (x_lo, x_hi) = geo.cell_range(i, j, Axis::X);
            let (y_lo, y_hi) = geo.cell_range(i, j, Axis::Y);
            if x_lo < 2 * det && x_hi > 0 && y_lo < det && y_hi > 0 {
                cells.push((i, j));
            }
        }
    }
    cells
}

/// Decimal with at most 12 significant digits, no exponent, no trailing zeros.
pub fn format_number(q: &Rational) -> String {
    let v = rational_to_f64(q);
    if v == 0.0 {
        return "0".into();
    }
    let magnitude = v.abs().log10().floor() as i32;
    let decimals = (11 - magnitude).max(0) as usize;
    let mut s = format!("{v:.decimals$}");
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
    if s == "-0" {
        s = "0".into();
    }
    s
}

fn svg_point(geo: &LevelGeometry, i: i64, j: i64) -> String {
    let det = BigInt::from(geo.det());
    let (px, py) = geo.plane_scaled(i, j);
    let x = Rational::new(BigInt::from(px) * SCALE, det.clone());
    let y = Rational::from_integer(BigInt::from(SCALE)) - Rational::new(BigInt::from(py) * SCALE, det);
    format!("{},{}", format_number(&x), format_number(&y))
}

pub fn render_svg(map: &LattesTypeMap, n: u32, budget: &Budget) -> Result<String> {
    map.check_enumeration(n, budget)?;
    let geo = map.level(n)?;
    let cells = visible_cells(&geo);
    let (w, h) = (2 * SCALE, SCALE);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="-8 -8 {} {}">"#,
        w + 16,
        h + 16
    );
    let _ = writeln!(s, r#"<title>level {n} tiles of {}</title>"#, map.matrix());
    let _ = writeln!(s, r#"<defs><clipPath id="window"><rect x="0" y="0" width="{w}" height="{h}"/></clipPath></defs>"#);
    let _ = writeln!(
        s,
        r#"<g id="tiles" clip-path="url(#window)" stroke="{STROKE}" stroke-width="1" data-cells="{}">"#,
        cells.len()
    );
    for &(i, j) in &cells {
        let fill = if (i + j).rem_euclid(2) == 0 { DARK } else { LIGHT };
        let pts = [(i, j), (i + 1, j), (i + 1, j + 1), (i, j + 1)].map(|(x, y)| svg_point(&geo, x, y));
        let _ = writeln!(s, r#"<polygon data-i="{i}" data-j="{j}" fill="{fill}" points="{}"/>"#, pts.join(" "));
    }
    s.push_str("</g>\n");
    let _ = writeln!(s, r#"<rect x="0" y="0" width="{w}" height="{h}" fill="none" stroke="{DARK}" stroke-width="2"/>"#);
    s.push_str("<g id=\"cone-points\">\n");
    for (x, y) in [(0, 0), (1, 0), (0, 1), (1, 1)] {
        let _ = writeln!(s, r#"<circle cx="{}" cy="{}" r="6" fill="{CONE}"/>"#, x * SCALE, (1 - y) * SCALE);
    }
    s.push_str("</g>\n</svg>\n");
    Ok(s)
}
