//! Deterministic SVG figures.
//!
//! The unit square is drawn on a 1000 × 1000 view box with the y axis
//! pointing up. Coordinates are printed with three decimals and every style
//! is fixed, so identical arguments always produce identical bytes.

use std::collections::BTreeSet;
use std::fmt::Write;

use clap::ValueEnum;
use ford_core::counting::s_of;
use ford_core::geometry::{circle_of, rational_to_f64, Fraction};
use ford_core::sequences::{extract_origin, FareyIter};

const SIZE: f64 = 1000.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RenderKind {
    /// Ford circles over [0, 1].
    Circles,
    /// Ford circles with the line y = x/m and the circles it touches highlighted.
    Line,
    /// Lattice points (p, q) of the touched fractions with their bounding curves.
    Lattice,
}

fn header() -> String {
    let mut s = String::new();
    s.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    s.push_str("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"1000\" height=\"1000\" viewBox=\"0 0 1000 1000\">\n");
    s.push_str("<style>\n");
    s.push_str("circle.ford { fill: none; stroke: #4a4a4a; stroke-width: 0.8; }\n");
    s.push_str("circle.touched { fill: #f3c969; fill-opacity: 0.6; stroke: #b5651d; stroke-width: 1.2; }\n");
    s.push_str("line.curve, path.curve { fill: none; stroke: #1f5fa8; stroke-width: 1.5; }\n");
    s.push_str("line.axis { stroke: #000000; stroke-width: 1; }\n");
    s.push_str("circle.point { fill: #1f5fa8; stroke: none; }\n");
    s.push_str("</style>\n");
    s.push_str("<rect x=\"0\" y=\"0\" width=\"1000\" height=\"1000\" fill=\"#ffffff\"/>\n");
    s
}

fn px(v: f64) -> String {
    let s = format!("{v:.3}");
    // Avoid "-0.000" so tiny negative rounding noise cannot change the bytes.
    if s == "-0.000" {
        "0.000".into()
    } else {
        s
    }
}

fn circle_element(out: &mut String, f: Fraction, class: &str) {
    let c = circle_of(f);
    let cx = rational_to_f64(&c.center_x) * SIZE;
    let cy = SIZE - rational_to_f64(&c.center_y) * SIZE;
    let r = rational_to_f64(&c.radius) * SIZE;
    writeln!(
        out,
        "<circle class=\"{class}\" data-fraction=\"{f}\" cx=\"{}\" cy=\"{}\" r=\"{}\"/>",
        px(cx),
        px(cy),
        px(r)
    )
    .expect("write to string");
}

/// All Ford circles with denominator at most `qmax`.
pub fn render_circles(qmax: u64) -> String {
    let mut out = header();
    writeln!(
        out,
        "<line class=\"axis\" x1=\"0\" y1=\"1000\" x2=\"1000\" y2=\"1000\"/>"
    )
    .expect("write to string");
    for f in FareyIter::new(qmax) {
        circle_element(&mut out, f, "ford");
    }
    out.push_str("</svg>\n");
    out
}

/// Ford circles with denominator at most `qmax` (default `m`), the line
/// `y = x/m`, and the touched circles drawn with class `touched` whatever
/// their denominator.
pub fn render_line(m: u64, qmax: Option<u64>) -> ford_core::Result<String> {
    let touched: BTreeSet<Fraction> = extract_origin(m)?.fractions.into_iter().collect();
    let qmax = qmax.unwrap_or(m);
    let mut all: BTreeSet<Fraction> = FareyIter::new(qmax).collect();
    all.extend(touched.iter().copied());

    let mut out = header();
    writeln!(
        out,
        "<line class=\"axis\" x1=\"0\" y1=\"1000\" x2=\"1000\" y2=\"1000\"/>"
    )
    .expect("write to string");
    for f in &all {
        let class = if touched.contains(f) { "touched" } else { "ford" };
        circle_element(&mut out, *f, class);
    }
    writeln!(
        out,
        "<line class=\"curve\" x1=\"0.000\" y1=\"1000.000\" x2=\"1000.000\" y2=\"{}\"/>",
        px(SIZE - SIZE / m as f64)
    )
    .expect("write to string");
    out.push_str("</svg>\n");
    Ok(out)
}

/// The points `(p, q)` of every touched fraction except `0/1`, inside the
/// region bounded by `p = 1`, `q = p` and `q = m/p`. Needs `m >= 2`.
pub fn render_lattice(m: u64) -> ford_core::Result<String> {
    let s = s_of(m)?;
    let points: Vec<Fraction> = extract_origin(m)?
        .fractions
        .into_iter()
        .filter(|f| f.p() >= 1)
        .collect();

    // p runs over [0, s + 1] horizontally, q over [0, m + 1] vertically,
    // inside a 50-unit margin.
    let (p_span, q_span) = ((s + 1) as f64, (m + 1) as f64);
    let x = |p: f64| 50.0 + 900.0 * p / p_span;
    let y = |q: f64| 950.0 - 900.0 * q / q_span;

    let mut out = header();
    writeln!(
        out,
        "<line class=\"axis\" x1=\"50.000\" y1=\"950.000\" x2=\"950.000\" y2=\"950.000\"/>"
    )
    .expect("write to string");
    writeln!(
        out,
        "<line class=\"axis\" x1=\"50.000\" y1=\"950.000\" x2=\"50.000\" y2=\"50.000\"/>"
    )
    .expect("write to string");

    let root = (m as f64).sqrt();
    // p = 1 from q = 1 up to q = m
    writeln!(
        out,
        "<line class=\"curve\" x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"/>",
        px(x(1.0)),
        px(y(1.0)),
        px(x(1.0)),
        px(y(m as f64))
    )
    .expect("write to string");
    // q = p from p = 1 up to the crossing with q = m/p
    writeln!(
        out,
        "<line class=\"curve\" x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"/>",
        px(x(1.0)),
        px(y(1.0)),
        px(x(root)),
        px(y(root))
    )
    .expect("write to string");
    // q = m/p sampled on a fixed grid of 200 segments
    let mut d = String::new();
    for i in 0..=200 {
        let p = 1.0 + (root - 1.0) * f64::from(i) / 200.0;
        let cmd = if i == 0 { 'M' } else { 'L' };
        write!(d, "{cmd}{} {} ", px(x(p)), px(y(m as f64 / p))).expect("write to string");
    }
    writeln!(out, "<path class=\"curve\" d=\"{}\"/>", d.trim_end()).expect("write to string");

    for f in points {
        writeln!(
            out,
            "<circle class=\"point\" data-fraction=\"{f}\" cx=\"{}\" cy=\"{}\" r=\"4.000\"/>",
            px(x(f.p() as f64)),
            px(y(f.q() as f64))
        )
        .expect("write to string");
    }
    out.push_str("</svg>\n");
    Ok(out)
}
