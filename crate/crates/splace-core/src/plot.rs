//! Deterministic SVG rendering of a placement: region outline plus one
//! rectangle per instance, fixed geometry in red and movable cells in
//! blue. Output bytes depend only on the netlist and positions.

use crate::error::{Error, Result};
use crate::model::{InstanceKind, Netlist};

const CANVAS: f64 = 800.0;
const MARGIN: f64 = 10.0;

/// Fixed-precision coordinate formatting so the output is byte-stable
/// across runs and platforms.
fn fmt(v: f64) -> String {
    format!("{v:.3}")
}

/// Renders the placement as an SVG document string. The region is
/// mapped into a fixed-size canvas with the y axis flipped so the
/// region's origin sits bottom-left.
pub fn render_svg(netlist: &Netlist, positions: &[(f64, f64)]) -> Result<String> {
    if positions.len() != netlist.instances.len() {
        return Err(Error::PositionCount {
            expected: netlist.instances.len(),
            got: positions.len(),
        });
    }
    let r = &netlist.region;
    let scale = (CANVAS - 2.0 * MARGIN) / r.width().max(r.height()).max(f64::MIN_POSITIVE);
    let to_x = |x: f64| MARGIN + (x - r.xmin) * scale;
    let to_y = |y: f64| MARGIN + (r.ymax - y) * scale;
    let view_w = 2.0 * MARGIN + r.width() * scale;
    let view_h = 2.0 * MARGIN + r.height() * scale;

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" \
         viewBox=\"0 0 {} {}\">\n",
        fmt(view_w),
        fmt(view_h),
        fmt(view_w),
        fmt(view_h)
    ));
    svg.push_str(&format!(
        "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" \
         fill=\"white\" stroke=\"black\" stroke-width=\"1\"/>\n",
        fmt(to_x(r.xmin)),
        fmt(to_y(r.ymax)),
        fmt(r.width() * scale),
        fmt(r.height() * scale)
    ));
    // fixed geometry first so movables draw on top
    for pass in 0..2 {
        for (inst, &(x, y)) in netlist.instances.iter().zip(positions) {
            let fixed = inst.kind.is_fixed();
            if (pass == 0) != fixed {
                continue;
            }
            let (fill, stroke) = match inst.kind {
                InstanceKind::FixedMacro => ("#d62728", "#7f1416"),
                InstanceKind::IoPin => ("#d62728", "#7f1416"),
                InstanceKind::MovableMacro => ("#1f77b4", "#103c5a"),
                InstanceKind::MovableCell => ("#1f77b4", "none"),
            };
            // zero-area pins get a small visible marker
            let w = (inst.width * scale).max(2.0);
            let h = (inst.height * scale).max(2.0);
            svg.push_str(&format!(
                "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" \
                 fill=\"{}\" fill-opacity=\"0.6\" stroke=\"{}\"/>\n",
                fmt(to_x(x)),
                fmt(to_y(y + inst.height)),
                fmt(w),
                fmt(h),
                fill,
                stroke
            ));
        }
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

/// Renders a simple line chart of (x, y) series as SVG; used by the
/// sweep commands. Each series gets a distinct stroke color and a
/// legend label.
pub fn render_line_chart(
    title: &str,
    x_label: &str,
    y_label: &str,
    series: &[(&str, Vec<(f64, f64)>)],
) -> String {
    const W: f64 = 640.0;
    const H: f64 = 480.0;
    const PAD: f64 = 60.0;
    let palette = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"];
    let pts: Vec<(f64, f64)> = series.iter().flat_map(|(_, s)| s.iter().copied()).collect();
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in &pts {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if !x0.is_finite() {
        x0 = 0.0;
        x1 = 1.0;
        y0 = 0.0;
        y1 = 1.0;
    }
    if x1 - x0 < f64::MIN_POSITIVE {
        x1 = x0 + 1.0;
    }
    if y1 - y0 < f64::MIN_POSITIVE {
        y1 = y0 + 1.0;
    }
    let sx = (W - 2.0 * PAD) / (x1 - x0);
    let sy = (H - 2.0 * PAD) / (y1 - y0);
    let tx = |x: f64| PAD + (x - x0) * sx;
    let ty = |y: f64| H - PAD - (y - y0) * sy;

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" \
         viewBox=\"0 0 {W} {H}\">\n<rect width=\"{W}\" height=\"{H}\" fill=\"white\"/>\n"
    ));
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">{title}</text>\n",
        W / 2.0
    ));
    svg.push_str(&format!(
        "<line x1=\"{p}\" y1=\"{b}\" x2=\"{r}\" y2=\"{b}\" stroke=\"black\"/>\n\
         <line x1=\"{p}\" y1=\"{t}\" x2=\"{p}\" y2=\"{b}\" stroke=\"black\"/>\n",
        p = PAD,
        b = H - PAD,
        r = W - PAD,
        t = PAD
    ));
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-size=\"12\">{x_label}</text>\n",
        W / 2.0,
        H - PAD / 3.0
    ));
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-size=\"12\" \
         transform=\"rotate(-90 {} {})\">{y_label}</text>\n",
        PAD / 3.0,
        H / 2.0,
        PAD / 3.0,
        H / 2.0
    ));
    // axis extent labels
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" font-size=\"10\">{}</text>\n\
         <text x=\"{}\" y=\"{}\" text-anchor=\"end\" font-size=\"10\">{}</text>\n\
         <text x=\"{}\" y=\"{}\" text-anchor=\"end\" font-size=\"10\">{}</text>\n\
         <text x=\"{}\" y=\"{}\" text-anchor=\"end\" font-size=\"10\">{}</text>\n",
        fmt(PAD),
        fmt(H - PAD + 14.0),
        fmt(x0),
        fmt(W - PAD),
        fmt(H - PAD + 14.0),
        fmt(x1),
        fmt(PAD - 4.0),
        fmt(H - PAD),
        fmt(y0),
        fmt(PAD - 4.0),
        fmt(PAD + 10.0),
        fmt(y1)
    ));
    for (si, (label, s)) in series.iter().enumerate() {
        let color = palette[si % palette.len()];
        let mut sorted = s.clone();
        sorted.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(std::cmp::Ordering::Equal));
        let path: Vec<String> = sorted
            .iter()
            .enumerate()
            .map(|(i, &(x, y))| {
                format!("{}{},{}", if i == 0 { "M" } else { "L" }, fmt(tx(x)), fmt(ty(y)))
            })
            .collect();
        if !path.is_empty() {
            svg.push_str(&format!(
                "<path d=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"/>\n",
                path.join(" ")
            ));
        }
        for &(x, y) in &sorted {
            svg.push_str(&format!(
                "<circle cx=\"{}\" cy=\"{}\" r=\"2.5\" fill=\"{color}\"/>\n",
                fmt(tx(x)),
                fmt(ty(y))
            ));
        }
        svg.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-size=\"12\" fill=\"{color}\">{label}</text>\n",
            W - PAD - 120.0,
            PAD + 16.0 * (si as f64 + 1.0)
        ));
    }
    svg.push_str("</svg>\n");
    svg
}
