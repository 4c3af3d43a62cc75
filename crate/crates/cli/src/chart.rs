//! Log-log SVG chart of a power-law fit.

use std::fmt::Write;

use starlab::study::RateFit;

const W: f64 = 640.0;
const H: f64 = 440.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 30.0;
const TOP: f64 = 50.0;
const BOTTOM: f64 = 60.0;

fn bounds(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    let pad = ((hi - lo) * 0.08).max(0.05);
    (lo - pad, hi + pad)
}

/// Renders the samples and the fitted line. `x_label` names the abscissa.
pub fn rate_chart(fit: &RateFit, x_label: &str) -> String {
    let logs: Vec<(f64, f64)> = fit.samples.iter().map(|&(x, y)| (x.log10(), y.log10())).collect();
    let (x0, x1) = bounds(logs.iter().map(|p| p.0));
    let line_y = |lx: f64| fit.predict(10f64.powf(lx)).log10();
    let (y0, y1) = bounds(logs.iter().map(|p| p.1).chain([line_y(x0), line_y(x1)]));
    let px = |lx: f64| LEFT + (lx - x0) / (x1 - x0) * (W - LEFT - RIGHT);
    let py = |ly: f64| H - BOTTOM - (ly - y0) / (y1 - y0) * (H - TOP - BOTTOM);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="13">"#
    );
    let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<rect x="{LEFT}" y="{TOP}" width="{:.2}" height="{:.2}" fill="none" stroke="black"/>"#,
        W - LEFT - RIGHT,
        H - TOP - BOTTOM
    );
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="30" text-anchor="middle">{}: slope = {:.3}, R² = {:.6}</text>"#,
        W / 2.0,
        fit.observable,
        fit.exponent,
        fit.r_squared
    );
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">log10 {x_label}</text>"#,
        LEFT + (W - LEFT - RIGHT) / 2.0,
        H - 15.0
    );
    let _ = writeln!(
        s,
        r#"<text x="20" y="{:.2}" text-anchor="middle" transform="rotate(-90 20 {:.2})">log10 {}</text>"#,
        TOP + (H - TOP - BOTTOM) / 2.0,
        TOP + (H - TOP - BOTTOM) / 2.0,
        fit.observable
    );
    for (v, anchor_x) in [(x0, px(x0)), (x1, px(x1))] {
        let _ = writeln!(
            s,
            r#"<text x="{anchor_x:.2}" y="{:.2}" text-anchor="middle" font-size="11">{v:.2}</text>"#,
            H - BOTTOM + 16.0
        );
    }
    for (v, anchor_y) in [(y0, py(y0)), (y1, py(y1))] {
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{anchor_y:.2}" text-anchor="end" font-size="11">{v:.2}</text>"#,
            LEFT - 6.0
        );
    }
    let _ = writeln!(
        s,
        r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="steelblue" stroke-width="1.5"/>"#,
        px(x0),
        py(line_y(x0)),
        px(x1),
        py(line_y(x1))
    );
    for &(lx, ly) in &logs {
        let _ = writeln!(
            s,
            r#"<circle cx="{:.2}" cy="{:.2}" r="4" fill="firebrick"/>"#,
            px(lx),
            py(ly)
        );
    }
    s.push_str("</svg>\n");
    s
}
