//! Minimal static line plots. Each series is scaled to its own largest
//! magnitude so that terms of very different size share one frame.

use std::fmt::Write as _;

const W: f64 = 720.0;
const H: f64 = 440.0;
const MARGIN: f64 = 56.0;
const COLORS: [&str; 8] = ["#000000", "#1b9e77", "#d95f02", "#7570b3", "#e7298a", "#66a61e", "#e6ab02", "#a6761d"];

pub fn line_plot(title: &str, x_label: &str, x: &[f64], series: &[(String, Vec<f64>)]) -> String {
    let (x0, x1) = bounds(x);
    let sx = |v: f64| MARGIN + (v - x0) / (x1 - x0) * (W - 2.0 * MARGIN);
    let sy = |v: f64| H - MARGIN - (v + 1.0) / 2.0 * (H - 2.0 * MARGIN);
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(out, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(out, r#"<text x="{}" y="24" text-anchor="middle" font-size="14">{}</text>"#, W / 2.0, escape(title));
    let _ = writeln!(
        out,
        r##"<rect x="{MARGIN}" y="{MARGIN}" width="{}" height="{}" fill="none" stroke="#888"/>"##,
        W - 2.0 * MARGIN,
        H - 2.0 * MARGIN
    );
    let _ = writeln!(out, r##"<line x1="{MARGIN}" y1="{0}" x2="{1}" y2="{0}" stroke="#ccc"/>"##, sy(0.0), W - MARGIN);
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="middle">{} [{:.4e} .. {:.4e}]</text>"#,
        W / 2.0,
        H - 18.0,
        escape(x_label),
        x0,
        x1
    );
    for (k, (name, y)) in series.iter().enumerate() {
        let scale = y.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if scale == 0.0 || !scale.is_finite() {
            continue;
        }
        let color = COLORS[k % COLORS.len()];
        let pts: Vec<String> = x
            .iter()
            .zip(y)
            .map(|(a, b)| format!("{:.2},{:.2}", sx(*a), sy(b / scale)))
            .collect();
        let _ = writeln!(out, r#"<polyline fill="none" stroke="{color}" stroke-width="1.2" points="{}"/>"#, pts.join(" "));
        let ly = MARGIN + 16.0 + 16.0 * k as f64;
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{ly}" text-anchor="end" fill="{color}">{} (max {:.3e})</text>"#,
            W - MARGIN - 8.0,
            escape(name),
            scale
        );
    }
    out.push_str("</svg>\n");
    out
}

fn bounds(x: &[f64]) -> (f64, f64) {
    let lo = x.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = x.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if hi > lo {
        (lo, hi)
    } else {
        (lo - 0.5, lo + 0.5)
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
