//! Static SVG line chart of an FI series.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::fisher::{FiSeries, FI_MAX};

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 420.0;
const LEFT: f64 = 64.0;
const RIGHT: f64 = 24.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 56.0;

#[derive(Debug, Clone, PartialEq)]
pub struct PlotOptions {
    pub title: String,
    pub y_range: (f64, f64),
}

impl Default for PlotOptions {
    fn default() -> Self {
        Self {
            title: "Fisher information".into(),
            y_range: (0.0, FI_MAX),
        }
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// Evenly spaced tick positions on `[lo, hi]`, at most `max` of them.
fn ticks(lo: f64, hi: f64, max: usize) -> Vec<f64> {
    if hi <= lo {
        return vec![lo];
    }
    let raw = (hi - lo) / max as f64;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0]
        .iter()
        .map(|m| m * mag)
        .find(|s| *s >= raw)
        .unwrap_or(10.0 * mag);
    let first = (lo / step).ceil() * step;
    (0..)
        .map(|i| first + i as f64 * step)
        .take_while(|t| *t <= hi + step * 1e-9)
        .collect()
}

pub fn render_svg(series: &FiSeries, opts: &PlotOptions) -> Result<String> {
    if series.is_empty() {
        return Err(Error::EmptySeries);
    }
    let (y_lo, y_hi) = opts.y_range;
    if y_hi.partial_cmp(&y_lo) != Some(std::cmp::Ordering::Greater) {
        return Err(Error::InvalidConfig(format!(
            "plot y-range {y_lo}..{y_hi} is empty"
        )));
    }
    let t_first = series.points[0].time_label;
    let t_last = series.points[series.len() - 1].time_label;
    let (x_lo, x_hi) = if t_last > t_first {
        (t_first, t_last)
    } else {
        (t_first - 0.5, t_first + 0.5)
    };

    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let sx = |t: f64| LEFT + (t - x_lo) / (x_hi - x_lo) * plot_w;
    let sy = |v: f64| TOP + (1.0 - (v.clamp(y_lo, y_hi) - y_lo) / (y_hi - y_lo)) * plot_h;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="24" text-anchor="middle" font-size="15">{}</text>"#,
        WIDTH / 2.0,
        escape(&opts.title)
    );

    // axes
    let _ = writeln!(
        svg,
        r#"<g stroke="black" stroke-width="1"><line x1="{LEFT}" y1="{:.2}" x2="{:.2}" y2="{:.2}"/><line x1="{LEFT}" y1="{TOP}" x2="{LEFT}" y2="{:.2}"/></g>"#,
        TOP + plot_h,
        LEFT + plot_w,
        TOP + plot_h,
        TOP + plot_h
    );
    for t in ticks(y_lo, y_hi, 8) {
        let y = sy(t);
        let _ = writeln!(
            svg,
            r##"<line x1="{LEFT}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#dddddd"/><text x="{:.2}" y="{:.2}" text-anchor="end">{t}</text>"##,
            LEFT + plot_w,
            LEFT - 6.0,
            y + 4.0
        );
    }
    for t in ticks(x_lo, x_hi, 10) {
        let x = sx(t);
        let _ = writeln!(
            svg,
            r#"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke="black"/><text x="{x:.2}" y="{:.2}" text-anchor="middle">{t}</text>"#,
            TOP + plot_h,
            TOP + plot_h + 5.0,
            TOP + plot_h + 20.0
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">Time</text>"#,
        LEFT + plot_w / 2.0,
        HEIGHT - 12.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="16" y="{:.2}" text-anchor="middle" transform="rotate(-90 16 {:.2})">FI</text>"#,
        TOP + plot_h / 2.0,
        TOP + plot_h / 2.0
    );

    if series.len() == 1 {
        let p = &series.points[0];
        let _ = writeln!(
            svg,
            r##"<circle class="fi-marker" cx="{:.2}" cy="{:.2}" r="4" fill="#1f77b4"/>"##,
            sx(p.time_label),
            sy(p.fi)
        );
    } else {
        let vertices: Vec<String> = series
            .points
            .iter()
            .map(|p| format!("{:.2},{:.2}", sx(p.time_label), sy(p.fi)))
            .collect();
        let _ = writeln!(
            svg,
            r##"<polyline class="fi-series" fill="none" stroke="#1f77b4" stroke-width="2" points="{}"/>"##,
            vertices.join(" ")
        );
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

pub fn emit_plot(series: &FiSeries, opts: &PlotOptions, destination: &Path) -> Result<()> {
    let svg = render_svg(series, opts)?;
    fs::write(destination, svg).map_err(|e| Error::io(destination, e))
}
