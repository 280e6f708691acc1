//! Self-contained SVG plot of a sweep: eigenvalues over `t` on top, `f_tr`
//! over `t` below, with the causal stretches shaded on both panels.

use std::fmt::Write;

use crate::causality::Classification;
use crate::sweep::SweepRow;
use crate::{Error, Result};

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 560.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 20.0;
const PANEL_HEIGHT: f64 = 210.0;
const TOP_PANEL_Y: f64 = 30.0;
const BOTTOM_PANEL_Y: f64 = 300.0;
const TICKS: usize = 5;

const EIGEN_COLORS: [&str; 4] = ["#d62728", "#ff7f0e", "#2ca02c", "#1f77b4"];
const FTR_COLOR: &str = "#000000";
const BAND_STYLE: &str = "fill:#9467bd;fill-opacity:0.15;stroke:none";

struct Panel {
    y0: f64,
    lo: f64,
    hi: f64,
}

impl Panel {
    fn new(y0: f64, values: impl Iterator<Item = f64>) -> Self {
        let (mut lo, mut hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), v| (l.min(v), h.max(v)));
        if !(hi - lo > 1e-12) {
            lo -= 0.5;
            hi += 0.5;
        }
        let pad = 0.05 * (hi - lo);
        Panel { y0, lo: lo - pad, hi: hi + pad }
    }

    fn y(&self, v: f64) -> f64 {
        self.y0 + PANEL_HEIGHT * (self.hi - v) / (self.hi - self.lo)
    }
}

/// Half-open index runs of consecutive causal rows.
fn causal_runs(rows: &[SweepRow]) -> Vec<(usize, usize)> {
    let mut runs = Vec::new();
    let mut start = None;
    for (i, r) in rows.iter().enumerate() {
        match (r.classification == Classification::Causal, start) {
            (true, None) => start = Some(i),
            (false, Some(s)) => {
                runs.push((s, i));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        runs.push((s, rows.len()));
    }
    runs
}

/// Time extent of each causal run; interior edges sit halfway to the neighbouring row.
pub fn causal_bands(rows: &[SweepRow]) -> Vec<(f64, f64)> {
    causal_runs(rows)
        .into_iter()
        .map(|(s, e)| {
            let start = if s == 0 { rows[0].t } else { 0.5 * (rows[s - 1].t + rows[s].t) };
            let end = if e == rows.len() { rows[e - 1].t } else { 0.5 * (rows[e - 1].t + rows[e].t) };
            (start, end)
        })
        .collect()
}

fn polyline(out: &mut String, points: impl Iterator<Item = (f64, f64)>, color: &str, label: &str) {
    let pts: Vec<String> = points.map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
    let _ = writeln!(
        out,
        r#"<polyline data-series="{label}" points="{}" style="fill:none;stroke:{color};stroke-width:1.5"/>"#,
        pts.join(" ")
    );
}

fn axes(out: &mut String, panel: &Panel, t0: f64, t1: f64, ylabel: &str) {
    let (x0, x1) = (LEFT, WIDTH - RIGHT);
    let (ytop, ybot) = (panel.y0, panel.y0 + PANEL_HEIGHT);
    let _ = writeln!(
        out,
        r#"<rect x="{x0:.2}" y="{ytop:.2}" width="{:.2}" height="{PANEL_HEIGHT:.2}" style="fill:none;stroke:#333333;stroke-width:1"/>"#,
        x1 - x0
    );
    for k in 0..=TICKS {
        let f = k as f64 / TICKS as f64;
        let x = x0 + f * (x1 - x0);
        let t = t0 + f * (t1 - t0);
        let _ = writeln!(
            out,
            r#"<text x="{x:.2}" y="{:.2}" style="font:11px sans-serif;text-anchor:middle">{t:.3}</text>"#,
            ybot + 15.0
        );
        let v = panel.lo + f * (panel.hi - panel.lo);
        let y = panel.y(v);
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" style="font:11px sans-serif;text-anchor:end">{v:.3}</text>"#,
            x0 - 6.0,
            y + 4.0
        );
    }
    if panel.lo < 0.0 && panel.hi > 0.0 {
        let y = panel.y(0.0);
        let _ = writeln!(
            out,
            r#"<line x1="{x0:.2}" y1="{y:.2}" x2="{x1:.2}" y2="{y:.2}" style="stroke:#999999;stroke-dasharray:4,3"/>"#
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="18" y="{:.2}" transform="rotate(-90 18 {:.2})" style="font:13px sans-serif;text-anchor:middle">{ylabel}</text>"#,
        panel.y0 + PANEL_HEIGHT / 2.0,
        panel.y0 + PANEL_HEIGHT / 2.0
    );
}

/// Renders at least two sweep rows, ordered by `t`.
pub fn emit_svg(rows: &[SweepRow]) -> Result<String> {
    if rows.len() < 2 {
        return Err(Error::InvalidArgument(format!("a plot needs at least 2 rows, got {}", rows.len())));
    }
    if rows.windows(2).any(|w| !(w[0].t < w[1].t)) {
        return Err(Error::InvalidArgument("rows must be strictly increasing in t".into()));
    }
    let (t0, t1) = (rows[0].t, rows[rows.len() - 1].t);
    let x = |t: f64| LEFT + (WIDTH - LEFT - RIGHT) * (t - t0) / (t1 - t0);
    let top = Panel::new(TOP_PANEL_Y, rows.iter().flat_map(|r| r.eigenvalues));
    let bottom = Panel::new(BOTTOM_PANEL_Y, rows.iter().map(|r| r.f_tr).chain([0.0]));

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(out, r#"<rect width="{WIDTH}" height="{HEIGHT}" style="fill:#ffffff"/>"#);

    for (start, end) in causal_bands(rows) {
        for panel in [&top, &bottom] {
            let _ = writeln!(
                out,
                r#"<rect class="causal-band" data-t-start="{start}" data-t-end="{end}" x="{:.2}" y="{:.2}" width="{:.2}" height="{PANEL_HEIGHT:.2}" style="{BAND_STYLE}"/>"#,
                x(start),
                panel.y0,
                x(end) - x(start)
            );
        }
    }

    axes(&mut out, &top, t0, t1, "eigenvalues");
    axes(&mut out, &bottom, t0, t1, "f_tr");
    for (k, color) in EIGEN_COLORS.iter().enumerate() {
        polyline(&mut out, rows.iter().map(|r| (x(r.t), top.y(r.eigenvalues[k]))), color, &format!("lambda{}", k + 1));
    }
    polyline(&mut out, rows.iter().map(|r| (x(r.t), bottom.y(r.f_tr))), FTR_COLOR, "f_tr");
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" style="font:13px sans-serif;text-anchor:middle">t</text>"#,
        LEFT + (WIDTH - LEFT - RIGHT) / 2.0,
        HEIGHT - 12.0
    );
    out.push_str("</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(t: f64, causal: bool) -> SweepRow {
        let c = if causal { Classification::Causal } else { Classification::SpacelikeCompatible };
        SweepRow { t, eigenvalues: [-0.1, 0.0, 0.3, 0.8], f_tr: if causal { 0.2 } else { 0.0 }, classification: c }
    }

    #[test]
    fn two_rows_give_five_polylines() {
        let svg = emit_svg(&[row(0.0, true), row(1.0, false)]).unwrap();
        assert!(svg.starts_with("<svg xmlns=\"http://www.w3.org/2000/svg\""));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert_eq!(svg.matches("<polyline").count(), 5);
    }

    #[test]
    fn bands_follow_causal_runs() {
        let rows: Vec<_> = [true, true, false, false, true].iter().enumerate().map(|(i, &c)| row(i as f64, c)).collect();
        assert_eq!(causal_bands(&rows), vec![(0.0, 1.5), (3.5, 4.0)]);
        let all: Vec<_> = (0..4).map(|i| row(i as f64, true)).collect();
        assert_eq!(causal_bands(&all), vec![(0.0, 3.0)]);
        let none: Vec<_> = (0..4).map(|i| row(i as f64, false)).collect();
        assert!(causal_bands(&none).is_empty());
        assert!(!emit_svg(&none).unwrap().contains("causal-band"));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(emit_svg(&[row(0.0, true)]).is_err());
        assert!(emit_svg(&[row(1.0, true), row(0.0, true)]).is_err());
    }

    #[test]
    fn deterministic() {
        let rows: Vec<_> = (0..10).map(|i| row(i as f64 * 0.1, i < 4)).collect();
        assert_eq!(emit_svg(&rows).unwrap(), emit_svg(&rows).unwrap());
    }
}
