//! SVG and CSV renderings of testing-region boundaries and related curves.

use std::fmt::Write;

use athermal::majorization::format_sig17;
use athermal::{compute_elbows, AthermalityState};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotFormat {
    Csv,
    Svg,
}

const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

fn to_canvas(x: f64, y: f64) -> (f64, f64) {
    (50.0 + 500.0 * x, 550.0 - 500.0 * y)
}

/// Polylines in the unit square; `series[i]` is drawn as series `i`.
pub fn render_series(series: &[Vec<(f64, f64)>], format: PlotFormat) -> Vec<u8> {
    let mut out = String::new();
    match format {
        PlotFormat::Csv => {
            out.push_str("series,x,y\n");
            for (i, points) in series.iter().enumerate() {
                for &(x, y) in points {
                    let _ = writeln!(out, "{i},{},{}", format_sig17(x), format_sig17(y));
                }
            }
        }
        PlotFormat::Svg => {
            out.push_str(
                "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 600 600\" width=\"600\" height=\"600\">\n",
            );
            out.push_str("<rect x=\"50\" y=\"50\" width=\"500\" height=\"500\" fill=\"none\" stroke=\"black\"/>\n");
            out.push_str(
                "<line class=\"diagonal\" x1=\"50\" y1=\"550\" x2=\"550\" y2=\"50\" stroke=\"gray\" stroke-dasharray=\"4 4\"/>\n",
            );
            out.push_str("<text x=\"300\" y=\"590\" text-anchor=\"middle\">x</text>\n");
            out.push_str("<text x=\"15\" y=\"300\" text-anchor=\"middle\">y</text>\n");
            for (i, points) in series.iter().enumerate() {
                let coords: Vec<String> = points
                    .iter()
                    .map(|&(x, y)| {
                        let (cx, cy) = to_canvas(x, y);
                        format!("{cx:.4},{cy:.4}")
                    })
                    .collect();
                let _ = writeln!(
                    out,
                    "<polyline data-series=\"{i}\" points=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"2\"/>",
                    coords.join(" "),
                    PALETTE[i % PALETTE.len()]
                );
            }
            out.push_str("</svg>\n");
        }
    }
    out.into_bytes()
}

/// Lower boundaries of the testing regions of `states`.
pub fn render_boundary(states: &[AthermalityState], format: PlotFormat) -> Vec<u8> {
    let series: Vec<Vec<(f64, f64)>> = states
        .iter()
        .map(|s| compute_elbows(s).elbows().iter().map(|e| (e.x, e.y)).collect())
        .collect();
    render_series(&series, format)
}
