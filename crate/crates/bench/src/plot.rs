//! Static SVG convergence plots: optimality gap on a log-scale y-axis
//! against iteration, one polyline per optimizer (mean over seeds), legend
//! in configuration order.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use zo_opt::optimizers::TraceRecord;

use crate::runner::LOG_GAP_FLOOR;
use crate::trace_io::{load_traces, TraceMeta};
use crate::BenchError;

const WIDTH: f64 = 880.0;
const HEIGHT: f64 = 560.0;
const MARGIN_LEFT: f64 = 78.0;
const MARGIN_RIGHT: f64 = 24.0;
const MARGIN_TOP: f64 = 36.0;
const MARGIN_BOTTOM: f64 = 56.0;

const PALETTE: [&str; 6] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
];

/// One plotted curve: label plus `(iteration, mean gap)` points.
#[derive(Debug, Clone)]
pub struct PlotSeries {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

/// Averages the gap pointwise over seeds for each optimizer and renders the
/// SVG. Trace row grids must agree within an optimizer.
pub fn emit_plot(
    traces: &[(TraceMeta, Vec<TraceRecord>)],
    out: &Path,
) -> Result<(), BenchError> {
    if traces.is_empty() {
        return Err(BenchError::InvalidArgument(
            "empty trace set: nothing to plot".into(),
        ));
    }
    // group by configuration order, preserved via optimizer_index
    let mut groups: BTreeMap<(usize, String), Vec<&Vec<TraceRecord>>> = BTreeMap::new();
    for (meta, records) in traces {
        groups
            .entry((meta.optimizer_index, meta.optimizer.clone()))
            .or_default()
            .push(records);
    }
    let mut series = Vec::with_capacity(groups.len());
    for ((_, label), members) in groups {
        let len = members[0].len();
        if members.iter().any(|m| m.len() != len) {
            return Err(BenchError::InvalidArgument(format!(
                "traces for `{label}` have mismatched record grids"
            )));
        }
        let points = (0..len)
            .map(|row| {
                let iter = members[0][row].iter as f64;
                let mean =
                    members.iter().map(|m| m[row].gap).sum::<f64>() / members.len() as f64;
                (iter, mean)
            })
            .collect();
        series.push(PlotSeries { label, points });
    }
    let title = traces[0].0.function.clone();
    let svg = render(&series, &title)?;
    std::fs::write(out, svg).map_err(|e| BenchError::io(out, e))
}

/// Loads every trace under `input` and plots them to `out`.
pub fn plot_dir(input: &Path, out: &Path) -> Result<(), BenchError> {
    let traces = load_traces(input)?;
    emit_plot(&traces, out)
}

fn render(series: &[PlotSeries], title: &str) -> Result<String, BenchError> {
    if series.is_empty() || series.iter().any(|s| s.points.is_empty()) {
        return Err(BenchError::InvalidArgument("nothing to plot".into()));
    }
    let x_max = series
        .iter()
        .flat_map(|s| s.points.iter().map(|p| p.0))
        .fold(0.0_f64, f64::max)
        .max(1.0);
    let logs: Vec<f64> = series
        .iter()
        .flat_map(|s| s.points.iter().map(|p| log_gap(p.1)))
        .collect();
    let mut y_lo = logs.iter().copied().fold(f64::INFINITY, f64::min).floor();
    let mut y_hi = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max).ceil();
    if y_lo >= y_hi {
        y_lo -= 1.0;
        y_hi += 1.0;
    }

    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let x_of = |iter: f64| MARGIN_LEFT + iter / x_max * plot_w;
    let y_of = |log_gap: f64| MARGIN_TOP + (y_hi - log_gap) / (y_hi - y_lo) * plot_h;

    let mut svg = String::new();
    write!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n\
         <rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>\n"
    )
    .unwrap();
    writeln!(
        svg,
        "<text x=\"{:.1}\" y=\"22\" font-family=\"sans-serif\" font-size=\"15\" text-anchor=\"middle\">{}</text>",
        MARGIN_LEFT + plot_w / 2.0,
        xml_escape(title)
    )
    .unwrap();

    // axes
    write!(
        svg,
        "<line x1=\"{l:.1}\" y1=\"{t:.1}\" x2=\"{l:.1}\" y2=\"{b:.1}\" stroke=\"black\"/>\n\
         <line x1=\"{l:.1}\" y1=\"{b:.1}\" x2=\"{r:.1}\" y2=\"{b:.1}\" stroke=\"black\"/>\n",
        l = MARGIN_LEFT,
        t = MARGIN_TOP,
        b = MARGIN_TOP + plot_h,
        r = MARGIN_LEFT + plot_w,
    )
    .unwrap();

    // y ticks at integer decades, thinned to at most ~12 labels
    let decades = (y_hi - y_lo) as i64;
    let step = (decades / 12 + 1).max(1);
    let mut decade = y_lo as i64;
    while decade <= y_hi as i64 {
        let y = y_of(decade as f64);
        write!(
            svg,
            "<line x1=\"{:.1}\" y1=\"{y:.1}\" x2=\"{:.1}\" y2=\"{y:.1}\" stroke=\"#cccccc\"/>\n\
             <text x=\"{:.1}\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">1e{decade}</text>\n",
            MARGIN_LEFT,
            MARGIN_LEFT + plot_w,
            MARGIN_LEFT - 6.0,
            y + 4.0,
        )
        .unwrap();
        decade += step;
    }

    // x ticks
    for tick in 0..=5 {
        let iter = x_max * tick as f64 / 5.0;
        let x = x_of(iter);
        write!(
            svg,
            "<line x1=\"{x:.1}\" y1=\"{b:.1}\" x2=\"{x:.1}\" y2=\"{b2:.1}\" stroke=\"black\"/>\n\
             <text x=\"{x:.1}\" y=\"{ty:.1}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">{label}</text>\n",
            b = MARGIN_TOP + plot_h,
            b2 = MARGIN_TOP + plot_h + 5.0,
            ty = MARGIN_TOP + plot_h + 20.0,
            label = iter.round() as u64,
        )
        .unwrap();
    }

    // axis labels
    writeln!(
        svg,
        "<text x=\"{:.1}\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\">iteration</text>",
        MARGIN_LEFT + plot_w / 2.0,
        HEIGHT - 12.0,
    )
    .unwrap();
    writeln!(
        svg,
        "<text x=\"18\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 18 {:.1})\">optimality gap</text>",
        MARGIN_TOP + plot_h / 2.0,
        MARGIN_TOP + plot_h / 2.0,
    )
    .unwrap();

    // curves
    for (i, s) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let mut points = String::new();
        for (iter, gap) in &s.points {
            let x = x_of(*iter);
            let y = y_of(log_gap(*gap));
            write!(points, "{x:.2},{y:.2} ").unwrap();
        }
        writeln!(
            svg,
            "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\" points=\"{}\"/>",
            points.trim_end()
        )
        .unwrap();
    }

    // legend, configuration order
    let legend_x = MARGIN_LEFT + plot_w - 150.0;
    let mut legend_y = MARGIN_TOP + 14.0;
    for (i, s) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        write!(
            svg,
            "<line x1=\"{legend_x:.1}\" y1=\"{legend_y:.1}\" x2=\"{:.1}\" y2=\"{legend_y:.1}\" stroke=\"{color}\" stroke-width=\"2\"/>\n\
             <text x=\"{:.1}\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"12\">{}</text>\n",
            legend_x + 26.0,
            legend_x + 32.0,
            legend_y + 4.0,
            xml_escape(&s.label),
        )
        .unwrap();
        legend_y += 18.0;
    }

    svg.push_str("</svg>\n");
    Ok(svg)
}

/// Log-space y value, clamped below at the gap floor and above so that
/// overflowed gaps from diverged runs keep the axis range finite.
fn log_gap(gap: f64) -> f64 {
    gap.max(LOG_GAP_FLOOR).log10().min(320.0)
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn meta(optimizer: &str, index: usize, seed: u64) -> TraceMeta {
        TraceMeta {
            version: "0.1.0".into(),
            prng: "chacha8".into(),
            function: "quadratic".into(),
            dim: 2,
            optimizer: optimizer.into(),
            optimizer_index: index,
            seed,
            iters: 2,
            stride: 1,
            k: 1,
            mu: 0.005,
            beta1: 0.9,
            beta2: 0.99,
            lr: 0.001,
            zeta: 1e-8,
            sigma: 0.0,
            theta0: 2.0,
            v0: None,
            diagnostics: false,
            error: None,
        }
    }

    fn record(iter: u64, gap: f64) -> TraceRecord {
        TraceRecord {
            iter,
            fval: gap,
            gap,
            step_norm: 0.0,
            diagnostics: None,
        }
    }

    #[test]
    fn flat_trace_renders_one_polyline() {
        let traces = vec![(meta("zo-sgd", 0, 1), vec![record(0, 3.0), record(1, 3.0)])];
        let dir = std::env::temp_dir().join("zo-bench-plot-test");
        std::fs::create_dir_all(&dir).unwrap();
        let out = dir.join("flat.svg");
        emit_plot(&traces, &out).unwrap();
        let svg = std::fs::read_to_string(&out).unwrap();
        assert_eq!(svg.matches("<polyline").count(), 1);
        assert!(svg.contains("zo-sgd"));
        std::fs::remove_file(&out).ok();
    }

    #[test]
    fn zero_gap_is_clamped_before_log() {
        let traces = vec![(meta("zo-sgd", 0, 1), vec![record(0, 1.0), record(1, 0.0)])];
        let dir = std::env::temp_dir().join("zo-bench-plot-test");
        std::fs::create_dir_all(&dir).unwrap();
        let out = dir.join("clamped.svg");
        emit_plot(&traces, &out).unwrap();
        let svg = std::fs::read_to_string(&out).unwrap();
        assert!(!svg.contains("NaN") && !svg.contains("inf"));
        std::fs::remove_file(&out).ok();
    }

    #[test]
    fn overflowed_gaps_keep_the_axis_finite() {
        let traces = vec![(
            meta("zo-sgd", 0, 1),
            vec![record(0, 1.0), record(1, f64::INFINITY)],
        )];
        let dir = std::env::temp_dir().join("zo-bench-plot-test");
        std::fs::create_dir_all(&dir).unwrap();
        let out = dir.join("overflow.svg");
        emit_plot(&traces, &out).unwrap();
        let svg = std::fs::read_to_string(&out).unwrap();
        assert!(!svg.contains("NaN") && !svg.contains("inf"));
        std::fs::remove_file(&out).ok();
    }

    #[test]
    fn empty_trace_set_is_an_error() {
        let out = std::env::temp_dir().join("never.svg");
        assert!(matches!(
            emit_plot(&[], &out),
            Err(BenchError::InvalidArgument(_))
        ));
    }

    #[test]
    fn five_series_legend_in_configuration_order() {
        let tokens = ["zo-sgd", "zo-signsgd", "zo-rmsprop", "zo-adamm", "r-adazo"];
        let traces: Vec<_> = tokens
            .iter()
            .enumerate()
            .map(|(i, t)| (meta(t, i, 1), vec![record(0, 2.0), record(1, 1.0)]))
            .collect();
        let dir = std::env::temp_dir().join("zo-bench-plot-test");
        std::fs::create_dir_all(&dir).unwrap();
        let out = dir.join("five.svg");
        emit_plot(&traces, &out).unwrap();
        let svg = std::fs::read_to_string(&out).unwrap();
        assert_eq!(svg.matches("<polyline").count(), 5);
        let positions: Vec<usize> = tokens
            .iter()
            .map(|t| svg.find(&format!(">{t}</text>")).unwrap())
            .collect();
        for pair in positions.windows(2) {
            assert!(pair[0] < pair[1], "legend out of configuration order");
        }
        std::fs::remove_file(&out).ok();
    }
}
