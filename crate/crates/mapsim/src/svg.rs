//! Self-contained SVG charts on a fixed 800x600 canvas.

use std::fmt::Write;

use mapsim_core::analysis::PcaResult;
use mapsim_core::dynamics::Trajectory;
use mapsim_core::metrics::MetricsRecord;
use mapsim_core::topology::ArchKind;

use crate::config::PaperConfig;
use crate::HarnessError;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 600.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 140.0;
const TOP: f64 = 50.0;
const BOTTOM: f64 = 60.0;

const PALETTE: [&str; 10] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
];

struct Frame {
    x_max: f64,
    y_max: f64,
}

impl Frame {
    fn px(&self, x: f64) -> f64 {
        LEFT + x / self.x_max * (WIDTH - LEFT - RIGHT)
    }

    fn py(&self, y: f64) -> f64 {
        HEIGHT - BOTTOM - y / self.y_max * (HEIGHT - TOP - BOTTOM)
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn open(doc: &mut String, title: &str) {
    let _ = writeln!(
        doc,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {WIDTH} {HEIGHT}" width="{WIDTH}" height="{HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(doc, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        doc,
        r#"<text x="{}" y="28" text-anchor="middle" font-size="16">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );
}

fn axes(doc: &mut String, frame: &Frame, x_label: &str, y_label: &str, x_ticks: bool) {
    let (x0, y0) = (frame.px(0.0), frame.py(0.0));
    let (x1, y1) = (frame.px(frame.x_max), frame.py(frame.y_max));
    let _ = writeln!(
        doc,
        r#"<path d="M{x0:.2},{y1:.2} L{x0:.2},{y0:.2} L{x1:.2},{y0:.2}" fill="none" stroke="black"/>"#
    );
    for k in 0..=5 {
        let v = frame.y_max * k as f64 / 5.0;
        let y = frame.py(v);
        let _ = writeln!(
            doc,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            x0 - 6.0,
            y + 4.0,
            tick(v)
        );
    }
    if x_ticks {
        for k in 0..=5 {
            let v = frame.x_max * k as f64 / 5.0;
            let _ = writeln!(
                doc,
                r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
                frame.px(v),
                y0 + 18.0,
                tick(v)
            );
        }
    }
    let _ = writeln!(
        doc,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
        (x0 + x1) / 2.0,
        HEIGHT - 15.0,
        escape(x_label)
    );
    let _ = writeln!(
        doc,
        r#"<text x="18" y="{:.2}" text-anchor="middle" transform="rotate(-90 18 {:.2})">{}</text>"#,
        (y0 + y1) / 2.0,
        (y0 + y1) / 2.0,
        escape(y_label)
    );
}

fn tick(v: f64) -> String {
    if v == v.round() {
        format!("{v:.0}")
    } else {
        format!("{v:.2}")
    }
}

fn legend(doc: &mut String, entries: &[(String, &str)]) {
    let x = WIDTH - RIGHT + 15.0;
    for (k, (label, color)) in entries.iter().enumerate() {
        let y = TOP + 10.0 + 18.0 * k as f64;
        let _ = writeln!(
            doc,
            r#"<rect x="{x:.2}" y="{:.2}" width="12" height="12" fill="{color}"/><text x="{:.2}" y="{:.2}">{}</text>"#,
            y - 10.0,
            x + 18.0,
            y,
            escape(label)
        );
    }
}

/// State-versus-time polylines, one per agent, with a dashed marker at the
/// transition time when given.
pub fn render_states(trajectory: &Trajectory, tau: Option<usize>, title: &str) -> Result<String, HarnessError> {
    let n = trajectory.system().n_agents;
    if trajectory.is_empty() || n == 0 {
        return Err(HarnessError::EmptyPlot);
    }
    let peak = trajectory
        .states()
        .row_iter()
        .flatten()
        .copied()
        .fold(0.0, f64::max);
    let frame = Frame {
        x_max: trajectory.horizon().max(1) as f64,
        y_max: if peak > 0.0 { peak * 1.05 } else { 1.0 },
    };

    let mut doc = String::new();
    open(&mut doc, title);
    axes(&mut doc, &frame, "t", "x_i(t)", true);
    for i in 0..n {
        let points: Vec<String> = trajectory
            .agent(i)
            .enumerate()
            .map(|(t, x)| format!("{:.2},{:.2}", frame.px(t as f64), frame.py(x)))
            .collect();
        let _ = writeln!(
            doc,
            r#"<polyline class="agent" data-agent="{}" points="{}" fill="none" stroke="{}" stroke-width="1.5"/>"#,
            i + 1,
            points.join(" "),
            PALETTE[i % PALETTE.len()]
        );
    }
    if let Some(tau) = tau.filter(|&t| t <= trajectory.horizon()) {
        let x = frame.px(tau as f64);
        let _ = writeln!(
            doc,
            r##"<line class="tau" x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke="#444" stroke-dasharray="6 4"/>"##,
            frame.py(0.0),
            frame.py(frame.y_max)
        );
        let _ = writeln!(doc, r#"<text x="{:.2}" y="{:.2}">τ = {tau}</text>"#, x + 4.0, TOP + 12.0);
    }
    let entries: Vec<(String, &str)> = (0..n)
        .map(|i| (format!("agent {}", i + 1), PALETTE[i % PALETTE.len()]))
        .collect();
    legend(&mut doc, &entries);
    doc.push_str("</svg>\n");
    Ok(doc)
}

/// Grouped bars of per-agent work, one group per record.
pub fn render_work_bars(records: &[MetricsRecord], title: &str) -> Result<String, HarnessError> {
    let n = records.iter().map(|r| r.per_agent_work.len()).max().unwrap_or(0);
    if records.is_empty() || n == 0 {
        return Err(HarnessError::EmptyPlot);
    }
    let peak = records
        .iter()
        .flat_map(|r| r.per_agent_work.iter().copied())
        .fold(0.0, f64::max);
    let frame = Frame {
        x_max: records.len() as f64,
        y_max: if peak > 0.0 { peak * 1.1 } else { 1.0 },
    };
    let mut doc = String::new();
    open(&mut doc, title);
    axes(&mut doc, &frame, "architecture", "W_i", false);
    let group = frame.px(1.0) - frame.px(0.0);
    let bar = group * 0.8 / n as f64;
    for (g, r) in records.iter().enumerate() {
        let x0 = frame.px(g as f64) + group * 0.1;
        for (i, &w) in r.per_agent_work.iter().enumerate() {
            let top = frame.py(w);
            let _ = writeln!(
                doc,
                r#"<rect class="bar" x="{:.2}" y="{top:.2}" width="{bar:.2}" height="{:.2}" fill="{}"/>"#,
                x0 + bar * i as f64,
                frame.py(0.0) - top,
                PALETTE[i % PALETTE.len()]
            );
        }
        let _ = writeln!(
            doc,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            frame.px(g as f64 + 0.5),
            frame.py(0.0) + 18.0,
            r.arch
        );
    }
    let entries: Vec<(String, &str)> = (0..n)
        .map(|i| (format!("W_{}", i + 1), PALETTE[i % PALETTE.len()]))
        .collect();
    legend(&mut doc, &entries);
    doc.push_str("</svg>\n");
    Ok(doc)
}

/// Scatter of the first two principal components.
pub fn render_pca(result: &PcaResult<(ArchKind, PaperConfig)>) -> Result<String, HarnessError> {
    let p = &result.projection;
    if p.rows() == 0 {
        return Err(HarnessError::EmptyPlot);
    }
    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for row in p.row_iter() {
        for c in 0..2 {
            lo[c] = lo[c].min(row[c]);
            hi[c] = hi[c].max(row[c]);
        }
    }
    let pad = |c: usize| ((hi[c] - lo[c]) * 0.1).max(1e-6);
    let (x_lo, y_lo) = (lo[0] - pad(0), lo[1] - pad(1));
    let frame = Frame {
        x_max: hi[0] + pad(0) - x_lo,
        y_max: hi[1] + pad(1) - y_lo,
    };
    let ratios = &result.explained_variance_ratio;
    let mut doc = String::new();
    open(&mut doc, "Principal components of the performance metrics");
    axes(
        &mut doc,
        &frame,
        &format!("PC1 ({:.2}%)", 100.0 * ratios[0]),
        &format!("PC2 ({:.2}%)", 100.0 * ratios.get(1).copied().unwrap_or(0.0)),
        false,
    );
    for (i, (arch, cfg)) in result.row_labels.iter().enumerate() {
        let (x, y) = (frame.px(p[(i, 0)] - x_lo), frame.py(p[(i, 1)] - y_lo));
        let color = match cfg {
            PaperConfig::A => PALETTE[0],
            PaperConfig::B => PALETTE[1],
        };
        let shape = match cfg {
            PaperConfig::A => format!(r#"<circle cx="{x:.2}" cy="{y:.2}" r="5" fill="{color}"/>"#),
            PaperConfig::B => format!(
                r#"<rect x="{:.2}" y="{:.2}" width="10" height="10" fill="{color}"/>"#,
                x - 5.0,
                y - 5.0
            ),
        };
        let _ = writeln!(
            doc,
            r#"{shape}<text x="{:.2}" y="{:.2}" font-size="10">{arch}</text>"#,
            x + 7.0,
            y - 6.0
        );
    }
    legend(
        &mut doc,
        &[
            ("s=0.8, f=0.1".to_string(), PALETTE[0]),
            ("s=0.1, f=0.8".to_string(), PALETTE[1]),
        ],
    );
    doc.push_str("</svg>\n");
    Ok(doc)
}
