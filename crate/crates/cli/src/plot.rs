//! Minimal SVG line charts for the sweep tables.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 130.0;
const MARGIN_Y: f64 = 40.0;
const COLORS: [&str; 3] = ["#1f77b4", "#d62728", "#2ca02c"];

struct Table {
    header: Vec<String>,
    rows: Vec<Vec<f64>>,
}

fn read_table(path: &Path) -> Result<Table> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header: Vec<String> = match lines.next() {
        Some(h) => h.split(',').map(|s| s.trim().to_string()).collect(),
        None => bail!("{} is empty", path.display()),
    };
    let rows = lines
        .enumerate()
        .map(|(k, line)| {
            let row: Vec<f64> = line
                .split(',')
                .map(|v| v.trim().parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .with_context(|| format!("{}: bad number on line {}", path.display(), k + 2))?;
            if row.len() != header.len() {
                bail!(
                    "{}: line {} has {} fields, expected {}",
                    path.display(),
                    k + 2,
                    row.len(),
                    header.len()
                );
            }
            Ok(row)
        })
        .collect::<Result<_>>()?;
    Ok(Table { header, rows })
}

/// Round step for about `target` ticks over `span`.
fn tick_step(span: f64, target: f64) -> f64 {
    let raw = span / target;
    let mag = 10f64.powf(raw.log10().floor());
    let norm = raw / mag;
    let nice = if norm < 1.5 {
        1.0
    } else if norm < 3.5 {
        2.0
    } else if norm < 7.5 {
        5.0
    } else {
        10.0
    };
    nice * mag
}

fn range(values: impl Iterator<Item = f64>) -> Option<(f64, f64)> {
    let (lo, hi) = values
        .filter(|v| v.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if !lo.is_finite() {
        return None;
    }
    if hi > lo {
        Some((lo, hi))
    } else {
        Some((lo - 0.5 * lo.abs().max(1.0), hi + 0.5 * hi.abs().max(1.0)))
    }
}

fn label(v: f64) -> String {
    let s = format!("{v:.6}");
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

/// One chart: the first column on the x axis, `columns` as series.
fn chart(table: &Table, columns: &[usize], title: &str, y_label: &str) -> Result<String> {
    let xs: Vec<f64> = table.rows.iter().map(|r| r[0]).collect();
    let Some((x0, x1)) = range(xs.iter().copied()) else {
        bail!("no data to plot for {title}");
    };
    let (y0, y1) = range(columns.iter().flat_map(|&c| table.rows.iter().map(move |r| r[c]))).unwrap_or((0.0, 1.0));
    let (y0, y1) = if y0 >= 0.0 && y0 < 0.25 * y1 {
        (0.0, y1)
    } else {
        (y0, y1)
    };

    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - 2.0 * MARGIN_Y;
    let px = |x: f64| MARGIN_LEFT + (x - x0) / (x1 - x0) * plot_w;
    let py = |y: f64| MARGIN_Y + (1.0 - (y - y0) / (y1 - y0)) * plot_h;

    let mut svg = String::new();
    writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" font-family="sans-serif" font-size="12">"#
    )?;
    writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#)?;
    writeln!(
        svg,
        r#"<text x="{}" y="20" text-anchor="middle" font-size="14">{title}</text>"#,
        MARGIN_LEFT + plot_w / 2.0
    )?;
    writeln!(
        svg,
        r#"<rect x="{MARGIN_LEFT}" y="{MARGIN_Y}" width="{plot_w}" height="{plot_h}" fill="none" stroke="black"/>"#
    )?;

    let step = tick_step(x1 - x0, 6.0);
    let mut t = (x0 / step).ceil() * step;
    while t <= x1 + 1e-9 * step {
        let x = px(t);
        writeln!(
            svg,
            r##"<line x1="{x:.2}" y1="{MARGIN_Y}" x2="{x:.2}" y2="{:.2}" stroke="#ddd"/>"##,
            MARGIN_Y + plot_h
        )?;
        writeln!(
            svg,
            r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            MARGIN_Y + plot_h + 16.0,
            label(t)
        )?;
        t += step;
    }
    let step = tick_step(y1 - y0, 6.0);
    let mut t = (y0 / step).ceil() * step;
    while t <= y1 + 1e-9 * step {
        let y = py(t);
        writeln!(
            svg,
            r##"<line x1="{MARGIN_LEFT}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#ddd"/>"##,
            MARGIN_LEFT + plot_w
        )?;
        writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            MARGIN_LEFT - 6.0,
            y + 4.0,
            label(t)
        )?;
        t += step;
    }
    writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
        MARGIN_LEFT + plot_w / 2.0,
        HEIGHT - 6.0,
        table.header[0]
    )?;
    writeln!(
        svg,
        r#"<text transform="translate(16 {:.2}) rotate(-90)" text-anchor="middle">{y_label}</text>"#,
        MARGIN_Y + plot_h / 2.0
    )?;

    for (k, &c) in columns.iter().enumerate() {
        let color = COLORS[k % COLORS.len()];
        // NaN entries split the series into separate segments
        let mut segment: Vec<String> = Vec::new();
        let flush = |segment: &mut Vec<String>, svg: &mut String| -> std::fmt::Result {
            if segment.len() > 1 {
                writeln!(
                    svg,
                    r#"<polyline fill="none" stroke="{color}" stroke-width="2" points="{}"/>"#,
                    segment.join(" ")
                )?;
            }
            segment.clear();
            Ok(())
        };
        for r in &table.rows {
            if r[0].is_finite() && r[c].is_finite() {
                segment.push(format!("{:.2},{:.2}", px(r[0]), py(r[c])));
            } else {
                flush(&mut segment, &mut svg)?;
            }
        }
        flush(&mut segment, &mut svg)?;
        let ly = MARGIN_Y + 14.0 + 18.0 * k as f64;
        let lx = MARGIN_LEFT + plot_w + 10.0;
        writeln!(
            svg,
            r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"/>"#,
            lx + 20.0
        )?;
        writeln!(
            svg,
            r#"<text x="{}" y="{}">{}</text>"#,
            lx + 26.0,
            ly + 4.0,
            table.header[c]
        )?;
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

fn columns_with_prefix(table: &Table, prefix: &str) -> Vec<usize> {
    (1..table.header.len())
        .filter(|&c| table.header[c].starts_with(prefix))
        .collect()
}

/// Renders `throughput.svg`, `gee.svg` and `power.svg` from the tables in
/// `input`.
pub fn render_dir(input: &Path, out: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    let charts = [
        ("throughput", "tp_", "Throughput", "Mbit/s"),
        ("gee", "gee_", "Global energy efficiency", "Mbit/J"),
        ("power", "prel_", "Relative transmit power", "% of TP strategy"),
    ];
    let mut written = Vec::new();
    for (name, prefix, title, unit) in charts {
        let table = read_table(&input.join(format!("{name}.csv")))?;
        let svg = chart(&table, &columns_with_prefix(&table, prefix), title, unit)?;
        let path = out.join(format!("{name}.svg"));
        fs::write(&path, svg).with_context(|| format!("writing {}", path.display()))?;
        written.push(path);
    }
    Ok(written)
}
