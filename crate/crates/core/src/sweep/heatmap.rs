use std::fmt::Write as _;
use std::path::Path;

use super::{ConfigError, SweepError};

const PLOT: f64 = 480.0;
const LEFT: f64 = 90.0;
const TOP: f64 = 50.0;
const NEUTRAL: &str = "#bdbdbd";
const STOPS: [(f64, f64, f64); 5] = [
    (68.0, 1.0, 84.0),
    (59.0, 82.0, 139.0),
    (33.0, 145.0, 140.0),
    (94.0, 201.0, 98.0),
    (253.0, 231.0, 37.0),
];

fn grid_error(message: impl Into<String>) -> SweepError {
    SweepError::Config(ConfigError {
        line: None,
        field: Some("metric".into()),
        message: message.into(),
    })
}

fn colour(t: f64) -> String {
    let t = t.clamp(0.0, 1.0) * (STOPS.len() - 1) as f64;
    let i = (t.floor() as usize).min(STOPS.len() - 2);
    let f = t - i as f64;
    let (a, b) = (STOPS[i], STOPS[i + 1]);
    let mix = |x: f64, y: f64| (x + f * (y - x)).round() as u8;
    format!("#{:02x}{:02x}{:02x}", mix(a.0, b.0), mix(a.1, b.1), mix(a.2, b.2))
}

fn parse_cell(s: &str) -> Result<Option<f64>, SweepError> {
    if s.is_empty() {
        return Ok(None);
    }
    s.parse()
        .map(Some)
        .map_err(|_| grid_error(format!("cell `{s}` is not a number")))
}

/// Renders one metric column of a two-axis sweep CSV as an SVG heatmap.
///
/// The first axis runs up the vertical direction and the second along the
/// horizontal. Empty cells are drawn in grey.
pub fn emit_heatmap(csv_path: &Path, metric: &str, svg_path: &Path) -> Result<(), SweepError> {
    let mut reader = csv::Reader::from_path(csv_path)?;
    let header: Vec<String> = reader.headers()?.iter().map(str::to_string).collect();
    let stable = header
        .iter()
        .position(|c| c == "stable")
        .ok_or_else(|| grid_error("CSV has no `stable` column"))?;
    if stable != 2 {
        return Err(grid_error(format!("heatmap needs two axis columns, found {stable}")));
    }
    let col = header
        .iter()
        .position(|c| c == metric)
        .filter(|&c| c > stable)
        .ok_or_else(|| grid_error(format!("no metric column `{metric}`")))?;

    let mut ys: Vec<f64> = Vec::new();
    let mut xs: Vec<f64> = Vec::new();
    let mut cells: Vec<(f64, f64, Option<f64>)> = Vec::new();
    for record in reader.records() {
        let record = record?;
        let y = parse_cell(&record[0])?.ok_or_else(|| grid_error("missing axis value"))?;
        let x = parse_cell(&record[1])?.ok_or_else(|| grid_error("missing axis value"))?;
        if ys.last() != Some(&y) {
            ys.push(y);
        }
        if ys.len() == 1 {
            xs.push(x);
        }
        cells.push((y, x, parse_cell(&record[col])?));
    }
    let (ny, nx) = (ys.len(), xs.len());
    if nx == 0 || cells.len() != nx * ny {
        return Err(grid_error("CSV rows do not form a rectangular grid"));
    }
    for (k, &(y, x, _)) in cells.iter().enumerate() {
        if y != ys[k / nx] || x != xs[k % nx] {
            return Err(grid_error("CSV rows do not form a rectangular grid"));
        }
    }

    let present: Vec<f64> = cells.iter().filter_map(|c| c.2).collect();
    let lo = present.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = present.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let span = hi - lo;

    let (cw, ch) = (PLOT / nx as f64, PLOT / ny as f64);
    let width = LEFT + PLOT + 40.0;
    let height = TOP + PLOT + 90.0;
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" font-family="sans-serif" font-size="13">"#
    );
    let _ = writeln!(svg, r#"<text x="{}" y="30" text-anchor="middle" font-size="16">{metric}</text>"#, LEFT + PLOT / 2.0);
    for (k, &(_, _, v)) in cells.iter().enumerate() {
        let (i, j) = (k / nx, k % nx);
        let fill = match v {
            None => NEUTRAL.to_string(),
            Some(_) if span <= 0.0 => colour(0.5),
            Some(v) => colour((v - lo) / span),
        };
        let _ = writeln!(
            svg,
            r#"<rect x="{:.3}" y="{:.3}" width="{:.3}" height="{:.3}" fill="{fill}"/>"#,
            LEFT + j as f64 * cw,
            TOP + (ny - 1 - i) as f64 * ch,
            cw,
            ch
        );
    }
    let bottom = TOP + PLOT;
    let _ = writeln!(svg, r#"<rect x="{LEFT}" y="{TOP}" width="{PLOT}" height="{PLOT}" fill="none" stroke="black"/>"#);
    let _ = writeln!(svg, r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#, LEFT + PLOT / 2.0, bottom + 36.0, header[1]);
    let _ = writeln!(
        svg,
        r#"<text x="24" y="{}" text-anchor="middle" transform="rotate(-90 24 {})">{}</text>"#,
        TOP + PLOT / 2.0,
        TOP + PLOT / 2.0,
        header[0]
    );
    let _ = writeln!(svg, r#"<text x="{LEFT}" y="{}" text-anchor="middle">{:.4}</text>"#, bottom + 18.0, xs[0]);
    let _ = writeln!(svg, r#"<text x="{}" y="{}" text-anchor="middle">{:.4}</text>"#, LEFT + PLOT, bottom + 18.0, xs[nx - 1]);
    let _ = writeln!(svg, r#"<text x="{}" y="{}" text-anchor="end">{:.4}</text>"#, LEFT - 6.0, bottom, ys[0]);
    let _ = writeln!(svg, r#"<text x="{}" y="{}" text-anchor="end">{:.4}</text>"#, LEFT - 6.0, TOP + 10.0, ys[ny - 1]);
    let note = if present.is_empty() {
        "no data".to_string()
    } else if span <= 0.0 {
        format!("min = max = {lo:.6}")
    } else {
        format!("min = {lo:.6}, max = {hi:.6}")
    };
    let _ = writeln!(svg, r#"<text x="{LEFT}" y="{}">{note}</text>"#, bottom + 70.0);
    svg.push_str("</svg>\n");
    std::fs::write(svg_path, svg)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write(dir: &Path, body: &str) -> std::path::PathBuf {
        let p = dir.join("t.csv");
        std::fs::write(&p, body).unwrap();
        p
    }

    #[test]
    fn two_by_two_has_four_cells() {
        let dir = tempfile::tempdir().unwrap();
        let csv = write(dir.path(), "a,b,stable,m\n1,1,1,0.5\n1,2,1,1.5\n2,1,0,\n2,2,1,2.5\n");
        let svg = dir.path().join("t.svg");
        emit_heatmap(&csv, "m", &svg).unwrap();
        let text = std::fs::read_to_string(svg).unwrap();
        assert_eq!(text.matches("<rect").count(), 5);
        assert!(text.contains(NEUTRAL));
        assert!(text.contains("min = 0.500000, max = 2.500000"));
    }

    #[test]
    fn constant_metric_is_annotated() {
        let dir = tempfile::tempdir().unwrap();
        let csv = write(dir.path(), "a,b,stable,m\n1,1,1,3\n1,2,1,3\n");
        let svg = dir.path().join("t.svg");
        emit_heatmap(&csv, "m", &svg).unwrap();
        assert!(std::fs::read_to_string(svg).unwrap().contains("min = max = 3.000000"));
    }

    #[test]
    fn non_grid_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let csv = write(dir.path(), "a,b,stable,m\n1,1,1,3\n1,2,1,3\n2,1,1,3\n");
        assert!(emit_heatmap(&csv, "m", &dir.path().join("t.svg")).is_err());
        let csv = write(dir.path(), "a,stable,m\n1,1,3\n");
        assert!(emit_heatmap(&csv, "m", &dir.path().join("t.svg")).is_err());
    }
}
