use std::path::{Path, PathBuf};

use crate::cli_error::{CliError, CliResult};

/// Writes via a temp file in the target directory plus an atomic rename, so
/// interrupted or failing runs never leave partial outputs behind.
pub fn write_atomic(path: impl AsRef<Path>, contents: &str) -> CliResult<()> {
    let path = path.as_ref();
    let dir = path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    let name = path
        .file_name()
        .ok_or_else(|| CliError::Io(format!("{} has no file name", path.display())))?;
    let tmp: PathBuf = dir.join(format!(".tmp-{}", name.to_string_lossy()));
    std::fs::write(&tmp, contents)
        .map_err(|e| CliError::Io(format!("cannot write {}: {e}", tmp.display())))?;
    std::fs::rename(&tmp, path).map_err(|e| {
        CliError::Io(format!(
            "cannot rename {} to {}: {e}",
            tmp.display(),
            path.display()
        ))
    })?;
    Ok(())
}

pub fn ensure_dir(path: impl AsRef<Path>) -> CliResult<()> {
    std::fs::create_dir_all(path.as_ref())
        .map_err(|e| CliError::Io(format!("cannot create {}: {e}", path.as_ref().display())))
}

const WIDTH: f64 = 480.0;
const HEIGHT: f64 = 360.0;
const MARGIN: f64 = 40.0;

fn x_px(x: f64) -> f64 {
    MARGIN + x * (WIDTH - 2.0 * MARGIN)
}

fn y_px(y: f64) -> f64 {
    HEIGHT - MARGIN - y * (HEIGHT - 2.0 * MARGIN)
}

fn svg_header(x_label: &str, y_label: &str) -> String {
    format!(
        concat!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" ",
            "viewBox=\"0 0 {w} {h}\">\n",
            "<rect width=\"{w}\" height=\"{h}\" fill=\"white\"/>\n",
            "<line x1=\"{m}\" y1=\"{ybase}\" x2=\"{xmax}\" y2=\"{ybase}\" stroke=\"black\"/>\n",
            "<line x1=\"{m}\" y1=\"{m}\" x2=\"{m}\" y2=\"{ybase}\" stroke=\"black\"/>\n",
            "<text x=\"{xmid}\" y=\"{h_text}\" text-anchor=\"middle\" font-size=\"12\">{xl}</text>\n",
            "<text x=\"12\" y=\"{ymid}\" text-anchor=\"middle\" font-size=\"12\" ",
            "transform=\"rotate(-90 12 {ymid})\">{yl}</text>\n"
        ),
        w = WIDTH,
        h = HEIGHT,
        m = MARGIN,
        ybase = HEIGHT - MARGIN,
        xmax = WIDTH - MARGIN,
        xmid = WIDTH / 2.0,
        ymid = HEIGHT / 2.0,
        h_text = HEIGHT - 10.0,
        xl = x_label,
        yl = y_label,
    )
}

/// Static polyline over unit-square points.
pub fn polyline_svg(points: &[(f64, f64)], x_label: &str, y_label: &str) -> String {
    let mut svg = svg_header(x_label, y_label);
    let coords: Vec<String> = points
        .iter()
        .map(|&(x, y)| format!("{:.2},{:.2}", x_px(x), y_px(y)))
        .collect();
    svg.push_str(&format!(
        "<polyline points=\"{}\" fill=\"none\" stroke=\"steelblue\" stroke-width=\"2\"/>\n",
        coords.join(" ")
    ));
    for &(x, y) in points {
        svg.push_str(&format!(
            "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"3\" fill=\"steelblue\"/>\n",
            x_px(x),
            y_px(y)
        ));
    }
    svg.push_str("</svg>\n");
    svg
}

/// Step plot of one or more survival curves over [0, t_max] x [0, 1].
pub fn step_svg(curves: &[(String, Vec<(f64, f64)>)], x_label: &str, y_label: &str) -> String {
    let t_max = curves
        .iter()
        .flat_map(|(_, pts)| pts.iter().map(|&(t, _)| t))
        .fold(1e-9, f64::max);
    let palette = ["steelblue", "firebrick", "seagreen", "darkorange", "purple"];
    let mut svg = svg_header(x_label, y_label);
    for (i, (label, points)) in curves.iter().enumerate() {
        let color = palette[i % palette.len()];
        let mut path = format!("M {:.2} {:.2}", x_px(0.0), y_px(1.0));
        let mut level = 1.0;
        for &(t, s) in points {
            path.push_str(&format!(" L {:.2} {:.2}", x_px(t / t_max), y_px(level)));
            path.push_str(&format!(" L {:.2} {:.2}", x_px(t / t_max), y_px(s)));
            level = s;
        }
        path.push_str(&format!(" L {:.2} {:.2}", x_px(1.0), y_px(level)));
        svg.push_str(&format!(
            "<path d=\"{path}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"2\"/>\n"
        ));
        svg.push_str(&format!(
            "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"11\" fill=\"{color}\">{label}</text>\n",
            WIDTH - MARGIN - 90.0,
            MARGIN + 14.0 * (i + 1) as f64
        ));
    }
    svg.push_str("</svg>\n");
    svg
}
