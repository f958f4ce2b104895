use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::lawfit::{density_curve, locpoly_smooth, Curve};

const WIDTH: f64 = 560.0;
const HEIGHT: f64 = 420.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 80.0;
const HEX_SIZE: f64 = 6.0;
const POINT_RADIUS: f64 = 2.0;
/// Peak of the density overlay as a fraction of the plot height.
const DENSITY_PEAK: f64 = 0.25;
const LIGHT_GREEN: [f64; 3] = [199.0, 233.0, 192.0];
const DARK_GREEN: [f64; 3] = [0.0, 68.0, 27.0];

/// Titles for a scatter figure.
#[derive(Debug, Clone, Default)]
pub struct ScatterLabels {
    pub title: String,
    pub x: String,
    pub y: String,
}

/// A rendered figure and the curves drawn on it, in log10 data units.
#[derive(Debug, Clone)]
pub struct Scatter {
    pub svg: String,
    pub points: usize,
    pub dropped: usize,
    pub smooth: Option<Curve>,
    pub density: Option<Curve>,
}

struct Frame {
    x: (f64, f64),
    y: (f64, f64),
}

impl Frame {
    fn px(&self, lx: f64) -> f64 {
        LEFT + (lx - self.x.0) / (self.x.1 - self.x.0) * (WIDTH - LEFT - RIGHT)
    }

    fn py(&self, ly: f64) -> f64 {
        HEIGHT - BOTTOM - (ly - self.y.0) / (self.y.1 - self.y.0) * (HEIGHT - TOP - BOTTOM)
    }
}

fn padded(v: &[f64]) -> (f64, f64) {
    let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if hi - lo < 1e-12 {
        (lo - 0.5, hi + 0.5)
    } else {
        let pad = 0.04 * (hi - lo);
        (lo - pad, hi + pad)
    }
}

/// Axial coordinates of the pointy-top hexagon containing a pixel.
fn hex_cell(px: f64, py: f64) -> (i64, i64) {
    let q = (3f64.sqrt() / 3.0 * px - py / 3.0) / HEX_SIZE;
    let r = (2.0 / 3.0 * py) / HEX_SIZE;
    let s = -q - r;
    let (mut rq, mut rr, rs) = (q.round(), r.round(), s.round());
    let (dq, dr, ds) = ((rq - q).abs(), (rr - r).abs(), (rs - s).abs());
    if dq > dr && dq > ds {
        rq = -rr - rs;
    } else if dr > ds {
        rr = -rq - rs;
    }
    (rq as i64, rr as i64)
}

/// Green ramp from light (t = 0) to dark (t = 1).
pub fn green_ramp(t: f64) -> String {
    let t = t.clamp(0.0, 1.0);
    let c: Vec<u8> = (0..3)
        .map(|i| (LIGHT_GREEN[i] + t * (DARK_GREEN[i] - LIGHT_GREEN[i])).round() as u8)
        .collect();
    format!("#{:02x}{:02x}{:02x}", c[0], c[1], c[2])
}

fn polyline(out: &mut String, class: &str, stroke: &str, pts: &[(f64, f64)]) {
    if pts.len() < 2 {
        return;
    }
    write!(out, "<polyline class=\"{class}\" fill=\"none\" stroke=\"{stroke}\" stroke-width=\"2\" points=\"").unwrap();
    for (i, (x, y)) in pts.iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        write!(out, "{x:.2},{y:.2}").unwrap();
    }
    out.push_str("\"/>\n");
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Log-log scatter of y against x. Points are coloured by the number of
/// points sharing their hexagonal cell (darker is denser); a local-linear
/// smooth of log y on log x and the density of log x are overlaid.
/// Points with a non-positive coordinate cannot be placed on log axes and
/// are dropped; the caption reports how many.
pub fn render_scatter(x: &[f64], y: &[f64], labels: &ScatterLabels) -> Result<Scatter> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    let (lx, ly): (Vec<f64>, Vec<f64>) = x
        .iter()
        .zip(y)
        .filter(|(a, b)| **a > 0.0 && **b > 0.0 && a.is_finite() && b.is_finite())
        .map(|(a, b)| (a.log10(), b.log10()))
        .unzip();
    let dropped = x.len() - lx.len();
    if lx.len() < 2 {
        return Err(Error::TooFew { need: 2, got: lx.len() });
    }
    let frame = Frame {
        x: padded(&lx),
        y: padded(&ly),
    };

    let pixels: Vec<(f64, f64)> = lx.iter().zip(&ly).map(|(&a, &b)| (frame.px(a), frame.py(b))).collect();
    let mut counts: BTreeMap<(i64, i64), usize> = BTreeMap::new();
    let cells: Vec<(i64, i64)> = pixels.iter().map(|&(px, py)| hex_cell(px, py)).collect();
    for c in &cells {
        *counts.entry(*c).or_default() += 1;
    }
    let max = counts.values().copied().max().unwrap_or(1) as f64;
    // Denser points are drawn last so they stay visible.
    let mut order: Vec<usize> = (0..pixels.len()).collect();
    order.sort_by_key(|&i| counts[&cells[i]]);

    let smooth = locpoly_smooth(&lx, &ly, None, 1).ok();
    let density = density_curve(&lx, None).ok();

    let mut svg = String::new();
    writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\" font-family=\"sans-serif\" font-size=\"12\">"
    )
    .unwrap();
    writeln!(svg, "<rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>").unwrap();
    writeln!(
        svg,
        "<text x=\"{:.2}\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">{}</text>",
        WIDTH / 2.0,
        escape(&labels.title)
    )
    .unwrap();
    let (pw, ph) = (WIDTH - LEFT - RIGHT, HEIGHT - TOP - BOTTOM);
    writeln!(svg, "<rect x=\"{LEFT}\" y=\"{TOP}\" width=\"{pw}\" height=\"{ph}\" fill=\"none\" stroke=\"black\"/>").unwrap();

    for k in (frame.x.0.ceil() as i64)..=(frame.x.1.floor() as i64) {
        let px = frame.px(k as f64);
        let base = HEIGHT - BOTTOM;
        writeln!(svg, "<line x1=\"{px:.2}\" y1=\"{base}\" x2=\"{px:.2}\" y2=\"{:.2}\" stroke=\"black\"/>", base + 5.0).unwrap();
        writeln!(svg, "<text x=\"{px:.2}\" y=\"{:.2}\" text-anchor=\"middle\">1e{k}</text>", base + 18.0).unwrap();
    }
    for k in (frame.y.0.ceil() as i64)..=(frame.y.1.floor() as i64) {
        let py = frame.py(k as f64);
        writeln!(svg, "<line x1=\"{:.2}\" y1=\"{py:.2}\" x2=\"{LEFT}\" y2=\"{py:.2}\" stroke=\"black\"/>", LEFT - 5.0).unwrap();
        writeln!(svg, "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"end\">1e{k}</text>", LEFT - 8.0, py + 4.0).unwrap();
    }
    writeln!(
        svg,
        "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\">{}</text>",
        LEFT + pw / 2.0,
        HEIGHT - BOTTOM + 36.0,
        escape(&labels.x)
    )
    .unwrap();
    writeln!(
        svg,
        "<text transform=\"translate(18 {:.2}) rotate(-90)\" text-anchor=\"middle\">{}</text>",
        TOP + ph / 2.0,
        escape(&labels.y)
    )
    .unwrap();

    svg.push_str("<g class=\"points\">\n");
    for i in order {
        let (px, py) = pixels[i];
        let fill = green_ramp(counts[&cells[i]] as f64 / max);
        writeln!(svg, "<circle class=\"pt\" cx=\"{px:.2}\" cy=\"{py:.2}\" r=\"{POINT_RADIUS}\" fill=\"{fill}\"/>").unwrap();
    }
    svg.push_str("</g>\n");

    if let Some(d) = &density {
        let top = DENSITY_PEAK * (frame.y.1 - frame.y.0);
        let scaled = d.scaled_to_max(top);
        let pts: Vec<(f64, f64)> = scaled
            .x
            .iter()
            .zip(&scaled.y)
            .filter(|(gx, _)| **gx >= frame.x.0 && **gx <= frame.x.1)
            .map(|(&gx, &gy)| (frame.px(gx), frame.py(frame.y.0 + gy)))
            .collect();
        polyline(&mut svg, "density", "#3182bd", &pts);
    }
    if let Some(s) = &smooth {
        let pts: Vec<(f64, f64)> = s
            .x
            .iter()
            .zip(&s.y)
            .filter(|(_, gy)| gy.is_finite())
            .map(|(&gx, &gy)| (frame.px(gx), frame.py(gy)))
            .collect();
        polyline(&mut svg, "smooth", "#d95f0e", &pts);
    }

    writeln!(
        svg,
        "<text class=\"caption\" x=\"{LEFT}\" y=\"{:.2}\">{} points; {} non-positive points dropped</text>",
        HEIGHT - 12.0,
        lx.len(),
        dropped
    )
    .unwrap();
    svg.push_str("</svg>\n");

    Ok(Scatter {
        svg,
        points: lx.len(),
        dropped,
        smooth,
        density,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels() -> ScatterLabels {
        ScatterLabels {
            title: "t".into(),
            x: "Frequency".into(),
            y: "Polysemy".into(),
        }
    }

    #[test]
    fn three_points_three_circles() {
        let s = render_scatter(&[1., 10., 100.], &[3., 2., 1.], &labels()).unwrap();
        assert_eq!(s.svg.matches("<circle").count(), 3);
        assert!(s.svg.contains("3 points; 0 non-positive points dropped"));
    }

    #[test]
    fn identical_points_share_darkest_cell() {
        let s = render_scatter(&[5.0; 20], &[2.0; 20], &labels()).unwrap();
        let dark = green_ramp(1.0);
        assert_eq!(s.svg.matches(&format!("fill=\"{dark}\"")).count(), 20);
        assert!(s.smooth.is_none() && s.density.is_none());
    }

    #[test]
    fn non_positive_points_dropped_and_counted() {
        let s = render_scatter(&[1., 2., 0., 4., -1.], &[1., 2., 3., 0., 5.], &labels()).unwrap();
        assert_eq!((s.points, s.dropped), (2, 3));
        assert!(s.svg.contains("2 points; 3 non-positive points dropped"));
        assert!(render_scatter(&[1., 0.], &[1., 1.], &labels()).is_err());
    }

    #[test]
    fn ramp_ends() {
        assert_eq!(green_ramp(0.0), "#c7e9c0");
        assert_eq!(green_ramp(1.0), "#00441b");
    }

    #[test]
    fn hex_cells_group_close_pixels() {
        assert_eq!(hex_cell(100.0, 100.0), hex_cell(100.5, 100.5));
        assert_ne!(hex_cell(100.0, 100.0), hex_cell(130.0, 100.0));
    }
}
