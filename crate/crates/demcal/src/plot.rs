//! Minimal standalone SVG emission for fitted-curve plots: scatter points
//! plus a smooth curve, axes, ticks, and labels. No styling dependencies;
//! the output is a self-contained `.svg` file.

use std::fmt::Write as _;

use crate::rsm::PolyFit;

const W: f64 = 640.0;
const H: f64 = 440.0;
const MARGIN_L: f64 = 70.0;
const MARGIN_R: f64 = 25.0;
const MARGIN_T: f64 = 40.0;
const MARGIN_B: f64 = 55.0;

/// Scatter + fitted-curve plot.
pub struct CurvePlot<'a> {
    pub title: &'a str,
    pub x_label: &'a str,
    pub y_label: &'a str,
    pub points: &'a [(f64, f64)],
    pub fit: Option<&'a PolyFit>,
}

impl CurvePlot<'_> {
    pub fn to_svg(&self) -> String {
        let (mut x_lo, mut x_hi) = bounds(self.points.iter().map(|p| p.0));
        let (mut y_lo, mut y_hi) = bounds(self.points.iter().map(|p| p.1));
        if let Some(fit) = self.fit {
            for i in 0..=64 {
                let x = x_lo + (x_hi - x_lo) * i as f64 / 64.0;
                let y = fit.eval(x);
                y_lo = y_lo.min(y);
                y_hi = y_hi.max(y);
            }
        }
        pad(&mut x_lo, &mut x_hi);
        pad(&mut y_lo, &mut y_hi);

        let px = |x: f64| MARGIN_L + (x - x_lo) / (x_hi - x_lo) * (W - MARGIN_L - MARGIN_R);
        let py = |y: f64| H - MARGIN_B - (y - y_lo) / (y_hi - y_lo) * (H - MARGIN_T - MARGIN_B);

        let mut s = String::new();
        let _ = write!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#
        );
        let _ = write!(
            s,
            r#"<rect width="{W}" height="{H}" fill="white"/><text x="{}" y="24" text-anchor="middle" font-family="sans-serif" font-size="16">{}</text>"#,
            W / 2.0,
            escape(self.title)
        );

        // Axes.
        let _ = write!(
            s,
            r#"<line x1="{l}" y1="{b}" x2="{r}" y2="{b}" stroke="black"/><line x1="{l}" y1="{t}" x2="{l}" y2="{b}" stroke="black"/>"#,
            l = MARGIN_L,
            r = W - MARGIN_R,
            t = MARGIN_T,
            b = H - MARGIN_B
        );
        for i in 0..=5 {
            let fx = x_lo + (x_hi - x_lo) * i as f64 / 5.0;
            let fy = y_lo + (y_hi - y_lo) * i as f64 / 5.0;
            let _ = write!(
                s,
                r#"<line x1="{x}" y1="{b}" x2="{x}" y2="{b2}" stroke="black"/><text x="{x}" y="{ty}" text-anchor="middle" font-family="sans-serif" font-size="11">{lx}</text>"#,
                x = px(fx),
                b = H - MARGIN_B,
                b2 = H - MARGIN_B + 5.0,
                ty = H - MARGIN_B + 18.0,
                lx = tick(fx)
            );
            let _ = write!(
                s,
                r#"<line x1="{l}" y1="{y}" x2="{l2}" y2="{y}" stroke="black"/><text x="{tx}" y="{y2}" text-anchor="end" font-family="sans-serif" font-size="11">{ly}</text>"#,
                l = MARGIN_L,
                l2 = MARGIN_L - 5.0,
                y = py(fy),
                tx = MARGIN_L - 8.0,
                y2 = py(fy) + 4.0,
                ly = tick(fy)
            );
        }
        let _ = write!(
            s,
            r#"<text x="{}" y="{}" text-anchor="middle" font-family="sans-serif" font-size="13">{}</text>"#,
            (MARGIN_L + W - MARGIN_R) / 2.0,
            H - 12.0,
            escape(self.x_label)
        );
        let _ = write!(
            s,
            r#"<text x="16" y="{}" text-anchor="middle" font-family="sans-serif" font-size="13" transform="rotate(-90 16 {})">{}</text>"#,
            (MARGIN_T + H - MARGIN_B) / 2.0,
            (MARGIN_T + H - MARGIN_B) / 2.0,
            escape(self.y_label)
        );

        // Fitted curve.
        if let Some(fit) = self.fit {
            let mut path = String::new();
            for i in 0..=128 {
                let x = x_lo + (x_hi - x_lo) * i as f64 / 128.0;
                let cmd = if i == 0 { 'M' } else { 'L' };
                let _ = write!(path, "{cmd}{:.2},{:.2} ", px(x), py(fit.eval(x)));
            }
            let _ = write!(
                s,
                r##"<path d="{path}" fill="none" stroke="#1f6fb2" stroke-width="2"/>"##
            );
        }

        // Scatter.
        for &(x, y) in self.points {
            let _ = write!(
                s,
                r##"<circle cx="{:.2}" cy="{:.2}" r="4" fill="#c23b22"/>"##,
                px(x),
                py(y)
            );
        }
        s.push_str("</svg>");
        s
    }

    pub fn write_svg(&self, path: &std::path::Path) -> std::io::Result<()> {
        std::fs::write(path, self.to_svg())
    }
}

fn bounds(vals: impl Iterator<Item = f64>) -> (f64, f64) {
    vals.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
        (lo.min(v), hi.max(v))
    })
}

fn pad(lo: &mut f64, hi: &mut f64) {
    let span = (*hi - *lo).max(1e-12);
    *lo -= 0.06 * span;
    *hi += 0.06 * span;
}

fn tick(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    let a = v.abs();
    if (0.01..10000.0).contains(&a) {
        let s = format!("{v:.3}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        format!("{v:.2e}")
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rsm::fit_poly;

    #[test]
    fn svg_contains_points_curve_and_labels() {
        let x = [0.35, 0.45, 0.55, 0.65, 0.75, 0.85];
        let y = [19.97, 24.97, 29.97, 33.43, 37.46, 39.96];
        let fit = fit_poly(&x, &y, 2).unwrap();
        let pts: Vec<(f64, f64)> = x.iter().copied().zip(y.iter().copied()).collect();
        let svg = CurvePlot {
            title: "Tilt angle vs static friction",
            x_label: "static friction coefficient",
            y_label: "tilt angle (deg)",
            points: &pts,
            fit: Some(&fit),
        }
        .to_svg();
        assert!(svg.starts_with("<svg"));
        assert!(svg.ends_with("</svg>"));
        assert_eq!(svg.matches("<circle").count(), 6);
        assert!(svg.contains("<path"));
        assert!(svg.contains("Tilt angle vs static friction"));
    }
}
