//! SVG frames: the two rays, the tip and the curve.

use std::fmt::Write;

use conediff_core::geometry::{Cone, DiscreteCurve, Ray, Vec2};

/// Default frame width in pixels.
pub const DEFAULT_WIDTH: f64 = 800.0;

/// Maps model coordinates to pixels. Fixed once from the initial curve so
/// every frame of a run shares it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct View {
    min: Vec2,
    max: Vec2,
    scale: f64,
}

impl View {
    /// The bounding box of `curve` and the tip, enlarged 1.2 times about its
    /// centre, at `width` pixels across.
    pub fn fit(curve: &DiscreteCurve, width: f64) -> Self {
        let mut lo = Vec2::ZERO;
        let mut hi = Vec2::ZERO;
        for p in curve.nodes() {
            lo = Vec2::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = Vec2::new(hi.x.max(p.x), hi.y.max(p.y));
        }
        let centre = (lo + hi) * 0.5;
        let mut half = (hi - lo) * 0.6;
        // keep degenerate boxes visible
        let floor = 0.05 * half.x.max(half.y).max(1e-12);
        half = Vec2::new(half.x.max(floor), half.y.max(floor));
        View {
            min: centre - half,
            max: centre + half,
            scale: width / (2.0 * half.x),
        }
    }

    /// Pixels per model unit.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn size(&self) -> (f64, f64) {
        ((self.max.x - self.min.x) * self.scale, (self.max.y - self.min.y) * self.scale)
    }

    /// Pixel position; the y axis points down.
    pub fn to_px(&self, p: Vec2) -> (f64, f64) {
        ((p.x - self.min.x) * self.scale, (self.max.y - p.y) * self.scale)
    }

    // long enough for a ray from the tip to leave the box
    fn reach(&self) -> f64 {
        let corners = [
            self.min,
            self.max,
            Vec2::new(self.min.x, self.max.y),
            Vec2::new(self.max.x, self.min.y),
        ];
        corners.iter().map(|c| c.norm()).fold(0.0, f64::max) * 1.01
    }
}

/// Optional extra: a circle about the tip, used to overlay the limit arc.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Overlay {
    pub arc_radius: Option<f64>,
}

pub fn render_svg(view: &View, cone: &Cone, curve: &DiscreteCurve, overlay: Overlay) -> String {
    let (w, h) = view.size();
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0}" height="{h:.0}" viewBox="0 0 {w:.3} {h:.3}">"#
    );
    let _ = writeln!(out, r##"<rect width="100%" height="100%" fill="#ffffff"/>"##);
    let tip = view.to_px(Vec2::ZERO);
    for ray in [Ray::First, Ray::Second] {
        let end = view.to_px(cone.direction(ray) * view.reach());
        let _ = writeln!(
            out,
            r##"<path d="M {:.3} {:.3} L {:.3} {:.3}" stroke="#444444" stroke-width="1.5" fill="none"/>"##,
            tip.0, tip.1, end.0, end.1
        );
    }
    if let Some(r) = overlay.arc_radius {
        let _ = writeln!(
            out,
            r##"<circle cx="{:.3}" cy="{:.3}" r="{:.3}" stroke="#d62728" stroke-dasharray="4 3" fill="none"/>"##,
            tip.0,
            tip.1,
            r * view.scale()
        );
    }
    let mut d = String::new();
    for (i, p) in curve.nodes().iter().enumerate() {
        let (x, y) = view.to_px(*p);
        let _ = write!(d, "{}{x:.3} {y:.3}", if i == 0 { "M " } else { " L " });
    }
    let _ = writeln!(
        out,
        r##"<path d="{d}" stroke="#1f77b4" stroke-width="2" fill="none"/>"##
    );
    let _ = writeln!(
        out,
        r##"<circle cx="{:.3}" cy="{:.3}" r="3" fill="#000000"/>"##,
        tip.0, tip.1
    );
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use conediff_core::geometry::{make_arc, ArcSpec};
    use std::f64::consts::FRAC_PI_2;

    fn setup() -> (Cone, DiscreteCurve) {
        let cone = Cone::new(FRAC_PI_2, 0.0).unwrap();
        (cone, make_arc(&ArcSpec::with_radius(cone, 1.0).unwrap(), 32).unwrap())
    }

    #[test]
    fn arc_frame_has_three_paths() {
        let (cone, c) = setup();
        let svg = render_svg(&View::fit(&c, DEFAULT_WIDTH), &cone, &c, Overlay::default());
        assert_eq!(svg.matches("<path").count(), 3);
        assert_eq!(svg.matches("<circle").count(), 1);
        assert!(svg.starts_with("<svg") && svg.ends_with("</svg>\n"));
    }

    #[test]
    fn deterministic() {
        let (cone, c) = setup();
        let v = View::fit(&c, DEFAULT_WIDTH);
        assert_eq!(
            render_svg(&v, &cone, &c, Overlay::default()),
            render_svg(&v, &cone, &c.clone(), Overlay::default())
        );
    }

    #[test]
    fn view_is_twenty_percent_larger() {
        let (_, c) = setup();
        let v = View::fit(&c, 600.0);
        // bounding box is the unit square
        assert!((v.scale() - 600.0 / 1.2).abs() < 1e-9);
        let (w, h) = v.size();
        assert!((w - 600.0).abs() < 1e-9 && (h - 600.0).abs() < 1e-9);
        let tip = v.to_px(Vec2::ZERO);
        assert!((tip.0 - 0.1 * 500.0).abs() < 1e-9 && (tip.1 - 1.1 * 500.0).abs() < 1e-9);
    }
}
