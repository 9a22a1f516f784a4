use std::fmt::Write as _;

use crate::engine::RopeState;
use crate::geom::{Point, Ray};
use crate::scene_io::Scene;

/// Axis-aligned drawing window in scene coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Viewport {
    pub min: Point,
    pub max: Point,
}

impl Viewport {
    /// Bounding box of `points` padded by 10% on every side.
    pub fn around<I: IntoIterator<Item = Point>>(points: I) -> Self {
        let mut min = Point::new(f64::INFINITY, f64::INFINITY);
        let mut max = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for p in points {
            min = Point::new(min.x.min(p.x), min.y.min(p.y));
            max = Point::new(max.x.max(p.x), max.y.max(p.y));
        }
        if !min.is_finite() {
            return Viewport { min: Point::new(-1.0, -1.0), max: Point::new(1.0, 1.0) };
        }
        let pad = |lo: f64, hi: f64| {
            let span = hi - lo;
            if span > 0.0 {
                0.1 * span
            } else {
                1.0
            }
        };
        let (px, py) = (pad(min.x, max.x), pad(min.y, max.y));
        Viewport { min: Point::new(min.x - px, min.y - py), max: Point::new(max.x + px, max.y + py) }
    }

    pub fn width(&self) -> f64 {
        self.max.x - self.min.x
    }

    pub fn height(&self) -> f64 {
        self.max.y - self.min.y
    }

    /// Portion of `ray` inside the viewport (Liang-Barsky).
    pub fn clip_ray(&self, ray: &Ray) -> Option<(Point, Point)> {
        let (mut lo, mut hi) = (0.0f64, f64::INFINITY);
        let checks = [
            (-ray.dir.x, ray.origin.x - self.min.x),
            (ray.dir.x, self.max.x - ray.origin.x),
            (-ray.dir.y, ray.origin.y - self.min.y),
            (ray.dir.y, self.max.y - ray.origin.y),
        ];
        for (p, q) in checks {
            if p == 0.0 {
                if q < 0.0 {
                    return None;
                }
            } else {
                let t = q / p;
                if p < 0.0 {
                    lo = lo.max(t);
                } else {
                    hi = hi.min(t);
                }
            }
        }
        (lo < hi && hi.is_finite()).then(|| (ray.at(lo), ray.at(hi)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RenderOptions {
    /// Draw the current pivot's decomposition rays.
    pub show_gd: bool,
    pub show_unwrap_ray: bool,
    /// Defaults to the padded bounding box of the scene and rope.
    pub viewport: Option<Viewport>,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions { show_gd: true, show_unwrap_ray: true, viewport: None }
    }
}

fn num(v: f64) -> String {
    let s = format!("{v:.6}");
    if s == "-0.000000" {
        "0.000000".to_string()
    } else {
        s
    }
}

/// Renders the scene and rope state as a standalone SVG 1.1 document.
///
/// Obstacles are solid, decomposition rays dash-dot, the unwrapping ray
/// dotted, the rope dashed; the anchor is a filled circle and the free end a
/// hollow one. Output is byte-for-byte deterministic.
pub fn render_svg(scene: &Scene, state: &RopeState, options: &RenderOptions) -> String {
    let rope = state.polyline();
    let view = options.viewport.unwrap_or_else(|| Viewport::around(scene.endpoints().chain(rope.iter().copied())));
    let size = view.width().max(view.height());
    let stroke = size / 400.0;
    let radius = size / 100.0;
    // flip y so the scene's y axis points up
    let tx = |p: Point| (num(p.x - view.min.x), num(view.max.y - p.y));

    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"0 0 {} {}\" width=\"800\" height=\"{}\">",
        num(view.width()),
        num(view.height()),
        num(800.0 * view.height() / view.width()),
    );
    let _ = writeln!(
        out,
        "<rect x=\"0\" y=\"0\" width=\"{}\" height=\"{}\" fill=\"white\"/>",
        num(view.width()),
        num(view.height())
    );

    out.push_str("<g id=\"obstacles\">\n");
    for o in scene.obstacles() {
        let ((x1, y1), (x2, y2)) = (tx(o.a), tx(o.b));
        let _ = writeln!(
            out,
            "<line x1=\"{x1}\" y1=\"{y1}\" x2=\"{x2}\" y2=\"{y2}\" stroke=\"black\" stroke-width=\"{}\"/>",
            num(2.0 * stroke)
        );
    }
    out.push_str("</g>\n");

    if options.show_gd {
        out.push_str("<g id=\"gd-rays\">\n");
        if let Ok(gd) = state.decomposition() {
            for ray in &gd.rays {
                if let Some((a, b)) = view.clip_ray(ray) {
                    let ((x1, y1), (x2, y2)) = (tx(a), tx(b));
                    let _ = writeln!(
                        out,
                        "<line x1=\"{x1}\" y1=\"{y1}\" x2=\"{x2}\" y2=\"{y2}\" stroke=\"gray\" stroke-width=\"{}\" stroke-dasharray=\"{} {} {} {}\"/>",
                        num(stroke),
                        num(6.0 * stroke),
                        num(3.0 * stroke),
                        num(stroke),
                        num(3.0 * stroke)
                    );
                }
            }
        }
        out.push_str("</g>\n");
    }

    if options.show_unwrap_ray {
        if let Some((a, b)) = state.unwrap_ray().and_then(|r| view.clip_ray(r)) {
            let ((x1, y1), (x2, y2)) = (tx(a), tx(b));
            let _ = writeln!(
                out,
                "<line id=\"unwrap-ray\" x1=\"{x1}\" y1=\"{y1}\" x2=\"{x2}\" y2=\"{y2}\" stroke=\"gray\" stroke-width=\"{}\" stroke-dasharray=\"{} {}\"/>",
                num(stroke),
                num(stroke),
                num(2.0 * stroke)
            );
        }
    }

    let mut d = String::new();
    for (i, p) in rope.iter().enumerate() {
        let (x, y) = tx(*p);
        let _ = write!(d, "{}{x} {y}", if i == 0 { "M" } else { " L" });
    }
    let _ = writeln!(
        out,
        "<path id=\"rope\" d=\"{d}\" fill=\"none\" stroke=\"black\" stroke-width=\"{}\" stroke-dasharray=\"{} {}\"/>",
        num(1.5 * stroke),
        num(4.0 * stroke),
        num(2.0 * stroke)
    );

    let (bx, by) = tx(state.anchor());
    let _ = writeln!(out, "<circle id=\"anchor\" cx=\"{bx}\" cy=\"{by}\" r=\"{}\" fill=\"black\"/>", num(radius));
    let (ax, ay) = tx(state.a());
    let _ = writeln!(
        out,
        "<circle id=\"free-end\" cx=\"{ax}\" cy=\"{ay}\" r=\"{}\" fill=\"white\" stroke=\"black\" stroke-width=\"{}\"/>",
        num(radius),
        num(stroke)
    );
    out.push_str("</svg>\n");
    out
}
