//! Minimal SVG writer with a fixed world-to-pixel mapping.

use std::fmt::Write;

/// Pixels per world unit are chosen so the canvas is `width` pixels wide.
pub struct Canvas {
    x0: f64,
    y1: f64,
    scale: f64,
    width: f64,
    height: f64,
    body: String,
}

impl Canvas {
    /// A canvas showing `[x0, x1] x [y0, y1]`.
    pub fn new(x0: f64, x1: f64, y0: f64, y1: f64, width: f64) -> Self {
        let scale = width / (x1 - x0);
        Canvas {
            x0,
            y1,
            scale,
            width,
            height: (y1 - y0) * scale,
            body: String::new(),
        }
    }

    fn px(&self, x: f64, y: f64) -> (f64, f64) {
        ((x - self.x0) * self.scale, (self.y1 - y) * self.scale)
    }

    /// A circle whose radius is in world units.
    pub fn circle(&mut self, x: f64, y: f64, r: f64, class: &str) {
        let (cx, cy) = self.px(x, y);
        let _ = writeln!(
            self.body,
            r#"<circle class="{class}" cx="{cx:.3}" cy="{cy:.3}" r="{:.3}"/>"#,
            r * self.scale
        );
    }

    /// A dot of fixed pixel radius.
    pub fn marker(&mut self, x: f64, y: f64, r_px: f64, class: &str) {
        let (cx, cy) = self.px(x, y);
        let _ = writeln!(
            self.body,
            r#"<circle class="{class}" cx="{cx:.3}" cy="{cy:.3}" r="{r_px}"/>"#
        );
    }

    pub fn polyline(&mut self, points: &[(f64, f64)], class: &str) {
        let coords: Vec<String> = points
            .iter()
            .map(|&(x, y)| {
                let (u, v) = self.px(x, y);
                format!("{u:.3},{v:.3}")
            })
            .collect();
        let _ = writeln!(
            self.body,
            r#"<polyline class="{class}" points="{}"/>"#,
            coords.join(" ")
        );
    }

    pub fn line(&mut self, a: (f64, f64), b: (f64, f64), class: &str) {
        let (x1, y1) = self.px(a.0, a.1);
        let (x2, y2) = self.px(b.0, b.1);
        let _ = writeln!(
            self.body,
            r#"<line class="{class}" x1="{x1:.3}" y1="{y1:.3}" x2="{x2:.3}" y2="{y2:.3}"/>"#
        );
    }

    pub fn text(&mut self, x: f64, y: f64, s: &str) {
        let (u, v) = self.px(x, y);
        let _ = writeln!(self.body, r#"<text x="{u:.3}" y="{v:.3}">{s}</text>"#);
    }

    pub fn finish(self, title: &str, style: &str) -> String {
        format!(
            concat!(
                r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {w:.0} {h:.0}" width="{w:.0}" height="{h:.0}">"#,
                "\n<title>{title}</title>\n<style>{style}</style>\n",
                r#"<rect width="100%" height="100%" fill="white"/>"#,
                "\n{body}</svg>\n"
            ),
            w = self.width,
            h = self.height,
            title = title,
            style = style,
            body = self.body
        )
    }
}
