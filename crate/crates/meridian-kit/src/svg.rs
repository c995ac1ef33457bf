//! Minimal SVG 1.1 plotting: domain components, curves with a length
//! legend, and an optional log-density heatmap. Output is deterministic
//! (fixed-precision formatting, no timestamps).

use std::fmt::Write as _;

use crate::curve::PolyCurve;
use crate::domain::{ComplementComponent, Domain};
use crate::geom::Pt;
use crate::metric::{DensityField, NodeKind};

const CANVAS: f64 = 800.0;
const MARGIN: f64 = 40.0;

/// Distinguishable stroke colors, cycled by curve index.
const PALETTE: [&str; 8] = [
    "#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#e377c2", "#bcbd22",
];

pub struct SvgPlot {
    half: f64,
    body: String,
    legend: Vec<(String, String)>,
}

impl SvgPlot {
    /// Canvas covering `[-half, half]^2` in domain coordinates.
    pub fn new(half: f64) -> SvgPlot {
        SvgPlot {
            half,
            body: String::new(),
            legend: Vec::new(),
        }
    }

    fn map(&self, z: Pt) -> (f64, f64) {
        let s = (CANVAS - 2.0 * MARGIN) / (2.0 * self.half);
        (
            MARGIN + (z.x + self.half) * s,
            CANVAS - MARGIN - (z.y + self.half) * s,
        )
    }

    fn scale(&self, r: f64) -> f64 {
        r * (CANVAS - 2.0 * MARGIN) / (2.0 * self.half)
    }

    /// Rasterize `log(lambda)` over the grid as one rect per node.
    pub fn add_heatmap(&mut self, field: &DensityField) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for (&v, &m) in field.u.iter().zip(&field.mask) {
            if m != NodeKind::Outside && v.is_finite() {
                lo = lo.min(v);
                hi = hi.max(v);
            }
        }
        if !lo.is_finite() || hi <= lo {
            return;
        }
        // cap the upper end so the boundary blow-up does not wash out the bulk
        let hi = hi.min(lo + 12.0);
        let cell = self.scale(field.h).max(0.25);
        let _ = writeln!(self.body, r#"<g shape-rendering="crispEdges">"#);
        for j in 0..field.ny {
            for i in 0..field.nx {
                let k = j * field.nx + i;
                if field.mask[k] == NodeKind::Outside || !field.u[k].is_finite() {
                    continue;
                }
                let t = ((field.u[k] - lo) / (hi - lo)).clamp(0.0, 1.0);
                let (r, g, b) = viridis(t);
                let (x, y) = self.map(field.node(i, j));
                let _ = writeln!(
                    self.body,
                    r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="rgb({r},{g},{b})"/>"#,
                    x - cell / 2.0,
                    y - cell / 2.0,
                    cell,
                    cell
                );
            }
        }
        let _ = writeln!(self.body, "</g>");
        self.legend.push((
            format!("log density in [{lo:.2}, {hi:.2}] (capped)"),
            "#444444".into(),
        ));
    }

    pub fn add_domain(&mut self, domain: &Domain) {
        for comp in domain.components() {
            match comp {
                ComplementComponent::Disk { center, radius } => {
                    let (cx, cy) = self.map(*center);
                    let _ = writeln!(
                        self.body,
                        r##"<circle cx="{cx:.2}" cy="{cy:.2}" r="{:.2}" fill="#cccccc" stroke="#333333" stroke-width="1"/>"##,
                        self.scale(*radius)
                    );
                }
                ComplementComponent::Point { location } => {
                    let (cx, cy) = self.map(*location);
                    let _ = writeln!(
                        self.body,
                        r##"<circle cx="{cx:.2}" cy="{cy:.2}" r="3" fill="#333333"/>"##
                    );
                }
                ComplementComponent::Polygon { vertices } => {
                    let pts: Vec<String> = vertices
                        .iter()
                        .map(|&v| {
                            let (x, y) = self.map(v);
                            format!("{x:.2},{y:.2}")
                        })
                        .collect();
                    let _ = writeln!(
                        self.body,
                        r##"<polygon points="{}" fill="#cccccc" stroke="#333333" stroke-width="1"/>"##,
                        pts.join(" ")
                    );
                }
                ComplementComponent::UnboundedCap { radius } => {
                    let (cx, cy) = self.map(Pt { x: 0.0, y: 0.0 });
                    let _ = writeln!(
                        self.body,
                        r##"<circle cx="{cx:.2}" cy="{cy:.2}" r="{:.2}" fill="none" stroke="#333333" stroke-width="2" stroke-dasharray="6 4"/>"##,
                        self.scale(*radius)
                    );
                }
            }
        }
    }

    /// A closed curve with a legend entry; color picked from the palette.
    pub fn add_curve(&mut self, curve: &PolyCurve, label: &str, color_index: usize) {
        let color = PALETTE[color_index % PALETTE.len()];
        let pts: Vec<String> = curve
            .vertices()
            .iter()
            .map(|&v| {
                let (x, y) = self.map(v);
                format!("{x:.2},{y:.2}")
            })
            .collect();
        let _ = writeln!(
            self.body,
            r#"<polygon points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#,
            pts.join(" ")
        );
        self.legend.push((label.to_string(), color.to_string()));
    }

    pub fn finish(self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
        let legend_h = 20.0 * self.legend.len() as f64 + 10.0;
        let total_h = CANVAS + legend_h;
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{CANVAS}" height="{total_h}" viewBox="0 0 {CANVAS} {total_h}">"#
        );
        let _ = writeln!(
            out,
            r##"<rect x="0" y="0" width="{CANVAS}" height="{total_h}" fill="#ffffff"/>"##
        );
        out.push_str(&self.body);
        for (i, (label, color)) in self.legend.iter().enumerate() {
            let y = CANVAS + 20.0 * (i as f64 + 1.0);
            let _ = writeln!(
                out,
                r#"<line x1="{MARGIN}" y1="{:.1}" x2="{:.1}" y2="{:.1}" stroke="{color}" stroke-width="3"/>"#,
                y - 4.0,
                MARGIN + 30.0,
                y - 4.0
            );
            let _ = writeln!(
                out,
                r#"<text x="{:.1}" y="{y:.1}" font-family="monospace" font-size="13">{}</text>"#,
                MARGIN + 40.0,
                escape(label)
            );
        }
        let _ = writeln!(out, "</svg>");
        out
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Coarse viridis-like colormap on `t` in `[0, 1]`.
fn viridis(t: f64) -> (u8, u8, u8) {
    let stops: [(f64, [f64; 3]); 5] = [
        (0.0, [68.0, 1.0, 84.0]),
        (0.25, [59.0, 82.0, 139.0]),
        (0.5, [33.0, 145.0, 140.0]),
        (0.75, [94.0, 201.0, 98.0]),
        (1.0, [253.0, 231.0, 37.0]),
    ];
    for w in stops.windows(2) {
        let (t0, c0) = w[0];
        let (t1, c1) = w[1];
        if t <= t1 {
            let s = ((t - t0) / (t1 - t0)).clamp(0.0, 1.0);
            return (
                (c0[0] + s * (c1[0] - c0[0])) as u8,
                (c0[1] + s * (c1[1] - c0[1])) as u8,
                (c0[2] + s * (c1[2] - c0[2])) as u8,
            );
        }
    }
    (253, 231, 37)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::circle_curve;
    use crate::domain::{make_domain, Comp};
    use crate::geom::pt;

    #[test]
    fn well_formed_and_complete() {
        let domain =
            make_domain(vec![Comp::disk(Pt::ZERO, 0.25), Comp::cap(1.0)]).unwrap();
        let mut plot = SvgPlot::new(1.1);
        plot.add_domain(&domain);
        plot.add_curve(&circle_curve(pt(0.0, 0.0), 0.5, 64), "core length=14.24", 0);
        let svg = plot.finish();
        assert!(svg.starts_with("<?xml"));
        assert!(svg.contains(r#"version="1.1""#));
        assert!(svg.contains("<polygon"));
        assert!(svg.contains("core length=14.24"));
        assert!(svg.trim_end().ends_with("</svg>"));
        // every opened group/element is closed: crude tag balance check
        assert_eq!(svg.matches("<svg").count(), svg.matches("</svg>").count());
    }
}
