//! SVG pictures of a region on a 2-plane: one path per isometric-sphere
//! trace, the stabilizer slab shaded, and a legend of words.

use std::fmt::Write as _;

use ford_rank1_core::cygan::cygan_h;
use ford_rank1_core::ford::FordRegion;
use ford_rank1_core::models::{d_to_h, nu, HPoint};
use ford_rank1_core::{CvPair, Field, ModuleVector, Scalar};

use crate::error::CliError;

pub const MAX_RESOLUTION: usize = 8192;
const LEGEND_LINES: usize = 24;
const PALETTE: [&str; 6] = ["#1f4e9c", "#b2182b", "#1b7837", "#762a83", "#e08214", "#4d4d4d"];

/// A real coordinate of a point of the Siegel domain.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    /// `Re ζ − ½|v|²`.
    Height,
    /// Imaginary component `1..=3` of `ζ`.
    Im(usize),
    /// Real coordinate of `v`, flattened.
    V(usize),
}

impl Axis {
    pub fn parse(s: &str) -> Result<Axis, CliError> {
        let s = s.trim();
        let index = |rest: &str| {
            rest.parse::<usize>().map_err(|_| CliError::input("render", format!("unknown axis '{s}'")))
        };
        if s == "height" {
            Ok(Axis::Height)
        } else if let Some(rest) = s.strip_prefix("im") {
            Ok(Axis::Im(index(rest)?))
        } else if let Some(rest) = s.strip_prefix('v') {
            Ok(Axis::V(index(rest)?))
        } else {
            Err(CliError::input("render", format!("unknown axis '{s}', expected height, im<k> or v<k>")))
        }
    }

    fn name(&self) -> String {
        match self {
            Axis::Height => "height".into(),
            Axis::Im(k) => format!("im{k}"),
            Axis::V(k) => format!("v{k}"),
        }
    }

    fn check(&self, field: Field, len: usize) -> Result<(), CliError> {
        let ok = match *self {
            Axis::Height => true,
            Axis::Im(k) => k >= 1 && k < field.dim(),
            Axis::V(k) => k < field.dim() * len,
        };
        if ok {
            Ok(())
        } else {
            Err(CliError::input(
                "render",
                format!(
                    "slice axis {} is outside the coordinate range (field {field}, {} imaginary and {} module coordinates)",
                    self.name(),
                    field.dim() - 1,
                    field.dim() * len
                ),
            ))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Model {
    /// Coordinates of the Siegel domain.
    Siegel,
    /// Upper half-plane `x + iy` through `ν`; real field with `n = 2` only.
    Upper,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RenderOptions {
    pub model: Model,
    /// Horizontal and vertical axes; ignored by [`Model::Upper`].
    pub axes: [Axis; 2],
    /// `[x_min, x_max, y_min, y_max]`.
    pub extent: [f64; 4],
    /// Grid cells per side for tracing spheres.
    pub resolution: usize,
    /// Values of the coordinates not on an axis; the height defaults to 1
    /// and everything else to 0.
    pub fixed: Vec<(Axis, f64)>,
}

impl RenderOptions {
    pub fn new(model: Model, len: usize) -> RenderOptions {
        let first = if len > 0 { Axis::V(0) } else { Axis::Im(1) };
        let extent = match model {
            Model::Siegel => [-2.0, 2.0, 0.0, 2.0],
            Model::Upper => [-1.5, 1.5, 0.0, 2.0],
        };
        RenderOptions { model, axes: [first, Axis::Height], extent, resolution: 256, fixed: Vec::new() }
    }
}

/// Maps plane coordinates to points of the domain.
struct Plane {
    field: Field,
    model: Model,
    axes: [Axis; 2],
    height: f64,
    im: [f64; 4],
    v: Vec<f64>,
}

impl Plane {
    fn new(opts: &RenderOptions, field: Field, len: usize) -> Result<Plane, CliError> {
        if opts.model == Model::Upper && !(field == Field::Real && len == 1) {
            return Err(CliError::input("render", "the upper half-plane model needs field R and n = 2"));
        }
        if opts.model == Model::Siegel {
            for a in &opts.axes {
                a.check(field, len)?;
            }
            if opts.axes[0] == opts.axes[1] {
                return Err(CliError::input("render", "the two slice axes must differ"));
            }
        }
        let mut plane =
            Plane { field, model: opts.model, axes: opts.axes, height: 1.0, im: [0.0; 4], v: vec![0.0; field.dim() * len] };
        for (a, x) in &opts.fixed {
            a.check(field, len)?;
            plane.set(*a, *x);
        }
        Ok(plane)
    }

    fn set(&mut self, a: Axis, x: f64) {
        match a {
            Axis::Height => self.height = x,
            Axis::Im(k) => self.im[k] = x,
            Axis::V(k) => self.v[k] = x,
        }
    }

    /// Coordinates `(ζ, v)` and height at a plane point.
    fn coords(&self, x: f64, y: f64) -> Option<(CvPair, f64)> {
        match self.model {
            Model::Upper => {
                if y <= 0.0 {
                    return None;
                }
                let d = nu(y, &ModuleVector::from_reals(Field::Real, &[x])).ok()?;
                let p = d_to_h(&d).ok()?;
                Some((p.coords()?.clone(), y * y))
            }
            Model::Siegel => {
                let mut q = Plane { v: self.v.clone(), ..*self };
                q.set(self.axes[0], x);
                q.set(self.axes[1], y);
                let v = ModuleVector::from_real(self.field, &q.v);
                let mut c = q.im;
                c[0] = q.height + 0.5 * v.norm_sqr();
                let zeta = Scalar::from_coords(self.field, &c[..self.field.dim()]).ok()?;
                Some((CvPair::new(zeta, v), q.height))
            }
        }
    }

    fn point(&self, x: f64, y: f64) -> Option<HPoint> {
        let (p, h) = self.coords(x, y)?;
        (h > 0.0).then_some(HPoint::Interior(p))
    }
}

/// Segments of the zero set of a grid function by marching squares.
fn contour(values: &[f64], n: usize, xs: &[f64], ys: &[f64]) -> Vec<[(f64, f64); 2]> {
    let at = |i: usize, j: usize| values[j * (n + 1) + i];
    let lerp = |a: f64, b: f64, fa: f64, fb: f64| a + (b - a) * fa / (fa - fb);
    let mut segs = Vec::new();
    for j in 0..n {
        for i in 0..n {
            let f = [at(i, j), at(i + 1, j), at(i + 1, j + 1), at(i, j + 1)];
            if f.iter().any(|x| !x.is_finite()) {
                continue;
            }
            let corners = [(xs[i], ys[j]), (xs[i + 1], ys[j]), (xs[i + 1], ys[j + 1]), (xs[i], ys[j + 1])];
            let mut crossings = Vec::with_capacity(4);
            for e in 0..4 {
                let (a, b) = (e, (e + 1) % 4);
                if (f[a] < 0.0) != (f[b] < 0.0) {
                    let (pa, pb) = (corners[a], corners[b]);
                    crossings.push((lerp(pa.0, pb.0, f[a], f[b]), lerp(pa.1, pb.1, f[a], f[b])));
                }
            }
            match crossings.len() {
                2 => segs.push([crossings[0], crossings[1]]),
                4 => {
                    // Saddle: pair edges according to the sign at the cell center.
                    let center = f.iter().sum::<f64>() / 4.0;
                    if (center < 0.0) == (f[0] < 0.0) {
                        segs.push([crossings[0], crossings[1]]);
                        segs.push([crossings[2], crossings[3]]);
                    } else {
                        segs.push([crossings[0], crossings[3]]);
                        segs.push([crossings[1], crossings[2]]);
                    }
                }
                _ => {}
            }
        }
    }
    segs
}

/// Sutherland–Hodgman clip of a polygon to `a·x + b·y + c ≤ 0`.
fn clip(poly: &[(f64, f64)], a: f64, b: f64, c: f64) -> Vec<(f64, f64)> {
    let side = |p: (f64, f64)| a * p.0 + b * p.1 + c;
    let mut out = Vec::new();
    for k in 0..poly.len() {
        let (p, q) = (poly[k], poly[(k + 1) % poly.len()]);
        let (sp, sq) = (side(p), side(q));
        if sp <= 0.0 {
            out.push(p);
        }
        if (sp <= 0.0) != (sq <= 0.0) {
            let t = sp / (sp - sq);
            out.push((p.0 + t * (q.0 - p.0), p.1 + t * (q.1 - p.1)));
        }
    }
    out
}

/// The part of the window inside every slab, as a polygon.
fn slab_polygon(region: &FordRegion, plane: &Plane, ext: [f64; 4]) -> Option<Vec<(f64, f64)>> {
    let slabs = region.stabilizer.slabs();
    if slabs.is_empty() {
        return None;
    }
    let (x0, y0) = (0.5 * (ext[0] + ext[1]), 0.5 * (ext[2] + ext[3]).max(1e-3));
    let (p0, _) = plane.coords(x0, y0)?;
    let (px, _) = plane.coords(x0 + 1.0, y0)?;
    let (py, _) = plane.coords(x0, y0 + 1.0)?;
    let mut poly = vec![(ext[0], ext[2]), (ext[1], ext[2]), (ext[1], ext[3]), (ext[0], ext[3])];
    for s in slabs {
        // Slab coordinates depend on the module and center parts only, which
        // are affine in the plane coordinates.
        let c0 = s.coordinate(&p0);
        let (a, b) = (s.coordinate(&px) - c0, s.coordinate(&py) - c0);
        let c = c0 - a * x0 - b * y0;
        poly = clip(&poly, a, b, c - 0.5);
        poly = clip(&poly, -a, -b, -c - 0.5);
        if poly.is_empty() {
            return Some(poly);
        }
    }
    Some(poly)
}

fn fmt(x: f64) -> String {
    let s = format!("{x:.3}");
    if s == "-0.000" {
        "0.000".into()
    } else {
        s
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Renders the region. The output depends only on the inputs.
pub fn render_svg(region: &FordRegion, field: Field, len: usize, opts: &RenderOptions) -> Result<String, CliError> {
    let ext = opts.extent;
    if !(ext.iter().all(|x| x.is_finite()) && ext[0] < ext[1] && ext[2] < ext[3]) {
        return Err(CliError::input("render", "extent must be finite with x_min < x_max and y_min < y_max"));
    }
    if opts.resolution == 0 || opts.resolution > MAX_RESOLUTION {
        return Err(CliError::input("render", format!("resolution must be in 1..={MAX_RESOLUTION}")));
    }
    let plane = Plane::new(opts, field, len)?;
    let n = opts.resolution;
    let xs: Vec<f64> = (0..=n).map(|i| ext[0] + (ext[1] - ext[0]) * i as f64 / n as f64).collect();
    let ys: Vec<f64> = (0..=n).map(|j| ext[2] + (ext[3] - ext[2]) * j as f64 / n as f64).collect();
    let nodes: Vec<Option<HPoint>> =
        ys.iter().flat_map(|&y| xs.iter().map(move |&x| (x, y))).map(|(x, y)| plane.point(x, y)).collect();

    let (w, h, margin) = (800.0, 800.0, 50.0);
    let sx = |x: f64| margin + (x - ext[0]) / (ext[1] - ext[0]) * (w - 2.0 * margin);
    let sy = |y: f64| h - margin - (y - ext[2]) / (ext[3] - ext[2]) * (h - 2.0 * margin);

    let mut traces = Vec::new();
    for (k, s) in region.spheres.iter().enumerate() {
        let values: Vec<f64> = nodes
            .iter()
            .map(|p| match p {
                Some(p) => cygan_h(p, &s.center).map_or(f64::NAN, |d| d / s.radius - 1.0),
                None => f64::NAN,
            })
            .collect();
        let segs = contour(&values, n, &xs, &ys);
        if !segs.is_empty() {
            traces.push((k, segs));
        }
    }

    let legend_rows = traces.len().min(LEGEND_LINES) + usize::from(traces.len() > LEGEND_LINES);
    let total_h = h + 16.0 * legend_rows as f64 + 10.0;
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{th}" viewBox="0 0 {w} {th}">"#,
        th = fmt(total_h)
    );
    let _ = writeln!(svg, r#"<rect x="0" y="0" width="{w}" height="{}" fill="white"/>"#, fmt(total_h));
    if let Some(poly) = slab_polygon(region, &plane, ext) {
        if !poly.is_empty() {
            let pts: Vec<String> = poly.iter().map(|&(x, y)| format!("{},{}", fmt(sx(x)), fmt(sy(y)))).collect();
            let _ = writeln!(svg, r##"<polygon class="slab" points="{}" fill="#dde8f4" stroke="none"/>"##, pts.join(" "));
        }
    }
    let _ = writeln!(
        svg,
        r##"<rect x="{m}" y="{m}" width="{}" height="{}" fill="none" stroke="#888888"/>"##,
        fmt(w - 2.0 * margin),
        fmt(h - 2.0 * margin),
        m = fmt(margin)
    );
    for (idx, (k, segs)) in traces.iter().enumerate() {
        let mut d = String::new();
        for [a, b] in segs {
            let _ = write!(d, "M{} {}L{} {}", fmt(sx(a.0)), fmt(sy(a.1)), fmt(sx(b.0)), fmt(sy(b.1)));
        }
        let word = region.spheres[*k].word.as_deref().unwrap_or("");
        let _ = writeln!(
            svg,
            r#"<path class="sphere" data-word="{}" d="{d}" fill="none" stroke="{}" stroke-width="1.2"/>"#,
            escape(word),
            PALETTE[idx % PALETTE.len()]
        );
    }
    let (xl, yl) = match opts.model {
        Model::Upper => ("Re w".to_string(), "Im w".to_string()),
        Model::Siegel => (opts.axes[0].name(), opts.axes[1].name()),
    };
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="{}" font-family="sans-serif" font-size="12" text-anchor="middle">{xl} [{}, {}]</text>"#,
        fmt(w / 2.0),
        fmt(h - 15.0),
        fmt(ext[0]),
        fmt(ext[1])
    );
    let _ = writeln!(
        svg,
        r#"<text x="15" y="{}" font-family="sans-serif" font-size="12" transform="rotate(-90 15 {})" text-anchor="middle">{yl} [{}, {}]</text>"#,
        fmt(h / 2.0),
        fmt(h / 2.0),
        fmt(ext[2]),
        fmt(ext[3])
    );
    for (row, (idx, (k, _))) in traces.iter().enumerate().take(LEGEND_LINES).enumerate() {
        let s = &region.spheres[*k];
        let _ = writeln!(
            svg,
            r#"<text class="legend" x="{}" y="{}" font-family="monospace" font-size="12" fill="{}">{} (radius {})</text>"#,
            fmt(margin),
            fmt(h + 16.0 * row as f64),
            PALETTE[idx % PALETTE.len()],
            escape(s.word.as_deref().unwrap_or("?")),
            fmt(s.radius)
        );
    }
    if traces.len() > LEGEND_LINES {
        let _ = writeln!(
            svg,
            r#"<text class="legend" x="{}" y="{}" font-family="monospace" font-size="12">and {} more</text>"#,
            fmt(margin),
            fmt(h + 16.0 * LEGEND_LINES as f64),
            traces.len() - LEGEND_LINES
        );
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}
