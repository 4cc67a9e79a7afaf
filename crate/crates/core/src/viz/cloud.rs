//! Spiral word-cloud layout with rectangular collision boxes.

use std::collections::HashSet;
use std::f64::consts::TAU;
use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

use super::svg::{escape, num, SvgDoc};

/// Font the width table describes, with generic fallbacks.
pub const FONT_FAMILY: &str = "DejaVu Sans, Verdana, sans-serif";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Canvas {
    pub width: f64,
    pub height: f64,
}

#[derive(Debug, Clone)]
pub struct CloudOptions {
    /// Font size of the heaviest term as a fraction of canvas height.
    pub max_font_fraction: f64,
    /// Empty margin added around every box.
    pub padding: f64,
}

impl Default for CloudOptions {
    fn default() -> Self {
        CloudOptions {
            max_font_fraction: 0.12,
            padding: 2.0,
        }
    }
}

/// Axis-aligned box; `(x, y)` is the top-left corner.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BBox {
    pub x: f64,
    pub y: f64,
    pub w: f64,
    pub h: f64,
}

impl BBox {
    /// True when the interiors intersect; touching edges do not count.
    pub fn overlaps(&self, other: &BBox) -> bool {
        self.x < other.x + other.w && other.x < self.x + self.w && self.y < other.y + other.h && other.y < self.y + self.h
    }

    fn inside(&self, canvas: Canvas) -> bool {
        self.x >= 0.0 && self.y >= 0.0 && self.x + self.w <= canvas.width && self.y + self.h <= canvas.height
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Placement {
    pub term: String,
    /// Box centre.
    pub x: f64,
    pub y: f64,
    pub font_size: f64,
    pub bbox: BBox,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CloudLayout {
    pub canvas: Canvas,
    pub placements: Vec<Placement>,
    /// Terms that found no free position, heaviest first.
    pub dropped: Vec<String>,
}

impl CloudLayout {
    /// Debug dump: `term, x, y, size`.
    pub fn write_tsv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "term\tx\ty\tsize")?;
        for p in &self.placements {
            writeln!(out, "{}\t{}\t{}\t{}", p.term, num(p.x), num(p.y), num(p.font_size))?;
        }
        Ok(())
    }
}

/// Advance width of a character in ems, from the metrics of DejaVu Sans.
/// Common fallback sans-serif faces are narrower, so boxes err on the
/// generous side.
#[allow(clippy::approx_constant)] // 0.318 is the width of a space, not 1/π
fn char_width(c: char) -> f64 {
    match c {
        'a' => 0.613,
        'b' | 'd' | 'g' | 'p' | 'q' => 0.635,
        'c' => 0.550,
        'e' => 0.615,
        'f' => 0.352,
        'h' | 'n' | 'u' => 0.634,
        'i' | 'j' | 'l' => 0.278,
        'k' => 0.579,
        'm' => 0.974,
        'o' => 0.612,
        'r' => 0.411,
        's' => 0.521,
        't' => 0.392,
        'v' | 'x' | 'y' => 0.592,
        'w' => 0.818,
        'z' => 0.525,
        '0'..='9' => 0.636,
        ' ' => 0.318,
        'I' | 'J' => 0.30,
        'M' | 'W' => 1.0,
        c if c.is_uppercase() => 0.78,
        c if c.is_alphabetic() => 0.65,
        _ => 0.65,
    }
}

/// Width of `text` in ems.
pub fn text_width_em(text: &str) -> f64 {
    text.chars().map(char_width).sum()
}

/// Places terms heaviest first along an outward Archimedean spiral from the
/// canvas centre; each takes the first position free of collisions. Font size
/// grows with the square root of the weight. Terms with no free position are
/// dropped, never shrunk.
pub fn layout_word_cloud(weights: &[(String, f64)], canvas: Canvas, seed: u64, options: &CloudOptions) -> Result<CloudLayout> {
    if weights.is_empty() {
        return Err(Error::Argument("word cloud needs at least one term".into()));
    }
    if !(canvas.width > 0.0 && canvas.height > 0.0) {
        return Err(Error::Argument("canvas dimensions must be positive".into()));
    }
    let mut seen = HashSet::new();
    for (t, w) in weights {
        if !(w.is_finite() && *w > 0.0) {
            return Err(Error::Argument(format!("term `{t}` has non-positive weight {w}")));
        }
        if !seen.insert(t.as_str()) {
            return Err(Error::Argument(format!("term `{t}` listed twice")));
        }
    }
    let mut order: Vec<&(String, f64)> = weights.iter().collect();
    order.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));

    let max_w = order[0].1;
    let max_font = options.max_font_fraction * canvas.height;
    let box_of = |term: &str, weight: f64| {
        let font = max_font * (weight / max_w).sqrt();
        (
            font,
            text_width_em(term) * font + 2.0 * options.padding,
            font + 2.0 * options.padding,
        )
    };
    let (_, w0, h0) = box_of(&order[0].0, max_w);
    if w0 > canvas.width || h0 > canvas.height {
        return Err(Error::Layout(format!(
            "`{}` needs a {:.1}×{:.1} box but the canvas is {}×{}",
            order[0].0, w0, h0, canvas.width, canvas.height
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (cx, cy) = (canvas.width / 2.0, canvas.height / 2.0);
    let spacing = (canvas.width.min(canvas.height) / 100.0).max(0.5);
    let max_radius = 0.5 * canvas.width.hypot(canvas.height);

    let mut placements: Vec<Placement> = Vec::new();
    let mut dropped = Vec::new();
    for (term, weight) in order {
        let phase = rng.gen::<f64>() * TAU;
        let (font, w, h) = box_of(term, *weight);
        let mut theta = 0.0f64;
        let mut found = None;
        loop {
            let r = spacing * theta / TAU;
            if r > max_radius {
                break;
            }
            let (x, y) = (cx + r * (theta + phase).cos(), cy + r * (theta + phase).sin());
            let bbox = BBox {
                x: x - w / 2.0,
                y: y - h / 2.0,
                w,
                h,
            };
            if bbox.inside(canvas) && placements.iter().all(|p| !p.bbox.overlaps(&bbox)) {
                found = Some(Placement {
                    term: term.clone(),
                    x,
                    y,
                    font_size: font,
                    bbox,
                });
                break;
            }
            theta += if r < spacing { 0.5 } else { (0.5 * spacing / r).min(0.5) };
        }
        match found {
            Some(p) => placements.push(p),
            None => dropped.push(term.clone()),
        }
    }
    Ok(CloudLayout {
        canvas,
        placements,
        dropped,
    })
}

pub fn render_word_cloud(layout: &CloudLayout) -> Vec<u8> {
    let mut doc = SvgDoc::new(layout.canvas.width, layout.canvas.height);
    doc.line(format!("<g class=\"cloud\" font-family=\"{FONT_FAMILY}\">"));
    for (i, p) in layout.placements.iter().enumerate() {
        let shade = ["#224466", "#4477aa", "#228833", "#aa3377", "#cc6633"][i % 5];
        doc.line(format!(
            "<text class=\"word\" x=\"{}\" y=\"{}\" font-size=\"{}\" text-anchor=\"middle\" dominant-baseline=\"central\" fill=\"{shade}\">{}</text>",
            num(p.x),
            num(p.y),
            num(p.font_size),
            escape(&p.term)
        ));
    }
    doc.line("</g>");
    doc.finish()
}
