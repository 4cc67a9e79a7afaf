use crate::error::{Error, Result};
use crate::periods::group_thousands;
use crate::stats::YearlyCounts;
use crate::trend::{predict_trend, TrendFit};

use super::svg::{escape, num, SvgDoc};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ValueFormat {
    /// Thousands-separated integer.
    Count,
    /// Proportion shown as a percentage.
    Percent,
}

#[derive(Debug, Clone)]
pub struct BarChartOptions {
    pub title: String,
    /// Length of the longest bar.
    pub plot_width: f64,
    pub bar_height: f64,
    pub gap: f64,
    pub label_width: f64,
    pub value_format: ValueFormat,
}

impl Default for BarChartOptions {
    fn default() -> Self {
        BarChartOptions {
            title: String::new(),
            plot_width: 600.0,
            bar_height: 18.0,
            gap: 6.0,
            label_width: 180.0,
            value_format: ValueFormat::Count,
        }
    }
}

fn format_value(v: f64, f: ValueFormat) -> String {
    match f {
        ValueFormat::Count => group_thousands(v.round() as i64),
        ValueFormat::Percent => format!("{:.1}%", 100.0 * v),
    }
}

/// Horizontal bar chart, one bar per category in the given order. Bar length
/// is proportional to the value; the largest value spans `plot_width`.
pub fn render_bar_chart(categories: &[(String, f64)], options: &BarChartOptions) -> Result<Vec<u8>> {
    if categories.is_empty() {
        return Err(Error::Argument("bar chart needs at least one category".into()));
    }
    if let Some((label, v)) = categories.iter().find(|(_, v)| !v.is_finite() || *v < 0.0) {
        return Err(Error::Argument(format!("bar `{label}` has invalid value {v}")));
    }
    let max = categories.iter().map(|(_, v)| *v).fold(0.0f64, f64::max);
    let top = if options.title.is_empty() { 10.0 } else { 40.0 };
    let step = options.bar_height + options.gap;
    let width = options.label_width + options.plot_width + 90.0;
    let height = top + step * categories.len() as f64 + 10.0;

    let mut doc = SvgDoc::new(width, height);
    if !options.title.is_empty() {
        doc.line(format!(
            "<text class=\"title\" x=\"{}\" y=\"24\" font-size=\"16\" text-anchor=\"middle\">{}</text>",
            num(width / 2.0),
            escape(&options.title)
        ));
    }
    doc.line("<g class=\"bars\">");
    for (i, (label, value)) in categories.iter().enumerate() {
        let y = top + step * i as f64;
        let len = if max > 0.0 { value / max * options.plot_width } else { 0.0 };
        let mid = y + options.bar_height / 2.0;
        doc.line(format!(
            "<text class=\"label\" x=\"{}\" y=\"{}\" font-size=\"12\" text-anchor=\"end\" dominant-baseline=\"central\">{}</text>",
            num(options.label_width - 8.0),
            num(mid),
            escape(label)
        ));
        doc.line(format!(
            "<rect class=\"bar\" x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"#4477aa\"/>",
            num(options.label_width),
            num(y),
            num(len),
            num(options.bar_height)
        ));
        doc.line(format!(
            "<text class=\"value\" x=\"{}\" y=\"{}\" font-size=\"11\" dominant-baseline=\"central\">{}</text>",
            num(options.label_width + len + 6.0),
            num(mid),
            format_value(*value, options.value_format)
        ));
    }
    doc.line("</g>");
    Ok(doc.finish())
}

#[derive(Debug, Clone)]
pub struct TrendChartOptions {
    pub title: String,
    pub width: f64,
    pub height: f64,
}

impl Default for TrendChartOptions {
    fn default() -> Self {
        TrendChartOptions {
            title: String::new(),
            width: 800.0,
            height: 480.0,
        }
    }
}

/// Observed yearly counts as bars, the fitted curve sampled once per year,
/// and `horizon` forecast years after the series marked separately.
pub fn render_trend_chart(series: &YearlyCounts, fit: &TrendFit, horizon: i32, options: &TrendChartOptions) -> Result<Vec<u8>> {
    if horizon < 0 {
        return Err(Error::Argument(format!("forecast horizon must be non-negative, got {horizon}")));
    }
    if series.counts.is_empty() {
        return Err(Error::Argument("trend chart needs at least one year".into()));
    }
    let first = series.first_year;
    let last = series.last_year() + horizon;
    let curve: Vec<(i32, f64)> = (first..=last).map(|y| (y, predict_trend(fit, y))).collect();
    let forecasts: Vec<(i32, f64)> = curve.iter().copied().filter(|(y, _)| *y > series.last_year()).collect();

    let values = series.counts.iter().map(|&c| c as f64).chain(curve.iter().map(|c| c.1));
    let (lo, hi) = values.fold((0.0f64, 0.0f64), |(lo, hi), v| (lo.min(v), hi.max(v)));
    let step = nice_step((hi - lo).max(1.0) / 5.0);
    let (lo, hi) = ((lo / step).floor() * step, (hi / step).ceil() * step);
    let hi = if hi > lo { hi } else { lo + step };

    let (left, right, top, bottom) = (70.0, 20.0, if options.title.is_empty() { 20.0 } else { 44.0 }, 50.0);
    let plot_w = options.width - left - right;
    let plot_h = options.height - top - bottom;
    let n_slots = (last - first + 1) as f64;
    let slot = plot_w / n_slots;
    let x_center = |year: i32| left + slot * (f64::from(year - first) + 0.5);
    let y_of = |v: f64| top + plot_h * (hi - v) / (hi - lo);

    let mut doc = SvgDoc::new(options.width, options.height);
    if !options.title.is_empty() {
        doc.line(format!(
            "<text class=\"title\" x=\"{}\" y=\"26\" font-size=\"16\" text-anchor=\"middle\">{}</text>",
            num(options.width / 2.0),
            escape(&options.title)
        ));
    }
    doc.line(format!(
        "<line class=\"axis\" x1=\"{}\" y1=\"{y}\" x2=\"{}\" y2=\"{y}\" stroke=\"#333\"/>",
        num(left),
        num(left + plot_w),
        y = num(y_of(0.0))
    ));
    let ticks = ((hi - lo) / step).round() as i32;
    for t in 0..=ticks {
        let v = lo + step * f64::from(t);
        doc.line(format!(
            "<text class=\"tick\" x=\"{}\" y=\"{}\" font-size=\"10\" text-anchor=\"end\" dominant-baseline=\"central\">{}</text>",
            num(left - 6.0),
            num(y_of(v)),
            group_thousands(v.round() as i64)
        ));
    }
    doc.line("<g class=\"observed\">");
    for (year, count) in series.years() {
        let v = count as f64;
        let (y0, y1) = (y_of(0.0), y_of(v));
        doc.line(format!(
            "<rect class=\"bar\" x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"#88aacc\" data-year=\"{year}\" data-value=\"{count}\"/>",
            num(x_center(year) - slot * 0.35),
            num(y1.min(y0)),
            num(slot * 0.7),
            num((y0 - y1).abs())
        ));
    }
    doc.line("</g>");
    for (year, _) in &curve {
        doc.line(format!(
            "<text class=\"year\" x=\"{}\" y=\"{}\" font-size=\"10\" text-anchor=\"middle\">{year}</text>",
            num(x_center(*year)),
            num(top + plot_h + 16.0)
        ));
    }
    let points: Vec<String> = curve
        .iter()
        .map(|(y, v)| format!("{},{}", num(x_center(*y)), num(y_of(*v))))
        .collect();
    doc.line(format!(
        "<polyline class=\"fit\" points=\"{}\" fill=\"none\" stroke=\"#cc3311\" stroke-width=\"2\"/>",
        points.join(" ")
    ));
    if !forecasts.is_empty() {
        doc.line("<g class=\"forecast\">");
        for (year, v) in &forecasts {
            let (cx, cy) = (x_center(*year), y_of(*v));
            doc.line(format!(
                "<circle class=\"forecast-point\" cx=\"{}\" cy=\"{}\" r=\"5\" fill=\"#ffffff\" stroke=\"#cc3311\" stroke-width=\"2\" data-year=\"{year}\" data-value=\"{v}\"/>",
                num(cx),
                num(cy)
            ));
            doc.line(format!(
                "<text class=\"forecast-label\" x=\"{}\" y=\"{}\" font-size=\"11\" text-anchor=\"middle\">{}</text>",
                num(cx),
                num(cy - 10.0),
                group_thousands(v.round() as i64)
            ));
        }
        doc.line("</g>");
    }
    let r2 = fit.r_squared.map_or("undefined".to_string(), |r| format!("{r:.2}"));
    doc.line(format!(
        "<text class=\"equation\" x=\"{}\" y=\"{}\" font-size=\"11\">y(x) = {}x² {} {}x {} {}, R² = {r2}</text>",
        num(left + 10.0),
        num(top + 14.0),
        coefficient(fit.c2),
        if fit.c1 < 0.0 { '−' } else { '+' },
        coefficient(fit.c1.abs()),
        if fit.c0 < 0.0 { '−' } else { '+' },
        coefficient(fit.c0.abs())
    ));
    Ok(doc.finish())
}

/// Smallest of 1, 2 or 5 times a power of ten that is at least `raw`, and
/// never below 1 since the axis counts documents.
fn nice_step(raw: f64) -> f64 {
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0]
        .into_iter()
        .map(|m| m * mag)
        .find(|s| *s >= raw)
        .unwrap_or(10.0 * mag);
    step.max(1.0)
}

/// At least three significant digits and one decimal: `46.9`, `579.0`,
/// `0.0769`.
fn coefficient(v: f64) -> String {
    let decimals = if v == 0.0 {
        1
    } else {
        (2 - v.abs().log10().floor() as i32).clamp(1, 8)
    };
    format!("{v:.*}", decimals as usize)
}
