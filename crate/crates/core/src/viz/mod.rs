//! Deterministic SVG figures.
//!
//! Every renderer is a pure function of its inputs: numbers are printed with
//! fixed precision and nothing reads the clock or an unseeded generator, so
//! identical inputs give identical bytes.

mod camap;
mod charts;
mod cloud;
mod svg;

pub use camap::{render_ca_map, CaMapOptions};
pub use charts::{render_bar_chart, render_trend_chart, BarChartOptions, TrendChartOptions, ValueFormat};
pub use cloud::{layout_word_cloud, render_word_cloud, text_width_em, BBox, Canvas, CloudLayout, CloudOptions, Placement};
