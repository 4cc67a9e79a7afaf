//! Longitudinal analysis of a bibliographic corpus.
//!
//! The crate turns a bibliographic CSV export into descriptive statistics, a
//! correspondence analysis of documents against terms, and a chronological
//! reading of how the vocabulary of a field moves over time. Every stage is a
//! plain function over in-memory values; [`pipeline`] chains them with an
//! on-disk artifact cache for the command-line tool.
//!
//! ```
//! use lexevo::corpus::{parse_bibliographic_csv, IngestOptions, Schema};
//!
//! let csv = "Title,Abstract,Year\nA,Big data in health,2020\n";
//! let options = IngestOptions { schema: Schema::minimal(), ..Default::default() };
//! let parsed = parse_bibliographic_csv(csv.as_bytes(), &options)?;
//! assert_eq!(parsed.corpus.len(), 1);
//! # Ok::<(), lexevo::Error>(())
//! ```

pub mod ca;
pub mod config;
pub mod corpus;
mod error;
pub mod linalg;
pub mod periods;
pub mod pipeline;
pub mod sparse;
pub mod stats;
pub mod text;
pub mod trend;
pub mod viz;

pub use config::RunConfig;
pub use error::{Error, Result};
pub use periods::group_thousands;
pub use pipeline::{run_pipeline, Manifest, Pipeline, Stage, StageFailure};

/// The guide's code samples, compiled and run as doc-tests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/ingestion.md")]
    mod ingestion {}
    #[doc = include_str!("../../../book/src/text-pipeline.md")]
    mod text_pipeline {}
    #[doc = include_str!("../../../book/src/weighting.md")]
    mod weighting {}
    #[doc = include_str!("../../../book/src/correspondence-analysis.md")]
    mod correspondence_analysis {}
    #[doc = include_str!("../../../book/src/trend.md")]
    mod trend {}
    #[doc = include_str!("../../../book/src/periods.md")]
    mod periods {}
    #[doc = include_str!("../../../book/src/figures.md")]
    mod figures {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
