//! Run configuration.
//!
//! A configuration file is UTF-8 text with one `key = value` pair per line.
//! Blank lines and lines starting with `#` are ignored, and so is anything
//! after a ` #` on a value line. Keys may appear at most once. Relative paths
//! resolve against the directory holding the file.
//!
//! ```text
//! # mini.conf
//! input = mini_corpus.csv
//! min_term_frequency = 5
//! periods = Surgimiento:2009-2012, Crecimiento:2013-2018, Auge:2019-2022
//! seed = 7
//! ```
//!
//! Every key with its default is listed in [`RunConfig::echo`]; the echo of a
//! resolved configuration is itself a valid configuration file.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use crate::corpus::{default_excluded_types, DocType, IngestOptions, Schema};
use crate::error::{Error, Result};
use crate::periods::PeriodSpec;
use crate::text::WeightingScheme;

/// Everything a pipeline run depends on. The output directory is deliberately
/// absent: results do not depend on where they are written.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub input: PathBuf,
    pub schema: Schema,
    pub year_min: i32,
    pub year_max: i32,
    pub excluded_types: BTreeSet<DocType>,
    pub builtin_stoplist: bool,
    pub stoplists: Vec<PathBuf>,
    /// Also drop terms occurring in more than this share of documents.
    pub auto_stopword_fraction: Option<f64>,
    pub min_token_length: usize,
    pub min_term_frequency: u64,
    /// `None` analyses raw counts.
    pub weighting: Option<WeightingScheme>,
    pub ca_dims: usize,
    pub periods: PeriodSpec,
    pub top_terms: usize,
    pub top_characteristic_terms: usize,
    pub top_pioneer_docs: usize,
    pub year_neighbors: usize,
    /// Drop later years from the trend fit, e.g. an incomplete final year.
    pub trend_last_year: Option<i32>,
    pub forecast_horizon: i32,
    pub cloud_terms: usize,
    pub cloud_width: f64,
    pub cloud_height: f64,
    pub seed: u64,
}

impl RunConfig {
    /// Defaults for everything except the input path.
    pub fn with_input(input: impl Into<PathBuf>) -> Self {
        RunConfig {
            input: input.into(),
            schema: Schema::default(),
            year_min: 1900,
            year_max: 2100,
            excluded_types: default_excluded_types(),
            builtin_stoplist: true,
            stoplists: Vec::new(),
            auto_stopword_fraction: None,
            min_token_length: 2,
            min_term_frequency: 5,
            weighting: None,
            ca_dims: 2,
            periods: PeriodSpec::default(),
            top_terms: 30,
            top_characteristic_terms: 10,
            top_pioneer_docs: 3,
            year_neighbors: 5,
            trend_last_year: None,
            forecast_horizon: 2,
            cloud_terms: 50,
            cloud_width: 800.0,
            cloud_height: 500.0,
            seed: 0,
        }
    }

    /// Parses configuration text. Relative paths are joined onto `base_dir`.
    pub fn parse(text: &str, base_dir: &Path) -> Result<Self> {
        let mut pairs: BTreeMap<String, (usize, String)> = BTreeMap::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected `key = value`, got `{line}`", n + 1)))?;
            let value = value.split(" #").next().unwrap_or_default().trim();
            let key = key.trim().to_string();
            if pairs.insert(key.clone(), (n + 1, value.to_string())).is_some() {
                return Err(Error::Config(format!("line {}: key `{key}` given twice", n + 1)));
            }
        }
        let (_, input) = pairs
            .remove("input")
            .ok_or_else(|| Error::Config("missing required key `input`".into()))?;
        let mut cfg = RunConfig::with_input(base_dir.join(input));
        for (key, (line, value)) in pairs {
            cfg.set(&key, &value, base_dir)
                .map_err(|e| Error::Config(format!("line {line}: {}", strip_prefix(e))))?;
        }
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::parse(&text, base)
    }

    /// Sets one key from its textual value.
    pub fn set(&mut self, key: &str, value: &str, base_dir: &Path) -> Result<()> {
        let bad = |what: &str| Error::Config(format!("`{key}` {what}, got `{value}`"));
        let int = |lo: i64, hi: i64| -> Result<i64> {
            value
                .parse::<i64>()
                .ok()
                .filter(|v| (lo..=hi).contains(v))
                .ok_or_else(|| bad(&format!("must be an integer in {lo}..={hi}")))
        };
        let optional = |v: &str| (!v.is_empty() && v != "-").then(|| v.to_string());
        match key {
            "input" => self.input = base_dir.join(value),
            "column.id" => self.schema.id = optional(value),
            "column.title" => self.schema.title = value.to_string(),
            "column.abstract" => self.schema.abstract_text = value.to_string(),
            "column.keywords" => self.schema.keywords = optional(value),
            "column.year" => self.schema.year = value.to_string(),
            "column.doc_type" => self.schema.doc_type = optional(value),
            "column.citations" => self.schema.citations = optional(value),
            "year_min" => self.year_min = int(-9999, 9999)? as i32,
            "year_max" => self.year_max = int(-9999, 9999)? as i32,
            "excluded_types" => {
                self.excluded_types = split_list(value)
                    .map(|s| s.parse::<DocType>())
                    .collect::<Result<_>>()
                    .map_err(|e| Error::Config(format!("`{key}`: {}", strip_prefix(e))))?
            }
            "builtin_stoplist" => {
                self.builtin_stoplist = match value {
                    "true" => true,
                    "false" => false,
                    _ => return Err(bad("must be `true` or `false`")),
                }
            }
            "stoplists" => self.stoplists = split_list(value).map(|p| base_dir.join(p)).collect(),
            "auto_stopword_fraction" => {
                self.auto_stopword_fraction = match value {
                    "" | "none" => None,
                    v => Some(
                        v.parse::<f64>()
                            .ok()
                            .filter(|f| *f > 0.0 && *f <= 1.0)
                            .ok_or_else(|| bad("must be `none` or a number in (0, 1]"))?,
                    ),
                }
            }
            "min_token_length" => self.min_token_length = int(1, 64)? as usize,
            "min_term_frequency" => self.min_term_frequency = int(1, i64::MAX)? as u64,
            "weighting" => {
                self.weighting = match value {
                    "counts" => None,
                    v => Some(v.parse()?),
                }
            }
            "ca_dims" => self.ca_dims = int(1, 64)? as usize,
            "periods" => self.periods = PeriodSpec::parse(value)?,
            "top_terms" => self.top_terms = int(1, 10_000)? as usize,
            "top_characteristic_terms" => self.top_characteristic_terms = int(1, 10_000)? as usize,
            "top_pioneer_docs" => self.top_pioneer_docs = int(1, 10_000)? as usize,
            "year_neighbors" => self.year_neighbors = int(1, 10_000)? as usize,
            "trend_last_year" => {
                self.trend_last_year = match value {
                    "" | "none" => None,
                    _ => Some(int(-9999, 9999)? as i32),
                }
            }
            "forecast_horizon" => self.forecast_horizon = int(0, 100)? as i32,
            "cloud_terms" => self.cloud_terms = int(1, 10_000)? as usize,
            "cloud_width" => self.cloud_width = int(50, 20_000)? as f64,
            "cloud_height" => self.cloud_height = int(50, 20_000)? as f64,
            "seed" => self.seed = value.parse().map_err(|_| bad("must be a non-negative integer"))?,
            _ => return Err(Error::Config(format!("unknown key `{key}`"))),
        }
        Ok(())
    }

    /// Checks cross-field constraints and that referenced files exist.
    pub fn validate(&self) -> Result<()> {
        if !self.input.is_file() {
            return Err(Error::Config(format!("input file {} does not exist", self.input.display())));
        }
        if let Some(p) = self.stoplists.iter().find(|p| !p.is_file()) {
            return Err(Error::Config(format!("stoplist {} does not exist", p.display())));
        }
        if self.year_min > self.year_max {
            return Err(Error::Config(format!(
                "year_min {} is after year_max {}",
                self.year_min, self.year_max
            )));
        }
        let s = &self.schema;
        if [&s.title, &s.abstract_text, &s.year].iter().any(|c| c.is_empty()) {
            return Err(Error::Config(
                "column.title, column.abstract and column.year cannot be empty".into(),
            ));
        }
        Ok(())
    }

    /// Makes every path absolute so the echo is valid from any directory.
    pub fn canonicalize_paths(&mut self) -> Result<()> {
        let canon = |p: &Path| std::fs::canonicalize(p).map_err(|e| Error::Config(format!("cannot resolve {}: {e}", p.display())));
        self.input = canon(&self.input)?;
        self.stoplists = self.stoplists.iter().map(|p| canon(p)).collect::<Result<_>>()?;
        Ok(())
    }

    pub fn ingest_options(&self) -> IngestOptions {
        IngestOptions {
            schema: self.schema.clone(),
            year_window: self.year_min..=self.year_max,
            ..IngestOptions::default()
        }
    }

    /// Every setting as text, keyed as in the file format.
    pub fn echo(&self) -> BTreeMap<String, String> {
        let opt = |c: &Option<String>| c.clone().unwrap_or_else(|| "-".into());
        let list = |v: Vec<String>| v.join(", ");
        let s = &self.schema;
        [
            ("input", self.input.display().to_string()),
            ("column.id", opt(&s.id)),
            ("column.title", s.title.clone()),
            ("column.abstract", s.abstract_text.clone()),
            ("column.keywords", opt(&s.keywords)),
            ("column.year", s.year.clone()),
            ("column.doc_type", opt(&s.doc_type)),
            ("column.citations", opt(&s.citations)),
            ("year_min", self.year_min.to_string()),
            ("year_max", self.year_max.to_string()),
            (
                "excluded_types",
                list(self.excluded_types.iter().map(|t| t.slug().to_string()).collect()),
            ),
            ("builtin_stoplist", self.builtin_stoplist.to_string()),
            ("stoplists", list(self.stoplists.iter().map(|p| p.display().to_string()).collect())),
            (
                "auto_stopword_fraction",
                self.auto_stopword_fraction.map_or("none".into(), |f| f.to_string()),
            ),
            ("min_token_length", self.min_token_length.to_string()),
            ("min_term_frequency", self.min_term_frequency.to_string()),
            ("weighting", self.weighting.map_or("counts".into(), |w| w.name().to_string())),
            ("ca_dims", self.ca_dims.to_string()),
            ("periods", self.periods.to_string()),
            ("top_terms", self.top_terms.to_string()),
            ("top_characteristic_terms", self.top_characteristic_terms.to_string()),
            ("top_pioneer_docs", self.top_pioneer_docs.to_string()),
            ("year_neighbors", self.year_neighbors.to_string()),
            ("trend_last_year", self.trend_last_year.map_or("none".into(), |y| y.to_string())),
            ("forecast_horizon", self.forecast_horizon.to_string()),
            ("cloud_terms", self.cloud_terms.to_string()),
            ("cloud_width", self.cloud_width.to_string()),
            ("cloud_height", self.cloud_height.to_string()),
            ("seed", self.seed.to_string()),
        ]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect()
    }

    /// The echo rendered in the file format.
    pub fn to_config_text(&self) -> String {
        self.echo().into_iter().map(|(k, v)| format!("{k} = {v}\n")).collect()
    }
}

fn split_list(value: &str) -> impl Iterator<Item = &str> {
    value.split(',').map(str::trim).filter(|s| !s.is_empty())
}

/// Drops the "configuration error: " prefix when re-wrapping a message.
fn strip_prefix(e: Error) -> String {
    match e {
        Error::Config(m) => m,
        other => other.to_string(),
    }
}
