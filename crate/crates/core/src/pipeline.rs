//! Staged pipeline with an on-disk artifact cache.
//!
//! A run is five stages. Each reads its inputs from files written by an
//! earlier stage in the output directory, so any stage can be re-run on its
//! own and the intermediate tables can be inspected by hand:
//!
//! | stage     | reads                                   | writes |
//! |-----------|-----------------------------------------|--------|
//! | `ingest`  | the input CSV                           | `corpus.csv`, `rejects.txt`, `ingest.json`, `vocabulary.tsv`, `dtm.tsv` |
//! | `stats`   | `corpus.csv`, `vocabulary.tsv`          | `term_frequencies.tsv`, `yearly_counts.tsv`, `type_shares.tsv`, `stats.json` |
//! | `ca`      | `corpus.csv`, `vocabulary.tsv`, `dtm.tsv` | `ca_model.json`, `ca_coordinates.tsv`, `year_neighbors.tsv` |
//! | `periods` | `corpus.csv`, `vocabulary.tsv`, `dtm.tsv` | `periods.json`, `periods.md` |
//! | `figures` | all of the above                        | `*.svg`, `wordcloud_layout.tsv` |
//!
//! After every stage `manifest.json` is rewritten with the configuration
//! echo, summary values and a SHA-256 for every artifact. Wall-clock timings
//! go to `timings.json` so that the manifest itself is reproducible.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::io::BufReader;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::ca::{column_neighbours, compute_ca, project_supplementary, CaInput, CaManifest, CaModel};
use crate::config::RunConfig;
use crate::corpus::{
    filter_corpus, parse_bibliographic_csv, write_canonical_csv, write_rejects, Corpus, DocType, FilterReport, IngestOptions, Schema,
};
use crate::error::{Error, Result};
use crate::periods::{period_report, PeriodReports};
use crate::stats::{publication_type_shares, publications_per_year, term_frequency_table, write_type_shares_tsv, TermTable, YearlyCounts};
use crate::text::{
    build_dtm, build_vocabulary, remove_stopwords, uniqueness_stats, weight_matrix, DocTermMatrix, Stoplist, Tokenizer, UniquenessStats,
    Vocabulary,
};
use crate::trend::{fit_quadratic_trend, predict_trend, TrendFit};
use crate::viz::{
    layout_word_cloud, render_bar_chart, render_ca_map, render_trend_chart, render_word_cloud, BarChartOptions, CaMapOptions, Canvas,
    CloudOptions, TrendChartOptions, ValueFormat,
};

pub const MANIFEST_FILE: &str = "manifest.json";
pub const TIMINGS_FILE: &str = "timings.json";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Stage {
    Ingest,
    Stats,
    Ca,
    Periods,
    Figures,
}

impl Stage {
    pub const ALL: [Stage; 5] = [Stage::Ingest, Stage::Stats, Stage::Ca, Stage::Periods, Stage::Figures];

    /// Also the subcommand that runs the stage.
    pub fn name(self) -> &'static str {
        match self {
            Stage::Ingest => "ingest",
            Stage::Stats => "stats",
            Stage::Ca => "ca",
            Stage::Periods => "periods",
            Stage::Figures => "figures",
        }
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Stage {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Stage::ALL
            .into_iter()
            .find(|st| st.name() == s)
            .ok_or_else(|| Error::Argument(format!("unknown stage `{s}`")))
    }
}

/// A stage error together with the stage that raised it.
#[derive(Debug)]
pub struct StageFailure {
    pub stage: Stage,
    pub error: Error,
}

impl fmt::Display for StageFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} stage failed: {}", self.stage, self.error)
    }
}

impl std::error::Error for StageFailure {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        Some(&self.error)
    }
}

impl StageFailure {
    pub fn exit_code(&self) -> i32 {
        self.error.exit_code()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub stage: String,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageRecord {
    pub status: String,
    /// Stage-specific summary values; `null` when the stage failed.
    pub summary: serde_json::Value,
}

/// Contents of `manifest.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    /// `OK` when every recorded stage succeeded, else `FAILED`.
    pub status: String,
    pub failure: Option<Failure>,
    /// Resolved configuration; writing it out as `key = value` lines gives a
    /// configuration that reproduces the run.
    pub config: BTreeMap<String, String>,
    pub corpus_sha256: Option<String>,
    pub vocabulary_size: Option<usize>,
    pub singular_values: Option<Vec<f64>>,
    pub stages: BTreeMap<String, StageRecord>,
    /// SHA-256 of every artifact, keyed by file name.
    pub artifacts: BTreeMap<String, String>,
}

impl Manifest {
    fn new(config: &RunConfig) -> Self {
        Manifest {
            tool: format!("lexevo {}", env!("CARGO_PKG_VERSION")),
            status: "OK".into(),
            failure: None,
            config: config.echo(),
            corpus_sha256: None,
            vocabulary_size: None,
            singular_values: None,
            stages: BTreeMap::new(),
            artifacts: BTreeMap::new(),
        }
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(format!("reading {}", path.display()), e))?;
        serde_json::from_str(&text).map_err(|e| Error::Consistency(format!("{}: {e}", path.display())))
    }

    /// The echoed configuration in file form.
    pub fn config_text(&self) -> String {
        self.config.iter().map(|(k, v)| format!("{k} = {v}\n")).collect()
    }
}

/// Summary of the ingest stage, also written as `ingest.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IngestSummary {
    pub input_sha256: String,
    pub filter: FilterReport,
    pub rejected_rows: usize,
    /// Token statistics before stopword removal.
    pub uniqueness: UniquenessStats,
    pub stopwords: usize,
    pub vocabulary_size: usize,
    pub dtm_rows: usize,
    pub dtm_cols: usize,
    pub dtm_nonzero: usize,
    pub dtm_grand_total: u64,
    /// Documents left with no vocabulary term.
    pub pruned_documents: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TypeShare {
    pub doc_type: DocType,
    pub share: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Forecast {
    pub year: i32,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrendReport {
    /// The series the curve was fitted to.
    pub series: YearlyCounts,
    pub fit: TrendFit,
    pub forecasts: Vec<Forecast>,
}

/// Contents of `stats.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatsReport {
    pub term_table: TermTable,
    pub yearly: YearlyCounts,
    pub type_shares: Vec<TypeShare>,
    pub trend: TrendReport,
}

/// A pipeline bound to a validated configuration and an output directory.
#[derive(Debug, Clone)]
pub struct Pipeline {
    config: RunConfig,
    out_dir: PathBuf,
}

impl Pipeline {
    /// Validates the configuration, makes its paths absolute and creates the
    /// output directory.
    pub fn new(mut config: RunConfig, out_dir: impl Into<PathBuf>) -> Result<Self> {
        config.validate()?;
        config.canonicalize_paths()?;
        let out_dir = out_dir.into();
        fs::create_dir_all(&out_dir).map_err(|e| Error::io(format!("creating {}", out_dir.display()), e))?;
        Ok(Pipeline { config, out_dir })
    }

    pub fn config(&self) -> &RunConfig {
        &self.config
    }

    pub fn out_dir(&self) -> &Path {
        &self.out_dir
    }

    /// Runs every stage in order, stopping at the first failure.
    pub fn run_all(&self) -> std::result::Result<Manifest, StageFailure> {
        let mut manifest = None;
        for stage in Stage::ALL {
            manifest = Some(self.run_stage(stage)?);
        }
        Ok(manifest.expect("at least one stage"))
    }

    /// Runs one stage against the cached outputs of earlier stages and
    /// records the outcome in the manifest. Artifacts written before a
    /// failure are kept.
    pub fn run_stage(&self, stage: Stage) -> std::result::Result<Manifest, StageFailure> {
        let fail = |error| StageFailure { stage, error };
        let mut manifest = self.load_manifest();
        log::info!("running stage `{stage}`");
        let started = Instant::now();
        let mut ctx = StageContext {
            pipeline: self,
            manifest: &mut manifest,
        };
        let outcome = match stage {
            Stage::Ingest => ctx.ingest(),
            Stage::Stats => ctx.stats(),
            Stage::Ca => ctx.ca(),
            Stage::Periods => ctx.periods(),
            Stage::Figures => ctx.figures(),
        };
        let elapsed = started.elapsed().as_secs_f64();
        let error = match outcome {
            Ok(summary) => {
                manifest.stages.insert(
                    stage.name().into(),
                    StageRecord {
                        status: "OK".into(),
                        summary,
                    },
                );
                if manifest.failure.as_ref().is_some_and(|f| f.stage == stage.name()) {
                    manifest.failure = None;
                }
                None
            }
            Err(e) => {
                log::error!("stage `{stage}` failed: {e}");
                manifest.stages.insert(
                    stage.name().into(),
                    StageRecord {
                        status: "FAILED".into(),
                        summary: serde_json::Value::Null,
                    },
                );
                manifest.failure = Some(Failure {
                    stage: stage.name().into(),
                    error: e.to_string(),
                });
                Some(e)
            }
        };
        manifest.status = if manifest.stages.values().all(|r| r.status == "OK") {
            "OK"
        } else {
            "FAILED"
        }
        .into();
        self.write_json(MANIFEST_FILE, &manifest).map_err(fail)?;
        self.record_timing(stage, elapsed).map_err(fail)?;
        match error {
            Some(e) => Err(fail(e)),
            None => Ok(manifest),
        }
    }

    fn load_manifest(&self) -> Manifest {
        let path = self.out_dir.join(MANIFEST_FILE);
        let fresh = Manifest::new(&self.config);
        match Manifest::read(&path) {
            Ok(mut m) => {
                if m.config != fresh.config {
                    log::warn!(
                        "configuration differs from the one recorded in {}; the manifest now echoes the new one",
                        path.display()
                    );
                    m.config = fresh.config;
                }
                m.tool = fresh.tool;
                m
            }
            Err(_) => fresh,
        }
    }

    fn record_timing(&self, stage: Stage, seconds: f64) -> Result<()> {
        let path = self.out_dir.join(TIMINGS_FILE);
        let mut timings: BTreeMap<String, f64> = fs::read_to_string(&path)
            .ok()
            .and_then(|t| serde_json::from_str(&t).ok())
            .unwrap_or_default();
        timings.insert(stage.name().into(), seconds);
        self.write_json(TIMINGS_FILE, &timings)
    }

    fn write_file(&self, name: &str, bytes: &[u8]) -> Result<()> {
        let path = self.out_dir.join(name);
        fs::write(&path, bytes).map_err(|e| Error::io(format!("writing {}", path.display()), e))
    }

    fn write_json<T: Serialize>(&self, name: &str, value: &T) -> Result<()> {
        let mut bytes = serde_json::to_vec_pretty(value).map_err(|e| Error::Consistency(e.to_string()))?;
        bytes.push(b'\n');
        self.write_file(name, &bytes)
    }

    /// Path of an upstream artifact, or a dependency error naming the stage
    /// that produces it.
    fn require(&self, name: &str, producer: Stage) -> Result<PathBuf> {
        let path = self.out_dir.join(name);
        if path.is_file() {
            Ok(path)
        } else {
            Err(Error::Dependency {
                path,
                producer: producer.name(),
            })
        }
    }

    fn read_text(&self, name: &str, producer: Stage) -> Result<String> {
        let path = self.require(name, producer)?;
        fs::read_to_string(&path).map_err(|e| Error::io(format!("reading {}", path.display()), e))
    }

    fn read_json<T: for<'de> Deserialize<'de>>(&self, name: &str, producer: Stage) -> Result<T> {
        let text = self.read_text(name, producer)?;
        serde_json::from_str(&text).map_err(|e| Error::Consistency(format!("{name}: {e}")))
    }

    fn load_corpus(&self) -> Result<Corpus> {
        let path = self.require("corpus.csv", Stage::Ingest)?;
        let file = fs::File::open(&path).map_err(|e| Error::io(format!("opening {}", path.display()), e))?;
        let options = IngestOptions {
            year_window: i32::MIN..=i32::MAX,
            ..IngestOptions::default()
        };
        let parsed = parse_bibliographic_csv(BufReader::new(file), &options)?;
        if let Some(r) = parsed.rejects.first() {
            return Err(Error::Consistency(format!("cached corpus.csv is damaged: {r}")));
        }
        Ok(parsed.corpus)
    }

    fn load_vocabulary(&self) -> Result<Vocabulary> {
        let path = self.require("vocabulary.tsv", Stage::Ingest)?;
        let file = fs::File::open(&path).map_err(|e| Error::io(format!("opening {}", path.display()), e))?;
        Vocabulary::read_tsv(BufReader::new(file))
    }

    fn load_dtm(&self, vocab: &Vocabulary) -> Result<DocTermMatrix> {
        let path = self.require("dtm.tsv", Stage::Ingest)?;
        let file = fs::File::open(&path).map_err(|e| Error::io(format!("opening {}", path.display()), e))?;
        DocTermMatrix::read_tsv(vocab.terms(), BufReader::new(file))
    }

    fn load_ca(&self) -> Result<(CaModel, Vec<crate::ca::SupplementaryProjection>)> {
        let manifest: CaManifest = self.read_json("ca_model.json", Stage::Ca)?;
        let coords = self.read_text("ca_coordinates.tsv", Stage::Ca)?;
        CaModel::from_exports(&manifest, &coords)
    }
}

/// Runs the whole pipeline into `out_dir`.
pub fn run_pipeline(config: RunConfig, out_dir: impl Into<PathBuf>) -> std::result::Result<Manifest, StageFailure> {
    let pipeline = Pipeline::new(config, out_dir).map_err(|error| StageFailure {
        stage: Stage::Ingest,
        error,
    })?;
    pipeline.run_all()
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

/// File-name-safe form of a period name.
fn slug(name: &str) -> String {
    let s: String = name
        .to_lowercase()
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() { c } else { '-' })
        .collect();
    s.trim_matches('-').to_string()
}

struct StageContext<'a> {
    pipeline: &'a Pipeline,
    manifest: &'a mut Manifest,
}

impl StageContext<'_> {
    fn cfg(&self) -> &RunConfig {
        &self.pipeline.config
    }

    /// Writes an artifact and records its hash.
    fn emit(&mut self, name: &str, bytes: Vec<u8>) -> Result<()> {
        self.pipeline.write_file(name, &bytes)?;
        self.manifest.artifacts.insert(name.to_string(), sha256_hex(&bytes));
        Ok(())
    }

    fn emit_json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        let mut bytes = serde_json::to_vec_pretty(value).map_err(|e| Error::Consistency(e.to_string()))?;
        bytes.push(b'\n');
        self.emit(name, bytes)
    }

    fn ingest(&mut self) -> Result<serde_json::Value> {
        let cfg = self.cfg().clone();
        let bytes = fs::read(&cfg.input).map_err(|e| Error::io(format!("reading {}", cfg.input.display()), e))?;
        let input_sha256 = sha256_hex(&bytes);
        let parsed = parse_bibliographic_csv(&bytes[..], &cfg.ingest_options())?;
        for r in &parsed.rejects {
            log::warn!("skipped {r}");
        }
        let corpus = filter_corpus(&parsed.corpus, &cfg.excluded_types);
        let filter = corpus.provenance();
        log::info!(
            "loaded {} documents, excluded {} non-research and {} without abstract, retained {}",
            filter.loaded,
            filter.excluded_non_research,
            filter.excluded_no_abstract,
            filter.retained
        );
        if corpus.is_empty() {
            return Err(Error::EmptyCorpus);
        }
        let mut csv = Vec::new();
        write_canonical_csv(corpus.documents(), &Schema::default(), &mut csv)?;
        self.emit("corpus.csv", csv)?;
        let mut rejects = Vec::new();
        write_rejects(&parsed.rejects, &mut rejects).map_err(|e| Error::io("formatting rejects", e))?;
        self.emit("rejects.txt", rejects)?;

        let tokenizer = Tokenizer::new(cfg.min_token_length);
        let raw: Vec<_> = corpus
            .documents()
            .iter()
            .map(|d| tokenizer.stream(d.id.clone(), &d.abstract_text))
            .collect();
        let uniqueness = uniqueness_stats(&raw)?;
        let mut stoplist = if cfg.builtin_stoplist {
            Stoplist::english()
        } else {
            Stoplist::empty()
        };
        for path in &cfg.stoplists {
            stoplist.extend(&Stoplist::from_file(path)?);
        }
        if let Some(fraction) = cfg.auto_stopword_fraction {
            let frequent = Stoplist::frequent_terms(&raw, fraction);
            log::info!("{} corpus-frequent terms added to the stoplist", frequent.len());
            stoplist.extend(&frequent);
        }
        let streams: Vec<_> = raw.iter().map(|s| remove_stopwords(s, &stoplist)).collect();
        let vocab = build_vocabulary(&streams, cfg.min_term_frequency)?;
        let dtm = build_dtm(&streams, &vocab)?;

        let mut buf = Vec::new();
        vocab.write_tsv(&mut buf).map_err(|e| Error::io("formatting vocabulary", e))?;
        self.emit("vocabulary.tsv", buf)?;
        let mut buf = Vec::new();
        dtm.write_tsv(&mut buf).map_err(|e| Error::io("formatting matrix", e))?;
        self.emit("dtm.tsv", buf)?;

        let summary = IngestSummary {
            input_sha256: input_sha256.clone(),
            filter,
            rejected_rows: parsed.rejects.len(),
            uniqueness,
            stopwords: stoplist.len(),
            vocabulary_size: vocab.len(),
            dtm_rows: dtm.n_rows(),
            dtm_cols: dtm.n_cols(),
            dtm_nonzero: dtm.counts().nnz(),
            dtm_grand_total: dtm.grand_total(),
            pruned_documents: dtm.pruned_rows().to_vec(),
        };
        self.emit_json("ingest.json", &summary)?;
        self.manifest.corpus_sha256 = Some(input_sha256);
        self.manifest.vocabulary_size = Some(vocab.len());
        serde_json::to_value(&summary).map_err(|e| Error::Consistency(e.to_string()))
    }

    fn stats(&mut self) -> Result<serde_json::Value> {
        let cfg = self.cfg().clone();
        let corpus = self.pipeline.load_corpus()?;
        let vocab = self.pipeline.load_vocabulary()?;
        let term_table = term_frequency_table(&vocab, cfg.top_terms)?;
        let yearly = publications_per_year(&corpus)?;
        let shares = publication_type_shares(&corpus)?;
        let series = match cfg.trend_last_year {
            Some(y) => yearly.truncated_to(y),
            None => yearly.clone(),
        };
        let fit = fit_quadratic_trend(&series)?;
        let forecasts = (1..=cfg.forecast_horizon)
            .map(|h| {
                let year = series.last_year() + h;
                Forecast {
                    year,
                    value: predict_trend(&fit, year),
                }
            })
            .collect();

        let mut buf = Vec::new();
        term_table.write_tsv(&mut buf).map_err(|e| Error::io("formatting term table", e))?;
        self.emit("term_frequencies.tsv", buf)?;
        let mut buf = Vec::new();
        yearly.write_tsv(&mut buf).map_err(|e| Error::io("formatting yearly counts", e))?;
        self.emit("yearly_counts.tsv", buf)?;
        let mut buf = Vec::new();
        write_type_shares_tsv(&shares, &mut buf).map_err(|e| Error::io("formatting type shares", e))?;
        self.emit("type_shares.tsv", buf)?;

        let report = StatsReport {
            term_table,
            yearly,
            type_shares: shares.into_iter().map(|(doc_type, share)| TypeShare { doc_type, share }).collect(),
            trend: TrendReport { series, fit, forecasts },
        };
        self.emit_json("stats.json", &report)?;
        Ok(serde_json::json!({
            "documents": corpus.len(),
            "trend": report.trend.fit,
            "forecasts": report.trend.forecasts,
        }))
    }

    fn ca(&mut self) -> Result<serde_json::Value> {
        let cfg = self.cfg().clone();
        let corpus = self.pipeline.load_corpus()?;
        let vocab = self.pipeline.load_vocabulary()?;
        let dtm = self.pipeline.load_dtm(&vocab)?;
        let input = match cfg.weighting {
            None => CaInput::from_dtm(&dtm)?,
            Some(scheme) => CaInput::from_weighted(&weight_matrix(&dtm, scheme)?)?,
        };
        let model = compute_ca(&input, cfg.ca_dims)?;
        let years = year_profiles(&input, &corpus)?
            .into_iter()
            .map(|(year, profile)| project_supplementary(&model, &profile, &year.to_string()))
            .collect::<Result<Vec<_>>>()?;
        let neighbours = column_neighbours(&model, &years, cfg.year_neighbors)?;

        let ca_manifest = model.manifest();
        self.emit_json("ca_model.json", &ca_manifest)?;
        let mut buf = Vec::new();
        model
            .write_coordinates_tsv(&years, &mut buf)
            .map_err(|e| Error::io("formatting coordinates", e))?;
        self.emit("ca_coordinates.tsv", buf)?;
        let mut buf = String::from("year\trank\tterm\tdistance\n");
        for (year, list) in &neighbours {
            for (rank, (term, d)) in list.iter().enumerate() {
                buf.push_str(&format!("{year}\t{}\t{term}\t{d}\n", rank + 1));
            }
        }
        self.emit("year_neighbors.tsv", buf.into_bytes())?;
        self.manifest.singular_values = Some(ca_manifest.singular_values.clone());
        serde_json::to_value(&ca_manifest).map_err(|e| Error::Consistency(e.to_string()))
    }

    fn periods(&mut self) -> Result<serde_json::Value> {
        let cfg = self.cfg().clone();
        let corpus = self.pipeline.load_corpus()?;
        let vocab = self.pipeline.load_vocabulary()?;
        let dtm = self.pipeline.load_dtm(&vocab)?;
        let reports = period_report(&corpus, &dtm, &cfg.periods, cfg.top_characteristic_terms, cfg.top_pioneer_docs)?;
        self.emit_json("periods.json", &reports)?;
        self.emit("periods.md", reports.to_markdown().into_bytes())?;
        let counts: BTreeMap<&str, usize> = reports.periods.iter().map(|p| (p.name.as_str(), p.doc_count)).collect();
        Ok(serde_json::json!({
            "doc_counts": counts,
            "unassigned": reports.unassigned_count,
        }))
    }

    fn figures(&mut self) -> Result<serde_json::Value> {
        let cfg = self.cfg().clone();
        let stats: StatsReport = self.pipeline.read_json("stats.json", Stage::Stats)?;
        let (model, years) = self.pipeline.load_ca()?;
        let reports: PeriodReports = self.pipeline.read_json("periods.json", Stage::Periods)?;
        let vocab = self.pipeline.load_vocabulary()?;
        let mut written = Vec::new();

        let terms: Vec<(String, f64)> = stats.term_table.rows.iter().map(|r| (r.term.clone(), r.frequency as f64)).collect();
        let svg = render_bar_chart(
            &terms,
            &BarChartOptions {
                title: "Most frequent terms".into(),
                ..BarChartOptions::default()
            },
        )?;
        written.push(self.figure("terms_bar.svg", svg)?);

        let types: Vec<(String, f64)> = stats
            .type_shares
            .iter()
            .map(|t| (t.doc_type.display_name().to_string(), t.share))
            .collect();
        let svg = render_bar_chart(
            &types,
            &BarChartOptions {
                title: "Publication type".into(),
                value_format: ValueFormat::Percent,
                plot_width: 400.0,
                ..BarChartOptions::default()
            },
        )?;
        written.push(self.figure("types_bar.svg", svg)?);

        let svg = render_trend_chart(
            &stats.trend.series,
            &stats.trend.fit,
            cfg.forecast_horizon,
            &TrendChartOptions {
                title: "Publications per year".into(),
                ..TrendChartOptions::default()
            },
        )?;
        written.push(self.figure("trend.svg", svg)?);

        let svg = render_ca_map(
            &model,
            &years,
            &CaMapOptions {
                title: "Terms and years on the first two dimensions".into(),
                ..CaMapOptions::default()
            },
        )?;
        written.push(self.figure("ca_map.svg", svg)?);

        let canvas = Canvas {
            width: cfg.cloud_width,
            height: cfg.cloud_height,
        };
        let weights: Vec<(String, f64)> = vocab
            .entries()
            .take(cfg.cloud_terms)
            .map(|(t, f, _)| (t.to_string(), f as f64))
            .collect();
        let layout = layout_word_cloud(&weights, canvas, cfg.seed, &CloudOptions::default())?;
        if !layout.dropped.is_empty() {
            log::warn!("word cloud: no room for {}", layout.dropped.join(", "));
        }
        let mut buf = Vec::new();
        layout.write_tsv(&mut buf).map_err(|e| Error::io("formatting cloud layout", e))?;
        self.emit("wordcloud_layout.tsv", buf)?;
        written.push(self.figure("wordcloud.svg", render_word_cloud(&layout))?);

        for p in &reports.periods {
            let weights: Vec<(String, f64)> = p.characteristic_terms.iter().filter(|(_, s)| *s > 0.0).cloned().collect();
            if weights.is_empty() {
                log::warn!("period `{}` has no over-represented terms; no cloud drawn", p.name);
                continue;
            }
            let layout = layout_word_cloud(&weights, canvas, cfg.seed, &CloudOptions::default())?;
            written.push(self.figure(&format!("cloud_{}.svg", slug(&p.name)), render_word_cloud(&layout))?);
        }
        Ok(serde_json::json!({ "figures": written, "cloud_dropped": layout.dropped }))
    }

    fn figure(&mut self, name: &str, svg: Vec<u8>) -> Result<String> {
        self.emit(name, svg)?;
        Ok(name.to_string())
    }
}

/// Sums the analysed matrix rows by publication year, ascending. Years whose
/// profile is all zero are skipped.
fn year_profiles(input: &CaInput, corpus: &Corpus) -> Result<Vec<(i32, Vec<f64>)>> {
    let index = corpus.id_index();
    let n_cols = input.col_labels().len();
    let mut by_year: BTreeMap<i32, Vec<f64>> = BTreeMap::new();
    for (i, id) in input.row_labels().iter().enumerate() {
        let k = *index
            .get(id.as_str())
            .ok_or_else(|| Error::Consistency(format!("matrix row `{id}` has no document in the corpus")))?;
        let profile = by_year.entry(corpus.documents()[k].year).or_insert_with(|| vec![0.0; n_cols]);
        for (j, v) in input.matrix().row(i) {
            profile[j] += v;
        }
    }
    Ok(by_year.into_iter().filter(|(_, p)| p.iter().sum::<f64>() > 0.0).collect())
}
