//! Bibliographic CSV ingestion and corpus cleaning.
//!
//! Exports are read as RFC 4180 CSV with a header row. A [`Schema`] maps the
//! logical record fields onto the export's column names; the defaults follow
//! the Scopus CSV export. Rows with an unusable year or citation count are
//! skipped and collected into a rejects report rather than aborting the parse.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::io::{Read, Write};
use std::ops::RangeInclusive;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Publication type of a record.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DocType {
    ConferencePaper,
    Article,
    Review,
    BookChapter,
    ConferenceReview,
    Book,
    Other,
}

impl DocType {
    pub const ALL: [DocType; 7] = [
        DocType::ConferencePaper,
        DocType::Article,
        DocType::Review,
        DocType::BookChapter,
        DocType::ConferenceReview,
        DocType::Book,
        DocType::Other,
    ];

    /// Kebab-case identifier used in configs and machine-readable output.
    pub fn slug(self) -> &'static str {
        match self {
            DocType::ConferencePaper => "conference-paper",
            DocType::Article => "article",
            DocType::Review => "review",
            DocType::BookChapter => "book-chapter",
            DocType::ConferenceReview => "conference-review",
            DocType::Book => "book",
            DocType::Other => "other",
        }
    }

    /// The label bibliographic exports use for this type.
    pub fn display_name(self) -> &'static str {
        match self {
            DocType::ConferencePaper => "Conference Paper",
            DocType::Article => "Article",
            DocType::Review => "Review",
            DocType::BookChapter => "Book Chapter",
            DocType::ConferenceReview => "Conference Review",
            DocType::Book => "Book",
            DocType::Other => "Other",
        }
    }
}

impl fmt::Display for DocType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.slug())
    }
}

impl FromStr for DocType {
    type Err = Error;

    /// Strict parse of a slug or display name. Use [`DocTypeAliases`] for
    /// lenient normalization of export cells.
    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_lowercase();
        DocType::ALL
            .into_iter()
            .find(|t| t.slug() == key || t.display_name().to_lowercase() == key)
            .ok_or_else(|| Error::Config(format!("unknown document type `{s}`")))
    }
}

/// Case-insensitive table mapping export labels onto [`DocType`].
///
/// Unknown labels normalize to [`DocType::Other`].
#[derive(Debug, Clone)]
pub struct DocTypeAliases {
    table: HashMap<String, DocType>,
}

impl Default for DocTypeAliases {
    fn default() -> Self {
        let mut table = HashMap::new();
        for t in DocType::ALL {
            table.insert(t.slug().to_string(), t);
            table.insert(t.display_name().to_lowercase(), t);
        }
        table.insert("chapter".into(), DocType::BookChapter);
        table.insert("proceedings paper".into(), DocType::ConferencePaper);
        table.insert("journal article".into(), DocType::Article);
        DocTypeAliases { table }
    }
}

impl DocTypeAliases {
    pub fn insert(&mut self, label: &str, doc_type: DocType) {
        self.table.insert(label.trim().to_lowercase(), doc_type);
    }

    pub fn normalize(&self, label: &str) -> DocType {
        self.table.get(&label.trim().to_lowercase()).copied().unwrap_or(DocType::Other)
    }
}

/// One bibliographic record.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub id: String,
    pub title: String,
    #[serde(rename = "abstract")]
    pub abstract_text: String,
    pub keywords: Vec<String>,
    pub year: i32,
    pub doc_type: DocType,
    pub citations: u64,
}

/// Counts behind a corpus: what was loaded and what each filter removed.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FilterReport {
    pub loaded: usize,
    pub excluded_non_research: usize,
    pub excluded_no_abstract: usize,
    pub retained: usize,
}

impl FilterReport {
    /// Builds a report from the loaded count and the two exclusion counts.
    ///
    /// Returns `None` when the exclusions exceed what was loaded.
    pub fn from_exclusions(loaded: usize, non_research: usize, no_abstract: usize) -> Option<Self> {
        let retained = loaded.checked_sub(non_research)?.checked_sub(no_abstract)?;
        Some(FilterReport {
            loaded,
            excluded_non_research: non_research,
            excluded_no_abstract: no_abstract,
            retained,
        })
    }

    pub fn is_consistent(&self) -> bool {
        self.loaded == self.excluded_non_research + self.excluded_no_abstract + self.retained
    }
}

/// An ordered, id-unique collection of documents with its filtering history.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Corpus {
    documents: Vec<Document>,
    provenance: FilterReport,
}

impl Corpus {
    /// Wraps freshly loaded documents. Fails on duplicate ids.
    pub fn new(documents: Vec<Document>) -> Result<Self> {
        let provenance = FilterReport {
            loaded: documents.len(),
            retained: documents.len(),
            ..FilterReport::default()
        };
        Self::with_provenance(documents, provenance)
    }

    /// Rebuilds a corpus whose filtering already happened elsewhere, e.g. one
    /// read back from the canonical CSV next to its saved report.
    pub fn with_provenance(documents: Vec<Document>, provenance: FilterReport) -> Result<Self> {
        let mut seen = HashSet::with_capacity(documents.len());
        for d in &documents {
            if !seen.insert(d.id.as_str()) {
                return Err(Error::Consistency(format!("duplicate document id `{}`", d.id)));
            }
        }
        if provenance.retained != documents.len() || !provenance.is_consistent() {
            return Err(Error::Consistency(format!(
                "filter report {provenance:?} does not match {} documents",
                documents.len()
            )));
        }
        Ok(Corpus { documents, provenance })
    }

    pub fn documents(&self) -> &[Document] {
        &self.documents
    }

    pub fn provenance(&self) -> FilterReport {
        self.provenance
    }

    pub fn len(&self) -> usize {
        self.documents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.documents.is_empty()
    }

    pub fn get(&self, id: &str) -> Option<&Document> {
        self.documents.iter().find(|d| d.id == id)
    }

    /// Map from document id to its position.
    pub fn id_index(&self) -> HashMap<&str, usize> {
        self.documents.iter().enumerate().map(|(i, d)| (d.id.as_str(), i)).collect()
    }
}

/// Column names for each logical field. `None` leaves an optional field
/// unmapped so it takes its default (generated id, no keywords, type
/// `other`, zero citations).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Schema {
    pub id: Option<String>,
    pub title: String,
    #[serde(rename = "abstract")]
    pub abstract_text: String,
    pub keywords: Option<String>,
    pub year: String,
    pub doc_type: Option<String>,
    pub citations: Option<String>,
}

impl Default for Schema {
    fn default() -> Self {
        Schema {
            id: Some("EID".into()),
            title: "Title".into(),
            abstract_text: "Abstract".into(),
            keywords: Some("Author Keywords".into()),
            year: "Year".into(),
            doc_type: Some("Document Type".into()),
            citations: Some("Cited by".into()),
        }
    }
}

impl Schema {
    /// Maps only the required title, abstract and year columns, under their
    /// default names. Documents get positional ids, type `other` and zero
    /// citations.
    pub fn minimal() -> Self {
        Schema {
            id: None,
            keywords: None,
            doc_type: None,
            citations: None,
            ..Schema::default()
        }
    }

    /// Mapped columns in canonical field order.
    fn columns(&self) -> Vec<(Field, &str)> {
        let mut out = Vec::with_capacity(7);
        if let Some(c) = &self.id {
            out.push((Field::Id, c.as_str()));
        }
        out.push((Field::Title, self.title.as_str()));
        out.push((Field::Abstract, self.abstract_text.as_str()));
        if let Some(c) = &self.keywords {
            out.push((Field::Keywords, c.as_str()));
        }
        out.push((Field::Year, self.year.as_str()));
        if let Some(c) = &self.doc_type {
            out.push((Field::DocType, c.as_str()));
        }
        if let Some(c) = &self.citations {
            out.push((Field::Citations, c.as_str()));
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Field {
    Id,
    Title,
    Abstract,
    Keywords,
    Year,
    DocType,
    Citations,
}

/// Parser settings beyond the column mapping.
#[derive(Debug, Clone)]
pub struct IngestOptions {
    pub schema: Schema,
    pub aliases: DocTypeAliases,
    pub year_window: RangeInclusive<i32>,
}

impl Default for IngestOptions {
    fn default() -> Self {
        IngestOptions {
            schema: Schema::default(),
            aliases: DocTypeAliases::default(),
            year_window: 1900..=2100,
        }
    }
}

/// A data row that was skipped, with its 1-based position among data rows.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Reject {
    pub row: usize,
    pub reason: String,
}

impl fmt::Display for Reject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "row {}: {}", self.row, self.reason)
    }
}

/// Result of a parse: the accepted documents and the skipped rows.
#[derive(Debug, Clone)]
pub struct Parsed {
    pub corpus: Corpus,
    pub rejects: Vec<Reject>,
}

/// Writes the rejects report, one line per skipped row.
pub fn write_rejects<W: Write>(rejects: &[Reject], mut out: W) -> std::io::Result<()> {
    for r in rejects {
        writeln!(out, "{r}")?;
    }
    Ok(())
}

/// Reads a bibliographic CSV export into a [`Corpus`].
pub fn parse_bibliographic_csv<R: Read>(mut source: R, options: &IngestOptions) -> Result<Parsed> {
    let mut bytes = Vec::new();
    source.read_to_end(&mut bytes).map_err(|e| Error::io("reading CSV source", e))?;
    let text = std::str::from_utf8(&bytes).map_err(|e| Error::Encoding { offset: e.valid_up_to() })?;
    let text = text.strip_prefix('\u{feff}').unwrap_or(text);
    if text.trim().is_empty() {
        return Err(Error::Schema("input has no header row".into()));
    }

    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(text.as_bytes());
    let headers = reader.headers().map_err(|e| Error::Csv(e.to_string()))?.clone();

    let mut positions = Vec::new();
    for (field, name) in options.schema.columns() {
        let pos = headers
            .iter()
            .position(|h| h.trim() == name)
            .ok_or_else(|| Error::Schema(format!("missing mapped column `{name}`")))?;
        positions.push((field, pos));
    }

    let mut documents = Vec::new();
    let mut rejects = Vec::new();
    let mut seen = HashSet::new();
    for (i, record) in reader.records().enumerate() {
        let row = i + 1;
        let record = match record {
            Ok(r) => r,
            Err(e) => {
                rejects.push(Reject {
                    row,
                    reason: format!("unreadable record: {e}"),
                });
                continue;
            }
        };
        if record.len() != headers.len() {
            rejects.push(Reject {
                row,
                reason: format!("expected {} fields, found {}", headers.len(), record.len()),
            });
            continue;
        }
        match build_document(&record, &positions, row, options) {
            Ok(doc) => {
                if !seen.insert(doc.id.clone()) {
                    rejects.push(Reject {
                        row,
                        reason: format!("duplicate id `{}`", doc.id),
                    });
                    continue;
                }
                documents.push(doc);
            }
            Err(reason) => rejects.push(Reject { row, reason }),
        }
    }

    Ok(Parsed {
        corpus: Corpus::new(documents)?,
        rejects,
    })
}

fn build_document(
    record: &csv::StringRecord,
    positions: &[(Field, usize)],
    row: usize,
    options: &IngestOptions,
) -> std::result::Result<Document, String> {
    let mut doc = Document {
        id: format!("row-{row}"),
        title: String::new(),
        abstract_text: String::new(),
        keywords: Vec::new(),
        year: 0,
        doc_type: DocType::Other,
        citations: 0,
    };
    for &(field, pos) in positions {
        let cell = &record[pos];
        match field {
            Field::Id => {
                let id = cell.trim();
                if id.is_empty() {
                    return Err("empty id".into());
                }
                doc.id = id.to_string();
            }
            Field::Title => doc.title = cell.to_string(),
            Field::Abstract => doc.abstract_text = cell.to_string(),
            Field::Keywords => doc.keywords = split_keywords(cell),
            Field::Year => {
                let year: i32 = cell.trim().parse().map_err(|_| format!("malformed year `{cell}`"))?;
                if !options.year_window.contains(&year) {
                    return Err(format!(
                        "year {year} outside {}..={}",
                        options.year_window.start(),
                        options.year_window.end()
                    ));
                }
                doc.year = year;
            }
            Field::DocType => doc.doc_type = options.aliases.normalize(cell),
            Field::Citations => {
                let c = cell.trim();
                // exports leave the cell blank for uncited records
                doc.citations = if c.is_empty() {
                    0
                } else {
                    c.parse().map_err(|_| format!("malformed citation count `{cell}`"))?
                };
            }
        }
    }
    Ok(doc)
}

fn split_keywords(cell: &str) -> Vec<String> {
    cell.split(';').map(str::trim).filter(|k| !k.is_empty()).map(String::from).collect()
}

/// Writes documents back out in the canonical CSV form: mapped fields in
/// schema order, `\n` line endings, quoting only where needed.
pub fn write_canonical_csv<W: Write>(documents: &[Document], schema: &Schema, out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .quote_style(csv::QuoteStyle::Necessary)
        .from_writer(out);
    let columns = schema.columns();
    let csv_err = |e: csv::Error| Error::Csv(e.to_string());
    w.write_record(columns.iter().map(|(_, name)| *name)).map_err(csv_err)?;
    for d in documents {
        let row: Vec<String> = columns
            .iter()
            .map(|(field, _)| match field {
                Field::Id => d.id.clone(),
                Field::Title => d.title.clone(),
                Field::Abstract => d.abstract_text.clone(),
                Field::Keywords => d.keywords.join("; "),
                Field::Year => d.year.to_string(),
                Field::DocType => d.doc_type.display_name().to_string(),
                Field::Citations => d.citations.to_string(),
            })
            .collect();
        w.write_record(&row).map_err(csv_err)?;
    }
    w.flush().map_err(|e| Error::io("writing canonical CSV", e))?;
    Ok(())
}

/// Drops documents of an excluded type, then documents with a blank
/// abstract. The type filter runs first, so a blank-abstract editorial is
/// counted as non-research. Survivors keep their order.
pub fn filter_corpus(corpus: &Corpus, excluded_types: &BTreeSet<DocType>) -> Corpus {
    let mut report = corpus.provenance;
    let typed: Vec<&Document> = corpus.documents.iter().filter(|d| !excluded_types.contains(&d.doc_type)).collect();
    report.excluded_non_research += corpus.len() - typed.len();
    let kept: Vec<Document> = typed
        .iter()
        .filter(|d| !d.abstract_text.trim().is_empty())
        .map(|d| (*d).clone())
        .collect();
    report.excluded_no_abstract += typed.len() - kept.len();
    report.retained = kept.len();
    Corpus {
        documents: kept,
        provenance: report,
    }
}

/// The default exclusion set: records that are not research documents.
pub fn default_excluded_types() -> BTreeSet<DocType> {
    BTreeSet::from([DocType::Other])
}
