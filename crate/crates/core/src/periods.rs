//! Period segmentation of the timeline.
//!
//! Documents are assigned to named year ranges. Each period is described by
//! its characteristic terms, scored with standardized residuals of the
//! period × term contingency table, and by its most-cited documents.

use std::collections::HashMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::corpus::{Corpus, Document};
use crate::error::{Error, Result};
use crate::text::DocTermMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Period {
    pub name: String,
    pub first_year: i32,
    pub last_year: i32,
}

/// Ordered, non-overlapping year ranges. Gaps between ranges are allowed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodSpec {
    periods: Vec<Period>,
}

impl Default for PeriodSpec {
    /// Emergence 2009–2012, growth 2013–2018, boom 2019–2022.
    fn default() -> Self {
        PeriodSpec::new(vec![
            period("Surgimiento", 2009, 2012),
            period("Crecimiento", 2013, 2018),
            period("Auge", 2019, 2022),
        ])
        .expect("default periods are valid")
    }
}

fn period(name: &str, first_year: i32, last_year: i32) -> Period {
    Period {
        name: name.into(),
        first_year,
        last_year,
    }
}

impl PeriodSpec {
    pub fn new(periods: Vec<Period>) -> Result<Self> {
        for p in &periods {
            if p.name.trim().is_empty() {
                return Err(Error::Config("period names must be non-empty".into()));
            }
            if p.first_year > p.last_year {
                return Err(Error::Config(format!("period `{}` ends before it starts", p.name)));
            }
        }
        for w in periods.windows(2) {
            if w[1].first_year <= w[0].last_year {
                return Err(Error::Config(format!(
                    "periods `{}` and `{}` overlap or are out of order",
                    w[0].name, w[1].name
                )));
            }
        }
        let mut names: Vec<&str> = periods.iter().map(|p| p.name.as_str()).collect();
        names.sort_unstable();
        if names.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Config("period names must be unique".into()));
        }
        Ok(PeriodSpec { periods })
    }

    /// Parses `Name:2009-2012, Other:2013-2018`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut periods = Vec::new();
        for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let bad = || Error::Config(format!("bad period `{item}`; expected Name:FIRST-LAST"));
            let (name, range) = item.rsplit_once(':').ok_or_else(bad)?;
            let (a, b) = range.split_once('-').ok_or_else(bad)?;
            periods.push(Period {
                name: name.trim().to_string(),
                first_year: a.trim().parse().map_err(|_| bad())?,
                last_year: b.trim().parse().map_err(|_| bad())?,
            });
        }
        Self::new(periods)
    }

    pub fn periods(&self) -> &[Period] {
        &self.periods
    }

    pub fn period_of(&self, year: i32) -> Option<usize> {
        self.periods.iter().position(|p| (p.first_year..=p.last_year).contains(&year))
    }

    fn index_of(&self, name: &str) -> Result<usize> {
        self.periods
            .iter()
            .position(|p| p.name == name)
            .ok_or_else(|| Error::Lookup(name.to_string()))
    }
}

impl std::fmt::Display for PeriodSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self
            .periods
            .iter()
            .map(|p| format!("{}:{}-{}", p.name, p.first_year, p.last_year))
            .collect();
        f.write_str(&parts.join(", "))
    }
}

/// Period membership of each document, by document id.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodAssignment {
    spec: PeriodSpec,
    by_doc: HashMap<String, Option<usize>>,
}

impl PeriodAssignment {
    pub fn spec(&self) -> &PeriodSpec {
        &self.spec
    }

    /// Name of the period holding `doc_id`; `None` for unassigned or unknown ids.
    pub fn period_of(&self, doc_id: &str) -> Option<&str> {
        self.by_doc
            .get(doc_id)
            .copied()
            .flatten()
            .map(|i| self.spec.periods[i].name.as_str())
    }

    fn index_of_doc(&self, doc_id: &str) -> Option<Option<usize>> {
        self.by_doc.get(doc_id).copied()
    }

    pub fn count(&self, period: &str) -> Result<usize> {
        let p = self.spec.index_of(period)?;
        Ok(self.by_doc.values().filter(|v| **v == Some(p)).count())
    }

    pub fn unassigned(&self) -> usize {
        self.by_doc.values().filter(|v| v.is_none()).count()
    }
}

pub fn assign_periods(corpus: &Corpus, spec: &PeriodSpec) -> PeriodAssignment {
    PeriodAssignment {
        spec: spec.clone(),
        by_doc: corpus.documents().iter().map(|d| (d.id.clone(), spec.period_of(d.year))).collect(),
    }
}

/// Terms over-represented in `period`, scored by the standardized residual
/// `(observed - expected) / √expected` of the period × term table, top `k`
/// by descending score with ties in term order.
///
/// The table has one row per period plus one for unassigned documents, so
/// expected counts compare each period against the whole matrix.
pub fn characteristic_terms(dtm: &DocTermMatrix, assignment: &PeriodAssignment, period: &str, k: usize) -> Result<Vec<(String, f64)>> {
    let mut scores = residual_scores(dtm, assignment, period)?;
    scores.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    scores.truncate(k);
    Ok(scores)
}

/// Standardized residual of every term for `period`, in matrix column order.
pub fn residual_scores(dtm: &DocTermMatrix, assignment: &PeriodAssignment, period: &str) -> Result<Vec<(String, f64)>> {
    let p = assignment.spec.index_of(period)?;
    let mut observed = vec![0u64; dtm.n_cols()];
    let mut row_total = 0u64;
    for (i, id) in dtm.rows().iter().enumerate() {
        let membership = assignment
            .index_of_doc(id)
            .ok_or_else(|| Error::Consistency(format!("matrix row `{id}` has no period assignment")))?;
        if membership == Some(p) {
            for (j, v) in dtm.counts().row(i) {
                observed[j] += v;
                row_total += v;
            }
        }
    }
    if row_total == 0 {
        return Err(Error::EmptyPeriod(period.to_string()));
    }
    let n = dtm.grand_total() as f64;
    Ok(dtm
        .cols()
        .iter()
        .zip(dtm.col_margins())
        .zip(observed)
        .map(|((term, &col), obs)| {
            let expected = row_total as f64 * col as f64 / n;
            (term.clone(), (obs as f64 - expected) / expected.sqrt())
        })
        .collect())
}

/// The `k` most-cited documents of `period`; ties go to the earlier year,
/// then to the lexicographically smaller title.
pub fn pioneer_documents<'a>(corpus: &'a Corpus, assignment: &PeriodAssignment, period: &str, k: usize) -> Result<Vec<&'a Document>> {
    let p = assignment.spec.index_of(period)?;
    let mut docs: Vec<&Document> = corpus
        .documents()
        .iter()
        .filter(|d| assignment.index_of_doc(&d.id) == Some(Some(p)))
        .collect();
    if docs.is_empty() {
        return Err(Error::EmptyPeriod(period.to_string()));
    }
    docs.sort_by(|a, b| {
        b.citations
            .cmp(&a.citations)
            .then(a.year.cmp(&b.year))
            .then_with(|| a.title.cmp(&b.title))
    });
    docs.truncate(k);
    Ok(docs)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PioneerDoc {
    pub id: String,
    pub title: String,
    pub year: i32,
    pub citations: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeriodReport {
    pub name: String,
    pub first_year: i32,
    pub last_year: i32,
    pub doc_count: usize,
    pub share_of_corpus: f64,
    pub characteristic_terms: Vec<(String, f64)>,
    pub pioneer_docs: Vec<PioneerDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeriodReports {
    pub periods: Vec<PeriodReport>,
    pub unassigned_count: usize,
    pub unassigned_share: f64,
}

pub fn period_report(corpus: &Corpus, dtm: &DocTermMatrix, spec: &PeriodSpec, k_terms: usize, k_docs: usize) -> Result<PeriodReports> {
    if corpus.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let assignment = assign_periods(corpus, spec);
    let n = corpus.len() as f64;
    let mut periods = Vec::with_capacity(spec.periods.len());
    for p in &spec.periods {
        let doc_count = assignment.count(&p.name)?;
        periods.push(PeriodReport {
            name: p.name.clone(),
            first_year: p.first_year,
            last_year: p.last_year,
            doc_count,
            share_of_corpus: doc_count as f64 / n,
            characteristic_terms: characteristic_terms(dtm, &assignment, &p.name, k_terms)?,
            pioneer_docs: pioneer_documents(corpus, &assignment, &p.name, k_docs)?
                .into_iter()
                .map(|d| PioneerDoc {
                    id: d.id.clone(),
                    title: d.title.clone(),
                    year: d.year,
                    citations: d.citations,
                })
                .collect(),
        });
    }
    let unassigned_count = assignment.unassigned();
    Ok(PeriodReports {
        periods,
        unassigned_count,
        unassigned_share: unassigned_count as f64 / n,
    })
}

/// Thousands-separated integer, e.g. `12,787`.
pub fn group_thousands(value: i64) -> String {
    let digits = value.unsigned_abs().to_string();
    let mut out = String::new();
    for (i, ch) in digits.chars().enumerate() {
        if i > 0 && (digits.len() - i).is_multiple_of(3) {
            out.push(',');
        }
        out.push(ch);
    }
    if value < 0 {
        out.insert(0, '-');
    }
    out
}

impl PeriodReports {
    /// Human-readable markdown narrative of the reports.
    pub fn to_markdown(&self) -> String {
        let mut s = String::from("# Periods\n");
        for p in &self.periods {
            let _ = write!(
                s,
                "\n## {} ({}–{})\n\n{} documents, {:.1}% of the corpus.\n\n| term | score |\n|---|---:|\n",
                p.name,
                p.first_year,
                p.last_year,
                group_thousands(p.doc_count as i64),
                100.0 * p.share_of_corpus
            );
            for (t, score) in &p.characteristic_terms {
                let _ = writeln!(s, "| {t} | {score:.3} |");
            }
            s.push_str("\n| most cited | year | citations |\n|---|---:|---:|\n");
            for d in &p.pioneer_docs {
                let _ = writeln!(
                    s,
                    "| {} | {} | {} |",
                    d.title.replace('|', "\\|"),
                    d.year,
                    group_thousands(d.citations as i64)
                );
            }
        }
        if self.unassigned_count > 0 {
            let _ = write!(
                s,
                "\n{} documents fall outside every period.\n",
                group_thousands(self.unassigned_count as i64)
            );
        }
        s
    }
}
