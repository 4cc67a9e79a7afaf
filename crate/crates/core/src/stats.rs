//! Descriptive tables: ranked term frequencies, publications per year and
//! publication-type shares.

use std::collections::BTreeMap;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::corpus::{Corpus, DocType};
use crate::error::{Error, Result};
use crate::text::Vocabulary;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermRow {
    pub term: String,
    pub frequency: u64,
    /// This term's share of all vocabulary occurrences.
    pub share: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermTable {
    pub rows: Vec<TermRow>,
    /// Combined share of the listed terms.
    pub share_of_total: f64,
    /// Set when fewer terms exist than were requested.
    pub truncated: bool,
}

impl TermTable {
    pub fn write_tsv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "rank\tterm\tfrequency\tshare")?;
        for (i, r) in self.rows.iter().enumerate() {
            writeln!(out, "{}\t{}\t{}\t{}", i + 1, r.term, r.frequency, r.share)?;
        }
        Ok(())
    }
}

/// The `top_k` most frequent terms. Vocabulary order already ranks by
/// frequency with lexicographic ties.
pub fn term_frequency_table(vocab: &Vocabulary, top_k: usize) -> Result<TermTable> {
    if top_k == 0 {
        return Err(Error::Argument("top_k must be at least 1".into()));
    }
    let total: u64 = vocab.entries().map(|(_, f, _)| f).sum();
    let k = top_k.min(vocab.len());
    let rows: Vec<TermRow> = vocab
        .entries()
        .take(k)
        .map(|(t, f, _)| TermRow {
            term: t.to_string(),
            frequency: f,
            share: f as f64 / total as f64,
        })
        .collect();
    let selected: u64 = rows.iter().map(|r| r.frequency).sum();
    Ok(TermTable {
        rows,
        share_of_total: selected as f64 / total as f64,
        truncated: top_k > vocab.len(),
    })
}

/// Publication counts for every year from the first to the last observed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct YearlyCounts {
    pub first_year: i32,
    pub counts: Vec<u64>,
}

impl YearlyCounts {
    pub fn last_year(&self) -> i32 {
        self.first_year + self.counts.len() as i32 - 1
    }

    pub fn years(&self) -> impl Iterator<Item = (i32, u64)> + '_ {
        self.counts.iter().enumerate().map(|(i, &c)| (self.first_year + i as i32, c))
    }

    /// Drops the years after `last_year`, e.g. an incomplete final year.
    pub fn truncated_to(&self, last_year: i32) -> YearlyCounts {
        let keep = (last_year - self.first_year + 1).clamp(0, self.counts.len() as i32) as usize;
        YearlyCounts {
            first_year: self.first_year,
            counts: self.counts[..keep].to_vec(),
        }
    }

    pub fn write_tsv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "year\tcount")?;
        for (y, c) in self.years() {
            writeln!(out, "{y}\t{c}")?;
        }
        Ok(())
    }
}

pub fn publications_per_year(corpus: &Corpus) -> Result<YearlyCounts> {
    let docs = corpus.documents();
    let first = docs.iter().map(|d| d.year).min().ok_or(Error::EmptyCorpus)?;
    let last = docs.iter().map(|d| d.year).max().ok_or(Error::EmptyCorpus)?;
    let mut counts = vec![0u64; (last - first + 1) as usize];
    for d in docs {
        counts[(d.year - first) as usize] += 1;
    }
    Ok(YearlyCounts { first_year: first, counts })
}

/// Proportion of documents per publication type, largest first.
pub fn publication_type_shares(corpus: &Corpus) -> Result<Vec<(DocType, f64)>> {
    if corpus.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let mut counts: BTreeMap<DocType, usize> = BTreeMap::new();
    for d in corpus.documents() {
        *counts.entry(d.doc_type).or_default() += 1;
    }
    let n = corpus.len() as f64;
    let mut shares: Vec<(DocType, usize)> = counts.into_iter().collect();
    shares.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.slug().cmp(b.0.slug())));
    Ok(shares.into_iter().map(|(t, c)| (t, c as f64 / n)).collect())
}

pub fn write_type_shares_tsv<W: Write>(shares: &[(DocType, f64)], mut out: W) -> std::io::Result<()> {
    writeln!(out, "doc_type\tshare")?;
    for (t, s) in shares {
        writeln!(out, "{t}\t{s}")?;
    }
    Ok(())
}
