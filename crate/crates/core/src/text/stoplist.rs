use std::collections::{BTreeSet, HashMap};
use std::path::Path;

use crate::error::{Error, Result};

use super::TokenStream;

const ENGLISH: &str = include_str!("../stopwords_en.txt");

/// A set of normalized terms to drop before counting.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Stoplist {
    terms: BTreeSet<String>,
}

impl Stoplist {
    pub fn empty() -> Self {
        Self::default()
    }

    /// The bundled English list of articles, prepositions, pronouns and
    /// auxiliaries.
    pub fn english() -> Self {
        Self::parse(ENGLISH)
    }

    /// Parses the stoplist file format: one term per line, `#` starts a
    /// comment, blank lines ignored. Terms are trimmed and lowercased.
    pub fn parse(text: &str) -> Self {
        let terms = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .filter(|l| !l.is_empty())
            .map(str::to_lowercase)
            .collect();
        Stoplist { terms }
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(format!("reading stoplist {}", path.display()), e))?;
        Ok(Self::parse(&text))
    }

    pub fn extend(&mut self, other: &Stoplist) {
        self.terms.extend(other.terms.iter().cloned());
    }

    pub fn insert(&mut self, term: impl Into<String>) {
        self.terms.insert(term.into());
    }

    pub fn contains(&self, term: &str) -> bool {
        self.terms.contains(term)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = &str> {
        self.terms.iter().map(String::as_str)
    }

    /// Terms occurring in more than `fraction` of the documents, for
    /// corpus-specific extension of a standard list.
    pub fn frequent_terms(streams: &[TokenStream], fraction: f64) -> Self {
        let mut df: HashMap<&str, usize> = HashMap::new();
        for s in streams {
            let distinct: BTreeSet<&str> = s.tokens.iter().map(String::as_str).collect();
            for t in distinct {
                *df.entry(t).or_default() += 1;
            }
        }
        let n = streams.len() as f64;
        let terms = df
            .into_iter()
            .filter(|&(_, c)| c as f64 > fraction * n)
            .map(|(t, _)| t.to_string())
            .collect();
        Stoplist { terms }
    }
}

/// Removes every stoplisted token, keeping the order of the rest.
pub fn remove_stopwords(stream: &TokenStream, stoplist: &Stoplist) -> TokenStream {
    TokenStream {
        doc_id: stream.doc_id.clone(),
        tokens: stream.tokens.iter().filter(|t| !stoplist.contains(t)).cloned().collect(),
    }
}
