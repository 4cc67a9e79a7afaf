use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Splits text into lowercase letter runs.
///
/// Any character that is not a Unicode letter is a separator, so digits and
/// punctuation never survive. Runs shorter than `min_len` characters are
/// dropped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Tokenizer {
    pub min_len: usize,
}

impl Default for Tokenizer {
    fn default() -> Self {
        Tokenizer { min_len: 2 }
    }
}

impl Tokenizer {
    pub fn new(min_len: usize) -> Self {
        Tokenizer { min_len }
    }

    pub fn tokenize(&self, text: &str) -> Vec<String> {
        let lower = text.to_lowercase();
        lower
            .split(|c: char| !c.is_alphabetic())
            .filter(|t| !t.is_empty() && t.chars().count() >= self.min_len)
            .map(String::from)
            .collect()
    }

    pub fn stream(&self, doc_id: impl Into<String>, text: &str) -> TokenStream {
        TokenStream {
            doc_id: doc_id.into(),
            tokens: self.tokenize(text),
        }
    }
}

/// [`Tokenizer::tokenize`] with the default minimum length of 2.
pub fn tokenize(text: &str) -> Vec<String> {
    Tokenizer::default().tokenize(text)
}

/// The normalized tokens of one document, in text order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenStream {
    pub doc_id: String,
    pub tokens: Vec<String>,
}

/// Per-document vocabulary richness.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UniquenessStats {
    /// Mean token count per document.
    pub mean_tokens: f64,
    /// Mean count of distinct terms per document.
    pub mean_unique: f64,
    /// Mean of per-document `unique / total`, over documents with tokens.
    pub unique_ratio: f64,
    /// `mean_unique / mean_tokens`.
    pub ratio_of_means: f64,
}

pub fn uniqueness_stats(streams: &[TokenStream]) -> Result<UniquenessStats> {
    let nonempty: Vec<&TokenStream> = streams.iter().filter(|s| !s.tokens.is_empty()).collect();
    if nonempty.is_empty() {
        return Err(Error::UndefinedStatistic(
            "uniqueness needs at least one non-empty token stream".into(),
        ));
    }
    let n = streams.len() as f64;
    let mut total = 0usize;
    let mut unique = 0usize;
    let mut ratio_sum = 0.0;
    for s in streams {
        let distinct = s.tokens.iter().collect::<HashSet<_>>().len();
        total += s.tokens.len();
        unique += distinct;
        if !s.tokens.is_empty() {
            ratio_sum += distinct as f64 / s.tokens.len() as f64;
        }
    }
    let mean_tokens = total as f64 / n;
    let mean_unique = unique as f64 / n;
    Ok(UniquenessStats {
        mean_tokens,
        mean_unique,
        unique_ratio: ratio_sum / nonempty.len() as f64,
        ratio_of_means: mean_unique / mean_tokens,
    })
}
