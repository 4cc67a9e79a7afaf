//! From abstracts to a weighted document-term matrix.
//!
//! The stages run in order: [`Tokenizer`] splits and normalizes text,
//! [`remove_stopwords`] drops function words, [`build_vocabulary`] keeps the
//! terms frequent enough to analyse, [`build_dtm`] counts them per document,
//! and [`weight_matrix`] optionally reweights the counts.

mod dtm;
mod stoplist;
mod tokenize;
mod vocab;
mod weighting;

pub use dtm::{build_dtm, DocTermMatrix};
pub use stoplist::{remove_stopwords, Stoplist};
pub use tokenize::{tokenize, uniqueness_stats, TokenStream, Tokenizer, UniquenessStats};
pub use vocab::{build_vocabulary, Vocabulary};
pub use weighting::{weight_matrix, WeightedMatrix, WeightingScheme};
