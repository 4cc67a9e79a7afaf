use std::collections::{HashMap, HashSet};
use std::io::{BufRead, Write};

use crate::error::{Error, Result};

use super::TokenStream;

/// The analysed terms, ranked by descending corpus frequency with ties in
/// lexicographic order. Position in [`Vocabulary::terms`] is the column index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vocabulary {
    terms: Vec<String>,
    total_frequency: Vec<u64>,
    doc_frequency: Vec<u64>,
    index: HashMap<String, usize>,
}

impl Vocabulary {
    /// Builds a vocabulary from `(term, total_frequency, doc_frequency)`
    /// triples, ranking them. Fails on repeated terms.
    pub fn from_counts(entries: Vec<(String, u64, u64)>) -> Result<Self> {
        let mut entries = entries;
        entries.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        let mut index = HashMap::with_capacity(entries.len());
        for (i, (t, _, _)) in entries.iter().enumerate() {
            if index.insert(t.clone(), i).is_some() {
                return Err(Error::Consistency(format!("term `{t}` listed twice")));
            }
        }
        let (terms, rest): (Vec<_>, Vec<_>) = entries.into_iter().map(|(t, f, d)| (t, (f, d))).unzip();
        let (total_frequency, doc_frequency) = rest.into_iter().unzip();
        Ok(Vocabulary {
            terms,
            total_frequency,
            doc_frequency,
            index,
        })
    }

    pub fn terms(&self) -> &[String] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn index_of(&self, term: &str) -> Option<usize> {
        self.index.get(term).copied()
    }

    pub fn total_frequency(&self, i: usize) -> u64 {
        self.total_frequency[i]
    }

    pub fn doc_frequency(&self, i: usize) -> u64 {
        self.doc_frequency[i]
    }

    /// `(term, total_frequency, doc_frequency)` in rank order.
    pub fn entries(&self) -> impl Iterator<Item = (&str, u64, u64)> + '_ {
        self.terms
            .iter()
            .zip(&self.total_frequency)
            .zip(&self.doc_frequency)
            .map(|((t, &f), &d)| (t.as_str(), f, d))
    }

    /// TSV export: header then `term, total_frequency, doc_frequency` rows.
    pub fn write_tsv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "term\ttotal_frequency\tdoc_frequency")?;
        for (t, f, d) in self.entries() {
            writeln!(out, "{t}\t{f}\t{d}")?;
        }
        Ok(())
    }

    pub fn read_tsv<R: BufRead>(input: R) -> Result<Self> {
        let mut entries = Vec::new();
        for (n, line) in input.lines().enumerate() {
            let line = line.map_err(|e| Error::io("reading vocabulary", e))?;
            if n == 0 || line.is_empty() {
                continue;
            }
            let bad = || Error::Consistency(format!("vocabulary line {}: `{line}`", n + 1));
            let mut parts = line.split('\t');
            let (Some(t), Some(f), Some(d), None) = (parts.next(), parts.next(), parts.next(), parts.next()) else {
                return Err(bad());
            };
            entries.push((t.to_string(), f.parse().map_err(|_| bad())?, d.parse().map_err(|_| bad())?));
        }
        Self::from_counts(entries)
    }
}

/// Keeps the terms whose corpus-wide count reaches `min_total_frequency`.
pub fn build_vocabulary(streams: &[TokenStream], min_total_frequency: u64) -> Result<Vocabulary> {
    if min_total_frequency == 0 {
        return Err(Error::Argument("min_total_frequency must be at least 1".into()));
    }
    let mut counts: HashMap<&str, (u64, u64)> = HashMap::new();
    for s in streams {
        let mut seen = HashSet::new();
        for t in &s.tokens {
            let e = counts.entry(t.as_str()).or_default();
            e.0 += 1;
            if seen.insert(t.as_str()) {
                e.1 += 1;
            }
        }
    }
    let entries: Vec<_> = counts
        .into_iter()
        .filter(|&(_, (f, _))| f >= min_total_frequency)
        .map(|(t, (f, d))| (t.to_string(), f, d))
        .collect();
    if entries.is_empty() {
        return Err(Error::EmptyVocabulary {
            threshold: min_total_frequency,
        });
    }
    Vocabulary::from_counts(entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ts(tokens: &[&str]) -> TokenStream {
        TokenStream {
            doc_id: "d".into(),
            tokens: tokens.iter().map(|s| s.to_string()).collect(),
        }
    }

    #[test]
    fn threshold_and_ordering() {
        let streams = [ts(&["a", "a", "b"]), ts(&["b", "c"])];
        let v = build_vocabulary(&streams, 2).unwrap();
        assert_eq!(v.terms(), ["a", "b"]);
        assert_eq!((v.total_frequency(0), v.doc_frequency(0)), (2, 1));
        assert_eq!((v.total_frequency(1), v.doc_frequency(1)), (2, 2));
        assert_eq!(v.index_of("b"), Some(1));
        assert_eq!(v.index_of("c"), None);

        let all = build_vocabulary(&streams, 1).unwrap();
        assert_eq!(all.terms(), ["a", "b", "c"]);
    }

    #[test]
    fn empty_vocabulary_names_threshold() {
        let err = build_vocabulary(&[ts(&["a"])], 3).unwrap_err();
        assert!(err.to_string().contains('3'));
    }

    #[test]
    fn tsv_round_trip() {
        let v = build_vocabulary(&[ts(&["x", "y", "y", "z"])], 1).unwrap();
        let mut buf = Vec::new();
        v.write_tsv(&mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf.clone()).unwrap(),
            "term\ttotal_frequency\tdoc_frequency\ny\t2\t1\nx\t1\t1\nz\t1\t1\n"
        );
        assert_eq!(Vocabulary::read_tsv(&buf[..]).unwrap(), v);
    }

    proptest! {
        #[test]
        fn raising_threshold_never_adds_terms(
            docs in proptest::collection::vec(proptest::collection::vec("[a-e]{2}", 0..12), 1..6),
            lo in 1u64..4, step in 0u64..4,
        ) {
            let streams: Vec<TokenStream> = docs.into_iter()
                .map(|tokens| TokenStream { doc_id: "d".into(), tokens })
                .collect();
            if let Ok(high) = build_vocabulary(&streams, lo + step) {
                let low = build_vocabulary(&streams, lo).unwrap();
                for t in high.terms() {
                    prop_assert!(low.index_of(t).is_some());
                }
            }
        }
    }
}
