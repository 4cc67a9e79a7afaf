use std::collections::{BTreeMap, HashMap};
use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::sparse::CsrMatrix;

use super::{TokenStream, Vocabulary};

/// Sparse document-term counts with their marginals.
///
/// Rows are documents, columns are terms. Documents without any
/// in-vocabulary token and terms that never occur are pruned, so every row
/// and every column has a positive margin.
#[derive(Debug, Clone, PartialEq)]
pub struct DocTermMatrix {
    rows: Vec<String>,
    cols: Vec<String>,
    counts: CsrMatrix<u64>,
    row_margins: Vec<u64>,
    col_margins: Vec<u64>,
    col_doc_frequency: Vec<u64>,
    grand_total: u64,
    pruned_rows: Vec<String>,
    pruned_cols: Vec<String>,
}

impl DocTermMatrix {
    /// Assembles a matrix from per-document `(column, count)` lists, pruning
    /// empty rows and columns.
    fn assemble(rows: Vec<String>, cols: Vec<String>, entries: Vec<Vec<(usize, u64)>>) -> Result<Self> {
        let raw = CsrMatrix::from_rows(cols.len(), entries);
        let mut row_margins = Vec::new();
        let mut keep_rows = Vec::new();
        let mut pruned_rows = Vec::new();
        for (i, id) in rows.into_iter().enumerate() {
            let m: u64 = raw.row(i).map(|(_, v)| v).sum();
            if m == 0 {
                pruned_rows.push(id);
            } else {
                keep_rows.push((i, id));
                row_margins.push(m);
            }
        }
        if keep_rows.is_empty() {
            return Err(Error::EmptyMatrix);
        }
        let mut col_margins = vec![0u64; cols.len()];
        let mut col_df = vec![0u64; cols.len()];
        for &(i, _) in &keep_rows {
            for (j, v) in raw.row(i) {
                col_margins[j] += v;
                col_df[j] += 1;
            }
        }
        let mut remap = vec![usize::MAX; cols.len()];
        let mut kept_cols = Vec::new();
        let mut pruned_cols = Vec::new();
        for (j, term) in cols.into_iter().enumerate() {
            if col_margins[j] > 0 {
                remap[j] = kept_cols.len();
                kept_cols.push(term);
            } else {
                pruned_cols.push(term);
            }
        }
        let counts = CsrMatrix::from_rows(
            kept_cols.len(),
            keep_rows
                .iter()
                .map(|&(i, _)| raw.row(i).map(|(j, v)| (remap[j], v)).collect())
                .collect(),
        );
        let col_margins: Vec<u64> = col_margins.into_iter().filter(|&m| m > 0).collect();
        let col_doc_frequency = col_df.into_iter().filter(|&d| d > 0).collect();
        Ok(DocTermMatrix {
            rows: keep_rows.into_iter().map(|(_, id)| id).collect(),
            cols: kept_cols,
            counts,
            grand_total: row_margins.iter().sum(),
            row_margins,
            col_margins,
            col_doc_frequency,
            pruned_rows,
            pruned_cols,
        })
    }

    /// Rebuilds a matrix from `(doc_id, term, count)` triplets. Row order is
    /// first appearance; column order follows `terms`.
    pub fn from_triplets<'a>(terms: &[String], triplets: impl IntoIterator<Item = (&'a str, &'a str, u64)>) -> Result<Self> {
        let col_index: HashMap<&str, usize> = terms.iter().enumerate().map(|(j, t)| (t.as_str(), j)).collect();
        let mut rows: Vec<String> = Vec::new();
        let mut row_of: HashMap<&str, usize> = HashMap::new();
        let mut entries: Vec<BTreeMap<usize, u64>> = Vec::new();
        for (doc, term, count) in triplets {
            let j = *col_index
                .get(term)
                .ok_or_else(|| Error::Consistency(format!("term `{term}` not in vocabulary")))?;
            let i = *row_of.entry(doc).or_insert_with(|| {
                rows.push(doc.to_string());
                entries.push(BTreeMap::new());
                rows.len() - 1
            });
            if entries[i].insert(j, count).is_some() {
                return Err(Error::Consistency(format!("cell ({doc}, {term}) listed twice")));
            }
        }
        Self::assemble(rows, terms.to_vec(), entries.into_iter().map(|m| m.into_iter().collect()).collect())
    }

    pub fn rows(&self) -> &[String] {
        &self.rows
    }

    pub fn cols(&self) -> &[String] {
        &self.cols
    }

    pub fn counts(&self) -> &CsrMatrix<u64> {
        &self.counts
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.cols.len()
    }

    pub fn row_margins(&self) -> &[u64] {
        &self.row_margins
    }

    pub fn col_margins(&self) -> &[u64] {
        &self.col_margins
    }

    /// Number of documents containing each term.
    pub fn col_doc_frequency(&self) -> &[u64] {
        &self.col_doc_frequency
    }

    pub fn grand_total(&self) -> u64 {
        self.grand_total
    }

    /// Documents dropped because none of their tokens are in the vocabulary.
    pub fn pruned_rows(&self) -> &[String] {
        &self.pruned_rows
    }

    /// Vocabulary terms that never occur in the retained documents.
    pub fn pruned_cols(&self) -> &[String] {
        &self.pruned_cols
    }

    pub fn row_index(&self, doc_id: &str) -> Option<usize> {
        self.rows.iter().position(|r| r == doc_id)
    }

    pub fn col_index(&self, term: &str) -> Option<usize> {
        self.cols.iter().position(|c| c == term)
    }

    /// TSV export of the non-zero cells: header then `doc_id, term, count`.
    pub fn write_tsv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "doc_id\tterm\tcount")?;
        for (i, j, v) in self.counts.iter() {
            writeln!(out, "{}\t{}\t{v}", self.rows[i], self.cols[j])?;
        }
        Ok(())
    }

    pub fn read_tsv<R: BufRead>(terms: &[String], input: R) -> Result<Self> {
        let mut lines = Vec::new();
        for (n, line) in input.lines().enumerate() {
            let line = line.map_err(|e| Error::io("reading document-term matrix", e))?;
            if n > 0 && !line.is_empty() {
                lines.push((n + 1, line));
            }
        }
        let mut triplets = Vec::with_capacity(lines.len());
        for (n, line) in &lines {
            let bad = || Error::Consistency(format!("matrix line {n}: `{line}`"));
            let mut parts = line.split('\t');
            let (Some(d), Some(t), Some(c), None) = (parts.next(), parts.next(), parts.next(), parts.next()) else {
                return Err(bad());
            };
            triplets.push((d, t, c.parse::<u64>().map_err(|_| bad())?));
        }
        Self::from_triplets(terms, triplets)
    }
}

/// Counts vocabulary terms per document.
pub fn build_dtm(streams: &[TokenStream], vocab: &Vocabulary) -> Result<DocTermMatrix> {
    if vocab.is_empty() {
        return Err(Error::Argument("vocabulary is empty".into()));
    }
    let entries = streams
        .iter()
        .map(|s| {
            let mut row: BTreeMap<usize, u64> = BTreeMap::new();
            for t in &s.tokens {
                if let Some(j) = vocab.index_of(t) {
                    *row.entry(j).or_default() += 1;
                }
            }
            row.into_iter().collect()
        })
        .collect();
    DocTermMatrix::assemble(streams.iter().map(|s| s.doc_id.clone()).collect(), vocab.terms().to_vec(), entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::build_vocabulary;
    use proptest::prelude::*;

    fn ts(id: &str, tokens: &[&str]) -> TokenStream {
        TokenStream {
            doc_id: id.into(),
            tokens: tokens.iter().map(|s| s.to_string()).collect(),
        }
    }

    #[test]
    fn counts_and_margins() {
        let streams = [ts("d1", &["a", "b", "a"])];
        let vocab = build_vocabulary(&streams, 1).unwrap();
        let m = build_dtm(&streams, &vocab).unwrap();
        assert_eq!(m.cols(), ["a", "b"]);
        assert_eq!(m.counts().to_dense(), vec![vec![2, 1]]);
        assert_eq!(m.row_margins(), [3]);
        assert_eq!(m.grand_total(), 3);
    }

    #[test]
    fn out_of_vocabulary_rows_are_pruned() {
        let streams = [ts("d1", &["a", "a"]), ts("d2", &["z"]), ts("d3", &["a", "q"])];
        let vocab = build_vocabulary(&streams, 2).unwrap();
        let m = build_dtm(&streams, &vocab).unwrap();
        assert_eq!(m.rows(), ["d1", "d3"]);
        assert_eq!(m.pruned_rows(), ["d2"]);
        assert_eq!(m.grand_total(), 3);

        let only_oov = [ts("x", &["z"])];
        assert!(matches!(build_dtm(&only_oov, &vocab), Err(Error::EmptyMatrix)));
    }

    #[test]
    fn unused_terms_are_pruned() {
        let vocab = build_vocabulary(&[ts("v", &["a", "b"])], 1).unwrap();
        let m = build_dtm(&[ts("d", &["b"])], &vocab).unwrap();
        assert_eq!(m.cols(), ["b"]);
        assert_eq!(m.pruned_cols(), ["a"]);
    }

    #[test]
    fn tsv_round_trip() {
        let streams = [ts("d1", &["a", "b", "a"]), ts("d2", &["b", "c"])];
        let vocab = build_vocabulary(&streams, 1).unwrap();
        let m = build_dtm(&streams, &vocab).unwrap();
        let mut buf = Vec::new();
        m.write_tsv(&mut buf).unwrap();
        assert_eq!(DocTermMatrix::read_tsv(vocab.terms(), &buf[..]).unwrap(), m);
    }

    fn arb_streams() -> impl Strategy<Value = Vec<TokenStream>> {
        proptest::collection::vec(proptest::collection::vec("[a-f]{2}", 1..15), 1..8).prop_map(|docs| {
            docs.into_iter()
                .enumerate()
                .map(|(i, tokens)| TokenStream {
                    doc_id: format!("d{i}"),
                    tokens,
                })
                .collect()
        })
    }

    proptest! {
        #[test]
        fn marginals_are_conserved(streams in arb_streams(), threshold in 1u64..3) {
            let Ok(vocab) = build_vocabulary(&streams, threshold) else { return Ok(()) };
            let Ok(m) = build_dtm(&streams, &vocab) else { return Ok(()) };
            let dense = m.counts().to_dense();
            for (i, row) in dense.iter().enumerate() {
                prop_assert_eq!(row.iter().sum::<u64>(), m.row_margins()[i]);
                prop_assert!(m.row_margins()[i] > 0);
            }
            for j in 0..m.n_cols() {
                prop_assert_eq!(dense.iter().map(|r| r[j]).sum::<u64>(), m.col_margins()[j]);
                prop_assert!(m.col_margins()[j] > 0);
            }
            let in_vocab: u64 = streams.iter().flat_map(|s| &s.tokens).filter(|t| vocab.index_of(t).is_some()).count() as u64;
            prop_assert_eq!(m.grand_total(), in_vocab);
        }

        #[test]
        fn row_permutation_permutes_rows(streams in arb_streams(), seed in any::<u64>()) {
            let vocab = build_vocabulary(&streams, 1).unwrap();
            let m = build_dtm(&streams, &vocab).unwrap();
            let mut perm: Vec<usize> = (0..streams.len()).collect();
            let mut s = seed;
            for i in (1..perm.len()).rev() {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                perm.swap(i, (s >> 33) as usize % (i + 1));
            }
            let shuffled: Vec<TokenStream> = perm.iter().map(|&i| streams[i].clone()).collect();
            let p = build_dtm(&shuffled, &vocab).unwrap();
            prop_assert_eq!(p.cols(), m.cols());
            for (k, id) in p.rows().iter().enumerate() {
                let i = m.row_index(id).unwrap();
                prop_assert_eq!(p.counts().row(k).collect::<Vec<_>>(), m.counts().row(i).collect::<Vec<_>>());
            }
        }
    }
}
