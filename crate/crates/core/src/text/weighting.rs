use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sparse::CsrMatrix;

use super::DocTermMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WeightingScheme {
    /// `f_ij / f_i·`
    RelativeFrequency,
    /// `(f_ij / f_i·) · ln(N / df_j)`
    TfIdf,
    /// `ln(1 + f_ij) · (1 + Σ_i p_ij ln p_ij / ln N)` with `p_ij = f_ij / f_·j`
    Entropy,
}

impl WeightingScheme {
    pub fn name(self) -> &'static str {
        match self {
            WeightingScheme::RelativeFrequency => "relative-frequency",
            WeightingScheme::TfIdf => "tf-idf",
            WeightingScheme::Entropy => "entropy",
        }
    }
}

impl fmt::Display for WeightingScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for WeightingScheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "relative-frequency" => Ok(WeightingScheme::RelativeFrequency),
            "tf-idf" => Ok(WeightingScheme::TfIdf),
            "entropy" => Ok(WeightingScheme::Entropy),
            other => Err(Error::Config(format!("unknown weighting scheme `{other}`"))),
        }
    }
}

/// A reweighted document-term matrix with the same labels as its source.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedMatrix {
    pub rows: Vec<String>,
    pub cols: Vec<String>,
    pub values: CsrMatrix<f64>,
    pub scheme: WeightingScheme,
}

pub fn weight_matrix(dtm: &DocTermMatrix, scheme: WeightingScheme) -> Result<WeightedMatrix> {
    let n_docs = dtm.n_rows() as f64;
    let counts = dtm.counts();
    let rm = dtm.row_margins();
    let values = match scheme {
        WeightingScheme::RelativeFrequency => counts.map(|i, _, f| f as f64 / rm[i] as f64),
        WeightingScheme::TfIdf => {
            if dtm.n_rows() < 2 {
                return Err(Error::DegenerateCorpus("tf-idf"));
            }
            let df = dtm.col_doc_frequency();
            counts.map(|i, j, f| (f as f64 / rm[i] as f64) * (n_docs / df[j] as f64).ln())
        }
        WeightingScheme::Entropy => {
            if dtm.n_rows() < 2 {
                return Err(Error::DegenerateCorpus("entropy"));
            }
            let cm = dtm.col_margins();
            let mut plogp = vec![0.0f64; dtm.n_cols()];
            for (_, j, f) in counts.iter() {
                let p = f as f64 / cm[j] as f64;
                plogp[j] += p * p.ln();
            }
            let ln_n = n_docs.ln();
            let global: Vec<f64> = plogp.iter().map(|s| 1.0 + s / ln_n).collect();
            counts.map(|_, j, f| (f as f64).ln_1p() * global[j])
        }
    };
    Ok(WeightedMatrix {
        rows: dtm.rows().to_vec(),
        cols: dtm.cols().to_vec(),
        values,
        scheme,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::{build_dtm, build_vocabulary, TokenStream};

    fn dtm_from(rows: &[&[(&str, usize)]]) -> DocTermMatrix {
        let streams: Vec<TokenStream> = rows
            .iter()
            .enumerate()
            .map(|(i, r)| TokenStream {
                doc_id: format!("d{i}"),
                tokens: r.iter().flat_map(|&(t, n)| std::iter::repeat_n(t.to_string(), n)).collect(),
            })
            .collect();
        build_dtm(&streams, &build_vocabulary(&streams, 1).unwrap()).unwrap()
    }

    #[test]
    fn relative_frequency() {
        let m = dtm_from(&[&[("a", 2), ("b", 1)]]);
        let w = weight_matrix(&m, WeightingScheme::RelativeFrequency).unwrap();
        assert_eq!(w.values.to_dense(), vec![vec![2.0 / 3.0, 1.0 / 3.0]]);
    }

    #[test]
    fn tf_idf_zero_for_ubiquitous_terms() {
        let m = dtm_from(&[&[("a", 2), ("b", 1)], &[("a", 1)]]);
        let w = weight_matrix(&m, WeightingScheme::TfIdf).unwrap();
        let a = m.col_index("a").unwrap();
        let b = m.col_index("b").unwrap();
        assert_eq!(w.values.get(0, a), 0.0);
        assert_eq!(w.values.get(1, a), 0.0);
        assert!((w.values.get(0, b) - (1.0 / 3.0) * 2f64.ln()).abs() < 1e-15);
        assert!(w.values.nnz() < m.counts().nnz());
    }

    #[test]
    fn entropy_toy_matrix() {
        // f = [[2,0],[1,1],[1,3]], N = 3
        // col a: p = (1/2, 1/4, 1/4), Σ p ln p = -1.0397207708399179
        // col b: p = (0, 1/4, 3/4),   Σ p ln p = -0.5623351446188083
        let m = dtm_from(&[&[("a", 2)], &[("a", 1), ("b", 1)], &[("a", 1), ("b", 3)]]);
        let w = weight_matrix(&m, WeightingScheme::Entropy).unwrap();
        let ln3 = 3f64.ln();
        let ga = 1.0 - 1.0397207708399179 / ln3;
        let gb = 1.0 - 0.5623351446188083 / ln3;
        let (a, b) = (m.col_index("a").unwrap(), m.col_index("b").unwrap());
        let expect = [
            (0, a, 3f64.ln() * ga),
            (1, a, 2f64.ln() * ga),
            (1, b, 2f64.ln() * gb),
            (2, a, 2f64.ln() * ga),
            (2, b, 4f64.ln() * gb),
        ];
        for (i, j, v) in expect {
            assert!((w.values.get(i, j) - v).abs() < 1e-12, "({i},{j})");
        }
        assert_eq!(w.values.get(0, b), 0.0);
    }

    #[test]
    fn single_document_is_degenerate() {
        let m = dtm_from(&[&[("a", 2)]]);
        assert!(matches!(weight_matrix(&m, WeightingScheme::TfIdf), Err(Error::DegenerateCorpus(_))));
        assert!(matches!(
            weight_matrix(&m, WeightingScheme::Entropy),
            Err(Error::DegenerateCorpus(_))
        ));
        assert!(weight_matrix(&m, WeightingScheme::RelativeFrequency).is_ok());
    }

    #[test]
    fn scheme_names_round_trip() {
        for s in [WeightingScheme::RelativeFrequency, WeightingScheme::TfIdf, WeightingScheme::Entropy] {
            assert_eq!(s.name().parse::<WeightingScheme>().unwrap(), s);
        }
    }
}
