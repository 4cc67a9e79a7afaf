//! Fixtures and independent reference computations shared by the
//! integration tests.

#![allow(dead_code)]

use std::path::PathBuf;

use lexevo::ca::CaModel;
use lexevo::corpus::{default_excluded_types, filter_corpus, parse_bibliographic_csv, Corpus, IngestOptions};
use lexevo::text::{build_dtm, build_vocabulary, remove_stopwords, DocTermMatrix, Stoplist, TokenStream, Tokenizer, Vocabulary};
use lexevo::viz::CloudLayout;
use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn repo_root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

pub fn mini_corpus_path() -> PathBuf {
    repo_root().join("data/mini_corpus.csv")
}

pub fn golden() -> serde_json::Value {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/mini_corpus_golden.json");
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

/// The mini corpus as parsed, before filtering.
pub fn parsed_mini_corpus() -> Corpus {
    let bytes = std::fs::read(mini_corpus_path()).unwrap();
    let parsed = parse_bibliographic_csv(&bytes[..], &IngestOptions::default()).unwrap();
    assert!(parsed.rejects.is_empty());
    parsed.corpus
}

pub struct TextStages {
    pub corpus: Corpus,
    pub raw: Vec<TokenStream>,
    pub streams: Vec<TokenStream>,
    pub vocab: Vocabulary,
    pub dtm: DocTermMatrix,
}

/// The text pipeline with default settings, run in memory.
pub fn mini_text_stages() -> TextStages {
    let corpus = filter_corpus(&parsed_mini_corpus(), &default_excluded_types());
    let tokenizer = Tokenizer::default();
    let raw: Vec<TokenStream> = corpus
        .documents()
        .iter()
        .map(|d| tokenizer.stream(d.id.clone(), &d.abstract_text))
        .collect();
    let stop = Stoplist::english();
    let streams: Vec<TokenStream> = raw.iter().map(|s| remove_stopwords(s, &stop)).collect();
    let vocab = build_vocabulary(&streams, 5).unwrap();
    let dtm = build_dtm(&streams, &vocab).unwrap();
    TextStages {
        corpus,
        raw,
        streams,
        vocab,
        dtm,
    }
}

/// Random integer tables up to 8×6 with no empty row or column, whose
/// non-trivial singular values are all clearly positive and well separated,
/// so that singular vectors are determined up to sign.
pub fn random_ca_tables(count: usize, seed: u64) -> Vec<Vec<Vec<f64>>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let r = rng.gen_range(2..=8);
        let c = rng.gen_range(2..=6);
        let table: Vec<Vec<f64>> = (0..r)
            .map(|_| (0..c).map(|_| f64::from(rng.gen_range(0u32..=12))).collect())
            .collect();
        if table.iter().any(|row| row.iter().sum::<f64>() == 0.0) || (0..c).any(|j| table.iter().all(|row| row[j] == 0.0)) {
            continue;
        }
        let sv = oracle_ca(&table).singular_values;
        let separated = sv.windows(2).all(|w| w[0] - w[1] > 1e-4);
        if sv.len() == r.min(c) - 1 && sv.last().is_some_and(|&s| s > 1e-4) && separated {
            out.push(table);
        }
    }
    out
}

/// Reference correspondence analysis from the dense eigendecomposition of
/// `SᵀS`, sharing no code with the library.
pub struct OracleCa {
    pub singular_values: Vec<f64>,
    pub inertia: f64,
    pub row_principal: DMatrix<f64>,
    pub col_principal: DMatrix<f64>,
}

pub fn oracle_ca(table: &[Vec<f64>]) -> OracleCa {
    let (r, c) = (table.len(), table[0].len());
    let n: f64 = table.iter().flatten().sum();
    let p = DMatrix::from_fn(r, c, |i, j| table[i][j] / n);
    let a: Vec<f64> = (0..r).map(|i| p.row(i).sum()).collect();
    let b: Vec<f64> = (0..c).map(|j| p.column(j).sum()).collect();
    let s = DMatrix::from_fn(r, c, |i, j| (p[(i, j)] - a[i] * b[j]) / (a[i] * b[j]).sqrt());
    let eig = SymmetricEigen::new(s.transpose() * &s);
    let mut order: Vec<usize> = (0..c).collect();
    order.sort_by(|&x, &y| eig.eigenvalues[y].total_cmp(&eig.eigenvalues[x]));
    let keep: Vec<usize> = order
        .into_iter()
        .filter(|&k| eig.eigenvalues[k] > 1e-20)
        .take(r.min(c) - 1)
        .collect();
    let sv: Vec<f64> = keep.iter().map(|&k| eig.eigenvalues[k].sqrt()).collect();
    let d = keep.len();
    let v = DMatrix::from_fn(c, d, |j, k| eig.eigenvectors[(j, keep[k])]);
    let u = (&s * &v) * DMatrix::from_fn(d, d, |x, y| if x == y { 1.0 / sv[x] } else { 0.0 });
    let row_principal = DMatrix::from_fn(r, d, |i, k| u[(i, k)] / a[i].sqrt() * sv[k]);
    let col_principal = DMatrix::from_fn(c, d, |j, k| v[(j, k)] / b[j].sqrt() * sv[k]);
    OracleCa {
        inertia: s.iter().map(|x| x * x).sum(),
        singular_values: sv,
        row_principal,
        col_principal,
    }
}

/// Largest coordinate difference after aligning each oracle dimension's sign
/// with the model's.
pub fn max_coordinate_gap(model: &CaModel, oracle: &OracleCa) -> f64 {
    let rows = model.row_coords_principal();
    let cols = model.col_coords_principal();
    let mut worst = 0.0f64;
    for k in 0..model.dims() {
        let dot: f64 = (0..cols.rows()).map(|j| cols[(j, k)] * oracle.col_principal[(j, k)]).sum();
        let sign = if dot < 0.0 { -1.0 } else { 1.0 };
        for i in 0..rows.rows() {
            worst = worst.max((rows[(i, k)] - sign * oracle.row_principal[(i, k)]).abs());
        }
        for j in 0..cols.rows() {
            worst = worst.max((cols[(j, k)] - sign * oracle.col_principal[(j, k)]).abs());
        }
    }
    worst
}

/// Pairs of placed terms whose boxes intersect, by a plain O(n²) scan that
/// does not use the library's own overlap test.
pub fn overlapping_pairs(layout: &CloudLayout) -> Vec<(String, String)> {
    let p = &layout.placements;
    let mut out = Vec::new();
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            let (a, b) = (&p[i].bbox, &p[j].bbox);
            let x_overlap = a.x.max(b.x) < (a.x + a.w).min(b.x + b.w);
            let y_overlap = a.y.max(b.y) < (a.y + a.h).min(b.y + b.h);
            if x_overlap && y_overlap {
                out.push((p[i].term.clone(), p[j].term.clone()));
            }
        }
    }
    out
}

/// Thirty terms with weights spread over two orders of magnitude.
pub fn cloud_fixture(n: usize, seed: u64) -> Vec<(String, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let words = [
        "data",
        "science",
        "learning",
        "machine",
        "analysis",
        "big",
        "model",
        "neural",
        "network",
        "mining",
        "statistics",
        "cloud",
        "process",
        "prediction",
        "health",
        "covid",
        "deep",
        "training",
        "education",
        "curriculum",
        "visualization",
        "database",
        "inference",
        "genomics",
        "astronomy",
        "supply",
        "chain",
        "decision",
        "business",
        "analytics",
        "research",
        "methods",
    ];
    words.iter().take(n).map(|w| (w.to_string(), rng.gen_range(1.0..100.0))).collect()
}
