//! Text-stage results on the bundled mini corpus against the brute-force
//! reference values in `fixtures/mini_corpus_golden.json`.

mod common;

use std::collections::BTreeMap;

use lexevo::corpus::Document;
use lexevo::periods::{assign_periods, residual_scores, PeriodSpec};
use lexevo::stats::{publication_type_shares, publications_per_year};
use lexevo::text::uniqueness_stats;
use serde_json::Value;

#[test]
fn parsed_documents_match() {
    let g = common::golden();
    let expected: Vec<Document> = serde_json::from_value(g["documents"].clone()).unwrap();
    assert_eq!(common::parsed_mini_corpus().documents(), &expected[..]);
}

#[test]
fn filter_report_matches() {
    let g = common::golden();
    let report = common::mini_text_stages().corpus.provenance();
    assert_eq!(serde_json::to_value(report).unwrap(), g["filter"]);
    assert!(report.is_consistent());
}

#[test]
fn vocabulary_matches() {
    let g = common::golden();
    let vocab = common::mini_text_stages().vocab;
    let got: Vec<Value> = vocab.entries().map(|(t, f, d)| serde_json::json!([t, f, d])).collect();
    assert_eq!(Value::Array(got), g["vocabulary"]);
}

#[test]
fn matrix_marginals_match() {
    let g = common::golden();
    let dtm = common::mini_text_stages().dtm;
    let gd = &g["dtm"];
    assert_eq!(dtm.grand_total(), gd["grand_total"].as_u64().unwrap());
    assert_eq!(dtm.n_rows() as u64, gd["rows"].as_u64().unwrap());
    let rows: BTreeMap<String, u64> = dtm.rows().iter().cloned().zip(dtm.row_margins().iter().copied()).collect();
    let expected_rows: BTreeMap<String, u64> = serde_json::from_value(gd["row_margins"].clone()).unwrap();
    assert_eq!(rows, expected_rows);
    let cols: BTreeMap<String, u64> = dtm.cols().iter().cloned().zip(dtm.col_margins().iter().copied()).collect();
    let expected_cols: BTreeMap<String, u64> = serde_json::from_value(gd["col_margins"].clone()).unwrap();
    assert_eq!(cols, expected_cols);
    let pruned: Vec<String> = serde_json::from_value(gd["pruned"].clone()).unwrap();
    assert_eq!(dtm.pruned_rows(), &pruned[..]);
}

#[test]
fn yearly_counts_and_type_shares_match() {
    let g = common::golden();
    let corpus = common::mini_text_stages().corpus;
    assert_eq!(serde_json::to_value(publications_per_year(&corpus).unwrap()).unwrap(), g["yearly"]);
    let shares = publication_type_shares(&corpus).unwrap();
    let expected = g["type_shares"].as_array().unwrap();
    assert_eq!(shares.len(), expected.len());
    for ((t, s), e) in shares.iter().zip(expected) {
        assert_eq!(t.slug(), e[0].as_str().unwrap());
        assert!((s - e[1].as_f64().unwrap()).abs() < 1e-12);
    }
}

#[test]
fn period_counts_and_residuals_match() {
    let g = common::golden();
    let st = common::mini_text_stages();
    let spec = PeriodSpec::default();
    let assignment = assign_periods(&st.corpus, &spec);
    for p in spec.periods() {
        assert_eq!(
            assignment.count(&p.name).unwrap() as u64,
            g["period_counts"][&p.name].as_u64().unwrap()
        );
        let scores = residual_scores(&st.dtm, &assignment, &p.name).unwrap();
        let expected = g["residuals"][&p.name].as_object().unwrap();
        assert_eq!(scores.len(), expected.len());
        for (term, score) in scores {
            let want = expected[&term].as_f64().unwrap();
            assert!((score - want).abs() < 1e-9, "{} {term}: {score} vs {want}", p.name);
        }
    }
}

#[test]
fn uniqueness_matches() {
    let g = common::golden();
    let u = uniqueness_stats(&common::mini_text_stages().raw).unwrap();
    let e = &g["uniqueness_raw"];
    assert!((u.mean_tokens - e["mean_tokens"].as_f64().unwrap()).abs() < 1e-9);
    assert!((u.mean_unique - e["mean_unique"].as_f64().unwrap()).abs() < 1e-9);
    assert!((u.unique_ratio - e["unique_ratio"].as_f64().unwrap()).abs() < 1e-9);
}
