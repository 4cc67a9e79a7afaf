//! Acceptance criteria. Each criterion prints one `PASS` or `FAIL` line with
//! a short detail; the target fails if any criterion does.
//!
//! Run alone with `cargo test -p lexevo --test acceptance`.

mod common;

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use lexevo::ca::{compute_ca, project_supplementary, CaInput, PointKind};
use lexevo::corpus::{Corpus, DocType, Document, FilterReport};
use lexevo::periods::{assign_periods, period_report, residual_scores, PeriodSpec};
use lexevo::stats::{publication_type_shares, publications_per_year, YearlyCounts};
use lexevo::text::{build_dtm, build_vocabulary, Tokenizer};
use lexevo::trend::{fit_quadratic_trend, predict_trend, TrendFit};
use lexevo::viz::{layout_word_cloud, Canvas, CloudOptions};
use lexevo::{run_pipeline, RunConfig};
use nalgebra::{Matrix3, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn trend_arithmetic() -> Outcome {
    let fit = TrendFit {
        c2: 46.9,
        c1: -370.1,
        c0: 579.0,
        r_squared: None,
        first_year: 2009,
    };
    let started = Instant::now();
    let (y22, y23) = (predict_trend(&fit, 2022), predict_trend(&fit, 2023));
    let elapsed = started.elapsed();
    ensure((y22 - 4590.0).abs() < 1e-9, || format!("2022 → {y22}"))?;
    ensure((y23 - 5580.0).abs() < 1e-9, || format!("2023 → {y23}"))?;
    ensure(elapsed.as_secs_f64() < 1e-3, || format!("took {elapsed:?}"))?;
    Ok(format!("2022 → {y22:.1}, 2023 → {y23:.1} in {elapsed:?}"))
}

fn filter_arithmetic() -> Outcome {
    let report = FilterReport::from_exclusions(14_162, 945, 430).ok_or("report rejected")?;
    ensure(report.retained == 12_787 && report.is_consistent(), || format!("{report:?}"))?;
    Ok(format!("retained {}", report.retained))
}

fn share_arithmetic() -> Outcome {
    let docs: Vec<Document> = (0..12_787)
        .map(|i| Document {
            id: format!("d{i}"),
            title: String::new(),
            abstract_text: "data science".into(),
            keywords: Vec::new(),
            year: if i < 9_525 { 2019 + i % 4 } else { 2009 + i % 10 },
            doc_type: DocType::Article,
            citations: 0,
        })
        .collect();
    let corpus = Corpus::new(docs).map_err(|e| e.to_string())?;
    let tok = Tokenizer::default();
    let streams: Vec<_> = corpus
        .documents()
        .iter()
        .map(|d| tok.stream(d.id.clone(), &d.abstract_text))
        .collect();
    let vocab = build_vocabulary(&streams, 1).map_err(|e| e.to_string())?;
    let dtm = build_dtm(&streams, &vocab).map_err(|e| e.to_string())?;
    let reports = period_report(&corpus, &dtm, &PeriodSpec::default(), 5, 3).map_err(|e| e.to_string())?;
    let auge = reports.periods.iter().find(|p| p.name == "Auge").ok_or("no Auge period")?;
    ensure(auge.doc_count == 9_525, || format!("count {}", auge.doc_count))?;
    ensure((auge.share_of_corpus - 0.7449).abs() <= 1e-4, || {
        format!("share {}", auge.share_of_corpus)
    })?;
    Ok(format!("share {:.6}", auge.share_of_corpus))
}

fn labelled(table: &[Vec<f64>]) -> CaInput {
    let rows = (0..table.len()).map(|i| format!("r{i}")).collect();
    let cols = (0..table[0].len()).map(|j| format!("c{j}")).collect();
    CaInput::from_dense(rows, cols, table).unwrap()
}

fn ca_oracle_equivalence() -> Outcome {
    let started = Instant::now();
    let tables = common::random_ca_tables(100, 2024);
    let mut worst = 0.0f64;
    for table in &tables {
        let dims = table.len().min(table[0].len()) - 1;
        let model = compute_ca(&labelled(table), dims).map_err(|e| e.to_string())?;
        let oracle = common::oracle_ca(table);
        ensure(model.dims() == oracle.singular_values.len(), || "dimension count differs".into())?;
        for (a, b) in model.singular_values().iter().zip(&oracle.singular_values) {
            worst = worst.max((a - b).abs());
        }
        worst = worst.max((model.inertia_total() - oracle.inertia).abs());
        worst = worst.max(common::max_coordinate_gap(&model, &oracle));
    }
    let elapsed = started.elapsed();
    ensure(worst < 1e-9, || format!("max deviation {worst:e}"))?;
    ensure(elapsed.as_secs_f64() < 10.0, || format!("took {elapsed:?}"))?;
    Ok(format!("{} tables, max deviation {worst:.1e}, {elapsed:?}", tables.len()))
}

fn ca_identities() -> Outcome {
    let tables = common::random_ca_tables(100, 2024);
    let mut worst = 0.0f64;
    for table in &tables {
        let model = compute_ca(&labelled(table), table.len().min(table[0].len()) - 1).map_err(|e| e.to_string())?;
        let n: f64 = table.iter().flatten().sum();
        let rs: Vec<f64> = table.iter().map(|r| r.iter().sum()).collect();
        let cs: Vec<f64> = (0..table[0].len()).map(|j| table.iter().map(|r| r[j]).sum()).collect();
        let chi2: f64 = table
            .iter()
            .enumerate()
            .flat_map(|(i, row)| row.iter().enumerate().map(move |(j, f)| (i, j, *f)))
            .map(|(i, j, f)| {
                let e = rs[i] * cs[j] / n;
                (f - e).powi(2) / e
            })
            .sum();
        worst = worst.max((model.inertia_total() - chi2 / n).abs());
        let (a, b) = (model.row_masses(), model.col_masses());
        let (f, g, gs) = (
            model.row_coords_principal(),
            model.col_coords_principal(),
            model.col_coords_standard(),
        );
        for k in 0..model.dims() {
            worst = worst.max((0..f.rows()).map(|i| a[i] * f[(i, k)]).sum::<f64>().abs());
            worst = worst.max((0..g.rows()).map(|j| b[j] * g[(j, k)]).sum::<f64>().abs());
            for i in 0..f.rows() {
                let via: f64 = (0..g.rows()).map(|j| table[i][j] / rs[i] * gs[(j, k)]).sum();
                worst = worst.max((f[(i, k)] - via).abs());
            }
        }
        for (i, row) in table.iter().enumerate() {
            let label = format!("r{i}");
            let sup = project_supplementary(&model, row, &label).map_err(|e| e.to_string())?;
            let active = model.coords_of(PointKind::Row, &label).map_err(|e| e.to_string())?;
            for (x, y) in sup.coords.iter().zip(active) {
                worst = worst.max((x - y).abs());
            }
        }
    }
    ensure(worst < 1e-9, || format!("max deviation {worst:e}"))?;
    Ok(format!("{} tables, max deviation {worst:.1e}", tables.len()))
}

/// Coefficients from the normal equations `XᵀX c = Xᵀy`, solved by LU.
fn normal_equations(series: &YearlyCounts) -> [f64; 3] {
    let mut xtx = Matrix3::<f64>::zeros();
    let mut xty = Vector3::<f64>::zeros();
    for (i, &y) in series.counts.iter().enumerate() {
        let x = (i + 1) as f64;
        let row = Vector3::new(x * x, x, 1.0);
        xtx += row * row.transpose();
        xty += row * y as f64;
    }
    let c = xtx.lu().solve(&xty).unwrap();
    [c[0], c[1], c[2]]
}

fn least_squares_recovery() -> Outcome {
    let exact = YearlyCounts {
        first_year: 2009,
        counts: (1..=14u64).map(|x| 3 * x * x + 5 * x + 7).collect(),
    };
    let fit = fit_quadratic_trend(&exact).map_err(|e| e.to_string())?;
    let err = (fit.c2 - 3.0).abs().max((fit.c1 - 5.0).abs()).max((fit.c0 - 7.0).abs());
    ensure(err < 1e-9, || format!("exact series off by {err:e}"))?;
    ensure(fit.r_squared.is_some_and(|r| (r - 1.0).abs() < 1e-12), || {
        format!("R² {:?}", fit.r_squared)
    })?;

    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let n = rng.gen_range(3..=20);
        let series = YearlyCounts {
            first_year: rng.gen_range(1990..2015),
            counts: (0..n).map(|_| rng.gen_range(0..2000)).collect(),
        };
        let fit = fit_quadratic_trend(&series).map_err(|e| e.to_string())?;
        let oracle = normal_equations(&series);
        for (a, b) in [fit.c2, fit.c1, fit.c0].iter().zip(oracle) {
            worst = worst.max((a - b).abs() / b.abs().max(1.0));
        }
    }
    ensure(worst < 1e-9, || format!("random series deviate by {worst:e}"))?;
    Ok(format!("exact error {err:.1e}, random max relative deviation {worst:.1e}"))
}

fn pipeline_determinism() -> Outcome {
    let mut cfg = RunConfig::with_input(common::mini_corpus_path());
    cfg.seed = 7;
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let started = Instant::now();
    run_pipeline(cfg.clone(), a.path()).map_err(|e| e.to_string())?;
    let elapsed = started.elapsed();
    run_pipeline(cfg, b.path()).map_err(|e| e.to_string())?;
    let read = |dir: &std::path::Path| -> BTreeMap<String, Vec<u8>> {
        std::fs::read_dir(dir)
            .unwrap()
            .map(|e| e.unwrap().path())
            .filter(|p| p.file_name().unwrap() != lexevo::pipeline::TIMINGS_FILE)
            .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read(&p).unwrap()))
            .collect()
    };
    let (sa, sb) = (read(a.path()), read(b.path()));
    ensure(sa == sb, || "artifact sets differ".into())?;
    ensure(elapsed.as_secs_f64() < 5.0, || format!("full run took {elapsed:?}"))?;
    Ok(format!("{} artifacts identical, full run {elapsed:?}", sa.len()))
}

fn text_stage_oracles() -> Outcome {
    let g = common::golden();
    let st = common::mini_text_stages();
    let vocab: Vec<serde_json::Value> = st.vocab.entries().map(|(t, f, d)| serde_json::json!([t, f, d])).collect();
    ensure(serde_json::Value::Array(vocab) == g["vocabulary"], || "vocabulary differs".into())?;

    let gd = &g["dtm"];
    let rows: BTreeMap<String, u64> = st.dtm.rows().iter().cloned().zip(st.dtm.row_margins().iter().copied()).collect();
    let cols: BTreeMap<String, u64> = st.dtm.cols().iter().cloned().zip(st.dtm.col_margins().iter().copied()).collect();
    ensure(serde_json::to_value(&rows).unwrap() == gd["row_margins"], || {
        "row margins differ".into()
    })?;
    ensure(serde_json::to_value(&cols).unwrap() == gd["col_margins"], || {
        "column margins differ".into()
    })?;
    ensure(st.dtm.grand_total() == gd["grand_total"].as_u64().unwrap(), || {
        "grand total differs".into()
    })?;

    let yearly = publications_per_year(&st.corpus).map_err(|e| e.to_string())?;
    ensure(serde_json::to_value(&yearly).unwrap() == g["yearly"], || {
        "yearly counts differ".into()
    })?;
    let shares = publication_type_shares(&st.corpus).map_err(|e| e.to_string())?;
    for ((t, s), e) in shares.iter().zip(g["type_shares"].as_array().unwrap()) {
        ensure(t.slug() == e[0] && (s - e[1].as_f64().unwrap()).abs() < 1e-9, || {
            format!("type share {t}")
        })?;
    }

    let spec = PeriodSpec::default();
    let assignment = assign_periods(&st.corpus, &spec);
    let mut worst = 0.0f64;
    for p in spec.periods() {
        for (term, score) in residual_scores(&st.dtm, &assignment, &p.name).map_err(|e| e.to_string())? {
            worst = worst.max((score - g["residuals"][&p.name][&term].as_f64().unwrap()).abs());
        }
    }
    ensure(worst < 1e-9, || format!("residuals deviate by {worst:e}"))?;
    Ok(format!(
        "{} terms, {} rows, grand total {}, residual deviation {worst:.1e}",
        st.vocab.len(),
        st.dtm.n_rows(),
        st.dtm.grand_total()
    ))
}

fn word_cloud_soundness() -> Outcome {
    let weights = common::cloud_fixture(30, 5);
    let canvas = Canvas {
        width: 800.0,
        height: 500.0,
    };
    let mut placed = 0;
    for seed in 0..50 {
        let layout = layout_word_cloud(&weights, canvas, seed, &CloudOptions::default()).map_err(|e| e.to_string())?;
        let overlaps = common::overlapping_pairs(&layout);
        ensure(overlaps.is_empty(), || format!("seed {seed}: {overlaps:?}"))?;
        ensure(layout.placements.len() + layout.dropped.len() == 30, || {
            format!("seed {seed} lost terms")
        })?;
        placed += layout.placements.len();
    }
    Ok(format!("50 seeds, 0 overlaps, {placed} placements"))
}

type Criterion = (&'static str, fn() -> Outcome);

/// Runs without the libtest harness so the per-criterion lines are always
/// printed; exits non-zero when any criterion fails.
fn main() {
    let criteria: [Criterion; 9] = [
        ("trend arithmetic", trend_arithmetic),
        ("filter arithmetic", filter_arithmetic),
        ("share arithmetic", share_arithmetic),
        ("CA oracle equivalence", ca_oracle_equivalence),
        ("CA identities", ca_identities),
        ("least-squares recovery", least_squares_recovery),
        ("pipeline determinism", pipeline_determinism),
        ("text-stage oracles", text_stage_oracles),
        ("word-cloud soundness", word_cloud_soundness),
    ];
    let mut failed = Vec::new();
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("PASS criterion {}: {name} ({detail})", i + 1),
            Err(why) => {
                println!("FAIL criterion {}: {name} ({why})", i + 1);
                failed.push(i + 1);
            }
        }
    }
    if failed.is_empty() {
        println!("acceptance: {} of {} criteria passed", criteria.len(), criteria.len());
    } else {
        println!("acceptance: failed criteria {failed:?}");
        std::process::exit(1);
    }
}
