//! Correspondence analysis.
//!
//! For a non-negative table `F` with grand total `n`, let `P = F / n` be the
//! correspondence matrix and `a`, `b` its row and column sums (the masses).
//! The standardized residuals
//!
//! ```text
//! S = D_a^{-1/2} (P - a bᵀ) D_b^{-1/2} = U D_λ Vᵀ
//! ```
//!
//! are decomposed by SVD. Standard coordinates are `D_a^{-1/2} U` for rows and
//! `D_b^{-1/2} V` for columns; principal coordinates scale them by `λ`. The
//! total inertia `Σ λ²` equals the table's χ² statistic divided by `n`.
//!
//! Supplementary points, such as publication years, are projected with the
//! row transition formula and never influence the axes.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashSet};
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::corpus::Corpus;
use crate::error::{Error, Result};
use crate::linalg::{svd, Matrix};
use crate::sparse::CsrMatrix;
use crate::text::{DocTermMatrix, WeightedMatrix};

/// Singular values below this are treated as zero and their dimensions dropped.
pub const SINGULAR_VALUE_FLOOR: f64 = 1e-12;

/// Identifies the sign rule applied to each dimension.
pub const SIGN_CONVENTION: &str = "max-abs-column-standard-positive/v1";

/// A labelled non-negative table ready for analysis.
#[derive(Debug, Clone, PartialEq)]
pub struct CaInput {
    row_labels: Vec<String>,
    col_labels: Vec<String>,
    matrix: CsrMatrix<f64>,
}

impl CaInput {
    /// Validates and wraps a table. Rejects negative or non-finite entries,
    /// all-zero rows or columns, and duplicate labels.
    pub fn new(row_labels: Vec<String>, col_labels: Vec<String>, matrix: CsrMatrix<f64>) -> Result<Self> {
        if row_labels.len() != matrix.n_rows() {
            return Err(Error::Shape {
                expected: matrix.n_rows(),
                actual: row_labels.len(),
            });
        }
        if col_labels.len() != matrix.n_cols() {
            return Err(Error::Shape {
                expected: matrix.n_cols(),
                actual: col_labels.len(),
            });
        }
        for (side, labels) in [("row", &row_labels), ("column", &col_labels)] {
            let mut seen = HashSet::new();
            if let Some(dup) = labels.iter().find(|l| !seen.insert(l.as_str())) {
                return Err(Error::Validation(format!("duplicate {side} label `{dup}`")));
            }
        }
        let mut problems = Vec::new();
        let mut bad_rows = BTreeMap::new();
        let mut col_sums = vec![0.0f64; matrix.n_cols()];
        for i in 0..matrix.n_rows() {
            let mut sum = 0.0;
            for (j, v) in matrix.row(i) {
                if !v.is_finite() || v < 0.0 {
                    bad_rows.entry(i).or_insert("negative or non-finite entry");
                }
                sum += v;
                col_sums[j] += v;
            }
            if sum <= 0.0 {
                bad_rows.entry(i).or_insert("all-zero row");
            }
        }
        for (i, why) in bad_rows {
            problems.push(format!("row `{}`: {why}", row_labels[i]));
        }
        for (j, s) in col_sums.iter().enumerate() {
            if !(s.is_finite() && *s > 0.0) {
                problems.push(format!("column `{}`: all-zero column", col_labels[j]));
            }
        }
        if matrix.n_rows() == 0 || matrix.n_cols() == 0 {
            problems.push("table is empty".into());
        }
        if !problems.is_empty() {
            return Err(Error::Validation(problems.join("; ")));
        }
        Ok(CaInput {
            row_labels,
            col_labels,
            matrix,
        })
    }

    pub fn from_dense(row_labels: Vec<String>, col_labels: Vec<String>, rows: &[Vec<f64>]) -> Result<Self> {
        if let Some(r) = rows.iter().find(|r| r.len() != col_labels.len()) {
            return Err(Error::Shape {
                expected: col_labels.len(),
                actual: r.len(),
            });
        }
        let n_cols = col_labels.len();
        let rows = rows.iter().map(|r| r.iter().copied().enumerate().collect()).collect();
        Self::new(row_labels, col_labels, CsrMatrix::from_rows(n_cols, rows))
    }

    pub fn from_dtm(dtm: &DocTermMatrix) -> Result<Self> {
        Self::new(dtm.rows().to_vec(), dtm.cols().to_vec(), dtm.counts().map(|_, _, v| v as f64))
    }

    pub fn from_weighted(w: &WeightedMatrix) -> Result<Self> {
        Self::new(w.rows.clone(), w.cols.clone(), w.values.clone())
    }

    pub fn row_labels(&self) -> &[String] {
        &self.row_labels
    }

    pub fn col_labels(&self) -> &[String] {
        &self.col_labels
    }

    pub fn matrix(&self) -> &CsrMatrix<f64> {
        &self.matrix
    }
}

/// Which side of the table a point belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PointKind {
    Row,
    Column,
}

/// A fitted correspondence analysis.
#[derive(Debug, Clone, PartialEq)]
pub struct CaModel {
    row_labels: Vec<String>,
    col_labels: Vec<String>,
    row_masses: Vec<f64>,
    col_masses: Vec<f64>,
    singular_values: Vec<f64>,
    row_principal: Matrix,
    col_principal: Matrix,
    row_standard: Matrix,
    col_standard: Matrix,
    inertia_total: f64,
    inertia_share: Vec<f64>,
}

impl CaModel {
    pub fn row_labels(&self) -> &[String] {
        &self.row_labels
    }

    pub fn col_labels(&self) -> &[String] {
        &self.col_labels
    }

    pub fn row_masses(&self) -> &[f64] {
        &self.row_masses
    }

    pub fn col_masses(&self) -> &[f64] {
        &self.col_masses
    }

    /// The full non-trivial spectrum, descending. Its length is
    /// `min(rows, cols) - 1`; values under [`SINGULAR_VALUE_FLOOR`] read 0.
    pub fn singular_values(&self) -> &[f64] {
        &self.singular_values
    }

    /// Number of retained dimensions carried by the coordinate matrices.
    pub fn dims(&self) -> usize {
        self.row_principal.cols()
    }

    pub fn row_coords_principal(&self) -> &Matrix {
        &self.row_principal
    }

    pub fn col_coords_principal(&self) -> &Matrix {
        &self.col_principal
    }

    pub fn row_coords_standard(&self) -> &Matrix {
        &self.row_standard
    }

    pub fn col_coords_standard(&self) -> &Matrix {
        &self.col_standard
    }

    pub fn inertia_total(&self) -> f64 {
        self.inertia_total
    }

    /// Share of total inertia per dimension of the full spectrum.
    pub fn inertia_share(&self) -> &[f64] {
        &self.inertia_share
    }

    fn side(&self, kind: PointKind) -> (&[String], &Matrix) {
        match kind {
            PointKind::Row => (&self.row_labels, &self.row_principal),
            PointKind::Column => (&self.col_labels, &self.col_principal),
        }
    }

    /// Principal coordinates of a labelled point.
    pub fn coords_of(&self, kind: PointKind, label: &str) -> Result<&[f64]> {
        let (labels, coords) = self.side(kind);
        labels
            .iter()
            .position(|l| l == label)
            .map(|i| coords.row(i))
            .ok_or_else(|| Error::Lookup(label.to_string()))
    }

    /// Contribution of each point to each retained dimension's inertia:
    /// `mass · coord² / λ²`. Each column sums to 1.
    pub fn contributions(&self, kind: PointKind) -> Matrix {
        let (masses, coords) = match kind {
            PointKind::Row => (&self.row_masses, &self.row_principal),
            PointKind::Column => (&self.col_masses, &self.col_principal),
        };
        let mut out = Matrix::zeros(coords.rows(), coords.cols());
        for i in 0..coords.rows() {
            for k in 0..coords.cols() {
                let l2 = self.singular_values[k].powi(2);
                out[(i, k)] = masses[i] * coords[(i, k)].powi(2) / l2;
            }
        }
        out
    }
}

/// Fits a correspondence analysis keeping up to `dims` dimensions.
///
/// Fewer dimensions are kept when the table has fewer non-zero singular
/// values.
pub fn compute_ca(input: &CaInput, dims: usize) -> Result<CaModel> {
    let (r, c) = (input.row_labels.len(), input.col_labels.len());
    let max_dims = r.min(c).saturating_sub(1);
    if dims == 0 || dims > max_dims {
        return Err(Error::Argument(format!(
            "dims must be in 1..={max_dims} for a {r}×{c} table, got {dims}"
        )));
    }

    let total: f64 = input.matrix.iter().map(|(_, _, v)| v).sum();
    let mut a = vec![0.0f64; r];
    let mut b = vec![0.0f64; c];
    for (i, j, v) in input.matrix.iter() {
        a[i] += v;
        b[j] += v;
    }
    a.iter_mut().for_each(|x| *x /= total);
    b.iter_mut().for_each(|x| *x /= total);

    let mut s = Matrix::zeros(r, c);
    for i in 0..r {
        for j in 0..c {
            s[(i, j)] = -a[i] * b[j];
        }
        for (j, v) in input.matrix.row(i) {
            s[(i, j)] += v / total;
        }
        let sa = a[i].sqrt();
        for j in 0..c {
            s[(i, j)] /= sa * b[j].sqrt();
        }
    }

    let dec = svd(&s);
    let spectrum: Vec<f64> = dec
        .s
        .iter()
        .take(max_dims)
        .map(|&x| if x < SINGULAR_VALUE_FLOOR { 0.0 } else { x })
        .collect();
    let kept = spectrum.iter().take(dims).filter(|&&x| x > 0.0).count();

    let mut row_standard = Matrix::zeros(r, kept);
    let mut col_standard = Matrix::zeros(c, kept);
    for k in 0..kept {
        for i in 0..r {
            row_standard[(i, k)] = dec.u[(i, k)] / a[i].sqrt();
        }
        for j in 0..c {
            col_standard[(j, k)] = dec.v[(j, k)] / b[j].sqrt();
        }
        if needs_flip(&col_standard, k, &input.col_labels) {
            for i in 0..r {
                row_standard[(i, k)] = -row_standard[(i, k)];
            }
            for j in 0..c {
                col_standard[(j, k)] = -col_standard[(j, k)];
            }
        }
    }
    let scale = |m: &Matrix| {
        let mut p = m.clone();
        for i in 0..p.rows() {
            for k in 0..kept {
                p[(i, k)] *= spectrum[k];
            }
        }
        p
    };
    let row_principal = scale(&row_standard);
    let col_principal = scale(&col_standard);

    let inertia_total: f64 = spectrum.iter().map(|l| l * l).sum();
    let inertia_share = spectrum
        .iter()
        .map(|l| if inertia_total > 0.0 { l * l / inertia_total } else { 0.0 })
        .collect();

    Ok(CaModel {
        row_labels: input.row_labels.clone(),
        col_labels: input.col_labels.clone(),
        row_masses: a,
        col_masses: b,
        singular_values: spectrum,
        row_principal,
        col_principal,
        row_standard,
        col_standard,
        inertia_total,
        inertia_share,
    })
}

/// The column coordinate with the largest magnitude must be positive; among
/// near-ties the lexicographically first label decides.
fn needs_flip(col_standard: &Matrix, k: usize, labels: &[String]) -> bool {
    let max = col_standard.column(k).fold(0.0f64, |m, x| m.max(x.abs()));
    if max == 0.0 {
        return false;
    }
    let mut best: Option<(usize, f64)> = None;
    for (j, x) in col_standard.column(k).enumerate() {
        if x.abs() >= max * (1.0 - 1e-9) {
            match best {
                Some((b, _)) if labels[b] <= labels[j] => {}
                _ => best = Some((j, x)),
            }
        }
    }
    best.is_some_and(|(_, x)| x < 0.0)
}

/// A profile projected into an existing solution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SupplementaryProjection {
    pub label: String,
    /// The profile normalized to sum 1. Empty when read back from an export.
    pub profile: Vec<f64>,
    /// Principal coordinates on each retained dimension.
    pub coords: Vec<f64>,
}

/// Projects a supplementary row profile: the normalized profile times the
/// column standard coordinates.
pub fn project_supplementary(model: &CaModel, profile: &[f64], label: &str) -> Result<SupplementaryProjection> {
    if profile.len() != model.col_labels.len() {
        return Err(Error::Shape {
            expected: model.col_labels.len(),
            actual: profile.len(),
        });
    }
    if profile.iter().any(|v| !v.is_finite() || *v < 0.0) {
        return Err(Error::Argument(format!("profile `{label}` has negative or non-finite entries")));
    }
    let sum: f64 = profile.iter().sum();
    if !(sum.is_finite() && sum > 0.0) {
        return Err(Error::Argument(format!("profile `{label}` is all zero")));
    }
    let normalized: Vec<f64> = profile.iter().map(|v| v / sum).collect();
    let coords = (0..model.dims())
        .map(|k| normalized.iter().enumerate().map(|(j, p)| p * model.col_standard[(j, k)]).sum())
        .collect();
    Ok(SupplementaryProjection {
        label: label.to_string(),
        profile: normalized,
        coords,
    })
}

/// Per-year term profiles: the column sums of the matrix rows belonging to
/// each year, ascending by year.
pub fn aggregate_year_profiles(dtm: &DocTermMatrix, corpus: &Corpus) -> Result<Vec<(i32, Vec<f64>)>> {
    let index = corpus.id_index();
    let mut by_year: BTreeMap<i32, Vec<f64>> = BTreeMap::new();
    for (i, id) in dtm.rows().iter().enumerate() {
        let doc = index
            .get(id.as_str())
            .map(|&k| &corpus.documents()[k])
            .ok_or_else(|| Error::Consistency(format!("matrix row `{id}` has no document in the corpus")))?;
        let profile = by_year.entry(doc.year).or_insert_with(|| vec![0.0; dtm.n_cols()]);
        for (j, v) in dtm.counts().row(i) {
            profile[j] += v as f64;
        }
    }
    Ok(by_year
        .into_iter()
        .filter(|(year, p)| {
            let keep = p.iter().sum::<f64>() > 0.0;
            if !keep {
                log::warn!("year {year} has no in-vocabulary tokens; omitted");
            }
            keep
        })
        .collect())
}

/// Euclidean distance between two points in principal coordinates.
pub fn point_distance(model: &CaModel, kind: PointKind, label_a: &str, label_b: &str) -> Result<f64> {
    let a = model.coords_of(kind, label_a)?;
    let b = model.coords_of(kind, label_b)?;
    Ok(euclidean(a, b))
}

fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
}

/// Query point for [`nearest_points`].
#[derive(Debug, Clone, PartialEq)]
pub enum Anchor {
    Label(String),
    Coords(Vec<f64>),
}

/// The `k` points of one side closest to `anchor`, nearest first, ties in
/// label order.
pub fn nearest_points(model: &CaModel, kind: PointKind, anchor: &Anchor, k: usize) -> Result<Vec<(String, f64)>> {
    if k == 0 {
        return Err(Error::Argument("k must be at least 1".into()));
    }
    let center: Vec<f64> = match anchor {
        Anchor::Label(l) => model.coords_of(kind, l)?.to_vec(),
        Anchor::Coords(c) => {
            if c.len() != model.dims() {
                return Err(Error::Shape {
                    expected: model.dims(),
                    actual: c.len(),
                });
            }
            c.clone()
        }
    };
    let (labels, coords) = model.side(kind);
    let mut out: Vec<(String, f64)> = labels
        .iter()
        .enumerate()
        .map(|(i, l)| (l.clone(), euclidean(&center, coords.row(i))))
        .collect();
    out.sort_by(|x, y| x.1.partial_cmp(&y.1).unwrap_or(Ordering::Equal).then_with(|| x.0.cmp(&y.0)));
    out.truncate(k);
    Ok(out)
}

/// Machine-readable summary of a fitted model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaManifest {
    pub dims: usize,
    pub rows: usize,
    pub cols: usize,
    pub singular_values: Vec<f64>,
    pub inertia_total: f64,
    pub inertia_share: Vec<f64>,
    pub sign_convention: String,
}

impl CaModel {
    pub fn manifest(&self) -> CaManifest {
        CaManifest {
            dims: self.dims(),
            rows: self.row_labels.len(),
            cols: self.col_labels.len(),
            singular_values: self.singular_values.clone(),
            inertia_total: self.inertia_total,
            inertia_share: self.inertia_share.clone(),
            sign_convention: SIGN_CONVENTION.to_string(),
        }
    }

    /// Coordinate table: `kind, label, mass, dim1.., contribution_dim1..`.
    /// Supplementary points carry mass 0 and no contribution.
    pub fn write_coordinates_tsv<W: Write>(&self, supplementary: &[SupplementaryProjection], mut out: W) -> std::io::Result<()> {
        let d = self.dims();
        let mut header = vec!["kind".to_string(), "label".into(), "mass".into()];
        header.extend((1..=d).map(|k| format!("dim{k}")));
        header.extend((1..=d).map(|k| format!("contribution_dim{k}")));
        writeln!(out, "{}", header.join("\t"))?;
        for (kind, name) in [(PointKind::Row, "row"), (PointKind::Column, "column")] {
            let (labels, coords) = self.side(kind);
            let masses = match kind {
                PointKind::Row => &self.row_masses,
                PointKind::Column => &self.col_masses,
            };
            let ctr = self.contributions(kind);
            for (i, label) in labels.iter().enumerate() {
                let mut fields = vec![name.to_string(), label.clone(), masses[i].to_string()];
                fields.extend(coords.row(i).iter().map(f64::to_string));
                fields.extend(ctr.row(i).iter().map(f64::to_string));
                writeln!(out, "{}", fields.join("\t"))?;
            }
        }
        for s in supplementary {
            let mut fields = vec!["supplementary".to_string(), s.label.clone(), "0".into()];
            fields.extend(s.coords.iter().map(f64::to_string));
            fields.extend(std::iter::repeat_n("0".to_string(), d));
            writeln!(out, "{}", fields.join("\t"))?;
        }
        Ok(())
    }

    /// Rebuilds a model from its manifest and coordinate table. Standard
    /// coordinates are recovered as principal coordinates divided by `λ`.
    pub fn from_exports(manifest: &CaManifest, coordinates_tsv: &str) -> Result<(CaModel, Vec<SupplementaryProjection>)> {
        let d = manifest.dims;
        let mut rows = Vec::new();
        let mut cols = Vec::new();
        let mut sups = Vec::new();
        for (n, line) in coordinates_tsv.lines().enumerate().skip(1) {
            if line.is_empty() {
                continue;
            }
            let bad = || Error::Consistency(format!("coordinate line {}: `{line}`", n + 1));
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() != 3 + 2 * d {
                return Err(bad());
            }
            let mass: f64 = fields[2].parse().map_err(|_| bad())?;
            let coords = fields[3..3 + d]
                .iter()
                .map(|f| f.parse::<f64>().map_err(|_| bad()))
                .collect::<Result<Vec<f64>>>()?;
            let label = fields[1].to_string();
            match fields[0] {
                "row" => rows.push((label, mass, coords)),
                "column" => cols.push((label, mass, coords)),
                "supplementary" => sups.push(SupplementaryProjection {
                    label,
                    profile: Vec::new(),
                    coords,
                }),
                _ => return Err(bad()),
            }
        }
        if rows.len() != manifest.rows || cols.len() != manifest.cols || manifest.singular_values.len() < d {
            return Err(Error::Consistency("coordinate table does not match the model manifest".into()));
        }
        let lambda = &manifest.singular_values;
        let build = |pts: &[(String, f64, Vec<f64>)]| {
            let principal = Matrix::from_rows(&pts.iter().map(|p| p.2.clone()).collect::<Vec<_>>());
            let mut standard = principal.clone();
            for i in 0..standard.rows() {
                for k in 0..d {
                    standard[(i, k)] /= lambda[k];
                }
            }
            let principal = if pts.is_empty() { Matrix::zeros(0, d) } else { principal };
            let standard = if pts.is_empty() { Matrix::zeros(0, d) } else { standard };
            (
                pts.iter().map(|p| p.0.clone()).collect::<Vec<_>>(),
                pts.iter().map(|p| p.1).collect::<Vec<_>>(),
                principal,
                standard,
            )
        };
        let (row_labels, row_masses, row_principal, row_standard) = build(&rows);
        let (col_labels, col_masses, col_principal, col_standard) = build(&cols);
        Ok((
            CaModel {
                row_labels,
                col_labels,
                row_masses,
                col_masses,
                singular_values: manifest.singular_values.clone(),
                row_principal,
                col_principal,
                row_standard,
                col_standard,
                inertia_total: manifest.inertia_total,
                inertia_share: manifest.inertia_share.clone(),
            },
            sups,
        ))
    }
}

/// A point label with its nearest labels and distances, nearest first.
pub type Neighbours = (String, Vec<(String, f64)>);

/// The `k` column points nearest to each supplementary point, e.g. the terms
/// closest to each year.
pub fn column_neighbours(model: &CaModel, points: &[SupplementaryProjection], k: usize) -> Result<Vec<Neighbours>> {
    points
        .iter()
        .map(|p| nearest_points(model, PointKind::Column, &Anchor::Coords(p.coords.clone()), k).map(|n| (p.label.clone(), n)))
        .collect()
}
