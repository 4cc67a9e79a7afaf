//! Quadratic publication-trend model.
//!
//! Years are mapped to `x = year - first_year + 1`, so the first observed
//! year is `x = 1`, and `y(x) = c2·x² + c1·x + c0` is fitted by ordinary
//! least squares.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stats::YearlyCounts;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrendFit {
    pub c2: f64,
    pub c1: f64,
    pub c0: f64,
    /// `1 - SS_res / SS_tot`; `None` when the series is constant.
    pub r_squared: Option<f64>,
    /// The year mapped to `x = 1`.
    pub first_year: i32,
}

impl TrendFit {
    pub fn x_of_year(&self, year: i32) -> f64 {
        f64::from(year - self.first_year + 1)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.c2 * x * x + self.c1 * x + self.c0
    }
}

/// Model value for a calendar year. No clamping: forecasts may go negative.
pub fn predict_trend(fit: &TrendFit, year: i32) -> f64 {
    fit.eval(fit.x_of_year(year))
}

pub fn fit_quadratic_trend(series: &YearlyCounts) -> Result<TrendFit> {
    let n = series.counts.len();
    if n < 3 {
        return Err(Error::InsufficientData(n));
    }
    let xs: Vec<f64> = (1..=n).map(|x| x as f64).collect();
    let ys: Vec<f64> = series.counts.iter().map(|&c| c as f64).collect();
    let [c2, c1, c0] = least_squares_quadratic(&xs, &ys);

    let mean = ys.iter().sum::<f64>() / n as f64;
    let ss_tot: f64 = ys.iter().map(|y| (y - mean).powi(2)).sum();
    let ss_res: f64 = xs.iter().zip(&ys).map(|(&x, &y)| (y - (c2 * x * x + c1 * x + c0)).powi(2)).sum();
    Ok(TrendFit {
        c2,
        c1,
        c0,
        r_squared: (ss_tot > 0.0).then(|| 1.0 - ss_res / ss_tot),
        first_year: series.first_year,
    })
}

/// Solves `min ‖A c - y‖` for the design `A = [x², x, 1]` with Householder QR.
#[allow(clippy::needless_range_loop)] // Householder updates index rows and columns together
fn least_squares_quadratic(xs: &[f64], ys: &[f64]) -> [f64; 3] {
    let n = xs.len();
    let mut a: Vec<[f64; 3]> = xs.iter().map(|&x| [x * x, x, 1.0]).collect();
    let mut b = ys.to_vec();

    for k in 0..3 {
        let norm = (k..n).map(|i| a[i][k] * a[i][k]).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let alpha = if a[k][k] > 0.0 { -norm } else { norm };
        let mut v: Vec<f64> = (k..n).map(|i| a[i][k]).collect();
        v[0] -= alpha;
        let vnorm2: f64 = v.iter().map(|e| e * e).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        for j in k..3 {
            let dot: f64 = (k..n).map(|i| v[i - k] * a[i][j]).sum();
            let f = 2.0 * dot / vnorm2;
            for i in k..n {
                a[i][j] -= f * v[i - k];
            }
        }
        let dot: f64 = (k..n).map(|i| v[i - k] * b[i]).sum();
        let f = 2.0 * dot / vnorm2;
        for i in k..n {
            b[i] -= f * v[i - k];
        }
    }

    let mut c = [0.0; 3];
    for k in (0..3).rev() {
        let s: f64 = (k + 1..3).map(|j| a[k][j] * c[j]).sum();
        c[k] = (b[k] - s) / a[k][k];
    }
    c
}
