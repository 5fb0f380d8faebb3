use serde::{Deserialize, Serialize};

use super::series::{Column, SegmentSeries};

pub const DEFAULT_EPSILON: f64 = 1e-9;

/// Direction of a trend line: rising similarity is convergence, falling is
/// divergence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Classification {
    Convergence,
    Divergence,
    Flat,
}

impl Classification {
    pub fn of_slope(k: f64, eps: f64) -> Self {
        if k > eps {
            Classification::Convergence
        } else if k < -eps {
            Classification::Divergence
        } else {
            Classification::Flat
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Classification::Convergence => "convergence",
            Classification::Divergence => "divergence",
            Classification::Flat => "flat",
        }
    }
}

/// Trend line `y = k·t + b`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Trend {
    #[serde(rename = "k")]
    pub slope: f64,
    #[serde(rename = "b")]
    pub intercept: f64,
    pub classification: Classification,
}

impl Trend {
    pub fn predict(&self, t: f64) -> f64 {
        self.slope * t + self.intercept
    }
}

/// Ordinary least squares on the points `(t, y[t-1])`, `t = first, first+1, …`.
pub fn fit_line(y: &[f64], first: usize, eps: f64) -> Trend {
    let n = y.len() as f64;
    assert!(y.len() >= 2, "a trend needs at least two points");
    let t_mean = first as f64 + (n - 1.0) / 2.0;
    let y_mean = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (i, &v) in y.iter().enumerate() {
        let dt = (first + i) as f64 - t_mean;
        sxy += dt * (v - y_mean);
        sxx += dt * dt;
    }
    let slope = sxy / sxx;
    Trend { slope, intercept: y_mean - slope * t_mean, classification: Classification::of_slope(slope, eps) }
}

/// Trend line with `t = 1..=T`.
pub fn fit(y: &[f64], eps: f64) -> Trend {
    fit_line(y, 1, eps)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ColumnTrend {
    pub column: Column,
    #[serde(flatten)]
    pub trend: Trend,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrendReport {
    pub group: String,
    pub trends: Vec<ColumnTrend>,
    pub noun_tokens: Vec<usize>,
    pub unique_nouns: Vec<usize>,
}

/// Fits every column of a series. Time points are numbered from the
/// series' own `t` values, so a second phase continues the first's axis.
pub fn fit_trend(series: &SegmentSeries, eps: f64) -> TrendReport {
    let first = series.points.first().map_or(1, |p| p.t);
    let trends = series
        .columns
        .iter()
        .enumerate()
        .map(|(i, &column)| {
            let y: Vec<f64> = series.points.iter().map(|p| p.values[i]).collect();
            ColumnTrend { column, trend: fit_line(&y, first, eps) }
        })
        .collect();
    TrendReport {
        group: series.group.clone(),
        trends,
        noun_tokens: series.points.iter().map(|p| p.noun_tokens).collect(),
        unique_nouns: series.points.iter().map(|p| p.unique_nouns.len()).collect(),
    }
}
