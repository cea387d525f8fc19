//! Simple log-log regression with Pearson correlation and a two-sided t-test.
//!
//! All centered sums are computed in two passes (means first). The variance
//! normalizer (n or n - 1) cancels out of the slope, r and r², so none is applied.

pub mod special;

use serde::Serialize;

use crate::error::{Error, Result};

/// `1 - r²` at or below this is treated as an exact fit.
pub const PERFECT_FIT_TOLERANCE: f64 = 1e-12;

/// Default relative tolerance for [`audit_reported`].
pub const DEFAULT_AUDIT_TOLERANCE: f64 = 0.25;

/// Paired observations, e.g. one point per year.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesPair {
    labels: Vec<String>,
    x: Vec<f64>,
    y: Vec<f64>,
}

impl SeriesPair {
    /// Validates equal lengths, `n >= 3` and finiteness.
    ///
    /// An empty `labels` list is filled with `1..=n`.
    pub fn new(labels: Vec<String>, x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        let labels = if labels.is_empty() {
            (1..=x.len()).map(|i| i.to_string()).collect()
        } else {
            labels
        };
        if x.len() != y.len() || labels.len() != x.len() {
            return Err(Error::LengthMismatch {
                x: x.len(),
                y: y.len(),
                labels: labels.len(),
            });
        }
        if x.len() < 3 {
            return Err(Error::TooFewPoints(x.len()));
        }
        if let Some(index) = x.iter().chain(&y).position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteValue {
                index: index % x.len(),
            });
        }
        Ok(SeriesPair { labels, x, y })
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    /// The same pair with the roles of x and y exchanged.
    pub fn swapped(&self) -> SeriesPair {
        SeriesPair {
            labels: self.labels.clone(),
            x: self.y.clone(),
            y: self.x.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct CenteredSums {
    mean_x: f64,
    mean_y: f64,
    sxx: f64,
    syy: f64,
    sxy: f64,
}

fn centered_sums(pair: &SeriesPair) -> CenteredSums {
    let n = pair.len() as f64;
    let mean_x = pair.x.iter().sum::<f64>() / n;
    let mean_y = pair.y.iter().sum::<f64>() / n;
    let (mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0);
    for (&x, &y) in pair.x.iter().zip(&pair.y) {
        let dx = x - mean_x;
        let dy = y - mean_y;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    CenteredSums {
        mean_x,
        mean_y,
        sxx,
        syy,
        sxy,
    }
}

/// Element-wise natural logarithm. Every value must be strictly positive.
pub fn log_transform(values: &[f64]) -> Result<Vec<f64>> {
    values
        .iter()
        .enumerate()
        .map(|(index, &v)| {
            if !v.is_finite() {
                Err(Error::NonFiniteValue { index })
            } else if v <= 0.0 {
                Err(Error::NonPositiveValue { index, value: v })
            } else {
                Ok(v.ln())
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OlsFit {
    pub slope: f64,
    pub intercept: f64,
}

/// Least-squares line `y = intercept + slope * x`.
pub fn ols_fit(pair: &SeriesPair) -> Result<OlsFit> {
    let s = centered_sums(pair);
    if s.sxx <= 0.0 {
        return Err(Error::DegenerateRegressor);
    }
    let slope = s.sxy / s.sxx;
    Ok(OlsFit {
        slope,
        intercept: s.mean_y - slope * s.mean_x,
    })
}

/// Pearson correlation, clamped to `[-1, 1]`.
pub fn pearson_r(pair: &SeriesPair) -> Result<f64> {
    let s = centered_sums(pair);
    if s.sxx <= 0.0 {
        return Err(Error::DegenerateSeries("x"));
    }
    if s.syy <= 0.0 {
        return Err(Error::DegenerateSeries("y"));
    }
    Ok((s.sxy / (s.sxx * s.syy).sqrt()).clamp(-1.0, 1.0))
}

pub fn r_squared(r: f64) -> f64 {
    r * r
}

/// Slope test statistic `r √(n−2) / √(1−r²)`.
pub fn t_statistic(r: f64, n: usize) -> Result<f64> {
    if n < 3 {
        return Err(Error::TooFewPoints(n));
    }
    if !(-1.0..=1.0).contains(&r) {
        return Err(Error::InvalidArgument(format!("r = {r} outside [-1, 1]")));
    }
    if r.abs() == 1.0 {
        return Err(Error::InfiniteStatistic);
    }
    Ok(r * ((n - 2) as f64).sqrt() / (1.0 - r * r).sqrt())
}

/// Survival function P(T > t) of Student's t with `df` degrees of freedom.
///
/// Uses `P(T > t) = ½ I_{df/(df+t²)}(df/2, ½)` for `t >= 0` and reflects for
/// negative `t`.
pub fn student_t_sf(t: f64, df: u64) -> f64 {
    assert!(df >= 1, "degrees of freedom must be at least 1");
    if t.is_nan() {
        return f64::NAN;
    }
    if t < 0.0 {
        return 1.0 - student_t_sf(-t, df);
    }
    if t.is_infinite() {
        return 0.0;
    }
    let nu = df as f64;
    let t2 = t * t;
    let x = nu / (nu + t2);
    let one_minus_x = t2 / (nu + t2);
    0.5 * special::reg_inc_beta_with_complement(nu / 2.0, 0.5, x, one_minus_x)
}

/// `2 · P(T > |t|)`, capped at 1.
pub fn two_sided_p(t: f64, df: u64) -> f64 {
    (2.0 * student_t_sf(t.abs(), df)).min(1.0)
}

/// Full output of [`regress_loglog`].
///
/// For a perfect fit `t_stat` and `p_value` are `None` and `perfect_fit` is set:
/// the statistic is infinite and the p-value is below any printable bound.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegressionResult {
    pub slope_b1: f64,
    pub intercept_b0: f64,
    pub pearson_r: f64,
    pub r_squared: f64,
    pub t_stat: Option<f64>,
    pub df: u64,
    pub p_value: Option<f64>,
    pub n: usize,
    pub perfect_fit: bool,
}

/// Runs OLS, Pearson r, r² and the two-sided t-test on an already transformed pair.
pub fn regress(pair: &SeriesPair) -> Result<RegressionResult> {
    let fit = ols_fit(pair)?;
    let r = pearson_r(pair)?;
    let n = pair.len();
    let df = (n - 2) as u64;
    let r2 = r_squared(r);
    let perfect_fit = 1.0 - r2 <= PERFECT_FIT_TOLERANCE;
    let (t_stat, p_value) = if perfect_fit {
        (None, None)
    } else {
        let t = t_statistic(r, n)?;
        (Some(t), Some(two_sided_p(t, df)))
    };
    Ok(RegressionResult {
        slope_b1: fit.slope,
        intercept_b0: fit.intercept,
        pearson_r: r,
        r_squared: r2,
        t_stat,
        df,
        p_value,
        n,
        perfect_fit,
    })
}

/// Natural-log transform of both series followed by [`regress`].
pub fn regress_loglog(x_raw: &[f64], y_raw: &[f64], labels: &[String]) -> Result<RegressionResult> {
    let pair = loglog_pair(x_raw, y_raw, labels)?;
    regress(&pair)
}

/// Validated `(ln x, ln y)` pair.
pub fn loglog_pair(x_raw: &[f64], y_raw: &[f64], labels: &[String]) -> Result<SeriesPair> {
    if x_raw.len() != y_raw.len() || (!labels.is_empty() && labels.len() != x_raw.len()) {
        return Err(Error::LengthMismatch {
            x: x_raw.len(),
            y: y_raw.len(),
            labels: labels.len(),
        });
    }
    SeriesPair::new(
        labels.to_vec(),
        log_transform(x_raw)?,
        log_transform(y_raw)?,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum AuditVerdict {
    Consistent,
    Inconsistent,
    /// r² = 1: the implied statistic is infinite, no p comparison is made.
    PerfectFit,
}

impl std::fmt::Display for AuditVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            AuditVerdict::Consistent => "CONSISTENT",
            AuditVerdict::Inconsistent => "INCONSISTENT",
            AuditVerdict::PerfectFit => "PERFECT_FIT",
        })
    }
}

/// Whether a reported (n, r², p) triple can come from the standard slope t-test.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditReport {
    pub n: usize,
    pub df: u64,
    pub r_squared_reported: f64,
    pub p_reported: f64,
    pub implied_abs_t: Option<f64>,
    pub implied_p: Option<f64>,
    /// implied p / reported p
    pub p_ratio: Option<f64>,
    /// |implied p − reported p| / reported p
    pub p_relative_diff: Option<f64>,
    pub tolerance: f64,
    pub verdict: AuditVerdict,
}

/// Recomputes |t| and the two-sided p implied by `n` and `r_squared_reported`
/// and compares the p-value against `p_reported` at relative `tolerance`.
pub fn audit_reported(
    n: usize,
    r_squared_reported: f64,
    p_reported: f64,
    tolerance: f64,
) -> Result<AuditReport> {
    if n < 3 {
        return Err(Error::TooFewPoints(n));
    }
    if !(0.0..=1.0).contains(&r_squared_reported) {
        return Err(Error::InvalidArgument(format!(
            "r² = {r_squared_reported} outside [0, 1]"
        )));
    }
    if !(p_reported > 0.0 && p_reported <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "p = {p_reported} outside (0, 1]"
        )));
    }
    if !(tolerance >= 0.0 && tolerance.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "tolerance {tolerance} must be nonnegative"
        )));
    }
    let df = (n - 2) as u64;
    let mut report = AuditReport {
        n,
        df,
        r_squared_reported,
        p_reported,
        implied_abs_t: None,
        implied_p: None,
        p_ratio: None,
        p_relative_diff: None,
        tolerance,
        verdict: AuditVerdict::PerfectFit,
    };
    if r_squared_reported == 1.0 {
        return Ok(report);
    }
    let t = (r_squared_reported * df as f64 / (1.0 - r_squared_reported)).sqrt();
    let p = two_sided_p(t, df);
    let rel = (p - p_reported).abs() / p_reported;
    report.implied_abs_t = Some(t);
    report.implied_p = Some(p);
    report.p_ratio = Some(p / p_reported);
    report.p_relative_diff = Some(rel);
    report.verdict = if rel <= tolerance {
        AuditVerdict::Consistent
    } else {
        AuditVerdict::Inconsistent
    };
    Ok(report)
}
