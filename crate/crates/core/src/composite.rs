//! Geometric-mean composite index over technology factors.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::panel::{FactorProfile, KeyMode, TECH_FACTOR_KEYS};

/// How zero-valued factors are treated by [`geometric_mean`].
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum ZeroPolicy {
    /// A zero factor is an error.
    #[default]
    Reject,
    /// Zero factors are dropped and the root is taken over the rest.
    Exclude,
    /// Zero factors are replaced by the given positive value.
    Epsilon(f64),
}

impl ZeroPolicy {
    pub fn epsilon(value: f64) -> Result<Self> {
        if value > 0.0 && value.is_finite() {
            Ok(ZeroPolicy::Epsilon(value))
        } else {
            Err(Error::InvalidEpsilon(value))
        }
    }
}

impl fmt::Display for ZeroPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ZeroPolicy::Reject => f.write_str("reject"),
            ZeroPolicy::Exclude => f.write_str("exclude"),
            ZeroPolicy::Epsilon(e) => write!(f, "epsilon={e}"),
        }
    }
}

impl FromStr for ZeroPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "reject" => Ok(ZeroPolicy::Reject),
            "exclude" => Ok(ZeroPolicy::Exclude),
            _ => match s.strip_prefix("epsilon=") {
                Some(v) => {
                    let value = v
                        .parse::<f64>()
                        .map_err(|_| Error::InvalidArgument(format!("bad epsilon `{v}`")))?;
                    ZeroPolicy::epsilon(value)
                }
                None => Err(Error::InvalidArgument(format!(
                    "zero policy must be reject, exclude or epsilon=<v>, got `{s}`"
                ))),
            },
        }
    }
}

/// Result of applying a [`ZeroPolicy`] to a factor list.
#[derive(Debug, Clone, PartialEq)]
pub struct GeometricMean {
    pub value: f64,
    pub n_factors: usize,
    /// Positions (into the input list) dropped by [`ZeroPolicy::Exclude`].
    pub excluded: Vec<usize>,
}

/// Geometric mean with exclusion details. See [`geometric_mean`].
pub fn geometric_mean_detailed(factors: &[f64], policy: ZeroPolicy) -> Result<GeometricMean> {
    if factors.is_empty() {
        return Err(Error::EmptyFactors);
    }
    let mut kept = Vec::with_capacity(factors.len());
    let mut excluded = Vec::new();
    for (position, &f) in factors.iter().enumerate() {
        if !f.is_finite() {
            return Err(Error::NonFiniteFactor { position });
        }
        if f < 0.0 {
            return Err(Error::NegativeFactor { position, value: f });
        }
        if f == 0.0 {
            match policy {
                ZeroPolicy::Reject => return Err(Error::ZeroFactor { position }),
                ZeroPolicy::Exclude => {
                    excluded.push(position);
                    continue;
                }
                ZeroPolicy::Epsilon(e) => {
                    if !(e > 0.0 && e.is_finite()) {
                        return Err(Error::InvalidEpsilon(e));
                    }
                    kept.push(e);
                    continue;
                }
            }
        }
        kept.push(f);
    }
    if kept.is_empty() {
        return Err(Error::EmptyAfterPolicy);
    }
    // Summing logs in sorted order makes the result independent of input order.
    kept.sort_by(f64::total_cmp);
    let n = kept.len();
    let mean_log = kept.iter().map(|f| f.ln()).sum::<f64>() / n as f64;
    let lo = kept[0];
    let hi = kept[n - 1];
    Ok(GeometricMean {
        value: mean_log.exp().clamp(lo, hi),
        n_factors: n,
        excluded,
    })
}

/// `(f1 * f2 * ... * fn)^(1/n)`, evaluated as `exp(mean(ln f))`.
///
/// Negative and non-finite factors are always rejected; zeros follow `policy`.
pub fn geometric_mean(factors: &[f64], policy: ZeroPolicy) -> Result<f64> {
    geometric_mean_detailed(factors, policy).map(|g| g.value)
}

/// Composite technology level of one country.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TechnologyLevel {
    pub country: String,
    pub value: f64,
    pub n_factors: usize,
    pub excluded_factors: Vec<String>,
}

/// Geometric mean of the six technology factors of `profile`, in canonical order.
///
/// In [`KeyMode::Lenient`] any factors present in the profile are used instead,
/// in key order, and missing canonical factors are not an error.
pub fn technology_level(
    profile: &FactorProfile,
    policy: ZeroPolicy,
    mode: KeyMode,
) -> Result<TechnologyLevel> {
    let (keys, values): (Vec<&str>, Vec<f64>) = match mode {
        KeyMode::Strict => {
            let mut values = Vec::with_capacity(TECH_FACTOR_KEYS.len());
            for key in TECH_FACTOR_KEYS {
                let v = profile.get(key).ok_or_else(|| Error::MissingIndicator {
                    country: profile.country.clone(),
                    indicator: key.to_owned(),
                })?;
                values.push(v);
            }
            (TECH_FACTOR_KEYS.to_vec(), values)
        }
        KeyMode::Lenient => profile
            .factors
            .iter()
            .map(|(k, &v)| (k.as_str(), v))
            .unzip(),
    };
    let gm = geometric_mean_detailed(&values, policy).map_err(|e| match e {
        Error::ZeroFactor { position }
        | Error::NegativeFactor { position, .. }
        | Error::NonFiniteFactor { position } => Error::Factor {
            country: profile.country.clone(),
            indicator: keys[position].to_owned(),
            source: Box::new(e),
        },
        other => other,
    })?;
    Ok(TechnologyLevel {
        country: profile.country.clone(),
        value: gm.value,
        n_factors: gm.n_factors,
        excluded_factors: gm.excluded.iter().map(|&i| keys[i].to_owned()).collect(),
    })
}
