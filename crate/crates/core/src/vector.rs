//! Six-component AI factor vector and its Euclidean magnitude.
//!
//! Components mix units: the technology level is in index points while the
//! rate-like factors are fractions in `[0, 1]`. The magnitude is taken over
//! the raw components, so it is dominated by the technology level.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::panel::{
    FactorProfile, AI_ADOPTION_RATE, AI_MARKET_DEMAND, AI_PRODUCTIVITY, AI_REGULATORY_ENVIRONMENT,
    AI_WORKFORCE,
};

pub const COMPONENT_NAMES: [&str; 6] = [
    "technological_development",
    "ai_adoption",
    "ai_workforce",
    "ai_productivity",
    "market_demand",
    "regulatory_environment",
];

/// Components bounded to `[0, 1]`; the others are only bounded below.
const FRACTIONAL: [bool; 6] = [false, true, false, true, true, true];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AiFactorVector {
    pub country: String,
    pub technological_development: f64,
    pub ai_adoption: f64,
    pub ai_workforce: f64,
    pub ai_productivity: f64,
    pub market_demand: f64,
    pub regulatory_environment: f64,
}

impl AiFactorVector {
    /// Builds a vector from components in [`COMPONENT_NAMES`] order.
    pub fn new(country: impl Into<String>, components: [f64; 6]) -> Result<Self> {
        for ((name, &value), fractional) in COMPONENT_NAMES.iter().zip(&components).zip(FRACTIONAL)
        {
            let ok = value.is_finite() && value >= 0.0 && (!fractional || value <= 1.0);
            if !ok {
                return Err(Error::OutOfRange {
                    component: (*name).to_owned(),
                    value,
                });
            }
        }
        let [td, adoption, workforce, productivity, demand, regulatory] = components;
        Ok(AiFactorVector {
            country: country.into(),
            technological_development: td,
            ai_adoption: adoption,
            ai_workforce: workforce,
            ai_productivity: productivity,
            market_demand: demand,
            regulatory_environment: regulatory,
        })
    }

    pub fn components(&self) -> [f64; 6] {
        [
            self.technological_development,
            self.ai_adoption,
            self.ai_workforce,
            self.ai_productivity,
            self.market_demand,
            self.regulatory_environment,
        ]
    }
}

/// Combines a technology level with the five AI factors of `ai_factors`.
///
/// Rate-like factors must already be fractions (`0.48`, not `48`).
pub fn build_vector(
    country: &str,
    technological_development: f64,
    ai_factors: &FactorProfile,
) -> Result<AiFactorVector> {
    let get = |key: &str| {
        ai_factors.get(key).ok_or_else(|| Error::MissingIndicator {
            country: country.to_owned(),
            indicator: key.to_owned(),
        })
    };
    AiFactorVector::new(
        country,
        [
            technological_development,
            get(AI_ADOPTION_RATE)?,
            get(AI_WORKFORCE)?,
            get(AI_PRODUCTIVITY)?,
            get(AI_MARKET_DEMAND)?,
            get(AI_REGULATORY_ENVIRONMENT)?,
        ],
    )
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VectorMagnitude {
    pub country: String,
    pub value: f64,
}

/// Euclidean norm over the six raw components.
pub fn magnitude(v: &AiFactorVector) -> VectorMagnitude {
    let value = v.components().iter().map(|c| c * c).sum::<f64>().sqrt();
    VectorMagnitude {
        country: v.country.clone(),
        value,
    }
}

/// Rescales each component to `[0, 1]` across `vectors` (min-max per component).
///
/// A component that is constant across all vectors maps to 0.
pub fn min_max_normalize(vectors: &[AiFactorVector]) -> Vec<AiFactorVector> {
    let mut lo = [f64::INFINITY; 6];
    let mut hi = [f64::NEG_INFINITY; 6];
    for v in vectors {
        for (i, c) in v.components().into_iter().enumerate() {
            lo[i] = lo[i].min(c);
            hi[i] = hi[i].max(c);
        }
    }
    vectors
        .iter()
        .map(|v| {
            let mut out = v.components();
            for (i, c) in out.iter_mut().enumerate() {
                let span = hi[i] - lo[i];
                *c = if span > 0.0 {
                    ((*c - lo[i]) / span).clamp(0.0, 1.0)
                } else {
                    0.0
                };
            }
            AiFactorVector::new(v.country.clone(), out)
                .expect("normalized components lie in [0, 1]")
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::BTreeMap;

    const SHARED: [f64; 3] = [0.626, 0.613, 0.487];

    fn ai_profile(country: &str, adoption: f64, workforce: f64) -> FactorProfile {
        let factors: BTreeMap<String, f64> = [
            (AI_ADOPTION_RATE, adoption),
            (AI_WORKFORCE, workforce),
            (AI_PRODUCTIVITY, SHARED[0]),
            (AI_MARKET_DEMAND, SHARED[1]),
            (AI_REGULATORY_ENVIRONMENT, SHARED[2]),
        ]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect();
        FactorProfile {
            country: country.into(),
            years_used: factors.keys().map(|k| (k.clone(), 1)).collect(),
            factors,
        }
    }

    #[test]
    fn georgia_vector_matches_table() {
        let v = build_vector("GEO", 6.01, &ai_profile("GEO", 0.48, 0.52)).unwrap();
        assert_eq!(v.components(), [6.01, 0.48, 0.52, 0.626, 0.613, 0.487]);
        assert!((magnitude(&v).value - 6.13).abs() <= 0.01);
    }

    #[test]
    fn usa_magnitude() {
        let v = AiFactorVector::new("USA", [326.85, 0.50, 47.38, 0.626, 0.613, 0.487]).unwrap();
        assert!((magnitude(&v).value - 330.27).abs() <= 0.005);
    }

    #[test]
    fn range_errors() {
        let err = AiFactorVector::new("X", [1.0, 1.5, 0.0, 0.0, 0.0, 0.0]).unwrap_err();
        assert_eq!(
            err,
            Error::OutOfRange {
                component: "ai_adoption".into(),
                value: 1.5
            }
        );
        assert!(AiFactorVector::new("X", [-1.0, 0.5, 0.0, 0.0, 0.0, 0.0]).is_err());
        assert!(AiFactorVector::new("X", [1.0, 0.5, -0.1, 0.0, 0.0, 0.0]).is_err());
        assert!(AiFactorVector::new("X", [f64::NAN, 0.5, 0.0, 0.0, 0.0, 0.0]).is_err());
        // unbounded above for the non-fractional components
        assert!(AiFactorVector::new("X", [1e6, 0.5, 1e3, 0.0, 0.0, 0.0]).is_ok());
    }

    #[test]
    fn missing_ai_factor() {
        let mut p = ai_profile("GEO", 0.48, 0.52);
        p.factors.remove(AI_WORKFORCE);
        assert_eq!(
            build_vector("GEO", 6.01, &p),
            Err(Error::MissingIndicator {
                country: "GEO".into(),
                indicator: AI_WORKFORCE.into()
            })
        );
    }

    #[test]
    fn degenerate_vectors() {
        let v = build_vector("X", 0.0, &ai_profile("X", 0.5, 0.0)).unwrap();
        assert!(magnitude(&v).value > 0.0);
        let zero = AiFactorVector::new("Z", [0.0; 6]).unwrap();
        assert_eq!(magnitude(&zero).value, 0.0);
        for i in 0..6 {
            let mut c = [0.0; 6];
            c[i] = 0.75;
            assert_eq!(magnitude(&AiFactorVector::new("S", c).unwrap()).value, 0.75);
        }
    }

    #[test]
    fn normalization_maps_into_unit_box() {
        let vs = vec![
            AiFactorVector::new("A", [6.01, 0.48, 0.52, 0.626, 0.613, 0.487]).unwrap(),
            AiFactorVector::new("B", [326.85, 0.50, 47.38, 0.626, 0.613, 0.487]).unwrap(),
            AiFactorVector::new("C", [95.65, 0.55, 1.22, 0.626, 0.613, 0.487]).unwrap(),
        ];
        let n = min_max_normalize(&vs);
        assert_eq!(n[0].technological_development, 0.0);
        assert_eq!(n[1].technological_development, 1.0);
        assert_eq!(n[2].ai_adoption, 1.0);
        assert_eq!(n[0].ai_productivity, 0.0);
    }

    fn vec6() -> impl Strategy<Value = [f64; 6]> {
        (
            0.0..500.0f64,
            0.0..=1.0f64,
            0.0..100.0f64,
            0.0..=1.0f64,
            0.0..=1.0f64,
            0.0..=1.0f64,
        )
            .prop_map(|(a, b, c, d, e, f)| [a, b, c, d, e, f])
    }

    fn mag(c: [f64; 6]) -> f64 {
        magnitude(&AiFactorVector::new("P", c).unwrap()).value
    }

    proptest! {
        #[test]
        fn homogeneous_and_bounded(c in vec6(), k in 0.0..1.0f64) {
            let m = mag(c);
            let scaled = c.map(|x| x * k);
            prop_assert!((mag(scaled) - k * m).abs() <= 1e-12 * m.max(f64::MIN_POSITIVE));
            let max = c.iter().copied().fold(0.0, f64::max);
            prop_assert!(m >= max);
            prop_assert!(m <= 6f64.sqrt() * max * (1.0 + 1e-15));
        }

        #[test]
        fn triangle_inequality(u in vec6(), v in vec6()) {
            // halve both so fractional components of the sum stay within [0, 1]
            let u = u.map(|x| x / 2.0);
            let v = v.map(|x| x / 2.0);
            let sum: [f64; 6] = std::array::from_fn(|i| u[i] + v[i]);
            prop_assert!(mag(sum) <= (mag(u) + mag(v)) * (1.0 + 1e-15));
        }

        #[test]
        fn strictly_monotone(c in vec6(), i in 0..6usize, bump in 0.01..0.5f64) {
            let mut up = c;
            let cap = if FRACTIONAL[i] { 1.0 } else { f64::INFINITY };
            up[i] = (c[i] + bump).min(cap);
            prop_assume!(up[i] > c[i]);
            prop_assert!(mag(up) > mag(c));
        }
    }
}
