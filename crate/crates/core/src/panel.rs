//! Long-format country indicator panels.
//!
//! A panel is read from CSV with the fixed header `country,indicator,year,value`
//! and can be collapsed over a year interval into one [`FactorProfile`] per
//! country with [`aggregate`].

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

pub const PANEL_HEADER: [&str; 4] = ["country", "indicator", "year", "value"];

pub const INNOVATION_INDEX: &str = "innovation_index";
pub const RND_EXPENDITURE_PCT_GDP: &str = "rnd_expenditure_pct_gdp";
pub const IT_EXPORTS_PCT_GOODS: &str = "it_exports_pct_goods";
pub const HIGH_TECH_EXPORTS_MUSD: &str = "high_tech_exports_musd";
pub const HIGH_TECH_EXPORTS_PCT_MANUFACTURED: &str = "high_tech_exports_pct_manufactured";
pub const PATENT_APPLICATIONS_RESIDENTS: &str = "patent_applications_residents";

pub const GDP_PER_CAPITA_USD: &str = "gdp_per_capita_usd";

pub const AI_ADOPTION_RATE: &str = "ai_adoption_rate";
pub const AI_WORKFORCE: &str = "ai_workforce";
pub const AI_PRODUCTIVITY: &str = "ai_productivity";
pub const AI_MARKET_DEMAND: &str = "ai_market_demand";
pub const AI_REGULATORY_ENVIRONMENT: &str = "ai_regulatory_environment";

/// Precomputed composite technology level, used when a vector input carries
/// the index directly instead of its six factors.
pub const TECHNOLOGY_LEVEL: &str = "technology_level";
/// Precomputed AI factor vector magnitude, the regressor of the GDP regression.
pub const VECTOR_MAGNITUDE: &str = "vector_magnitude";

/// The six technology factors in canonical order.
pub const TECH_FACTOR_KEYS: [&str; 6] = [
    INNOVATION_INDEX,
    RND_EXPENDITURE_PCT_GDP,
    IT_EXPORTS_PCT_GOODS,
    HIGH_TECH_EXPORTS_MUSD,
    HIGH_TECH_EXPORTS_PCT_MANUFACTURED,
    PATENT_APPLICATIONS_RESIDENTS,
];

/// The five AI factors in canonical order.
pub const AI_FACTOR_KEYS: [&str; 5] = [
    AI_ADOPTION_RATE,
    AI_WORKFORCE,
    AI_PRODUCTIVITY,
    AI_MARKET_DEMAND,
    AI_REGULATORY_ENVIRONMENT,
];

pub fn is_canonical_key(key: &str) -> bool {
    TECH_FACTOR_KEYS.contains(&key)
        || AI_FACTOR_KEYS.contains(&key)
        || matches!(
            key,
            GDP_PER_CAPITA_USD | TECHNOLOGY_LEVEL | VECTOR_MAGNITUDE
        )
}

/// Whether unknown indicator keys are rejected during ingestion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum KeyMode {
    #[default]
    Strict,
    Lenient,
}

pub const MIN_YEAR: i32 = 1900;
pub const MAX_YEAR: i32 = 2100;

#[derive(Debug, Clone, PartialEq)]
pub struct IndicatorObservation {
    pub country: String,
    pub indicator: String,
    pub year: i32,
    pub value: f64,
}

type ObservationKey = (String, String, i32);

/// An immutable set of observations, unique on `(country, indicator, year)`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct IndicatorPanel {
    observations: BTreeMap<ObservationKey, f64>,
}

impl IndicatorPanel {
    /// Builds a panel, rejecting duplicate triples and invalid observations.
    pub fn from_observations<I>(observations: I) -> Result<Self>
    where
        I: IntoIterator<Item = IndicatorObservation>,
    {
        let mut panel = IndicatorPanel::default();
        for obs in observations {
            if !(MIN_YEAR..=MAX_YEAR).contains(&obs.year) {
                return Err(Error::InvalidArgument(format!(
                    "year {} outside [{MIN_YEAR}, {MAX_YEAR}]",
                    obs.year
                )));
            }
            if !obs.value.is_finite() {
                return Err(Error::InvalidArgument(format!(
                    "non-finite value for ({}, {}, {})",
                    obs.country, obs.indicator, obs.year
                )));
            }
            panel.insert(obs)?;
        }
        Ok(panel)
    }

    fn insert(&mut self, obs: IndicatorObservation) -> Result<()> {
        let key = (obs.country, obs.indicator, obs.year);
        if self.observations.contains_key(&key) {
            let (country, indicator, year) = key;
            return Err(Error::DuplicateKey {
                country,
                indicator,
                year,
            });
        }
        self.observations.insert(key, obs.value);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.observations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.observations.is_empty()
    }

    /// Observations sorted by country, indicator, then year.
    pub fn observations(&self) -> impl Iterator<Item = IndicatorObservation> + '_ {
        self.observations.iter().map(
            |((country, indicator, year), &value)| IndicatorObservation {
                country: country.clone(),
                indicator: indicator.clone(),
                year: *year,
                value,
            },
        )
    }

    pub fn countries(&self) -> BTreeSet<&str> {
        self.observations
            .keys()
            .map(|(c, _, _)| c.as_str())
            .collect()
    }

    pub fn indicators_for(&self, country: &str) -> BTreeSet<&str> {
        self.observations
            .keys()
            .filter(|(c, _, _)| c == country)
            .map(|(_, i, _)| i.as_str())
            .collect()
    }

    /// Smallest and largest year present, if any.
    pub fn year_range(&self) -> Option<(i32, i32)> {
        let mut years = self.observations.keys().map(|(_, _, y)| *y);
        let first = years.next()?;
        Some(years.fold((first, first), |(lo, hi), y| (lo.min(y), hi.max(y))))
    }

    pub fn get(&self, country: &str, indicator: &str, year: i32) -> Option<f64> {
        self.observations
            .get(&(country.to_owned(), indicator.to_owned(), year))
            .copied()
    }

    /// `(year, value)` pairs for one country and indicator within `years`, ascending by year.
    pub fn series(&self, country: &str, indicator: &str, years: YearRange) -> Vec<(i32, f64)> {
        let lo = (country.to_owned(), indicator.to_owned(), years.start);
        let hi = (country.to_owned(), indicator.to_owned(), years.end);
        self.observations
            .range(lo..=hi)
            .map(|((_, _, y), &v)| (*y, v))
            .collect()
    }

    /// Renders the panel in the canonical CSV schema.
    pub fn to_csv(&self) -> String {
        let mut out = PANEL_HEADER.join(",");
        out.push('\n');
        for ((country, indicator, year), value) in &self.observations {
            out.push_str(&format!("{country},{indicator},{year},{value}\n"));
        }
        out
    }
}

/// Parses a numeric cell. A trailing `%` divides the value by 100.
pub fn parse_value(cell: &str) -> Option<f64> {
    let cell = cell.trim();
    let (number, scale) = match cell.strip_suffix('%') {
        Some(rest) => (rest.trim_end(), 100.0),
        None => (cell, 1.0),
    };
    if number.is_empty() || number.contains(',') {
        return None;
    }
    let v: f64 = number.parse().ok()?;
    if !v.is_finite() {
        return None;
    }
    Some(v / scale)
}

/// Parses a panel from CSV text with the header `country,indicator,year,value`.
pub fn parse_panel_csv(text: &str, mode: KeyMode) -> Result<IndicatorPanel> {
    let text = text.strip_prefix('\u{feff}').unwrap_or(text);
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());

    let mut panel = IndicatorPanel::default();
    let mut saw_header = false;
    let mut record = csv::StringRecord::new();
    loop {
        let more = reader.read_record(&mut record).map_err(|e| Error::Parse {
            line: e.position().map_or(0, |p| p.line() as usize),
            message: e.to_string(),
        })?;
        if !more {
            break;
        }
        let line = record.position().map_or(0, |p| p.line() as usize);
        if !saw_header {
            if record.iter().ne(PANEL_HEADER.iter().copied()) {
                return Err(Error::Header {
                    line,
                    found: record.iter().collect::<Vec<_>>().join(","),
                });
            }
            saw_header = true;
            continue;
        }
        if record.len() != 4 {
            return Err(Error::Parse {
                line,
                message: format!("expected 4 columns, found {}", record.len()),
            });
        }
        let country = &record[0];
        let indicator = &record[1];
        if country.is_empty() || indicator.is_empty() {
            return Err(Error::Parse {
                line,
                message: "empty country or indicator".into(),
            });
        }
        if mode == KeyMode::Strict && !is_canonical_key(indicator) {
            return Err(Error::Schema {
                line,
                indicator: indicator.to_owned(),
            });
        }
        let year: i32 = record[2].parse().map_err(|_| Error::Parse {
            line,
            message: format!("unparseable year `{}`", &record[2]),
        })?;
        if !(MIN_YEAR..=MAX_YEAR).contains(&year) {
            return Err(Error::Parse {
                line,
                message: format!("year {year} outside [{MIN_YEAR}, {MAX_YEAR}]"),
            });
        }
        let value = parse_value(&record[3]).ok_or_else(|| Error::Parse {
            line,
            message: format!("unparseable value `{}`", &record[3]),
        })?;
        panel.insert(IndicatorObservation {
            country: country.to_owned(),
            indicator: indicator.to_owned(),
            year,
            value,
        })?;
    }
    if !saw_header {
        return Err(Error::Header {
            line: 1,
            found: String::new(),
        });
    }
    Ok(panel)
}

/// Inclusive calendar year interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct YearRange {
    pub start: i32,
    pub end: i32,
}

impl YearRange {
    pub fn new(start: i32, end: i32) -> Result<Self> {
        if start > end {
            return Err(Error::InvalidYears(format!("{start}:{end} is empty")));
        }
        Ok(YearRange { start, end })
    }

    pub fn contains(&self, year: i32) -> bool {
        (self.start..=self.end).contains(&year)
    }
}

impl Default for YearRange {
    fn default() -> Self {
        YearRange {
            start: 2011,
            end: 2022,
        }
    }
}

impl fmt::Display for YearRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.start, self.end)
    }
}

impl FromStr for YearRange {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (a, b) = s
            .split_once(':')
            .ok_or_else(|| Error::InvalidYears(format!("`{s}` is not <start>:<end>")))?;
        let parse = |t: &str| {
            t.trim()
                .parse::<i32>()
                .map_err(|_| Error::InvalidYears(format!("`{t}` is not a year")))
        };
        YearRange::new(parse(a)?, parse(b)?)
    }
}

/// Per-year weights for [`aggregate`].
#[derive(Debug, Clone, PartialEq, Default)]
pub enum WeightScheme {
    #[default]
    Uniform,
    /// Years absent from the map carry weight zero.
    Explicit(BTreeMap<i32, f64>),
}

impl WeightScheme {
    pub fn explicit(weights: BTreeMap<i32, f64>) -> Result<Self> {
        if let Some((year, w)) = weights.iter().find(|(_, w)| !w.is_finite() || **w < 0.0) {
            return Err(Error::InvalidWeights(format!(
                "weight for {year} must be finite and nonnegative, got {w}"
            )));
        }
        if !weights.values().any(|&w| w > 0.0) {
            return Err(Error::InvalidWeights(
                "at least one weight must be positive".into(),
            ));
        }
        Ok(WeightScheme::Explicit(weights))
    }

    pub fn weight(&self, year: i32) -> f64 {
        match self {
            WeightScheme::Uniform => 1.0,
            WeightScheme::Explicit(map) => map.get(&year).copied().unwrap_or(0.0),
        }
    }
}

/// Parses a `year,weight` CSV into an explicit weight scheme.
pub fn parse_weights_csv(text: &str) -> Result<WeightScheme> {
    let text = text.strip_prefix('\u{feff}').unwrap_or(text);
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| Error::InvalidWeights(e.to_string()))?;
    if headers.iter().ne(["year", "weight"]) {
        return Err(Error::InvalidWeights(
            "expected header `year,weight`".into(),
        ));
    }
    let mut weights = BTreeMap::new();
    for record in reader.records() {
        let record = record.map_err(|e| Error::InvalidWeights(e.to_string()))?;
        let line = record.position().map_or(0, |p| p.line());
        let year: i32 = record[0]
            .parse()
            .map_err(|_| Error::InvalidWeights(format!("line {line}: bad year")))?;
        let weight = parse_value(&record[1])
            .ok_or_else(|| Error::InvalidWeights(format!("line {line}: bad weight")))?;
        if weights.insert(year, weight).is_some() {
            return Err(Error::InvalidWeights(format!(
                "line {line}: duplicate year {year}"
            )));
        }
    }
    WeightScheme::explicit(weights)
}

/// One country's indicator values collapsed over a year interval.
#[derive(Debug, Clone, PartialEq)]
pub struct FactorProfile {
    pub country: String,
    pub factors: BTreeMap<String, f64>,
    pub years_used: BTreeMap<String, usize>,
}

impl FactorProfile {
    pub fn get(&self, indicator: &str) -> Option<f64> {
        self.factors.get(indicator).copied()
    }
}

/// Weighted average of each requested indicator over the years in `years`.
///
/// Years without an observation are skipped and drop out of the normalizer.
/// The result is clamped to the range of the contributing values so that
/// rounding cannot push it outside.
pub fn aggregate(
    panel: &IndicatorPanel,
    country: &str,
    years: YearRange,
    weights: &WeightScheme,
    indicators: &[&str],
) -> Result<FactorProfile> {
    let mut factors = BTreeMap::new();
    let mut years_used = BTreeMap::new();
    for &indicator in indicators {
        let series = panel.series(country, indicator, years);
        if series.is_empty() {
            return Err(Error::MissingIndicator {
                country: country.to_owned(),
                indicator: indicator.to_owned(),
            });
        }
        let (mut num, mut den) = (0.0, 0.0);
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        let mut used = 0;
        for &(year, value) in &series {
            let w = weights.weight(year);
            if w > 0.0 {
                num += w * value;
                den += w;
                lo = lo.min(value);
                hi = hi.max(value);
                used += 1;
            }
        }
        if den <= 0.0 {
            return Err(Error::DegenerateWeights {
                country: country.to_owned(),
                indicator: indicator.to_owned(),
            });
        }
        factors.insert(indicator.to_owned(), (num / den).clamp(lo, hi));
        years_used.insert(indicator.to_owned(), used);
    }
    Ok(FactorProfile {
        country: country.to_owned(),
        factors,
        years_used,
    })
}
