//! Reference data for table reproduction, embedded at compile time.
//!
//! The `data/` directory holds the 2011–2022 averaged factors (stored as a
//! single observation in 2022), the AI factor vectors and the published
//! golden values. The same golden values are compiled in below; the embedded
//! CSV must agree with them exactly.

use std::fs;
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::panel::parse_value;

pub const TABLE1_FACTORS_CSV: &str = include_str!("../data/table1_factors.csv");
pub const TABLE2_VECTOR_CSV: &str = include_str!("../data/table2_vector.csv");
pub const GOLDEN_CSV: &str = include_str!("../data/golden.csv");

pub const TABLE1_FILE: &str = "table1_factors.csv";
pub const TABLE2_FILE: &str = "table2_vector.csv";
pub const GOLDEN_FILE: &str = "golden.csv";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Table {
    Table1,
    Table2,
}

impl Table {
    pub fn as_str(self) -> &'static str {
        match self {
            Table::Table1 => "table1",
            Table::Table2 => "table2",
        }
    }
}

pub const TECHNOLOGY_LEVEL_QUANTITY: &str = "technology_level";
pub const MAGNITUDE_QUANTITY: &str = "vector_magnitude";

/// Published technology levels (Table 1), by country.
pub const TABLE1_TECHNOLOGY_LEVEL: [(&str, f64); 8] = [
    ("Georgia", 6.0),
    ("Israel", 95.6),
    ("Armenia", 7.4),
    ("Azerbaijan", 4.1),
    ("Turkey", 33.4),
    ("USA", 326.8),
    ("France", 166.0),
    ("Germany", 222.2),
];

/// Published vector magnitudes (Table 2), by country.
pub const TABLE2_MAGNITUDE: [(&str, f64); 8] = [
    ("Georgia", 6.13),
    ("Israel", 95.66),
    ("Armenia", 7.47),
    ("Azerbaijan", 4.50),
    ("Turkey", 34.77),
    ("USA", 330.27),
    ("France", 166.22),
    ("Germany", 222.50),
];

/// Reported regression triple for the Georgia GDP regression.
pub const REPORTED_N: usize = 12;
pub const REPORTED_R_SQUARED: f64 = 0.773;
pub const REPORTED_P: f64 = 0.0435;
pub const REPORTED_SLOPE: f64 = 0.239;

#[derive(Debug, Clone, PartialEq)]
pub struct GoldenValue {
    pub table: Table,
    pub country: String,
    pub quantity: String,
    pub value: f64,
}

/// The three CSV sources a reproduction run reads.
#[derive(Debug, Clone, PartialEq)]
pub struct FixtureSet {
    pub table1_factors: String,
    pub table2_vector: String,
    pub golden: Vec<GoldenValue>,
}

impl FixtureSet {
    /// The embedded fixture, checked against the compiled-in golden constants.
    pub fn bundled() -> Result<Self> {
        let golden = parse_golden_csv(GOLDEN_CSV)?;
        let expected = compiled_golden();
        if golden != expected {
            return Err(Error::Integrity(
                "embedded golden.csv disagrees with the compiled-in golden values".into(),
            ));
        }
        Ok(FixtureSet {
            table1_factors: TABLE1_FACTORS_CSV.to_owned(),
            table2_vector: TABLE2_VECTOR_CSV.to_owned(),
            golden,
        })
    }

    /// Reads `table1_factors.csv`, `table2_vector.csv` and `golden.csv` from `dir`.
    pub fn from_dir(dir: &Path) -> Result<Self> {
        let read = |name: &str| {
            fs::read_to_string(dir.join(name))
                .map_err(|e| Error::Io(format!("{}: {e}", dir.join(name).display())))
        };
        Ok(FixtureSet {
            table1_factors: read(TABLE1_FILE)?,
            table2_vector: read(TABLE2_FILE)?,
            golden: parse_golden_csv(&read(GOLDEN_FILE)?)?,
        })
    }
}

pub fn compiled_golden() -> Vec<GoldenValue> {
    let rows = |table, quantity: &str, values: &[(&str, f64)]| {
        values
            .iter()
            .map(|&(country, value)| GoldenValue {
                table,
                country: country.to_owned(),
                quantity: quantity.to_owned(),
                value,
            })
            .collect::<Vec<_>>()
    };
    let mut out = rows(
        Table::Table1,
        TECHNOLOGY_LEVEL_QUANTITY,
        &TABLE1_TECHNOLOGY_LEVEL,
    );
    out.extend(rows(Table::Table2, MAGNITUDE_QUANTITY, &TABLE2_MAGNITUDE));
    out
}

/// Parses `table,country,quantity,paper_value` rows.
pub fn parse_golden_csv(text: &str) -> Result<Vec<GoldenValue>> {
    let integrity = |line: u64, msg: String| Error::Integrity(format!("golden line {line}: {msg}"));
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| Error::Integrity(e.to_string()))?;
    if headers
        .iter()
        .ne(["table", "country", "quantity", "paper_value"])
    {
        return Err(Error::Integrity(
            "golden header must be `table,country,quantity,paper_value`".into(),
        ));
    }
    let mut out: Vec<GoldenValue> = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| Error::Integrity(e.to_string()))?;
        let line = record.position().map_or(0, |p| p.line());
        let table = match &record[0] {
            "table1" => Table::Table1,
            "table2" => Table::Table2,
            other => return Err(integrity(line, format!("unknown table `{other}`"))),
        };
        let expected_quantity = match table {
            Table::Table1 => TECHNOLOGY_LEVEL_QUANTITY,
            Table::Table2 => MAGNITUDE_QUANTITY,
        };
        if &record[2] != expected_quantity {
            return Err(integrity(
                line,
                format!(
                    "quantity for {} must be `{expected_quantity}`",
                    table.as_str()
                ),
            ));
        }
        let value = parse_value(&record[3])
            .ok_or_else(|| integrity(line, format!("bad value `{}`", &record[3])))?;
        let entry = GoldenValue {
            table,
            country: record[1].to_owned(),
            quantity: record[2].to_owned(),
            value,
        };
        if out
            .iter()
            .any(|g| g.table == entry.table && g.country == entry.country)
        {
            return Err(integrity(
                line,
                format!("duplicate entry for {} {}", table.as_str(), entry.country),
            ));
        }
        out.push(entry);
    }
    if out.is_empty() {
        return Err(Error::Integrity("golden file has no entries".into()));
    }
    Ok(out)
}
