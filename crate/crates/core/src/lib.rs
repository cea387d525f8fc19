//! Measurement toolkit for technology and AI factor indicators.
//!
//! - [`panel`]: CSV ingestion of long-format country panels and weighted
//!   aggregation over a year range.
//! - [`composite`]: geometric-mean technology level over six factors.
//! - [`vector`]: six-component AI factor vector and its Euclidean magnitude.
//! - [`regstats`]: log-log OLS, Pearson r, r², Student-t p-values and an
//!   audit of reported (n, r², p) triples.
//! - [`report`]: reproduction of the reference tables against bundled data.
//! - [`cli`]: command implementations behind the `aiecon` executable.

pub mod cli;
pub mod composite;
pub mod error;
pub mod fixtures;
pub mod panel;
pub mod regstats;
pub mod render;
pub mod report;
pub mod vector;

pub use error::{Error, Result};
