//! The `aiecon` command line: argument parsing, command execution and exit codes.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::composite::{technology_level, TechnologyLevel, ZeroPolicy};
use crate::error::{Error, Result};
use crate::fixtures::FixtureSet;
use crate::panel::{
    aggregate, is_canonical_key, parse_panel_csv, parse_weights_csv, IndicatorPanel, KeyMode,
    WeightScheme, YearRange, AI_FACTOR_KEYS, GDP_PER_CAPITA_USD, TECHNOLOGY_LEVEL,
    TECH_FACTOR_KEYS, VECTOR_MAGNITUDE,
};
use crate::regstats::{
    audit_reported, loglog_pair, regress, AuditReport, RegressionResult, DEFAULT_AUDIT_TOLERANCE,
};
use crate::render::{self, csv_table, display, display_p, exact, opt, text_table, OutputFormat};
use crate::report::{reproduce, ReproductionReport, SLOPE_NOTE};
use crate::vector::{build_vector, magnitude, min_max_normalize, AiFactorVector, COMPONENT_NAMES};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DATA_ERROR: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_REPRODUCTION_FAIL: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "aiecon",
    version,
    about = "Technology level index, AI factor vector magnitude and log-log regression"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Geometric-mean technology level per country
    Techlevel(CommonArgs),
    /// AI factor vector components and Euclidean magnitude per country
    Vector {
        #[command(flatten)]
        common: CommonArgs,
        /// Min-max normalize every component across countries before taking the magnitude
        #[arg(long)]
        normalize: bool,
    },
    /// Log-log OLS of GDP per capita on vector magnitude, with Pearson r and t-test
    Regress {
        #[command(flatten)]
        common: CommonArgs,
        /// Country to regress (required when the panel holds several)
        #[arg(long)]
        country: Option<String>,
        /// Regress ln(vector magnitude) on ln(GDP per capita) instead
        #[arg(long)]
        swap_axes: bool,
        /// Write the (ln x, ln y) points and fitted-line endpoints as CSV
        #[arg(long, value_name = "PATH")]
        emit_points: Option<PathBuf>,
    },
    /// Recompute the reference tables and audit the reported regression triple
    Reproduce {
        /// Directory with table1_factors.csv, table2_vector.csv and golden.csv
        /// (default: the bundled copies)
        #[arg(long, value_name = "DIR")]
        fixture_dir: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "table")]
        format: OutputFormat,
    },
    /// Check whether a reported (n, R², p) triple is consistent with the slope t-test
    Audit {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r2: f64,
        #[arg(long)]
        p: f64,
        /// Relative tolerance on the p-value
        #[arg(long, default_value_t = DEFAULT_AUDIT_TOLERANCE)]
        tolerance: f64,
        #[arg(long, value_enum, default_value = "table")]
        format: OutputFormat,
    },
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Panel CSV with header `country,indicator,year,value`
    #[arg(long, value_name = "PATH")]
    pub input: PathBuf,
    /// Inclusive year interval `<start>:<end>`
    #[arg(long, default_value = "2011:2022")]
    pub years: YearRange,
    /// reject | exclude | epsilon=<v>
    #[arg(long, default_value = "reject")]
    pub zero_policy: ZeroPolicy,
    /// Per-year weights CSV with header `year,weight` (default: uniform)
    #[arg(long, value_name = "PATH")]
    pub weights: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "table")]
    pub format: OutputFormat,
    /// Accept indicator keys outside the canonical set
    #[arg(long)]
    pub lenient: bool,
}

/// Resolved settings for the data commands.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub input_path: PathBuf,
    pub years: YearRange,
    pub zero_policy: ZeroPolicy,
    pub weights: WeightScheme,
    pub key_mode: KeyMode,
    pub swap_axes: bool,
    pub output_format: OutputFormat,
    pub country: Option<String>,
    pub emit_points: Option<PathBuf>,
    pub normalize: bool,
}

impl RunConfig {
    pub fn new(input_path: impl Into<PathBuf>) -> Self {
        RunConfig {
            input_path: input_path.into(),
            years: YearRange::default(),
            zero_policy: ZeroPolicy::default(),
            weights: WeightScheme::default(),
            key_mode: KeyMode::Strict,
            swap_axes: false,
            output_format: OutputFormat::Table,
            country: None,
            emit_points: None,
            normalize: false,
        }
    }

    fn from_common(common: &CommonArgs) -> Result<Self> {
        let weights = match &common.weights {
            Some(path) => parse_weights_csv(&read_file(path)?)?,
            None => WeightScheme::Uniform,
        };
        Ok(RunConfig {
            years: common.years,
            zero_policy: common.zero_policy,
            weights,
            key_mode: if common.lenient {
                KeyMode::Lenient
            } else {
                KeyMode::Strict
            },
            output_format: common.format,
            ..RunConfig::new(&common.input)
        })
    }

    fn load_panel(&self) -> Result<IndicatorPanel> {
        parse_panel_csv(&read_file(&self.input_path)?, self.key_mode)
    }
}

fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn countries_of(panel: &IndicatorPanel) -> Result<Vec<String>> {
    let countries: Vec<String> = panel.countries().into_iter().map(str::to_owned).collect();
    if countries.is_empty() {
        return Err(Error::EmptyReport);
    }
    Ok(countries)
}

/// Indicators entering the technology level of `country`.
fn technology_keys<'a>(panel: &'a IndicatorPanel, country: &str, mode: KeyMode) -> Vec<&'a str> {
    match mode {
        KeyMode::Strict => TECH_FACTOR_KEYS.to_vec(),
        KeyMode::Lenient => panel
            .indicators_for(country)
            .into_iter()
            .filter(|k| !is_canonical_key(k) || TECH_FACTOR_KEYS.contains(k))
            .collect(),
    }
}

fn country_technology_level(
    config: &RunConfig,
    panel: &IndicatorPanel,
    country: &str,
) -> Result<TechnologyLevel> {
    let keys = technology_keys(panel, country, config.key_mode);
    let profile = aggregate(panel, country, config.years, &config.weights, &keys)?;
    technology_level(&profile, config.zero_policy, config.key_mode)
}

/// Technology level for every country in the input panel.
pub fn cmd_techlevel(config: &RunConfig) -> Result<String> {
    let panel = config.load_panel()?;
    let levels = countries_of(&panel)?
        .iter()
        .map(|c| country_technology_level(config, &panel, c))
        .collect::<Result<Vec<_>>>()?;

    let headers = [
        "country",
        "technology_level",
        "n_factors",
        "excluded_factors",
    ];
    let row = |t: &TechnologyLevel, num: fn(f64) -> String| {
        vec![
            t.country.clone(),
            num(t.value),
            t.n_factors.to_string(),
            t.excluded_factors.join(";"),
        ]
    };
    match config.output_format {
        OutputFormat::Table => Ok(text_table(
            &headers,
            &levels.iter().map(|t| row(t, display)).collect::<Vec<_>>(),
        )),
        OutputFormat::Csv => csv_table(
            &headers,
            &levels.iter().map(|t| row(t, exact)).collect::<Vec<_>>(),
        ),
        OutputFormat::Json => {
            let keyed: BTreeMap<&str, &TechnologyLevel> =
                levels.iter().map(|t| (t.country.as_str(), t)).collect();
            render::json(&keyed)
        }
    }
}

#[derive(Debug, Serialize)]
struct VectorRow {
    #[serde(flatten)]
    vector: AiFactorVector,
    magnitude: f64,
}

/// AI factor vectors and magnitudes for every country in the input panel.
///
/// A country's technological development is read from `technology_level` when
/// the panel carries it, otherwise computed from the six technology factors.
pub fn cmd_vector(config: &RunConfig) -> Result<String> {
    let panel = config.load_panel()?;
    let mut vectors = Vec::new();
    for country in countries_of(&panel)? {
        let tech = if panel
            .series(&country, TECHNOLOGY_LEVEL, config.years)
            .is_empty()
        {
            country_technology_level(config, &panel, &country)?.value
        } else {
            aggregate(
                &panel,
                &country,
                config.years,
                &config.weights,
                &[TECHNOLOGY_LEVEL],
            )?
            .get(TECHNOLOGY_LEVEL)
            .unwrap_or_default()
        };
        let ai = aggregate(
            &panel,
            &country,
            config.years,
            &config.weights,
            &AI_FACTOR_KEYS,
        )?;
        vectors.push(build_vector(&country, tech, &ai)?);
    }
    if config.normalize {
        vectors = min_max_normalize(&vectors);
    }
    let rows: Vec<VectorRow> = vectors
        .into_iter()
        .map(|v| VectorRow {
            magnitude: magnitude(&v).value,
            vector: v,
        })
        .collect();

    let mut headers = vec!["country"];
    headers.extend(COMPONENT_NAMES);
    headers.push("magnitude");
    let cells = |r: &VectorRow, num: fn(f64) -> String| {
        let mut row = vec![r.vector.country.clone()];
        row.extend(r.vector.components().map(num));
        row.push(num(r.magnitude));
        row
    };
    match config.output_format {
        OutputFormat::Table => Ok(text_table(
            &headers,
            &rows.iter().map(|r| cells(r, display)).collect::<Vec<_>>(),
        )),
        OutputFormat::Csv => csv_table(
            &headers,
            &rows.iter().map(|r| cells(r, exact)).collect::<Vec<_>>(),
        ),
        OutputFormat::Json => {
            let keyed: BTreeMap<&str, &VectorRow> = rows
                .iter()
                .map(|r| (r.vector.country.as_str(), r))
                .collect();
            render::json(&keyed)
        }
    }
}

#[derive(Debug, Serialize)]
struct RegressionOutput {
    country: String,
    x_variable: String,
    y_variable: String,
    labels: Vec<String>,
    #[serde(flatten)]
    result: RegressionResult,
}

const PERFECT_FIT_P: &str = "< 1e-15";

/// Log-log regression of GDP per capita on vector magnitude for one country.
pub fn cmd_regress(config: &RunConfig) -> Result<String> {
    let panel = config.load_panel()?;
    let country = match &config.country {
        Some(c) => c.clone(),
        None => {
            let countries = countries_of(&panel)?;
            if countries.len() != 1 {
                return Err(Error::InvalidArgument(format!(
                    "panel holds {} countries; choose one with --country",
                    countries.len()
                )));
            }
            countries.into_iter().next().unwrap_or_default()
        }
    };
    let (x_key, y_key) = if config.swap_axes {
        (GDP_PER_CAPITA_USD, VECTOR_MAGNITUDE)
    } else {
        (VECTOR_MAGNITUDE, GDP_PER_CAPITA_USD)
    };
    let xs: BTreeMap<i32, f64> = panel
        .series(&country, x_key, config.years)
        .into_iter()
        .collect();
    let ys: BTreeMap<i32, f64> = panel
        .series(&country, y_key, config.years)
        .into_iter()
        .collect();
    for (key, s) in [(x_key, &xs), (y_key, &ys)] {
        if s.is_empty() {
            return Err(Error::MissingIndicator {
                country: country.clone(),
                indicator: key.to_owned(),
            });
        }
    }
    let (mut labels, mut x, mut y) = (Vec::new(), Vec::new(), Vec::new());
    for (year, &xv) in &xs {
        if let Some(&yv) = ys.get(year) {
            labels.push(year.to_string());
            x.push(xv);
            y.push(yv);
        }
    }
    let pair = loglog_pair(&x, &y, &labels)?;
    let result = regress(&pair)?;

    if let Some(path) = &config.emit_points {
        let mut rows: Vec<Vec<String>> = pair
            .labels()
            .iter()
            .zip(pair.x().iter().zip(pair.y()))
            .map(|(l, (lx, ly))| vec!["point".into(), l.clone(), exact(*lx), exact(*ly)])
            .collect();
        let lo = pair.x().iter().copied().fold(f64::INFINITY, f64::min);
        let hi = pair.x().iter().copied().fold(f64::NEG_INFINITY, f64::max);
        for (label, lx) in [("start", lo), ("end", hi)] {
            let fitted = result.intercept_b0 + result.slope_b1 * lx;
            rows.push(vec!["fit".into(), label.into(), exact(lx), exact(fitted)]);
        }
        fs::write(path, csv_table(&["kind", "label", "ln_x", "ln_y"], &rows)?)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    }

    let out = RegressionOutput {
        country,
        x_variable: format!("ln {x_key}"),
        y_variable: format!("ln {y_key}"),
        labels,
        result,
    };
    let r = &out.result;
    let fields = |num: fn(f64) -> String, p: fn(f64) -> String| -> Vec<(&str, String)> {
        vec![
            ("country", out.country.clone()),
            ("x", out.x_variable.clone()),
            ("y", out.y_variable.clone()),
            ("n", r.n.to_string()),
            ("df", r.df.to_string()),
            ("slope_b1", num(r.slope_b1)),
            ("intercept_b0", num(r.intercept_b0)),
            ("pearson_r", num(r.pearson_r)),
            ("r_squared", num(r.r_squared)),
            ("t_stat", r.t_stat.map(num).unwrap_or_else(|| "inf".into())),
            (
                "p_value",
                r.p_value.map(p).unwrap_or_else(|| PERFECT_FIT_P.into()),
            ),
            ("perfect_fit", r.perfect_fit.to_string()),
        ]
    };
    match config.output_format {
        OutputFormat::Table => {
            let rows: Vec<Vec<String>> = fields(display, display_p)
                .into_iter()
                .map(|(k, v)| vec![k.to_owned(), v])
                .collect();
            Ok(text_table(&["statistic", "value"], &rows))
        }
        OutputFormat::Csv => {
            let f = fields(exact, exact);
            let headers: Vec<&str> = f.iter().map(|(k, _)| *k).collect();
            csv_table(&headers, &[f.into_iter().map(|(_, v)| v).collect()])
        }
        OutputFormat::Json => render::json(&out),
    }
}

/// Renders a reproduction run. The report is returned for the exit status.
pub fn cmd_reproduce(
    fixture_dir: Option<&Path>,
    format: OutputFormat,
) -> Result<(String, ReproductionReport)> {
    let fixture = match fixture_dir {
        Some(dir) => FixtureSet::from_dir(dir)?,
        None => FixtureSet::bundled()?,
    };
    let report = reproduce(&fixture)?;
    let headers = [
        "table",
        "country",
        "quantity",
        "paper_value",
        "computed_value",
        "abs_diff",
        "rel_diff",
        "tolerance",
        "tolerance_kind",
        "verdict",
        "reason",
    ];
    let rows = |num: fn(f64) -> String| -> Vec<Vec<String>> {
        report
            .entries
            .iter()
            .map(|e| {
                vec![
                    e.table.as_str().to_owned(),
                    e.country.clone(),
                    e.quantity.clone(),
                    num(e.paper_value),
                    opt(e.computed_value, num),
                    opt(e.abs_diff, num),
                    opt(e.rel_diff, num),
                    num(e.tolerance.value),
                    format!("{:?}", e.tolerance.kind).to_lowercase(),
                    e.verdict.to_string(),
                    e.reason.clone().unwrap_or_default(),
                ]
            })
            .collect()
    };
    let text = match format {
        OutputFormat::Table => {
            let mut s = text_table(&headers, &rows(display));
            s.push('\n');
            s.push_str(&audit_text(&report.audit));
            for note in &report.notes {
                s.push_str(&format!("note: {note}\n"));
            }
            s.push_str(&format!(
                "result: {}\n",
                if report.passed() { "PASS" } else { "FAIL" }
            ));
            s
        }
        OutputFormat::Csv => csv_table(&headers, &rows(exact))?,
        OutputFormat::Json => render::json(&report)?,
    };
    Ok((text, report))
}

fn audit_text(a: &AuditReport) -> String {
    let rows = vec![
        vec!["n".into(), a.n.to_string()],
        vec!["df".into(), a.df.to_string()],
        vec![
            "r_squared_reported".into(),
            format!("{}", a.r_squared_reported),
        ],
        vec!["p_reported".into(), format!("{}", a.p_reported)],
        vec![
            "implied_abs_t".into(),
            opt(a.implied_abs_t, |v| format!("{v:.4}")),
        ],
        vec!["implied_p".into(), opt(a.implied_p, display_p)],
        vec!["p_ratio".into(), opt(a.p_ratio, display_p)],
        vec!["p_relative_diff".into(), opt(a.p_relative_diff, display_p)],
        vec!["tolerance".into(), format!("{}", a.tolerance)],
        vec!["verdict".into(), a.verdict.to_string()],
    ];
    text_table(&["audit", "value"], &rows)
}

#[derive(Debug, Serialize)]
struct AuditOutput<'a> {
    #[serde(flatten)]
    audit: &'a AuditReport,
    note: &'a str,
}

pub fn cmd_audit(
    n: usize,
    r_squared: f64,
    p: f64,
    tolerance: f64,
    format: OutputFormat,
) -> Result<String> {
    let a = audit_reported(n, r_squared, p, tolerance)?;
    match format {
        OutputFormat::Table => Ok(format!("{}note: {SLOPE_NOTE}\n", audit_text(&a))),
        OutputFormat::Csv => {
            let headers = [
                "n",
                "df",
                "r_squared_reported",
                "p_reported",
                "implied_abs_t",
                "implied_p",
                "p_ratio",
                "p_relative_diff",
                "tolerance",
                "verdict",
            ];
            let row = vec![
                a.n.to_string(),
                a.df.to_string(),
                exact(a.r_squared_reported),
                exact(a.p_reported),
                opt(a.implied_abs_t, exact),
                opt(a.implied_p, exact),
                opt(a.p_ratio, exact),
                opt(a.p_relative_diff, exact),
                exact(a.tolerance),
                a.verdict.to_string(),
            ];
            csv_table(&headers, &[row])
        }
        OutputFormat::Json => render::json(&AuditOutput {
            audit: &a,
            note: SLOPE_NOTE,
        }),
    }
}

/// Runs a parsed command, writing results to `out`. Returns the exit status.
pub fn execute(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    let (text, status) = match &cli.command {
        Command::Techlevel(common) => (cmd_techlevel(&RunConfig::from_common(common)?)?, EXIT_OK),
        Command::Vector { common, normalize } => {
            let config = RunConfig {
                normalize: *normalize,
                ..RunConfig::from_common(common)?
            };
            (cmd_vector(&config)?, EXIT_OK)
        }
        Command::Regress {
            common,
            country,
            swap_axes,
            emit_points,
        } => {
            let config = RunConfig {
                country: country.clone(),
                swap_axes: *swap_axes,
                emit_points: emit_points.clone(),
                ..RunConfig::from_common(common)?
            };
            (cmd_regress(&config)?, EXIT_OK)
        }
        Command::Reproduce {
            fixture_dir,
            format,
        } => {
            let (text, report) = cmd_reproduce(fixture_dir.as_deref(), *format)?;
            let status = if report.passed() {
                EXIT_OK
            } else {
                EXIT_REPRODUCTION_FAIL
            };
            (text, status)
        }
        Command::Audit {
            n,
            r2,
            p,
            tolerance,
            format,
        } => (cmd_audit(*n, *r2, *p, *tolerance, *format)?, EXIT_OK),
    };
    out.write_all(text.as_bytes())?;
    Ok(status)
}

/// Entry point for the binary: parses `args`, runs, and maps outcomes to exit statuses.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    match execute(&cli, &mut lock) {
        Ok(status) => {
            if status == EXIT_REPRODUCTION_FAIL {
                eprintln!("error: reproduction has FAIL or ERROR entries");
            }
            status
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_DATA_ERROR
        }
    }
}
