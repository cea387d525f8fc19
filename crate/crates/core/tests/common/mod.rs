//! Reference implementations used only by tests.
#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

/// Textbook simple regression: means, then centered sums, nothing shared with the library.
#[derive(Debug, Clone, Copy)]
pub struct NaiveFit {
    pub slope: f64,
    pub intercept: f64,
    pub r: f64,
}

pub fn naive_fit(x: &[f64], y: &[f64]) -> NaiveFit {
    let n = x.len();
    let mut mx = 0.0;
    let mut my = 0.0;
    for i in 0..n {
        mx += x[i];
        my += y[i];
    }
    mx /= n as f64;
    my /= n as f64;
    let mut num = 0.0;
    let mut den_x = 0.0;
    let mut den_y = 0.0;
    for i in 0..n {
        num += (x[i] - mx) * (y[i] - my);
        den_x += (x[i] - mx) * (x[i] - mx);
        den_y += (y[i] - my) * (y[i] - my);
    }
    let slope = num / den_x;
    NaiveFit {
        slope,
        intercept: my - slope * mx,
        r: num / (den_x * den_y).sqrt(),
    }
}

pub fn ssr(x: &[f64], y: &[f64], slope: f64, intercept: f64) -> f64 {
    x.iter()
        .zip(y)
        .map(|(xi, yi)| {
            let e = yi - (intercept + slope * xi);
            e * e
        })
        .sum()
}

fn ln_gamma_stirling(z: f64) -> f64 {
    // shift up so the asymptotic series is accurate, then undo with logs
    let mut shift = 0.0;
    let mut z = z;
    while z < 20.0 {
        shift += z.ln();
        z += 1.0;
    }
    let z2 = z * z;
    (z - 0.5) * z.ln() - z + 0.5 * (2.0 * std::f64::consts::PI).ln() + 1.0 / (12.0 * z)
        - 1.0 / (360.0 * z * z2)
        + 1.0 / (1260.0 * z2 * z2 * z)
        - shift
}

/// P(T > t) by composite Simpson quadrature of the t density on a mapped half-line.
pub fn t_sf_quadrature(t: f64, df: f64) -> f64 {
    let ln_c = ln_gamma_stirling((df + 1.0) / 2.0)
        - ln_gamma_stirling(df / 2.0)
        - 0.5 * (df * std::f64::consts::PI).ln();
    let density = |s: f64| (ln_c - (df + 1.0) / 2.0 * (s * s / df).ln_1p()).exp();
    let g = |u: f64| {
        if u >= 1.0 {
            0.0
        } else {
            let w = 1.0 - u;
            density(t + u / w) / (w * w)
        }
    };
    let steps = 400_000;
    let h = 1.0 / steps as f64;
    let mut acc = g(0.0) + g(1.0);
    for i in 1..steps {
        acc += g(i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    acc * h / 3.0
}

pub fn bin() -> PathBuf {
    PathBuf::from(env!("CARGO_BIN_EXE_aiecon"))
}

pub fn data_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data")
}

pub fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests")
        .join("fixtures")
        .join(name)
}

pub fn aiecon(args: &[&str]) -> Output {
    Command::new(bin())
        .args(args)
        .output()
        .expect("failed to run aiecon")
}

pub fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

pub fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

/// Copies the bundled data directory into `dest`.
pub fn copy_data_dir(dest: &Path) {
    for entry in std::fs::read_dir(data_dir()).unwrap() {
        let entry = entry.unwrap();
        std::fs::copy(entry.path(), dest.join(entry.file_name())).unwrap();
    }
}
