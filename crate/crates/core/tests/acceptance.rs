//! Acceptance gate. Prints one PASS/FAIL line per criterion and exits non-zero
//! if any criterion fails.

mod common;

use std::fs;
use std::time::{Duration, Instant};

use aiecon::composite::{geometric_mean, ZeroPolicy};
use aiecon::regstats::{ols_fit, pearson_r, r_squared, student_t_sf, two_sided_p, SeriesPair};
use aiecon::vector::{magnitude, AiFactorVector};
use common::{aiecon, copy_data_dir, naive_fit, ssr, stdout, t_sf_quadrature};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * b.abs().max(f64::MIN_POSITIVE)
}

fn reproduce_json() -> Result<(Value, Duration, i32), String> {
    let start = Instant::now();
    let out = aiecon(&["reproduce", "--format", "json"]);
    let elapsed = start.elapsed();
    let v = serde_json::from_str(&stdout(&out)).map_err(|e| e.to_string())?;
    Ok((v, elapsed, out.status.code().unwrap_or(-1)))
}

fn entries_for<'a>(v: &'a Value, table: &str) -> Vec<&'a Value> {
    v["entries"]
        .as_array()
        .map(|a| a.iter().filter(|e| e["table"] == table).collect())
        .unwrap_or_default()
}

fn ac1_table1() -> Outcome {
    let (v, elapsed, code) = reproduce_json()?;
    check(code == 0, format!("exit status {code}"))?;
    check(
        elapsed < Duration::from_secs(1),
        format!("runtime {elapsed:?}"),
    )?;
    let golden = [
        ("Georgia", 6.0),
        ("Israel", 95.6),
        ("Armenia", 7.4),
        ("Turkey", 33.4),
        ("USA", 326.8),
        ("France", 166.0),
        ("Germany", 222.2),
    ];
    let entries = entries_for(&v, "table1");
    let mut worst: f64 = 0.0;
    for (country, expected) in golden {
        let e = entries
            .iter()
            .find(|e| e["country"] == country)
            .ok_or(format!("no entry for {country}"))?;
        let computed = e["computed_value"]
            .as_f64()
            .ok_or(format!("{country}: no value"))?;
        let rel = (computed - expected).abs() / expected;
        worst = worst.max(rel);
        check(rel <= 0.05, format!("{country}: {computed} vs {expected}"))?;
        check(
            e["verdict"] == "PASS",
            format!("{country}: verdict {}", e["verdict"]),
        )?;
    }
    let aze = entries
        .iter()
        .find(|e| e["country"] == "Azerbaijan")
        .ok_or("no Azerbaijan entry")?;
    check(aze["verdict"] == "EXCLUDED", "Azerbaijan not excluded")?;
    check(
        aze["reason"].as_str().is_some_and(|r| r.contains("0.0")),
        "Azerbaijan exclusion reason missing",
    )?;
    Ok(format!(
        "7 PASS + Azerbaijan EXCLUDED, worst rel diff {worst:.4}, {elapsed:?}"
    ))
}

fn ac2_table2() -> Outcome {
    let (v, elapsed, _) = reproduce_json()?;
    check(
        elapsed < Duration::from_secs(1),
        format!("runtime {elapsed:?}"),
    )?;
    let golden = [
        ("Georgia", 6.13),
        ("Israel", 95.66),
        ("Armenia", 7.47),
        ("Azerbaijan", 4.50),
        ("Turkey", 34.77),
        ("USA", 330.27),
        ("France", 166.22),
        ("Germany", 222.50),
    ];
    let entries = entries_for(&v, "table2");
    let mut worst: f64 = 0.0;
    for (country, expected) in golden {
        let e = entries
            .iter()
            .find(|e| e["country"] == country)
            .ok_or(format!("no entry for {country}"))?;
        let computed = e["computed_value"]
            .as_f64()
            .ok_or(format!("{country}: no value"))?;
        worst = worst.max((computed - expected).abs());
        check(
            (computed - expected).abs() <= 0.02,
            format!("{country}: {computed} vs {expected}"),
        )?;
        check(
            e["verdict"] == "PASS",
            format!("{country}: verdict {}", e["verdict"]),
        )?;
    }
    Ok(format!("8 PASS, worst abs diff {worst:.4}, {elapsed:?}"))
}

fn random_dataset(rng: &mut ChaCha8Rng) -> (Vec<f64>, Vec<f64>) {
    let n = rng.gen_range(3..=1000);
    let x_scale = 10f64.powi(rng.gen_range(-3..=6));
    let x_shift = x_scale * rng.gen_range(-5.0..5.0);
    let slope_mag = 10f64.powi(rng.gen_range(-2..=2)) * rng.gen_range(1.0..10.0);
    let slope = if rng.gen_bool(0.5) {
        slope_mag
    } else {
        -slope_mag
    };
    let noise = rng.gen_range(0.05..2.0);
    let x: Vec<f64> = (0..n)
        .map(|_| x_shift + x_scale * rng.gen_range(-1.0..1.0))
        .collect();
    let mean_x = x.iter().sum::<f64>() / n as f64;
    // intercept at least one noise unit away from zero so its perturbation is visible
    let spread = slope.abs() * x_scale;
    let intercept_mag = spread * rng.gen_range(1.0..20.0) + slope.abs() * mean_x.abs();
    let intercept = if rng.gen_bool(0.5) {
        intercept_mag
    } else {
        -intercept_mag
    };
    let y = x
        .iter()
        .map(|xi| intercept + slope * xi + noise * spread * rng.gen_range(-1.0..1.0))
        .collect();
    (x, y)
}

fn ac3_regression_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xA1EC0);
    for trial in 0..1000 {
        let (x, y) = random_dataset(&mut rng);
        let pair = SeriesPair::new(vec![], x.clone(), y.clone()).map_err(|e| e.to_string())?;
        let fit = ols_fit(&pair).map_err(|e| e.to_string())?;
        let r = pearson_r(&pair).map_err(|e| e.to_string())?;
        let oracle = naive_fit(&x, &y);
        check(
            rel_close(fit.slope, oracle.slope, 1e-10),
            format!("trial {trial}: slope"),
        )?;
        check(
            rel_close(fit.intercept, oracle.intercept, 1e-10),
            format!(
                "trial {trial}: intercept {} vs {}",
                fit.intercept, oracle.intercept
            ),
        )?;
        check(
            rel_close(r, oracle.r.clamp(-1.0, 1.0), 1e-10),
            format!("trial {trial}: r"),
        )?;
        check(
            (r_squared(r) - r * r).abs() <= 1e-14,
            format!("trial {trial}: r²"),
        )?;

        let base = ssr(&x, &y, fit.slope, fit.intercept);
        for sign in [-1.0, 1.0] {
            let ds = sign * 1e-4 * fit.slope.abs();
            let di = sign * 1e-4 * fit.intercept.abs();
            check(
                ssr(&x, &y, fit.slope + ds, fit.intercept) > base,
                format!("trial {trial}: slope perturbation did not increase SSR"),
            )?;
            check(
                ssr(&x, &y, fit.slope, fit.intercept + di) > base,
                format!("trial {trial}: intercept perturbation did not increase SSR"),
            )?;
        }
    }
    Ok("1000 datasets match the naive oracle; every perturbation increases SSR".into())
}

fn ac4_student_t() -> Outcome {
    let cauchy = student_t_sf(1.0, 1);
    check((cauchy - 0.25).abs() <= 1e-12, format!("df=1: {cauchy}"))?;
    let t = 2f64.sqrt();
    let closed = 0.5 - t / (2.0 * (2.0 + t * t).sqrt());
    let df2 = student_t_sf(t, 2);
    check(
        (df2 - closed).abs() <= 1e-12,
        format!("df=2: {df2} vs {closed}"),
    )?;
    let big = student_t_sf(1.959964, 1_000_000);
    check((big - 0.025).abs() <= 1e-5, format!("df=1e6: {big}"))?;
    // independent quadrature cross-check at a few interior points
    for &(t, df) in &[(0.7, 3u64), (2.3, 10), (5.8355, 10)] {
        let q = t_sf_quadrature(t, df as f64);
        check(
            (student_t_sf(t, df) - q).abs() <= 1e-10,
            format!("quadrature mismatch at t={t}, df={df}"),
        )?;
    }
    for df in [1u64, 2, 3, 5, 10, 30, 100, 1_000_000] {
        let mut prev = f64::INFINITY;
        for k in 0..=20 {
            let t = 0.5 * k as f64;
            let p = two_sided_p(t, df);
            check(
                p.to_bits() == two_sided_p(-t, df).to_bits(),
                format!("asymmetric at t={t}, df={df}"),
            )?;
            check(p < prev, format!("not decreasing at t={t}, df={df}"))?;
            prev = p;
        }
    }
    Ok(format!(
        "sf(1;1)={cauchy:.15}, sf(√2;2)={df2:.15}, sf(1.959964;1e6)={big:.8}"
    ))
}

fn ac5_audit() -> Outcome {
    let out = aiecon(&[
        "audit", "--n", "12", "--r2", "0.773", "--p", "0.0435", "--format", "json",
    ]);
    check(out.status.code() == Some(0), "audit exited non-zero")?;
    let v: Value = serde_json::from_str(&stdout(&out)).map_err(|e| e.to_string())?;
    let t = v["implied_abs_t"].as_f64().ok_or("no implied t")?;
    let p = v["implied_p"].as_f64().ok_or("no implied p")?;
    check((t - 5.83).abs() <= 0.01, format!("implied |t| = {t}"))?;
    check((1.0e-4..=2.5e-4).contains(&p), format!("implied p = {p}"))?;
    check(
        v["verdict"] == "INCONSISTENT",
        format!("verdict {}", v["verdict"]),
    )?;
    check(
        v["note"]
            .as_str()
            .is_some_and(|n| n.contains("not reproducible")),
        "slope reproducibility note missing",
    )?;
    let table = stdout(&aiecon(&["reproduce"]));
    check(
        table.contains("not reproducible"),
        "reproduce report lacks slope note",
    )?;
    Ok(format!(
        "implied |t| = {t:.4}, implied p = {p:.3e}, INCONSISTENT"
    ))
}

fn ac6_properties() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5EED);
    for trial in 0..1000 {
        let n = rng.gen_range(1..=30);
        let f: Vec<f64> = (0..n)
            .map(|_| 10f64.powf(rng.gen_range(-6.0..6.0)))
            .collect();
        let g = geometric_mean(&f, ZeroPolicy::Reject).map_err(|e| e.to_string())?;
        let c = 10f64.powf(rng.gen_range(-3.0..3.0));
        let scaled: Vec<f64> = f.iter().map(|v| v * c).collect();
        let gc = geometric_mean(&scaled, ZeroPolicy::Reject).map_err(|e| e.to_string())?;
        check(
            rel_close(gc, c * g, 1e-12),
            format!("gm trial {trial}: scale"),
        )?;
        let lo = f.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = f.iter().copied().fold(0.0, f64::max);
        check(lo <= g && g <= hi, format!("gm trial {trial}: bounds"))?;
        let mut rev = f.clone();
        rev.reverse();
        rev.rotate_left(n / 2);
        let gp = geometric_mean(&rev, ZeroPolicy::Reject).map_err(|e| e.to_string())?;
        check(
            gp.to_bits() == g.to_bits(),
            format!("gm trial {trial}: permutation"),
        )?;
        let am = f.iter().sum::<f64>() / n as f64;
        check(g <= am * (1.0 + 1e-12), format!("gm trial {trial}: AM-GM"))?;
    }

    let vec6 = |rng: &mut ChaCha8Rng| -> [f64; 6] {
        [
            rng.gen_range(0.0..500.0),
            rng.gen_range(0.0..0.5),
            rng.gen_range(0.0..100.0),
            rng.gen_range(0.0..0.5),
            rng.gen_range(0.0..0.5),
            rng.gen_range(0.0..0.5),
        ]
    };
    let mag = |c: [f64; 6]| -> Result<f64, String> {
        Ok(magnitude(&AiFactorVector::new("P", c).map_err(|e| e.to_string())?).value)
    };
    for trial in 0..1000 {
        let u = vec6(&mut rng);
        let v = vec6(&mut rng);
        let k = rng.gen_range(0.0..2.0);
        let mu = mag(u)?;
        check(
            (mag(u.map(|x| x * k))? - k * mu).abs() <= 1e-12 * mu,
            format!("magnitude trial {trial}: homogeneity"),
        )?;
        let i = rng.gen_range(0..6);
        let mut up = u;
        up[i] += rng.gen_range(0.01..0.4);
        check(
            mag(up)? > mu,
            format!("magnitude trial {trial}: monotonicity"),
        )?;
        let sum: [f64; 6] = std::array::from_fn(|j| u[j] + v[j]);
        check(
            mag(sum)? <= (mu + mag(v)?) * (1.0 + 1e-15),
            format!("magnitude trial {trial}: triangle"),
        )?;
    }

    for trial in 0..1000 {
        let n = rng.gen_range(3..200);
        let x: Vec<f64> = (0..n).map(|_| rng.gen_range(-1e3..1e3)).collect();
        // every tenth pair is exactly collinear to exercise the clamp
        let y: Vec<f64> = if trial % 10 == 0 {
            x.iter().map(|v| 3.7 * v - 11.0).collect()
        } else {
            x.iter()
                .map(|v| 0.4 * v + rng.gen_range(-500.0..500.0))
                .collect()
        };
        let pair = SeriesPair::new(vec![], x.clone(), y.clone()).map_err(|e| e.to_string())?;
        let r = pearson_r(&pair).map_err(|e| e.to_string())?;
        check(
            (-1.0..=1.0).contains(&r),
            format!("pearson trial {trial}: range {r}"),
        )?;
        let (a, b, c, d) = (
            rng.gen_range(-100.0..100.0),
            if rng.gen_bool(0.5) { 2.5 } else { -0.75 },
            rng.gen_range(-100.0..100.0),
            if rng.gen_bool(0.5) { 0.3 } else { -4.0 },
        );
        let moved = SeriesPair::new(
            vec![],
            x.iter().map(|v| a + b * v).collect(),
            y.iter().map(|v| c + d * v).collect(),
        )
        .map_err(|e| e.to_string())?;
        let rm = pearson_r(&moved).map_err(|e| e.to_string())?;
        let sign = (b * d).signum();
        check(
            (rm - sign * r).abs() <= 1e-12,
            format!("pearson trial {trial}: affine {rm} vs {}", sign * r),
        )?;
    }
    Ok("geometric mean, magnitude and Pearson suites: 3 × 1000 cases".into())
}

fn ac7_determinism() -> Outcome {
    let a = aiecon(&["reproduce", "--format", "json"]);
    let b = aiecon(&["reproduce", "--format", "json"]);
    check(a.stdout == b.stdout, "json output differs between runs")?;

    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    copy_data_dir(dir.path());
    let golden = dir.path().join("golden.csv");
    let text = fs::read_to_string(&golden).map_err(|e| e.to_string())?;
    let tampered = text.replace(
        "table2,France,vector_magnitude,166.22",
        "table2,France,vector_magnitude,167.22",
    );
    check(tampered != text, "tamper target not found")?;
    fs::write(&golden, tampered).map_err(|e| e.to_string())?;
    let out = aiecon(&[
        "reproduce",
        "--format",
        "json",
        "--fixture-dir",
        dir.path().to_str().ok_or("non-utf8 temp path")?,
    ]);
    let code = out.status.code();
    check(
        code == Some(3),
        format!("tampered run exit status {code:?}"),
    )?;
    let v: Value = serde_json::from_str(&stdout(&out)).map_err(|e| e.to_string())?;
    let fails = v["entries"]
        .as_array()
        .map(|a| a.iter().filter(|e| e["verdict"] == "FAIL").count())
        .unwrap_or(0);
    check(fails == 1, format!("{fails} FAIL entries"))?;
    Ok("byte-identical json; tampered golden value → exit 3, one FAIL".into())
}

fn main() {
    let criteria: [Criterion; 7] = [
        ("AC1 Table 1 technology levels within 5%", ac1_table1),
        ("AC2 Table 2 magnitudes within 0.02", ac2_table2),
        ("AC3 regression oracle equivalence", ac3_regression_oracle),
        ("AC4 Student-t accuracy", ac4_student_t),
        ("AC5 reported triple audit", ac5_audit),
        ("AC6 property suites", ac6_properties),
        ("AC7 end-to-end determinism", ac7_determinism),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        match run() {
            Ok(detail) => println!("[PASS] {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("[FAIL] {name}: {why}");
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
