use std::f64::consts::FRAC_PI_2;
use std::io::Write;
use std::process::{Command, Stdio};

use fqwell::{count_levels, solve_spectrum, DimensionlessWell, EnergyLevel, Parity};
use fqwell_cli::{run, Outcome};
use serde_json::Value;

fn cli(args: &[&str]) -> Outcome {
    let mut argv = vec!["fqwell"];
    argv.extend_from_slice(args);
    run(argv, &mut std::io::empty())
}

fn cli_stdin(args: &[&str], input: &str) -> Outcome {
    let mut argv = vec!["fqwell"];
    argv.extend_from_slice(args);
    run(argv, &mut input.as_bytes())
}

fn ok_json(args: &[&str]) -> Value {
    let o = cli(args);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let v: Value = serde_json::from_str(&o.stdout).unwrap();
    assert_eq!(v["schema"], "fqwell/1");
    v
}

fn f(v: &Value) -> f64 {
    v.as_f64().unwrap()
}

const CANONICAL: [&str; 10] = [
    "--a", "1", "--depth", "16", "--dalpha", "1", "--hbar", "1", "--alpha", "2",
];

#[test]
fn spectrum_examples() {
    let v = ok_json(&["spectrum", "--g", "16", "--alpha", "2"]);
    let sig: Vec<f64> = v["levels"].as_array().unwrap().iter().map(|l| f(&l["sigma"])).collect();
    assert_eq!(sig.len(), 3);
    for (s, want) in sig.iter().zip([1.2523, 2.4746, 3.5953]) {
        assert!((s - want).abs() < 1e-4);
    }
    assert_eq!(v["mode"], "dimensionless");

    let v = ok_json(&["spectrum", "--g", "0.1", "--alpha", "1.5"]);
    assert_eq!(v["level_count"], 1);
    assert_eq!(v["levels"][0]["parity"], "even");
}

#[test]
fn config_errors_name_the_field() {
    let o = cli(&["spectrum", "--g", "16", "--alpha", "3"]);
    assert_eq!(o.code, 2);
    assert!(o.stderr.contains("alpha") && o.stderr.contains("1 < alpha <= 2"), "{}", o.stderr);

    let o = cli(&["spectrum", "--alpha", "2"]);
    assert_eq!(o.code, 2);
    assert!(o.stderr.contains("g:"));

    let o = cli(&["spectrum", "--g", "16", "--alpha", "2", "--hbar", "1"]);
    assert_eq!(o.code, 2);
    assert!(o.stderr.contains("hbar"));

    let o = cli(&["spectrum", "--a", "1", "--depth", "16", "--hbar", "1", "--alpha", "2"]);
    assert_eq!(o.code, 2);
    assert!(o.stderr.contains("dalpha"));

    let o = cli(&["spectrum", "--g=-4", "--alpha", "2"]);
    assert_eq!(o.code, 2);
    assert!(o.stderr.contains("g:"));

    let o = cli(&["spectrum", "--bogus"]);
    assert_eq!(o.code, 2);
}

#[test]
fn physical_mode_reports_energies_in_input_units() {
    let v = ok_json(&[&["spectrum"][..], &CANONICAL].concat());
    assert_eq!(v["mode"], "physical");
    for l in v["levels"].as_array().unwrap() {
        let s = f(&l["sigma"]);
        // D = 1, hbar = a = 1: E = sigma^2.
        assert!((f(&l["energy"]) - s * s).abs() < 1e-12 * s * s);
        assert!((f(&l["energy_over_depth"]) - s * s / 16.0).abs() < 1e-14);
    }
}

#[test]
fn emitted_levels_revalidate_when_parsed_back() {
    for (g, alpha) in [("16", "2"), ("1234.5", "1.3"), ("0.02", "1.01"), ("9.9e5", "1.5")] {
        let v = ok_json(&["spectrum", "--g", g, "--alpha", alpha]);
        let w = DimensionlessWell::new(g.parse().unwrap(), alpha.parse().unwrap()).unwrap();
        let levels = v["levels"].as_array().unwrap();
        let solved = solve_spectrum(&w).unwrap();
        assert_eq!(levels.len(), count_levels(&w));
        for (i, l) in levels.iter().enumerate() {
            assert_eq!(f(&l["sigma"]), solved.levels[i].sigma);
            assert_eq!(f(&l["eta"]), solved.levels[i].eta);
            let level = EnergyLevel {
                index: i,
                parity: Parity::of_index(i),
                sigma: f(&l["sigma"]),
                eta: f(&l["eta"]),
                energy: None,
            };
            assert_eq!(l["parity"], level.parity.as_str());
            assert!(level.parity_residual().abs() < 1e-10);
            assert!(level.constraint_residual(&w).abs() < 1e-10 * w.g().max(1.0));
        }
    }
}

#[test]
fn output_is_deterministic() {
    for fmt in ["json", "csv"] {
        let args = ["plotdata", "--g", "37.5", "--alpha", "1.7", "--format", fmt];
        assert_eq!(cli(&args).stdout, cli(&args).stdout);
        let args = ["sweep", "--g", "20", "--sweep-var", "alpha", "--from", "1.1", "--to", "2", "--steps", "7", "--format", fmt];
        assert_eq!(cli(&args).stdout, cli(&args).stdout);
    }
}

#[test]
fn csv_uses_twelve_significant_digits() {
    let o = cli(&["spectrum", "--g", "16", "--alpha", "2", "--format", "csv"]);
    let mut lines = o.stdout.lines();
    assert_eq!(lines.next(), Some("index,parity,sigma,eta,energy_over_depth"));
    let first: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(first[0], "0");
    assert_eq!(first[1], "even");
    assert_eq!(first[2], "1.25235323400e0");
    assert_eq!(o.stdout.lines().count(), 4);
}

#[test]
fn config_document_and_flag_precedence() {
    let doc = r#"{"mode": "Dimensionless", "g": 16, "alpha": 1.5, "output_format": "JSON"}"#;
    let v: Value = serde_json::from_str(&cli_stdin(&["spectrum", "--config", "-"], doc).stdout).unwrap();
    assert_eq!(v["level_count"], 5);
    // The flag wins over the document.
    let o = cli_stdin(&["spectrum", "--config", "-", "--alpha", "2"], doc);
    let v: Value = serde_json::from_str(&o.stdout).unwrap();
    assert_eq!(v["level_count"], 3);

    let dir = std::env::temp_dir().join(format!("fqwell-cfg-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("job.json");
    std::fs::write(&path, r#"{"a": 1, "U": 16, "d_alpha": 1, "hbar": 1, "alpha": 2}"#).unwrap();
    let v = ok_json(&["spectrum", "--config", path.to_str().unwrap()]);
    assert_eq!(v["mode"], "physical");
    assert_eq!(v["level_count"], 3);
    std::fs::remove_dir_all(&dir).unwrap();

    let o = cli_stdin(&["spectrum", "--config", "-"], r#"{"g": 16, "alpah": 2}"#);
    assert_eq!(o.code, 2);
    assert!(o.stderr.contains("alpah"));
    let o = cli(&["spectrum", "--config", "/nonexistent/job.json"]);
    assert_eq!(o.code, 2);
}

#[test]
fn wavefunction_examples() {
    let v = ok_json(&["wavefunction", "--g", "16", "--alpha", "2", "--level", "0"]);
    let pts = v["points"].as_array().unwrap();
    assert_eq!(pts.len(), 601);
    assert_eq!(f(&pts[0]["x"]), -3.0);
    assert_eq!(f(&pts[600]["x"]), 3.0);
    let phi: Vec<f64> = pts.iter().map(|p| f(&p["phi"])).collect();
    for i in 0..601 {
        assert_eq!(phi[i], phi[600 - i]);
    }
    let imax = (0..601).max_by(|&i, &j| phi[i].total_cmp(&phi[j])).unwrap();
    assert_eq!(imax, 300);
    assert_eq!(f(&pts[300]["x"]), 0.0);

    let v = ok_json(&["wavefunction", "--g", "16", "--alpha", "2", "--level", "1"]);
    let pts = v["points"].as_array().unwrap();
    let phi: Vec<f64> = pts.iter().map(|p| f(&p["phi"])).collect();
    assert_eq!(phi[300], 0.0);
    for i in 0..601 {
        assert_eq!(phi[i], -phi[600 - i]);
    }

    let o = cli(&["wavefunction", "--g", "16", "--alpha", "2", "--level", "7"]);
    assert_eq!(o.code, 3);
    assert!(o.stderr.contains("3 bound level"), "{}", o.stderr);
}

#[test]
fn wavefunction_samples_are_normalized() {
    let o = cli(&[
        "wavefunction", "--g", "16", "--alpha", "1.6", "--level", "2", "--samples", "20001",
        "--xmin", "-12", "--xmax", "12", "--format", "csv",
    ]);
    assert_eq!(o.code, 0);
    let pts: Vec<(f64, f64)> = o
        .stdout
        .lines()
        .skip(1)
        .map(|l| {
            let (x, p) = l.split_once(',').unwrap();
            (x.parse().unwrap(), p.parse().unwrap())
        })
        .collect();
    let dx = pts[1].0 - pts[0].0;
    // Trapezoid rule; kinks at ±a limit it to O(dx^2).
    let norm: f64 = pts.windows(2).map(|p| 0.5 * dx * (p[0].1.powi(2) + p[1].1.powi(2))).sum();
    assert!((norm - 1.0).abs() < 1e-5, "{norm}");
}

#[test]
fn physical_wavefunction_uses_physical_lengths() {
    let o = cli(&[
        "wavefunction", "--a", "2.5", "--depth", "3", "--dalpha", "0.4", "--hbar", "1.1",
        "--alpha", "1.8", "--level", "0", "--samples", "3",
    ]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let v: Value = serde_json::from_str(&o.stdout).unwrap();
    assert_eq!(f(&v["half_width"]), 2.5);
    assert_eq!(f(&v["points"][0]["x"]), -7.5);
    assert!(v["level"]["energy"].is_number());
}

#[test]
fn plotdata_examples() {
    let v = ok_json(&["plotdata", "--g", "16", "--alpha", "2"]);
    let constraint = v["constraint_curve"].as_array().unwrap();
    for p in constraint {
        let (s, e) = (f(&p[0]), f(&p[1]));
        assert!((s * s + e * e - 16.0).abs() < 1e-12);
    }
    assert_eq!(f(&constraint.last().unwrap()[0]), 4.0);

    let w = DimensionlessWell::new(16.0, 2.0).unwrap();
    let spectrum = solve_spectrum(&w).unwrap();
    let markers = v["markers"].as_array().unwrap();
    assert_eq!(markers.len(), 3);
    for (m, l) in markers.iter().zip(&spectrum.levels) {
        assert_eq!(f(&m["sigma"]), l.sigma);
        assert_eq!(f(&m["eta"]), l.eta);
        let (s, e) = (l.sigma, l.eta);
        assert!((e * e + s * s - 16.0).abs() < 1e-10);
    }
}

#[test]
fn plotdata_keeps_away_from_poles() {
    for (g, alpha) in [("16", "2"), ("400", "1.2"), ("2.5", "1.9"), ("1e5", "1.5")] {
        let v = ok_json(&["plotdata", "--g", g, "--alpha", alpha, "--samples", "400"]);
        let mut curves = 0;
        for (kind, parity) in [("even_curve", Parity::Even), ("odd_curve", Parity::Odd)] {
            for c in v[kind].as_array().unwrap() {
                curves += 1;
                let n = c["branch"].as_u64().unwrap() as f64;
                let ordinal = match parity {
                    Parity::Even => 2.0 * n,
                    Parity::Odd => 2.0 * n + 1.0,
                };
                let pole = (ordinal + 1.0) * FRAC_PI_2;
                let lo = ordinal * FRAC_PI_2;
                for p in c["points"].as_array().unwrap() {
                    let s = f(&p[0]);
                    assert!(s >= lo * (1.0 - 1e-15) && pole - s > 1e-9, "{kind} {n}: {s}");
                    assert!(f(&p[1]).is_finite());
                }
            }
        }
        let w = DimensionlessWell::new(g.parse().unwrap(), alpha.parse().unwrap()).unwrap();
        assert_eq!(curves, fqwell::enumerate_branches(&w).count());
    }
}

#[test]
fn sweep_examples() {
    let v = ok_json(&["sweep", "--g", "16", "--sweep-var", "alpha", "--from", "1.2", "--to", "2.0", "--steps", "5"]);
    let rows = v["rows"].as_array().unwrap();
    let alphas: Vec<f64> = rows.iter().map(|r| f(&r["alpha"])).collect();
    for (a, want) in alphas.iter().zip([1.2, 1.4, 1.6, 1.8, 2.0]) {
        assert!((a - want).abs() < 1e-15);
    }
    let mut last_smax = f64::INFINITY;
    for r in rows {
        let alpha = f(&r["alpha"]);
        let smax = 16f64.powf(1.0 / alpha);
        let expect = (2.0 * smax / std::f64::consts::PI).floor() as u64 + 1;
        assert_eq!(r["level_count"].as_u64().unwrap(), expect);
        assert_eq!(r["energy_over_depth"].as_array().unwrap().len() as u64, expect);
        // G > 1: ς_max falls as α grows.
        assert!(f(&r["sigma_max"]) < last_smax);
        last_smax = f(&r["sigma_max"]);
    }

    // Reversed bounds still come out ordered by the swept variable.
    let v = ok_json(&["sweep", "--alpha", "1.5", "--sweep-var", "g", "--from", "100", "--to", "1", "--steps", "4"]);
    let gs: Vec<f64> = v["rows"].as_array().unwrap().iter().map(|r| f(&r["g"])).collect();
    assert!(gs.windows(2).all(|p| p[0] < p[1]));
    assert_eq!((gs[0], gs[3]), (1.0, 100.0));
}

#[test]
fn sweep_rejects_bad_ranges() {
    let cases: [&[&str]; 5] = [
        &["sweep", "--alpha", "2", "--sweep-var", "g", "--from", "5", "--to", "5", "--steps", "1"],
        &["sweep", "--alpha", "2", "--sweep-var", "g", "--from", "1", "--to", "5", "--steps", "1"],
        &["sweep", "--g", "4", "--sweep-var", "alpha", "--from", "0.9", "--to", "2", "--steps", "3"],
        &["sweep", "--g", "4", "--sweep-var", "alpha", "--from", "1.5", "--to", "1.5", "--steps", "3"],
        &["sweep", "--sweep-var", "g", "--from", "1", "--to", "5", "--steps", "3", "--a", "1",
          "--depth", "1", "--dalpha", "1", "--hbar", "1", "--alpha", "2"],
    ];
    for args in cases {
        let o = cli(args);
        assert_eq!(o.code, 2, "{args:?}: {}", o.stderr);
    }
}

#[test]
fn sweep_alpha_in_physical_mode() {
    let v = ok_json(&[
        "sweep", "--a", "1", "--depth", "16", "--dalpha", "1", "--hbar", "1", "--sweep-var",
        "alpha", "--from", "1.5", "--to", "2", "--steps", "2",
    ]);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows[0]["level_count"], 5);
    assert_eq!(rows[1]["level_count"], 3);
}

#[test]
fn compare_examples() {
    let v = ok_json(&[&["compare"][..], &CANONICAL].concat());
    assert_eq!(v["transcendental_count"], 3);
    assert_eq!(v["oracle_count"], 3);
    assert!(f(&v["max_rel_gap"]) < 5e-3);
    assert_eq!(v["grid"]["n_points"], 1024);
    assert_eq!(f(&v["grid"]["box_half_length"]), 8.0);

    let o = cli(&[&["compare", "--grid-l", "3.5", "--grid-n", "256"][..], &CANONICAL].concat());
    assert_eq!(o.code, 2);
    let o = cli(&[&["compare", "--grid-n", "15"][..], &CANONICAL].concat());
    assert_eq!(o.code, 2);
    let o = cli(&["compare", "--g", "16", "--alpha", "2"]);
    assert_eq!(o.code, 2);
    assert!(o.stderr.contains("physical"));
}

fn binary(args: &[&str], stdin: Option<&str>) -> std::process::Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_fqwell"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    let mut input = child.stdin.take().unwrap();
    if let Some(text) = stdin {
        input.write_all(text.as_bytes()).unwrap();
    }
    drop(input);
    child.wait_with_output().unwrap()
}

#[test]
fn binary_exit_codes() {
    let out = binary(&["spectrum", "--g", "16", "--alpha", "2"], None);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout).unwrap().contains("\"schema\": \"fqwell/1\""));

    let out = binary(&["spectrum", "--config", "-"], Some(r#"{"g": 16, "alpha": 3}"#));
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("alpha"));

    let out = binary(&["wavefunction", "--g", "16", "--alpha", "2", "--level", "7"], None);
    assert_eq!(out.status.code(), Some(3));

    let out = binary(&["--help"], None);
    assert_eq!(out.status.code(), Some(0));
}
