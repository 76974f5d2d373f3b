use fqwell::oracle::{compare, OracleWell, SpectralGrid};
use fqwell::solver::{branches_below, parity_curve};
use fqwell::{constraint_eta, match_constants, solve_spectrum, EnergyLevel, Parity, Spectrum};
use serde_json::{json, Map, Value};

use crate::config::{check_alpha, Format, JobConfig, Mode, SweepVar, Well};
use crate::output::{csv, json_document, num, opt_num, Cell};
use crate::CliError;

pub const DEFAULT_WAVE_SAMPLES: usize = 601;
pub const DEFAULT_PLOT_SAMPLES: usize = 200;
pub const DEFAULT_GRID_N: usize = 1024;
/// Default Fourier box half-length, in units of the well half-width.
pub const DEFAULT_GRID_L_OVER_A: f64 = 8.0;
/// Closest approach of a plotted parity-curve sample to its pole.
pub const POLE_GUARD: f64 = 1e-6;
/// Parity curves are cut where η exceeds this multiple of max(ς_max, 1).
const PLOT_ETA_CAP: f64 = 1.5;

fn header(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

fn well_fields(well: &Well, spectrum: &Spectrum, map: &mut Map<String, Value>) {
    map.insert("mode".into(), well.mode_name().into());
    map.insert("alpha".into(), num(spectrum.well.alpha()));
    map.insert("g".into(), num(spectrum.well.g()));
    map.insert("sigma_max".into(), num(spectrum.sigma_max));
    if let Some(p) = well.physical() {
        map.insert(
            "well".into(),
            json!({
                "a": num(p.a()),
                "depth": num(p.depth()),
                "d_alpha": num(p.d_alpha()),
                "hbar": num(p.hbar()),
            }),
        );
    }
}

struct LevelRow {
    level: EnergyLevel,
    fraction: f64,
}

fn level_rows(well: &Well, spectrum: &Spectrum) -> Result<Vec<LevelRow>, CliError> {
    spectrum
        .levels
        .iter()
        .map(|l| {
            let level = match well.physical() {
                Some(p) => l.with_energy(p)?,
                None => *l,
            };
            let fraction = spectrum.well.energy_fraction(l.sigma)?;
            Ok(LevelRow { level, fraction })
        })
        .collect()
}

fn level_json(row: &LevelRow) -> Value {
    let l = &row.level;
    let mut m = Map::new();
    m.insert("index".into(), l.index.into());
    m.insert("parity".into(), l.parity.as_str().into());
    m.insert("sigma".into(), num(l.sigma));
    m.insert("eta".into(), num(l.eta));
    m.insert("energy_over_depth".into(), num(row.fraction));
    if let Some(e) = l.energy {
        m.insert("energy".into(), num(e));
    }
    Value::Object(m)
}

pub fn spectrum(cfg: &JobConfig) -> Result<String, CliError> {
    let well = cfg.well()?;
    let spectrum = solve_spectrum(&well.dimensionless()?)?;
    let rows = level_rows(&well, &spectrum)?;
    let physical = well.physical().is_some();
    Ok(match cfg.format() {
        Format::Json => {
            let mut m = Map::new();
            m.insert("command".into(), "spectrum".into());
            well_fields(&well, &spectrum, &mut m);
            m.insert("level_count".into(), spectrum.len().into());
            m.insert("levels".into(), rows.iter().map(level_json).collect());
            json_document(m)
        }
        Format::Csv => {
            let mut names = vec!["index", "parity", "sigma", "eta", "energy_over_depth"];
            if physical {
                names.push("energy");
            }
            let table: Vec<Vec<Cell>> = rows
                .iter()
                .map(|r| {
                    let l = &r.level;
                    let mut row = vec![
                        l.index.into(),
                        l.parity.as_str().into(),
                        l.sigma.into(),
                        l.eta.into(),
                        r.fraction.into(),
                    ];
                    if physical {
                        row.push(l.energy.into());
                    }
                    row
                })
                .collect();
            csv(&header(&names), &table)
        }
    })
}

pub fn wavefunction(cfg: &JobConfig) -> Result<String, CliError> {
    let well = cfg.well()?;
    let spectrum = solve_spectrum(&well.dimensionless()?)?;
    let index = cfg
        .level
        .ok_or_else(|| CliError::Config("level: missing (wavefunction needs --level)".into()))?;
    let Some(level) = spectrum.levels.get(index).copied() else {
        return Err(CliError::Domain(format!(
            "level {index} is out of range: this well has {} bound level(s), indices 0..{}",
            spectrum.len(),
            spectrum.len().saturating_sub(1)
        )));
    };
    let a = well.half_width();
    let samples = cfg.samples.unwrap_or(DEFAULT_WAVE_SAMPLES);
    if samples < 2 {
        return Err(CliError::Config(format!("samples: need at least 2, got {samples}")));
    }
    let x_min = cfg.xmin.unwrap_or(-3.0 * a);
    let x_max = cfg.xmax.unwrap_or(3.0 * a);
    if !(x_min.is_finite() && x_max.is_finite() && x_min < x_max) {
        return Err(CliError::Config(format!(
            "xmin: need finite xmin < xmax, got [{x_min}, {x_max}]"
        )));
    }
    let level = match well.physical() {
        Some(p) => level.with_energy(p)?,
        None => level,
    };
    let f = match_constants(level, a)?.normalize();
    let points = f.sample(x_min, x_max, samples)?;
    Ok(match cfg.format() {
        Format::Json => {
            let mut m = Map::new();
            m.insert("command".into(), "wavefunction".into());
            well_fields(&well, &spectrum, &mut m);
            let fraction = spectrum.well.energy_fraction(level.sigma)?;
            m.insert("level".into(), level_json(&LevelRow { level, fraction }));
            m.insert("half_width".into(), num(a));
            m.insert("normalized".into(), true.into());
            m.insert("samples".into(), points.len().into());
            m.insert(
                "points".into(),
                points
                    .iter()
                    .map(|&(x, phi)| json!({"x": num(x), "phi": num(phi)}))
                    .collect(),
            );
            json_document(m)
        }
        Format::Csv => {
            let rows: Vec<Vec<Cell>> = points.iter().map(|&(x, p)| vec![x.into(), p.into()]).collect();
            csv(&header(&["x", "phi"]), &rows)
        }
    })
}

struct Curve {
    kind: &'static str,
    branch: usize,
    points: Vec<(f64, f64)>,
}

fn linspace(from: f64, to: f64, n: usize) -> impl Iterator<Item = f64> {
    let last = (n - 1) as f64;
    (0..n).map(move |i| {
        let t = i as f64;
        (from * (last - t) + to * t) / last
    })
}

/// Where the rising parity curve on `[lo, pole)` first reaches `cap`.
fn crossing(parity: Parity, lo: f64, pole: f64, cap: f64) -> f64 {
    let (mut a, mut b) = (lo, pole);
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        if parity_curve(parity, mid) < cap {
            a = mid;
        } else {
            b = mid;
        }
    }
    a
}

pub fn plotdata(cfg: &JobConfig) -> Result<String, CliError> {
    let well = cfg.well()?;
    let w = well.dimensionless()?;
    let spectrum = solve_spectrum(&w)?;
    let smax = spectrum.sigma_max;
    let samples = cfg.samples.unwrap_or(DEFAULT_PLOT_SAMPLES);
    if samples < 2 {
        return Err(CliError::Config(format!("samples: need at least 2, got {samples}")));
    }
    let cap = PLOT_ETA_CAP * smax.max(1.0);

    let mut curves = Vec::new();
    for b in branches_below(smax) {
        let pole = b.pole();
        let end = crossing(b.parity, b.lo, pole, cap).min(pole - POLE_GUARD);
        if end <= b.lo {
            continue;
        }
        let points = linspace(b.lo, end, samples)
            .map(|s| (s, parity_curve(b.parity, s)))
            .collect();
        curves.push(Curve {
            kind: b.parity.as_str(),
            branch: b.n,
            points,
        });
    }
    let constraint = linspace(0.0, smax, samples)
        .map(|s| Ok((s, constraint_eta(&w, s)?)))
        .collect::<Result<Vec<_>, fqwell::Error>>()?;
    curves.push(Curve {
        kind: "constraint",
        branch: 0,
        points: constraint,
    });

    Ok(match cfg.format() {
        Format::Json => {
            let mut m = Map::new();
            m.insert("command".into(), "plotdata".into());
            well_fields(&well, &spectrum, &mut m);
            m.insert("pole_guard".into(), num(POLE_GUARD));
            let pts = |c: &Curve| -> Value {
                c.points.iter().map(|&(s, e)| json!([num(s), num(e)])).collect()
            };
            for kind in ["even", "odd"] {
                let list: Vec<Value> = curves
                    .iter()
                    .filter(|c| c.kind == kind)
                    .map(|c| json!({"branch": c.branch, "points": pts(c)}))
                    .collect();
                m.insert(format!("{kind}_curve"), list.into());
            }
            let last = curves.last().expect("constraint curve");
            m.insert("constraint_curve".into(), pts(last));
            m.insert(
                "markers".into(),
                spectrum
                    .levels
                    .iter()
                    .map(|l| {
                        json!({
                            "index": l.index,
                            "parity": l.parity.as_str(),
                            "sigma": num(l.sigma),
                            "eta": num(l.eta),
                        })
                    })
                    .collect(),
            );
            json_document(m)
        }
        Format::Csv => {
            let mut rows: Vec<Vec<Cell>> = Vec::new();
            for c in &curves {
                for &(s, e) in &c.points {
                    rows.push(vec![c.kind.into(), c.branch.into(), s.into(), e.into()]);
                }
            }
            for l in &spectrum.levels {
                rows.push(vec!["marker".into(), l.index.into(), l.sigma.into(), l.eta.into()]);
            }
            csv(&header(&["curve", "branch", "sigma", "eta"]), &rows)
        }
    })
}

struct SweepRow {
    alpha: f64,
    g: f64,
    sigma_max: f64,
    fractions: Vec<f64>,
}

pub fn sweep(cfg: &JobConfig) -> Result<String, CliError> {
    let var = cfg
        .sweep_var
        .ok_or_else(|| CliError::Config("sweep-var: missing (alpha or g)".into()))?;
    let from = cfg
        .from
        .ok_or_else(|| CliError::Config("from: missing sweep start".into()))?;
    let to = cfg
        .to
        .ok_or_else(|| CliError::Config("to: missing sweep end".into()))?;
    let steps = cfg
        .steps
        .ok_or_else(|| CliError::Config("steps: missing sweep sample count".into()))?;
    if steps < 2 {
        return Err(CliError::Config(format!(
            "steps: a sweep needs at least 2 samples, got {steps}"
        )));
    }
    if !(from.is_finite() && to.is_finite()) || from == to {
        return Err(CliError::Config(format!(
            "from: sweep range [{from}, {to}] is empty or not finite"
        )));
    }
    match var {
        SweepVar::Alpha => {
            for (name, v) in [("from", from), ("to", to)] {
                check_alpha(v).map_err(|_| {
                    CliError::Config(format!(
                        "{name}: alpha sweep bound {v} is outside 1 < alpha <= 2"
                    ))
                })?;
            }
        }
        SweepVar::G => {
            let probe = JobConfig { g: Some(from), ..cfg.clone() };
            if probe.mode()? == Mode::Physical {
                return Err(CliError::Config(
                    "sweep-var: a g sweep needs dimensionless mode".into(),
                ));
            }
            for (name, v) in [("from", from), ("to", to)] {
                if v <= 0.0 {
                    return Err(CliError::Config(format!(
                        "{name}: g sweep bound must be positive, got {v}"
                    )));
                }
            }
        }
    }
    let (lo, hi) = if from < to { (from, to) } else { (to, from) };

    let mut rows = Vec::with_capacity(steps);
    let mut base = cfg.clone();
    if var == SweepVar::G {
        // The swept value stands in for g and fixes the mode.
        base.mode.get_or_insert(Mode::Dimensionless);
    }
    for v in linspace(lo, hi, steps) {
        let mut job = base.clone();
        match var {
            SweepVar::Alpha => job.alpha = Some(v),
            SweepVar::G => job.g = Some(v),
        }
        let w = job.well()?.dimensionless()?;
        let s = solve_spectrum(&w)?;
        rows.push(SweepRow {
            alpha: w.alpha(),
            g: w.g(),
            sigma_max: s.sigma_max,
            fractions: s.energy_fractions(),
        });
    }

    Ok(match cfg.format() {
        Format::Json => {
            let mut m = Map::new();
            m.insert("command".into(), "sweep".into());
            m.insert(
                "sweep_var".into(),
                match var {
                    SweepVar::Alpha => "alpha",
                    SweepVar::G => "g",
                }
                .into(),
            );
            m.insert("steps".into(), steps.into());
            m.insert(
                "rows".into(),
                rows.iter()
                    .map(|r| {
                        json!({
                            "alpha": num(r.alpha),
                            "g": num(r.g),
                            "sigma_max": num(r.sigma_max),
                            "level_count": r.fractions.len(),
                            "energy_over_depth": r.fractions.iter().map(|&e| num(e)).collect::<Vec<_>>(),
                        })
                    })
                    .collect(),
            );
            json_document(m)
        }
        Format::Csv => {
            let widest = rows.iter().map(|r| r.fractions.len()).max().unwrap_or(0);
            let mut names = header(&["alpha", "g", "sigma_max", "level_count"]);
            names.extend((0..widest).map(|n| format!("e{n}_over_depth")));
            let table: Vec<Vec<Cell>> = rows
                .iter()
                .map(|r| {
                    let mut row: Vec<Cell> = vec![
                        r.alpha.into(),
                        r.g.into(),
                        r.sigma_max.into(),
                        r.fractions.len().into(),
                    ];
                    row.extend((0..widest).map(|n| Cell::from(r.fractions.get(n).copied())));
                    row
                })
                .collect();
            csv(&names, &table)
        }
    })
}

pub fn compare_cmd(cfg: &JobConfig) -> Result<String, CliError> {
    let well = cfg.well()?;
    let Some(p) = well.physical() else {
        return Err(CliError::Config(
            "mode: compare needs physical mode (a, depth, dalpha, hbar)".into(),
        ));
    };
    let n = cfg.grid_n.unwrap_or(DEFAULT_GRID_N);
    let l = cfg.grid_l.unwrap_or(DEFAULT_GRID_L_OVER_A * p.a());
    let grid = SpectralGrid::new(l, n)?;
    let report = compare(&OracleWell::from(*p), &grid)?;
    Ok(match cfg.format() {
        Format::Json => {
            let mut m = Map::new();
            m.insert("command".into(), "compare".into());
            m.insert("mode".into(), well.mode_name().into());
            m.insert("alpha".into(), num(report.alpha));
            m.insert("depth".into(), num(report.depth));
            m.insert("g".into(), opt_num(report.g));
            m.insert(
                "grid".into(),
                json!({
                    "box_half_length": num(report.grid.box_half_length),
                    "n_points": report.grid.n_points,
                    "spacing": num(report.grid.spacing),
                }),
            );
            m.insert("transcendental_count".into(), report.transcendental_count.into());
            m.insert("oracle_count".into(), report.oracle_count.into());
            m.insert(
                "oracle_energies".into(),
                report.oracle_energies.iter().map(|&e| num(e)).collect(),
            );
            m.insert(
                "levels".into(),
                report
                    .levels
                    .iter()
                    .map(|g| {
                        json!({
                            "index": g.index,
                            "parity": g.parity.as_str(),
                            "sigma": num(g.sigma),
                            "transcendental_energy": num(g.transcendental_energy),
                            "oracle_energy": opt_num(g.oracle_energy),
                            "abs_gap": opt_num(g.abs_gap),
                            "rel_gap": opt_num(g.rel_gap),
                        })
                    })
                    .collect(),
            );
            m.insert("max_abs_gap".into(), opt_num(report.max_abs_gap));
            m.insert("max_rel_gap".into(), opt_num(report.max_rel_gap));
            json_document(m)
        }
        Format::Csv => {
            let rows: Vec<Vec<Cell>> = report
                .levels
                .iter()
                .map(|g| {
                    vec![
                        g.index.into(),
                        g.parity.as_str().into(),
                        g.sigma.into(),
                        g.transcendental_energy.into(),
                        g.oracle_energy.into(),
                        g.abs_gap.into(),
                        g.rel_gap.into(),
                    ]
                })
                .collect();
            csv(
                &header(&[
                    "index",
                    "parity",
                    "sigma",
                    "transcendental_energy",
                    "oracle_energy",
                    "abs_gap",
                    "rel_gap",
                ]),
                &rows,
            )
        }
    })
}
