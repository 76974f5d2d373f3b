//! Reference computations used only by tests. Nothing here calls into the
//! solver's branch machinery.

#![allow(dead_code)]

use fqwell::Parity;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

/// `ς` roots of `G = 16`, `α = 2`, computed at 40 digits with an external
/// arbitrary-precision root finder.
pub const G16_ROOTS: [f64; 3] = [
    1.252_353_234_002_588_8,
    2.474_576_787_369_829,
    3.595_304_867_161_548,
];
pub const G16_ETAS: [f64; 3] = [
    3.798_896_073_503_888,
    3.142_685_113_626_628_7,
    1.753_220_725_454_865_2,
];

pub fn eta_of(g: f64, alpha: f64, sigma: f64) -> f64 {
    let rest = g - sigma.powf(alpha);
    if rest <= 0.0 {
        0.0
    } else {
        rest.powf(1.0 / alpha)
    }
}

/// Pole-free form of the even condition: `η cos ς - ς sin ς`.
pub fn even_pole_free(g: f64, alpha: f64, s: f64) -> f64 {
    eta_of(g, alpha, s) * s.cos() - s * s.sin()
}

/// Pole-free form of the odd condition: `η sin ς + ς cos ς`.
pub fn odd_pole_free(g: f64, alpha: f64, s: f64) -> f64 {
    eta_of(g, alpha, s) * s.sin() + s * s.cos()
}

fn bisect(f: &dyn Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let f_lo = f(lo);
    for _ in 0..400 {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm < 0.0) == (f_lo < 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Sign changes of `f` on `(0, end]` sampled at `step`; returns bracketing cells.
fn sign_change_cells(f: &dyn Fn(f64) -> f64, start: f64, end: f64, step: f64) -> Vec<(f64, f64)> {
    let n = ((end - start) / step).ceil() as usize;
    let mut cells = Vec::new();
    let mut x0 = start;
    let mut f0 = f(x0);
    for i in 1..=n {
        let x1 = if i == n { end } else { start + i as f64 * step };
        let f1 = f(x1);
        if f0 != 0.0 && f1 != 0.0 && (f0 < 0.0) != (f1 < 0.0) {
            cells.push((x0, x1));
        } else if f1 == 0.0 && i < n {
            cells.push((x0, x1));
        }
        x0 = x1;
        f0 = f1;
    }
    cells
}

/// Dense scan of both pole-free conditions over `(0, ς_max)` with `step`,
/// refined by bisection to `1e-12`. Roots are returned sorted by `ς`.
pub fn dense_scan_roots(g: f64, alpha: f64, step: f64) -> Vec<(Parity, f64)> {
    let smax = g.powf(1.0 / alpha);
    let mut roots = Vec::new();
    for parity in [Parity::Even, Parity::Odd] {
        let f = move |s: f64| match parity {
            Parity::Even => even_pole_free(g, alpha, s),
            Parity::Odd => odd_pole_free(g, alpha, s),
        };
        let start = step.min(smax * 0.5);
        for (lo, hi) in sign_change_cells(&f, start, smax, step) {
            roots.push((parity, bisect(&f, lo, hi, 1e-12)));
        }
    }
    roots.sort_by(|a, b| a.1.total_cmp(&b.1));
    roots
}

/// Two-stage scan: locate sign changes at `coarse`, then rescan each
/// bracketing cell at `fine` before bisecting. Equivalent to a scan at
/// `fine` as long as no cell of width `coarse` holds two roots of one parity.
pub fn staged_scan_roots(g: f64, alpha: f64, coarse: f64, fine: f64) -> Vec<(Parity, f64)> {
    let smax = g.powf(1.0 / alpha);
    let mut roots = Vec::new();
    for parity in [Parity::Even, Parity::Odd] {
        let f = move |s: f64| match parity {
            Parity::Even => even_pole_free(g, alpha, s),
            Parity::Odd => odd_pole_free(g, alpha, s),
        };
        let start = coarse.min(smax * 0.5);
        for (lo, hi) in sign_change_cells(&f, start, smax, coarse) {
            for (l2, h2) in sign_change_cells(&f, lo, hi, fine) {
                roots.push((parity, bisect(&f, l2, h2, 1e-12)));
            }
        }
    }
    roots.sort_by(|a, b| a.1.total_cmp(&b.1));
    roots
}

/// Number of sign changes of the two pole-free conditions on `(0, ς_max)`.
pub fn scan_count(g: f64, alpha: f64, step: f64) -> usize {
    let smax = g.powf(1.0 / alpha);
    let step = step.min(smax / 64.0);
    let even = |s: f64| even_pole_free(g, alpha, s);
    let odd = |s: f64| odd_pole_free(g, alpha, s);
    sign_change_cells(&even, step, smax, step).len() + sign_change_cells(&odd, step, smax, step).len()
}

/// Random `(G, α)`: `G` log-uniform on `(g_lo, g_hi)`, `α` uniform on `(1.001, 2]`.
pub fn random_wells(seed: u64, count: usize, g_lo: f64, g_hi: f64) -> Vec<(f64, f64)> {
    let mut rng = StdRng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let g = (rng.gen_range(g_lo.ln()..g_hi.ln())).exp();
            let alpha = 2.0 - rng.gen_range(0.0..0.999);
            (g, alpha)
        })
        .collect()
}

/// Adaptive Simpson quadrature of `f` on `[a, b]` to absolute `tol`.
pub fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson(fa: f64, fm: f64, fb: f64, a: f64, b: f64) -> f64 {
        (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = simpson(fa, flm, fm, a, m);
        let right = simpson(fm, frm, fb, m, b);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            left + right + delta / 15.0
        } else {
            recurse(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
                + recurse(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
        }
    }
    // Seed with a uniform split so oscillatory integrands are resolved
    // before the error estimate is trusted.
    let pieces = 64;
    let h = (b - a) / pieces as f64;
    (0..pieces)
        .map(|i| {
            let (l, r) = (a + i as f64 * h, if i + 1 == pieces { b } else { a + (i + 1) as f64 * h });
            let (fl, fm, fr) = (f(l), f(0.5 * (l + r)), f(r));
            recurse(f, l, r, fl, fm, fr, simpson(fl, fm, fr, l, r), tol / pieces as f64, 40)
        })
        .sum()
}
