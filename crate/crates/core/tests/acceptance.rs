//! Acceptance criteria. Each test prints one `PASS`/`FAIL` line.

use std::time::{Duration, Instant};

use enosr::csvio::{read_samples, write_samples};
use enosr::harness::{default_base_grid, plus_minus_pair, DEFAULT_PROBES_PER_INTERVAL};
use enosr::{
    build_interpolant, convergence_study, f_d, fitted_order, label_intervals, sup_error, validate_b_runs,
    CornerFunction, Grid, Label, Mode, Samples,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn report(id: u32, name: &str, ok: bool, detail: &str) {
    println!("criterion {id} [{name}]: {} - {detail}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "criterion {id} failed: {detail}");
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

fn random_grid(rng: &mut ChaCha8Rng, nodes: std::ops::RangeInclusive<usize>, domain: (f64, f64)) -> Grid {
    let n = rng.gen_range(nodes);
    let sigma = rng.gen_range(1.0..=1.4);
    Grid::generate_quasi_uniform(n - 1, domain, sigma, rng.gen()).unwrap()
}

#[test]
fn criterion_1_polynomial_exactness() {
    let ((ok, worst), elapsed) = timed(|| {
        let mut worst: f64 = 0.0;
        let mut ok = true;
        for m in [3usize, 4] {
            for seed in 0..50u64 {
                let mut rng = ChaCha8Rng::seed_from_u64(1000 + seed);
                let grid = random_grid(&mut rng, 12..=40, (-1.0, 1.0));
                let coeffs: Vec<f64> = (0..m).map(|_| rng.gen_range(-5.0..5.0)).collect();
                let scale = coeffs.iter().fold(0.0f64, |a, c| a.max(c.abs()));
                let poly = {
                    let c = coeffs.clone();
                    move |x: f64| c.iter().rev().fold(0.0, |acc, ck| acc * x + ck)
                };
                let f = CornerFunction::smooth(poly, 0.0);
                let samples = f.sample(grid).unwrap();
                for mode in Mode::ALL {
                    let interp = build_interpolant(&samples, m, mode).unwrap();
                    let err = sup_error(&f, &interp, 1000 / interp.pieces().len() + 2) / scale;
                    worst = worst.max(err);
                    ok &= err <= 1e-10;
                }
            }
        }
        (ok, worst)
    });
    let fast = elapsed < Duration::from_secs(5);
    report(
        1,
        "polynomial exactness",
        ok && fast,
        &format!("worst relative sup error {worst:.2e} (<= 1e-10), {elapsed:.2?} (< 5 s)"),
    );
}

#[test]
fn criterion_2_exact_corner_recovery() {
    let ((ok, worst_psi, worst_sup), elapsed) = timed(|| {
        let (mut worst_psi, mut worst_sup) = (0.0f64, 0.0f64);
        let mut ok = true;
        for seed in 0..100u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(2000 + seed);
            let grid = random_grid(&mut rng, 20..=60, (0.0, 1.0));
            let x = grid.nodes();
            let n = grid.intervals();
            let mu = loop {
                let mu = rng.gen_range(x[6]..x[n - 6]);
                let j = grid.locate(mu).unwrap();
                if (mu - x[j]).min(x[j + 1] - mu) > 1e-3 * grid.h_min() {
                    break mu;
                }
            };
            let f = CornerFunction::abs(mu);
            let interp = build_interpolant(&f.sample(grid).unwrap(), 4, Mode::EnoSr).unwrap();
            let Some(psi) = interp.locate_corner().unwrap() else {
                ok = false;
                continue;
            };
            let sup = sup_error(&f, &interp, DEFAULT_PROBES_PER_INTERVAL);
            worst_psi = worst_psi.max((psi - mu).abs());
            worst_sup = worst_sup.max(sup);
            ok &= (psi - mu).abs() <= 1e-9 && sup <= 1e-9;
        }
        (ok, worst_psi, worst_sup)
    });
    let fast = elapsed < Duration::from_secs(5);
    report(
        2,
        "exact corner recovery",
        ok && fast,
        &format!("max |psi - mu| {worst_psi:.2e}, max sup error {worst_sup:.2e} (<= 1e-9), {elapsed:.2?} (< 5 s)"),
    );
}

const ORDER_DS: [f64; 3] = [4.0, 1.0, 0.25];
const ORDER_LEVELS: usize = 7;

#[test]
fn criterion_3_detection_order() {
    let base = default_base_grid();
    let (slopes, elapsed) = timed(|| {
        ORDER_DS
            .iter()
            .map(|&d| {
                let rows = convergence_study(&f_d(d), &base, ORDER_LEVELS, 4, Mode::EnoSr).unwrap();
                let tail: Option<Vec<f64>> = rows[ORDER_LEVELS - 3..].iter().map(|r| r.detection_error).collect();
                (d, tail.and_then(|e| fitted_order(&e)))
            })
            .collect::<Vec<_>>()
    });
    let ok = slopes.iter().all(|(_, s)| s.is_some_and(|s| (3.3..=5.5).contains(&s)));
    let fast = elapsed < Duration::from_secs(10);
    let detail: Vec<String> =
        slopes.iter().map(|(d, s)| format!("d={d}: {}", s.map_or("none".into(), |s| format!("{s:.3}")))).collect();
    report(
        3,
        "detection order",
        ok && fast,
        &format!("last-3-level slopes {} (in [3.3, 5.5]), {elapsed:.2?} (< 10 s)", detail.join(", ")),
    );
}

#[test]
fn criterion_4_interpolation_order() {
    let base = default_base_grid();
    let (slopes, elapsed) = timed(|| {
        ORDER_DS
            .iter()
            .map(|&d| {
                let rows = convergence_study(&f_d(d), &base, ORDER_LEVELS, 4, Mode::EnoSr).unwrap();
                let tail: Vec<f64> = rows[ORDER_LEVELS - 3..].iter().map(|r| r.interpolation_error).collect();
                (d, fitted_order(&tail))
            })
            .collect::<Vec<_>>()
    });
    let ok = slopes.iter().all(|(_, s)| s.is_some_and(|s| (3.6..=4.8).contains(&s)));
    let fast = elapsed < Duration::from_secs(10);
    let detail: Vec<String> =
        slopes.iter().map(|(d, s)| format!("d={d}: {}", s.map_or("none".into(), |s| format!("{s:.3}")))).collect();
    report(
        4,
        "interpolation order",
        ok && fast,
        &format!("last-3-level slopes {} (in [3.6, 4.8]), {elapsed:.2?} (< 10 s)", detail.join(", ")),
    );
}

#[test]
fn criterion_5_weak_corner_regime_change() {
    // Nine levels so that several levels lie below h_c = d/8 = 1/512.
    let d = 1.0 / 64.0;
    let f = f_d(d);
    let h_c = f.critical_spacing().unwrap();
    let rows = convergence_study(&f, &default_base_grid(), 9, 4, Mode::EnoSr).unwrap();
    for r in &rows {
        println!(
            "  k={} h_max={:.4e} h_max/h_c={:.2} e_k={}",
            r.level,
            r.h_max,
            r.h_max / h_c,
            r.detection_error.map_or("none".into(), |e| format!("{e:.4e}"))
        );
    }

    let coarse_ok = rows.iter().filter(|r| r.h_max > h_c).all(|r| r.detection_error.is_none_or(|e| e >= 1e-2));
    let fine: Vec<_> = rows.iter().filter(|r| r.h_max < h_c).collect();
    let ratios: Vec<f64> =
        fine.windows(2).map(|w| w[0].detection_error.zip(w[1].detection_error).map_or(0.0, |(a, b)| a / b)).collect();
    let fine_ok = !ratios.is_empty() && ratios.iter().all(|&r| r >= 8.0);
    let first_detected = rows.iter().find(|r| r.detection_error.is_some_and(|e| e < 1e-2));
    report(
        5,
        "weak-corner regime change",
        coarse_ok && fine_ok,
        &format!(
            "coarse levels (h_max > h_c) all O(1e-1) or none: {coarse_ok}; \
             per-level ratios below h_c {:?} (>= 8): {fine_ok}; first accurate level at h_max/h_c = {}",
            ratios.iter().map(|r| format!("{r:.2}")).collect::<Vec<_>>(),
            first_detected.map_or("none".into(), |r| format!("{:.2}", r.h_max / h_c)),
        ),
    );
}

#[test]
fn criterion_6_second_order_ceiling() {
    let mut ok = true;
    let mut min_ratio = f64::INFINITY;
    let mut max_upper = 0.0f64;
    for seed in 0..50u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(6000 + seed);
        let grid = random_grid(&mut rng, 16..=40, (0.0, 1.0));
        let j = rng.gen_range(5..grid.intervals() - 5);
        let h_j1 = grid.h(j + 1);
        let h = grid.h_max();
        let (plus, minus) = plus_minus_pair(&grid, j);
        let (sp, sm) = (plus.sample(grid.clone()).unwrap(), minus.sample(grid.clone()).unwrap());
        ok &= sp == sm;
        for mode in Mode::ALL {
            let ip = build_interpolant(&sp, 4, mode).unwrap();
            let im = build_interpolant(&sm, 4, mode).unwrap();
            ok &= ip == im;
            let ep = sup_error(&plus, &ip, DEFAULT_PROBES_PER_INTERVAL);
            let em = sup_error(&minus, &im, DEFAULT_PROBES_PER_INTERVAL);
            min_ratio = min_ratio.min(ep.max(em) / (h_j1 * h_j1 / 8.0));
            max_upper = max_upper.max(ep.max(em) / (h * h));
            ok &= ep.max(em) >= h_j1 * h_j1 / 8.0 && ep <= 2.0 * h * h && em <= 2.0 * h * h;
        }
    }
    report(
        6,
        "second-order ceiling",
        ok,
        &format!("min max(err+, err-) / (h_j+1^2/8) = {min_ratio:.3} (>= 1), max err / h^2 = {max_upper:.3} (<= 2)"),
    );
}

/// A random function with one corner at `mu` and `|f''| <= sup_f2` away from it.
fn random_corner_function(rng: &mut ChaCha8Rng, mu: f64, h_max: f64) -> CornerFunction {
    let jump: f64 = rng.gen_range(0.5..2.0) * if rng.gen() { 1.0 } else { -1.0 };
    let (a, w, phase) = (rng.gen_range(0.2..1.0), rng.gen_range(1.0..4.0), rng.gen_range(0.0..6.3));
    let (b, c): (f64, f64) = (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    // Bound on |f''|: a w^2 + 2|b| + 2|c|. Shrink the smooth part so h_max < 0.9 h_c.
    let raw_sup: f64 = a * w * w + 2.0 * b.abs() + 2.0 * c.abs();
    let shrink = (0.9 * jump.abs() / (4.0 * h_max * raw_sup)).min(1.0);
    let (a, b, c) = (a * shrink, b * shrink, c * shrink);
    let f = move |x: f64| {
        let t = (x - mu).max(0.0);
        jump * t + c * t * t + a * (w * x + phase).sin() + b * x * x
    };
    CornerFunction::new(f, mu, jump, raw_sup * shrink, 4)
}

#[test]
fn criterion_7_bad_run_structure() {
    let m = 4;
    let ((ok, failures), elapsed) = timed(|| {
        let mut failures = Vec::new();
        for seed in 0..500u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(7000 + seed);
            let grid = random_grid(&mut rng, 30..=80, (0.0, 1.0));
            let x = grid.nodes();
            let n = grid.intervals();
            let mu = rng.gen_range(x[m + 2]..x[n - m - 2]);
            let f = random_corner_function(&mut rng, mu, grid.h_max());
            assert!(grid.h_max() < f.critical_spacing().unwrap());
            let j = grid.locate(mu).unwrap();
            let labels = label_intervals(&f.sample(grid).unwrap(), m).unwrap();
            let violations = validate_b_runs(&labels, m);
            if !violations.is_empty() || labels.get(j) != Some(Label::B) {
                failures.push(format!("seed {seed}: {labels} j={j} {violations:?}"));
            }
        }
        (failures.is_empty(), failures)
    });
    for f in failures.iter().take(5) {
        println!("  {f}");
    }
    let fast = elapsed < Duration::from_secs(30);
    report(
        7,
        "B-run structure fuzz",
        ok && fast,
        &format!(
            "{} of 500 instances violate run structure or miss the corner, {elapsed:.2?} (< 30 s)",
            failures.len()
        ),
    );
}

#[test]
fn criterion_8_invariance_suite() {
    let m = 4;
    let (mut scale_ok, mut agree_ok, mut tile_ok, mut csv_ok) = (true, true, true, true);
    let mut all_g_cases = 0;
    for seed in 0..100u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(8000 + seed);
        let grid = random_grid(&mut rng, 14..=50, (-1.0, 1.0));
        let x = grid.nodes();
        let n = grid.intervals();
        let samples = if seed % 2 == 0 {
            let mu = rng.gen_range(x[2]..x[n - 2]);
            random_corner_function(&mut rng, mu, grid.h_max()).sample(grid.clone()).unwrap()
        } else {
            let (a, w) = (rng.gen_range(0.5..2.0), rng.gen_range(0.5..3.0));
            Samples::from_fn(grid.clone(), move |x| a * (w * x).sin() + x).unwrap()
        };

        let labels = label_intervals(&samples, m).unwrap();
        let lambda = rng.gen_range(1e-3..1e3);
        scale_ok &= label_intervals(&samples.scaled(lambda).unwrap(), m).unwrap() == labels;

        let enosr = build_interpolant(&samples, m, Mode::EnoSr).unwrap();
        if labels.all_g() {
            all_g_cases += 1;
            let eno = build_interpolant(&samples, m, Mode::Eno).unwrap();
            agree_ok &= enosr.pieces() == eno.pieces();
        }

        for mode in Mode::ALL {
            let interp = build_interpolant(&samples, m, mode).unwrap();
            let p = interp.pieces();
            tile_ok &= p[0].lo == grid.lo()
                && p[p.len() - 1].hi == grid.hi()
                && p.windows(2).all(|w| w[0].hi == w[1].lo && w[0].lo < w[0].hi);
        }

        let mut buf = Vec::new();
        write_samples(&mut buf, &samples).unwrap();
        let back = read_samples(buf.as_slice()).unwrap();
        csv_ok &= back.nodes().iter().zip(samples.nodes()).all(|(a, b)| a.to_bits() == b.to_bits())
            && back.values().iter().zip(samples.values()).all(|(a, b)| a.to_bits() == b.to_bits());
    }
    report(
        8,
        "invariance suite",
        scale_ok && agree_ok && tile_ok && csv_ok && all_g_cases > 0,
        &format!(
            "scale invariance {scale_ok}, ENO-SR = ENO on {all_g_cases} all-G cases {agree_ok}, \
             tiling {tile_ok}, CSV round trip {csv_ok}"
        ),
    );
}
