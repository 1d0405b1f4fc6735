//! Reference implementations used as test oracles. Written independently of
//! the library: whole-array evaluation, brute-force sums, and an arithmetic
//! re-simulation of the detector.

#![allow(dead_code)]

pub mod gen;

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use stillwatch::EventKind;

/// Single-section band-pass from the hand-derived bilinear transform of
/// `bw s / (s^2 + bw s + w0^2)` with pre-warped edges. Returns `(b, a)`
/// with `a[0] = 1`.
pub fn oracle_design(fs: f64, low: f64, high: f64) -> ([f64; 3], [f64; 3]) {
    let k = 2.0 * fs;
    let wl = k * (PI * low / fs).tan();
    let wh = k * (PI * high / fs).tan();
    let bw = wh - wl;
    let w0_sq = wl * wh;
    let a0 = k * k + bw * k + w0_sq;
    (
        [bw * k / a0, 0.0, -bw * k / a0],
        [
            1.0,
            (2.0 * w0_sq - 2.0 * k * k) / a0,
            (k * k - bw * k + w0_sq) / a0,
        ],
    )
}

/// |H(e^{j 2 pi f / fs})| by direct polynomial evaluation.
pub fn magnitude(b: [f64; 3], a: [f64; 3], f: f64, fs: f64) -> f64 {
    let w = 2.0 * PI * f / fs;
    let mut num = Complex64::new(0.0, 0.0);
    let mut den = Complex64::new(0.0, 0.0);
    for n in 0..3 {
        let e = Complex64::from_polar(1.0, -w * n as f64);
        num += b[n] * e;
        den += a[n] * e;
    }
    (num / den).norm()
}

/// Direct form I over a whole signal, zero initial conditions.
pub fn filter_offline(b: [f64; 3], a: [f64; 3], x: &[f64]) -> Vec<f64> {
    let mut y = vec![0.0; x.len()];
    for n in 0..x.len() {
        let xi = |k: usize| if n >= k { x[n - k] } else { 0.0 };
        let yi = |y: &[f64], k: usize| if n >= k { y[n - k] } else { 0.0 };
        y[n] = b[0] * xi(0) + b[1] * xi(1) + b[2] * xi(2) - a[1] * yi(&y, 1) - a[2] * yi(&y, 2);
    }
    y
}

pub struct OracleCounts {
    pub sums: Vec<[f64; 3]>,
    pub vm: Vec<f64>,
}

/// Whole-array counts: filter each axis, threshold, scale, brute-force
/// trailing sums, Euclidean norm. Default settings at 100 Hz.
pub fn oracle_counts(axes: [&[f64]; 3]) -> OracleCounts {
    let (b, a) = oracle_design(100.0, 0.305, 1.615);
    let per_axis: Vec<Vec<f64>> = axes
        .iter()
        .map(|x| {
            let y = filter_offline(b, a, x);
            let c: Vec<f64> = y
                .iter()
                .map(|v| {
                    let r = v.abs();
                    let r = if r < 0.068 { 0.0 } else { r.min(2.13) };
                    r / 0.01664 / 100.0
                })
                .collect();
            window_sums(&c, 100)
        })
        .collect();
    let n = axes[0].len();
    let sums: Vec<[f64; 3]> = (0..n)
        .map(|i| [per_axis[0][i], per_axis[1][i], per_axis[2][i]])
        .collect();
    let vm = sums
        .iter()
        .map(|s| (s[0] * s[0] + s[1] * s[1] + s[2] * s[2]).sqrt())
        .collect();
    OracleCounts { sums, vm }
}

/// Brute-force sum of the trailing `len` values at every index.
pub fn window_sums(c: &[f64], len: usize) -> Vec<f64> {
    (0..c.len())
        .map(|i| c[i.saturating_sub(len - 1)..=i].iter().sum())
        .collect()
}

pub fn close(a: f64, b: f64, rel: f64) -> bool {
    let scale = a.abs().max(b.abs());
    (a - b).abs() <= rel * scale.max(1e-300) || scale == 0.0
}

/// Event-free re-simulation of the detector on a VM trace. Events are
/// `(tick index, kind)`; the first tick arms the timer.
pub fn oracle_events(
    vm: &[f64],
    threshold: f64,
    inactivity_ticks: usize,
    vibration_ticks: usize,
) -> Vec<(usize, EventKind)> {
    let n = vm.len();
    let moved = |i: usize| vm[i] > threshold;
    let mut out = Vec::new();
    let mut last_reset = 0usize;
    let mut i = 0usize;
    if n > 0 && moved(0) {
        out.push((0, EventKind::TimerReset));
    }
    if n > 0 {
        i = 1;
    }
    while i < n {
        let deadline = last_reset + inactivity_ticks;
        let stop = deadline.min(n - 1);
        if let Some(j) = (i..=stop).find(|&j| moved(j)) {
            out.push((j, EventKind::TimerReset));
            last_reset = j;
            i = j + 1;
            continue;
        }
        if deadline >= n {
            break;
        }
        out.push((deadline, EventKind::VibrationStart));
        let end = deadline + vibration_ticks;
        let search_end = end.min(n - 1);
        match (deadline + 1..=search_end).find(|&k| moved(k)) {
            Some(k) => {
                out.push((k, EventKind::VibrationEnd));
                out.push((k, EventKind::TimerReset));
                last_reset = k;
                i = k + 1;
            }
            None if end < n => {
                out.push((end, EventKind::VibrationEnd));
                out.push((end, EventKind::TimerReset));
                last_reset = end;
                i = end + 1;
            }
            None => break,
        }
    }
    out
}

/// Random VM trace: quiet stretches with occasional movement bursts, and
/// values that sit exactly on the threshold now and then.
pub fn random_vm_trace<R: Rng>(rng: &mut R, len: usize, threshold: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(len);
    let p_burst = rng.gen_range(0.0005..0.01);
    let mut burst_left = 0usize;
    for _ in 0..len {
        if burst_left == 0 && rng.gen_bool(p_burst) {
            burst_left = rng.gen_range(1..200);
        }
        let v = if burst_left > 0 {
            burst_left -= 1;
            if rng.gen_bool(0.8) {
                rng.gen_range(threshold..2.0 * threshold)
            } else {
                rng.gen_range(0.0..threshold)
            }
        } else if rng.gen_bool(0.001) {
            threshold
        } else {
            rng.gen_range(0.0..threshold * 0.9)
        };
        out.push(v);
    }
    out
}
