//! Random, valid instances of every file format.

use rand::seq::SliceRandom;
use rand::Rng;
use stillwatch::io::DeviceInput;
use stillwatch::sim::{Axis, MotorFeedback, TraceRow};
use stillwatch::{
    Button, CountsConfig, DetectorConfig, DetectorEvent, DeviceConfig, EventKind, FilterSpec,
    LedSnapshot, RawSample, Scenario, Segment, SegmentKind, Settings, VmCount,
};

/// Any finite value, biased towards awkward ones.
pub fn any_value<R: Rng>(rng: &mut R) -> f64 {
    match rng.gen_range(0..10) {
        0 => 0.0,
        1 => -0.0,
        2 => *[
            1e-300,
            -1e-300,
            5e-324,
            1e300,
            -1.7e308,
            f64::MAX,
            f64::MIN_POSITIVE,
        ]
        .choose(rng)
        .unwrap(),
        3 => rng.gen_range(-1e6..1e6),
        4 => f64::from_bits(rng.gen::<u64>() & !(0x7ff << 52) | (rng.gen_range(1..0x7fe) << 52)),
        _ => rng.gen_range(-3.0..3.0),
    }
}

pub fn non_negative<R: Rng>(rng: &mut R) -> f64 {
    any_value(rng).abs()
}

fn start_tick<R: Rng>(rng: &mut R) -> u64 {
    if rng.gen_bool(0.5) {
        0
    } else {
        rng.gen_range(0..10_000_000)
    }
}

fn grid_times<R: Rng>(rng: &mut R, n: usize, repeats: bool) -> Vec<f64> {
    let mut k = start_tick(rng);
    (0..n)
        .map(|_| {
            let t = k as f64 / 100.0;
            k += if repeats {
                rng.gen_range(0..3)
            } else {
                rng.gen_range(1..4)
            };
            t
        })
        .collect()
}

pub fn samples<R: Rng>(rng: &mut R, n: usize) -> Vec<RawSample> {
    let k0 = start_tick(rng);
    (0..n as u64)
        .map(|i| {
            RawSample::new(
                (k0 + i) as f64 / 100.0,
                any_value(rng),
                any_value(rng),
                any_value(rng),
            )
        })
        .collect()
}

pub fn counts<R: Rng>(rng: &mut R, n: usize) -> Vec<VmCount> {
    grid_times(rng, n, false)
        .into_iter()
        .map(|t| VmCount {
            t,
            value: non_negative(rng),
            epoch_sums: [non_negative(rng), non_negative(rng), non_negative(rng)],
        })
        .collect()
}

pub fn events<R: Rng>(rng: &mut R, n: usize) -> Vec<DetectorEvent> {
    let kinds = [
        EventKind::TimerReset,
        EventKind::VibrationStart,
        EventKind::VibrationEnd,
    ];
    grid_times(rng, n, true)
        .into_iter()
        .map(|t| DetectorEvent {
            t,
            kind: *kinds.choose(rng).unwrap(),
        })
        .collect()
}

pub fn button<R: Rng>(rng: &mut R) -> Button {
    *[Button::Select, Button::RedToggle, Button::Power]
        .choose(rng)
        .unwrap()
}

pub fn device_log<R: Rng>(rng: &mut R, n: usize) -> Vec<DeviceInput> {
    let mut out = Vec::with_capacity(n);
    let mut t = rng.gen_range(0.0..100.0);
    let mut last_sample = None;
    for _ in 0..n {
        if rng.gen_bool(0.1) {
            out.push(DeviceInput::Button {
                t,
                button: button(rng),
            });
        } else {
            if last_sample == Some(t) {
                t += rng.gen_range(1e-6..0.1);
            }
            out.push(DeviceInput::Sample {
                t,
                vm: non_negative(rng),
            });
            last_sample = Some(t);
        }
        if rng.gen_bool(0.7) {
            t += rng.gen_range(1e-6..0.1);
        }
    }
    out
}

fn snapshot<R: Rng>(rng: &mut R, t: f64) -> LedSnapshot {
    LedSnapshot {
        t,
        motor: rng.gen(),
        white: rng.gen(),
        blue: rng.gen(),
        red: rng.gen(),
        option: rng.gen_range(0..3),
        timer_seconds: non_negative(rng),
    }
}

pub fn snapshots<R: Rng>(rng: &mut R, n: usize) -> Vec<LedSnapshot> {
    grid_times(rng, n, true)
        .into_iter()
        .map(|t| snapshot(rng, t))
        .collect()
}

pub fn trace<R: Rng>(rng: &mut R, n: usize) -> Vec<TraceRow> {
    grid_times(rng, n, false)
        .into_iter()
        .map(|t| TraceRow {
            sample: RawSample::new(t, any_value(rng), any_value(rng), any_value(rng)),
            count: VmCount {
                t,
                value: non_negative(rng),
                epoch_sums: [non_negative(rng), non_negative(rng), non_negative(rng)],
            },
            snapshot: snapshot(rng, t),
        })
        .collect()
}

fn segment_kind<R: Rng>(rng: &mut R) -> SegmentKind {
    let amp = rng.gen_range(0.0..3.0);
    let f = rng.gen_range(0.01..49.0);
    match rng.gen_range(0..4) {
        0 => SegmentKind::Rest,
        1 => SegmentKind::SineMovement {
            axis: *[Axis::X, Axis::Y, Axis::Z].choose(rng).unwrap(),
            amplitude_g: amp,
            frequency_hz: f,
        },
        2 => SegmentKind::BurstMovement {
            amplitude_g: amp,
            center_frequency_hz: f,
        },
        _ => SegmentKind::AmbientVibration {
            amplitude_g: amp,
            frequency_hz: f,
        },
    }
}

/// A valid scenario at 100 Hz.
pub fn scenario<R: Rng>(rng: &mut R) -> Scenario {
    let duration = rng.gen_range(1..6000) as f64 / 100.0;
    let mut cuts: Vec<f64> = (0..rng.gen_range(0..5))
        .map(|_| rng.gen_range(0.0..duration))
        .filter(|c| *c > 0.0)
        .collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let mut bounds = vec![0.0];
    bounds.extend(cuts);
    bounds.push(duration);
    let segments = bounds
        .windows(2)
        .map(|w| Segment::new(segment_kind(rng), w[0], w[1]))
        .collect();
    let mut presses: Vec<(f64, Button)> = (0..rng.gen_range(0..6))
        .map(|_| (rng.gen_range(0.0..=duration), button(rng)))
        .collect();
    presses.sort_by(|a, b| a.0.total_cmp(&b.0));
    Scenario {
        duration_seconds: duration,
        seed: rng.gen_range(0..=i64::MAX as u64),
        noise_sigma_g: rng.gen_range(0.0..0.05),
        segments,
        motor_feedback: MotorFeedback {
            enabled: rng.gen(),
            amplitude_g: rng.gen_range(0.0..2.0),
            frequency_hz: rng.gen_range(10.0..49.0),
        },
        button_presses: presses,
    }
}

/// A valid set of settings at a random sample rate.
pub fn settings<R: Rng>(rng: &mut R) -> Settings {
    let fs = *[25.0, 50.0, 64.0, 100.0, 128.0, 200.0].choose(rng).unwrap();
    let low = rng.gen_range(0.05..1.0);
    let high = rng.gen_range(low * 1.5..fs * 0.4);
    let deadband = rng.gen_range(0.001..0.5);
    let vibration = rng.gen_range(0.5..20.0);
    Settings {
        filter: FilterSpec::new(fs, low, high).unwrap(),
        filter_order: 2 * rng.gen_range(1..5),
        counts: CountsConfig {
            deadband_g: deadband,
            saturation_g: rng.gen_range(deadband * 1.1..10.0),
            scale_g_per_sec_per_count: rng.gen_range(0.001..0.1),
            epoch_seconds: rng.gen_range(1..600) as f64 / fs,
            sample_rate_hz: fs,
        },
        detector: DetectorConfig {
            count_threshold: rng.gen_range(1.0..500.0),
            inactivity_seconds: rng.gen_range(0.5..120.0),
            vibration_seconds: vibration,
            tick_seconds: 1.0 / fs,
        },
        device: DeviceConfig {
            inactivity_options: [
                rng.gen_range(0.5..120.0),
                rng.gen_range(0.5..120.0),
                rng.gen_range(0.5..120.0),
            ],
            vibration_seconds: vibration,
            red_led_enabled_default: rng.gen(),
            blue_flash_period_seconds: rng.gen_range(0.05..1.0),
        },
    }
}
