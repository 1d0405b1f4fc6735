//! Deterministic scenario simulator.
//!
//! A [`Scenario`] describes a synthetic wrist: piecewise segments of rest,
//! movement and ambient vibration on top of gravity, seeded Gaussian sensor
//! noise, button presses, and the vibration motor shaking the sensor while
//! it runs. [`run`] closes the loop through the counts pipeline and the
//! device: the motor state after tick `k` feeds the sample of tick `k + 1`.

use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::counts::{RawSample, VmCount};
use crate::detector::DetectorEvent;
use crate::device::{Button, LedSnapshot};
use crate::error::{ensure_finite, Error, Result};
use crate::settings::Settings;

pub const DEFAULT_NOISE_SIGMA_G: f64 = 0.003;
pub const DEFAULT_MOTOR_AMPLITUDE_G: f64 = 0.5;
pub const DEFAULT_MOTOR_FREQUENCY_HZ: f64 = 20.0;

/// RNG words reserved per tick; each tick draws three normals.
const WORDS_PER_TICK: u128 = 64;
const TIME_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Axis::X => "x",
            Axis::Y => "y",
            Axis::Z => "z",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "x" => Some(Axis::X),
            "y" => Some(Axis::Y),
            "z" => Some(Axis::Z),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SegmentKind {
    /// Gravity only.
    Rest,
    /// `amplitude * sin(2 pi f (t - start))` on one axis.
    SineMovement {
        axis: Axis,
        amplitude_g: f64,
        frequency_hz: f64,
    },
    /// A movement on all three axes, 120 degrees apart, with raised-cosine
    /// ramps (0.5 s, or a quarter of the segment if shorter) at both ends.
    BurstMovement {
        amplitude_g: f64,
        center_frequency_hz: f64,
    },
    /// Environmental shaking (wheelchair, vehicle) on all axes.
    AmbientVibration { amplitude_g: f64, frequency_hz: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub kind: SegmentKind,
    pub start: f64,
    pub end: f64,
}

impl Segment {
    pub fn new(kind: SegmentKind, start: f64, end: f64) -> Self {
        Self { kind, start, end }
    }

    /// Additive movement acceleration (without gravity) at time `t`.
    fn acceleration(&self, t: f64) -> [f64; 3] {
        let tau = t - self.start;
        match self.kind {
            SegmentKind::Rest => [0.0; 3],
            SegmentKind::SineMovement {
                axis,
                amplitude_g,
                frequency_hz,
            } => {
                let mut a = [0.0; 3];
                a[axis.index()] = amplitude_g * (2.0 * PI * frequency_hz * tau).sin();
                a
            }
            SegmentKind::BurstMovement {
                amplitude_g,
                center_frequency_hz,
            } => {
                let len = self.end - self.start;
                let ramp = (len / 4.0).min(0.5);
                let edge = tau.min(self.end - t);
                let envelope = if edge >= ramp {
                    1.0
                } else if edge <= 0.0 {
                    0.0
                } else {
                    (PI * edge / (2.0 * ramp)).sin().powi(2)
                };
                let phase = 2.0 * PI * center_frequency_hz * tau;
                let amp = amplitude_g * envelope;
                [
                    amp * phase.sin(),
                    amp * (phase + 2.0 * PI / 3.0).sin(),
                    amp * (phase + 4.0 * PI / 3.0).sin(),
                ]
            }
            SegmentKind::AmbientVibration {
                amplitude_g,
                frequency_hz,
            } => [amplitude_g * (2.0 * PI * frequency_hz * t).sin(); 3],
        }
    }

    fn frequency(&self) -> Option<f64> {
        match self.kind {
            SegmentKind::Rest => None,
            SegmentKind::SineMovement { frequency_hz, .. }
            | SegmentKind::AmbientVibration { frequency_hz, .. } => Some(frequency_hz),
            SegmentKind::BurstMovement {
                center_frequency_hz,
                ..
            } => Some(center_frequency_hz),
        }
    }

    fn amplitude(&self) -> Option<f64> {
        match self.kind {
            SegmentKind::Rest => None,
            SegmentKind::SineMovement { amplitude_g, .. }
            | SegmentKind::AmbientVibration { amplitude_g, .. }
            | SegmentKind::BurstMovement { amplitude_g, .. } => Some(amplitude_g),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MotorFeedback {
    pub enabled: bool,
    pub amplitude_g: f64,
    pub frequency_hz: f64,
}

impl Default for MotorFeedback {
    fn default() -> Self {
        Self {
            enabled: false,
            amplitude_g: DEFAULT_MOTOR_AMPLITUDE_G,
            frequency_hz: DEFAULT_MOTOR_FREQUENCY_HZ,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub duration_seconds: f64,
    pub seed: u64,
    pub noise_sigma_g: f64,
    pub segments: Vec<Segment>,
    pub motor_feedback: MotorFeedback,
    pub button_presses: Vec<(f64, Button)>,
}

impl Scenario {
    /// All-rest scenario of the given length.
    pub fn rest(duration_seconds: f64, seed: u64) -> Self {
        Self {
            duration_seconds,
            seed,
            noise_sigma_g: DEFAULT_NOISE_SIGMA_G,
            segments: if duration_seconds > 0.0 {
                vec![Segment::new(SegmentKind::Rest, 0.0, duration_seconds)]
            } else {
                Vec::new()
            },
            motor_feedback: MotorFeedback::default(),
            button_presses: Vec::new(),
        }
    }

    pub fn validate(&self, sample_rate_hz: f64) -> Result<()> {
        let bad = |reason: String| Err(Error::config("scenario", reason));
        ensure_finite("scenario duration", self.duration_seconds)?;
        ensure_finite("noise sigma", self.noise_sigma_g)?;
        if self.duration_seconds < 0.0 {
            return bad(format!(
                "duration must be >= 0, got {}",
                self.duration_seconds
            ));
        }
        if self.noise_sigma_g < 0.0 {
            return bad(format!(
                "noise sigma must be >= 0, got {}",
                self.noise_sigma_g
            ));
        }
        let nyquist = sample_rate_hz / 2.0;

        if self.duration_seconds == 0.0 {
            if !self.segments.is_empty() {
                return bad("a zero-length scenario cannot have segments".into());
            }
        } else if self.segments.is_empty() {
            return bad("segments must cover [0, duration]".into());
        }
        let mut cursor = 0.0;
        for (i, seg) in self.segments.iter().enumerate() {
            let n = i + 1;
            ensure_finite("segment start", seg.start)?;
            ensure_finite("segment end", seg.end)?;
            if (seg.start - cursor).abs() > TIME_SLACK {
                return bad(format!(
                    "segment {n} starts at {} but the previous one ends at {cursor}",
                    seg.start
                ));
            }
            if seg.end <= seg.start {
                return bad(format!("segment {n} is empty or reversed"));
            }
            if let Some(f) = seg.frequency() {
                ensure_finite("segment frequency", f)?;
                if f <= 0.0 || f >= nyquist {
                    return bad(format!(
                        "segment {n} frequency {f} Hz must lie in (0, {nyquist}) Hz"
                    ));
                }
            }
            if let Some(a) = seg.amplitude() {
                ensure_finite("segment amplitude", a)?;
                if a < 0.0 {
                    return bad(format!("segment {n} amplitude must be >= 0"));
                }
            }
            cursor = seg.end;
        }
        if !self.segments.is_empty() && (cursor - self.duration_seconds).abs() > TIME_SLACK {
            return bad(format!(
                "segments end at {cursor} but the duration is {}",
                self.duration_seconds
            ));
        }

        let m = &self.motor_feedback;
        ensure_finite("motor amplitude", m.amplitude_g)?;
        ensure_finite("motor frequency", m.frequency_hz)?;
        if m.amplitude_g < 0.0 || m.frequency_hz <= 0.0 || m.frequency_hz >= nyquist {
            return bad(format!(
                "motor feedback needs amplitude >= 0 and frequency in (0, {nyquist}) Hz"
            ));
        }

        let mut last = 0.0;
        for (t, _) in &self.button_presses {
            ensure_finite("button time", *t)?;
            if *t < last || *t > self.duration_seconds {
                return bad(format!(
                    "button press at {t} s is out of order or outside [0, {}]",
                    self.duration_seconds
                ));
            }
            last = *t;
        }
        Ok(())
    }

    /// Number of ticks in the run: samples at `k / fs` for `0 <= k < n`.
    pub fn tick_count(&self, sample_rate_hz: f64) -> u64 {
        (self.duration_seconds * sample_rate_hz).round() as u64
    }

    fn segment_at(&self, t: f64) -> Option<&Segment> {
        self.segments
            .iter()
            .find(|s| t >= s.start - TIME_SLACK && t < s.end - TIME_SLACK)
            .or_else(|| self.segments.last())
    }
}

/// Produces the synthetic sensor stream of a scenario.
#[derive(Debug, Clone)]
pub struct SignalGenerator<'a> {
    scenario: &'a Scenario,
    sample_rate_hz: f64,
    rng: ChaCha8Rng,
    noise: Option<Normal<f64>>,
}

impl<'a> SignalGenerator<'a> {
    pub fn new(scenario: &'a Scenario, sample_rate_hz: f64) -> Result<Self> {
        ensure_finite("sample rate", sample_rate_hz)?;
        if sample_rate_hz <= 0.0 {
            return Err(Error::config("scenario", "sample rate must be positive"));
        }
        scenario.validate(sample_rate_hz)?;
        let noise = (scenario.noise_sigma_g > 0.0)
            .then(|| Normal::new(0.0, scenario.noise_sigma_g).expect("sigma validated"));
        Ok(Self {
            scenario,
            sample_rate_hz,
            rng: ChaCha8Rng::seed_from_u64(scenario.seed),
            noise,
        })
    }

    /// Sample at grid time `t`. `motor_on` is the motor state after the
    /// previous tick. Depends only on (scenario, seed, t, motor_on).
    pub fn generate(&self, t: f64, motor_on: bool) -> Result<RawSample> {
        ensure_finite("sample time", t)?;
        let k = (t * self.sample_rate_hz).round();
        if t < -TIME_SLACK
            || t > self.scenario.duration_seconds + TIME_SLACK
            || (t * self.sample_rate_hz - k).abs() > 1e-6
        {
            return Err(Error::OffGrid { t });
        }
        Ok(self.sample_at_tick(k as u64, motor_on))
    }

    pub(crate) fn sample_at_tick(&self, tick: u64, motor_on: bool) -> RawSample {
        let t = tick as f64 / self.sample_rate_hz;
        let mut a = [0.0, 0.0, 1.0];
        if let Some(seg) = self.scenario.segment_at(t) {
            for (ai, m) in a.iter_mut().zip(seg.acceleration(t)) {
                *ai += m;
            }
        }
        let motor = &self.scenario.motor_feedback;
        if motor.enabled && motor_on {
            let v = motor.amplitude_g * (2.0 * PI * motor.frequency_hz * t).sin();
            for ai in &mut a {
                *ai += v;
            }
        }
        if let Some(noise) = &self.noise {
            let mut rng = self.rng.clone();
            rng.set_word_pos(tick as u128 * WORDS_PER_TICK);
            for ai in &mut a {
                *ai += noise.sample(&mut rng);
            }
        }
        RawSample::new(t, a[0], a[1], a[2])
    }
}

/// One tick of a simulation: the sensor sample, its counts and the device outputs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRow {
    pub sample: RawSample,
    pub count: VmCount,
    pub snapshot: LedSnapshot,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SimulationTrace {
    pub rows: Vec<TraceRow>,
    pub events: Vec<DetectorEvent>,
}

impl SimulationTrace {
    pub fn vm_trace(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.rows.iter().map(|r| (r.count.t, r.count.value))
    }
}

/// Runs the closed loop: generate -> counts -> device, one tick per sample.
/// Button presses are applied before the first tick at or after their time.
pub fn run(scenario: &Scenario, settings: &Settings) -> Result<SimulationTrace> {
    settings.validate()?;
    let fs = settings.counts.sample_rate_hz;
    let generator = SignalGenerator::new(scenario, fs)?;
    let mut pipeline = settings.pipeline()?;
    let mut device = settings.device()?;

    let n = scenario.tick_count(fs);
    let mut trace = SimulationTrace {
        rows: Vec::with_capacity(n as usize),
        events: Vec::new(),
    };
    let mut presses = scenario.button_presses.iter().peekable();
    let mut motor_on = false;
    for k in 0..n {
        let t = k as f64 / fs;
        while let Some((tp, button)) = presses.next_if(|(tp, _)| *tp <= t + TIME_SLACK) {
            trace
                .events
                .extend(device.press_button(*button, *tp)?.events);
        }
        let sample = generator.sample_at_tick(k, motor_on);
        let count = pipeline.process_sample(sample)?;
        let (snapshot, events) = device.device_tick(count.value, t)?;
        trace.events.extend(events);
        motor_on = snapshot.motor;
        trace.rows.push(TraceRow {
            sample,
            count,
            snapshot,
        });
    }
    Ok(trace)
}

/// The worked example: rest, a movement burst from 5 s to 8 s, then rest
/// until 30 s, with the motor shaking the sensor at 20 Hz while it runs.
pub fn figure3_scenario() -> Scenario {
    Scenario {
        duration_seconds: 30.0,
        seed: 3,
        noise_sigma_g: DEFAULT_NOISE_SIGMA_G,
        segments: vec![
            Segment::new(SegmentKind::Rest, 0.0, 5.0),
            Segment::new(
                SegmentKind::BurstMovement {
                    amplitude_g: 2.5,
                    center_frequency_hz: 1.0,
                },
                5.0,
                8.0,
            ),
            Segment::new(SegmentKind::Rest, 8.0, 30.0),
        ],
        motor_feedback: MotorFeedback {
            enabled: true,
            ..MotorFeedback::default()
        },
        button_presses: Vec::new(),
    }
}
