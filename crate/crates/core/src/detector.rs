//! Inactivity timer and vibration phase.
//!
//! The detector consumes one VM count per tick. A count strictly above the
//! threshold is movement and resets the timer; otherwise the timer advances
//! one tick. Once the timer reaches the inactivity time the motor runs for
//! the vibration time, or until the next movement, and the timer restarts.
//!
//! All durations are held as whole ticks so that event times are exact
//! multiples of the tick period.

use arrayvec::ArrayVec;

use crate::error::{ensure_finite, Error, Result};

pub const DEFAULT_COUNT_THRESHOLD: f64 = 125.0;
pub const DEFAULT_INACTIVITY_SECONDS: f64 = 10.0;
pub const DEFAULT_VIBRATION_SECONDS: f64 = 5.0;
pub const DEFAULT_TICK_SECONDS: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectorConfig {
    pub count_threshold: f64,
    pub inactivity_seconds: f64,
    pub vibration_seconds: f64,
    pub tick_seconds: f64,
}

impl Default for DetectorConfig {
    fn default() -> Self {
        Self {
            count_threshold: DEFAULT_COUNT_THRESHOLD,
            inactivity_seconds: DEFAULT_INACTIVITY_SECONDS,
            vibration_seconds: DEFAULT_VIBRATION_SECONDS,
            tick_seconds: DEFAULT_TICK_SECONDS,
        }
    }
}

impl DetectorConfig {
    pub fn validate(&self) -> Result<()> {
        for (what, v) in [
            ("count_threshold", self.count_threshold),
            ("inactivity_seconds", self.inactivity_seconds),
            ("vibration_seconds", self.vibration_seconds),
            ("tick_seconds", self.tick_seconds),
        ] {
            ensure_finite(what, v)?;
            if v <= 0.0 {
                return Err(Error::config(
                    "detector config",
                    format!("{what} must be strictly positive, got {v}"),
                ));
            }
        }
        Ok(())
    }

    /// Inactivity time in whole ticks (rounded up).
    pub fn inactivity_ticks(&self) -> u64 {
        seconds_to_ticks(self.inactivity_seconds, self.tick_seconds)
    }

    pub fn vibration_ticks(&self) -> u64 {
        seconds_to_ticks(self.vibration_seconds, self.tick_seconds)
    }
}

pub(crate) fn seconds_to_ticks(seconds: f64, tick: f64) -> u64 {
    ((seconds / tick) - 1e-6).ceil().max(1.0) as u64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Phase {
    Monitoring,
    Vibrating,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EventKind {
    TimerReset,
    VibrationStart,
    VibrationEnd,
}

impl EventKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EventKind::TimerReset => "reset",
            EventKind::VibrationStart => "vib_start",
            EventKind::VibrationEnd => "vib_end",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "reset" => Some(EventKind::TimerReset),
            "vib_start" => Some(EventKind::VibrationStart),
            "vib_end" => Some(EventKind::VibrationEnd),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectorEvent {
    pub t: f64,
    pub kind: EventKind,
}

/// At most two events fire on one tick (end + reset).
pub type Events = ArrayVec<EventKind, 2>;

#[derive(Debug, Clone, PartialEq)]
pub struct DetectorOutput {
    pub motor_on: bool,
    pub events: ArrayVec<DetectorEvent, 2>,
}

/// Timer and phase. A fresh state has not seen its first tick; that tick
/// arms the timer at zero (the moment the watch starts).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct DetectorState {
    started: bool,
    vibrating: bool,
    timer_ticks: u64,
    vibration_ticks: u64,
}

impl DetectorState {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn phase(&self) -> Phase {
        if self.vibrating {
            Phase::Vibrating
        } else {
            Phase::Monitoring
        }
    }

    pub fn timer_ticks(&self) -> u64 {
        self.timer_ticks
    }

    /// Ticks spent vibrating; zero while monitoring.
    pub fn vibration_ticks(&self) -> u64 {
        self.vibration_ticks
    }

    /// A monitoring state with the given elapsed inactivity.
    pub fn monitoring_with_timer(timer_ticks: u64) -> Self {
        Self {
            started: true,
            vibrating: false,
            timer_ticks,
            vibration_ticks: 0,
        }
    }

    /// Restarts the timer in the monitoring phase (used by option changes).
    /// Like power-on, the next tick arms the timer instead of advancing it.
    pub fn reset_timer(&mut self) {
        *self = Self::new();
    }

    /// One tick of the state machine. Negative or non-finite `vm` is rejected.
    pub fn tick(&self, cfg: &DetectorConfig, vm: f64) -> Result<(DetectorState, Events)> {
        ensure_finite("vm count", vm)?;
        if vm < 0.0 {
            return Err(Error::Negative {
                what: "vm count",
                value: vm,
            });
        }
        let moved = vm > cfg.count_threshold;
        let mut next = *self;
        let mut events = Events::new();

        if !self.started {
            next.started = true;
            if moved {
                events.push(EventKind::TimerReset);
            }
            return Ok((next, events));
        }

        if moved {
            if self.vibrating {
                events.push(EventKind::VibrationEnd);
            }
            events.push(EventKind::TimerReset);
            next = Self::monitoring_with_timer(0);
        } else if self.vibrating {
            next.vibration_ticks += 1;
            if next.vibration_ticks >= cfg.vibration_ticks() {
                events.push(EventKind::VibrationEnd);
                events.push(EventKind::TimerReset);
                next = Self::monitoring_with_timer(0);
            }
        } else {
            next.timer_ticks += 1;
            if next.timer_ticks >= cfg.inactivity_ticks() {
                next.timer_ticks = cfg.inactivity_ticks();
                next.vibrating = true;
                next.vibration_ticks = 0;
                events.push(EventKind::VibrationStart);
            }
        }
        Ok((next, events))
    }
}

/// Detector bound to its configuration, stamping events with caller time.
#[derive(Debug, Clone, PartialEq)]
pub struct Detector {
    cfg: DetectorConfig,
    state: DetectorState,
}

impl Detector {
    pub fn new(cfg: DetectorConfig) -> Result<Self> {
        cfg.validate()?;
        Ok(Self {
            cfg,
            state: DetectorState::new(),
        })
    }

    pub fn config(&self) -> &DetectorConfig {
        &self.cfg
    }

    pub fn state(&self) -> &DetectorState {
        &self.state
    }

    pub fn timer_seconds(&self) -> f64 {
        self.state.timer_ticks as f64 * self.cfg.tick_seconds
    }

    pub fn motor_on(&self) -> bool {
        self.state.vibrating
    }

    /// Changes the inactivity time and restarts the timer; stops any vibration.
    pub(crate) fn set_inactivity(&mut self, seconds: f64) -> Result<()> {
        let cfg = DetectorConfig {
            inactivity_seconds: seconds,
            ..self.cfg
        };
        cfg.validate()?;
        self.cfg = cfg;
        self.state.reset_timer();
        Ok(())
    }

    pub(crate) fn stop(&mut self) {
        self.state.reset_timer();
    }

    pub fn tick(&mut self, t: f64, vm: f64) -> Result<DetectorOutput> {
        let (next, kinds) = self.state.tick(&self.cfg, vm)?;
        self.state = next;
        Ok(DetectorOutput {
            motor_on: next.vibrating,
            events: kinds
                .into_iter()
                .map(|kind| DetectorEvent { t, kind })
                .collect(),
        })
    }
}

/// Runs a detector over a `(t, vm)` trace and collects every event.
pub fn detect_events(
    cfg: DetectorConfig,
    trace: impl IntoIterator<Item = (f64, f64)>,
) -> Result<Vec<DetectorEvent>> {
    let mut det = Detector::new(cfg)?;
    let mut events = Vec::new();
    for (t, vm) in trace {
        events.extend(det.tick(t, vm)?.events);
    }
    Ok(events)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> DetectorConfig {
        DetectorConfig::default()
    }

    #[test]
    fn movement_resets_timer() {
        let s = DetectorState::monitoring_with_timer(300);
        let (next, ev) = s.tick(&cfg(), 126.0).unwrap();
        assert_eq!(next.timer_ticks(), 0);
        assert_eq!(ev.as_slice(), &[EventKind::TimerReset]);
    }

    #[test]
    fn threshold_is_strict() {
        let s = DetectorState::monitoring_with_timer(300);
        let (next, ev) = s.tick(&cfg(), 125.0).unwrap();
        assert_eq!(next.timer_ticks(), 301);
        assert!(ev.is_empty());
    }

    #[test]
    fn invalid_vm_rejected() {
        let s = DetectorState::monitoring_with_timer(5);
        assert!(s.tick(&cfg(), -1.0).is_err());
        assert!(s.tick(&cfg(), f64::NAN).is_err());
        let mut d = Detector::new(cfg()).unwrap();
        d.tick(0.0, 0.0).unwrap();
        let before = d.clone();
        assert!(d.tick(0.01, f64::INFINITY).is_err());
        assert_eq!(d, before);
    }

    #[test]
    fn zero_stream_cycles_every_fifteen_seconds() {
        let events = detect_events(cfg(), (0..4001).map(|i| (i as f64 * 0.01, 0.0))).unwrap();
        let got: Vec<(u64, EventKind)> = events
            .iter()
            .map(|e| ((e.t * 100.0).round() as u64, e.kind))
            .collect();
        use EventKind::*;
        assert_eq!(
            got,
            vec![
                (1000, VibrationStart),
                (1500, VibrationEnd),
                (1500, TimerReset),
                (2500, VibrationStart),
                (3000, VibrationEnd),
                (3000, TimerReset),
                (4000, VibrationStart),
            ]
        );
    }

    #[test]
    fn movement_cancels_vibration() {
        let mut d = Detector::new(cfg()).unwrap();
        for i in 0..=1000 {
            d.tick(i as f64 * 0.01, 0.0).unwrap();
        }
        assert!(d.motor_on());
        let out = d.tick(10.01, 200.0).unwrap();
        assert!(!out.motor_on);
        let kinds: Vec<_> = out.events.iter().map(|e| e.kind).collect();
        assert_eq!(kinds, vec![EventKind::VibrationEnd, EventKind::TimerReset]);
        assert_eq!(d.timer_seconds(), 0.0);
    }

    #[test]
    fn timer_never_exceeds_inactivity() {
        let c = cfg();
        let mut s = DetectorState::new();
        for _ in 0..5000 {
            s = s.tick(&c, 0.0).unwrap().0;
            assert!(s.timer_ticks() <= c.inactivity_ticks());
            assert!(s.vibration_ticks() <= c.vibration_ticks());
        }
    }

    #[test]
    fn config_rejects_non_positive() {
        let mut c = cfg();
        c.vibration_seconds = 0.0;
        assert!(Detector::new(c).is_err());
        c = cfg();
        c.tick_seconds = f64::NAN;
        assert!(Detector::new(c).is_err());
    }

    #[test]
    fn tick_counts_round_up() {
        assert_eq!(cfg().inactivity_ticks(), 1000);
        assert_eq!(cfg().vibration_ticks(), 500);
        let c = DetectorConfig {
            inactivity_seconds: 0.015,
            ..cfg()
        };
        assert_eq!(c.inactivity_ticks(), 2);
    }
}
