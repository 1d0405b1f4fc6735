//! Behavioral model of the watch around the detector.
//!
//! Three buttons: `Select` cycles through three preprogrammed inactivity
//! times, `RedToggle` enables the red LED that flashes with the motor, and
//! `Power` turns the watch off for the rest of the run. The white LED is lit
//! while powered; the blue LED flashes once, twice or thrice after a
//! selection to show which option is active.

use crate::detector::{
    seconds_to_ticks, Detector, DetectorConfig, DetectorEvent, EventKind, Phase,
};
use crate::error::{ensure_finite, Error, Result};

pub const DEFAULT_INACTIVITY_OPTIONS: [f64; 3] = [10.0, 30.0, 60.0];
pub const DEFAULT_FLASH_PERIOD_SECONDS: f64 = 0.25;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeviceConfig {
    pub inactivity_options: [f64; 3],
    pub vibration_seconds: f64,
    pub red_led_enabled_default: bool,
    pub blue_flash_period_seconds: f64,
}

impl Default for DeviceConfig {
    fn default() -> Self {
        Self {
            inactivity_options: DEFAULT_INACTIVITY_OPTIONS,
            vibration_seconds: crate::detector::DEFAULT_VIBRATION_SECONDS,
            red_led_enabled_default: false,
            blue_flash_period_seconds: DEFAULT_FLASH_PERIOD_SECONDS,
        }
    }
}

impl DeviceConfig {
    pub fn validate(&self) -> Result<()> {
        for (i, v) in self.inactivity_options.iter().enumerate() {
            ensure_finite("inactivity option", *v)?;
            if *v <= 0.0 {
                return Err(Error::config(
                    "device config",
                    format!("inactivity option {} must be positive, got {v}", i + 1),
                ));
            }
        }
        for (what, v) in [
            ("vibration_seconds", self.vibration_seconds),
            ("blue_flash_period_seconds", self.blue_flash_period_seconds),
        ] {
            ensure_finite(what, v)?;
            if v <= 0.0 {
                return Err(Error::config(
                    "device config",
                    format!("{what} must be positive, got {v}"),
                ));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Button {
    Select,
    RedToggle,
    Power,
}

impl Button {
    pub fn as_str(self) -> &'static str {
        match self {
            Button::Select => "select",
            Button::RedToggle => "red",
            Button::Power => "power",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "select" => Some(Button::Select),
            "red" => Some(Button::RedToggle),
            "power" => Some(Button::Power),
            _ => None,
        }
    }
}

/// LED and motor outputs after a tick or a button press.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LedSnapshot {
    pub t: f64,
    pub motor: bool,
    pub white: bool,
    pub blue: bool,
    pub red: bool,
    /// Selected option, 0-based.
    pub option: usize,
    pub timer_seconds: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct BlueFlash {
    start: f64,
    count: u64,
}

/// What a button press did.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PressEffects {
    pub events: Vec<DetectorEvent>,
    /// Number of blue flashes scheduled, for `Select`.
    pub blue_flashes: Option<u8>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Device {
    cfg: DeviceConfig,
    powered: bool,
    selected: usize,
    red_enabled: bool,
    detector: Detector,
    blue: Option<BlueFlash>,
    last_t: Option<f64>,
    snapshot: LedSnapshot,
}

impl Device {
    /// A powered-on device on option 0. `count_threshold` and `tick_seconds`
    /// come from `detector`; inactivity and vibration times from `cfg`.
    pub fn new(cfg: DeviceConfig, detector: DetectorConfig) -> Result<Self> {
        cfg.validate()?;
        let det_cfg = DetectorConfig {
            inactivity_seconds: cfg.inactivity_options[0],
            vibration_seconds: cfg.vibration_seconds,
            ..detector
        };
        let detector = Detector::new(det_cfg)?;
        let mut dev = Self {
            cfg,
            powered: true,
            selected: 0,
            red_enabled: cfg.red_led_enabled_default,
            detector,
            blue: None,
            last_t: None,
            snapshot: LedSnapshot {
                t: 0.0,
                motor: false,
                white: true,
                blue: false,
                red: false,
                option: 0,
                timer_seconds: 0.0,
            },
        };
        dev.snapshot = dev.compute_snapshot(0.0);
        Ok(dev)
    }

    pub fn config(&self) -> &DeviceConfig {
        &self.cfg
    }

    pub fn is_powered(&self) -> bool {
        self.powered
    }

    pub fn selected_option(&self) -> usize {
        self.selected
    }

    pub fn red_led_enabled(&self) -> bool {
        self.red_enabled
    }

    pub fn detector(&self) -> &Detector {
        &self.detector
    }

    pub fn snapshot(&self) -> &LedSnapshot {
        &self.snapshot
    }

    pub fn press_button(&mut self, button: Button, t: f64) -> Result<PressEffects> {
        ensure_finite("button time", t)?;
        let mut effects = PressEffects::default();
        if !self.powered {
            return Ok(effects);
        }
        match button {
            Button::Select => {
                let next = (self.selected + 1) % 3;
                self.detector
                    .set_inactivity(self.cfg.inactivity_options[next])?;
                self.selected = next;
                let count = next as u8 + 1;
                self.blue = Some(BlueFlash {
                    start: t,
                    count: count as u64,
                });
                effects.blue_flashes = Some(count);
                effects.events.push(DetectorEvent {
                    t,
                    kind: EventKind::TimerReset,
                });
            }
            Button::RedToggle => self.red_enabled = !self.red_enabled,
            Button::Power => {
                self.powered = false;
                self.blue = None;
                self.detector.stop();
            }
        }
        self.snapshot = self.compute_snapshot(t);
        Ok(effects)
    }

    /// Forwards one VM count to the detector when powered and refreshes the
    /// LEDs. When off, nothing changes and the snapshot is all dark.
    pub fn device_tick(&mut self, vm: f64, t: f64) -> Result<(LedSnapshot, Vec<DetectorEvent>)> {
        ensure_finite("tick time", t)?;
        if !self.powered {
            return Ok((self.compute_snapshot(t), Vec::new()));
        }
        if let Some(prev) = self.last_t {
            if t <= prev {
                return Err(Error::OutOfOrder {
                    t,
                    previous: prev,
                    rate_hz: 1.0 / self.detector.config().tick_seconds,
                });
            }
        }
        let out = self.detector.tick(t, vm)?;
        self.last_t = Some(t);
        self.snapshot = self.compute_snapshot(t);
        Ok((self.snapshot, out.events.into_iter().collect()))
    }

    fn compute_snapshot(&self, t: f64) -> LedSnapshot {
        if !self.powered {
            return LedSnapshot {
                t,
                motor: false,
                white: false,
                blue: false,
                red: false,
                option: self.selected,
                timer_seconds: self.detector.timer_seconds(),
            };
        }
        let tick = self.detector.config().tick_seconds;
        let period = seconds_to_ticks(self.cfg.blue_flash_period_seconds, tick);
        let lit = period.div_ceil(2);

        let motor = self.detector.state().phase() == Phase::Vibrating;
        let red =
            motor && self.red_enabled && self.detector.state().vibration_ticks() % period < lit;

        let blue = self.blue.is_some_and(|b| {
            let elapsed = t - b.start;
            if elapsed < -1e-9 {
                return false;
            }
            let ticks = (elapsed / tick + 1e-6).floor().max(0.0) as u64;
            ticks < b.count * period && ticks % period < lit
        });

        LedSnapshot {
            t,
            motor,
            white: true,
            blue,
            red,
            option: self.selected,
            timer_seconds: self.detector.timer_seconds(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn device() -> Device {
        Device::new(DeviceConfig::default(), DetectorConfig::default()).unwrap()
    }

    #[test]
    fn select_cycles_and_flashes() {
        let mut d = device();
        let flashes: Vec<_> = (0..4)
            .map(|i| {
                d.press_button(Button::Select, i as f64)
                    .unwrap()
                    .blue_flashes
            })
            .collect();
        assert_eq!(flashes, vec![Some(2), Some(3), Some(1), Some(2)]);
        assert_eq!(d.selected_option(), 1);
        assert_eq!(d.detector().config().inactivity_seconds, 30.0);
    }

    #[test]
    fn selecting_keeps_threshold_and_vibration() {
        let mut d = device();
        let before = *d.detector().config();
        d.press_button(Button::Select, 0.0).unwrap();
        let after = *d.detector().config();
        assert_eq!(before.count_threshold, after.count_threshold);
        assert_eq!(before.vibration_seconds, after.vibration_seconds);
    }

    #[test]
    fn power_off_is_absorbing() {
        let mut d = device();
        d.device_tick(0.0, 0.0).unwrap();
        d.press_button(Button::Power, 0.005).unwrap();
        let frozen = d.clone();
        let effects = d.press_button(Button::Power, 0.006).unwrap();
        assert_eq!(effects, PressEffects::default());
        d.press_button(Button::Select, 0.007).unwrap();
        let (snap, events) = d.device_tick(500.0, 0.01).unwrap();
        assert!(events.is_empty());
        assert!(!snap.white && !snap.blue && !snap.red && !snap.motor);
        assert_eq!(d.selected_option(), frozen.selected_option());
        assert_eq!(d.detector(), frozen.detector());
    }

    #[test]
    fn red_toggle() {
        let mut d = device();
        assert!(!d.red_led_enabled());
        d.press_button(Button::RedToggle, 0.0).unwrap();
        assert!(d.red_led_enabled());
        d.press_button(Button::RedToggle, 0.0).unwrap();
        assert!(!d.red_led_enabled());
    }

    #[test]
    fn rejects_time_going_backwards() {
        let mut d = device();
        d.device_tick(0.0, 1.0).unwrap();
        assert!(d.device_tick(0.0, 1.0).is_err());
        assert!(d.device_tick(0.0, 0.5).is_err());
    }

    #[test]
    fn invalid_config() {
        let cfg = DeviceConfig {
            inactivity_options: [10.0, 0.0, 60.0],
            ..DeviceConfig::default()
        };
        assert!(Device::new(cfg, DetectorConfig::default()).is_err());
    }
}
