//! Configuration files (TOML). Every section and key is optional; missing
//! values take the defaults. Unknown keys are rejected.
//!
//! ```toml
//! [filter]
//! sample_rate_hz = 100.0      # also sets the counts rate and detector tick
//! low_cutoff_hz = 0.305
//! high_cutoff_hz = 1.615
//! order = 2
//!
//! [counts]
//! deadband_g = 0.068
//! saturation_g = 2.13
//! scale_g_per_sec_per_count = 0.01664
//! epoch_seconds = 1.0
//!
//! [detector]
//! count_threshold = 125.0
//! inactivity_seconds = 10.0   # also the device's first option unless given below
//! vibration_seconds = 5.0
//!
//! [device]
//! inactivity_options = [10.0, 30.0, 60.0]
//! red_led_enabled = false
//! blue_flash_period_seconds = 0.25
//! ```

use serde::{Deserialize, Serialize};

use super::toml_error;
use crate::error::{Error, Result};
use crate::settings::Settings;

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    #[serde(default)]
    filter: FilterSection,
    #[serde(default)]
    counts: CountsSection,
    #[serde(default)]
    detector: DetectorSection,
    #[serde(default)]
    device: DeviceSection,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FilterSection {
    sample_rate_hz: Option<f64>,
    low_cutoff_hz: Option<f64>,
    high_cutoff_hz: Option<f64>,
    order: Option<usize>,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CountsSection {
    deadband_g: Option<f64>,
    saturation_g: Option<f64>,
    scale_g_per_sec_per_count: Option<f64>,
    epoch_seconds: Option<f64>,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DetectorSection {
    count_threshold: Option<f64>,
    inactivity_seconds: Option<f64>,
    vibration_seconds: Option<f64>,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DeviceSection {
    inactivity_options: Option<Vec<f64>>,
    red_led_enabled: Option<bool>,
    blue_flash_period_seconds: Option<f64>,
}

/// Parses a configuration file into validated [`Settings`].
pub fn parse_config(text: &str) -> Result<Settings> {
    let file: ConfigFile = toml::from_str(text).map_err(|e| toml_error(text, e))?;
    let mut s = Settings::default();

    let f = file.filter;
    if let Some(rate) = f.sample_rate_hz {
        s = s.with_sample_rate(rate);
    }
    s.filter.low_cutoff_hz = f.low_cutoff_hz.unwrap_or(s.filter.low_cutoff_hz);
    s.filter.high_cutoff_hz = f.high_cutoff_hz.unwrap_or(s.filter.high_cutoff_hz);
    s.filter_order = f.order.unwrap_or(s.filter_order);

    let c = file.counts;
    s.counts.deadband_g = c.deadband_g.unwrap_or(s.counts.deadband_g);
    s.counts.saturation_g = c.saturation_g.unwrap_or(s.counts.saturation_g);
    s.counts.scale_g_per_sec_per_count = c
        .scale_g_per_sec_per_count
        .unwrap_or(s.counts.scale_g_per_sec_per_count);
    s.counts.epoch_seconds = c.epoch_seconds.unwrap_or(s.counts.epoch_seconds);

    let d = file.detector;
    s.detector.count_threshold = d.count_threshold.unwrap_or(s.detector.count_threshold);
    s.detector.inactivity_seconds = d
        .inactivity_seconds
        .unwrap_or(s.detector.inactivity_seconds);
    s.detector.vibration_seconds = d.vibration_seconds.unwrap_or(s.detector.vibration_seconds);
    s.device.vibration_seconds = s.detector.vibration_seconds;

    let v = file.device;
    match v.inactivity_options {
        Some(opts) => {
            s.device.inactivity_options = opts.as_slice().try_into().map_err(|_| {
                Error::config(
                    "device config",
                    format!(
                        "inactivity_options needs exactly three values, got {}",
                        opts.len()
                    ),
                )
            })?;
        }
        None => s.device.inactivity_options[0] = s.detector.inactivity_seconds,
    }
    s.device.red_led_enabled_default = v
        .red_led_enabled
        .unwrap_or(s.device.red_led_enabled_default);
    s.device.blue_flash_period_seconds = v
        .blue_flash_period_seconds
        .unwrap_or(s.device.blue_flash_period_seconds);

    s.validate()?;
    Ok(s)
}

/// Writes every setting explicitly. `device.vibration_seconds` is taken from
/// the detector section, as on parse.
pub fn write_config(settings: &Settings) -> Result<String> {
    let s = settings;
    let file = ConfigFile {
        filter: FilterSection {
            sample_rate_hz: Some(s.filter.sample_rate_hz),
            low_cutoff_hz: Some(s.filter.low_cutoff_hz),
            high_cutoff_hz: Some(s.filter.high_cutoff_hz),
            order: Some(s.filter_order),
        },
        counts: CountsSection {
            deadband_g: Some(s.counts.deadband_g),
            saturation_g: Some(s.counts.saturation_g),
            scale_g_per_sec_per_count: Some(s.counts.scale_g_per_sec_per_count),
            epoch_seconds: Some(s.counts.epoch_seconds),
        },
        detector: DetectorSection {
            count_threshold: Some(s.detector.count_threshold),
            inactivity_seconds: Some(s.detector.inactivity_seconds),
            vibration_seconds: Some(s.detector.vibration_seconds),
        },
        device: DeviceSection {
            inactivity_options: Some(s.device.inactivity_options.to_vec()),
            red_led_enabled: Some(s.device.red_led_enabled_default),
            blue_flash_period_seconds: Some(s.device.blue_flash_period_seconds),
        },
    };
    toml::to_string(&file).map_err(|e| Error::config("settings", e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_config_is_defaults() {
        let s = parse_config("").unwrap();
        assert_eq!(s, Settings::default());
        assert_eq!(s.filter.low_cutoff_hz, 0.305);
        assert_eq!(s.filter.high_cutoff_hz, 1.615);
        assert_eq!(s.filter.sample_rate_hz, 100.0);
        assert_eq!(s.counts.deadband_g, 0.068);
        assert_eq!(s.counts.saturation_g, 2.13);
        assert_eq!(s.counts.scale_g_per_sec_per_count, 0.01664);
        assert_eq!(s.counts.epoch_seconds, 1.0);
        assert_eq!(s.detector.count_threshold, 125.0);
    }

    #[test]
    fn inactivity_override_reaches_detector_and_device() {
        let s = parse_config("[detector]\ninactivity_seconds = 20.0\n").unwrap();
        assert_eq!(s.detector.inactivity_seconds, 20.0);
        assert_eq!(s.detector().unwrap().config().inactivity_seconds, 20.0);
        assert_eq!(
            s.device().unwrap().detector().config().inactivity_seconds,
            20.0
        );
    }

    #[test]
    fn deadband_above_saturation_rejected() {
        let err = parse_config("[counts]\ndeadband_g = 3.0\n").unwrap_err();
        assert!(
            err.to_string().contains("deadband_g < saturation_g"),
            "{err}"
        );
    }

    #[test]
    fn unknown_key_rejected_with_line() {
        match parse_config("[counts]\ndeadband_g = 0.05\nthreshold = 1\n").unwrap_err() {
            Error::Parse { line, message } => {
                assert_eq!(line, 3);
                assert!(message.contains("unknown field"), "{message}");
            }
            other => panic!("{other:?}"),
        }
        assert!(parse_config("[gyro]\nx = 1\n").is_err());
    }

    #[test]
    fn sample_rate_propagates() {
        let s = parse_config("[filter]\nsample_rate_hz = 50.0\n").unwrap();
        assert_eq!(s.counts.sample_rate_hz, 50.0);
        assert_eq!(s.detector.tick_seconds, 0.02);
        assert_eq!(s.counts.epoch_len(), 50);
    }

    #[test]
    fn options_need_three_values() {
        assert!(parse_config("[device]\ninactivity_options = [1.0, 2.0]\n").is_err());
    }

    #[test]
    fn round_trip() {
        let text = write_config(&Settings::default()).unwrap();
        let parsed = parse_config(&text).unwrap();
        assert_eq!(parsed, Settings::default());
        assert_eq!(write_config(&parsed).unwrap(), text);
    }
}
