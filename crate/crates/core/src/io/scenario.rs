//! Scenario files (TOML).
//!
//! ```toml
//! duration_seconds = 30.0
//! seed = 3
//! noise_sigma_g = 0.003          # optional
//!
//! [motor_feedback]               # optional
//! enabled = true
//! amplitude_g = 0.5
//! frequency_hz = 20.0
//!
//! [[segments]]                   # tile [0, duration] in order
//! kind = "rest"                  # rest | sine | burst | ambient
//! start = 0.0
//! end = 5.0
//!
//! [[segments]]
//! kind = "sine"
//! start = 5.0
//! end = 30.0
//! axis = "x"
//! amplitude_g = 0.5
//! frequency_hz = 1.0
//!
//! [[buttons]]
//! t = 2.0
//! button = "select"              # select | red | power
//! ```
//!
//! `burst` takes `amplitude_g` and `center_frequency_hz`; `ambient` takes
//! `amplitude_g` and `frequency_hz`. Seeds must fit in 63 bits.

use serde::{Deserialize, Serialize};
use toml::Spanned;

use super::{line_of, toml_error};
use crate::device::Button;
use crate::error::{Error, Result};
use crate::sim::{Axis, MotorFeedback, Scenario, Segment, SegmentKind, DEFAULT_NOISE_SIGMA_G};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioIn {
    duration_seconds: f64,
    seed: u64,
    noise_sigma_g: Option<f64>,
    motor_feedback: Option<MotorIn>,
    #[serde(default)]
    segments: Vec<Spanned<SegmentRecord>>,
    #[serde(default)]
    buttons: Vec<Spanned<ButtonRecord>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct MotorIn {
    enabled: Option<bool>,
    amplitude_g: Option<f64>,
    frequency_hz: Option<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SegmentRecord {
    kind: String,
    start: f64,
    end: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    axis: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    amplitude_g: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    frequency_hz: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    center_frequency_hz: Option<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ButtonRecord {
    t: f64,
    button: String,
}

#[derive(Debug, Serialize)]
struct ScenarioOut {
    duration_seconds: f64,
    seed: u64,
    noise_sigma_g: f64,
    motor_feedback: MotorOut,
    segments: Vec<SegmentRecord>,
    buttons: Vec<ButtonRecord>,
}

#[derive(Debug, Serialize)]
struct MotorOut {
    enabled: bool,
    amplitude_g: f64,
    frequency_hz: f64,
}

impl SegmentRecord {
    fn into_segment(self) -> std::result::Result<Segment, String> {
        let need = |v: Option<f64>, name: &str| {
            v.ok_or_else(|| format!("segment kind `{}` requires `{name}`", self.kind))
        };
        let forbid = |present: bool, name: &str| {
            if present {
                Err(format!(
                    "segment kind `{}` does not take `{name}`",
                    self.kind
                ))
            } else {
                Ok(())
            }
        };
        let kind = match self.kind.as_str() {
            "rest" => {
                forbid(self.axis.is_some(), "axis")?;
                forbid(self.amplitude_g.is_some(), "amplitude_g")?;
                forbid(self.frequency_hz.is_some(), "frequency_hz")?;
                forbid(self.center_frequency_hz.is_some(), "center_frequency_hz")?;
                SegmentKind::Rest
            }
            "sine" => {
                forbid(self.center_frequency_hz.is_some(), "center_frequency_hz")?;
                let axis = self
                    .axis
                    .as_deref()
                    .ok_or_else(|| "segment kind `sine` requires `axis`".to_string())?;
                SegmentKind::SineMovement {
                    axis: Axis::parse(axis)
                        .ok_or_else(|| format!("unknown axis `{axis}`, expected x, y or z"))?,
                    amplitude_g: need(self.amplitude_g, "amplitude_g")?,
                    frequency_hz: need(self.frequency_hz, "frequency_hz")?,
                }
            }
            "burst" => {
                forbid(self.axis.is_some(), "axis")?;
                forbid(self.frequency_hz.is_some(), "frequency_hz")?;
                SegmentKind::BurstMovement {
                    amplitude_g: need(self.amplitude_g, "amplitude_g")?,
                    center_frequency_hz: need(self.center_frequency_hz, "center_frequency_hz")?,
                }
            }
            "ambient" => {
                forbid(self.axis.is_some(), "axis")?;
                forbid(self.center_frequency_hz.is_some(), "center_frequency_hz")?;
                SegmentKind::AmbientVibration {
                    amplitude_g: need(self.amplitude_g, "amplitude_g")?,
                    frequency_hz: need(self.frequency_hz, "frequency_hz")?,
                }
            }
            other => {
                return Err(format!(
                    "unknown segment kind `{other}`, expected rest, sine, burst or ambient"
                ))
            }
        };
        Ok(Segment::new(kind, self.start, self.end))
    }

    fn from_segment(seg: &Segment) -> Self {
        let mut rec = SegmentRecord {
            kind: String::new(),
            start: seg.start,
            end: seg.end,
            axis: None,
            amplitude_g: None,
            frequency_hz: None,
            center_frequency_hz: None,
        };
        match seg.kind {
            SegmentKind::Rest => rec.kind = "rest".into(),
            SegmentKind::SineMovement {
                axis,
                amplitude_g,
                frequency_hz,
            } => {
                rec.kind = "sine".into();
                rec.axis = Some(axis.as_str().into());
                rec.amplitude_g = Some(amplitude_g);
                rec.frequency_hz = Some(frequency_hz);
            }
            SegmentKind::BurstMovement {
                amplitude_g,
                center_frequency_hz,
            } => {
                rec.kind = "burst".into();
                rec.amplitude_g = Some(amplitude_g);
                rec.center_frequency_hz = Some(center_frequency_hz);
            }
            SegmentKind::AmbientVibration {
                amplitude_g,
                frequency_hz,
            } => {
                rec.kind = "ambient".into();
                rec.amplitude_g = Some(amplitude_g);
                rec.frequency_hz = Some(frequency_hz);
            }
        }
        rec
    }
}

/// Parses and validates a scenario. Frequencies are checked against the
/// sample rate later, when the scenario is run.
pub fn parse_scenario(text: &str) -> Result<Scenario> {
    let raw: ScenarioIn = toml::from_str(text).map_err(|e| toml_error(text, e))?;
    let at =
        |span: std::ops::Range<usize>, msg: String| Error::parse(line_of(text, span.start), msg);

    let mut segments = Vec::with_capacity(raw.segments.len());
    for rec in raw.segments {
        let span = rec.span();
        segments.push(rec.into_inner().into_segment().map_err(|m| at(span, m))?);
    }
    let mut button_presses = Vec::with_capacity(raw.buttons.len());
    for rec in raw.buttons {
        let span = rec.span();
        let rec = rec.into_inner();
        let button = Button::parse(&rec.button).ok_or_else(|| {
            at(
                span,
                format!(
                    "unknown button `{}`, expected select, red or power",
                    rec.button
                ),
            )
        })?;
        button_presses.push((rec.t, button));
    }
    let defaults = MotorFeedback::default();
    let motor_feedback = raw.motor_feedback.map_or(defaults, |m| MotorFeedback {
        enabled: m.enabled.unwrap_or(defaults.enabled),
        amplitude_g: m.amplitude_g.unwrap_or(defaults.amplitude_g),
        frequency_hz: m.frequency_hz.unwrap_or(defaults.frequency_hz),
    });
    let scenario = Scenario {
        duration_seconds: raw.duration_seconds,
        seed: raw.seed,
        noise_sigma_g: raw.noise_sigma_g.unwrap_or(DEFAULT_NOISE_SIGMA_G),
        segments,
        motor_feedback,
        button_presses,
    };
    scenario.validate(f64::INFINITY)?;
    Ok(scenario)
}

/// Writes the scenario with every field explicit. Fails for seeds above
/// `i64::MAX`, which TOML integers cannot hold.
pub fn write_scenario(scenario: &Scenario) -> Result<String> {
    let out = ScenarioOut {
        duration_seconds: scenario.duration_seconds,
        seed: scenario.seed,
        noise_sigma_g: scenario.noise_sigma_g,
        motor_feedback: MotorOut {
            enabled: scenario.motor_feedback.enabled,
            amplitude_g: scenario.motor_feedback.amplitude_g,
            frequency_hz: scenario.motor_feedback.frequency_hz,
        },
        segments: scenario
            .segments
            .iter()
            .map(SegmentRecord::from_segment)
            .collect(),
        buttons: scenario
            .button_presses
            .iter()
            .map(|(t, b)| ButtonRecord {
                t: *t,
                button: b.as_str().into(),
            })
            .collect(),
    };
    toml::to_string(&out).map_err(|e| Error::config("scenario", e.to_string()))
}
