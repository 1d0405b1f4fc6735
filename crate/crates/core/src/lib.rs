//! Streaming activity-count pipeline and inactivity-alert state machine for a
//! wrist-worn haptic reminder device.
//!
//! Raw 3-axis acceleration (in g, 100 Hz) flows through
//!
//! ```text
//! band-pass filter -> thresholds -> count conversion -> 1 s sliding epoch -> vector magnitude
//! ```
//!
//! one axis at a time, producing one vector-magnitude (VM) count per sample.
//! The VM count drives an inactivity timer ([`detector`]), which is wrapped by
//! a behavioral model of the watch with its buttons and LEDs ([`device`]).
//! [`sim`] generates synthetic accelerometer streams and closes the loop with
//! the vibration motor; [`io`] reads and writes every file format.

pub mod counts;
pub mod detector;
pub mod device;
pub mod error;
pub mod filterbank;
pub mod io;
pub mod settings;
pub mod sim;

pub use counts::{CountsConfig, CountsPipeline, RawSample, VmCount};
pub use detector::{Detector, DetectorConfig, DetectorEvent, DetectorOutput, EventKind, Phase};
pub use device::{Button, Device, DeviceConfig, LedSnapshot};
pub use error::{Error, Result};
pub use filterbank::{BandPass, BiquadCoefficients, BiquadState, FilterSpec};
pub use settings::Settings;
pub use sim::{Scenario, Segment, SegmentKind, SimulationTrace};
