//! Reading and writing every file format.
//!
//! Time series are plain CSV: UTF-8, LF line endings, a fixed header line,
//! comma separators and decimal points, no quoting. Parsers are strict and
//! report the first problem with its 1-based line number; nothing is
//! returned on error. Scenario and configuration files are TOML.

mod config;
mod scenario;
mod series;

pub use config::{parse_config, write_config};
pub use scenario::{parse_scenario, write_scenario};
pub use series::{
    fmt_sig, parse_counts, parse_device_log, parse_events, parse_samples, parse_samples_at,
    parse_snapshots, parse_trace, write_counts, write_device_log, write_events, write_samples,
    write_snapshots, write_trace, DeviceInput, COUNTS_HEADER, DEVICE_LOG_HEADER, EVENTS_HEADER,
    SAMPLES_HEADER, SNAPSHOTS_HEADER, TRACE_HEADER,
};

use crate::error::Error;

/// Maps a TOML error to a line-addressed parse error.
pub(crate) fn toml_error(text: &str, err: toml::de::Error) -> Error {
    let line = err.span().map_or(1, |span| line_of(text, span.start));
    Error::parse(line, err.message().trim().to_string())
}

pub(crate) fn line_of(text: &str, offset: usize) -> usize {
    let end = offset.min(text.len());
    text.as_bytes()[..end]
        .iter()
        .filter(|&&b| b == b'\n')
        .count()
        + 1
}
