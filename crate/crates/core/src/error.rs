use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A configuration value violates one of its invariants.
    #[error("invalid {what}: {reason}")]
    InvalidConfig { what: &'static str, reason: String },

    #[error("non-finite {what}: {value}")]
    NonFinite { what: &'static str, value: f64 },

    #[error("negative {what}: {value}")]
    Negative { what: &'static str, value: f64 },

    /// A sample or tick arrived out of time order or off the sample grid.
    #[error("sample at t={t} does not follow t={previous} at the {rate_hz} Hz cadence")]
    OutOfOrder { t: f64, previous: f64, rate_hz: f64 },

    #[error("time {t} is outside the scenario or off the sample grid")]
    OffGrid { t: f64 },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

impl Error {
    pub(crate) fn config(what: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidConfig {
            what,
            reason: reason.into(),
        }
    }

    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}

pub(crate) fn ensure_finite(what: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFinite { what, value })
    }
}
