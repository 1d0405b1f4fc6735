use crate::counts::{CountsConfig, CountsPipeline};
use crate::detector::{Detector, DetectorConfig};
use crate::device::{Device, DeviceConfig};
use crate::error::{Error, Result};
use crate::filterbank::{FilterSpec, DEFAULT_ORDER};

/// Every tunable of the pipeline, detector and device in one place.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Settings {
    pub filter: FilterSpec,
    pub filter_order: usize,
    pub counts: CountsConfig,
    pub detector: DetectorConfig,
    pub device: DeviceConfig,
}

impl Default for Settings {
    fn default() -> Self {
        Self {
            filter: FilterSpec::default(),
            filter_order: DEFAULT_ORDER,
            counts: CountsConfig::default(),
            detector: DetectorConfig::default(),
            device: DeviceConfig::default(),
        }
    }
}

impl Settings {
    /// Validates each part and the cross-part constraints: one sample rate
    /// for filter and counts, and a detector tick equal to the sample period.
    pub fn validate(&self) -> Result<()> {
        self.filter.validate()?;
        crate::filterbank::design_bandpass_cascade(&self.filter, self.filter_order)?;
        self.counts.validate()?;
        self.detector.validate()?;
        self.device.validate()?;
        if self.filter.sample_rate_hz != self.counts.sample_rate_hz {
            return Err(Error::config(
                "settings",
                "filter and counts sample rates differ",
            ));
        }
        let period = 1.0 / self.counts.sample_rate_hz;
        if (self.detector.tick_seconds - period).abs() > 1e-12 {
            return Err(Error::config(
                "settings",
                format!(
                    "tick_seconds {} must equal the sample period {period}",
                    self.detector.tick_seconds
                ),
            ));
        }
        Ok(())
    }

    /// Applies one sample rate to filter, counts and detector tick.
    pub fn with_sample_rate(mut self, sample_rate_hz: f64) -> Self {
        self.filter.sample_rate_hz = sample_rate_hz;
        self.counts.sample_rate_hz = sample_rate_hz;
        self.detector.tick_seconds = 1.0 / sample_rate_hz;
        self
    }

    pub fn pipeline(&self) -> Result<CountsPipeline> {
        CountsPipeline::new(&self.filter, self.filter_order, self.counts)
    }

    pub fn detector(&self) -> Result<Detector> {
        Detector::new(self.detector)
    }

    pub fn device(&self) -> Result<Device> {
        Device::new(self.device, self.detector)
    }
}
