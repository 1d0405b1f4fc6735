//! Activity counts from filtered acceleration.
//!
//! Per axis: rectify, dead-band, saturate, convert to a count mass per sample,
//! then sum over a sliding one-epoch window. The three epoch sums combine into
//! the vector-magnitude count, emitted once per input sample.

use crate::error::{ensure_finite, Error, Result};
use crate::filterbank::{BandPass, FilterSpec};

pub const DEFAULT_DEADBAND_G: f64 = 0.068;
pub const DEFAULT_SATURATION_G: f64 = 2.13;
/// g per (count / s): a sustained 0.01664 g accrues one count per second.
pub const DEFAULT_SCALE: f64 = 0.01664;
pub const DEFAULT_EPOCH_SECONDS: f64 = 1.0;

/// Slack allowed on the sample spacing, in seconds.
pub const TIME_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RawSample {
    pub t: f64,
    pub ax: f64,
    pub ay: f64,
    pub az: f64,
}

impl RawSample {
    pub fn new(t: f64, ax: f64, ay: f64, az: f64) -> Self {
        Self { t, ax, ay, az }
    }

    pub fn axes(&self) -> [f64; 3] {
        [self.ax, self.ay, self.az]
    }

    pub(crate) fn check_finite(&self) -> Result<()> {
        ensure_finite("timestamp", self.t)?;
        ensure_finite("x acceleration", self.ax)?;
        ensure_finite("y acceleration", self.ay)?;
        ensure_finite("z acceleration", self.az)?;
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CountsConfig {
    pub deadband_g: f64,
    pub saturation_g: f64,
    pub scale_g_per_sec_per_count: f64,
    pub epoch_seconds: f64,
    pub sample_rate_hz: f64,
}

impl Default for CountsConfig {
    fn default() -> Self {
        Self {
            deadband_g: DEFAULT_DEADBAND_G,
            saturation_g: DEFAULT_SATURATION_G,
            scale_g_per_sec_per_count: DEFAULT_SCALE,
            epoch_seconds: DEFAULT_EPOCH_SECONDS,
            sample_rate_hz: crate::filterbank::DEFAULT_SAMPLE_RATE_HZ,
        }
    }
}

impl CountsConfig {
    pub fn validate(&self) -> Result<()> {
        for (what, v) in [
            ("dead-band", self.deadband_g),
            ("saturation", self.saturation_g),
            ("count scale", self.scale_g_per_sec_per_count),
            ("epoch length", self.epoch_seconds),
            ("sample rate", self.sample_rate_hz),
        ] {
            ensure_finite(what, v)?;
        }
        if !(self.deadband_g > 0.0 && self.deadband_g < self.saturation_g) {
            return Err(Error::config(
                "counts config",
                format!(
                    "require 0 < deadband_g < saturation_g, got deadband_g = {} and saturation_g = {}",
                    self.deadband_g, self.saturation_g
                ),
            ));
        }
        if self.scale_g_per_sec_per_count <= 0.0 {
            return Err(Error::config(
                "counts config",
                "scale_g_per_sec_per_count must be positive",
            ));
        }
        if self.epoch_seconds <= 0.0 || self.sample_rate_hz <= 0.0 {
            return Err(Error::config(
                "counts config",
                "epoch_seconds and sample_rate_hz must be positive",
            ));
        }
        let len = self.epoch_seconds * self.sample_rate_hz;
        if (len - len.round()).abs() > 1e-9 * len.max(1.0) || len.round() < 1.0 {
            return Err(Error::config(
                "counts config",
                format!("epoch_seconds * sample_rate_hz must be a positive integer, got {len}"),
            ));
        }
        Ok(())
    }

    /// Number of samples per epoch.
    pub fn epoch_len(&self) -> usize {
        (self.epoch_seconds * self.sample_rate_hz).round() as usize
    }

    /// Largest possible per-axis epoch sum.
    pub fn max_epoch_sum(&self) -> f64 {
        self.saturation_g / self.scale_g_per_sec_per_count * self.epoch_seconds
    }
}

/// Rectifies and clips a filtered acceleration. The dead-band test is strict
/// (`|y| < deadband` gives 0) and so is saturation (`|y| > saturation` clips).
pub fn rectify_threshold(y: f64, cfg: &CountsConfig) -> Result<f64> {
    ensure_finite("filtered acceleration", y)?;
    Ok(threshold_unchecked(y, cfg))
}

#[inline]
fn threshold_unchecked(y: f64, cfg: &CountsConfig) -> f64 {
    let a = y.abs();
    if a < cfg.deadband_g {
        0.0
    } else if a > cfg.saturation_g {
        cfg.saturation_g
    } else {
        a
    }
}

/// Count mass contributed by one thresholded sample.
#[inline]
pub fn contribution(y_thresholded: f64, cfg: &CountsConfig) -> f64 {
    y_thresholded / cfg.scale_g_per_sec_per_count / cfg.sample_rate_hz
}

#[inline]
pub fn vm(sx: f64, sy: f64, sz: f64) -> f64 {
    (sx * sx + sy * sy + sz * sz).sqrt()
}

/// Sliding sum over the last `capacity` contributions of one axis.
///
/// The running sum is recomputed exactly every time the write position wraps,
/// and is exactly zero whenever the window holds only zeros.
#[derive(Debug, Clone, PartialEq)]
pub struct AxisWindow {
    buf: Vec<f64>,
    head: usize,
    sum: f64,
    nonzero: usize,
}

impl AxisWindow {
    /// Zero-filled window. Panics if `capacity` is 0.
    pub fn new(capacity: usize) -> Self {
        assert!(capacity > 0, "window capacity must be positive");
        Self {
            buf: vec![0.0; capacity],
            head: 0,
            sum: 0.0,
            nonzero: 0,
        }
    }

    pub fn capacity(&self) -> usize {
        self.buf.len()
    }

    pub fn sum(&self) -> f64 {
        self.sum
    }

    /// Evicts the oldest contribution, inserts `c` (must be >= 0) and returns
    /// the new epoch sum.
    pub fn push(&mut self, c: f64) -> f64 {
        debug_assert!(c >= 0.0 && c.is_finite());
        let old = std::mem::replace(&mut self.buf[self.head], c);
        self.nonzero = self.nonzero + usize::from(c != 0.0) - usize::from(old != 0.0);
        self.head += 1;
        if self.head == self.buf.len() {
            self.head = 0;
            self.sum = self.buf.iter().sum();
        } else {
            self.sum += c - old;
        }
        if self.nonzero == 0 {
            self.sum = 0.0;
        } else if self.sum <= 0.0 {
            self.sum = self.buf.iter().sum();
        }
        self.sum
    }

    /// Contributions from oldest to newest.
    pub fn contents(&self) -> impl Iterator<Item = f64> + '_ {
        self.buf[self.head..]
            .iter()
            .chain(&self.buf[..self.head])
            .copied()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VmCount {
    pub t: f64,
    pub value: f64,
    /// Per-axis epoch sums (x, y, z).
    pub epoch_sums: [f64; 3],
}

/// The whole per-sample chain for one 3-axis stream. All buffers are sized
/// at construction.
#[derive(Debug, Clone)]
pub struct CountsPipeline {
    cfg: CountsConfig,
    filters: [BandPass; 3],
    windows: [AxisWindow; 3],
    last_t: Option<f64>,
}

impl CountsPipeline {
    /// Builds the pipeline with a band-pass of overall `order`. The filter's
    /// sample rate must equal the counts sample rate.
    pub fn new(filter: &FilterSpec, order: usize, cfg: CountsConfig) -> Result<Self> {
        cfg.validate()?;
        if filter.sample_rate_hz != cfg.sample_rate_hz {
            return Err(Error::config(
                "pipeline",
                format!(
                    "filter sample rate {} Hz differs from counts sample rate {} Hz",
                    filter.sample_rate_hz, cfg.sample_rate_hz
                ),
            ));
        }
        let bp = BandPass::new(filter, order)?;
        let len = cfg.epoch_len();
        Ok(Self {
            cfg,
            filters: [bp.clone(), bp.clone(), bp],
            windows: [
                AxisWindow::new(len),
                AxisWindow::new(len),
                AxisWindow::new(len),
            ],
            last_t: None,
        })
    }

    pub fn config(&self) -> &CountsConfig {
        &self.cfg
    }

    pub fn windows(&self) -> &[AxisWindow; 3] {
        &self.windows
    }

    /// Pushes one sample through all stages. A non-finite or out-of-cadence
    /// sample is rejected and the pipeline state is left unchanged.
    pub fn process_sample(&mut self, sample: RawSample) -> Result<VmCount> {
        sample.check_finite()?;
        if let Some(prev) = self.last_t {
            let dt = 1.0 / self.cfg.sample_rate_hz;
            if ((sample.t - prev) - dt).abs() > TIME_TOLERANCE {
                return Err(Error::OutOfOrder {
                    t: sample.t,
                    previous: prev,
                    rate_hz: self.cfg.sample_rate_hz,
                });
            }
        }
        self.last_t = Some(sample.t);

        let mut sums = [0.0; 3];
        for (axis, x) in sample.axes().into_iter().enumerate() {
            let y = self.filters[axis].step_unchecked(x);
            let c = contribution(threshold_unchecked(y, &self.cfg), &self.cfg);
            sums[axis] = self.windows[axis].push(c);
        }
        Ok(VmCount {
            t: sample.t,
            value: vm(sums[0], sums[1], sums[2]),
            epoch_sums: sums,
        })
    }

    /// Convenience for batch use: processes every sample or returns the first error.
    pub fn process_all(&mut self, samples: &[RawSample]) -> Result<Vec<VmCount>> {
        samples.iter().map(|s| self.process_sample(*s)).collect()
    }
}
