//! Butterworth band-pass design and the streaming biquad that runs it.
//!
//! The default design is a single second-order section: a first-order
//! Butterworth low-pass prototype mapped to band-pass, then discretized with
//! the bilinear transform after pre-warping both band edges. Higher even
//! orders are available through [`design_bandpass_cascade`] and yield one
//! section per prototype pole.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{ensure_finite, Error, Result};

/// Sample rate of the wrist unit.
pub const DEFAULT_SAMPLE_RATE_HZ: f64 = 100.0;
pub const DEFAULT_LOW_CUTOFF_HZ: f64 = 0.305;
pub const DEFAULT_HIGH_CUTOFF_HZ: f64 = 1.615;
/// Overall filter order (one biquad).
pub const DEFAULT_ORDER: usize = 2;
const MAX_ORDER: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FilterSpec {
    pub sample_rate_hz: f64,
    pub low_cutoff_hz: f64,
    pub high_cutoff_hz: f64,
}

impl Default for FilterSpec {
    fn default() -> Self {
        Self {
            sample_rate_hz: DEFAULT_SAMPLE_RATE_HZ,
            low_cutoff_hz: DEFAULT_LOW_CUTOFF_HZ,
            high_cutoff_hz: DEFAULT_HIGH_CUTOFF_HZ,
        }
    }
}

impl FilterSpec {
    pub fn new(sample_rate_hz: f64, low_cutoff_hz: f64, high_cutoff_hz: f64) -> Result<Self> {
        let spec = Self {
            sample_rate_hz,
            low_cutoff_hz,
            high_cutoff_hz,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Checks `0 < low < high < fs / 2`.
    pub fn validate(&self) -> Result<()> {
        for (what, v) in [
            ("sample rate", self.sample_rate_hz),
            ("low cutoff", self.low_cutoff_hz),
            ("high cutoff", self.high_cutoff_hz),
        ] {
            ensure_finite(what, v)?;
        }
        if self.sample_rate_hz <= 0.0 {
            return Err(Error::config(
                "filter spec",
                format!(
                    "sample rate must be positive, got {} Hz",
                    self.sample_rate_hz
                ),
            ));
        }
        if self.low_cutoff_hz <= 0.0 {
            return Err(Error::config(
                "filter spec",
                format!("low cutoff must be positive, got {} Hz", self.low_cutoff_hz),
            ));
        }
        if self.low_cutoff_hz >= self.high_cutoff_hz {
            return Err(Error::config(
                "filter spec",
                format!(
                    "low cutoff {} Hz must be below high cutoff {} Hz",
                    self.low_cutoff_hz, self.high_cutoff_hz
                ),
            ));
        }
        let nyquist = self.sample_rate_hz / 2.0;
        if self.high_cutoff_hz >= nyquist {
            return Err(Error::config(
                "filter spec",
                format!(
                    "high cutoff {} Hz must be below the Nyquist frequency {} Hz",
                    self.high_cutoff_hz, nyquist
                ),
            ));
        }
        Ok(())
    }

    /// Digital frequency (Hz) where the designed filter peaks: the image of the
    /// analog geometric center under the bilinear transform.
    pub fn center_frequency_hz(&self) -> f64 {
        let (lo, hi) = self.prewarped_edges();
        let k = 2.0 * self.sample_rate_hz;
        let w0 = (lo * hi).sqrt();
        (w0 / k).atan() * self.sample_rate_hz / PI
    }

    /// Band edges pre-warped to analog angular frequency (rad/s).
    fn prewarped_edges(&self) -> (f64, f64) {
        let k = 2.0 * self.sample_rate_hz;
        let warp = |f: f64| k * (PI * f / self.sample_rate_hz).tan();
        (warp(self.low_cutoff_hz), warp(self.high_cutoff_hz))
    }
}

/// One second-order section, feedback normalized so the leading coefficient is 1:
///
/// ```text
///        b0 + b1 z^-1 + b2 z^-2
/// H(z) = ----------------------
///         1 + a1 z^-1 + a2 z^-2
/// ```
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BiquadCoefficients {
    pub b0: f64,
    pub b1: f64,
    pub b2: f64,
    pub a1: f64,
    pub a2: f64,
}

impl BiquadCoefficients {
    /// Runs one sample through the section (direct form II transposed).
    #[inline]
    pub fn process(&self, state: &mut BiquadState, x: f64) -> f64 {
        let y = self.b0 * x + state.s1;
        state.s1 = self.b1 * x - self.a1 * y + state.s2;
        state.s2 = self.b2 * x - self.a2 * y;
        y
    }

    /// Complex response at `freq_hz` for a stream sampled at `sample_rate_hz`.
    pub fn response(&self, freq_hz: f64, sample_rate_hz: f64) -> Complex64 {
        let z_inv = Complex64::from_polar(1.0, -2.0 * PI * freq_hz / sample_rate_hz);
        let z_inv2 = z_inv * z_inv;
        (self.b0 + self.b1 * z_inv + self.b2 * z_inv2) / (1.0 + self.a1 * z_inv + self.a2 * z_inv2)
    }

    /// Roots of `z^2 + a1 z + a2`.
    pub fn poles(&self) -> [Complex64; 2] {
        let disc = Complex64::new(self.a1 * self.a1 - 4.0 * self.a2, 0.0).sqrt();
        [(-self.a1 + disc) / 2.0, (-self.a1 - disc) / 2.0]
    }

    pub fn is_stable(&self) -> bool {
        self.poles().iter().all(|p| p.norm() < 1.0)
    }
}

/// Delay registers of a direct-form II transposed section.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct BiquadState {
    pub s1: f64,
    pub s2: f64,
}

/// Pure single-step form: returns the output and the advanced state.
pub fn filter_step(
    coeffs: &BiquadCoefficients,
    state: BiquadState,
    x: f64,
) -> Result<(f64, BiquadState)> {
    ensure_finite("filter input", x)?;
    let mut next = state;
    let y = coeffs.process(&mut next, x);
    Ok((y, next))
}

/// Designs the default single-section band-pass (overall order 2).
pub fn design_bandpass(spec: &FilterSpec) -> Result<BiquadCoefficients> {
    let sections = design_bandpass_cascade(spec, DEFAULT_ORDER)?;
    Ok(sections[0])
}

/// Designs a Butterworth band-pass of overall `order` (even, 2..=16) as a
/// cascade of `order / 2` second-order sections.
///
/// The overall gain is 1 at [`FilterSpec::center_frequency_hz`] and 1/sqrt(2)
/// at both cutoffs. Every section has the numerator `g (1 - z^-2)`, so DC and
/// Nyquist are exact zeros.
pub fn design_bandpass_cascade(spec: &FilterSpec, order: usize) -> Result<Vec<BiquadCoefficients>> {
    spec.validate()?;
    if order == 0 || !order.is_multiple_of(2) || order > MAX_ORDER {
        return Err(Error::config(
            "filter order",
            format!("must be an even number between 2 and {MAX_ORDER}, got {order}"),
        ));
    }
    let n = order / 2;
    let k = 2.0 * spec.sample_rate_hz;
    let (lo, hi) = spec.prewarped_edges();
    let bw = hi - lo;
    let w0_sq = lo * hi;

    // Each prototype pole p maps to the two roots of s^2 - p*bw*s + w0^2.
    // Poles from the conjugate prototype pole are the conjugates of these, so
    // sections pair each root with its own conjugate; the real prototype pole
    // (odd n) yields a section from its two roots directly.
    let bandpass_roots = |p: Complex64| {
        let b = p * bw;
        let disc = (b * b - 4.0 * w0_sq).sqrt();
        ((b + disc) / 2.0, (b - disc) / 2.0)
    };
    let to_z = |s: Complex64| (k + s) / (k - s);
    let from_pair = |z1: Complex64, z2: Complex64| {
        let a1 = -(z1 + z2).re;
        let a2 = (z1 * z2).re;
        (a1, a2)
    };

    let mut denominators = Vec::with_capacity(n);
    for i in 0..n {
        let theta = PI * (2 * i + n + 1) as f64 / (2 * n) as f64;
        let p = Complex64::from_polar(1.0, theta);
        if p.im > 1e-12 {
            let (r1, r2) = bandpass_roots(p);
            for r in [r1, r2] {
                let z = to_z(r);
                denominators.push(from_pair(z, z.conj()));
            }
        } else if p.im.abs() <= 1e-12 {
            let (r1, r2) = bandpass_roots(Complex64::new(p.re, 0.0));
            denominators.push(from_pair(to_z(r1), to_z(r2)));
        }
    }
    debug_assert_eq!(denominators.len(), n);

    let mut sections: Vec<BiquadCoefficients> = denominators
        .into_iter()
        .map(|(a1, a2)| BiquadCoefficients {
            b0: 1.0,
            b1: 0.0,
            b2: -1.0,
            a1,
            a2,
        })
        .collect();

    let f0 = spec.center_frequency_hz();
    let peak: f64 = sections
        .iter()
        .map(|s| s.response(f0, spec.sample_rate_hz).norm())
        .product();
    let gain = peak.recip().powf(1.0 / n as f64);
    for s in &mut sections {
        s.b0 = gain;
        s.b2 = -gain;
    }
    Ok(sections)
}

/// Streaming band-pass: a cascade of sections with their own state. One
/// instance per accelerometer axis.
#[derive(Debug, Clone, PartialEq)]
pub struct BandPass {
    sections: Vec<(BiquadCoefficients, BiquadState)>,
}

impl BandPass {
    pub fn new(spec: &FilterSpec, order: usize) -> Result<Self> {
        Ok(Self::from_sections(design_bandpass_cascade(spec, order)?))
    }

    pub fn from_sections(sections: impl IntoIterator<Item = BiquadCoefficients>) -> Self {
        Self {
            sections: sections
                .into_iter()
                .map(|c| (c, BiquadState::default()))
                .collect(),
        }
    }

    pub fn sections(&self) -> impl Iterator<Item = &BiquadCoefficients> {
        self.sections.iter().map(|(c, _)| c)
    }

    /// Filters one sample. Non-finite input is rejected and leaves the state untouched.
    pub fn step(&mut self, x: f64) -> Result<f64> {
        ensure_finite("filter input", x)?;
        Ok(self.step_unchecked(x))
    }

    #[inline]
    pub(crate) fn step_unchecked(&mut self, x: f64) -> f64 {
        self.sections
            .iter_mut()
            .fold(x, |acc, (c, s)| c.process(s, acc))
    }

    pub fn reset(&mut self) {
        for (_, s) in &mut self.sections {
            *s = BiquadState::default();
        }
    }
}
