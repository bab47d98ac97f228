//! SDR reception: mixing the passband signal against the gateway's local
//! oscillator, low-pass filtering, and decimation to the ADC rate.
//!
//! Mixing a received waveform `s` against the two local-oscillator phases
//!
//! ```text
//!   s_i(t) = s(t) * sin(2*pi*fc*t + theta_rx)
//!   s_q(t) = s(t) * cos(2*pi*fc*t + theta_rx)
//! ```
//!
//! produces, after low-pass filtering away the double-frequency images,
//!
//! ```text
//!   I(t) = (alpha*A/2) * cos(Theta(t)),   Q(t) = (alpha*A/2) * sin(Theta(t)),
//!   Theta(t) = 2*pi*F(t - d/v) - 2*pi*fc*t + theta,   theta = theta_tx - theta_rx,
//! ```
//!
//! so the baseband phase depends on the transmit and receive phase offsets
//! only through their difference. [`receive_analytic`] evaluates those closed
//! forms directly at the ADC instants — no passband buffer, no filter — which
//! is exact for a clean channel and costs only O(samples). The explicit
//! [`mix`] + [`lowpass_and_decimate`] chain exists to validate that shortcut
//! and to model filter edge effects when they matter.

use crate::channel::ChannelConfig;
use crate::error::Error;
use crate::signal::{sample_count, ChirpConfig};
use crate::util::cos_sin_cycles;
use crate::Result;
use std::f64::consts::TAU;
use std::io::{Read, Write};
use std::path::Path;

/// Gateway radio front-end parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct ReceiverConfig {
    /// Local-oscillator (tuning) frequency in Hz; normally the chirp carrier.
    pub fc: f64,
    /// Receiver phase offset in radians.
    pub theta_rx: f64,
    /// ADC (output I/Q) sample rate in Hz.
    pub adc_rate: f64,
    /// Low-pass cutoff in Hz; defaults to the chirp bandwidth.
    pub lpf_cutoff: f64,
    /// Receive oscillator frequency bias in Hz (tuning error).
    pub rx_freq_bias: f64,
}

impl ReceiverConfig {
    /// A receiver tuned to `fc`, sampling at `adc_rate`, with the cutoff at
    /// the chirp bandwidth `bw`.
    pub fn new(fc: f64, adc_rate: f64, bw: f64) -> Self {
        ReceiverConfig {
            fc,
            theta_rx: 0.0,
            adc_rate,
            lpf_cutoff: bw,
            rx_freq_bias: 0.0,
        }
    }

    /// Check field relations against the chirp this receiver will capture:
    /// the cutoff must pass the full chirp bandwidth yet sit below the
    /// carrier (`bw <= lpf_cutoff < fc`).
    pub fn validate_for(&self, chirp: &ChirpConfig) -> Result<()> {
        if !(self.adc_rate > 0.0) || !self.adc_rate.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "adc_rate must be positive, got {}",
                self.adc_rate
            )));
        }
        if !(self.fc > 0.0) || !self.fc.is_finite() {
            return Err(Error::InvalidConfig(format!("receiver fc must be positive, got {}", self.fc)));
        }
        if !self.theta_rx.is_finite() || !self.rx_freq_bias.is_finite() {
            return Err(Error::InvalidConfig("theta_rx and rx_freq_bias must be finite".into()));
        }
        if self.lpf_cutoff < chirp.bw || self.lpf_cutoff >= self.fc {
            return Err(Error::InvalidConfig(format!(
                "lpf_cutoff must satisfy bw <= cutoff < fc, got cutoff={} bw={} fc={}",
                self.lpf_cutoff, chirp.bw, self.fc
            )));
        }
        Ok(())
    }
}

/// A complex baseband capture: I/Q samples at the ADC rate.
///
/// `t0` is the nominal time of the first sample in the *gateway's own clock*;
/// an unsynchronized gateway whose clock is offset by `dt` produces samples
/// physically taken at `t0 + dt + n/f_s` while still labelling them `t0`.
#[derive(Debug, Clone, PartialEq)]
pub struct IqTrace {
    /// In-phase samples.
    pub i: Vec<f64>,
    /// Quadrature samples.
    pub q: Vec<f64>,
    /// ADC sample rate in Hz.
    pub sample_rate: f64,
    /// Nominal time of the first sample, seconds.
    pub t0: f64,
}

impl IqTrace {
    /// Number of I/Q sample pairs.
    pub fn len(&self) -> usize {
        self.i.len()
    }

    /// True when the trace holds no samples.
    pub fn is_empty(&self) -> bool {
        self.i.is_empty()
    }

    /// Per-sample envelope `sqrt(I^2 + Q^2)`.
    pub fn magnitudes(&self) -> Vec<f64> {
        self.i
            .iter()
            .zip(&self.q)
            .map(|(&i, &q)| (i * i + q * q).sqrt())
            .collect()
    }

    /// Dump the trace as interleaved little-endian `f32` pairs `(I, Q)` plus
    /// a `<path>.meta` sidecar recording rate, tuning frequency and `t0`.
    pub fn write_raw(&self, path: &Path, fc: f64) -> Result<()> {
        let mut raw = std::fs::File::create(path)?;
        let mut buf = Vec::with_capacity(self.len() * 8);
        for (&i, &q) in self.i.iter().zip(&self.q) {
            buf.extend_from_slice(&(i as f32).to_le_bytes());
            buf.extend_from_slice(&(q as f32).to_le_bytes());
        }
        raw.write_all(&buf)?;
        let meta = format!(
            "format = \"f32le_interleaved_iq\"\nf_s_hz = {}\nfc_hz = {}\nt0_s = {}\nsamples = {}\n",
            self.sample_rate,
            fc,
            self.t0,
            self.len()
        );
        std::fs::write(sidecar_path(path), meta)?;
        Ok(())
    }

    /// Read a trace written by [`IqTrace::write_raw`]; returns the trace and
    /// the tuning frequency recorded in the sidecar.
    pub fn read_raw(path: &Path) -> Result<(IqTrace, f64)> {
        let meta = std::fs::read_to_string(sidecar_path(path))?;
        let mut f_s = None;
        let mut fc = None;
        let mut t0 = None;
        let mut samples = None;
        for line in meta.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::MalformedFile(format!("sidecar line without '=': {line}")));
            };
            let (key, value) = (key.trim(), value.trim());
            match key {
                "format" => {
                    if value != "\"f32le_interleaved_iq\"" {
                        return Err(Error::MalformedFile(format!("unknown trace format {value}")));
                    }
                }
                "f_s_hz" => f_s = value.parse::<f64>().ok(),
                "fc_hz" => fc = value.parse::<f64>().ok(),
                "t0_s" => t0 = value.parse::<f64>().ok(),
                "samples" => samples = value.parse::<usize>().ok(),
                other => return Err(Error::MalformedFile(format!("unknown sidecar key {other}"))),
            }
        }
        let (Some(f_s), Some(fc), Some(t0), Some(samples)) = (f_s, fc, t0, samples) else {
            return Err(Error::MalformedFile("sidecar missing f_s_hz/fc_hz/t0_s/samples".into()));
        };
        let mut raw = Vec::new();
        std::fs::File::open(path)?.read_to_end(&mut raw)?;
        if raw.len() != samples * 8 {
            return Err(Error::MalformedFile(format!(
                "raw trace holds {} bytes, sidecar promises {}",
                raw.len(),
                samples * 8
            )));
        }
        let mut i = Vec::with_capacity(samples);
        let mut q = Vec::with_capacity(samples);
        for pair in raw.chunks_exact(8) {
            i.push(f32::from_le_bytes([pair[0], pair[1], pair[2], pair[3]]) as f64);
            q.push(f32::from_le_bytes([pair[4], pair[5], pair[6], pair[7]]) as f64);
        }
        Ok((IqTrace { i, q, sample_rate: f_s, t0 }, fc))
    }
}

fn sidecar_path(path: &Path) -> std::path::PathBuf {
    let mut s = path.as_os_str().to_os_string();
    s.push(".meta");
    s.into()
}

/// Multiply the passband signal against both local-oscillator phases.
///
/// Returns `(s_i, s_q)` still at the simulation rate, each containing the
/// wanted baseband term plus an image at twice the carrier that
/// [`lowpass_and_decimate`] removes.
pub fn mix(passband: &[f64], sim_rate: f64, rx: &ReceiverConfig) -> (Vec<f64>, Vec<f64>) {
    let dt = 1.0 / sim_rate;
    let lo_freq = rx.fc + rx.rx_freq_bias;
    let theta_cycles = rx.theta_rx / TAU;
    let mut s_i = Vec::with_capacity(passband.len());
    let mut s_q = Vec::with_capacity(passband.len());
    for (n, &s) in passband.iter().enumerate() {
        let cycles = lo_freq * (n as f64 * dt) + theta_cycles;
        let (c, sn) = cos_sin_cycles(cycles);
        s_i.push(s * sn);
        s_q.push(s * c);
    }
    (s_i, s_q)
}

/// Windowed-sinc low-pass taps (Blackman window, unity DC gain, odd length).
///
/// The transition band is `cutoff/2` wide, so the response is flat (to the
/// Blackman ripple, ~2e-4) through `0.75 * cutoff` and the stopband starts
/// by `1.25 * cutoff`.
fn design_lowpass(sim_rate: f64, cutoff: f64) -> Vec<f64> {
    let transition = cutoff / 2.0;
    // Blackman transition width is ~5.5/N in normalized frequency.
    let mut n = (5.5 * sim_rate / transition).ceil() as usize;
    if n % 2 == 0 {
        n += 1;
    }
    let m = (n - 1) as f64;
    let fc_norm = cutoff / sim_rate;
    let mut taps = Vec::with_capacity(n);
    for k in 0..n {
        let x = k as f64 - m / 2.0;
        let sinc = if x == 0.0 {
            2.0 * fc_norm
        } else {
            (TAU * fc_norm * x).sin() / (std::f64::consts::PI * x)
        };
        let window = 0.42 - 0.5 * (TAU * k as f64 / m).cos() + 0.08 * (2.0 * TAU * k as f64 / m).cos();
        taps.push(sinc * window);
    }
    let gain: f64 = taps.iter().sum();
    for t in &mut taps {
        *t /= gain;
    }
    taps
}

/// Low-pass filter both mixer outputs and decimate to the ADC rate.
///
/// The FIR is linear-phase; its group delay of `(taps-1)/2` input samples is
/// compensated so output sample `n` is aligned with input time `n / f_s`.
/// `sim_rate / adc_rate` must be a whole number — fractional resampling is
/// out of scope.
pub fn lowpass_and_decimate(
    s_i: &[f64],
    s_q: &[f64],
    sim_rate: f64,
    rx: &ReceiverConfig,
) -> Result<IqTrace> {
    if s_i.len() != s_q.len() {
        return Err(Error::InvalidConfig(format!(
            "mixer outputs differ in length: {} vs {}",
            s_i.len(),
            s_q.len()
        )));
    }
    let ratio = sim_rate / rx.adc_rate;
    if (ratio - ratio.round()).abs() > 1e-9 || ratio < 1.0 {
        return Err(Error::NonIntegerDecimation { sim_rate, f_s: rx.adc_rate });
    }
    let step = ratio.round() as usize;
    let taps = design_lowpass(sim_rate, rx.lpf_cutoff);
    if s_i.len() < taps.len() {
        return Err(Error::InputTooShort(format!(
            "{} samples, low-pass filter needs {}",
            s_i.len(),
            taps.len()
        )));
    }
    let delay = (taps.len() - 1) / 2;
    let filter_at = |x: &[f64], n: usize| -> f64 {
        // Group-delay-compensated output aligned to input index n.
        let mut acc = 0.0;
        for (k, &h) in taps.iter().enumerate() {
            let idx = n + delay;
            if idx >= k {
                let j = idx - k;
                if j < x.len() {
                    acc += h * x[j];
                }
            }
        }
        acc
    };
    let out_len = (s_i.len() + step - 1) / step;
    let mut i = Vec::with_capacity(out_len);
    let mut q = Vec::with_capacity(out_len);
    let mut n = 0;
    while n < s_i.len() {
        i.push(filter_at(s_i, n));
        q.push(filter_at(s_q, n));
        n += step;
    }
    Ok(IqTrace { i, q, sample_rate: rx.adc_rate, t0: 0.0 })
}

/// Closed-form baseband reception: evaluate post-filter I/Q directly at the
/// ADC instants for a clean channel.
///
/// Samples cover `[0, t_span)` at `rx.adc_rate`. Equivalent to
/// `propagate -> mix -> lowpass_and_decimate` away from filter edge
/// transients, but exact and O(samples); this is the default reception path.
pub fn receive_analytic(
    cfg: &ChirpConfig,
    chan: &ChannelConfig,
    rx: &ReceiverConfig,
    d: f64,
    t_span: f64,
) -> Result<IqTrace> {
    let n = sample_count(rx.adc_rate, t_span);
    receive_analytic_windowed(cfg, chan, rx, d, 0.0, 0.0, n)
}

/// Closed-form reception over an arbitrary capture window.
///
/// The gateway nominally starts capturing at `capture_start` (its `t0`), but
/// a clock offset shifts the physical sampling instants: sample `n` is taken
/// at true time `capture_start + clock_offset + n / f_s`. Samples where the
/// delayed envelope is zero are exactly `(0, 0)`.
pub fn receive_analytic_windowed(
    cfg: &ChirpConfig,
    chan: &ChannelConfig,
    rx: &ReceiverConfig,
    d: f64,
    capture_start: f64,
    clock_offset: f64,
    n_samples: usize,
) -> Result<IqTrace> {
    cfg.validate()?;
    chan.validate()?;
    rx.validate_for(cfg)?;
    if !(d > 0.0) || !d.is_finite() {
        return Err(Error::InvalidConfig(format!(
            "propagation distance must be positive, got {d}"
        )));
    }
    let dt = 1.0 / rx.adc_rate;
    let delay = d / chan.v;
    let env_half = chan.attenuation(d) * cfg.amplitude / 2.0;
    // Theta(t) = 2*pi*[ G(tau) + bias terms - fc_tx*d/v + (fc_tx - fc_rx - rx_bias)*t ] + theta
    // with tau = t - d/v and G the carrier-detrended phase integral. Keeping
    // everything in cycles and folding the carrier into a constant plus a
    // slow residual term preserves precision at 868 MHz.
    let theta_cycles = (cfg.theta_tx - rx.theta_rx) / TAU;
    let const_cycles = -cfg.fc * delay + theta_cycles;
    let carrier_residual = cfg.fc - rx.fc - rx.rx_freq_bias;
    let start = capture_start + clock_offset;
    let mut i = Vec::with_capacity(n_samples);
    let mut q = Vec::with_capacity(n_samples);
    for n in 0..n_samples {
        let t = start + n as f64 * dt;
        let tau = t - delay;
        if cfg.envelope(tau) == 0.0 {
            i.push(0.0);
            q.push(0.0);
            continue;
        }
        let cycles = cfg.baseband_phase_integral(tau)
            + chan.tx_freq_bias * cfg.clamped_emission_time(tau)
            + carrier_residual * t
            + const_cycles;
        let (c, s) = cos_sin_cycles(cycles);
        i.push(env_half * c);
        q.push(env_half * s);
    }
    Ok(IqTrace { i, q, sample_rate: rx.adc_rate, t0: capture_start })
}
