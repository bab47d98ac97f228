//! Differential phase sampling (DPS): reduce an I/Q trace to the sequence of
//! phase steps between consecutive samples.
//!
//! The baseband phase of a received chirp advances by
//!
//! ```text
//!   delta[n] = Theta(t_n) - Theta(t_{n+1})
//!            = -2*pi * integral of f over [t_n - d/v, t_{n+1} - d/v] + 2*pi*fc/f_s
//! ```
//!
//! between ADC samples. Because the instantaneous frequency never leaves
//! `[fc - bw/2, fc + bw/2]`, the step magnitude is bounded by
//! `pi * bw / f_s`; when the ADC rate exceeds the chirp bandwidth that bound
//! is strictly below `pi`, so of the three candidates
//! `{measured - 2*pi, measured, measured + 2*pi}` for each wrapped
//! consecutive-sample difference exactly one lies on the principal branch —
//! the step is recovered *unambiguously* with no integer phase bookkeeping.
//! [`dps`] enforces `f_s > bw` for that reason and rejects slower ADCs.
//!
//! The sequence is a time signature of the chirp train (a sawtooth locked to
//! the chirp boundaries) that is independent of both phase offsets — the
//! constant `theta_tx - theta_rx` cancels in every difference — which is what
//! makes cross-gateway correlation work without phase synchronization.
//! The absolute phase of a trace is only ever known modulo one turn; that
//! global `2*pi*k` ambiguity is irrelevant here, so all phases are reported
//! on the principal branch.

use crate::error::Error;
use crate::receiver::IqTrace;
use crate::signal::ChirpConfig;
use crate::util::{median, wrap_to_pi};
use crate::Result;
use std::f64::consts::TAU;
use std::io::Write;

/// A differential phase sequence with per-element reliability flags.
///
/// Element `n` is the phase step between source samples `n` and `n+1`, so the
/// sequence is one shorter than the trace it came from.
#[derive(Debug, Clone, PartialEq)]
pub struct DpsSequence {
    /// Phase steps in radians.
    pub values: Vec<f64>,
    /// `true` marks elements touching a magnitude-gated (unreliable) sample;
    /// flagged elements are excluded from correlation by default.
    pub flags: Vec<bool>,
    /// Envelope attached to each element: the smaller of the two source
    /// sample magnitudes.
    pub magnitude: Vec<f64>,
    /// ADC rate of the source trace, Hz.
    pub sample_rate: f64,
    /// Nominal time of the first source sample, seconds.
    pub t0: f64,
}

impl DpsSequence {
    /// Number of phase steps.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    /// True when the sequence holds no steps.
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Count of elements not flagged as unreliable.
    pub fn usable(&self) -> usize {
        self.flags.iter().filter(|f| !**f).count()
    }

    /// Write the sequence as CSV: `index,delta_rad,magnitude,flag`.
    pub fn write_csv(&self, mut out: impl Write) -> std::io::Result<()> {
        writeln!(out, "index,delta_rad,magnitude,flag")?;
        for n in 0..self.len() {
            writeln!(
                out,
                "{},{},{},{}",
                n,
                self.values[n],
                self.magnitude[n],
                self.flags[n] as u8
            )?;
        }
        Ok(())
    }
}

/// Phase of an I/Q sample pair on the principal branch `(-pi, pi]`.
pub fn wrapped_phase(i: f64, q: f64) -> f64 {
    wrap_to_pi(q.atan2(i))
}

/// Extract the differential phase sequence from an I/Q trace.
///
/// `bw` is the chirp bandwidth the trace is expected to contain; the call is
/// refused unless `trace.sample_rate > bw`, the condition under which each
/// consecutive-sample phase step has exactly one valid unwrapping (see the
/// module docs). Samples whose envelope falls below 10% of the median
/// in-signal envelope are gated, and every step touching a gated sample is
/// flagged — this covers the envelope transitions at the start and end of the
/// train (steps across *interior* chirp boundaries are fine: the phase is
/// continuous there and the step bound still holds).
pub fn dps(trace: &IqTrace, bw: f64) -> Result<DpsSequence> {
    if !(bw > 0.0) || !bw.is_finite() {
        return Err(Error::InvalidConfig(format!("bw must be positive, got {bw}")));
    }
    if trace.sample_rate <= bw {
        return Err(Error::AmbiguousSamplingRate { f_s: trace.sample_rate, bw });
    }
    if trace.len() < 2 {
        return Err(Error::InputTooShort(format!(
            "{} samples, differential phase needs at least 2",
            trace.len()
        )));
    }
    let mags = trace.magnitudes();
    let peak = mags.iter().cloned().fold(0.0, f64::max);
    let gate = if peak == 0.0 {
        f64::INFINITY // silent trace: gate everything
    } else {
        // Median over samples that plausibly contain signal, so long silent
        // stretches before the wavefront don't drag the估 threshold to zero.
        let in_signal: Vec<f64> = mags.iter().cloned().filter(|&m| m > 0.05 * peak).collect();
        0.1 * median(&in_signal)
    };
    let gated: Vec<bool> = mags.iter().map(|&m| m < gate).collect();

    let n_steps = trace.len() - 1;
    let mut values = Vec::with_capacity(n_steps);
    let mut flags = Vec::with_capacity(n_steps);
    let mut magnitude = Vec::with_capacity(n_steps);
    let mut prev_phase = wrapped_phase(trace.i[0], trace.q[0]);
    for n in 0..n_steps {
        let next_phase = wrapped_phase(trace.i[n + 1], trace.q[n + 1]);
        // The raw difference lies in (-2*pi, 2*pi); wrapping selects the one
        // candidate on the principal branch.
        values.push(wrap_to_pi(prev_phase - next_phase));
        flags.push(gated[n] || gated[n + 1]);
        magnitude.push(mags[n].min(mags[n + 1]));
        prev_phase = next_phase;
    }
    Ok(DpsSequence {
        values,
        flags,
        magnitude,
        sample_rate: trace.sample_rate,
        t0: trace.t0,
    })
}

/// Ground-truth differential phase sequence for a clean channel, computed
/// from the phase integral in closed form (no trace, no wrapping).
///
/// Produces `n` steps for a capture starting at `t0` with sample rate `f_s`,
/// for a transmitter at distance `d` and propagation speed `v`:
///
/// ```text
///   delta[n] = -2*pi * (F(t_{n+1} - d/v) - F(t_n - d/v)) + 2*pi*fc/f_s
/// ```
///
/// evaluated via the carrier-detrended integral for precision. Steps not
/// fully inside the chirp train are flagged (their closed-form values are
/// still returned: before arrival the formula degenerates to the constant
/// `2*pi*fc/f_s`). Magnitudes carry the unit-attenuation envelope `A/2`.
pub fn analytic_dps(
    cfg: &ChirpConfig,
    d: f64,
    v: f64,
    f_s: f64,
    t0: f64,
    n: usize,
) -> Result<DpsSequence> {
    cfg.validate()?;
    if !(d > 0.0) || !(v > 0.0) || !(f_s > 0.0) {
        return Err(Error::InvalidConfig(format!(
            "analytic_dps needs positive d, v, f_s (got {d}, {v}, {f_s})"
        )));
    }
    let dt = 1.0 / f_s;
    let delay = d / v;
    let train = cfg.train_duration();
    let half_env = cfg.amplitude / 2.0;
    let mut values = Vec::with_capacity(n);
    let mut flags = Vec::with_capacity(n);
    let mut magnitude = Vec::with_capacity(n);
    // Same index arithmetic as the receiver so both paths see identical
    // retarded times down to the last ulp.
    let mut tau_prev = t0 - delay;
    let mut g_prev = cfg.baseband_phase_integral(tau_prev);
    for k in 1..=n {
        let tau = (t0 + k as f64 * dt) - delay;
        let g = cfg.baseband_phase_integral(tau);
        values.push(-TAU * (g - g_prev));
        let inside = tau_prev >= 0.0 && tau < train;
        flags.push(!inside);
        magnitude.push(if inside { half_env } else { 0.0 });
        tau_prev = tau;
        g_prev = g;
    }
    Ok(DpsSequence {
        values,
        flags,
        magnitude,
        sample_rate: f_s,
        t0,
    })
}

/// Centered moving average over the differential phase values.
///
/// `window` must be odd so the average is symmetric; flagged elements are
/// excluded from every average they would fall into, and elements whose
/// whole window is flagged pass through unchanged. Flags and magnitudes are
/// preserved. `window == 1` is the identity.
pub fn smooth_dps(seq: &DpsSequence, window: usize) -> Result<DpsSequence> {
    if window % 2 == 0 || window == 0 {
        return Err(Error::InvalidWindow(format!(
            "smoothing window must be odd, got {window}"
        )));
    }
    if window > seq.len() {
        return Err(Error::InvalidWindow(format!(
            "smoothing window {window} exceeds sequence length {}",
            seq.len()
        )));
    }
    if window == 1 {
        return Ok(seq.clone());
    }
    let n = seq.len();
    // Prefix sums over unflagged values let each window average cost O(1).
    let mut sum = vec![0.0; n + 1];
    let mut cnt = vec![0usize; n + 1];
    for k in 0..n {
        let usable = !seq.flags[k];
        sum[k + 1] = sum[k] + if usable { seq.values[k] } else { 0.0 };
        cnt[k + 1] = cnt[k] + usable as usize;
    }
    let half = window / 2;
    let mut values = Vec::with_capacity(n);
    for k in 0..n {
        let lo = k.saturating_sub(half);
        let hi = (k + half + 1).min(n);
        let c = cnt[hi] - cnt[lo];
        if c == 0 {
            values.push(seq.values[k]);
        } else {
            values.push((sum[hi] - sum[lo]) / c as f64);
        }
    }
    Ok(DpsSequence {
        values,
        flags: seq.flags.clone(),
        magnitude: seq.magnitude.clone(),
        sample_rate: seq.sample_rate,
        t0: seq.t0,
    })
}
