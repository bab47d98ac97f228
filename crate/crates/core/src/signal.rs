//! CSS chirp synthesis: instantaneous frequency, accumulated phase, passband
//! waveform, and a short-time-Fourier spectrogram for inspection.
//!
//! A transmission is a train of `n_chirps` identical chirps, each of duration
//! `T = 2^sf / bw`. Within one chirp the instantaneous frequency sweeps
//! linearly across `[fc - bw/2, fc + bw/2]` (rising for an up chirp, falling
//! for a down chirp) and snaps back at the chirp boundary; the *phase* stays
//! continuous across boundaries. Outside the train the transmitter is silent:
//! the instantaneous frequency and amplitude are both zero for `t < 0` and
//! for `t >= n_chirps * T`.
//!
//! The emitted waveform is
//!
//! ```text
//!   s(t) = A(t) * sin(2*pi*F(t) + theta_tx),     F(t) = integral of f over [0, t]
//! ```
//!
//! with a rectangular amplitude envelope `A`. Phase bookkeeping is done in
//! *cycles* (`F`, not `2*pi*F`) so that values stay well inside f64 precision
//! even at 868 MHz carriers; see [`ChirpConfig::phase_integral`].

use crate::error::Error;
use crate::util::cos_sin_cycles;
use crate::Result;
use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;
use std::f64::consts::TAU;

/// Sweep direction of the chirps in a train.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChirpDirection {
    /// Frequency rises from `fc - bw/2` to `fc + bw/2`.
    Up,
    /// Frequency falls from `fc + bw/2` to `fc - bw/2`.
    Down,
}

/// Parameters of a chirp train.
///
/// Built with [`ChirpConfig::new`] plus the `with_*` helpers; construction
/// normalizes `theta_tx` into `[0, 2*pi)` and validation enforces the field
/// relations, so downstream stages can assume a well-formed configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct ChirpConfig {
    /// Spreading factor, 7..=12 (EU868 LoRa range). Samples-per-chirp is `2^sf`.
    pub sf: u32,
    /// Chirp bandwidth in Hz (full sweep width).
    pub bw: f64,
    /// Carrier (center) frequency in Hz.
    pub fc: f64,
    /// Transmitter phase offset in radians, normalized to `[0, 2*pi)`.
    pub theta_tx: f64,
    /// Sweep direction.
    pub direction: ChirpDirection,
    /// Number of chirps in the train (the preamble length), >= 1.
    ///
    /// Lag estimation needs at least one chirp *boundary* inside the
    /// correlated window, i.e. `n_chirps >= 2` for end-to-end runs.
    pub n_chirps: u32,
    /// Peak amplitude of the rectangular envelope, > 0.
    pub amplitude: f64,
}

impl ChirpConfig {
    /// An up-chirp train with the given radio parameters, unit amplitude,
    /// zero phase offset and an 8-chirp preamble.
    pub fn new(sf: u32, bw: f64, fc: f64) -> Result<Self> {
        let cfg = ChirpConfig {
            sf,
            bw,
            fc,
            theta_tx: 0.0,
            direction: ChirpDirection::Up,
            n_chirps: 8,
            amplitude: 1.0,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Replace the phase offset (radians); normalized into `[0, 2*pi)`.
    pub fn with_theta_tx(mut self, theta_tx: f64) -> Self {
        self.theta_tx = theta_tx.rem_euclid(TAU);
        self
    }

    /// Replace the sweep direction.
    pub fn with_direction(mut self, direction: ChirpDirection) -> Self {
        self.direction = direction;
        self
    }

    /// Replace the train length.
    pub fn with_n_chirps(mut self, n_chirps: u32) -> Self {
        self.n_chirps = n_chirps;
        self
    }

    /// Replace the envelope amplitude.
    pub fn with_amplitude(mut self, amplitude: f64) -> Self {
        self.amplitude = amplitude;
        self
    }

    /// Check all field relations.
    pub fn validate(&self) -> Result<()> {
        if !(7..=12).contains(&self.sf) {
            return Err(Error::InvalidConfig(format!(
                "sf must be in 7..=12, got {}",
                self.sf
            )));
        }
        if !(self.bw > 0.0) || !self.bw.is_finite() {
            return Err(Error::InvalidConfig(format!("bw must be positive, got {}", self.bw)));
        }
        if !(self.fc > self.bw / 2.0) || !self.fc.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "fc must exceed bw/2 (sweep would cross DC), got fc={} bw={}",
                self.fc, self.bw
            )));
        }
        if !(0.0..TAU).contains(&self.theta_tx) {
            return Err(Error::InvalidConfig(format!(
                "theta_tx must lie in [0, 2*pi), got {}",
                self.theta_tx
            )));
        }
        if self.n_chirps < 1 {
            return Err(Error::InvalidConfig("n_chirps must be >= 1".into()));
        }
        if !(self.amplitude > 0.0) || !self.amplitude.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "amplitude must be positive, got {}",
                self.amplitude
            )));
        }
        Ok(())
    }

    /// Duration of a single chirp in seconds: `2^sf / bw`.
    pub fn chirp_duration(&self) -> f64 {
        (1u64 << self.sf) as f64 / self.bw
    }

    /// Duration of the whole train: `n_chirps * chirp_duration`.
    pub fn train_duration(&self) -> f64 {
        self.n_chirps as f64 * self.chirp_duration()
    }

    /// Split an in-train time into (chirp index, local time within chirp).
    ///
    /// Caller guarantees `0 <= t < train_duration`.
    fn chirp_local(&self, t: f64) -> (u32, f64) {
        let period = self.chirp_duration();
        let mut j = (t / period).floor();
        // Guard against t/period rounding up across a boundary.
        if j >= self.n_chirps as f64 {
            j = (self.n_chirps - 1) as f64;
        }
        let tau = (t - j * period).max(0.0);
        (j as u32, tau)
    }

    /// Instantaneous frequency `f(t)` in Hz.
    ///
    /// Zero before the train starts and from the train end onward; inside
    /// chirp `j` it is linear in the local time `tau = t - j*T`:
    /// `fc - bw/2 + (bw/T)*tau` for an up chirp and the mirrored sweep for a
    /// down chirp. The snap-back at each boundary is a frequency
    /// discontinuity only; phase stays continuous.
    pub fn instantaneous_frequency(&self, t: f64) -> f64 {
        if t < 0.0 || t >= self.train_duration() {
            return 0.0;
        }
        let (_, tau) = self.chirp_local(t);
        let period = self.chirp_duration();
        match self.direction {
            ChirpDirection::Up => self.fc - self.bw / 2.0 + self.bw / period * tau,
            ChirpDirection::Down => self.fc + self.bw / 2.0 - self.bw / period * tau,
        }
    }

    /// Accumulated phase `F(t) = integral of f over [0, t]`, in **cycles**.
    ///
    /// Piecewise quadratic and continuous everywhere; each complete chirp
    /// contributes exactly `fc * T` cycles regardless of direction, so
    /// `F(n*T) = n * fc * T`. Constant before the train (0) and after it
    /// (`n_chirps * fc * T`). Multiply by `2*pi` for radians.
    pub fn phase_integral(&self, t: f64) -> f64 {
        let period = self.chirp_duration();
        let per_chirp = self.fc * period;
        if t <= 0.0 {
            return 0.0;
        }
        if t >= self.train_duration() {
            return self.n_chirps as f64 * per_chirp;
        }
        let (j, tau) = self.chirp_local(t);
        j as f64 * per_chirp + self.fc * tau + self.detrended_partial(tau)
    }

    /// Phase accumulated relative to the carrier: `F(t) - fc * t`, in cycles.
    ///
    /// This is the quantity a receiver tuned to `fc` actually observes; it
    /// stays within `bw * T / 8` cycles inside the train (it returns to zero
    /// at every chirp boundary), which keeps baseband phase arithmetic at
    /// full f64 precision even for 868 MHz carriers. Outside the train it
    /// grows like `-fc * t`; those samples carry zero envelope and are never
    /// used numerically.
    pub fn baseband_phase_integral(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return -self.fc * t;
        }
        let end = self.train_duration();
        if t >= end {
            return -self.fc * (t - end);
        }
        let (_, tau) = self.chirp_local(t);
        self.detrended_partial(tau)
    }

    /// In-chirp detrended phase: integral of `f - fc` over the current chirp's
    /// local time `tau`, in cycles. Zero at both ends of every chirp.
    fn detrended_partial(&self, tau: f64) -> f64 {
        let period = self.chirp_duration();
        let half = self.bw / 2.0;
        let rate = self.bw / (2.0 * period);
        match self.direction {
            ChirpDirection::Up => tau * (-half + rate * tau),
            ChirpDirection::Down => tau * (half - rate * tau),
        }
    }

    /// Rectangular amplitude envelope `A(t)`.
    pub fn envelope(&self, t: f64) -> f64 {
        if t >= 0.0 && t < self.train_duration() {
            self.amplitude
        } else {
            0.0
        }
    }

    /// Time the transmitter's oscillator has been running at `t`, clamped to
    /// the emission interval. A transmit-side frequency bias `df` adds
    /// `df * clamped_emission_time(t)` cycles to the accumulated phase.
    pub fn clamped_emission_time(&self, t: f64) -> f64 {
        t.clamp(0.0, self.train_duration())
    }

    /// Sample the passband waveform `s(t) = A(t) sin(2*pi*F(t) + theta_tx)`
    /// at `sim_rate` over `[0, t_span)`.
    ///
    /// `sim_rate` must satisfy `sim_rate > 2 * (fc + bw/2)` so the sweep is
    /// representable; violations are rejected rather than aliased.
    pub fn synthesize_passband(&self, sim_rate: f64, t_span: f64) -> Result<Vec<f64>> {
        self.validate()?;
        let max_freq = self.fc + self.bw / 2.0;
        if sim_rate <= 2.0 * max_freq {
            return Err(Error::NyquistViolation { sim_rate, max_freq });
        }
        if !(t_span > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "t_span must be positive, got {t_span}"
            )));
        }
        let n = sample_count(sim_rate, t_span);
        let dt = 1.0 / sim_rate;
        let theta_cycles = self.theta_tx / TAU;
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let t = i as f64 * dt;
            let a = self.envelope(t);
            if a == 0.0 {
                out.push(0.0);
                continue;
            }
            // sin(2*pi*F + theta): phase kept in cycles until the last moment.
            let cycles = self.phase_integral(t) + theta_cycles;
            let (_, s) = cos_sin_cycles(cycles);
            out.push(a * s);
        }
        Ok(out)
    }
}

/// Number of samples a rate covers in a (positive) time span.
pub(crate) fn sample_count(rate: f64, span: f64) -> usize {
    (rate * span).round() as usize
}

/// Magnitude short-time Fourier transform of a sampled signal.
///
/// Rows are time frames (`time_resolution` apart), columns are the frequency
/// bins listed in `freqs`. Rectangular analysis window; magnitudes are raw
/// FFT magnitudes (no normalization — ridge extraction and relative
/// comparisons do not need one).
#[derive(Debug, Clone)]
pub struct Spectrogram {
    /// `magnitudes[frame][bin]`, aligned with `freqs`.
    pub magnitudes: Vec<Vec<f64>>,
    /// Center frequency of each bin in Hz (signed for complex input).
    pub freqs: Vec<f64>,
    /// Seconds between consecutive frames: `hop / rate`.
    pub time_resolution: f64,
    /// Bin spacing in Hz: `rate / window_len`.
    pub freq_resolution: f64,
}

impl Spectrogram {
    /// Frequency of the strongest bin in each frame — the spectral ridge.
    pub fn ridge(&self) -> Vec<f64> {
        self.magnitudes
            .iter()
            .map(|row| {
                let (best, _) = row
                    .iter()
                    .enumerate()
                    .fold((0usize, f64::MIN), |(bi, bm), (i, &m)| {
                        if m > bm {
                            (i, m)
                        } else {
                            (bi, bm)
                        }
                    });
                self.freqs[best]
            })
            .collect()
    }
}

fn check_stft_args(len: usize, window_len: usize, hop: usize) -> Result<usize> {
    if window_len == 0 || hop == 0 {
        return Err(Error::InvalidWindow(
            "window_len and hop must be positive".into(),
        ));
    }
    if len < window_len {
        return Err(Error::InputTooShort(format!(
            "{len} samples, spectrogram window needs {window_len}"
        )));
    }
    Ok(1 + (len - window_len) / hop)
}

/// Spectrogram of a real passband signal; one-sided bins `0..=window_len/2`.
pub fn spectrogram_real(
    samples: &[f64],
    rate: f64,
    window_len: usize,
    hop: usize,
) -> Result<Spectrogram> {
    let frames = check_stft_args(samples.len(), window_len, hop)?;
    let fft = FftPlanner::new().plan_fft_forward(window_len);
    let half = window_len / 2 + 1;
    let mut magnitudes = Vec::with_capacity(frames);
    let mut buf = vec![Complex64::default(); window_len];
    for fi in 0..frames {
        let start = fi * hop;
        for (b, &s) in buf.iter_mut().zip(&samples[start..start + window_len]) {
            *b = Complex64::new(s, 0.0);
        }
        fft.process(&mut buf);
        magnitudes.push(buf[..half].iter().map(|c| c.norm()).collect());
    }
    let freqs = (0..half).map(|k| k as f64 * rate / window_len as f64).collect();
    Ok(Spectrogram {
        magnitudes,
        freqs,
        time_resolution: hop as f64 / rate,
        freq_resolution: rate / window_len as f64,
    })
}

/// Spectrogram of a complex baseband signal; two-sided bins in ascending
/// frequency order from `-rate/2` to just below `+rate/2`.
pub fn spectrogram_complex(
    samples: &[Complex64],
    rate: f64,
    window_len: usize,
    hop: usize,
) -> Result<Spectrogram> {
    let frames = check_stft_args(samples.len(), window_len, hop)?;
    let fft = FftPlanner::new().plan_fft_forward(window_len);
    let mut magnitudes = Vec::with_capacity(frames);
    let mut buf = vec![Complex64::default(); window_len];
    for fi in 0..frames {
        let start = fi * hop;
        buf.copy_from_slice(&samples[start..start + window_len]);
        fft.process(&mut buf);
        // fftshift: negative-frequency bins first, ascending order.
        let mut row = Vec::with_capacity(window_len);
        for k in 0..window_len {
            let src = (k + window_len / 2) % window_len;
            row.push(buf[src].norm());
        }
        magnitudes.push(row);
    }
    let freqs = (0..window_len)
        .map(|k| (k as f64 - (window_len / 2) as f64) * rate / window_len as f64)
        .collect();
    Ok(Spectrogram {
        magnitudes,
        freqs,
        time_resolution: hop as f64 / rate,
        freq_resolution: rate / window_len as f64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn sf7() -> ChirpConfig {
        ChirpConfig::new(7, 125_000.0, 868.1e6).unwrap()
    }

    #[test]
    fn chirp_durations_match_radio_settings() {
        // SF7 / 125 kHz is the canonical 1024 us chirp.
        assert_eq!(sf7().chirp_duration(), 1.024e-3);
        assert_eq!(
            ChirpConfig::new(12, 125_000.0, 868.1e6).unwrap().chirp_duration(),
            32.768e-3
        );
        assert_eq!(
            ChirpConfig::new(7, 250_000.0, 868.1e6).unwrap().chirp_duration(),
            512e-6
        );
        assert_eq!(sf7().train_duration(), 8.0 * 1.024e-3);
    }

    #[test]
    fn config_validation_rejects_bad_fields() {
        assert!(ChirpConfig::new(6, 125_000.0, 868.1e6).is_err());
        assert!(ChirpConfig::new(13, 125_000.0, 868.1e6).is_err());
        assert!(ChirpConfig::new(7, -1.0, 868.1e6).is_err());
        // Sweep would cross DC.
        assert!(ChirpConfig::new(7, 125_000.0, 50_000.0).is_err());
        assert!(sf7().with_amplitude(0.0).validate().is_err());
        assert!(sf7().with_n_chirps(0).validate().is_err());
    }

    #[test]
    fn theta_is_normalized_at_construction() {
        let cfg = sf7().with_theta_tx(-1.0);
        assert!((0.0..TAU).contains(&cfg.theta_tx));
        assert_relative_eq!(cfg.theta_tx, TAU - 1.0, max_relative = 1e-15);
    }

    #[test]
    fn frequency_endpoints_and_silence() {
        let cfg = sf7();
        let t_chirp = cfg.chirp_duration();
        assert_relative_eq!(cfg.instantaneous_frequency(0.0), 868.1e6 - 62_500.0);
        assert_relative_eq!(
            cfg.instantaneous_frequency(t_chirp / 2.0),
            868.1e6,
            max_relative = 1e-12
        );
        assert_eq!(cfg.instantaneous_frequency(-1e-6), 0.0);
        assert_eq!(cfg.instantaneous_frequency(cfg.train_duration()), 0.0);
        assert_eq!(cfg.instantaneous_frequency(cfg.train_duration() + 1.0), 0.0);
        // Boundary snaps back to the sweep start.
        assert_relative_eq!(
            cfg.instantaneous_frequency(t_chirp),
            868.1e6 - 62_500.0,
            max_relative = 1e-9
        );

        let down = sf7().with_direction(ChirpDirection::Down);
        assert_relative_eq!(down.instantaneous_frequency(0.0), 868.1e6 + 62_500.0);
    }

    #[test]
    fn frequency_stays_inside_band() {
        let cfg = sf7();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let (lo, hi) = (cfg.fc - cfg.bw / 2.0, cfg.fc + cfg.bw / 2.0);
        for _ in 0..10_000 {
            let t = rng.gen_range(-1e-3..cfg.train_duration() + 1e-3);
            let f = cfg.instantaneous_frequency(t);
            assert!(f == 0.0 || (lo..=hi).contains(&f), "f(t)={f} out of band at t={t}");
        }
    }

    #[test]
    fn phase_integral_endpoints() {
        let cfg = sf7();
        let t_chirp = cfg.chirp_duration();
        assert_eq!(cfg.phase_integral(0.0), 0.0);
        assert_eq!(cfg.phase_integral(-5.0), 0.0);
        // One complete chirp accumulates fc*T cycles, up or down.
        assert_relative_eq!(cfg.phase_integral(t_chirp), cfg.fc * t_chirp, max_relative = 1e-12);
        let down = sf7().with_direction(ChirpDirection::Down);
        assert_relative_eq!(down.phase_integral(t_chirp), cfg.fc * t_chirp, max_relative = 1e-12);
        // Saturates at the train end.
        assert_relative_eq!(
            cfg.phase_integral(cfg.train_duration() + 1.0),
            8.0 * cfg.fc * t_chirp,
            max_relative = 1e-12
        );
    }

    #[test]
    fn phase_integral_is_continuous_and_nondecreasing() {
        let cfg = sf7().with_n_chirps(3);
        let t_chirp = cfg.chirp_duration();
        let eps = 1e-12;
        for j in 1..=3 {
            let t = j as f64 * t_chirp;
            let below = cfg.phase_integral(t - eps);
            let above = cfg.phase_integral(t + eps);
            // Discontinuity would show as ~bw*T/2 = 64 cycles; rounding noise is ~1e-9.
            assert_abs_diff_eq!(below, above, epsilon = 1e-6);
        }
        let mut prev = 0.0;
        for i in 0..=3000 {
            let t = i as f64 * cfg.train_duration() / 3000.0;
            let val = cfg.phase_integral(t);
            assert!(val >= prev - 1e-9, "phase integral decreased at t={t}");
            prev = val;
        }
    }

    #[test]
    fn phase_integral_derivative_matches_frequency() {
        // Central difference of a piecewise quadratic is exact in real
        // arithmetic, so the only error left is f64 rounding.
        let cfg = sf7();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let h = 1e-9;
        let t_chirp = cfg.chirp_duration();
        for _ in 0..200 {
            let j = rng.gen_range(0..cfg.n_chirps) as f64;
            let tau = rng.gen_range(10.0 * h..t_chirp - 10.0 * h);
            let t = j * t_chirp + tau;
            let deriv = (cfg.phase_integral(t + h) - cfg.phase_integral(t - h)) / (2.0 * h);
            let f = cfg.instantaneous_frequency(t);
            assert_relative_eq!(deriv, f, max_relative = 1e-6);
        }
    }

    #[test]
    fn baseband_phase_integral_detrends_carrier() {
        let cfg = sf7();
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..500 {
            let t = rng.gen_range(0.0..cfg.train_duration());
            let g = cfg.baseband_phase_integral(t);
            // Equals F(t) - fc*t (checked loosely: F is ~1e6 cycles here).
            assert_abs_diff_eq!(g, cfg.phase_integral(t) - cfg.fc * t, epsilon = 1e-3);
            // And stays small: |G| <= bw*T/8 cycles.
            assert!(g.abs() <= cfg.bw * cfg.chirp_duration() / 8.0 + 1e-9);
        }
        // Returns to zero at every boundary.
        for j in 0..=8 {
            assert_abs_diff_eq!(
                cfg.baseband_phase_integral(j as f64 * cfg.chirp_duration()),
                0.0,
                epsilon = 1e-9
            );
        }
    }

    #[test]
    fn passband_starts_at_theta() {
        // Scaled carrier keeps the test light; the waveform at t=0 is
        // A*sin(theta_tx).
        let cfg = ChirpConfig::new(7, 125_000.0, 2.0e6).unwrap();
        let s = cfg.synthesize_passband(16.0e6, 1e-4).unwrap();
        assert_eq!(s[0], 0.0);

        let quarter = cfg.clone().with_theta_tx(std::f64::consts::FRAC_PI_2);
        let s = quarter.synthesize_passband(16.0e6, 1e-4).unwrap();
        assert_relative_eq!(s[0], cfg.amplitude, max_relative = 1e-12);
    }

    #[test]
    fn passband_power_is_half_amplitude_squared() {
        // Oracle: numerical mean of sin^2 over ~2000 carrier cycles.
        let cfg = ChirpConfig::new(7, 125_000.0, 2.0e6)
            .unwrap()
            .with_n_chirps(1)
            .with_amplitude(3.0);
        let s = cfg.synthesize_passband(16.0e6, cfg.train_duration()).unwrap();
        let mean_sq = s.iter().map(|x| x * x).sum::<f64>() / s.len() as f64;
        assert_relative_eq!(mean_sq, 9.0 / 2.0, max_relative = 2e-3);
    }

    #[test]
    fn passband_rejects_sub_nyquist_rate() {
        let cfg = ChirpConfig::new(7, 125_000.0, 2.0e6).unwrap();
        let err = cfg.synthesize_passband(3.0e6, 1e-3).unwrap_err();
        assert!(matches!(err, Error::NyquistViolation { .. }), "got {err}");
    }

    #[test]
    fn theta_wraps_by_whole_turns_bit_exactly() {
        // 2*pi normalizes to exactly 0.0, so the waveforms agree bit for bit.
        let cfg = ChirpConfig::new(7, 125_000.0, 2.0e6).unwrap();
        let a = cfg.clone().with_theta_tx(0.0);
        let b = cfg.with_theta_tx(TAU);
        assert_eq!(b.theta_tx, 0.0);
        let sa = a.synthesize_passband(16.0e6, 1e-4).unwrap();
        let sb = b.synthesize_passband(16.0e6, 1e-4).unwrap();
        assert_eq!(sa, sb);
    }

    #[test]
    fn spectrogram_twenty_hops_across_one_chirp() {
        // 1024 us chirp cut into 20 frames: bin width 51.2 us nominal
        // (1 MHz rate, 51-sample window/hop gives 51 us — within 2%).
        let cfg = ChirpConfig::new(7, 125_000.0, 250_000.0)
            .unwrap()
            .with_n_chirps(1);
        let rate = 1.0e6;
        let s = cfg.synthesize_passband(rate, cfg.chirp_duration()).unwrap();
        assert_eq!(s.len(), 1024);
        let spec = spectrogram_real(&s, rate, 51, 51).unwrap();
        assert_eq!(spec.magnitudes.len(), 20);
        let nominal = cfg.chirp_duration() / 20.0;
        assert!((spec.time_resolution - nominal).abs() / nominal <= 0.02);
    }

    #[test]
    fn spectrogram_finds_a_pure_tone() {
        let rate = 1.0e6;
        let f0 = 100_000.0;
        let n = 4096;
        let tone: Vec<f64> = (0..n)
            .map(|i| (TAU * f0 * i as f64 / rate).sin())
            .collect();
        let spec = spectrogram_real(&tone, rate, 256, 128).unwrap();
        for ridge_f in spec.ridge() {
            assert_abs_diff_eq!(ridge_f, f0, epsilon = spec.freq_resolution);
        }
    }

    #[test]
    fn spectrogram_ridge_follows_the_sweep() {
        // Up chirp at a scaled carrier: the ridge must rise monotonically
        // (within a bin of slack) and fit a line with the chirp's slope.
        let cfg = ChirpConfig::new(7, 125_000.0, 1.0e6).unwrap().with_n_chirps(1);
        let rate = 4.0e6;
        let s = cfg.synthesize_passband(rate, cfg.chirp_duration()).unwrap();
        let spec = spectrogram_real(&s, rate, 1024, 128).unwrap();
        let ridge = spec.ridge();
        for w in ridge.windows(2) {
            assert!(w[1] >= w[0] - spec.freq_resolution, "ridge not monotone: {w:?}");
        }
        // Least-squares line through (frame_time, ridge_freq).
        let n = ridge.len() as f64;
        let xs: Vec<f64> = (0..ridge.len()).map(|i| i as f64 * spec.time_resolution).collect();
        let mx = xs.iter().sum::<f64>() / n;
        let my = ridge.iter().sum::<f64>() / n;
        let sxy: f64 = xs.iter().zip(&ridge).map(|(x, y)| (x - mx) * (y - my)).sum();
        let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
        let slope = sxy / sxx;
        let expected = cfg.bw / cfg.chirp_duration();
        assert_relative_eq!(slope, expected, max_relative = 0.05);
        // Coefficient of determination of the linear fit.
        let syy: f64 = ridge.iter().map(|y| (y - my) * (y - my)).sum();
        let r2 = sxy * sxy / (sxx * syy);
        assert!(r2 > 0.99, "ridge linearity r^2 = {r2}");
    }

    #[test]
    fn spectrogram_rejects_short_input() {
        let err = spectrogram_real(&[0.0; 10], 1.0e6, 64, 32).unwrap_err();
        assert!(matches!(err, Error::InputTooShort(_)), "got {err}");
    }

    #[test]
    fn complex_spectrogram_orders_bins_ascending() {
        // Baseband tone at -100 kHz must land on a negative-frequency bin.
        let rate = 1.0e6;
        let f0 = -100_000.0;
        let tone: Vec<Complex64> = (0..2048)
            .map(|i| {
                let ph = TAU * f0 * i as f64 / rate;
                Complex64::new(ph.cos(), ph.sin())
            })
            .collect();
        let spec = spectrogram_complex(&tone, rate, 256, 256).unwrap();
        assert!(spec.freqs.windows(2).all(|w| w[1] > w[0]));
        for ridge_f in spec.ridge() {
            assert_abs_diff_eq!(ridge_f, f0, epsilon = spec.freq_resolution);
        }
    }
}
