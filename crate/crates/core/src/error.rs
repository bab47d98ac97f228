use thiserror::Error;

/// Errors produced by the simulation pipeline.
///
/// Configuration problems are reported before any samples are produced;
/// the remaining variants surface numerical or structural problems found
/// while running a stage.
#[derive(Debug, Error)]
pub enum Error {
    /// A configuration field violates its documented range or relation.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// The passband simulation rate cannot represent the requested signal.
    #[error("simulation rate {sim_rate} Hz is below the Nyquist rate for content up to {max_freq} Hz")]
    NyquistViolation { sim_rate: f64, max_freq: f64 },

    /// The ADC rate does not exceed the chirp bandwidth, so consecutive-sample
    /// phase differences cannot be recovered unambiguously (a phase step may
    /// exceed half a turn). Requires `f_s > bw`.
    #[error("ADC rate {f_s} Hz must exceed the chirp bandwidth {bw} Hz for unambiguous phase differencing")]
    AmbiguousSamplingRate { f_s: f64, bw: f64 },

    /// Decimating from the simulation rate to the ADC rate requires an
    /// integer ratio.
    #[error("simulation rate {sim_rate} Hz is not an integer multiple of ADC rate {f_s} Hz")]
    NonIntegerDecimation { sim_rate: f64, f_s: f64 },

    /// An operation needs more samples than the input provides.
    #[error("input too short: {0}")]
    InputTooShort(String),

    /// The two sequences handed to the correlator disagree on timing.
    #[error("sample-rate mismatch: {0} Hz vs {1} Hz")]
    SampleRateMismatch(f64, f64),

    /// The requested lag range leaves less than half the sequences overlapping.
    #[error("max_lag {max_lag} leaves less than 50% overlap for sequences of length {len}")]
    ExcessiveMaxLag { max_lag: usize, len: usize },

    /// No usable (unflagged) sample pairs at any lag in the search range.
    #[error("correlation window contains no usable sample pairs")]
    EmptyOverlap,

    /// A smoothing or analysis window is malformed.
    #[error("invalid window: {0}")]
    InvalidWindow(String),

    /// The scene does not contain enough gateways for the requested solve.
    #[error("localization needs {needed} gateways, scene has {got}")]
    InsufficientGateways { needed: usize, got: usize },

    /// A stage failed while running the end-to-end pipeline; carries the
    /// gateway or pair the failure belongs to.
    #[error("pipeline stage failed at {context}: {source}")]
    Pipeline {
        context: String,
        #[source]
        source: Box<Error>,
    },

    /// Raw trace or report I/O failed.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    /// A dumped trace or report could not be parsed back.
    #[error("malformed file: {0}")]
    MalformedFile(String),
}

impl Error {
    /// Wrap an error with pipeline context (which gateway or pair failed).
    pub fn in_context(self, context: impl Into<String>) -> Self {
        Error::Pipeline {
            context: context.into(),
            source: Box::new(self),
        }
    }
}
