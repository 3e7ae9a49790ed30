use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("MIDI note {0} is outside 0..=127")]
    OutOfMidiRange(i32),

    #[error("cannot spell pitch class {pitch_class} on letter {letter} within double accidentals")]
    UnspellableNote { letter: char, pitch_class: u8 },

    #[error("invalid degree token {token:?} for {mode} mode")]
    InvalidDegreeToken { token: String, mode: &'static str },

    #[error("malformed transition table: {0}")]
    MalformedTable(String),

    #[error("progression count overflows 64-bit integer at length {0}")]
    Overflow(usize),

    #[error("invalid note spelling {0:?}")]
    InvalidSpelling(String),

    #[error("unknown scale {0:?}")]
    UnknownScale(String),

    #[error("invalid progression: {0}")]
    InvalidProgression(String),

    #[error("invalid playback config: {0}")]
    InvalidConfig(String),

    #[error("sink failure: {0}")]
    Sink(#[from] std::io::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}
