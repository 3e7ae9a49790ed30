//! Shared workloads for the criterion benchmarks in `benches/`.

use chordgen_core::midi::{music_notes, timed_events, PlaybackConfig, TimedChordEvent};
use chordgen_core::{Mode, Result, Scale, TransitionTable};

/// Timed events for the first `count` progressions of length `len` in C major,
/// concatenated into one long stream.
pub fn midi_workload(len: usize, count: usize) -> Result<(Vec<TimedChordEvent>, PlaybackConfig)> {
    let config = PlaybackConfig::default();
    let scale = Scale::from_id("C-major")?;
    let mut keys = Vec::new();
    for p in TransitionTable::default_for(Mode::Major)
        .progressions(len)
        .take(count)
    {
        for t in &p.tokens {
            keys.push(scale.chord(*t)?.notes);
        }
    }
    let events = timed_events(&music_notes(&keys, &config)?, &config)?;
    Ok((events, config))
}
