//! Chord progressions to timed MIDI notes and Standard MIDI Files.

use std::io::Write;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pitch::{Pitch, SpelledPitchClass};

pub const TICKS_PER_QUARTER: u16 = 480;
pub const NOTE_VELOCITY: u8 = 80;
pub const MIN_TEMPO_BPM: u16 = 20;
pub const MAX_TEMPO_BPM: u16 = 300;
pub const DEFAULT_TEMPO_BPM: u16 = 120;
pub const MIN_OCTAVE: i8 = 1;
pub const MAX_OCTAVE: i8 = 9;
pub const DEFAULT_OCTAVE: i8 = 4;

pub type Beats = Ratio<u32>;

/// How the three notes of a triad are assigned octaves.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Voicing {
    /// Root at the chosen octave; upper notes that pass B move up one
    /// octave so the triad always ascends (A4, C5, E5).
    #[default]
    Ascending,
    /// Every note at the chosen octave (A4, C4, E4).
    SameOctave,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PlaybackConfig {
    pub tempo_bpm: u16,
    pub octave: i8,
    pub chord_duration_beats: Beats,
    pub voicing: Voicing,
}

impl Default for PlaybackConfig {
    fn default() -> Self {
        Self {
            tempo_bpm: DEFAULT_TEMPO_BPM,
            octave: DEFAULT_OCTAVE,
            chord_duration_beats: Beats::from_integer(1),
            voicing: Voicing::default(),
        }
    }
}

impl PlaybackConfig {
    pub fn new(tempo_bpm: u16, octave: i8) -> Result<Self> {
        let config = Self {
            tempo_bpm,
            octave,
            ..Self::default()
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if !(MIN_TEMPO_BPM..=MAX_TEMPO_BPM).contains(&self.tempo_bpm) {
            return Err(Error::InvalidConfig(format!(
                "tempo {} outside {MIN_TEMPO_BPM}..={MAX_TEMPO_BPM} BPM",
                self.tempo_bpm
            )));
        }
        if !(MIN_OCTAVE..=MAX_OCTAVE).contains(&self.octave) {
            return Err(Error::InvalidConfig(format!(
                "octave {} outside {MIN_OCTAVE}..={MAX_OCTAVE}",
                self.octave
            )));
        }
        let ticks = self.chord_duration_beats * TICKS_PER_QUARTER as u32;
        if *self.chord_duration_beats.numer() == 0 || !ticks.is_integer() {
            return Err(Error::InvalidConfig(format!(
                "chord duration {} beats is not a positive whole number of ticks",
                self.chord_duration_beats
            )));
        }
        Ok(())
    }

    pub fn seconds_per_beat(&self) -> Ratio<u64> {
        Ratio::new(60, self.tempo_bpm as u64)
    }

    /// Wall-clock length of `chords` chords played back to back.
    pub fn total_seconds(&self, chords: usize) -> Ratio<u64> {
        let beats = Ratio::new(
            *self.chord_duration_beats.numer() as u64,
            *self.chord_duration_beats.denom() as u64,
        );
        beats * chords as u64 * self.seconds_per_beat()
    }

    /// Tempo meta value, rounded to the nearest microsecond.
    pub fn microseconds_per_quarter(&self) -> u32 {
        let bpm = self.tempo_bpm as u32;
        (60_000_000 + bpm / 2) / bpm
    }
}

/// Attach octaves to each spelled triad.
pub fn music_notes(
    chords: &[[SpelledPitchClass; 3]],
    config: &PlaybackConfig,
) -> Result<Vec<[Pitch; 3]>> {
    config.validate()?;
    chords
        .iter()
        .map(|chord| {
            let root = chord[0];
            let place = |note: SpelledPitchClass| -> Result<Pitch> {
                let octave = match config.voicing {
                    Voicing::Ascending if note.letter() < root.letter() => config.octave + 1,
                    _ => config.octave,
                };
                let pitch = note.with_octave(octave);
                pitch.to_midi()?;
                Ok(pitch)
            };
            Ok([place(chord[0])?, place(chord[1])?, place(chord[2])?])
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TimedChordEvent {
    pub midi_notes: [u8; 3],
    pub start_beat: Beats,
    pub duration_beats: Beats,
}

/// Lay chords end to end, chord `i` starting at `i * duration`.
pub fn timed_events(
    chords: &[[Pitch; 3]],
    config: &PlaybackConfig,
) -> Result<Vec<TimedChordEvent>> {
    let duration = config.chord_duration_beats;
    chords
        .iter()
        .enumerate()
        .map(|(i, chord)| {
            Ok(TimedChordEvent {
                midi_notes: [
                    chord[0].to_midi()?,
                    chord[1].to_midi()?,
                    chord[2].to_midi()?,
                ],
                start_beat: duration * i as u32,
                duration_beats: duration,
            })
        })
        .collect()
}

fn beats_to_ticks(beats: Beats) -> u32 {
    (beats * TICKS_PER_QUARTER as u32).to_integer()
}

fn write_vlq(out: &mut Vec<u8>, mut value: u32) {
    let mut stack = [0u8; 5];
    let mut n = 0;
    loop {
        stack[n] = (value & 0x7f) as u8;
        n += 1;
        value >>= 7;
        if value == 0 {
            break;
        }
    }
    for i in (0..n).rev() {
        out.push(if i > 0 { stack[i] | 0x80 } else { stack[i] });
    }
}

/// Encode a format-0 Standard MIDI File: one tempo meta event, the chords as
/// note-on/note-off pairs on channel 1, then end-of-track.
pub fn smf_bytes(events: &[TimedChordEvent], config: &PlaybackConfig) -> Result<Vec<u8>> {
    config.validate()?;
    // (tick, note-offs before note-ons at the same tick, status, key, velocity)
    let mut messages: Vec<(u32, u8, u8, u8, u8)> = Vec::with_capacity(events.len() * 6);
    for event in events {
        let start = beats_to_ticks(event.start_beat);
        let end = start + beats_to_ticks(event.duration_beats);
        for &note in &event.midi_notes {
            messages.push((start, 1, 0x90, note, NOTE_VELOCITY));
            messages.push((end, 0, 0x80, note, 0));
        }
    }
    messages.sort_by_key(|m| (m.0, m.1));

    let mut track = Vec::with_capacity(messages.len() * 4 + 16);
    let tempo = config.microseconds_per_quarter();
    track.extend_from_slice(&[0x00, 0xff, 0x51, 0x03]);
    track.extend_from_slice(&tempo.to_be_bytes()[1..]);
    let mut last_tick = 0;
    for (tick, _, status, key, velocity) in messages {
        write_vlq(&mut track, tick - last_tick);
        track.extend_from_slice(&[status, key, velocity]);
        last_tick = tick;
    }
    track.extend_from_slice(&[0x00, 0xff, 0x2f, 0x00]);

    let mut out = Vec::with_capacity(track.len() + 22);
    out.extend_from_slice(b"MThd");
    out.extend_from_slice(&6u32.to_be_bytes());
    out.extend_from_slice(&0u16.to_be_bytes());
    out.extend_from_slice(&1u16.to_be_bytes());
    out.extend_from_slice(&TICKS_PER_QUARTER.to_be_bytes());
    out.extend_from_slice(b"MTrk");
    out.extend_from_slice(&(track.len() as u32).to_be_bytes());
    out.extend_from_slice(&track);
    Ok(out)
}

/// Write the SMF to `sink`; returns the number of bytes written.
pub fn write_smf<W: Write>(
    events: &[TimedChordEvent],
    config: &PlaybackConfig,
    mut sink: W,
) -> Result<usize> {
    let bytes = smf_bytes(events, config)?;
    sink.write_all(&bytes)?;
    sink.flush()?;
    Ok(bytes.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triads(spec: &[[&str; 3]]) -> Vec<[SpelledPitchClass; 3]> {
        spec.iter()
            .map(|c| {
                [
                    c[0].parse().unwrap(),
                    c[1].parse().unwrap(),
                    c[2].parse().unwrap(),
                ]
            })
            .collect()
    }

    fn names(chords: &[[Pitch; 3]]) -> Vec<[String; 3]> {
        chords.iter().map(|c| c.map(|p| p.to_string())).collect()
    }

    #[test]
    fn ascending_placement() {
        let chords = triads(&[
            ["C", "E", "G"],
            ["G", "B", "D"],
            ["A", "C", "E"],
            ["F", "A", "C"],
        ]);
        let notes = music_notes(&chords, &PlaybackConfig::default()).unwrap();
        assert_eq!(
            names(&notes),
            [
                ["C4", "E4", "G4"],
                ["G4", "B4", "D5"],
                ["A4", "C5", "E5"],
                ["F4", "A4", "C5"]
            ]
        );
        let midi: Vec<u8> = notes[0].iter().map(|p| p.to_midi().unwrap()).collect();
        assert_eq!(midi, [60, 64, 67]);
    }

    #[test]
    fn same_octave_placement() {
        let chords = triads(&[["A", "C", "E"]]);
        let config = PlaybackConfig {
            voicing: Voicing::SameOctave,
            ..PlaybackConfig::default()
        };
        assert_eq!(
            names(&music_notes(&chords, &config).unwrap()),
            [["A4", "C4", "E4"]]
        );
    }

    #[test]
    fn octave_nine_ceiling() {
        let top = PlaybackConfig::new(120, 9).unwrap();
        assert!(music_notes(&triads(&[["C", "E", "G"]]), &top).is_ok());
        assert!(matches!(
            music_notes(&triads(&[["A", "C", "E"]]), &top),
            Err(Error::OutOfMidiRange(_))
        ));
        assert!(matches!(
            music_notes(&triads(&[["G#", "B#", "D#"]]), &top),
            Err(Error::OutOfMidiRange(128))
        ));
    }

    #[test]
    fn config_bounds() {
        assert!(PlaybackConfig::new(20, 1).is_ok());
        assert!(PlaybackConfig::new(300, 9).is_ok());
        assert!(PlaybackConfig::new(19, 4).is_err());
        assert!(PlaybackConfig::new(301, 4).is_err());
        assert!(PlaybackConfig::new(120, 0).is_err());
        assert!(PlaybackConfig::new(120, 10).is_err());
        let odd = PlaybackConfig {
            chord_duration_beats: Beats::new(1, 7),
            ..PlaybackConfig::default()
        };
        assert!(odd.validate().is_err());
        let triplet = PlaybackConfig {
            chord_duration_beats: Beats::new(1, 3),
            ..PlaybackConfig::default()
        };
        assert!(triplet.validate().is_ok());
    }

    #[test]
    fn sequential_layout_and_timing() {
        let config = PlaybackConfig::default();
        let chords = music_notes(&triads(&[["C", "E", "G"]; 4]), &config).unwrap();
        let events = timed_events(&chords, &config).unwrap();
        let starts: Vec<Beats> = events.iter().map(|e| e.start_beat).collect();
        assert_eq!(starts, [0, 1, 2, 3].map(Beats::from_integer));
        assert_eq!(config.seconds_per_beat(), Ratio::new(1, 2));
        assert_eq!(config.total_seconds(4), Ratio::from_integer(2));
        let single = timed_events(&chords[..1], &config).unwrap();
        assert_eq!(single.len(), 1);
        assert_eq!(single[0].start_beat, Beats::from_integer(0));
    }

    #[test]
    fn tempo_meta_value() {
        assert_eq!(
            PlaybackConfig::default().microseconds_per_quarter(),
            500_000
        );
        assert_eq!(
            PlaybackConfig::new(20, 4)
                .unwrap()
                .microseconds_per_quarter(),
            3_000_000
        );
        // 545454.54.. rounds to nearest
        assert_eq!(
            PlaybackConfig::new(110, 4)
                .unwrap()
                .microseconds_per_quarter(),
            545_455
        );
    }

    #[test]
    fn empty_file_layout() {
        let bytes = smf_bytes(&[], &PlaybackConfig::default()).unwrap();
        let expected: Vec<u8> = [
            &b"MThd"[..],
            &[0, 0, 0, 6, 0, 0, 0, 1, 0x01, 0xe0],
            b"MTrk",
            &[0, 0, 0, 11],
            &[0x00, 0xff, 0x51, 0x03, 0x07, 0xa1, 0x20],
            &[0x00, 0xff, 0x2f, 0x00],
        ]
        .concat();
        assert_eq!(bytes, expected);
    }

    #[test]
    fn vlq_encoding() {
        let enc = |v| {
            let mut out = Vec::new();
            write_vlq(&mut out, v);
            out
        };
        assert_eq!(enc(0), [0x00]);
        assert_eq!(enc(0x7f), [0x7f]);
        assert_eq!(enc(480), [0x83, 0x60]);
        assert_eq!(enc(0x0fff_ffff), [0xff, 0xff, 0xff, 0x7f]);
    }
}
