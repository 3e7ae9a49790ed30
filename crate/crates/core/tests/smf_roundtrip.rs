//! Emitted SMF bytes re-read with `midly`.

use chordgen_core::midi::{
    music_notes, smf_bytes, timed_events, write_smf, PlaybackConfig, TICKS_PER_QUARTER,
};
use chordgen_core::{Mode, NumericProgression, Scale};
use midly::{MetaMessage, MidiMessage, Smf, Timing, TrackEventKind};

/// (key, start tick, duration ticks) for every note in the file.
fn notes_in(bytes: &[u8]) -> (u32, Vec<(u8, u32, u32)>) {
    let smf = Smf::parse(bytes).expect("valid SMF");
    assert_eq!(smf.header.format, midly::Format::SingleTrack);
    assert_eq!(
        smf.header.timing,
        Timing::Metrical(TICKS_PER_QUARTER.into())
    );
    assert_eq!(smf.tracks.len(), 1);
    let mut tempo = None;
    let mut open: Vec<(u8, u32)> = Vec::new();
    let mut done = Vec::new();
    let mut tick = 0u32;
    let mut ended = false;
    for event in &smf.tracks[0] {
        tick += u32::from(event.delta);
        match event.kind {
            TrackEventKind::Meta(MetaMessage::Tempo(t)) => tempo = Some(u32::from(t)),
            TrackEventKind::Meta(MetaMessage::EndOfTrack) => ended = true,
            TrackEventKind::Midi { message, .. } => match message {
                MidiMessage::NoteOn { key, vel } if u8::from(vel) > 0 => {
                    assert_eq!(u8::from(vel), 80);
                    open.push((key.into(), tick));
                }
                MidiMessage::NoteOff { key, .. } | MidiMessage::NoteOn { key, .. } => {
                    let i = open
                        .iter()
                        .position(|(k, _)| *k == u8::from(key))
                        .expect("note was on");
                    let (k, start) = open.remove(i);
                    done.push((k, start, tick - start));
                }
                _ => {}
            },
            _ => {}
        }
    }
    assert!(ended);
    assert!(open.is_empty());
    done.sort();
    (tempo.expect("tempo event"), done)
}

#[test]
fn c_major_one_five_six_four() {
    let scale = Scale::from_id("C-major").unwrap();
    let numbers = NumericProgression::parse("1,5,6,4", Mode::Major).unwrap();
    let keys: Vec<_> = numbers
        .tokens
        .iter()
        .map(|t| scale.chord(*t).unwrap().notes)
        .collect();
    let config = PlaybackConfig::new(120, 4).unwrap();
    let events = timed_events(&music_notes(&keys, &config).unwrap(), &config).unwrap();
    let mut sink = Vec::new();
    let written = write_smf(&events, &config, &mut sink).unwrap();
    assert_eq!(written, sink.len());

    let (tempo, notes) = notes_in(&sink);
    assert_eq!(tempo, 500_000);
    let mut expected: Vec<(u8, u32, u32)> = events
        .iter()
        .flat_map(|e| {
            let start = (e.start_beat * 480).to_integer();
            let dur = (e.duration_beats * 480).to_integer();
            e.midi_notes.map(|k| (k, start, dur))
        })
        .collect();
    expected.sort();
    assert_eq!(notes, expected);
    assert_eq!(events[0].midi_notes, [60, 64, 67]);
    assert_eq!(events[2].midi_notes, [69, 72, 76]);
}

#[test]
fn empty_file_parses() {
    let bytes = smf_bytes(&[], &PlaybackConfig::default()).unwrap();
    let (tempo, notes) = notes_in(&bytes);
    assert_eq!(tempo, 500_000);
    assert!(notes.is_empty());
}

#[test]
fn every_tempo_and_repeated_notes_round_trip() {
    // 1,1,1,1 repeats the same keys back to back
    let scale = Scale::from_id("Gb-major").unwrap();
    let numbers = NumericProgression::parse("1,1,1,1", Mode::Major).unwrap();
    let keys: Vec<_> = numbers
        .tokens
        .iter()
        .map(|t| scale.chord(*t).unwrap().notes)
        .collect();
    for bpm in [20, 97, 120, 233, 300] {
        let config = PlaybackConfig::new(bpm, 3).unwrap();
        let events = timed_events(&music_notes(&keys, &config).unwrap(), &config).unwrap();
        let (tempo, notes) = notes_in(&smf_bytes(&events, &config).unwrap());
        assert_eq!(tempo, config.microseconds_per_quarter());
        assert_eq!(notes.len(), 12);
        assert!(notes.iter().all(|n| n.2 == 480));
    }
}
