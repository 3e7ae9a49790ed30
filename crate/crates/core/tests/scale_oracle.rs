//! Every scale and triad rebuilt from cumulative interval sums.

use chordgen_core::pitch::spell_on_letter;
use chordgen_core::{
    all_scales, ChordQuality, DegreeToken, Letter, Mode, Scale, SpelledPitchClass,
};

fn pattern(mode: Mode) -> [u8; 7] {
    match mode {
        Mode::Major => [2, 2, 1, 2, 2, 2, 1],
        Mode::Minor => [2, 1, 2, 2, 1, 2, 2],
    }
}

/// Note on 0-based degree `d`, counted from the tonic by summing steps.
fn oracle_degree(tonic: SpelledPitchClass, mode: Mode, d: usize) -> SpelledPitchClass {
    let offset: u32 = pattern(mode)
        .iter()
        .cycle()
        .take(d)
        .map(|s| *s as u32)
        .sum();
    let pc = ((tonic.pitch_class() as u32 + offset) % 12) as u8;
    let letter = Letter::from_index(tonic.letter().index() + d);
    spell_on_letter(pc, letter).expect("oracle spelling")
}

#[test]
fn all_scales_match_interval_oracle() {
    let scales = all_scales();
    assert_eq!(scales.len(), 42);
    for scale in &scales {
        for d in 0..7 {
            assert_eq!(
                scale.degrees()[d],
                oracle_degree(scale.tonic(), scale.mode(), d),
                "{scale} degree {}",
                d + 1
            );
        }
    }
}

#[test]
fn letter_cycle_and_octave_closure() {
    for scale in all_scales() {
        let letters: Vec<usize> = scale.degrees().iter().map(|n| n.letter().index()).collect();
        for (i, l) in letters.iter().enumerate() {
            assert_eq!(*l, (letters[0] + i) % 7, "{scale}");
        }
        let pcs: Vec<i32> = scale
            .degrees()
            .iter()
            .map(|n| n.pitch_class() as i32)
            .collect();
        let mut steps: Vec<i32> = pcs
            .windows(2)
            .map(|w| (w[1] - w[0]).rem_euclid(12))
            .collect();
        steps.push((pcs[0] - pcs[6]).rem_euclid(12));
        let expected: Vec<i32> = pattern(scale.mode()).iter().map(|s| *s as i32).collect();
        assert_eq!(steps, expected, "{scale}");
        assert_eq!(steps.iter().sum::<i32>(), 12);
    }
}

#[test]
fn g_sharp_major_contains_f_double_sharp() {
    let g = Scale::from_id("G#-major").unwrap();
    let names: Vec<String> = g.degrees().iter().map(|n| n.to_string()).collect();
    assert_eq!(names, ["G#", "A#", "B#", "C#", "D#", "E#", "F##"]);
}

#[test]
fn quality_by_degree() {
    use ChordQuality::*;
    for scale in all_scales() {
        let qualities: Vec<ChordQuality> = scale.chords().iter().map(|c| c.quality).collect();
        match scale.mode() {
            Mode::Major => assert_eq!(
                qualities,
                [Major, Minor, Minor, Major, Major, Minor, Diminished],
                "{scale}"
            ),
            // tokens 1..6, 7 (vii°), 8 (7Maj)
            Mode::Minor => assert_eq!(
                qualities,
                [Minor, Diminished, Major, Minor, Minor, Major, Diminished, Major],
                "{scale}"
            ),
        }
    }
}

#[test]
fn triads_match_cumulative_interval_oracle() {
    for scale in all_scales() {
        for token in scale.mode().tokens() {
            let chord = scale.chord(token).unwrap();
            let d = match (scale.mode(), token.get()) {
                // literal vii° in minor is not built from scale notes
                (Mode::Minor, 7) => continue,
                (_, 8) => 6,
                (_, n) => n as usize - 1,
            };
            let expected: Vec<SpelledPitchClass> = [d, d + 2, d + 4]
                .iter()
                .map(|&k| oracle_degree(scale.tonic(), scale.mode(), k))
                .collect();
            assert_eq!(chord.notes.to_vec(), expected, "{scale} token {token}");
        }
    }
}

#[test]
fn stacked_intervals_match_quality() {
    for scale in all_scales() {
        for chord in scale.chords() {
            let pcs: Vec<i32> = chord.notes.iter().map(|n| n.pitch_class() as i32).collect();
            let lower = (pcs[1] - pcs[0]).rem_euclid(12);
            let upper = (pcs[2] - pcs[1]).rem_euclid(12);
            let (a, b) = chord.quality.thirds();
            assert_eq!(
                (lower, upper),
                (a.half_steps(), b.half_steps()),
                "{scale} {}",
                chord.symbol()
            );
            assert!(lower + upper == 6 || lower + upper == 7);
            let letters: Vec<usize> = chord.notes.iter().map(|n| n.letter().index()).collect();
            assert_eq!(letters[1], (letters[0] + 2) % 7);
            assert_eq!(letters[2], (letters[0] + 4) % 7);
        }
    }
}

#[test]
fn minor_diminished_root_is_the_natural_seventh() {
    for scale in all_scales().into_iter().filter(|s| s.mode() == Mode::Minor) {
        let chord = scale
            .chord(DegreeToken::new(7, Mode::Minor).unwrap())
            .unwrap();
        assert_eq!(
            chord.root.pitch_class(),
            scale.degree(7).pitch_class(),
            "{scale}"
        );
        if scale.id() != "Fb-minor" {
            assert_eq!(chord.root, scale.degree(7), "{scale}");
        }
    }
}
