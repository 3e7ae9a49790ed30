//! Letter/accidental pitch model.
//!
//! Spellings render as the letter followed by `#`, `##`, `b` or `bb`, and
//! pitches append the scientific-pitch-notation octave (`C#4`, `Fbb`, `Cb4`).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub const MAX_ACCIDENTAL: i8 = 2;
pub const MIN_OCTAVE: i8 = -1;
pub const MAX_OCTAVE: i8 = 9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    C,
    D,
    E,
    F,
    G,
    A,
    B,
}

impl Letter {
    pub const ALL: [Letter; 7] = [
        Letter::C,
        Letter::D,
        Letter::E,
        Letter::F,
        Letter::G,
        Letter::A,
        Letter::B,
    ];

    /// Position in the C-based letter cycle, C = 0 .. B = 6.
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(index: usize) -> Letter {
        Self::ALL[index % 7]
    }

    /// Semitone of the natural letter above C.
    pub fn base_semitone(self) -> u8 {
        match self {
            Letter::C => 0,
            Letter::D => 2,
            Letter::E => 4,
            Letter::F => 5,
            Letter::G => 7,
            Letter::A => 9,
            Letter::B => 11,
        }
    }

    /// The letter `steps` positions further along the cycle.
    pub fn step(self, steps: usize) -> Letter {
        Letter::from_index(self.index() + steps)
    }

    pub fn as_char(self) -> char {
        match self {
            Letter::C => 'C',
            Letter::D => 'D',
            Letter::E => 'E',
            Letter::F => 'F',
            Letter::G => 'G',
            Letter::A => 'A',
            Letter::B => 'B',
        }
    }

    pub fn from_char(c: char) -> Option<Letter> {
        Some(match c.to_ascii_uppercase() {
            'C' => Letter::C,
            'D' => Letter::D,
            'E' => Letter::E,
            'F' => Letter::F,
            'G' => Letter::G,
            'A' => Letter::A,
            'B' => Letter::B,
            _ => return None,
        })
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// A note name without octave: letter plus an accidental in `-2..=2` half steps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SpelledPitchClass {
    letter: Letter,
    accidental: i8,
}

impl SpelledPitchClass {
    pub fn new(letter: Letter, accidental: i8) -> Result<Self> {
        if accidental.abs() > MAX_ACCIDENTAL {
            return Err(Error::UnspellableNote {
                letter: letter.as_char(),
                pitch_class: (letter.base_semitone() as i32 + accidental as i32).rem_euclid(12)
                    as u8,
            });
        }
        Ok(Self { letter, accidental })
    }

    pub const fn natural(letter: Letter) -> Self {
        Self {
            letter,
            accidental: 0,
        }
    }

    pub fn letter(self) -> Letter {
        self.letter
    }

    pub fn accidental(self) -> i8 {
        self.accidental
    }

    pub fn pitch_class(self) -> u8 {
        (self.letter.base_semitone() as i32 + self.accidental as i32).rem_euclid(12) as u8
    }

    /// Same sounding pitch class, regardless of spelling.
    pub fn enharmonic_eq(self, other: SpelledPitchClass) -> bool {
        self.pitch_class() == other.pitch_class()
    }

    /// Spell the note `half_steps` above `self` on `target` letter.
    pub fn transpose(self, half_steps: i32, target: Letter) -> Result<Self> {
        let pitch_class = (self.pitch_class() as i32 + half_steps).rem_euclid(12) as u8;
        spell_on_letter(pitch_class, target)
    }

    pub fn with_octave(self, octave: i8) -> Pitch {
        Pitch {
            spelled: self,
            octave,
        }
    }
}

/// Spell `pitch_class` using `letter`, choosing the accidental closest to zero.
pub fn spell_on_letter(pitch_class: u8, letter: Letter) -> Result<SpelledPitchClass> {
    let mut accidental = (pitch_class as i32 - letter.base_semitone() as i32).rem_euclid(12);
    if accidental > 6 {
        accidental -= 12;
    }
    if accidental.abs() > MAX_ACCIDENTAL as i32 {
        return Err(Error::UnspellableNote {
            letter: letter.as_char(),
            pitch_class: pitch_class % 12,
        });
    }
    Ok(SpelledPitchClass {
        letter,
        accidental: accidental as i8,
    })
}

fn accidental_str(accidental: i8) -> &'static str {
    match accidental {
        -2 => "bb",
        -1 => "b",
        0 => "",
        1 => "#",
        2 => "##",
        _ => unreachable!("accidental out of range"),
    }
}

/// Split `s` into a spelling and the unparsed remainder.
fn parse_spelling_prefix(s: &str) -> Option<(SpelledPitchClass, &str)> {
    let mut chars = s.char_indices();
    let (_, first) = chars.next()?;
    let letter = Letter::from_char(first)?;
    let mut accidental = 0i8;
    let mut rest = &s[first.len_utf8()..];
    let (mut sharps, mut flats) = (0i8, 0i8);
    loop {
        if let Some(r) = rest.strip_prefix('#').or_else(|| rest.strip_prefix('♯')) {
            sharps += 1;
            rest = r;
        } else if let Some(r) = rest.strip_prefix('b').or_else(|| rest.strip_prefix('♭')) {
            flats += 1;
            rest = r;
        } else {
            break;
        }
    }
    if (sharps > 0 && flats > 0) || sharps.max(flats) > MAX_ACCIDENTAL {
        return None;
    }
    accidental += sharps - flats;
    Some((SpelledPitchClass { letter, accidental }, rest))
}

impl fmt::Display for SpelledPitchClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.letter, accidental_str(self.accidental))
    }
}

impl FromStr for SpelledPitchClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match parse_spelling_prefix(s.trim()) {
            Some((spelled, "")) => Ok(spelled),
            _ => Err(Error::InvalidSpelling(s.to_string())),
        }
    }
}

impl Serialize for SpelledPitchClass {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for SpelledPitchClass {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A spelled note with a scientific-pitch-notation octave.
///
/// The octave belongs to the letter, so `Cb4` sits a half step below `C4`
/// and `B#3` sounds the same as `C4`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Pitch {
    pub spelled: SpelledPitchClass,
    pub octave: i8,
}

impl Pitch {
    /// MIDI note number, `C4` = 60.
    pub fn to_midi(self) -> Result<u8> {
        let midi = 12 * (self.octave as i32 + 1)
            + self.spelled.letter.base_semitone() as i32
            + self.spelled.accidental as i32;
        if (0..=127).contains(&midi) {
            Ok(midi as u8)
        } else {
            Err(Error::OutOfMidiRange(midi))
        }
    }
}

impl fmt::Display for Pitch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.spelled, self.octave)
    }
}

impl FromStr for Pitch {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let invalid = || Error::InvalidSpelling(s.to_string());
        let (spelled, rest) = parse_spelling_prefix(s.trim()).ok_or_else(invalid)?;
        let octave: i8 = rest.parse().map_err(|_| invalid())?;
        if !(MIN_OCTAVE..=MAX_OCTAVE).contains(&octave) {
            return Err(invalid());
        }
        Ok(Pitch { spelled, octave })
    }
}

impl Serialize for Pitch {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Interval {
    HalfStep,
    WholeStep,
    MinorThird,
    MajorThird,
    DiminishedFifth,
    PerfectFifth,
}

impl Interval {
    pub fn half_steps(self) -> i32 {
        match self {
            Interval::HalfStep => 1,
            Interval::WholeStep => 2,
            Interval::MinorThird => 3,
            Interval::MajorThird => 4,
            Interval::DiminishedFifth => 6,
            Interval::PerfectFifth => 7,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp(s: &str) -> SpelledPitchClass {
        s.parse().unwrap()
    }

    #[test]
    fn pitch_class_values() {
        assert_eq!(sp("C").pitch_class(), 0);
        assert_eq!(sp("Cb").pitch_class(), 11);
        assert_eq!(sp("B").pitch_class(), 11);
        assert!(sp("Cb").enharmonic_eq(sp("B")));
        assert_ne!(sp("Cb"), sp("B"));
        assert_eq!(sp("F##").pitch_class(), 7);
        assert_eq!(sp("F##").pitch_class(), sp("G").pitch_class());
    }

    #[test]
    fn all_35_spellings_match_semitone_arithmetic() {
        // Semitones counted by walking the keyboard from C.
        let keyboard = [
            "C", "C#", "D", "D#", "E", "F", "F#", "G", "G#", "A", "A#", "B",
        ];
        for letter in Letter::ALL {
            let natural = keyboard
                .iter()
                .position(|k| *k == letter.to_string())
                .unwrap() as i32;
            for acc in -2..=2i8 {
                let s = SpelledPitchClass::new(letter, acc).unwrap();
                assert_eq!(
                    s.pitch_class() as i32,
                    (natural + acc as i32).rem_euclid(12),
                    "{s}"
                );
            }
        }
    }

    #[test]
    fn midi_numbers() {
        let p = |s: &str| s.parse::<Pitch>().unwrap().to_midi().unwrap();
        assert_eq!(p("C4"), 60);
        assert_eq!(p("A4"), 12 * 5 + 9);
        assert_eq!(p("Cb4"), 59);
        assert_eq!(p("B#3"), 60);
        assert_eq!(p("C-1"), 0);
        assert_eq!(p("G9"), 127);
        assert!(matches!(
            "G#9".parse::<Pitch>().unwrap().to_midi(),
            Err(Error::OutOfMidiRange(128))
        ));
        assert!(matches!(
            "Cb-1".parse::<Pitch>().unwrap().to_midi(),
            Err(Error::OutOfMidiRange(-1))
        ));
    }

    #[test]
    fn transpose_lands_on_target_letter() {
        assert_eq!(sp("C").transpose(4, Letter::E).unwrap(), sp("E"));
        assert_eq!(sp("Eb").transpose(0, Letter::E).unwrap(), sp("Eb"));
        assert_eq!(sp("E#").transpose(4, Letter::G).unwrap(), sp("G##"));
        assert!(matches!(
            sp("C").transpose(8, Letter::F),
            Err(Error::UnspellableNote { letter: 'F', .. })
        ));
    }

    #[test]
    fn text_grammar() {
        for s in ["C", "C#", "C##", "Cb", "Cbb", "F#"] {
            assert_eq!(sp(s).to_string(), s);
        }
        assert_eq!(sp("C♯").to_string(), "C#");
        assert_eq!("Fbb3".parse::<Pitch>().unwrap().to_string(), "Fbb3");
        for bad in ["", "H", "C###", "Cbbb", "C#b", "C4", "c x"] {
            assert!(bad.parse::<SpelledPitchClass>().is_err(), "{bad}");
        }
        assert!("C10".parse::<Pitch>().is_err());
        assert!("C".parse::<Pitch>().is_err());
    }

    #[test]
    fn interval_sizes() {
        assert_eq!(Interval::MajorThird.half_steps(), 4);
        assert_eq!(Interval::PerfectFifth.half_steps(), 7);
        assert_eq!(Interval::MinorThird.half_steps(), 3);
        assert_eq!(Interval::DiminishedFifth.half_steps(), 6);
        assert_eq!(Interval::HalfStep.half_steps(), 1);
        assert_eq!(Interval::WholeStep.half_steps(), 2);
    }
}
