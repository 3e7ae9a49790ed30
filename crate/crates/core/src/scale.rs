//! Ionian and Aeolian scales over the 21 natural/sharp/flat tonics, and the
//! triads built on their degrees.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pitch::{spell_on_letter, Interval, Letter, SpelledPitchClass, MAX_ACCIDENTAL};
use crate::progression::DegreeToken;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Ionian.
    Major,
    /// Aeolian (natural minor).
    Minor,
}

impl Mode {
    pub const ALL: [Mode; 2] = [Mode::Major, Mode::Minor];

    /// Half steps between consecutive degrees, the last one closing the octave.
    pub fn steps(self) -> [i32; 7] {
        match self {
            Mode::Major => [2, 2, 1, 2, 2, 2, 1],
            Mode::Minor => [2, 1, 2, 2, 1, 2, 2],
        }
    }

    /// Highest degree token; minor adds token 8 (`7Maj`).
    pub fn max_token(self) -> u8 {
        match self {
            Mode::Major => 7,
            Mode::Minor => 8,
        }
    }

    pub fn tokens(self) -> impl Iterator<Item = DegreeToken> {
        (1..=self.max_token()).map(DegreeToken::new_unchecked)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Major => "major",
            Mode::Minor => "minor",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "major" | "ionian" => Ok(Mode::Major),
            "minor" | "aeolian" => Ok(Mode::Minor),
            _ => Err(Error::UnknownScale(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChordQuality {
    Major,
    Minor,
    Diminished,
}

impl ChordQuality {
    /// The two stacked thirds, root to third and third to fifth.
    pub fn thirds(self) -> (Interval, Interval) {
        match self {
            ChordQuality::Major => (Interval::MajorThird, Interval::MinorThird),
            ChordQuality::Minor => (Interval::MinorThird, Interval::MajorThird),
            ChordQuality::Diminished => (Interval::MinorThird, Interval::MinorThird),
        }
    }

    pub fn from_thirds(lower: i32, upper: i32) -> Option<ChordQuality> {
        match (lower, upper) {
            (4, 3) => Some(ChordQuality::Major),
            (3, 4) => Some(ChordQuality::Minor),
            (3, 3) => Some(ChordQuality::Diminished),
            _ => None,
        }
    }

    pub fn suffix(self) -> &'static str {
        match self {
            ChordQuality::Major => "",
            ChordQuality::Minor => "m",
            ChordQuality::Diminished => "dim",
        }
    }
}

/// Where the minor-mode diminished chord (token 7, vii°) is rooted.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MinorDiminishedRoot {
    /// On the natural 7th degree itself (G–Bb–Db in A minor).
    #[default]
    Natural,
    /// On the raised leading tone (G#–B–D in A minor).
    RaisedLeadingTone,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Scale {
    tonic: SpelledPitchClass,
    mode: Mode,
    degrees: [SpelledPitchClass; 7],
}

impl Scale {
    /// Build a scale by walking the mode's step pattern one letter at a time.
    pub fn new(tonic: SpelledPitchClass, mode: Mode) -> Result<Scale> {
        let mut degrees = [tonic; 7];
        for i in 1..7 {
            let prev = degrees[i - 1];
            degrees[i] = prev.transpose(mode.steps()[i - 1], prev.letter().step(1))?;
        }
        Ok(Scale {
            tonic,
            mode,
            degrees,
        })
    }

    /// Look up one of the 42 canonical scales by id, e.g. `C#-major`.
    pub fn from_id(id: &str) -> Result<Scale> {
        let unknown = || Error::UnknownScale(id.to_string());
        let (tonic, mode) = id.trim().rsplit_once('-').ok_or_else(unknown)?;
        let tonic: SpelledPitchClass = tonic.parse().map_err(|_| unknown())?;
        let mode: Mode = mode.parse().map_err(|_| unknown())?;
        if tonic.accidental().abs() > 1 {
            return Err(unknown());
        }
        Scale::new(tonic, mode)
    }

    pub fn tonic(&self) -> SpelledPitchClass {
        self.tonic
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn degrees(&self) -> &[SpelledPitchClass; 7] {
        &self.degrees
    }

    /// Note on 1-based scale degree `n` (wrapping past 7).
    pub fn degree(&self, n: usize) -> SpelledPitchClass {
        self.degrees[(n - 1) % 7]
    }

    /// Identifier in the `<spelling>-<mode>` form, e.g. `A-minor`.
    pub fn id(&self) -> String {
        format!("{}-{}", self.tonic, self.mode)
    }

    pub fn chord(&self, token: DegreeToken) -> Result<DiatonicChord> {
        self.chord_with(token, MinorDiminishedRoot::default())
    }

    pub fn chord_with(
        &self,
        token: DegreeToken,
        dim: MinorDiminishedRoot,
    ) -> Result<DiatonicChord> {
        if token.get() < 1 || token.get() > self.mode.max_token() {
            return Err(Error::InvalidDegreeToken {
                token: token.to_string(),
                mode: self.mode.as_str(),
            });
        }
        self.chord_any_mode(token, dim)
    }

    /// Like [`Scale::chord_with`] but also accepts `7Maj` on a major scale,
    /// where it becomes the major triad on the 7th degree (B–D#–F# in C).
    ///
    /// Used when a minor progression is replayed on a major alternate scale.
    pub fn chord_any_mode(
        &self,
        token: DegreeToken,
        dim: MinorDiminishedRoot,
    ) -> Result<DiatonicChord> {
        let id = token.get();
        if !(1..=8).contains(&id) {
            return Err(Error::InvalidDegreeToken {
                token: token.to_string(),
                mode: self.mode.as_str(),
            });
        }
        let seventh = self.degrees[6];
        if self.mode == Mode::Minor && id == 7 {
            let root_pc = match dim {
                MinorDiminishedRoot::Natural => seventh.pitch_class(),
                MinorDiminishedRoot::RaisedLeadingTone => (seventh.pitch_class() + 1) % 12,
            };
            let notes = stack_triad(root_pc, seventh.letter(), ChordQuality::Diminished);
            return Ok(DiatonicChord {
                token,
                root: notes[0],
                quality: ChordQuality::Diminished,
                notes,
            });
        }
        if self.mode == Mode::Major && id == 8 {
            let notes = stack_triad(seventh.pitch_class(), seventh.letter(), ChordQuality::Major);
            return Ok(DiatonicChord {
                token,
                root: notes[0],
                quality: ChordQuality::Major,
                notes,
            });
        }
        // In minor, `7Maj` is the plain diatonic triad on the 7th degree.
        let d = if id == 8 { 6 } else { id as usize - 1 };
        let notes = [
            self.degrees[d],
            self.degrees[(d + 2) % 7],
            self.degrees[(d + 4) % 7],
        ];
        let lower = interval_up(notes[0], notes[1]);
        let upper = interval_up(notes[1], notes[2]);
        let quality = ChordQuality::from_thirds(lower, upper)
            .expect("diatonic triads of Ionian/Aeolian scales are major, minor or diminished");
        Ok(DiatonicChord {
            token,
            root: notes[0],
            quality,
            notes,
        })
    }

    /// One chord per degree token of the mode, in token order.
    pub fn chords(&self) -> Vec<DiatonicChord> {
        self.chords_with(MinorDiminishedRoot::default())
    }

    pub fn chords_with(&self, dim: MinorDiminishedRoot) -> Vec<DiatonicChord> {
        self.mode
            .tokens()
            .map(|t| {
                self.chord_with(t, dim)
                    .expect("token is valid for its own mode")
            })
            .collect()
    }
}

impl fmt::Display for Scale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.tonic, self.mode)
    }
}

fn interval_up(from: SpelledPitchClass, to: SpelledPitchClass) -> i32 {
    (to.pitch_class() as i32 - from.pitch_class() as i32).rem_euclid(12)
}

/// Stack a `quality` triad on `root_pc`, preferring `letter` for the root.
///
/// If that spelling would need a triple accidental (e.g. the natural 7th of
/// Fb minor is Ebb, whose diminished fifth would be Bbbb), the root is
/// respelled on a neighbouring letter that keeps every note within double
/// accidentals.
fn stack_triad(root_pc: u8, letter: Letter, quality: ChordQuality) -> [SpelledPitchClass; 3] {
    let (lower, upper) = quality.thirds();
    let (third, fifth) = (lower.half_steps(), lower.half_steps() + upper.half_steps());
    let stack_on = |letter: Letter| -> Result<[SpelledPitchClass; 3]> {
        let root = spell_on_letter(root_pc, letter)?;
        Ok([
            root,
            root.transpose(third, letter.step(2))?,
            root.transpose(fifth, letter.step(4))?,
        ])
    };
    [0usize, 6, 1]
        .into_iter()
        .map(|shift| letter.step(shift))
        .filter_map(|l| stack_on(l).ok())
        .min_by_key(|notes| {
            let worst = notes
                .iter()
                .map(|n| n.accidental().abs())
                .max()
                .unwrap_or(0);
            // stay on the preferred letter whenever it is spellable
            (notes[0].letter() != letter, worst)
        })
        .unwrap_or_else(|| {
            panic!("no spelling within {MAX_ACCIDENTAL} accidentals for pc {root_pc}")
        })
}

/// Triad built on one degree token of a scale.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DiatonicChord {
    pub token: DegreeToken,
    pub root: SpelledPitchClass,
    pub quality: ChordQuality,
    pub notes: [SpelledPitchClass; 3],
}

impl DiatonicChord {
    /// `C`, `Am`, `Bdim`, `C#`, `Bbm`.
    pub fn symbol(&self) -> String {
        format!("{}{}", self.root, self.quality.suffix())
    }
}

/// Tonic spellings of the 21-scale grid: each letter natural, sharp, flat.
pub fn tonics() -> impl Iterator<Item = SpelledPitchClass> {
    Letter::ALL.into_iter().flat_map(|letter| {
        [0, 1, -1]
            .into_iter()
            .map(move |acc| SpelledPitchClass::new(letter, acc).expect("single accidental"))
    })
}

/// The 21 scales of one mode, in grid order (C, C#, Cb, D, D#, Db, ...).
pub fn scales_for(mode: Mode) -> Vec<Scale> {
    tonics()
        .map(|t| Scale::new(t, mode).expect("all 21 tonics are spellable"))
        .collect()
}

/// All 42 scales: the 21 major scales followed by the 21 minor scales.
pub fn all_scales() -> Vec<Scale> {
    Mode::ALL.into_iter().flat_map(scales_for).collect()
}
