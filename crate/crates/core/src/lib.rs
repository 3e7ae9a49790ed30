//! Enumerate music-theory-conformant chord progressions, spell them in all
//! 21 major and 21 minor scales, derive alternate variations and export MIDI.

pub mod dataset;
pub mod error;
pub mod explorer;
pub mod midi;
pub mod pitch;
pub mod progression;
pub mod scale;
pub mod variation;

pub use error::{Error, Result};
pub use pitch::{Interval, Letter, Pitch, SpelledPitchClass};
pub use progression::{DegreeToken, NumericProgression, TransitionTable};
pub use scale::{all_scales, ChordQuality, DiatonicChord, MinorDiminishedRoot, Mode, Scale};
pub use variation::{alternates, VariationSet};
