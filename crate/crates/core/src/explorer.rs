//! Request/response layer shared by the CLI and the HTTP service.
//!
//! Everything here is a pure function of its inputs and the immutable
//! [`Explorer`] state, so identical requests always produce identical bodies.

use std::collections::{BTreeMap, HashSet};
use std::io::Read;

use serde::{Deserialize, Serialize};

use crate::dataset::read_csv;
use crate::error::{Error, Result};
use crate::midi::{self, PlaybackConfig, Voicing};
use crate::pitch::SpelledPitchClass;
use crate::progression::{NumericProgression, TransitionTable};
use crate::scale::{all_scales, MinorDiminishedRoot, Mode, Scale};
use crate::variation::alternate_scales;

pub const DEFAULT_PAGE_SIZE: usize = 100;
pub const MAX_PAGE_SIZE: usize = 1000;
/// Longest progression the service will page through.
pub const MAX_LENGTH: usize = 16;

/// A progression given either as `"1,5,6,4"` or as `[1, 5, 6, "4"]`.
#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(untagged)]
pub enum ProgressionInput {
    Text(String),
    List(Vec<TokenInput>),
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(untagged)]
pub enum TokenInput {
    Number(u64),
    Text(String),
}

impl ProgressionInput {
    pub fn to_text(&self) -> String {
        match self {
            ProgressionInput::Text(s) => s.clone(),
            ProgressionInput::List(items) => items
                .iter()
                .map(|t| match t {
                    TokenInput::Number(n) => n.to_string(),
                    TokenInput::Text(s) => s.clone(),
                })
                .collect::<Vec<_>>()
                .join(","),
        }
    }
}

#[derive(Debug, Clone, Deserialize, Serialize)]
pub struct BaseProgressionRequest {
    pub scale: String,
    pub progression: ProgressionInput,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
pub struct MidiRequest {
    pub scale: String,
    pub progression: ProgressionInput,
    #[serde(default)]
    pub tempo: Option<i64>,
    #[serde(default)]
    pub octave: Option<i64>,
    #[serde(default)]
    pub voicing: Option<Voicing>,
}

impl MidiRequest {
    pub fn playback_config(&self) -> Result<PlaybackConfig> {
        let tempo = self.tempo.unwrap_or(midi::DEFAULT_TEMPO_BPM as i64);
        let octave = self.octave.unwrap_or(midi::DEFAULT_OCTAVE as i64);
        let tempo = u16::try_from(tempo)
            .map_err(|_| Error::InvalidConfig(format!("tempo {tempo} outside 20..=300 BPM")))?;
        let octave = i8::try_from(octave)
            .map_err(|_| Error::InvalidConfig(format!("octave {octave} outside 1..=9")))?;
        let mut config = PlaybackConfig::new(tempo, octave)?;
        config.voicing = self.voicing.unwrap_or_default();
        Ok(config)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VariationView {
    pub scale: String,
    pub scale_progression: Vec<String>,
    pub keys_in_chord: Vec<[SpelledPitchClass; 3]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BaseProgressionResponse {
    pub scale: String,
    pub numeric_progression: Vec<String>,
    pub scale_progression: Vec<String>,
    pub keys_in_chord: Vec<[SpelledPitchClass; 3]>,
    pub chords_in_scale: Vec<String>,
    pub variations: Vec<VariationView>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProgressionPage {
    pub mode: Mode,
    pub length: usize,
    pub page: usize,
    pub page_size: usize,
    pub total: u64,
    pub items: Vec<String>,
}

/// Where progression listings come from.
#[derive(Debug, Clone)]
enum Source {
    Computed,
    /// Distinct numeric progressions per (mode, length), in file order.
    Dataset(BTreeMap<(Mode, usize), Vec<NumericProgression>>),
}

#[derive(Debug, Clone)]
pub struct Explorer {
    major: TransitionTable,
    minor: TransitionTable,
    dim: MinorDiminishedRoot,
    source: Source,
}

impl Default for Explorer {
    fn default() -> Self {
        Self::new(TransitionTable::major(), TransitionTable::minor())
    }
}

impl Explorer {
    pub fn new(major: TransitionTable, minor: TransitionTable) -> Explorer {
        Explorer {
            major,
            minor,
            dim: MinorDiminishedRoot::default(),
            source: Source::Computed,
        }
    }

    pub fn minor_diminished_root(mut self, dim: MinorDiminishedRoot) -> Explorer {
        self.dim = dim;
        self
    }

    /// Serve progression listings from a pre-generated dataset CSV.
    ///
    /// Every row must be a valid progression under this explorer's tables.
    pub fn with_dataset<R: Read>(mut self, csv: R) -> Result<Explorer> {
        let mut lists: BTreeMap<(Mode, usize), Vec<NumericProgression>> = BTreeMap::new();
        let mut seen = HashSet::new();
        for row in read_csv(csv) {
            let row = row?;
            self.table(row.mode()).check(&row.numbers)?;
            if seen.insert(row.numbers.clone()) {
                lists
                    .entry((row.mode(), row.numbers.len()))
                    .or_default()
                    .push(row.numbers);
            }
        }
        self.source = Source::Dataset(lists);
        Ok(self)
    }

    pub fn table(&self, mode: Mode) -> &TransitionTable {
        match mode {
            Mode::Major => &self.major,
            Mode::Minor => &self.minor,
        }
    }

    pub fn scale_ids(&self) -> Vec<String> {
        all_scales().iter().map(Scale::id).collect()
    }

    /// Parse and check a scale id and progression against the tables.
    pub fn resolve(&self, scale: &str, progression: &str) -> Result<(Scale, NumericProgression)> {
        let scale = Scale::from_id(scale)?;
        let numbers = NumericProgression::parse(progression, scale.mode())?;
        self.table(scale.mode()).check(&numbers)?;
        Ok((scale, numbers))
    }

    fn spell(
        &self,
        scale: &Scale,
        numbers: &NumericProgression,
    ) -> Result<(Vec<String>, Vec<[SpelledPitchClass; 3]>)> {
        let chords = numbers
            .tokens
            .iter()
            .map(|t| scale.chord_any_mode(*t, self.dim))
            .collect::<Result<Vec<_>>>()?;
        Ok((
            chords.iter().map(|c| c.symbol()).collect(),
            chords.iter().map(|c| c.notes).collect(),
        ))
    }

    pub fn base_progression(
        &self,
        scale: &str,
        progression: &str,
    ) -> Result<BaseProgressionResponse> {
        let (scale, numbers) = self.resolve(scale, progression)?;
        let (scale_progression, keys_in_chord) = self.spell(&scale, &numbers)?;
        let variations = alternate_scales(&scale)?
            .iter()
            .map(|alt| {
                let (scale_progression, keys_in_chord) = self.spell(alt, &numbers)?;
                Ok(VariationView {
                    scale: alt.id(),
                    scale_progression,
                    keys_in_chord,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(BaseProgressionResponse {
            scale: scale.id(),
            numeric_progression: numbers.token_strings(),
            scale_progression,
            keys_in_chord,
            chords_in_scale: scale
                .chords_with(self.dim)
                .iter()
                .map(|c| c.symbol())
                .collect(),
            variations,
        })
    }

    /// SMF bytes for the base progression.
    pub fn midi(&self, scale: &str, progression: &str, config: &PlaybackConfig) -> Result<Vec<u8>> {
        let (scale, numbers) = self.resolve(scale, progression)?;
        let (_, keys) = self.spell(&scale, &numbers)?;
        let notes = midi::music_notes(&keys, config)?;
        let events = midi::timed_events(&notes, config)?;
        midi::smf_bytes(&events, config)
    }

    pub fn progressions_page(
        &self,
        mode: Mode,
        length: usize,
        page: usize,
        page_size: usize,
    ) -> Result<ProgressionPage> {
        if !(1..=MAX_LENGTH).contains(&length) {
            return Err(Error::InvalidProgression(format!(
                "length {length} outside 1..={MAX_LENGTH}"
            )));
        }
        if !(1..=MAX_PAGE_SIZE).contains(&page_size) {
            return Err(Error::InvalidProgression(format!(
                "page size {page_size} outside 1..={MAX_PAGE_SIZE}"
            )));
        }
        let skip = page.saturating_mul(page_size);
        let (total, items) = match &self.source {
            Source::Computed => {
                let table = self.table(mode);
                let total = table.count_by_matrix_power(length)?;
                let items = table
                    .progressions(length)
                    .skip(skip)
                    .take(page_size)
                    .map(|p| p.to_string())
                    .collect();
                (total, items)
            }
            Source::Dataset(lists) => {
                let list = lists
                    .get(&(mode, length))
                    .map(Vec::as_slice)
                    .unwrap_or_default();
                let items = list
                    .iter()
                    .skip(skip)
                    .take(page_size)
                    .map(|p| p.to_string())
                    .collect();
                (list.len() as u64, items)
            }
        };
        Ok(ProgressionPage {
            mode,
            length,
            page,
            page_size,
            total,
            items,
        })
    }
}
