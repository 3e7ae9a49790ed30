//! Numeric progressions spelled out in every scale, as CSV or JSON Lines.
//!
//! CSV layout, one row per (scale, progression):
//!
//! ```text
//! scale,number_progression,scale_progression,mode
//! C-major,"1,1,1,1","C,C,C,C",major
//! ```

use std::fmt::{self, Write as _};
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::progression::{NumericProgression, TransitionTable};
use crate::scale::{scales_for, MinorDiminishedRoot, Mode, Scale};

pub const CSV_HEADER: [&str; 4] = ["scale", "number_progression", "scale_progression", "mode"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DatasetRow {
    pub scale: String,
    pub numbers: NumericProgression,
    pub chords: Vec<String>,
}

impl DatasetRow {
    pub fn mode(&self) -> Mode {
        self.numbers.mode
    }

    /// Rebuild the row from its scale id and numeric progression alone.
    pub fn rederive(&self, dim: MinorDiminishedRoot) -> Result<DatasetRow> {
        let scale = Scale::from_id(&self.scale)?;
        render_row(&scale, &self.numbers, dim)
    }
}

/// Spell `numbers` as chord symbols in `scale`.
pub fn render_row(
    scale: &Scale,
    numbers: &NumericProgression,
    dim: MinorDiminishedRoot,
) -> Result<DatasetRow> {
    let chords = numbers
        .tokens
        .iter()
        .map(|t| scale.chord_with(*t, dim).map(|c| c.symbol()))
        .collect::<Result<Vec<_>>>()?;
    Ok(DatasetRow {
        scale: scale.id(),
        numbers: numbers.clone(),
        chords,
    })
}

/// Source of dataset rows for one progression length.
#[derive(Debug, Clone)]
pub struct Dataset {
    tables: Vec<TransitionTable>,
    len: usize,
    dim: MinorDiminishedRoot,
}

impl Dataset {
    /// Default tables for each requested mode, in the order given.
    pub fn new(len: usize, modes: &[Mode]) -> Dataset {
        Dataset {
            tables: modes
                .iter()
                .map(|m| TransitionTable::default_for(*m))
                .collect(),
            len,
            dim: MinorDiminishedRoot::default(),
        }
    }

    pub fn with_tables(len: usize, tables: Vec<TransitionTable>) -> Dataset {
        Dataset {
            tables,
            len,
            dim: MinorDiminishedRoot::default(),
        }
    }

    pub fn minor_diminished_root(mut self, dim: MinorDiminishedRoot) -> Dataset {
        self.dim = dim;
        self
    }

    /// Rows in scale-grid order, each scale walking the full enumeration.
    /// Nothing is buffered beyond the current progression.
    pub fn rows(&self) -> impl Iterator<Item = DatasetRow> + '_ {
        self.tables.iter().flat_map(move |table| {
            scales_for(table.mode()).into_iter().flat_map(move |scale| {
                table.progressions(self.len).map(move |p| {
                    render_row(&scale, &p, self.dim)
                        .expect("grid scales spell every token of their mode")
                })
            })
        })
    }

    /// Number of rows [`Dataset::rows`] yields, computed without enumerating.
    pub fn row_count(&self) -> Result<u64> {
        self.tables.iter().try_fold(0u64, |acc, t| {
            let per_scale = t.count_by_matrix_power(self.len)?;
            per_scale
                .checked_mul(21)
                .and_then(|n| acc.checked_add(n))
                .ok_or(Error::Overflow(self.len))
        })
    }
}

fn joined(items: impl IntoIterator<Item = impl fmt::Display>) -> String {
    let mut out = String::new();
    for (i, item) in items.into_iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        write!(out, "{item}").expect("writing to a String");
    }
    out
}

/// Write `rows` as CSV with a header line; returns the number of data rows.
pub fn write_csv<W: Write>(rows: impl IntoIterator<Item = DatasetRow>, sink: W) -> Result<u64> {
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(sink);
    writer.write_record(CSV_HEADER)?;
    let mut count = 0;
    for row in rows {
        writer.write_record([
            row.scale.as_str(),
            &row.numbers.to_string(),
            &joined(&row.chords),
            row.mode().as_str(),
        ])?;
        count += 1;
    }
    writer.flush()?;
    Ok(count)
}

/// Parse CSV written by [`write_csv`].
pub fn read_csv<R: Read>(source: R) -> impl Iterator<Item = Result<DatasetRow>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(source);
    let header_ok = match reader.headers() {
        Ok(h) if h.iter().eq(CSV_HEADER) => Ok(()),
        Ok(h) => Err(Error::InvalidProgression(format!(
            "unexpected CSV header {:?}",
            h
        ))),
        Err(e) => Err(e.into()),
    };
    let header_err = header_ok.err();
    let records = reader.into_records();
    header_err.map(Err).into_iter().chain(records.map(|record| {
        let record = record?;
        let field = |i: usize| record.get(i).unwrap_or_default();
        let mode: Mode = field(3).parse()?;
        Ok(DatasetRow {
            scale: field(0).to_string(),
            numbers: NumericProgression::parse(field(1), mode)?,
            chords: field(2).split(',').map(str::to_string).collect(),
        })
    }))
}

#[derive(Serialize, Deserialize)]
struct JsonRow {
    scale: String,
    number_progression: Vec<String>,
    scale_progression: Vec<String>,
    mode: Mode,
}

/// Write `rows` as JSON Lines; returns the number of rows.
pub fn write_jsonl<W: Write>(
    rows: impl IntoIterator<Item = DatasetRow>,
    mut sink: W,
) -> Result<u64> {
    let mut count = 0;
    for row in rows {
        let record = JsonRow {
            number_progression: row.numbers.token_strings(),
            mode: row.mode(),
            scale: row.scale,
            scale_progression: row.chords,
        };
        serde_json::to_writer(&mut sink, &record)?;
        sink.write_all(b"\n")?;
        count += 1;
    }
    sink.flush()?;
    Ok(count)
}

pub fn parse_jsonl_row(line: &str) -> Result<DatasetRow> {
    let record: JsonRow = serde_json::from_str(line)?;
    Ok(DatasetRow {
        numbers: NumericProgression::parse(&record.number_progression.join(","), record.mode)?,
        scale: record.scale,
        chords: record.scale_progression,
    })
}

/// Which progressions a counts line covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CountScope {
    Major,
    Minor,
    Total,
}

impl fmt::Display for CountScope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CountScope::Major => "major",
            CountScope::Minor => "minor",
            CountScope::Total => "total",
        })
    }
}

/// Totals published alongside the original enumeration, keyed by length.
/// Row totals count every (scale, progression) pair.
pub fn published_rows(len: usize, scope: CountScope) -> Option<u64> {
    match (len, scope) {
        (4, CountScope::Major) => Some(1_533),
        (4, CountScope::Minor) => Some(1_764),
        (4, CountScope::Total) => Some(3_297),
        (8, CountScope::Major) => Some(182_094),
        (8, CountScope::Minor) => Some(223_122),
        (8, CountScope::Total) => Some(405_216),
        _ => None,
    }
}

/// Published numeric (scale-independent) counts; only 4-chord ones exist.
pub fn published_numeric(len: usize, scope: CountScope) -> Option<u64> {
    match (len, scope) {
        (4, CountScope::Major) => Some(73),
        (4, CountScope::Minor) => Some(84),
        (4, CountScope::Total) => Some(157),
        _ => None,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CountsEntry {
    pub length: usize,
    pub scope: CountScope,
    pub computed_numeric: u64,
    pub computed_rows: u64,
    pub published_numeric: Option<u64>,
    pub published_rows: Option<u64>,
}

impl CountsEntry {
    pub fn numeric_match(&self) -> Option<bool> {
        self.published_numeric.map(|p| p == self.computed_numeric)
    }

    pub fn rows_match(&self) -> Option<bool> {
        self.published_rows.map(|p| p == self.computed_rows)
    }

    /// False if any published figure disagrees with the computed one.
    pub fn matches(&self) -> bool {
        self.numeric_match() != Some(false) && self.rows_match() != Some(false)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CountsReport {
    pub entries: Vec<CountsEntry>,
}

/// Computed counts for the default tables next to the published figures.
pub fn counts_report(lengths: &[usize]) -> Result<CountsReport> {
    counts_report_for(
        lengths,
        &TransitionTable::major(),
        &TransitionTable::minor(),
    )
}

pub fn counts_report_for(
    lengths: &[usize],
    major: &TransitionTable,
    minor: &TransitionTable,
) -> Result<CountsReport> {
    let mut entries = Vec::new();
    for &len in lengths {
        let major_n = major.count_by_matrix_power(len)?;
        let minor_n = minor.count_by_matrix_power(len)?;
        let total_n = major_n.checked_add(minor_n).ok_or(Error::Overflow(len))?;
        for (scope, numeric) in [
            (CountScope::Major, major_n),
            (CountScope::Minor, minor_n),
            (CountScope::Total, total_n),
        ] {
            entries.push(CountsEntry {
                length: len,
                scope,
                computed_numeric: numeric,
                computed_rows: numeric.checked_mul(21).ok_or(Error::Overflow(len))?,
                published_numeric: published_numeric(len, scope),
                published_rows: published_rows(len, scope),
            });
        }
    }
    Ok(CountsReport { entries })
}

impl fmt::Display for CountsReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let opt = |v: Option<u64>| v.map_or_else(|| "-".to_string(), |v| v.to_string());
        let verdict = |m: Option<bool>| match m {
            Some(true) => "match",
            Some(false) => "MISMATCH",
            None => "-",
        };
        writeln!(
            f,
            "{:<6} {:<6} {:>9} {:>9} {:>9} {:>10} {:>10} {:>9}",
            "length", "scope", "numeric", "published", "status", "rows", "published", "status"
        )?;
        for e in &self.entries {
            writeln!(
                f,
                "{:<6} {:<6} {:>9} {:>9} {:>9} {:>10} {:>10} {:>9}",
                e.length,
                e.scope,
                e.computed_numeric,
                opt(e.published_numeric),
                verdict(e.numeric_match()),
                e.computed_rows,
                opt(e.published_rows),
                verdict(e.rows_match()),
            )?;
        }
        Ok(())
    }
}
