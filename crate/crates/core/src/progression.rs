//! Transition tables and numeric progression enumeration.
//!
//! A table is a directed graph over degree tokens. Every progression starts
//! on the tonic (token 1) and each following token must be a successor of the
//! one before it. Enumeration walks the graph depth-first in successor-list
//! order, so output order is fixed for a given table.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scale::Mode;

pub const MAJOR_TABLE: &str = include_str!("../tables/major.toml");
pub const MINOR_TABLE: &str = include_str!("../tables/minor.toml");
pub const MAJOR_NO_TONIC_REPEAT_TABLE: &str = include_str!("../tables/major-no-tonic-repeat.toml");
pub const MINOR_NO_TONIC_REPEAT_TABLE: &str = include_str!("../tables/minor-no-tonic-repeat.toml");

/// Scale-degree token. 1..=7 in major; minor adds 8, shown as `7Maj`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DegreeToken(u8);

impl DegreeToken {
    pub const TONIC: DegreeToken = DegreeToken(1);

    pub fn new(id: u8, mode: Mode) -> Result<DegreeToken> {
        if (1..=mode.max_token()).contains(&id) {
            Ok(DegreeToken(id))
        } else {
            Err(Error::InvalidDegreeToken {
                token: id.to_string(),
                mode: mode.as_str(),
            })
        }
    }

    /// Wrap an id without checking it against a mode.
    pub const fn new_unchecked(id: u8) -> DegreeToken {
        DegreeToken(id)
    }

    pub fn get(self) -> u8 {
        self.0
    }

    /// Accepts `1`..`7`, and `8` or `7Maj` in minor.
    pub fn parse(s: &str, mode: Mode) -> Result<DegreeToken> {
        let s = s.trim();
        let invalid = || Error::InvalidDegreeToken {
            token: s.to_string(),
            mode: mode.as_str(),
        };
        if s.eq_ignore_ascii_case("7maj") {
            return match mode {
                Mode::Minor => Ok(DegreeToken(8)),
                Mode::Major => Err(invalid()),
            };
        }
        let id: u8 = s.parse().map_err(|_| invalid())?;
        DegreeToken::new(id, mode).map_err(|_| invalid())
    }
}

impl fmt::Display for DegreeToken {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == 8 {
            f.write_str("7Maj")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl Serialize for DegreeToken {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NumericProgression {
    pub mode: Mode,
    pub tokens: Vec<DegreeToken>,
}

impl NumericProgression {
    pub fn new(mode: Mode, tokens: Vec<DegreeToken>) -> Self {
        Self { mode, tokens }
    }

    /// Parse a comma-separated token list such as `1,5,6,4` or `1,7Maj,3,4`.
    pub fn parse(s: &str, mode: Mode) -> Result<Self> {
        if s.trim().is_empty() {
            return Err(Error::InvalidProgression("empty progression".into()));
        }
        let tokens = s
            .split(',')
            .map(|t| DegreeToken::parse(t, mode))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { mode, tokens })
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn token_strings(&self) -> Vec<String> {
        self.tokens.iter().map(ToString::to_string).collect()
    }
}

impl fmt::Display for NumericProgression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.tokens.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

/// Directed graph of allowed chord movements for one mode.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitionTable {
    mode: Mode,
    /// `successors[t - 1]` lists the tokens allowed after token `t`.
    successors: Vec<Vec<DegreeToken>>,
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct TableDocument {
    mode: String,
    #[serde(default)]
    start: Option<TokenField>,
    edges: BTreeMap<String, Vec<TokenField>>,
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(untagged)]
enum TokenField {
    Number(i64),
    Text(String),
}

impl TokenField {
    fn parse(&self, mode: Mode) -> Result<DegreeToken> {
        let parsed = match self {
            TokenField::Number(n) => u8::try_from(*n)
                .ok()
                .and_then(|n| DegreeToken::new(n, mode).ok()),
            TokenField::Text(s) => DegreeToken::parse(s, mode).ok(),
        };
        parsed.ok_or_else(|| Error::MalformedTable(format!("unknown token {self}")))
    }
}

impl fmt::Display for TokenField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TokenField::Number(n) => write!(f, "{n}"),
            TokenField::Text(s) => write!(f, "{s:?}"),
        }
    }
}

impl TransitionTable {
    pub fn major() -> TransitionTable {
        TransitionTable::from_document(MAJOR_TABLE).expect("embedded major table is valid")
    }

    pub fn minor() -> TransitionTable {
        TransitionTable::from_document(MINOR_TABLE).expect("embedded minor table is valid")
    }

    pub fn default_for(mode: Mode) -> TransitionTable {
        match mode {
            Mode::Major => TransitionTable::major(),
            Mode::Minor => TransitionTable::minor(),
        }
    }

    /// Build a table from `(token, successors)` pairs and check its invariants.
    pub fn from_edges(mode: Mode, edges: &[(u8, &[u8])]) -> Result<TransitionTable> {
        let mut successors = vec![None; mode.max_token() as usize];
        for (from, to) in edges {
            let from = DegreeToken::new(*from, mode)
                .map_err(|_| Error::MalformedTable(format!("unknown token {from}")))?;
            let to = to
                .iter()
                .map(|t| {
                    DegreeToken::new(*t, mode)
                        .map_err(|_| Error::MalformedTable(format!("unknown token {t}")))
                })
                .collect::<Result<Vec<_>>>()?;
            successors[from.0 as usize - 1] = Some(to);
        }
        Self::checked(mode, successors)
    }

    /// Parse a TOML table document (see `tables/major.toml`).
    pub fn from_document(doc: &str) -> Result<TransitionTable> {
        let doc: TableDocument =
            toml::from_str(doc).map_err(|e| Error::MalformedTable(e.message().to_string()))?;
        let mode: Mode = doc
            .mode
            .parse()
            .map_err(|_| Error::MalformedTable(format!("unknown mode {:?}", doc.mode)))?;
        if let Some(start) = &doc.start {
            if start.parse(mode)? != DegreeToken::TONIC {
                return Err(Error::MalformedTable(format!(
                    "start must be 1, got {start}"
                )));
            }
        }
        let mut successors = vec![None; mode.max_token() as usize];
        for (from, to) in &doc.edges {
            let from = DegreeToken::parse(from, mode)
                .map_err(|_| Error::MalformedTable(format!("unknown token {from:?}")))?;
            let slot = &mut successors[from.0 as usize - 1];
            if slot.is_some() {
                return Err(Error::MalformedTable(format!("token {from} listed twice")));
            }
            *slot = Some(
                to.iter()
                    .map(|t| t.parse(mode))
                    .collect::<Result<Vec<_>>>()?,
            );
        }
        Self::checked(mode, successors)
    }

    fn checked(mode: Mode, successors: Vec<Option<Vec<DegreeToken>>>) -> Result<TransitionTable> {
        for (i, list) in successors.iter().enumerate() {
            let token = DegreeToken(i as u8 + 1);
            let Some(list) = list else {
                return Err(Error::MalformedTable(format!(
                    "no edges given for token {token}"
                )));
            };
            if list.is_empty() {
                return Err(Error::MalformedTable(format!(
                    "token {token} has no successors"
                )));
            }
            for (j, t) in list.iter().enumerate() {
                if list[..j].contains(t) {
                    return Err(Error::MalformedTable(format!(
                        "token {token} lists successor {t} twice"
                    )));
                }
            }
        }
        let table = TransitionTable {
            mode,
            successors: successors.into_iter().map(Option::unwrap).collect(),
        };
        let reachable = table.reachable();
        if let Some(i) = reachable.iter().position(|r| !r) {
            return Err(Error::MalformedTable(format!(
                "token {} is not reachable from 1",
                DegreeToken(i as u8 + 1)
            )));
        }
        Ok(table)
    }

    fn reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.successors.len()];
        let mut stack = vec![DegreeToken::TONIC];
        seen[0] = true;
        while let Some(t) = stack.pop() {
            for s in self.successors(t) {
                let idx = s.0 as usize - 1;
                if !seen[idx] {
                    seen[idx] = true;
                    stack.push(*s);
                }
            }
        }
        seen
    }

    /// Render as a TOML document accepted by [`TransitionTable::from_document`].
    pub fn to_document(&self) -> String {
        let edges = self
            .tokens()
            .map(|t| {
                let to = self
                    .successors(t)
                    .iter()
                    .map(|s| TokenField::Text(s.to_string()))
                    .collect();
                (t.to_string(), to)
            })
            .collect();
        let doc = TableDocument {
            mode: self.mode.to_string(),
            start: Some(TokenField::Text("1".into())),
            edges,
        };
        toml::to_string(&doc).expect("table document serializes")
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn start(&self) -> DegreeToken {
        DegreeToken::TONIC
    }

    pub fn tokens(&self) -> impl Iterator<Item = DegreeToken> {
        (1..=self.successors.len() as u8).map(DegreeToken)
    }

    pub fn successors(&self, token: DegreeToken) -> &[DegreeToken] {
        &self.successors[token.0 as usize - 1]
    }

    pub fn has_edge(&self, from: DegreeToken, to: DegreeToken) -> bool {
        (1..=self.successors.len() as u8).contains(&from.0) && self.successors(from).contains(&to)
    }

    /// Lazily walk every progression of `len` tokens, depth-first.
    pub fn progressions(&self, len: usize) -> Progressions<'_> {
        Progressions {
            table: self,
            len,
            path: Vec::with_capacity(len),
            cursors: Vec::with_capacity(len),
            started: false,
            done: len == 0,
        }
    }

    pub fn enumerate(&self, len: usize) -> Vec<NumericProgression> {
        self.progressions(len).collect()
    }

    /// Same output as [`TransitionTable::enumerate`], with the subtrees under
    /// each second token walked in parallel and concatenated in order.
    pub fn enumerate_par(&self, len: usize) -> Vec<NumericProgression> {
        if len <= 2 {
            return self.enumerate(len);
        }
        let parts: Vec<Vec<NumericProgression>> = self
            .successors(DegreeToken::TONIC)
            .par_iter()
            .map(|second| {
                let mut out = Vec::new();
                let mut path = vec![DegreeToken::TONIC, *second];
                self.extend_paths(&mut path, len, &mut out);
                out
            })
            .collect();
        parts.into_iter().flatten().collect()
    }

    fn extend_paths(
        &self,
        path: &mut Vec<DegreeToken>,
        len: usize,
        out: &mut Vec<NumericProgression>,
    ) {
        if path.len() == len {
            out.push(NumericProgression::new(self.mode, path.clone()));
            return;
        }
        let last = *path.last().expect("path starts at the tonic");
        for next in self.successors(last) {
            path.push(*next);
            self.extend_paths(path, len, out);
            path.pop();
        }
    }

    /// 0/1 adjacency matrix, `m[from - 1][to - 1]`.
    pub fn adjacency(&self) -> Vec<Vec<u64>> {
        let n = self.successors.len();
        let mut m = vec![vec![0u64; n]; n];
        for (i, list) in self.successors.iter().enumerate() {
            for t in list {
                m[i][t.0 as usize - 1] = 1;
            }
        }
        m
    }

    /// Number of progressions of length `len`: the row sum of
    /// `A^(len - 1)` at the start token, in exact checked integers.
    pub fn count_by_matrix_power(&self, len: usize) -> Result<u64> {
        if len == 0 {
            return Ok(0);
        }
        let power = matrix_power(&self.adjacency(), len as u64 - 1).ok_or(Error::Overflow(len))?;
        power[0]
            .iter()
            .try_fold(0u64, |acc, x| acc.checked_add(*x))
            .ok_or(Error::Overflow(len))
    }

    /// Explain why `p` is not a valid progression under this table.
    pub fn check(&self, p: &NumericProgression) -> Result<()> {
        if p.mode != self.mode {
            return Err(Error::InvalidProgression(format!(
                "{} progression checked against {} table",
                p.mode, self.mode
            )));
        }
        let Some(first) = p.tokens.first() else {
            return Err(Error::InvalidProgression("empty progression".into()));
        };
        if *first != DegreeToken::TONIC {
            return Err(Error::InvalidProgression(format!(
                "progression must start on 1, starts on {first}"
            )));
        }
        for pair in p.tokens.windows(2) {
            if !self.has_edge(pair[0], pair[1]) {
                return Err(Error::InvalidProgression(format!(
                    "{} -> {} is not an allowed transition",
                    pair[0], pair[1]
                )));
            }
        }
        Ok(())
    }

    pub fn validate(&self, p: &NumericProgression) -> bool {
        self.check(p).is_ok()
    }
}

fn mat_mul(a: &[Vec<u64>], b: &[Vec<u64>]) -> Option<Vec<Vec<u64>>> {
    let n = a.len();
    let mut out = vec![vec![0u64; n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k] == 0 {
                continue;
            }
            for j in 0..n {
                let term = a[i][k].checked_mul(b[k][j])?;
                out[i][j] = out[i][j].checked_add(term)?;
            }
        }
    }
    Some(out)
}

fn matrix_power(m: &[Vec<u64>], mut exp: u64) -> Option<Vec<Vec<u64>>> {
    let n = m.len();
    let mut result: Vec<Vec<u64>> = (0..n)
        .map(|i| (0..n).map(|j| u64::from(i == j)).collect())
        .collect();
    let mut base = m.to_vec();
    while exp > 0 {
        if exp & 1 == 1 {
            result = mat_mul(&result, &base)?;
        }
        exp >>= 1;
        if exp > 0 {
            base = mat_mul(&base, &base)?;
        }
    }
    Some(result)
}

/// Depth-first iterator over all progressions of a fixed length.
#[derive(Debug, Clone)]
pub struct Progressions<'a> {
    table: &'a TransitionTable,
    len: usize,
    path: Vec<DegreeToken>,
    /// Next successor index to try at each depth of `path`.
    cursors: Vec<usize>,
    started: bool,
    done: bool,
}

impl Iterator for Progressions<'_> {
    type Item = NumericProgression;

    fn next(&mut self) -> Option<NumericProgression> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            self.path.push(DegreeToken::TONIC);
            self.cursors.push(0);
            if self.len == 1 {
                self.done = true;
                return Some(NumericProgression::new(self.table.mode, self.path.clone()));
            }
        } else {
            self.path.pop();
            self.cursors.pop();
        }
        loop {
            let Some(cursor) = self.cursors.last_mut() else {
                self.done = true;
                return None;
            };
            let node = *self
                .path
                .last()
                .expect("path and cursors have equal length");
            let succ = self.table.successors(node);
            if *cursor < succ.len() {
                let next = succ[*cursor];
                *cursor += 1;
                self.path.push(next);
                self.cursors.push(0);
                if self.path.len() == self.len {
                    return Some(NumericProgression::new(self.table.mode, self.path.clone()));
                }
            } else {
                self.path.pop();
                self.cursors.pop();
            }
        }
    }
}
