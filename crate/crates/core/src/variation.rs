//! Alternate variations: the same numeric progression replayed on scales
//! rooted at other degrees of the base scale.
//!
//! Major bases use degrees 4, 5, 6 (major, major, minor); minor bases use
//! degrees 3, 4, 5 (major, minor, minor). The alternate tonic keeps the
//! degree note's spelling exactly.

use crate::error::Result;
use crate::progression::NumericProgression;
use crate::scale::{Mode, Scale};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VariationSet {
    pub base: (Scale, NumericProgression),
    pub alternates: [(Scale, NumericProgression); 3],
}

/// Degrees (1-based) and modes of the three alternate scales for `mode`.
pub fn alternate_degrees(mode: Mode) -> [(usize, Mode); 3] {
    match mode {
        Mode::Major => [(4, Mode::Major), (5, Mode::Major), (6, Mode::Minor)],
        Mode::Minor => [(3, Mode::Major), (4, Mode::Minor), (5, Mode::Minor)],
    }
}

/// Scales the three alternates are played in, in order.
pub fn alternate_scales(base: &Scale) -> Result<[Scale; 3]> {
    let [a, b, c] = alternate_degrees(base.mode());
    let build = |(degree, mode): (usize, Mode)| Scale::new(base.degree(degree), mode);
    Ok([build(a)?, build(b)?, build(c)?])
}

pub fn alternates(base: &Scale, progression: &NumericProgression) -> Result<VariationSet> {
    let [a, b, c] = alternate_scales(base)?;
    Ok(VariationSet {
        base: (base.clone(), progression.clone()),
        alternates: [
            (a, progression.clone()),
            (b, progression.clone()),
            (c, progression.clone()),
        ],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ids(set: &VariationSet) -> Vec<String> {
        set.alternates.iter().map(|(s, _)| s.id()).collect()
    }

    #[test]
    fn c_major_alternates() {
        let base = Scale::from_id("C-major").unwrap();
        let p = NumericProgression::parse("1,1,1,1", Mode::Major).unwrap();
        let set = alternates(&base, &p).unwrap();
        assert_eq!(ids(&set), ["F-major", "G-major", "A-minor"]);
        assert!(set.alternates.iter().all(|(_, q)| *q == p));
    }

    #[test]
    fn a_minor_alternates() {
        let base = Scale::from_id("A-minor").unwrap();
        let p = NumericProgression::parse("1,5,6,4", Mode::Minor).unwrap();
        let set = alternates(&base, &p).unwrap();
        assert_eq!(ids(&set), ["C-major", "D-minor", "E-minor"]);
    }

    #[test]
    fn theoretical_tonics_keep_their_spelling() {
        let base = Scale::from_id("B#-major").unwrap();
        let [a, b, c] = alternate_scales(&base).unwrap();
        assert_eq!(a.id(), "E#-major");
        assert_eq!(b.id(), "F##-major");
        assert_eq!(c.id(), "G##-minor");
    }
}
