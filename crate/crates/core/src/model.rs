//! Domain types: interned alphabet, indeterminate strings with contig
//! structure, anchored intervals and search parameters.
//!
//! Positions are 1-based everywhere in the public API.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense character identifier handed out by an [`Alphabet`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CharId(pub u32);

impl CharId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Bijection between external character labels and dense [`CharId`]s.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Alphabet {
    labels: Vec<String>,
    ids: HashMap<String, CharId>,
}

impl Alphabet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns the id of `label`, minting the next dense id on first sight.
    pub fn intern(&mut self, label: &str) -> Result<CharId> {
        if label.is_empty() {
            return Err(Error::BadLabel("empty character label".into()));
        }
        if let Some(&id) = self.ids.get(label) {
            return Ok(id);
        }
        let id = CharId(self.labels.len() as u32);
        self.labels.push(label.to_owned());
        self.ids.insert(label.to_owned(), id);
        Ok(id)
    }

    pub fn get(&self, label: &str) -> Option<CharId> {
        self.ids.get(label).copied()
    }

    pub fn label(&self, id: CharId) -> &str {
        &self.labels[id.index()]
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.labels.iter().map(String::as_str)
    }
}

/// A string whose positions carry non-empty sets of characters.
///
/// `breaks` holds positions `p` such that a contig boundary lies between
/// `p` and `p + 1`. Intervals never straddle a boundary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndeterminateString {
    id: String,
    positions: Vec<Vec<CharId>>,
    breaks: BTreeSet<usize>,
    /// contig index per position, 0-based storage
    contig: Vec<u32>,
    /// 1-based (start, end) of every contig
    contigs: Vec<(usize, usize)>,
}

impl IndeterminateString {
    /// Validates and builds a string from already interned position sets.
    pub fn new(
        id: impl Into<String>,
        positions: Vec<Vec<CharId>>,
        breaks: impl IntoIterator<Item = usize>,
    ) -> Result<Self> {
        let id = id.into();
        if id.is_empty() {
            return Err(Error::Validation("string id must not be empty".into()));
        }
        if positions.is_empty() {
            return Err(Error::Validation(format!("string {id} has no positions")));
        }
        let mut sets = Vec::with_capacity(positions.len());
        for (p, mut set) in positions.into_iter().enumerate() {
            if set.is_empty() {
                return Err(Error::Validation(format!(
                    "string {id}: position {} has an empty character set",
                    p + 1
                )));
            }
            set.sort_unstable();
            set.dedup();
            sets.push(set);
        }
        let n = sets.len();
        let breaks: BTreeSet<usize> = breaks.into_iter().collect();
        if let Some(&b) = breaks.iter().find(|&&b| b == 0 || b >= n) {
            return Err(Error::Validation(format!(
                "string {id}: contig break after position {b} is outside [1, {}]",
                n.saturating_sub(1)
            )));
        }

        let mut contig = Vec::with_capacity(n);
        let mut contigs = Vec::with_capacity(breaks.len() + 1);
        let mut start = 1;
        for &b in breaks.iter().chain(std::iter::once(&n)) {
            let c = contigs.len() as u32;
            contig.extend(std::iter::repeat(c).take(b + 1 - start));
            contigs.push((start, b));
            start = b + 1;
        }

        Ok(Self {
            id,
            positions: sets,
            breaks,
            contig,
            contigs,
        })
    }

    /// Interns `labels` into `alphabet` and builds the string.
    pub fn from_labels<S: AsRef<str>>(
        alphabet: &mut Alphabet,
        id: impl Into<String>,
        positions: &[Vec<S>],
        breaks: impl IntoIterator<Item = usize>,
    ) -> Result<Self> {
        let sets = positions
            .iter()
            .map(|set| {
                set.iter()
                    .map(|l| alphabet.intern(l.as_ref()))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(id, sets, breaks)
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    /// Number of positions, `|S|`.
    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    /// Total number of characters over all positions, `‖S‖`.
    pub fn cardinality(&self) -> usize {
        self.positions.iter().map(Vec::len).sum()
    }

    /// Character set at 1-based position `p`.
    #[inline]
    pub fn at(&self, p: usize) -> &[CharId] {
        &self.positions[p - 1]
    }

    pub fn positions(&self) -> &[Vec<CharId>] {
        &self.positions
    }

    pub fn breaks(&self) -> &BTreeSet<usize> {
        &self.breaks
    }

    /// Contig index of 1-based position `p`.
    #[inline]
    pub fn contig_of(&self, p: usize) -> u32 {
        self.contig[p - 1]
    }

    /// 1-based inclusive bounds of the contig holding `p`.
    #[inline]
    pub fn contig_bounds(&self, p: usize) -> (usize, usize) {
        self.contigs[self.contig[p - 1] as usize]
    }

    pub fn contigs(&self) -> &[(usize, usize)] {
        &self.contigs
    }

    /// True iff `[i, j]` lies inside the string and inside one contig.
    pub fn is_valid_interval(&self, i: usize, j: usize) -> bool {
        i >= 1 && i <= j && j <= self.len() && self.contig_of(i) == self.contig_of(j)
    }

    fn check_range(&self, i: usize, j: usize) -> Result<()> {
        if i >= 1 && i <= j && j <= self.len() {
            Ok(())
        } else {
            Err(Error::Range {
                start: i,
                end: j,
                len: self.len(),
            })
        }
    }

    /// Union of the position sets `S[i..=j]`, sorted.
    pub fn char_set(&self, i: usize, j: usize) -> Result<Vec<CharId>> {
        self.check_range(i, j)?;
        Ok(union_sorted(self.positions[i - 1..j].iter()))
    }

    /// Union of all position sets, `C(S)`.
    pub fn full_char_set(&self) -> Vec<CharId> {
        union_sorted(self.positions.iter())
    }
}

pub(crate) fn union_sorted<'a>(sets: impl Iterator<Item = &'a Vec<CharId>>) -> Vec<CharId> {
    let mut out: Vec<CharId> = sets.flatten().copied().collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// True iff two sorted character lists share an element.
pub(crate) fn intersects(a: &[CharId], b: &[CharId]) -> bool {
    let (mut x, mut y) = (0, 0);
    while x < a.len() && y < b.len() {
        match a[x].cmp(&b[y]) {
            std::cmp::Ordering::Less => x += 1,
            std::cmp::Ordering::Greater => y += 1,
            std::cmp::Ordering::Equal => return true,
        }
    }
    false
}

pub(crate) fn intersection(a: &[CharId], b: &[CharId]) -> Vec<CharId> {
    let (mut x, mut y) = (0, 0);
    let mut out = Vec::new();
    while x < a.len() && y < b.len() {
        match a[x].cmp(&b[y]) {
            std::cmp::Ordering::Less => x += 1,
            std::cmp::Ordering::Greater => y += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[x]);
                x += 1;
                y += 1;
            }
        }
    }
    out
}

/// A collection of indeterminate strings over one alphabet.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Dataset {
    alphabet: Alphabet,
    strings: Vec<IndeterminateString>,
}

impl Dataset {
    pub fn new(alphabet: Alphabet) -> Self {
        Self {
            alphabet,
            strings: Vec::new(),
        }
    }

    /// Builds a dataset from label lists; each string is `(id, positions, breaks)`.
    pub fn from_labels<S: AsRef<str>>(strings: &[(&str, Vec<Vec<S>>, Vec<usize>)]) -> Result<Self> {
        let mut alphabet = Alphabet::new();
        let mut built = Vec::with_capacity(strings.len());
        for (id, positions, breaks) in strings {
            built.push(IndeterminateString::from_labels(
                &mut alphabet,
                *id,
                positions,
                breaks.iter().copied(),
            )?);
        }
        let mut ds = Dataset::new(alphabet);
        for s in built {
            ds.push(s)?;
        }
        Ok(ds)
    }

    pub fn push(&mut self, s: IndeterminateString) -> Result<()> {
        if self.strings.iter().any(|t| t.id == s.id) {
            return Err(Error::Validation(format!("duplicate string id {}", s.id)));
        }
        if let Some(c) = s.positions.iter().flatten().find(|c| c.index() >= self.alphabet.len()) {
            return Err(Error::Validation(format!(
                "string {} uses character id {} outside the alphabet",
                s.id, c.0
            )));
        }
        self.strings.push(s);
        Ok(())
    }

    /// The strings at `indices`, in that order, over the same alphabet.
    pub fn select(&self, indices: &[usize]) -> Result<Self> {
        let mut ds = Dataset::new(self.alphabet.clone());
        for &x in indices {
            let s = self
                .strings
                .get(x)
                .ok_or_else(|| Error::Validation(format!("no string with index {x}")))?;
            ds.push(s.clone())?;
        }
        Ok(ds)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn alphabet_mut(&mut self) -> &mut Alphabet {
        &mut self.alphabet
    }

    pub fn strings(&self) -> &[IndeterminateString] {
        &self.strings
    }

    #[inline]
    pub fn string(&self, x: usize) -> &IndeterminateString {
        &self.strings[x]
    }

    /// Number of strings, `m`.
    pub fn len(&self) -> usize {
        self.strings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.strings.is_empty()
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.strings.iter().position(|s| s.id == id)
    }

    pub fn interval(&self, string: usize, start: usize, end: usize) -> Result<Interval> {
        let s = self
            .strings
            .get(string)
            .ok_or_else(|| Error::Validation(format!("no string with index {string}")))?;
        if !s.is_valid_interval(start, end) {
            return Err(Error::Range {
                start,
                end,
                len: s.len(),
            });
        }
        Ok(Interval { string, start, end })
    }

    /// Character set of an interval.
    pub fn char_set_of(&self, iv: &Interval) -> Vec<CharId> {
        union_sorted(self.strings[iv.string].positions[iv.start - 1..iv.end].iter())
    }

    /// `ID[i,j]` rendering used by the text outputs.
    pub fn display_interval(&self, iv: &Interval) -> String {
        format!("{}[{},{}]", self.strings[iv.string].id, iv.start, iv.end)
    }
}

/// An interval `[start, end]` (1-based, inclusive) of one string of a dataset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Interval {
    pub string: usize,
    pub start: usize,
    pub end: usize,
}

impl Interval {
    pub fn new(string: usize, start: usize, end: usize) -> Self {
        Self { string, start, end }
    }

    pub fn len(&self) -> usize {
        self.end + 1 - self.start
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `self` is contained in `other` and differs from it.
    pub fn is_proper_subinterval_of(&self, other: &Interval) -> bool {
        self.string == other.string
            && other.start <= self.start
            && self.end <= other.end
            && self != other
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}[{},{}]", self.string, self.start, self.end)
    }
}

/// Search parameters shared by the enumerator and the set assembler.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchParams {
    /// indel budget per pair
    pub delta: usize,
    /// minimum number of strings a reported set spans
    pub quorum: usize,
    /// minimum pair size, counted in positions sharing characters
    pub min_size: usize,
    /// cap on right-bound refinement rounds
    pub refine_iters: usize,
}

impl Default for SearchParams {
    fn default() -> Self {
        Self {
            delta: 0,
            quorum: 2,
            min_size: 0,
            refine_iters: 3,
        }
    }
}

impl SearchParams {
    pub fn new(delta: usize, quorum: usize, min_size: usize) -> Result<Self> {
        Self {
            delta,
            quorum,
            min_size,
            ..Self::default()
        }
        .validated()
    }

    pub fn with_refine_iters(mut self, iters: usize) -> Result<Self> {
        self.refine_iters = iters;
        self.validated()
    }

    pub fn validated(self) -> Result<Self> {
        if self.quorum < 2 {
            return Err(Error::Validation(format!(
                "quorum must be at least 2, got {}",
                self.quorum
            )));
        }
        if self.refine_iters < 1 {
            return Err(Error::Validation("refine iterations must be at least 1".into()));
        }
        Ok(self)
    }

    /// Errors if the quorum cannot be met by `m` strings.
    pub fn check_quorum(&self, m: usize) -> Result<()> {
        if self.quorum > m {
            return Err(Error::Validation(format!(
                "quorum {} exceeds the number of strings {m}",
                self.quorum
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn intern_is_dense_and_idempotent() {
        let mut a = Alphabet::new();
        assert_eq!(a.intern("g").unwrap(), CharId(0));
        assert_eq!(a.intern("g").unwrap(), CharId(0));
        assert_eq!(a.intern("b").unwrap(), CharId(1));
        assert_eq!(a.len(), 2);
        assert_eq!(a.label(CharId(1)), "b");
        assert!(matches!(a.intern(""), Err(Error::BadLabel(_))));
    }

    #[test]
    fn single_position_string() {
        let mut a = Alphabet::new();
        let s = IndeterminateString::from_labels(&mut a, "s", &[vec!["a"]], []).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s.cardinality(), 1);
        assert_eq!(s.char_set(1, 1).unwrap(), vec![CharId(0)]);
    }

    #[test]
    fn empty_position_rejected() {
        let mut a = Alphabet::new();
        let err = IndeterminateString::from_labels(&mut a, "s", &[vec!["a"], vec![]], []);
        assert!(matches!(err, Err(Error::Validation(_))));
    }

    #[test]
    fn breaks_must_be_inside() {
        let mut a = Alphabet::new();
        let pos = vec![vec!["a"], vec!["b"], vec!["c"]];
        assert!(IndeterminateString::from_labels(&mut a, "s", &pos, [3]).is_err());
        assert!(IndeterminateString::from_labels(&mut a, "s", &pos, [0]).is_err());
        let s = IndeterminateString::from_labels(&mut a, "s", &pos, [1]).unwrap();
        assert_eq!(s.contigs(), &[(1, 1), (2, 3)]);
        assert!(!s.is_valid_interval(1, 2));
        assert!(s.is_valid_interval(2, 3));
        assert_eq!(s.contig_bounds(3), (2, 3));
    }

    #[test]
    fn char_set_range_errors() {
        let mut a = Alphabet::new();
        let s = IndeterminateString::from_labels(&mut a, "s", &[vec!["a"], vec!["b"]], []).unwrap();
        assert!(matches!(s.char_set(2, 1), Err(Error::Range { .. })));
        assert!(matches!(s.char_set(1, 3), Err(Error::Range { .. })));
        assert!(matches!(s.char_set(0, 1), Err(Error::Range { .. })));
    }

    #[test]
    fn duplicate_ids_rejected() {
        let ds = Dataset::from_labels(&[
            ("s", vec![vec!["a"]], vec![]),
            ("s", vec![vec!["b"]], vec![]),
        ]);
        assert!(matches!(ds, Err(Error::Validation(_))));
    }

    #[test]
    fn params_validation() {
        assert!(SearchParams::new(0, 1, 0).is_err());
        assert!(SearchParams::new(0, 2, 0).is_ok());
        assert!(SearchParams::new(1, 3, 6).unwrap().with_refine_iters(0).is_err());
        assert!(SearchParams::new(1, 4, 0).unwrap().check_quorum(3).is_err());
    }
}
