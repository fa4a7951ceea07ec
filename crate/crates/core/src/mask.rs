//! Masking scenarios: which positions are hidden, what was observed, and
//! the candidate fillings of the hidden positions.
//!
//! Positions are zero-based in code (`0..4`) and rendered one-based in
//! labels (`d1`..`d4`). A candidate for `k` missing positions is stored as
//! its digits read as a `k`-digit decimal number, so ascending candidate
//! index is ascending lexicographic order of the digit tuple.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::corpus::{Pin, DIGITS, PIN_LEN};
use crate::error::{PinlabError, Result};

const POW10: [usize; 5] = [1, 10, 100, 1000, 10_000];

/// Set of missing positions; between one and three of the four.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MaskPattern {
    bits: u8,
}

impl MaskPattern {
    pub fn from_bits(bits: u8) -> Result<Self> {
        if bits == 0 || bits >= 0b1111 {
            return Err(PinlabError::InvalidPattern(format!(
                "missing set must be a non-empty proper subset of the four positions (bits {bits:#06b})"
            )));
        }
        Ok(MaskPattern { bits })
    }

    /// Builds a pattern from zero-based missing positions.
    pub fn from_missing(positions: &[usize]) -> Result<Self> {
        let mut bits = 0u8;
        for &p in positions {
            if p >= PIN_LEN {
                return Err(PinlabError::InvalidPattern(format!("position {p} out of range")));
            }
            bits |= 1 << p;
        }
        MaskPattern::from_bits(bits)
    }

    /// All 14 scenarios: one, then two, then three missing digits, each
    /// group in lexicographic order of the missing positions.
    pub fn all() -> Vec<MaskPattern> {
        let mut all: Vec<MaskPattern> = (1u8..15).map(|bits| MaskPattern { bits }).collect();
        all.sort_by_key(|p| (p.missing_count(), p.missing().collect::<Vec<_>>()));
        all
    }

    pub fn bits(self) -> u8 {
        self.bits
    }

    pub fn missing_count(self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn observed_count(self) -> usize {
        PIN_LEN - self.missing_count()
    }

    pub fn is_missing(self, pos: usize) -> bool {
        pos < PIN_LEN && self.bits & (1 << pos) != 0
    }

    /// Zero-based missing positions, ascending.
    pub fn missing(self) -> impl Iterator<Item = usize> {
        (0..PIN_LEN).filter(move |&p| self.bits & (1 << p) != 0)
    }

    /// Zero-based observed positions, ascending.
    pub fn observed(self) -> impl Iterator<Item = usize> {
        (0..PIN_LEN).filter(move |&p| self.bits & (1 << p) == 0)
    }

    /// `10^|M|`.
    pub fn candidate_space(self) -> usize {
        POW10[self.missing_count()]
    }

    /// Number of distinct contexts, `10^|O|`.
    pub fn context_space(self) -> usize {
        POW10[self.observed_count()]
    }

    /// The hidden digits of `pin` as a candidate.
    pub fn truth(self, pin: Pin) -> Candidate {
        Candidate {
            len: self.missing_count() as u8,
            index: pack(self.missing(), pin) as u16,
        }
    }

    /// The observed digits of `pin` packed as a decimal number.
    pub fn context_index(self, pin: Pin) -> usize {
        pack(self.observed(), pin)
    }

    /// Names the missing digits, e.g. `d1d3`.
    pub fn target_label(self) -> String {
        self.missing().map(|p| format!("d{}", p + 1)).collect()
    }

    /// e.g. `d1d3|d2d4`.
    pub fn label(self) -> String {
        let known: String = self.observed().map(|p| format!("d{}", p + 1)).collect();
        format!("{}|{}", self.target_label(), known)
    }
}

fn pack(positions: impl Iterator<Item = usize>, pin: Pin) -> usize {
    positions.fold(0, |acc, p| acc * DIGITS + pin.digit(p) as usize)
}

impl fmt::Debug for MaskPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MaskPattern({})", self.label())
    }
}

impl fmt::Display for MaskPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl Serialize for MaskPattern {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.label())
    }
}

fn parse_positions(s: &str) -> Option<u8> {
    let bytes = s.as_bytes();
    if bytes.is_empty() || !bytes.len().is_multiple_of(2) {
        return None;
    }
    let mut bits = 0u8;
    for chunk in bytes.chunks(2) {
        match chunk {
            [b'd' | b'D', n @ b'1'..=b'4'] => {
                let bit = 1 << (n - b'1');
                if bits & bit != 0 {
                    return None;
                }
                bits |= bit;
            }
            _ => return None,
        }
    }
    Some(bits)
}

/// Accepts the missing positions (`d1d2`) or a full label (`d1d2|d3d4`).
impl FromStr for MaskPattern {
    type Err = PinlabError;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || PinlabError::InvalidPattern(format!("cannot parse scenario {s:?}"));
        let s = s.trim();
        let (target, known) = match s.split_once('|') {
            Some((t, k)) => (t, Some(k)),
            None => (s, None),
        };
        let bits = parse_positions(target).ok_or_else(bad)?;
        if let Some(known) = known {
            let known = parse_positions(known).ok_or_else(bad)?;
            if known != !bits & 0b1111 {
                return Err(bad());
            }
        }
        MaskPattern::from_bits(bits)
    }
}

/// One filling of the missing positions of some pattern.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Candidate {
    len: u8,
    index: u16,
}

impl Candidate {
    pub fn new(len: usize, index: usize) -> Result<Self> {
        if !(1..PIN_LEN).contains(&len) || index >= POW10[len] {
            return Err(PinlabError::InvalidCandidate(format!(
                "index {index} out of range for {len} digits"
            )));
        }
        Ok(Candidate {
            len: len as u8,
            index: index as u16,
        })
    }

    pub fn from_digits(digits: &[u8]) -> Result<Self> {
        if digits.iter().any(|&d| d as usize >= DIGITS) {
            return Err(PinlabError::InvalidCandidate(format!("{digits:?} has a non-digit")));
        }
        let index = digits.iter().fold(0usize, |acc, &d| acc * DIGITS + d as usize);
        Candidate::new(digits.len(), index)
    }

    #[allow(clippy::len_without_is_empty)]
    pub fn len(self) -> usize {
        self.len as usize
    }

    pub fn index(self) -> usize {
        self.index as usize
    }

    /// `i`-th digit, in ascending position order.
    pub fn digit(self, i: usize) -> u8 {
        assert!(i < self.len());
        ((self.index as usize / POW10[self.len() - 1 - i]) % DIGITS) as u8
    }

    pub fn digits(self) -> Vec<u8> {
        (0..self.len()).map(|i| self.digit(i)).collect()
    }
}

impl fmt::Display for Candidate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:0width$}", self.index, width = self.len())
    }
}

impl fmt::Debug for Candidate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Candidate({self})")
    }
}

/// Partial PIN: a pattern plus the digits seen at its observed positions.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Observation {
    pattern: MaskPattern,
    // missing slots hold 0
    digits: [u8; PIN_LEN],
}

impl Observation {
    /// `values` must be `Some` exactly at the pattern's observed positions.
    pub fn new(pattern: MaskPattern, values: [Option<u8>; PIN_LEN]) -> Result<Self> {
        let mut digits = [0u8; PIN_LEN];
        for (pos, value) in values.iter().enumerate() {
            match (pattern.is_missing(pos), value) {
                (true, None) => {}
                (false, Some(d)) if (*d as usize) < DIGITS => digits[pos] = *d,
                (false, Some(d)) => {
                    return Err(PinlabError::InvalidObservation(format!(
                        "digit {d} out of range at d{}",
                        pos + 1
                    )))
                }
                (true, Some(_)) | (false, None) => {
                    return Err(PinlabError::InvalidObservation(format!(
                        "observed values do not match pattern {pattern} at d{}",
                        pos + 1
                    )))
                }
            }
        }
        Ok(Observation { pattern, digits })
    }

    /// Hides the pattern's missing positions of `pin`.
    pub fn mask(pin: Pin, pattern: MaskPattern) -> Self {
        let mut digits = pin.digits();
        for p in pattern.missing() {
            digits[p] = 0;
        }
        Observation { pattern, digits }
    }

    /// Inverse of [`Observation::context_index`].
    pub fn from_context(pattern: MaskPattern, context: usize) -> Result<Self> {
        if context >= pattern.context_space() {
            return Err(PinlabError::InvalidObservation(format!(
                "context {context} out of range for {pattern}"
            )));
        }
        let mut digits = [0u8; PIN_LEN];
        let observed: Vec<usize> = pattern.observed().collect();
        let mut rest = context;
        for &p in observed.iter().rev() {
            digits[p] = (rest % DIGITS) as u8;
            rest /= DIGITS;
        }
        Ok(Observation { pattern, digits })
    }

    pub fn pattern(&self) -> MaskPattern {
        self.pattern
    }

    pub fn observed(&self, pos: usize) -> Option<u8> {
        (pos < PIN_LEN && !self.pattern.is_missing(pos)).then(|| self.digits[pos])
    }

    pub fn context_index(&self) -> usize {
        self.pattern
            .observed()
            .fold(0, |acc, p| acc * DIGITS + self.digits[p] as usize)
    }

    /// Full PIN obtained by writing candidate `index` into the missing slots.
    #[inline]
    pub fn complete_index(&self, index: usize) -> Pin {
        let mut digits = self.digits;
        let mut rest = index;
        for p in (0..PIN_LEN).rev() {
            if self.pattern.is_missing(p) {
                digits[p] = (rest % DIGITS) as u8;
                rest /= DIGITS;
            }
        }
        Pin::new(digits).expect("digits in range")
    }

    pub fn complete(&self, candidate: Candidate) -> Result<Pin> {
        self.check_candidate(candidate)?;
        Ok(self.complete_index(candidate.index()))
    }

    pub(crate) fn check_candidate(&self, candidate: Candidate) -> Result<()> {
        if candidate.len() != self.pattern.missing_count() {
            return Err(PinlabError::InvalidCandidate(format!(
                "candidate {candidate} has {} digits, pattern {} needs {}",
                candidate.len(),
                self.pattern,
                self.pattern.missing_count()
            )));
        }
        Ok(())
    }
}

impl fmt::Display for Observation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for pos in 0..PIN_LEN {
            match self.observed(pos) {
                Some(d) => write!(f, "{d}")?,
                None => f.write_str("?")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Observation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Observation({self})")
    }
}

/// Parses wildcard notation: four characters over `0-9` and `?`, with one
/// to three `?`, e.g. `?2?4`.
impl FromStr for Observation {
    type Err = PinlabError;

    fn from_str(s: &str) -> Result<Self> {
        let bytes = s.as_bytes();
        if bytes.len() != PIN_LEN {
            return Err(PinlabError::InvalidObservation(format!(
                "{s:?} must be exactly four characters over 0-9 and '?'"
            )));
        }
        let mut values = [None; PIN_LEN];
        let mut bits = 0u8;
        for (pos, &b) in bytes.iter().enumerate() {
            match b {
                b'?' => bits |= 1 << pos,
                b'0'..=b'9' => values[pos] = Some(b - b'0'),
                _ => {
                    return Err(PinlabError::InvalidObservation(format!(
                        "unexpected character {:?} in {s:?}",
                        b as char
                    )))
                }
            }
        }
        let pattern = MaskPattern::from_bits(bits)
            .map_err(|_| PinlabError::InvalidObservation(format!("{s:?} must hide between one and three digits")))?;
        Observation::new(pattern, values)
    }
}
