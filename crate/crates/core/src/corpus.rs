//! PIN corpora: extraction from raw password dumps, deterministic
//! train/test splitting, and the one-PIN-per-line corpus file format.

use std::fmt;
use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{PinlabError, Result};

/// Number of digit values per position.
pub const DIGITS: usize = 10;
/// Number of positions in a PIN.
pub const PIN_LEN: usize = 4;
/// Number of distinct 4-digit PINs.
pub const PIN_SPACE: usize = 10_000;

/// A four-digit PIN. Leading zeros are significant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pin([u8; PIN_LEN]);

impl Pin {
    pub fn new(digits: [u8; PIN_LEN]) -> Result<Self> {
        if let Some(d) = digits.iter().find(|&&d| d as usize >= DIGITS) {
            return Err(PinlabError::InvalidArgument(format!("digit {d} out of range 0..=9")));
        }
        Ok(Pin(digits))
    }

    /// Inverse of [`Pin::index`]. Panics if `index >= 10_000`.
    pub fn from_index(index: usize) -> Self {
        assert!(index < PIN_SPACE, "pin index {index} out of range");
        Pin([
            (index / 1000) as u8,
            (index / 100 % 10) as u8,
            (index / 10 % 10) as u8,
            (index % 10) as u8,
        ])
    }

    /// The PIN read as a decimal number, `0..10_000`.
    #[inline]
    pub fn index(self) -> usize {
        let [a, b, c, d] = self.0;
        a as usize * 1000 + b as usize * 100 + c as usize * 10 + d as usize
    }

    #[inline]
    pub fn digits(self) -> [u8; PIN_LEN] {
        self.0
    }

    /// Digit at zero-based position `pos`.
    #[inline]
    pub fn digit(self, pos: usize) -> u8 {
        self.0[pos]
    }

    fn from_ascii(bytes: &[u8]) -> Option<Self> {
        if bytes.len() != PIN_LEN || !bytes.iter().all(u8::is_ascii_digit) {
            return None;
        }
        Some(Pin([
            bytes[0] - b'0',
            bytes[1] - b'0',
            bytes[2] - b'0',
            bytes[3] - b'0',
        ]))
    }
}

impl fmt::Display for Pin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.0;
        write!(f, "{a}{b}{c}{d}")
    }
}

impl FromStr for Pin {
    type Err = PinlabError;

    fn from_str(s: &str) -> Result<Self> {
        Pin::from_ascii(s.as_bytes())
            .ok_or_else(|| PinlabError::InvalidArgument(format!("{s:?} is not exactly four ASCII digits")))
    }
}

/// An ordered multiset of PINs. Duplicates and extraction order are kept.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Corpus {
    pins: Vec<Pin>,
}

impl Corpus {
    pub fn new(pins: Vec<Pin>) -> Self {
        Corpus { pins }
    }

    pub fn pins(&self) -> &[Pin] {
        &self.pins
    }

    pub fn len(&self) -> usize {
        self.pins.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pins.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Pin> {
        self.pins.iter()
    }

    pub fn into_pins(self) -> Vec<Pin> {
        self.pins
    }

    /// FNV-1a (64-bit) over the canonical file encoding of the corpus.
    pub fn fingerprint(&self) -> u64 {
        const OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
        const PRIME: u64 = 0x0000_0100_0000_01b3;
        let mut hash = OFFSET;
        for pin in &self.pins {
            for byte in pin.digits().iter().map(|d| b'0' + d).chain(*b"\n") {
                hash ^= byte as u64;
                hash = hash.wrapping_mul(PRIME);
            }
        }
        hash
    }
}

impl From<Vec<Pin>> for Corpus {
    fn from(pins: Vec<Pin>) -> Self {
        Corpus { pins }
    }
}

impl FromIterator<Pin> for Corpus {
    fn from_iter<T: IntoIterator<Item = Pin>>(iter: T) -> Self {
        Corpus {
            pins: iter.into_iter().collect(),
        }
    }
}

impl<'a> IntoIterator for &'a Corpus {
    type Item = &'a Pin;
    type IntoIter = std::slice::Iter<'a, Pin>;

    fn into_iter(self) -> Self::IntoIter {
        self.pins.iter()
    }
}

// ---------------------------------------------------------------------------
// Extraction
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ExtractStats {
    pub lines_read: u64,
    /// Lines dropped because they were not valid UTF-8.
    pub lines_skipped: u64,
    pub pins_extracted: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Extraction {
    pub corpus: Corpus,
    pub stats: ExtractStats,
}

/// Appends every maximal run of exactly four ASCII digits in `line`.
///
/// Runs of any other length contribute nothing: `"12345"` yields no PIN.
pub fn extract_from_line(line: &str, out: &mut Vec<Pin>) {
    let bytes = line.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        if !bytes[i].is_ascii_digit() {
            i += 1;
            continue;
        }
        let start = i;
        while i < bytes.len() && bytes[i].is_ascii_digit() {
            i += 1;
        }
        if let Some(pin) = Pin::from_ascii(&bytes[start..i]) {
            out.push(pin);
        }
    }
}

/// Extracts PINs from raw dump lines. Lines that are not valid UTF-8 are
/// skipped and tallied, never fatal.
pub fn extract_pins<I, L>(lines: I) -> Extraction
where
    I: IntoIterator<Item = L>,
    L: AsRef<[u8]>,
{
    let mut pins = Vec::new();
    let mut stats = ExtractStats::default();
    for line in lines {
        stats.lines_read += 1;
        match std::str::from_utf8(line.as_ref()) {
            Ok(text) => extract_from_line(text, &mut pins),
            Err(_) => stats.lines_skipped += 1,
        }
    }
    stats.pins_extracted = pins.len() as u64;
    Extraction {
        corpus: Corpus::new(pins),
        stats,
    }
}

/// Streams a dump from `reader`, splitting on LF and dropping a trailing CR.
pub fn extract_from_reader<R: BufRead>(mut reader: R) -> io::Result<Extraction> {
    let mut pins = Vec::new();
    let mut stats = ExtractStats::default();
    let mut buf = Vec::new();
    loop {
        buf.clear();
        if reader.read_until(b'\n', &mut buf)? == 0 {
            break;
        }
        let mut line = buf.as_slice();
        if let Some(rest) = line.strip_suffix(b"\n") {
            line = rest;
        }
        if let Some(rest) = line.strip_suffix(b"\r") {
            line = rest;
        }
        stats.lines_read += 1;
        match std::str::from_utf8(line) {
            Ok(text) => extract_from_line(text, &mut pins),
            Err(_) => stats.lines_skipped += 1,
        }
    }
    stats.pins_extracted = pins.len() as u64;
    Ok(Extraction {
        corpus: Corpus::new(pins),
        stats,
    })
}

// ---------------------------------------------------------------------------
// Splitting
// ---------------------------------------------------------------------------

/// SplitMix64 generator. Small, fast, and with a fully specified output
/// stream, so splits are reproducible across platforms and implementations.
#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    /// Value in `0..bound` by 128-bit multiply-high reduction.
    pub fn below(&mut self, bound: u64) -> u64 {
        debug_assert!(bound > 0);
        ((self.next_u64() as u128 * bound as u128) >> 64) as u64
    }
}

/// Fraction of records assigned to the training split, kept as an exact
/// reduced rational so `floor(fraction * n)` has no rounding surprises.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TrainFraction {
    num: u64,
    den: u64,
}

impl TrainFraction {
    pub fn new(num: u64, den: u64) -> Result<Self> {
        if den == 0 || num == 0 || num >= den {
            return Err(PinlabError::InvalidArgument(format!(
                "train fraction {num}/{den} must lie strictly between 0 and 1"
            )));
        }
        let g = gcd(num, den);
        Ok(TrainFraction {
            num: num / g,
            den: den / g,
        })
    }

    pub fn numerator(self) -> u64 {
        self.num
    }

    pub fn denominator(self) -> u64 {
        self.den
    }

    pub fn as_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// `floor(fraction * n)`.
    pub fn train_len(self, n: usize) -> usize {
        (n as u128 * self.num as u128 / self.den as u128) as usize
    }
}

impl Default for TrainFraction {
    fn default() -> Self {
        TrainFraction { num: 4, den: 5 }
    }
}

impl fmt::Display for TrainFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// Accepts `"a/b"` or a plain decimal such as `"0.8"`.
impl FromStr for TrainFraction {
    type Err = PinlabError;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || PinlabError::InvalidArgument(format!("cannot parse train fraction {s:?}"));
        let s = s.trim();
        if let Some((n, d)) = s.split_once('/') {
            let n = n.trim().parse().map_err(|_| bad())?;
            let d = d.trim().parse().map_err(|_| bad())?;
            return TrainFraction::new(n, d);
        }
        let (int, frac) = s.split_once('.').unwrap_or((s, ""));
        if int.is_empty() && frac.is_empty()
            || !int.bytes().all(|b| b.is_ascii_digit())
            || !frac.bytes().all(|b| b.is_ascii_digit())
            || frac.len() > 18
        {
            return Err(bad());
        }
        let den = 10u64.pow(frac.len() as u32);
        let int: u64 = if int.is_empty() {
            0
        } else {
            int.parse().map_err(|_| bad())?
        };
        let frac: u64 = if frac.is_empty() {
            0
        } else {
            frac.parse().map_err(|_| bad())?
        };
        let num = int.checked_mul(den).and_then(|v| v.checked_add(frac)).ok_or_else(bad)?;
        TrainFraction::new(num, den)
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SplitConfig {
    pub train_fraction: TrainFraction,
    pub seed: u64,
}

impl Default for SplitConfig {
    fn default() -> Self {
        SplitConfig {
            train_fraction: TrainFraction::default(),
            seed: 39,
        }
    }
}

/// Fisher–Yates permutation of `0..n` driven by [`SplitMix64`].
pub fn shuffled_indices(n: usize, seed: u64) -> Vec<usize> {
    let mut rng = SplitMix64::new(seed);
    let mut idx: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.below(i as u64 + 1) as usize;
        idx.swap(i, j);
    }
    idx
}

/// Shuffles record indices and cuts at `floor(train_fraction * n)`.
pub fn split_corpus(corpus: &Corpus, config: &SplitConfig) -> Result<(Corpus, Corpus)> {
    if corpus.is_empty() {
        return Err(PinlabError::EmptyCorpus);
    }
    let order = shuffled_indices(corpus.len(), config.seed);
    let cut = config.train_fraction.train_len(corpus.len());
    let pick = |ix: &[usize]| ix.iter().map(|&i| corpus.pins[i]).collect::<Corpus>();
    Ok((pick(&order[..cut]), pick(&order[cut..])))
}

// ---------------------------------------------------------------------------
// Corpus files
// ---------------------------------------------------------------------------

pub fn write_corpus<W: Write>(corpus: &Corpus, mut writer: W) -> io::Result<()> {
    for pin in corpus {
        writeln!(writer, "{pin}")?;
    }
    writer.flush()
}

/// Reads one PIN per line. Any line that is not exactly four ASCII digits
/// is an error naming its 1-based line number.
pub fn read_corpus<R: BufRead>(reader: R) -> Result<Corpus> {
    let mut pins = Vec::new();
    for (i, line) in reader.split(b'\n').enumerate() {
        let line = line.map_err(|e| PinlabError::io("<reader>", e))?;
        let line = line.strip_suffix(b"\r").unwrap_or(&line);
        let pin = Pin::from_ascii(line).ok_or_else(|| {
            PinlabError::format(
                i + 1,
                format!(
                    "expected exactly four ASCII digits, found {:?}",
                    String::from_utf8_lossy(line)
                ),
            )
        })?;
        pins.push(pin);
    }
    Ok(Corpus::new(pins))
}

pub fn save_corpus(corpus: &Corpus, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| PinlabError::io(path, e))?;
    write_corpus(corpus, BufWriter::new(file)).map_err(|e| PinlabError::io(path, e))
}

pub fn load_corpus(path: impl AsRef<Path>) -> Result<Corpus> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| PinlabError::io(path, e))?;
    read_corpus(BufReader::new(file)).map_err(|e| match e {
        PinlabError::Io { source, .. } => PinlabError::io(path, source),
        other => other,
    })
}
