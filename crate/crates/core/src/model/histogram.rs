use rayon::prelude::*;

use crate::corpus::{Corpus, Pin, DIGITS, PIN_LEN, PIN_SPACE};

const SHARD: usize = 1 << 16;

/// Joint count of every 4-digit sequence. Every context and digit count the
/// models use is a marginalization of this table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PinHistogram {
    counts: Vec<u64>,
    total_pins: u64,
    pooled_digit_counts: [u64; DIGITS],
    total_digit_slots: u64,
}

impl Default for PinHistogram {
    fn default() -> Self {
        PinHistogram {
            counts: vec![0; PIN_SPACE],
            total_pins: 0,
            pooled_digit_counts: [0; DIGITS],
            total_digit_slots: 0,
        }
    }
}

impl PinHistogram {
    pub fn new() -> Self {
        Self::default()
    }

    /// Counts `pins`. Large inputs are sharded across threads; shards merge
    /// by integer addition, so the result does not depend on scheduling.
    pub fn from_pins(pins: &[Pin]) -> Self {
        if pins.len() <= SHARD {
            let mut h = PinHistogram::new();
            pins.iter().for_each(|&p| h.add(p, 1));
            return h;
        }
        pins.par_chunks(SHARD)
            .map(|chunk| {
                let mut h = PinHistogram::new();
                chunk.iter().for_each(|&p| h.add(p, 1));
                h
            })
            .reduce(PinHistogram::new, |mut a, b| {
                a.merge(&b);
                a
            })
    }

    pub fn from_corpus(corpus: &Corpus) -> Self {
        Self::from_pins(corpus.pins())
    }

    pub fn add(&mut self, pin: Pin, n: u64) {
        self.counts[pin.index()] += n;
        self.total_pins += n;
        for d in pin.digits() {
            self.pooled_digit_counts[d as usize] += n;
        }
        self.total_digit_slots += PIN_LEN as u64 * n;
    }

    pub fn merge(&mut self, other: &PinHistogram) {
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        self.total_pins += other.total_pins;
        for (a, b) in self.pooled_digit_counts.iter_mut().zip(&other.pooled_digit_counts) {
            *a += b;
        }
        self.total_digit_slots += other.total_digit_slots;
    }

    #[inline]
    pub fn count(&self, pin: Pin) -> u64 {
        self.counts[pin.index()]
    }

    /// Dense counts indexed by [`Pin::index`].
    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Entries with a non-zero count, ascending by PIN.
    pub fn nonzero(&self) -> impl Iterator<Item = (Pin, u64)> + '_ {
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(i, &c)| (Pin::from_index(i), c))
    }

    pub fn total_pins(&self) -> u64 {
        self.total_pins
    }

    pub fn pooled_digit_counts(&self) -> &[u64; DIGITS] {
        &self.pooled_digit_counts
    }

    pub fn total_digit_slots(&self) -> u64 {
        self.total_digit_slots
    }

    pub fn is_empty(&self) -> bool {
        self.total_pins == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn corpus(list: &[&str]) -> Corpus {
        list.iter().map(|s| s.parse::<Pin>().unwrap()).collect()
    }

    #[test]
    fn tiny_corpus_counts() {
        let h = PinHistogram::from_corpus(&corpus(&["1234", "1234", "1235", "9876"]));
        let nz: Vec<(String, u64)> = h.nonzero().map(|(p, c)| (p.to_string(), c)).collect();
        assert_eq!(nz, vec![("1234".into(), 2), ("1235".into(), 1), ("9876".into(), 1)]);
        assert_eq!(h.total_pins(), 4);
        assert_eq!(h.pooled_digit_counts(), &[0, 3, 3, 3, 2, 1, 1, 1, 1, 1]);
        assert_eq!(h.total_digit_slots(), 16);
    }

    #[test]
    fn empty_and_duplicates() {
        let h = PinHistogram::from_corpus(&Corpus::default());
        assert!(h.is_empty());
        assert_eq!(h.total_digit_slots(), 0);
        assert!(h.counts().iter().all(|&c| c == 0));

        let h = PinHistogram::from_corpus(&corpus(&["7777"; 5]));
        assert_eq!(h.nonzero().collect::<Vec<_>>(), vec![("7777".parse().unwrap(), 5)]);
        assert_eq!(h.pooled_digit_counts()[7], 20);
    }

    #[test]
    fn sharded_counting_matches_sequential() {
        let pins: Vec<Pin> = (0..200_000).map(|i| Pin::from_index((i * 7919) % PIN_SPACE)).collect();
        let mut seq = PinHistogram::new();
        pins.iter().for_each(|&p| seq.add(p, 1));
        assert_eq!(PinHistogram::from_pins(&pins), seq);
    }
}
