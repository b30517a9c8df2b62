//! One entry point over the four modes.

use crate::dcover_lce::DcIndex;
use crate::lce_index::LceIndex;
use crate::partition_det::{build_det_with, DetConfig};
use crate::partition_rand::{build_rand_stats, build_rand_whp, WhpConfig};
use crate::serial::{self, Reader};
use crate::{Error, Mode, Result, Text};

/// An LCE index of any mode.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AnyIndex {
    Lce(LceIndex),
    Dcover(DcIndex),
}

/// Summary of a build.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BuildInfo {
    pub mode: Mode,
    pub tau: usize,
    /// `|P|`, or `|Q|` for dcover.
    pub set_size: usize,
    pub peak_aux_words: usize,
}

impl AnyIndex {
    /// Build the index for `mode`. The seed is ignored by the
    /// deterministic modes.
    pub fn build(text: &Text, tau: usize, mode: Mode, seed: u64) -> Result<(AnyIndex, BuildInfo)> {
        let (idx, peak) = match mode {
            Mode::Rand | Mode::RandWhp => {
                let b = if mode == Mode::Rand {
                    build_rand_stats(text, tau, seed)?
                } else {
                    build_rand_whp(text, tau, seed, &WhpConfig::default())?
                };
                let idx = LceIndex::build(text, &b.pset)?;
                let peak = b.peak_aux_words.max(idx.words());
                (AnyIndex::Lce(idx), peak)
            }
            Mode::Det => {
                let b = build_det_with(text, tau, &DetConfig::default())?;
                let idx = LceIndex::build(text, &b.pset)?;
                let peak = b.peak_aux_words.max(idx.words());
                (AnyIndex::Lce(idx), peak)
            }
            Mode::Dcover => {
                let idx = DcIndex::build(text, tau)?;
                let peak = idx.peak_aux_words;
                (AnyIndex::Dcover(idx), peak)
            }
        };
        let info = BuildInfo {
            mode,
            tau,
            set_size: idx.set_size(),
            peak_aux_words: peak,
        };
        Ok((idx, info))
    }

    pub fn mode(&self) -> Mode {
        match self {
            AnyIndex::Lce(i) => i.pset.mode,
            AnyIndex::Dcover(_) => Mode::Dcover,
        }
    }

    pub fn tau(&self) -> usize {
        match self {
            AnyIndex::Lce(i) => i.pset.tau,
            AnyIndex::Dcover(i) => i.params.tau,
        }
    }

    pub fn set_size(&self) -> usize {
        match self {
            AnyIndex::Lce(i) => i.pset.len(),
            AnyIndex::Dcover(i) => i.q.len(),
        }
    }

    /// `(lce, character comparisons)`.
    pub fn lce_counted(&self, text: &Text, i: usize, j: usize) -> Result<(usize, usize)> {
        match self {
            AnyIndex::Lce(x) => x.lce_stats(text, i, j).map(|q| (q.lce, q.comparisons)),
            AnyIndex::Dcover(x) => x.lce_stats(text, i, j).map(|q| (q.lce, q.comparisons)),
        }
    }

    pub fn lce(&self, text: &Text, i: usize, j: usize) -> Result<usize> {
        self.lce_counted(text, i, j).map(|q| q.0)
    }

    pub fn to_bytes(&self, text: &Text) -> Vec<u8> {
        match self {
            AnyIndex::Lce(x) => x.to_bytes(text),
            AnyIndex::Dcover(x) => x.to_bytes(text),
        }
    }

    /// Load either kind of index file.
    pub fn from_bytes(bytes: &[u8]) -> Result<(Text, AnyIndex)> {
        let h = Reader::new(bytes).header()?;
        match h.tag {
            serial::TAG_LCE => LceIndex::from_bytes(bytes).map(|(t, x)| (t, AnyIndex::Lce(x))),
            serial::TAG_DCOVER => DcIndex::from_bytes(bytes).map(|(t, x)| (t, AnyIndex::Dcover(x))),
            tag => Err(Error::Corrupt(format!("unknown section tag {tag}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn every_mode_round_trips() {
        let t = corpus::random(2000, 4, 1);
        for mode in [Mode::Rand, Mode::RandWhp, Mode::Det, Mode::Dcover] {
            let (idx, info) = AnyIndex::build(&t, 16, mode, 3).unwrap();
            assert_eq!((idx.mode(), info.set_size), (mode, idx.set_size()));
            let bytes = idx.to_bytes(&t);
            let (t2, back) = AnyIndex::from_bytes(&bytes).unwrap();
            assert_eq!((t2, back), (t.clone(), idx));
        }
        assert!(matches!(
            AnyIndex::from_bytes(b"garbage"),
            Err(Error::Corrupt(_))
        ));
    }
}
