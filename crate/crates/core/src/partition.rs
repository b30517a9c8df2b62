//! The partitioning-set type shared by every builder.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::periodicity;
use crate::{Error, Result, Text};

/// Which construction produced a set or an index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Rand,
    RandWhp,
    Det,
    Dcover,
}

impl Mode {
    pub const ALL: [Mode; 4] = [Mode::Rand, Mode::RandWhp, Mode::Det, Mode::Dcover];

    pub fn code(self) -> u8 {
        match self {
            Mode::Rand => 0,
            Mode::RandWhp => 1,
            Mode::Det => 2,
            Mode::Dcover => 3,
        }
    }

    pub fn from_code(c: u8) -> Option<Mode> {
        Mode::ALL.into_iter().find(|m| m.code() == c)
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Rand => "rand",
            Mode::RandWhp => "rand-whp",
            Mode::Det => "det",
            Mode::Dcover => "dcover",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Mode> {
        match s {
            "rand" => Ok(Mode::Rand),
            "rand-whp" => Ok(Mode::RandWhp),
            "det" => Ok(Mode::Det),
            "dcover" => Ok(Mode::Dcover),
            _ => Err(Error::Parameter(format!("unknown mode {s:?}"))),
        }
    }
}

/// A sorted set of selected positions cutting the text into blocks.
///
/// Block `k` runs from the `k`-th boundary to the next one, where the
/// boundaries are `1` (if not selected), the selected positions, and `n+1`.
/// Blocks longer than `span` are periodic; their principal periods are kept
/// in `block_periods`, keyed by block start.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitioningSet {
    pub n: usize,
    pub positions: Vec<usize>,
    /// The parameter the set was built for.
    pub tau: usize,
    /// Largest block length that needs no period.
    pub span: usize,
    /// Local-consistency radius.
    pub delta: usize,
    pub block_periods: BTreeMap<usize, usize>,
    pub forward_sync: bool,
    pub mode: Mode,
}

impl PartitioningSet {
    /// Wrap sorted positions, computing and verifying the periods of all
    /// blocks longer than `span`.
    pub fn new(
        text: &Text,
        positions: Vec<usize>,
        tau: usize,
        span: usize,
        delta: usize,
        mode: Mode,
    ) -> Result<Self> {
        let n = text.len();
        if positions.windows(2).any(|w| w[0] >= w[1])
            || positions.first() == Some(&0)
            || positions.last().is_some_and(|&p| p > n)
        {
            return Err(Error::Contract(
                "positions must be strictly increasing within 1..=n".into(),
            ));
        }
        let mut set = PartitioningSet {
            n,
            positions,
            tau,
            span,
            delta,
            block_periods: BTreeMap::new(),
            forward_sync: true,
            mode,
        };
        let mut periods = BTreeMap::new();
        for (start, end) in set.blocks() {
            if end + 1 - start > span {
                let rho = block_period(text, start, end, span).ok_or_else(|| {
                    Error::Contract(format!(
                        "block {start}..={end} longer than {span} is not periodic"
                    ))
                })?;
                periods.insert(start, rho);
            }
        }
        set.block_periods = periods;
        Ok(set)
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    /// Block boundaries: `1`, the positions, `n+1`, without duplicates.
    pub fn boundaries(&self) -> Vec<usize> {
        let mut b = Vec::with_capacity(self.positions.len() + 2);
        if self.positions.first() != Some(&1) {
            b.push(1);
        }
        b.extend_from_slice(&self.positions);
        b.push(self.n + 1);
        b
    }

    /// `(start, end)` of every block, inclusive.
    pub fn blocks(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let lead = (self.positions.first() != Some(&1) && self.n > 0).then_some(1);
        let starts = lead.into_iter().chain(self.positions.iter().copied());
        let ends = self
            .positions
            .iter()
            .copied()
            .skip(usize::from(lead.is_none()))
            .chain(std::iter::once(self.n + 1));
        starts.zip(ends).map(|(s, e)| (s, e - 1))
    }

    /// Smallest selected position `>= i`, or `n+1`.
    pub fn successor(&self, i: usize) -> usize {
        let k = self.positions.partition_point(|&p| p < i);
        self.positions.get(k).copied().unwrap_or(self.n + 1)
    }

    pub fn contains(&self, p: usize) -> bool {
        self.positions.binary_search(&p).is_ok()
    }

    /// `|P|·τ/n`.
    pub fn size_ratio(&self) -> f64 {
        if self.n == 0 {
            0.0
        } else {
            self.positions.len() as f64 * self.tau as f64 / self.n as f64
        }
    }
}

/// Principal period of `S[start..=end]` if it is at most `limit`.
///
/// The failure function runs over a prefix of length `2·limit` only; a
/// candidate found there is then checked against the whole block.
pub fn block_period(text: &Text, start: usize, end: usize, limit: usize) -> Option<usize> {
    let len = end + 1 - start;
    let probe = len.min(2 * limit.max(1));
    let p0 = periodicity::principal_period_of(text, start, start + probe - 1);
    if p0 > limit {
        return None;
    }
    ((start + p0)..=end)
        .all(|k| text.sym(k) == text.sym(k - p0))
        .then_some(p0)
}

/// `rv = min{ j > p + ρ : S[j] != S[j - ρ] }`, or `n+1` when the period
/// never breaks. Scanning starts at `from`, which the caller knows to be
/// inside the periodic stretch.
pub fn right_violation_from(text: &Text, p: usize, rho: usize, from: usize) -> usize {
    let n = text.len();
    let mut j = from.max(p + rho + 1);
    while j <= n && text.sym(j) == text.sym(j - rho) {
        j += 1;
    }
    j.min(n + 1)
}
