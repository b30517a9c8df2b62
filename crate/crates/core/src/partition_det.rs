//! Deterministic partitioning sets by hierarchical block merging.
//!
//! Level 0 cuts the text into single characters. Level `μ` merges the blocks
//! of level `μ-1`: blocks of length at least `θ_μ = (3/2)^μ` stay as they
//! are, runs of equal blocks collapse into one, and every other maximal
//! sequence of blocks is cut at local minima of labels produced by iterated
//! alphabet reduction, so that a cut depends only on a few neighbours. The
//! starts of the level-`L` blocks, `L = max(0, ⌈log_{3/2}(τ/12)⌉)`, form the
//! set.
//!
//! Levels are chained iterators: level `μ` pulls block starts from level
//! `μ-1` and buffers only the handful of blocks it has not decided yet.

use std::collections::VecDeque;

use crate::meter::WordMeter;
use crate::{Error, Mode, PartitioningSet, Result, Text};

/// Bits per character in the label of a block pair.
const CHAR_BITS: u64 = 9;

/// Tunables of the deterministic builder.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DetConfig {
    /// Multiplier of `log* n` in the length of undecided tails.
    pub c: usize,
    /// `δ = c_delta · τ · log* n`.
    pub c_delta: usize,
}

impl Default for DetConfig {
    fn default() -> Self {
        DetConfig { c: 4, c_delta: 3 }
    }
}

/// Base-2 iterated logarithm with `log*(x) = 1` for `x <= 2`.
pub fn log_star(n: usize) -> usize {
    let mut x = n as f64;
    let mut k = 1;
    while x > 2.0 {
        x = x.log2();
        k += 1;
    }
    k
}

/// `(3/2)^μ` as the exact fraction `3^μ / 2^μ`.
pub fn theta(mu: u32) -> (u128, u128) {
    (3u128.pow(mu), 2u128.pow(mu))
}

/// Smallest `L >= 0` with `(3/2)^L >= τ/12`.
pub fn top_level(tau: usize) -> u32 {
    let mut l = 0u32;
    while 12 * 3u128.pow(l) < tau as u128 * 2u128.pow(l) {
        l += 1;
    }
    l
}

/// One round of alphabet reduction: with `ψ` the lowest bit where `a` and
/// `b` differ, returns `2ψ + bit(a, ψ)`.
///
/// ```
/// use sslce::partition_det::alphabet_reduce_step;
/// assert_eq!(alphabet_reduce_step(5, 7).unwrap(), 2);
/// assert_eq!(alphabet_reduce_step(0, 1).unwrap(), 0);
/// ```
pub fn alphabet_reduce_step(a: u64, b: u64) -> Result<u64> {
    if a == b {
        return Err(Error::Contract(format!(
            "alphabet reduction of equal labels {a}"
        )));
    }
    Ok(reduce(a, b))
}

#[inline]
fn reduce(a: u64, b: u64) -> u64 {
    let psi = (a ^ b).trailing_zeros() as u64;
    2 * psi + ((a >> psi) & 1)
}

/// Iterate alphabet reduction until every label is below 6. Each round
/// loses the last element, which has no right neighbour. Returns the labels
/// and the number of rounds.
pub fn reduce_to_six(symbols: &[u64]) -> Result<(Vec<u64>, usize)> {
    if symbols.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::Contract("adjacent symbols must differ".into()));
    }
    let mut cur = symbols.to_vec();
    let mut rounds = 0;
    while cur.iter().any(|&x| x >= 6) {
        if cur.len() < 2 {
            return Err(Error::Contract("sequence too short to reduce".into()));
        }
        cur = cur.windows(2).map(|w| reduce(w[0], w[1])).collect();
        rounds += 1;
    }
    Ok((cur, rounds))
}

/// Rounds needed to bring labels of blocks in a text of length `n` below 6,
/// counting the first round that compares block contents.
pub fn reduction_rounds(n: usize) -> usize {
    let mut bound = 2 * CHAR_BITS as u128 * n.max(1) as u128;
    let mut rounds = 1;
    while bound > 6 {
        let bits = 128 - (bound - 1).leading_zeros() as u128;
        bound = 2 * bits;
        rounds += 1;
    }
    rounds
}

/// Label of block `x` against its right neighbour `y`, both distinct short
/// strings: characters are compared from the block ends, `9` bits each,
/// with absent characters reading as `0`.
fn pair_label(text: &Text, x: (usize, usize), y: (usize, usize)) -> u64 {
    let (xs, xl) = x;
    let (ys, yl) = y;
    let mut k = 0;
    loop {
        let ca = if k < xl { text.sym(xs + xl - 1 - k) } else { 0 };
        let cb = if k < yl { text.sym(ys + yl - 1 - k) } else { 0 };
        if ca != cb {
            let t = (ca ^ cb).trailing_zeros() as u64;
            return 2 * (CHAR_BITS * k as u64 + t) + ((ca as u64 >> t) & 1);
        }
        k += 1;
    }
}

fn same_block(text: &Text, x: (usize, usize), y: (usize, usize)) -> bool {
    x.1 == y.1 && text.window(x.0, x.1) == text.window(y.0, y.1)
}

/// Block type at a level.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BlockType {
    /// At least `θ_μ` long.
    Long,
    /// Part of a run of equal short blocks.
    Repeat,
    /// In the labelled body of a long sequence of other blocks.
    Labelled,
    /// In a short sequence, or in the last `T` blocks of a long one.
    Tail,
}

/// Level parameters shared by the streaming builder and [`next_level`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LevelParams {
    pub mu: u32,
    /// Length of the undecided tail of a sequence (`T >= rounds + 1`).
    pub tail: usize,
    pub rounds: usize,
}

impl LevelParams {
    pub fn new(n: usize, mu: u32, cfg: &DetConfig) -> LevelParams {
        let rounds = reduction_rounds(n);
        LevelParams {
            mu,
            tail: (cfg.c * log_star(n)).max(rounds + 1),
            rounds,
        }
    }

    fn is_long(&self, len: usize) -> bool {
        let (num, den) = theta(self.mu);
        len as u128 * den >= num
    }
}

/// Indices kept by the tail rule on a sequence of `m` blocks: one group of
/// up to three, then pairs, so that groups are formed from the right.
fn tail_keeps(m: usize) -> impl Iterator<Item = usize> {
    let first = if m <= 3 {
        m
    } else if m % 2 == 0 {
        2
    } else {
        3
    };
    std::iter::once(0)
        .chain((first..m).step_by(2))
        .filter(move |&i| i < m)
}

/// Types of the blocks `starts[k] .. starts[k+1]` (the last one ends at
/// `n`), computed on the whole level at once.
pub fn classify(text: &Text, starts: &[usize], p: &LevelParams) -> Vec<BlockType> {
    let blocks = as_blocks(text, starts);
    let h = blocks.len();
    let long: Vec<bool> = blocks.iter().map(|b| p.is_long(b.1)).collect();
    let eq: Vec<bool> = (0..h.saturating_sub(1))
        .map(|k| !long[k] && same_block(text, blocks[k], blocks[k + 1]))
        .collect();
    let mut types = vec![BlockType::Tail; h];
    let mut k = 0;
    while k < h {
        if long[k] {
            types[k] = BlockType::Long;
            k += 1;
        } else if (k > 0 && eq[k - 1]) || (k + 1 < h && eq[k]) {
            types[k] = BlockType::Repeat;
            k += 1;
        } else {
            let s = k;
            while k < h && !long[k] && !(k > 0 && eq[k - 1]) && !(k + 1 < h && eq[k]) {
                k += 1;
            }
            let m = k - s;
            if m > p.tail {
                for t in types.iter_mut().take(k - p.tail).skip(s) {
                    *t = BlockType::Labelled;
                }
            }
        }
    }
    types
}

fn as_blocks(text: &Text, starts: &[usize]) -> Vec<(usize, usize)> {
    (0..starts.len())
        .map(|k| {
            let end = starts.get(k + 1).copied().unwrap_or(text.len() + 1);
            (starts[k], end - starts[k])
        })
        .collect()
}

/// Reference implementation of one level on a fully materialized block
/// list; the streaming builder must agree with it.
pub fn next_level(text: &Text, starts: &[usize], p: &LevelParams) -> Vec<usize> {
    let blocks = as_blocks(text, starts);
    let types = classify(text, starts, p);
    let mut out = Vec::new();
    let mut k = 0;
    while k < blocks.len() {
        match types[k] {
            BlockType::Long => {
                out.push(blocks[k].0);
                k += 1;
            }
            BlockType::Repeat => {
                if k == 0
                    || types[k - 1] != BlockType::Repeat
                    || !same_block(text, blocks[k - 1], blocks[k])
                {
                    out.push(blocks[k].0);
                }
                k += 1;
            }
            _ => {
                let s = k;
                while k < blocks.len() && matches!(types[k], BlockType::Labelled | BlockType::Tail)
                {
                    k += 1;
                }
                let seq = &blocks[s..k];
                let m = seq.len();
                let body = m.saturating_sub(p.tail);
                if body > 0 {
                    let mut labels: Vec<u64> = seq
                        .windows(2)
                        .map(|w| pair_label(text, w[0], w[1]))
                        .collect();
                    for _ in 1..p.rounds {
                        labels = labels.windows(2).map(|w| reduce(w[0], w[1])).collect();
                    }
                    for i in 0..body {
                        let keep = i == 0
                            || (i >= 2 && labels[i] < labels[i - 1] && labels[i] < labels[i + 1]);
                        if keep {
                            out.push(seq[i].0);
                        }
                    }
                }
                for i in tail_keeps(m - body) {
                    out.push(seq[body + i].0);
                }
            }
        }
    }
    out
}

struct Pending {
    start: usize,
    len: usize,
    // labels[t] is the round-(t+1) label
    labels: Vec<u64>,
}

/// Streaming level `μ >= 1`.
struct Level<'t> {
    text: &'t Text,
    p: LevelParams,
    src: Box<dyn Iterator<Item = usize> + 't>,
    n: usize,
    // blocks pulled but not yet classified: at most three
    look: VecDeque<(usize, usize)>,
    next_start: Option<usize>,
    prev_repeat: Option<(usize, usize)>,
    seq: VecDeque<Pending>,
    seq_index: usize,
    prev_label: u64,
    out: VecDeque<usize>,
    done: bool,
    peak: usize,
}

impl<'t> Level<'t> {
    fn new(
        text: &'t Text,
        p: LevelParams,
        mut src: Box<dyn Iterator<Item = usize> + 't>,
    ) -> Level<'t> {
        let next_start = src.next();
        Level {
            text,
            p,
            src,
            n: text.len(),
            look: VecDeque::new(),
            next_start,
            prev_repeat: None,
            seq: VecDeque::new(),
            seq_index: 0,
            prev_label: 0,
            out: VecDeque::new(),
            done: false,
            peak: 0,
        }
    }

    fn pull_block(&mut self) -> Option<(usize, usize)> {
        let s = self.next_start?;
        self.next_start = self.src.next();
        let end = self.next_start.unwrap_or(self.n + 1);
        Some((s, end - s))
    }

    fn is_short_eq(&self, a: (usize, usize), b: (usize, usize)) -> bool {
        !self.p.is_long(a.1) && same_block(self.text, a, b)
    }

    // Classify the front of `look`, which needs its right neighbour.
    fn step(&mut self) -> bool {
        while self.look.len() < 2 {
            match self.pull_block() {
                Some(b) => self.look.push_back(b),
                None => break,
            }
        }
        let Some(b) = self.look.pop_front() else {
            self.flush_seq();
            return false;
        };
        let right_eq = self.look.front().is_some_and(|&r| self.is_short_eq(b, r));
        let left_eq = self.prev_repeat.is_some_and(|l| self.is_short_eq(l, b));
        if self.p.is_long(b.1) {
            self.flush_seq();
            self.out.push_back(b.0);
            self.prev_repeat = None;
        } else if left_eq || right_eq {
            self.flush_seq();
            if !left_eq {
                self.out.push_back(b.0);
            }
            self.prev_repeat = Some(b);
        } else {
            self.prev_repeat = Some(b);
            self.push_seq(b);
        }
        true
    }

    fn push_seq(&mut self, b: (usize, usize)) {
        self.seq.push_back(Pending {
            start: b.0,
            len: b.1,
            labels: Vec::with_capacity(self.p.rounds),
        });
        let w = self.seq.len();
        // the block `t` places before the new one can now take round t
        for t in 1..=self.p.rounds.min(w - 1) {
            let (i, j) = (w - 1 - t, w - t);
            let lab = if t == 1 {
                let (x, y) = (&self.seq[i], &self.seq[j]);
                pair_label(self.text, (x.start, x.len), (y.start, y.len))
            } else {
                reduce(self.seq[i].labels[t - 2], self.seq[j].labels[t - 2])
            };
            self.seq[i].labels.push(lab);
        }
        self.peak = self.peak.max(self.seq.len() * (2 + self.p.rounds));
        while self.seq.len() > self.p.tail {
            let x = self.seq.pop_front().unwrap();
            let lab = x.labels[self.p.rounds - 1];
            let i = self.seq_index;
            let keep = i == 0
                || (i >= 2 && lab < self.prev_label && lab < self.seq[0].labels[self.p.rounds - 1]);
            if keep {
                self.out.push_back(x.start);
            }
            self.prev_label = lab;
            self.seq_index += 1;
        }
    }

    fn flush_seq(&mut self) {
        let m = self.seq.len();
        for i in tail_keeps(m) {
            self.out.push_back(self.seq[i].start);
        }
        self.seq.clear();
        self.seq_index = 0;
    }
}

impl Iterator for Level<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        loop {
            if let Some(p) = self.out.pop_front() {
                return Some(p);
            }
            if self.done {
                return None;
            }
            if !self.step() {
                self.done = true;
            }
        }
    }
}

/// A finished deterministic build with its counters.
#[derive(Clone, Debug)]
pub struct DetBuild {
    pub pset: PartitioningSet,
    pub levels: u32,
    pub tail: usize,
    pub rounds: usize,
    pub peak_aux_words: usize,
}

/// Deterministic `(τ, O(τ log* n))`-partitioning set.
///
/// ```
/// use sslce::{partition_det::build_det, Text};
/// let unary = Text::from("aaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaa");
/// assert_eq!(build_det(&unary, 16).unwrap().positions, vec![1]);
/// let t = Text::from("mississippi");
/// assert_eq!(build_det(&t, 8).unwrap().positions, (1..=11).collect::<Vec<_>>());
/// ```
pub fn build_det(text: &Text, tau: usize) -> Result<PartitioningSet> {
    build_det_with(text, tau, &DetConfig::default()).map(|b| b.pset)
}

pub fn build_det_with(text: &Text, tau: usize, cfg: &DetConfig) -> Result<DetBuild> {
    let n = text.len();
    if tau == 0 || tau > n {
        return Err(Error::Parameter(format!("tau = {tau} outside 1..={n}")));
    }
    let l = top_level(tau);
    let mut meter = WordMeter::new();
    let mut stream: Box<dyn Iterator<Item = usize> + '_> = Box::new(1..=n);
    let params: Vec<LevelParams> = (1..=l).map(|mu| LevelParams::new(n, mu, cfg)).collect();
    for p in &params {
        stream = Box::new(Level::new(text, *p, stream));
    }
    let positions: Vec<usize> = stream.collect();
    // each live level holds its undecided sequence plus three lookahead blocks
    if let Some(p) = params.first() {
        meter.alloc(params.len() * ((p.tail + 1) * (2 + p.rounds) + 8));
    }
    meter.alloc(positions.len());
    let span = if l == 0 {
        1
    } else {
        (12 * theta(l).0 / theta(l).1) as usize
    };
    let delta = cfg.c_delta * tau * log_star(n);
    let pset = PartitioningSet::new(text, positions, tau, span, delta, Mode::Det)?;
    meter.alloc(2 * pset.block_periods.len());
    Ok(DetBuild {
        pset,
        levels: l,
        tail: params.first().map_or(0, |p| p.tail),
        rounds: reduction_rounds(n),
        peak_aux_words: meter.peak(),
    })
}

/// Starts of every level `0..=L` computed with [`next_level`].
pub fn levels_reference(text: &Text, tau: usize, cfg: &DetConfig) -> Vec<Vec<usize>> {
    let n = text.len();
    let mut levels = vec![(1..=n).collect::<Vec<_>>()];
    for mu in 1..=top_level(tau) {
        let p = LevelParams::new(n, mu, cfg);
        let next = next_level(text, levels.last().unwrap(), &p);
        levels.push(next);
    }
    levels
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;
    use rand::{Rng, SeedableRng};

    fn random_text(n: usize, sigma: u8, seed: u64) -> Text {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        Text::new((0..n).map(|_| b'a' + rng.gen_range(0..sigma)).collect())
    }

    #[test]
    fn small_helpers() {
        assert_eq!(log_star(2), 1);
        assert_eq!(log_star(4), 2);
        assert_eq!(log_star(100_000), 5);
        assert_eq!(top_level(12), 0);
        assert_eq!(top_level(13), 1);
        assert_eq!(top_level(18), 1);
        assert_eq!(top_level(19), 2);
        assert!(alphabet_reduce_step(3, 3).is_err());
        assert_eq!(tail_keeps(5).collect::<Vec<_>>(), vec![0, 3]);
        assert_eq!(tail_keeps(4).collect::<Vec<_>>(), vec![0, 2]);
        assert_eq!(tail_keeps(3).collect::<Vec<_>>(), vec![0]);
        assert_eq!(tail_keeps(1).collect::<Vec<_>>(), vec![0]);
        assert_eq!(tail_keeps(0).count(), 0);
    }

    #[test]
    fn reduce_to_six_examples() {
        let (out, _) = reduce_to_six(&[9, 2]).unwrap();
        assert!(out.iter().all(|&x| x < 6));
        let seq: Vec<u64> = (0..64).collect();
        let (out, _) = reduce_to_six(&seq).unwrap();
        assert!(out.iter().all(|&x| x < 6));
        assert!(out.windows(2).all(|w| w[0] != w[1]));
        let wide: Vec<u64> = (0..40)
            .map(|k| {
                if k % 2 == 0 {
                    (1 << 60) + k
                } else {
                    (1u64 << 61) - 1 - k
                }
            })
            .collect();
        let (_, rounds) = reduce_to_six(&wide).unwrap();
        assert!(rounds <= 5, "{rounds}");
        assert_eq!(reduction_rounds(100_000), 5);
    }

    #[test]
    fn classification_examples() {
        let p = LevelParams {
            mu: 1,
            tail: 10,
            rounds: 3,
        };
        let t = Text::from("aaaa");
        assert_eq!(classify(&t, &[1, 2, 3, 4], &p), vec![BlockType::Repeat; 4]);
        let t = Text::from("abc");
        assert_eq!(classify(&t, &[1, 2, 3], &p), vec![BlockType::Tail; 3]);
        let t = Text::from("abbbc");
        assert_eq!(
            classify(&t, &[1, 2, 5], &p),
            vec![BlockType::Tail, BlockType::Long, BlockType::Tail]
        );
    }

    #[test]
    fn streaming_matches_reference() {
        let cfg = DetConfig::default();
        for seed in 0..40 {
            let sigma = [2u8, 3, 4, 26][seed as usize % 4];
            let t = random_text(3000, sigma, seed);
            for tau in [13, 19, 40, 100, 300] {
                let want = levels_reference(&t, tau, &cfg).pop().unwrap();
                let got = build_det(&t, tau).unwrap();
                assert_eq!(got.positions, want, "seed {seed} tau {tau}");
            }
        }
    }

    #[test]
    fn nesting_and_level_sizes() {
        let t = random_text(20_000, 4, 7);
        let levels = levels_reference(&t, 400, &DetConfig::default());
        for (mu, w) in levels.windows(2).enumerate() {
            assert!(w[1].iter().all(|p| w[0].binary_search(p).is_ok()));
            let (num, den) = theta(mu as u32 + 1);
            assert!(
                (w[1].len() as u128) * num <= 2 * t.len() as u128 * den,
                "level {}",
                mu + 1
            );
        }
    }

    #[test]
    fn det_sets_pass_the_checker() {
        for seed in 0..10 {
            let t = random_text(4000, 2, seed);
            for tau in [4, 16, 40, 64] {
                let p = build_det(&t, tau).unwrap();
                let r = oracle::check_pset(&t, &p);
                assert!(r.passed(), "seed {seed} tau {tau}: {r:?}");
            }
        }
    }

    #[test]
    fn reduction_keeps_neighbours_distinct() {
        for a in 0u64..64 {
            for b in 0u64..64 {
                for c in 0u64..64 {
                    if a != b && b != c {
                        assert_ne!(reduce(a, b), reduce(b, c), "{a} {b} {c}");
                    }
                }
            }
        }
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200_000 {
            let (a, b, c) = (
                rng.gen_range(0..1u64 << 16),
                rng.gen_range(0..1u64 << 16),
                rng.gen_range(0..1u64 << 16),
            );
            if a != b && b != c {
                assert_ne!(reduce(a, b), reduce(b, c));
            }
        }
    }

    #[test]
    fn small_tau_keeps_every_position() {
        let t = random_text(500, 3, 1);
        for tau in 1..=12 {
            assert_eq!(
                build_det(&t, tau).unwrap().positions,
                (1..=500).collect::<Vec<_>>()
            );
        }
    }

    #[test]
    fn constant_text_collapses() {
        let t = Text::new(vec![b'z'; 5000]);
        for tau in [13, 100, 1000] {
            assert_eq!(build_det(&t, tau).unwrap().positions, vec![1]);
        }
    }

    proptest::proptest! {
        #[test]
        fn det_is_partitioning(bytes in proptest::collection::vec(0u8..3, 40..400), tau in 13usize..40) {
            let t = Text::new(bytes);
            proptest::prop_assume!(tau <= t.len());
            let p = build_det(&t, tau).unwrap();
            let r = oracle::check_pset(&t, &p);
            proptest::prop_assert!(r.passed(), "{:?}", r);
        }
    }
}
