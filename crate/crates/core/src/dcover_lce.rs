//! Deterministic LCE with `O(τ·√log* n)` comparisons per query.
//!
//! A fine deterministic set `P` is built at `τ' = τ/r`, `r = ⌈√log* n⌉`.
//! Each block receives `⌈ℓ/τ'⌉` tokens, `ℓ` being the length of the block
//! before it, and a block is kept in `Q` if one of its tokens has an index
//! in a difference cover modulo `L* = r²`. Two aligned stretches of `P`
//! then meet in `Q` within `L*` tokens, unless a long periodic block sits
//! in between; those blocks (length at least `Λ = (L*+r)·τ'`) are stored
//! and used to jump to their ends, where the next block is always in `Q`.
//!
//! For `τ < r` the fine set is all of `[1..n]` and `Q` is a difference
//! cover modulo `τ²` of the positions.

use crate::lce_index::LceIndex;
use crate::meter::WordMeter;
use crate::partition_det::{build_det_with, log_star, DetConfig};
use crate::serial::{self, Reader, Writer};
use crate::sparse_suffix::{ssa_of_b, ssa_of_pset, SparseSuffixIndex};
use crate::{Error, Mode, PartitioningSet, Result, Text};

/// `⌈√x⌉`.
pub fn ceil_sqrt(x: usize) -> usize {
    let mut r = (x as f64).sqrt() as usize;
    while r * r < x {
        r += 1;
    }
    while r > 0 && (r - 1) * (r - 1) >= x {
        r -= 1;
    }
    r
}

/// Whether every pair of residues mod `t` reaches `dc` together within
/// `t` steps.
pub fn synchronizes(dc: &[usize], t: usize) -> bool {
    let mut member = vec![false; t];
    for &x in dc {
        member[x % t] = true;
    }
    (0..t).all(|a| (0..t).all(|b| (0..t).any(|k| member[(a + k) % t] && member[(b + k) % t])))
}

/// Difference cover modulo `t`: `{0..s-1}` plus the multiples of `s`,
/// `s = ⌈√t⌉`, checked exhaustively before it is returned.
///
/// ```
/// use sslce::dcover_lce::small_tau_dc;
/// assert_eq!(small_tau_dc(9).unwrap(), vec![0, 1, 2, 3, 6]);
/// assert_eq!(small_tau_dc(1).unwrap(), vec![0]);
/// ```
pub fn small_tau_dc(t: usize) -> Result<Vec<usize>> {
    if t == 0 {
        return Err(Error::Parameter("difference cover modulo 0".into()));
    }
    let s = ceil_sqrt(t);
    let mut dc: Vec<usize> = (0..s.min(t)).chain((0..t).step_by(s)).collect();
    dc.sort_unstable();
    dc.dedup();
    if !synchronizes(&dc, t) {
        return Err(Error::Contract(format!(
            "residue set for t = {t} is not a difference cover"
        )));
    }
    Ok(dc)
}

/// Token counts: the first block gets one, block `i` gets `⌈ℓ_{i-1}/τ'⌉`.
pub fn assign_tokens(lengths: &[usize], tau_prime: usize) -> Vec<usize> {
    let tp = tau_prime.max(1);
    (0..lengths.len())
        .map(|i| {
            if i == 0 {
                1
            } else {
                lengths[i - 1].div_ceil(tp)
            }
        })
        .collect()
}

/// Whether token `t` is selected for `L* = r²`.
#[inline]
pub fn token_selected(t: usize, r: usize) -> bool {
    t % r == 0 || t % (r * r) < r
}

/// Which blocks own a selected token, tokens numbered from 0 in order.
///
/// ```
/// use sslce::dcover_lce::select_q;
/// let picked: Vec<usize> = select_q(&[1; 18], 3).iter().enumerate().filter(|x| *x.1).map(|x| x.0).collect();
/// assert_eq!(picked, vec![0, 1, 2, 3, 6, 9, 10, 11, 12, 15]);
/// ```
pub fn select_q(tokens: &[usize], r: usize) -> Vec<bool> {
    let mut next = 0usize;
    tokens
        .iter()
        .map(|&c| {
            let first = next;
            next += c;
            // a run of r tokens always holds a multiple of r
            c >= r || (first..next).any(|t| token_selected(t, r))
        })
        .collect()
}

/// Query answer with its cost.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct DcQueryStats {
    pub lce: usize,
    pub comparisons: usize,
    /// Answered through a stored long block.
    pub periodic: bool,
    /// Had to fall back to a plain scan (never expected).
    pub fallback: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DcParams {
    pub tau: usize,
    /// `⌈√log* n⌉`.
    pub r: usize,
    pub lstar: usize,
    pub tau_fine: usize,
    /// `τ < r`: `Q` is a difference cover of all positions.
    pub small: bool,
    /// Offset where the aligned window starts.
    pub radius: usize,
    /// Minimum length of a stored block.
    pub lambda: usize,
    /// Length of the initial scan.
    pub window: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DcIndex {
    pub n: usize,
    pub params: DcParams,
    pub q: Vec<usize>,
    /// `(start, end)` of fine blocks at least `lambda` long.
    pub long_blocks: Vec<(usize, usize)>,
    pub sst: SparseSuffixIndex,
    pub fine_size: usize,
    pub peak_aux_words: usize,
}

impl DcIndex {
    pub fn build(text: &Text, tau: usize) -> Result<DcIndex> {
        let n = text.len();
        if tau == 0 || tau > n {
            return Err(Error::Parameter(format!("tau = {tau} outside 1..={n}")));
        }
        let ls = log_star(n);
        let r = ceil_sqrt(ls);
        let lstar = r * r;
        let mut meter = WordMeter::new();
        let (params, q, long_blocks, fine) = if tau < r {
            let dc = small_tau_dc(tau * tau)?;
            let mut member = vec![false; tau * tau];
            for &x in &dc {
                member[x] = true;
            }
            let q: Vec<usize> = (1..=n).filter(|&p| member[(p - 1) % (tau * tau)]).collect();
            let fine = PartitioningSet::new(text, (1..=n).collect(), 1, 1, 0, Mode::Det)?;
            let params = DcParams {
                tau,
                r,
                lstar,
                tau_fine: 1,
                small: true,
                radius: 0,
                lambda: 0,
                window: tau * tau + 1,
            };
            (params, q, Vec::new(), fine)
        } else {
            let tau_fine = tau / r;
            let fine = build_det_with(text, tau_fine, &DetConfig::default())?.pset;
            let starts = &fine.positions;
            let lengths: Vec<usize> = (0..starts.len())
                .map(|k| starts.get(k + 1).copied().unwrap_or(n + 1) - starts[k])
                .collect();
            let tokens = assign_tokens(&lengths, tau_fine);
            let picked = select_q(&tokens, r);
            let q: Vec<usize> = starts
                .iter()
                .zip(&picked)
                .filter(|x| *x.1)
                .map(|x| *x.0)
                .collect();
            let lambda = (lstar + r) * tau_fine;
            let long_blocks: Vec<(usize, usize)> = fine
                .blocks()
                .filter(|&(s, e)| e + 1 - s >= lambda)
                .collect();
            let radius = fine.delta.max(fine.span + 1);
            let params = DcParams {
                tau,
                r,
                lstar,
                tau_fine,
                small: false,
                radius,
                lambda,
                window: 2 * radius + 3 * lambda,
            };
            (params, q, long_blocks, fine)
        };
        meter.alloc(fine.positions.len() + 2 * fine.block_periods.len());
        let order = ssa_of_pset(text, &fine)?;
        meter.alloc(2 * order.order.len());
        let ssa = ssa_of_b(text, &q, &fine, &order)?;
        meter.free(2 * order.order.len());
        let lce = LceIndex::build(text, &fine)?;
        meter.alloc(lce.words());
        let sst = crate::sparse_suffix::build_sst(text, ssa, |i, j| lce.lce(text, i, j))?;
        meter.free(lce.words());
        meter.free(fine.positions.len() + 2 * fine.block_periods.len());
        meter.alloc(q.len() + 2 * long_blocks.len() + sst.words());
        Ok(DcIndex {
            n,
            params,
            q,
            long_blocks,
            sst,
            fine_size: fine.positions.len(),
            peak_aux_words: meter.peak(),
        })
    }

    /// Words kept after construction.
    pub fn words(&self) -> usize {
        self.q.len() + 2 * self.long_blocks.len() + self.sst.words()
    }

    pub fn lce(&self, text: &Text, i: usize, j: usize) -> Result<usize> {
        self.lce_stats(text, i, j).map(|q| q.lce)
    }

    pub fn lce_stats(&self, text: &Text, i: usize, j: usize) -> Result<DcQueryStats> {
        text.check_pos(i)?;
        text.check_pos(j)?;
        let n = text.len();
        if n != self.n {
            return Err(Error::Parameter("index belongs to another text".into()));
        }
        let mut st = DcQueryStats::default();
        if i == j {
            st.lce = n + 1 - i;
            return Ok(st);
        }
        let w = self.params.window;
        let mut qi = self.q.partition_point(|&p| p < i);
        let mut qj = self.q.partition_point(|&p| p < j);
        for k in 0..w {
            while self.q.get(qi).is_some_and(|&p| p < i + k) {
                qi += 1;
            }
            while self.q.get(qj).is_some_and(|&p| p < j + k) {
                qj += 1;
            }
            if self.q.get(qi) == Some(&(i + k)) && self.q.get(qj) == Some(&(j + k)) {
                st.lce = k + self.q_lce(i + k, j + k)?;
                return Ok(st);
            }
            st.comparisons += 1;
            let (a, b) = (text.sym(i + k), text.sym(j + k));
            if a != b || a == 0 {
                st.lce = k;
                return Ok(st);
            }
        }
        let lo = self.params.radius;
        let hi = w - self.params.radius;
        match (
            self.widest_block(i + lo, i + hi),
            self.widest_block(j + lo, j + hi),
        ) {
            (Some(bi), Some(bj)) if !self.params.small => {
                st.periodic = true;
                let (ai, aj) = (bi.1 + 1 - i, bj.1 + 1 - j);
                let alpha = ai.min(aj);
                if ai == aj {
                    if i + alpha > n || j + alpha > n {
                        st.lce = alpha;
                        return Ok(st);
                    }
                    if let Some(rest) = self.sst.lce_between(n, i + alpha, j + alpha) {
                        st.lce = alpha + rest;
                        return Ok(st);
                    }
                }
                st.lce = scan_from(text, i, j, alpha, &mut st.comparisons);
                Ok(st)
            }
            _ => {
                st.fallback = true;
                st.lce = scan_from(text, i, j, w, &mut st.comparisons);
                Ok(st)
            }
        }
    }

    fn q_lce(&self, a: usize, b: usize) -> Result<usize> {
        self.sst
            .lce_between(self.n, a, b)
            .ok_or_else(|| Error::Contract(format!("{a} or {b} missing from the sorted set")))
    }

    /// The stored block with the largest overlap with `[lo, hi)`, leftmost
    /// on ties.
    fn widest_block(&self, lo: usize, hi: usize) -> Option<(usize, usize)> {
        let mut k = self.long_blocks.partition_point(|&(_, e)| e < lo);
        let mut best: Option<((usize, usize), usize)> = None;
        while let Some(&(s, e)) = self.long_blocks.get(k) {
            if s >= hi {
                break;
            }
            let overlap = (e + 1).min(hi) - s.max(lo);
            if best.map_or(true, |(_, o)| overlap > o) {
                best = Some(((s, e), overlap));
            }
            k += 1;
        }
        best.map(|b| b.0)
    }

    pub fn to_bytes(&self, text: &Text) -> Vec<u8> {
        let mut w = Writer::header(serial::TAG_DCOVER, Mode::Dcover, text);
        let p = &self.params;
        for v in [
            p.tau,
            p.r,
            p.lstar,
            p.tau_fine,
            p.small as usize,
            p.radius,
            p.lambda,
            p.window,
            self.fine_size,
            self.peak_aux_words,
        ] {
            w.usize(v);
        }
        w.usizes(&self.q);
        w.usize(self.long_blocks.len());
        for &(s, e) in &self.long_blocks {
            w.usize(s);
            w.usize(e);
        }
        w.usizes(&self.sst.ssa);
        w.usizes(&self.sst.lcp);
        w.finish()
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<(Text, DcIndex)> {
        let mut r = Reader::new(bytes);
        let h = r.header()?;
        if h.tag != serial::TAG_DCOVER {
            return Err(Error::Corrupt(format!(
                "section tag {} is not a dcover index",
                h.tag
            )));
        }
        let text = h.text;
        let n = text.len();
        let mut v = [0usize; 10];
        for x in v.iter_mut() {
            *x = r.usize()?;
        }
        let [tau, rr, lstar, tau_fine, small, radius, lambda, window, fine_size, peak] = v;
        let params = DcParams {
            tau,
            r: rr,
            lstar,
            tau_fine,
            small: small != 0,
            radius,
            lambda,
            window,
        };
        let q = r.usizes()?;
        let k = r.usize()?;
        if k > n {
            return Err(Error::Corrupt("too many long blocks".into()));
        }
        let long_blocks = (0..k)
            .map(|_| Ok((r.usize()?, r.usize()?)))
            .collect::<Result<Vec<_>>>()?;
        let ssa = r.usizes()?;
        let lcp = r.usizes()?;
        r.finish()?;
        let cap = 64 * (n + 1);
        let bad = params.tau == 0
            || params.tau > n
            || params.r == 0
            || window > cap
            || radius.checked_mul(2).map_or(true, |d| d > window)
            || q.windows(2).any(|w| w[0] >= w[1])
            || q.iter().any(|&p| p == 0 || p > n)
            || long_blocks.iter().any(|&(s, e)| s == 0 || s > e || e > n)
            || long_blocks.windows(2).any(|w| w[0].1 >= w[1].0)
            || ssa.len() != q.len()
            || lcp.len() + 1 != ssa.len().max(1)
            || lcp.iter().any(|&h| h > n);
        if bad {
            return Err(Error::Corrupt("dcover index fields out of range".into()));
        }
        let mut sorted = ssa.clone();
        sorted.sort_unstable();
        if sorted != q {
            return Err(Error::Corrupt(
                "suffix order is not a permutation of Q".into(),
            ));
        }
        let sst = SparseSuffixIndex::from_sorted(&text, ssa, lcp);
        Ok((
            text,
            DcIndex {
                n,
                params,
                q,
                long_blocks,
                sst,
                fine_size,
                peak_aux_words: peak,
            },
        ))
    }
}

fn scan_from(text: &Text, i: usize, j: usize, from: usize, cmp: &mut usize) -> usize {
    let mut k = from;
    loop {
        *cmp += 1;
        let (a, b) = (text.sym(i + k), text.sym(j + k));
        if a != b || a == 0 {
            return k;
        }
        k += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::naive_lce;
    use rand::{Rng, SeedableRng};

    fn random_text(n: usize, sigma: u8, seed: u64) -> Text {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        Text::new((0..n).map(|_| b'a' + rng.gen_range(0..sigma)).collect())
    }

    #[test]
    fn covers() {
        for t in [1, 4, 9, 16, 25, 100] {
            let dc = small_tau_dc(t).unwrap();
            assert!(synchronizes(&dc, t));
            assert!(dc.len() <= 2 * ceil_sqrt(t));
        }
        assert!(small_tau_dc(16).unwrap().len() <= 8);
        assert!(!synchronizes(&[0, 1], 9));
        for l in [1, 4, 9, 16] {
            let r = ceil_sqrt(l);
            let res: Vec<usize> = (0..l).filter(|&t| token_selected(t, r)).collect();
            assert!(synchronizes(&res, l));
        }
    }

    #[test]
    fn tokens() {
        assert_eq!(assign_tokens(&[5, 13, 2, 1], 4), vec![1, 2, 4, 1]);
        assert_eq!(assign_tokens(&[3, 3, 3], 4), vec![1, 1, 1]);
        assert!(select_q(&[1; 7], 1).iter().all(|&b| b));
        assert_eq!(
            select_q(&[1, 1, 1, 1, 3], 2),
            vec![true, true, true, false, true]
        );
    }

    fn check(t: &Text, tau: usize, pairs: usize, seed: u64) -> DcIndex {
        let idx = DcIndex::build(t, tau).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..pairs {
            let (i, j) = (rng.gen_range(1..=t.len()), rng.gen_range(1..=t.len()));
            let q = idx.lce_stats(t, i, j).unwrap();
            assert_eq!(q.lce, naive_lce(t, i, j), "tau {tau} ({i},{j})");
            assert!(!q.fallback, "fallback at ({i},{j})");
        }
        idx
    }

    #[test]
    fn matches_naive() {
        for seed in 0..3 {
            let t = random_text(4000, [2, 4, 26][seed as usize], seed);
            for tau in [1, 2, 3, 8, 40, 100] {
                check(&t, tau, 3000, seed);
            }
        }
    }

    #[test]
    fn periodic_stretches() {
        let mut s: Vec<u8> = Vec::new();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        for _ in 0..12 {
            let unit: Vec<u8> = (0..rng.gen_range(1..5))
                .map(|_| b'a' + rng.gen_range(0..3))
                .collect();
            let reps = rng.gen_range(1..1500);
            for _ in 0..reps {
                s.extend(&unit);
            }
            s.push(b'a' + rng.gen_range(0..3));
        }
        let t = Text::new(s);
        for tau in [4, 16, 64] {
            let idx = check(&t, tau, 5000, 9);
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
            let mut periodic = 0;
            for _ in 0..5000 {
                let i = rng.gen_range(1..=t.len());
                let j = (i + rng.gen_range(1..5)).min(t.len());
                let q = idx.lce_stats(&t, i, j).unwrap();
                assert_eq!(q.lce, naive_lce(&t, i, j));
                assert!(!q.fallback);
                periodic += q.periodic as usize;
            }
            // only a fine set above τ' = 12 has long blocks
            assert!(tau < 64 || periodic > 0);
        }
        let unary = Text::new(vec![b'x'; 3000]);
        check(&unary, 30, 2000, 1);
    }

    #[test]
    fn round_trip() {
        let t = random_text(3000, 2, 5);
        let idx = DcIndex::build(&t, 32).unwrap();
        let bytes = idx.to_bytes(&t);
        let (t2, idx2) = DcIndex::from_bytes(&bytes).unwrap();
        assert_eq!((t2, &idx2), (t.clone(), &idx));
        assert_eq!(idx2.to_bytes(&t), bytes);
        assert!(LceIndex::from_bytes(&bytes).is_err());
        assert!(DcIndex::from_bytes(&bytes[..bytes.len() - 1]).is_err());
    }
}
