//! LCE queries in `O(|P|)` words over a partitioning set `P`.
//!
//! The blocks cut by `P` are ranked so that equal ranks mean equal strings,
//! giving the partitioning string `s_p`. A suffix array with LCP and a
//! sparse table over `s_p` tells, for two block starts, how many characters
//! of whole blocks they share. A query first compares `3D` characters
//! directly, then aligns both sides on the first selected position past
//! offset `D`, jumps over the common blocks and finishes with a short scan.

use crate::serial::{self, Reader, Writer};
use crate::suffix_core::{lcp_kasai, sort_strings_by, suffix_array, SparseTable};
use crate::{Error, Mode, PartitioningSet, Result, Text};

/// Symbols at or above this value in block keys encode a block length.
const LENGTH_BAND: u64 = 1 << 32;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LceIndex {
    pub pset: PartitioningSet,
    /// Rank of every block (`1..`) followed by a terminator `0`.
    pub s_p: Vec<u32>,
    pub sa: Vec<u32>,
    inv: Vec<u32>,
    rmq: SparseTable,
    // a[q] = index in pset.positions of the first position >= q·τ
    a: Vec<u32>,
    // block index of positions[0]
    lead: usize,
    d: usize,
}

/// Query answer with its cost.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QueryStats {
    pub lce: usize,
    pub comparisons: usize,
    pub hops: usize,
}

/// Ranks of the blocks of `pset`, starting at 1. Blocks longer than
/// `span` are keyed by their first `2·span` characters and their length.
pub fn rank_blocks(text: &Text, pset: &PartitioningSet) -> (Vec<u32>, usize) {
    let blocks: Vec<(usize, usize)> = pset.blocks().collect();
    let cap = 2 * pset.span;
    let ranks = sort_strings_by(blocks.len(), |k, d| {
        let (s, e) = blocks[k];
        let len = e + 1 - s;
        if len > pset.span {
            match d.cmp(&cap) {
                std::cmp::Ordering::Less => Some(text.sym(s + d) as u64),
                std::cmp::Ordering::Equal => Some(LENGTH_BAND + len as u64),
                std::cmp::Ordering::Greater => None,
            }
        } else {
            (d < len).then(|| text.sym(s + d) as u64)
        }
    });
    let distinct = ranks.iter().max().map_or(0, |&r| r as usize + 1);
    (ranks.into_iter().map(|r| r + 1).collect(), distinct)
}

impl LceIndex {
    pub fn build(text: &Text, pset: &PartitioningSet) -> Result<LceIndex> {
        if pset.n != text.len() {
            return Err(Error::Parameter(format!(
                "set built for n = {}, text has {}",
                pset.n,
                text.len()
            )));
        }
        if text.is_empty() {
            return Err(Error::Parameter("empty text".into()));
        }
        let (mut s_p, _) = rank_blocks(text, pset);
        s_p.push(0);
        let sa = suffix_array(&s_p);
        let lcp = lcp_kasai(&s_p, &sa);
        Ok(Self::assemble(pset.clone(), s_p, sa, lcp))
    }

    fn assemble(pset: PartitioningSet, s_p: Vec<u32>, sa: Vec<u32>, lcp: Vec<u32>) -> LceIndex {
        let mut inv = vec![0u32; sa.len()];
        for (r, &s) in sa.iter().enumerate() {
            inv[s as usize] = r as u32;
        }
        let a = sample_array(&pset);
        Self::from_parts(pset, s_p, sa, inv, SparseTable::new(lcp), a)
    }

    fn from_parts(
        pset: PartitioningSet,
        s_p: Vec<u32>,
        sa: Vec<u32>,
        inv: Vec<u32>,
        rmq: SparseTable,
        a: Vec<u32>,
    ) -> LceIndex {
        let lead = usize::from(pset.positions.first() != Some(&1));
        let d = pset.delta.max(pset.span + 1);
        LceIndex {
            pset,
            s_p,
            sa,
            inv,
            rmq,
            a,
            lead,
            d,
        }
    }

    /// Offset at which successor lookups start.
    pub fn radius(&self) -> usize {
        self.d
    }

    /// Words held by the index, counting one per array entry.
    pub fn words(&self) -> usize {
        self.pset.positions.len()
            + 2 * self.pset.block_periods.len()
            + self.s_p.len()
            + self.sa.len()
            + self.inv.len()
            + self.rmq.words()
            + self.a.len()
    }

    /// `(index, position)` of the smallest selected position `>= x`, with
    /// `(|P|, n+1)` when there is none, plus the list hops taken.
    pub fn successor(&self, x: usize) -> (usize, usize, usize) {
        let pos = &self.pset.positions;
        if x > self.pset.n {
            return (pos.len(), self.pset.n + 1, 0);
        }
        let mut k = self.a[x / self.pset.tau.max(1)] as usize;
        let mut hops = 0;
        while k < pos.len() && pos[k] < x {
            k += 1;
            hops += 1;
        }
        (k, pos.get(k).copied().unwrap_or(self.pset.n + 1), hops)
    }

    fn block_start(&self, b: usize) -> usize {
        if b < self.lead {
            1
        } else {
            self.pset
                .positions
                .get(b - self.lead)
                .copied()
                .unwrap_or(self.pset.n + 1)
        }
    }

    /// Number of blocks, excluding the terminator.
    pub fn blocks(&self) -> usize {
        self.s_p.len() - 1
    }

    /// Character length of the longest common run of whole blocks starting
    /// at blocks `bi` and `bj`, with the number of blocks in it.
    pub fn block_lcp(&self, bi: usize, bj: usize) -> Result<(usize, usize)> {
        let h = self.blocks();
        if bi > h || bj > h {
            return Err(Error::OutOfRange {
                pos: bi.max(bj),
                n: h,
            });
        }
        let c = if bi == bj {
            h - bi
        } else {
            let (ri, rj) = (self.inv[bi] as usize, self.inv[bj] as usize);
            self.rmq.min(ri.min(rj), ri.max(rj) - 1)? as usize
        };
        Ok((self.block_start(bi + c) - self.block_start(bi), c))
    }

    pub fn lce(&self, text: &Text, i: usize, j: usize) -> Result<usize> {
        self.lce_stats(text, i, j).map(|q| q.lce)
    }

    /// [`LceIndex::lce`] reporting character comparisons and successor hops.
    pub fn lce_stats(&self, text: &Text, i: usize, j: usize) -> Result<QueryStats> {
        text.check_pos(i)?;
        text.check_pos(j)?;
        if text.len() != self.pset.n {
            return Err(Error::Parameter("index belongs to another text".into()));
        }
        let n = text.len();
        let mut q = QueryStats {
            lce: 0,
            comparisons: 0,
            hops: 0,
        };
        if i == j {
            q.lce = n + 1 - i;
            return Ok(q);
        }
        let d = self.d;
        if let Some(k) = scan(text, i, j, 0, Some(3 * d), &mut q.comparisons) {
            q.lce = k;
            return Ok(q);
        }
        let (ki, si, hi) = self.successor(i + d);
        let (kj, sj, hj) = self.successor(j + d);
        q.hops = hi + hj;
        let (ai, aj) = (si - i, sj - j);
        let alpha = ai.min(aj);
        // Past 3D the stretch up to alpha is one periodic block on each
        // side, so it matches.
        let from = alpha.max(3 * d);
        if ai != aj || si > n || sj > n {
            q.lce = scan(text, i, j, from, None, &mut q.comparisons).unwrap();
            return Ok(q);
        }
        let (bi, bj) = (ki + self.lead, kj + self.lead);
        let (len, c) = self.block_lcp(bi, bj)?;
        let mut o = alpha + len;
        let li = self
            .block_start(bi + c + 1)
            .saturating_sub(self.block_start(bi + c));
        let lj = self
            .block_start(bj + c + 1)
            .saturating_sub(self.block_start(bj + c));
        let m = li.min(lj);
        if m > self.pset.span {
            // two distinct long blocks: equal heads mean equal periods, so
            // they agree up to the shorter one's end
            if let Some(k) = scan(
                text,
                i,
                j,
                o,
                Some(o + 2 * self.pset.span),
                &mut q.comparisons,
            ) {
                q.lce = k;
                return Ok(q);
            }
            o += m;
        }
        q.lce = scan(text, i, j, o, None, &mut q.comparisons).unwrap();
        Ok(q)
    }

    pub fn to_bytes(&self, text: &Text) -> Vec<u8> {
        let mut w = Writer::header(serial::TAG_LCE, self.pset.mode, text);
        self.write(&mut w);
        w.finish()
    }

    pub(crate) fn write(&self, w: &mut Writer) {
        w.pset(&self.pset);
        w.u32s(&self.s_p);
        w.u32s(&self.sa);
        w.u32s(self.rmq.values());
        w.usize(self.rmq.levels().len());
        for l in self.rmq.levels() {
            w.u32s(l);
        }
        w.u32s(&self.a);
    }

    /// Load an index file, returning the embedded text with it.
    pub fn from_bytes(bytes: &[u8]) -> Result<(Text, LceIndex)> {
        let mut r = Reader::new(bytes);
        let h = r.header()?;
        if h.tag != serial::TAG_LCE {
            return Err(Error::Corrupt(format!(
                "section tag {} is not an LCE index",
                h.tag
            )));
        }
        let idx = Self::read(&mut r, &h.text)?;
        r.finish()?;
        Ok((h.text, idx))
    }

    pub(crate) fn read(r: &mut Reader, text: &Text) -> Result<LceIndex> {
        let bad = |what: &str| Error::Corrupt(what.to_string());
        let pset = r.pset(text)?;
        let s_p = r.u32s()?;
        let sa = r.u32s()?;
        let lcp = r.u32s()?;
        let nlev = r.usize()?;
        if nlev > 64 {
            return Err(bad("too many rmq levels"));
        }
        let levels = (0..nlev).map(|_| r.u32s()).collect::<Result<Vec<_>>>()?;
        let a = r.u32s()?;
        let m = s_p.len();
        let h = pset.blocks().count();
        if m != h + 1 || sa.len() != m || lcp.len() != m - 1 || s_p[m - 1] != 0 || pset.tau == 0 {
            return Err(bad("array sizes disagree"));
        }
        let mut inv = vec![u32::MAX; m];
        for (rk, &s) in sa.iter().enumerate() {
            let slot = inv
                .get_mut(s as usize)
                .ok_or_else(|| bad("suffix array entry out of range"))?;
            if *slot != u32::MAX {
                return Err(bad("suffix array is not a permutation"));
            }
            *slot = rk as u32;
        }
        if lcp.iter().any(|&v| v as usize >= m) {
            return Err(bad("lcp entry out of range"));
        }
        let expect_rows = (usize::BITS - (m - 1).max(1).leading_zeros()) as usize;
        let shape_ok = m == 1 && levels.is_empty()
            || levels.len() == expect_rows
                && levels.iter().enumerate().all(|(k, row)| {
                    row.len() + (1 << k) == m
                        && row
                            .iter()
                            .enumerate()
                            .all(|(i, &x)| (x as usize) >= i && (x as usize) < i + (1 << k))
                });
        if !shape_ok {
            return Err(bad("rmq table shape"));
        }
        if a.len() != pset.n / pset.tau + 1 || a.iter().any(|&k| k as usize > pset.positions.len())
        {
            return Err(bad("sample array"));
        }
        let rmq = SparseTable::from_parts(lcp, levels);
        Ok(Self::from_parts(pset, s_p, sa, inv, rmq, a))
    }
}

fn sample_array(pset: &PartitioningSet) -> Vec<u32> {
    let tau = pset.tau.max(1);
    let pos = &pset.positions;
    let mut a = Vec::with_capacity(pset.n / tau + 1);
    let mut k = 0;
    for q in 0..=pset.n / tau {
        while k < pos.len() && pos[k] < q * tau {
            k += 1;
        }
        a.push(k as u32);
    }
    a
}

/// Compare `S[i+k]` and `S[j+k]` for `k = from, from+1, ..` up to `to`
/// (exclusive) and return the first mismatching `k`. The sentinel past the
/// text differs from every byte, so an unbounded scan always stops.
fn scan(
    text: &Text,
    i: usize,
    j: usize,
    from: usize,
    to: Option<usize>,
    cmp: &mut usize,
) -> Option<usize> {
    let mut k = from;
    loop {
        if to.is_some_and(|t| k >= t) {
            return None;
        }
        *cmp += 1;
        let (a, b) = (text.sym(i + k), text.sym(j + k));
        if a != b || a == 0 {
            return Some(k);
        }
        k += 1;
    }
}

/// Build the set for `mode` and index it. `Dcover` has its own index type
/// and is rejected here.
pub fn build_for_mode(text: &Text, tau: usize, mode: Mode, seed: u64) -> Result<LceIndex> {
    let pset = match mode {
        Mode::Rand => crate::partition_rand::build_rand(text, tau, seed)?,
        Mode::RandWhp => {
            crate::partition_rand::build_rand_whp(text, tau, seed, &Default::default())?.pset
        }
        Mode::Det => crate::partition_det::build_det(text, tau)?,
        Mode::Dcover => return Err(Error::Parameter("dcover uses DcIndex".into())),
    };
    LceIndex::build(text, &pset)
}
