//! Sparse suffix arrays and trees over an arbitrary position set `B`.
//!
//! Every selected position of a forward synchronized set gets a
//! representative string: `3D` characters, plus, for a long periodic block,
//! how and where its period breaks and `2D` characters from there. Sorting
//! the representatives and suffix-sorting the resulting rank sequence
//! orders the suffixes at `P`. A position of `B` is then ordered by its own
//! short key and the rank of the first selected position past offset `D`.
//!
//! Here `D = max(δ, 2·span)`: with a window of `D` characters inside one
//! long block, the window's principal period is the block's.

use crate::partition::right_violation_from;
use crate::suffix_core::{sort_strings_by, suffix_array, SparseTable};
use crate::{Error, PartitioningSet, Result, Text};

const BREAK_BELOW: u64 = 1 << 40;
const BREAK_ABOVE: u64 = BREAK_BELOW + 1;

/// Radius used for representative strings.
pub fn radius(pset: &PartitioningSet) -> usize {
    pset.delta.max(2 * pset.span).max(1)
}

/// Where a periodic stretch starting at `start` with period `rho` first
/// breaks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Break {
    start: usize,
    rho: usize,
    rv: usize,
}

/// Symbol `k` of a representative string: `3D` characters from `at`, then
/// for a periodic stretch `(sign, distance)` and `2D` characters from the
/// break. The sign orders a break below the period character first; the
/// distance is negated for breaks above it.
fn key_sym(text: &Text, at: usize, brk: Option<Break>, d: usize, k: usize) -> Option<u64> {
    if k < 3 * d {
        return Some(text.sym(at + k) as u64);
    }
    let b = brk?;
    let dist = (b.rv - b.start) as u64;
    let below = text.sym(b.rv) < text.sym(b.rv - b.rho);
    match k - 3 * d {
        0 => Some(if below { BREAK_BELOW } else { BREAK_ABOVE }),
        1 => Some(if below { dist } else { BREAK_BELOW - dist }),
        t if t < 2 + 2 * d => Some(text.sym(b.rv + t - 2) as u64),
        _ => None,
    }
}

fn block_break(text: &Text, pset: &PartitioningSet, p: usize, len: usize) -> Option<Break> {
    (len > pset.span).then(|| {
        let rho = pset.block_periods[&p];
        Break {
            start: p,
            rho,
            rv: right_violation_from(text, p, rho, p + len),
        }
    })
}

/// Representative string of the block starting at `p` with length `len`.
pub fn representative(text: &Text, pset: &PartitioningSet, p: usize, len: usize) -> Vec<u64> {
    let d = radius(pset);
    let brk = block_break(text, pset, p, len);
    (0..).map_while(|k| key_sym(text, p, brk, d, k)).collect()
}

/// Lexicographic order of the suffixes starting at `P`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PsetOrder {
    /// Positions of `P` in suffix order.
    pub order: Vec<usize>,
    /// `rank[k]` is the place of `positions[k]` in `order`.
    pub rank: Vec<u32>,
}

pub fn ssa_of_pset(text: &Text, pset: &PartitioningSet) -> Result<PsetOrder> {
    if !pset.forward_sync {
        return Err(Error::Contract(
            "suffix sorting needs a forward synchronized set".into(),
        ));
    }
    let pos = &pset.positions;
    let n = text.len();
    let d = radius(pset);
    let breaks: Vec<Option<Break>> = (0..pos.len())
        .map(|k| {
            let len = pos.get(k + 1).copied().unwrap_or(n + 1) - pos[k];
            block_break(text, pset, pos[k], len)
        })
        .collect();
    let ranks = sort_strings_by(pos.len(), |k, t| key_sym(text, pos[k], breaks[k], d, t));
    let sa = suffix_array(&ranks);
    let mut rank = vec![0u32; pos.len()];
    for (r, &k) in sa.iter().enumerate() {
        rank[k as usize] = r as u32;
    }
    Ok(PsetOrder {
        order: sa.iter().map(|&k| pos[k as usize]).collect(),
        rank,
    })
}

/// Suffix order of the positions in `b` (any order, duplicates dropped),
/// given the suffix order of `P`.
pub fn ssa_of_b(
    text: &Text,
    b: &[usize],
    pset: &PartitioningSet,
    p_order: &PsetOrder,
) -> Result<Vec<usize>> {
    let n = text.len();
    let mut b: Vec<usize> = b.to_vec();
    b.sort_unstable();
    b.dedup();
    if let Some(&bad) = b.iter().find(|&&i| i == 0 || i > n) {
        return Err(Error::OutOfRange { pos: bad, n });
    }
    let d = radius(pset);
    // last computed (block start, rv) for periodic windows
    let mut cache: Option<(usize, usize)> = None;
    let mut breaks: Vec<Option<Break>> = Vec::with_capacity(b.len());
    let mut x = Vec::with_capacity(b.len());
    for &i in &b {
        let mut brk = None;
        let k = pset.positions.partition_point(|&p| p < i + d);
        let suc = pset.positions.get(k).copied().unwrap_or(n + 1);
        if suc >= i + 2 * d && i + d <= n {
            // i+D .. i+2D lies inside one long block
            let bs = if k == 0 { 1 } else { pset.positions[k - 1] };
            let rho = *pset
                .block_periods
                .get(&bs)
                .ok_or_else(|| Error::Contract(format!("long block at {bs} has no period")))?;
            let rv = match cache {
                Some((s, rv)) if s == bs => rv,
                _ => {
                    let rv = right_violation_from(text, bs, rho, suc);
                    cache = Some((bs, rv));
                    rv
                }
            };
            brk = Some(Break {
                start: i + d,
                rho,
                rv,
            });
        }
        breaks.push(brk);
        x.push(if suc > n { 0 } else { p_order.rank[k] + 1 });
    }
    let r = sort_strings_by(b.len(), |k, t| key_sym(text, b[k], breaks[k], d, t));
    let mut idx: Vec<usize> = (0..b.len()).collect();
    idx.sort_unstable_by_key(|&k| (r[k], x[k]));
    Ok(idx.into_iter().map(|k| b[k]).collect())
}

/// A node of the sparse suffix tree. The edge into the node spells
/// `S[pos + depth(parent) .. pos + depth)`, where the sentinel stands for
/// the end of a suffix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Node {
    pub parent: Option<usize>,
    pub depth: usize,
    pub pos: usize,
    /// Suffix start for leaves.
    pub leaf: Option<usize>,
    pub children: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseSuffixIndex {
    pub ssa: Vec<usize>,
    /// `lcp[k] = LCE(ssa[k], ssa[k+1])`.
    pub lcp: Vec<usize>,
    /// Node 0 is the root.
    pub nodes: Vec<Node>,
    rmq: SparseTable,
    // (position, rank) sorted by position
    by_pos: Vec<(usize, u32)>,
}

/// LCP array from LCE queries, then the compact trie by a rightmost-path
/// stack. Leaves sit one below the suffix length (the terminator), so a
/// suffix that prefixes another still ends in its own leaf.
pub fn build_sst<F>(text: &Text, ssa: Vec<usize>, lce: F) -> Result<SparseSuffixIndex>
where
    F: Fn(usize, usize) -> Result<usize>,
{
    let lcp = ssa
        .windows(2)
        .map(|w| lce(w[0], w[1]))
        .collect::<Result<Vec<_>>>()?;
    Ok(SparseSuffixIndex::from_sorted(text, ssa, lcp))
}

impl SparseSuffixIndex {
    /// Assemble from a suffix order and its LCP array.
    pub fn from_sorted(text: &Text, ssa: Vec<usize>, lcp: Vec<usize>) -> SparseSuffixIndex {
        let n = text.len();
        let mut nodes = vec![Node {
            parent: None,
            depth: 0,
            pos: ssa.first().copied().unwrap_or(1),
            leaf: None,
            children: Vec::new(),
        }];
        let mut first_rank = vec![0usize];
        let mut stack = vec![0usize];
        for (k, &s) in ssa.iter().enumerate() {
            if k > 0 {
                let h = lcp[k - 1];
                let mut last = None;
                while nodes[*stack.last().unwrap()].depth > h {
                    last = stack.pop();
                }
                let top = *stack.last().unwrap();
                if nodes[top].depth < h {
                    let below = last.expect("a deeper node was popped");
                    let id = nodes.len();
                    nodes.push(Node {
                        parent: Some(top),
                        depth: h,
                        pos: s,
                        leaf: None,
                        children: Vec::new(),
                    });
                    first_rank.push(first_rank[below]);
                    nodes[below].parent = Some(id);
                    stack.push(id);
                }
            }
            let top = *stack.last().unwrap();
            nodes.push(Node {
                parent: Some(top),
                depth: (n + 2).saturating_sub(s),
                pos: s,
                leaf: Some(s),
                children: Vec::new(),
            });
            first_rank.push(k);
            stack.push(nodes.len() - 1);
        }
        for v in 1..nodes.len() {
            let p = nodes[v].parent.unwrap();
            nodes[p].children.push(v);
        }
        for node in nodes.iter_mut() {
            node.children.sort_unstable_by_key(|&c| first_rank[c]);
        }
        let mut by_pos: Vec<(usize, u32)> = ssa
            .iter()
            .enumerate()
            .map(|(r, &p)| (p, r as u32))
            .collect();
        by_pos.sort_unstable();
        let rmq = SparseTable::new(lcp.iter().map(|&v| v as u32).collect());
        SparseSuffixIndex {
            ssa,
            lcp,
            nodes,
            rmq,
            by_pos,
        }
    }

    /// Sort `b` with the help of `pset` and build the tree, answering the
    /// LCP queries with an LCE index over `pset`.
    pub fn build(text: &Text, b: &[usize], pset: &PartitioningSet) -> Result<SparseSuffixIndex> {
        let order = ssa_of_pset(text, pset)?;
        let ssa = ssa_of_b(text, b, pset, &order)?;
        let idx = crate::lce_index::LceIndex::build(text, pset)?;
        build_sst(text, ssa, |i, j| idx.lce(text, i, j))
    }

    pub fn len(&self) -> usize {
        self.ssa.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ssa.is_empty()
    }

    /// Place of position `p` in the suffix order, if `p` was sorted.
    pub fn rank_of(&self, p: usize) -> Option<usize> {
        self.by_pos
            .binary_search_by_key(&p, |&(q, _)| q)
            .ok()
            .map(|k| self.by_pos[k].1 as usize)
    }

    /// LCE of two sorted positions from the LCP array.
    pub fn lce_between(&self, n: usize, a: usize, b: usize) -> Option<usize> {
        let (ra, rb) = (self.rank_of(a)?, self.rank_of(b)?);
        if ra == rb {
            return Some(n + 1 - a);
        }
        self.rmq
            .min(ra.min(rb), ra.max(rb) - 1)
            .ok()
            .map(|v| v as usize)
    }

    /// Words held, one per entry.
    pub fn words(&self) -> usize {
        self.ssa.len()
            + self.lcp.len()
            + self.rmq.words()
            + 2 * self.by_pos.len()
            + self.nodes.len() * 5
    }

    /// `pos lcp` per line, `lcp` being the LCE with the previous entry
    /// (0 for the first).
    pub fn export_lines(&self) -> String {
        let mut out = String::new();
        for (k, &p) in self.ssa.iter().enumerate() {
            let h = if k == 0 { 0 } else { self.lcp[k - 1] };
            out.push_str(&format!("{p} {h}\n"));
        }
        out
    }

    /// The tree as `(depth child ...)` with leaves written as their suffix
    /// start.
    pub fn export_tree(&self) -> String {
        let mut out = String::new();
        self.write_node(0, &mut out);
        out
    }

    fn write_node(&self, v: usize, out: &mut String) {
        let node = &self.nodes[v];
        if let Some(p) = node.leaf {
            out.push_str(&p.to_string());
            return;
        }
        out.push('(');
        out.push_str(&node.depth.to_string());
        for &c in &node.children {
            out.push(' ');
            self.write_node(c, out);
        }
        out.push(')');
    }

    /// Check arity, distinct first characters and depths against the text.
    pub fn validate(&self, text: &Text) -> std::result::Result<(), String> {
        let leaves = self.nodes.iter().filter(|v| v.leaf.is_some()).count();
        if leaves != self.ssa.len() {
            return Err(format!("{leaves} leaves for {} suffixes", self.ssa.len()));
        }
        for (v, node) in self.nodes.iter().enumerate() {
            if node.leaf.is_none() && v != 0 && node.children.len() < 2 {
                return Err(format!(
                    "internal node {v} has {} children",
                    node.children.len()
                ));
            }
            let mut firsts: Vec<u32> = node
                .children
                .iter()
                .map(|&c| text.sym(self.nodes[c].pos + node.depth))
                .collect();
            let k = firsts.len();
            firsts.sort_unstable();
            firsts.dedup();
            if firsts.len() != k {
                return Err(format!("children of node {v} share a first character"));
            }
            if let Some(p) = node.parent {
                let pd = self.nodes[p].depth;
                if pd >= node.depth {
                    return Err(format!("node {v} is not deeper than its parent"));
                }
            }
            // children extend the node's path
            let h = node.depth;
            if node.leaf.is_none()
                && node
                    .children
                    .iter()
                    .any(|&c| text.window(self.nodes[c].pos, h) != text.window(node.pos, h))
            {
                return Err(format!("a child of node {v} leaves its path"));
            }
        }
        Ok(())
    }
}
