//! Suffix array (SA-IS), Kasai LCP, sparse-table RMQ and grouped string
//! sorting. All indices here are 0-based.

use crate::{Error, Result};

const EMPTY: usize = usize::MAX;

/// Suffix array of `s` over an integer alphabet. Symbols are rank-compressed
/// first, so any `u32` values are accepted.
///
/// ```
/// use sslce::suffix_core::suffix_array;
/// let s: Vec<u32> = b"banana".iter().map(|&b| b as u32).collect();
/// assert_eq!(suffix_array(&s), vec![5, 3, 1, 0, 4, 2]);
/// ```
pub fn suffix_array(s: &[u32]) -> Vec<u32> {
    let (ranked, upper) = compress(s);
    sa_is(&ranked, upper)
        .into_iter()
        .map(|v| v as u32)
        .collect()
}

fn compress(s: &[u32]) -> (Vec<usize>, usize) {
    if s.is_empty() {
        return (Vec::new(), 0);
    }
    let max = *s.iter().max().unwrap() as usize;
    if max <= 2 * s.len() + 256 {
        return (s.iter().map(|&c| c as usize).collect(), max);
    }
    let mut vals = s.to_vec();
    vals.sort_unstable();
    vals.dedup();
    let ranked = s.iter().map(|c| vals.binary_search(c).unwrap()).collect();
    (ranked, vals.len() - 1)
}

fn sa_is(s: &[usize], upper: usize) -> Vec<usize> {
    let n = s.len();
    match n {
        0 => return vec![],
        1 => return vec![0],
        2 => return if s[0] < s[1] { vec![0, 1] } else { vec![1, 0] },
        _ => {}
    }
    let mut sa = vec![EMPTY; n];
    let mut ls = vec![false; n];
    for i in (0..n - 1).rev() {
        ls[i] = if s[i] == s[i + 1] {
            ls[i + 1]
        } else {
            s[i] < s[i + 1]
        };
    }
    let mut sum_l = vec![0usize; upper + 2];
    let mut sum_s = vec![0usize; upper + 2];
    for i in 0..n {
        if !ls[i] {
            sum_s[s[i]] += 1;
        } else {
            sum_l[s[i] + 1] += 1;
        }
    }
    for i in 0..=upper {
        sum_s[i] += sum_l[i];
        if i < upper {
            sum_l[i + 1] += sum_s[i];
        }
    }

    let induce = |sa: &mut [usize], lms: &[usize]| {
        sa.fill(EMPTY);
        let mut buf = sum_s.clone();
        for &d in lms {
            if d == n {
                continue;
            }
            sa[buf[s[d]]] = d;
            buf[s[d]] += 1;
        }
        buf.copy_from_slice(&sum_l);
        sa[buf[s[n - 1]]] = n - 1;
        buf[s[n - 1]] += 1;
        for i in 0..n {
            let v = sa[i];
            if v != EMPTY && v >= 1 && !ls[v - 1] {
                sa[buf[s[v - 1]]] = v - 1;
                buf[s[v - 1]] += 1;
            }
        }
        buf.copy_from_slice(&sum_l);
        for i in (0..n).rev() {
            let v = sa[i];
            if v != EMPTY && v >= 1 && ls[v - 1] {
                buf[s[v - 1] + 1] -= 1;
                sa[buf[s[v - 1] + 1]] = v - 1;
            }
        }
    };

    let mut lms_map = vec![EMPTY; n + 1];
    let mut lms = Vec::new();
    for i in 1..n {
        if !ls[i - 1] && ls[i] {
            lms_map[i] = lms.len();
            lms.push(i);
        }
    }
    let m = lms.len();
    induce(&mut sa, &lms);

    if m > 0 {
        let mut sorted_lms: Vec<usize> = sa
            .iter()
            .copied()
            .filter(|&v| lms_map[v] != EMPTY)
            .collect();
        let mut rec_s = vec![0usize; m];
        let mut rec_upper = 0;
        rec_s[lms_map[sorted_lms[0]]] = 0;
        for k in 1..m {
            let (mut l, mut r) = (sorted_lms[k - 1], sorted_lms[k]);
            let end_l = if lms_map[l] + 1 < m {
                lms[lms_map[l] + 1]
            } else {
                n
            };
            let end_r = if lms_map[r] + 1 < m {
                lms[lms_map[r] + 1]
            } else {
                n
            };
            let mut same = true;
            if end_l - l != end_r - r {
                same = false;
            } else {
                while l < end_l && s[l] == s[r] {
                    l += 1;
                    r += 1;
                }
                if l == n || s[l] != s[r] {
                    same = false;
                }
            }
            if !same {
                rec_upper += 1;
            }
            rec_s[lms_map[sorted_lms[k]]] = rec_upper;
        }
        let rec_sa = sa_is(&rec_s, rec_upper);
        for k in 0..m {
            sorted_lms[k] = lms[rec_sa[k]];
        }
        induce(&mut sa, &sorted_lms);
    }
    sa
}

/// Kasai's algorithm. `lcp[k]` is the longest common prefix of the suffixes
/// at `sa[k]` and `sa[k+1]`, so the result has `len - 1` entries.
pub fn lcp_kasai(s: &[u32], sa: &[u32]) -> Vec<u32> {
    let n = s.len();
    if n < 2 {
        return Vec::new();
    }
    let mut rank = vec![0u32; n];
    for (k, &p) in sa.iter().enumerate() {
        rank[p as usize] = k as u32;
    }
    let mut lcp = vec![0u32; n - 1];
    let mut h = 0usize;
    for i in 0..n {
        let r = rank[i] as usize;
        if r + 1 == n {
            h = 0;
            continue;
        }
        let j = sa[r + 1] as usize;
        while i + h < n && j + h < n && s[i + h] == s[j + h] {
            h += 1;
        }
        lcp[r] = h as u32;
        h = h.saturating_sub(1);
    }
    lcp
}

/// Sparse table answering leftmost-argmin queries in O(1).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseTable {
    values: Vec<u32>,
    // levels[k][i] = argmin of values[i..i + 2^k]
    levels: Vec<Vec<u32>>,
}

impl SparseTable {
    pub fn new(values: Vec<u32>) -> SparseTable {
        let m = values.len();
        let mut levels: Vec<Vec<u32>> = Vec::new();
        if m > 0 {
            levels.push((0..m as u32).collect());
        }
        let mut k = 1;
        while (1usize << k) <= m {
            let prev = &levels[k - 1];
            let half = 1usize << (k - 1);
            let row: Vec<u32> = (0..=m - (1 << k))
                .map(|i| {
                    let (a, b) = (prev[i], prev[i + half]);
                    if values[b as usize] < values[a as usize] {
                        b
                    } else {
                        a
                    }
                })
                .collect();
            levels.push(row);
            k += 1;
        }
        SparseTable { values, levels }
    }

    pub(crate) fn from_parts(values: Vec<u32>, levels: Vec<Vec<u32>>) -> SparseTable {
        SparseTable { values, levels }
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    pub(crate) fn levels(&self) -> &[Vec<u32>] {
        &self.levels
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Index of the minimum of `values[l..=r]`, leftmost on ties.
    pub fn argmin(&self, l: usize, r: usize) -> Result<usize> {
        if l > r || r >= self.values.len() {
            return Err(Error::Contract(format!(
                "rmq range {l}..={r} of {}",
                self.values.len()
            )));
        }
        let k = (usize::BITS - 1 - (r - l + 1).leading_zeros()) as usize;
        let a = self.levels[k][l] as usize;
        let b = self.levels[k][r + 1 - (1 << k)] as usize;
        Ok(if self.values[b] < self.values[a] {
            b
        } else {
            a
        })
    }

    /// Minimum of `values[l..=r]`.
    pub fn min(&self, l: usize, r: usize) -> Result<u32> {
        self.argmin(l, r).map(|k| self.values[k])
    }

    /// Machine words held, counting one word per entry.
    pub fn words(&self) -> usize {
        self.values.len() + self.levels.iter().map(Vec::len).sum::<usize>()
    }
}

/// Dense ranks of `keys` in lexicographic order, equal keys sharing a rank.
/// A proper prefix sorts before its extensions.
///
/// ```
/// use sslce::suffix_core::sort_strings;
/// let keys = vec![vec![2], vec![1, 2], vec![1, 1], vec![1, 2]];
/// assert_eq!(sort_strings(&keys), vec![2, 1, 0, 1]);
/// ```
pub fn sort_strings(keys: &[Vec<u64>]) -> Vec<u32> {
    sort_strings_by(keys.len(), |k, d| keys[k].get(d).copied())
}

/// [`sort_strings`] over keys given by a symbol accessor: `sym(k, d)` is the
/// `d`-th symbol of key `k`, or `None` past its end.
///
/// Sorting is MSD: each group of keys sharing a prefix of length `d` is split
/// by symbol `d`, so a key is read only as far as needed to separate it.
pub fn sort_strings_by<F>(count: usize, sym: F) -> Vec<u32>
where
    F: Fn(usize, usize) -> Option<u64>,
{
    let mut order: Vec<u32> = (0..count as u32).collect();
    let mut ranks = vec![0u32; count];
    // (lo, hi, depth): order[lo..hi] share their first `depth` symbols
    let mut stack = vec![(0usize, count, 0usize)];
    let mut group_end = vec![0usize; count];
    let mut buf: Vec<(Option<u64>, u32)> = Vec::new();
    while let Some((lo, hi, d)) = stack.pop() {
        if hi - lo == 1 {
            group_end[lo] = hi;
            continue;
        }
        buf.clear();
        buf.extend(order[lo..hi].iter().map(|&k| (sym(k as usize, d), k)));
        buf.sort_by_key(|&(c, _)| c);
        for (slot, &(_, k)) in order[lo..hi].iter_mut().zip(buf.iter()) {
            *slot = k;
        }
        let mut start = 0;
        while start < buf.len() {
            let c = buf[start].0;
            let mut end = start + 1;
            while end < buf.len() && buf[end].0 == c {
                end += 1;
            }
            if c.is_none() || end - start == 1 {
                group_end[lo + start] = lo + end;
            } else {
                stack.push((lo + start, lo + end, d + 1));
            }
            start = end;
        }
    }
    let mut rank = 0u32;
    let mut k = 0;
    while k < count {
        let end = group_end[k];
        for &key in &order[k..end] {
            ranks[key as usize] = rank;
        }
        rank += 1;
        k = end;
    }
    ranks
}
