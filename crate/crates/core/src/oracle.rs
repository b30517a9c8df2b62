//! Brute-force references for tests and the `verify` command.
//!
//! Nothing here calls into the production modules except for reading the
//! input types; every answer is recomputed from the raw bytes.

use std::collections::HashMap;

use crate::periodicity::Run;
use crate::{PartitioningSet, Text};

/// `min{k >= 0 : S[i+k] != S[j+k]}` with the sentinel past the end.
pub fn naive_lce(text: &Text, i: usize, j: usize) -> usize {
    let s = text.as_bytes();
    let (a, b) = (&s[i - 1..], &s[j - 1..]);
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

/// Positions of `b` sorted by their suffixes. A suffix that is a prefix of
/// another sorts first.
pub fn naive_ssa(text: &Text, b: &[usize]) -> Vec<usize> {
    let s = text.as_bytes();
    let mut out = b.to_vec();
    out.sort_by(|&x, &y| s[x - 1..].cmp(&s[y - 1..]));
    out
}

/// All maximal runs of length `>= tau` whose principal period is at most
/// `tau/6`, found by sweeping every candidate period.
pub fn naive_runs(text: &Text, tau: usize) -> Vec<Run> {
    let s = text.as_bytes();
    let n = s.len();
    let mut found: HashMap<(usize, usize), usize> = HashMap::new();
    for rho in 1..=tau / 6 {
        let mut k = rho;
        while k < n {
            if s[k] != s[k - rho] {
                k += 1;
                continue;
            }
            let a = k;
            while k < n && s[k] == s[k - rho] {
                k += 1;
            }
            // 0-based s[a - rho..k] has period rho
            let (start, end) = (a - rho + 1, k);
            if end + 1 - start >= tau {
                found.entry((start, end)).or_insert(rho);
            }
        }
    }
    let mut runs: Vec<Run> = found
        .into_iter()
        .map(|((start, end), period)| Run { start, end, period })
        .collect();
    runs.sort();
    runs
}

/// Outcome of [`check_pset`].
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PsetReport {
    pub size: usize,
    pub ratio: f64,
    pub local_pairs: usize,
    pub local_violations: usize,
    pub long_blocks: usize,
    pub compactness_violations: usize,
    pub sync_pairs: usize,
    pub sync_violations: usize,
    pub first_violation: Option<String>,
}

impl PsetReport {
    pub fn passed(&self) -> bool {
        self.local_violations == 0 && self.compactness_violations == 0 && self.sync_violations == 0
    }

    fn fail(&mut self, msg: String) {
        if self.first_violation.is_none() {
            self.first_violation = Some(msg);
        }
    }
}

const MUL: u64 = 0x9e37_79b9_7f4a_7c15;

/// Wrapping polynomial hash of every substring, via prefix sums.
struct Prefix {
    h: Vec<u64>,
    pw: Vec<u64>,
}

impl Prefix {
    fn new(s: &[u8]) -> Prefix {
        let mut h = vec![0u64; s.len() + 1];
        let mut pw = vec![1u64; s.len() + 1];
        for (k, &c) in s.iter().enumerate() {
            h[k + 1] = h[k].wrapping_mul(MUL).wrapping_add(c as u64 + 1);
            pw[k + 1] = pw[k].wrapping_mul(MUL);
        }
        Prefix { h, pw }
    }

    // 0-based half-open
    fn get(&self, lo: usize, hi: usize) -> u64 {
        self.h[hi].wrapping_sub(self.h[lo].wrapping_mul(self.pw[hi - lo]))
    }
}

/// Check local consistency, compactness and forward synchronization of
/// `pset`, and report its size ratio.
///
/// Local consistency is tested on every pair of positions in
/// `[1+δ, n-δ]` whose `(2δ+1)`-contexts are equal; pairs are grouped by a
/// context hash and confirmed byte for byte. Forward synchronization is
/// tested on every pair of selected positions whose suffixes agree beyond
/// the first block plus `δ`.
pub fn check_pset(text: &Text, pset: &PartitioningSet) -> PsetReport {
    let s = text.as_bytes();
    let n = s.len();
    let delta = pset.delta;
    let mut member = vec![false; n + 2];
    for &p in &pset.positions {
        member[p] = true;
    }
    let mut rep = PsetReport {
        size: pset.positions.len(),
        ratio: if n == 0 {
            0.0
        } else {
            pset.positions.len() as f64 * pset.tau as f64 / n as f64
        },
        ..Default::default()
    };
    let pre = Prefix::new(s);

    // local consistency
    if n > 2 * delta {
        let mut groups: HashMap<u64, Vec<usize>> = HashMap::new();
        for i in 1 + delta..=n - delta {
            groups
                .entry(pre.get(i - 1 - delta, i + delta))
                .or_default()
                .push(i);
        }
        for members in groups.values() {
            if members.len() < 2 {
                continue;
            }
            // split by exact context; each class keeps one representative
            let mut classes: Vec<(usize, bool)> = Vec::new();
            for &i in members {
                let ctx = &s[i - 1 - delta..i + delta];
                match classes
                    .iter()
                    .find(|&&(r, _)| &s[r - 1 - delta..r + delta] == ctx)
                {
                    Some(&(r, m)) => {
                        rep.local_pairs += 1;
                        if m != member[i] {
                            rep.local_violations += 1;
                            rep.fail(format!(
                                "equal contexts at {r} and {i} disagree on membership"
                            ));
                        }
                    }
                    None => classes.push((i, member[i])),
                }
            }
        }
    }

    // compactness
    let mut bounds: Vec<usize> = Vec::new();
    if pset.positions.first() != Some(&1) {
        bounds.push(1);
    }
    bounds.extend_from_slice(&pset.positions);
    bounds.push(n + 1);
    for w in bounds.windows(2) {
        let (start, next) = (w[0], w[1]);
        if next - start <= pset.span {
            continue;
        }
        rep.long_blocks += 1;
        let ok = match pset.block_periods.get(&start) {
            Some(&rho) if rho >= 1 && rho <= pset.span => {
                (start + rho..next).all(|k| s[k - 1] == s[k - 1 - rho])
            }
            _ => false,
        };
        if !ok {
            rep.compactness_violations += 1;
            rep.fail(format!(
                "block {start}..{next} longer than {} without a verified period",
                pset.span
            ));
        }
    }

    // forward synchronization
    let pos = &pset.positions;
    let gap = |k: usize| pos.get(k + 1).copied().unwrap_or(n + 1) - pos[k];
    let mut by_gap: HashMap<usize, Vec<usize>> = HashMap::new();
    for k in 0..pos.len() {
        by_gap.entry(gap(k)).or_default().push(k);
    }
    let mut gaps: Vec<usize> = by_gap.keys().copied().collect();
    gaps.sort_unstable();
    for &g in &gaps {
        let m = g + delta + 1;
        // buckets of selected positions by hash of S[p..p+m)
        let mut buckets: HashMap<u64, Vec<usize>> = HashMap::new();
        for (k, &p) in pos.iter().enumerate() {
            if p - 1 + m <= n {
                buckets
                    .entry(pre.get(p - 1, p - 1 + m))
                    .or_default()
                    .push(k);
            }
        }
        for &a in &by_gap[&g] {
            let p = pos[a];
            if p - 1 + m > n {
                continue;
            }
            let bucket = &buckets[&pre.get(p - 1, p - 1 + m)];
            rep.sync_pairs += bucket.len() - 1;
            for &b in bucket {
                if gap(b) != g && s[p - 1..p - 1 + m] == s[pos[b] - 1..pos[b] - 1 + m] {
                    rep.sync_violations += 1;
                    rep.fail(format!(
                        "positions {p} and {} share {m} characters but blocks differ",
                        pos[b]
                    ));
                    break;
                }
            }
        }
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Mode;

    #[test]
    fn lce_examples() {
        let t = Text::from("abaababa");
        assert_eq!(naive_lce(&t, 1, 4), 3);
        assert_eq!(naive_lce(&t, 3, 3), 6);
        assert_eq!(naive_lce(&t, 1, 2), 0);
    }

    #[test]
    fn ssa_examples() {
        let t = Text::from("banana");
        assert_eq!(naive_ssa(&t, &[1, 2, 3, 4, 5, 6]), vec![6, 4, 2, 1, 5, 3]);
        assert_eq!(naive_ssa(&Text::from("aaa"), &[1, 3]), vec![3, 1]);
    }

    #[test]
    fn runs_examples() {
        assert_eq!(
            naive_runs(&Text::from("aaaaaaaaaa"), 6),
            vec![Run {
                start: 1,
                end: 10,
                period: 1
            }]
        );
        assert!(naive_runs(&Text::from("abcdefghij"), 6).is_empty());
        let t = Text::from(format!("{}z", "aab".repeat(8)).as_str());
        assert_eq!(
            naive_runs(&t, 18),
            vec![Run {
                start: 1,
                end: 24,
                period: 3
            }]
        );
    }

    #[test]
    fn pset_checks() {
        let t = Text::from("abaabbabab");
        let all = PartitioningSet::new(&t, (1..=10).collect(), 1, 1, 1, Mode::Det).unwrap();
        assert!(check_pset(&t, &all).passed());
        assert!(PartitioningSet::new(&t, vec![1, 2], 1, 1, 1, Mode::Det).is_err());
        // hand-built set bypassing the constructor: aperiodic long gap
        let forged = PartitioningSet {
            positions: vec![1, 9],
            block_periods: Default::default(),
            ..all.clone()
        };
        let r = check_pset(&t, &forged);
        assert!(r.compactness_violations > 0 && !r.passed());
    }

    #[test]
    fn sync_violation_is_caught() {
        // S[1..] and S[4..] share 9 characters but their blocks differ
        let t = Text::from("abcabcabcabc");
        let forged = PartitioningSet {
            n: t.len(),
            positions: vec![1, 3, 4, 7],
            tau: 8,
            span: 8,
            delta: 1,
            block_periods: Default::default(),
            forward_sync: true,
            mode: Mode::Rand,
        };
        let r = check_pset(&t, &forged);
        assert!(r.sync_violations > 0, "{r:?}");
    }
}
