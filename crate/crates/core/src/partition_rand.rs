//! Randomized partitioning sets.
//!
//! Every position `j <= n-τ+1` gets an ID `h(φ(S[j..j+τ)))`. Long runs with
//! period at most `τ/6` are found first and contribute only their start and
//! one pick near their end; every other position is selected when it attains
//! the minimum ID of some length-`τ` window of positions. The result is a
//! `(2τ, 2τ)`-partitioning set.

use std::collections::VecDeque;

use log::warn;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::hashing::{Fingerprinter, IdFunction, MinwiseHasher, DEFAULT_K};
use crate::meter::WordMeter;
use crate::periodicity::{self, SegmentKind};
use crate::{Error, Mode, PartitioningSet, Result, Text};

/// `⌈log₂ n⌉`, with `0` for `n <= 1`.
pub fn ceil_log2(n: usize) -> usize {
    if n <= 1 {
        0
    } else {
        (usize::BITS - (n - 1).leading_zeros()) as usize
    }
}

/// A stretch of positions scanned with the sliding window. `hi` is already
/// clipped to the last position carrying an ID. `margin` is the tail of the
/// run right before the stretch, if any.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Region {
    pub lo: usize,
    pub hi: usize,
    pub margin: Option<(usize, usize)>,
}

/// The run structure of a text at scale `τ`: positions selected outright
/// and the regions left to the window scan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RandPlan {
    pub n: usize,
    pub tau: usize,
    /// Run starts, plus the position after a run ending within the last
    /// `τ-1` characters. Sorted.
    pub picks: Vec<usize>,
    pub regions: Vec<Region>,
    pub runs: usize,
}

impl RandPlan {
    pub fn new(text: &Text, tau: usize, runs_fp: &Fingerprinter) -> Result<RandPlan> {
        let n = text.len();
        check_tau(n, tau)?;
        let runs = periodicity::find_runs(text, tau, runs_fp)?;
        let segs = periodicity::segment(n, &runs)?;
        let domain = n + 1 - tau;
        let mut picks = Vec::new();
        let mut regions = Vec::new();
        for (k, seg) in segs.iter().enumerate() {
            if let SegmentKind::Run { .. } = seg.kind {
                picks.push(seg.start);
                continue;
            }
            let after_run = k > 0;
            let q = seg.start - 1;
            if after_run && k + 1 == segs.len() && q + tau > n && q < n {
                picks.push(q + 1);
                continue;
            }
            let lo = if after_run {
                seg.start - tau
            } else {
                seg.start
            };
            let hi = seg.end.min(domain);
            if hi + 1 >= lo + tau {
                let margin = after_run.then(|| (seg.start - tau, q));
                regions.push(Region { lo, hi, margin });
            }
        }
        Ok(RandPlan {
            n,
            tau,
            picks,
            regions,
            runs: runs.len(),
        })
    }

    pub fn is_pick(&self, p: usize) -> bool {
        self.picks.binary_search(&p).is_ok()
    }

    pub fn words(&self) -> usize {
        self.picks.len() + 4 * self.regions.len()
    }
}

fn check_tau(n: usize, tau: usize) -> Result<()> {
    if tau == 0 || tau > n {
        return Err(Error::Parameter(format!("tau = {tau} outside 1..={n}")));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ScanStats {
    pub windows: usize,
    pub step_backs: usize,
}

/// Emit, in increasing order, every candidate position that attains the
/// minimum ID among the candidates of some window `[l, l+τ)` inside
/// `[lo, hi]`.
///
/// Only the current minimum and the rightmost position attaining it are
/// kept. When that position leaves the window the window is rescanned,
/// which is where the `step_backs` counter comes from.
pub fn select_window_minima<C, E>(
    text: &Text,
    id: &IdFunction,
    lo: usize,
    hi: usize,
    cand: C,
    mut emit: E,
    stats: &mut ScanStats,
) where
    C: Fn(usize) -> bool,
    E: FnMut(usize),
{
    let tau = id.tau;
    if hi + 1 < lo + tau {
        return;
    }
    let mut state = rescan(text, id, lo, lo + tau - 1, &cand, &mut emit);
    stats.windows += 1;
    if hi < lo + tau {
        return;
    }
    for (j, x) in id.ids(text, lo + tau, hi) {
        stats.windows += 1;
        let l = j + 1 - tau;
        match state {
            Some((_, r)) if r < l => {
                stats.step_backs += 1;
                state = rescan(text, id, l, j, &cand, &mut emit);
            }
            _ => {
                if cand(j) && state.map_or(true, |(m, _)| x <= m) {
                    state = Some((x, j));
                    emit(j);
                }
            }
        }
    }
}

// Minimum over the candidates of [l, r] and its rightmost position; emits
// every position attaining it.
fn rescan<C, E>(
    text: &Text,
    id: &IdFunction,
    l: usize,
    r: usize,
    cand: &C,
    emit: &mut E,
) -> Option<(u64, usize)>
where
    C: Fn(usize) -> bool,
    E: FnMut(usize),
{
    let m = id
        .ids(text, l, r)
        .filter(|&(p, _)| cand(p))
        .map(|(_, x)| x)
        .min()?;
    let mut last = 0;
    for (p, x) in id.ids(text, l, r) {
        if x == m && cand(p) {
            emit(p);
            last = p;
        }
    }
    Some((m, last))
}

/// Positions of the set defined by `id` on `plan`, sorted.
pub fn select_all(
    text: &Text,
    id: &IdFunction,
    plan: &RandPlan,
    stats: &mut ScanStats,
) -> Vec<usize> {
    let mut out = plan.picks.clone();
    for reg in &plan.regions {
        select_window_minima(text, id, reg.lo, reg.hi, |_| true, |p| out.push(p), stats);
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// A finished randomized build with its counters.
#[derive(Clone, Debug)]
pub struct RandBuild {
    pub pset: PartitioningSet,
    pub scan: ScanStats,
    pub peak_aux_words: usize,
    pub whp: Option<WhpReport>,
}

/// Expected-size randomized set for `tau`, all randomness drawn from `seed`.
///
/// ```
/// use sslce::{partition_rand::build_rand, Text};
/// let text = Text::from("aaaaaaaaaaaaaaaaaaaaaaaaaaaaaa");
/// let p = build_rand(&text, 12, 1).unwrap();
/// assert_eq!(p.positions, vec![1]);
/// ```
pub fn build_rand(text: &Text, tau: usize, seed: u64) -> Result<PartitioningSet> {
    build_rand_stats(text, tau, seed).map(|b| b.pset)
}

pub fn build_rand_stats(text: &Text, tau: usize, seed: u64) -> Result<RandBuild> {
    check_tau(text.len(), tau)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let runs_fp = Fingerprinter::random(&mut rng, (tau / 6).max(1));
    let id = IdFunction::random(&mut rng, tau, DEFAULT_K);
    let mut meter = WordMeter::new();
    meter.alloc(runs_fp.max_len() + id.fp.max_len() + 2 * DEFAULT_K);
    let plan = RandPlan::new(text, tau, &runs_fp)?;
    meter.alloc(plan.words());
    let mut scan = ScanStats::default();
    let positions = select_all(text, &id, &plan, &mut scan);
    let pset = PartitioningSet::new(text, positions, tau, 2 * tau, 2 * tau, Mode::Rand)?;
    meter.alloc(2 * pset.block_periods.len());
    Ok(RandBuild {
        pset,
        scan,
        peak_aux_words: meter.peak(),
        whp: None,
    })
}

/// Tunables of the high-probability variants.
#[derive(Clone, Debug, PartialEq)]
pub struct WhpConfig {
    /// Size target `c'·n/τ`; also fixes the per-function deque capacity.
    pub c_prime: usize,
    pub k: usize,
    /// Number of hash functions tried in the large-`τ` path. Default `⌈log₂ n⌉`.
    pub trials: Option<usize>,
    /// Sampled intervals in the small-`τ` path. Default `min(n/τ, ⌈log₂⁵ n⌉)`.
    pub samples: Option<usize>,
}

impl Default for WhpConfig {
    fn default() -> Self {
        WhpConfig {
            c_prime: 8,
            k: DEFAULT_K,
            trials: None,
            samples: None,
        }
    }
}

/// What the high-probability builder did.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct WhpReport {
    pub large_tau: bool,
    /// Size estimates of each attempt (small-`τ` path).
    pub estimates: Vec<f64>,
    /// Exact counts per function, `None` if abandoned (large-`τ` path).
    pub counts: Vec<Option<usize>>,
    pub step_backs: Vec<usize>,
    pub chosen: Option<usize>,
    pub fallback: bool,
    pub base_size: usize,
}

/// `⌈(log₂ n)²⌉`, the `τ` at which the large-`τ` path takes over.
pub fn whp_threshold(n: usize) -> usize {
    let l = (n.max(2) as f64).log2();
    (l * l).ceil() as usize
}

pub fn default_samples(n: usize, tau: usize) -> usize {
    let l = (n.max(2) as f64).log2();
    let big = l.powi(5).ceil().min(1e6) as usize;
    (n / tau).min(big).max(1)
}

/// Randomized set whose size is certified to be at most about `c'·n/τ`.
pub fn build_rand_whp(text: &Text, tau: usize, seed: u64, cfg: &WhpConfig) -> Result<RandBuild> {
    let n = text.len();
    check_tau(n, tau)?;
    if tau < whp_threshold(n) {
        build_whp_sampling(text, tau, seed, cfg)
    } else {
        select_whp_large_tau(text, tau, seed, cfg)
    }
}

/// Mean number of selected positions per interval `[iτ+1, (i+1)τ]` over `m`
/// intervals drawn with replacement; every interval once if `m >= n/τ`.
pub fn estimate_size_sampling<R: Rng>(
    text: &Text,
    plan: &RandPlan,
    id: &IdFunction,
    m: usize,
    rng: &mut R,
) -> f64 {
    let tau = plan.tau;
    let intervals = plan.n / tau;
    if intervals == 0 || m == 0 {
        return 0.0;
    }
    let mut total = 0usize;
    let mut stats = ScanStats::default();
    let mut count = |i: usize| {
        let (from, to) = (i * tau + 1, (i + 1) * tau);
        let mut c = plan.picks.iter().filter(|&&p| from <= p && p <= to).count();
        for reg in &plan.regions {
            if reg.hi < from || reg.lo > to {
                continue;
            }
            let lo = reg.lo.max(from.saturating_sub(tau - 1));
            let hi = reg.hi.min(to + tau - 1);
            select_window_minima(
                text,
                id,
                lo,
                hi,
                |_| true,
                |p| {
                    if from <= p && p <= to && !plan.is_pick(p) {
                        c += 1;
                    }
                },
                &mut stats,
            );
        }
        c
    };
    if m >= intervals {
        for i in 0..intervals {
            total += count(i);
        }
        total as f64 / intervals as f64
    } else {
        for _ in 0..m {
            total += count(rng.gen_range(0..intervals));
        }
        total as f64 / m as f64
    }
}

fn build_whp_sampling(text: &Text, tau: usize, seed: u64, cfg: &WhpConfig) -> Result<RandBuild> {
    let n = text.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let runs_fp = Fingerprinter::random(&mut rng, (tau / 6).max(1));
    let plan = RandPlan::new(text, tau, &runs_fp)?;
    let m = cfg.samples.unwrap_or_else(|| default_samples(n, tau));
    let retries = (2 * ceil_log2(n)).max(1);
    let mut report = WhpReport {
        large_tau: false,
        ..Default::default()
    };
    let mut meter = WordMeter::new();
    meter.alloc(plan.words() + runs_fp.max_len());
    let mut chosen = None;
    for attempt in 0..retries {
        let id = IdFunction::random(&mut rng, tau, cfg.k);
        let est = estimate_size_sampling(text, &plan, &id, m, &mut rng);
        report.estimates.push(est);
        if est <= cfg.c_prime as f64 {
            report.chosen = Some(attempt);
            chosen = Some(id);
            break;
        }
    }
    let id = match chosen {
        Some(id) => id,
        None => {
            warn!("no hash function met the size target after {retries} attempts; using an unchecked one");
            report.fallback = true;
            IdFunction::random(&mut rng, tau, cfg.k)
        }
    };
    meter.alloc(id.fp.max_len() + 2 * cfg.k);
    let mut scan = ScanStats::default();
    let positions = select_all(text, &id, &plan, &mut scan);
    let pset = PartitioningSet::new(text, positions, tau, 2 * tau, 2 * tau, Mode::RandWhp)?;
    Ok(RandBuild {
        pset,
        scan,
        peak_aux_words: meter.peak(),
        whp: Some(report),
    })
}

/// Input of the multi-function count: the run structure at scale `τ` and a
/// coarse set `P₀` whose positions (plus run margins) are the only
/// candidates.
#[derive(Clone, Debug)]
pub struct WhpPlan {
    pub plan: RandPlan,
    pub base: Vec<usize>,
    pub tau0: usize,
}

impl WhpPlan {
    pub fn is_candidate(&self, reg: &Region, p: usize) -> bool {
        reg.margin.is_some_and(|(a, b)| a <= p && p <= b) || self.base.binary_search(&p).is_ok()
    }
}

/// Per-function outcome of [`count_with_deques`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct DequeCount {
    pub count: usize,
    pub abandoned: bool,
    pub step_backs: usize,
    pub peak_len: usize,
}

struct Lane {
    dq: VecDeque<(usize, u64)>,
    // entries beyond the capacity were dropped from the back
    flag: bool,
    last: usize,
    out: DequeCount,
}

/// Count, for each `h` in `hashers`, the positions its set would select,
/// holding at most `cap` window candidates per function. A function is
/// abandoned as soon as its count exceeds `limit`.
///
/// Each deque is a prefix of the usual monotone sliding-minimum deque (ties
/// kept). Once it overflows, the hidden tail is only known to hold IDs no
/// smaller than the stored back; whenever the visible part no longer
/// determines the window minimum or its ties, the window is rescanned.
pub fn count_with_deques(
    text: &Text,
    wp: &WhpPlan,
    fp: &Fingerprinter,
    hashers: &[MinwiseHasher],
    cap: usize,
    limit: usize,
) -> Vec<DequeCount> {
    let plan = &wp.plan;
    let tau = plan.tau;
    let cap = cap.max(1);
    let mut lanes: Vec<Lane> = hashers
        .iter()
        .map(|_| Lane {
            dq: VecDeque::new(),
            flag: false,
            last: 0,
            out: DequeCount {
                count: plan.picks.len(),
                ..Default::default()
            },
        })
        .collect();
    for reg in &plan.regions {
        for lane in lanes.iter_mut() {
            lane.dq.clear();
            lane.flag = false;
        }
        let mut w = fp.fp_window(text, reg.lo, tau).expect("region within text");
        for j in reg.lo..=reg.hi {
            if j > reg.lo {
                w = fp.fp_slide(w, text.sym(j - 1), text.sym(j - 1 + tau), tau);
            }
            let c = wp.is_candidate(reg, j);
            for (lane, h) in lanes.iter_mut().zip(hashers) {
                if lane.out.abandoned {
                    continue;
                }
                if c {
                    push(lane, j, h.eval(w), cap);
                }
                if j + 1 < reg.lo + tau {
                    continue;
                }
                let l = j + 1 - tau;
                while lane.dq.front().is_some_and(|&(p, _)| p < l) {
                    lane.dq.pop_front();
                }
                let resolved = match lane.dq.front() {
                    None => !lane.flag,
                    Some(&(_, m)) => {
                        let ties = lane.dq.iter().take_while(|&&(_, x)| x == m).count();
                        if lane.flag && ties == lane.dq.len() {
                            false
                        } else {
                            for k in 0..ties {
                                let p = lane.dq[k].0;
                                note(lane, plan, p);
                            }
                            true
                        }
                    }
                };
                if !resolved {
                    step_back(text, wp, reg, fp, h, lane, l, j, cap);
                }
                if lane.out.count > limit {
                    lane.out.abandoned = true;
                }
            }
        }
    }
    lanes.into_iter().map(|l| l.out).collect()
}

fn note(lane: &mut Lane, plan: &RandPlan, p: usize) {
    if p > lane.last {
        lane.last = p;
        if !plan.is_pick(p) {
            lane.out.count += 1;
        }
    }
}

fn push(lane: &mut Lane, j: usize, x: u64, cap: usize) {
    if lane.flag {
        // the hidden tail holds IDs >= the stored back, so only a strictly
        // smaller ID clears it
        if lane.dq.back().map_or(true, |&(_, b)| x < b) {
            while lane.dq.back().is_some_and(|&(_, b)| b > x) {
                lane.dq.pop_back();
            }
            lane.dq.push_back((j, x));
            lane.flag = false;
        }
    } else {
        while lane.dq.back().is_some_and(|&(_, b)| b > x) {
            lane.dq.pop_back();
        }
        if lane.dq.len() < cap {
            lane.dq.push_back((j, x));
        } else {
            lane.flag = true;
        }
    }
    lane.out.peak_len = lane.out.peak_len.max(lane.dq.len());
}

#[allow(clippy::too_many_arguments)]
fn step_back(
    text: &Text,
    wp: &WhpPlan,
    reg: &Region,
    fp: &Fingerprinter,
    h: &MinwiseHasher,
    lane: &mut Lane,
    l: usize,
    j: usize,
    cap: usize,
) {
    lane.out.step_backs += 1;
    let tau = wp.plan.tau;
    let mut full: Vec<(usize, u64)> = Vec::new();
    let mut w = fp.fp_window(text, l, tau).expect("window within text");
    for p in l..=j {
        if p > l {
            w = fp.fp_slide(w, text.sym(p - 1), text.sym(p - 1 + tau), tau);
        }
        if wp.is_candidate(reg, p) {
            let x = h.eval(w);
            while full.last().is_some_and(|&(_, b)| b > x) {
                full.pop();
            }
            full.push((p, x));
        }
    }
    if let Some(&(_, m)) = full.first() {
        for &(p, x) in full.iter().take_while(|&&(_, x)| x == m) {
            debug_assert_eq!(x, m);
            note(lane, &wp.plan, p);
        }
    }
    lane.flag = full.len() > cap;
    lane.dq = full.into_iter().take(cap).collect();
}

/// Positions selected under `h` with candidates restricted as in `wp`.
pub fn select_with_candidates(
    text: &Text,
    wp: &WhpPlan,
    id: &IdFunction,
    stats: &mut ScanStats,
) -> Vec<usize> {
    let mut out = wp.plan.picks.clone();
    for reg in &wp.plan.regions {
        select_window_minima(
            text,
            id,
            reg.lo,
            reg.hi,
            |p| wp.is_candidate(reg, p),
            |p| out.push(p),
            stats,
        );
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Large-`τ` path: one coarse set `P₀` at `max(⌈log₂ n⌉, 4)`, then several
/// hash functions counted side by side; the first whose count stays within
/// `c'·n/τ` is materialized.
pub fn select_whp_large_tau(
    text: &Text,
    tau: usize,
    seed: u64,
    cfg: &WhpConfig,
) -> Result<RandBuild> {
    let n = text.len();
    check_tau(n, tau)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let runs_fp = Fingerprinter::random(&mut rng, (tau / 6).max(1));
    let plan = RandPlan::new(text, tau, &runs_fp)?;
    let tau0 = ceil_log2(n).max(4);
    let base_seed: u64 = rng.gen();
    let base = if tau0 >= n {
        (1..=n).collect()
    } else {
        build_rand(text, tau0, base_seed)?.positions
    };
    let wp = WhpPlan { plan, base, tau0 };
    let trials = cfg.trials.unwrap_or_else(|| ceil_log2(n).max(1));
    let fp = Fingerprinter::random(&mut rng, tau);
    let hashers: Vec<MinwiseHasher> = (0..trials)
        .map(|_| MinwiseHasher::random(&mut rng, cfg.k))
        .collect();
    let cap = (cfg.c_prime * n).div_ceil(tau * trials);
    let limit = cfg.c_prime * n / tau;

    let mut meter = WordMeter::new();
    meter.alloc(wp.plan.words() + wp.base.len() + tau + trials * cfg.k);
    meter.alloc(2 * cap * trials);
    meter.touch(2 * tau);

    let counts = count_with_deques(text, &wp, &fp, &hashers, cap, limit);
    let mut report = WhpReport {
        large_tau: true,
        counts: counts
            .iter()
            .map(|c| (!c.abandoned).then_some(c.count))
            .collect(),
        step_backs: counts.iter().map(|c| c.step_backs).collect(),
        base_size: wp.base.len(),
        ..Default::default()
    };
    let chosen = counts.iter().position(|c| !c.abandoned);
    let delta = 2 * tau + 2 * tau0;
    if let Some(f) = chosen {
        report.chosen = Some(f);
        let id = IdFunction {
            fp,
            h: hashers[f].clone(),
            tau,
        };
        let mut scan = ScanStats::default();
        let positions = select_with_candidates(text, &wp, &id, &mut scan);
        debug_assert_eq!(positions.len(), counts[f].count);
        match PartitioningSet::new(text, positions, tau, 2 * tau, delta, Mode::RandWhp) {
            Ok(pset) => {
                return Ok(RandBuild {
                    pset,
                    scan,
                    peak_aux_words: meter.peak(),
                    whp: Some(report),
                })
            }
            Err(e) => warn!("candidate-restricted set rejected ({e}); falling back"),
        }
    } else {
        warn!("all {trials} hash functions exceeded {limit} positions; falling back");
    }
    report.fallback = true;
    let mut b = build_rand_stats(text, tau, rng.gen())?;
    b.pset.mode = Mode::RandWhp;
    b.peak_aux_words = b.peak_aux_words.max(meter.peak());
    b.whp = Some(report);
    Ok(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;

    fn random_text(n: usize, sigma: u8, seed: u64) -> Text {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Text::new((0..n).map(|_| b'a' + rng.gen_range(0..sigma)).collect())
    }

    // every position attaining some window minimum inside [lo, hi]
    fn brute_minima(text: &Text, id: &IdFunction, lo: usize, hi: usize) -> Vec<usize> {
        let tau = id.tau;
        let mut out = Vec::new();
        for l in lo..=(hi + 1).saturating_sub(tau) {
            let ids: Vec<u64> = (l..l + tau).map(|p| id.id_at(text, p)).collect();
            let m = *ids.iter().min().unwrap();
            out.extend((l..l + tau).filter(|&p| id.id_at(text, p) == m));
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    #[test]
    fn window_scan_matches_quadratic_oracle() {
        for seed in 0..30 {
            let t = random_text(64, 2 + (seed % 3) as u8, seed);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let id = IdFunction::random(&mut rng, 8, DEFAULT_K);
            let hi = id.domain(t.len());
            let mut got = Vec::new();
            select_window_minima(
                &t,
                &id,
                1,
                hi,
                |_| true,
                |p| got.push(p),
                &mut ScanStats::default(),
            );
            assert_eq!(got, brute_minima(&t, &id, 1, hi));
        }
    }

    #[test]
    fn single_window_segment() {
        let t = random_text(40, 4, 5);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let id = IdFunction::random(&mut rng, 8, DEFAULT_K);
        let mut got = Vec::new();
        select_window_minima(
            &t,
            &id,
            3,
            10,
            |_| true,
            |p| got.push(p),
            &mut ScanStats::default(),
        );
        let m = (3..=10).map(|p| id.id_at(&t, p)).min().unwrap();
        assert_eq!(
            got,
            (3..=10)
                .filter(|&p| id.id_at(&t, p) == m)
                .collect::<Vec<_>>()
        );
    }

    #[test]
    fn unary_text_keeps_run_start() {
        let t = Text::new(vec![b'a'; 100]);
        let p = build_rand(&t, 12, 3).unwrap();
        assert!(p.len() <= 2 && p.positions[0] == 1, "{:?}", p.positions);
        assert!(oracle::check_pset(&t, &p).passed());
    }

    #[test]
    fn tau_one_selects_within_unit_gaps() {
        let t = random_text(200, 4, 8);
        let p = build_rand(&t, 1, 8).unwrap();
        assert_eq!(p.positions, (1..=200).collect::<Vec<_>>());
    }

    #[test]
    fn bad_tau() {
        let t = random_text(10, 2, 1);
        assert!(build_rand(&t, 0, 1).is_err());
        assert!(build_rand(&t, 11, 1).is_err());
    }

    #[test]
    fn many_seeds_pass_the_checker() {
        let t = random_text(10_000, 2, 42);
        for seed in 0..200 {
            let p = build_rand(&t, 32, seed).unwrap();
            let r = oracle::check_pset(&t, &p);
            assert!(r.passed(), "seed {seed}: {r:?}");
        }
    }

    #[test]
    fn census_equals_exact_count() {
        let t = random_text(5000, 3, 11);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let runs_fp = Fingerprinter::random(&mut rng, 2);
        let plan = RandPlan::new(&t, 16, &runs_fp).unwrap();
        let id = IdFunction::random(&mut rng, 16, DEFAULT_K);
        let all = select_all(&t, &id, &plan, &mut ScanStats::default());
        let intervals = t.len() / 16;
        let covered = all.iter().filter(|&&p| p <= intervals * 16).count();
        let est = estimate_size_sampling(&t, &plan, &id, usize::MAX, &mut rng);
        assert!((est - covered as f64 / intervals as f64).abs() < 1e-9);
        let unary = Text::new(vec![b'x'; 640]);
        let plan = RandPlan::new(&unary, 16, &runs_fp).unwrap();
        assert!(estimate_size_sampling(&unary, &plan, &id, usize::MAX, &mut rng) < 0.1);
    }

    #[test]
    fn sampling_estimate_is_close() {
        let t = random_text(10_000, 4, 2);
        let mut good = 0;
        for trial in 0..100u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(trial);
            let runs_fp = Fingerprinter::random(&mut rng, 2);
            let plan = RandPlan::new(&t, 16, &runs_fp).unwrap();
            let id = IdFunction::random(&mut rng, 16, DEFAULT_K);
            let exact = select_all(&t, &id, &plan, &mut ScanStats::default()).len() as f64;
            let est = estimate_size_sampling(&t, &plan, &id, 512, &mut rng);
            if (est * t.len() as f64 / 16.0 - exact).abs() <= t.len() as f64 / 16.0 {
                good += 1;
            }
        }
        assert!(good >= 95, "{good}");
    }

    #[test]
    fn degenerate_hash_counts_every_candidate() {
        let t = random_text(2000, 4, 3);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let runs_fp = Fingerprinter::random(&mut rng, 8);
        let plan = RandPlan::new(&t, 48, &runs_fp).unwrap();
        let base: Vec<usize> = (1..=t.len()).step_by(11).collect();
        let wp = WhpPlan {
            plan,
            base,
            tau0: 11,
        };
        let fp = Fingerprinter::random(&mut rng, 48);
        let constant = MinwiseHasher::with_params(vec![0, 7], crate::hashing::MERSENNE_61).unwrap();
        let in_regions = wp
            .base
            .iter()
            .filter(|&&p| wp.plan.regions.iter().any(|r| r.lo <= p && p <= r.hi))
            .count();
        let got = count_with_deques(&t, &wp, &fp, std::slice::from_ref(&constant), 4, usize::MAX);
        assert!(got[0].count >= in_regions);
        let low = count_with_deques(&t, &wp, &fp, &[constant], 4, 10);
        assert!(low[0].abandoned);
    }
}
