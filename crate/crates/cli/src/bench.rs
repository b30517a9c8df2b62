//! `bench`: one CSV row per (mode, tau) cell.
//!
//! Half of the query pairs are uniform; the other half pair each position
//! with its neighbour in suffix order, so that long extensions are
//! exercised. Finding those neighbours uses a full suffix array, which is
//! fine for a benchmark driver but not part of any index.

use std::io::Write;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use sslce::index::AnyIndex;
use sslce::partition_det::log_star;
use sslce::suffix_core::suffix_array;
use sslce::{Mode, Text};

use crate::Failure;

#[derive(Serialize)]
struct Row {
    mode: String,
    tau: usize,
    n: usize,
    set_size: usize,
    build_ms: f64,
    avg_comparisons: f64,
    max_comparisons: usize,
    peak_aux_words: usize,
    /// `max_comparisons` over `τ`, `τ·log* n` or `τ·√log* n` by mode.
    kappa: f64,
}

/// Denominator of the comparison budget of `mode`.
pub fn budget_unit(mode: Mode, tau: usize, n: usize) -> f64 {
    let l = log_star(n) as f64;
    match mode {
        Mode::Rand | Mode::RandWhp => tau as f64,
        Mode::Det => tau as f64 * l,
        Mode::Dcover => tau as f64 * l.sqrt(),
    }
}

fn pairs(text: &Text, count: usize, seed: u64) -> Vec<(usize, usize)> {
    let n = text.len();
    let s: Vec<u32> = text.as_bytes().iter().map(|&b| b as u32 + 1).collect();
    let sa = suffix_array(&s);
    let mut rank = vec![0usize; n];
    for (r, &p) in sa.iter().enumerate() {
        rank[p as usize] = r;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|q| {
            let i = rng.gen_range(1..=n);
            if q % 2 == 0 {
                (i, rng.gen_range(1..=n))
            } else {
                let r = rank[i - 1];
                let r = if r + 1 < n {
                    r + 1
                } else {
                    r.saturating_sub(1)
                };
                (i, sa[r] as usize + 1)
            }
        })
        .collect()
}

pub fn run<W: Write>(
    text: &Text,
    taus: &[usize],
    modes: &[Mode],
    queries: usize,
    seed: u64,
    out: W,
) -> Result<(), Failure> {
    if taus.is_empty() || modes.is_empty() {
        return Err(Failure::Usage("empty --tau-list or --modes".into()));
    }
    if text.is_empty() {
        return Err(Failure::Usage("empty input".into()));
    }
    let n = text.len();
    let qs = pairs(text, queries, seed);
    let mut w = csv::Writer::from_writer(out);
    for &mode in modes {
        for &tau in taus {
            let t0 = Instant::now();
            let (idx, info) = AnyIndex::build(text, tau, mode, seed)?;
            let build_ms = crate::millis(t0);
            let (mut total, mut max) = (0usize, 0usize);
            for &(i, j) in &qs {
                let (_, c) = idx.lce_counted(text, i, j)?;
                total += c;
                max = max.max(c);
            }
            let row = Row {
                mode: mode.to_string(),
                tau,
                n,
                set_size: info.set_size,
                build_ms,
                avg_comparisons: if qs.is_empty() {
                    0.0
                } else {
                    total as f64 / qs.len() as f64
                },
                max_comparisons: max,
                peak_aux_words: info.peak_aux_words,
                kappa: max as f64 / budget_unit(mode, tau, n),
            };
            w.serialize(row).map_err(|e| Failure::Io(e.to_string()))?;
        }
    }
    w.flush().map_err(|e| Failure::Io(e.to_string()))
}
