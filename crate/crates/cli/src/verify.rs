//! `verify`: cross-check an index and its parts against the brute-force
//! oracles, stopping at the first counterexample.

use std::collections::BTreeMap;

use log::warn;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use sslce::hashing::Fingerprinter;
use sslce::index::AnyIndex;
use sslce::oracle::{check_pset, naive_lce, naive_runs, naive_ssa};
use sslce::partition_det::build_det;
use sslce::periodicity::find_runs;
use sslce::sparse_suffix::SparseSuffixIndex;
use sslce::{Mode, PartitioningSet, Text};

use crate::Failure;

const PAIRS_PER_TRIAL: usize = 1000;
const B_SIZE: usize = 64;

#[derive(Serialize, Default, Clone, Copy)]
pub struct Count {
    pub run: usize,
    pub failed: usize,
}

#[derive(Serialize)]
pub struct Report {
    pub n: usize,
    pub tau: usize,
    pub mode: String,
    pub trials: usize,
    pub passed: bool,
    pub checks: BTreeMap<&'static str, Count>,
    pub counterexample: Option<String>,
}

fn excerpt(text: &Text, pos: usize) -> String {
    let end = (pos + 19).min(text.len());
    let s = String::from_utf8_lossy(&text.as_bytes()[pos - 1..end]);
    format!("S[{pos}..] = {s:?}")
}

struct Checker {
    checks: BTreeMap<&'static str, Count>,
    first: Option<String>,
}

impl Checker {
    fn record(&mut self, name: &'static str, ok: bool, why: impl FnOnce() -> String) {
        let c = self.checks.entry(name).or_default();
        c.run += 1;
        if !ok {
            c.failed += 1;
            if self.first.is_none() {
                self.first = Some(format!("{name}: {}", why()));
            }
        }
    }
}

/// The partitioning set behind `idx`; for dcover the fine set it thins.
fn pset_of(text: &Text, idx: &AnyIndex) -> Result<Option<PartitioningSet>, Failure> {
    Ok(match idx {
        AnyIndex::Lce(x) => Some(x.pset.clone()),
        AnyIndex::Dcover(d) if !d.params.small => Some(build_det(text, d.params.tau_fine)?),
        AnyIndex::Dcover(_) => None,
    })
}

pub fn run(
    text: &Text,
    tau: usize,
    mode: Mode,
    trials: usize,
    seed: u64,
    inject_fault: bool,
) -> Result<Report, Failure> {
    let n = text.len();
    let (idx, _) = AnyIndex::build(text, tau, mode, seed)?;
    let mut ck = Checker {
        checks: BTreeMap::new(),
        first: None,
    };
    if trials == 0 {
        warn!("--trials 0: nothing is checked");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let pset = if trials > 0 {
        pset_of(text, &idx)?
    } else {
        None
    };

    for t in 0..trials {
        for q in 0..PAIRS_PER_TRIAL {
            let i = rng.gen_range(1..=n);
            let j = if q % 2 == 0 {
                rng.gen_range(1..=n)
            } else {
                (i + rng.gen_range(0..=2 * tau)).min(n)
            };
            let mut got = idx.lce(text, i, j)?;
            if inject_fault && t == 0 && q == 0 {
                got += 1;
            }
            let want = naive_lce(text, i, j);
            ck.record("lce", got == want, || {
                format!(
                    "LCE({i}, {j}) = {got}, expected {want}; {} / {}",
                    excerpt(text, i),
                    excerpt(text, j)
                )
            });
        }

        if let Some(p) = &pset {
            if t == 0 {
                let rep = check_pset(text, p);
                ck.record("pset", rep.passed(), || {
                    rep.first_violation.clone().unwrap_or_default()
                });
            }
            let mut b: Vec<usize> = (0..B_SIZE.min(n)).map(|_| rng.gen_range(1..=n)).collect();
            b.sort_unstable();
            b.dedup();
            let sst = SparseSuffixIndex::build(text, &b, p)?;
            let want = naive_ssa(text, &b);
            let valid = sst.validate(text);
            ck.record("ssa", sst.ssa == want && valid.is_ok(), || match valid {
                Err(e) => format!("B = {b:?}: {e}"),
                Ok(()) => format!("B = {b:?}: got {:?}, expected {want:?}", sst.ssa),
            });
        }

        let fp = Fingerprinter::random(&mut rng, tau / 6 + 1);
        let got = find_runs(text, tau, &fp)?;
        let want = naive_runs(text, tau);
        ck.record("runs", got == want, || {
            format!("tau {tau}: got {} runs, expected {}", got.len(), want.len())
        });
    }

    Ok(Report {
        n,
        tau,
        mode: mode.to_string(),
        trials,
        passed: ck.first.is_none(),
        checks: ck.checks,
        counterexample: ck.first,
    })
}
