//! Principal periods, the Fine–Wilf reduction, and detection of long runs
//! with short periods.

use crate::hashing::Fingerprinter;
use crate::{Error, Result, Text};

/// A maximal periodic substring `S[start..=end]` with principal period
/// `period`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Run {
    pub start: usize,
    pub end: usize,
    pub period: usize,
}

impl Run {
    pub fn len(&self) -> usize {
        self.end + 1 - self.start
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SegmentKind {
    Run { period: usize },
    Plain,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Segment {
    pub start: usize,
    pub end: usize,
    pub kind: SegmentKind,
}

/// Smallest `y >= 1` with `s[k] = s[k + y]` wherever both exist.
///
/// ```
/// use sslce::periodicity::principal_period;
/// assert_eq!(principal_period(b"abcabcab").unwrap(), 3);
/// ```
pub fn principal_period<T: PartialEq>(s: &[T]) -> Result<usize> {
    if s.is_empty() {
        return Err(Error::Parameter(
            "principal period of the empty string".into(),
        ));
    }
    Ok(s.len() - border(s))
}

fn border<T: PartialEq>(s: &[T]) -> usize {
    let mut fail = vec![0usize; s.len()];
    let mut k = 0;
    for i in 1..s.len() {
        while k > 0 && s[i] != s[k] {
            k = fail[k - 1];
        }
        if s[i] == s[k] {
            k += 1;
        }
        fail[i] = k;
    }
    fail[s.len() - 1]
}

/// Principal period of `S[from..=to]`.
pub fn principal_period_of(text: &Text, from: usize, to: usize) -> usize {
    let syms: Vec<u32> = (from..=to).map(|k| text.sym(k)).collect();
    syms.len() - border(&syms)
}

pub fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `gcd(p, q)` when a string of length `len` with periods `p` and `q` is
/// long enough for the Fine–Wilf theorem to apply.
pub fn fine_wilf_reduce(len: usize, p: usize, q: usize) -> Option<usize> {
    let g = gcd(p, q);
    (len + g >= p + q).then_some(g)
}

/// Counters from a [`find_runs_stats`] pass.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RunStats {
    pub candidates: usize,
    /// Candidates whose fingerprint hint failed character verification.
    pub collisions: usize,
}

/// All maximal runs of length at least `tau` with period at most `tau/6`,
/// sorted by start.
pub fn find_runs(text: &Text, tau: usize, fp: &Fingerprinter) -> Result<Vec<Run>> {
    find_runs_stats(text, tau, fp).map(|(r, _)| r)
}

/// [`find_runs`] that also reports candidate and collision counts.
///
/// The text is cut into intervals of length `tau/2`. In each interval the
/// first `tau/3` windows of length `tau/6` are fingerprinted; a repeated
/// minimum hints a period, which is then checked character by character
/// before the run is extended to maximality. `fp` must serve windows of
/// length `tau/6`.
pub fn find_runs_stats(
    text: &Text,
    tau: usize,
    fp: &Fingerprinter,
) -> Result<(Vec<Run>, RunStats)> {
    let mut stats = RunStats::default();
    if tau < 6 {
        return Ok((Vec::new(), stats));
    }
    let n = text.len();
    let (half, third, sixth) = (tau / 2, tau / 3, tau / 6);
    if fp.max_len() < sixth {
        return Err(Error::Parameter(format!(
            "fingerprinter serves windows up to {}, need {sixth}",
            fp.max_len()
        )));
    }
    let mut runs: Vec<Run> = Vec::new();
    let mut alpha = 0;
    while (alpha + 1) * half <= n {
        let (lo, hi) = (alpha * half + 1, (alpha + 1) * half);
        alpha += 1;
        if let Some(last) = runs.last() {
            if last.start <= lo && hi <= last.end {
                continue;
            }
        }
        let mut best = u64::MAX;
        let mut prev_min = 0usize;
        let mut gap = usize::MAX;
        let mut w = fp.fp_window(text, lo, sixth)?;
        for k in lo..lo + third {
            if k > lo {
                w = fp.fp_slide(w, text.sym(k - 1), text.sym(k - 1 + sixth), sixth);
            }
            if w < best {
                best = w;
                prev_min = k;
                gap = usize::MAX;
            } else if w == best {
                gap = gap.min(k - prev_min);
                prev_min = k;
            }
        }
        if gap > sixth {
            continue;
        }
        stats.candidates += 1;
        let period = if (lo + gap..=hi).all(|k| text.sym(k) == text.sym(k - gap)) {
            // the principal period divides gap since hi - lo + 1 >= 2 * gap
            (1..=gap)
                .find(|&d| gap % d == 0 && (lo + d..=hi).all(|k| text.sym(k) == text.sym(k - d)))
                .unwrap()
        } else {
            stats.collisions += 1;
            principal_period_of(text, lo, hi)
        };
        if period > sixth {
            continue;
        }
        let mut start = lo;
        while start > 1 && text.sym(start - 1) == text.sym(start - 1 + period) {
            start -= 1;
        }
        let mut end = hi;
        while end < n && text.sym(end + 1) == text.sym(end + 1 - period) {
            end += 1;
        }
        if end + 1 - start >= tau && runs.last().map_or(true, |r| r.start != start) {
            runs.push(Run { start, end, period });
        }
    }
    runs.sort();
    runs.dedup();
    Ok((runs, stats))
}

/// Cut `[1..n]` into run segments and plain gaps. Runs are processed right
/// to left; a run loses any suffix already claimed by the run after it.
pub fn segment(n: usize, runs: &[Run]) -> Result<Vec<Segment>> {
    let mut out: Vec<Segment> = Vec::new();
    let mut free_end = n;
    for r in runs.iter().rev() {
        if r.start == 0 || r.end > n || r.start > r.end || r.period == 0 {
            return Err(Error::Contract(format!("malformed run {r:?}")));
        }
        let end = r.end.min(free_end);
        if r.start > end {
            return Err(Error::Contract(format!(
                "run {r:?} swallowed by its right neighbour"
            )));
        }
        if end < free_end {
            out.push(Segment {
                start: end + 1,
                end: free_end,
                kind: SegmentKind::Plain,
            });
        }
        out.push(Segment {
            start: r.start,
            end,
            kind: SegmentKind::Run { period: r.period },
        });
        free_end = r.start - 1;
    }
    if free_end >= 1 {
        out.push(Segment {
            start: 1,
            end: free_end,
            kind: SegmentKind::Plain,
        });
    }
    out.reverse();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;
    use rand::{Rng, SeedableRng};

    fn fpr(tau: usize) -> Fingerprinter {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(tau as u64);
        Fingerprinter::random(&mut rng, tau / 6 + 1)
    }

    #[test]
    fn periods() {
        assert_eq!(principal_period(b"aaaa").unwrap(), 1);
        assert_eq!(principal_period(b"abcd").unwrap(), 4);
        assert!(principal_period::<u8>(&[]).is_err());
        assert_eq!(fine_wilf_reduce(6, 2, 3), Some(1));
        assert_eq!(fine_wilf_reduce(3, 2, 3), None);
        assert_eq!(fine_wilf_reduce(10, 4, 6), Some(2));
    }

    #[test]
    fn run_examples() {
        let t = Text::from("aaaaaaaaaa");
        assert_eq!(
            find_runs(&t, 6, &fpr(6)).unwrap(),
            vec![Run {
                start: 1,
                end: 10,
                period: 1
            }]
        );
        assert!(find_runs(&Text::from("abcdefghij"), 6, &fpr(6))
            .unwrap()
            .is_empty());
        let t = Text::from(format!("{}z", "aab".repeat(8)).as_str());
        assert_eq!(
            find_runs(&t, 18, &fpr(18)).unwrap(),
            vec![Run {
                start: 1,
                end: 24,
                period: 3
            }]
        );
        assert!(find_runs(&t, 4, &fpr(4)).unwrap().is_empty());
    }

    #[test]
    fn segments() {
        assert_eq!(
            segment(5, &[]).unwrap(),
            vec![Segment {
                start: 1,
                end: 5,
                kind: SegmentKind::Plain
            }]
        );
        let r = Run {
            start: 3,
            end: 20,
            period: 2,
        };
        assert_eq!(
            segment(30, &[r]).unwrap(),
            vec![
                Segment {
                    start: 1,
                    end: 2,
                    kind: SegmentKind::Plain
                },
                Segment {
                    start: 3,
                    end: 20,
                    kind: SegmentKind::Run { period: 2 }
                },
                Segment {
                    start: 21,
                    end: 30,
                    kind: SegmentKind::Plain
                },
            ]
        );
        let whole = Run {
            start: 1,
            end: 30,
            period: 1,
        };
        assert_eq!(segment(30, &[whole]).unwrap().len(), 1);
    }

    #[test]
    fn matches_bruteforce_on_random_periodic_mixes() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(77);
        for _ in 0..300 {
            let mut s = Vec::new();
            while s.len() < 300 {
                if rng.gen_bool(0.5) {
                    let p = rng.gen_range(1..5);
                    let unit: Vec<u8> = (0..p).map(|_| rng.gen_range(b'a'..b'c')).collect();
                    let reps = rng.gen_range(2..20);
                    for _ in 0..reps {
                        s.extend_from_slice(&unit);
                    }
                } else {
                    let k = rng.gen_range(1..12);
                    s.extend((0..k).map(|_| rng.gen_range(b'a'..b'd')));
                }
            }
            let t = Text::new(s);
            for tau in [6, 7, 12, 18, 24] {
                let got = find_runs(&t, tau, &fpr(tau)).unwrap();
                assert_eq!(got, oracle::naive_runs(&t, tau), "tau={tau} {t:?}");
            }
        }
    }
}
