//! Karp–Rabin fingerprints and a polynomial min-wise hash family.
//!
//! Both use the Mersenne prime `2^61 - 1` unless built with explicit
//! parameters; randomness enters through the fingerprint base and the
//! polynomial coefficients only.

use rand::Rng;

use crate::{Error, Result, Text};

/// `2^61 - 1`.
pub const MERSENNE_61: u64 = (1 << 61) - 1;

/// Default number of coefficients of the min-wise polynomial.
pub const DEFAULT_K: usize = 8;

#[inline]
fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    let x = a as u128 * b as u128;
    if m == MERSENNE_61 {
        let lo = (x as u64) & MERSENNE_61;
        let hi = (x >> 61) as u64;
        let s = lo + hi;
        if s >= MERSENNE_61 {
            s - MERSENNE_61
        } else {
            s
        }
    } else {
        (x % m as u128) as u64
    }
}

#[inline]
fn addmod(a: u64, b: u64, m: u64) -> u64 {
    let s = a + b;
    if s >= m {
        s - m
    } else {
        s
    }
}

#[inline]
fn submod(a: u64, b: u64, m: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + m - b
    }
}

/// Karp–Rabin fingerprint `φ(s) = Σ s[k]·base^(len-1-k) mod p` over the
/// symbol encoding of [`Text::sym`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fingerprinter {
    base: u64,
    modulus: u64,
    // powers[k] = base^k mod p, up to the longest window this instance serves
    powers: Vec<u64>,
}

impl Fingerprinter {
    /// Random base modulo `2^61 - 1`, serving windows up to `max_len`.
    pub fn random<R: Rng>(rng: &mut R, max_len: usize) -> Fingerprinter {
        let base = rng.gen_range(1..MERSENNE_61);
        Fingerprinter::with_params(base, MERSENNE_61, max_len).expect("valid base")
    }

    pub fn with_params(base: u64, modulus: u64, max_len: usize) -> Result<Fingerprinter> {
        if !(2..=MERSENNE_61).contains(&modulus) {
            return Err(Error::Parameter(format!(
                "modulus {modulus} outside 2..=2^61-1"
            )));
        }
        if base == 0 || base >= modulus {
            return Err(Error::Parameter(format!(
                "base {base} outside 1..{modulus}"
            )));
        }
        let mut powers = Vec::with_capacity(max_len + 1);
        let mut x = 1 % modulus;
        for _ in 0..=max_len {
            powers.push(x);
            x = mulmod(x, base, modulus);
        }
        Ok(Fingerprinter {
            base,
            modulus,
            powers,
        })
    }

    pub fn base(&self) -> u64 {
        self.base
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn max_len(&self) -> usize {
        self.powers.len() - 1
    }

    /// `base^k mod p` for `k <= max_len`.
    pub fn power(&self, k: usize) -> u64 {
        self.powers[k]
    }

    /// Fingerprint of `S[i..i+len)` from scratch. Positions past `n` read
    /// as the sentinel; the window may reach at most `max_len` past the end.
    pub fn fp_window(&self, text: &Text, i: usize, len: usize) -> Result<u64> {
        if i == 0 || len > self.max_len() || i + len > text.len() + self.max_len() + 1 {
            return Err(Error::OutOfRange {
                pos: i + len.saturating_sub(1),
                n: text.len(),
            });
        }
        Ok(self.fp_symbols((i..i + len).map(|k| text.sym(k))))
    }

    /// Fingerprint of an arbitrary symbol sequence.
    pub fn fp_symbols<I: IntoIterator<Item = u32>>(&self, syms: I) -> u64 {
        syms.into_iter().fold(0, |acc, c| {
            addmod(
                mulmod(acc, self.base, self.modulus),
                c as u64 % self.modulus,
                self.modulus,
            )
        })
    }

    /// Slide a window of length `len` one step right.
    #[inline]
    pub fn fp_slide(&self, prev: u64, outgoing: u32, incoming: u32, len: usize) -> u64 {
        let m = self.modulus;
        let drop = mulmod(outgoing as u64 % m, self.powers[len - 1], m);
        addmod(
            mulmod(submod(prev, drop, m), self.base, m),
            incoming as u64 % m,
            m,
        )
    }
}

/// A polynomial of degree `k - 1` over `GF(q)`, coefficients listed from the
/// highest degree down.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinwiseHasher {
    coefficients: Vec<u64>,
    q: u64,
}

impl MinwiseHasher {
    pub fn random<R: Rng>(rng: &mut R, k: usize) -> MinwiseHasher {
        let coefficients = (0..k.max(2))
            .map(|_| rng.gen_range(0..MERSENNE_61))
            .collect();
        MinwiseHasher {
            coefficients,
            q: MERSENNE_61,
        }
    }

    pub fn with_params(coefficients: Vec<u64>, q: u64) -> Result<MinwiseHasher> {
        if coefficients.len() < 2 {
            return Err(Error::Parameter(
                "min-wise polynomial needs k >= 2 coefficients".into(),
            ));
        }
        if !(2..=MERSENNE_61).contains(&q) || coefficients.iter().any(|&c| c >= q) {
            return Err(Error::Parameter(format!("coefficients must lie in 0..{q}")));
        }
        Ok(MinwiseHasher { coefficients, q })
    }

    pub fn coefficients(&self) -> &[u64] {
        &self.coefficients
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// Evaluate the polynomial at `x mod q`.
    ///
    /// ```
    /// use sslce::hashing::MinwiseHasher;
    /// let h = MinwiseHasher::with_params(vec![3, 5], 101).unwrap();
    /// assert_eq!(h.eval(7), 26);
    /// ```
    #[inline]
    pub fn eval(&self, x: u64) -> u64 {
        let x = x % self.q;
        self.coefficients
            .iter()
            .fold(0, |acc, &c| addmod(mulmod(acc, x, self.q), c, self.q))
    }
}

/// The ID function `ID(j) = h(φ(S[j..j+τ)))`, defined for `1 <= j <= n-τ+1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdFunction {
    pub fp: Fingerprinter,
    pub h: MinwiseHasher,
    pub tau: usize,
}

impl IdFunction {
    pub fn random<R: Rng>(rng: &mut R, tau: usize, k: usize) -> IdFunction {
        let fp = Fingerprinter::random(rng, tau);
        let h = MinwiseHasher::random(rng, k);
        IdFunction { fp, h, tau }
    }

    /// Number of positions carrying an ID in a text of length `n`.
    pub fn domain(&self, n: usize) -> usize {
        (n + 1).saturating_sub(self.tau)
    }

    pub fn id_at(&self, text: &Text, j: usize) -> u64 {
        self.h.eval(
            self.fp
                .fp_window(text, j, self.tau)
                .expect("window within text"),
        )
    }

    /// IDs of positions `from..=to` computed with one sliding pass.
    pub fn ids<'a>(&'a self, text: &'a Text, from: usize, to: usize) -> IdStream<'a> {
        IdStream::new(self, text, from, to)
    }
}

/// Sliding iterator over `(position, ID)` pairs.
pub struct IdStream<'a> {
    f: &'a IdFunction,
    text: &'a Text,
    pos: usize,
    to: usize,
    fp: u64,
}

impl<'a> IdStream<'a> {
    fn new(f: &'a IdFunction, text: &'a Text, from: usize, to: usize) -> IdStream<'a> {
        let fp = if from <= to {
            f.fp.fp_window(text, from, f.tau)
                .expect("window within text")
        } else {
            0
        };
        IdStream {
            f,
            text,
            pos: from,
            to,
            fp,
        }
    }
}

impl Iterator for IdStream<'_> {
    type Item = (usize, u64);

    fn next(&mut self) -> Option<(usize, u64)> {
        if self.pos > self.to {
            return None;
        }
        let out = (self.pos, self.f.h.eval(self.fp));
        let tau = self.f.tau;
        if self.pos < self.to {
            self.fp = self.f.fp.fp_slide(
                self.fp,
                self.text.sym(self.pos),
                self.text.sym(self.pos + tau),
                tau,
            );
        }
        self.pos += 1;
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    fn naive_fp(syms: &[u32], base: u64, p: u64) -> u64 {
        let mut acc: u128 = 0;
        for &c in syms {
            acc = (acc * base as u128 + c as u128) % p as u128;
        }
        acc as u64
    }

    #[test]
    fn hand_polynomial() {
        let f = Fingerprinter::with_params(4, 97, 8).unwrap();
        let t = Text::from("abc");
        let (a, b, c) = (b'a' as u64 + 1, b'b' as u64 + 1, b'c' as u64 + 1);
        assert_eq!(f.fp_window(&t, 1, 3).unwrap(), (a * 16 + b * 4 + c) % 97);
        assert_eq!(f.fp_window(&t, 2, 0).unwrap(), 0);
        assert!(f.fp_window(&t, 0, 1).is_err());
    }

    #[test]
    fn equal_substrings_and_slides() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let f = Fingerprinter::random(&mut rng, 4);
        let t = Text::from("abab");
        assert_eq!(
            f.fp_window(&t, 1, 2).unwrap(),
            f.fp_window(&t, 3, 2).unwrap()
        );
        let t = Text::from("abcd");
        let w = f.fp_window(&t, 1, 2).unwrap();
        assert_eq!(
            f.fp_slide(w, t.sym(1), t.sym(3), 2),
            f.fp_window(&t, 2, 2).unwrap()
        );
        let t = Text::from("aaaa");
        let w = f.fp_window(&t, 1, 2).unwrap();
        assert_eq!(f.fp_slide(w, t.sym(1), t.sym(3), 2), w);
    }

    #[test]
    fn minwise_examples() {
        let zero = MinwiseHasher::with_params(vec![0, 0, 0], MERSENNE_61).unwrap();
        assert_eq!(zero.eval(12345), 0);
        let lin = MinwiseHasher::with_params(vec![9, 4], MERSENNE_61).unwrap();
        assert_eq!(lin.eval(0), 4);
        assert!(MinwiseHasher::with_params(vec![1], 101).is_err());
    }

    #[test]
    fn slide_chain_exhaustive_to_1000() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        let bytes: Vec<u8> = (0..1000).map(|_| rng.gen_range(b'a'..b'e')).collect();
        let t = Text::new(bytes);
        for len in [1usize, 2, 7, 33] {
            let f = Fingerprinter::random(&mut rng, len);
            let mut fp = f.fp_window(&t, 1, len).unwrap();
            for i in 1..=t.len() - len {
                fp = f.fp_slide(fp, t.sym(i), t.sym(i + len), len);
                assert_eq!(fp, f.fp_window(&t, i + 1, len).unwrap());
            }
        }
    }

    #[test]
    fn mersenne_reduction_matches_generic() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10_000 {
            let (a, b) = (rng.gen_range(0..MERSENNE_61), rng.gen_range(0..MERSENNE_61));
            assert_eq!(
                mulmod(a, b, MERSENNE_61),
                ((a as u128 * b as u128) % MERSENNE_61 as u128) as u64
            );
        }
    }

    proptest! {
        #[test]
        fn window_matches_direct_evaluation(s in "[a-d]{1,100}", base in 1u64..MERSENNE_61, i in 1usize..100, len in 0usize..20) {
            let t = Text::from(s.as_str());
            let f = Fingerprinter::with_params(base, MERSENNE_61, 20).unwrap();
            prop_assume!(i <= t.len());
            let syms: Vec<u32> = (i..i + len).map(|k| t.sym(k)).collect();
            prop_assert_eq!(f.fp_window(&t, i, len).unwrap(), naive_fp(&syms, base, MERSENNE_61));
        }

        #[test]
        fn two_slides_equal_recompute(s in "[a-c]{100}", seed in any::<u64>(), i in 1usize..80, len in 1usize..15) {
            let t = Text::from(s.as_str());
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let f = Fingerprinter::random(&mut rng, len);
            let a = f.fp_window(&t, i, len).unwrap();
            let b = f.fp_slide(a, t.sym(i), t.sym(i + len), len);
            let c = f.fp_slide(b, t.sym(i + 1), t.sym(i + 1 + len), len);
            prop_assert_eq!(c, f.fp_window(&t, i + 2, len).unwrap());
        }

        #[test]
        fn id_stream_matches_pointwise(s in "[ab]{20,120}", seed in any::<u64>(), tau in 1usize..16) {
            let t = Text::from(s.as_str());
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let f = IdFunction::random(&mut rng, tau, DEFAULT_K);
            let last = f.domain(t.len());
            for (j, id) in f.ids(&t, 1, last) {
                prop_assert_eq!(id, f.id_at(&t, j));
            }
        }
    }
}
