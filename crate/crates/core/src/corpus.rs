//! Text generators for tests, benchmarks and the `gen` command.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{Error, Result, Text};

/// Uniform bytes from `a..a+sigma`.
pub fn random(n: usize, sigma: u8, seed: u64) -> Text {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sigma = sigma.max(1);
    Text::new((0..n).map(|_| b'a' + rng.gen_range(0..sigma)).collect())
}

/// A random primitive word of length `period` repeated to length `n`.
pub fn periodic(n: usize, sigma: u8, period: usize, seed: u64) -> Text {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let period = period.max(1);
    let sigma = sigma.max(2);
    let unit = loop {
        let u: Vec<u8> = (0..period)
            .map(|_| b'a' + rng.gen_range(0..sigma))
            .collect();
        if crate::periodicity::principal_period(&u).is_ok_and(|p| p == period) {
            break u;
        }
    };
    Text::new(unit.iter().cycle().take(n).copied().collect())
}

/// Prefix of the Fibonacci word `abaababaabaab...`.
pub fn fibonacci(n: usize) -> Text {
    let (mut a, mut b) = (b"a".to_vec(), b"ab".to_vec());
    while b.len() < n {
        let next = [b.as_slice(), a.as_slice()].concat();
        a = std::mem::replace(&mut b, next);
    }
    b.truncate(n);
    Text::new(b)
}

/// Prefix of the Thue–Morse word over `{a, b}`.
pub fn thue_morse(n: usize) -> Text {
    Text::new(
        (0..n)
            .map(|k: usize| if k.count_ones() % 2 == 0 { b'a' } else { b'b' })
            .collect(),
    )
}

/// Corpus families by name.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Random,
    Periodic,
    Fibonacci,
    ThueMorse,
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Family> {
        match s {
            "random" => Ok(Family::Random),
            "periodic" => Ok(Family::Periodic),
            "fibonacci" => Ok(Family::Fibonacci),
            "thue-morse" => Ok(Family::ThueMorse),
            _ => Err(Error::Parameter(format!("unknown corpus family {s:?}"))),
        }
    }
}

/// Generate `n` symbols of `family`. `sigma` applies to the random and
/// periodic families; the periodic unit has length 7.
pub fn generate(family: Family, n: usize, sigma: u8, seed: u64) -> Text {
    match family {
        Family::Random => random(n, sigma, seed),
        Family::Periodic => periodic(n, sigma, 7, seed),
        Family::Fibonacci => fibonacci(n),
        Family::ThueMorse => thue_morse(n),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shapes() {
        assert_eq!(fibonacci(13).as_bytes(), b"abaababaabaab");
        assert_eq!(thue_morse(8).as_bytes(), b"abbabaab");
        let p = periodic(50, 2, 7, 3);
        assert_eq!(
            crate::periodicity::principal_period(p.as_bytes()).unwrap(),
            7
        );
        assert_eq!(random(100, 4, 1), random(100, 4, 1));
        assert!(random(1000, 4, 1)
            .as_bytes()
            .iter()
            .all(|c| (b'a'..b'e').contains(c)));
        assert_eq!("thue-morse".parse::<Family>().unwrap(), Family::ThueMorse);
    }
}
