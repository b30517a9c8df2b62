use proptest::prelude::*;

use sslce::index::AnyIndex;
use sslce::oracle::{check_pset, naive_lce, naive_ssa};
use sslce::partition_det::build_det;
use sslce::partition_rand::build_rand;
use sslce::sparse_suffix::SparseSuffixIndex;
use sslce::{Mode, Text};

fn text_strategy() -> impl Strategy<Value = Vec<u8>> {
    prop_oneof![
        prop::collection::vec(b'a'..=b'b', 1..300),
        prop::collection::vec(b'a'..=b'd', 1..300),
        // short unit repeated, with a few edits
        (
            prop::collection::vec(b'a'..=b'c', 1..6),
            1usize..300,
            prop::collection::vec((0usize..300, b'a'..=b'c'), 0..3)
        )
            .prop_map(|(unit, n, edits)| {
                let mut v: Vec<u8> = unit.iter().copied().cycle().take(n).collect();
                for (at, c) in edits {
                    if at < v.len() {
                        v[at] = c;
                    }
                }
                v
            }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn every_mode_answers_exactly(bytes in text_strategy(), tau_pick in 0usize..100, seed in any::<u64>(), qs in prop::collection::vec((0usize..1000, 0usize..1000), 40)) {
        let text = Text::new(bytes);
        let n = text.len();
        let tau = 1 + tau_pick % n.min(24);
        for mode in Mode::ALL {
            let (idx, info) = AnyIndex::build(&text, tau, mode, seed).unwrap();
            prop_assert_eq!(info.set_size, idx.set_size());
            let (t2, loaded) = AnyIndex::from_bytes(&idx.to_bytes(&text)).unwrap();
            prop_assert_eq!(&loaded, &idx);
            for &(a, b) in &qs {
                let (i, j) = (1 + a % n, 1 + b % n);
                prop_assert_eq!(loaded.lce(&t2, i, j).unwrap(), naive_lce(&text, i, j), "{} tau={} ({}, {})", mode, tau, i, j);
            }
        }
    }

    #[test]
    fn sets_pass_the_checker_and_sort_any_subset(bytes in text_strategy(), tau_pick in 0usize..100, seed in any::<u64>(), picks in prop::collection::vec(0usize..1000, 1..40)) {
        let text = Text::new(bytes);
        let n = text.len();
        let tau = 1 + tau_pick % n.min(16);
        let mut b: Vec<usize> = picks.iter().map(|x| 1 + x % n).collect();
        b.sort_unstable();
        b.dedup();
        for p in [build_rand(&text, tau, seed).unwrap(), build_det(&text, tau).unwrap()] {
            let rep = check_pset(&text, &p);
            prop_assert!(rep.passed(), "{:?}", rep.first_violation);
            let sst = SparseSuffixIndex::build(&text, &b, &p).unwrap();
            prop_assert_eq!(&sst.ssa, &naive_ssa(&text, &b));
            prop_assert!(sst.validate(&text).is_ok());
        }
    }
}

#[test]
fn bad_queries_are_rejected() {
    let text = Text::from("abcabc");
    let (idx, _) = AnyIndex::build(&text, 2, Mode::Det, 0).unwrap();
    assert!(idx.lce(&text, 0, 1).is_err());
    assert!(idx.lce(&text, 1, 7).is_err());
    assert!(idx.lce(&Text::from("abcab"), 1, 2).is_err());
    assert!(AnyIndex::build(&text, 7, Mode::Rand, 0).is_err());
    assert!(AnyIndex::build(&text, 0, Mode::Dcover, 0).is_err());
}
