use proptest::prelude::*;

use awci::index::PairIndex;
use awci::io::{parse_ist, write_ist};
use awci::model::{Dataset, Interval, SearchParams};
use awci::oracle::{all_intervals, brute_force_pairs, judge_pair};
use awci::pipeline::{find_pairs, RunOptions};
use awci::random::{random_dataset, RandomSpec};
use awci::SweepState;

fn small() -> RandomSpec {
    RandomSpec {
        max_strings: 3,
        max_len: 9,
        ..RandomSpec::default()
    }
}

fn pick(ds: &Dataset, x: usize, k: usize) -> Interval {
    let all = all_intervals(ds, x);
    all[k % all.len()]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn sweep_state_matches_judge(seed in any::<u64>(), a in any::<usize>(), b in any::<usize>()) {
        let ds = random_dataset(seed, &small());
        let idx = PairIndex::build(&ds);
        let (x, y) = (0, 1);
        let r = pick(&ds, x, a);
        let t = pick(&ds, y, b);
        let rows = idx.pos(y, x);
        let mut s = SweepState::new(r.start, r.end);
        for p in t.start..=t.end {
            s.add(rows.row(p));
        }
        let v = judge_pair(&ds, &r, &t, 0).unwrap();
        prop_assert_eq!(s.indels(), v.indel_total);
        prop_assert_eq!(s.covered(), v.size_left(&r));
        prop_assert_eq!(s.fed() - s.misses(), v.size_right(&t));
        for d in 0..4 {
            prop_assert_eq!(s.accepts(d), judge_pair(&ds, &r, &t, d).unwrap().is_awci);
        }
    }

    #[test]
    fn sweep_state_remove_undoes_add(seed in any::<u64>(), a in any::<usize>(), b in any::<usize>()) {
        let ds = random_dataset(seed, &small());
        let idx = PairIndex::build(&ds);
        let r = pick(&ds, 0, a);
        let t = pick(&ds, 1, b);
        let rows = idx.pos(1, 0);
        let mut s = SweepState::new(r.start, r.end);
        for p in t.start..=t.end {
            s.add(rows.row(p));
        }
        for p in t.start..t.end {
            s.remove(rows.row(p));
        }
        let mut fresh = SweepState::new(r.start, r.end);
        fresh.add(rows.row(t.end));
        prop_assert_eq!((s.covered(), s.misses(), s.fed()), (fresh.covered(), fresh.misses(), fresh.fed()));
        for p in r.start..=r.end {
            prop_assert_eq!(s.hits(p), fresh.hits(p));
        }
    }

    #[test]
    fn ungrouped_pairs_match_brute_force(seed in any::<u64>(), delta in 0usize..3, min_size in 0usize..4) {
        let ds = random_dataset(seed, &small());
        let params = SearchParams::new(delta, 2, min_size).unwrap();
        let want = brute_force_pairs(&ds, &params);
        for filter in [true, false] {
            let opts = RunOptions { filter, quorum_grouping: false, ..RunOptions::default() };
            prop_assert_eq!(&find_pairs(&ds, &params, &opts).unwrap(), &want);
        }
    }

    #[test]
    fn ist_round_trip(seed in any::<u64>()) {
        let ds = random_dataset(seed, &RandomSpec { break_rate: 0.3, ..RandomSpec::default() });
        let mut text = Vec::new();
        write_ist(&ds, &mut text).unwrap();
        let back = parse_ist(text.as_slice()).unwrap();
        let mut again = Vec::new();
        write_ist(&back, &mut again).unwrap();
        prop_assert_eq!(text, again);
        for (s, t) in ds.strings().iter().zip(back.strings()) {
            prop_assert_eq!(s.len(), t.len());
            prop_assert_eq!(s.breaks(), t.breaks());
        }
    }
}
