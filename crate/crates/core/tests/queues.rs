use proptest::prelude::*;

use spaf::pqueue::workload::{group_by_key, is_nondecreasing, Workload};
use spaf::pqueue::{CascadingBuckets, MinQueue, OneLevelBuckets, ReferenceHeap};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cascading_matches_heap_for_any_shape(seed in any::<u64>(), k in 1usize..5, extra in 0u64..6, window in 1u64..300) {
        // smallest p covering the window at this level count, plus slack
        let mut p = 2u64;
        while p.pow(k as u32) < window + 1 {
            p += 1;
        }
        let p = p + extra;
        let w = Workload::generate(seed, 2000, window);
        let want = w.replay(&mut ReferenceHeap::new(w.identity_space)).unwrap();
        let mut q = CascadingBuckets::new(w.identity_space, k, p);
        let got = w.replay(&mut q).unwrap();
        q.audit().unwrap();
        prop_assert!(is_nondecreasing(&got));
        prop_assert_eq!(group_by_key(&got), group_by_key(&want));
    }

    #[test]
    fn one_level_visits_stay_linear(seed in any::<u64>(), window in 1u64..300) {
        let w = Workload::generate(seed, 2000, window);
        let mut q = OneLevelBuckets::new(w.identity_space, w.max_key + 1);
        let got = w.replay(&mut q).unwrap();
        let s = q.stats();
        prop_assert!(s.slot_visits <= w.max_key + 1 + s.delete_mins);
        prop_assert_eq!(s.delete_mins as usize, got.len());
    }
}
