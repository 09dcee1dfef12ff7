//! Seeded random monotone workloads for differential queue testing.
//!
//! A workload is generated against a `BTreeSet` model so that every operation
//! is valid for every backend: finite keys stay within `window` of the last
//! extracted minimum, decreases never go below it, and ids are never reused.

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{Key, MinQueue, Payload, QueueError, UNREACHED};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Op {
    Insert(Payload, Key),
    Decrease(Payload, Key),
    DeleteMin,
}

#[derive(Debug, Clone)]
pub struct Workload {
    pub ops: Vec<Op>,
    pub identity_space: usize,
    pub window: Key,
    pub max_key: Key,
}

impl Workload {
    /// `ops` random operations followed by a full drain.
    pub fn generate(seed: u64, ops: usize, window: Key) -> Workload {
        assert!(window >= 1);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = Vec::with_capacity(ops * 2);
        let mut finite: BTreeSet<(Key, Payload)> = BTreeSet::new();
        let mut keys: Vec<Key> = Vec::new();
        // live ids with a key that can still be decreased
        let mut live: Vec<Payload> = Vec::new();
        let mut last_min: Key = 0;
        let mut max_key: Key = 0;

        for _ in 0..ops {
            let r: f64 = rng.gen();
            if r < 0.4 {
                let id = keys.len();
                let key = if rng.gen_bool(0.2) {
                    UNREACHED
                } else {
                    last_min + rng.gen_range(0..window)
                };
                keys.push(key);
                live.push(id);
                if key != UNREACHED {
                    finite.insert((key, id));
                    max_key = max_key.max(key);
                }
                out.push(Op::Insert(id, key));
                continue;
            }
            if r < 0.7 && !live.is_empty() {
                let slot = rng.gen_range(0..live.len());
                let id = live[slot];
                let cur = keys[id];
                if cur > last_min {
                    let hi = cur.min(last_min + window);
                    let key = rng.gen_range(last_min..hi);
                    if cur != UNREACHED {
                        finite.remove(&(cur, id));
                    }
                    finite.insert((key, id));
                    keys[id] = key;
                    max_key = max_key.max(key);
                    out.push(Op::Decrease(id, key));
                    continue;
                }
                live.swap_remove(slot);
            }
            if let Some((key, id)) = finite.pop_first() {
                last_min = key;
                keys[id] = UNREACHED;
                if let Some(pos) = live.iter().position(|&x| x == id) {
                    live.swap_remove(pos);
                }
            }
            out.push(Op::DeleteMin);
        }
        for _ in 0..=finite.len() {
            out.push(Op::DeleteMin);
        }
        Workload {
            ops: out,
            identity_space: keys.len().max(1),
            window,
            max_key,
        }
    }

    /// Run the workload, returning every successful extraction in order.
    pub fn replay<Q: MinQueue>(&self, q: &mut Q) -> Result<Vec<(Payload, Key)>, QueueError> {
        let mut out = Vec::new();
        for op in &self.ops {
            match *op {
                Op::Insert(id, key) => q.insert(id, key)?,
                Op::Decrease(id, key) => q.decrease_key(id, key)?,
                Op::DeleteMin => out.extend(q.delete_min()),
            }
        }
        Ok(out)
    }
}

/// Payload multiset per extraction key.
pub fn group_by_key(extractions: &[(Payload, Key)]) -> BTreeMap<Key, Vec<Payload>> {
    let mut m: BTreeMap<Key, Vec<Payload>> = BTreeMap::new();
    for &(id, k) in extractions {
        m.entry(k).or_default().push(id);
    }
    for v in m.values_mut() {
        v.sort_unstable();
    }
    m
}

pub fn is_nondecreasing(extractions: &[(Payload, Key)]) -> bool {
    extractions.windows(2).all(|w| w[0].1 <= w[1].1)
}
