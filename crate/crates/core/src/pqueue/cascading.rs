//! k-level cascading bucket system.
//!
//! Keys are written in base `p`. Relative to the current `base` (the last
//! extracted key, or the lower bound of the bucket being cascaded) an entry
//! lives at the highest digit position where its key differs from `base`, in
//! the bucket named by its own digit there. Level 0 also holds entries equal
//! to `base`. The top level indexes the quotient `key / p^(k-1)` modulo `p`,
//! scanned circularly from just past the base's own quotient; this lets the
//! window `[base, base + p^k)` slide forward as the minimum advances.
//!
//! `delete_min` takes the head of the first non-empty level-0 bucket. When
//! level 0 is empty it picks the lowest non-empty level `j`, moves `base` to
//! the lower bound of bucket `a_j` and redistributes that bucket into lower
//! levels, repeating until level 0 has an entry.

use std::fmt::Write as _;

use super::nodes::{Loc, NodeTable, NIL};
use super::{Key, MinQueue, Payload, QueueError, QueueStats, UNREACHED};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Placement {
    pub level: usize,
    pub slot: u64,
}

#[derive(Debug)]
pub struct CascadingBuckets {
    k: usize,
    p: u64,
    pow: Vec<u64>,
    capacity: Key,
    heads: Vec<u32>,
    level_len: Vec<usize>,
    /// `a_i`: lower bound (in scan order) on the first non-empty slot; `p` iff empty.
    active: Vec<u64>,
    base: Key,
    nodes: NodeTable,
    finite: usize,
    pool: usize,
    stats: QueueStats,
}

impl CascadingBuckets {
    pub fn new(identity_space: usize, k: usize, p: u64) -> CascadingBuckets {
        assert!(k >= 1 && p >= 2, "cascading buckets need k >= 1 and p >= 2");
        let pow: Vec<u64> = (0..=k as u32).map(|i| p.saturating_pow(i)).collect();
        CascadingBuckets {
            k,
            p,
            capacity: pow[k],
            pow,
            heads: vec![NIL; k * p as usize],
            level_len: vec![0; k],
            active: vec![p; k],
            base: 0,
            nodes: NodeTable::new(identity_space),
            finite: 0,
            pool: 0,
            stats: QueueStats::default(),
        }
    }

    pub fn levels(&self) -> usize {
        self.k
    }

    pub fn buckets_per_level(&self) -> u64 {
        self.p
    }

    /// Number of keys above `base` the structure can hold (`p^k`).
    pub fn capacity(&self) -> Key {
        self.capacity
    }

    pub fn base(&self) -> Key {
        self.base
    }

    pub fn active(&self) -> &[u64] {
        &self.active
    }

    pub fn placement_of(&self, id: Payload) -> Option<Placement> {
        match self.nodes.loc(id) {
            Loc::Bucket(b) => Some(Placement {
                level: b as usize / self.p as usize,
                slot: b as u64 % self.p,
            }),
            _ => None,
        }
    }

    /// Where `key` belongs relative to the current base.
    pub fn placement(&self, key: Key) -> Placement {
        let top = self.k - 1;
        let tk = key / self.pow[top];
        if tk != self.base / self.pow[top] {
            return Placement {
                level: top,
                slot: tk % self.p,
            };
        }
        for i in (0..top).rev() {
            let dk = (key / self.pow[i]) % self.p;
            if dk != (self.base / self.pow[i]) % self.p {
                return Placement { level: i, slot: dk };
            }
        }
        Placement {
            level: 0,
            slot: key % self.p,
        }
    }

    fn scan_start(&self, level: usize) -> u64 {
        let top = self.k - 1;
        if level < top {
            0
        } else if self.k == 1 {
            self.base % self.p
        } else {
            (self.base / self.pow[top] + 1) % self.p
        }
    }

    fn rank(&self, level: usize, slot: u64) -> u64 {
        (slot + self.p - self.scan_start(level)) % self.p
    }

    fn bucket(&self, level: usize, slot: u64) -> usize {
        level * self.p as usize + slot as usize
    }

    fn check_key(&self, key: Key) -> Result<(), QueueError> {
        if key < self.base {
            return Err(QueueError::BelowScan {
                key,
                scan: self.base,
            });
        }
        if key - self.base >= self.capacity {
            return Err(QueueError::KeyOutOfRange {
                key,
                low: self.base,
                high: self.base.saturating_add(self.capacity),
            });
        }
        Ok(())
    }

    fn place(&mut self, id: Payload, key: Key) {
        let Placement { level, slot } = self.placement(key);
        self.nodes.set_key(id, key);
        let b = self.bucket(level, slot);
        self.nodes.push_front(&mut self.heads, b, id);
        self.level_len[level] += 1;
        let a = self.active[level];
        if a == self.p || self.rank(level, slot) < self.rank(level, a) {
            self.active[level] = slot;
        }
    }

    fn unlink(&mut self, id: Payload) {
        let b = self.nodes.unlink(&mut self.heads, id);
        let level = b / self.p as usize;
        self.level_len[level] -= 1;
        if self.level_len[level] == 0 {
            self.active[level] = self.p;
        }
    }

    /// Move `a_level` forward to the first non-empty slot and return it.
    fn advance(&mut self, level: usize) -> u64 {
        let start = self.scan_start(level);
        let mut r = self.rank(level, self.active[level]);
        loop {
            debug_assert!(r < self.p, "non-empty level {level} has no occupied slot");
            let slot = (start + r) % self.p;
            self.stats.slot_visits += 1;
            if self.heads[self.bucket(level, slot)] != NIL {
                self.active[level] = slot;
                return slot;
            }
            r += 1;
        }
    }

    fn cascade(&mut self, level: usize, slot: u64) {
        let b = self.bucket(level, slot);
        let members = self.nodes.take_bucket(&mut self.heads, b);
        self.level_len[level] -= members.len();
        let first_key = self.nodes.key(members[0]);
        self.base = first_key / self.pow[level] * self.pow[level];
        if level == self.k - 1 {
            // the scan origin of the top level moved with the base
            self.active[level] = if self.level_len[level] == 0 {
                self.p
            } else {
                self.scan_start(level)
            };
        } else if self.level_len[level] == 0 {
            self.active[level] = self.p;
        }
        self.stats.cascades += 1;
        for id in members {
            let key = self.nodes.key(id);
            self.place(id, key);
            self.stats.cascade_moves += 1;
        }
    }

    /// Check every live entry sits where [`Self::placement`] says it should and
    /// that active pointers bound the occupied slots.
    pub fn audit(&self) -> Result<(), String> {
        for level in 0..self.k {
            let mut count = 0;
            for slot in 0..self.p {
                for id in self
                    .nodes
                    .iter_bucket(&self.heads, self.bucket(level, slot))
                {
                    count += 1;
                    let key = self.nodes.key(id);
                    if key < self.base || key - self.base >= self.capacity {
                        return Err(format!("key {key} outside window of base {}", self.base));
                    }
                    let want = self.placement(key);
                    if want != (Placement { level, slot }) {
                        return Err(format!("key {key} at ({level},{slot}), expected {want:?}"));
                    }
                    let a = self.active[level];
                    if a == self.p || self.rank(level, a) > self.rank(level, slot) {
                        return Err(format!("a_{level}={a} passes occupied slot {slot}"));
                    }
                }
            }
            if count != self.level_len[level] {
                return Err(format!(
                    "level {level} count {} != {count}",
                    self.level_len[level]
                ));
            }
            if count == 0 && self.active[level] != self.p {
                return Err(format!(
                    "empty level {level} has a_{level}={}",
                    self.active[level]
                ));
            }
        }
        Ok(())
    }

    /// Level/bucket occupancy as text, one line per level.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        writeln!(
            out,
            "cbs k={} p={} base={} finite={} pool={}",
            self.k, self.p, self.base, self.finite, self.pool
        )
        .unwrap();
        for level in 0..self.k {
            write!(out, "level {level} a={}:", self.active[level]).unwrap();
            for slot in 0..self.p {
                let mut keys: Vec<Key> = self
                    .nodes
                    .iter_bucket(&self.heads, self.bucket(level, slot))
                    .map(|id| self.nodes.key(id))
                    .collect();
                if !keys.is_empty() {
                    keys.sort_unstable();
                    let list: Vec<String> = keys.iter().map(|k| k.to_string()).collect();
                    write!(out, " [{slot}: {}]", list.join(",")).unwrap();
                }
            }
            out.push('\n');
        }
        out
    }
}

impl MinQueue for CascadingBuckets {
    fn insert(&mut self, id: Payload, key: Key) -> Result<(), QueueError> {
        self.nodes.check_new(id)?;
        if key == UNREACHED {
            self.nodes.set_pool(id);
            self.nodes.set_key(id, UNREACHED);
            self.pool += 1;
        } else {
            self.check_key(key)?;
            self.place(id, key);
            self.finite += 1;
        }
        self.stats.inserts += 1;
        Ok(())
    }

    fn decrease_key(&mut self, id: Payload, key: Key) -> Result<(), QueueError> {
        self.nodes.check_decrease(id, key)?;
        self.check_key(key)?;
        if self.nodes.loc(id) == Loc::Pool {
            self.pool -= 1;
            self.finite += 1;
            self.nodes.set_absent(id);
        } else {
            self.unlink(id);
        }
        self.place(id, key);
        self.stats.decrease_keys += 1;
        Ok(())
    }

    fn delete_min(&mut self) -> Option<(Payload, Key)> {
        if self.finite == 0 {
            return None;
        }
        while self.level_len[0] == 0 {
            let j = (1..self.k)
                .find(|&i| self.level_len[i] > 0)
                .expect("finite entry somewhere");
            let slot = self.advance(j);
            self.cascade(j, slot);
        }
        let slot = self.advance(0);
        let b = self.bucket(0, slot);
        let id = self
            .nodes
            .pop_front(&mut self.heads, b)
            .expect("occupied slot");
        self.level_len[0] -= 1;
        let key = self.nodes.key(id);
        // same digits above position 0, so every other placement is unchanged
        self.base = key;
        if self.level_len[0] == 0 {
            self.active[0] = self.p;
        }
        self.finite -= 1;
        self.stats.delete_mins += 1;
        Some((id, key))
    }

    fn len(&self) -> usize {
        self.finite + self.pool
    }

    fn key_of(&self, id: Payload) -> Option<Key> {
        match self.nodes.loc(id) {
            Loc::Absent => None,
            _ => Some(self.nodes.key(id)),
        }
    }

    fn stats(&self) -> QueueStats {
        self.stats
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn at(level: usize, slot: u64) -> Option<Placement> {
        Some(Placement { level, slot })
    }

    #[test]
    fn digit_placement_with_zero_base() {
        let mut q = CascadingBuckets::new(8, 3, 10);
        q.insert(0, 19).unwrap();
        q.insert(1, 0).unwrap();
        q.insert(2, 999).unwrap();
        q.insert(3, 5).unwrap();
        assert_eq!(q.placement_of(0), at(1, 1));
        assert_eq!(q.placement_of(1), at(0, 0));
        assert_eq!(q.placement_of(2), at(2, 9));
        assert_eq!(q.placement_of(3), at(0, 5));
        q.audit().unwrap();
    }

    #[test]
    fn capacity_window_slides_with_base() {
        let mut q = CascadingBuckets::new(4, 3, 10);
        assert_eq!(q.capacity(), 1000);
        assert_eq!(
            q.insert(0, 1399),
            Err(QueueError::KeyOutOfRange {
                key: 1399,
                low: 0,
                high: 1000
            })
        );
        q.insert(1, 450).unwrap();
        assert_eq!(q.delete_min(), Some((1, 450)));
        assert_eq!(q.base(), 450);
        q.insert(0, 1399).unwrap();
        q.audit().unwrap();
        assert_eq!(q.placement_of(0), at(2, 3));
        assert_eq!(q.delete_min(), Some((0, 1399)));
    }

    #[test]
    fn decrease_key_within_and_across_levels() {
        let mut q = CascadingBuckets::new(4, 3, 10);
        q.insert(0, 19).unwrap();
        q.decrease_key(0, 12).unwrap();
        assert_eq!(q.placement_of(0), at(1, 1));
        q.decrease_key(0, 5).unwrap();
        assert_eq!(q.placement_of(0), at(0, 5));
        q.insert(1, UNREACHED).unwrap();
        assert_eq!(q.placement_of(1), None);
        q.decrease_key(1, 7).unwrap();
        assert_eq!(q.placement_of(1), at(0, 7));
        q.audit().unwrap();
        assert_eq!(q.delete_min(), Some((0, 5)));
        assert_eq!(q.delete_min(), Some((1, 7)));
    }

    #[test]
    fn level_zero_exhaustion_cascades_from_level_one() {
        let mut q = CascadingBuckets::new(8, 3, 10);
        q.insert(0, 19).unwrap();
        q.insert(1, 25).unwrap();
        q.insert(2, 150).unwrap();
        assert_eq!(q.delete_min(), Some((0, 19)));
        assert_eq!(q.stats().cascades, 1);
        assert_eq!(q.active()[0], 10, "level 0 empty after removing 19");
        assert!(q.dump().contains("level 0 a=10:\n"));
        assert_eq!(q.delete_min(), Some((1, 25)));
        assert_eq!(q.stats().cascades, 2);
        assert_eq!(q.delete_min(), Some((2, 150)));
        q.audit().unwrap();
    }

    #[test]
    fn top_level_wraps_around() {
        let mut q = CascadingBuckets::new(16, 2, 4);
        let mut next = 0;
        let mut ids = 0;
        for round in 0..40u64 {
            for d in [0u64, 3, 7, 15] {
                q.insert(ids, next + d).unwrap();
                ids += 1;
            }
            let (_, k) = q.delete_min().unwrap();
            assert!(k >= next, "round {round}");
            next = k;
            q.audit().unwrap();
            while let Some((_, k)) = q.delete_min() {
                assert!(k >= next);
                next = k;
                q.audit().unwrap();
            }
            ids = 0;
        }
    }

    #[test]
    fn single_level_is_circular_one_level_buckets() {
        let mut q = CascadingBuckets::new(4, 1, 5);
        q.insert(0, 4).unwrap();
        q.insert(1, 2).unwrap();
        assert_eq!(q.delete_min(), Some((1, 2)));
        q.insert(2, 6).unwrap();
        q.insert(3, 3).unwrap();
        q.audit().unwrap();
        assert_eq!(
            q.insert(1, 7),
            Err(QueueError::KeyOutOfRange {
                key: 7,
                low: 2,
                high: 7
            })
        );
        assert_eq!(q.delete_min(), Some((3, 3)));
        assert_eq!(q.delete_min(), Some((0, 4)));
        assert_eq!(q.delete_min(), Some((2, 6)));
    }
}
