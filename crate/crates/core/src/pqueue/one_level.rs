use super::nodes::{Loc, NodeTable, NIL};
use super::{Key, MinQueue, Payload, QueueError, QueueStats, UNREACHED};

/// One bucket per key value in `0..capacity`, drained by a forward-only cursor.
/// Over a whole run `delete_min` visits at most `capacity + deletions` slots.
#[derive(Debug)]
pub struct OneLevelBuckets {
    nodes: NodeTable,
    heads: Vec<u32>,
    cursor: Key,
    finite: usize,
    pool: usize,
    stats: QueueStats,
}

impl OneLevelBuckets {
    pub fn new(identity_space: usize, capacity: Key) -> OneLevelBuckets {
        OneLevelBuckets {
            nodes: NodeTable::new(identity_space),
            heads: vec![NIL; capacity as usize],
            cursor: 0,
            finite: 0,
            pool: 0,
            stats: QueueStats::default(),
        }
    }

    pub fn capacity(&self) -> Key {
        self.heads.len() as Key
    }

    pub fn scan_cursor(&self) -> Key {
        self.cursor
    }

    fn check_key(&self, key: Key) -> Result<(), QueueError> {
        if key < self.cursor {
            return Err(QueueError::BelowScan {
                key,
                scan: self.cursor,
            });
        }
        if key >= self.capacity() {
            return Err(QueueError::KeyOutOfRange {
                key,
                low: self.cursor,
                high: self.capacity(),
            });
        }
        Ok(())
    }

    fn place(&mut self, id: Payload, key: Key) {
        self.nodes.set_key(id, key);
        self.nodes.push_front(&mut self.heads, key as usize, id);
    }
}

impl MinQueue for OneLevelBuckets {
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
            self.nodes.unlink(&mut self.heads, id);
        }
        self.place(id, key);
        self.stats.decrease_keys += 1;
        Ok(())
    }

    fn delete_min(&mut self) -> Option<(Payload, Key)> {
        if self.finite == 0 {
            return None;
        }
        while (self.cursor as usize) < self.heads.len() {
            self.stats.slot_visits += 1;
            if let Some(id) = self.nodes.pop_front(&mut self.heads, self.cursor as usize) {
                self.finite -= 1;
                self.stats.delete_mins += 1;
                return Some((id, self.cursor));
            }
            self.cursor += 1;
        }
        unreachable!("finite entries beyond bucket capacity")
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

    #[test]
    fn rejects_keys_beyond_capacity() {
        let mut q = OneLevelBuckets::new(2, 10);
        assert_eq!(
            q.insert(0, 10),
            Err(QueueError::KeyOutOfRange {
                key: 10,
                low: 0,
                high: 10
            })
        );
        q.insert(0, 9).unwrap();
        assert_eq!(q.delete_min(), Some((0, 9)));
        assert_eq!(q.scan_cursor(), 9);
    }

    #[test]
    fn drain_visits_bounded_by_capacity_plus_deletions() {
        let cap = 500;
        let mut q = OneLevelBuckets::new(300, cap);
        for id in 0..300 {
            q.insert(id, (id as Key * 37) % cap).unwrap();
        }
        let mut last = 0;
        let mut n = 0;
        while let Some((_, k)) = q.delete_min() {
            assert!(k >= last);
            last = k;
            n += 1;
        }
        assert_eq!(n, 300);
        assert!(q.stats().slot_visits <= cap + n);
        assert_eq!(q.len(), 0);
    }

    #[test]
    fn zero_keys_share_the_current_bucket() {
        let mut q = OneLevelBuckets::new(3, 4);
        q.insert(0, 2).unwrap();
        assert_eq!(q.delete_min(), Some((0, 2)));
        q.insert(1, 2).unwrap();
        q.insert(2, 3).unwrap();
        assert_eq!(q.delete_min(), Some((1, 2)));
        assert_eq!(q.delete_min(), Some((2, 3)));
    }
}
