use std::cmp::Reverse;
use std::collections::BinaryHeap;

use super::{Key, MinQueue, Payload, QueueError, QueueStats, UNREACHED};

/// Binary heap with lazy deletion, used as the testing baseline. It does not
/// enforce the monotone-workload contract.
#[derive(Debug)]
pub struct ReferenceHeap {
    heap: BinaryHeap<Reverse<(Key, u64, Payload)>>,
    key: Vec<Key>,
    /// Sequence number of the heap entry that is current for each id; 0 = absent.
    version: Vec<u64>,
    seq: u64,
    finite: usize,
    pool: usize,
    stats: QueueStats,
}

impl ReferenceHeap {
    pub fn new(identity_space: usize) -> ReferenceHeap {
        ReferenceHeap {
            heap: BinaryHeap::new(),
            key: vec![UNREACHED; identity_space],
            version: vec![0; identity_space],
            seq: 0,
            finite: 0,
            pool: 0,
            stats: QueueStats::default(),
        }
    }

    fn push(&mut self, id: Payload, key: Key) {
        self.seq += 1;
        self.key[id] = key;
        self.version[id] = self.seq;
        if key != UNREACHED {
            self.heap.push(Reverse((key, self.seq, id)));
        }
    }
}

impl MinQueue for ReferenceHeap {
    fn insert(&mut self, id: Payload, key: Key) -> Result<(), QueueError> {
        match self.version.get(id) {
            None => return Err(QueueError::IdentityOutOfRange(id, self.key.len())),
            Some(&v) if v != 0 => return Err(QueueError::Duplicate(id)),
            _ => {}
        }
        if key == UNREACHED {
            self.pool += 1;
        } else {
            self.finite += 1;
        }
        self.push(id, key);
        self.stats.inserts += 1;
        Ok(())
    }

    fn decrease_key(&mut self, id: Payload, key: Key) -> Result<(), QueueError> {
        match self.version.get(id) {
            None => return Err(QueueError::IdentityOutOfRange(id, self.key.len())),
            Some(0) => return Err(QueueError::UnknownPayload(id)),
            _ => {}
        }
        let current = self.key[id];
        if key >= current {
            return Err(QueueError::NotSmaller { new: key, current });
        }
        if current == UNREACHED {
            self.pool -= 1;
            self.finite += 1;
        }
        self.push(id, key);
        self.stats.decrease_keys += 1;
        Ok(())
    }

    fn delete_min(&mut self) -> Option<(Payload, Key)> {
        while let Some(Reverse((key, seq, id))) = self.heap.pop() {
            if self.version[id] == seq {
                self.version[id] = 0;
                self.finite -= 1;
                self.stats.delete_mins += 1;
                return Some((id, key));
            }
        }
        None
    }

    fn len(&self) -> usize {
        self.finite + self.pool
    }

    fn key_of(&self, id: Payload) -> Option<Key> {
        (self.version[id] != 0).then(|| self.key[id])
    }

    fn stats(&self) -> QueueStats {
        self.stats
    }
}
