//! Monotone integer priority queues with decrease-key.
//!
//! All backends share one contract: entries are identified by a dense payload
//! id in `0..identity_space`, keys are `u64`, and [`UNREACHED`] entries sit in a
//! side pool until their first finite `decrease_key`. Bucket backends
//! additionally require a monotone workload: no key may drop below the last
//! key returned by `delete_min`.

mod cascading;
mod heap;
mod nodes;
mod one_level;
mod params;
pub mod workload;

pub use cascading::{CascadingBuckets, Placement};
pub use heap::ReferenceHeap;
pub use one_level::OneLevelBuckets;
pub use params::{
    cbs_params_with_levels, choose_cbs_params, widen_to_window, CbsParams, ParamError,
};

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

pub type Key = u64;
pub type Payload = usize;

/// Key of an entry that has no finite label yet.
pub const UNREACHED: Key = Key::MAX;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum QueueError {
    #[error("payload {0} is already live")]
    Duplicate(Payload),
    #[error("payload {0} is not live")]
    UnknownPayload(Payload),
    #[error("payload {0} outside identity space {1}")]
    IdentityOutOfRange(Payload, usize),
    #[error("key {key} outside supported window [{low}, {high})")]
    KeyOutOfRange { key: Key, low: Key, high: Key },
    #[error("new key {new} is not smaller than current key {current}")]
    NotSmaller { new: Key, current: Key },
    #[error("key {key} is below the scan position {scan}")]
    BelowScan { key: Key, scan: Key },
}

/// Operation counters. `slot_visits` counts every bucket inspected by
/// `delete_min`; `cascade_moves` counts entries redistributed to a lower level.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct QueueStats {
    pub inserts: u64,
    pub decrease_keys: u64,
    pub delete_mins: u64,
    pub slot_visits: u64,
    pub cascades: u64,
    pub cascade_moves: u64,
}

impl QueueStats {
    pub fn queue_ops(&self) -> u64 {
        self.inserts + self.decrease_keys + self.delete_mins
    }
}

pub trait MinQueue {
    fn insert(&mut self, id: Payload, key: Key) -> Result<(), QueueError>;
    fn decrease_key(&mut self, id: Payload, key: Key) -> Result<(), QueueError>;
    /// Remove an entry of minimum finite key; `None` once only pool entries remain.
    fn delete_min(&mut self) -> Option<(Payload, Key)>;
    /// Live entries, pool included.
    fn len(&self) -> usize;
    fn is_empty(&self) -> bool {
        self.len() == 0
    }
    fn key_of(&self, id: Payload) -> Option<Key>;
    fn stats(&self) -> QueueStats;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Backend {
    OneLevel,
    Cascading,
    Heap,
}

impl Backend {
    pub const ALL: [Backend; 3] = [Backend::OneLevel, Backend::Cascading, Backend::Heap];

    pub fn name(self) -> &'static str {
        match self {
            Backend::OneLevel => "one-level",
            Backend::Cascading => "cascading",
            Backend::Heap => "heap",
        }
    }
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("unknown backend {0:?} (expected one-level, cascading or heap)")]
pub struct UnknownBackend(pub String);

impl FromStr for Backend {
    type Err = UnknownBackend;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "one-level" => Ok(Backend::OneLevel),
            "cascading" => Ok(Backend::Cascading),
            "heap" => Ok(Backend::Heap),
            other => Err(UnknownBackend(other.to_string())),
        }
    }
}

/// Sizing information a solver hands to [`QueueSpec::build`].
#[derive(Debug, Clone, Copy)]
pub struct QueueSpec {
    pub identity_space: usize,
    /// Largest key that will ever be inserted.
    pub max_key: Key,
    /// Largest gap between a key and the last extracted minimum.
    pub window: Key,
    /// Item count used in the cascading parameter choice.
    pub item_count: u64,
    /// Optional `(k, p)` override for the cascading backend.
    pub cbs_override: Option<CbsParams>,
}

/// A queue of whichever backend was requested; dispatch is static per call.
pub enum AnyQueue {
    OneLevel(OneLevelBuckets),
    Cascading(CascadingBuckets),
    Heap(ReferenceHeap),
}

impl QueueSpec {
    pub fn cbs_params(&self) -> CbsParams {
        let base = self.cbs_override.unwrap_or_else(|| {
            choose_cbs_params(self.max_key + 1, self.item_count.max(1)).expect("positive inputs")
        });
        widen_to_window(base, self.window + 1)
    }

    pub fn build(&self, backend: Backend) -> AnyQueue {
        match backend {
            Backend::OneLevel => {
                AnyQueue::OneLevel(OneLevelBuckets::new(self.identity_space, self.max_key + 1))
            }
            Backend::Cascading => {
                let CbsParams { k, p } = self.cbs_params();
                AnyQueue::Cascading(CascadingBuckets::new(self.identity_space, k, p))
            }
            Backend::Heap => AnyQueue::Heap(ReferenceHeap::new(self.identity_space)),
        }
    }
}

macro_rules! dispatch {
    ($self:ident, $q:ident => $e:expr) => {
        match $self {
            AnyQueue::OneLevel($q) => $e,
            AnyQueue::Cascading($q) => $e,
            AnyQueue::Heap($q) => $e,
        }
    };
}

impl MinQueue for AnyQueue {
    fn insert(&mut self, id: Payload, key: Key) -> Result<(), QueueError> {
        dispatch!(self, q => q.insert(id, key))
    }
    fn decrease_key(&mut self, id: Payload, key: Key) -> Result<(), QueueError> {
        dispatch!(self, q => q.decrease_key(id, key))
    }
    fn delete_min(&mut self) -> Option<(Payload, Key)> {
        dispatch!(self, q => q.delete_min())
    }
    fn len(&self) -> usize {
        dispatch!(self, q => q.len())
    }
    fn key_of(&self, id: Payload) -> Option<Key> {
        dispatch!(self, q => q.key_of(id))
    }
    fn stats(&self) -> QueueStats {
        dispatch!(self, q => q.stats())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_queues(space: usize, window: Key) -> Vec<(String, AnyQueue)> {
        let spec = QueueSpec {
            identity_space: space,
            max_key: 10_000,
            window,
            item_count: 1,
            cbs_override: None,
        };
        let mut v: Vec<_> = Backend::ALL
            .iter()
            .map(|&b| (b.to_string(), spec.build(b)))
            .collect();
        let forced = QueueSpec {
            cbs_override: Some(CbsParams { k: 3, p: 10 }),
            ..spec
        };
        v.push(("cbs(3,10)".into(), forced.build(Backend::Cascading)));
        v
    }

    #[test]
    fn backend_names_round_trip() {
        for b in Backend::ALL {
            assert_eq!(b.name().parse::<Backend>(), Ok(b));
        }
        assert!("fib".parse::<Backend>().is_err());
    }

    #[test]
    fn duplicate_minimum_is_returned_twice() {
        for (name, mut q) in all_queues(8, 20) {
            q.insert(0, 3).unwrap();
            q.insert(1, 3).unwrap();
            q.insert(2, 9).unwrap();
            let (a, ka) = q.delete_min().unwrap();
            let (b, kb) = q.delete_min().unwrap();
            assert_eq!((ka, kb), (3, 3), "{name}");
            let mut ids = [a, b];
            ids.sort();
            assert_eq!(ids, [0, 1], "{name}");
            assert_eq!(q.delete_min(), Some((2, 9)), "{name}");
            assert_eq!(q.delete_min(), None, "{name}");
        }
    }

    #[test]
    fn pool_entries_are_never_extracted() {
        for (name, mut q) in all_queues(4, 20) {
            q.insert(0, UNREACHED).unwrap();
            q.insert(1, UNREACHED).unwrap();
            assert_eq!(q.len(), 2, "{name}");
            assert_eq!(q.delete_min(), None, "{name}");
            q.decrease_key(1, 7).unwrap();
            assert_eq!(q.key_of(1), Some(7));
            assert_eq!(q.delete_min(), Some((1, 7)), "{name}");
            assert_eq!(q.delete_min(), None, "{name}");
            assert_eq!(q.len(), 1, "{name}");
        }
    }

    #[test]
    fn contract_errors() {
        for (name, mut q) in all_queues(4, 20) {
            q.insert(0, 5).unwrap();
            assert_eq!(q.insert(0, 6), Err(QueueError::Duplicate(0)), "{name}");
            assert_eq!(
                q.decrease_key(0, 5),
                Err(QueueError::NotSmaller { new: 5, current: 5 }),
                "{name}"
            );
            assert_eq!(
                q.decrease_key(0, 9),
                Err(QueueError::NotSmaller { new: 9, current: 5 }),
                "{name}"
            );
            assert_eq!(
                q.decrease_key(2, 1),
                Err(QueueError::UnknownPayload(2)),
                "{name}"
            );
            assert!(
                matches!(q.insert(4, 1), Err(QueueError::IdentityOutOfRange(4, 4))),
                "{name}"
            );
            assert_eq!(q.delete_min(), Some((0, 5)));
            assert_eq!(
                q.decrease_key(0, 1),
                Err(QueueError::UnknownPayload(0)),
                "{name}"
            );
        }
    }

    #[test]
    fn bucket_backends_reject_non_monotone_keys() {
        for (name, mut q) in all_queues(4, 20).into_iter().filter(|(n, _)| n != "heap") {
            q.insert(0, 5).unwrap();
            q.insert(1, UNREACHED).unwrap();
            q.delete_min().unwrap();
            assert_eq!(
                q.insert(2, 4),
                Err(QueueError::BelowScan { key: 4, scan: 5 }),
                "{name}"
            );
            assert_eq!(
                q.decrease_key(1, 3),
                Err(QueueError::BelowScan { key: 3, scan: 5 }),
                "{name}"
            );
        }
    }
}
