//! Handle table plus intrusive doubly-linked bucket lists, shared by the
//! bucket backends. Every payload id owns one node; a bucket is just a head
//! index into the node arrays.

use super::{Key, Payload, QueueError, UNREACHED};

pub(crate) const NIL: u32 = u32::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Loc {
    Absent,
    Pool,
    Bucket(u32),
}

#[derive(Debug)]
pub(crate) struct NodeTable {
    key: Vec<Key>,
    loc: Vec<Loc>,
    prev: Vec<u32>,
    next: Vec<u32>,
}

impl NodeTable {
    pub(crate) fn new(space: usize) -> NodeTable {
        NodeTable {
            key: vec![UNREACHED; space],
            loc: vec![Loc::Absent; space],
            prev: vec![NIL; space],
            next: vec![NIL; space],
        }
    }

    pub(crate) fn space(&self) -> usize {
        self.loc.len()
    }

    pub(crate) fn key(&self, id: Payload) -> Key {
        self.key[id]
    }

    pub(crate) fn set_key(&mut self, id: Payload, key: Key) {
        self.key[id] = key;
    }

    pub(crate) fn loc(&self, id: Payload) -> Loc {
        self.loc[id]
    }

    pub(crate) fn set_pool(&mut self, id: Payload) {
        self.loc[id] = Loc::Pool;
    }

    pub(crate) fn set_absent(&mut self, id: Payload) {
        self.loc[id] = Loc::Absent;
    }

    /// Validate an insert target, returning an error for out-of-range or live ids.
    pub(crate) fn check_new(&self, id: Payload) -> Result<(), QueueError> {
        match self.loc.get(id) {
            None => Err(QueueError::IdentityOutOfRange(id, self.space())),
            Some(Loc::Absent) => Ok(()),
            Some(_) => Err(QueueError::Duplicate(id)),
        }
    }

    /// Validate a decrease-key target and return its current key.
    pub(crate) fn check_decrease(&self, id: Payload, key: Key) -> Result<Key, QueueError> {
        match self.loc.get(id) {
            None => Err(QueueError::IdentityOutOfRange(id, self.space())),
            Some(Loc::Absent) => Err(QueueError::UnknownPayload(id)),
            Some(_) if key >= self.key[id] => Err(QueueError::NotSmaller {
                new: key,
                current: self.key[id],
            }),
            Some(_) => Ok(self.key[id]),
        }
    }

    pub(crate) fn push_front(&mut self, heads: &mut [u32], bucket: usize, id: Payload) {
        let old = heads[bucket];
        self.prev[id] = NIL;
        self.next[id] = old;
        if old != NIL {
            self.prev[old as usize] = id as u32;
        }
        heads[bucket] = id as u32;
        self.loc[id] = Loc::Bucket(bucket as u32);
    }

    /// Detach `id` from its bucket; returns the bucket it occupied.
    pub(crate) fn unlink(&mut self, heads: &mut [u32], id: Payload) -> usize {
        let Loc::Bucket(b) = self.loc[id] else {
            panic!("unlink of node {id} that is not in a bucket");
        };
        let (p, n) = (self.prev[id], self.next[id]);
        if p == NIL {
            heads[b as usize] = n;
        } else {
            self.next[p as usize] = n;
        }
        if n != NIL {
            self.prev[n as usize] = p;
        }
        self.prev[id] = NIL;
        self.next[id] = NIL;
        self.loc[id] = Loc::Absent;
        b as usize
    }

    pub(crate) fn pop_front(&mut self, heads: &mut [u32], bucket: usize) -> Option<Payload> {
        let h = heads[bucket];
        if h == NIL {
            return None;
        }
        self.unlink(heads, h as usize);
        Some(h as usize)
    }

    /// Empty a bucket, returning its members in list order.
    pub(crate) fn take_bucket(&mut self, heads: &mut [u32], bucket: usize) -> Vec<Payload> {
        let mut out = Vec::new();
        let mut cur = heads[bucket];
        while cur != NIL {
            out.push(cur as usize);
            let nx = self.next[cur as usize];
            self.prev[cur as usize] = NIL;
            self.next[cur as usize] = NIL;
            self.loc[cur as usize] = Loc::Absent;
            cur = nx;
        }
        heads[bucket] = NIL;
        out
    }

    pub(crate) fn iter_bucket<'a>(
        &'a self,
        heads: &'a [u32],
        bucket: usize,
    ) -> impl Iterator<Item = Payload> + 'a {
        let mut cur = heads[bucket];
        std::iter::from_fn(move || {
            if cur == NIL {
                return None;
            }
            let id = cur as usize;
            cur = self.next[id];
            Some(id)
        })
    }
}
