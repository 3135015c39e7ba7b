//! Slab-backed doubly linked chains, one per table index.
//!
//! Every bucket keeps head and tail handles, so appending at the tail and
//! splicing out a located entry are O(1). Locating an entry is a walk from
//! the head and reports the entry's depth (1-based).

use crate::table::ObjectKey;

const NIL: u32 = u32::MAX;

#[derive(Debug, Clone)]
struct Node {
    key: ObjectKey,
    prev: u32,
    next: u32,
}

#[derive(Debug, Clone, Copy)]
struct Head {
    head: u32,
    tail: u32,
    len: usize,
}

impl Head {
    const EMPTY: Head = Head {
        head: NIL,
        tail: NIL,
        len: 0,
    };
}

#[derive(Debug, Clone)]
pub(crate) struct Chains {
    nodes: Vec<Node>,
    free: Vec<u32>,
    heads: Vec<Head>,
}

/// Handle to a live entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Slot(u32);

impl Chains {
    pub fn new(buckets: usize) -> Self {
        Chains {
            nodes: Vec::new(),
            free: Vec::new(),
            heads: vec![Head::EMPTY; buckets],
        }
    }

    pub fn len(&self, bucket: usize) -> usize {
        self.heads[bucket].len
    }

    pub fn push_back(&mut self, bucket: usize, key: ObjectKey) -> Slot {
        let tail = self.heads[bucket].tail;
        let node = Node {
            key,
            prev: tail,
            next: NIL,
        };
        let slot = match self.free.pop() {
            Some(s) => {
                self.nodes[s as usize] = node;
                s
            }
            None => {
                self.nodes.push(node);
                (self.nodes.len() - 1) as u32
            }
        };
        let head = &mut self.heads[bucket];
        if tail == NIL {
            head.head = slot;
        } else {
            self.nodes[tail as usize].next = slot;
        }
        head.tail = slot;
        head.len += 1;
        Slot(slot)
    }

    /// Walks from the head; returns the entry and its depth.
    pub fn find(&self, bucket: usize, key: &ObjectKey) -> Option<(Slot, u64)> {
        let mut cur = self.heads[bucket].head;
        let mut depth = 1u64;
        while cur != NIL {
            let node = &self.nodes[cur as usize];
            if &node.key == key {
                return Some((Slot(cur), depth));
            }
            cur = node.next;
            depth += 1;
        }
        None
    }

    fn unlink(&mut self, bucket: usize, slot: Slot) {
        let Node { prev, next, .. } = self.nodes[slot.0 as usize];
        if prev == NIL {
            self.heads[bucket].head = next;
        } else {
            self.nodes[prev as usize].next = next;
        }
        if next == NIL {
            self.heads[bucket].tail = prev;
        } else {
            self.nodes[next as usize].prev = prev;
        }
        self.heads[bucket].len -= 1;
    }

    pub fn move_to_front(&mut self, bucket: usize, slot: Slot) {
        if self.heads[bucket].head == slot.0 {
            return;
        }
        self.unlink(bucket, slot);
        let old_head = self.heads[bucket].head;
        {
            let node = &mut self.nodes[slot.0 as usize];
            node.prev = NIL;
            node.next = old_head;
        }
        if old_head == NIL {
            self.heads[bucket].tail = slot.0;
        } else {
            self.nodes[old_head as usize].prev = slot.0;
        }
        let head = &mut self.heads[bucket];
        head.head = slot.0;
        head.len += 1;
    }

    pub fn remove(&mut self, bucket: usize, slot: Slot) -> ObjectKey {
        self.unlink(bucket, slot);
        self.free.push(slot.0);
        std::mem::take(&mut self.nodes[slot.0 as usize].key)
    }

    pub fn iter(&self, bucket: usize) -> ChainIter<'_> {
        ChainIter {
            chains: self,
            cur: self.heads[bucket].head,
        }
    }

    pub fn tail(&self, bucket: usize) -> Option<&ObjectKey> {
        let t = self.heads[bucket].tail;
        (t != NIL).then(|| &self.nodes[t as usize].key)
    }
}

pub(crate) struct ChainIter<'a> {
    chains: &'a Chains,
    cur: u32,
}

impl<'a> Iterator for ChainIter<'a> {
    type Item = &'a ObjectKey;

    fn next(&mut self) -> Option<Self::Item> {
        if self.cur == NIL {
            return None;
        }
        let node = &self.chains.nodes[self.cur as usize];
        self.cur = node.next;
        Some(&node.key)
    }
}
