//! Active-box collections for the branch-and-bound loops.

use std::cmp::Ordering;
use std::collections::VecDeque;

use crate::mm::Hyperrect;

/// A box together with the bound that was computed for it.
#[derive(Debug, Clone)]
pub struct Node {
    pub region: Hyperrect,
    pub bound: f64,
}

/// Storage of the boxes still to be explored.
pub trait Fringe {
    fn push(&mut self, node: Node);
    fn pop(&mut self) -> Option<Node>;
    fn len(&self) -> usize;
    fn is_empty(&self) -> bool {
        self.len() == 0
    }
    /// Largest stored bound.
    fn max_bound(&self) -> Option<f64>;
}

/// Oldest box first. Push and pop are O(1).
#[derive(Debug, Default)]
pub struct OldestFirst {
    queue: VecDeque<Node>,
}

impl OldestFirst {
    pub fn new() -> Self {
        Self::default()
    }
}

impl Fringe for OldestFirst {
    fn push(&mut self, node: Node) {
        self.queue.push_back(node);
    }
    fn pop(&mut self) -> Option<Node> {
        self.queue.pop_front()
    }
    fn len(&self) -> usize {
        self.queue.len()
    }
    fn max_bound(&self) -> Option<f64> {
        self.queue.iter().map(|n| n.bound).reduce(f64::max)
    }
}

const SLOT_BITS: u32 = 28;

// Heap entries are 16-byte keys into a slab of boxes: the bound plus the
// insertion sequence number and slab slot packed into one word. Together with
// a 4-ary layout this keeps pops cheap when millions of boxes are stored.
#[derive(Debug, Clone, Copy)]
struct Key {
    bound: f64,
    tag: u64,
}

impl Key {
    fn slot(self) -> usize {
        (self.tag & ((1 << SLOT_BITS) - 1)) as usize
    }

    /// Larger bound first; among equal bounds the older node wins so runs are
    /// reproducible.
    fn before(self, other: Key) -> bool {
        match self.bound.total_cmp(&other.bound) {
            Ordering::Greater => true,
            Ordering::Less => false,
            Ordering::Equal => self.tag >> SLOT_BITS < other.tag >> SLOT_BITS,
        }
    }
}

/// Largest bound first.
#[derive(Debug, Default)]
pub struct BestFirst {
    heap: Vec<Key>,
    slab: Vec<Option<Hyperrect>>,
    free: Vec<u32>,
    seq: u64,
}

impl BestFirst {
    pub fn new() -> Self {
        Self::default()
    }

    fn sift_up(&mut self, mut k: usize) {
        let key = self.heap[k];
        while k > 0 {
            let parent = (k - 1) / 4;
            if !key.before(self.heap[parent]) {
                break;
            }
            self.heap[k] = self.heap[parent];
            k = parent;
        }
        self.heap[k] = key;
    }

    fn sift_down(&mut self, mut k: usize) {
        let len = self.heap.len();
        let key = self.heap[k];
        loop {
            let first = 4 * k + 1;
            if first >= len {
                break;
            }
            let mut best = first;
            for c in first + 1..(first + 4).min(len) {
                if self.heap[c].before(self.heap[best]) {
                    best = c;
                }
            }
            if !self.heap[best].before(key) {
                break;
            }
            self.heap[k] = self.heap[best];
            k = best;
        }
        self.heap[k] = key;
    }
}

impl Fringe for BestFirst {
    fn push(&mut self, node: Node) {
        self.seq += 1;
        let slot = match self.free.pop() {
            Some(slot) => {
                self.slab[slot as usize] = Some(node.region);
                slot as u64
            }
            None => {
                self.slab.push(Some(node.region));
                (self.slab.len() - 1) as u64
            }
        };
        assert!(slot < 1 << SLOT_BITS, "too many stored boxes");
        self.heap.push(Key {
            bound: node.bound,
            tag: self.seq << SLOT_BITS | slot,
        });
        self.sift_up(self.heap.len() - 1);
    }
    fn pop(&mut self) -> Option<Node> {
        let last = self.heap.pop()?;
        let top = if self.heap.is_empty() {
            last
        } else {
            std::mem::replace(&mut self.heap[0], last)
        };
        if !self.heap.is_empty() {
            self.sift_down(0);
        }
        let slot = top.slot();
        let region = self.slab[slot].take().expect("occupied slot");
        self.free.push(slot as u32);
        Some(Node {
            region,
            bound: top.bound,
        })
    }
    fn len(&self) -> usize {
        self.heap.len()
    }
    fn max_bound(&self) -> Option<f64> {
        self.heap.first().map(|k| k.bound)
    }
}
