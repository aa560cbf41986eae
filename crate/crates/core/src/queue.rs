//! Vertex queue ordered by most recent move-to-back, with O(1) membership,
//! removal and move-to-back.

use crate::graph::VertexId;

const NIL: usize = usize::MAX;

#[derive(Debug, Clone, PartialEq)]
pub struct RecencyQueue {
    prev: Vec<usize>,
    next: Vec<usize>,
    member: Vec<bool>,
    head: usize,
    tail: usize,
    len: usize,
}

impl RecencyQueue {
    pub fn new(n: usize) -> Self {
        RecencyQueue {
            prev: vec![NIL; n],
            next: vec![NIL; n],
            member: vec![false; n],
            head: NIL,
            tail: NIL,
            len: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.member[v]
    }

    pub fn front(&self) -> Option<VertexId> {
        (self.head != NIL).then_some(self.head)
    }

    pub fn remove(&mut self, v: VertexId) {
        if !self.member[v] {
            return;
        }
        let (p, q) = (self.prev[v], self.next[v]);
        if p == NIL {
            self.head = q;
        } else {
            self.next[p] = q;
        }
        if q == NIL {
            self.tail = p;
        } else {
            self.prev[q] = p;
        }
        self.prev[v] = NIL;
        self.next[v] = NIL;
        self.member[v] = false;
        self.len -= 1;
    }

    pub fn move_to_back(&mut self, v: VertexId) {
        self.remove(v);
        self.prev[v] = self.tail;
        if self.tail == NIL {
            self.head = v;
        } else {
            self.next[self.tail] = v;
        }
        self.tail = v;
        self.member[v] = true;
        self.len += 1;
    }

    /// Front-to-back order.
    pub fn iter(&self) -> impl Iterator<Item = VertexId> + '_ {
        std::iter::successors(self.front(), |&v| {
            let x = self.next[v];
            (x != NIL).then_some(x)
        })
    }
}
