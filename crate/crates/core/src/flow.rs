//! Vertex-disjoint paths to a sink set on a square grid, by unit
//! vertex-capacity augmenting paths.
//!
//! The grid is `w` columns wide, vertices are indexed row-major and the
//! graph is given by per-vertex direction masks (bit `d` = edge towards
//! direction `d`, E=0 N=1 W=2 S=3). Adjacency masks must be symmetric and
//! never point off the grid.

use alloc::vec;
use alloc::vec::Vec;

pub(crate) const SINK: u8 = 1 << 4;
pub(crate) const SOURCE: u8 = 1 << 5;
const DIRS: u8 = 0b1111;

#[inline]
pub(crate) fn step(w: usize, i: usize, d: u8) -> usize {
    match d {
        0 => i + 1,
        1 => i + w,
        2 => i - 1,
        _ => i - w,
    }
}

/// Flow state: per vertex, the outgoing direction bit (or `SINK`) and the
/// `SOURCE` flag.
#[derive(Clone, Debug)]
pub(crate) struct Flow {
    pub out: Vec<u8>,
}

impl Flow {
    pub fn new(len: usize) -> Self {
        Flow { out: vec![0; len] }
    }

    #[inline]
    pub fn used(&self, v: usize) -> bool {
        self.out[v] & (DIRS | SINK) != 0
    }

    /// Vertex sequence of the flow path leaving `s`, ending at a sink.
    pub fn path_from(&self, w: usize, s: usize) -> Vec<usize> {
        let mut out = vec![s];
        let mut v = s;
        while self.out[v] & SINK == 0 {
            let bits = self.out[v] & DIRS;
            debug_assert!(bits.count_ones() == 1);
            v = step(w, v, bits.trailing_zeros() as u8);
            out.push(v);
        }
        out
    }
}

/// Reusable buffers for the residual search.
pub(crate) struct Scratch {
    stamp: Vec<u32>,
    parent: Vec<u32>,
    epoch: u32,
    queue: Vec<u32>,
}

impl Scratch {
    pub fn new() -> Self {
        Scratch { stamp: Vec::new(), parent: Vec::new(), epoch: 0, queue: Vec::new() }
    }

    fn reset(&mut self, states: usize) {
        if self.stamp.len() < states {
            self.stamp = vec![0; states];
            self.parent = vec![0; states];
            self.epoch = 0;
        }
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.stamp.iter_mut().for_each(|s| *s = 0);
            self.epoch = 1;
        }
        self.queue.clear();
    }
}

/// One disjoint-path problem on a grid.
pub(crate) struct Network<'a> {
    pub w: usize,
    pub adj: &'a [u8],
    pub is_sink: &'a [bool],
    /// Vertices no path may enter.
    pub blocked: &'a [bool],
}

const NONE: u32 = u32::MAX;

impl Network<'_> {
    /// Tries to route one more unit of flow out of `s`. Returns whether it
    /// succeeded; on failure the flow is unchanged.
    pub fn augment(&self, flow: &mut Flow, s: usize, scratch: &mut Scratch) -> bool {
        self.augment_any(flow, core::slice::from_ref(&s), scratch).is_some()
    }

    /// Routes one more unit of flow out of some unused source in `sources`
    /// and returns that source, or leaves the flow unchanged.
    pub fn augment_any(&self, flow: &mut Flow, sources: &[usize], scratch: &mut Scratch) -> Option<usize> {
        let n = self.adj.len();
        scratch.reset(2 * n);
        let epoch = scratch.epoch;
        // state 2v = in(v), 2v+1 = out(v)
        for &s in sources {
            if flow.out[s] & SOURCE != 0 || self.blocked[s] {
                continue;
            }
            let start = (2 * s) as u32;
            if scratch.stamp[start as usize] != epoch {
                scratch.stamp[start as usize] = epoch;
                scratch.parent[start as usize] = NONE;
                scratch.queue.push(start);
            }
        }
        let mut finish = NONE;
        'search: while let Some(st) = scratch.queue.pop() {
            let v = (st >> 1) as usize;
            let push = |scratch: &mut Scratch, next: usize| {
                if scratch.stamp[next] != epoch {
                    scratch.stamp[next] = epoch;
                    scratch.parent[next] = st;
                    scratch.queue.push(next as u32);
                }
            };
            if st & 1 == 0 {
                // in(v)
                if !flow.used(v) {
                    push(scratch, 2 * v + 1);
                } else {
                    // cancel the arc entering v
                    for d in 0..4u8 {
                        if self.adj[v] & (1 << d) != 0 {
                            let p = step(self.w, v, d);
                            if flow.out[p] & (1 << ((d + 2) & 3)) != 0 {
                                push(scratch, 2 * p + 1);
                            }
                        }
                    }
                }
            } else {
                // out(v)
                if self.is_sink[v] && flow.out[v] & SINK == 0 {
                    finish = st;
                    break 'search;
                }
                if flow.used(v) {
                    push(scratch, 2 * v);
                }
                for d in 0..4u8 {
                    if self.adj[v] & (1 << d) != 0 && flow.out[v] & (1 << d) == 0 {
                        let u = step(self.w, v, d);
                        if !self.blocked[u] {
                            push(scratch, 2 * u);
                        }
                    }
                }
            }
        }
        if finish == NONE {
            return None;
        }
        // walk back, applying arc changes
        let last = (finish >> 1) as usize;
        flow.out[last] |= SINK;
        let mut st = finish;
        loop {
            let prev = scratch.parent[st as usize];
            if prev == NONE {
                break;
            }
            let (a, b) = ((prev >> 1) as usize, (st >> 1) as usize);
            let (a_out, b_out) = (prev & 1 == 1, st & 1 == 1);
            if a != b {
                let d = dir_between(self.w, a, b);
                if a_out && !b_out {
                    flow.out[a] |= 1 << d;
                } else if !a_out && b_out {
                    // in(a) -> out(b): cancel b -> a
                    flow.out[b] &= !(1 << ((d + 2) & 3));
                }
            }
            st = prev;
        }
        let s = (st >> 1) as usize;
        flow.out[s] |= SOURCE;
        Some(s)
    }

    /// Whether every source can be joined to the sink set by disjoint paths;
    /// returns the flow when it can.
    pub fn link_all(&self, sources: &[usize], scratch: &mut Scratch) -> Option<Flow> {
        let mut flow = Flow::new(self.adj.len());
        for &s in sources {
            if !self.augment(&mut flow, s, scratch) {
                return None;
            }
        }
        Some(flow)
    }

    /// Greedy maximal linked subset, in the given order (a basis of the
    /// gammoid). Returns the linked flags and the flow.
    #[cfg(test)]
    pub fn link_greedy(&self, sources: &[usize], scratch: &mut Scratch) -> (Vec<bool>, Flow) {
        let mut flow = Flow::new(self.adj.len());
        let linked = sources.iter().map(|&s| self.augment(&mut flow, s, scratch)).collect();
        (linked, flow)
    }
}

#[inline]
fn dir_between(w: usize, a: usize, b: usize) -> u8 {
    if b == a + 1 {
        0
    } else if b == a + w {
        1
    } else if b + 1 == a {
        2
    } else {
        debug_assert_eq!(b + w, a);
        3
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Full grid adjacency of a `w × h` rectangle.
    fn full(w: usize, h: usize) -> Vec<u8> {
        let mut adj = vec![0u8; w * h];
        for y in 0..h {
            for x in 0..w {
                let i = y * w + x;
                if x + 1 < w {
                    adj[i] |= 1;
                    adj[i + 1] |= 4;
                }
                if y + 1 < h {
                    adj[i] |= 2;
                    adj[i + w] |= 8;
                }
            }
        }
        adj
    }

    #[test]
    fn disjoint_columns() {
        let (w, h) = (4, 4);
        let adj = full(w, h);
        let sink: Vec<bool> = (0..w * h).map(|i| i / w == h - 1).collect();
        let blocked = vec![false; w * h];
        let net = Network { w, adj: &adj, is_sink: &sink, blocked: &blocked };
        let mut sc = Scratch::new();
        let flow = net.link_all(&[0, 1, 2, 3], &mut sc).unwrap();
        for s in 0..4 {
            let p = flow.path_from(w, s);
            assert!(sink[*p.last().unwrap()]);
        }
        assert!(net.link_all(&[0, 1, 2, 3, 4], &mut sc).is_none());
    }

    #[test]
    fn rerouting_through_bottleneck() {
        // 3 wide, 3 tall; the middle row has only its centre vertex open, so
        // at most one path crosses it.
        let (w, h) = (3, 3);
        let mut adj = full(w, h);
        for x in [0usize, 2] {
            let i = w + x;
            for d in 0..4u8 {
                if adj[i] & (1 << d) != 0 {
                    let j = step(w, i, d);
                    adj[i] &= !(1 << d);
                    adj[j] &= !(1 << ((d + 2) & 3));
                }
            }
        }
        let sink: Vec<bool> = (0..9).map(|i| i / w == 2).collect();
        let blocked = vec![false; 9];
        let net = Network { w, adj: &adj, is_sink: &sink, blocked: &blocked };
        let mut sc = Scratch::new();
        let (linked, _) = net.link_greedy(&[0, 2], &mut sc);
        assert_eq!(linked, vec![true, false]);
    }

    #[test]
    fn augment_reroutes_existing_path() {
        // First source grabs the short path a later source needs; the
        // second augmentation must reroute it.
        //  row1: 3 4 5   (sinks)
        //  row0: 0 1 2
        let w = 3;
        let mut adj = vec![0u8; 6];
        let mut link = |a: usize, b: usize| {
            let d = dir_between(w, a, b);
            adj[a] |= 1 << d;
            adj[b] |= 1 << ((d + 2) & 3);
        };
        link(0, 1);
        link(1, 4);
        link(0, 3);
        link(1, 2);
        let sink = vec![false, false, false, true, true, true];
        let blocked = vec![false; 6];
        let net = Network { w, adj: &adj, is_sink: &sink, blocked: &blocked };
        let mut sc = Scratch::new();
        // 2 can only leave through 1 -> 4, 0 goes straight up.
        let flow = net.link_all(&[0, 2], &mut sc).unwrap();
        assert_eq!(flow.path_from(w, 2), vec![2, 1, 4]);
        assert_eq!(flow.path_from(w, 0), vec![0, 3]);
    }
}
