//! Dense local grid of an annulus with per-color adjacency.
//!
//! Dual objects live in base coordinates, so both lattices share the same
//! grid: a dual edge with base edge `p` belongs to the annulus exactly when
//! `p` does, and carries the status of the primal edge `shift_target(p)`.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::color::Color;
use crate::config::{Configuration, EdgeSet};
use crate::lattice::{angle_cmp, shift_target_unchecked, Annulus, BoxRegion, Edge, Lattice, Point2, Vertex};
use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Site {
    pub lattice: Lattice,
    /// Base coordinates.
    pub vertex: Vertex,
    pub local: usize,
    /// Doubled embedded position relative to the center.
    pub pos: Point2,
}

pub(crate) struct ArmGrid<'a> {
    pub cfg: &'a Configuration,
    pub annulus: Annulus,
    within: Option<&'a EdgeSet>,
    pub r: i32,
    pub w: usize,
    /// Norm of the sink ring, `r` unless lowered for nested radii.
    sink_r: i32,
    adj: [Vec<u8>; 4],
    pub sites: Vec<Site>,
}

impl<'a> ArmGrid<'a> {
    pub fn new(cfg: &'a Configuration, annulus: Annulus, within: Option<&'a EdgeSet>) -> Result<Self, Error> {
        if !cfg.region().contains_box(&annulus.outer_box()) {
            return Err(Error::RegionOutsideBox);
        }
        let r = annulus.outer as i32;
        let w = 2 * annulus.outer as usize + 1;
        let mut g = ArmGrid { cfg, annulus, within, r, w, sink_r: r, adj: Default::default(), sites: Vec::new() };
        g.sites = g.collect_sites();
        Ok(g)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.w * self.w
    }

    #[inline]
    pub fn local(&self, v: Vertex) -> Option<usize> {
        let lx = v.x - self.annulus.center.x + self.r;
        let ly = v.y - self.annulus.center.y + self.r;
        if lx < 0 || ly < 0 || lx as usize >= self.w || ly as usize >= self.w {
            return None;
        }
        Some(ly as usize * self.w + lx as usize)
    }

    #[inline]
    pub fn vertex(&self, i: usize) -> Vertex {
        Vertex::new(
            (i % self.w) as i32 - self.r + self.annulus.center.x,
            (i / self.w) as i32 - self.r + self.annulus.center.y,
        )
    }

    #[inline]
    pub fn norm(&self, i: usize) -> i32 {
        let lx = (i % self.w) as i32 - self.r;
        let ly = (i / self.w) as i32 - self.r;
        lx.abs().max(ly.abs())
    }

    /// Color-`c` adjacency masks (built on first use).
    pub fn adj(&mut self, c: Color) -> Result<&[u8], Error> {
        let slot = c as usize;
        if self.adj[slot].is_empty() {
            self.adj[slot] = self.build(c)?;
        }
        Ok(&self.adj[slot])
    }

    /// Adjacency that must already have been built.
    pub fn built(&self, c: Color) -> &[u8] {
        &self.adj[c as usize]
    }

    fn build(&self, c: Color) -> Result<Vec<u8>, Error> {
        let dual = c.lattice() == Lattice::Dual;
        if dual && !self.cfg.region().contains_box(&BoxRegion::new(self.annulus.center, self.annulus.outer + 1)) {
            return Err(Error::RegionOutsideBox);
        }
        if self.within.is_some() {
            return self.build_within(c);
        }
        let (w, r, n) = (self.w, self.r as usize, self.annulus.inner as usize);
        let region = self.cfg.region();
        let cw = self.cfg.indexer().width();
        // offset from grid-local to configuration-local coordinates
        let ox = (self.annulus.center.x - region.center.x + region.radius as i32 - self.r) as usize;
        let oy = (self.annulus.center.y - region.center.y + region.radius as i32 - self.r) as usize;
        let words = w.div_ceil(64);
        let flip = if c.is_open() { 0 } else { u64::MAX };
        // per grid row: east and north edge bits, one bit per column
        let mut east = vec![0u64; words * w];
        let mut north = vec![0u64; words * w];
        let mut h = vec![0u64; words + 1];
        let mut v = vec![0u64; words + 1];
        for ly in 0..w {
            let base = 2 * ((ly + oy) * cw + ox);
            let (e, nn) = (&mut east[ly * words..(ly + 1) * words], &mut north[ly * words..(ly + 1) * words]);
            if dual {
                // east: V slot of the next cell; north: H slot one row up
                row_bits(self.cfg.words(), base, w + 1, &mut h, &mut v);
                shift_down(&v, e);
                if ly + 1 < w {
                    row_bits(self.cfg.words(), base + 2 * cw, w, &mut h, &mut v);
                    nn.copy_from_slice(&h[..words]);
                }
            } else {
                row_bits(self.cfg.words(), base, w, &mut h, &mut v);
                e.copy_from_slice(&h[..words]);
                if ly + 1 < w {
                    nn.copy_from_slice(&v[..words]);
                }
            }
            for x in e.iter_mut().chain(nn.iter_mut()) {
                *x ^= flip;
            }
            // no east edge from the last column
            let last = w - 1;
            e[last / 64] &= !(1 << (last % 64));
            if ly + 1 == w {
                nn.iter_mut().for_each(|x| *x = 0);
            }
        }
        let mut adj = vec![0u8; w * w];
        let zero = vec![0u64; words];
        for (ly, cells) in adj.chunks_exact_mut(w).enumerate() {
            let e = &east[ly * words..(ly + 1) * words];
            let nn = &north[ly * words..(ly + 1) * words];
            let s = if ly > 0 { &north[(ly - 1) * words..ly * words] } else { &zero[..] };
            for (q, chunk) in cells.chunks_mut(64).enumerate() {
                // west neighbour bit of column x is the east bit of x - 1
                let wq = e[q] << 1 | if q > 0 { e[q - 1] >> 63 } else { 0 };
                let rows = [e[q], nn[q], wq, s[q]];
                for (k, out) in chunk.chunks_mut(8).enumerate() {
                    let mut packed = 0u64;
                    for (d, r) in rows.iter().enumerate() {
                        packed |= SPREAD[((r >> (8 * k)) & 0xff) as usize] << d;
                    }
                    out.copy_from_slice(&packed.to_le_bytes()[..out.len()]);
                }
            }
        }
        // edges with both endpoints in the inner box are not in the annulus
        for ly in r - n..=r + n {
            for lx in r - n..=r + n {
                let i = ly * w + lx;
                if lx < r + n {
                    adj[i] &= !1;
                    adj[i + 1] &= !4;
                }
                if ly < r + n {
                    adj[i] &= !2;
                    adj[i + w] &= !8;
                }
            }
        }
        Ok(adj)
    }

    fn build_within(&self, c: Color) -> Result<Vec<u8>, Error> {
        let dual = c.lattice() == Lattice::Dual;
        let (w, n, big_n) = (self.w, self.annulus.inner as i32, self.annulus.outer as i32);
        let idx = self.cfg.indexer();
        let want = c.is_open();
        let mut adj = vec![0u8; w * w];
        for i in 0..w * w {
            let lx = i % w;
            let ly = i / w;
            let ni = self.norm(i);
            let v = self.vertex(i);
            for (d, next) in [(0u8, lx + 1 < w), (1u8, ly + 1 < w)] {
                if !next {
                    continue;
                }
                let j = if d == 0 { i + 1 } else { i + w };
                let m = ni.max(self.norm(j));
                if m <= n || m > big_n {
                    continue;
                }
                let base = if d == 0 { Edge::h(v.x, v.y) } else { Edge::v(v.x, v.y) };
                let primal = if dual { shift_target_unchecked(base) } else { base };
                if let Some(within) = self.within {
                    if !within.contains(primal) {
                        continue;
                    }
                }
                let slot = idx.index(primal).ok_or(Error::OutsideBox(primal))?;
                if self.cfg.slot_open(slot) == want {
                    adj[i] |= 1 << d;
                    adj[j] |= 1 << (d + 2);
                }
            }
        }
        Ok(adj)
    }

    fn collect_sites(&self) -> Vec<Site> {
        let n = self.annulus.inner as i32;
        let c = self.annulus.center;
        let mut out = Vec::with_capacity(16 * n as usize);
        for lattice in [Lattice::Primal, Lattice::Dual] {
            for dy in -n..=n {
                for dx in -n..=n {
                    if dx.abs().max(dy.abs()) != n {
                        continue;
                    }
                    let vertex = Vertex::new(c.x + dx, c.y + dy);
                    let off = if lattice == Lattice::Dual { 1 } else { 0 };
                    out.push(Site {
                        lattice,
                        vertex,
                        local: self.local(vertex).expect("inner ring inside grid"),
                        pos: Point2::new(2 * dx as i64 + off, 2 * dy as i64 + off),
                    });
                }
            }
        }
        out.sort_by(site_order);
        out
    }

    /// Per site of color `c`'s lattice (indexed by local vertex), whether a
    /// color-`c` path joins it to `sinks`. Entries off the sites are
    /// unspecified. Each search stops as soon as it meets the sink set, so
    /// only the clusters of the sites are explored.
    pub fn site_reach(&mut self, c: Color, sinks: &[bool]) -> Result<Vec<bool>, Error> {
        const UNSEEN: u8 = 0;
        const YES: u8 = 1;
        const NO: u8 = 2;
        const OPEN: u8 = 3;
        let w = self.w;
        let lattice = c.lattice();
        let locals: Vec<usize> = self.sites.iter().filter(|s| s.lattice == lattice).map(|s| s.local).collect();
        let adj = self.adj(c)?;
        let mut state = vec![UNSEEN; adj.len()];
        let mut visited: Vec<usize> = Vec::new();
        let mut stack: Vec<usize> = Vec::new();
        for start in locals {
            if state[start] != UNSEEN {
                continue;
            }
            visited.clear();
            stack.clear();
            state[start] = OPEN;
            visited.push(start);
            stack.push(start);
            let mut found = sinks[start];
            'search: while let Some(i) = stack.pop() {
                let m = adj[i];
                for d in 0..4u8 {
                    if m & (1 << d) == 0 {
                        continue;
                    }
                    let j = crate::flow::step(w, i, d);
                    match state[j] {
                        YES => {
                            found = true;
                            break 'search;
                        }
                        UNSEEN => {
                            state[j] = OPEN;
                            visited.push(j);
                            if sinks[j] {
                                found = true;
                                break 'search;
                            }
                            stack.push(j);
                        }
                        _ => {}
                    }
                }
            }
            let mark = if found { YES } else { NO };
            for &v in &visited {
                state[v] = mark;
            }
        }
        Ok(state.iter().map(|&x| x == YES).collect())
    }

    /// Moves the sink ring to norm `big <= N`. An arm of the smaller
    /// annulus is an arm of this grid stopped at its first vertex of norm
    /// `big`, so the solver needs no other change.
    pub fn set_sink_radius(&mut self, big: u32) {
        debug_assert!(big as i32 <= self.r && big > self.annulus.inner);
        self.sink_r = big as i32;
    }

    /// The sink ring, `norm == N` by default.
    pub fn outer_ring(&self) -> Vec<bool> {
        let w = self.w;
        let (lo, hi) = ((self.r - self.sink_r) as usize, (self.r + self.sink_r) as usize);
        let mut ring = vec![false; w * w];
        for t in lo..=hi {
            ring[lo * w + t] = true;
            ring[hi * w + t] = true;
            ring[t * w + lo] = true;
            ring[t * w + hi] = true;
        }
        ring
    }

    /// Vertices lying in an edge set, as a mask.
    pub fn mask_of(&self, edges: &[Edge]) -> Vec<bool> {
        let mut m = vec![false; self.len()];
        for e in edges {
            let (a, b) = e.endpoints();
            for v in [a, b] {
                if let Some(i) = self.local(v) {
                    m[i] = true;
                }
            }
        }
        m
    }
}

/// `SPREAD[b]` has bit `i` of `b` in the low bit of byte `i`.
const SPREAD: [u64; 256] = {
    let mut t = [0u64; 256];
    let mut b = 0;
    while b < 256 {
        let mut i = 0;
        while i < 8 {
            if b & (1 << i) != 0 {
                t[b] |= 1 << (8 * i);
            }
            i += 1;
        }
        b += 1;
    }
    t
};

/// Deinterleaves `len` cells of canonical slots starting at `slot` (which
/// is even) into horizontal and vertical bit rows.
fn row_bits(bits: &[u64], slot: usize, len: usize, h: &mut [u64], v: &mut [u64]) {
    for (q, (hq, vq)) in h.iter_mut().zip(v.iter_mut()).enumerate() {
        let start = q * 64;
        if start >= len {
            *hq = 0;
            *vq = 0;
            continue;
        }
        let lo = window(bits, slot + 2 * start);
        let hi = window(bits, slot + 2 * start + 64);
        let mut hw = even_bits(lo) | even_bits(hi) << 32;
        let mut vw = even_bits(lo >> 1) | even_bits(hi >> 1) << 32;
        let keep = len - start;
        if keep < 64 {
            hw &= (1 << keep) - 1;
            vw &= (1 << keep) - 1;
        }
        *hq = hw;
        *vq = vw;
    }
}

/// 64 bits starting at bit `at`; bits past the end read as zero.
#[inline]
fn window(bits: &[u64], at: usize) -> u64 {
    let (q, b) = (at / 64, at % 64);
    let lo = bits.get(q).copied().unwrap_or(0) >> b;
    if b == 0 {
        lo
    } else {
        lo | bits.get(q + 1).copied().unwrap_or(0) << (64 - b)
    }
}

/// Packs the even-position bits of `x` into the low 32 bits.
#[inline]
fn even_bits(x: u64) -> u64 {
    let mut x = x & 0x5555_5555_5555_5555;
    x = (x | x >> 1) & 0x3333_3333_3333_3333;
    x = (x | x >> 2) & 0x0f0f_0f0f_0f0f_0f0f;
    x = (x | x >> 4) & 0x00ff_00ff_00ff_00ff;
    x = (x | x >> 8) & 0x0000_ffff_0000_ffff;
    (x | x >> 16) & 0x0000_0000_ffff_ffff
}

/// `dst[i] = src[i + 1]` on bit rows.
fn shift_down(src: &[u64], dst: &mut [u64]) {
    for (q, d) in dst.iter_mut().enumerate() {
        *d = src[q] >> 1 | src.get(q + 1).map_or(0, |x| x << 63);
    }
}

/// Counterclockwise order from the east axis; a primal site precedes a dual
/// site at the same angle.
pub(crate) fn site_order(a: &Site, b: &Site) -> Ordering {
    angle_cmp(a.pos, b.pos).then((a.lattice as u8).cmp(&(b.lattice as u8)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{sample_critical, RngSeed};

    #[test]
    fn direct_masks_match_edge_lookup() {
        let cfg = sample_critical(BoxRegion::new(Vertex::new(1, -2), 72), RngSeed::new(5, 0));
        let all = EdgeSet::from_edges(cfg.region(), cfg.region().edges()).unwrap();
        let cases = [(1, -2, 1, 8), (0, -1, 2, 7), (2, -3, 3, 5), (1, -2, 4, 71), (3, 0, 2, 64), (-5, 7, 6, 62), (1, -2, 1, 31)];
        for (x, y, n, big) in cases {
            let a = Annulus::new(Vertex::new(x, y), n, big).unwrap();
            let fast = ArmGrid::new(&cfg, a, None).unwrap();
            let slow = ArmGrid::new(&cfg, a, Some(&all)).unwrap();
            for color in Color::ALL {
                assert_eq!(fast.build(color).unwrap(), slow.build(color).unwrap(), "{color:?} {a:?}");
            }
        }
    }
}
