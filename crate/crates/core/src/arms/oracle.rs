//! Exhaustive reference search for arm systems on tiny annuli.
//!
//! Deliberately shares nothing with the fast detector beyond
//! `Configuration::has_color`: its own adjacency, its own floating-point
//! site order, and plain backtracking over simple paths. Failed search
//! states are memoised; a state is the arm being drawn, the path tip, the
//! vertices used on each lattice and the admissible site window.
//!
//! Only chordless paths are drawn: an arm that touches one of its own
//! earlier vertices along an edge of its color can be shortcut there,
//! which keeps its endpoints and only frees vertices.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use super::{Arm, ArmWitness};
use crate::color::{Color, ColorSequence};
use crate::config::Configuration;
use crate::connectivity::LatticePath;
use crate::lattice::{Annulus, Direction, Edge, Lattice, Vertex};
use crate::Error;

/// Largest outer radius the oracle accepts.
pub const ORACLE_MAX_RADIUS: u32 = 7;

type Bits = [u64; 4];

#[inline]
fn get(b: &Bits, i: usize) -> bool {
    b[i / 64] >> (i % 64) & 1 == 1
}

#[inline]
fn set(b: &mut Bits, i: usize) {
    b[i / 64] |= 1 << (i % 64);
}

#[inline]
fn clear(b: &mut Bits, i: usize) {
    b[i / 64] &= !(1 << (i % 64));
}

struct OSite {
    lattice: Lattice,
    cell: usize,
}

struct Oracle<'s> {
    sigma: &'s [Color],
    side: usize,
    r: i32,
    center: Vertex,
    /// `nbrs[color][cell]` = neighbour cells joined by an annulus edge of that color.
    nbrs: [Vec<Vec<usize>>; 4],
    outer: Bits,
    sites: Vec<OSite>,
    used: [Bits; 2],
    failed: BTreeSet<(usize, usize, Bits, Bits, usize, usize)>,
    nodes: u64,
    budget: u64,
    /// Per arm: site index and cells of the path.
    arms: Vec<(usize, Vec<usize>)>,
}

/// Exhaustive search for `k` arms with colors `σ` in counterclockwise order,
/// vertex-disjoint within each lattice. Returns a witness or `None`.
pub fn detect_arms_oracle(cfg: &Configuration, annulus: Annulus, sigma: &ColorSequence) -> Result<Option<ArmWitness>, Error> {
    detect_arms_oracle_budget(cfg, annulus, sigma, 50_000_000)
}

pub fn detect_arms_oracle_budget(
    cfg: &Configuration,
    annulus: Annulus,
    sigma: &ColorSequence,
    budget: u64,
) -> Result<Option<ArmWitness>, Error> {
    if annulus.outer > ORACLE_MAX_RADIUS {
        return Err(Error::InstanceTooLarge(annulus.outer));
    }
    super::check_radii(annulus, sigma.len())?;
    let r = annulus.outer as i32;
    let side = (2 * r + 1) as usize;
    let center = annulus.center;
    let cell_of = |v: Vertex| ((v.y - center.y + r) as usize) * side + (v.x - center.x + r) as usize;
    let vertex_of = |i: usize| Vertex::new((i % side) as i32 - r + center.x, (i / side) as i32 - r + center.y);

    let mut nbrs: [Vec<Vec<usize>>; 4] = Default::default();
    for c in Color::ALL {
        if !sigma.colors().contains(&c) {
            continue;
        }
        let mut table = alloc::vec![Vec::new(); side * side];
        for (i, slot) in table.iter_mut().enumerate() {
            let v = vertex_of(i);
            for d in Direction::ALL {
                let u = v.step(d);
                if u.linf(center) > r {
                    continue;
                }
                let e = Edge::between(v, u, c.lattice()).expect("neighbours");
                if annulus.contains_edge(e) && cfg.has_color(e, c)? {
                    slot.push(cell_of(u));
                }
            }
        }
        nbrs[c as usize] = table;
    }

    let mut outer = [0u64; 4];
    for i in 0..side * side {
        if vertex_of(i).linf(center) == r {
            set(&mut outer, i);
        }
    }

    let n = annulus.inner as i32;
    let mut raw: Vec<(f64, u8, usize, Lattice)> = Vec::new();
    for lattice in [Lattice::Primal, Lattice::Dual] {
        let half = if lattice == Lattice::Dual { 0.5 } else { 0.0 };
        for i in 0..side * side {
            let v = vertex_of(i);
            if v.linf(center) != n {
                continue;
            }
            let x = (v.x - center.x) as f64 + half;
            let y = (v.y - center.y) as f64 + half;
            let mut a = libm::atan2(y, x);
            if a < 0.0 {
                a += 2.0 * core::f64::consts::PI;
            }
            raw.push((a, lattice as u8, i, lattice));
        }
    }
    raw.sort_by(|p, q| p.0.partial_cmp(&q.0).expect("finite").then(p.1.cmp(&q.1)));
    let sites = raw.into_iter().map(|(_, _, cell, lattice)| OSite { lattice, cell }).collect();

    let mut o = Oracle {
        sigma: sigma.colors(),
        side,
        r,
        center,
        nbrs,
        outer,
        sites,
        used: [[0; 4]; 2],
        failed: BTreeSet::new(),
        nodes: 0,
        budget,
        arms: Vec::new(),
    };
    let total = o.sites.len();
    for s0 in 0..total {
        if o.start_arm(0, s0, s0 + total)? {
            let arms = o
                .arms
                .iter()
                .enumerate()
                .map(|(a, (_, cells))| {
                    let c = o.sigma[a];
                    let verts = cells.iter().map(|&i| o.vertex(i)).collect();
                    Arm { color: c, path: LatticePath::new(c.lattice(), verts).expect("grid path") }
                })
                .collect();
            return Ok(Some(ArmWitness { annulus, arms }));
        }
    }
    Ok(None)
}

impl Oracle<'_> {
    fn vertex(&self, i: usize) -> Vertex {
        Vertex::new((i % self.side) as i32 - self.r + self.center.x, (i / self.side) as i32 - self.r + self.center.y)
    }

    /// Whether `from` can still reach the outer boundary along color `c`
    /// avoiding the used vertices of its lattice.
    fn can_escape(&self, c: Color, from: usize) -> bool {
        let used = &self.used[c.lattice() as usize];
        let mut seen: Bits = [0; 4];
        // each cell is pushed at most once
        let mut stack = [0u16; 256];
        let mut top = 1;
        stack[0] = from as u16;
        set(&mut seen, from);
        while top > 0 {
            top -= 1;
            let v = stack[top] as usize;
            if get(&self.outer, v) {
                return true;
            }
            for &u in &self.nbrs[c as usize][v] {
                if !get(&seen, u) && !get(used, u) {
                    set(&mut seen, u);
                    stack[top] = u as u16;
                    top += 1;
                }
            }
        }
        false
    }

    /// Arm `a` starts at site position `p` (positions are taken modulo the
    /// site count); later arms use positions in `(p, end)`.
    fn start_arm(&mut self, a: usize, p: usize, end: usize) -> Result<bool, Error> {
        let total = self.sites.len();
        let site = &self.sites[p % total];
        let c = self.sigma[a];
        if site.lattice != c.lattice() {
            return Ok(false);
        }
        let (cell, lat) = (site.cell, site.lattice as usize);
        if get(&self.used[lat], cell) {
            return Ok(false);
        }
        set(&mut self.used[lat], cell);
        self.arms.push((p % total, alloc::vec![cell]));
        let ok = self.extend(a, cell, p, end)?;
        if !ok {
            self.arms.pop();
            clear(&mut self.used[lat], cell);
        }
        Ok(ok)
    }

    fn extend(&mut self, a: usize, tip: usize, p: usize, end: usize) -> Result<bool, Error> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::SearchBudget);
        }
        let c = self.sigma[a];
        if get(&self.outer, tip) {
            return self.next_arm(a, p, end);
        }
        if !self.can_escape_from_tip(c, tip) {
            return Ok(false);
        }
        let key = (a, tip, self.used[0], self.used[1], p, end);
        if self.failed.contains(&key) {
            return Ok(false);
        }
        if !self.rest_possible(a, p, end) {
            self.failed.insert(key);
            return Ok(false);
        }
        let lat = c.lattice() as usize;
        let mut steps = self.nbrs[c as usize][tip].clone();
        // outward steps first
        steps.sort_by_key(|&u| core::cmp::Reverse(self.norm(u)));
        for u in steps {
            if get(&self.used[lat], u) || self.has_chord(a, u) {
                continue;
            }
            set(&mut self.used[lat], u);
            self.arms[a].1.push(u);
            if self.extend(a, u, p, end)? {
                return Ok(true);
            }
            self.arms[a].1.pop();
            clear(&mut self.used[lat], u);
        }
        self.failed.insert(key);
        Ok(false)
    }

    fn norm(&self, i: usize) -> i32 {
        let v = self.vertex(i);
        v.linf(self.center)
    }

    /// Whether `u` is adjacent to a vertex of arm `a` other than its tip.
    fn has_chord(&self, a: usize, u: usize) -> bool {
        let path = &self.arms[a].1;
        let before_tip = &path[..path.len() - 1];
        self.nbrs[self.sigma[a] as usize][u].iter().any(|x| before_tip.contains(x))
    }

    /// Every arm after `a` still has a free site in `(p, end)` that can
    /// reach the outer boundary.
    fn rest_possible(&self, a: usize, p: usize, end: usize) -> bool {
        let total = self.sites.len();
        (a + 1..self.sigma.len()).all(|b| {
            let c = self.sigma[b];
            (p + 1..end).any(|q| {
                let site = &self.sites[q % total];
                site.lattice == c.lattice() && !get(&self.used[c.lattice() as usize], site.cell) && self.can_escape(c, site.cell)
            })
        })
    }

    fn can_escape_from_tip(&self, c: Color, tip: usize) -> bool {
        // the tip itself is marked used; search from its free neighbours
        let used = &self.used[c.lattice() as usize];
        self.nbrs[c as usize][tip].iter().any(|&u| !get(used, u) && self.can_escape(c, u))
    }

    fn next_arm(&mut self, a: usize, p: usize, end: usize) -> Result<bool, Error> {
        let k = self.sigma.len();
        if a + 1 == k {
            return Ok(true);
        }
        if !self.rest_possible(a, p, end) {
            return Ok(false);
        }
        let remaining = k - a - 1;
        let mut q = p + 1;
        while q + remaining <= end {
            if self.start_arm(a + 1, q, end)? {
                return Ok(true);
            }
            q += 1;
        }
        Ok(false)
    }
}
