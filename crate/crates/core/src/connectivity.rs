//! Clusters, shortest paths and crossings for one color inside an edge set.
//!
//! Vertex sets are passed as edge sets: a vertex lies in an edge set when it
//! is an endpoint of one of its edges. Only vertices touched by an edge of the
//! requested color inside `within` take part in the graph.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use crate::color::Color;
use crate::config::Configuration;
use crate::lattice::{Direction, Edge, Lattice, Vertex};
use crate::Error;

/// A nearest-neighbour path on one lattice, stored by its vertices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LatticePath {
    lattice: Lattice,
    vertices: Vec<Vertex>,
}

impl LatticePath {
    pub fn new(lattice: Lattice, vertices: Vec<Vertex>) -> Result<Self, Error> {
        if vertices.is_empty() {
            return Err(Error::Degenerate);
        }
        if vertices.windows(2).any(|w| Edge::between(w[0], w[1], lattice).is_none()) {
            return Err(Error::Degenerate);
        }
        Ok(LatticePath { lattice, vertices })
    }

    pub fn lattice(&self) -> Lattice {
        self.lattice
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn start(&self) -> Vertex {
        self.vertices[0]
    }

    pub fn end(&self) -> Vertex {
        self.vertices[self.vertices.len() - 1]
    }

    /// Number of edges.
    pub fn len(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.len() == 1
    }

    pub fn edges(&self) -> Vec<Edge> {
        self.vertices
            .windows(2)
            .map(|w| Edge::between(w[0], w[1], self.lattice).expect("validated"))
            .collect()
    }

    pub fn reversed(&self) -> LatticePath {
        let mut v = self.vertices.clone();
        v.reverse();
        LatticePath { lattice: self.lattice, vertices: v }
    }

    /// Whether no vertex repeats.
    pub fn is_simple(&self) -> bool {
        let mut v = self.vertices.clone();
        v.sort_unstable();
        v.windows(2).all(|w| w[0] != w[1])
    }
}

/// Dense local graph of the color-`c` edges of an edge set.
struct LocalGraph {
    x0: i32,
    y0: i32,
    w: usize,
    h: usize,
    /// Bit `d` set when the color edge towards direction `d` is present.
    adj: Vec<u8>,
}

impl LocalGraph {
    fn build(cfg: &Configuration, within: &[Edge], c: Color) -> Result<Self, Error> {
        let lattice = c.lattice();
        if within.iter().any(|e| e.lattice != lattice) {
            return Err(Error::LatticeMismatch);
        }
        let (mut x0, mut y0, mut x1, mut y1) = (i32::MAX, i32::MAX, i32::MIN, i32::MIN);
        for e in within {
            let (a, b) = e.endpoints();
            x0 = x0.min(a.x);
            y0 = y0.min(a.y);
            x1 = x1.max(b.x);
            y1 = y1.max(b.y);
        }
        if within.is_empty() {
            return Ok(LocalGraph { x0: 0, y0: 0, w: 0, h: 0, adj: Vec::new() });
        }
        let w = (x1 - x0 + 1) as usize;
        let h = (y1 - y0 + 1) as usize;
        let mut g = LocalGraph { x0, y0, w, h, adj: vec![0; w * h] };
        for &e in within {
            if !cfg.has_color(e, c)? {
                continue;
            }
            let (a, b) = e.endpoints();
            let (ia, ib) = (g.index(a).expect("in range"), g.index(b).expect("in range"));
            let d = match e.orientation {
                crate::lattice::Orientation::Horizontal => Direction::East,
                crate::lattice::Orientation::Vertical => Direction::North,
            };
            g.adj[ia] |= 1 << d as u8;
            g.adj[ib] |= 1 << d.opposite() as u8;
        }
        Ok(g)
    }

    fn index(&self, v: Vertex) -> Option<usize> {
        let (dx, dy) = (v.x - self.x0, v.y - self.y0);
        if dx < 0 || dy < 0 || dx as usize >= self.w || dy as usize >= self.h {
            return None;
        }
        Some(dy as usize * self.w + dx as usize)
    }

    fn vertex(&self, i: usize) -> Vertex {
        Vertex::new(self.x0 + (i % self.w) as i32, self.y0 + (i / self.w) as i32)
    }

    fn neighbor(&self, i: usize, d: Direction) -> usize {
        match d {
            Direction::East => i + 1,
            Direction::North => i + self.w,
            Direction::West => i - 1,
            Direction::South => i - self.w,
        }
    }

    /// Active vertices among the endpoints of `set`, sorted and deduplicated.
    fn members(&self, set: &[Edge], lattice: Lattice) -> Result<Vec<usize>, Error> {
        let mut out = Vec::new();
        for e in set {
            if e.lattice != lattice {
                return Err(Error::LatticeMismatch);
            }
            let (a, b) = e.endpoints();
            for v in [a, b] {
                if let Some(i) = self.index(v) {
                    if self.adj[i] != 0 {
                        out.push(i);
                    }
                }
            }
        }
        out.sort_unstable_by_key(|&i| self.vertex(i));
        out.dedup();
        Ok(out)
    }

    /// Multi-source BFS; returns the parent table (`usize::MAX` = unreached,
    /// `i` itself = root).
    fn bfs(&self, sources: &[usize], mut stop: impl FnMut(usize) -> bool) -> (Vec<usize>, Option<usize>) {
        let mut parent = vec![usize::MAX; self.adj.len()];
        let mut queue = VecDeque::new();
        for &s in sources {
            if parent[s] == usize::MAX {
                parent[s] = s;
                queue.push_back(s);
            }
        }
        while let Some(i) = queue.pop_front() {
            if stop(i) {
                return (parent, Some(i));
            }
            for d in Direction::ALL {
                if self.adj[i] & (1 << d as u8) != 0 {
                    let j = self.neighbor(i, d);
                    if parent[j] == usize::MAX {
                        parent[j] = i;
                        queue.push_back(j);
                    }
                }
            }
        }
        (parent, None)
    }
}

/// Cluster ids of the vertices touched by color edges of an edge set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClusterLabeling {
    pub color: Color,
    /// `(vertex, cluster id)` sorted by vertex; the id is the cluster's
    /// smallest vertex.
    entries: Vec<(Vertex, Vertex)>,
}

impl ClusterLabeling {
    /// Cluster id of `v`, or `None` when `v` has no color edge in the set.
    pub fn id(&self, v: Vertex) -> Option<Vertex> {
        self.entries.binary_search_by_key(&v, |p| p.0).ok().map(|i| self.entries[i].1)
    }

    pub fn same_cluster(&self, a: Vertex, b: Vertex) -> bool {
        matches!((self.id(a), self.id(b)), (Some(x), Some(y)) if x == y)
    }

    pub fn entries(&self) -> &[(Vertex, Vertex)] {
        &self.entries
    }

    pub fn cluster_count(&self) -> usize {
        self.entries.iter().filter(|(v, id)| v == id).count()
    }
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

/// Union-find labeling (path halving, union by size) of the color-`c` edges
/// inside `within`.
pub fn label_clusters(cfg: &Configuration, within: &[Edge], c: Color) -> Result<ClusterLabeling, Error> {
    let lattice = c.lattice();
    if within.iter().any(|e| e.lattice != lattice) {
        return Err(Error::LatticeMismatch);
    }
    let mut verts: Vec<Vertex> = Vec::new();
    let mut colored: Vec<Edge> = Vec::new();
    for &e in within {
        if cfg.has_color(e, c)? {
            let (a, b) = e.endpoints();
            verts.push(a);
            verts.push(b);
            colored.push(e);
        }
    }
    verts.sort_unstable();
    verts.dedup();
    let idx = |v: Vertex| verts.binary_search(&v).expect("endpoint recorded");
    let mut parent: Vec<usize> = (0..verts.len()).collect();
    let mut size = vec![1usize; verts.len()];
    for e in colored {
        let (a, b) = e.endpoints();
        let (ra, rb) = (find(&mut parent, idx(a)), find(&mut parent, idx(b)));
        if ra != rb {
            let (big, small) = if size[ra] >= size[rb] { (ra, rb) } else { (rb, ra) };
            parent[small] = big;
            size[big] += size[small];
        }
    }
    // vertices are sorted, so the first member seen of each root is its minimum
    let mut min_of = vec![usize::MAX; verts.len()];
    let mut entries = Vec::with_capacity(verts.len());
    for i in 0..verts.len() {
        let r = find(&mut parent, i);
        if min_of[r] == usize::MAX {
            min_of[r] = i;
        }
        entries.push((verts[i], verts[min_of[r]]));
    }
    Ok(ClusterLabeling { color: c, entries })
}

/// Whether a color-`c` path inside `within` joins a vertex lying in `from`
/// to a vertex lying in `to`.
pub fn connected(cfg: &Configuration, c: Color, from: &[Edge], to: &[Edge], within: &[Edge]) -> Result<bool, Error> {
    Ok(find_path(cfg, c, from, to, within)?.is_some())
}

/// A shortest color-`c` path from `from` to `to` inside `within`. Sources are
/// seeded in vertex order and neighbours scanned E, N, W, S, so the result
/// is deterministic.
pub fn find_path(
    cfg: &Configuration,
    c: Color,
    from: &[Edge],
    to: &[Edge],
    within: &[Edge],
) -> Result<Option<LatticePath>, Error> {
    let g = LocalGraph::build(cfg, within, c)?;
    let lattice = c.lattice();
    let sources = g.members(from, lattice)?;
    let targets = g.members(to, lattice)?;
    if sources.is_empty() || targets.is_empty() {
        return Ok(None);
    }
    let mut is_target = vec![false; g.adj.len()];
    for &t in &targets {
        is_target[t] = true;
    }
    let (parent, hit) = g.bfs(&sources, |i| is_target[i]);
    let Some(mut i) = hit else { return Ok(None) };
    let mut verts = vec![g.vertex(i)];
    while parent[i] != i {
        i = parent[i];
        verts.push(g.vertex(i));
    }
    verts.reverse();
    Ok(Some(LatticePath { lattice, vertices: verts }))
}

/// Integer rectangle `[x0, x1] × [y0, y1]` in the coordinates of a lattice
/// (dual rectangles use base coordinates).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Rect {
    pub x0: i32,
    pub y0: i32,
    pub x1: i32,
    pub y1: i32,
}

impl Rect {
    pub fn new(x0: i32, y0: i32, x1: i32, y1: i32) -> Result<Self, Error> {
        if x1 <= x0 || y1 <= y0 {
            return Err(Error::Degenerate);
        }
        Ok(Rect { x0, y0, x1, y1 })
    }

    pub fn edges(&self, lattice: Lattice) -> Vec<Edge> {
        let mut out = Vec::new();
        for y in self.y0..=self.y1 {
            for x in self.x0..=self.x1 {
                if x < self.x1 {
                    out.push(Edge::h(x, y).with_lattice(lattice));
                }
                if y < self.y1 {
                    out.push(Edge::v(x, y).with_lattice(lattice));
                }
            }
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CrossDirection {
    /// Left side to right side.
    Horizontal,
    /// Bottom side to top side.
    Vertical,
}

/// Whether a color-`c` path inside the rectangle joins its two opposite sides.
pub fn crossing(cfg: &Configuration, rect: Rect, dir: CrossDirection, c: Color) -> Result<bool, Error> {
    if rect.x1 <= rect.x0 || rect.y1 <= rect.y0 {
        return Err(Error::Degenerate);
    }
    let lattice = c.lattice();
    let within = rect.edges(lattice);
    let g = LocalGraph::build(cfg, &within, c)?;
    let side = |fixed_x: Option<i32>, fixed_y: Option<i32>| -> Vec<usize> {
        (0..g.adj.len())
            .filter(|&i| {
                let v = g.vertex(i);
                g.adj[i] != 0 && fixed_x.is_none_or(|x| v.x == x) && fixed_y.is_none_or(|y| v.y == y)
            })
            .collect()
    };
    let (src, dst) = match dir {
        CrossDirection::Horizontal => (side(Some(rect.x0), None), side(Some(rect.x1), None)),
        CrossDirection::Vertical => (side(None, Some(rect.y0)), side(None, Some(rect.y1))),
    };
    if src.is_empty() || dst.is_empty() {
        return Ok(false);
    }
    let mut is_dst = vec![false; g.adj.len()];
    for &t in &dst {
        is_dst[t] = true;
    }
    Ok(g.bfs(&src, |i| is_dst[i]).1.is_some())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{sample_critical, RngSeed};
    use crate::lattice::BoxRegion;

    #[test]
    fn all_open_single_cluster() {
        let b = BoxRegion::centered(3);
        let cfg = Configuration::all_open(b);
        let l = label_clusters(&cfg, &b.edges(), Color::O).unwrap();
        assert_eq!(l.cluster_count(), 1);
        assert_eq!(l.entries().len(), 49);
        assert_eq!(l.id(Vertex::new(2, 2)), Some(Vertex::new(-3, -3)));
        let c = label_clusters(&cfg, &b.edges(), Color::C).unwrap();
        assert!(c.entries().is_empty());
        assert_eq!(c.id(Vertex::new(0, 0)), None);
    }

    #[test]
    fn path_across_open_box() {
        let b = BoxRegion::centered(3);
        let cfg = Configuration::all_open(b);
        let west: Vec<Edge> = (-3..3).map(|y| Edge::v(-3, y)).collect();
        let east: Vec<Edge> = (-3..3).map(|y| Edge::v(3, y)).collect();
        let p = find_path(&cfg, Color::O, &west, &east, &b.edges()).unwrap().unwrap();
        assert_eq!(p.len(), 6);
        assert_eq!(p.start(), Vertex::new(-3, -3));
        assert!(p.is_simple());
        let closed = Configuration::all_closed(b);
        assert!(!connected(&closed, Color::O, &west, &east, &b.edges()).unwrap());
    }

    #[test]
    fn shared_vertex_connects() {
        let b = BoxRegion::centered(2);
        let cfg = Configuration::all_open(b);
        let from = [Edge::h(0, 0)];
        let to = [Edge::h(1, 0)];
        let p = find_path(&cfg, Color::O, &from, &to, &b.edges()).unwrap().unwrap();
        assert_eq!(p.len(), 0);
    }

    #[test]
    fn mixed_lattices_rejected() {
        let b = BoxRegion::centered(2);
        let cfg = Configuration::all_open(b);
        assert!(label_clusters(&cfg, &[Edge::dual_h(0, 0)], Color::O).is_err());
    }

    #[test]
    fn two_by_one_crossing_is_one_half() {
        let rect = Rect::new(0, 0, 2, 1).unwrap();
        let edges = rect.edges(Lattice::Primal);
        assert_eq!(edges.len(), 7);
        let b = BoxRegion::centered(2);
        let mut hits = 0;
        for code in 0u32..128 {
            let cfg = Configuration::from_fn(b, |e| {
                edges.iter().position(|x| *x == e).is_some_and(|i| code >> i & 1 == 1)
            });
            hits += crossing(&cfg, rect, CrossDirection::Horizontal, Color::O).unwrap() as u32;
        }
        assert_eq!(hits, 64);
    }

    #[test]
    fn crossing_self_duality() {
        for n in 1..=6 {
            let b = BoxRegion::centered(n as u32 + 2);
            let primal = Rect::new(0, 0, n + 1, n).unwrap();
            let dual = Rect::new(0, -1, n, n).unwrap();
            for t in 0..300 {
                let cfg = sample_critical(b, RngSeed::new(11, t));
                let h = crossing(&cfg, primal, CrossDirection::Horizontal, Color::O).unwrap();
                let v = crossing(&cfg, dual, CrossDirection::Vertical, Color::CStar).unwrap();
                assert_ne!(h, v, "n={n} t={t}");
            }
        }
    }

    #[test]
    fn degenerate_rect() {
        assert!(Rect::new(0, 0, 0, 3).is_err());
    }
}
