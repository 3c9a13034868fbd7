//! Geometry of Z^2 and its dual.
//!
//! A dual vertex is stored by its integer base `b`; its position in the plane
//! is `b + (1/2, 1/2)`. Equivalently, the integer coordinates of a dual object
//! are the coordinates of its translate by `(-1/2, -1/2)`, which is exactly the
//! "shifted" sense in which dual arms connect boundaries. All geometric
//! predicates work in doubled integer coordinates so no floating point is
//! involved.

use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vertex {
    pub x: i32,
    pub y: i32,
}

impl Vertex {
    pub const ORIGIN: Vertex = Vertex { x: 0, y: 0 };

    #[inline]
    pub const fn new(x: i32, y: i32) -> Self {
        Vertex { x, y }
    }

    /// ℓ∞ distance between two vertices of the same lattice.
    #[inline]
    pub fn linf(self, other: Vertex) -> i32 {
        (self.x - other.x).abs().max((self.y - other.y).abs())
    }

    #[inline]
    pub fn step(self, dir: Direction) -> Vertex {
        let (dx, dy) = dir.delta();
        Vertex::new(self.x + dx, self.y + dy)
    }

    /// Doubled embedded coordinates of this vertex on `lattice`.
    #[inline]
    pub fn embed2(self, lattice: Lattice) -> Point2 {
        match lattice {
            Lattice::Primal => Point2::new(2 * self.x as i64, 2 * self.y as i64),
            Lattice::Dual => Point2::new(2 * self.x as i64 + 1, 2 * self.y as i64 + 1),
        }
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// A point of the plane in doubled coordinates (true position = value / 2).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point2 {
    pub x: i64,
    pub y: i64,
}

impl Point2 {
    #[inline]
    pub const fn new(x: i64, y: i64) -> Self {
        Point2 { x, y }
    }

    #[inline]
    pub fn linf(self, other: Point2) -> i64 {
        (self.x - other.x).abs().max((self.y - other.y).abs())
    }

    #[inline]
    pub fn sub(self, other: Point2) -> Point2 {
        Point2::new(self.x - other.x, self.y - other.y)
    }

    #[inline]
    pub fn cross(self, other: Point2) -> i64 {
        self.x * other.y - self.y * other.x
    }
}

/// Compass directions in counterclockwise order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[repr(u8)]
pub enum Direction {
    East = 0,
    North = 1,
    West = 2,
    South = 3,
}

impl Direction {
    pub const ALL: [Direction; 4] = [Direction::East, Direction::North, Direction::West, Direction::South];

    #[inline]
    pub fn delta(self) -> (i32, i32) {
        match self {
            Direction::East => (1, 0),
            Direction::North => (0, 1),
            Direction::West => (-1, 0),
            Direction::South => (0, -1),
        }
    }

    #[inline]
    pub fn from_index(i: u8) -> Direction {
        Direction::ALL[(i & 3) as usize]
    }

    /// Rotation by `quarter_turns` counterclockwise.
    #[inline]
    pub fn rotate(self, quarter_turns: u8) -> Direction {
        Direction::from_index(self as u8 + quarter_turns)
    }

    #[inline]
    pub fn opposite(self) -> Direction {
        self.rotate(2)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Orientation {
    Horizontal,
    Vertical,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Lattice {
    Primal,
    Dual,
}

impl Lattice {
    #[inline]
    pub fn other(self) -> Lattice {
        match self {
            Lattice::Primal => Lattice::Dual,
            Lattice::Dual => Lattice::Primal,
        }
    }
}

/// A lattice edge in canonical form: the base is the lexicographically
/// smaller endpoint, so a horizontal edge spans `base -> base + (1,0)` and a
/// vertical one `base -> base + (0,1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub base: Vertex,
    pub orientation: Orientation,
    pub lattice: Lattice,
}

impl Edge {
    #[inline]
    pub const fn new(base: Vertex, orientation: Orientation, lattice: Lattice) -> Self {
        Edge { base, orientation, lattice }
    }

    #[inline]
    pub const fn h(x: i32, y: i32) -> Self {
        Edge::new(Vertex::new(x, y), Orientation::Horizontal, Lattice::Primal)
    }

    #[inline]
    pub const fn v(x: i32, y: i32) -> Self {
        Edge::new(Vertex::new(x, y), Orientation::Vertical, Lattice::Primal)
    }

    #[inline]
    pub const fn dual_h(x: i32, y: i32) -> Self {
        Edge::new(Vertex::new(x, y), Orientation::Horizontal, Lattice::Dual)
    }

    #[inline]
    pub const fn dual_v(x: i32, y: i32) -> Self {
        Edge::new(Vertex::new(x, y), Orientation::Vertical, Lattice::Dual)
    }

    /// Edge joining two nearest neighbours of the same lattice.
    pub fn between(a: Vertex, b: Vertex, lattice: Lattice) -> Option<Edge> {
        let (lo, hi) = if (a.y, a.x) <= (b.y, b.x) { (a, b) } else { (b, a) };
        match (hi.x - lo.x, hi.y - lo.y) {
            (1, 0) => Some(Edge::new(lo, Orientation::Horizontal, lattice)),
            (0, 1) => Some(Edge::new(lo, Orientation::Vertical, lattice)),
            _ => None,
        }
    }

    #[inline]
    pub fn endpoints(self) -> (Vertex, Vertex) {
        let far = match self.orientation {
            Orientation::Horizontal => Vertex::new(self.base.x + 1, self.base.y),
            Orientation::Vertical => Vertex::new(self.base.x, self.base.y + 1),
        };
        (self.base, far)
    }

    /// Doubled embedded endpoints.
    #[inline]
    pub fn embed2(self) -> (Point2, Point2) {
        let (a, b) = self.endpoints();
        (a.embed2(self.lattice), b.embed2(self.lattice))
    }

    /// Doubled embedded midpoint.
    #[inline]
    pub fn midpoint2(self) -> Point2 {
        let (a, b) = self.embed2();
        Point2::new((a.x + b.x) / 2, (a.y + b.y) / 2)
    }

    /// The same base and orientation read on the other lattice.
    #[inline]
    pub fn with_lattice(self, lattice: Lattice) -> Edge {
        Edge { lattice, ..self }
    }

    /// Key of the global deterministic edge order: `(y, x, horizontal < vertical)`.
    #[inline]
    pub fn order_key(self) -> (i32, i32, Orientation, Lattice) {
        (self.base.y, self.base.x, self.orientation, self.lattice)
    }
}

impl Ord for Edge {
    fn cmp(&self, other: &Self) -> Ordering {
        self.order_key().cmp(&other.order_key())
    }
}

impl PartialOrd for Edge {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let o = match self.orientation {
            Orientation::Horizontal => 'H',
            Orientation::Vertical => 'V',
        };
        let star = if self.lattice == Lattice::Dual { "*" } else { "" };
        write!(f, "{}{} {} {}", o, star, self.base.x, self.base.y)
    }
}

/// The edge of the other lattice crossing `e` at its midpoint.
#[inline]
pub fn dual_of(e: Edge) -> Edge {
    let Vertex { x, y } = e.base;
    match (e.lattice, e.orientation) {
        (Lattice::Primal, Orientation::Horizontal) => Edge::dual_v(x, y - 1),
        (Lattice::Primal, Orientation::Vertical) => Edge::dual_h(x - 1, y),
        (Lattice::Dual, Orientation::Vertical) => Edge::h(x, y + 1),
        (Lattice::Dual, Orientation::Horizontal) => Edge::v(x + 1, y),
    }
}

/// `e* - (1/2, 1/2)`: the primal edge a shifted configuration reads `e` from.
pub fn shift_source(e: Edge) -> Result<Edge, Error> {
    if e.lattice != Lattice::Primal {
        return Err(Error::LatticeMismatch);
    }
    Ok(shift_source_unchecked(e))
}

/// `e* + (1/2, 1/2)`, the inverse of [`shift_source`].
pub fn shift_target(e: Edge) -> Result<Edge, Error> {
    if e.lattice != Lattice::Primal {
        return Err(Error::LatticeMismatch);
    }
    Ok(shift_target_unchecked(e))
}

#[inline]
pub(crate) fn shift_source_unchecked(e: Edge) -> Edge {
    let Vertex { x, y } = e.base;
    match e.orientation {
        Orientation::Horizontal => Edge::v(x, y - 1),
        Orientation::Vertical => Edge::h(x - 1, y),
    }
}

#[inline]
pub(crate) fn shift_target_unchecked(e: Edge) -> Edge {
    let Vertex { x, y } = e.base;
    match e.orientation {
        Orientation::Horizontal => Edge::v(x + 1, y),
        Orientation::Vertical => Edge::h(x, y + 1),
    }
}

/// A box `B(center, radius)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BoxRegion {
    pub center: Vertex,
    pub radius: u32,
}

impl BoxRegion {
    pub const fn new(center: Vertex, radius: u32) -> Self {
        BoxRegion { center, radius }
    }

    pub const fn centered(radius: u32) -> Self {
        BoxRegion { center: Vertex::ORIGIN, radius }
    }

    #[inline]
    pub fn contains_vertex(&self, v: Vertex) -> bool {
        v.linf(self.center) <= self.radius as i32
    }

    /// Whether both endpoints of the (integer-coordinate) edge lie in the box.
    #[inline]
    pub fn contains_edge(&self, e: Edge) -> bool {
        let (a, b) = e.endpoints();
        self.contains_vertex(a) && self.contains_vertex(b)
    }

    pub fn contains_box(&self, other: &BoxRegion) -> bool {
        other.center.linf(self.center) + other.radius as i32 <= self.radius as i32
    }

    /// All primal edges of the box in canonical order.
    pub fn edges(&self) -> Vec<Edge> {
        let r = self.radius as i32;
        let Vertex { x: cx, y: cy } = self.center;
        let mut out = Vec::with_capacity(self.edge_count());
        for y in cy - r..=cy + r {
            for x in cx - r..=cx + r {
                if x < cx + r {
                    out.push(Edge::h(x, y));
                }
                if y < cy + r {
                    out.push(Edge::v(x, y));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        let w = 2 * self.radius as usize + 1;
        2 * w * (w - 1)
    }
}

/// An annulus `B(center, inner, outer) = B(center, outer) \ B(center, inner)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Annulus {
    pub center: Vertex,
    pub inner: u32,
    pub outer: u32,
}

impl Annulus {
    pub fn new(center: Vertex, inner: u32, outer: u32) -> Result<Self, Error> {
        if inner >= outer {
            return Err(Error::InvalidRadii { inner, outer });
        }
        Ok(Annulus { center, inner, outer })
    }

    pub fn centered(inner: u32, outer: u32) -> Result<Self, Error> {
        Annulus::new(Vertex::ORIGIN, inner, outer)
    }

    pub fn outer_box(&self) -> BoxRegion {
        BoxRegion::new(self.center, self.outer)
    }

    pub fn inner_box(&self) -> BoxRegion {
        BoxRegion::new(self.center, self.inner)
    }

    /// ℓ∞ norm of `v` relative to the center.
    #[inline]
    pub fn norm(&self, v: Vertex) -> i32 {
        v.linf(self.center)
    }

    /// Membership of an integer-coordinate edge in `B(outer) \ B(inner)`.
    #[inline]
    pub fn contains_edge(&self, e: Edge) -> bool {
        let (a, b) = e.endpoints();
        let (na, nb) = (self.norm(a), self.norm(b));
        na.max(nb) <= self.outer as i32 && na.max(nb) > self.inner as i32
    }

    /// Primal annulus edges in canonical order.
    pub fn edges(&self) -> Vec<Edge> {
        self.outer_box().edges().into_iter().filter(|e| self.contains_edge(*e)).collect()
    }

    /// The sub-annulus `B(2n, floor(N/2))`, if non-degenerate.
    pub fn separation_zone(&self) -> Option<Annulus> {
        Annulus::new(self.center, 2 * self.inner, self.outer / 2).ok()
    }
}

/// `∂B(x, n)`: primal edges with both endpoints at ℓ∞ distance exactly `n`.
pub fn boundary_edges(center: Vertex, n: u32) -> Result<Vec<Edge>, Error> {
    if n < 1 {
        return Err(Error::InvalidRadii { inner: 0, outer: n });
    }
    let b = BoxRegion::new(center, n);
    Ok(b.edges()
        .into_iter()
        .filter(|e| {
            let (p, q) = e.endpoints();
            p.linf(center) == n as i32 && q.linf(center) == n as i32
        })
        .collect())
}

/// Smallest `n` with `|∂B(n)| = 8n >= k`.
pub fn n0(k: usize) -> Result<u32, Error> {
    if k < 1 {
        return Err(Error::EmptySequence);
    }
    Ok(k.div_ceil(8) as u32)
}

/// Minimum ℓ∞ distance between embedded endpoints of two edge sets.
pub fn set_distance(a: &[Edge], b: &[Edge]) -> Result<f64, Error> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptyEdgeSet);
    }
    let pa = endpoint_cloud(a);
    let pb = endpoint_cloud(b);
    Ok(point_set_distance2(&pa, &pb) as f64 / 2.0)
}

pub(crate) fn endpoint_cloud(edges: &[Edge]) -> Vec<Point2> {
    let mut pts: Vec<Point2> = edges
        .iter()
        .flat_map(|e| {
            let (p, q) = e.embed2();
            [p, q]
        })
        .collect();
    pts.sort_unstable();
    pts.dedup();
    pts
}

/// Doubled ℓ∞ distance between two point clouds.
pub(crate) fn point_set_distance2(a: &[Point2], b: &[Point2]) -> i64 {
    let mut best = i64::MAX;
    for p in a {
        for q in b {
            let d = p.linf(*q);
            if d < best {
                best = d;
                if best == 0 {
                    return 0;
                }
            }
        }
    }
    best
}

/// Dense index of the primal edges of a box, in canonical `(y, x, H<V)` order.
///
/// Slot `2 * (row * width + col) + o` holds the edge with base at local
/// position `(col, row)` and orientation `o` (0 = horizontal). Slots for the
/// horizontal edges of the last column and vertical edges of the last row are
/// never valid edges.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct EdgeIndexer {
    pub region: BoxRegion,
    width: usize,
}

impl EdgeIndexer {
    pub fn new(region: BoxRegion) -> Self {
        EdgeIndexer { region, width: 2 * region.radius as usize + 1 }
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn slots(&self) -> usize {
        2 * self.width * self.width
    }

    /// Slot of a primal edge lying in the box.
    #[inline]
    pub fn index(&self, e: Edge) -> Option<usize> {
        let r = self.region.radius as i32;
        let col = e.base.x - self.region.center.x + r;
        let row = e.base.y - self.region.center.y + r;
        let last = 2 * r;
        if col < 0 || row < 0 || col > last || row > last {
            return None;
        }
        let o = match e.orientation {
            Orientation::Horizontal => {
                if col == last {
                    return None;
                }
                0
            }
            Orientation::Vertical => {
                if row == last {
                    return None;
                }
                1
            }
        };
        Some(2 * (row as usize * self.width + col as usize) + o)
    }

    #[inline]
    pub fn is_valid_slot(&self, slot: usize) -> bool {
        let cell = slot / 2;
        let (row, col) = (cell / self.width, cell % self.width);
        if slot.is_multiple_of(2) {
            col + 1 < self.width
        } else {
            row + 1 < self.width
        }
    }

    #[inline]
    pub fn edge(&self, slot: usize) -> Edge {
        let cell = slot / 2;
        let r = self.region.radius as i32;
        let x = (cell % self.width) as i32 - r + self.region.center.x;
        let y = (cell / self.width) as i32 - r + self.region.center.y;
        if slot.is_multiple_of(2) {
            Edge::h(x, y)
        } else {
            Edge::v(x, y)
        }
    }

    /// Valid slots in canonical order.
    pub fn valid_slots(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.slots()).filter(move |s| self.is_valid_slot(*s))
    }
}

/// Exact counterclockwise angular order of doubled points around the origin,
/// starting from the positive x axis. The origin itself sorts first.
pub fn angle_cmp(a: Point2, b: Point2) -> Ordering {
    fn half(p: Point2) -> u8 {
        // [0, pi) and the origin -> 0, [pi, 2pi) -> 1
        if p.y > 0 || (p.y == 0 && p.x >= 0) {
            0
        } else {
            1
        }
    }
    let (ha, hb) = (half(a), half(b));
    if ha != hb {
        return ha.cmp(&hb);
    }
    // same half-plane: a before b iff cross(a, b) > 0
    0.cmp(&a.cross(b))
}

/// Whether `p` lies strictly inside the open counterclockwise sector that
/// sweeps from ray `from` to ray `to` (all relative to the origin).
pub fn strictly_in_sector(from: Point2, to: Point2, p: Point2) -> bool {
    if p.x == 0 && p.y == 0 {
        return false;
    }
    let dot = |q: Point2| from.x * q.x + from.y * q.y;
    let on_from = |q: Point2| from.cross(q) == 0 && dot(q) > 0;
    // half-turn index of q measured from `from`
    let half = |q: Point2| -> u8 {
        let c = from.cross(q);
        if c > 0 || (c == 0 && dot(q) > 0) {
            0
        } else {
            1
        }
    };
    if on_from(p) {
        return false;
    }
    if on_from(to) {
        return true;
    }
    let (hp, ht) = (half(p), half(to));
    if hp != ht {
        hp < ht
    } else {
        p.cross(to) > 0
    }
}

/// Vertices of `∂B(center, n)` in counterclockwise order starting at
/// `center + (n, 0)`.
pub fn boundary_cycle(center: Vertex, n: u32) -> Vec<Vertex> {
    let n = n as i32;
    let mut out = Vec::with_capacity(8 * n as usize);
    let mut p = Vertex::new(n, 0);
    let legs = [(Direction::North, n), (Direction::West, 2 * n), (Direction::South, 2 * n), (Direction::East, 2 * n), (Direction::North, n)];
    for (d, len) in legs {
        for _ in 0..len {
            out.push(Vertex::new(center.x + p.x, center.y + p.y));
            p = p.step(d);
        }
    }
    out
}

/// Edges of `∂B(center, n)` in counterclockwise order; edge `i` joins
/// vertices `i` and `i + 1` of [`boundary_cycle`].
pub fn boundary_edge_cycle(center: Vertex, n: u32) -> Vec<Edge> {
    let v = boundary_cycle(center, n);
    (0..v.len()).map(|i| Edge::between(v[i], v[(i + 1) % v.len()], Lattice::Primal).expect("adjacent")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dual_of_examples() {
        assert_eq!(dual_of(Edge::h(0, 0)), Edge::dual_v(0, -1));
        assert_eq!(dual_of(Edge::v(0, 0)), Edge::dual_h(-1, 0));
        for e in BoxRegion::centered(5).edges() {
            assert_eq!(dual_of(dual_of(e)), e);
            let d = dual_of(e);
            assert_eq!(d.lattice, Lattice::Dual);
            assert_eq!(d.midpoint2(), e.midpoint2());
            assert_ne!(d.orientation, e.orientation);
        }
    }

    #[test]
    fn shift_examples() {
        assert_eq!(shift_source(Edge::h(0, 0)).unwrap(), Edge::v(0, -1));
        assert_eq!(shift_source(Edge::v(1, 0)).unwrap(), Edge::h(0, 0));
        assert!(shift_source(Edge::dual_h(0, 0)).is_err());
        assert!(shift_target(Edge::dual_v(0, 0)).is_err());
        for e in BoxRegion::centered(5).edges() {
            assert_eq!(shift_target(shift_source(e).unwrap()).unwrap(), e);
            assert_eq!(shift_source(shift_target(e).unwrap()).unwrap(), e);
            let once = shift_source(e).unwrap();
            assert_ne!(once.orientation, e.orientation);
            if e.orientation == Orientation::Horizontal {
                let twice = shift_source(once).unwrap();
                assert_eq!(twice, Edge::h(e.base.x - 1, e.base.y - 1));
            }
        }
    }

    #[test]
    fn shift_source_is_dual_translated() {
        // e* - (1/2,1/2): translate embedded dual endpoints by (-1,-1) in doubled coords
        for e in BoxRegion::centered(3).edges() {
            let (a, b) = dual_of(e).embed2();
            let (p, q) = shift_source(e).unwrap().embed2();
            let mut lhs = [Point2::new(a.x - 1, a.y - 1), Point2::new(b.x - 1, b.y - 1)];
            let mut rhs = [p, q];
            lhs.sort();
            rhs.sort();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn boundary_cycle_is_ccw_ring() {
        for n in 1..6u32 {
            let c = Vertex::new(2, -1);
            let v = boundary_cycle(c, n);
            assert_eq!(v.len(), 8 * n as usize);
            assert_eq!(v[0], Vertex::new(2 + n as i32, -1));
            for w in v.windows(2) {
                assert!(angle_cmp(Point2::new((w[0].x - 2) as i64, (w[0].y + 1) as i64), Point2::new((w[1].x - 2) as i64, (w[1].y + 1) as i64)) != Ordering::Greater);
            }
            let mut e = boundary_edge_cycle(c, n);
            e.sort();
            let mut b = boundary_edges(c, n).unwrap();
            b.sort();
            assert_eq!(e, b);
        }
    }

    #[test]
    fn boundary_sizes() {
        assert_eq!(boundary_edges(Vertex::ORIGIN, 1).unwrap().len(), 8);
        assert_eq!(boundary_edges(Vertex::ORIGIN, 2).unwrap().len(), 16);
        for n in 1..=64 {
            let c = Vertex::new(3, -2);
            let bd = boundary_edges(c, n).unwrap();
            assert_eq!(bd.len(), 8 * n as usize);
            let b = BoxRegion::new(c, n);
            assert!(bd.iter().all(|e| b.contains_edge(*e)));
        }
        assert!(boundary_edges(Vertex::ORIGIN, 0).is_err());
    }

    #[test]
    fn n0_examples() {
        assert_eq!(n0(3).unwrap(), 1);
        assert_eq!(n0(8).unwrap(), 1);
        assert_eq!(n0(9).unwrap(), 2);
        assert!(n0(0).is_err());
    }

    #[test]
    fn set_distance_examples() {
        let a = [Edge::h(0, 0)];
        let b = [Edge::h(3, 0)];
        assert_eq!(set_distance(&a, &a).unwrap(), 0.0);
        assert_eq!(set_distance(&a, &b).unwrap(), 2.0);
        assert_eq!(set_distance(&b, &a).unwrap(), 2.0);
        assert_eq!(set_distance(&a, &[Edge::dual_h(0, 0)]).unwrap(), 0.5);
        assert!(set_distance(&a, &[]).is_err());
    }

    #[test]
    fn annulus_partition() {
        for (n, big) in [(1u32, 4u32), (2, 6), (3, 3 + 5)] {
            let ann = Annulus::centered(n, big).unwrap();
            let inner = BoxRegion::centered(n).edges();
            let ring = ann.edges();
            let all = BoxRegion::centered(big).edges();
            assert_eq!(inner.len() + ring.len(), all.len());
            assert!(ring.iter().all(|e| !inner.contains(e)));
        }
        assert!(Annulus::centered(4, 4).is_err());
    }

    #[test]
    fn indexer_matches_canonical_order() {
        let b = BoxRegion::new(Vertex::new(2, -1), 3);
        let ix = EdgeIndexer::new(b);
        let edges = b.edges();
        let from_slots: Vec<Edge> = ix.valid_slots().map(|s| ix.edge(s)).collect();
        assert_eq!(edges, from_slots);
        let mut sorted = edges.clone();
        sorted.sort();
        assert_eq!(sorted, edges);
        for (i, s) in ix.valid_slots().enumerate() {
            assert_eq!(ix.index(edges[i]), Some(s));
        }
        assert_eq!(ix.index(Edge::h(5, 0)), None);
    }

    #[test]
    fn angle_order_is_counterclockwise() {
        let pts = [
            Point2::new(1, 0),
            Point2::new(1, 1),
            Point2::new(0, 1),
            Point2::new(-1, 1),
            Point2::new(-1, 0),
            Point2::new(-1, -1),
            Point2::new(0, -1),
            Point2::new(1, -1),
        ];
        for i in 0..pts.len() {
            for j in 0..pts.len() {
                assert_eq!(angle_cmp(pts[i], pts[j]), i.cmp(&j));
            }
        }
    }

    #[test]
    fn sector_membership() {
        let e = Point2::new(1, 0);
        let n = Point2::new(0, 1);
        assert!(strictly_in_sector(e, n, Point2::new(1, 1)));
        assert!(!strictly_in_sector(e, n, Point2::new(1, 0)));
        assert!(!strictly_in_sector(e, n, Point2::new(0, 3)));
        assert!(!strictly_in_sector(e, n, Point2::new(-1, -1)));
        // reflex sector from north around to east
        assert!(strictly_in_sector(n, e, Point2::new(-1, -1)));
        assert!(!strictly_in_sector(n, e, Point2::new(1, 1)));
    }
}
