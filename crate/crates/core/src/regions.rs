//! Regions bounded by two arms and two boundary arcs.
//!
//! The curve `φ(γ1, γ2)` runs out along `γ1`, counterclockwise along `∂B_N`
//! to the end of `γ2`, back in along `γ2`, and clockwise along `∂B_n` to the
//! start of `γ1`. Dual arms are drawn at their true positions and joined to
//! the boundary square by shortest segments. Everything is exact integer
//! arithmetic in doubled coordinates.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use crate::arms::Arm;
use crate::config::{Configuration, EdgeSet};
use crate::connectivity::LatticePath;
use crate::lattice::{dual_of, Annulus, Edge, Lattice, Point2, Vertex};
use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Location {
    Inside,
    On,
    Outside,
}

/// Closed polyline in doubled absolute coordinates, counterclockwise.
/// The last point repeats the first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BoundaryCurve {
    points: Vec<Point2>,
    /// Embedded vertices of the two arms the curve was built from.
    arm_points: Vec<Point2>,
}

fn on_segment(p: Point2, a: Point2, b: Point2) -> bool {
    b.sub(a).cross(p.sub(a)) == 0
        && p.x >= a.x.min(b.x)
        && p.x <= a.x.max(b.x)
        && p.y >= a.y.min(b.y)
        && p.y <= a.y.max(b.y)
}

impl BoundaryCurve {
    /// A curve through `points` (closing point optional). Collinear and
    /// backtracking vertices are removed; fewer than three remaining
    /// vertices or a non-positive area is degenerate.
    pub fn new(points: Vec<Point2>) -> Result<Self, Error> {
        let mut pts = points;
        if pts.len() > 1 && pts.first() == pts.last() {
            pts.pop();
        }
        let pts = simplify(pts);
        if pts.len() < 3 {
            return Err(Error::Degenerate);
        }
        let mut curve = BoundaryCurve { points: pts, arm_points: Vec::new() };
        curve.points.push(curve.points[0]);
        if curve.area2() <= 0 {
            return Err(Error::Degenerate);
        }
        Ok(curve)
    }

    pub fn points(&self) -> &[Point2] {
        &self.points
    }

    /// Vertices of the arms along the curve (empty for a bare polygon).
    pub fn arm_points(&self) -> &[Point2] {
        &self.arm_points
    }

    pub fn is_closed(&self) -> bool {
        self.points.first() == self.points.last()
    }

    fn segments(&self) -> impl Iterator<Item = (Point2, Point2)> + '_ {
        self.points.windows(2).map(|w| (w[0], w[1]))
    }

    /// Twice the signed enclosed area, in doubled units.
    pub fn area2(&self) -> i64 {
        self.segments().map(|(a, b)| a.cross(b)).sum()
    }

    /// Whether no two non-adjacent segments meet.
    pub fn is_simple(&self) -> bool {
        let segs: Vec<(Point2, Point2)> = self.segments().collect();
        let m = segs.len();
        for i in 0..m {
            for j in i + 1..m {
                let adjacent = j == i + 1 || (i == 0 && j == m - 1);
                let (a, b) = segs[i];
                let (c, d) = segs[j];
                if adjacent {
                    // consecutive segments may only fold back onto each other
                    let (u, v) = if j == i + 1 { (b.sub(a), d.sub(c)) } else { (d.sub(c), b.sub(a)) };
                    if u.cross(v) == 0 && u.x * v.x + u.y * v.y < 0 {
                        return false;
                    }
                    continue;
                }
                if segments_meet(a, b, c, d) {
                    return false;
                }
            }
        }
        true
    }

    /// Even-odd location of a point, boundary first.
    pub fn locate(&self, p: Point2) -> Location {
        let mut inside = false;
        for (a, b) in self.segments() {
            if on_segment(p, a, b) {
                return Location::On;
            }
            if (a.y > p.y) != (b.y > p.y) {
                // crossing strictly to the right of p
                let s = b.sub(a).cross(p.sub(a));
                if (s > 0) == (b.y > a.y) {
                    inside = !inside;
                }
            }
        }
        if inside {
            Location::Inside
        } else {
            Location::Outside
        }
    }

    /// Winding number of the curve around `p` (not on the curve).
    pub fn winding_number(&self, p: Point2) -> i32 {
        let mut wn = 0;
        for (a, b) in self.segments() {
            let left = (b.x - a.x) as i128 * (p.y - a.y) as i128 - (p.x - a.x) as i128 * (b.y - a.y) as i128;
            if a.y <= p.y {
                if b.y > p.y && left > 0 {
                    wn += 1;
                }
            } else if b.y <= p.y && left < 0 {
                wn -= 1;
            }
        }
        wn
    }
}

fn orient(a: Point2, b: Point2, c: Point2) -> i64 {
    b.sub(a).cross(c.sub(a)).signum()
}

fn segments_meet(a: Point2, b: Point2, c: Point2, d: Point2) -> bool {
    let (o1, o2, o3, o4) = (orient(a, b, c), orient(a, b, d), orient(c, d, a), orient(c, d, b));
    if o1 != o2 && o3 != o4 && o1 * o2 <= 0 && o3 * o4 <= 0 {
        return true;
    }
    on_segment(c, a, b) || on_segment(d, a, b) || on_segment(a, c, d) || on_segment(b, c, d)
}

/// Repeatedly drops vertices collinear with both cyclic neighbours, which
/// removes duplicates, straight-through vertices and zero-width spikes.
fn simplify(mut pts: Vec<Point2>) -> Vec<Point2> {
    loop {
        let m = pts.len();
        if m < 3 {
            return pts;
        }
        let mut keep = vec![true; m];
        let mut changed = false;
        let mut prev = m - 1;
        for i in 0..m {
            let next = (i + 1) % m;
            if pts[i].sub(pts[prev]).cross(pts[next].sub(pts[i])) == 0 {
                keep[i] = false;
                changed = true;
                // neighbours are re-examined next round
                break;
            }
            prev = i;
        }
        if !changed {
            return pts;
        }
        let mut j = 0;
        pts.retain(|_| {
            j += 1;
            keep[j - 1]
        });
    }
}

/// Where an arm endpoint `p` meets the square of doubled radius `r` around
/// `c`. Points on the square are kept, points outside are clamped, and
/// points inside are moved half a step along `dir`, the arm's outward step.
fn project(c: Point2, p: Point2, dir: Point2, r: i64) -> Point2 {
    let (x, y) = (p.x - c.x, p.y - c.y);
    let m = x.abs().max(y.abs());
    let z = if m >= r {
        Point2::new(x.clamp(-r, r), y.clamp(-r, r))
    } else {
        let (u, v) = (x + dir.x.signum(), y + dir.y.signum());
        if u.abs().max(v.abs()) == r {
            Point2::new(u, v)
        } else if x.abs() >= y.abs() {
            Point2::new(if x < 0 { -r } else { r }, y)
        } else {
            Point2::new(x, if y < 0 { -r } else { r })
        }
    };
    Point2::new(z.x + c.x, z.y + c.y)
}

/// Position along the square perimeter counterclockwise from `(r, 0)`.
fn perimeter(q: Point2, r: i64) -> i64 {
    let (x, y) = (q.x, q.y);
    if x == r && y >= 0 {
        y
    } else if y == r {
        r + (r - x)
    } else if x == -r {
        3 * r + (r - y)
    } else if y == -r {
        5 * r + (x + r)
    } else {
        7 * r + (y + r)
    }
}

/// Corners strictly between `p` and `q` going counterclockwise. When the
/// two points coincide the arc is empty, or the whole square if `full`.
fn arc(c: Point2, p: Point2, q: Point2, r: i64, full: bool) -> Vec<Point2> {
    let rel = |z: Point2| Point2::new(z.x - c.x, z.y - c.y);
    let (tp, tq) = (perimeter(rel(p), r), perimeter(rel(q), r));
    let mut len = (tq - tp).rem_euclid(8 * r);
    if len == 0 && full {
        len = 8 * r;
    }
    let corners = [(r, Point2::new(r, r)), (3 * r, Point2::new(-r, r)), (5 * r, Point2::new(-r, -r)), (7 * r, Point2::new(r, -r))];
    let mut out: Vec<(i64, Point2)> = corners
        .iter()
        .map(|&(t, z)| ((t - tp).rem_euclid(8 * r), z))
        .filter(|&(d, _)| d > 0 && d < len)
        .collect();
    out.sort_by_key(|&(d, _)| d);
    out.into_iter().map(|(_, z)| Point2::new(z.x + c.x, z.y + c.y)).collect()
}

/// Part of an arm from its last visit to `∂B_n` to the first visit to
/// `∂B_N` after that, so that it meets each boundary once.
fn trim(path: &LatticePath, annulus: Annulus) -> Vec<Vertex> {
    let vs = path.vertices();
    let (n, big) = (annulus.inner as i32, annulus.outer as i32);
    let from = vs.iter().rposition(|v| annulus.norm(*v) == n).unwrap_or(0);
    let to = vs[from..].iter().position(|v| annulus.norm(*v) == big).map_or(vs.len() - 1, |i| from + i);
    vs[from..=to].to_vec()
}

fn check_arm(path: &LatticePath, annulus: Annulus) -> Result<(), Error> {
    if annulus.norm(path.start()) != annulus.inner as i32 || annulus.norm(path.end()) != annulus.outer as i32 {
        return Err(Error::ArmNotConnecting);
    }
    if path.edges().iter().any(|e| !annulus.contains_edge(*e)) {
        return Err(Error::ArmNotConnecting);
    }
    Ok(())
}

/// The counterclockwise curve `φ(γ1, γ2)`.
pub fn build_boundary(g1: &LatticePath, g2: &LatticePath, annulus: Annulus) -> Result<BoundaryCurve, Error> {
    check_arm(g1, annulus)?;
    check_arm(g2, annulus)?;
    if g1.lattice() == g2.lattice() && g1.vertices().iter().any(|v| g2.vertices().contains(v)) {
        return Err(Error::ArmsIntersect);
    }
    let c = annulus.center.embed2(Lattice::Primal);
    let (rn, rbig) = (2 * annulus.inner as i64, 2 * annulus.outer as i64);
    let pts1: Vec<Point2> = trim(g1, annulus).iter().map(|v| v.embed2(g1.lattice())).collect();
    let pts2: Vec<Point2> = trim(g2, annulus).iter().map(|v| v.embed2(g2.lattice())).collect();
    // both have at least two vertices since n < N
    let (m1, m2) = (pts1.len(), pts2.len());
    let s1 = project(c, pts1[0], pts1[1].sub(pts1[0]), rn);
    let e1 = project(c, pts1[m1 - 1], pts1[m1 - 1].sub(pts1[m1 - 2]), rbig);
    let s2 = project(c, pts2[0], pts2[1].sub(pts2[0]), rn);
    let e2 = project(c, pts2[m2 - 1], pts2[m2 - 1].sub(pts2[m2 - 2]), rbig);
    // arms leaving the same boundary point: γ2 right after γ1 means no arc
    let after = |a: Point2, b: Point2| a.sub(c).cross(b.sub(c)) > 0;
    let mut pts = vec![s1];
    pts.extend_from_slice(&pts1);
    pts.push(e1);
    pts.extend(arc(c, e1, e2, rbig, !after(pts1[m1 - 2], pts2[m2 - 2])));
    pts.push(e2);
    pts.extend(pts2.iter().rev());
    pts.push(s2);
    let mut inner = arc(c, s1, s2, rn, !after(pts1[1], pts2[1]));
    inner.reverse();
    pts.extend(inner);
    let mut curve = BoundaryCurve::new(pts)?;
    curve.arm_points = pts1.into_iter().chain(pts2).collect();
    Ok(curve)
}

/// An edge set `S` cut out by a boundary curve.
#[derive(Clone, Debug)]
pub struct Region {
    pub annulus: Annulus,
    pub curve: BoundaryCurve,
    interior: EdgeSet,
    edges: EdgeSet,
}

impl Region {
    /// `S`: interior edges plus the boundary-arc edges, minus the excluded.
    pub fn edges(&self) -> &EdgeSet {
        &self.edges
    }

    /// Edges whose midpoints lie strictly inside the curve.
    pub fn interior(&self) -> &EdgeSet {
        &self.interior
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Whether `S` is connected as a graph of edges sharing endpoints.
    pub fn is_connected(&self) -> bool {
        edge_set_connected(&self.edges)
    }
}

pub(crate) fn edge_set_connected(s: &EdgeSet) -> bool {
    let edges = s.to_vec();
    let Some(&first) = edges.first() else { return true };
    let mut seen = EdgeSet::new(s.region());
    seen.insert(first).expect("inside");
    let mut queue = VecDeque::from([first]);
    let mut count = 1;
    while let Some(e) = queue.pop_front() {
        let (a, b) = e.endpoints();
        for v in [a, b] {
            for f in incident(v) {
                if s.contains(f) && !seen.contains(f) {
                    seen.insert(f).expect("inside");
                    count += 1;
                    queue.push_back(f);
                }
            }
        }
    }
    count == edges.len()
}

fn incident(v: Vertex) -> [Edge; 4] {
    [Edge::h(v.x, v.y), Edge::v(v.x, v.y), Edge::h(v.x - 1, v.y), Edge::v(v.x, v.y - 1)]
}

/// Region of the edges of `B_N` enclosed by `curve`, with the boundary-arc
/// edges of `∂B_n` and `∂B_N` lying on the curve, minus `exclude`.
pub fn region_of(curve: &BoundaryCurve, annulus: Annulus, exclude: &[Edge]) -> Result<Region, Error> {
    if !curve.is_closed() || curve.points.len() < 4 {
        return Err(Error::Degenerate);
    }
    let bx = annulus.outer_box();
    let mut interior = EdgeSet::new(bx);
    let mut edges = EdgeSet::new(bx);
    let segs: Vec<(Point2, Point2)> = curve.segments().collect();
    let r = annulus.outer as i32;
    let c = annulus.center;
    let (lox, loy, side) = (2 * (c.x - r) as i64 - 4, 2 * (c.y - r) as i64 - 4, 4 * r as i64 + 9);
    let cell = |p: Point2| -> usize {
        let (x, y) = (p.x - lox, p.y - loy);
        if x < 0 || y < 0 || x >= side || y >= side {
            usize::MAX
        } else {
            (y * side + x) as usize
        }
    };
    let mut on_curve = vec![false; (side * side) as usize];
    for &(a, b) in &segs {
        let d = b.sub(a);
        let g = gcd(d.x.unsigned_abs(), d.y.unsigned_abs()).max(1) as i64;
        for t in 0..=g {
            let p = Point2::new(a.x + d.x / g * t, a.y + d.y / g * t);
            let i = cell(p);
            if i != usize::MAX {
                on_curve[i] = true;
            }
        }
    }
    // scan rows of doubled y; horizontal edges sit on even rows, vertical on odd
    for yy in (2 * (c.y - r)) as i64..=(2 * (c.y + r)) as i64 {
        let mut xs: Vec<(i64, i64)> = Vec::new();
        for &(a, b) in &segs {
            if (a.y > yy) != (b.y > yy) {
                // x = a.x + (yy - a.y)(b.x - a.x)/(b.y - a.y), kept as a fraction
                let (mut num, mut den) = (a.x * (b.y - a.y) + (yy - a.y) * (b.x - a.x), b.y - a.y);
                if den < 0 {
                    (num, den) = (-num, -den);
                }
                xs.push((num, den));
            }
        }
        let row_edges: Vec<(Edge, i64)> = if yy % 2 == 0 {
            let y = (yy / 2) as i32;
            (c.x - r..c.x + r).map(|x| (Edge::h(x, y), 2 * x as i64 + 1)).collect()
        } else {
            let y = ((yy - 1) / 2) as i32;
            if y >= c.y + r {
                continue;
            }
            (c.x - r..=c.x + r).map(|x| (Edge::v(x, y), 2 * x as i64)).collect()
        };
        for (e, mx) in row_edges {
            let m = Point2::new(mx, yy);
            let on = on_curve.get(cell(m)).copied().unwrap_or(false);
            if on {
                let (p, q) = e.endpoints();
                let (np, nq) = (annulus.norm(p), annulus.norm(q));
                let on_arc = (np == nq) && (np == annulus.inner as i32 || np == annulus.outer as i32);
                if on_arc && !exclude.contains(&e) {
                    edges.insert(e)?;
                }
                continue;
            }
            let right = xs.iter().filter(|&&(num, den)| num as i128 > mx as i128 * den as i128).count();
            if right % 2 == 1 {
                interior.insert(e)?;
                if !exclude.contains(&e) {
                    edges.insert(e)?;
                }
            }
        }
    }
    Ok(Region { annulus, curve: curve.clone(), interior, edges })
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Straight primal ray from `∂B_n` to `∂B_N` along direction `(dx, dy)`.
pub fn axis_arm(annulus: Annulus, dx: i32, dy: i32) -> Result<LatticePath, Error> {
    if dx.abs() + dy.abs() != 1 {
        return Err(Error::Degenerate);
    }
    let (n, big) = (annulus.inner as i32, annulus.outer as i32);
    let c = annulus.center;
    LatticePath::new(Lattice::Primal, (n..=big).map(|i| Vertex::new(c.x + i * dx, c.y + i * dy)).collect())
}

/// Upper half of the annulus: the region swept counterclockwise from the
/// eastern ray to the western one.
pub fn half_annulus(annulus: Annulus) -> Result<Region, Error> {
    let curve = build_boundary(&axis_arm(annulus, 1, 0)?, &axis_arm(annulus, -1, 0)?, annulus)?;
    region_of(&curve, annulus, &[])
}

/// `U`: the region between `γ_{k-1}` and `γ_1` that contains no other arm,
/// i.e. the one swept counterclockwise from `γ_{k-1}` to `γ_1`, without the
/// primal edges either arm reads.
pub fn complement_region(cfg: &Configuration, annulus: Annulus, arms: &[Arm]) -> Result<Region, Error> {
    if arms.len() < 2 {
        return Err(Error::Degenerate);
    }
    for a in arms {
        if a.path.lattice() != a.color.lattice() {
            return Err(Error::LatticeMismatch);
        }
        for e in a.edges() {
            if !cfg.has_color(e, a.color)? {
                return Err(Error::WrongColor);
            }
        }
    }
    let first = &arms[0].path;
    let last = &arms[arms.len() - 1].path;
    let curve = build_boundary(last, first, annulus)?;
    // statuses the two arms rest on, including stretches dropped from the
    // curve where an arm touches a boundary more than once
    let mut exclude: Vec<Edge> = [first, last]
        .iter()
        .flat_map(|p| p.edges())
        .map(|e| if e.lattice == Lattice::Primal { e } else { dual_of(e) })
        .collect();
    exclude.sort_unstable();
    exclude.dedup();
    let region = region_of(&curve, annulus, &exclude)?;
    for a in &arms[1..arms.len() - 1] {
        let p = a.path.vertices()[a.path.len() / 2].embed2(a.path.lattice());
        if curve.locate(p) == Location::Inside {
            return Err(Error::WrongOrder);
        }
    }
    Ok(region)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::BoxRegion;

    fn straight(lattice: Lattice, from: Vertex, step: (i32, i32), len: usize) -> LatticePath {
        let vs = (0..=len as i32).map(|i| Vertex::new(from.x + i * step.0, from.y + i * step.1)).collect();
        LatticePath::new(lattice, vs).unwrap()
    }

    fn brute_inside(curve: &BoundaryCurve, e: Edge) -> bool {
        curve.winding_number(e.midpoint2()) != 0 && curve.locate(e.midpoint2()) != Location::On
    }

    #[test]
    fn upper_half_region() {
        let a = Annulus::centered(1, 4).unwrap();
        let east = straight(Lattice::Primal, Vertex::new(1, 0), (1, 0), 3);
        let west = straight(Lattice::Primal, Vertex::new(-1, 0), (-1, 0), 3);
        assert_eq!(axis_arm(a, 1, 0).unwrap(), east);
        let curve = build_boundary(&east, &west, a).unwrap();
        assert!(curve.is_closed());
        assert!(curve.is_simple());
        let s = region_of(&curve, a, &[]).unwrap();
        assert_eq!(half_annulus(a).unwrap().edges(), s.edges());
        let expect: Vec<Edge> = BoxRegion::centered(4)
            .edges()
            .into_iter()
            .filter(|e| {
                let m = e.midpoint2();
                m.y > 0 && m.x.abs() < 8 && m.y < 8 && m.x.abs().max(m.y) > 2
            })
            .collect();
        assert_eq!(s.interior().to_vec(), expect);
        // upper halves of both boundary squares
        let arcs: Vec<Edge> = s.edges().iter().filter(|e| !s.interior().contains(*e)).collect();
        assert_eq!(arcs.len(), 4 + 16);
        assert!(s.is_connected());
    }

    #[test]
    fn swapped_arms_partition() {
        let a = Annulus::centered(1, 4).unwrap();
        let east = straight(Lattice::Primal, Vertex::new(1, 0), (1, 0), 3);
        let north = straight(Lattice::Primal, Vertex::new(0, 1), (0, 1), 3);
        let s1 = region_of(&build_boundary(&east, &north, a).unwrap(), a, &[]).unwrap();
        let s2 = region_of(&build_boundary(&north, &east, a).unwrap(), a, &[]).unwrap();
        let arm_edges: Vec<Edge> = east.edges().into_iter().chain(north.edges()).collect();
        for e in a.edges() {
            let count = s1.edges().contains(e) as u8 + s2.edges().contains(e) as u8 + arm_edges.contains(&e) as u8;
            assert_eq!(count, 1, "{e}");
        }
    }

    #[test]
    fn dual_arms_and_winding_agree() {
        let a = Annulus::centered(2, 8).unwrap();
        let east = straight(Lattice::Dual, Vertex::new(2, 0), (1, 0), 6);
        let west = straight(Lattice::Dual, Vertex::new(-2, -1), (-1, 0), 6);
        let north = straight(Lattice::Primal, Vertex::new(0, 2), (0, 1), 6);
        for (g1, g2) in [(&east, &west), (&west, &east), (&east, &north), (&north, &west)] {
            let curve = build_boundary(g1, g2, a).unwrap();
            assert!(curve.is_simple());
            let s = region_of(&curve, a, &[]).unwrap();
            for e in a.outer_box().edges() {
                assert_eq!(s.interior().contains(e), brute_inside(&curve, e), "{e}");
            }
        }
    }

    fn assert_sane(g1: &LatticePath, g2: &LatticePath, a: Annulus) -> Region {
        let curve = build_boundary(g1, g2, a).unwrap();
        let s = region_of(&curve, a, &[]).unwrap();
        for e in a.outer_box().edges() {
            assert_eq!(s.interior().contains(e), brute_inside(&curve, e), "{e}");
        }
        for e in s.edges().iter() {
            assert!(a.contains_edge(e) || a.outer_box().edges().contains(&e), "{e} outside the annulus");
        }
        s
    }

    #[test]
    fn dual_start_at_inner_corner() {
        let a = Annulus::centered(2, 8).unwrap();
        let west = straight(Lattice::Primal, Vertex::new(-2, -2), (-1, 0), 6);
        let south = straight(Lattice::Dual, Vertex::new(-2, -2), (0, -1), 6);
        let small = assert_sane(&west, &south, a);
        let big = assert_sane(&south, &west, a);
        assert!(build_boundary(&west, &south, a).unwrap().is_simple());
        assert!(build_boundary(&south, &west, a).unwrap().is_simple());
        assert!(small.len() < big.len());
        // nothing inside B_n
        assert!(small.edges().iter().chain(big.edges().iter()).all(|e| a.norm(e.endpoints().0).max(a.norm(e.endpoints().1)) >= 2));
    }

    #[test]
    fn arms_sharing_a_corner_point() {
        let a = Annulus::centered(2, 8).unwrap();
        let up = straight(Lattice::Primal, Vertex::new(2, 2), (0, 1), 6);
        let right = straight(Lattice::Dual, Vertex::new(2, 2), (1, 0), 6);
        // the dual arm leaves below the primal one, so ccw from `up` to
        // `right` goes three quarters of the way round
        let big = assert_sane(&up, &right, a);
        let small = assert_sane(&right, &up, a);
        assert!(small.edges().contains(Edge::h(5, 5)) && !big.edges().contains(Edge::h(5, 5)));
        assert!(big.edges().contains(Edge::h(-5, 0)) && !small.edges().contains(Edge::h(-5, 0)));
        assert!(big.edges().contains(Edge::v(3, -5)));
        assert!(small.len() < big.len());
    }

    #[test]
    fn arm_revisiting_inner_boundary() {
        let a = Annulus::centered(2, 8).unwrap();
        let mut vs = vec![Vertex::new(2, 1), Vertex::new(3, 1), Vertex::new(3, 2), Vertex::new(2, 2)];
        vs.extend((3..=8).map(|y| Vertex::new(2, y)));
        let hook = LatticePath::new(Lattice::Primal, vs).unwrap();
        let west = straight(Lattice::Primal, Vertex::new(-2, 0), (-1, 0), 6);
        assert!(build_boundary(&hook, &west, a).unwrap().is_simple());
        assert_sane(&hook, &west, a);
        assert_sane(&west, &hook, a);
    }

    #[test]
    fn complement_excludes_dropped_hooks() {
        use crate::arms::Arm;
        use crate::color::Color;
        let a = Annulus::centered(2, 8).unwrap();
        let mut vs = vec![Vertex::new(2, 1), Vertex::new(3, 1), Vertex::new(3, 2), Vertex::new(2, 2)];
        vs.extend((3..=8).map(|y| Vertex::new(2, y)));
        let hook = LatticePath::new(Lattice::Primal, vs).unwrap();
        let west = straight(Lattice::Dual, Vertex::new(-2, 0), (-1, 0), 6);
        let closed: Vec<Edge> = west.edges().into_iter().map(dual_of).collect();
        let cfg = Configuration::from_fn(BoxRegion::centered(9), |e| !closed.contains(&e));
        let arms = [Arm { color: Color::O, path: hook.clone() }, Arm { color: Color::CStar, path: west.clone() }];
        for pair in [[arms[0].clone(), arms[1].clone()], [arms[1].clone(), arms[0].clone()]] {
            let u = complement_region(&cfg, a, &pair).unwrap();
            assert!(!u.is_empty());
            assert!(hook.edges().iter().chain(&closed).all(|e| !u.edges().contains(*e)));
        }
    }

    #[test]
    fn unit_square_has_empty_interior() {
        let a = Annulus::centered(1, 4).unwrap();
        let sq = BoundaryCurve::new(vec![Point2::new(0, 0), Point2::new(2, 0), Point2::new(2, 2), Point2::new(0, 2)]).unwrap();
        assert!(region_of(&sq, a, &[]).unwrap().interior().is_empty());
        assert!(BoundaryCurve::new(vec![Point2::new(0, 0), Point2::new(2, 0), Point2::new(4, 0)]).is_err());
    }

    #[test]
    fn crossing_arms_rejected() {
        let a = Annulus::centered(1, 4).unwrap();
        let east = straight(Lattice::Primal, Vertex::new(1, 0), (1, 0), 3);
        assert_eq!(build_boundary(&east, &east, a), Err(Error::ArmsIntersect));
        let short = straight(Lattice::Primal, Vertex::new(1, 0), (1, 0), 2);
        assert_eq!(build_boundary(&short, &east, a), Err(Error::ArmNotConnecting));
    }
}
