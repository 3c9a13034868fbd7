//! Arm events `A_{k,σ}(n, N)`: detection, witnesses, landing zones,
//! separated arms and bottlenecks.
//!
//! Arms are vertex-disjoint within each lattice; arms on different lattices
//! never conflict. A dual arm lives in base coordinates (its true position
//! shifted by `(-1/2, -1/2)`), so it connects `∂B_n` to `∂B_N` exactly as a
//! primal arm does. The cyclic order of an arm system is the
//! counterclockwise order of the true positions of its inner endpoints, a
//! primal endpoint preceding a dual one at equal angle.

mod extract;
mod grid;
mod oracle;
mod solve;
mod wedge;

use alloc::vec;
use alloc::vec::Vec;

use crate::color::{Color, ColorSequence};
use crate::config::{Configuration, EdgeSet};
use crate::connectivity::LatticePath;
use crate::lattice::{angle_cmp, boundary_edge_cycle, n0, Annulus, Edge, Lattice, Point2, Vertex};
use crate::Error;

pub use extract::{
    detect_bottleneck, detect_separated, detect_six_arm, extract_canonical_arms, extract_greedy, locate_bottleneck,
    separated_witness, BottleneckWitness,
};
pub use wedge::extremal_arms;
pub use oracle::{detect_arms_oracle, detect_arms_oracle_budget, ORACLE_MAX_RADIUS};

pub(crate) use grid::ArmGrid;
pub(crate) use extract::separated_witness_within;
pub(crate) use solve::DEFAULT_BUDGET;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Arm {
    pub color: Color,
    pub path: LatticePath,
}

impl Arm {
    /// Edges of the arm on its own lattice.
    pub fn edges(&self) -> Vec<Edge> {
        self.path.edges()
    }
}

/// `k` arms listed in sequence order: arm `i` has color `σ_i` and the inner
/// endpoints follow the sequence counterclockwise.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ArmWitness {
    pub annulus: Annulus,
    pub arms: Vec<Arm>,
}

/// Doubled true position of a base-coordinate vertex relative to `center`.
pub(crate) fn true_pos(center: Vertex, v: Vertex, lattice: Lattice) -> Point2 {
    let off = if lattice == Lattice::Dual { 1 } else { 0 };
    Point2::new(2 * (v.x - center.x) as i64 + off, 2 * (v.y - center.y) as i64 + off)
}

impl ArmWitness {
    pub fn colors(&self) -> Vec<Color> {
        self.arms.iter().map(|a| a.color).collect()
    }

    /// Mechanical check of every witness invariant against `cfg`.
    pub fn check(&self, cfg: &Configuration, sigma: &ColorSequence) -> Result<(), Error> {
        self.check_within(cfg, sigma, None)
    }

    /// As [`ArmWitness::check`], additionally requiring every edge to be
    /// readable from `within` (dual edges through the primal edge they cross).
    pub fn check_within(&self, cfg: &Configuration, sigma: &ColorSequence, within: Option<&EdgeSet>) -> Result<(), Error> {
        let a = self.annulus;
        if self.arms.len() != sigma.len() {
            return Err(Error::LengthMismatch);
        }
        for (i, arm) in self.arms.iter().enumerate() {
            if arm.color != sigma.get(i) || arm.path.lattice() != arm.color.lattice() {
                return Err(Error::LatticeMismatch);
            }
            if a.norm(arm.path.start()) != a.inner as i32 || a.norm(arm.path.end()) != a.outer as i32 {
                return Err(Error::ArmNotConnecting);
            }
            if !arm.path.is_simple() {
                return Err(Error::ArmsIntersect);
            }
            for e in arm.edges() {
                if !a.contains_edge(e) {
                    return Err(Error::ArmNotConnecting);
                }
                if !cfg.has_color(e, arm.color)? {
                    return Err(Error::WrongColor);
                }
                if let Some(w) = within {
                    let primal = if e.lattice == Lattice::Dual { crate::lattice::dual_of(e) } else { e };
                    if !w.contains(primal) {
                        return Err(Error::RegionOutsideBox);
                    }
                }
            }
        }
        for i in 0..self.arms.len() {
            for j in i + 1..self.arms.len() {
                let (p, q) = (&self.arms[i].path, &self.arms[j].path);
                if p.lattice() == q.lattice() && p.vertices().iter().any(|v| q.vertices().contains(v)) {
                    return Err(Error::ArmsIntersect);
                }
            }
        }
        let k = self.arms.len();
        let mut order: Vec<usize> = (0..k).collect();
        order.sort_by(|&i, &j| {
            let (p, q) = (&self.arms[i].path, &self.arms[j].path);
            angle_cmp(true_pos(a.center, p.start(), p.lattice()), true_pos(a.center, q.start(), q.lattice()))
                .then((p.lattice() as u8).cmp(&(q.lattice() as u8)))
        });
        let r = order[0];
        if (0..k).any(|j| order[j] != (r + j) % k) {
            return Err(Error::WrongOrder);
        }
        Ok(())
    }
}

/// `k` pairwise edge-disjoint runs of consecutive edges of `∂B(center, radius)`,
/// listed counterclockwise.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LandingSequence {
    pub center: Vertex,
    pub radius: u32,
    intervals: Vec<Vec<Edge>>,
}

impl LandingSequence {
    pub fn new(center: Vertex, radius: u32, intervals: Vec<Vec<Edge>>) -> Result<Self, Error> {
        if radius < 1 || intervals.is_empty() {
            return Err(Error::BadLanding);
        }
        let cycle = boundary_edge_cycle(center, radius);
        let m = cycle.len();
        let mut starts = Vec::with_capacity(intervals.len());
        let mut taken = alloc::vec![false; m];
        for iv in &intervals {
            let mut pos: Vec<usize> = Vec::with_capacity(iv.len());
            for e in iv {
                let p = cycle.iter().position(|c| c == e).ok_or(Error::BadLanding)?;
                if taken[p] {
                    return Err(Error::BadLanding);
                }
                taken[p] = true;
                pos.push(p);
            }
            if pos.is_empty() {
                return Err(Error::BadLanding);
            }
            // contiguous cyclic run: exactly one member lacks its predecessor
            let heads: Vec<usize> =
                pos.iter().copied().filter(|&p| !pos.contains(&((p + m - 1) % m))).collect();
            match heads.len() {
                1 => starts.push(heads[0]),
                0 if pos.len() == m => starts.push(0),
                _ => return Err(Error::BadLanding),
            }
        }
        // counterclockwise: the starts rotate into increasing order
        let k = starts.len();
        let descents = (0..k).filter(|&i| starts[(i + 1) % k] <= starts[i]).count();
        if k > 1 && descents != 1 {
            return Err(Error::BadLanding);
        }
        Ok(LandingSequence { center, radius, intervals })
    }

    /// The whole boundary as a single interval.
    pub fn full(center: Vertex, radius: u32) -> Self {
        LandingSequence { center, radius, intervals: alloc::vec![boundary_edge_cycle(center, radius)] }
    }

    /// Intervals given as `(first edge index, length)` along the
    /// counterclockwise boundary cycle starting at `center + (radius, 0)`.
    pub fn arcs(center: Vertex, radius: u32, arcs: &[(usize, usize)]) -> Result<Self, Error> {
        let cycle = boundary_edge_cycle(center, radius);
        let m = cycle.len();
        let intervals = arcs.iter().map(|&(s, len)| (0..len).map(|i| cycle[(s + i) % m]).collect()).collect();
        LandingSequence::new(center, radius, intervals)
    }

    pub fn intervals(&self) -> &[Vec<Edge>] {
        &self.intervals
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }
}

/// `n0(k) <= n < N`.
pub(crate) fn check_radii(annulus: Annulus, k: usize) -> Result<(), Error> {
    let need = n0(k)?;
    if annulus.inner < need || annulus.inner >= annulus.outer {
        return Err(Error::InvalidRadii { inner: annulus.inner, outer: annulus.outer });
    }
    Ok(())
}

fn to_witness(grid: &ArmGrid, sigma: &ColorSequence, routed: solve::Routed) -> ArmWitness {
    let arms = routed
        .paths
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let c = sigma.get(i);
            let verts = p.iter().map(|&v| grid.vertex(v)).collect();
            Arm { color: c, path: LatticePath::new(c.lattice(), verts).expect("grid path") }
        })
        .collect();
    ArmWitness { annulus: grid.annulus, arms }
}

/// Whether `A_{k,σ}(n, N)` occurs.
pub fn detect_arms(cfg: &Configuration, annulus: Annulus, sigma: &ColorSequence) -> Result<bool, Error> {
    Ok(find_arms(cfg, annulus, sigma)?.is_some())
}

/// An arm system realising `A_{k,σ}(n, N)`, if one exists.
pub fn find_arms(cfg: &Configuration, annulus: Annulus, sigma: &ColorSequence) -> Result<Option<ArmWitness>, Error> {
    find_arms_within(cfg, annulus, sigma, None, DEFAULT_BUDGET)
}

/// `A_{k,σ}(n, N)` for several sequences and outer radii around one
/// center, sharing one grid; `out[i][j]` answers `sigmas[i]` at `outer[j]`.
pub fn detect_arms_nested(
    cfg: &Configuration,
    center: Vertex,
    n: u32,
    outer: &[u32],
    sigmas: &[ColorSequence],
) -> Result<Vec<Vec<bool>>, Error> {
    let Some(&big) = outer.iter().max() else {
        return Ok(vec![Vec::new(); sigmas.len()]);
    };
    for s in sigmas {
        for &m in outer {
            check_radii(Annulus::new(center, n, m)?, s.len())?;
        }
    }
    let mut grid = ArmGrid::new(cfg, Annulus::new(center, n, big)?, None)?;
    let mut radii: Vec<u32> = outer.to_vec();
    radii.sort_unstable();
    radii.dedup();
    let mut out = Vec::with_capacity(sigmas.len());
    for s in sigmas {
        let hit = |grid: &mut ArmGrid, m: u32| -> Result<bool, Error> {
            grid.set_sink_radius(m);
            let mut budget = DEFAULT_BUDGET;
            Ok(solve::solve(grid, s, None, &mut budget)?.is_some())
        };
        // the event is monotone in N: try the largest radius, then binary
        // search for the largest hit
        let (mut lo, mut hi) = (0, radii.len());
        if hit(&mut grid, radii[hi - 1])? {
            lo = hi;
        } else {
            hi -= 1;
        }
        while lo < hi {
            let mid = (lo + hi) / 2;
            if hit(&mut grid, radii[mid])? {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        let reach = if lo == 0 { 0 } else { radii[lo - 1] };
        out.push(outer.iter().map(|&m| m <= reach).collect());
    }
    Ok(out)
}

/// Arm search restricted to edges readable from `within` and bounded by a
/// search budget (exceeding it is reported as [`Error::SearchBudget`]).
pub fn find_arms_within(
    cfg: &Configuration,
    annulus: Annulus,
    sigma: &ColorSequence,
    within: Option<&EdgeSet>,
    budget: u64,
) -> Result<Option<ArmWitness>, Error> {
    check_radii(annulus, sigma.len())?;
    let mut grid = ArmGrid::new(cfg, annulus, within)?;
    let mut budget = budget;
    let routed = solve::solve(&mut grid, sigma, None, &mut budget)?;
    Ok(routed.map(|r| to_witness(&grid, sigma, r)))
}

/// `A_{k,σ}(n, N)` with landing conditions: the arm of color `σ_i` starts in
/// `inner[i]` and ends in `outer[i]`.
pub fn detect_arms_landing(
    cfg: &Configuration,
    annulus: Annulus,
    sigma: &ColorSequence,
    inner: &LandingSequence,
    outer: &LandingSequence,
) -> Result<bool, Error> {
    Ok(find_arms_landing(cfg, annulus, sigma, inner, outer)?.is_some())
}

pub fn find_arms_landing(
    cfg: &Configuration,
    annulus: Annulus,
    sigma: &ColorSequence,
    inner: &LandingSequence,
    outer: &LandingSequence,
) -> Result<Option<ArmWitness>, Error> {
    check_radii(annulus, sigma.len())?;
    if inner.len() != sigma.len()
        || outer.len() != sigma.len()
        || inner.center != annulus.center
        || outer.center != annulus.center
        || inner.radius != annulus.inner
        || outer.radius != annulus.outer
    {
        return Err(Error::BadLanding);
    }
    let mut grid = ArmGrid::new(cfg, annulus, None)?;
    let masks = solve::LandingMasks {
        inner: inner.intervals().iter().map(|iv| grid.mask_of(iv)).collect(),
        outer: outer.intervals().iter().map(|iv| grid.mask_of(iv)).collect(),
    };
    let mut budget = DEFAULT_BUDGET;
    let routed = solve::solve(&mut grid, sigma, Some(&masks), &mut budget)?;
    Ok(routed.map(|r| to_witness(&grid, sigma, r)))
}

#[cfg(test)]
mod tests;
