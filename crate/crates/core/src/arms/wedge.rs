//! Extremal arms inside angular wedges.
//!
//! The annulus is cut into `k` open sectors by rays through evenly spaced
//! points of `∂B_N`. The arm in the first sector is the counterclockwise-most
//! one and the arm in sector `k - 1` the clockwise-most one, both found by a
//! depth-first search that always tries the extreme turn first. Such a search
//! only reads edges on the far side of the arm it returns, which makes the
//! region between those two arms (through the last sector) measurable with
//! respect to the edges outside it.

use alloc::vec;
use alloc::vec::Vec;

use super::grid::ArmGrid;
use super::{check_radii, true_pos, Arm};
use crate::color::{Color, ColorSequence};
use crate::config::Configuration;
use crate::connectivity::LatticePath;
use crate::flow::step;
use crate::lattice::{boundary_cycle, strictly_in_sector, Annulus, Lattice, Point2};
use crate::Error;

pub(crate) struct Wedges {
    rays: Vec<Point2>,
}

impl Wedges {
    pub fn new(annulus: Annulus, k: usize) -> Wedges {
        let ring = boundary_cycle(annulus.center, annulus.outer);
        let m = ring.len();
        let rays = (0..k).map(|i| true_pos(annulus.center, ring[i * m / k], Lattice::Primal)).collect();
        Wedges { rays }
    }

    /// Whether the doubled relative point `p` is strictly inside sector `i`.
    pub fn contains(&self, i: usize, p: Point2) -> bool {
        let k = self.rays.len();
        strictly_in_sector(self.rays[i], self.rays[(i + 1) % k], p)
    }
}

/// Outward normal of the ring side holding `p` (doubled relative position).
/// At a corner the side met first when turning in the preferred direction
/// wins.
fn outward(p: Point2, left_first: bool) -> u8 {
    let (ax, ay) = (p.x.abs(), p.y.abs());
    if ax > ay {
        return if p.x > 0 { 0 } else { 2 };
    }
    if ay > ax {
        return if p.y > 0 { 1 } else { 3 };
    }
    // corner: sides listed counterclockwise around it
    let (before, after) = match (p.x > 0, p.y > 0) {
        (true, true) => (0, 1),
        (false, true) => (1, 2),
        (false, false) => (2, 3),
        (true, false) => (3, 0),
    };
    if left_first {
        before
    } else {
        after
    }
}

/// Extreme arm of color `c` inside sector `i`, as grid cells.
fn extremal(grid: &mut ArmGrid, wedges: &Wedges, i: usize, c: Color, left_first: bool) -> Result<Option<Vec<usize>>, Error> {
    let lattice = c.lattice();
    let center = grid.annulus.center;
    let inside: Vec<bool> =
        (0..grid.len()).map(|v| wedges.contains(i, true_pos(center, grid.vertex(v), lattice))).collect();
    let mut sites: Vec<(usize, Point2)> = grid
        .sites
        .iter()
        .filter(|s| s.lattice == lattice && inside[s.local])
        .map(|s| (s.local, s.pos))
        .collect();
    if left_first {
        sites.reverse();
    }
    let w = grid.w;
    let r = grid.r;
    let adj = grid.adj(c)?.to_vec();
    let turns: [u8; 3] = if left_first { [1, 0, 3] } else { [3, 0, 1] };
    let mut visited = vec![false; grid.len()];
    for (s, pos) in sites {
        if visited[s] {
            continue;
        }
        visited[s] = true;
        let mut stack: Vec<(usize, u8, usize)> = vec![(s, outward(pos, left_first), 0)];
        while let Some(top) = stack.last_mut() {
            let v = top.0;
            if grid.norm(v) == r {
                return Ok(Some(stack.iter().map(|t| t.0).collect()));
            }
            if top.2 == 3 {
                stack.pop();
                continue;
            }
            let d = (top.1 + turns[top.2]) % 4;
            top.2 += 1;
            if adj[v] & (1 << d) != 0 {
                let u = step(w, v, d);
                if inside[u] && !visited[u] {
                    visited[u] = true;
                    stack.push((u, d, 0));
                }
            }
        }
    }
    Ok(None)
}

/// Arms `γ_1, ..., γ_{k-1}` of colors `σ_1, ..., σ_{k-1}`, one per sector:
/// `γ_1` counterclockwise-most in its sector, `γ_{k-1}` clockwise-most in
/// its sector, the middle ones clockwise-most too. Needs `k >= 3`.
pub fn extremal_arms(cfg: &Configuration, annulus: Annulus, sigma: &ColorSequence) -> Result<Option<Vec<Arm>>, Error> {
    let k = sigma.len();
    if k < 3 {
        return Err(Error::Degenerate);
    }
    check_radii(annulus, k)?;
    let mut grid = ArmGrid::new(cfg, annulus, None)?;
    let wedges = Wedges::new(annulus, k);
    let mut arms = Vec::with_capacity(k - 1);
    for i in 0..k - 1 {
        let c = sigma.get(i);
        // middle arms: any arm works, the clockwise-most is as good as any
        let left_first = i == 0;
        let Some(cells) = extremal(&mut grid, &wedges, i, c, left_first)? else { return Ok(None) };
        let verts = cells.iter().map(|&v| grid.vertex(v)).collect();
        arms.push(Arm { color: c, path: LatticePath::new(c.lattice(), verts).expect("grid path") });
    }
    Ok(Some(arms))
}
