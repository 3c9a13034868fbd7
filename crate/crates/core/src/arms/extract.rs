//! Deterministic arm extraction, ℓ-separated witnesses and bottlenecks.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use super::grid::ArmGrid;
use super::{check_radii, find_arms_within, true_pos, Arm, ArmWitness, DEFAULT_BUDGET};
use crate::color::{Color, ColorSequence};
use crate::config::{Configuration, EdgeSet};
use crate::connectivity::LatticePath;
use crate::flow::step;
use crate::lattice::{point_set_distance2, Annulus, BoxRegion, Edge, Lattice, Point2};
use crate::Error;

/// BFS-shortest arm from `s` avoiding `used`; neighbours scanned E, N, W, S.
fn shortest_arm(grid: &ArmGrid, c: Color, s: usize, used: &[bool]) -> Option<Vec<usize>> {
    let adj = grid.built(c);
    let mut parent = vec![usize::MAX; grid.len()];
    parent[s] = s;
    let mut queue = VecDeque::from([s]);
    while let Some(v) = queue.pop_front() {
        if grid.norm(v) == grid.r {
            let mut path = vec![v];
            let mut x = v;
            while parent[x] != x {
                x = parent[x];
                path.push(x);
            }
            path.reverse();
            return Some(path);
        }
        for d in 0..4u8 {
            if adj[v] & (1 << d) != 0 {
                let u = step(grid.w, v, d);
                if parent[u] == usize::MAX && !used[u] {
                    parent[u] = v;
                    queue.push_back(u);
                }
            }
        }
    }
    None
}

/// Counterclockwise sweep: arm `order[j]` takes the first admissible site at
/// or after `max(previous + 1, hint[j])` whose shortest arm avoids the arms
/// already drawn on its lattice. Positions run over one revolution from
/// `start`.
fn sweep(
    grid: &ArmGrid,
    sigma: &ColorSequence,
    reach: &[Vec<bool>; 4],
    order: &[usize],
    start: usize,
    hints: Option<&[usize]>,
) -> Option<Vec<(usize, Vec<usize>)>> {
    let k = order.len();
    let total = grid.sites.len();
    let end = start + total;
    let mut used = [vec![false; grid.len()], vec![false; grid.len()]];
    let mut out: Vec<(usize, Vec<usize>)> = vec![(0, Vec::new()); k];
    let mut pos = start;
    for j in 0..k {
        let arm = order[j];
        let c = sigma.get(arm);
        let lat = c.lattice() as usize;
        let from = hints.map_or(pos, |h| pos.max(h[j]));
        let mut found = None;
        let mut p = from;
        while p + (k - 1 - j) < end {
            let s = grid.sites[p % total];
            if s.lattice == c.lattice() && !used[lat][s.local] && reach[c as usize][s.local] {
                if let Some(path) = shortest_arm(grid, c, s.local, &used[lat]) {
                    found = Some((p, path));
                    break;
                }
            }
            p += 1;
        }
        let (p, path) = found?;
        for &v in &path {
            used[lat][v] = true;
        }
        out[arm] = (p % total, path);
        pos = p + 1;
    }
    Some(out)
}

fn prepared<'a>(
    cfg: &'a Configuration,
    annulus: Annulus,
    sigma: &ColorSequence,
    within: Option<&'a EdgeSet>,
) -> Result<(ArmGrid<'a>, [Vec<bool>; 4]), Error> {
    check_radii(annulus, sigma.len())?;
    let mut grid = ArmGrid::new(cfg, annulus, within)?;
    let outer = grid.outer_ring();
    let mut reach: [Vec<bool>; 4] = Default::default();
    for c in Color::ALL {
        if sigma.colors().contains(&c) {
            reach[c as usize] = grid.site_reach(c, &outer)?;
        }
    }
    Ok((grid, reach))
}

fn witness_of(grid: &ArmGrid, sigma: &ColorSequence, arms: Vec<(usize, Vec<usize>)>) -> ArmWitness {
    let arms = arms
        .into_iter()
        .enumerate()
        .map(|(i, (_, p))| {
            let c = sigma.get(i);
            Arm { color: c, path: LatticePath::new(c.lattice(), p.iter().map(|&v| grid.vertex(v)).collect()).expect("grid path") }
        })
        .collect();
    ArmWitness { annulus: grid.annulus, arms }
}

/// The pure greedy sweep from the east axis, trying every distinct rotation
/// and then later starting sites. May miss events the exact detector sees.
pub fn extract_greedy(cfg: &Configuration, annulus: Annulus, sigma: &ColorSequence) -> Result<Option<ArmWitness>, Error> {
    let (grid, reach) = prepared(cfg, annulus, sigma, None)?;
    let k = sigma.len();
    let rotations = sigma.distinct_rotations();
    for start in 0..grid.sites.len() {
        for &r in &rotations {
            let order: Vec<usize> = (0..k).map(|j| (r + j) % k).collect();
            if let Some(arms) = sweep(&grid, sigma, &reach, &order, start, None) {
                return Ok(Some(witness_of(&grid, sigma, arms)));
            }
        }
    }
    Ok(None)
}

/// Deterministic arm collection: the greedy sweep when it succeeds, else the
/// exact detector's routed witness. `None` exactly when the event fails.
pub fn extract_canonical_arms(cfg: &Configuration, annulus: Annulus, sigma: &ColorSequence) -> Result<Option<ArmWitness>, Error> {
    if let Some(w) = extract_greedy(cfg, annulus, sigma)? {
        return Ok(Some(w));
    }
    find_arms_within(cfg, annulus, sigma, None, DEFAULT_BUDGET)
}

/// Doubled true endpoint positions of the arm edges lying in `zone`.
pub(crate) fn zone_cloud(arm: &Arm, zone: Annulus) -> Vec<Point2> {
    let mut pts = Vec::new();
    for e in arm.edges() {
        if zone.contains_edge(e) {
            let (a, b) = e.endpoints();
            pts.push(true_pos(zone.center, a, e.lattice));
            pts.push(true_pos(zone.center, b, e.lattice));
        }
    }
    pts.sort_unstable();
    pts.dedup();
    pts
}

/// Every pair of arms at ℓ∞ distance at least `ell` inside `zone`.
pub(crate) fn is_separated(w: &ArmWitness, zone: Annulus, ell: u32) -> bool {
    let clouds: Vec<Vec<Point2>> = w.arms.iter().map(|a| zone_cloud(a, zone)).collect();
    for i in 0..clouds.len() {
        for j in i + 1..clouds.len() {
            if clouds[i].is_empty() || clouds[j].is_empty() {
                return false;
            }
            if point_set_distance2(&clouds[i], &clouds[j]) < 2 * ell as i64 {
                return false;
            }
        }
    }
    true
}

pub(crate) fn separation_zone(annulus: Annulus) -> Result<Annulus, Error> {
    annulus.separation_zone().ok_or(Error::InvalidRadii { inner: 2 * annulus.inner, outer: annulus.outer / 2 })
}

/// First ℓ-separated witness among a fixed list of candidates: the greedy
/// sweep, sweeps with sites spread evenly around the ring at eight phases,
/// and the exact detector's witness. A lower bound for the separated event.
pub fn separated_witness(
    cfg: &Configuration,
    annulus: Annulus,
    sigma: &ColorSequence,
    ell: u32,
) -> Result<Option<ArmWitness>, Error> {
    separated_witness_within(cfg, annulus, sigma, ell, None)
}

pub(crate) fn separated_witness_within(
    cfg: &Configuration,
    annulus: Annulus,
    sigma: &ColorSequence,
    ell: u32,
    within: Option<&EdgeSet>,
) -> Result<Option<ArmWitness>, Error> {
    if ell < 5 {
        return Err(Error::SeparationTooSmall(ell));
    }
    let zone = separation_zone(annulus)?;
    let (grid, reach) = prepared(cfg, annulus, sigma, within)?;
    let k = sigma.len();
    let total = grid.sites.len();
    let rotations = sigma.distinct_rotations();
    for phase in 0..8usize {
        let start = phase * total / 8;
        for &r in &rotations {
            let order: Vec<usize> = (0..k).map(|j| (r + j) % k).collect();
            let hints: Vec<usize> = (0..k).map(|j| start + j * total / k).collect();
            for h in [None, Some(hints.as_slice())] {
                if let Some(arms) = sweep(&grid, sigma, &reach, &order, start, h) {
                    let w = witness_of(&grid, sigma, arms);
                    if k == 1 || is_separated(&w, zone, ell) {
                        return Ok(Some(w));
                    }
                }
            }
        }
    }
    if let Some(w) = find_arms_within(cfg, annulus, sigma, within, DEFAULT_BUDGET)? {
        if k == 1 || is_separated(&w, zone, ell) {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

/// Witness-based (lower-bound) detection of the ℓ-separated event: arms
/// pairwise at distance at least `ell` inside `B(2n, N/2)`.
pub fn detect_separated(cfg: &Configuration, annulus: Annulus, sigma: &ColorSequence, ell: u32) -> Result<bool, Error> {
    Ok(separated_witness(cfg, annulus, sigma, ell)?.is_some())
}

/// A separation failure located at an edge `e`, with the four-arm check on
/// the annulus `B(e, inner, outer)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BottleneckWitness {
    pub edge: Edge,
    /// ℓ∞ distance from `e` to `∂B_n`.
    pub d: u32,
    pub inner: u32,
    pub outer: u32,
    /// Indices of the two arms that come closest.
    pub pair: (usize, usize),
    pub colors: (Color, Color),
    /// Whether two disjoint arms of each color cross `B(e, inner, outer)` in
    /// the order `(c1, c1, c2, c2)`.
    pub verified: bool,
}

/// Locates the bottleneck of a non-separated arm system, verified or not.
/// `None` when the event fails, the arms are separated, or no edge of the
/// zone admits a non-degenerate four-arm annulus.
pub fn locate_bottleneck(
    cfg: &Configuration,
    annulus: Annulus,
    sigma: &ColorSequence,
    ell: u32,
) -> Result<Option<BottleneckWitness>, Error> {
    if ell < 5 {
        return Err(Error::SeparationTooSmall(ell));
    }
    let zone = separation_zone(annulus)?;
    if sigma.len() < 2 || detect_separated(cfg, annulus, sigma, ell)? {
        return Ok(None);
    }
    let Some(w) = extract_canonical_arms(cfg, annulus, sigma)? else { return Ok(None) };
    let clouds: Vec<Vec<Point2>> = w.arms.iter().map(|a| zone_cloud(a, zone)).collect();
    let mut best: Option<(i64, usize, usize)> = None;
    for i in 0..clouds.len() {
        for j in i + 1..clouds.len() {
            if clouds[i].is_empty() || clouds[j].is_empty() {
                continue;
            }
            let d = point_set_distance2(&clouds[i], &clouds[j]);
            if best.is_none_or(|b| d < b.0) {
                best = Some((d, i, j));
            }
        }
    }
    let Some((_, i, j)) = best else { return Ok(None) };
    // closest pair of points
    let (mut p, mut q, mut dbest) = (clouds[i][0], clouds[j][0], i64::MAX);
    for &a in &clouds[i] {
        for &b in &clouds[j] {
            let d = a.linf(b);
            if d < dbest {
                (p, q, dbest) = (a, b, d);
            }
        }
    }
    // candidate primal edges around the closest pair (true coords = doubled / 2)
    let c = annulus.center;
    let lo_x = (p.x.min(q.x)).div_euclid(2) as i32 - 1 + c.x;
    let hi_x = (p.x.max(q.x) + 1).div_euclid(2) as i32 + 1 + c.x;
    let lo_y = (p.y.min(q.y)).div_euclid(2) as i32 - 1 + c.y;
    let hi_y = (p.y.max(q.y) + 1).div_euclid(2) as i32 + 1 + c.y;
    let mut chosen: Option<(i64, Edge)> = None;
    for y in lo_y..=hi_y {
        for x in lo_x..=hi_x {
            for e in [Edge::h(x, y), Edge::v(x, y)] {
                if !zone.contains_edge(e) {
                    continue;
                }
                let (a, b) = e.endpoints();
                let ends = [true_pos(c, a, Lattice::Primal), true_pos(c, b, Lattice::Primal)];
                let s = point_set_distance2(&ends, &clouds[i]) + point_set_distance2(&ends, &clouds[j]);
                if chosen.is_none_or(|(t, f)| s < t || (s == t && e < f)) {
                    chosen = Some((s, e));
                }
            }
        }
    }
    let Some((_, e)) = chosen else { return Ok(None) };
    let (a, b) = e.endpoints();
    let d = (annulus.norm(a).min(annulus.norm(b)) - annulus.inner as i32) as u32;
    let outer = d / 2;
    let colors = (w.arms[i].color, w.arms[j].color);
    let mut verified = false;
    if outer > ell && cfg.region().contains_box(&BoxRegion::new(e.base, outer + 1)) {
        let four = ColorSequence::new(vec![colors.0, colors.0, colors.1, colors.1])?;
        let around = Annulus::new(e.base, ell, outer)?;
        verified = super::detect_arms(cfg, around, &four)?;
    }
    Ok(Some(BottleneckWitness { edge: e, d, inner: ell, outer, pair: (i, j), colors, verified }))
}

/// A bottleneck whose four-arm event has been verified.
pub fn detect_bottleneck(
    cfg: &Configuration,
    annulus: Annulus,
    sigma: &ColorSequence,
    ell: u32,
) -> Result<Option<BottleneckWitness>, Error> {
    Ok(locate_bottleneck(cfg, annulus, sigma, ell)?.filter(|b| b.verified))
}

/// The alternating six-arm event `(O, C*, O, C*, O, C*)` on `B(e, r1, r2)`.
pub fn detect_six_arm(cfg: &Configuration, e: Edge, r1: u32, r2: u32) -> Result<bool, Error> {
    let annulus = Annulus::new(e.base, r1, r2)?;
    let six = ColorSequence::new(vec![Color::O, Color::CStar, Color::O, Color::CStar, Color::O, Color::CStar])?;
    super::detect_arms(cfg, annulus, &six)
}
