//! Exact arm-event decision by site embedding plus disjoint-path routing.
//!
//! An arm system is a choice of inner sites, one per arm, whose
//! counterclockwise order matches the color sequence, together with
//! vertex-disjoint paths (per lattice) from each site to the outer boundary.
//! Sites are enumerated in increasing counterclockwise position for every
//! distinct rotation of the sequence. A partial choice is extended only
//! while the arms already placed on each lattice can still be routed: a
//! subset of a routable set stays routable, so pruning is exact.
//!
//! Routing on one lattice groups arms by (color, sink set). A group is a
//! unit vertex-capacity flow problem. Groups of one lattice may not share
//! vertices; a shared vertex is resolved by branching on which group must
//! avoid it, which is complete. A group that cannot avoid it at all forces
//! the other one off it without a branch.
//!
//! Without landing zones, cheap steps run first: a greedy witness, and the
//! same routing with sites left free. The latter is necessary, and decides
//! the event outright when the colors have a single cyclic arrangement.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use super::grid::ArmGrid;
use crate::color::{Color, ColorSequence};
use crate::flow::{Flow, Network, Scratch, SINK, SOURCE};
use crate::lattice::Lattice;
use crate::Error;

/// Per-arm restrictions for the landing variant: allowed inner vertices and
/// the arm's own sink set, as grid masks.
pub(crate) struct LandingMasks {
    pub inner: Vec<Vec<bool>>,
    pub outer: Vec<Vec<bool>>,
}

/// A routed arm system: per arm (in sequence order) its local vertex path.
pub(crate) struct Routed {
    pub paths: Vec<Vec<usize>>,
}

struct Plan {
    colors: Vec<Color>,
    /// `cand[arm][site]`
    cand: Vec<Vec<bool>>,
    /// Sink mask per group.
    sinks: Vec<Vec<bool>>,
    group_color: Vec<Color>,
    group_of: Vec<usize>,
}

pub(crate) const DEFAULT_BUDGET: u64 = 2_000_000;

pub(crate) fn solve(
    grid: &mut ArmGrid,
    sigma: &ColorSequence,
    landing: Option<&LandingMasks>,
    budget: &mut u64,
) -> Result<Option<Routed>, Error> {
    let k = sigma.len();
    let colors = sigma.colors().to_vec();
    for &c in &colors {
        grid.adj(c)?;
    }
    let outer = grid.outer_ring();
    let (sinks, group_of, group_color) = match landing {
        None => {
            // one group per color
            let mut gc: Vec<Color> = Vec::new();
            let mut go = Vec::with_capacity(k);
            for &c in &colors {
                let g = match gc.iter().position(|&x| x == c) {
                    Some(g) => g,
                    None => {
                        gc.push(c);
                        gc.len() - 1
                    }
                };
                go.push(g);
            }
            (vec![outer; gc.len()], go, gc)
        }
        Some(l) => {
            if l.inner.len() != k || l.outer.len() != k {
                return Err(Error::BadLanding);
            }
            (l.outer.clone(), (0..k).collect(), colors.clone())
        }
    };
    let mut scratch = Scratch::new();
    if landing.is_none() {
        if let Some(r) = fast_path(grid, sigma, &colors, &sinks, &group_of, &group_color, &mut scratch)? {
            return Ok(r);
        }
        if !enough_arms(grid, &colors, &sinks, &group_of, &group_color, &mut scratch) {
            return Ok(None);
        }
        for reverse in [false, true] {
            if let Some(r) = greedy(grid, sigma, &sinks, &group_of, &group_color, reverse, &mut scratch) {
                return Ok(Some(r));
            }
        }
        // drop the order: arms from any sites. Necessary, and sufficient
        // when the colors admit a single cyclic arrangement.
        let mut flows: Vec<(usize, Flow)> = Vec::new();
        for lattice in [Lattice::Primal, Lattice::Dual] {
            let locals: Vec<usize> = grid.sites.iter().filter(|s| s.lattice == lattice).map(|s| s.local).collect();
            let demands: Vec<Demand> = (0..group_color.len())
                .filter(|&g| group_color[g].lattice() == lattice)
                .map(|g| Demand { group: g, sources: locals.clone(), need: group_of.iter().filter(|&&h| h == g).count() })
                .collect();
            if demands.is_empty() {
                continue;
            }
            let mut extra = vec![Vec::new(); demands.len()];
            let mut router = Router { grid, sinks: &sinks, group_color: &group_color, scratch: &mut scratch, budget: &mut *budget };
            match router.route(&demands, &mut extra)? {
                Some(f) => flows.extend(f),
                None => return Ok(None),
            }
        }
        if single_arrangement(&colors) {
            let mut chosen: Vec<(usize, usize)> = Vec::new();
            for (s, site) in grid.sites.iter().enumerate() {
                if let Some((g, _)) = flows.iter().find(|(g, f)| group_color[*g].lattice() == site.lattice && f.out[site.local] & SOURCE != 0) {
                    chosen.push((s, *g));
                }
            }
            return Ok(Some(assemble(grid, sigma, &group_color, chosen, &flows, &sinks).expect("every arrangement is a rotation")));
        }
    }
    let mut reach: Vec<Vec<bool>> = Vec::with_capacity(sinks.len());
    for (g, s) in sinks.iter().enumerate() {
        reach.push(grid.site_reach(group_color[g], s)?);
    }
    let cand: Vec<Vec<bool>> = (0..k)
        .map(|a| {
            let g = group_of[a];
            grid.sites
                .iter()
                .map(|s| {
                    s.lattice == colors[a].lattice()
                        && reach[g][s.local]
                        && landing.is_none_or(|l| l.inner[a][s.local])
                })
                .collect()
        })
        .collect();
    if cand.iter().any(|c| !c.iter().any(|&b| b)) {
        return Ok(None);
    }
    let plan = Plan { colors, cand, sinks, group_color, group_of };
    let rotations: Vec<usize> = if landing.is_some() { (0..k).collect() } else { sigma.distinct_rotations() };
    let mut dfs = Dfs { grid, plan: &plan, scratch, memo: [BTreeMap::new(), BTreeMap::new()], budget, assign: [Vec::new(), Vec::new()] };
    for r in rotations {
        let order: Vec<usize> = (0..k).map(|j| (r + j) % k).collect();
        if dfs.place(&order, 0, 0)? {
            return dfs.finish().map(Some);
        }
    }
    Ok(None)
}

/// Necessary condition: each color group alone has as many disjoint arms
/// as it needs, ignoring order and the other groups.
fn enough_arms(
    grid: &ArmGrid,
    colors: &[Color],
    sinks: &[Vec<bool>],
    group_of: &[usize],
    group_color: &[Color],
    scratch: &mut Scratch,
) -> bool {
    let blocked = vec![false; grid.len()];
    (0..group_color.len()).all(|g| {
        let need = group_of.iter().filter(|&&h| h == g).count();
        let lattice = group_color[g].lattice();
        let locals: Vec<usize> = grid.sites.iter().filter(|s| s.lattice == lattice).map(|s| s.local).collect();
        let net = Network { w: grid.w, adj: grid.built(group_color[g]), is_sink: &sinks[g], blocked: &blocked };
        let mut flow = Flow::new(grid.len());
        (0..need).all(|_| net.augment_any(&mut flow, &locals, scratch).is_some())
    }) && colors.len() == group_of.len()
}

/// When each lattice carries one color and one lattice holds at most one
/// arm, every placement of the right number of sites is a rotation of the
/// sequence, so the event reduces to independent rank conditions.
fn fast_path(
    grid: &ArmGrid,
    sigma: &ColorSequence,
    colors: &[Color],
    sinks: &[Vec<bool>],
    group_of: &[usize],
    group_color: &[Color],
    scratch: &mut Scratch,
) -> Result<Option<Option<Routed>>, Error> {
    let mut per_lattice: [Vec<usize>; 2] = [Vec::new(), Vec::new()];
    for (a, c) in colors.iter().enumerate() {
        per_lattice[c.lattice() as usize].push(a);
    }
    for arms in &per_lattice {
        if arms.iter().any(|&a| colors[a] != colors[arms[0]]) {
            return Ok(None);
        }
    }
    if per_lattice[0].len() > 1 && per_lattice[1].len() > 1 {
        return Ok(None);
    }
    let mut chosen: Vec<(usize, usize)> = Vec::new(); // (site, group)
    let mut flows: Vec<(usize, Flow)> = Vec::new();
    for arms in &per_lattice {
        if arms.is_empty() {
            continue;
        }
        let need = arms.len();
        let g = group_of[arms[0]];
        let lattice = colors[arms[0]].lattice();
        let sites: Vec<usize> = (0..grid.sites.len()).filter(|&s| grid.sites[s].lattice == lattice).collect();
        let locals: Vec<usize> = sites.iter().map(|&s| grid.sites[s].local).collect();
        let blocked = vec![false; grid.len()];
        let net = Network { w: grid.w, adj: grid.built(group_color[g]), is_sink: &sinks[g], blocked: &blocked };
        let mut flow = Flow::new(grid.len());
        for _ in 0..need {
            let Some(local) = net.augment_any(&mut flow, &locals, scratch) else {
                return Ok(Some(None));
            };
            let at = locals.iter().position(|&l| l == local).expect("source is a site");
            chosen.push((sites[at], g));
        }
        flows.push((g, flow));
    }
    let r = assemble(grid, sigma, group_color, chosen, &flows, sinks).expect("single-arm lattice makes every placement a rotation");
    Ok(Some(Some(r)))
}

/// Cheap witness search: route the groups of each lattice one after
/// another from free sites, each avoiding the vertices of the groups before
/// it. Succeeds when the resulting counterclockwise word is a rotation of
/// the sequence; a miss proves nothing.
fn greedy(
    grid: &ArmGrid,
    sigma: &ColorSequence,
    sinks: &[Vec<bool>],
    group_of: &[usize],
    group_color: &[Color],
    reverse: bool,
    scratch: &mut Scratch,
) -> Option<Routed> {
    let mut chosen: Vec<(usize, usize)> = Vec::new(); // (site, group)
    let mut flows: Vec<(usize, Flow)> = Vec::new();
    for lattice in [Lattice::Primal, Lattice::Dual] {
        let mut gs: Vec<usize> = (0..group_color.len()).filter(|&g| group_color[g].lattice() == lattice).collect();
        if reverse {
            gs.reverse();
        }
        let sites: Vec<usize> = (0..grid.sites.len()).filter(|&s| grid.sites[s].lattice == lattice).collect();
        let locals: Vec<usize> = sites.iter().map(|&s| grid.sites[s].local).collect();
        let mut blocked = vec![false; grid.len()];
        for g in gs {
            let need = group_of.iter().filter(|&&h| h == g).count();
            let net = Network { w: grid.w, adj: grid.built(group_color[g]), is_sink: &sinks[g], blocked: &blocked };
            let mut flow = Flow::new(grid.len());
            for _ in 0..need {
                let local = net.augment_any(&mut flow, &locals, scratch)?;
                let at = locals.iter().position(|&l| l == local).expect("source is a site");
                chosen.push((sites[at], g));
            }
            for (v, b) in blocked.iter_mut().enumerate() {
                *b |= flow.used(v);
            }
            flows.push((g, flow));
        }
    }
    assemble(grid, sigma, group_color, chosen, &flows, sinks)
}

/// Whether every arrangement of these colors on a circle is the same up to
/// rotation: a single color, or two colors one of which occurs once.
fn single_arrangement(colors: &[Color]) -> bool {
    let mut counts: Vec<(Color, usize)> = Vec::new();
    for &c in colors {
        match counts.iter_mut().find(|(d, _)| *d == c) {
            Some((_, n)) => *n += 1,
            None => counts.push((c, 1)),
        }
    }
    match counts.as_slice() {
        [_] => true,
        [(_, a), (_, b)] => *a == 1 || *b == 1,
        _ => false,
    }
}

/// Arms from `(site, group)` pairs and one flow per group, if the
/// counterclockwise color word is a rotation of the sequence.
fn assemble(
    grid: &ArmGrid,
    sigma: &ColorSequence,
    group_color: &[Color],
    mut chosen: Vec<(usize, usize)>,
    flows: &[(usize, Flow)],
    sinks: &[Vec<bool>],
) -> Option<Routed> {
    let k = sigma.len();
    chosen.sort_unstable();
    let r = (0..k).find(|&r| chosen.iter().enumerate().all(|(j, &(_, g))| group_color[g] == sigma.get(r + j)))?;
    let mut paths = vec![Vec::new(); k];
    for (j, &(s, g)) in chosen.iter().enumerate() {
        let flow = &flows.iter().find(|(h, _)| *h == g).expect("flow per group").1;
        paths[(r + j) % k] = truncate(flow.path_from(grid.w, grid.sites[s].local), &sinks[g]);
    }
    Some(Routed { paths })
}

fn truncate(mut path: Vec<usize>, sinks: &[bool]) -> Vec<usize> {
    if let Some(p) = path.iter().position(|&v| sinks[v]) {
        path.truncate(p + 1);
    }
    path
}

struct Dfs<'p, 'g, 'a> {
    grid: &'p ArmGrid<'g>,
    plan: &'p Plan,
    scratch: Scratch,
    memo: [BTreeMap<Vec<u32>, bool>; 2],
    budget: &'a mut u64,
    /// `(site, arm)` placed so far, per lattice.
    assign: [Vec<(usize, usize)>; 2],
}

impl Dfs<'_, '_, '_> {
    fn spend(&mut self) -> Result<(), Error> {
        if *self.budget == 0 {
            return Err(Error::SearchBudget);
        }
        *self.budget -= 1;
        Ok(())
    }

    fn place(&mut self, order: &[usize], j: usize, pos: usize) -> Result<bool, Error> {
        let k = order.len();
        if j == k {
            return Ok(true);
        }
        let arm = order[j];
        let lat = self.plan.colors[arm].lattice() as usize;
        let total = self.grid.sites.len();
        let mut p = pos;
        while p + (k - j) <= total {
            if self.plan.cand[arm][p] {
                self.spend()?;
                self.assign[lat].push((p, arm));
                if self.feasible(lat)? && self.place(order, j + 1, p + 1)? {
                    return Ok(true);
                }
                self.assign[lat].pop();
            }
            p += 1;
        }
        Ok(false)
    }

    fn key(&self, lat: usize) -> Vec<u32> {
        let mut key: Vec<u32> =
            self.assign[lat].iter().map(|&(s, a)| ((s as u32) << 8) | self.plan.group_of[a] as u32).collect();
        key.sort_unstable();
        key
    }

    fn feasible(&mut self, lat: usize) -> Result<bool, Error> {
        let key = self.key(lat);
        if let Some(&r) = self.memo[lat].get(&key) {
            return Ok(r);
        }
        let r = self.route(lat)?.is_some();
        self.memo[lat].insert(key, r);
        Ok(r)
    }

    /// Groups on one lattice: (group id, source locals).
    fn groups(&self, lat: usize) -> Vec<(usize, Vec<usize>)> {
        let mut out: Vec<(usize, Vec<usize>)> = Vec::new();
        for &(s, a) in &self.assign[lat] {
            let g = self.plan.group_of[a];
            let local = self.grid.sites[s].local;
            match out.iter_mut().find(|(h, _)| *h == g) {
                Some((_, v)) => v.push(local),
                None => out.push((g, vec![local])),
            }
        }
        out
    }

    fn route(&mut self, lat: usize) -> Result<Option<Vec<(usize, Flow)>>, Error> {
        let demands: Vec<Demand> = self
            .groups(lat)
            .into_iter()
            .map(|(group, sources)| Demand { group, need: sources.len(), sources })
            .collect();
        let mut extra = vec![Vec::new(); demands.len()];
        let mut router = Router {
            grid: self.grid,
            sinks: &self.plan.sinks,
            group_color: &self.plan.group_color,
            scratch: &mut self.scratch,
            budget: &mut *self.budget,
        };
        router.route(&demands, &mut extra)
    }

    fn finish(&mut self) -> Result<Routed, Error> {
        let k = self.plan.colors.len();
            let mut paths = vec![Vec::new(); k];
        for lat in [Lattice::Primal as usize, Lattice::Dual as usize] {
            if self.assign[lat].is_empty() {
                continue;
            }
            let flows = self.route(lat)?.expect("feasible assignment routes");
            for &(s, a) in &self.assign[lat] {
                let g = self.plan.group_of[a];
                let flow = &flows.iter().find(|(h, _)| *h == g).expect("group flow").1;
                let local = self.grid.sites[s].local;
                debug_assert!(flow.out[local] & (SINK | 0xF) != 0);
                paths[a] = truncate(flow.path_from(self.grid.w, local), &self.plan.sinks[g]);
            }
        }
        Ok(Routed { paths })
    }
}

/// `need` disjoint arms of one group from `sources`; all of them when
/// `need == sources.len()`, which also reserves them against other groups.
struct Demand {
    group: usize,
    sources: Vec<usize>,
    need: usize,
}

/// Joint routing of the groups of one lattice.
struct Router<'p, 'g, 'a> {
    grid: &'p ArmGrid<'g>,
    sinks: &'p [Vec<bool>],
    group_color: &'p [Color],
    scratch: &'a mut Scratch,
    budget: &'a mut u64,
}

impl Router<'_, '_, '_> {
    /// Flow of demand `di` alone, avoiding `extra[di]` and the reserved
    /// sources of the other demands.
    fn flow_for(&mut self, demands: &[Demand], di: usize, extra: &[Vec<usize>]) -> Option<Flow> {
        let n = self.grid.len();
        let d = &demands[di];
        let mut blocked = vec![false; n];
        for (ei, other) in demands.iter().enumerate() {
            if ei != di && other.need == other.sources.len() {
                for &v in &other.sources {
                    blocked[v] = true;
                }
            }
        }
        for &v in &extra[di] {
            blocked[v] = true;
        }
        let net = Network {
            w: self.grid.w,
            adj: self.grid.built(self.group_color[d.group]),
            is_sink: &self.sinks[d.group],
            blocked: &blocked,
        };
        if d.need == d.sources.len() {
            net.link_all(&d.sources, self.scratch)
        } else {
            let mut f = Flow::new(n);
            (0..d.need).all(|_| net.augment_any(&mut f, &d.sources, self.scratch).is_some()).then_some(f)
        }
    }

    /// One flow per demand, pairwise vertex-disjoint, with demand `i`
    /// avoiding `extra[i]`.
    fn route(&mut self, demands: &[Demand], extra: &mut Vec<Vec<usize>>) -> Result<Option<Vec<(usize, Flow)>>, Error> {
        let n = self.grid.len();
        let mut flows = Vec::with_capacity(demands.len());
        for di in 0..demands.len() {
            match self.flow_for(demands, di, extra) {
                Some(f) => flows.push((demands[di].group, f)),
                None => return Ok(None),
            }
        }
        if flows.len() < 2 {
            return Ok(Some(flows));
        }
        let conflicts: Vec<(usize, usize, usize)> = (0..n)
            .filter_map(|v| {
                let mut users = flows.iter().enumerate().filter(|(_, (_, f))| f.used(v)).map(|(i, _)| i);
                match (users.next(), users.next()) {
                    (Some(a), Some(b)) => Some((v, a, b)),
                    _ => None,
                }
            })
            .collect();
        let Some(&(v, a, b)) = conflicts.first() else { return Ok(Some(flows)) };
        if *self.budget == 0 {
            return Err(Error::SearchBudget);
        }
        *self.budget -= 1;
        // a group that cannot avoid a shared vertex must use it, so the
        // other one avoids it: no branching needed
        for &(v, a, b) in &conflicts {
            for (side, other) in [(a, b), (b, a)] {
                extra[side].push(v);
                let alone = self.flow_for(demands, side, extra);
                extra[side].pop();
                if alone.is_none() {
                    extra[other].push(v);
                    let r = self.route(demands, extra);
                    extra[other].pop();
                    return r;
                }
            }
        }
        // in any joint routing at most one of the two groups uses v
        for side in [a, b] {
            extra[side].push(v);
            let r = self.route(demands, extra)?;
            extra[side].pop();
            if r.is_some() {
                return Ok(r);
            }
        }
        Ok(None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn colors(s: &str) -> Vec<Color> {
        s.parse::<ColorSequence>().unwrap().colors().to_vec()
    }

    #[test]
    fn single_arrangements() {
        for s in ["O", "OC", "OCC", "COO", "OOOC", "O*C*C*C*", "OC*"] {
            assert!(single_arrangement(&colors(s)), "{s}");
        }
        for s in ["OCC*", "OOCC", "CO*C*C*", "OC*OC*O"] {
            assert!(!single_arrangement(&colors(s)), "{s}");
        }
    }
}
