//! The shift transformation `T` on a region and its inverse `T'`.
//!
//! Under `T` every edge `e` of `S` first inherits the status of
//! `shift_source(e)` when that edge is in `S`. Edges of `S` whose source lies
//! outside keep their own status, except the class `ℰ2` (source outside,
//! target inside), whose `i`-th edge receives the old status of the `i`-th
//! edge of `ℰ0` (source inside, target outside), both in canonical order.
//! `T'` is the mirror image with source and target exchanged.

use alloc::vec;
use alloc::vec::Vec;

use crate::arms::{find_arms_within, separated_witness_within, ArmWitness, DEFAULT_BUDGET};
use crate::color::{Color, ColorSequence};
use crate::config::{Configuration, EdgeSet};
use crate::lattice::{shift_source_unchecked, shift_target_unchecked, Annulus, Edge, Lattice, Point2, Vertex};
use crate::regions::Region;
use crate::Error;

/// `ℰ0`, `ℰ1`, `ℰ2` in canonical order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct EdgeClassification {
    pub e0: Vec<Edge>,
    pub e1: Vec<Edge>,
    pub e2: Vec<Edge>,
}

impl EdgeClassification {
    pub fn len(&self) -> usize {
        self.e0.len() + self.e1.len() + self.e2.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Classification of `S` by how many edges inherit each status under `T`.
pub fn classify(s: &EdgeSet) -> EdgeClassification {
    let mut c = EdgeClassification::default();
    for e in s.iter() {
        let src = s.contains(shift_source_unchecked(e));
        let dst = s.contains(shift_target_unchecked(e));
        match (src, dst) {
            (true, false) => c.e0.push(e),
            (false, true) => c.e2.push(e),
            _ => c.e1.push(e),
        }
    }
    c
}

/// A region with its canonical edge order, classification and the status
/// assignments of `T` and `T'`, shareable across samples.
#[derive(Clone, Debug)]
pub struct OrderedRegion {
    set: EdgeSet,
    order: Vec<Edge>,
    class: EdgeClassification,
    /// `(destination, source)` pairs that move a status.
    forward: Vec<(Edge, Edge)>,
    backward: Vec<(Edge, Edge)>,
}

impl OrderedRegion {
    pub fn new(set: EdgeSet) -> Self {
        let order = set.to_vec();
        let class = classify(&set);
        let forward = Self::program(&set, &order, &class.e2, &class.e0, shift_source_unchecked);
        let backward = Self::program(&set, &order, &class.e0, &class.e2, shift_target_unchecked);
        OrderedRegion { set, order, class, forward, backward }
    }

    pub fn from_region(region: &Region) -> Self {
        OrderedRegion::new(region.edges().clone())
    }

    fn program(set: &EdgeSet, order: &[Edge], takers: &[Edge], givers: &[Edge], from: fn(Edge) -> Edge) -> Vec<(Edge, Edge)> {
        let mut out = Vec::new();
        for &e in order {
            let f = from(e);
            let src = if set.contains(f) {
                f
            } else if let Ok(i) = takers.binary_search(&e) {
                givers[i]
            } else {
                e
            };
            if src != e {
                out.push((e, src));
            }
        }
        out
    }

    pub fn set(&self) -> &EdgeSet {
        &self.set
    }

    pub fn edges(&self) -> &[Edge] {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn classification(&self) -> &EdgeClassification {
        &self.class
    }

    /// Classes of `T'`: its `ℰ0` is `ℰ2(T)` and its `ℰ2` is `ℰ0(T)`.
    pub fn inverse_classification(&self) -> EdgeClassification {
        let mut c = EdgeClassification::default();
        for &e in &self.order {
            let src = self.set.contains(shift_target_unchecked(e));
            let dst = self.set.contains(shift_source_unchecked(e));
            match (src, dst) {
                (true, false) => c.e0.push(e),
                (false, true) => c.e2.push(e),
                _ => c.e1.push(e),
            }
        }
        c
    }

    fn run(&self, cfg: &Configuration, program: &[(Edge, Edge)]) -> Result<Configuration, Error> {
        let idx = cfg.indexer();
        if self.order.iter().any(|&e| idx.index(e).is_none()) {
            return Err(Error::RegionOutsideBox);
        }
        let mut out = cfg.clone();
        for &(dst, src) in program {
            let (d, s) = (idx.index(dst).expect("checked"), idx.index(src).expect("checked"));
            out.set_slot(d, cfg.slot_open(s));
        }
        Ok(out)
    }
}

/// `T(ω)` on the region.
pub fn apply_t(cfg: &Configuration, s: &OrderedRegion) -> Result<Configuration, Error> {
    s.run(cfg, &s.forward)
}

/// `T'(ω')`, the inverse of [`apply_t`].
pub fn apply_t_inverse(cfg: &Configuration, s: &OrderedRegion) -> Result<Configuration, Error> {
    s.run(cfg, &s.backward)
}

/// Image of an arm edge under `T`: a primal edge becomes the dual edge with
/// the same base, a dual edge the primal edge at base `+ (1, 1)`.
pub fn shifted_edge(e: Edge) -> Edge {
    match e.lattice {
        Lattice::Primal => e.with_lattice(Lattice::Dual),
        Lattice::Dual => Edge::new(Vertex::new(e.base.x + 1, e.base.y + 1), e.orientation, Lattice::Primal),
    }
}

/// Primal edge whose status a (possibly dual) base edge reads.
pub(crate) fn read_edge(e: Edge) -> Edge {
    match e.lattice {
        Lattice::Primal => e,
        Lattice::Dual => shift_target_unchecked(e.with_lattice(Lattice::Primal)),
    }
}

/// The annulus `B(2n - 1, N/2 + 1)`: one layer around the separation zone,
/// enough for shifted dual arms to cross the zone itself.
pub(crate) fn guard_zone(annulus: Annulus) -> Result<Annulus, Error> {
    Annulus::new(annulus.center, (2 * annulus.inner).saturating_sub(1), annulus.outer / 2 + 1)
}

/// `S` minus every edge that an arm could use within the guard zone while
/// passing closer than `ell` to the arms of the boundary curve.
pub(crate) fn far_from_sides(region: &Region, ell: u32) -> Result<EdgeSet, Error> {
    let a = region.annulus;
    let mut set = region.edges().clone();
    let sides = region.curve.arm_points();
    if sides.is_empty() {
        return Ok(set);
    }
    let zone = guard_zone(a)?;
    let r = a.outer as i32 + 1;
    let w = (2 * r + 1) as usize;
    let c = a.center;
    let local = |v: Vertex| ((v.y - c.y + r) as usize) * w + (v.x - c.x + r) as usize;
    let reach = 2 * ell as i64;
    let mut near = [vec![false; w * w], vec![false; w * w]];
    for (li, lattice) in [Lattice::Primal, Lattice::Dual].into_iter().enumerate() {
        let off = if lattice == Lattice::Dual { 1 } else { 0 };
        for q in sides {
            // vertices v with |2v + off - q| < reach in both coordinates
            let lo = |z: i64| (z - reach - off).div_euclid(2) as i32;
            let hi = |z: i64| (z + reach - off).div_euclid(2) as i32 + 1;
            for y in lo(q.y).max(c.y - r)..=hi(q.y).min(c.y + r) {
                for x in lo(q.x).max(c.x - r)..=hi(q.x).min(c.x + r) {
                    let p = Point2::new(2 * x as i64 + off, 2 * y as i64 + off);
                    if p.linf(*q) < reach {
                        near[li][local(Vertex::new(x, y))] = true;
                    }
                }
            }
        }
    }
    for e in zone.edges() {
        let (u, v) = e.endpoints();
        for (li, lattice) in [Lattice::Primal, Lattice::Dual].into_iter().enumerate() {
            if near[li][local(u)] || near[li][local(v)] {
                set.remove(read_edge(e.with_lattice(lattice)));
            }
        }
    }
    Ok(set)
}

/// Arms realising the separated event inside `S`: arms through `S`,
/// pairwise `ell`-separated in `B(2n, N/2)` and at distance at least `ell`
/// from the arms of the boundary curve around that zone. A witness-based
/// lower bound, like [`crate::arms::detect_separated`].
pub fn separated_in_region(
    cfg: &Configuration,
    region: &Region,
    sigma: &ColorSequence,
    ell: u32,
) -> Result<Option<ArmWitness>, Error> {
    if ell < 5 {
        return Err(Error::SeparationTooSmall(ell));
    }
    let allowed = far_from_sides(region, ell)?;
    if sigma.len() == 1 {
        return find_arms_within(cfg, region.annulus, sigma, Some(&allowed), DEFAULT_BUDGET);
    }
    separated_witness_within(cfg, region.annulus, sigma, ell, Some(&allowed))
}

/// How one qualifying arm fares under `T` inside the separation zone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShiftedArm {
    pub color: Color,
    /// Shifted edges lying in `B(2n, N/2)`.
    pub edges: usize,
    /// Of those, edges readable from `S`.
    pub in_region: usize,
    /// Of those, edges carrying the starred color in `T(ω)`.
    pub colored: usize,
}

#[derive(Clone, Debug)]
pub struct ShiftReport {
    pub sigma: ColorSequence,
    pub image_sigma: ColorSequence,
    /// Whether the separated event inside `S` holds.
    pub precondition: bool,
    pub witness: Option<ArmWitness>,
    pub shifted: Vec<ShiftedArm>,
    /// `A_{σ*}(S ∩ B(2n, N/2))` in `T(ω)`; `None` when the precondition fails.
    pub image_event: Option<bool>,
}

impl ShiftReport {
    pub fn contained(&self) -> bool {
        self.image_event == Some(true)
    }
}

/// Checks that `T` turns the separated `σ` arms inside `S` into `σ*` arms in
/// `S ∩ B(2n, N/2)`.
pub fn verify_shift_lemma(cfg: &Configuration, region: &Region, sigma: &ColorSequence, ell: u32) -> Result<ShiftReport, Error> {
    let annulus = region.annulus;
    let zone = annulus.separation_zone().ok_or(Error::RegimeViolation)?;
    let image_sigma = sigma.star();
    let witness = separated_in_region(cfg, region, sigma, ell)?;
    let Some(w) = witness else {
        return Ok(ShiftReport { sigma: sigma.clone(), image_sigma, precondition: false, witness: None, shifted: Vec::new(), image_event: None });
    };
    let ordered = OrderedRegion::from_region(region);
    let image = apply_t(cfg, &ordered)?;
    let s = region.edges();
    let mut shifted = Vec::with_capacity(w.arms.len());
    for arm in &w.arms {
        let target = arm.color.star();
        let mut st = ShiftedArm { color: arm.color, edges: 0, in_region: 0, colored: 0 };
        for e in arm.edges() {
            let f = shifted_edge(e);
            let base = f.with_lattice(Lattice::Primal);
            if !zone.contains_edge(base) {
                continue;
            }
            st.edges += 1;
            st.in_region += s.contains(read_edge(f)) as usize;
            st.colored += image.has_color(f, target)? as usize;
        }
        shifted.push(st);
    }
    let found = find_arms_within(&image, zone, &image_sigma, Some(s), DEFAULT_BUDGET)?;
    Ok(ShiftReport {
        sigma: sigma.clone(),
        image_sigma,
        precondition: true,
        witness: Some(w),
        shifted,
        image_event: Some(found.is_some()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{sample_critical, RngSeed};
    use crate::lattice::BoxRegion;

    fn two_edge() -> OrderedRegion {
        OrderedRegion::new(EdgeSet::from_edges(BoxRegion::centered(3), [Edge::h(0, 0), Edge::v(1, 0)]).unwrap())
    }

    #[test]
    fn two_edge_classification() {
        let s = two_edge();
        let c = s.classification();
        assert_eq!(c.e0, vec![Edge::v(1, 0)]);
        assert!(c.e1.is_empty());
        assert_eq!(c.e2, vec![Edge::h(0, 0)]);
        let inv = s.inverse_classification();
        assert_eq!(inv.e0, c.e2);
        assert_eq!(inv.e2, c.e0);
    }

    #[test]
    fn two_edge_swap() {
        let s = two_edge();
        let bx = BoxRegion::centered(3);
        for (a, b) in [(false, false), (false, true), (true, false), (true, true)] {
            let mut cfg = Configuration::all_closed(bx);
            cfg.set(Edge::h(0, 0), a).unwrap();
            cfg.set(Edge::v(1, 0), b).unwrap();
            let t = apply_t(&cfg, &s).unwrap();
            assert_eq!(t.is_open(Edge::h(0, 0)).unwrap(), b);
            assert_eq!(t.is_open(Edge::v(1, 0)).unwrap(), a);
            let back = apply_t_inverse(&t, &s).unwrap();
            assert_eq!(back, cfg);
            assert_eq!(apply_t_inverse(&cfg, &s).unwrap(), t);
        }
        let open = Configuration::all_open(bx);
        assert_eq!(apply_t(&open, &s).unwrap(), open);
    }

    #[test]
    fn six_edge_bijection() {
        let bx = BoxRegion::centered(3);
        let edges = [Edge::h(0, 0), Edge::v(1, 0), Edge::h(1, 1), Edge::v(0, 0), Edge::h(0, 1), Edge::v(2, 1)];
        let s = OrderedRegion::new(EdgeSet::from_edges(bx, edges).unwrap());
        let mut images = Vec::new();
        for bits in 0u32..64 {
            let mut cfg = Configuration::all_closed(bx);
            for (i, &e) in edges.iter().enumerate() {
                cfg.set(e, bits >> i & 1 == 1).unwrap();
            }
            let t = apply_t(&cfg, &s).unwrap();
            assert_eq!(apply_t_inverse(&t, &s).unwrap(), cfg);
            images.push(edges.map(|e| t.is_open(e).unwrap()));
        }
        images.sort();
        images.dedup();
        assert_eq!(images.len(), 64);
    }

    #[test]
    fn outside_box_rejected() {
        let s = OrderedRegion::new(EdgeSet::from_edges(BoxRegion::centered(5), [Edge::h(4, 4)]).unwrap());
        assert_eq!(apply_t(&Configuration::all_open(BoxRegion::centered(2)), &s), Err(Error::RegionOutsideBox));
    }

    fn half_annulus(n: u32, big: u32) -> Region {
        crate::regions::half_annulus(Annulus::centered(n, big).unwrap()).unwrap()
    }

    #[test]
    fn vertical_open_arm_becomes_dual_open_arm() {
        let region = half_annulus(4, 32);
        let mut cfg = Configuration::all_closed(BoxRegion::centered(33));
        for y in 4..32 {
            cfg.set(Edge::v(0, y), true).unwrap();
        }
        let report = verify_shift_lemma(&cfg, &region, &"O".parse().unwrap(), 5).unwrap();
        assert!(report.precondition);
        assert!(report.contained());
        let arm = &report.shifted[0];
        assert_eq!(arm.colored, arm.edges);
    }

    #[test]
    fn containment_on_samples() {
        let region = half_annulus(4, 32);
        let mut qualifying = 0;
        for sigma in ["O", "C*", "OC*"] {
            let sigma: ColorSequence = sigma.parse().unwrap();
            for t in 0..40 {
                let cfg = sample_critical(BoxRegion::centered(33), RngSeed { seed: 21, stream: t });
                let report = verify_shift_lemma(&cfg, &region, &sigma, 5).unwrap();
                if report.precondition {
                    qualifying += 1;
                    assert!(report.contained(), "{sigma} sample {t}");
                    report.witness.as_ref().unwrap().check_within(&cfg, &sigma, Some(region.edges())).unwrap();
                }
            }
        }
        assert!(qualifying > 0);
    }
}
