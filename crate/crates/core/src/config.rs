//! Percolation configurations on a finite box.

use alloc::vec;
use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::color::Color;
use crate::lattice::{dual_of, BoxRegion, Edge, EdgeIndexer, Lattice};
use crate::Error;

/// Seed of one reproducible sample stream.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RngSeed {
    pub seed: u64,
    pub stream: u64,
}

impl RngSeed {
    pub const fn new(seed: u64, stream: u64) -> Self {
        RngSeed { seed, stream }
    }
}

/// A set of primal edges of a box, stored as a bitset over canonical slots.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EdgeSet {
    indexer: EdgeIndexer,
    bits: Vec<u64>,
    len: usize,
}

impl EdgeSet {
    pub fn new(region: BoxRegion) -> Self {
        let indexer = EdgeIndexer::new(region);
        EdgeSet { indexer, bits: vec![0; indexer.slots().div_ceil(64)], len: 0 }
    }

    pub fn from_edges<I: IntoIterator<Item = Edge>>(region: BoxRegion, edges: I) -> Result<Self, Error> {
        let mut s = EdgeSet::new(region);
        for e in edges {
            s.insert(e)?;
        }
        Ok(s)
    }

    pub fn region(&self) -> BoxRegion {
        self.indexer.region
    }

    pub fn indexer(&self) -> &EdgeIndexer {
        &self.indexer
    }

    pub fn insert(&mut self, e: Edge) -> Result<bool, Error> {
        if e.lattice != Lattice::Primal {
            return Err(Error::LatticeMismatch);
        }
        let slot = self.indexer.index(e).ok_or(Error::OutsideBox(e))?;
        Ok(self.insert_slot(slot))
    }

    #[inline]
    pub(crate) fn insert_slot(&mut self, slot: usize) -> bool {
        let (w, b) = (slot / 64, slot % 64);
        let fresh = self.bits[w] & (1 << b) == 0;
        self.bits[w] |= 1 << b;
        self.len += fresh as usize;
        fresh
    }

    pub fn remove(&mut self, e: Edge) -> bool {
        match self.indexer.index(e) {
            Some(slot) if e.lattice == Lattice::Primal => {
                let (w, b) = (slot / 64, slot % 64);
                let present = self.bits[w] & (1 << b) != 0;
                self.bits[w] &= !(1 << b);
                self.len -= present as usize;
                present
            }
            _ => false,
        }
    }

    /// Membership; edges outside the box or on the dual lattice are absent.
    #[inline]
    pub fn contains(&self, e: Edge) -> bool {
        e.lattice == Lattice::Primal && self.indexer.index(e).is_some_and(|s| self.contains_slot(s))
    }

    #[inline]
    pub(crate) fn contains_slot(&self, slot: usize) -> bool {
        self.bits[slot / 64] & (1 << (slot % 64)) != 0
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Edges in canonical order.
    pub fn iter(&self) -> impl Iterator<Item = Edge> + '_ {
        self.bits.iter().enumerate().flat_map(move |(w, &word)| {
            let mut rest = word;
            core::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let b = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(self.indexer.edge(w * 64 + b))
            })
        })
    }

    pub fn to_vec(&self) -> Vec<Edge> {
        self.iter().collect()
    }

    pub fn is_subset_of(&self, other: &EdgeSet) -> bool {
        self.iter().all(|e| other.contains(e))
    }
}

/// Open/closed status of every primal edge of a box. Dual statuses are
/// derived through `ω*(e*) = ω(e)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Configuration {
    indexer: EdgeIndexer,
    bits: Vec<u64>,
}

impl Configuration {
    fn filled(region: BoxRegion, open: bool) -> Self {
        let indexer = EdgeIndexer::new(region);
        let words = indexer.slots().div_ceil(64);
        let mut cfg = Configuration { indexer, bits: vec![if open { u64::MAX } else { 0 }; words] };
        cfg.clear_invalid_slots();
        cfg
    }

    pub fn all_open(region: BoxRegion) -> Self {
        Configuration::filled(region, true)
    }

    pub fn all_closed(region: BoxRegion) -> Self {
        Configuration::filled(region, false)
    }

    /// Configuration with `open(e)` deciding every primal edge of the box.
    pub fn from_fn<F: FnMut(Edge) -> bool>(region: BoxRegion, mut open: F) -> Self {
        let mut cfg = Configuration::all_closed(region);
        for slot in 0..cfg.indexer.slots() {
            if cfg.indexer.is_valid_slot(slot) && open(cfg.indexer.edge(slot)) {
                cfg.set_slot(slot, true);
            }
        }
        cfg
    }

    fn clear_invalid_slots(&mut self) {
        let w = self.indexer.width();
        let total = self.indexer.slots();
        for row in 0..w {
            // horizontal slot of the last column
            let s = 2 * (row * w + w - 1);
            self.bits[s / 64] &= !(1 << (s % 64));
        }
        for col in 0..w {
            let s = 2 * ((w - 1) * w + col) + 1;
            self.bits[s / 64] &= !(1 << (s % 64));
        }
        let tail = total % 64;
        if tail != 0 {
            let last = self.bits.len() - 1;
            self.bits[last] &= (1u64 << tail) - 1;
        }
    }

    pub fn region(&self) -> BoxRegion {
        self.indexer.region
    }

    pub fn indexer(&self) -> &EdgeIndexer {
        &self.indexer
    }

    #[inline]
    pub(crate) fn words(&self) -> &[u64] {
        &self.bits
    }

    #[inline]
    pub(crate) fn slot_open(&self, slot: usize) -> bool {
        self.bits[slot / 64] & (1 << (slot % 64)) != 0
    }

    #[inline]
    pub(crate) fn set_slot(&mut self, slot: usize, open: bool) {
        let (w, b) = (slot / 64, slot % 64);
        if open {
            self.bits[w] |= 1 << b;
        } else {
            self.bits[w] &= !(1 << b);
        }
    }

    /// Status of a primal edge (`true` = open).
    pub fn is_open(&self, e: Edge) -> Result<bool, Error> {
        if e.lattice != Lattice::Primal {
            return Err(Error::LatticeMismatch);
        }
        let slot = self.indexer.index(e).ok_or(Error::OutsideBox(e))?;
        Ok(self.slot_open(slot))
    }

    pub fn set(&mut self, e: Edge, open: bool) -> Result<(), Error> {
        if e.lattice != Lattice::Primal {
            return Err(Error::LatticeMismatch);
        }
        let slot = self.indexer.index(e).ok_or(Error::OutsideBox(e))?;
        self.set_slot(slot, open);
        Ok(())
    }

    /// Whether `e` carries color `c`. Primal colors take primal edges, starred
    /// colors take dual edges (read through the primal edge they cross).
    pub fn has_color(&self, e: Edge, c: Color) -> Result<bool, Error> {
        if e.lattice != c.lattice() {
            return Err(Error::LatticeMismatch);
        }
        let primal = match e.lattice {
            Lattice::Primal => e,
            Lattice::Dual => dual_of(e),
        };
        Ok(self.is_open(primal)? == c.is_open())
    }

    /// Statuses inverted exactly on `region`.
    pub fn flip_region(&self, region: &[Edge]) -> Result<Configuration, Error> {
        let mut out = self.clone();
        for &e in region {
            if e.lattice != Lattice::Primal {
                return Err(Error::LatticeMismatch);
            }
            let slot = self.indexer.index(e).ok_or(Error::OutsideBox(e))?;
            out.set_slot(slot, !self.slot_open(slot));
        }
        Ok(out)
    }

    pub fn flip_set(&self, region: &EdgeSet) -> Result<Configuration, Error> {
        if region.region() == self.region() {
            let mut out = self.clone();
            for (w, word) in out.bits.iter_mut().enumerate() {
                *word ^= region.bits[w];
            }
            return Ok(out);
        }
        self.flip_region(&region.to_vec())
    }

    pub fn flip_all(&self) -> Configuration {
        let mut out = self.clone();
        for w in out.bits.iter_mut() {
            *w = !*w;
        }
        out.clear_invalid_slots();
        out
    }

    pub fn open_count(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn edge_count(&self) -> usize {
        self.indexer.region.edge_count()
    }

    /// Edges in canonical order with their statuses.
    pub fn iter(&self) -> impl Iterator<Item = (Edge, bool)> + '_ {
        self.indexer.valid_slots().map(move |s| (self.indexer.edge(s), self.slot_open(s)))
    }

    /// Copy of the statuses on a sub-box.
    pub fn restrict(&self, region: BoxRegion) -> Result<Configuration, Error> {
        if !self.region().contains_box(&region) {
            return Err(Error::RegionOutsideBox);
        }
        Ok(Configuration::from_fn(region, |e| self.is_open(e).unwrap_or(false)))
    }
}

/// Critical bond percolation on `region`: every edge open independently with
/// probability 1/2.
///
/// Bits come from ChaCha8 keyed by `(seed, stream)`; word `w` of the status
/// table is the generator output at word position `w`, so each edge's bit is
/// a fixed function of `(seed, stream, edge index)`.
pub fn sample_critical(region: BoxRegion, seed: RngSeed) -> Configuration {
    let mut cfg = Configuration::all_closed(region);
    let mut rng = ChaCha8Rng::seed_from_u64(seed.seed);
    rng.set_stream(seed.stream);
    for w in cfg.bits.iter_mut() {
        *w = rng.next_u64();
    }
    cfg.clear_invalid_slots();
    cfg
}

/// Produces the configuration of trial `stream` on a box.
pub trait ConfigSource: Sync {
    fn sample(&self, region: BoxRegion, stream: u64) -> Configuration;
    fn seed(&self) -> u64;
}

/// The critical measure.
#[derive(Clone, Copy, Debug)]
pub struct CriticalSampler {
    pub seed: u64,
}

impl ConfigSource for CriticalSampler {
    fn sample(&self, region: BoxRegion, stream: u64) -> Configuration {
        sample_critical(region, RngSeed::new(self.seed, stream))
    }

    fn seed(&self) -> u64 {
        self.seed
    }
}

/// Degenerate source returning a constant configuration (test harness).
#[derive(Clone, Copy, Debug)]
pub struct ConstantSampler {
    pub open: bool,
}

impl ConfigSource for ConstantSampler {
    fn sample(&self, region: BoxRegion, _stream: u64) -> Configuration {
        if self.open {
            Configuration::all_open(region)
        } else {
            Configuration::all_closed(region)
        }
    }

    fn seed(&self) -> u64 {
        0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Vertex;

    #[test]
    fn sampling_is_deterministic() {
        let b = BoxRegion::centered(6);
        assert_eq!(sample_critical(b, RngSeed::new(9, 3)), sample_critical(b, RngSeed::new(9, 3)));
    }

    #[test]
    fn streams_differ() {
        let b = BoxRegion::centered(4);
        for s in 0..100 {
            assert_ne!(sample_critical(b, RngSeed::new(1, s)), sample_critical(b, RngSeed::new(1, s + 1000)));
        }
    }

    #[test]
    fn open_fraction_is_one_half() {
        let b = BoxRegion::centered(4);
        let per = b.edge_count() as f64;
        let trials = 100_000u64;
        let open: usize = (0..trials).map(|t| sample_critical(b, RngSeed::new(42, t)).open_count()).sum();
        let total = per * trials as f64;
        let phat = open as f64 / total;
        let sd = libm::sqrt(0.25 / total);
        assert!((phat - 0.5).abs() < 3.0 * sd, "phat {phat}");
    }

    #[test]
    fn invalid_slots_stay_clear() {
        let b = BoxRegion::new(Vertex::new(1, 1), 3);
        let cfg = sample_critical(b, RngSeed::new(5, 0));
        let counted = cfg.iter().filter(|(_, o)| *o).count();
        assert_eq!(counted, cfg.open_count());
        assert_eq!(cfg.flip_all().open_count(), cfg.edge_count() - counted);
    }

    #[test]
    fn colors_follow_duality() {
        let b = BoxRegion::centered(3);
        let cfg = sample_critical(b, RngSeed::new(2, 2));
        for e in b.edges() {
            let o = cfg.has_color(e, Color::O).unwrap();
            assert_ne!(o, cfg.has_color(e, Color::C).unwrap());
            assert_eq!(cfg.has_color(dual_of(e), Color::OStar).unwrap(), o);
            assert_eq!(cfg.has_color(dual_of(e), Color::CStar).unwrap(), !o);
        }
        assert!(cfg.has_color(Edge::h(0, 0), Color::OStar).is_err());
        assert!(cfg.has_color(Edge::h(7, 0), Color::O).is_err());
        let open = Configuration::all_open(b);
        assert!(b.edges().iter().all(|e| open.has_color(*e, Color::O).unwrap()));
    }

    #[test]
    fn flips() {
        let b = BoxRegion::centered(3);
        let cfg = sample_critical(b, RngSeed::new(8, 1));
        let s: Vec<Edge> = b.edges().into_iter().step_by(3).collect();
        let f = cfg.flip_region(&s).unwrap();
        assert_eq!(f.flip_region(&s).unwrap(), cfg);
        assert_eq!(cfg.flip_region(&[]).unwrap(), cfg);
        for (e, o) in cfg.iter() {
            assert_eq!(f.is_open(e).unwrap() != o, s.contains(&e));
        }
        let open = Configuration::all_open(b);
        assert_eq!(open.edge_count() - open.flip_region(&s).unwrap().open_count(), s.len());
        let set = EdgeSet::from_edges(b, s.iter().copied()).unwrap();
        assert_eq!(cfg.flip_set(&set).unwrap(), f);
        assert!(cfg.flip_region(&[Edge::h(9, 9)]).is_err());
    }

    #[test]
    fn edge_set_basics() {
        let b = BoxRegion::centered(2);
        let mut s = EdgeSet::new(b);
        assert!(s.insert(Edge::v(0, 0)).unwrap());
        assert!(!s.insert(Edge::v(0, 0)).unwrap());
        s.insert(Edge::h(-2, -2)).unwrap();
        assert_eq!(s.to_vec(), alloc::vec![Edge::h(-2, -2), Edge::v(0, 0)]);
        assert!(s.insert(Edge::h(2, 0)).is_err());
        assert!(!s.contains(Edge::h(5, 5)));
        assert!(s.remove(Edge::v(0, 0)));
        assert_eq!(s.len(), 1);
    }
}
