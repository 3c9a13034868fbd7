use std::collections::{BTreeMap, VecDeque};

use percolab_core::arms::{detect_arms, detect_separated, extract_canonical_arms, extremal_arms};
use percolab_core::color::{Color, ColorSequence};
use percolab_core::config::{sample_critical, Configuration, EdgeSet, RngSeed};
use percolab_core::connectivity::{crossing, label_clusters, CrossDirection, Rect};
use percolab_core::lattice::{boundary_edges, dual_of, shift_source, shift_target, Annulus, BoxRegion, Edge, Lattice, Orientation, Vertex};
use percolab_core::regions::complement_region;
use percolab_core::shift::{apply_t, apply_t_inverse, OrderedRegion};
use proptest::prelude::*;

fn seq(s: &str) -> ColorSequence {
    s.parse().unwrap()
}

fn sample(radius: u32, seed: u64) -> Configuration {
    sample_critical(BoxRegion::centered(radius), RngSeed::new(seed, 0))
}

fn edge() -> impl Strategy<Value = Edge> {
    (-40i32..40, -40i32..40, any::<bool>(), any::<bool>()).prop_map(|(x, y, h, p)| {
        let o = if h { Orientation::Horizontal } else { Orientation::Vertical };
        Edge::new(Vertex::new(x, y), o, if p { Lattice::Primal } else { Lattice::Dual })
    })
}

fn polychromatic(k: usize) -> Vec<ColorSequence> {
    (1..=k).flat_map(ColorSequence::all_cyclic_classes).filter(|s| s.is_polychromatic()).collect()
}

/// Clusters by breadth-first search, as sorted vertex sets.
fn bfs_clusters(cfg: &Configuration, within: &[Edge], c: Color) -> Vec<Vec<Vertex>> {
    let mut adj: BTreeMap<Vertex, Vec<Vertex>> = BTreeMap::new();
    for &e in within {
        if cfg.has_color(e, c).unwrap() {
            let (a, b) = e.endpoints();
            adj.entry(a).or_default().push(b);
            adj.entry(b).or_default().push(a);
        }
    }
    let mut seen = BTreeMap::new();
    let mut out = Vec::new();
    for &v in adj.keys() {
        if seen.contains_key(&v) {
            continue;
        }
        let mut comp = vec![v];
        seen.insert(v, ());
        let mut q = VecDeque::from([v]);
        while let Some(u) = q.pop_front() {
            for &w in &adj[&u] {
                if seen.insert(w, ()).is_none() {
                    comp.push(w);
                    q.push_back(w);
                }
            }
        }
        comp.sort();
        out.push(comp);
    }
    out.sort();
    out
}

fn edges_of(b: BoxRegion, lattice: Lattice) -> Vec<Edge> {
    match lattice {
        Lattice::Primal => b.edges(),
        // dual edges whose crossing primal edge is in the box
        Lattice::Dual => b.edges().into_iter().map(dual_of).collect(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn dual_is_an_involution(e in edge()) {
        prop_assert_eq!(dual_of(dual_of(e)), e);
        prop_assert_ne!(dual_of(e).lattice, e.lattice);
        prop_assert_eq!(dual_of(e).midpoint2(), e.midpoint2());
    }

    #[test]
    fn shifts_are_inverse(e in edge()) {
        let p = e.with_lattice(Lattice::Primal);
        prop_assert_eq!(shift_source(shift_target(p).unwrap()).unwrap(), p);
        prop_assert_eq!(shift_target(shift_source(p).unwrap()).unwrap(), p);
        prop_assert_ne!(shift_source(p).unwrap().orientation, p.orientation);
        if p.orientation == Orientation::Horizontal {
            let twice = shift_source(shift_source(p).unwrap()).unwrap();
            prop_assert_eq!(twice, Edge::h(p.base.x - 1, p.base.y - 1));
        }
    }

    #[test]
    fn annulus_splits_the_box(n in 1u32..10, extra in 1u32..10) {
        let a = Annulus::centered(n, n + extra).unwrap();
        let inner = a.inner_box().edges();
        let ring = a.edges();
        prop_assert!(ring.iter().all(|e| !inner.contains(e)));
        let mut both: Vec<Edge> = inner.into_iter().chain(ring).collect();
        both.sort();
        prop_assert_eq!(both, a.outer_box().edges());
    }

    #[test]
    fn flip_changes_exactly_the_region(seed in any::<u64>(), mask in any::<u64>()) {
        let cfg = sample(4, seed);
        let all = cfg.region().edges();
        let s: Vec<Edge> = all.iter().copied().enumerate().filter(|(i, _)| mask >> (i % 64) & 1 == 1).map(|(_, e)| e).collect();
        let f = cfg.flip_region(&s).unwrap();
        for e in all {
            prop_assert_eq!(f.is_open(e).unwrap() != cfg.is_open(e).unwrap(), s.contains(&e));
        }
    }

    #[test]
    fn union_find_matches_bfs(seed in any::<u64>()) {
        let cfg = sample(4, seed);
        let inner = BoxRegion::centered(3);
        for c in Color::ALL {
            let within = edges_of(inner, c.lattice());
            let l = label_clusters(&cfg, &within, c).unwrap();
            let mut by_id: BTreeMap<Vertex, Vec<Vertex>> = BTreeMap::new();
            for &(v, id) in l.entries() {
                by_id.entry(id).or_default().push(v);
            }
            let mut uf: Vec<Vec<Vertex>> = by_id.into_values().collect();
            uf.sort();
            prop_assert_eq!(uf, bfs_clusters(&cfg, &within, c));
        }
    }

    #[test]
    fn opening_an_edge_keeps_connections(seed in any::<u64>(), pick in any::<usize>()) {
        let cfg = sample(4, seed);
        let edges = cfg.region().edges();
        let mut more = cfg.clone();
        more.set(edges[pick % edges.len()], true).unwrap();
        let before = label_clusters(&cfg, &edges, Color::O).unwrap();
        let after = label_clusters(&more, &edges, Color::O).unwrap();
        for &(v, id) in before.entries() {
            prop_assert!(after.same_cluster(v, id));
        }
    }

    #[test]
    fn exactly_one_crossing(seed in any::<u64>(), n in 1u32..7) {
        let cfg = sample_critical(BoxRegion::new(Vertex::new(0, 0), n + 2), RngSeed::new(seed, 1));
        let n = n as i32;
        let open = crossing(&cfg, Rect::new(0, 0, n + 1, n).unwrap(), CrossDirection::Horizontal, Color::O).unwrap();
        let closed = crossing(&cfg, Rect::new(0, -1, n, n).unwrap(), CrossDirection::Vertical, Color::CStar).unwrap();
        prop_assert!(open != closed);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn arm_events_are_cyclic_and_flip_covariant(seed in any::<u64>()) {
        let cfg = sample(9, seed);
        let flipped = cfg.flip_all();
        let a = Annulus::centered(2, 8).unwrap();
        for s in polychromatic(3) {
            let base = detect_arms(&cfg, a, &s).unwrap();
            for j in 1..s.len() {
                prop_assert_eq!(detect_arms(&cfg, a, &s.rotate(j)).unwrap(), base);
            }
            prop_assert_eq!(detect_arms(&flipped, a, &s.bar()).unwrap(), base);
            // nested annuli
            if base {
                prop_assert!(detect_arms(&cfg, Annulus::centered(3, 6).unwrap(), &s).unwrap());
            }
        }
    }

    #[test]
    fn separated_implies_plain(seed in any::<u64>()) {
        let cfg = sample(25, seed);
        let a = Annulus::centered(2, 24).unwrap();
        for s in [seq("OC*"), seq("O"), seq("OO*")] {
            if detect_separated(&cfg, a, &s, 5).unwrap() {
                prop_assert!(detect_arms(&cfg, a, &s).unwrap());
            }
        }
    }

    #[test]
    fn shift_on_arm_regions(seed in any::<u64>(), inner in any::<u64>()) {
        let a = Annulus::centered(2, 8).unwrap();
        let cfg = sample(9, seed);
        let Some(w) = extract_canonical_arms(&cfg, a, &seq("OC*")).unwrap() else { return Ok(()) };
        let region = complement_region(&cfg, a, &w.arms).unwrap();
        for arm in &w.arms {
            if arm.path.lattice() == Lattice::Primal {
                prop_assert!(arm.edges().iter().all(|e| !region.edges().contains(*e)));
            }
        }
        let s = OrderedRegion::from_region(&region);
        let c = s.classification();
        prop_assert_eq!(c.len(), region.len());
        prop_assert_eq!(c.e0.len(), c.e2.len());
        prop_assert_eq!(region.len(), c.e1.len() + 2 * c.e2.len());
        let mut all: Vec<Edge> = c.e0.iter().chain(&c.e1).chain(&c.e2).copied().collect();
        all.sort();
        prop_assert_eq!(all, region.edges().to_vec());
        let other = sample_critical(cfg.region(), RngSeed::new(inner, 3));
        let t = apply_t(&other, &s).unwrap();
        prop_assert_eq!(apply_t_inverse(&t, &s).unwrap(), other.clone());
        prop_assert_eq!(apply_t(&apply_t_inverse(&other, &s).unwrap(), &s).unwrap(), other);
    }

    #[test]
    fn star_and_bar_are_involutions(cs in proptest::collection::vec(0usize..4, 1..8)) {
        let s = ColorSequence::new(cs.into_iter().map(|i| Color::ALL[i]).collect()).unwrap();
        prop_assert_eq!(s.star().star(), s.clone());
        prop_assert_eq!(s.bar().bar(), s.clone());
        prop_assert_eq!(s.star().bar(), s.bar().star());
        prop_assert_eq!(s.to_string().parse::<ColorSequence>().unwrap(), s.clone());
        prop_assert_eq!(s.switch_last().get(s.len() - 1), s.get(s.len() - 1).bar().star());
    }
}

#[test]
fn boundary_sizes() {
    for n in 1..=64 {
        assert_eq!(boundary_edges(Vertex::new(3, -2), n).unwrap().len(), 8 * n as usize);
    }
}

/// `U` depends only on statuses outside it: resampling its interior leaves
/// the extracted arms and the region unchanged.
#[test]
fn switch_region_ignores_its_interior() {
    let a = Annulus::centered(4, 32).unwrap();
    let s = seq("OC*C*");
    let mut checked = 0;
    for t in 0..400 {
        let cfg = sample_critical(BoxRegion::centered(33), RngSeed::new(77, t));
        let Some(arms) = extremal_arms(&cfg, a, &s).unwrap() else { continue };
        let Ok(u) = complement_region(&cfg, a, &arms) else { continue };
        let noise = sample_critical(cfg.region(), RngSeed::new(78, t));
        let mut changed = cfg.clone();
        for e in u.interior().iter() {
            changed.set(e, noise.is_open(e).unwrap()).unwrap();
        }
        let again = extremal_arms(&changed, a, &s).unwrap().expect("arms survive");
        assert_eq!(again, arms, "sample {t}");
        assert_eq!(complement_region(&changed, a, &again).unwrap().edges(), u.edges());
        checked += 1;
    }
    assert!(checked > 30, "{checked}");
}

#[test]
fn edge_sets_round_trip() {
    let b = BoxRegion::centered(3);
    let cfg = sample(3, 5);
    let open: Vec<Edge> = cfg.iter().filter(|(_, o)| *o).map(|(e, _)| e).collect();
    let set = EdgeSet::from_edges(b, open.iter().copied()).unwrap();
    assert_eq!(set.to_vec(), open);
    assert_eq!(Configuration::from_fn(b, |e| set.contains(e)), cfg);
}
