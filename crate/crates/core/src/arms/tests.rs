use alloc::vec;
use alloc::vec::Vec;

use super::*;
use crate::config::{sample_critical, RngSeed};
use crate::lattice::BoxRegion;

fn seq(s: &str) -> ColorSequence {
    s.parse().unwrap()
}

fn sample(radius: u32, seed: u64, stream: u64) -> Configuration {
    sample_critical(BoxRegion::centered(radius), RngSeed { seed, stream })
}

fn polychromatic(max_k: usize) -> Vec<ColorSequence> {
    (1..=max_k).flat_map(ColorSequence::all_cyclic_classes).filter(|s| s.is_polychromatic()).collect()
}

#[test]
fn all_open_examples() {
    let cfg = Configuration::all_open(BoxRegion::centered(5));
    let a = Annulus::centered(1, 4).unwrap();
    assert!(detect_arms(&cfg, a, &seq("O")).unwrap());
    assert!(!detect_arms(&cfg, a, &seq("C*")).unwrap());
    assert!(!detect_arms(&cfg, a, &seq("OC*")).unwrap());
}

#[test]
fn all_closed_two_dual_arms() {
    let cfg = Configuration::all_closed(BoxRegion::centered(5));
    let a = Annulus::centered(1, 4).unwrap();
    let s = seq("C*C*");
    let w = find_arms(&cfg, a, &s).unwrap().unwrap();
    w.check(&cfg, &s).unwrap();
    assert!(detect_arms_oracle(&cfg, a, &s).unwrap().is_some());
}

#[test]
fn upper_half_open() {
    let cfg = Configuration::from_fn(BoxRegion::centered(5), |e| e.base.y > 0);
    let a = Annulus::centered(1, 4).unwrap();
    let s = seq("OC*");
    assert!(detect_arms(&cfg, a, &s).unwrap());
    let w = detect_arms_oracle(&cfg, a, &s).unwrap().unwrap();
    w.check(&cfg, &s).unwrap();
}

#[test]
fn radii_preconditions() {
    let cfg = Configuration::all_open(BoxRegion::centered(5));
    assert!(matches!(
        detect_arms(&cfg, Annulus::centered(1, 4).unwrap(), &seq("OOOOOOOOO")),
        Err(Error::InvalidRadii { .. })
    ));
    assert!(matches!(detect_arms(&cfg, Annulus::centered(0, 4).unwrap(), &seq("O")), Err(Error::InvalidRadii { .. })));
}

#[test]
fn oracle_agrees_small() {
    let a = Annulus::centered(1, 4).unwrap();
    let sigmas = polychromatic(4);
    for t in 0..150 {
        let cfg = sample(5, 11, t);
        for s in &sigmas {
            let fast = find_arms(&cfg, a, s).unwrap();
            let slow = detect_arms_oracle(&cfg, a, s).unwrap();
            assert_eq!(fast.is_some(), slow.is_some(), "sample {t} sigma {s}");
            if let Some(w) = fast {
                w.check(&cfg, s).unwrap();
            }
            if let Some(w) = slow {
                w.check(&cfg, s).unwrap();
            }
        }
    }
}

#[test]
fn rotation_and_flip() {
    let a = Annulus::centered(2, 8).unwrap();
    for t in 0..40 {
        let cfg = sample(9, 12, t);
        let flipped = cfg.flip_all();
        for s in polychromatic(3) {
            let base = detect_arms(&cfg, a, &s).unwrap();
            for j in 1..s.len() {
                assert_eq!(detect_arms(&cfg, a, &s.rotate(j)).unwrap(), base);
            }
            assert_eq!(detect_arms(&flipped, a, &s.bar()).unwrap(), base);
        }
    }
}

#[test]
fn nesting() {
    for t in 0..40 {
        let cfg = sample(9, 13, t);
        for s in polychromatic(3) {
            if detect_arms(&cfg, Annulus::centered(1, 8).unwrap(), &s).unwrap() {
                assert!(detect_arms(&cfg, Annulus::centered(2, 6).unwrap(), &s).unwrap());
            }
        }
    }
}

#[test]
fn landing_examples() {
    let a = Annulus::centered(2, 6).unwrap();
    let full_in = LandingSequence::full(a.center, 2);
    let full_out = LandingSequence::full(a.center, 6);
    let open = Configuration::all_open(BoxRegion::centered(7));
    let east = LandingSequence::arcs(a.center, 2, &[(14, 4)]).unwrap();
    assert!(detect_arms_landing(&open, a, &seq("O"), &east, &full_out).unwrap());
    let s = seq("OC*");
    let inner = LandingSequence::arcs(a.center, 2, &[(0, 8), (8, 8)]).unwrap();
    let outer = LandingSequence::arcs(a.center, 6, &[(0, 24), (24, 24)]).unwrap();
    for t in 0..60 {
        let cfg = sample(7, 14, t);
        let plain = detect_arms(&cfg, a, &seq("O")).unwrap();
        assert_eq!(detect_arms_landing(&cfg, a, &seq("O"), &full_in, &full_out).unwrap(), plain);
        if let Some(w) = find_arms_landing(&cfg, a, &s, &inner, &outer).unwrap() {
            w.check(&cfg, &s).unwrap();
            assert!(detect_arms(&cfg, a, &s).unwrap());
        }
    }
}

#[test]
fn landing_validation() {
    let c = Vertex::new(0, 0);
    assert!(LandingSequence::arcs(c, 2, &[(0, 4), (2, 4)]).is_err());
    assert!(LandingSequence::arcs(c, 2, &[(8, 4), (0, 4)]).is_ok());
    assert!(LandingSequence::arcs(c, 2, &[(0, 2), (8, 2), (4, 2)]).is_err());
    assert!(LandingSequence::new(c, 2, vec![vec![Edge::h(0, 0)]]).is_err());
}

#[test]
fn extraction_is_deterministic_and_valid() {
    let open = Configuration::all_open(BoxRegion::centered(9));
    let a = Annulus::centered(2, 8).unwrap();
    let one = extract_canonical_arms(&open, a, &seq("O")).unwrap().unwrap();
    assert_eq!(one, extract_canonical_arms(&open, a, &seq("O")).unwrap().unwrap());
    assert_eq!(one.arms.len(), 1);
    let s = seq("OC*O");
    for t in 0..60 {
        let cfg = sample(9, 15, t);
        let got = extract_canonical_arms(&cfg, a, &s).unwrap();
        assert_eq!(got.is_some(), detect_arms(&cfg, a, &s).unwrap());
        if let Some(w) = got {
            w.check(&cfg, &s).unwrap();
        }
        if let Some(w) = extract_greedy(&cfg, a, &s).unwrap() {
            w.check(&cfg, &s).unwrap();
        }
    }
}

#[test]
fn separated_implies_event() {
    let a = Annulus::centered(2, 24).unwrap();
    let s = seq("OC*");
    assert!(matches!(detect_separated(&sample(25, 0, 0), a, &s, 4), Err(Error::SeparationTooSmall(4))));
    for t in 0..30 {
        let cfg = sample(25, 16, t);
        let plain = detect_arms(&cfg, a, &s).unwrap();
        if let Some(w) = separated_witness(&cfg, a, &s, 5).unwrap() {
            assert!(plain);
            w.check(&cfg, &s).unwrap();
        }
        assert_eq!(detect_separated(&cfg, a, &seq("O"), 5).unwrap(), detect_arms(&cfg, a, &seq("O")).unwrap());
        if let Some(b) = locate_bottleneck(&cfg, a, &s, 5).unwrap() {
            assert!(!detect_separated(&cfg, a, &s, 5).unwrap());
            assert!(Annulus::centered(4, 12).unwrap().contains_edge(b.edge));
            let (p, q) = b.edge.endpoints();
            assert_eq!(b.d as i32, a.norm(p).min(a.norm(q)) - 2);
            assert_eq!(b.outer, b.d / 2);
        }
    }
}

#[test]
fn six_arm_examples() {
    let open = Configuration::all_open(BoxRegion::centered(10));
    assert!(!detect_six_arm(&open, Edge::h(0, 0), 1, 8).unwrap());
    let five = seq("OC*OC*O");
    for t in 0..30 {
        let cfg = sample(10, 17, t);
        if detect_six_arm(&cfg, Edge::h(0, 0), 1, 8).unwrap() {
            assert!(detect_arms(&cfg, Annulus::centered(1, 8).unwrap(), &five).unwrap());
        }
    }
}

#[test]
fn wedge_arms_are_valid() {
    let a = Annulus::centered(2, 16).unwrap();
    let s = seq("OC*C*");
    let mut found = 0;
    for t in 0..40 {
        let cfg = sample(17, 18, t);
        if let Some(arms) = wedge::extremal_arms(&cfg, a, &s).unwrap() {
            found += 1;
            assert_eq!(arms.len(), 2);
            let w = ArmWitness { annulus: a, arms: arms.clone() };
            w.check(&cfg, &seq("OC*")).unwrap();
        }
    }
    assert!(found > 0);
}

#[test]
fn nested_matches_separate_calls() {
    let sigmas = [seq("O"), seq("OC*"), seq("OC*C*"), seq("OOC*"), seq("OC*OC*"), seq("OCO*C*")];
    let outer = [8, 5, 12, 6];
    for t in 0..60 {
        let cfg = sample(13, 19, t);
        let got = detect_arms_nested(&cfg, Vertex::new(0, 0), 2, &outer, &sigmas).unwrap();
        for (i, s) in sigmas.iter().enumerate() {
            for (j, &big) in outer.iter().enumerate() {
                assert_eq!(got[i][j], detect_arms(&cfg, Annulus::centered(2, big).unwrap(), s).unwrap(), "{t} {s} {big}");
            }
        }
    }
}
