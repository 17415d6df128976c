use crdyn_core::conjugacy::{check_conjugacy_segments, transport, Homeomorphism, PlMap};
use crdyn_core::corpus::{self, build, geometric_set, verify, Example, Params};
use crdyn_core::finite::witness;
use crdyn_core::numeric::{search_witness, DiagnosticConfig};
use crdyn_core::{
    classify, AnyRelation, FiniteRelation, IntervalSet, MinimalityKind, VertexSet, Witness,
};

#[test]
fn cycle_and_identity() {
    let c3 = FiniteRelation::new(3, [(0, 1), (1, 2), (2, 0)]).unwrap();
    assert!(classify(&c3).flags.iter().all(|(_, b)| b));
    assert!(witness(&c3, MinimalityKind::One).is_none());

    let id = FiniteRelation::new(2, [(0, 0), (1, 1)]).unwrap();
    assert!(classify(&id).flags.iter().all(|(_, b)| !b));
}

#[test]
fn star_is_refuted_by_its_centre() {
    let w = witness(&corpus::star3(), MinimalityKind::One).unwrap();
    assert_eq!(
        w,
        Witness::Subset {
            points: VertexSet::singleton(1)
        }
    );
}

#[test]
fn ex22_backward_witness_is_the_geometric_set() {
    let s = search_witness(&corpus::ex22(), MinimalityKind::InfBack).unwrap();
    assert_eq!(s.witness, Some(IntervalSet::point(1.0)));
    assert!(s
        .verified_candidates
        .iter()
        .any(|c| c.len() > 1 && c.hausdorff(&geometric_set(true)) < 1e-9));
}

#[test]
fn every_example_verifies_with_default_parameters() {
    for ex in Example::ALL {
        let named = build(ex.name(), &Params::default()).unwrap();
        let report = verify(&named);
        assert!(report.all_passed(), "{}: {:?}", ex.name(), report.facts);
    }
}

#[test]
fn files_round_trip() {
    for ex in Example::ALL {
        let named = build(ex.name(), &Params::default()).unwrap();
        let text = named.relation.to_json();
        let back = AnyRelation::from_json(&text).unwrap();
        assert_eq!(back.to_json(), text);
    }
}

#[test]
fn flipping_the_cross_changes_nothing() {
    let g = AnyRelation::Segments(corpus::cross());
    let flipped = transport(&g, &Homeomorphism::Pl(PlMap::flip())).unwrap();
    let AnyRelation::Segments(f) = flipped else {
        panic!("backend changed")
    };
    let a = f.image(&IntervalSet::point(0.5));
    assert_eq!(a, IntervalSet::unit());

    let cfg = DiagnosticConfig::default();
    let report = check_conjugacy_segments(&corpus::cross(), &PlMap::flip(), &cfg).unwrap();
    assert!(report.holds(), "{:?}", report.disagreements());
}
