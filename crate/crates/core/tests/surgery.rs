use std::collections::BTreeMap;

use flagpoly::nestohedra::{non_nestohedron_certificate, path_building_set, nestohedron_graph};
use flagpoly::surgery::{
    apply_sequence, boundary, expected_boundary_d, find_shaving_sequence, prism, verify_proposition1,
    verify_theorem2, Strategy,
};
use flagpoly::{build_type_a, build_type_d, canonical_form, clique_f_vector, is_isomorphic, CompatibilityGraph};

fn names(pairs: &[(&str, usize)]) -> BTreeMap<String, usize> {
    pairs.iter().map(|&(k, v)| (k.to_string(), v)).collect()
}

#[test]
fn expected_census_for_small_ranks() {
    let t4 = expected_boundary_d(4).unwrap();
    assert_eq!(t4.by_name(), names(&[("As^3", 12), ("As^1 x As^1 x As^1", 4)]));
    let t5 = expected_boundary_d(5).unwrap();
    assert_eq!(
        t5.by_name(),
        names(&[("D^4", 5), ("As^1 x As^3", 5), ("As^1 x As^1 x As^2", 5), ("As^4", 10)])
    );
    for n in 4..=8 {
        assert_eq!(expected_boundary_d(n).unwrap().total(), n * n);
    }
}

#[test]
fn type_d_boundary_census_for_n_4_and_5() {
    for n in [4, 5] {
        let r = verify_proposition1(n).unwrap();
        assert!(r.holds(), "n = {n}: {:?}", r.mismatches);
        assert_eq!(r.actual.total(), n * n);
    }
}

#[test]
fn boundary_totals_are_facet_counts() {
    for g in [build_type_a(4).unwrap(), build_type_d(5).unwrap(), CompatibilityGraph::cube(4).unwrap()] {
        let f = clique_f_vector(&g).unwrap();
        assert_eq!(boundary(&g).unwrap().total() as u64, f.get(g.dimension() - 1));
    }
}

#[test]
fn certificates() {
    let d4 = non_nestohedron_certificate(&build_type_d(4).unwrap()).unwrap().unwrap();
    assert_eq!(d4.indecomposable_facets.len(), 12);
    assert_eq!(d4.threshold, 11);
    assert!(non_nestohedron_certificate(&build_type_a(4).unwrap()).unwrap().is_none());
    assert!(non_nestohedron_certificate(&CompatibilityGraph::cycle(4).unwrap()).unwrap().is_none());
    let p = nestohedron_graph(&path_building_set(6).unwrap()).unwrap();
    assert!(non_nestohedron_certificate(&p).unwrap().is_none());
    let triangle = CompatibilityGraph::unlabeled(2, 3, [(0, 1), (1, 2), (0, 2)]).unwrap();
    assert!(non_nestohedron_certificate(&triangle).is_err());
}

#[test]
fn prism_of_d3_is_multiplicative() {
    let p = prism(&build_type_d(3).unwrap()).unwrap();
    assert_eq!((p.len(), p.dimension()), (11, 4));
    let f = clique_f_vector(&p).unwrap().to_polynomial().unwrap();
    let expected = clique_f_vector(&build_type_a(3).unwrap())
        .unwrap()
        .to_polynomial()
        .unwrap()
        .checked_mul(&vec![2, 1].into())
        .unwrap();
    assert_eq!(f, expected);
}

#[test]
fn cube_to_associahedron() {
    let cube = CompatibilityGraph::cube(3).unwrap();
    let a3 = build_type_a(3).unwrap();
    let r = find_shaving_sequence(&cube, &a3, 3, Strategy::Full, None).unwrap();
    let seq = r.sequence.expect("the 3-cube shaves to As^3");
    assert_eq!(seq.len(), 3);
    let end = apply_sequence(&cube, &seq).unwrap();
    assert!(is_isomorphic(&end, &a3).is_some());
}

#[test]
fn prism_of_d3_to_d4_both_strategies() {
    let source = prism(&build_type_d(3).unwrap()).unwrap();
    let target = build_type_d(4).unwrap();
    for strategy in [Strategy::Guided, Strategy::Full] {
        let r = find_shaving_sequence(&source, &target, 5, strategy, None).unwrap();
        let seq = r.sequence.unwrap_or_else(|| panic!("{strategy:?} search failed"));
        assert_eq!(seq.len(), 5);
        assert_eq!(canonical_form(&apply_sequence(&source, &seq).unwrap()), canonical_form(&target));
    }
}

#[test]
fn prism_d3_shaves_to_d4_with_certificate() {
    let c = verify_theorem2(4, None).unwrap();
    assert_eq!(c.steps.len(), 5);
    assert!(c.reaches_target());
    assert!(c.gamma_identity_holds);
    let trace: Vec<Vec<i64>> = c.gamma_trace.iter().map(|g| g.coeffs().to_vec()).collect();
    assert_eq!(trace.first().unwrap(), &vec![1, 3, 0]);
    assert_eq!(trace.last().unwrap(), &vec![1, 8, 2]);

    let json = c.to_json();
    let keys: Vec<&String> = json.as_object().unwrap().keys().collect();
    assert_eq!(keys, ["gamma_trace", "source", "steps", "target_canonical"]);
    assert_eq!(json["steps"].as_array().unwrap().len(), 5);
    assert!(json["steps"][0]["f1"]["kind"].is_string());
}

#[test]
fn cube_shaves_to_as3_base_case() {
    let c = verify_theorem2(3, None).unwrap();
    assert_eq!(c.steps.len(), 3);
    assert!(c.reaches_target());
    assert_eq!(c.target_canonical, canonical_form(&build_type_a(3).unwrap()));
}

#[test]
fn search_respects_time_budget() {
    let source = prism(&build_type_d(4).unwrap()).unwrap();
    let target = build_type_d(5).unwrap();
    let r = find_shaving_sequence(&source, &target, 7, Strategy::Full, Some(std::time::Duration::from_millis(1)));
    assert!(matches!(r, Err(flagpoly::Error::BudgetExhausted { .. })));
}
