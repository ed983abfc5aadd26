use std::collections::BTreeMap;

use nambu_core::morphisms::{
    classify_twists, endo_constraints, is_homomorphism, solve_endo, solve_geometric, untwist,
    Classification, ConstraintSet, ConstraintSource, FamilyClass, GeometricAnsatz,
};
use nambu_core::scalar::{Symbol, SymbolicScalar};
use nambu_core::ternary::{verify_identity_symbolic, Family, LinearMap, QParam, TwistPair};
use nambu_core::vw::{
    beta_twist, cfz_algebra, compose_twist, qvw_algebra, scaling_map, scaling_twist,
};
use nambu_core::Error;

fn s(text: &str) -> SymbolicScalar {
    text.parse().unwrap()
}

fn values(pairs: &[(&str, &str)]) -> BTreeMap<Symbol, SymbolicScalar> {
    pairs.iter().map(|(k, v)| (Symbol::new(k), s(v))).collect()
}

const W3: ConstraintSource = ConstraintSource::Window(-3..=3);

/// Zero pattern of each nontrivial family, as the set of unknowns left nonzero.
fn shapes(c: &Classification, class: FamilyClass) -> Vec<Vec<String>> {
    let mut out: Vec<Vec<String>> = c
        .of_class(class)
        .map(|f| {
            f.solution
                .assignments
                .iter()
                .filter(|(_, v)| !v.is_zero())
                .map(|(k, _)| k.to_string())
                .collect()
        })
        .collect();
    out.sort();
    out
}

fn strings(v: &[&str]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}

#[test]
fn q_power_scaling_is_an_endomorphism_of_cfz() {
    let a = cfz_algebra(&s("z")).unwrap();
    assert!(is_homomorphism(&a, &scaling_map(&s("1"), &QParam::Formal))
        .unwrap()
        .is_clean());
    assert!(is_homomorphism(&a, &LinearMap::identity(a.families()))
        .unwrap()
        .is_clean());
}

#[test]
fn unequal_diagonal_scaling_fails_on_qqq() {
    let a = cfz_algebra(&s("z")).unwrap();
    let f = LinearMap::diagonal([(Family::Q, s("2"), 0), (Family::R, s("1"), 0)]);
    let report = is_homomorphism(&a, &f).unwrap();
    assert!(
        report
            .violations
            .iter()
            .any(|v| v.pattern == "(Q_k,Q_m,Q_n)"),
        "{report}"
    );
}

#[test]
fn endo_constraints_on_a_window() {
    let a = cfz_algebra(&s("z")).unwrap();
    let ansatz = GeometricAnsatz::diagonal_endo(1, &QParam::Formal);
    let c = endo_constraints(&a, &ansatz, &W3).unwrap();
    assert!(c.implies(&s("b - a^3")));
    assert!(c.unsatisfied(&ansatz.zero_values()).unwrap().is_empty());
    assert!(c
        .unsatisfied(&values(&[("a", "1"), ("b", "1")]))
        .unwrap()
        .is_empty());
    assert!(!c
        .unsatisfied(&values(&[("a", "2"), ("b", "1")]))
        .unwrap()
        .is_empty());
}

#[test]
fn short_window_is_rejected() {
    let a = cfz_algebra(&s("z")).unwrap();
    let ansatz = GeometricAnsatz::diagonal_endo(1, &QParam::Formal);
    let err = endo_constraints(&a, &ansatz, &ConstraintSource::Window(0..=3)).unwrap_err();
    assert!(matches!(err, Error::Precondition(_)));
}

#[test]
fn empty_constraints_leave_the_ansatz_free() {
    let c = ConstraintSet::from_equations(vec![Symbol::new("a"), Symbol::new("b")], &[]);
    let fams = solve_geometric(&c).unwrap();
    assert_eq!(fams.len(), 1);
    assert_eq!(fams[0].free().len(), 2);
}

#[test]
fn cfz_endomorphisms_include_q_power_scaling() {
    let a = cfz_algebra(&s("z")).unwrap();
    let shapes = solve_endo(&a, &W3).unwrap();
    let diag = &shapes[0];
    assert!(diag
        .of_class(FamilyClass::Nontrivial)
        .any(|f| f.solution.assignments == values(&[("a", "1"), ("b", "1")])));
    assert!(diag.all_verified());
    // R_n ↦ b q^n Q_n admits only the zero map
    assert!(shapes[1]
        .families
        .iter()
        .all(|f| f.class == FamilyClass::Trivial));
}

#[test]
fn qvw_symbolic_z_admits_only_the_beta_twist() {
    let a = qvw_algebra(&s("z"), &QParam::Formal).unwrap();
    let c = classify_twists(&a, &W3).unwrap();
    assert_eq!(
        shapes(&c, FamilyClass::Nontrivial),
        vec![strings(&["b1", "b2"])]
    );
    let conditional: Vec<_> = c.of_class(FamilyClass::Conditional).collect();
    assert_eq!(conditional.len(), 1);
    assert_eq!(conditional[0].solution.conditions, vec![s("z^2 + 4")]);
    assert!(c.all_verified());
}

#[test]
fn qvw_at_two_i_adds_the_scaling_family() {
    let a = qvw_algebra(&s("2*i"), &QParam::Formal).unwrap();
    let c = classify_twists(&a, &W3).unwrap();
    assert_eq!(
        shapes(&c, FamilyClass::Nontrivial),
        vec![strings(&["a1", "a2", "d1", "d2"]), strings(&["b1", "b2"])]
    );
    let scaling = c
        .of_class(FamilyClass::Nontrivial)
        .find(|f| !f.solution.assignments[&Symbol::new("a1")].is_zero())
        .unwrap();
    assert_eq!(scaling.solution.assignments[&Symbol::new("d1")], s("a1"));
    assert_eq!(
        scaling.generic_condition.as_deref(),
        Some("a1*a2*(4 + z^2) = 0")
    );
}

#[test]
fn cfz_beta_twist_has_constant_amplitudes() {
    let a = cfz_algebra(&s("z")).unwrap();
    let c = classify_twists(&a, &W3).unwrap();
    assert_eq!(
        shapes(&c, FamilyClass::Nontrivial),
        vec![strings(&["b1", "b2"])]
    );
    let beta = c.of_class(FamilyClass::Nontrivial).next().unwrap();
    assert_eq!(beta.maps[0].to_string(), "Q_n -> (b1)*R_n");
}

#[test]
fn larger_window_gives_the_same_families() {
    let a = qvw_algebra(&s("z"), &QParam::Formal).unwrap();
    let small = classify_twists(&a, &W3).unwrap();
    let large = classify_twists(&a, &ConstraintSource::Window(-5..=5)).unwrap();
    let sym = classify_twists(&a, &ConstraintSource::Symbolic).unwrap();
    let key = |c: &Classification| {
        c.families
            .iter()
            .map(|f| {
                (
                    f.solution.assignments.clone(),
                    f.solution.conditions.clone(),
                )
            })
            .collect::<Vec<_>>()
    };
    assert_eq!(key(&small), key(&large));
    assert_eq!(key(&small), key(&sym));
    assert!(small.constraints.saturated && large.constraints.saturated);
}

#[test]
fn untwisting_qvw_scaling_gives_cfz() {
    for z in ["2*i", "-2*i"] {
        let a = qvw_algebra(&s(z), &QParam::Formal).unwrap();
        let t = scaling_twist(&s("1"), &s("1"), &QParam::Formal);
        let u = untwist(&a, &t).unwrap();
        assert!(u.structurally_equal(&cfz_algebra(&s(z)).unwrap()).unwrap());
        assert!(verify_identity_symbolic(&u, None).unwrap().is_clean());
    }
}

#[test]
fn untwisting_by_identity_changes_nothing() {
    let a = qvw_algebra(&s("z"), &QParam::Formal).unwrap();
    let u = untwist(&a, &TwistPair::identity(a.families())).unwrap();
    assert!(u.structurally_equal(&a).unwrap());
}

#[test]
fn beta_twist_cannot_be_untwisted() {
    let a = qvw_algebra(&s("z"), &QParam::Formal).unwrap();
    let t = beta_twist(&s("beta1"), &s("beta1"), &QParam::Formal);
    match untwist(&a, &t) {
        Err(Error::NotUntwistable {
            nilpotent_order, ..
        }) => assert_eq!(nilpotent_order, Some(2)),
        other => panic!("expected NotUntwistable, got {other:?}"),
    }
}

#[test]
fn compose_then_untwist_round_trips() {
    for z in ["2*i", "-2*i"] {
        let a = cfz_algebra(&s(z)).unwrap();
        let rho = scaling_map(&s("1"), &QParam::Formal);
        let (composed, t) = compose_twist(&a, &rho).unwrap();
        assert!(verify_identity_symbolic(&composed, Some(&t))
            .unwrap()
            .is_clean());
        let back = untwist(&composed, &t).unwrap();
        assert!(back.structurally_equal(&a).unwrap());
    }
}

#[test]
fn inverse_of_an_automorphism_is_an_endomorphism() {
    let a = qvw_algebra(&s("2*i"), &QParam::Formal).unwrap();
    let alpha = scaling_map(&s("-1"), &QParam::Formal);
    assert!(is_homomorphism(&a, &alpha).unwrap().is_clean());
    let inv = alpha.inverse().unwrap();
    assert!(is_homomorphism(&a, &inv).unwrap().is_clean());
}
