use nambu_core::scalar::{Bindings, GaussianRational, SymbolicScalar};
use nambu_core::ternary::{
    brute_force_window, fi_residual, hfi_residual, verify_identity_symbolic, Element, Family,
    Generator, LinearMap, QParam, TwistPair,
};
use nambu_core::vw::{beta_twist, cfz_algebra, naive_witt_algebra, qvw_algebra, scaling_twist};

fn s(text: &str) -> SymbolicScalar {
    text.parse().unwrap()
}

fn slots(families: [Family; 5], degrees: [i64; 5]) -> [Element; 5] {
    std::array::from_fn(|i| Element::generator(Generator::new(families[i].clone(), degrees[i])))
}

fn sym_slots(families: [Family; 5]) -> [Element; 5] {
    let names = ["u", "v", "k", "m", "n"];
    std::array::from_fn(|i| Element::generator(Generator::sym(families[i].clone(), names[i])))
}

use Family::{Q, R};

#[test]
fn cfz_is_nambu_lie_at_plus_minus_two_i() {
    for z in ["2*i", "-2*i"] {
        let a = cfz_algebra(&s(z)).unwrap();
        let report = verify_identity_symbolic(&a, None).unwrap();
        assert!(report.is_clean(), "{report}");
    }
}

#[test]
fn cfz_symbolic_z_violations_vanish_at_two_i() {
    let a = cfz_algebra(&s("z")).unwrap();
    let report = verify_identity_symbolic(&a, None).unwrap();
    assert!(!report.is_clean());
    for z in ["2*i", "-2*i"] {
        let b = Bindings::new().param("z", s(z));
        for v in &report.violations {
            assert!(
                v.residual.substitute(&b).unwrap().is_zero(),
                "{}",
                v.pattern
            );
        }
    }
}

#[test]
fn cfz_residual_at_q0_q1_q2_q3_r4() {
    let a = cfz_algebra(&s("z")).unwrap();
    let r = fi_residual(&a, &slots([Q, Q, Q, Q, R], [0, 1, 2, 3, 4])).unwrap();
    // 16 (z^2 + 4) R_10
    let expected = Element::term(Generator::new(R, 10), s("16*z^2 + 64"));
    assert_eq!(r, expected);
}

#[test]
fn repeated_first_slots_give_zero() {
    let a = cfz_algebra(&s("z")).unwrap();
    let r = fi_residual(&a, &slots([Q, Q, R, Q, R], [3, 3, 1, -2, 5])).unwrap();
    assert!(r.is_zero());
}

#[test]
fn naive_witt_residual_matches_closed_form() {
    let a = naive_witt_algebra();
    let r = fi_residual(&a, &sym_slots([Q, Q, Q, Q, Q])).unwrap();
    let expected = s("-2*(k-m)*(k-n)*(m-n)*(-u+v)*(-n*u+u^2+m*(n-u-v)+k*(m+n-u-v)-n*v+u*v+v^2)");
    let g = Generator::new(Q, s("k+m+n+u+v").as_index_form().unwrap());
    assert_eq!(r, Element::term(g, expected));
}

#[test]
fn qvw_fi_residual_matches_closed_form() {
    let a = qvw_algebra(&s("z"), &QParam::Formal).unwrap();
    let r = fi_residual(&a, &sym_slots([Q, Q, Q, Q, Q])).unwrap();
    let pre = s("q^(k+m+n+u+v)*(u-v)");
    let q_part = s("q^(k+m+n)*(k-m)*(k-n)*(m-n) + q^(m+u+v)*(k-n)*(m-u)*(m-v) \
                    + q^(k+u+v)*(n-m)*(u-k)*(v-k) + q^(n+u+v)*(m-k)*(u-n)*(v-n)");
    let r_part = s(
        "(q^(k+m+n)*(k-m)*(k-n)*(m-n)*(k+m+n) + q^(k+u+v)*(n-m)*(u-k)*(v-k)*(k+u+v) \
                    + q^(m+u+v)*(k-n)*(m-u)*(m-v)*(m+u+v) + q^(n+u+v)*(m-k)*(u-n)*(v-n)*(n+u+v))*z",
    );
    let deg = s("k+m+n+u+v").as_index_form().unwrap();
    let mut expected = Element::term(Generator::new(Q, deg.clone()), &pre * &q_part);
    expected.add_term(Generator::new(R, deg), &pre * &r_part);
    assert_eq!(r, expected);
}

#[test]
fn hfi_with_identity_twist_is_fi() {
    let a = cfz_algebra(&s("z")).unwrap();
    let t = TwistPair::identity(a.families());
    let xs = sym_slots([Q, R, Q, Q, R]);
    assert_eq!(
        hfi_residual(&a, &t, &xs).unwrap(),
        fi_residual(&a, &xs).unwrap()
    );
}

#[test]
fn qvw_scaling_twist_at_two_i() {
    for z in ["2*i", "-2*i"] {
        let a = qvw_algebra(&s(z), &QParam::Formal).unwrap();
        let t = scaling_twist(&s("1"), &s("1"), &QParam::Formal);
        let report = verify_identity_symbolic(&a, Some(&t)).unwrap();
        assert!(report.is_clean(), "{report}");
    }
}

#[test]
fn qvw_beta_twist_for_symbolic_z_and_q() {
    let a = qvw_algebra(&s("z"), &QParam::Formal).unwrap();
    let t = beta_twist(&s("beta1"), &s("beta2"), &QParam::Formal);
    let report = verify_identity_symbolic(&a, Some(&t)).unwrap();
    assert!(report.is_clean(), "{report}");
    assert_eq!(report.checked, 32);
}

#[test]
fn window_cfz_two_i_is_clean() {
    let a = cfz_algebra(&s("z")).unwrap();
    let b = Bindings::new().param("z", s("2*i"));
    let report = brute_force_window(&a, None, -2..=2, &b).unwrap();
    assert_eq!(report.checked, 100_000);
    assert!(report.is_clean());
}

#[test]
fn window_cfz_z_one_has_violations() {
    let a = cfz_algebra(&s("z")).unwrap();
    let b = Bindings::new().param("z", s("1"));
    let report = brute_force_window(&a, None, -1..=1, &b).unwrap();
    assert!(!report.is_clean());
    assert!(report.violations[0].bindings.is_some());
}

#[test]
fn window_qvw_scaling_q_three() {
    let a = qvw_algebra(&s("z"), &QParam::Formal).unwrap();
    let t = scaling_twist(&s("1"), &s("1"), &QParam::Formal);
    let b = Bindings::new()
        .param("z", s("2*i"))
        .q(GaussianRational::from_integer(3));
    let report = brute_force_window(&a, Some(&t), -2..=2, &b).unwrap();
    assert!(report.is_clean());
}

#[test]
fn twist_with_unequal_maps_checks_every_pattern() {
    let a = qvw_algebra(&s("z"), &QParam::Formal).unwrap();
    let t = TwistPair::new(
        "mixed",
        LinearMap::identity(a.families()),
        beta_twist(&s("1"), &s("1"), &QParam::Formal).alpha1,
    );
    let report = verify_identity_symbolic(&a, Some(&t)).unwrap();
    assert_eq!(report.checked, 32);
}
