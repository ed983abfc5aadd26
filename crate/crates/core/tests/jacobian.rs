use nambu_core::jacobian::{
    compose_substitution, identity_gamma, jacobian_bracket, jacobian_demo, jacobian_matrix,
    random_poly, shear_gamma, Poly3, SampleConfig,
};
use nambu_core::scalar::GaussianRational;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn shear_twist_passes_on_two_hundred_samples() {
    let report = jacobian_demo(shear_gamma(), SampleConfig::default()).unwrap();
    assert_eq!(report.config.samples, 200);
    assert!(report.is_clean(), "{report:?}");
}

#[test]
fn identity_twist_is_the_plain_bracket() {
    let report = jacobian_demo(
        identity_gamma(),
        SampleConfig {
            samples: 20,
            ..SampleConfig::default()
        },
    )
    .unwrap();
    assert!(report.is_clean());
}

#[test]
fn demo_is_deterministic() {
    let cfg = SampleConfig {
        samples: 10,
        ..SampleConfig::default()
    };
    let a = serde_json::to_string(&jacobian_demo(shear_gamma(), cfg.clone()).unwrap()).unwrap();
    let b = serde_json::to_string(&jacobian_demo(shear_gamma(), cfg).unwrap()).unwrap();
    assert_eq!(a, b);
}

fn arb_poly() -> impl Strategy<Value = Poly3> {
    any::<u64>().prop_map(|seed| random_poly(&mut ChaCha8Rng::seed_from_u64(seed), 2, 3))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn chain_rule(f in arb_poly(), g1 in arb_poly(), g2 in arb_poly(), g3 in arb_poly()) {
        let gamma = [g1, g2, g3];
        let lhs = compose_substitution(&f, &gamma).gradient();
        let grad = f.gradient().map(|d| d.compose(&gamma));
        let jg = jacobian_matrix(&gamma);
        for j in 0..3 {
            let mut rhs = Poly3::zero();
            for i in 0..3 {
                rhs = &rhs + &(&grad[i] * &jg[i][j]);
            }
            prop_assert_eq!(&lhs[j], &rhs);
        }
    }

    #[test]
    fn trilinear(f in arb_poly(), g in arb_poly(), h in arb_poly(), k in arb_poly(), c in -3i64..=3) {
        let c = GaussianRational::from_integer(c);
        let lhs = jacobian_bracket(&(&f + &k.scale(&c)), &g, &h);
        let rhs = &jacobian_bracket(&f, &g, &h) + &jacobian_bracket(&k, &g, &h).scale(&c);
        prop_assert_eq!(lhs, rhs);
    }
}
