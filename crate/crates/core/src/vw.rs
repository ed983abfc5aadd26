//! Built-in algebras and twists: the ternary Virasoro-Witt family, its
//! q-deformation, the naive ternary Witt bracket, and the standard twists.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::morphisms::is_homomorphism;
use crate::scalar::{Bindings, Symbol, SymbolicScalar};
use crate::ternary::{
    sorted_rule, Algebra, Element, Family, Generator, LinearMap, QParam, TwistPair,
};

fn deg(g: &Generator) -> SymbolicScalar {
    SymbolicScalar::from_index_form(&g.degree)
}

/// The four bracket shapes on family-sorted arguments, each multiplied by
/// `q^(k+m+n)` when `deformed`.
fn vw_rule(deformed: bool) -> Arc<crate::ternary::BracketRule> {
    sorted_rule(move |x, y, w| {
        let s = &(&x.degree + &y.degree) + &w.degree;
        let scale = if deformed {
            SymbolicScalar::q_pow(&s)
        } else {
            SymbolicScalar::one()
        };
        let (dx, dy, dw) = (deg(x), deg(y), deg(w));
        let q_s = Generator::new(Family::Q, s.clone());
        let r_s = Generator::new(Family::R, s);
        let mut out = Element::zero();
        match (&x.family, &y.family, &w.family) {
            (Family::Q, Family::Q, Family::Q) => {
                let c = &(&(&dx - &dy) * &(&dy - &dw)) * &(&dx - &dw);
                out.add_term(r_s, &c * &scale);
            }
            (Family::Q, Family::Q, Family::R) => {
                let c = &(&dx - &dy) * &scale;
                let z = SymbolicScalar::param("z");
                out.add_term(q_s, c.clone());
                out.add_term(r_s, &(&c * &z) * &dw);
            }
            (Family::Q, Family::R, Family::R) => {
                out.add_term(r_s, &(&dw - &dy) * &scale);
            }
            (Family::R, Family::R, Family::R) => {}
            (a, b, c) => {
                let bad = [a, b, c]
                    .into_iter()
                    .find(|f| !matches!(f, Family::Q | Family::R));
                return Err(Error::UnknownFamily {
                    algebra: if deformed { "qvw" } else { "cfz" }.into(),
                    family: bad.cloned().unwrap_or(Family::Q),
                });
            }
        }
        Ok(out)
    })
}

fn bind_z(a: Algebra, z: &SymbolicScalar) -> Result<Algebra> {
    if *z == SymbolicScalar::param("z") {
        return Ok(a);
    }
    a.specialize(&Bindings::new().param("z", z.clone()))
}

/// The ternary Virasoro-Witt algebra on `Q_n, R_n` with parameter `z`.
/// Pass `SymbolicScalar::param("z")` to keep `z` free.
pub fn cfz_algebra(z: &SymbolicScalar) -> Result<Algebra> {
    let a = Algebra::new(
        "cfz",
        vec![Family::Q, Family::R],
        vec![Symbol::new("z")],
        vw_rule(false),
    );
    bind_z(a, z)
}

/// The q-deformation: every structure constant gains `q^(k+m+n)`.
pub fn qvw_algebra(z: &SymbolicScalar, q: &QParam) -> Result<Algebra> {
    let a = Algebra::new(
        "qvw",
        vec![Family::Q, Family::R],
        vec![Symbol::new("z")],
        vw_rule(true),
    );
    let a = bind_z(a, z)?;
    match q {
        QParam::Formal => Ok(a),
        QParam::Value(v) => a.specialize(&Bindings::new().q(v.clone())),
    }
}

/// `[Q_k,Q_m,Q_n] = (m-k)(n-m)(n-k) Q_(k+m+n)`.
pub fn naive_witt_algebra() -> Algebra {
    let rule: Arc<crate::ternary::BracketRule> = Arc::new(|x, y, w| {
        for g in [x, y, w] {
            if g.family != Family::Q {
                return Err(Error::UnknownFamily {
                    algebra: "witt".into(),
                    family: g.family.clone(),
                });
            }
        }
        let (dx, dy, dw) = (deg(x), deg(y), deg(w));
        let c = &(&(&dy - &dx) * &(&dw - &dy)) * &(&dw - &dx);
        let s = &(&x.degree + &y.degree) + &w.degree;
        Ok(Element::term(Generator::new(Family::Q, s), c))
    });
    Algebra::new("witt", vec![Family::Q], vec![], rule)
}

/// `X_n ↦ λ q^n X_n` on both families.
pub fn scaling_map(lambda: &SymbolicScalar, q: &QParam) -> LinearMap {
    LinearMap::diagonal([
        (Family::Q, lambda.clone(), 1),
        (Family::R, lambda.clone(), 1),
    ])
    .with_q(q.clone())
}

/// `α_i(Q_n) = λ_i q^n Q_n`, `α_i(R_n) = λ_i q^n R_n`.
pub fn scaling_twist(lambda1: &SymbolicScalar, lambda2: &SymbolicScalar, q: &QParam) -> TwistPair {
    TwistPair::new("scaling", scaling_map(lambda1, q), scaling_map(lambda2, q))
}

/// `Q_n ↦ β q^n R_n`, `R_n ↦ 0`.
pub fn beta_map(beta: &SymbolicScalar, q: &QParam) -> LinearMap {
    let mut m = LinearMap::zero().with_q(q.clone());
    m.set(Family::Q, Family::R, 1, beta.clone());
    m
}

pub fn beta_twist(beta1: &SymbolicScalar, beta2: &SymbolicScalar, q: &QParam) -> TwistPair {
    TwistPair::new("beta", beta_map(beta1, q), beta_map(beta2, q))
}

/// Composition method: bracket `ρ ∘ [·,·,·]` twisted by `(ρ, ρ)`.
/// Fails when `ρ` is not an endomorphism of `a`.
pub fn compose_twist(a: &Algebra, rho: &LinearMap) -> Result<(Algebra, TwistPair)> {
    let report = is_homomorphism(a, rho)?;
    if let Some(v) = report.violations.first() {
        return Err(Error::NotEndomorphism {
            pattern: v.pattern.clone(),
        });
    }
    let composed = a.postcompose(rho, format!("{}∘ρ", a.name()));
    Ok((
        composed,
        TwistPair::new("composed", rho.clone(), rho.clone()),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::GaussianRational;

    fn g(f: Family, d: i64) -> Element {
        Element::generator(Generator::new(f, d))
    }

    fn s(text: &str) -> SymbolicScalar {
        text.parse().unwrap()
    }

    #[test]
    fn cfz_bracket_examples() {
        let a = cfz_algebra(&s("z")).unwrap();
        let r = a
            .bracket(&g(Family::Q, 1), &g(Family::Q, 2), &g(Family::Q, 3))
            .unwrap();
        assert_eq!(r, Element::term(Generator::new(Family::R, 6), s("-2")));

        let r = a
            .bracket(&g(Family::Q, 2), &g(Family::Q, 0), &g(Family::R, 1))
            .unwrap();
        let mut expected = Element::term(Generator::new(Family::Q, 3), s("2"));
        expected.add_term(Generator::new(Family::R, 3), s("2*z"));
        assert_eq!(r, expected);

        assert!(a
            .bracket(&g(Family::Q, 5), &g(Family::Q, 5), &g(Family::R, 0))
            .unwrap()
            .is_zero());

        let r = a
            .bracket(&g(Family::Q, 0), &g(Family::R, 1), &g(Family::R, 2))
            .unwrap();
        assert_eq!(r, g(Family::R, 3));
        assert!(a
            .bracket(&g(Family::R, 1), &g(Family::R, 2), &g(Family::R, 3))
            .unwrap()
            .is_zero());
    }

    #[test]
    fn qvw_bracket_examples() {
        let a = qvw_algebra(&s("z"), &QParam::Formal).unwrap();
        let r = a
            .bracket(&g(Family::Q, 1), &g(Family::Q, 2), &g(Family::Q, 3))
            .unwrap();
        assert_eq!(r, Element::term(Generator::new(Family::R, 6), s("-2*q^6")));
        let r = a
            .bracket(&g(Family::Q, 1), &g(Family::Q, 2), &g(Family::R, 0))
            .unwrap();
        assert_eq!(r, Element::term(Generator::new(Family::Q, 3), s("-q^3")));
        assert!(a
            .bracket(&g(Family::R, 0), &g(Family::R, 1), &g(Family::R, 2))
            .unwrap()
            .is_zero());
    }

    #[test]
    fn qvw_at_q_one_is_cfz() {
        let one = QParam::value(GaussianRational::from_integer(1)).unwrap();
        let a = qvw_algebra(&s("z"), &one).unwrap();
        let b = cfz_algebra(&s("z")).unwrap();
        assert!(a.structurally_equal(&b).unwrap());
    }

    #[test]
    fn q_zero_rejected() {
        assert_eq!(
            QParam::value(GaussianRational::from_integer(0)),
            Err(Error::ZeroQ)
        );
    }

    #[test]
    fn witt_examples() {
        let a = naive_witt_algebra();
        let r = a
            .bracket(&g(Family::Q, 0), &g(Family::Q, 1), &g(Family::Q, 2))
            .unwrap();
        assert_eq!(r, Element::term(Generator::new(Family::Q, 3), s("2")));
        assert!(a
            .bracket(&g(Family::Q, 0), &g(Family::Q, 0), &g(Family::Q, 2))
            .unwrap()
            .is_zero());
        assert!(a
            .bracket(&g(Family::Q, 0), &g(Family::R, 0), &g(Family::Q, 2))
            .is_err());
    }

    #[test]
    fn twist_examples() {
        let t = scaling_twist(&s("1"), &s("1"), &QParam::Formal);
        let img = t.alpha1.apply(&g(Family::Q, 3)).unwrap();
        assert_eq!(img, Element::term(Generator::new(Family::Q, 3), s("q^3")));

        let t = scaling_twist(&s("lambda1"), &s("lambda2"), &QParam::Formal);
        let img = t.alpha1.apply(&g(Family::R, 0)).unwrap();
        assert_eq!(
            img,
            Element::term(Generator::new(Family::R, 0), s("lambda1"))
        );

        let b = beta_twist(&s("beta1"), &s("beta2"), &QParam::Formal);
        let img = b.alpha1.apply(&g(Family::Q, 3)).unwrap();
        assert_eq!(
            img,
            Element::term(Generator::new(Family::R, 3), s("beta1*q^3"))
        );
        assert!(b.alpha1.compose(&b.alpha1).unwrap().is_zero());

        let one = QParam::value(GaussianRational::from_integer(1)).unwrap();
        let b = beta_twist(&s("beta1"), &s("beta2"), &one);
        let img = b
            .alpha1
            .apply_generator(&Generator::sym(Family::Q, "n"))
            .unwrap();
        assert_eq!(
            img,
            Element::term(Generator::sym(Family::R, "n"), s("beta1"))
        );
    }
}
