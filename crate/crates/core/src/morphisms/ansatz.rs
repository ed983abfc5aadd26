use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::Result;
use crate::scalar::{Symbol, SymbolicScalar};
use crate::ternary::{Family, LinearMap, QParam, TwistPair};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AnsatzKind {
    Endomorphism,
    Twist,
}

/// Linear maps whose coefficient sequences are geometric, `c · q^(s·n)`,
/// with the amplitudes `c` left as unknown parameters.
///
/// An amplitude is either identically zero or never zero, which is the
/// global-support hypothesis in this setting.
#[derive(Clone, Debug)]
pub struct GeometricAnsatz {
    pub name: String,
    pub kind: AnsatzKind,
    pub maps: Vec<LinearMap>,
    /// Unknown amplitudes in case-split order.
    pub unknowns: Vec<Symbol>,
}

fn unknown(name: &str) -> SymbolicScalar {
    SymbolicScalar::param(name)
}

impl GeometricAnsatz {
    /// `α_i(Q_n) = a_i q^(sn) Q_n + b_i q^(sn) R_n`,
    /// `α_i(R_n) = c_i q^(sn) Q_n + d_i q^(sn) R_n`, for `i = 1, 2`.
    pub fn full_twist(s: i64, q: &QParam) -> Self {
        let maps = [1, 2]
            .map(|i| {
                let mut m = LinearMap::zero().with_q(q.clone());
                m.set(Family::Q, Family::Q, s, unknown(&format!("a{i}")));
                m.set(Family::Q, Family::R, s, unknown(&format!("b{i}")));
                m.set(Family::R, Family::Q, s, unknown(&format!("c{i}")));
                m.set(Family::R, Family::R, s, unknown(&format!("d{i}")));
                m
            })
            .to_vec();
        let unknowns = ["a1", "a2", "b1", "b2", "c1", "c2", "d1", "d2"]
            .map(Symbol::new)
            .to_vec();
        GeometricAnsatz {
            name: "twist 2x2".into(),
            kind: AnsatzKind::Twist,
            maps,
            unknowns,
        }
    }

    /// `α_i(X_n) = a_i q^(sn) X_n` on every family.
    pub fn diagonal_twist(families: &[Family], s: i64, q: &QParam) -> Self {
        let maps = [1, 2]
            .map(|i| {
                LinearMap::diagonal(
                    families
                        .iter()
                        .map(|f| (f.clone(), unknown(&format!("a{i}")), s)),
                )
                .with_q(q.clone())
            })
            .to_vec();
        GeometricAnsatz {
            name: "twist diagonal".into(),
            kind: AnsatzKind::Twist,
            maps,
            unknowns: vec![Symbol::new("a1"), Symbol::new("a2")],
        }
    }

    /// `f(Q_n) = a q^(sn) Q_n`, `f(R_n) = b q^(sn) R_n`.
    pub fn diagonal_endo(s: i64, q: &QParam) -> Self {
        let mut m = LinearMap::zero().with_q(q.clone());
        m.set(Family::Q, Family::Q, s, unknown("a"));
        m.set(Family::R, Family::R, s, unknown("b"));
        GeometricAnsatz {
            name: "endo R->R".into(),
            kind: AnsatzKind::Endomorphism,
            maps: vec![m],
            unknowns: vec![Symbol::new("a"), Symbol::new("b")],
        }
    }

    /// `f(Q_n) = a q^(sn) Q_n`, `f(R_n) = b q^(sn) Q_n`.
    pub fn literal_endo(s: i64, q: &QParam) -> Self {
        let mut m = LinearMap::zero().with_q(q.clone());
        m.set(Family::Q, Family::Q, s, unknown("a"));
        m.set(Family::R, Family::Q, s, unknown("b"));
        GeometricAnsatz {
            name: "endo R->Q".into(),
            kind: AnsatzKind::Endomorphism,
            maps: vec![m],
            unknowns: vec![Symbol::new("a"), Symbol::new("b")],
        }
    }

    /// Ansatz maps with the given amplitude values substituted.
    pub fn instantiate(&self, values: &BTreeMap<Symbol, SymbolicScalar>) -> Result<Vec<LinearMap>> {
        self.maps
            .iter()
            .map(|m| m.substitute_params(values))
            .collect()
    }

    pub fn twist_pair(
        &self,
        name: &str,
        values: &BTreeMap<Symbol, SymbolicScalar>,
    ) -> Result<TwistPair> {
        let mut maps = self.instantiate(values)?;
        let a2 = maps.pop().expect("two maps");
        let a1 = maps.pop().expect("two maps");
        Ok(TwistPair::new(name, a1, a2))
    }

    /// The ansatz with every amplitude set to zero.
    pub fn zero_values(&self) -> BTreeMap<Symbol, SymbolicScalar> {
        self.unknowns
            .iter()
            .map(|u| (u.clone(), SymbolicScalar::zero()))
            .collect()
    }
}
