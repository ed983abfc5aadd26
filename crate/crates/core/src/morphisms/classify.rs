use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;

use super::ansatz::{AnsatzKind, GeometricAnsatz};
use super::constraints::{endo_constraints, twist_constraints, ConstraintSet, ConstraintSource};
use super::homomorphism::is_homomorphism;
use super::solver::{solve_geometric, SolutionFamily};
use super::upoly::UPoly;
use crate::error::{Error, Result};
use crate::scalar::{Bindings, Symbol, SymbolicScalar};
use crate::ternary::identity::algebra_label;
use crate::ternary::{verify_identity_symbolic, Algebra, LinearMap, QParam};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyClass {
    /// Holds for every value of the free parameters.
    Nontrivial,
    /// Needs a parameter condition, or left equations unsettled.
    Conditional,
    /// Some map of the family is identically zero.
    Trivial,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassifiedFamily {
    pub class: FamilyClass,
    pub solution: SolutionFamily,
    /// The ansatz maps with the family substituted.
    pub maps: Vec<LinearMap>,
    /// For a specialized algebra: the condition the same family needs when
    /// the parameters are left free.
    pub generic_condition: Option<String>,
}

impl ClassifiedFamily {
    /// Coarse name of the twist shape: `beta` when only the `Q -> R`
    /// amplitudes survive, `scaling` when both maps are equal multiples of
    /// the identity, `diagonal` for other diagonal maps, else `mixed`.
    /// `None` outside the 2×2 twist ansatz.
    pub fn shape(&self) -> Option<&'static str> {
        if !self.solution.assignments.contains_key(&Symbol::new("a1")) {
            return None;
        }
        let live = |u: &str| {
            self.solution
                .assignments
                .get(&Symbol::new(u))
                .is_some_and(|v| !v.is_zero())
        };
        let off_diag = ["b1", "b2", "c1", "c2"].map(&live);
        let diag = ["a1", "a2", "d1", "d2"].map(&live);
        let value = |u: &str| self.solution.assignments.get(&Symbol::new(u));
        Some(
            if off_diag == [true, true, false, false] && !diag.iter().any(|d| *d) {
                "beta"
            } else if !off_diag.iter().any(|d| *d) {
                if value("a1") == value("d1") && value("a2") == value("d2") {
                    "scaling"
                } else {
                    "diagonal"
                }
            } else {
                "mixed"
            },
        )
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Classification {
    pub algebra: String,
    pub ansatz: String,
    pub constraints: ConstraintSet,
    pub families: Vec<ClassifiedFamily>,
}

impl Classification {
    pub fn of_class(&self, class: FamilyClass) -> impl Iterator<Item = &ClassifiedFamily> {
        self.families.iter().filter(move |f| f.class == class)
    }

    /// Whether every family that could be checked verified.
    pub fn all_verified(&self) -> bool {
        self.families
            .iter()
            .all(|f| f.solution.verified != Some(false))
    }
}

/// Geometric exponent `s` of the ansatz for each supported algebra.
fn ansatz_exponent(a: &Algebra) -> Result<i64> {
    match a.name() {
        "cfz" => Ok(0),
        "qvw" if a.specialization().q.is_none() => Ok(1),
        "qvw" => Err(Error::Precondition(
            "twist classification needs formal q".into(),
        )),
        other => Err(Error::Precondition(format!(
            "twist classification supports cfz and qvw, not {other}"
        ))),
    }
}

/// The algebras on which a conditional family has to hold: one per root
/// of its condition. `None` when the roots are not all Gaussian rational.
fn condition_instances(a: &Algebra, f: &SolutionFamily) -> Option<Vec<Algebra>> {
    if !f.unresolved.is_empty() {
        return None;
    }
    match f.conditions.as_slice() {
        [] => Some(vec![a.clone()]),
        [c] => {
            let syms = c.param_symbols();
            let p = syms.iter().next()?;
            if syms.len() != 1 || !a.free_parameters().contains(p) {
                return None;
            }
            let (roots, rest) = UPoly::from_scalar(c, p)?.roots();
            if !rest.is_constant() {
                return None;
            }
            roots
                .into_iter()
                .map(|r| {
                    let b = Bindings::new().param(p.as_str(), SymbolicScalar::constant(r));
                    a.specialize(&b).ok()
                })
                .collect()
        }
        _ => None,
    }
}

fn verify(a: &Algebra, ansatz: &GeometricAnsatz, f: &SolutionFamily) -> Result<Option<bool>> {
    let Some(instances) = condition_instances(a, f) else {
        return Ok(None);
    };
    for alg in instances {
        let clean = match ansatz.kind {
            AnsatzKind::Twist => {
                let t = ansatz.twist_pair(&ansatz.name, &f.assignments)?;
                verify_identity_symbolic(&alg, Some(&t))?.is_clean()
            }
            AnsatzKind::Endomorphism => {
                let m = ansatz.instantiate(&f.assignments)?;
                is_homomorphism(&alg, &m[0])?.is_clean()
            }
        };
        if !clean {
            return Ok(Some(false));
        }
    }
    Ok(Some(true))
}

/// Unknowns belonging to each ansatz map, in map order.
fn map_unknowns(ansatz: &GeometricAnsatz) -> Vec<Vec<Symbol>> {
    ansatz
        .maps
        .iter()
        .map(|m| {
            let used: BTreeSet<Symbol> = m
                .entries()
                .flat_map(|(_, _, amp)| amp.param_symbols())
                .collect();
            ansatz
                .unknowns
                .iter()
                .filter(|u| used.contains(*u))
                .cloned()
                .collect()
        })
        .collect()
}

fn zero_pattern(f: &SolutionFamily) -> Vec<bool> {
    f.assignments
        .values()
        .map(SymbolicScalar::is_zero)
        .collect()
}

/// `u1*u2*(c) = 0` for the family's nonzero unknowns.
fn raw_condition(f: &SolutionFamily) -> Option<String> {
    let c = f.conditions.first()?;
    let mut factors: Vec<String> = f.nonzero.iter().map(|u| u.to_string()).collect();
    factors.push(format!("({c})"));
    Some(format!("{} = 0", factors.join("*")))
}

fn classify(
    a: &Algebra,
    ansatz: &GeometricAnsatz,
    constraints: ConstraintSet,
) -> Result<Classification> {
    let groups = map_unknowns(ansatz);
    let solutions = solve_geometric(&constraints)?;
    let families = solutions
        .into_par_iter()
        .map(|mut s| {
            s.verified = verify(a, ansatz, &s)?;
            let class = if groups.iter().any(|g| s.vanishes_on(g)) {
                FamilyClass::Trivial
            } else if s.is_unconditional() {
                FamilyClass::Nontrivial
            } else {
                FamilyClass::Conditional
            };
            Ok(ClassifiedFamily {
                class,
                maps: ansatz.instantiate(&s.assignments)?,
                solution: s,
                generic_condition: None,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Classification {
        algebra: algebra_label(a),
        ansatz: ansatz.name.clone(),
        constraints,
        families,
    })
}

/// Copies onto families of a specialized algebra the conditions the same
/// branch needs with the parameters left free.
fn annotate(special: &mut Classification, generic: &Classification) {
    for f in &mut special.families {
        let pattern = zero_pattern(&f.solution);
        f.generic_condition = generic
            .families
            .iter()
            .filter(|g| zero_pattern(&g.solution) == pattern)
            .find_map(|g| raw_condition(&g.solution));
    }
}

/// All Hom-Nambu twists of `a` within the 2×2 geometric ansatz.
pub fn classify_twists(a: &Algebra, source: &ConstraintSource) -> Result<Classification> {
    let run = |alg: &Algebra| -> Result<Classification> {
        let ansatz = GeometricAnsatz::full_twist(ansatz_exponent(alg)?, &QParam::Formal);
        let c = twist_constraints(alg, &ansatz, source)?;
        classify(alg, &ansatz, c)
    };
    let mut out = run(a)?;
    if !a.specialization().params.is_empty() {
        annotate(&mut out, &run(&a.generic())?);
    }
    Ok(out)
}

/// Endomorphisms `Q_n ↦ a q^n Q_n` with `R_n` sent to `b q^n R_n` or to
/// `b q^n Q_n`; both shapes are solved.
pub fn solve_endo(a: &Algebra, source: &ConstraintSource) -> Result<Vec<Classification>> {
    let q = QParam::Formal;
    [
        GeometricAnsatz::diagonal_endo(1, &q),
        GeometricAnsatz::literal_endo(1, &q),
    ]
    .iter()
    .map(|ansatz| {
        let c = endo_constraints(a, ansatz, source)?;
        classify(a, ansatz, c)
    })
    .collect()
}
