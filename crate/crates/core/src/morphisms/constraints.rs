use std::collections::BTreeMap;
use std::fmt;
use std::ops::RangeInclusive;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::ansatz::{AnsatzKind, GeometricAnsatz};
use super::compiled::CompiledResidual;
use super::homomorphism::{homomorphism_residual, sorted_triples, triple_slots};
use super::linsys::RowBasis;
use crate::error::{Error, Result};
use crate::scalar::{fresh_indices, Symbol, SymbolicScalar};
use crate::ternary::identity::{family_patterns, hfi_residual, symbolic_slots};
use crate::ternary::{Algebra, Element, Generator};

const SHUFFLE_SEED: u64 = 0x006e_616d_6275;

/// Where the equations come from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConstraintSource {
    /// Coefficient extraction with the degrees kept symbolic.
    Symbolic,
    /// Instances at every admissible degree tuple in the window.
    Window(RangeInclusive<i64>),
}

impl fmt::Display for ConstraintSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConstraintSource::Symbolic => f.write_str("symbolic"),
            ConstraintSource::Window(w) => write!(f, "window {}..{}", w.start(), w.end()),
        }
    }
}

/// Polynomial equations `e = 0` in the ansatz unknowns and the algebra's
/// free parameters, kept as a reduced row echelon basis over monomials:
/// normalized and free of duplicates.
#[derive(Clone, Debug)]
pub struct ConstraintSet {
    pub unknowns: Vec<Symbol>,
    basis: RowBasis,
    pub source: String,
    /// Degree tuples (or symbolic patterns) instantiated.
    pub instances: usize,
    /// Whether every pattern reached the rank of its symbolic equations.
    pub saturated: bool,
}

impl ConstraintSet {
    pub fn from_equations(unknowns: Vec<Symbol>, equations: &[SymbolicScalar]) -> Self {
        let mut basis = RowBasis::new();
        for e in equations {
            basis.insert(e);
        }
        ConstraintSet {
            unknowns,
            basis,
            source: "given".into(),
            instances: equations.len(),
            saturated: true,
        }
    }

    pub fn equations(&self) -> Vec<SymbolicScalar> {
        self.basis.rows()
    }

    pub fn len(&self) -> usize {
        self.basis.rank()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.rank() == 0
    }

    /// Whether `eq = 0` is a linear consequence of the set.
    pub fn implies(&self, eq: &SymbolicScalar) -> bool {
        self.basis.contains(eq)
    }

    /// Equations left nonzero after substituting `values`.
    pub fn unsatisfied(
        &self,
        values: &BTreeMap<Symbol, SymbolicScalar>,
    ) -> Result<Vec<SymbolicScalar>> {
        let mut out = Vec::new();
        for e in self.basis.rows() {
            let v = e.substitute_params(values)?;
            if !v.is_zero() {
                out.push(v);
            }
        }
        Ok(out)
    }
}

impl Serialize for ConstraintSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            unknowns: Vec<&'a str>,
            source: &'a str,
            instances: usize,
            saturated: bool,
            equations: Vec<String>,
        }
        Repr {
            unknowns: self.unknowns.iter().map(Symbol::as_str).collect(),
            source: &self.source,
            instances: self.instances,
            saturated: self.saturated,
            equations: self
                .basis
                .rows()
                .iter()
                .map(|e| format!("{e} = 0"))
                .collect(),
        }
        .serialize(s)
    }
}

/// One family pattern: its symbolic residual and which slot degrees may
/// not coincide (coinciding generators there make the residual vanish).
struct Pattern {
    gens: Vec<Generator>,
    residual: Element,
    distinct_groups: &'static [&'static [usize]],
}

fn symbolic_rows(residual: &Element) -> Vec<SymbolicScalar> {
    residual
        .terms()
        .flat_map(|(_, c)| c.split_by_index_part().into_values())
        .collect()
}

fn admissible(p: &Pattern, point: &[i64]) -> bool {
    p.distinct_groups.iter().all(|group| {
        group.iter().enumerate().all(|(i, &a)| {
            group[i + 1..]
                .iter()
                .all(|&b| p.gens[a].family != p.gens[b].family || point[a] != point[b])
        })
    })
}

fn window_points(dims: usize, window: &RangeInclusive<i64>) -> Vec<Vec<i64>> {
    let mut points: Vec<Vec<i64>> = vec![Vec::new()];
    for _ in 0..dims {
        points = points
            .into_iter()
            .flat_map(|p| {
                window.clone().map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    points
}

/// Window instances for one pattern, stopping once the rows span what the
/// symbolic coefficients span.
fn window_basis(
    p: &Pattern,
    vars: &[Symbol],
    window: &RangeInclusive<i64>,
) -> Result<(RowBasis, usize, bool)> {
    let mut target = RowBasis::new();
    for r in symbolic_rows(&p.residual) {
        target.insert(&r);
    }
    let mut basis = RowBasis::new();
    if target.rank() == 0 {
        return Ok((basis, 0, true));
    }
    let compiled = CompiledResidual::new(&p.residual, vars)?;
    let mut points = window_points(vars.len(), window);
    points.shuffle(&mut ChaCha8Rng::seed_from_u64(SHUFFLE_SEED));
    let mut used = 0;
    for point in points.iter().filter(|pt| admissible(p, pt)) {
        used += 1;
        for row in compiled.rows_at(point)? {
            basis.insert(&row);
        }
        if basis.rank() == target.rank() {
            return Ok((basis, used, true));
        }
    }
    Ok((basis, used, false))
}

fn collect(
    unknowns: Vec<Symbol>,
    patterns: Vec<Pattern>,
    vars: &[Symbol],
    source: &ConstraintSource,
) -> Result<ConstraintSet> {
    let parts: Vec<(Vec<SymbolicScalar>, usize, bool)> = match source {
        ConstraintSource::Symbolic => patterns
            .iter()
            .map(|p| (symbolic_rows(&p.residual), 1, true))
            .collect(),
        ConstraintSource::Window(w) => {
            if w.end() - w.start() + 1 < 5 {
                return Err(Error::Precondition(format!(
                    "window {}..{} must contain at least 5 degrees",
                    w.start(),
                    w.end()
                )));
            }
            patterns
                .par_iter()
                .map(|p| {
                    let (b, used, sat) = window_basis(p, vars, w)?;
                    Ok((b.rows(), used, sat))
                })
                .collect::<Result<_>>()?
        }
    };
    let mut basis = RowBasis::new();
    let mut instances = 0;
    let mut saturated = true;
    for (rows, used, sat) in parts {
        for r in &rows {
            basis.insert(r);
        }
        instances += used;
        saturated &= sat;
    }
    Ok(ConstraintSet {
        unknowns,
        basis,
        source: source.to_string(),
        instances,
        saturated,
    })
}

/// Equations making the ansatz map an endomorphism of `a`.
pub fn endo_constraints(
    a: &Algebra,
    ansatz: &GeometricAnsatz,
    source: &ConstraintSource,
) -> Result<ConstraintSet> {
    if ansatz.kind != AnsatzKind::Endomorphism {
        return Err(Error::Precondition(format!(
            "{} is not an endomorphism ansatz",
            ansatz.name
        )));
    }
    let f = ansatz.maps[0].specialize(a.specialization())?;
    let patterns = sorted_triples(a.families())
        .par_iter()
        .map(|t| {
            let gens = triple_slots(t);
            Ok(Pattern {
                residual: homomorphism_residual(a, &f, &gens)?,
                gens: gens.to_vec(),
                distinct_groups: &[&[0, 1, 2]],
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let vars = ["k", "m", "n"].map(Symbol::new);
    collect(ansatz.unknowns.clone(), patterns, &vars, source)
}

/// Equations making the ansatz pair satisfy the twisted identity on `a`.
/// Every family pattern is used since the two maps may differ.
pub fn twist_constraints(
    a: &Algebra,
    ansatz: &GeometricAnsatz,
    source: &ConstraintSource,
) -> Result<ConstraintSet> {
    if ansatz.kind != AnsatzKind::Twist {
        return Err(Error::Precondition(format!(
            "{} is not a twist ansatz",
            ansatz.name
        )));
    }
    let t = ansatz.twist_pair(&ansatz.name, &BTreeMap::new())?;
    let patterns = family_patterns(a.families(), false)
        .par_iter()
        .map(|fp| {
            let gens = symbolic_slots(fp);
            let xs = gens.clone().map(Element::generator);
            Ok(Pattern {
                residual: hfi_residual(a, &t, &xs)?,
                gens: gens.to_vec(),
                distinct_groups: &[&[0, 1], &[2, 3, 4]],
            })
        })
        .collect::<Result<Vec<_>>>()?;
    collect(ansatz.unknowns.clone(), patterns, &fresh_indices(5), source)
}
