//! Case-tree solver for constraint sets in geometric amplitudes.
//!
//! Unknowns are split zero / nonzero in their declared order. Once every
//! unknown that still occurs is decided, the remaining equations are
//! settled by linear elimination, Gaussian-rational roots of univariate
//! equations, and splitting off parameter content. Equations free of
//! unknowns become parameter conditions; a branch whose conditions have
//! no common root is pruned.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;
use serde::Serialize;

use super::constraints::ConstraintSet;
use super::upoly::UPoly;
use crate::error::Result;
use crate::scalar::{Monomial, Symbol, SymbolicScalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Status {
    Undecided,
    Zero,
    NonZero,
    /// Eliminated; `nonzero` records the branch hypothesis.
    Assigned {
        nonzero: bool,
    },
}

/// One consistent branch of the case tree.
#[derive(Clone, Debug, PartialEq)]
pub struct SolutionFamily {
    /// Decisions from the root, e.g. `a1 != 0`, `d1 = a1`.
    pub branch: Vec<String>,
    /// A value for every unknown; free unknowns map to themselves.
    pub assignments: BTreeMap<Symbol, SymbolicScalar>,
    /// Free unknowns assumed nonzero on this branch.
    pub nonzero: Vec<Symbol>,
    /// Parameter equations `c = 0` the family requires.
    pub conditions: Vec<SymbolicScalar>,
    /// Equations the solver could not settle.
    pub unresolved: Vec<SymbolicScalar>,
    /// Set once the family has been substituted back and checked.
    pub verified: Option<bool>,
}

impl SolutionFamily {
    pub fn is_unconditional(&self) -> bool {
        self.conditions.is_empty() && self.unresolved.is_empty()
    }

    /// Whether every listed unknown is identically zero.
    pub fn vanishes_on(&self, unknowns: &[Symbol]) -> bool {
        unknowns
            .iter()
            .all(|u| self.assignments.get(u).is_some_and(SymbolicScalar::is_zero))
    }

    pub fn free(&self) -> Vec<Symbol> {
        self.assignments
            .iter()
            .filter(|(u, v)| **v == SymbolicScalar::param_sym(u))
            .map(|(u, _)| u.clone())
            .collect()
    }
}

impl Serialize for SolutionFamily {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            branch: &'a [String],
            assignments: BTreeMap<&'a str, String>,
            nonzero: Vec<&'a str>,
            conditions: Vec<String>,
            unresolved: Vec<String>,
            verified: Option<bool>,
        }
        let eq = |v: &[SymbolicScalar]| v.iter().map(|e| format!("{e} = 0")).collect();
        Repr {
            branch: &self.branch,
            assignments: self
                .assignments
                .iter()
                .map(|(k, v)| (k.as_str(), v.to_string()))
                .collect(),
            nonzero: self.nonzero.iter().map(Symbol::as_str).collect(),
            conditions: eq(&self.conditions),
            unresolved: eq(&self.unresolved),
            verified: self.verified,
        }
        .serialize(s)
    }
}

#[derive(Clone, Debug)]
struct Node {
    order: Vec<Symbol>,
    eqs: Vec<SymbolicScalar>,
    status: BTreeMap<Symbol, Status>,
    values: BTreeMap<Symbol, SymbolicScalar>,
    conditions: Vec<SymbolicScalar>,
    path: Vec<String>,
}

fn monomial(exps: BTreeMap<Symbol, i32>) -> Monomial {
    Monomial::from_params(exps)
}

/// Clears negative exponents, divides out content in `units`, and makes
/// the result monic.
fn normalize(e: &SymbolicScalar, units: &BTreeSet<Symbol>) -> SymbolicScalar {
    if e.is_zero() {
        return e.clone();
    }
    let mut shift = BTreeMap::new();
    for sym in e.param_symbols() {
        let exps: Vec<i32> = e.terms().map(|(m, _)| m.param_exponent(&sym)).collect();
        let min = *exps.iter().min().expect("nonzero");
        if min < 0 || (min > 0 && units.contains(&sym)) {
            shift.insert(sym, -min);
        }
    }
    e.mul_monomial(&monomial(shift)).monic()
}

impl Node {
    fn unknown_set(&self) -> BTreeSet<Symbol> {
        self.order.iter().cloned().collect()
    }

    fn units(&self) -> BTreeSet<Symbol> {
        self.status
            .iter()
            .filter(|(_, s)| **s == Status::NonZero)
            .map(|(u, _)| u.clone())
            .collect()
    }

    fn assign(&mut self, u: &Symbol, v: SymbolicScalar, label: String) -> Result<()> {
        let map = BTreeMap::from([(u.clone(), v.clone())]);
        for e in &mut self.eqs {
            *e = e.substitute_params(&map)?;
        }
        for w in self.values.values_mut() {
            *w = w.substitute_params(&map)?;
        }
        let nonzero = matches!(
            self.status[u],
            Status::NonZero | Status::Assigned { nonzero: true }
        );
        self.status.insert(
            u.clone(),
            if v.is_zero() {
                Status::Zero
            } else {
                Status::Assigned { nonzero }
            },
        );
        self.values.insert(u.clone(), v);
        self.path.push(label);
        Ok(())
    }

    /// Normalizes equations, moves unknown-free ones to conditions, and
    /// reports whether the branch is still consistent.
    fn tidy(&mut self) -> bool {
        let unknowns = self.unknown_set();
        let units = self.units();
        let mut kept: Vec<SymbolicScalar> = Vec::new();
        for e in &self.eqs {
            let e = normalize(e, &units);
            if e.is_zero() {
                continue;
            }
            let syms = e.param_symbols();
            if syms.is_disjoint(&unknowns) {
                if e.as_constant().is_some() {
                    return false;
                }
                if !self.conditions.contains(&e) {
                    self.conditions.push(e);
                }
                continue;
            }
            // a single monomial in nonzero unknowns cannot vanish
            if e.num_terms() == 1 && syms.is_subset(&units) {
                return false;
            }
            if !kept.contains(&e) {
                kept.push(e);
            }
        }
        self.eqs = kept;
        for (u, s) in &self.status {
            if *s == (Status::Assigned { nonzero: true }) && self.values[u].is_zero() {
                return false;
            }
        }
        self.conditions_consistent()
    }

    fn conditions_consistent(&mut self) -> bool {
        let mut by_symbol: BTreeMap<Symbol, UPoly> = BTreeMap::new();
        let mut other = Vec::new();
        for c in &self.conditions {
            let syms = c.param_symbols();
            match (syms.len(), syms.iter().next()) {
                (1, Some(p)) => {
                    let poly = UPoly::from_scalar(c, p).expect("univariate");
                    let g = match by_symbol.get(p) {
                        Some(h) => h.gcd(&poly),
                        None => poly.monic(),
                    };
                    if g.is_constant() {
                        return false;
                    }
                    by_symbol.insert(p.clone(), g);
                }
                _ => other.push(c.clone()),
            }
        }
        self.conditions = by_symbol
            .iter()
            .map(|(p, g)| g.to_scalar(p))
            .chain(other)
            .collect();
        true
    }

    fn first_undecided(&self) -> Option<Symbol> {
        let present: BTreeSet<Symbol> = self.eqs.iter().flat_map(|e| e.param_symbols()).collect();
        self.order
            .iter()
            .find(|u| self.status[*u] == Status::Undecided && present.contains(*u))
            .cloned()
    }

    fn finish(&self, unresolved: Vec<SymbolicScalar>) -> SolutionFamily {
        let mut assignments = BTreeMap::new();
        let mut nonzero = Vec::new();
        for u in &self.order {
            let v = match self.status[u] {
                Status::Zero => SymbolicScalar::zero(),
                Status::Assigned { .. } => self.values[u].clone(),
                Status::NonZero => {
                    nonzero.push(u.clone());
                    SymbolicScalar::param_sym(u)
                }
                Status::Undecided => SymbolicScalar::param_sym(u),
            };
            assignments.insert(u.clone(), v);
        }
        SolutionFamily {
            branch: self.path.clone(),
            assignments,
            nonzero,
            conditions: self.conditions.clone(),
            unresolved,
            verified: None,
        }
    }
}

/// `e = u·a + b` with `u` occurring at most linearly; `None` otherwise.
fn linear_split(e: &SymbolicScalar, u: &Symbol) -> Option<(SymbolicScalar, SymbolicScalar)> {
    let mut a = SymbolicScalar::zero();
    let mut b = SymbolicScalar::zero();
    for (m, c) in e.terms() {
        match m.param_exponent(u) {
            0 => b.add_term(m.clone(), c.clone()),
            1 => {
                let mut exps = m.params().clone();
                exps.remove(u);
                a.add_term(monomial(exps), c.clone());
            }
            _ => return None,
        }
    }
    Some((a, b))
}

fn try_eliminate(node: &Node) -> Result<Option<Node>> {
    let units = node.units();
    for e in &node.eqs {
        for u in node.order.iter().rev() {
            if node.status[u] != Status::NonZero || !e.contains_param(u) {
                continue;
            }
            let Some((a, b)) = linear_split(e, u) else {
                continue;
            };
            if a.num_terms() != 1 || !a.param_symbols().is_subset(&units) || b.is_zero() {
                continue;
            }
            let v = -(&b * &a.try_inverse()?);
            let mut child = node.clone();
            let label = format!("{u} = {v}");
            if child.assign(u, v, label).is_ok() {
                return Ok(Some(child));
            }
        }
    }
    Ok(None)
}

/// Child nodes, plus the equations left on an unsplit cofactor.
type RootSplit = (Vec<Node>, Option<Vec<SymbolicScalar>>);

/// Branches on the Gaussian-rational roots of an equation in a single
/// unknown. Returns the children and, when a cofactor stays unsplit, the
/// equations left on that part.
fn try_roots(node: &Node) -> Result<Option<RootSplit>> {
    for (i, e) in node.eqs.iter().enumerate() {
        let syms = e.param_symbols();
        if syms.len() != 1 {
            continue;
        }
        let u = syms.into_iter().next().expect("one symbol");
        let Some(poly) = UPoly::from_scalar(e, &u) else {
            continue;
        };
        let (roots, rest) = poly.roots();
        let mut children = Vec::new();
        for r in roots {
            if r.is_zero() && node.status[&u] == Status::NonZero {
                continue;
            }
            let mut child = node.clone();
            let v = SymbolicScalar::constant(r);
            child.assign(&u, v.clone(), format!("{u} = {v}"))?;
            children.push(child);
        }
        let leftover = (!rest.is_constant()).then(|| {
            let mut eqs = node.eqs.clone();
            eqs[i] = rest.to_scalar(&u);
            eqs
        });
        return Ok(Some((children, leftover)));
    }
    Ok(None)
}

/// Splits `e = g(p) · e'` for a univariate parameter polynomial `g`:
/// either `g = 0` or `e' = 0`.
fn try_param_content(node: &Node) -> Option<(Node, Node)> {
    let unknowns = node.unknown_set();
    for (i, e) in node.eqs.iter().enumerate() {
        let params: BTreeSet<Symbol> = e.param_symbols().difference(&unknowns).cloned().collect();
        if params.len() != 1 {
            continue;
        }
        let p = params.into_iter().next().expect("one parameter");
        let mut parts: BTreeMap<Monomial, SymbolicScalar> = BTreeMap::new();
        for (m, c) in e.terms() {
            let mut rest = m.params().clone();
            let k = rest.remove(&p).unwrap_or(0);
            let pm = monomial(BTreeMap::from([(p.clone(), k)]));
            parts
                .entry(monomial(rest))
                .or_default()
                .add_term(pm, c.clone());
        }
        let polys: Vec<(Monomial, UPoly)> = parts
            .into_iter()
            .map(|(m, c)| (m, UPoly::from_scalar(&c, &p).expect("univariate")))
            .collect();
        let g = polys
            .iter()
            .skip(1)
            .fold(polys[0].1.monic(), |g, (_, c)| g.gcd(c));
        if g.is_constant() {
            continue;
        }
        let mut reduced = SymbolicScalar::zero();
        for (m, c) in &polys {
            reduced += &c.div_rem(&g).0.to_scalar(&p).mul_monomial(m);
        }
        let gs = g.to_scalar(&p);
        let mut on_root = node.clone();
        on_root.eqs.remove(i);
        on_root.conditions.push(gs.clone());
        on_root.path.push(format!("{gs} = 0"));
        let mut off_root = node.clone();
        off_root.eqs[i] = reduced;
        off_root.path.push(format!("{gs} != 0"));
        return Some((on_root, off_root));
    }
    None
}

fn explore(mut node: Node, out: &mut Vec<SolutionFamily>) -> Result<()> {
    if !node.tidy() {
        return Ok(());
    }
    if node.eqs.is_empty() {
        out.push(node.finish(Vec::new()));
        return Ok(());
    }
    if let Some(u) = node.first_undecided() {
        let mut zero = node.clone();
        zero.assign(&u, SymbolicScalar::zero(), format!("{u} = 0"))?;
        explore(zero, out)?;
        let mut nonzero = node;
        nonzero.status.insert(u.clone(), Status::NonZero);
        nonzero.path.push(format!("{u} != 0"));
        return explore(nonzero, out);
    }
    if let Some(child) = try_eliminate(&node)? {
        return explore(child, out);
    }
    if let Some((children, leftover)) = try_roots(&node)? {
        for c in children {
            explore(c, out)?;
        }
        if let Some(eqs) = leftover {
            out.push(node.finish(eqs));
        }
        return Ok(());
    }
    if let Some((a, b)) = try_param_content(&node) {
        explore(a, out)?;
        return explore(b, out);
    }
    let unresolved = node.eqs.clone();
    out.push(node.finish(unresolved));
    Ok(())
}

/// Every consistent branch of the zero / nonzero case tree.
pub fn solve_geometric(c: &ConstraintSet) -> Result<Vec<SolutionFamily>> {
    let root = Node {
        order: c.unknowns.clone(),
        eqs: c.equations(),
        status: c
            .unknowns
            .iter()
            .map(|u| (u.clone(), Status::Undecided))
            .collect(),
        values: BTreeMap::new(),
        conditions: Vec::new(),
        path: Vec::new(),
    };
    let mut out = Vec::new();
    explore(root, &mut out)?;
    Ok(out)
}
