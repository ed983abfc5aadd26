use std::fmt;
use std::sync::Arc;

use super::{Element, Family, Generator, LinearMap};
use crate::error::{Error, Result};
use crate::scalar::{Bindings, IndexLinearForm, Symbol, SymbolicScalar};

/// Structure constants: the bracket of three generators, for any argument
/// order. Built-in rules sort arguments by family and pick up the sign.
pub type BracketRule = dyn Fn(&Generator, &Generator, &Generator) -> Result<Element> + Send + Sync;

/// A ternary algebra: generator families plus a trilinear bracket.
///
/// The rule is kept generic in its parameters; `specialization` holds the
/// values substituted after every rule evaluation.
#[derive(Clone)]
pub struct Algebra {
    name: String,
    families: Vec<Family>,
    parameters: Vec<Symbol>,
    rule: Arc<BracketRule>,
    specialization: Bindings,
}

impl Algebra {
    pub fn new(
        name: impl Into<String>,
        families: Vec<Family>,
        parameters: Vec<Symbol>,
        rule: Arc<BracketRule>,
    ) -> Self {
        Algebra {
            name: name.into(),
            families,
            parameters,
            rule,
            specialization: Bindings::default(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn families(&self) -> &[Family] {
        &self.families
    }

    pub fn parameters(&self) -> &[Symbol] {
        &self.parameters
    }

    pub fn specialization(&self) -> &Bindings {
        &self.specialization
    }

    /// Binds further parameters (and possibly `q`). Earlier bindings win
    /// only where the new ones are silent.
    pub fn specialize(&self, b: &Bindings) -> Result<Algebra> {
        if let Some(q) = &b.q {
            if num_traits::Zero::is_zero(q) {
                return Err(Error::ZeroQ);
            }
        }
        let mut out = self.clone();
        for (s, v) in &b.params {
            out.specialization.params.insert(s.clone(), v.clone());
        }
        if b.q.is_some() {
            out.specialization.q = b.q.clone();
        }
        Ok(out)
    }

    /// The same rule with every parameter left free.
    pub fn generic(&self) -> Algebra {
        let mut out = self.clone();
        out.specialization = Bindings::default();
        out
    }

    /// Parameters of the rule that are not bound by the specialization.
    pub fn free_parameters(&self) -> Vec<Symbol> {
        self.parameters
            .iter()
            .filter(|s| !self.specialization.params.contains_key(*s))
            .cloned()
            .collect()
    }

    pub fn has_family(&self, f: &Family) -> bool {
        self.families.contains(f)
    }

    fn check_family(&self, g: &Generator) -> Result<()> {
        if self.has_family(&g.family) {
            Ok(())
        } else {
            Err(Error::UnknownFamily {
                algebra: self.name.clone(),
                family: g.family.clone(),
            })
        }
    }

    pub fn bracket_generators(
        &self,
        a: &Generator,
        b: &Generator,
        c: &Generator,
    ) -> Result<Element> {
        self.check_family(a)?;
        self.check_family(b)?;
        self.check_family(c)?;
        let raw = (self.rule)(a, b, c)?;
        if self.specialization.params.is_empty() && self.specialization.q.is_none() {
            Ok(raw)
        } else {
            raw.substitute(&self.specialization)
        }
    }

    /// Trilinear extension of the rule.
    pub fn bracket(&self, x: &Element, y: &Element, w: &Element) -> Result<Element> {
        let mut out = Element::zero();
        for (gx, cx) in x.terms() {
            for (gy, cy) in y.terms() {
                let cxy = cx * cy;
                for (gw, cw) in w.terms() {
                    let b = self.bracket_generators(gx, gy, gw)?;
                    if !b.is_zero() {
                        out.add_scaled(&b, &(&cxy * cw));
                    }
                }
            }
        }
        Ok(out)
    }

    /// The algebra with bracket `ρ ∘ [·,·,·]`.
    pub fn postcompose(&self, rho: &LinearMap, name: impl Into<String>) -> Algebra {
        let inner = Arc::clone(&self.rule);
        let rho = rho.clone();
        let rule: Arc<BracketRule> = Arc::new(move |a, b, c| rho.apply(&inner(a, b, c)?));
        Algebra {
            name: name.into(),
            families: self.families.clone(),
            parameters: self.parameters.clone(),
            rule,
            specialization: self.specialization.clone(),
        }
    }

    /// Brackets of every ordered family triple at symbolic degrees `k, m, n`.
    pub fn rule_table(&self) -> Result<Vec<([Family; 3], Element)>> {
        let degs = ["k", "m", "n"].map(IndexLinearForm::var);
        let mut out = Vec::new();
        for f1 in &self.families {
            for f2 in &self.families {
                for f3 in &self.families {
                    let gens = [f1, f2, f3]
                        .iter()
                        .zip(&degs)
                        .map(|(f, d)| Generator::new((*f).clone(), d.clone()))
                        .collect::<Vec<_>>();
                    let e = self.bracket_generators(&gens[0], &gens[1], &gens[2])?;
                    out.push(([f1.clone(), f2.clone(), f3.clone()], e));
                }
            }
        }
        Ok(out)
    }

    /// Equality of families and of all structure constants.
    pub fn structurally_equal(&self, other: &Algebra) -> Result<bool> {
        let mut mine = self.families.clone();
        let mut theirs = other.families.clone();
        mine.sort();
        theirs.sort();
        if mine != theirs {
            return Ok(false);
        }
        Ok(self.rule_table()? == other.rule_table()?)
    }

    /// A readable summary of the specialization, e.g. `z=2*i, q=3`.
    pub fn specialization_text(&self) -> String {
        let mut parts: Vec<String> = self
            .specialization
            .params
            .iter()
            .map(|(s, v)| format!("{s}={v}"))
            .collect();
        if let Some(q) = &self.specialization.q {
            parts.push(format!("q={q}"));
        }
        parts.join(", ")
    }
}

impl fmt::Debug for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Algebra")
            .field("name", &self.name)
            .field("families", &self.families)
            .field("parameters", &self.parameters)
            .field("specialization", &self.specialization_text())
            .finish()
    }
}

/// Sorts three generators by family (stable), returning the sign of the
/// permutation used.
pub fn sort_by_family(gens: [&Generator; 3]) -> (i64, [&Generator; 3]) {
    let mut g = gens;
    let mut sign = 1;
    for i in 0..3 {
        for j in 0..2 - i {
            if g[j].family > g[j + 1].family {
                g.swap(j, j + 1);
                sign = -sign;
            }
        }
    }
    (sign, g)
}

/// Helper for rules given on family-sorted triples: sorts, evaluates,
/// and applies the permutation sign.
pub fn sorted_rule<F>(canonical: F) -> Arc<BracketRule>
where
    F: Fn(&Generator, &Generator, &Generator) -> Result<Element> + Send + Sync + 'static,
{
    Arc::new(move |a, b, c| {
        let (sign, [x, y, w]) = sort_by_family([a, b, c]);
        let e = canonical(x, y, w)?;
        Ok(if sign < 0 {
            e.scale(&SymbolicScalar::integer(-1))
        } else {
            e
        })
    })
}
