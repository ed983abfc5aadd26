use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{Bindings, IndexLinearForm, SymbolicScalar};

/// Generator family tag. The derived order `Q < R < E < L < S < Custom`
/// is the canonical order used to normalize bracket arguments.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    Q,
    R,
    E,
    L,
    S,
    Custom(String),
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Q => f.write_str("Q"),
            Family::R => f.write_str("R"),
            Family::E => f.write_str("E"),
            Family::L => f.write_str("L"),
            Family::S => f.write_str("S"),
            Family::Custom(name) => f.write_str(name),
        }
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "Q" => Family::Q,
            "R" => Family::R,
            "E" => Family::E,
            "L" => Family::L,
            "S" => Family::S,
            "" => return Err(Error::Parse("empty family tag".into())),
            other => Family::Custom(other.to_string()),
        })
    }
}

/// A basis symbol `X_d`: a family tag and an integer affine degree.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Generator {
    pub family: Family,
    pub degree: IndexLinearForm,
}

impl Generator {
    pub fn new(family: Family, degree: impl Into<IndexLinearForm>) -> Self {
        Generator {
            family,
            degree: degree.into(),
        }
    }

    /// Generator with a single-symbol degree, e.g. `Q_k`.
    pub fn sym(family: Family, index: &str) -> Self {
        Generator::new(family, IndexLinearForm::var(index))
    }

    pub fn substitute(&self, b: &Bindings) -> Self {
        if b.indices.is_empty() {
            return self.clone();
        }
        Generator::new(self.family.clone(), self.degree.substitute(&b.indices))
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = &self.degree;
        let simple = d.as_constant().is_some_and(|c| c >= 0)
            || (d.constant_term() == 0
                && d.coeffs().len() == 1
                && d.coeffs().values().all(|c| *c == 1));
        if simple {
            write!(f, "{}_{}", self.family, d)
        } else {
            write!(f, "{}_({})", self.family, d)
        }
    }
}

impl fmt::Debug for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Finite linear combination of generators with scalar coefficients.
/// Zero coefficients are never stored.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Element {
    terms: BTreeMap<Generator, SymbolicScalar>,
}

impl Element {
    pub fn zero() -> Self {
        Element::default()
    }

    pub fn generator(g: Generator) -> Self {
        Element::term(g, SymbolicScalar::one())
    }

    pub fn term(g: Generator, c: SymbolicScalar) -> Self {
        let mut e = Element::zero();
        e.add_term(g, c);
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Generator, &SymbolicScalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, g: &Generator) -> SymbolicScalar {
        self.terms.get(g).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, g: Generator, c: SymbolicScalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(g) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Element, c: &SymbolicScalar) {
        for (g, v) in &other.terms {
            self.add_term(g.clone(), v * c);
        }
    }

    pub fn scale(&self, c: &SymbolicScalar) -> Self {
        let mut out = Element::zero();
        out.add_scaled(self, c);
        out
    }

    /// Substitutes into coefficients and degrees, merging terms whose
    /// degrees become equal.
    pub fn substitute(&self, b: &Bindings) -> Result<Self> {
        let mut out = Element::zero();
        for (g, c) in &self.terms {
            out.add_term(g.substitute(b), c.substitute(b)?);
        }
        Ok(out)
    }

    pub fn map_coefficients(
        &self,
        f: impl Fn(&SymbolicScalar) -> Result<SymbolicScalar>,
    ) -> Result<Self> {
        let mut out = Element::zero();
        for (g, c) in &self.terms {
            out.add_term(g.clone(), f(c)?);
        }
        Ok(out)
    }
}

impl std::ops::Add for &Element {
    type Output = Element;
    fn add(self, rhs: &Element) -> Element {
        let mut out = self.clone();
        for (g, c) in &rhs.terms {
            out.add_term(g.clone(), c.clone());
        }
        out
    }
}

impl std::ops::Sub for &Element {
    type Output = Element;
    fn sub(self, rhs: &Element) -> Element {
        let mut out = self.clone();
        for (g, c) in &rhs.terms {
            out.add_term(g.clone(), -c);
        }
        out
    }
}

impl std::ops::Neg for &Element {
    type Output = Element;
    fn neg(self) -> Element {
        self.scale(&SymbolicScalar::integer(-1))
    }
}

impl std::ops::AddAssign<&Element> for Element {
    fn add_assign(&mut self, rhs: &Element) {
        for (g, c) in &rhs.terms {
            self.add_term(g.clone(), c.clone());
        }
    }
}

impl std::ops::SubAssign<&Element> for Element {
    fn sub_assign(&mut self, rhs: &Element) {
        for (g, c) in &rhs.terms {
            self.add_term(g.clone(), -c);
        }
    }
}

impl From<Generator> for Element {
    fn from(g: Generator) -> Self {
        Element::generator(g)
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (idx, (g, c)) in self.terms.iter().enumerate() {
            let text = if c.num_terms() == 1 {
                let s = c.to_string();
                match s.as_str() {
                    "1" => g.to_string(),
                    "-1" => format!("-{g}"),
                    _ => format!("{s}*{g}"),
                }
            } else {
                format!("({c})*{g}")
            };
            if idx == 0 {
                f.write_str(&text)?;
            } else if let Some(rest) = text.strip_prefix('-') {
                write!(f, " - {rest}")?;
            } else {
                write!(f, " + {text}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Element {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = s.serialize_seq(Some(self.terms.len()))?;
        for (g, c) in &self.terms {
            seq.serialize_element(&serde_json::json!({
                "generator": g.to_string(),
                "coeff": c.to_string(),
            }))?;
        }
        seq.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generator_display() {
        assert_eq!(Generator::new(Family::Q, 3).to_string(), "Q_3");
        assert_eq!(Generator::new(Family::R, -1).to_string(), "R_(-1)");
        assert_eq!(Generator::sym(Family::Q, "k").to_string(), "Q_k");
        let d = &IndexLinearForm::var("k") + &IndexLinearForm::var("m");
        assert_eq!(Generator::new(Family::R, d).to_string(), "R_(k+m)");
    }

    #[test]
    fn cancellation() {
        let g = Generator::new(Family::Q, 1);
        let a = Element::term(g.clone(), SymbolicScalar::param("z"));
        let b = Element::term(g, -SymbolicScalar::param("z"));
        assert!((&a + &b).is_zero());
    }

    #[test]
    fn substitution_merges_degrees() {
        let a = Element::generator(Generator::sym(Family::Q, "k"));
        let b = Element::generator(Generator::new(Family::Q, 2));
        let sum = &a + &b;
        assert_eq!(sum.len(), 2);
        let merged = sum.substitute(&Bindings::new().index("k", 2)).unwrap();
        assert_eq!(
            merged.coefficient(&Generator::new(Family::Q, 2)),
            SymbolicScalar::integer(2)
        );
    }
}
