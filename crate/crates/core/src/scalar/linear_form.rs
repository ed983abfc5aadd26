use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

use super::Symbol;

/// An integer affine form `c + Σ a_j x_j` in index symbols.
///
/// Used for generator degrees and for exponents of `q`. No zero
/// coefficients are stored, so derived equality is structural equality.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct IndexLinearForm {
    constant: i64,
    coeffs: BTreeMap<Symbol, i64>,
}

impl IndexLinearForm {
    pub fn constant(c: i64) -> Self {
        IndexLinearForm {
            constant: c,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn var(sym: impl Into<Symbol>) -> Self {
        Self::term(sym, 1)
    }

    pub fn term(sym: impl Into<Symbol>, coeff: i64) -> Self {
        let mut coeffs = BTreeMap::new();
        if coeff != 0 {
            coeffs.insert(sym.into(), coeff);
        }
        IndexLinearForm {
            constant: 0,
            coeffs,
        }
    }

    pub fn from_parts(constant: i64, coeffs: impl IntoIterator<Item = (Symbol, i64)>) -> Self {
        let mut form = IndexLinearForm::constant(constant);
        for (s, c) in coeffs {
            form.add_term(&s, c);
        }
        form
    }

    fn add_term(&mut self, sym: &Symbol, c: i64) {
        if c == 0 {
            return;
        }
        let entry = self.coeffs.entry(sym.clone()).or_insert(0);
        *entry += c;
        if *entry == 0 {
            self.coeffs.remove(sym);
        }
    }

    pub fn constant_term(&self) -> i64 {
        self.constant
    }

    pub fn coeffs(&self) -> &BTreeMap<Symbol, i64> {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.constant == 0 && self.coeffs.is_empty()
    }

    pub fn as_constant(&self) -> Option<i64> {
        self.coeffs.is_empty().then_some(self.constant)
    }

    pub fn scale(&self, k: i64) -> Self {
        if k == 0 {
            return IndexLinearForm::default();
        }
        IndexLinearForm {
            constant: self.constant * k,
            coeffs: self
                .coeffs
                .iter()
                .map(|(s, c)| (s.clone(), c * k))
                .collect(),
        }
    }

    pub fn symbols(&self) -> impl Iterator<Item = &Symbol> {
        self.coeffs.keys()
    }

    /// Replaces symbols by forms; unmapped symbols are left alone.
    pub fn substitute(&self, map: &BTreeMap<Symbol, IndexLinearForm>) -> Self {
        let mut out = IndexLinearForm::constant(self.constant);
        for (s, c) in &self.coeffs {
            match map.get(s) {
                Some(f) => out = &out + &f.scale(*c),
                None => out.add_term(s, *c),
            }
        }
        out
    }

    /// Evaluates with integer values for every symbol.
    pub fn eval(&self, values: &BTreeMap<Symbol, i64>) -> Option<i64> {
        let mut acc = self.constant;
        for (s, c) in &self.coeffs {
            acc += c * values.get(s)?;
        }
        Some(acc)
    }
}

impl Add for &IndexLinearForm {
    type Output = IndexLinearForm;
    fn add(self, rhs: &IndexLinearForm) -> IndexLinearForm {
        let mut out = self.clone();
        out.constant += rhs.constant;
        for (s, c) in &rhs.coeffs {
            out.add_term(s, *c);
        }
        out
    }
}

impl Add for IndexLinearForm {
    type Output = IndexLinearForm;
    fn add(self, rhs: IndexLinearForm) -> IndexLinearForm {
        &self + &rhs
    }
}

impl Neg for &IndexLinearForm {
    type Output = IndexLinearForm;
    fn neg(self) -> IndexLinearForm {
        self.scale(-1)
    }
}

impl Sub for &IndexLinearForm {
    type Output = IndexLinearForm;
    fn sub(self, rhs: &IndexLinearForm) -> IndexLinearForm {
        self + &(-rhs)
    }
}

impl From<i64> for IndexLinearForm {
    fn from(c: i64) -> Self {
        IndexLinearForm::constant(c)
    }
}

impl fmt::Display for IndexLinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (s, c) in &self.coeffs {
            let sign = if *c < 0 {
                "-"
            } else if first {
                ""
            } else {
                "+"
            };
            let mag = c.abs();
            if mag == 1 {
                write!(f, "{sign}{s}")?;
            } else {
                write!(f, "{sign}{mag}*{s}")?;
            }
            first = false;
        }
        if first {
            write!(f, "{}", self.constant)
        } else if self.constant > 0 {
            write!(f, "+{}", self.constant)
        } else if self.constant < 0 {
            write!(f, "{}", self.constant)
        } else {
            Ok(())
        }
    }
}

impl fmt::Debug for IndexLinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cancellation_drops_entries() {
        let k = IndexLinearForm::var("k");
        let m = IndexLinearForm::var("m");
        let a = &k - &m;
        let b = &m - &k;
        assert!((&a + &b).is_zero());
        assert!((&a + &b).coeffs().is_empty());
    }

    #[test]
    fn display() {
        let f = IndexLinearForm::from_parts(-2, [(Symbol::new("k"), 1), (Symbol::new("m"), -3)]);
        assert_eq!(f.to_string(), "k-3*m-2");
        assert_eq!(IndexLinearForm::constant(5).to_string(), "5");
    }

    #[test]
    fn substitution() {
        let f = IndexLinearForm::from_parts(1, [(Symbol::new("k"), 2), (Symbol::new("m"), 1)]);
        let mut map = BTreeMap::new();
        map.insert(Symbol::new("k"), IndexLinearForm::constant(3));
        let g = f.substitute(&map);
        assert_eq!(g, IndexLinearForm::from_parts(7, [(Symbol::new("m"), 1)]));
    }
}
