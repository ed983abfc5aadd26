//! Linear algebra on polynomial rows: each row is a `SymbolicScalar`
//! read as a vector over its monomials.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::scalar::{Monomial, SymbolicScalar};

/// Reduced row echelon basis. Pivots are leading monomials in the
/// canonical term order; each stored row is monic at its pivot and free of
/// every other pivot, so the basis is canonical for its span.
#[derive(Clone, Debug, Default)]
pub struct RowBasis {
    rows: BTreeMap<Monomial, SymbolicScalar>,
}

impl RowBasis {
    pub fn new() -> Self {
        RowBasis::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Remainder of `row` after eliminating every pivot.
    pub fn reduce(&self, row: &SymbolicScalar) -> SymbolicScalar {
        let mut r = row.clone();
        loop {
            let hit = r
                .terms()
                .filter(|(m, _)| self.rows.contains_key(*m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .next_back();
            match hit {
                Some((m, c)) => {
                    let b = &self.rows[&m];
                    r = &r - &b.scale(&c);
                }
                None => return r,
            }
        }
    }

    /// Adds a row; returns whether the rank grew.
    pub fn insert(&mut self, row: &SymbolicScalar) -> bool {
        let r = self.reduce(row);
        if r.is_zero() {
            return false;
        }
        let r = r.monic();
        let (pivot, _) = r.terms().next_back().expect("nonzero row");
        let pivot = pivot.clone();
        for b in self.rows.values_mut() {
            let c = b
                .terms()
                .find(|(m, _)| **m == pivot)
                .map(|(_, c)| c.clone());
            if let Some(c) = c {
                if !c.is_zero() {
                    *b = &*b - &r.scale(&c);
                }
            }
        }
        self.rows.insert(pivot, r);
        true
    }

    pub fn contains(&self, row: &SymbolicScalar) -> bool {
        self.reduce(row).is_zero()
    }

    /// Rows in pivot order.
    pub fn rows(&self) -> Vec<SymbolicScalar> {
        self.rows.values().cloned().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(t: &str) -> SymbolicScalar {
        t.parse().unwrap()
    }

    #[test]
    fn canonical_for_span() {
        let mut a = RowBasis::new();
        a.insert(&s("b - a^3"));
        a.insert(&s("a - a^2*b"));
        let mut b = RowBasis::new();
        b.insert(&s("2*b - 2*a^3 + a - a^2*b"));
        b.insert(&s("a - a^2*b"));
        assert_eq!(a.rows(), b.rows());
        assert!(a.contains(&s("3*b - 3*a^3")));
        assert!(!a.contains(&s("b")));
        assert!(!a.insert(&s("a - a^2*b + b - a^3")));
    }
}
