use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use super::{Element, Family, Generator};
use crate::error::{Error, Result};
use crate::scalar::{Bindings, GaussianRational, IndexLinearForm, SymbolicScalar};

/// How `q` enters a map or an algebra: as the formal symbol or as a fixed
/// nonzero value.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub enum QParam {
    #[default]
    Formal,
    Value(GaussianRational),
}

impl QParam {
    pub fn value(v: GaussianRational) -> Result<Self> {
        if num_traits::Zero::is_zero(&v) {
            return Err(Error::ZeroQ);
        }
        Ok(QParam::Value(v))
    }

    pub fn as_value(&self) -> Option<&GaussianRational> {
        match self {
            QParam::Formal => None,
            QParam::Value(v) => Some(v),
        }
    }
}

impl fmt::Display for QParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QParam::Formal => f.write_str("q"),
            QParam::Value(v) => write!(f, "{v}"),
        }
    }
}

/// Degree-preserving linear map on generators.
///
/// `X_d ↦ Σ amp · q^(s·d) · Y_d` over entries `(Y, s) → amp` stored for
/// source family `X`. Families without entries map to zero. Amplitudes
/// must be free of index symbols.
#[derive(Clone, PartialEq, Eq)]
pub struct LinearMap {
    entries: BTreeMap<Family, BTreeMap<(Family, i64), SymbolicScalar>>,
    q: QParam,
}

impl LinearMap {
    pub fn zero() -> Self {
        LinearMap {
            entries: BTreeMap::new(),
            q: QParam::Formal,
        }
    }

    pub fn identity(families: &[Family]) -> Self {
        let mut m = LinearMap::zero();
        for f in families {
            m.set(f.clone(), f.clone(), 0, SymbolicScalar::one());
        }
        m
    }

    /// Diagonal map `X_d ↦ amp_X q^(s·d) X_d`.
    pub fn diagonal(entries: impl IntoIterator<Item = (Family, SymbolicScalar, i64)>) -> Self {
        let mut m = LinearMap::zero();
        for (f, amp, s) in entries {
            m.set(f.clone(), f, s, amp);
        }
        m
    }

    pub fn with_q(mut self, q: QParam) -> Self {
        self.q = q;
        self
    }

    pub fn q(&self) -> &QParam {
        &self.q
    }

    /// Adds `amp · q^(s·d) · target_d` to the image of `source_d`.
    pub fn set(&mut self, source: Family, target: Family, s: i64, amp: SymbolicScalar) {
        debug_assert!(
            amp.index_symbols().is_empty(),
            "amplitude {amp} mentions indices"
        );
        let key = (target, s);
        let row = self.entries.entry(source.clone()).or_default();
        let mut v = row.remove(&key).unwrap_or_default();
        v += &amp;
        if !v.is_zero() {
            row.insert(key, v);
        }
        if row.is_empty() {
            self.entries.remove(&source);
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Family, &(Family, i64), &SymbolicScalar)> {
        self.entries
            .iter()
            .flat_map(|(f, row)| row.iter().map(move |(k, v)| (f, k, v)))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    fn q_factor(&self, s: i64, degree: &IndexLinearForm) -> Result<SymbolicScalar> {
        let exp = degree.scale(s);
        match &self.q {
            QParam::Formal => Ok(SymbolicScalar::q_pow(&exp)),
            QParam::Value(v) => {
                if exp.is_zero() || num_traits::One::is_one(v) {
                    return Ok(SymbolicScalar::one());
                }
                let e = exp
                    .as_constant()
                    .ok_or_else(|| Error::NonConstantQPower(exp.to_string()))?;
                Ok(SymbolicScalar::constant(v.pow(e)?))
            }
        }
    }

    pub fn apply_generator(&self, g: &Generator) -> Result<Element> {
        let mut out = Element::zero();
        if let Some(row) = self.entries.get(&g.family) {
            for ((target, s), amp) in row {
                let c = amp * &self.q_factor(*s, &g.degree)?;
                out.add_term(Generator::new(target.clone(), g.degree.clone()), c);
            }
        }
        Ok(out)
    }

    pub fn apply(&self, x: &Element) -> Result<Element> {
        let mut out = Element::zero();
        for (g, c) in x.terms() {
            out.add_scaled(&self.apply_generator(g)?, c);
        }
        Ok(out)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &LinearMap) -> Result<LinearMap> {
        if self.q != other.q {
            return Err(Error::Precondition(format!(
                "cannot compose maps with q = {} and q = {}",
                self.q, other.q
            )));
        }
        let mut out = LinearMap::zero().with_q(self.q.clone());
        for (src, (mid, s1), a) in other.entries() {
            if let Some(row) = self.entries.get(mid) {
                for ((dst, s2), b) in row {
                    out.set(src.clone(), dst.clone(), s1 + s2, a * b);
                }
            }
        }
        Ok(out)
    }

    /// Inverse of a map that permutes families with invertible monomial
    /// amplitudes.
    pub fn inverse(&self) -> Result<LinearMap> {
        let mut out = LinearMap::zero().with_q(self.q.clone());
        let mut seen = std::collections::BTreeSet::new();
        for (src, row) in &self.entries {
            if row.len() != 1 {
                return Err(Error::NotInvertible(format!(
                    "image of family {src} is not a single generator"
                )));
            }
            let ((dst, s), amp) = row.iter().next().expect("one entry");
            if !seen.insert(dst.clone()) {
                return Err(Error::NotInvertible(format!("family {dst} is hit twice")));
            }
            out.set(dst.clone(), src.clone(), -s, amp.try_inverse()?);
        }
        if !seen.iter().eq(self.entries.keys()) {
            return Err(Error::NotInvertible(format!(
                "families are not permuted by {self}"
            )));
        }
        Ok(out)
    }

    /// Smallest `n ≤ bound` with `selfⁿ = 0`, if any.
    pub fn nilpotency_order(&self, bound: u32) -> Option<u32> {
        let mut power = self.clone();
        for n in 1..=bound {
            if power.is_zero() {
                return Some(n);
            }
            power = power.compose(self).ok()?;
        }
        None
    }

    /// Substitutes parameter values into amplitudes and fixes `q` when
    /// bound.
    pub fn specialize(&self, b: &Bindings) -> Result<LinearMap> {
        let q = match (&b.q, &self.q) {
            (Some(v), _) => QParam::value(v.clone())?,
            (None, q) => q.clone(),
        };
        let mut out = LinearMap::zero().with_q(q);
        for (src, (dst, s), amp) in self.entries() {
            out.set(src.clone(), dst.clone(), *s, amp.substitute(b)?);
        }
        Ok(out)
    }

    /// Substitutes values for parameters occurring in the amplitudes.
    pub fn substitute_params(
        &self,
        params: &BTreeMap<crate::scalar::Symbol, SymbolicScalar>,
    ) -> Result<LinearMap> {
        let mut out = LinearMap::zero().with_q(self.q.clone());
        for (src, (dst, s), amp) in self.entries() {
            out.set(src.clone(), dst.clone(), *s, amp.substitute_params(params)?);
        }
        Ok(out)
    }

    pub fn describe(&self) -> Vec<String> {
        self.entries
            .iter()
            .map(|(src, row)| {
                let image: Vec<String> = row
                    .iter()
                    .map(|((dst, s), amp)| {
                        let qs = match s {
                            0 => String::new(),
                            1 => format!("{}^n*", self.q),
                            s => format!("{}^({s}*n)*", self.q),
                        };
                        format!("({amp})*{qs}{dst}_n")
                    })
                    .collect();
                format!("{src}_n -> {}", image.join(" + "))
            })
            .collect()
    }
}

impl fmt::Display for LinearMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        f.write_str(&self.describe().join(", "))
    }
}

impl fmt::Debug for LinearMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for LinearMap {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.describe().serialize(s)
    }
}

/// The pair `(α₁, α₂)` twisting the fundamental identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwistPair {
    pub name: String,
    pub alpha1: LinearMap,
    pub alpha2: LinearMap,
}

impl TwistPair {
    pub fn new(name: impl Into<String>, alpha1: LinearMap, alpha2: LinearMap) -> Self {
        TwistPair {
            name: name.into(),
            alpha1,
            alpha2,
        }
    }

    pub fn identity(families: &[Family]) -> Self {
        let id = LinearMap::identity(families);
        TwistPair::new("identity", id.clone(), id)
    }

    pub fn is_symmetric(&self) -> bool {
        self.alpha1 == self.alpha2
    }

    pub fn specialize(&self, b: &Bindings) -> Result<TwistPair> {
        Ok(TwistPair::new(
            self.name.clone(),
            self.alpha1.specialize(b)?,
            self.alpha2.specialize(b)?,
        ))
    }
}
