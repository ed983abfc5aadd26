use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{GaussianRational, IndexLinearForm, Symbol, SymbolKind};
use crate::error::{Error, Result};

/// A monomial key: Laurent monomial in parameters, ordinary monomial in
/// index symbols, and a formal power of `q` whose exponent is an integer
/// affine form in index symbols.
///
/// The derived order (parameters, indices, q-form) is the canonical term
/// order used for printing and serialization.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    params: BTreeMap<Symbol, i32>,
    indices: BTreeMap<Symbol, u32>,
    q: IndexLinearForm,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn is_one(&self) -> bool {
        self.params.is_empty() && self.indices.is_empty() && self.q.is_zero()
    }

    pub fn params(&self) -> &BTreeMap<Symbol, i32> {
        &self.params
    }

    pub fn indices(&self) -> &BTreeMap<Symbol, u32> {
        &self.indices
    }

    pub fn q_exponent(&self) -> &IndexLinearForm {
        &self.q
    }

    pub fn param_exponent(&self, sym: &Symbol) -> i32 {
        self.params.get(sym).copied().unwrap_or(0)
    }

    /// Parameter-only part of this monomial.
    pub fn param_part(&self) -> Monomial {
        Monomial {
            params: self.params.clone(),
            ..Monomial::default()
        }
    }

    /// Everything except the parameter part.
    pub fn index_part(&self) -> Monomial {
        Monomial {
            params: BTreeMap::new(),
            indices: self.indices.clone(),
            q: self.q.clone(),
        }
    }

    pub fn from_params(params: BTreeMap<Symbol, i32>) -> Self {
        Monomial {
            params: params.into_iter().filter(|(_, e)| *e != 0).collect(),
            ..Monomial::default()
        }
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut params = self.params.clone();
        for (s, e) in &other.params {
            let entry = params.entry(s.clone()).or_insert(0);
            *entry += e;
            if *entry == 0 {
                params.remove(s);
            }
        }
        let mut indices = self.indices.clone();
        for (s, e) in &other.indices {
            *indices.entry(s.clone()).or_insert(0) += e;
        }
        Monomial {
            params,
            indices,
            q: &self.q + &other.q,
        }
    }

    fn factor_strings(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !self.q.is_zero() {
            match self.q.as_constant() {
                Some(1) => out.push("q".to_string()),
                Some(c) if c > 0 => out.push(format!("q^{c}")),
                _ => out.push(format!("q^({})", self.q)),
            }
        }
        for (s, e) in &self.indices {
            out.push(if *e == 1 {
                s.to_string()
            } else {
                format!("{s}^{e}")
            });
        }
        for (s, e) in &self.params {
            out.push(match *e {
                1 => s.to_string(),
                e if e > 0 => format!("{s}^{e}"),
                e => format!("{s}^({e})"),
            });
        }
        out
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts = self.factor_strings();
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join("*"))
        }
    }
}

/// Exact element of the coefficient ring: a finite sum of
/// Gaussian-rational multiples of [`Monomial`]s, with no zero coefficients.
///
/// The zero test is emptiness of the term map.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymbolicScalar {
    terms: BTreeMap<Monomial, GaussianRational>,
}

/// Values for symbols, used by [`SymbolicScalar::substitute`].
#[derive(Clone, Debug, Default)]
pub struct Bindings {
    pub indices: BTreeMap<Symbol, IndexLinearForm>,
    pub params: BTreeMap<Symbol, SymbolicScalar>,
    pub q: Option<GaussianRational>,
}

impl Bindings {
    pub fn new() -> Self {
        Bindings::default()
    }

    pub fn index(mut self, name: &str, value: impl Into<IndexLinearForm>) -> Self {
        self.indices.insert(Symbol::new(name), value.into());
        self
    }

    pub fn param(mut self, name: &str, value: SymbolicScalar) -> Self {
        self.params.insert(Symbol::new(name), value);
        self
    }

    pub fn q(mut self, value: GaussianRational) -> Self {
        self.q = Some(value);
        self
    }

    /// Inserts a binding, routing it by the symbol's kind. Index symbols
    /// need a value that is an integer affine form.
    pub fn bind(&mut self, sym: &Symbol, value: SymbolicScalar) -> Result<()> {
        match sym.kind() {
            SymbolKind::Index => {
                let form = value.as_index_form().ok_or_else(|| {
                    Error::Precondition(format!("index symbol `{sym}` needs an integer value"))
                })?;
                self.indices.insert(sym.clone(), form);
            }
            SymbolKind::Parameter => {
                self.params.insert(sym.clone(), value);
            }
        }
        Ok(())
    }
}

/// Complex values for every symbol, used by [`SymbolicScalar::evaluate_numeric`].
#[derive(Clone, Debug, Default)]
pub struct NumericBindings {
    pub indices: BTreeMap<Symbol, i64>,
    pub params: BTreeMap<Symbol, Complex64>,
    pub q: Option<Complex64>,
}

impl NumericBindings {
    pub fn new() -> Self {
        NumericBindings::default()
    }

    pub fn index(mut self, name: &str, value: i64) -> Self {
        self.indices.insert(Symbol::new(name), value);
        self
    }

    pub fn param(mut self, name: &str, value: Complex64) -> Self {
        self.params.insert(Symbol::new(name), value);
        self
    }

    pub fn q(mut self, value: Complex64) -> Self {
        self.q = Some(value);
        self
    }
}

impl SymbolicScalar {
    pub fn zero() -> Self {
        SymbolicScalar::default()
    }

    pub fn one() -> Self {
        SymbolicScalar::constant(GaussianRational::one())
    }

    pub fn constant(c: GaussianRational) -> Self {
        SymbolicScalar::from_term(Monomial::one(), c)
    }

    pub fn integer(n: i64) -> Self {
        SymbolicScalar::constant(GaussianRational::from_integer(n))
    }

    pub fn i() -> Self {
        SymbolicScalar::constant(GaussianRational::i())
    }

    pub fn from_term(mono: Monomial, c: GaussianRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(mono, c);
        }
        SymbolicScalar { terms }
    }

    /// A single symbol: a polynomial variable for index symbols, a
    /// parameter otherwise.
    pub fn symbol(name: &str) -> Self {
        let sym = Symbol::new(name);
        match sym.kind() {
            SymbolKind::Index => SymbolicScalar::index(name),
            SymbolKind::Parameter => SymbolicScalar::param(name),
        }
    }

    pub fn param(name: &str) -> Self {
        SymbolicScalar::param_sym(&Symbol::new(name))
    }

    pub fn param_sym(sym: &Symbol) -> Self {
        debug_assert_eq!(sym.kind(), SymbolKind::Parameter, "{sym}");
        let mut mono = Monomial::one();
        mono.params.insert(sym.clone(), 1);
        SymbolicScalar::from_term(mono, GaussianRational::one())
    }

    pub fn index(name: &str) -> Self {
        let sym = Symbol::new(name);
        debug_assert_eq!(sym.kind(), SymbolKind::Index, "{sym}");
        let mut mono = Monomial::one();
        mono.indices.insert(sym, 1);
        SymbolicScalar::from_term(mono, GaussianRational::one())
    }

    /// The affine form read as a polynomial in index symbols.
    pub fn from_index_form(form: &IndexLinearForm) -> Self {
        let mut out = SymbolicScalar::integer(form.constant_term());
        for (s, c) in form.coeffs() {
            let mut mono = Monomial::one();
            mono.indices.insert(s.clone(), 1);
            out.add_term(mono, GaussianRational::from_integer(*c));
        }
        out
    }

    /// `q^exp` with `q` formal.
    pub fn q_pow(exp: &IndexLinearForm) -> Self {
        let mono = Monomial {
            q: exp.clone(),
            ..Monomial::default()
        };
        SymbolicScalar::from_term(mono, GaussianRational::one())
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &GaussianRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_constant(&self) -> Option<GaussianRational> {
        match self.terms.len() {
            0 => Some(GaussianRational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next()?;
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    /// Reads the scalar back as an integer affine form in index symbols,
    /// when it is one.
    pub fn as_index_form(&self) -> Option<IndexLinearForm> {
        let mut form = IndexLinearForm::default();
        for (m, c) in &self.terms {
            let (num, _) = c.as_gaussian_integer()?;
            if !c.is_real() || !m.params.is_empty() || !m.q.is_zero() {
                return None;
            }
            let n: i64 = num.try_into().ok()?;
            match m.indices.len() {
                0 => form = &form + &IndexLinearForm::constant(n),
                1 => {
                    let (s, e) = m.indices.iter().next()?;
                    if *e != 1 {
                        return None;
                    }
                    form = &form + &IndexLinearForm::term(s.clone(), n);
                }
                _ => return None,
            }
        }
        Some(form)
    }

    pub fn add_term(&mut self, mono: Monomial, c: GaussianRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(mono) {
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

    pub fn scale(&self, c: &GaussianRational) -> Self {
        if c.is_zero() {
            return SymbolicScalar::zero();
        }
        SymbolicScalar {
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, mono: &Monomial) -> Self {
        SymbolicScalar {
            terms: self
                .terms
                .iter()
                .map(|(m, v)| (m.mul(mono), v.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = SymbolicScalar::one();
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    /// Inverse of a single-term scalar free of index symbols.
    pub fn try_inverse(&self) -> Result<Self> {
        let (m, c) = match self.terms.len() {
            1 => self.terms.iter().next().expect("one term"),
            _ => return Err(Error::NotInvertible(self.to_string())),
        };
        if !m.indices.is_empty() {
            return Err(Error::NotInvertible(self.to_string()));
        }
        let inv_mono = Monomial {
            params: m.params.iter().map(|(s, e)| (s.clone(), -e)).collect(),
            indices: BTreeMap::new(),
            q: -&m.q,
        };
        Ok(SymbolicScalar::from_term(inv_mono, c.inv()?))
    }

    pub fn pow_i(&self, exp: i32) -> Result<Self> {
        if exp >= 0 {
            Ok(self.pow(exp as u32))
        } else {
            Ok(self.try_inverse()?.pow((-exp) as u32))
        }
    }

    pub fn param_symbols(&self) -> BTreeSet<Symbol> {
        self.terms
            .keys()
            .flat_map(|m| m.params.keys().cloned())
            .collect()
    }

    pub fn index_symbols(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        for m in self.terms.keys() {
            out.extend(m.indices.keys().cloned());
            out.extend(m.q.symbols().cloned());
        }
        out
    }

    pub fn contains_param(&self, sym: &Symbol) -> bool {
        self.terms.keys().any(|m| m.params.contains_key(sym))
    }

    pub fn mentions_q(&self) -> bool {
        self.terms.keys().any(|m| !m.q.is_zero())
    }

    /// Leading coefficient in the canonical term order (the last term).
    pub fn leading_coefficient(&self) -> Option<&GaussianRational> {
        self.terms.values().next_back()
    }

    /// Scales so the leading coefficient is 1. Zero stays zero.
    pub fn monic(&self) -> Self {
        match self.leading_coefficient() {
            Some(c) => self.scale(&c.inv().expect("nonzero leading coefficient")),
            None => self.clone(),
        }
    }

    /// Exact substitution followed by renormalization.
    pub fn substitute(&self, b: &Bindings) -> Result<Self> {
        if let Some(q) = &b.q {
            if q.is_zero() {
                return Err(Error::ZeroQ);
            }
        }
        let mut out = SymbolicScalar::zero();
        for (m, c) in &self.terms {
            let mut term = SymbolicScalar::constant(c.clone());
            let mut rest = Monomial::one();

            let q_form = if b.indices.is_empty() {
                m.q.clone()
            } else {
                m.q.substitute(&b.indices)
            };
            match &b.q {
                Some(qv) if !q_form.is_zero() => {
                    if !qv.is_one() {
                        let e = q_form
                            .as_constant()
                            .ok_or_else(|| Error::NonConstantQPower(q_form.to_string()))?;
                        term = term.scale(&qv.pow(e)?);
                    }
                }
                _ => rest.q = q_form,
            }

            for (s, e) in &m.indices {
                match b.indices.get(s) {
                    Some(form) => term = &term * &SymbolicScalar::from_index_form(form).pow(*e),
                    None => {
                        rest.indices.insert(s.clone(), *e);
                    }
                }
            }
            for (s, e) in &m.params {
                match b.params.get(s) {
                    Some(v) => term = &term * &v.pow_i(*e)?,
                    None => {
                        rest.params.insert(s.clone(), *e);
                    }
                }
            }
            out += &term.mul_monomial(&rest);
        }
        Ok(out)
    }

    /// Parameter-only substitution; convenience wrapper over [`Self::substitute`].
    pub fn substitute_params(&self, params: &BTreeMap<Symbol, SymbolicScalar>) -> Result<Self> {
        if params.is_empty() || !self.param_symbols().iter().any(|s| params.contains_key(s)) {
            return Ok(self.clone());
        }
        self.substitute(&Bindings {
            params: params.clone(),
            ..Bindings::default()
        })
    }

    /// Floating-point evaluation with every symbol bound.
    pub fn evaluate_numeric(&self, b: &NumericBindings) -> Result<Complex64> {
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, c) in &self.terms {
            let mut v = c.to_complex();
            if !m.q.is_zero() {
                let q = b.q.ok_or_else(|| Error::UnboundSymbol("q".into()))?;
                let e = m.q.eval(&b.indices).ok_or_else(|| {
                    let missing = m.q.symbols().find(|s| !b.indices.contains_key(*s));
                    Error::UnboundSymbol(missing.map(|s| s.to_string()).unwrap_or_default())
                })?;
                v *= q.powi(e as i32);
            }
            for (s, e) in &m.indices {
                let x = b
                    .indices
                    .get(s)
                    .ok_or_else(|| Error::UnboundSymbol(s.to_string()))?;
                v *= (*x as f64).powi(*e as i32);
            }
            for (s, e) in &m.params {
                let x = b
                    .params
                    .get(s)
                    .ok_or_else(|| Error::UnboundSymbol(s.to_string()))?;
                v *= x.powi(*e);
            }
            acc += v;
        }
        Ok(acc)
    }

    /// Groups terms by their index part (index monomial and q-form),
    /// returning the parameter-only coefficient of each group.
    pub fn split_by_index_part(&self) -> BTreeMap<Monomial, SymbolicScalar> {
        let mut out: BTreeMap<Monomial, SymbolicScalar> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.index_part())
                .or_default()
                .add_term(m.param_part(), c.clone());
        }
        out
    }

    /// Structured term list, the JSON serialization form.
    pub fn to_term_list(&self) -> Vec<TermRepr> {
        self.terms
            .iter()
            .map(|(m, c)| TermRepr {
                coeff: c.clone(),
                params: m.params.clone(),
                indices: m.indices.clone(),
                q: m.q.clone(),
            })
            .collect()
    }

    pub fn from_term_list(terms: Vec<TermRepr>) -> Result<Self> {
        let mut out = SymbolicScalar::zero();
        for t in terms {
            if let Some(s) = t.params.keys().find(|s| s.is_index()) {
                return Err(Error::Parse(format!(
                    "`{s}` is an index symbol, not a parameter"
                )));
            }
            if let Some(s) = t
                .indices
                .keys()
                .chain(t.q.symbols())
                .find(|s| !s.is_index())
            {
                return Err(Error::Parse(format!("`{s}` is not an index symbol")));
            }
            let mono = Monomial {
                params: t.params.into_iter().filter(|(_, e)| *e != 0).collect(),
                indices: t.indices.into_iter().filter(|(_, e)| *e != 0).collect(),
                q: t.q,
            };
            out.add_term(mono, t.coeff);
        }
        Ok(out)
    }
}

/// One term of the structured JSON form.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TermRepr {
    pub coeff: GaussianRational,
    #[serde(default)]
    pub params: BTreeMap<Symbol, i32>,
    #[serde(default)]
    pub indices: BTreeMap<Symbol, u32>,
    #[serde(default)]
    pub q: IndexLinearForm,
}

impl Serialize for SymbolicScalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_term_list().serialize(s)
    }
}

impl<'de> Deserialize<'de> for SymbolicScalar {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let terms = Vec::<TermRepr>::deserialize(d)?;
        SymbolicScalar::from_term_list(terms).map_err(serde::de::Error::custom)
    }
}

impl From<GaussianRational> for SymbolicScalar {
    fn from(c: GaussianRational) -> Self {
        SymbolicScalar::constant(c)
    }
}

impl From<i64> for SymbolicScalar {
    fn from(n: i64) -> Self {
        SymbolicScalar::integer(n)
    }
}

impl AddAssign<&SymbolicScalar> for SymbolicScalar {
    fn add_assign(&mut self, rhs: &SymbolicScalar) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl Add for &SymbolicScalar {
    type Output = SymbolicScalar;
    fn add(self, rhs: &SymbolicScalar) -> SymbolicScalar {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for SymbolicScalar {
    type Output = SymbolicScalar;
    fn add(mut self, rhs: SymbolicScalar) -> SymbolicScalar {
        self += &rhs;
        self
    }
}

impl Neg for &SymbolicScalar {
    type Output = SymbolicScalar;
    fn neg(self) -> SymbolicScalar {
        SymbolicScalar {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for SymbolicScalar {
    type Output = SymbolicScalar;
    fn neg(self) -> SymbolicScalar {
        -&self
    }
}

impl Sub for &SymbolicScalar {
    type Output = SymbolicScalar;
    fn sub(self, rhs: &SymbolicScalar) -> SymbolicScalar {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Sub for SymbolicScalar {
    type Output = SymbolicScalar;
    fn sub(self, rhs: SymbolicScalar) -> SymbolicScalar {
        &self - &rhs
    }
}

impl Mul for &SymbolicScalar {
    type Output = SymbolicScalar;
    fn mul(self, rhs: &SymbolicScalar) -> SymbolicScalar {
        let mut out = SymbolicScalar::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Mul for SymbolicScalar {
    type Output = SymbolicScalar;
    fn mul(self, rhs: SymbolicScalar) -> SymbolicScalar {
        &self * &rhs
    }
}

impl fmt::Display for SymbolicScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (idx, (m, c)) in self.terms.iter().enumerate() {
            let factors = m.factor_strings();
            let text = if factors.is_empty() {
                c.to_factor_string()
            } else if c.is_one() {
                factors.join("*")
            } else if (-c).is_one() {
                format!("-{}", factors.join("*"))
            } else {
                format!("{}*{}", c.to_factor_string(), factors.join("*"))
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

impl fmt::Debug for SymbolicScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
