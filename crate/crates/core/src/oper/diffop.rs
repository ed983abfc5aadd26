use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::Result;
use crate::scalar::{Bindings, IndexLinearForm, SymbolicScalar};

/// Polynomial in the formal symbol `D = −i d/dx`, constant term first,
/// no trailing zeros.
pub type DPoly = Vec<SymbolicScalar>;

fn trim(mut p: DPoly) -> DPoly {
    while p.last().is_some_and(SymbolicScalar::is_zero) {
        p.pop();
    }
    p
}

fn poly_add(a: &DPoly, b: &DPoly) -> DPoly {
    let n = a.len().max(b.len());
    let zero = SymbolicScalar::zero();
    trim(
        (0..n)
            .map(|i| a.get(i).unwrap_or(&zero) + b.get(i).unwrap_or(&zero))
            .collect(),
    )
}

fn poly_mul(a: &DPoly, b: &DPoly) -> DPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![SymbolicScalar::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += &(x * y);
        }
    }
    trim(out)
}

/// `p(D + n)`.
fn shift(p: &DPoly, n: &IndexLinearForm) -> DPoly {
    if n.is_zero() {
        return p.clone();
    }
    let n = SymbolicScalar::from_index_form(n);
    let step: DPoly = vec![n, SymbolicScalar::one()];
    let mut out: DPoly = Vec::new();
    let mut power: DPoly = vec![SymbolicScalar::one()];
    for c in p {
        out = poly_add(&out, &power.iter().map(|t| t * c).collect());
        power = poly_mul(&power, &step);
    }
    out
}

/// Finite sum of `e^{i·mode·x} · p(D)` with normal-ordered products:
/// `(m, p)·(n, r) = (m+n, p(D+n)·r(D))`, from `D e^{inx} = e^{inx}(D+n)`.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct DiffOp {
    terms: BTreeMap<IndexLinearForm, DPoly>,
}

impl DiffOp {
    pub fn zero() -> Self {
        DiffOp::default()
    }

    pub fn term(mode: impl Into<IndexLinearForm>, poly: DPoly) -> Self {
        let mut out = DiffOp::zero();
        out.add_term(mode.into(), &poly);
        out
    }

    /// `E_m = e^{imx}`.
    pub fn e(mode: impl Into<IndexLinearForm>) -> Self {
        DiffOp::term(mode, vec![SymbolicScalar::one()])
    }

    /// `L_m = e^{imx}(D + λm)`.
    pub fn l(mode: impl Into<IndexLinearForm>, lambda: &SymbolicScalar) -> Self {
        let mode = mode.into();
        let c = lambda * &SymbolicScalar::from_index_form(&mode);
        DiffOp::term(mode, vec![c, SymbolicScalar::one()])
    }

    /// `S_m = e^{imx}(D + λm)²`.
    pub fn s(mode: impl Into<IndexLinearForm>, lambda: &SymbolicScalar) -> Self {
        let mode = mode.into();
        let c = lambda * &SymbolicScalar::from_index_form(&mode);
        DiffOp::term(
            mode,
            vec![&c * &c, c.scale(&2.into()), SymbolicScalar::one()],
        )
    }

    fn add_term(&mut self, mode: IndexLinearForm, poly: &DPoly) {
        let sum = match self.terms.remove(&mode) {
            Some(p) => poly_add(&p, poly),
            None => trim(poly.clone()),
        };
        if !sum.is_empty() {
            self.terms.insert(mode, sum);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&IndexLinearForm, &DPoly)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, c: &SymbolicScalar) -> Self {
        let mut out = DiffOp::zero();
        for (m, p) in &self.terms {
            out.add_term(m.clone(), &p.iter().map(|t| t * c).collect());
        }
        out
    }

    /// Binds λ or index symbols; modes that coincide afterwards merge.
    pub fn substitute(&self, b: &Bindings) -> Result<Self> {
        let mut out = DiffOp::zero();
        for (m, p) in &self.terms {
            let poly = p
                .iter()
                .map(|t| t.substitute(b))
                .collect::<Result<DPoly>>()?;
            out.add_term(m.substitute(&b.indices), &poly);
        }
        Ok(out)
    }
}

/// `ab − ba`.
pub fn commutator(a: &DiffOp, b: &DiffOp) -> DiffOp {
    &(a * b) - &(b * a)
}

/// `x[y,z] + y[z,x] + z[x,y]`.
pub fn ternary_commutator(x: &DiffOp, y: &DiffOp, z: &DiffOp) -> DiffOp {
    let mut out = x * &commutator(y, z);
    out = &out + &(y * &commutator(z, x));
    &out + &(z * &commutator(x, y))
}

pub fn op_mul(a: &DiffOp, b: &DiffOp) -> DiffOp {
    a * b
}

impl Mul for &DiffOp {
    type Output = DiffOp;
    // shift orders add under composition
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, other: &DiffOp) -> DiffOp {
        let mut out = DiffOp::zero();
        for (m, p) in &self.terms {
            for (n, r) in &other.terms {
                out.add_term(m + n, &poly_mul(&shift(p, n), r));
            }
        }
        out
    }
}

impl Add for &DiffOp {
    type Output = DiffOp;
    fn add(self, other: &DiffOp) -> DiffOp {
        let mut out = self.clone();
        for (m, p) in &other.terms {
            out.add_term(m.clone(), p);
        }
        out
    }
}

impl Neg for &DiffOp {
    type Output = DiffOp;
    fn neg(self) -> DiffOp {
        self.scale(&SymbolicScalar::integer(-1))
    }
}

impl Sub for &DiffOp {
    type Output = DiffOp;
    fn sub(self, other: &DiffOp) -> DiffOp {
        self + &(-other)
    }
}

impl fmt::Display for DiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, p)| {
                let poly: Vec<String> = p
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(j, c)| match j {
                        0 => format!("({c})"),
                        1 => format!("({c})*D"),
                        j => format!("({c})*D^{j}"),
                    })
                    .collect();
                format!("E_({m})*[{}]", poly.join(" + "))
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

impl fmt::Debug for DiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(t: &str) -> SymbolicScalar {
        t.parse().unwrap()
    }

    fn m(name: &str) -> IndexLinearForm {
        IndexLinearForm::var(name)
    }

    #[test]
    fn exponents_add() {
        assert_eq!(&DiffOp::e(1) * &DiffOp::e(2), DiffOp::e(3));
    }

    #[test]
    fn unit() {
        let a = DiffOp::l(m("m"), &s("lambda"));
        assert_eq!(&a * &DiffOp::e(0), a);
        assert_eq!(&DiffOp::e(0) * &a, a);
    }

    #[test]
    fn l_times_e() {
        let p = &DiffOp::l(m("m"), &s("lambda")) * &DiffOp::e(m("n"));
        let expected = DiffOp::term(m("m") + m("n"), vec![s("n + lambda*m"), s("1")]);
        assert_eq!(p, expected);
    }

    #[test]
    fn binary_relations() {
        let lam = s("lambda");
        let (lm, ln) = (DiffOp::l(m("m"), &lam), DiffOp::l(m("n"), &lam));
        let mn = m("m") + m("n");
        assert_eq!(
            commutator(&lm, &ln),
            DiffOp::l(mn.clone(), &lam).scale(&s("n - m"))
        );
        assert!(commutator(&DiffOp::e(m("m")), &DiffOp::e(m("n"))).is_zero());
        assert_eq!(
            commutator(&lm, &DiffOp::e(m("n"))),
            DiffOp::e(mn).scale(&s("n"))
        );
    }
}
