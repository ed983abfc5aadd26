//! Univariate polynomials over the Gaussian rationals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::scalar::{GaussianRational, Symbol, SymbolicScalar};

/// Coefficients, constant term first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UPoly(pub Vec<GaussianRational>);

impl UPoly {
    fn trim(mut v: Vec<GaussianRational>) -> Self {
        while v.last().is_some_and(Zero::is_zero) {
            v.pop();
        }
        UPoly(v)
    }

    /// Reads `s` as a polynomial in `var`; `None` if other symbols occur.
    /// Negative powers of `var` are cleared by multiplying through.
    pub fn from_scalar(s: &SymbolicScalar, var: &Symbol) -> Option<Self> {
        let mut min = 0;
        for (m, _) in s.terms() {
            if !m.indices().is_empty() || !m.q_exponent().is_zero() {
                return None;
            }
            if m.params().keys().any(|p| p != var) {
                return None;
            }
            min = min.min(m.param_exponent(var));
        }
        let mut coeffs: Vec<GaussianRational> = Vec::new();
        for (m, c) in s.terms() {
            let e = (m.param_exponent(var) - min) as usize;
            if coeffs.len() <= e {
                coeffs.resize(e + 1, GaussianRational::zero());
            }
            coeffs[e] += c;
        }
        Some(UPoly::trim(coeffs))
    }

    pub fn to_scalar(&self, var: &Symbol) -> SymbolicScalar {
        let x = SymbolicScalar::param_sym(var);
        let mut out = SymbolicScalar::zero();
        for (e, c) in self.0.iter().enumerate() {
            out += &x.pow(e as u32).scale(c);
        }
        out
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.0.len() <= 1
    }

    pub fn eval(&self, x: &GaussianRational) -> GaussianRational {
        let mut acc = GaussianRational::zero();
        for c in self.0.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    pub fn monic(&self) -> Self {
        match self.0.last() {
            Some(lead) => {
                let inv = lead.inv().expect("nonzero lead");
                UPoly(self.0.iter().map(|c| c * &inv).collect())
            }
            None => self.clone(),
        }
    }

    /// Quotient and remainder.
    pub fn div_rem(&self, d: &UPoly) -> (UPoly, UPoly) {
        let dd = d.degree().expect("nonzero divisor");
        let lead_inv = d.0[dd].inv().expect("nonzero lead");
        let mut r = self.0.clone();
        let mut quot = vec![GaussianRational::zero(); self.0.len().saturating_sub(dd).max(1)];
        while r.len() > dd && !r.is_empty() {
            let shift = r.len() - 1 - dd;
            let c = &r[r.len() - 1] * &lead_inv;
            for (i, dc) in d.0.iter().enumerate() {
                let t = &c * dc;
                r[shift + i] = &r[shift + i] - &t;
            }
            quot[shift] = c;
            r.pop();
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
        }
        (UPoly::trim(quot), UPoly::trim(r))
    }

    pub fn gcd(&self, other: &UPoly) -> UPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Gaussian-rational roots with multiplicity removed, and the cofactor
    /// left after dividing them out (constant when fully split).
    pub fn roots(&self) -> (Vec<GaussianRational>, UPoly) {
        let mut p = self.clone();
        let mut roots = Vec::new();
        if p.is_zero() {
            return (roots, p);
        }
        while p.0.first().is_some_and(Zero::is_zero) {
            p.0.remove(0);
            if !roots.contains(&GaussianRational::zero()) {
                roots.push(GaussianRational::zero());
            }
        }
        for cand in candidates(&p) {
            if p.is_constant() {
                break;
            }
            let mut hit = false;
            while !p.is_constant() && p.eval(&cand).is_zero() {
                let lin = UPoly(vec![-&cand, GaussianRational::one()]);
                p = p.div_rem(&lin).0;
                hit = true;
            }
            if hit {
                roots.push(cand);
            }
        }
        roots.sort();
        (roots, p)
    }
}

/// Clears denominators to Gaussian-integer coefficients.
fn integral_coeffs(p: &UPoly) -> Vec<(BigInt, BigInt)> {
    let mut l = BigInt::one();
    for c in &p.0 {
        l = l.lcm(&c.denominator_lcm());
    }
    let scale = GaussianRational::from(BigRational::from_integer(l));
    p.0.iter()
        .map(|c| (c * &scale).as_gaussian_integer().expect("integral"))
        .collect()
}

const NORM_LIMIT: i64 = 10_000;

/// Gaussian-integer divisors of `(a, b)` up to units, as long as the
/// norm stays small enough to enumerate.
fn divisors(a: &BigInt, b: &BigInt) -> Option<Vec<(i64, i64)>> {
    let norm = (a * a + b * b).to_i64()?;
    if norm > NORM_LIMIT || norm == 0 {
        return None;
    }
    let r = (norm as f64).sqrt().ceil() as i64;
    let mut out = Vec::new();
    for x in -r..=r {
        for y in -r..=r {
            let n = x * x + y * y;
            if n == 0 || norm % n != 0 {
                continue;
            }
            // (a+bi)/(x+yi) = (a+bi)(x-yi)/n
            let re = a * x + b * y;
            let im = b * x - a * y;
            if (&re % n).is_zero() && (&im % n).is_zero() {
                out.push((x, y));
            }
        }
    }
    Some(out)
}

fn candidates(p: &UPoly) -> Vec<GaussianRational> {
    let ints = integral_coeffs(p);
    let (a0, an) = match (ints.first(), ints.last()) {
        (Some(a0), Some(an)) => (a0, an),
        _ => return Vec::new(),
    };
    let (num, den) = match (divisors(&a0.0, &a0.1), divisors(&an.0, &an.1)) {
        (Some(n), Some(d)) => (n, d),
        _ => return Vec::new(),
    };
    let mut out = Vec::new();
    for (nx, ny) in &num {
        for (dx, dy) in &den {
            let n = GaussianRational::from_parts(*nx, *ny);
            let d = GaussianRational::from_parts(*dx, *dy);
            let c = n.checked_div(&d).expect("nonzero divisor");
            if !out.contains(&c) {
                out.push(c);
            }
        }
    }
    out.sort_by(|a, b| {
        let key = |g: &GaussianRational| (g.norm_sqr(), g.re().is_negative(), g.clone());
        key(a).cmp(&key(b))
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(text: &str) -> UPoly {
        UPoly::from_scalar(&text.parse().unwrap(), &Symbol::new("x")).unwrap()
    }

    #[test]
    fn fourth_roots_of_unity() {
        let (roots, rest) = p("x^4 - 1").roots();
        assert_eq!(roots.len(), 4);
        assert!(rest.is_constant());
        for r in &roots {
            assert_eq!(r.pow(4).unwrap(), GaussianRational::one());
        }
    }

    #[test]
    fn z_squared_plus_four() {
        let (roots, rest) = p("x^2 + 4").roots();
        assert_eq!(
            roots,
            vec![
                GaussianRational::from_parts(0, -2),
                GaussianRational::from_parts(0, 2)
            ]
        );
        assert!(rest.is_constant());
    }

    #[test]
    fn irreducible_leftover() {
        let (roots, rest) = p("x^3 - 2*x").roots();
        assert_eq!(roots, vec![GaussianRational::zero()]);
        assert_eq!(rest.degree(), Some(2));
    }

    #[test]
    fn rational_root() {
        let (roots, _) = p("4*x - 1").roots();
        assert_eq!(roots, vec![GaussianRational::from_ratio(1, 4).unwrap()]);
    }

    #[test]
    fn gcd_of_conditions() {
        let g = p("x^3 + 4*x").gcd(&p("x^2 + 4"));
        assert_eq!(g, p("x^2 + 4"));
        assert!(p("x - 1").gcd(&p("x + 1")).is_constant());
    }
}
