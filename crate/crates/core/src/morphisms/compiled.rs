//! A symbolic residual compiled for fast evaluation at integer degrees.
//!
//! Rows are homogeneous equations, so every coefficient is scaled by one
//! common denominator and evaluation runs in Gaussian-integer `i128`.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};
use crate::scalar::{GaussianRational, IndexLinearForm, Monomial, Symbol, SymbolicScalar};
use crate::ternary::{Element, Family};

/// `constant + Σ coeffs[i] · point[i]`.
#[derive(Clone, Debug)]
struct Affine(i64, Vec<i64>);

impl Affine {
    fn compile(form: &IndexLinearForm, vars: &[Symbol]) -> Result<Self> {
        let mut coeffs = vec![0; vars.len()];
        for (s, c) in form.coeffs() {
            let i = vars
                .iter()
                .position(|v| v == s)
                .ok_or_else(|| Error::UnboundSymbol(s.to_string()))?;
            coeffs[i] = *c;
        }
        Ok(Affine(form.constant_term(), coeffs))
    }

    fn eval(&self, p: &[i64]) -> i64 {
        self.0 + self.1.iter().zip(p).map(|(c, x)| c * x).sum::<i64>()
    }
}

/// `(re, im)` of a Gaussian integer.
type GaussInt = (i128, i128);

#[derive(Clone, Debug)]
struct Term {
    family: usize,
    degree: Affine,
    q_exp: Affine,
    powers: Vec<u32>,
    column: usize,
    coeff: GaussInt,
}

#[derive(Clone, Debug)]
pub struct CompiledResidual {
    families: Vec<Family>,
    columns: Vec<Monomial>,
    terms: Vec<Term>,
}

fn to_i128(n: &BigInt) -> Result<i128> {
    n.to_i128().ok_or_else(|| {
        Error::Precondition(format!("coefficient {n} too large for window evaluation"))
    })
}

fn overflow() -> Error {
    Error::Precondition("overflow in window evaluation".into())
}

impl CompiledResidual {
    /// Compiles a residual whose degrees and coefficients only mention the
    /// index symbols `vars`.
    pub fn new(residual: &Element, vars: &[Symbol]) -> Result<Self> {
        let mut lcm = BigInt::one();
        for (_, c) in residual.terms() {
            for (_, k) in c.terms() {
                lcm = lcm.lcm(&k.denominator_lcm());
            }
        }
        let scale = GaussianRational::from(BigRational::from_integer(lcm));
        let mut families: Vec<Family> = Vec::new();
        let mut columns: Vec<Monomial> = Vec::new();
        let mut col_index: BTreeMap<Monomial, usize> = BTreeMap::new();
        let mut terms = Vec::new();
        for (g, c) in residual.terms() {
            let family = match families.iter().position(|f| *f == g.family) {
                Some(i) => i,
                None => {
                    families.push(g.family.clone());
                    families.len() - 1
                }
            };
            let degree = Affine::compile(&g.degree, vars)?;
            for (m, k) in c.terms() {
                let part = m.param_part();
                let column = *col_index.entry(part.clone()).or_insert_with(|| {
                    columns.push(part);
                    columns.len() - 1
                });
                let mut powers = vec![0; vars.len()];
                for (s, e) in m.indices() {
                    let i = vars
                        .iter()
                        .position(|v| v == s)
                        .ok_or_else(|| Error::UnboundSymbol(s.to_string()))?;
                    powers[i] = *e;
                }
                let (re, im) = (k * &scale)
                    .as_gaussian_integer()
                    .expect("denominators cleared");
                terms.push(Term {
                    family,
                    degree: degree.clone(),
                    q_exp: Affine::compile(m.q_exponent(), vars)?,
                    powers,
                    column,
                    coeff: (to_i128(&re)?, to_i128(&im)?),
                });
            }
        }
        Ok(CompiledResidual {
            families,
            columns,
            terms,
        })
    }

    /// One equation per output generator and `q` exponent at the point.
    pub fn rows_at(&self, p: &[i64]) -> Result<Vec<SymbolicScalar>> {
        let mut acc: HashMap<(usize, i64, i64), BTreeMap<usize, GaussInt>> = HashMap::new();
        for t in &self.terms {
            let mut w: i128 = 1;
            for (x, e) in p.iter().zip(&t.powers) {
                w = w
                    .checked_mul((*x as i128).checked_pow(*e).ok_or_else(overflow)?)
                    .ok_or_else(overflow)?;
            }
            let key = (t.family, t.degree.eval(p), t.q_exp.eval(p));
            let slot = acc
                .entry(key)
                .or_default()
                .entry(t.column)
                .or_insert((0, 0));
            let re = t.coeff.0.checked_mul(w).ok_or_else(overflow)?;
            let im = t.coeff.1.checked_mul(w).ok_or_else(overflow)?;
            slot.0 = slot.0.checked_add(re).ok_or_else(overflow)?;
            slot.1 = slot.1.checked_add(im).ok_or_else(overflow)?;
        }
        let mut rows = Vec::new();
        for cols in acc.into_values() {
            let mut row = SymbolicScalar::zero();
            for (c, (re, im)) in cols {
                if re == 0 && im == 0 {
                    continue;
                }
                let k = GaussianRational::new(
                    BigRational::from_integer(re.into()),
                    BigRational::from_integer(im.into()),
                );
                row.add_term(self.columns[c].clone(), k);
            }
            if !row.is_zero() {
                rows.push(row);
            }
        }
        Ok(rows)
    }

    pub fn families(&self) -> &[Family] {
        &self.families
    }
}
