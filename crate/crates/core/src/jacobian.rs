//! The functional-Jacobian ternary bracket on polynomials in `x1, x2, x3`
//! and its twist by a unimodular substitution.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{GaussianRational, Symbol, SymbolicScalar};

/// Sparse polynomial in `x1, x2, x3`; no zero coefficients are stored.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Poly3 {
    terms: BTreeMap<[u32; 3], GaussianRational>,
}

impl Poly3 {
    pub fn zero() -> Self {
        Poly3::default()
    }

    pub fn constant(c: GaussianRational) -> Self {
        Poly3::monomial([0, 0, 0], c)
    }

    pub fn monomial(exps: [u32; 3], c: GaussianRational) -> Self {
        let mut p = Poly3::zero();
        p.add_term(exps, c);
        p
    }

    /// The coordinate `x_i`, `i ∈ {1, 2, 3}`.
    pub fn var(i: usize) -> Self {
        let mut e = [0; 3];
        e[i - 1] = 1;
        Poly3::monomial(e, GaussianRational::one())
    }

    fn add_term(&mut self, exps: [u32; 3], c: GaussianRational) {
        let sum = match self.terms.remove(&exps) {
            Some(v) => &v + &c,
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(exps, sum);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32; 3], &GaussianRational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn as_constant(&self) -> Option<GaussianRational> {
        match self.terms.len() {
            0 => Some(GaussianRational::zero()),
            1 => self.terms.get(&[0, 0, 0]).cloned(),
            _ => None,
        }
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        let mut out = Poly3::zero();
        for (e, v) in &self.terms {
            out.add_term(*e, v * c);
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Poly3::constant(GaussianRational::one()), |acc, _| {
            &acc * self
        })
    }

    /// `∂/∂x_i`, `i ∈ {1, 2, 3}`.
    pub fn derivative(&self, i: usize) -> Self {
        let mut out = Poly3::zero();
        for (e, v) in &self.terms {
            let k = e[i - 1];
            if k > 0 {
                let mut d = *e;
                d[i - 1] -= 1;
                out.add_term(d, v * &GaussianRational::from_integer(k.into()));
            }
        }
        out
    }

    pub fn gradient(&self) -> [Poly3; 3] {
        [1, 2, 3].map(|i| self.derivative(i))
    }

    /// `f ∘ γ`: substitutes `x_i ↦ γ_i`.
    pub fn compose(&self, gamma: &[Poly3; 3]) -> Self {
        let mut out = Poly3::zero();
        for (e, v) in &self.terms {
            let t = (0..3).fold(Poly3::constant(v.clone()), |acc, i| {
                &acc * &gamma[i].pow(e[i])
            });
            out = &out + &t;
        }
        out
    }

    fn to_scalar(&self) -> SymbolicScalar {
        let mut out = SymbolicScalar::zero();
        for (e, v) in &self.terms {
            let mut t = SymbolicScalar::constant(v.clone());
            for (i, k) in e.iter().enumerate() {
                t = &t * &SymbolicScalar::param(&format!("x{}", i + 1)).pow(*k);
            }
            out += &t;
        }
        out
    }
}

pub fn det3(m: &[[Poly3; 3]; 3]) -> Poly3 {
    let minor = |a: usize, b: usize| &(&m[1][a] * &m[2][b]) - &(&m[1][b] * &m[2][a]);
    let t0 = &m[0][0] * &minor(1, 2);
    let t1 = &m[0][1] * &minor(0, 2);
    let t2 = &m[0][2] * &minor(0, 1);
    &(&t0 - &t1) + &t2
}

/// Rows are the gradients of `f1, f2, f3`.
pub fn jacobian_matrix(f: &[Poly3; 3]) -> [[Poly3; 3]; 3] {
    [f[0].gradient(), f[1].gradient(), f[2].gradient()]
}

/// `det(∂f_i/∂x_j)`.
pub fn jacobian_bracket(f1: &Poly3, f2: &Poly3, f3: &Poly3) -> Poly3 {
    det3(&jacobian_matrix(&[f1.clone(), f2.clone(), f3.clone()]))
}

pub fn compose_substitution(f: &Poly3, gamma: &[Poly3; 3]) -> Poly3 {
    f.compose(gamma)
}

pub fn unimodular_check(gamma: &[Poly3; 3]) -> bool {
    det3(&jacobian_matrix(gamma))
        .as_constant()
        .is_some_and(|c| c.is_one())
}

pub fn identity_gamma() -> [Poly3; 3] {
    [1, 2, 3].map(Poly3::var)
}

/// `(x1 + x2², x2, x3)`.
pub fn shear_gamma() -> [Poly3; 3] {
    [
        &Poly3::var(1) + &Poly3::var(2).pow(2),
        Poly3::var(2),
        Poly3::var(3),
    ]
}

pub fn gamma_preset(name: &str) -> Result<[Poly3; 3]> {
    match name {
        "identity" => Ok(identity_gamma()),
        "shear" => Ok(shear_gamma()),
        other => Err(Error::UnknownName {
            kind: "substitution",
            name: other.into(),
        }),
    }
}

/// Bracket `ρ_γ ∘ det J` with twist `(ρ_γ, ρ_γ)`, `ρ_γ(f) = f ∘ γ`.
#[derive(Clone, Debug)]
pub struct TwistedJacobian {
    pub gamma: [Poly3; 3],
}

impl TwistedJacobian {
    pub fn rho(&self, f: &Poly3) -> Poly3 {
        f.compose(&self.gamma)
    }

    pub fn bracket(&self, f1: &Poly3, f2: &Poly3, f3: &Poly3) -> Poly3 {
        self.rho(&jacobian_bracket(f1, f2, f3))
    }
}

pub fn twisted_jacobian_algebra(gamma: [Poly3; 3]) -> Result<TwistedJacobian> {
    if !unimodular_check(&gamma) {
        let det = det3(&jacobian_matrix(&gamma));
        return Err(Error::Precondition(format!(
            "substitution is not unimodular: det J = {det}"
        )));
    }
    Ok(TwistedJacobian { gamma })
}

/// Fundamental-identity residual of a bracket, twisted by `alpha` in the
/// outer slots (identity for the plain identity).
pub fn identity_residual(
    br: impl Fn(&Poly3, &Poly3, &Poly3) -> Poly3,
    alpha: impl Fn(&Poly3) -> Poly3,
    x: &[Poly3; 5],
) -> Poly3 {
    let [x1, x2, x3, x4, x5] = x;
    let mut r = br(&alpha(x1), &alpha(x2), &br(x3, x4, x5));
    r = &r - &br(&br(x1, x2, x3), &alpha(x4), &alpha(x5));
    r = &r - &br(&alpha(x3), &br(x1, x2, x4), &alpha(x5));
    &r - &br(&alpha(x3), &alpha(x4), &br(x1, x2, x5))
}

/// Random polynomial of total degree at most `degree` with integer
/// coefficients in `[−bound, bound]`.
pub fn random_poly(rng: &mut impl Rng, degree: u32, bound: i64) -> Poly3 {
    let mut p = Poly3::zero();
    for a in 0..=degree {
        for b in 0..=degree - a {
            for c in 0..=degree - a - b {
                p.add_term(
                    [a, b, c],
                    GaussianRational::from_integer(rng.gen_range(-bound..=bound)),
                );
            }
        }
    }
    p
}

#[derive(Clone, Debug, Serialize)]
pub struct SampleConfig {
    pub samples: usize,
    pub degree: u32,
    pub bound: i64,
    pub seed: u64,
}

impl Default for SampleConfig {
    fn default() -> Self {
        SampleConfig {
            samples: 200,
            degree: 2,
            bound: 3,
            seed: 0x6a61_636f_6269,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct JacobianReport {
    pub gamma: [String; 3],
    pub config: SampleConfig,
    pub unimodular: bool,
    pub fi_failures: usize,
    pub hfi_failures: usize,
    pub antisymmetry_failures: usize,
    pub det_multiplicativity_failures: usize,
}

impl JacobianReport {
    pub fn is_clean(&self) -> bool {
        self.unimodular
            && self.fi_failures
                + self.hfi_failures
                + self.antisymmetry_failures
                + self.det_multiplicativity_failures
                == 0
    }
}

fn antisymmetric(f: &[Poly3; 3]) -> bool {
    let base = jacobian_bracket(&f[0], &f[1], &f[2]);
    let perms = [[1, 2, 0], [2, 0, 1], [1, 0, 2], [0, 2, 1], [2, 1, 0]];
    perms.iter().enumerate().all(|(i, p)| {
        let t = jacobian_bracket(&f[p[0]], &f[p[1]], &f[p[2]]);
        if i < 2 {
            t == base
        } else {
            t == -&base
        }
    })
}

/// Exact checks on seeded random samples; sample `i` uses its own stream
/// so results do not depend on scheduling.
pub fn jacobian_demo(gamma: [Poly3; 3], config: SampleConfig) -> Result<JacobianReport> {
    let twisted = twisted_jacobian_algebra(gamma.clone())?;
    let counts = (0..config.samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            rng.set_stream(i as u64);
            let x: [Poly3; 5] =
                std::array::from_fn(|_| random_poly(&mut rng, config.degree, config.bound));
            let fi = !identity_residual(jacobian_bracket, Poly3::clone, &x).is_zero();
            let hfi =
                !identity_residual(|a, b, c| twisted.bracket(a, b, c), |f| twisted.rho(f), &x)
                    .is_zero();
            let triple = [x[0].clone(), x[1].clone(), x[2].clone()];
            let anti = !antisymmetric(&triple);
            let lhs = det3(&jacobian_matrix(&triple.clone().map(|f| f.compose(&gamma))));
            let rhs =
                &det3(&jacobian_matrix(&triple)).compose(&gamma) * &det3(&jacobian_matrix(&gamma));
            [fi, hfi, anti, lhs != rhs].map(usize::from)
        })
        .reduce(|| [0; 4], |a, b| std::array::from_fn(|i| a[i] + b[i]));
    Ok(JacobianReport {
        gamma: gamma.map(|g| g.to_string()),
        config,
        unimodular: true,
        fi_failures: counts[0],
        hfi_failures: counts[1],
        antisymmetry_failures: counts[2],
        det_multiplicativity_failures: counts[3],
    })
}

impl Add for &Poly3 {
    type Output = Poly3;
    fn add(self, other: &Poly3) -> Poly3 {
        let mut out = self.clone();
        for (e, v) in &other.terms {
            out.add_term(*e, v.clone());
        }
        out
    }
}

impl Neg for &Poly3 {
    type Output = Poly3;
    fn neg(self) -> Poly3 {
        self.scale(&GaussianRational::from_integer(-1))
    }
}

impl Sub for &Poly3 {
    type Output = Poly3;
    fn sub(self, other: &Poly3) -> Poly3 {
        self + &(-other)
    }
}

impl Mul for &Poly3 {
    type Output = Poly3;
    fn mul(self, other: &Poly3) -> Poly3 {
        let mut out = Poly3::zero();
        for (e, v) in &self.terms {
            for (f, w) in &other.terms {
                out.add_term([e[0] + f[0], e[1] + f[1], e[2] + f[2]], v * w);
            }
        }
        out
    }
}

impl fmt::Display for Poly3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.to_scalar(), f)
    }
}

impl fmt::Debug for Poly3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Poly3 {
    type Err = Error;

    /// Parses a polynomial in `x1, x2, x3`, e.g. `x1 + x2^2`.
    fn from_str(s: &str) -> Result<Self> {
        let scalar: SymbolicScalar = s.parse()?;
        let vars = ["x1", "x2", "x3"].map(Symbol::new);
        let mut out = Poly3::zero();
        for (m, c) in scalar.terms() {
            if !m.indices().is_empty() || !m.q_exponent().is_zero() {
                return Err(Error::Parse(format!(
                    "`{s}` is not a polynomial in x1, x2, x3"
                )));
            }
            let mut e = [0u32; 3];
            for (sym, k) in m.params() {
                let i = vars
                    .iter()
                    .position(|v| v == sym)
                    .ok_or_else(|| Error::Parse(format!("unexpected symbol `{sym}` in `{s}`")))?;
                e[i] = u32::try_from(*k)
                    .map_err(|_| Error::Parse(format!("negative power in `{s}`")))?;
            }
            out.add_term(e, c.clone());
        }
        Ok(out)
    }
}
