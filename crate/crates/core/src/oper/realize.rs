use std::collections::BTreeMap;
use std::ops::RangeInclusive;

use num_complex::Complex64;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use super::diffop::{commutator, ternary_commutator, DiffOp};
use crate::error::{Error, Result};
use crate::scalar::{Bindings, GaussianRational, IndexLinearForm, NumericBindings, SymbolicScalar};
use crate::ternary::identity::{family_patterns, pattern_label};
use crate::ternary::{Family, Generator};
use crate::vw::cfz_algebra;

pub const LAMBDA: &str = "lambda";

fn lambda() -> SymbolicScalar {
    SymbolicScalar::param(LAMBDA)
}

fn idx(name: &str) -> IndexLinearForm {
    IndexLinearForm::var(name)
}

/// An operator identity checked exactly; `residual` is `lhs − rhs`.
#[derive(Clone, Debug, Serialize)]
pub struct OperCheck {
    pub name: String,
    pub residual: String,
    pub clean: bool,
}

impl OperCheck {
    fn new(name: &str, lhs: &DiffOp, rhs: &DiffOp) -> Self {
        let r = lhs - rhs;
        OperCheck {
            name: name.into(),
            residual: r.to_string(),
            clean: r.is_zero(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct OperReport {
    pub checks: Vec<OperCheck>,
}

impl OperReport {
    pub fn is_clean(&self) -> bool {
        self.checks.iter().all(|c| c.clean)
    }
}

/// The four ternary commutators of `L` and `E` with symbolic modes and λ.
pub fn verify_lars_relations() -> OperReport {
    let lam = lambda();
    let (k, m, n) = (idx("k"), idx("m"), idx("n"));
    let l = |d: &IndexLinearForm| DiffOp::l(d.clone(), &lam);
    let e = |d: &IndexLinearForm| DiffOp::e(d.clone());
    let s = &(&k + &m) + &n;
    let sc = |t: &str| t.parse::<SymbolicScalar>().expect("valid literal");
    let checks = vec![
        OperCheck::new(
            "[L_k,L_m,L_n]",
            &ternary_commutator(&l(&k), &l(&m), &l(&n)),
            &e(&s).scale(&sc("(lambda - lambda^2)*(k-m)*(m-n)*(n-k)")),
        ),
        OperCheck::new(
            "[L_k,L_m,E_n]",
            &ternary_commutator(&l(&k), &l(&m), &e(&n)),
            &(&l(&s) + &e(&s).scale(&sc("(1 - 2*lambda)*n"))).scale(&sc("m - k")),
        ),
        OperCheck::new(
            "[L_k,E_m,E_n]",
            &ternary_commutator(&l(&k), &e(&m), &e(&n)),
            &e(&s).scale(&sc("m - n")),
        ),
        OperCheck::new(
            "[E_k,E_m,E_n]",
            &ternary_commutator(&e(&k), &e(&m), &e(&n)),
            &DiffOp::zero(),
        ),
    ];
    OperReport { checks }
}

/// `L_m E_{−m} L_m = S_m` for symbolic `m` and λ, at `m = 0`, and at λ = 0.
pub fn verify_s_identity() -> Result<OperReport> {
    let check = |name: &str, mode: IndexLinearForm, lam: &SymbolicScalar| {
        let l = DiffOp::l(mode.clone(), lam);
        let lhs = &(&l * &DiffOp::e(-&mode)) * &l;
        OperCheck::new(name, &lhs, &DiffOp::s(mode, lam))
    };
    Ok(OperReport {
        checks: vec![
            check("L_m E_(-m) L_m = S_m", idx("m"), &lambda()),
            check("L_0 L_0 = S_0", IndexLinearForm::constant(0), &lambda()),
            check("lambda = 0", idx("m"), &SymbolicScalar::zero()),
        ],
    })
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct ComplexValue {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for ComplexValue {
    fn from(c: Complex64) -> Self {
        ComplexValue { re: c.re, im: c.im }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ShapeDeviation {
    pub shape: String,
    pub checked: usize,
    pub max_deviation: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct RecoveryReport {
    pub lambda: String,
    pub z: ComplexValue,
    pub window: [i64; 2],
    pub tol: f64,
    pub shapes: Vec<ShapeDeviation>,
    pub passed: bool,
}

/// Numeric data of the change of generators
/// `Q_m = c·L_m`, `R_m = d·E_m` with `c = −μ^(−1/4)`, `d = μ^(1/4)`,
/// `μ = λ − λ²`, principal branch.
struct Realization {
    lambda: GaussianRational,
    lambda_c: Complex64,
    c: Complex64,
    d: Complex64,
    z: Complex64,
}

impl Realization {
    fn new(lambda: &GaussianRational) -> Result<Self> {
        if !lambda.is_real() {
            return Err(Error::Precondition(format!(
                "lambda = {lambda} must be rational"
            )));
        }
        if lambda.is_zero() || lambda.is_one() {
            return Err(Error::Precondition(format!(
                "lambda = {lambda} makes lambda - lambda^2 vanish"
            )));
        }
        let lambda_c = lambda.to_complex();
        let mu = lambda_c - lambda_c * lambda_c;
        let root4 = mu.powf(0.25);
        Ok(Realization {
            lambda: lambda.clone(),
            lambda_c,
            c: -root4.inv(),
            d: root4,
            z: -(Complex64::one() - 2.0 * lambda_c) / (root4 * root4),
        })
    }

    fn operator(&self, g: &Generator) -> DiffOp {
        let lam = SymbolicScalar::constant(self.lambda.clone());
        match g.family {
            Family::Q => DiffOp::l(g.degree.clone(), &lam),
            _ => DiffOp::e(g.degree.clone()),
        }
    }

    fn factor(&self, g: &Generator) -> Complex64 {
        match g.family {
            Family::Q => self.c,
            _ => self.d,
        }
    }

    /// Coordinates in `Q_s, R_s` of `pref · op`, plus the size of any part
    /// outside the span of `L` and `E`.
    fn coordinates(&self, op: &DiffOp, pref: Complex64) -> (BTreeMap<Generator, Complex64>, f64) {
        let mut out = BTreeMap::new();
        let mut outside = 0.0;
        for (mode, poly) in op.terms() {
            let num = |i: usize| {
                poly.get(i)
                    .and_then(SymbolicScalar::as_constant)
                    .map_or(Complex64::zero(), |c| c.to_complex())
            };
            let Some(s) = mode.as_constant() else {
                outside = f64::INFINITY;
                continue;
            };
            let alpha = num(1);
            let beta = num(0) - alpha * self.lambda_c * s as f64;
            outside += (2..poly.len()).map(|i| (pref * num(i)).norm()).sum::<f64>();
            out.insert(Generator::new(Family::Q, s), pref * alpha / self.c);
            out.insert(Generator::new(Family::R, s), pref * beta / self.d);
        }
        (out, outside)
    }
}

fn deviation(got: &BTreeMap<Generator, Complex64>, want: &BTreeMap<Generator, Complex64>) -> f64 {
    got.keys()
        .chain(want.keys())
        .map(|g| {
            let a = got.get(g).copied().unwrap_or_default();
            let b = want.get(g).copied().unwrap_or_default();
            (a - b).norm()
        })
        .fold(0.0, f64::max)
}

fn window_tuples<const N: usize>(window: &RangeInclusive<i64>) -> Vec<[i64; N]> {
    let w: Vec<i64> = window.clone().collect();
    let total = w.len().pow(N as u32);
    (0..total)
        .map(|mut code| {
            std::array::from_fn(|_| {
                let v = w[code % w.len()];
                code /= w.len();
                v
            })
        })
        .collect()
}

/// Realizes `Q, R` by operators for the given λ and compares every
/// ternary commutator in the window with the cfz(z) brackets, along with
/// the binary commutators of `Q` and `R`.
pub fn cfz_recovery_numeric(
    lambda: &GaussianRational,
    window: RangeInclusive<i64>,
    tol: f64,
) -> Result<RecoveryReport> {
    let r = Realization::new(lambda)?;
    let cfz = cfz_algebra(&SymbolicScalar::param("z"))?;
    let zb = NumericBindings::new().param("z", r.z);
    let mut shapes = Vec::new();
    use Family::{Q, R};
    for fams in [[Q, Q, Q], [Q, Q, R], [Q, R, R], [R, R, R]] {
        let devs = window_tuples::<3>(&window)
            .par_iter()
            .map(|degs| {
                let gens: [Generator; 3] =
                    std::array::from_fn(|i| Generator::new(fams[i].clone(), degs[i]));
                let [x, y, w] = gens.clone().map(|g| r.operator(&g));
                let pref = gens.iter().map(|g| r.factor(g)).product::<Complex64>();
                let (got, outside) = r.coordinates(&ternary_commutator(&x, &y, &w), pref);
                let mut want = BTreeMap::new();
                for (g, c) in cfz
                    .bracket_generators(&gens[0], &gens[1], &gens[2])?
                    .terms()
                {
                    want.insert(g.clone(), c.evaluate_numeric(&zb)?);
                }
                Ok(deviation(&got, &want) + outside)
            })
            .collect::<Result<Vec<f64>>>()?;
        shapes.push(ShapeDeviation {
            shape: format!("[{},{},{}]", fams[0], fams[1], fams[2]),
            checked: devs.len(),
            max_deviation: devs.into_iter().fold(0.0, f64::max),
        });
    }
    // [Q_m,Q_n] = −μ^(−1/4)(n−m)Q_{m+n}, [R_m,R_n] = 0, [Q_m,R_n] = −μ^(−1/4) n R_{m+n}
    let c = r.c;
    type Rhs = fn(i64, i64, Complex64) -> (Family, Complex64);
    let binary: [(Family, Family, Rhs); 3] = [
        (Q, Q, |m, n, c| (Q, c * (n - m) as f64)),
        (R, R, |_, _, _| (R, Complex64::zero())),
        (Q, R, |_, n, c| (R, c * n as f64)),
    ];
    for (f1, f2, rhs) in binary {
        let devs: Vec<f64> = window_tuples::<2>(&window)
            .iter()
            .map(|[m, n]| {
                let (g1, g2) = (
                    Generator::new(f1.clone(), *m),
                    Generator::new(f2.clone(), *n),
                );
                let pref = r.factor(&g1) * r.factor(&g2);
                let (got, outside) =
                    r.coordinates(&commutator(&r.operator(&g1), &r.operator(&g2)), pref);
                let (fam, coeff) = rhs(*m, *n, c);
                let want = BTreeMap::from([(Generator::new(fam, m + n), coeff)]);
                deviation(&got, &want) + outside
            })
            .collect();
        shapes.push(ShapeDeviation {
            shape: format!("[{f1},{f2}]"),
            checked: devs.len(),
            max_deviation: devs.into_iter().fold(0.0, f64::max),
        });
    }
    let passed = shapes.iter().all(|s| s.max_deviation <= tol);
    Ok(RecoveryReport {
        lambda: lambda.to_string(),
        z: r.z.into(),
        window: [*window.start(), *window.end()],
        tol,
        shapes,
        passed,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanEntry {
    pub pattern: String,
    /// Whether the residual vanishes identically in the degrees and λ.
    pub symbolic_zero: bool,
    pub window_violations: usize,
    pub example: Option<String>,
}

/// Fundamental-identity residuals of the ternary commutator on the span
/// of `L` and `E`. Observational only: the commutator bracket is not
/// claimed to satisfy the identity.
pub fn larsson_fi_scan(
    lambda: Option<&GaussianRational>,
    window: RangeInclusive<i64>,
) -> Result<Vec<ScanEntry>> {
    let lam = lambda.map_or_else(self::lambda, |l| SymbolicScalar::constant(l.clone()));
    let patterns = family_patterns(&[Family::E, Family::L], true);
    patterns
        .par_iter()
        .map(|p| {
            let slots = crate::ternary::identity::symbolic_slots(p);
            let ops: Vec<DiffOp> = slots
                .iter()
                .map(|g| match g.family {
                    Family::L => DiffOp::l(g.degree.clone(), &lam),
                    _ => DiffOp::e(g.degree.clone()),
                })
                .collect();
            let br = ternary_commutator;
            let [x1, x2, x3, x4, x5] = [&ops[0], &ops[1], &ops[2], &ops[3], &ops[4]];
            let mut res = br(x1, x2, &br(x3, x4, x5));
            res = &res - &br(&br(x1, x2, x3), x4, x5);
            res = &res - &br(x3, &br(x1, x2, x4), x5);
            res = &res - &br(x3, x4, &br(x1, x2, x5));
            let mut violations = 0;
            let mut example = None;
            if !res.is_zero() {
                for point in window_tuples::<5>(&window) {
                    let mut b = Bindings::new();
                    for (g, v) in slots.iter().zip(point) {
                        let name = g
                            .degree
                            .symbols()
                            .next()
                            .expect("symbolic slot")
                            .to_string();
                        b = b.index(&name, v);
                    }
                    let at = res.substitute(&b)?;
                    if !at.is_zero() {
                        violations += 1;
                        example.get_or_insert_with(|| format!("{point:?}: {at}"));
                    }
                }
            }
            Ok(ScanEntry {
                pattern: pattern_label(&slots),
                symbolic_zero: res.is_zero(),
                window_violations: violations,
                example,
            })
        })
        .collect()
}
