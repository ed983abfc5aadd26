use rayon::prelude::*;

use super::{Algebra, Element, Family, Generator, Mode, Report, TwistPair, Violation};
use crate::error::Result;
use crate::scalar::{fresh_indices, IndexLinearForm};

/// `[x₁,x₂,[x₃,x₄,x₅]] − [[x₁,x₂,x₃],x₄,x₅] − [x₃,[x₁,x₂,x₄],x₅] − [x₃,x₄,[x₁,x₂,x₅]]`.
pub fn fi_residual(a: &Algebra, x: &[Element; 5]) -> Result<Element> {
    let [x1, x2, x3, x4, x5] = x;
    let mut r = a.bracket(x1, x2, &a.bracket(x3, x4, x5)?)?;
    r -= &a.bracket(&a.bracket(x1, x2, x3)?, x4, x5)?;
    r -= &a.bracket(x3, &a.bracket(x1, x2, x4)?, x5)?;
    r -= &a.bracket(x3, x4, &a.bracket(x1, x2, x5)?)?;
    Ok(r)
}

/// The twisted residual. The twist inherits any parameter or `q` values
/// the algebra is specialized to.
pub fn hfi_residual(a: &Algebra, t: &TwistPair, x: &[Element; 5]) -> Result<Element> {
    let t = t.specialize(a.specialization())?;
    let [x1, x2, x3, x4, x5] = x;
    let a1 = |e: &Element| t.alpha1.apply(e);
    let a2 = |e: &Element| t.alpha2.apply(e);
    let mut r = a.bracket(&a1(x1)?, &a2(x2)?, &a.bracket(x3, x4, x5)?)?;
    r -= &a.bracket(&a.bracket(x1, x2, x3)?, &a1(x4)?, &a2(x5)?)?;
    r -= &a.bracket(&a1(x3)?, &a.bracket(x1, x2, x4)?, &a2(x5)?)?;
    r -= &a.bracket(&a1(x3)?, &a2(x4)?, &a.bracket(x1, x2, x5)?)?;
    Ok(r)
}

pub fn residual(a: &Algebra, t: Option<&TwistPair>, x: &[Element; 5]) -> Result<Element> {
    match t {
        Some(t) => hfi_residual(a, t, x),
        None => fi_residual(a, x),
    }
}

/// All family patterns for five slots. With `dedup`, only patterns that
/// are family-sorted within slots {1,2} and within slots {3,4,5} are kept.
pub fn family_patterns(families: &[Family], dedup: bool) -> Vec<[Family; 5]> {
    let mut fams = families.to_vec();
    fams.sort();
    let n = fams.len();
    let mut out = Vec::new();
    let total = n.pow(5);
    for code in 0..total {
        let mut c = code;
        let mut idx = [0usize; 5];
        for slot in (0..5).rev() {
            idx[slot] = c % n;
            c /= n;
        }
        if dedup && !(idx[0] <= idx[1] && idx[2] <= idx[3] && idx[3] <= idx[4]) {
            continue;
        }
        out.push(idx.map(|i| fams[i].clone()));
    }
    out
}

/// Generators for a pattern at the fresh slot degrees `u, v, k, m, n`.
pub fn symbolic_slots(pattern: &[Family; 5]) -> [Generator; 5] {
    let syms = fresh_indices(5);
    std::array::from_fn(|i| {
        Generator::new(pattern[i].clone(), IndexLinearForm::var(syms[i].clone()))
    })
}

pub fn pattern_label(gens: &[Generator]) -> String {
    let parts: Vec<String> = gens.iter().map(|g| g.to_string()).collect();
    format!("({})", parts.join(","))
}

/// Skew-symmetry reduces the pattern set only when both twists agree.
pub fn dedup_allowed(t: Option<&TwistPair>) -> bool {
    t.is_none_or(TwistPair::is_symmetric)
}

/// Symbolic check of the (Hom-)Nambu identity over every family pattern
/// with independent symbolic degrees.
pub fn verify_identity_symbolic(a: &Algebra, t: Option<&TwistPair>) -> Result<Report> {
    let patterns = family_patterns(a.families(), dedup_allowed(t));
    let results: Vec<Option<Violation>> = patterns
        .par_iter()
        .map(|p| {
            let gens = symbolic_slots(p);
            let xs = gens.clone().map(Element::generator);
            let r = residual(a, t, &xs)?;
            Ok((!r.is_zero()).then(|| Violation {
                pattern: pattern_label(&gens),
                residual: r,
                bindings: None,
            }))
        })
        .collect::<Result<_>>()?;
    Ok(Report {
        algebra: algebra_label(a),
        twist: t.map(|t| t.name.clone()),
        mode: Mode::Symbolic,
        checked: patterns.len(),
        violations: results.into_iter().flatten().collect(),
    })
}

pub fn algebra_label(a: &Algebra) -> String {
    let params = a.specialization_text();
    if params.is_empty() {
        a.name().to_string()
    } else {
        format!("{}({params})", a.name())
    }
}
