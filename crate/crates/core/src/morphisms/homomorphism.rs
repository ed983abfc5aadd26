use rayon::prelude::*;

use crate::error::Result;
use crate::scalar::IndexLinearForm;
use crate::ternary::identity::{algebra_label, pattern_label};
use crate::ternary::{Algebra, Element, Family, Generator, LinearMap, Mode, Report, Violation};

/// Family-sorted triples (with repetition) drawn from `families`.
pub fn sorted_triples(families: &[Family]) -> Vec<[Family; 3]> {
    let mut fams = families.to_vec();
    fams.sort();
    let mut out = Vec::new();
    for i in 0..fams.len() {
        for j in i..fams.len() {
            for k in j..fams.len() {
                out.push([fams[i].clone(), fams[j].clone(), fams[k].clone()]);
            }
        }
    }
    out
}

/// Generators for a triple pattern at degrees `k, m, n`.
pub fn triple_slots(p: &[Family; 3]) -> [Generator; 3] {
    let names = ["k", "m", "n"];
    std::array::from_fn(|i| Generator::new(p[i].clone(), IndexLinearForm::var(names[i])))
}

/// `f([x,y,w]) − [f x, f y, f w]` on generators.
pub fn homomorphism_residual(a: &Algebra, f: &LinearMap, gens: &[Generator; 3]) -> Result<Element> {
    let [x, y, w] = gens.clone().map(Element::generator);
    let lhs = f.apply(&a.bracket(&x, &y, &w)?)?;
    let rhs = a.bracket(&f.apply(&x)?, &f.apply(&y)?, &f.apply(&w)?)?;
    Ok(&lhs - &rhs)
}

/// Symbolic check that `f` commutes with the bracket. Both sides are
/// skew-symmetric, so family-sorted triples suffice.
pub fn is_homomorphism(a: &Algebra, f: &LinearMap) -> Result<Report> {
    let f = f.specialize(a.specialization())?;
    let patterns = sorted_triples(a.families());
    let found: Vec<Option<Violation>> = patterns
        .par_iter()
        .map(|p| {
            let gens = triple_slots(p);
            let r = homomorphism_residual(a, &f, &gens)?;
            Ok((!r.is_zero()).then(|| Violation {
                pattern: pattern_label(&gens),
                residual: r,
                bindings: None,
            }))
        })
        .collect::<Result<_>>()?;
    Ok(Report {
        algebra: algebra_label(a),
        twist: Some(format!("homomorphism {f}")),
        mode: Mode::Symbolic,
        checked: patterns.len(),
        violations: found.into_iter().flatten().collect(),
    })
}
