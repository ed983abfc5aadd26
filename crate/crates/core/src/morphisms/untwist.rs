use super::homomorphism::is_homomorphism;
use crate::error::{Error, Result};
use crate::ternary::{Algebra, TwistPair};

const NILPOTENCY_BOUND: u32 = 8;

/// The algebra with bracket `α⁻¹ ∘ [·,·,·]` for a twist `(α, α)` whose map
/// is an invertible endomorphism. When `(a, t)` satisfies the twisted
/// identity, the result satisfies the untwisted one.
pub fn untwist(a: &Algebra, t: &TwistPair) -> Result<Algebra> {
    if !t.is_symmetric() {
        return Err(Error::Precondition(format!(
            "twist {} has different maps in its two slots",
            t.name
        )));
    }
    let alpha = t.alpha1.specialize(a.specialization())?;
    let inverse = alpha.inverse().map_err(|_| Error::NotUntwistable {
        reason: format!("{alpha} is not invertible"),
        nilpotent_order: alpha.nilpotency_order(NILPOTENCY_BOUND),
    })?;
    let report = is_homomorphism(a, &alpha)?;
    if let Some(v) = report.violations.first() {
        return Err(Error::NotUntwistable {
            reason: format!(
                "{alpha} is not an endomorphism: violation on pattern {}",
                v.pattern
            ),
            nilpotent_order: None,
        });
    }
    Ok(a.postcompose(&inverse, format!("{}∘α⁻¹", a.name())))
}
