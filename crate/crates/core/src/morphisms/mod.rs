//! Homomorphism checks, the geometric-ansatz classification solvers, and
//! untwisting.

mod ansatz;
mod classify;
mod compiled;
mod constraints;
mod homomorphism;
mod linsys;
mod solver;
mod untwist;
mod upoly;

pub use ansatz::{AnsatzKind, GeometricAnsatz};
pub use classify::{classify_twists, solve_endo, Classification, ClassifiedFamily, FamilyClass};
pub use compiled::CompiledResidual;
pub use constraints::{endo_constraints, twist_constraints, ConstraintSet, ConstraintSource};
pub use homomorphism::{homomorphism_residual, is_homomorphism, sorted_triples, triple_slots};
pub use linsys::RowBasis;
pub use solver::{solve_geometric, SolutionFamily};
pub use untwist::untwist;
pub use upoly::UPoly;
