//! Realization of the cfz brackets by operators `e^{imx} p(D)` on the
//! circle, with the ternary bracket built from commutators.

mod diffop;
mod realize;

pub use diffop::{commutator, op_mul, ternary_commutator, DPoly, DiffOp};
pub use realize::{
    cfz_recovery_numeric, larsson_fi_scan, verify_lars_relations, verify_s_identity, ComplexValue,
    OperCheck, OperReport, RecoveryReport, ScanEntry, ShapeDeviation, LAMBDA,
};
