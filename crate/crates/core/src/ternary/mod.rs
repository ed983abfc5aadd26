//! Generators, elements, brackets and the (Hom-)Nambu residuals.

mod algebra;
mod coeff;
mod generator;
pub mod identity;
mod linear_map;
mod report;
mod window;

pub use algebra::{sort_by_family, sorted_rule, Algebra, BracketRule};
pub use generator::{Element, Family, Generator};
pub use identity::{fi_residual, hfi_residual, verify_identity_symbolic};
pub use linear_map::{LinearMap, QParam, TwistPair};
pub use report::{Mode, Report, Violation};
pub use window::{brute_force_window, WindowEngine};
