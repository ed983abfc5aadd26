//! Exact symbolic toolkit for ternary Nambu-Lie and Hom-Nambu-Lie algebras
//! of Virasoro-Witt type.

pub mod cli;
pub mod error;
pub mod jacobian;
pub mod morphisms;
pub mod oper;
pub mod scalar;
pub mod ternary;
pub mod vw;

pub use error::{Error, Result};
