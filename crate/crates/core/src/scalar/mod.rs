//! Exact coefficient arithmetic.

mod gaussian;
mod linear_form;
mod parse;
mod symbol;
mod symbolic;

pub use gaussian::GaussianRational;
pub use linear_form::IndexLinearForm;
pub use parse::{parse_index_form, parse_scalar};
pub use symbol::{
    fresh_indices, is_reserved, kind_of, Symbol, SymbolKind, DEFAULT_INDEX_ALPHABET, INDEX_LETTERS,
};
pub use symbolic::{Bindings, Monomial, NumericBindings, SymbolicScalar, TermRepr};
