//! A kernel for the eight systems of the lambda cube: terms, reduction,
//! typing, marked terms, orders on terms and eta-long forms.

pub mod error;
pub mod eta_long;
pub mod gen;
pub mod marked;
pub mod order;
pub mod props;
pub mod reduce;
pub mod syntax;
pub mod term;
pub mod typing;
