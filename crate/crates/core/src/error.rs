use thiserror::Error;

use crate::reduce::FuelExhausted;
use crate::typing::{TypeError, TypeErrorKind};

/// Failures of the operations built on top of type inference.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KernelError {
    #[error(transparent)]
    Type(#[from] TypeError),
    #[error("precondition failed: {0}")]
    Precondition(String),
    /// An internal law was violated; always a bug.
    #[error("invariant violated: {0}")]
    Violation(String),
}

impl KernelError {
    pub fn is_fuel(&self) -> bool {
        matches!(self, KernelError::Type(e) if e.is_fuel())
    }
}

impl From<FuelExhausted> for KernelError {
    fn from(_: FuelExhausted) -> Self {
        KernelError::Type(TypeError::new(TypeErrorKind::FuelExhausted))
    }
}
