use alloc::string::String;

use crate::scalar::Field;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("field mismatch: {left} vs {right}")]
    FieldMismatch { left: Field, right: Field },
    #[error("division by zero")]
    DivisionByZero,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("the point at infinity is not allowed here")]
    AtInfinity,
    #[error("point is outside the closed domain (height {height})")]
    OutsideDomain { height: f64 },
    #[error("point is not on the boundary (height {height})")]
    NotOnBoundary { height: f64 },
    #[error("point is outside the open unit ball (norm {norm})")]
    OutsideBall { norm: f64 },
    #[error("operation requires the real field")]
    RealFieldOnly,
    #[error("dilation factor must be positive, got {0}")]
    NonPositiveDilation(f64),
    #[error("translation data off the boundary: Re tau0 - |u0|^2/2 = {defect}")]
    InvalidTranslation { defect: f64 },
    #[error("matrix is not unitary (residual {residual:e})")]
    NotUnitary { residual: f64 },
    #[error("matrix does not preserve the form (residual {residual:e})")]
    NotInvariant { residual: f64 },
    #[error("element is not in the restricted group: {reason}")]
    NotInGres { reason: String },
    #[error("element fixes infinity and has no isometric sphere")]
    StabilizerElement,
    #[error("element does not fix infinity")]
    NonStabilizer,
    #[error("cocycle undefined: the image of the point is infinity")]
    CocycleUndefined,
    #[error("invalid structure data: {0}")]
    InvalidStructure(String),
    #[error("invalid group specification: {0}")]
    InvalidSpec(String),
    #[error("generator '{label}' is declared {declared} but is {actual}")]
    StabilizerMismatch { label: String, declared: &'static str, actual: &'static str },
    #[error("unsupported stabilizer generator '{label}': {reason}")]
    UnsupportedStabilizer { label: String, reason: String },
    #[error("reduction budget exhausted after {steps} steps")]
    BudgetExhausted { steps: usize },
    #[error("height decreased during reduction: {before} -> {after}")]
    HeightDecreased { before: f64, after: f64 },
    #[error("unknown word letter '{0}'")]
    UnknownLetter(String),
}
