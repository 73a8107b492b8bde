use thiserror::Error;

use crate::field::{Elem, SesquiDefect};
use crate::Label;

/// Every fallible operation in the crate reports one of these.
///
/// The rendered message always starts with the variant name so that
/// front ends can surface it verbatim.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("NotPrime: characteristic {0} is not a prime")]
    NotPrime(u32),
    #[error("ReduciblePoly: polynomial {0:?} is not irreducible of the stated degree")]
    ReduciblePoly(Vec<u32>),
    #[error("FieldTooLarge: order {0} exceeds 256")]
    FieldTooLarge(u64),
    #[error("NoBuiltinField: no built-in irreducible polynomial for order {0}")]
    NoBuiltinField(usize),
    #[error("NotInvolution: sigma(sigma({0})) != {0}")]
    NotInvolution(Elem),
    #[error("NotSesqui: {0}")]
    NotSesqui(SesquiDefect),
    #[error("BadSigmaTable: {0}")]
    BadSigmaTable(String),
    #[error("FieldMismatch: operands live over different fields or sesqui-morphisms")]
    FieldMismatch,
    #[error("ZeroT: the scalar t must be nonzero")]
    ZeroT,
    #[error("NotSquare: matrix is {0}x{1} or its row and column labels differ")]
    NotSquare(usize, usize),
    #[error("DimensionMismatch: {0}")]
    DimensionMismatch(String),
    #[error("DuplicateLabel: label {0} appears twice")]
    DuplicateLabel(Label),
    #[error("UnknownVertex: {0}")]
    UnknownVertex(Label),
    #[error("NotSigmaSymmetric: adjacency entry ({0}, {1}) breaks sigma-symmetry")]
    NotSigmaSymmetric(Label, Label),
    #[error("NonZeroDiagonal: vertex {0} has a loop")]
    NonZeroDiagonal(Label),
    #[error("NonEdgePivot: ({0}, {1}) is not an edge")]
    NonEdgePivot(Label, Label),
    #[error("FieldNotBinary: operation requires GF(2) with the identity involution")]
    FieldNotBinary,
    #[error("SizeLimitExceeded: {what} has size {size}, limit is {limit}")]
    SizeLimitExceeded {
        what: &'static str,
        size: usize,
        limit: usize,
    },
    #[error("VertexClash: vertex {0} occurs in both graphs")]
    VertexClash(Label),
    #[error("BadPermutation: {0}")]
    BadPermutation(String),
    #[error("Truncated: orbit search stopped at {0} members")]
    Truncated(usize),
    #[error("UnknownElement: {0}")]
    UnknownElement(Label),
    #[error("NotABasis: {0:?} is not a basis")]
    NotABasis(Vec<Label>),
    #[error("OverlappingSets: deletion and contraction sets share {0}")]
    OverlappingSets(Label),
    #[error("NotLinked: prefix indices {0} and {1} cannot be linked at the required value")]
    NotLinked(usize, usize),
    #[error("EncodingMismatch: {0}")]
    EncodingMismatch(String),
    #[error("IntractableExhaustive: {0}")]
    IntractableExhaustive(String),
    #[error("IndexOutOfRange: index {index} not in 1..={len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("BoundTooLarge: {0}")]
    BoundTooLarge(String),
    #[error("Parse: line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
