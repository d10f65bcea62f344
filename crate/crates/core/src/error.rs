use thiserror::Error;

use crate::laplace::Direction;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Position of a syntax problem, 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub column: usize,
}

impl std::fmt::Display for Pos {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "line {}, column {}", self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("generator #{0} is not declared in this field")]
    UndeclaredGenerator(u32),

    #[error("operands belong to different differential fields")]
    FieldMismatch,

    #[error("invalid field declaration: {0}")]
    FieldDeclaration(String),

    #[error("derivations do not commute on generator `{0}`")]
    NonCommuting(String),

    #[error("syntax error at {pos}: {message}")]
    Syntax { pos: Pos, message: String },

    #[error("unknown identifier `{name}` at {pos}")]
    UnknownIdentifier { name: String, pos: Pos },

    #[error("expected a function, found a differential operator")]
    NotScalar,

    #[error("operator is not a polynomial in a single derivation ({0})")]
    NotUnivariate(String),

    #[error("order bound {bound} is below operator order {order}")]
    OrderBound { bound: u32, order: u32 },

    #[error("the zero operator is not allowed here")]
    ZeroOperator,

    #[error("not a hyperbolic operator Dx*Dy - a*Dx - b*Dy - c: {0}")]
    NotHyperbolic(String),

    #[error("Laplace invariant governing the {0} step vanishes; the transformation cannot be applied")]
    VanishingInvariant(Direction),

    #[error("jet order cap {0} exceeded")]
    JetOrderExceeded(u32),

    #[error("equation right-hand side uses jet coordinate `{0}` of order two or more")]
    HighOrderJet(String),

    #[error("computation limit exceeded: {0}")]
    BoundExceeded(String),

    #[error("internal consistency check failed: {0}")]
    Consistency(String),
}
