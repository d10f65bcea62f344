//! Exact algebra of linear partial differential operators in two variables.
//!
//! * [`poly`], [`ratfunc`], [`field`]: exact rational functions and differential
//!   fields with commuting derivations `D_x`, `D_y`.
//! * [`lpdo`]: operators `sum a_ij Dx^i Dy^j`, composition and adjoint.
//! * [`skew`]: skew polynomials in one derivation over any differential field,
//!   with right/left division, GCD and LCM.
//! * [`linsolve`], [`comult`]: common left multiples up to an order bound and
//!   generalized divisor couples `X∘M = Y∘R`, `X∘L = Y∘Q`.
//! * [`skewfrac`]: Ore fractions, projections to `Q(x,y,Dy)[Dx]` and
//!   `Q(x,y,Dx)[Dy]`, ideal coordinates.
//! * [`laplace`], [`jet`]: Laplace invariants and cascades, jet fields for
//!   `u_xy = f(x, y, u, u_x, u_y)` and the Darboux integrability check.
//! * [`syntax`]: expression parser for the textual forms printed by `Display`.

pub mod comult;
pub mod error;
pub mod field;
pub mod jet;
pub mod landau;
pub mod laplace;
pub mod linsolve;
pub mod lpdo;
pub mod poly;
pub mod ratfunc;
pub mod skew;
pub mod skewfrac;
pub mod syntax;

pub use error::{Error, Result};
pub use field::{Axis, DiffField, FieldBuilder, GeneratorSpec};
pub use lpdo::Lpdo;
pub use poly::{Monomial, Poly, Rational};
pub use ratfunc::RatFunc;
pub use skew::{DifferentialField, RatFuncField, SkewPoly, SkewRing};
