//! Shared inputs for the criterion benchmarks.

use lpdo_core::landau::Landau;
use lpdo_core::laplace::HyperbolicOp;
use lpdo_core::{DiffField, Lpdo, RatFunc};

pub fn landau() -> Landau {
    Landau::new()
}

/// `Dx Dy - n(n+1)/(x+y)^2`.
pub fn euler_operator(n: i64) -> HyperbolicOp {
    let f = DiffField::standard();
    let s = &f.x() + &f.y();
    let c = RatFunc::from_int(n * (n + 1))
        .div(&(&s * &s))
        .expect("nonzero denominator");
    HyperbolicOp::new(&f, RatFunc::zero(), RatFunc::zero(), c)
}

/// A pair of third-order ordinary operators in `Dx` with a common right factor.
pub fn lodo_pair() -> (Lpdo, Lpdo) {
    let l = Landau::new();
    let f = &l.field;
    let x = f.x();
    let a = Lpdo::from_terms(f, [((2, 0), x.clone()), ((0, 0), RatFunc::one())]);
    let b = Lpdo::from_terms(f, [((2, 0), RatFunc::one()), ((1, 0), x.clone())]);
    let c = l.q.clone();
    (
        a.compose(&c).expect("same field"),
        b.compose(&c).expect("same field"),
    )
}
