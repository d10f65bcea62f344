//! Landau's operators over `Q(x, y)`: `Q∘Q∘P = R∘Q` with `R` absolutely
//! irreducible, and the two independent third-order common left multiples of
//! `P` and `Q`.

use std::sync::Arc;

use crate::field::DiffField;
use crate::lpdo::Lpdo;
use crate::ratfunc::RatFunc;

pub struct Landau {
    pub field: Arc<DiffField>,
    /// `Dx + x Dy`
    pub p: Lpdo,
    /// `Dx + 1`
    pub q: Lpdo,
    /// `Dx^2 + x Dx Dy + Dx + (x + 2) Dy`
    pub r: Lpdo,
    /// `x Dx Dy + (x - 1) Dy - Dx - 1`, so that `l31 = a31 ∘ P`
    pub a31: Lpdo,
    /// `x^2 Dy^2 + x Dx Dy - (x + 1) Dy - Dx`, so that `l31 = b31 ∘ Q`
    pub b31: Lpdo,
    /// `Dx^2 + 2 Dx + 1 = Q ∘ Q`, so that `l32 = a32 ∘ P = R ∘ Q`
    pub a32: Lpdo,
    pub l31: Lpdo,
    pub l32: Lpdo,
}

impl Landau {
    pub fn new() -> Self {
        Self::over(&DiffField::standard())
    }

    /// The same operators over any field whose generators 0 and 1 are `x`, `y`.
    pub fn over(field: &Arc<DiffField>) -> Self {
        let f = field;
        let x = f.x();
        let one = RatFunc::one;
        let int = RatFunc::from_int;
        let p = Lpdo::from_terms(f, [((1, 0), one()), ((0, 1), x.clone())]);
        let q = Lpdo::from_terms(f, [((1, 0), one()), ((0, 0), one())]);
        let r = Lpdo::from_terms(
            f,
            [
                ((2, 0), one()),
                ((1, 1), x.clone()),
                ((1, 0), one()),
                ((0, 1), &x + &int(2)),
            ],
        );
        let a31 = Lpdo::from_terms(
            f,
            [
                ((1, 1), x.clone()),
                ((0, 1), &x - &int(1)),
                ((1, 0), int(-1)),
                ((0, 0), int(-1)),
            ],
        );
        let b31 = Lpdo::from_terms(
            f,
            [
                ((0, 2), &x * &x),
                ((1, 1), x.clone()),
                ((0, 1), -(&x + &int(1))),
                ((1, 0), int(-1)),
            ],
        );
        let a32 = Lpdo::from_terms(f, [((2, 0), one()), ((1, 0), int(2)), ((0, 0), one())]);
        let l31 = a31.compose(&p).expect("same field");
        let l32 = a32.compose(&p).expect("same field");
        Landau {
            field: f.clone(),
            p,
            q,
            r,
            a31,
            b31,
            a32,
            l31,
            l32,
        }
    }
}

impl Default for Landau {
    fn default() -> Self {
        Self::new()
    }
}
