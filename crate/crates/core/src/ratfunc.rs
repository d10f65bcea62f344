//! Canonical multivariate rational functions over the rationals.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::poly::{Monomial, Poly, Rational};

/// `num / den` with `gcd(num, den) = 1` and `den` having leading coefficient one.
/// Zero is `0 / 1`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl Default for RatFunc {
    fn default() -> Self {
        RatFunc::zero()
    }
}

impl RatFunc {
    pub fn zero() -> Self {
        RatFunc {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> Self {
        RatFunc::from_poly(Poly::one())
    }

    pub fn from_int(n: i64) -> Self {
        RatFunc::from_poly(Poly::from_int(n))
    }

    pub fn from_rational(q: Rational) -> Self {
        RatFunc::from_poly(Poly::constant(q))
    }

    pub fn var(v: u32) -> Self {
        RatFunc::from_poly(Poly::var(v))
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFunc {
            num: p,
            den: Poly::one(),
        }
    }

    /// Reduces `num / den` to canonical form.
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::canonical(num, den))
    }

    fn canonical(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return RatFunc::zero();
        }
        if let Some(c) = den.constant_value() {
            return RatFunc {
                num: num.scale(&c.recip()),
                den: Poly::one(),
            };
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g).unwrap(), den.div_exact(&g).unwrap())
        };
        Self::normalize_lc(num, den)
    }

    fn normalize_lc(num: Poly, den: Poly) -> Self {
        let lc = den.leading_coeff();
        if lc.is_one() {
            RatFunc { num, den }
        } else {
            let inv = lc.recip();
            RatFunc {
                num: num.scale(&inv),
                den: den.scale(&inv),
            }
        }
    }

    pub fn numer(&self) -> &Poly {
        &self.num
    }

    pub fn denom(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn constant_value(&self) -> Option<Rational> {
        if self.den.is_one() {
            self.num.constant_value()
        } else {
            None
        }
    }

    /// Leading numerator coefficient is negative.
    pub fn is_negative(&self) -> bool {
        self.num.leading_coeff().is_negative()
    }

    /// Number of monomials in numerator and denominator, a cheap size measure.
    pub fn complexity(&self) -> usize {
        self.num.len() + self.den.len()
    }

    pub fn max_var(&self) -> Option<u32> {
        self.num.max_var().max(self.den.max_var())
    }

    pub fn vars(&self) -> std::collections::BTreeSet<u32> {
        let mut v = self.num.vars();
        v.extend(self.den.vars());
        v
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return RatFunc::zero();
        }
        RatFunc {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalize_lc(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, other: &RatFunc) -> Result<Self> {
        Ok(self * &other.inv()?)
    }

    pub fn pow(&self, n: i32) -> Result<Self> {
        if n < 0 {
            return self.inv()?.pow(-n);
        }
        let n = n as u32;
        Ok(RatFunc {
            num: self.num.pow(n),
            den: self.den.pow(n),
        })
    }

    /// Formal partial derivative with respect to generator `v`.
    pub fn partial(&self, v: u32) -> Self {
        if self.den.is_one() {
            return RatFunc::from_poly(self.num.derivative(v));
        }
        let dn = self.num.derivative(v);
        let dd = self.den.derivative(v);
        if dd.is_zero() {
            return Self::canonical(dn, self.den.clone());
        }
        // g = gcd(q, q'); only factors of g free of v can cancel
        let g = self.den.gcd(&dd);
        let q1 = self.den.div_exact(&g).unwrap();
        let d1 = dd.div_exact(&g).unwrap();
        let num = dn.mul(&q1).sub(&self.num.mul(&d1));
        if num.is_zero() {
            return RatFunc::zero();
        }
        let den = self.den.mul(&q1);
        let h = num.gcd(&g);
        if h.is_one() {
            Self::normalize_lc(num, den)
        } else {
            Self::normalize_lc(num.div_exact(&h).unwrap(), den.div_exact(&h).unwrap())
        }
    }

    /// Replaces generator `v` by `value`.
    pub fn substitute(&self, v: u32, value: &RatFunc) -> Result<Self> {
        let eval = |p: &Poly| -> RatFunc {
            let coeffs = p.to_univariate(v);
            let mut acc = RatFunc::zero();
            for c in coeffs.iter().rev() {
                acc = &(&acc * value) + &RatFunc::from_poly(c.clone());
            }
            acc
        };
        eval(&self.num).div(&eval(&self.den))
    }

    pub fn fmt_with(&self, f: &mut fmt::Formatter<'_>, names: &dyn Fn(u32) -> String) -> fmt::Result {
        if self.den.is_one() {
            return self.num.fmt_with(f, names);
        }
        if self.num.len() > 1 {
            write!(f, "(")?;
            self.num.fmt_with(f, names)?;
            write!(f, ")")?;
        } else {
            self.num.fmt_with(f, names)?;
        }
        write!(f, "/")?;
        let bare = match self.den.terms() {
            [(m, c)] => c.is_one() && m.factors().count() == 1,
            _ => false,
        };
        if bare {
            self.den.fmt_with(f, names)
        } else {
            write!(f, "(")?;
            self.den.fmt_with(f, names)?;
            write!(f, ")")
        }
    }

    /// Display helper with generator names.
    pub fn display<'a>(&'a self, names: &'a [String]) -> impl fmt::Display + 'a {
        Named { value: self, names }
    }
}

struct Named<'a> {
    value: &'a RatFunc,
    names: &'a [String],
}

impl fmt::Display for Named<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = self.names;
        self.value.fmt_with(f, &|v| {
            names
                .get(v as usize)
                .cloned()
                .unwrap_or_else(|| format!("g{v}"))
        })
    }
}

impl From<Poly> for RatFunc {
    fn from(p: Poly) -> Self {
        RatFunc::from_poly(p)
    }
}

impl From<i64> for RatFunc {
    fn from(n: i64) -> Self {
        RatFunc::from_int(n)
    }
}

impl Add for &RatFunc {
    type Output = RatFunc;

    fn add(self, other: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den == other.den {
            let num = self.num.add(&other.num);
            if self.den.is_one() {
                return RatFunc::from_poly(num);
            }
            return RatFunc::canonical(num, self.den.clone());
        }
        if other.den.is_one() {
            // (a + c*d)/d stays reduced
            let num = self.num.add(&other.num.mul(&self.den));
            return RatFunc {
                num,
                den: self.den.clone(),
            };
        }
        if self.den.is_one() {
            return other + self;
        }
        let g = self.den.gcd(&other.den);
        let d1 = self.den.div_exact(&g).unwrap();
        let d2 = other.den.div_exact(&g).unwrap();
        let num = self.num.mul(&d2).add(&other.num.mul(&d1));
        if num.is_zero() {
            return RatFunc::zero();
        }
        // only factors of g can cancel
        let h = num.gcd(&g);
        let (num, g) = if h.is_one() {
            (num, g)
        } else {
            (num.div_exact(&h).unwrap(), g.div_exact(&h).unwrap())
        };
        RatFunc::normalize_lc(num, d1.mul(&d2).mul(&g))
    }
}

impl Sub for &RatFunc {
    type Output = RatFunc;

    fn sub(self, other: &RatFunc) -> RatFunc {
        self + &(-other)
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;

    fn neg(self) -> RatFunc {
        RatFunc {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }
}

impl Mul for &RatFunc {
    type Output = RatFunc;

    fn mul(self, other: &RatFunc) -> RatFunc {
        if self.is_zero() || other.is_zero() {
            return RatFunc::zero();
        }
        if self.den.is_one() && other.den.is_one() {
            return RatFunc::from_poly(self.num.mul(&other.num));
        }
        if let Some(c) = self.constant_value() {
            return other.scale(&c);
        }
        if let Some(c) = other.constant_value() {
            return self.scale(&c);
        }
        let g1 = self.num.gcd(&other.den);
        let g2 = other.num.gcd(&self.den);
        let cut = |p: &Poly, g: &Poly| {
            if g.is_one() {
                p.clone()
            } else {
                p.div_exact(g).unwrap()
            }
        };
        let num = cut(&self.num, &g1).mul(&cut(&other.num, &g2));
        let den = cut(&self.den, &g2).mul(&cut(&other.den, &g1));
        RatFunc::normalize_lc(num, den)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for RatFunc {
            type Output = RatFunc;
            fn $m(self, other: RatFunc) -> RatFunc {
                (&self).$m(&other)
            }
        }
        impl $tr<&RatFunc> for RatFunc {
            type Output = RatFunc;
            fn $m(self, other: &RatFunc) -> RatFunc {
                (&self).$m(other)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        -&self
    }
}

/// Binomial coefficient as a rational, used by Leibniz expansions.
pub(crate) fn binomial(n: u32, k: u32) -> Rational {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    Rational::from_integer(acc)
}

/// `x^e` for a generator, handy in tests and fixtures.
pub fn var_pow(v: u32, e: u32) -> RatFunc {
    RatFunc::from_poly(Poly::monomial(Monomial::var(v, e), Rational::one()))
}
