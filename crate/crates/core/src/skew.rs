//! Skew polynomials `K[D; δ]` over a differential field and their Euclidean
//! algorithms.
//!
//! The coefficient field is pluggable through [`DifferentialField`]; it need
//! not be commutative, so the same code runs over rational functions and over
//! Ore fractions of another skew polynomial ring. `D ∘ a = a D + δ(a)`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{Axis, DiffField};
use crate::ratfunc::{binomial, RatFunc};

/// A (possibly non-commutative) field with a derivation δ.
pub trait DifferentialField {
    type Elem: Clone + PartialEq + fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem>;
    fn neg(&self, a: &Self::Elem) -> Result<Self::Elem>;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem>;
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem>;
    fn derive(&self, a: &Self::Elem) -> Result<Self::Elem>;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem> {
        self.add(a, &self.neg(b)?)
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    /// Multiplication by a rational integer.
    fn scale_int(&self, a: &Self::Elem, n: &crate::poly::Rational) -> Result<Self::Elem>;

    /// Text of an element, used by `SkewPoly` display.
    fn format(&self, a: &Self::Elem) -> String;
}

/// Marker for fields whose multiplication commutes; enables the adjoint.
pub trait CommutativeDifferentialField: DifferentialField {}

/// Rational functions of a [`DiffField`] with δ = `D_axis`.
#[derive(Clone, Debug)]
pub struct RatFuncField {
    pub field: Arc<DiffField>,
    pub axis: Axis,
}

impl RatFuncField {
    pub fn new(field: &Arc<DiffField>, axis: Axis) -> Self {
        RatFuncField {
            field: field.clone(),
            axis,
        }
    }
}

impl DifferentialField for RatFuncField {
    type Elem = RatFunc;

    fn zero(&self) -> RatFunc {
        RatFunc::zero()
    }
    fn one(&self) -> RatFunc {
        RatFunc::one()
    }
    fn is_zero(&self, a: &RatFunc) -> bool {
        a.is_zero()
    }
    fn is_one(&self, a: &RatFunc) -> bool {
        a.is_one()
    }
    fn add(&self, a: &RatFunc, b: &RatFunc) -> Result<RatFunc> {
        Ok(a + b)
    }
    fn sub(&self, a: &RatFunc, b: &RatFunc) -> Result<RatFunc> {
        Ok(a - b)
    }
    fn neg(&self, a: &RatFunc) -> Result<RatFunc> {
        Ok(-a)
    }
    fn mul(&self, a: &RatFunc, b: &RatFunc) -> Result<RatFunc> {
        Ok(a * b)
    }
    fn inv(&self, a: &RatFunc) -> Result<RatFunc> {
        a.inv()
    }
    fn derive(&self, a: &RatFunc) -> Result<RatFunc> {
        self.field.derive(a, self.axis)
    }
    fn scale_int(&self, a: &RatFunc, n: &crate::poly::Rational) -> Result<RatFunc> {
        Ok(a.scale(n))
    }
    fn format(&self, a: &RatFunc) -> String {
        self.field.format(a)
    }
}

impl CommutativeDifferentialField for RatFuncField {}

/// `c_0 + c_1 D + ... + c_d D^d`, coefficients on the left, no trailing zeros.
#[derive(Clone, PartialEq, Debug)]
pub struct SkewPoly<E> {
    coeffs: Vec<E>,
}

impl<E: Clone + PartialEq> SkewPoly<E> {
    /// Caller guarantees there are no trailing zeros; use [`SkewRing::from_coeffs`]
    /// when that is not known.
    pub fn new(coeffs: Vec<E>) -> Self {
        SkewPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[E] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<E> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` stands for the −∞ degree of the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&E> {
        self.coeffs.last()
    }
}

/// Quotient and remainder.
pub type DivRem<E> = (SkewPoly<E>, SkewPoly<E>);

/// Result of an extended Euclid run: `gcd = s ∘ a + t ∘ b` and the left
/// common multiple `lcm = x ∘ a = y ∘ b`.
#[derive(Clone, Debug)]
pub struct EuclidData<E> {
    pub gcd: SkewPoly<E>,
    pub s: SkewPoly<E>,
    pub t: SkewPoly<E>,
    pub lcm: SkewPoly<E>,
    pub x: SkewPoly<E>,
    pub y: SkewPoly<E>,
}

/// Arithmetic in `K[D; δ]`.
#[derive(Clone, Debug)]
pub struct SkewRing<F> {
    pub field: F,
}

impl<F: DifferentialField> SkewRing<F> {
    pub fn new(field: F) -> Self {
        SkewRing { field }
    }

    pub fn from_coeffs(&self, mut coeffs: Vec<F::Elem>) -> SkewPoly<F::Elem> {
        while coeffs.last().is_some_and(|c| self.field.is_zero(c)) {
            coeffs.pop();
        }
        SkewPoly { coeffs }
    }

    pub fn zero(&self) -> SkewPoly<F::Elem> {
        SkewPoly { coeffs: Vec::new() }
    }

    pub fn one(&self) -> SkewPoly<F::Elem> {
        self.constant(self.field.one())
    }

    pub fn constant(&self, c: F::Elem) -> SkewPoly<F::Elem> {
        self.from_coeffs(vec![c])
    }

    /// `c D^k`.
    pub fn term(&self, c: F::Elem, k: usize) -> SkewPoly<F::Elem> {
        let mut coeffs = vec![self.field.zero(); k];
        coeffs.push(c);
        self.from_coeffs(coeffs)
    }

    pub fn d(&self) -> SkewPoly<F::Elem> {
        self.term(self.field.one(), 1)
    }

    pub fn add(&self, a: &SkewPoly<F::Elem>, b: &SkewPoly<F::Elem>) -> Result<SkewPoly<F::Elem>> {
        let n = a.coeffs.len().max(b.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(match (a.coeffs.get(k), b.coeffs.get(k)) {
                (Some(x), Some(y)) => self.field.add(x, y)?,
                (Some(x), None) => x.clone(),
                (None, Some(y)) => y.clone(),
                (None, None) => unreachable!(),
            });
        }
        Ok(self.from_coeffs(out))
    }

    pub fn neg(&self, a: &SkewPoly<F::Elem>) -> Result<SkewPoly<F::Elem>> {
        let coeffs = a
            .coeffs
            .iter()
            .map(|c| self.field.neg(c))
            .collect::<Result<Vec<_>>>()?;
        Ok(SkewPoly { coeffs })
    }

    pub fn sub(&self, a: &SkewPoly<F::Elem>, b: &SkewPoly<F::Elem>) -> Result<SkewPoly<F::Elem>> {
        self.add(a, &self.neg(b)?)
    }

    /// `c · a`.
    pub fn scale_left(&self, c: &F::Elem, a: &SkewPoly<F::Elem>) -> Result<SkewPoly<F::Elem>> {
        let coeffs = a
            .coeffs
            .iter()
            .map(|x| self.field.mul(c, x))
            .collect::<Result<Vec<_>>>()?;
        Ok(self.from_coeffs(coeffs))
    }

    /// `D ∘ a`.
    fn d_times(&self, a: &SkewPoly<F::Elem>) -> Result<SkewPoly<F::Elem>> {
        let mut out = vec![self.field.zero(); a.coeffs.len() + 1];
        for (k, c) in a.coeffs.iter().enumerate() {
            out[k + 1] = self.field.add(&out[k + 1], c)?;
            let dc = self.field.derive(c)?;
            out[k] = self.field.add(&out[k], &dc)?;
        }
        Ok(self.from_coeffs(out))
    }

    pub fn mul(&self, a: &SkewPoly<F::Elem>, b: &SkewPoly<F::Elem>) -> Result<SkewPoly<F::Elem>> {
        if a.is_zero() || b.is_zero() {
            return Ok(self.zero());
        }
        let mut acc = self.zero();
        let mut cur = b.clone(); // D^k ∘ b
        for (k, c) in a.coeffs.iter().enumerate() {
            if k > 0 {
                cur = self.d_times(&cur)?;
            }
            if !self.field.is_zero(c) {
                acc = self.add(&acc, &self.scale_left(c, &cur)?)?;
            }
        }
        Ok(acc)
    }

    /// `lc(a)^{-1} · a`; zero stays zero.
    pub fn monic(&self, a: &SkewPoly<F::Elem>) -> Result<SkewPoly<F::Elem>> {
        match a.leading() {
            None => Ok(a.clone()),
            Some(lc) if self.field.is_one(lc) => Ok(a.clone()),
            Some(lc) => {
                let inv = self.field.inv(lc)?;
                self.scale_left(&inv, a)
            }
        }
    }

    /// `a ∘ lc(a)^{-1}`, which keeps the left divisors of `a`'s multiples.
    pub fn monic_right(&self, a: &SkewPoly<F::Elem>) -> Result<SkewPoly<F::Elem>> {
        match a.leading() {
            None => Ok(a.clone()),
            Some(lc) if self.field.is_one(lc) => Ok(a.clone()),
            Some(lc) => {
                let inv = self.constant(self.field.inv(lc)?);
                self.mul(a, &inv)
            }
        }
    }

    /// `a = q ∘ b + r` with `deg r < deg b`.
    pub fn right_divide(
        &self,
        a: &SkewPoly<F::Elem>,
        b: &SkewPoly<F::Elem>,
    ) -> Result<DivRem<F::Elem>> {
        let db = b.degree().ok_or(Error::DivisionByZero)?;
        let inv_lc = self.field.inv(b.leading().unwrap())?;
        let mut q = vec![self.field.zero(); a.coeffs.len().saturating_sub(db)];
        let mut r = a.clone();
        // D^k ∘ b for k = 0.., built on demand
        let mut shifted: Vec<SkewPoly<F::Elem>> = vec![b.clone()];
        while let Some(dr) = r.degree() {
            if dr < db {
                break;
            }
            let k = dr - db;
            while shifted.len() <= k {
                let next = self.d_times(shifted.last().unwrap())?;
                shifted.push(next);
            }
            let c = self.field.mul(r.leading().unwrap(), &inv_lc)?;
            let t = self.scale_left(&c, &shifted[k])?;
            let next = self.sub(&r, &t)?;
            if next.degree() >= r.degree() {
                return Err(Error::Consistency(
                    "right division failed to cancel the leading term".into(),
                ));
            }
            r = next;
            q[k] = self.field.add(&q[k], &c)?;
        }
        Ok((self.from_coeffs(q), r))
    }

    /// `a = b ∘ q + r` with `deg r < deg b`.
    pub fn left_divide(
        &self,
        a: &SkewPoly<F::Elem>,
        b: &SkewPoly<F::Elem>,
    ) -> Result<DivRem<F::Elem>> {
        let db = b.degree().ok_or(Error::DivisionByZero)?;
        let inv_lc = self.field.inv(b.leading().unwrap())?;
        let mut q = self.zero();
        let mut r = a.clone();
        while let Some(dr) = r.degree() {
            if dr < db {
                break;
            }
            let c = self.field.mul(&inv_lc, r.leading().unwrap())?;
            let t = self.term(c, dr - db);
            let next = self.sub(&r, &self.mul(b, &t)?)?;
            if next.degree() >= r.degree() {
                return Err(Error::Consistency(
                    "left division failed to cancel the leading term".into(),
                ));
            }
            r = next;
            q = self.add(&q, &t)?;
        }
        Ok((q, r))
    }

    /// Extended right Euclid: monic greatest common right divisor with
    /// cofactors, and the monic least common left multiple with cofactors.
    pub fn euclid(&self, a: &SkewPoly<F::Elem>, b: &SkewPoly<F::Elem>) -> Result<EuclidData<F::Elem>> {
        if a.is_zero() && b.is_zero() {
            return Err(Error::ZeroOperator);
        }
        // invariant: r_i = s_i ∘ a + t_i ∘ b
        let (mut r0, mut s0, mut t0) = (a.clone(), self.one(), self.zero());
        let (mut r1, mut s1, mut t1) = (b.clone(), self.zero(), self.one());
        while !r1.is_zero() {
            let (q, r) = self.right_divide(&r0, &r1)?;
            let s = self.sub(&s0, &self.mul(&q, &s1)?)?;
            let t = self.sub(&t0, &self.mul(&q, &t1)?)?;
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
            t0 = std::mem::replace(&mut t1, t);
        }
        // r0 is the gcd; s1 ∘ a + t1 ∘ b = 0 gives the lcm
        let inv = self.field.inv(r0.leading().unwrap())?;
        let gcd = self.scale_left(&inv, &r0)?;
        let s = self.scale_left(&inv, &s0)?;
        let t = self.scale_left(&inv, &t0)?;
        let (lcm, x, y) = if a.is_zero() || b.is_zero() {
            (self.zero(), self.zero(), self.zero())
        } else {
            let prod = self.mul(&s1, a)?;
            let inv = self.field.inv(prod.leading().unwrap())?;
            let x = self.scale_left(&inv, &s1)?;
            let y = self.neg(&self.scale_left(&inv, &t1)?)?;
            (self.scale_left(&inv, &prod)?, x, y)
        };
        Ok(EuclidData {
            gcd,
            s,
            t,
            lcm,
            x,
            y,
        })
    }

    /// Monic greatest common right divisor; `rgcd(a, 0) = monic(a)`.
    pub fn rgcd(&self, a: &SkewPoly<F::Elem>, b: &SkewPoly<F::Elem>) -> Result<SkewPoly<F::Elem>> {
        Ok(self.euclid(a, b)?.gcd)
    }

    /// Monic least common left multiple.
    pub fn llcm(&self, a: &SkewPoly<F::Elem>, b: &SkewPoly<F::Elem>) -> Result<SkewPoly<F::Elem>> {
        Ok(self.euclid(a, b)?.lcm)
    }

    /// Extended left Euclid: `gcd = a ∘ s + b ∘ t` is the monic greatest common
    /// left divisor and `lcm = a ∘ x = b ∘ y` the monic least common right
    /// multiple.
    pub fn left_euclid(
        &self,
        a: &SkewPoly<F::Elem>,
        b: &SkewPoly<F::Elem>,
    ) -> Result<EuclidData<F::Elem>> {
        if a.is_zero() && b.is_zero() {
            return Err(Error::ZeroOperator);
        }
        // invariant: r_i = a ∘ s_i + b ∘ t_i
        let (mut r0, mut s0, mut t0) = (a.clone(), self.one(), self.zero());
        let (mut r1, mut s1, mut t1) = (b.clone(), self.zero(), self.one());
        while !r1.is_zero() {
            let (q, r) = self.left_divide(&r0, &r1)?;
            let s = self.sub(&s0, &self.mul(&s1, &q)?)?;
            let t = self.sub(&t0, &self.mul(&t1, &q)?)?;
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
            t0 = std::mem::replace(&mut t1, t);
        }
        // g ∘ c has leading coefficient lc(g)·c, so normalize from the right
        let inv = self.constant(self.field.inv(r0.leading().unwrap())?);
        let gcd = self.mul(&r0, &inv)?;
        let s = self.mul(&s0, &inv)?;
        let t = self.mul(&t0, &inv)?;
        let (lcm, x, y) = if a.is_zero() || b.is_zero() {
            (self.zero(), self.zero(), self.zero())
        } else {
            let prod = self.mul(a, &s1)?;
            let inv = self.constant(self.field.inv(prod.leading().unwrap())?);
            let x = self.mul(&s1, &inv)?;
            let y = self.neg(&self.mul(&t1, &inv)?)?;
            (self.mul(&prod, &inv)?, x, y)
        };
        Ok(EuclidData {
            gcd,
            s,
            t,
            lcm,
            x,
            y,
        })
    }

    /// Monic greatest common left divisor.
    pub fn lgcd(&self, a: &SkewPoly<F::Elem>, b: &SkewPoly<F::Elem>) -> Result<SkewPoly<F::Elem>> {
        Ok(self.left_euclid(a, b)?.gcd)
    }

    /// Checks the modular law on principal left ideals with lattice sum
    /// `llcm` and lattice product `rgcd`:
    /// `rgcd(llcm(rgcd(a, c), b), c) = llcm(rgcd(a, c), rgcd(b, c))`.
    pub fn modular_check(
        &self,
        a: &SkewPoly<F::Elem>,
        b: &SkewPoly<F::Elem>,
        c: &SkewPoly<F::Elem>,
    ) -> Result<bool> {
        let ac = self.rgcd(a, c)?;
        let lhs = self.rgcd(&self.llcm(&ac, b)?, c)?;
        let bc = self.rgcd(b, c)?;
        let rhs = self.llcm(&ac, &bc)?;
        Ok(self.monic(&lhs)? == self.monic(&rhs)?)
    }

    pub fn format(&self, a: &SkewPoly<F::Elem>, symbol: &str) -> String {
        if a.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (k, c) in a.coeffs.iter().enumerate().rev() {
            if self.field.is_zero(c) {
                continue;
            }
            let mono = match k {
                0 => String::new(),
                1 => symbol.to_string(),
                _ => format!("{symbol}^{k}"),
            };
            let part = if k == 0 {
                format!("({})", self.field.format(c))
            } else if self.field.is_one(c) {
                mono
            } else {
                format!("({})*{mono}", self.field.format(c))
            };
            parts.push(part);
        }
        parts.join(" + ")
    }
}

impl<F: CommutativeDifferentialField> SkewRing<F> {
    /// Formal adjoint `sum (-1)^k D^k ∘ c_k`, an anti-automorphism.
    pub fn adjoint(&self, a: &SkewPoly<F::Elem>) -> Result<SkewPoly<F::Elem>> {
        let mut out = vec![self.field.zero(); a.coeffs.len()];
        for (k, c) in a.coeffs.iter().enumerate() {
            if self.field.is_zero(c) {
                continue;
            }
            // D^k ∘ c = sum_j binom(k, j) c^(j) D^(k-j)
            let mut d = c.clone();
            for j in 0..=k {
                if j > 0 {
                    d = self.field.derive(&d)?;
                    if self.field.is_zero(&d) {
                        break;
                    }
                }
                let mut b = binomial(k as u32, j as u32);
                if k % 2 == 1 {
                    b = -b;
                }
                let t = self.field.scale_int(&d, &b)?;
                out[k - j] = self.field.add(&out[k - j], &t)?;
            }
        }
        Ok(self.from_coeffs(out))
    }

    /// [`SkewRing::left_euclid`] computed through the right algorithm on
    /// adjoints; much cheaper over rational functions.
    pub fn left_euclid_by_adjoint(
        &self,
        a: &SkewPoly<F::Elem>,
        b: &SkewPoly<F::Elem>,
    ) -> Result<EuclidData<F::Elem>> {
        let e = self.euclid(&self.adjoint(a)?, &self.adjoint(b)?)?;
        // adjoint of a monic operator of degree n has leading coefficient (-1)^n
        let sign = |p: &SkewPoly<F::Elem>| -> Result<SkewPoly<F::Elem>> {
            let q = self.adjoint(p)?;
            match q.degree() {
                Some(n) if n % 2 == 1 => self.neg(&q),
                _ => Ok(q),
            }
        };
        let flip = |p: &SkewPoly<F::Elem>, n: Option<usize>| -> Result<SkewPoly<F::Elem>> {
            let q = self.adjoint(p)?;
            match n {
                Some(n) if n % 2 == 1 => self.neg(&q),
                _ => Ok(q),
            }
        };
        let gd = e.gcd.degree();
        let ld = e.lcm.degree();
        Ok(EuclidData {
            gcd: sign(&e.gcd)?,
            s: flip(&e.s, gd)?,
            t: flip(&e.t, gd)?,
            lcm: sign(&e.lcm)?,
            x: flip(&e.x, ld)?,
            y: flip(&e.y, ld)?,
        })
    }

    /// Monic greatest common left divisor through the adjoint:
    /// `lgcd(a, b) = adjoint(rgcd(adjoint a, adjoint b))` up to a unit.
    pub fn lgcd_by_adjoint(
        &self,
        a: &SkewPoly<F::Elem>,
        b: &SkewPoly<F::Elem>,
    ) -> Result<SkewPoly<F::Elem>> {
        let g = self.rgcd(&self.adjoint(a)?, &self.adjoint(b)?)?;
        self.monic_right(&self.adjoint(&g)?)
    }

    /// `D^k ∘ c` expanded, used by tests as an independent Leibniz oracle.
    pub fn leibniz_power(&self, k: usize, c: &F::Elem) -> Result<SkewPoly<F::Elem>> {
        let mut coeffs = vec![self.field.zero(); k + 1];
        let mut d = c.clone();
        for j in 0..=k {
            if j > 0 {
                d = self.field.derive(&d)?;
            }
            coeffs[k - j] = self.field.scale_int(&d, &binomial(k as u32, j as u32))?;
        }
        Ok(self.from_coeffs(coeffs))
    }
}
