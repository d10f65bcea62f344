//! Ore fractions `d^{-1} n` over `Q(x, y)[D_inner]` and projections of
//! two-variable operators to skew polynomials in the other derivation.
//!
//! The fractions form a non-commutative differential field under
//! `δ = D_outer`, which acts on `Q(x, y)[D_inner]` coefficientwise. Fractions
//! are kept reduced (`d` and `n` without common left divisor) with `d` monic,
//! which makes the representation unique.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{Axis, DiffField};
use crate::lpdo::Lpdo;
use crate::poly::Rational;
use crate::ratfunc::RatFunc;
use crate::skew::{DifferentialField, RatFuncField, SkewPoly, SkewRing};

/// `den^{-1} ∘ num`.
#[derive(Clone, PartialEq, Debug)]
pub struct OreFraction {
    pub den: SkewPoly<RatFunc>,
    pub num: SkewPoly<RatFunc>,
}

/// The Ore fraction field of `Q(x, y)[D_inner]` with derivation `D_outer`.
#[derive(Clone, Debug)]
pub struct OreFractionField {
    pub base: SkewRing<RatFuncField>,
    pub outer: Axis,
}

impl OreFractionField {
    /// Fractions of `K[D_inner]`; the derivation is along the other axis.
    pub fn new(field: &Arc<DiffField>, inner: Axis) -> Self {
        OreFractionField {
            base: SkewRing::new(RatFuncField::new(field, inner)),
            outer: inner.other(),
        }
    }

    pub fn field(&self) -> &Arc<DiffField> {
        &self.base.field.field
    }

    pub fn inner(&self) -> Axis {
        self.base.field.axis
    }

    pub fn embed(&self, p: SkewPoly<RatFunc>) -> OreFraction {
        OreFraction {
            den: self.base.one(),
            num: p,
        }
    }

    pub fn from_lpdo(&self, a: &Lpdo) -> Result<OreFraction> {
        Ok(self.embed(a.to_skew(self.inner())?))
    }

    pub fn scalar(&self, c: RatFunc) -> OreFraction {
        self.embed(self.base.constant(c))
    }

    /// `den^{-1} num` in reduced form.
    pub fn fraction(&self, den: SkewPoly<RatFunc>, num: SkewPoly<RatFunc>) -> Result<OreFraction> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        self.reduce(den, num)
    }

    fn reduce(&self, den: SkewPoly<RatFunc>, num: SkewPoly<RatFunc>) -> Result<OreFraction> {
        let b = &self.base;
        if num.is_zero() {
            return Ok(self.zero());
        }
        let (mut den, mut num) = (den, num);
        if den.degree() != Some(0) {
            let g = b.lgcd_by_adjoint(&den, &num)?;
            if g.degree() != Some(0) {
                let (qd, rd) = b.left_divide(&den, &g)?;
                let (qn, rn) = b.left_divide(&num, &g)?;
                if !rd.is_zero() || !rn.is_zero() {
                    return Err(Error::Consistency(
                        "common left divisor does not divide".into(),
                    ));
                }
                den = qd;
                num = qn;
            }
        }
        let lc = den.leading().expect("nonzero").clone();
        if !lc.is_one() {
            let inv = lc.inv()?;
            den = b.scale_left(&inv, &den)?;
            num = b.scale_left(&inv, &num)?;
        }
        Ok(OreFraction { den, num })
    }

    /// Equality by bringing both fractions to a common left denominator.
    pub fn eq_by_llcm(&self, a: &OreFraction, c: &OreFraction) -> Result<bool> {
        let b = &self.base;
        let e = b.euclid(&a.den, &c.den)?;
        Ok(b.mul(&e.x, &a.num)? == b.mul(&e.y, &c.num)?)
    }

    /// Coefficientwise `D_outer` on `K[D_inner]`, the commutator `[D_outer, p]`.
    fn derive_base(&self, p: &SkewPoly<RatFunc>) -> Result<SkewPoly<RatFunc>> {
        let f = self.field();
        let coeffs = p
            .coeffs()
            .iter()
            .map(|c| f.derive(c, self.outer))
            .collect::<Result<Vec<_>>>()?;
        Ok(self.base.from_coeffs(coeffs))
    }

    fn fmt_base(&self, p: &SkewPoly<RatFunc>) -> String {
        Lpdo::from_skew(self.field(), p, self.inner()).to_string()
    }

    fn is_unit_den(&self, a: &OreFraction) -> bool {
        a.den.degree() == Some(0) && a.den.leading().is_some_and(RatFunc::is_one)
    }
}

impl DifferentialField for OreFractionField {
    type Elem = OreFraction;

    fn zero(&self) -> OreFraction {
        self.embed(self.base.zero())
    }

    fn one(&self) -> OreFraction {
        self.embed(self.base.one())
    }

    fn is_zero(&self, a: &OreFraction) -> bool {
        a.num.is_zero()
    }

    fn add(&self, a: &OreFraction, c: &OreFraction) -> Result<OreFraction> {
        let b = &self.base;
        if a.num.is_zero() {
            return Ok(c.clone());
        }
        if c.num.is_zero() {
            return Ok(a.clone());
        }
        if a.den == c.den {
            return self.reduce(a.den.clone(), b.add(&a.num, &c.num)?);
        }
        // x ∘ d1 = y ∘ d2 = lcm
        let e = b.euclid(&a.den, &c.den)?;
        let num = b.add(&b.mul(&e.x, &a.num)?, &b.mul(&e.y, &c.num)?)?;
        self.reduce(e.lcm, num)
    }

    fn neg(&self, a: &OreFraction) -> Result<OreFraction> {
        Ok(OreFraction {
            den: a.den.clone(),
            num: self.base.neg(&a.num)?,
        })
    }

    fn mul(&self, a: &OreFraction, c: &OreFraction) -> Result<OreFraction> {
        let b = &self.base;
        if a.num.is_zero() || c.num.is_zero() {
            return Ok(self.zero());
        }
        if self.is_unit_den(c) {
            return self.reduce(a.den.clone(), b.mul(&a.num, &c.num)?);
        }
        // d1^{-1} n1 d2^{-1} n2 with w ∘ n1 = z ∘ d2
        let e = b.euclid(&a.num, &c.den)?;
        let den = b.mul(&e.x, &a.den)?;
        let num = b.mul(&e.y, &c.num)?;
        self.reduce(den, num)
    }

    fn inv(&self, a: &OreFraction) -> Result<OreFraction> {
        if a.num.is_zero() {
            return Err(Error::DivisionByZero);
        }
        self.reduce(a.num.clone(), a.den.clone())
    }

    /// `δ(d^{-1} n) = d^{-1} δ(n) - d^{-1} δ(d) d^{-1} n`.
    fn derive(&self, a: &OreFraction) -> Result<OreFraction> {
        let dn = self.derive_base(&a.num)?;
        if self.is_unit_den(a) {
            return Ok(self.embed(dn));
        }
        let dd = self.derive_base(&a.den)?;
        let inner = self.sub(&self.embed(dn), &self.mul(&self.embed(dd), a)?)?;
        let d_inv = self.reduce(a.den.clone(), self.base.one())?;
        self.mul(&d_inv, &inner)
    }

    fn scale_int(&self, a: &OreFraction, n: &Rational) -> Result<OreFraction> {
        if n == &Rational::from_integer(0.into()) {
            return Ok(self.zero());
        }
        let c = RatFunc::from_rational(n.clone());
        Ok(OreFraction {
            den: a.den.clone(),
            num: self.base.scale_left(&c, &a.num)?,
        })
    }

    fn format(&self, a: &OreFraction) -> String {
        if self.is_unit_den(a) {
            self.fmt_base(&a.num)
        } else {
            format!("({})^-1 * ({})", self.fmt_base(&a.den), self.fmt_base(&a.num))
        }
    }
}

/// An operator viewed in `Q(x, y, D_inner)[D_outer]`.
#[derive(Clone, Debug)]
pub struct ProjectedOp {
    pub ring: SkewRing<OreFractionField>,
    pub poly: SkewPoly<OreFraction>,
}

impl ProjectedOp {
    pub fn axis(&self) -> Axis {
        self.ring.field.outer
    }

    pub fn degree(&self) -> Option<usize> {
        self.poly.degree()
    }
}

impl PartialEq for ProjectedOp {
    fn eq(&self, other: &Self) -> bool {
        self.axis() == other.axis()
            && self.ring.field.field().same_as(other.ring.field.field())
            && self.poly == other.poly
    }
}

impl fmt::Display for ProjectedOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sym = match self.axis() {
            Axis::X => "Dx",
            Axis::Y => "Dy",
        };
        f.write_str(&self.ring.format(&self.poly, sym))
    }
}

/// The skew polynomial ring `Q(x, y, D_other)[D_axis]`.
pub fn projection_ring(field: &Arc<DiffField>, axis: Axis) -> SkewRing<OreFractionField> {
    SkewRing::new(OreFractionField::new(field, axis.other()))
}

/// `P_axis(a)`: the coefficient of `D_axis^i` is `sum_j a_ij D_other^j`.
pub fn project(a: &Lpdo, axis: Axis) -> Result<ProjectedOp> {
    let ring = projection_ring(a.field(), axis);
    let deg = a.order_in(axis) as usize;
    let mut parts: Vec<Vec<RatFunc>> = vec![Vec::new(); deg + 1];
    for ((i, j), c) in a.terms() {
        let (outer_e, inner_e) = match axis {
            Axis::X => (i, j),
            Axis::Y => (j, i),
        };
        let slot = &mut parts[outer_e as usize];
        if slot.len() <= inner_e as usize {
            slot.resize(inner_e as usize + 1, RatFunc::zero());
        }
        slot[inner_e as usize] = c.clone();
    }
    let coeffs = parts
        .into_iter()
        .map(|cs| ring.field.embed(ring.field.base.from_coeffs(cs)))
        .collect();
    let poly = ring.from_coeffs(coeffs);
    Ok(ProjectedOp { ring, poly })
}

/// Monic generator of the left ideal spanned by the projections of `gens`,
/// the right GCD in `Q(x, y, D_other)[D_axis]`.
pub fn ideal_coordinates(gens: &[Lpdo], axis: Axis) -> Result<ProjectedOp> {
    let first = gens.first().ok_or(Error::ZeroOperator)?;
    let ring = projection_ring(first.field(), axis);
    let mut acc = ring.zero();
    for g in gens {
        if !g.field().same_as(first.field()) {
            return Err(Error::FieldMismatch);
        }
        let p = project(g, axis)?.poly;
        if p.is_zero() {
            continue;
        }
        acc = if acc.is_zero() {
            ring.monic(&p)?
        } else {
            ring.rgcd(&acc, &p)?
        };
    }
    if acc.is_zero() {
        return Err(Error::ZeroOperator);
    }
    Ok(ProjectedOp { ring, poly: acc })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::landau::Landau;

    fn frac_field() -> (Arc<DiffField>, OreFractionField) {
        let f = DiffField::standard();
        let k = OreFractionField::new(&f, Axis::Y);
        (f, k)
    }

    #[test]
    fn inverse_round_trip() {
        let (f, k) = frac_field();
        let a = k
            .from_lpdo(&Lpdo::from_terms(&f, [((0, 1), f.x()), ((0, 0), f.y())]))
            .unwrap();
        let ai = k.inv(&a).unwrap();
        assert!(k.is_one(&k.mul(&a, &ai).unwrap()));
        assert!(k.is_one(&k.mul(&ai, &a).unwrap()));
    }

    #[test]
    fn derivation_of_inverse() {
        let (f, k) = frac_field();
        // δ(a^{-1}) = -a^{-1} δ(a) a^{-1}
        let a = k
            .from_lpdo(&Lpdo::from_terms(&f, [((0, 1), f.x()), ((0, 0), f.y())]))
            .unwrap();
        let ai = k.inv(&a).unwrap();
        let lhs = k.derive(&ai).unwrap();
        let da = k.derive(&a).unwrap();
        let rhs = k
            .neg(&k.mul(&k.mul(&ai, &da).unwrap(), &ai).unwrap())
            .unwrap();
        assert_eq!(lhs, rhs);
        assert!(k.eq_by_llcm(&lhs, &rhs).unwrap());
    }

    #[test]
    fn landau_projection_prints() {
        let l = Landau::new();
        let p = project(&l.r, Axis::X).unwrap();
        assert_eq!(p.to_string(), "Dx^2 + (x*Dy + 1)*Dx + ((x + 2)*Dy)");
    }

    #[test]
    fn ideal_coordinates_of_landau_pair() {
        let l = Landau::new();
        let c = ideal_coordinates(&[l.l31.clone(), l.l32.clone()], Axis::X).unwrap();
        assert_eq!(c.degree(), Some(2));
        let p = project(&l.p, Axis::X).unwrap();
        let (_, rem) = c.ring.right_divide(&c.poly, &p.poly).unwrap();
        assert!(rem.is_zero());
    }
}
