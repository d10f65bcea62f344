//! Linear partial differential operators `sum a_ij Dx^i Dy^j` in two variables.
//!
//! Coefficients sit to the left of the monomials; that normal form is the
//! only representation, so structural equality is operator equality.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{Axis, DiffField};
use crate::ratfunc::{binomial, RatFunc};
use crate::skew::SkewPoly;

/// Exponent pair `(i, j)` of `Dx^i Dy^j`.
pub type Exponents = (u32, u32);

#[derive(Clone)]
pub struct Lpdo {
    field: Arc<DiffField>,
    terms: BTreeMap<Exponents, RatFunc>,
}

impl PartialEq for Lpdo {
    fn eq(&self, other: &Self) -> bool {
        self.field.same_as(&other.field) && self.terms == other.terms
    }
}

impl Eq for Lpdo {}

impl fmt::Debug for Lpdo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Lpdo({self})")
    }
}

impl Lpdo {
    pub fn zero(field: &Arc<DiffField>) -> Self {
        Lpdo {
            field: field.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(field: &Arc<DiffField>) -> Self {
        Self::scalar(field, RatFunc::one())
    }

    pub fn scalar(field: &Arc<DiffField>, c: RatFunc) -> Self {
        Self::term(field, c, 0, 0)
    }

    pub fn term(field: &Arc<DiffField>, c: RatFunc, i: u32, j: u32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((i, j), c);
        }
        Lpdo {
            field: field.clone(),
            terms,
        }
    }

    pub fn dx(field: &Arc<DiffField>) -> Self {
        Self::term(field, RatFunc::one(), 1, 0)
    }

    pub fn dy(field: &Arc<DiffField>) -> Self {
        Self::term(field, RatFunc::one(), 0, 1)
    }

    pub fn from_terms(
        field: &Arc<DiffField>,
        terms: impl IntoIterator<Item = (Exponents, RatFunc)>,
    ) -> Self {
        let mut map: BTreeMap<Exponents, RatFunc> = BTreeMap::new();
        for (e, c) in terms {
            let entry = map.entry(e).or_default();
            *entry = &*entry + &c;
        }
        map.retain(|_, c| !c.is_zero());
        Lpdo {
            field: field.clone(),
            terms: map,
        }
    }

    pub fn field(&self) -> &Arc<DiffField> {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.coeff(0, 0).is_one()
    }

    /// Total order; zero for the zero operator.
    pub fn order(&self) -> u32 {
        self.terms.keys().map(|&(i, j)| i + j).max().unwrap_or(0)
    }

    pub fn order_in(&self, axis: Axis) -> u32 {
        self.terms
            .keys()
            .map(|&(i, j)| if axis == Axis::X { i } else { j })
            .max()
            .unwrap_or(0)
    }

    pub fn coeff(&self, i: u32, j: u32) -> RatFunc {
        self.terms.get(&(i, j)).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (Exponents, &RatFunc)> + '_ {
        self.terms.iter().map(|(&e, c)| (e, c))
    }

    /// Terms in canonical print order: `(i + j, i)` descending.
    pub fn sorted_terms(&self) -> Vec<(Exponents, &RatFunc)> {
        let mut v: Vec<_> = self.terms().collect();
        v.sort_by(|a, b| {
            let ka = (a.0 .0 + a.0 .1, a.0 .0);
            let kb = (b.0 .0 + b.0 .1, b.0 .0);
            kb.cmp(&ka)
        });
        v
    }

    pub fn is_scalar(&self) -> bool {
        self.terms.keys().all(|&e| e == (0, 0))
    }

    /// Whether only powers of the derivation along `axis` occur.
    pub fn is_univariate(&self, axis: Axis) -> bool {
        self.terms.keys().all(|&(i, j)| match axis {
            Axis::X => j == 0,
            Axis::Y => i == 0,
        })
    }

    fn check_field(&self, other: &Lpdo) -> Result<()> {
        if self.field.same_as(&other.field) {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn add(&self, other: &Lpdo) -> Result<Lpdo> {
        self.check_field(other)?;
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            let entry = terms.entry(*e).or_default();
            *entry = &*entry + c;
            if entry.is_zero() {
                terms.remove(e);
            }
        }
        Ok(Lpdo {
            field: self.field.clone(),
            terms,
        })
    }

    pub fn sub(&self, other: &Lpdo) -> Result<Lpdo> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Lpdo {
        Lpdo {
            field: self.field.clone(),
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }

    /// `c * self`, multiplication by a function from the left.
    pub fn scale_left(&self, c: &RatFunc) -> Lpdo {
        if c.is_zero() {
            return Lpdo::zero(&self.field);
        }
        Lpdo {
            field: self.field.clone(),
            terms: self.terms.iter().map(|(e, a)| (*e, c * a)).collect(),
        }
    }

    /// `self ∘ other`, expanded with the Leibniz rule
    /// `Dx^i Dy^j ∘ b = sum C(i,p) C(j,q) Dx^p Dy^q(b) Dx^(i-p) Dy^(j-q)`.
    pub fn compose(&self, other: &Lpdo) -> Result<Lpdo> {
        self.check_field(other)?;
        let f = &self.field;
        let max_i = self.terms.keys().map(|e| e.0).max().unwrap_or(0);
        let max_j = self.terms.keys().map(|e| e.1).max().unwrap_or(0);
        let mut out: BTreeMap<Exponents, RatFunc> = BTreeMap::new();
        for (&(k, l), b) in &other.terms {
            // derivs[p][q] = Dx^p Dy^q b
            let mut derivs: Vec<Vec<RatFunc>> = Vec::with_capacity(max_i as usize + 1);
            let mut row_start = b.clone();
            for p in 0..=max_i {
                if p > 0 {
                    row_start = f.derive(&row_start, Axis::X)?;
                }
                let mut row = Vec::with_capacity(max_j as usize + 1);
                let mut cur = row_start.clone();
                for q in 0..=max_j {
                    if q > 0 {
                        cur = f.derive(&cur, Axis::Y)?;
                    }
                    row.push(cur.clone());
                }
                derivs.push(row);
            }
            for (&(i, j), a) in &self.terms {
                for p in 0..=i {
                    for q in 0..=j {
                        let d = &derivs[p as usize][q as usize];
                        if d.is_zero() {
                            continue;
                        }
                        let c = (a * d).scale(&(binomial(i, p) * binomial(j, q)));
                        let e = (i - p + k, j - q + l);
                        let entry = out.entry(e).or_default();
                        *entry = &*entry + &c;
                    }
                }
            }
        }
        out.retain(|_, c| !c.is_zero());
        Ok(Lpdo {
            field: f.clone(),
            terms: out,
        })
    }

    pub fn pow(&self, n: u32) -> Result<Lpdo> {
        let mut acc = Lpdo::one(&self.field);
        for _ in 0..n {
            acc = acc.compose(self)?;
        }
        Ok(acc)
    }

    /// Formal adjoint `sum (-1)^(i+j) Dx^i Dy^j ∘ a_ij`.
    pub fn adjoint(&self) -> Result<Lpdo> {
        let mut acc = Lpdo::zero(&self.field);
        for (&(i, j), a) in &self.terms {
            let mono = Lpdo::term(&self.field, RatFunc::one(), i, j);
            let mut t = mono.compose(&Lpdo::scalar(&self.field, a.clone()))?;
            if (i + j) % 2 == 1 {
                t = t.neg();
            }
            acc = acc.add(&t)?;
        }
        Ok(acc)
    }

    /// Applies the operator to a function of the field.
    pub fn apply(&self, v: &RatFunc) -> Result<RatFunc> {
        let mut acc = RatFunc::zero();
        for (&(i, j), a) in &self.terms {
            let d = self.field.derive_n(v, i, j)?;
            acc = &acc + &(a * &d);
        }
        Ok(acc)
    }

    /// View as a skew polynomial in the derivation along `axis`.
    pub fn to_skew(&self, axis: Axis) -> Result<SkewPoly<RatFunc>> {
        if !self.is_univariate(axis) {
            return Err(Error::NotUnivariate(format!(
                "{self} involves D{}",
                axis.other()
            )));
        }
        let deg = self.order_in(axis) as usize;
        let mut coeffs = vec![RatFunc::zero(); deg + 1];
        for (&(i, j), c) in &self.terms {
            coeffs[(i + j) as usize] = c.clone();
        }
        Ok(SkewPoly::new(coeffs))
    }

    pub fn from_skew(field: &Arc<DiffField>, p: &SkewPoly<RatFunc>, axis: Axis) -> Lpdo {
        Lpdo::from_terms(
            field,
            p.coeffs().iter().enumerate().map(|(k, c)| {
                let e = match axis {
                    Axis::X => (k as u32, 0),
                    Axis::Y => (0, k as u32),
                };
                (e, c.clone())
            }),
        )
    }

    /// Left-normalizes so that the coefficient of the leading term in print
    /// order is one; the zero operator is returned unchanged.
    pub fn monic(&self) -> Result<Lpdo> {
        match self.sorted_terms().first() {
            None => Ok(self.clone()),
            Some((_, c)) => Ok(self.scale_left(&c.inv()?)),
        }
    }
}

pub(crate) fn fmt_derivation_monomial(f: &mut fmt::Formatter<'_>, i: u32, j: u32) -> fmt::Result {
    let mut first = true;
    for (name, e) in [("Dx", i), ("Dy", j)] {
        if e == 0 {
            continue;
        }
        if !first {
            write!(f, "*")?;
        }
        first = false;
        write!(f, "{name}")?;
        if e > 1 {
            write!(f, "^{e}")?;
        }
    }
    Ok(())
}

/// Writes `sum c_k * m_k` with sign extraction; `mono` prints one monomial
/// (and returns whether it printed anything).
pub(crate) fn fmt_operator_terms<'a, M>(
    f: &mut fmt::Formatter<'_>,
    field: &DiffField,
    terms: impl Iterator<Item = (M, &'a RatFunc)>,
    mut mono: impl FnMut(&mut fmt::Formatter<'_>, &M) -> fmt::Result,
    is_unit: impl Fn(&M) -> bool,
) -> fmt::Result {
    let names = field.names();
    let name = |v: u32| {
        names
            .get(v as usize)
            .cloned()
            .unwrap_or_else(|| format!("g{v}"))
    };
    let terms: Vec<(M, &RatFunc)> = terms.collect();
    if terms.is_empty() {
        return write!(f, "0");
    }
    if terms.len() == 1 && is_unit(&terms[0].0) {
        return terms[0].1.fmt_with(f, &name);
    }
    for (k, (m, c)) in terms.iter().enumerate() {
        let neg = c.is_negative();
        let abs = if neg { -*c } else { (*c).clone() };
        match (k, neg) {
            (0, true) => write!(f, "-")?,
            (0, false) => {}
            (_, true) => write!(f, " - ")?,
            (_, false) => write!(f, " + ")?,
        }
        let multi = abs.is_polynomial() && abs.numer().len() > 1;
        if is_unit(m) {
            if multi && neg {
                write!(f, "(")?;
                abs.fmt_with(f, &name)?;
                write!(f, ")")?;
            } else {
                abs.fmt_with(f, &name)?;
            }
            continue;
        }
        if !abs.is_one() {
            if multi {
                write!(f, "(")?;
                abs.fmt_with(f, &name)?;
                write!(f, ")*")?;
            } else {
                abs.fmt_with(f, &name)?;
                write!(f, "*")?;
            }
        }
        mono(f, m)?;
    }
    Ok(())
}

impl fmt::Display for Lpdo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.sorted_terms();
        fmt_operator_terms(
            f,
            &self.field,
            terms.into_iter(),
            |f, &(i, j)| fmt_derivation_monomial(f, i, j),
            |&e| e == (0, 0),
        )
    }
}
