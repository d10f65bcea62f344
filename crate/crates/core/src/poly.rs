//! Sparse multivariate polynomials over the rationals.
//!
//! Variables are generator indices into a [`DiffField`](crate::field::DiffField).
//! Terms are kept sorted in descending graded-lexicographic order with
//! variable `0` the most significant, so the first term is the leading one.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use smallvec::SmallVec;

/// A rational number, the scalar type of every polynomial.
pub type Rational = BigRational;

/// Power product `v_0^e_0 * v_1^e_1 * ...`, stored as sorted `(var, exp)` pairs
/// with positive exponents.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monomial(SmallVec<[(u32, u32); 4]>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(SmallVec::new())
    }

    pub fn var(v: u32, exp: u32) -> Self {
        if exp == 0 {
            Monomial::one()
        } else {
            let mut s = SmallVec::new();
            s.push((v, exp));
            Monomial(s)
        }
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn exp(&self, v: u32) -> u32 {
        self.0
            .iter()
            .find(|&&(w, _)| w == v)
            .map(|&(_, e)| e)
            .unwrap_or(0)
    }

    pub fn factors(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.0.iter().copied()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = SmallVec::with_capacity(self.0.len() + other.0.len());
        let (a, b) = (&self.0, &other.0);
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// `self / other` if `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = SmallVec::with_capacity(self.0.len());
        let mut j = 0;
        for &(v, e) in &self.0 {
            if j < other.0.len() && other.0[j].0 < v {
                return None;
            }
            if j < other.0.len() && other.0[j].0 == v {
                let f = other.0[j].1;
                j += 1;
                match e.cmp(&f) {
                    Ordering::Less => return None,
                    Ordering::Equal => {}
                    Ordering::Greater => out.push((v, e - f)),
                }
            } else {
                out.push((v, e));
            }
        }
        if j < other.0.len() {
            return None;
        }
        Some(Monomial(out))
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let mut out = SmallVec::new();
        for &(v, e) in &self.0 {
            let f = other.exp(v);
            if f > 0 {
                out.push((v, e.min(f)));
            }
        }
        Monomial(out)
    }

    /// Splits off the power of `v`: returns `(exp_v, rest)`.
    pub fn split(&self, v: u32) -> (u32, Monomial) {
        let mut rest = SmallVec::with_capacity(self.0.len());
        let mut e = 0;
        for &(w, f) in &self.0 {
            if w == v {
                e = f;
            } else {
                rest.push((w, f));
            }
        }
        (e, Monomial(rest))
    }

    fn lex_cmp(&self, other: &Monomial) -> Ordering {
        let (a, b) = (&self.0, &other.0);
        let (mut i, mut j) = (0, 0);
        loop {
            match (a.get(i), b.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some(&(va, ea)), Some(&(vb, eb))) => {
                    if va < vb {
                        return Ordering::Greater;
                    }
                    if va > vb {
                        return Ordering::Less;
                    }
                    if ea != eb {
                        return ea.cmp(&eb);
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.lex_cmp(other))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial with rational coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Poly {
    terms: Vec<(Monomial, Rational)>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly {
                terms: vec![(Monomial::one(), c)],
            }
        }
    }

    pub fn from_int(n: i64) -> Self {
        Poly::constant(Rational::from_integer(BigInt::from(n)))
    }

    pub fn var(v: u32) -> Self {
        Poly::monomial(Monomial::var(v, 1), Rational::one())
    }

    pub fn monomial(m: Monomial, c: Rational) -> Self {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly { terms: vec![(m, c)] }
        }
    }

    /// Builds a polynomial from arbitrary (possibly repeated, unsorted) terms.
    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut acc: HashMap<Monomial, Rational> = HashMap::new();
        for (m, c) in terms {
            *acc.entry(m).or_insert_with(Rational::zero) += c;
        }
        Self::from_map(acc)
    }

    fn from_map(acc: HashMap<Monomial, Rational>) -> Self {
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        Poly { terms }
    }

    pub fn terms(&self) -> &[(Monomial, Rational)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.is_one())
    }

    pub fn constant_value(&self) -> Option<Rational> {
        match self.terms.as_slice() {
            [] => Some(Rational::zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn leading(&self) -> Option<&(Monomial, Rational)> {
        self.terms.first()
    }

    pub fn leading_coeff(&self) -> Rational {
        self.terms
            .first()
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rational::zero)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.iter().map(|(m, _)| m.degree()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, v: u32) -> u32 {
        self.terms.iter().map(|(m, _)| m.exp(v)).max().unwrap_or(0)
    }

    pub fn vars(&self) -> BTreeSet<u32> {
        self.terms
            .iter()
            .flat_map(|(m, _)| m.factors().map(|(v, _)| v))
            .collect()
    }

    pub fn max_var(&self) -> Option<u32> {
        self.terms
            .iter()
            .flat_map(|(m, _)| m.factors().map(|(v, _)| v))
            .max()
    }

    pub fn neg(&self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        self.merge(other, false)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.merge(other, true)
    }

    fn merge(&self, other: &Poly, negate: bool) -> Poly {
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        let sign = |c: &Rational| if negate { -c } else { c.clone() };
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push((b[j].0.clone(), sign(&b[j].1)));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate {
                        &a[i].1 - &b[j].1
                    } else {
                        &a[i].1 + &b[j].1
                    };
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        out.extend(b[j..].iter().map(|(m, c)| (m.clone(), sign(c))));
        Poly { terms: out }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        if let Some(c) = self.constant_value() {
            return other.scale(&c);
        }
        if let Some(c) = other.constant_value() {
            return self.scale(&c);
        }
        if other.terms.len() == 1 {
            let (m, c) = &other.terms[0];
            return self.mul_term(m, c);
        }
        if self.terms.len() == 1 {
            let (m, c) = &self.terms[0];
            return other.mul_term(m, c);
        }
        let mut acc: HashMap<Monomial, Rational> =
            HashMap::with_capacity(self.terms.len() * other.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let c = ca * cb;
                acc.entry(ma.mul(mb))
                    .and_modify(|x| *x += &c)
                    .or_insert(c);
            }
        }
        Self::from_map(acc)
    }

    /// Multiplication by a single term keeps the order, no re-sort needed.
    pub fn mul_term(&self, m: &Monomial, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(mm, cc)| (mm.mul(m), cc * c))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        if c.is_one() {
            return self.clone();
        }
        Poly {
            terms: self.terms.iter().map(|(m, cc)| (m.clone(), cc * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut result = Poly::one();
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = result.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Scales so that the leading coefficient is one.
    pub fn monic(&self) -> Poly {
        match self.terms.first() {
            None => Poly::zero(),
            Some((_, c)) if c.is_one() => self.clone(),
            Some((_, c)) => self.scale(&c.recip()),
        }
    }

    pub fn derivative(&self, v: u32) -> Poly {
        let terms = self.terms.iter().filter_map(|(m, c)| {
            let (e, rest) = m.split(v);
            if e == 0 {
                None
            } else {
                Some((
                    rest.mul(&Monomial::var(v, e - 1)),
                    c * Rational::from_integer(BigInt::from(e)),
                ))
            }
        });
        Poly::from_terms(terms)
    }

    /// Replaces variable `v` by the polynomial `value`.
    pub fn substitute(&self, v: u32, value: &Poly) -> Poly {
        let coeffs = self.to_univariate(v);
        // Horner in v
        let mut acc = Poly::zero();
        for c in coeffs.iter().rev() {
            acc = acc.mul(value).add(c);
        }
        acc
    }

    /// Exact division; `None` when `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &Poly) -> Option<Poly> {
        assert!(!divisor.is_zero(), "polynomial division by zero");
        if self.is_zero() {
            return Some(Poly::zero());
        }
        if let Some(c) = divisor.constant_value() {
            return Some(self.scale(&c.recip()));
        }
        if divisor.terms.len() == 1 {
            let (m, c) = &divisor.terms[0];
            let inv = c.recip();
            let mut terms = Vec::with_capacity(self.terms.len());
            for (mm, cc) in &self.terms {
                terms.push((mm.div(m)?, cc * &inv));
            }
            return Some(Poly { terms });
        }
        let (lm, lc) = &divisor.terms[0];
        let inv_lc = lc.recip();
        let mut rem = self.clone();
        let mut quot = Vec::new();
        while let Some((m, c)) = rem.terms.first() {
            let qm = m.div(lm)?;
            let qc = c * &inv_lc;
            rem = rem.sub(&divisor.mul_term(&qm, &qc));
            quot.push((qm, qc));
        }
        Some(Poly { terms: quot })
    }

    /// Coefficients with respect to `v`, index = power of `v`.
    pub fn to_univariate(&self, v: u32) -> Vec<Poly> {
        let deg = self.degree_in(v) as usize;
        let mut buckets: Vec<Vec<(Monomial, Rational)>> = vec![Vec::new(); deg + 1];
        for (m, c) in &self.terms {
            let (e, rest) = m.split(v);
            buckets[e as usize].push((rest, c.clone()));
        }
        // dropping a common power of v keeps the grlex order within a bucket
        buckets.into_iter().map(|terms| Poly { terms }).collect()
    }

    pub fn from_univariate(v: u32, coeffs: &[Poly]) -> Poly {
        let mut acc = HashMap::new();
        for (i, c) in coeffs.iter().enumerate() {
            let vm = Monomial::var(v, i as u32);
            for (m, cc) in &c.terms {
                acc.insert(m.mul(&vm), cc.clone());
            }
        }
        Self::from_map(acc)
    }

    /// Monic greatest common divisor (zero only if both inputs are zero).
    pub fn gcd(&self, other: &Poly) -> Poly {
        gcd(self, other)
    }

    pub fn fmt_with(&self, f: &mut fmt::Formatter<'_>, names: &dyn Fn(u32) -> String) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if m.is_one() {
                write!(f, "{}", fmt_rational(&abs))?;
                continue;
            }
            if !abs.is_one() {
                write!(f, "{}*", fmt_rational(&abs))?;
            }
            fmt_monomial(f, m, names)?;
        }
        Ok(())
    }
}

pub(crate) fn fmt_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub(crate) fn fmt_monomial(
    f: &mut fmt::Formatter<'_>,
    m: &Monomial,
    names: &dyn Fn(u32) -> String,
) -> fmt::Result {
    for (k, (v, e)) in m.factors().enumerate() {
        if k > 0 {
            write!(f, "*")?;
        }
        write!(f, "{}", names(v))?;
        if e > 1 {
            write!(f, "^{e}")?;
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// gcd: recursive content extraction + subresultant PRS in a main variable

fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    if a == b {
        return a.monic();
    }
    if a.len() == 1 {
        return monomial_gcd(&a.terms[0].0, b);
    }
    if b.len() == 1 {
        return monomial_gcd(&b.terms[0].0, a);
    }
    let va = a.vars();
    let vb = b.vars();
    let common: Vec<u32> = va.intersection(&vb).copied().collect();
    if common.is_empty() {
        return Poly::one();
    }
    if va.len() == 1 && vb.len() == 1 {
        return univariate_gcd(common[0], a, b);
    }
    // strip variables that occur in only one argument through its content
    if let Some(&v) = va.difference(&vb).next() {
        let ca = content(&a.to_univariate(v));
        return gcd(&ca, b);
    }
    if let Some(&v) = vb.difference(&va).next() {
        let cb = content(&b.to_univariate(v));
        return gcd(a, &cb);
    }
    // a variable the gcd provably avoids reduces the problem to contents
    for &v in &common {
        if free_of(v, a, b) {
            let ca = content(&a.to_univariate(v));
            let cb = content(&b.to_univariate(v));
            return gcd(&ca, &cb);
        }
    }
    if let Some(g) = heuristic_gcd(a, b) {
        return g.monic();
    }
    let v = *common
        .iter()
        .min_by_key(|&&v| (a.degree_in(v).min(b.degree_in(v)), v))
        .unwrap();
    let ua = a.to_univariate(v);
    let ub = b.to_univariate(v);
    let ca = content(&ua);
    let cb = content(&ub);
    let c = gcd(&ca, &cb);
    let pa: Vec<Poly> = ua.iter().map(|p| p.div_exact(&ca).unwrap()).collect();
    let pb: Vec<Poly> = ub.iter().map(|p| p.div_exact(&cb).unwrap()).collect();
    let g = subresultant(pa, pb);
    let cg = content(&g);
    let g: Vec<Poly> = g.iter().map(|p| p.div_exact(&cg).unwrap()).collect();
    Poly::from_univariate(v, &g).mul(&c).monic()
}

/// Image of `p` in `Q[v]` with every other variable `w` set to a small
/// integer depending on `w` and `shift`.
fn image_in(v: u32, p: &Poly, shift: u32) -> Poly {
    let point = |w: u32| -> Rational {
        Rational::from_integer(BigInt::from(2 + (w.wrapping_mul(7).wrapping_add(shift * 5) % 23) as i64))
    };
    let mut acc: HashMap<u32, Rational> = HashMap::new();
    for (m, c) in &p.terms {
        let mut val = c.clone();
        let mut e_v = 0;
        for (w, e) in m.factors() {
            if w == v {
                e_v = e;
            } else {
                val *= num_traits::pow(point(w), e as usize);
            }
        }
        *acc.entry(e_v).or_insert_with(Rational::zero) += val;
    }
    Poly::from_terms(
        acc.into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(e, c)| (Monomial::var(v, e), c)),
    )
}

/// True when an evaluation image certifies that `gcd(a, b)` does not involve
/// `v`: the leading coefficient in `v` survives and the image gcd is constant.
fn free_of(v: u32, a: &Poly, b: &Poly) -> bool {
    if a.vars().len() == 1 {
        return false;
    }
    for shift in 0..2 {
        let ia = image_in(v, a, shift);
        if ia.degree_in(v) != a.degree_in(v) {
            continue;
        }
        let ib = image_in(v, b, shift);
        if ib.is_zero() {
            continue;
        }
        let g = gcd(&ia, &ib);
        return g.degree_in(v) == 0;
    }
    false
}

// Heuristic gcd: evaluate one variable at a large integer, recurse, and
// rebuild the candidate from its xi-adic digits; accepted only when it divides
// both inputs.

const HEU_ATTEMPTS: usize = 6;
const HEU_MAX_BITS: u64 = 6000;

fn integral(p: &Poly) -> Poly {
    let mut den = BigInt::one();
    for (_, c) in &p.terms {
        den = den.lcm(c.denom());
    }
    p.scale(&Rational::from_integer(den))
}

fn int_content_of(p: &Poly) -> BigInt {
    let mut g = BigInt::zero();
    for (_, c) in &p.terms {
        g = g.gcd(c.numer());
        if g.is_one() {
            break;
        }
    }
    g
}

fn max_norm(p: &Poly) -> BigInt {
    p.terms
        .iter()
        .map(|(_, c)| c.numer().abs())
        .max()
        .unwrap_or_else(BigInt::zero)
}

fn eval_at(p: &Poly, v: u32, xi: &BigInt) -> Poly {
    let mut acc: HashMap<Monomial, Rational> = HashMap::new();
    for (m, c) in &p.terms {
        let (e, rest) = m.split(v);
        let val = c * Rational::from_integer(num_traits::pow(xi.clone(), e as usize));
        *acc.entry(rest).or_insert_with(Rational::zero) += val;
    }
    Poly::from_map(acc)
}

fn xi_adic(h: &Poly, v: u32, xi: &BigInt) -> Poly {
    let half = xi / 2;
    let mut h = h.clone();
    let mut out = Vec::new();
    let mut i = 0;
    while !h.is_zero() {
        let mut digit = Vec::new();
        for (m, c) in &h.terms {
            let mut r = c.numer().mod_floor(xi);
            if r > half {
                r -= xi;
            }
            if !r.is_zero() {
                digit.push((m.clone(), Rational::from_integer(r)));
            }
        }
        let d = Poly { terms: digit };
        h = h.sub(&d).scale(&Rational::new(BigInt::one(), xi.clone()));
        for (m, c) in d.terms {
            out.push((m.mul(&Monomial::var(v, i)), c));
        }
        i += 1;
    }
    Poly::from_terms(out)
}

fn heu_gcd(a: &Poly, b: &Poly) -> Option<Poly> {
    let ca = int_content_of(a);
    let cb = int_content_of(b);
    let c = ca.gcd(&cb);
    if a.is_constant() || b.is_constant() {
        return Some(Poly::constant(Rational::from_integer(c)));
    }
    let a = a.scale(&Rational::new(BigInt::one(), ca));
    let b = b.scale(&Rational::new(BigInt::one(), cb));
    let v = *a.vars().union(&b.vars()).next().unwrap();
    let mut xi: BigInt = max_norm(&a).min(max_norm(&b)) * 2 + 29;
    for _ in 0..HEU_ATTEMPTS {
        if xi.bits() > HEU_MAX_BITS {
            return None;
        }
        let ea = eval_at(&a, v, &xi);
        let eb = eval_at(&b, v, &xi);
        if !ea.is_zero() && !eb.is_zero() {
            if let Some(h) = heu_gcd(&ea, &eb) {
                let g = xi_adic(&h, v, &xi);
                if !g.is_zero() {
                    let k = int_content_of(&g);
                    let g = g.scale(&Rational::new(BigInt::one(), k));
                    if a.div_exact(&g).is_some() && b.div_exact(&g).is_some() {
                        return Some(g.scale(&Rational::from_integer(c)));
                    }
                }
            }
        }
        xi = xi * 73794 / 27011;
    }
    None
}

fn heuristic_gcd(a: &Poly, b: &Poly) -> Option<Poly> {
    heu_gcd(&integral(a), &integral(b))
}

fn monomial_gcd(m: &Monomial, p: &Poly) -> Poly {
    let mut g = m.clone();
    for (mm, _) in &p.terms {
        g = g.gcd(mm);
        if g.is_one() {
            break;
        }
    }
    Poly::monomial(g, Rational::one())
}

fn content(coeffs: &[Poly]) -> Poly {
    let mut g = Poly::zero();
    // cheapest coefficients first, the running gcd shrinks quickly
    let mut order: Vec<&Poly> = coeffs.iter().filter(|p| !p.is_zero()).collect();
    order.sort_by_key(|p| p.len());
    for c in order {
        g = gcd(&g, c);
        if g.is_one() {
            break;
        }
    }
    g
}

/// Integer coefficients of a univariate polynomial, made primitive.
fn dense_primitive(v: u32, p: &Poly) -> Vec<BigInt> {
    let deg = p.degree_in(v) as usize;
    let mut den = BigInt::one();
    for (_, c) in &p.terms {
        den = den.lcm(c.denom());
    }
    let mut out = vec![BigInt::zero(); deg + 1];
    for (m, c) in &p.terms {
        let (e, _) = m.split(v);
        out[e as usize] = c.numer() * (&den / c.denom());
    }
    int_primitive(out)
}

fn int_primitive(mut p: Vec<BigInt>) -> Vec<BigInt> {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    let mut g = BigInt::zero();
    for c in &p {
        g = g.gcd(c);
        if g.is_one() {
            return p;
        }
    }
    if !g.is_zero() {
        for c in p.iter_mut() {
            *c /= &g;
        }
    }
    p
}

fn int_prem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let n = b.len() - 1;
    let lcb = &b[n];
    let mut r = a.to_vec();
    let mut e = a.len() as i64 - n as i64;
    while r.len() > n {
        let d = r.len() - 1;
        let lr = r[d].clone();
        for c in r.iter_mut() {
            *c *= lcb;
        }
        for (i, bc) in b.iter().enumerate() {
            r[i + d - n] -= bc * &lr;
        }
        r.pop();
        e -= 1;
        while r.last().is_some_and(|c| c.is_zero()) {
            r.pop();
        }
    }
    if e > 0 {
        let f = num_traits::pow(lcb.clone(), e as usize);
        for c in r.iter_mut() {
            *c *= &f;
        }
    }
    r
}

/// Subresultant remainder sequence over the integers.
fn univariate_gcd(v: u32, a: &Poly, b: &Poly) -> Poly {
    let mut a = dense_primitive(v, a);
    let mut b = dense_primitive(v, b);
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    let mut g = BigInt::one();
    let mut h = BigInt::one();
    let result = loop {
        let d = a.len() - b.len();
        let r = int_prem(&a, &b);
        if r.is_empty() {
            break int_primitive(b);
        }
        if r.len() == 1 {
            break vec![BigInt::one()];
        }
        let divisor = &g * num_traits::pow(h.clone(), d);
        a = b;
        b = r.into_iter().map(|c| c / &divisor).collect();
        g = a[a.len() - 1].clone();
        h = match d {
            0 => h,
            1 => g.clone(),
            _ => num_traits::pow(g.clone(), d) / num_traits::pow(h, d - 1),
        };
    };
    let terms = result
        .iter()
        .enumerate()
        .rev()
        .filter(|(_, c)| !c.is_zero())
        .map(|(e, c)| (Monomial::var(v, e as u32), Rational::from_integer(c.clone())));
    Poly::from_terms(terms).monic()
}

fn trim(p: &mut Vec<Poly>) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn udeg(p: &[Poly]) -> usize {
    p.len() - 1
}

fn prem(a: &[Poly], b: &[Poly]) -> Vec<Poly> {
    let n = udeg(b);
    let lcb = &b[n];
    let mut r: Vec<Poly> = a.to_vec();
    let mut e = udeg(a) as i64 - n as i64 + 1;
    trim(&mut r);
    while !r.is_empty() && udeg(&r) >= n {
        let d = udeg(&r);
        let lr = r[d].clone();
        let shift = d - n;
        let mut next: Vec<Poly> = r.iter().map(|c| c.mul(lcb)).collect();
        for (i, bc) in b.iter().enumerate() {
            next[i + shift] = next[i + shift].sub(&bc.mul(&lr));
        }
        trim(&mut next);
        r = next;
        e -= 1;
    }
    if e > 0 {
        let f = lcb.pow(e as u32);
        for c in r.iter_mut() {
            *c = c.mul(&f);
        }
    }
    r
}

fn subresultant(mut a: Vec<Poly>, mut b: Vec<Poly>) -> Vec<Poly> {
    if udeg(&a) < udeg(&b) {
        std::mem::swap(&mut a, &mut b);
    }
    let mut g = Poly::one();
    let mut h = Poly::one();
    loop {
        let d = (udeg(&a) - udeg(&b)) as u32;
        let r = prem(&a, &b);
        if r.is_empty() {
            return b;
        }
        if udeg(&r) == 0 {
            return vec![Poly::one()];
        }
        a = b;
        let divisor = g.mul(&h.pow(d));
        b = r
            .iter()
            .map(|c| c.div_exact(&divisor).expect("subresultant division is exact"))
            .collect();
        g = a[udeg(&a)].clone();
        h = match d {
            0 => h,
            1 => g.clone(),
            _ => g
                .pow(d)
                .div_exact(&h.pow(d - 1))
                .expect("subresultant division is exact"),
        };
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Poly {
        Poly::var(0)
    }
    fn y() -> Poly {
        Poly::var(1)
    }
    fn int(n: i64) -> Poly {
        Poly::from_int(n)
    }

    #[test]
    fn grlex_order() {
        let x2 = Monomial::var(0, 2);
        let xy = Monomial::var(0, 1).mul(&Monomial::var(1, 1));
        let y2 = Monomial::var(1, 2);
        let x = Monomial::var(0, 1);
        assert!(x2 > xy && xy > y2 && y2 > x);
        assert!(x > Monomial::one());
    }

    #[test]
    fn difference_of_squares_divides() {
        let num = x().mul(&x()).sub(&y().mul(&y()));
        let den = x().sub(&y());
        let q = num.div_exact(&den).unwrap();
        assert_eq!(q, x().add(&y()));
        assert!(x().add(&int(1)).div_exact(&y()).is_none());
    }

    #[test]
    fn gcd_recovers_common_factor() {
        let g = x().mul(&y()).add(&int(1));
        let a = g.mul(&x().add(&int(2))).mul(&g);
        let b = g.mul(&y().sub(&x()));
        assert_eq!(a.gcd(&b), g.monic());
        assert!(x().gcd(&y()).is_one());
        assert_eq!(x().mul(&y()).gcd(&x().mul(&x())), x());
    }

    #[test]
    fn gcd_three_variables() {
        let z = Poly::var(2);
        let g = x().mul(&z).sub(&y()).add(&int(3));
        let a = g.mul(&x().add(&z)).mul(&y().add(&int(1)));
        let b = g.mul(&z.mul(&z).sub(&int(2))).mul(&y().add(&int(1)));
        assert_eq!(a.gcd(&b), g.mul(&y().add(&int(1))).monic());
    }

    #[test]
    fn substitute_and_derivative() {
        let p = x().mul(&x()).mul(&y());
        assert_eq!(p.derivative(0), int(2).mul(&x()).mul(&y()));
        assert_eq!(p.substitute(0, &y()), y().pow(3));
    }
}
