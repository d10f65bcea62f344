#![allow(dead_code)]

use std::sync::Arc;

use lpdo_core::comult::monomials_up_to;
use lpdo_core::laplace::HyperbolicOp;
use lpdo_core::skew::{RatFuncField, SkewPoly, SkewRing};
use lpdo_core::syntax::{parse_operator, parse_scalar};
use lpdo_core::{Axis, DiffField, DifferentialField, Lpdo, Monomial, Poly, RatFunc, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const SEED: u64 = 0x5eed_1dea;

pub fn rng(salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(SEED ^ salt)
}

fn nonzero(rng: &mut ChaCha8Rng, lim: i64) -> i64 {
    loop {
        let c = rng.random_range(-lim..=lim);
        if c != 0 {
            return c;
        }
    }
}

/// Polynomial with up to `terms` terms of total degree <= `deg` in the
/// variables `vars`.
pub fn poly(rng: &mut ChaCha8Rng, vars: &[u32], deg: u32, terms: usize) -> Poly {
    let n = rng.random_range(1..=terms);
    let mut acc = Poly::zero();
    for _ in 0..n {
        let mut m = Monomial::one();
        let d = rng.random_range(0..=deg);
        for _ in 0..d {
            let v = vars[rng.random_range(0..vars.len())];
            m = m.mul(&Monomial::var(v, 1));
        }
        acc = acc.add(&Poly::monomial(m, Rational::from_integer(nonzero(rng, 4).into())));
    }
    if acc.is_zero() {
        Poly::from_int(nonzero(rng, 3))
    } else {
        acc
    }
}

pub fn ratfunc(rng: &mut ChaCha8Rng, vars: &[u32]) -> RatFunc {
    let num = poly(rng, vars, 2, 3);
    if rng.random_bool(0.6) {
        RatFunc::from_poly(num)
    } else {
        let den = poly(rng, vars, 1, 2);
        RatFunc::new(num, den).expect("nonzero denominator")
    }
}

pub fn nonzero_ratfunc(rng: &mut ChaCha8Rng, vars: &[u32]) -> RatFunc {
    loop {
        let r = ratfunc(rng, vars);
        if !r.is_zero() {
            return r;
        }
    }
}

/// Nonzero operator of total order exactly `order` over `Q(x, y)`.
pub fn lpdo(rng: &mut ChaCha8Rng, field: &Arc<DiffField>, order: u32) -> Lpdo {
    let mut terms = Vec::new();
    for (i, j) in monomials_up_to(order) {
        let top = i + j == order;
        if rng.random_bool(if top { 0.6 } else { 0.4 }) {
            terms.push(((i, j), nonzero_ratfunc(rng, &[0, 1])));
        }
    }
    if !terms.iter().any(|((i, j), _)| i + j == order) {
        let i = rng.random_range(0..=order);
        terms.push(((i, order - i), nonzero_ratfunc(rng, &[0, 1])));
    }
    Lpdo::from_terms(field, terms)
}

/// Ordinary operator in `Dx` over `Q(x)` of degree exactly `deg`.
pub fn lodo(rng: &mut ChaCha8Rng, ring: &SkewRing<RatFuncField>, deg: usize) -> SkewPoly<RatFunc> {
    let mut coeffs = Vec::with_capacity(deg + 1);
    for k in 0..=deg {
        if k == deg || rng.random_bool(0.7) {
            coeffs.push(nonzero_ratfunc(rng, &[0]));
        } else {
            coeffs.push(RatFunc::zero());
        }
    }
    ring.from_coeffs(coeffs)
}

pub fn lodo_ring() -> SkewRing<RatFuncField> {
    SkewRing::new(RatFuncField::new(&DiffField::standard(), Axis::X))
}

/// Random `Dx Dy - A Dx - B Dy - C` with polynomial coefficients.
pub fn hyperbolic(rng: &mut ChaCha8Rng, field: &Arc<DiffField>) -> HyperbolicOp {
    let pick = |rng: &mut ChaCha8Rng| {
        if rng.random_bool(0.3) {
            RatFunc::zero()
        } else {
            RatFunc::from_poly(poly(rng, &[0, 1], 2, 2))
        }
    };
    let a = pick(rng);
    let b = pick(rng);
    let c = pick(rng);
    HyperbolicOp::new(field, a, b, c)
}

pub fn check(cond: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what())
    }
}

/// Field laws and canonical form of rational functions.
pub fn prop_field_laws(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let v = [0, 1];
    let (a, b, c) = (ratfunc(rng, &v), ratfunc(rng, &v), ratfunc(rng, &v));
    check(&(&a + &b) + &c == &a + &(&b + &c), || format!("add assoc {a:?} {b:?} {c:?}"))?;
    check(&a * &b == &b * &a, || "mul comm".into())?;
    check(&(&a * &b) * &c == &a * &(&b * &c), || "mul assoc".into())?;
    check(&a * &(&b + &c) == &(&a * &b) + &(&a * &c), || "distributivity".into())?;
    check((&a - &a.clone()).is_zero(), || "a - a".into())?;
    if !a.is_zero() {
        check((&a * &a.inv().unwrap()).is_one(), || "a * a^-1".into())?;
    }
    for r in [&a, &(&a * &b), &(&b + &c)] {
        let g = r.numer().gcd(r.denom());
        check(g.is_constant(), || format!("not reduced: {r:?}"))?;
        check(
            r.denom().leading_coeff() == Rational::from_integer(1.into()),
            || format!("denominator not monic: {r:?}"),
        )?;
        let again = RatFunc::new(r.numer().clone(), r.denom().clone()).unwrap();
        check(&again == r, || "canonical form not idempotent".into())?;
    }
    Ok(())
}

/// Ring laws of operator composition.
pub fn prop_ring_laws(rng: &mut ChaCha8Rng, f: &Arc<DiffField>) -> Result<(), String> {
    let a = { let o = rng.random_range(0..=2); lpdo(rng, f, o) };
    let b = { let o = rng.random_range(0..=2); lpdo(rng, f, o) };
    let c = { let o = rng.random_range(0..=1); lpdo(rng, f, o) };
    let ab_c = a.compose(&b).unwrap().compose(&c).unwrap();
    let a_bc = a.compose(&b.compose(&c).unwrap()).unwrap();
    check(ab_c == a_bc, || format!("compose assoc {a} | {b} | {c}"))?;
    let left = a.compose(&b.add(&c).unwrap()).unwrap();
    let right = a.compose(&b).unwrap().add(&a.compose(&c).unwrap()).unwrap();
    check(left == right, || format!("left distributivity {a} | {b} | {c}"))?;
    let left = b.add(&c).unwrap().compose(&a).unwrap();
    let right = b.compose(&a).unwrap().add(&c.compose(&a).unwrap()).unwrap();
    check(left == right, || "right distributivity".into())?;
    let one = Lpdo::one(f);
    check(a.compose(&one).unwrap() == a && one.compose(&a).unwrap() == a, || "identity".into())?;
    check(
        a.compose(&b).unwrap().order() == a.order() + b.order(),
        || "order is additive".into(),
    )
}

/// The adjoint is an involutive anti-automorphism.
pub fn prop_adjoint(rng: &mut ChaCha8Rng, f: &Arc<DiffField>) -> Result<(), String> {
    let a = { let o = rng.random_range(0..=2); lpdo(rng, f, o) };
    let b = { let o = rng.random_range(0..=2); lpdo(rng, f, o) };
    let lhs = a.compose(&b).unwrap().adjoint().unwrap();
    let rhs = b.adjoint().unwrap().compose(&a.adjoint().unwrap()).unwrap();
    check(lhs == rhs, || format!("(ab)* != b*a* for {a} | {b}"))?;
    check(a.adjoint().unwrap().adjoint().unwrap() == a, || format!("a** != a for {a}"))?;
    let sum = a.add(&b).unwrap().adjoint().unwrap();
    check(
        sum == a.adjoint().unwrap().add(&b.adjoint().unwrap()).unwrap(),
        || "adjoint not additive".into(),
    )
}

/// Printing then parsing returns the same value, and printing is stable.
pub fn prop_canonical_text(rng: &mut ChaCha8Rng, f: &Arc<DiffField>) -> Result<(), String> {
    let a = { let o = rng.random_range(0..=3); lpdo(rng, f, o) };
    let s = a.to_string();
    let back = parse_operator(&s, f).map_err(|e| format!("{s}: {e}"))?;
    check(back == a, || format!("round trip changed {s} into {back}"))?;
    check(back.to_string() == s, || format!("print not idempotent for {s}"))?;
    let r = ratfunc(rng, &[0, 1]);
    let s = f.format(&r);
    let back = parse_scalar(&s, f).map_err(|e| format!("{s}: {e}"))?;
    check(back == r, || format!("function round trip failed for {s}"))
}

/// Every division, GCD and LCM result re-expands.
pub fn prop_euclid_reexpansion(rng: &mut ChaCha8Rng, ring: &SkewRing<RatFuncField>) -> Result<(), String> {
    let shared = rng.random_bool(0.4);
    let top = if shared { 1 } else { 2 };
    let da = rng.random_range(1..=top);
    let db = rng.random_range(1..=top);
    let mut a = lodo(rng, ring, da);
    let mut b = lodo(rng, ring, db);
    if shared {
        let g = lodo(rng, ring, 1);
        a = ring.mul(&a, &g).unwrap();
        b = ring.mul(&b, &g).unwrap();
    }
    let (q, r) = ring.right_divide(&a, &b).unwrap();
    let re = ring.add(&ring.mul(&q, &b).unwrap(), &r).unwrap();
    check(re == a && r.degree() < b.degree(), || "right division".into())?;
    let (q, r) = ring.left_divide(&a, &b).unwrap();
    let re = ring.add(&ring.mul(&b, &q).unwrap(), &r).unwrap();
    check(re == a && r.degree() < b.degree(), || "left division".into())?;
    let e = ring.euclid(&a, &b).unwrap();
    let comb = ring
        .add(&ring.mul(&e.s, &a).unwrap(), &ring.mul(&e.t, &b).unwrap())
        .unwrap();
    check(comb == e.gcd, || "gcd = s a + t b".into())?;
    for x in [&a, &b] {
        let (_, r) = ring.right_divide(x, &e.gcd).unwrap();
        check(r.is_zero(), || "gcd does not right-divide".into())?;
    }
    check(
        ring.mul(&e.x, &a).unwrap() == e.lcm && ring.mul(&e.y, &b).unwrap() == e.lcm,
        || "lcm = x a = y b".into(),
    )?;
    check(
        e.lcm.leading().is_some_and(|c| ring.field.is_one(c)),
        || "lcm not monic".into(),
    )?;
    let le = ring.left_euclid_by_adjoint(&a, &b).unwrap();
    let comb = ring
        .add(&ring.mul(&a, &le.s).unwrap(), &ring.mul(&b, &le.t).unwrap())
        .unwrap();
    check(comb == le.gcd, || "lgcd = a s + b t".into())?;
    check(
        le.gcd.leading().is_some_and(|c| ring.field.is_one(c)),
        || "lgcd not monic".into(),
    )?;
    check(
        ring.mul(&a, &le.x).unwrap() == le.lcm && ring.mul(&b, &le.y).unwrap() == le.lcm,
        || "rlcm = a x = b y".into(),
    )?;
    if a.degree().unwrap() + b.degree().unwrap() <= 3 {
        let direct = ring.left_euclid(&a, &b).unwrap();
        check(
            direct.gcd == le.gcd && direct.lcm == le.lcm,
            || "left algorithm disagrees with the adjoint route".into(),
        )?;
    }
    Ok(())
}

/// `D^k ∘ c` by composition against the binomial expansion.
pub fn prop_leibniz(rng: &mut ChaCha8Rng, ring: &SkewRing<RatFuncField>) -> Result<(), String> {
    let k = rng.random_range(0..=4);
    let c = nonzero_ratfunc(rng, &[0]);
    let mut dk = ring.one();
    for _ in 0..k {
        dk = ring.mul(&ring.d(), &dk).unwrap();
    }
    let composed = ring.mul(&dk, &ring.constant(c.clone())).unwrap();
    check(
        composed == ring.leibniz_power(k, &c).unwrap(),
        || format!("Leibniz D^{k} o {c:?}"),
    )
}

pub struct SuiteOutcome {
    pub cases: usize,
    pub failures: Vec<String>,
}

/// All property families, `per_family` cases each.
pub fn run_property_suites(per_family: usize, salt: u64) -> SuiteOutcome {
    let f = DiffField::standard();
    let ring = lodo_ring();
    let mut out = SuiteOutcome {
        cases: 0,
        failures: Vec::new(),
    };
    let mut r = rng(salt);
    type Prop<'a> = Box<dyn Fn(&mut ChaCha8Rng) -> Result<(), String> + 'a>;
    let families: Vec<(&str, Prop)> = vec![
        ("field laws", Box::new(prop_field_laws)),
        ("ring laws", Box::new(|r: &mut ChaCha8Rng| prop_ring_laws(r, &f))),
        ("adjoint", Box::new(|r: &mut ChaCha8Rng| prop_adjoint(r, &f))),
        ("canonical text", Box::new(|r: &mut ChaCha8Rng| prop_canonical_text(r, &f))),
        ("euclid re-expansion", Box::new(|r: &mut ChaCha8Rng| prop_euclid_reexpansion(r, &ring))),
        ("leibniz", Box::new(|r: &mut ChaCha8Rng| prop_leibniz(r, &ring))),
    ];
    for (name, prop) in &families {
        for case in 0..per_family {
            out.cases += 1;
            if let Err(e) = prop(&mut r) {
                out.failures.push(format!("{name} #{case}: {e}"));
            }
        }
    }
    out
}
