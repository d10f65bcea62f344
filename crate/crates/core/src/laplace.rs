//! Laplace invariants and the Laplace cascade for hyperbolic operators
//! `L = Dx Dy - A Dx - B Dy - C`.
//!
//! `H = D_x A - A B - C` and `K = D_y B - A B - C` are the remainders of the
//! two incomplete factorizations
//! `L = (Dx - B)(Dy - A) + H = (Dy - A)(Dx - B) + K`.
//! The forward transformation `v1 = (Dy - A) v` turns `L v = 0` into
//! `L1 v1 = 0` with `H L1 = (Dy - A - D_y(H)/H)(Dx - B) + H` after left
//! normalization; the backward one is the mirror image.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{Axis, DiffField};
use crate::lpdo::Lpdo;
use crate::poly::Rational;
use crate::ratfunc::RatFunc;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Forward,
    Backward,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Forward => "forward",
            Direction::Backward => "backward",
        })
    }
}

/// `Dx Dy - A Dx - B Dy - C`.
#[derive(Clone, Debug)]
pub struct HyperbolicOp {
    pub field: Arc<DiffField>,
    pub a: RatFunc,
    pub b: RatFunc,
    pub c: RatFunc,
}

impl PartialEq for HyperbolicOp {
    fn eq(&self, other: &Self) -> bool {
        self.field.same_as(&other.field)
            && self.a == other.a
            && self.b == other.b
            && self.c == other.c
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LaplaceInvariants {
    pub h: RatFunc,
    pub k: RatFunc,
}

impl HyperbolicOp {
    pub fn new(field: &Arc<DiffField>, a: RatFunc, b: RatFunc, c: RatFunc) -> Self {
        HyperbolicOp {
            field: field.clone(),
            a,
            b,
            c,
        }
    }

    /// Wave operator `Dx Dy`.
    pub fn wave(field: &Arc<DiffField>) -> Self {
        Self::new(field, RatFunc::zero(), RatFunc::zero(), RatFunc::zero())
    }

    /// Extracts and left-normalizes a second-order operator whose only
    /// second-order term is `Dx Dy`.
    pub fn from_lpdo(l: &Lpdo) -> Result<Self> {
        for ((i, j), _) in l.terms() {
            if i + j > 2 || i == 2 || j == 2 {
                return Err(Error::NotHyperbolic(l.to_string()));
            }
        }
        let lead = l.coeff(1, 1);
        if lead.is_zero() {
            return Err(Error::NotHyperbolic(l.to_string()));
        }
        let inv = lead.inv()?;
        Ok(HyperbolicOp {
            field: l.field().clone(),
            a: -&(&l.coeff(1, 0) * &inv),
            b: -&(&l.coeff(0, 1) * &inv),
            c: -&(&l.coeff(0, 0) * &inv),
        })
    }

    pub fn to_lpdo(&self) -> Lpdo {
        Lpdo::from_terms(
            &self.field,
            [
                ((1, 1), RatFunc::one()),
                ((1, 0), -&self.a),
                ((0, 1), -&self.b),
                ((0, 0), -&self.c),
            ],
        )
    }

    /// `(H, K)`; both factorization identities are re-expanded and checked.
    pub fn invariants(&self) -> Result<LaplaceInvariants> {
        let f = &self.field;
        let ab = &self.a * &self.b;
        let h = &(&f.derive(&self.a, Axis::X)? - &ab) - &self.c;
        let k = &(&f.derive(&self.b, Axis::Y)? - &ab) - &self.c;
        let l = self.to_lpdo();
        let dx_b = Lpdo::dx(f).sub(&Lpdo::scalar(f, self.b.clone()))?;
        let dy_a = Lpdo::dy(f).sub(&Lpdo::scalar(f, self.a.clone()))?;
        let first = dx_b.compose(&dy_a)?.add(&Lpdo::scalar(f, h.clone()))?;
        let second = dy_a.compose(&dx_b)?.add(&Lpdo::scalar(f, k.clone()))?;
        if first != l || second != l {
            return Err(Error::Consistency(
                "Laplace factorization identity failed to re-expand".into(),
            ));
        }
        Ok(LaplaceInvariants { h, k })
    }

    /// Laplace transformation by operator composition. The result's
    /// invariants are checked against `K(L1) = H(L)` resp. `H(L-1) = K(L)`.
    pub fn laplace_step(&self, dir: Direction) -> Result<HyperbolicOp> {
        let inv = self.invariants()?;
        let f = &self.field;
        let next = match dir {
            Direction::Forward => {
                if inv.h.is_zero() {
                    return Err(Error::VanishingInvariant(dir));
                }
                // (Dy - A - H_y/H) ∘ (Dx - B) + H
                let shift = f.derive(&inv.h, Axis::Y)?.div(&inv.h)?;
                let left = Lpdo::dy(f).sub(&Lpdo::scalar(f, &self.a + &shift))?;
                let right = Lpdo::dx(f).sub(&Lpdo::scalar(f, self.b.clone()))?;
                let op = left.compose(&right)?.add(&Lpdo::scalar(f, inv.h.clone()))?;
                HyperbolicOp::from_lpdo(&op)?
            }
            Direction::Backward => {
                if inv.k.is_zero() {
                    return Err(Error::VanishingInvariant(dir));
                }
                // (Dx - B - K_x/K) ∘ (Dy - A) + K
                let shift = f.derive(&inv.k, Axis::X)?.div(&inv.k)?;
                let left = Lpdo::dx(f).sub(&Lpdo::scalar(f, &self.b + &shift))?;
                let right = Lpdo::dy(f).sub(&Lpdo::scalar(f, self.a.clone()))?;
                let op = left.compose(&right)?.add(&Lpdo::scalar(f, inv.k.clone()))?;
                HyperbolicOp::from_lpdo(&op)?
            }
        };
        let new_inv = next.invariants()?;
        let ok = match dir {
            Direction::Forward => new_inv.k == inv.h,
            Direction::Backward => new_inv.h == inv.k,
        };
        if !ok {
            return Err(Error::Consistency(format!(
                "invariant transfer failed after a {dir} step"
            )));
        }
        Ok(next)
    }

    /// Transformed coefficients from the closed formulas, without composing
    /// operators.
    pub fn laplace_step_formula(&self, dir: Direction) -> Result<HyperbolicOp> {
        let inv = self.invariants()?;
        let f = &self.field;
        Ok(match dir {
            Direction::Forward => {
                if inv.h.is_zero() {
                    return Err(Error::VanishingInvariant(dir));
                }
                let a1 = &self.a + &f.derive(&inv.h, Axis::Y)?.div(&inv.h)?;
                let c1 = &(&f.derive(&self.b, Axis::Y)? - &(&a1 * &self.b)) - &inv.h;
                HyperbolicOp::new(f, a1, self.b.clone(), c1)
            }
            Direction::Backward => {
                if inv.k.is_zero() {
                    return Err(Error::VanishingInvariant(dir));
                }
                let b1 = &self.b + &f.derive(&inv.k, Axis::X)?.div(&inv.k)?;
                let c1 = &(&f.derive(&self.a, Axis::X)? - &(&self.a * &b1)) - &inv.k;
                HyperbolicOp::new(f, self.a.clone(), b1, c1)
            }
        })
    }
}

/// One step of the scalar invariant recursion: from `(H, K)` of `L` to the
/// invariants of `L1` (forward) or `L-1` (backward).
pub fn scalar_step(
    field: &DiffField,
    inv: &LaplaceInvariants,
    dir: Direction,
) -> Result<LaplaceInvariants> {
    match dir {
        Direction::Forward => {
            let h = &inv.h;
            let log = field.derive(&field.derive(h, Axis::Y)?.div(h)?, Axis::X)?;
            let two_h = h.scale(&Rational::from_integer(2.into()));
            Ok(LaplaceInvariants {
                h: &(&two_h - &inv.k) + &log,
                k: h.clone(),
            })
        }
        Direction::Backward => {
            let k = &inv.k;
            let log = field.derive(&field.derive(k, Axis::X)?.div(k)?, Axis::Y)?;
            let two_k = k.scale(&Rational::from_integer(2.into()));
            Ok(LaplaceInvariants {
                h: k.clone(),
                k: &(&two_k - &inv.h) + &log,
            })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    /// The governing invariant vanished.
    Terminated,
    /// `bound` steps were taken without termination.
    BoundReached,
    /// A jet field hit its order cap.
    JetOrderCap(u32),
}

#[derive(Clone, Debug)]
pub struct CascadeReport {
    pub field: Arc<DiffField>,
    pub direction: Direction,
    /// `H_0, H_1, ...` (forward) or `K_0, K_-1, ...` (backward).
    pub invariant_sequence: Vec<RatFunc>,
    pub terminated: bool,
    pub steps: u32,
    pub bound: u32,
    pub stop: StopReason,
}

impl CascadeReport {
    pub fn invariant_strings(&self) -> Vec<String> {
        self.invariant_sequence
            .iter()
            .map(|h| self.field.format(h))
            .collect()
    }
}

impl fmt::Display for CascadeReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.direction {
            Direction::Forward => "H",
            Direction::Backward => "K",
        };
        for (i, h) in self.invariant_strings().iter().enumerate() {
            let idx = match self.direction {
                Direction::Forward => i as i64,
                Direction::Backward => -(i as i64),
            };
            writeln!(f, "{name}[{idx}] = {h}")?;
        }
        match self.stop {
            StopReason::Terminated => write!(f, "{}: terminated at step {}", self.direction, self.steps),
            StopReason::BoundReached => write!(
                f,
                "{}: not terminated within bound {}",
                self.direction, self.bound
            ),
            StopReason::JetOrderCap(cap) => write!(
                f,
                "{}: bound exceeded (jet order cap {cap}) after {} steps",
                self.direction, self.steps
            ),
        }
    }
}

fn governing(inv: &LaplaceInvariants, dir: Direction) -> &RatFunc {
    match dir {
        Direction::Forward => &inv.h,
        Direction::Backward => &inv.k,
    }
}

/// Iterates the Laplace transformation while the governing invariant is
/// nonzero and fewer than `bound` steps were taken. With `dual_check` the
/// scalar recursion runs alongside and every invariant must agree.
pub fn cascade_checked(
    op: &HyperbolicOp,
    dir: Direction,
    bound: u32,
    dual_check: bool,
) -> Result<CascadeReport> {
    let mut report = CascadeReport {
        field: op.field.clone(),
        direction: dir,
        invariant_sequence: Vec::new(),
        terminated: false,
        steps: 0,
        bound,
        stop: StopReason::BoundReached,
    };
    let run = |report: &mut CascadeReport| -> Result<()> {
        let mut cur = op.clone();
        let mut inv = cur.invariants()?;
        let mut scalar = inv.clone();
        report.invariant_sequence.push(governing(&inv, dir).clone());
        loop {
            if governing(&inv, dir).is_zero() {
                report.terminated = true;
                report.stop = StopReason::Terminated;
                return Ok(());
            }
            if report.steps >= bound {
                return Ok(());
            }
            cur = cur.laplace_step(dir)?;
            inv = cur.invariants()?;
            if dual_check {
                scalar = scalar_step(&op.field, &scalar, dir)?;
                if scalar != inv {
                    return Err(Error::Consistency(format!(
                        "scalar recursion disagrees with composition at {dir} step {}",
                        report.steps + 1
                    )));
                }
            }
            report.steps += 1;
            report.invariant_sequence.push(governing(&inv, dir).clone());
        }
    };
    match run(&mut report) {
        Ok(()) => Ok(report),
        Err(Error::JetOrderExceeded(cap)) => {
            report.terminated = false;
            report.stop = StopReason::JetOrderCap(cap);
            Ok(report)
        }
        Err(e) => Err(e),
    }
}

pub fn cascade(op: &HyperbolicOp, dir: Direction, bound: u32) -> Result<CascadeReport> {
    cascade_checked(op, dir, bound, false)
}

/// Cascade computed by the scalar recursion only.
pub fn scalar_cascade(op: &HyperbolicOp, dir: Direction, bound: u32) -> Result<Vec<RatFunc>> {
    let mut inv = op.invariants()?;
    let mut seq = vec![governing(&inv, dir).clone()];
    let mut steps = 0;
    while !governing(&inv, dir).is_zero() && steps < bound {
        inv = scalar_step(&op.field, &inv, dir)?;
        seq.push(governing(&inv, dir).clone());
        steps += 1;
    }
    Ok(seq)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Integrable,
    /// Some cascade did not terminate within the bound; this is not a proof
    /// of non-integrability.
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Integrable => "integrable",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Clone, Debug)]
pub struct DarbouxReport {
    pub verdict: Verdict,
    pub forward: CascadeReport,
    pub backward: CascadeReport,
}

impl DarbouxReport {
    /// `(forward steps, backward steps)`.
    pub fn steps(&self) -> (u32, u32) {
        (self.forward.steps, self.backward.steps)
    }
}

impl fmt::Display for DarbouxReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.forward)?;
        writeln!(f, "{}", self.backward)?;
        match self.verdict {
            Verdict::Integrable => {
                let (a, b) = self.steps();
                write!(f, "integrable ({a},{b})")
            }
            Verdict::Inconclusive => write!(f, "inconclusive"),
        }
    }
}

pub fn darboux_checked(op: &HyperbolicOp, bound: u32, dual_check: bool) -> Result<DarbouxReport> {
    let forward = cascade_checked(op, Direction::Forward, bound, dual_check)?;
    let backward = cascade_checked(op, Direction::Backward, bound, dual_check)?;
    let verdict = if forward.terminated && backward.terminated {
        Verdict::Integrable
    } else {
        Verdict::Inconclusive
    };
    Ok(DarbouxReport {
        verdict,
        forward,
        backward,
    })
}

/// Both cascades; integrable iff both terminate within `bound`.
pub fn darboux_linear(op: &HyperbolicOp, bound: u32) -> Result<DarbouxReport> {
    darboux_checked(op, bound, false)
}

pub const DEFAULT_BOUND: u32 = 10;
