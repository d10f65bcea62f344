//! Jet fields for `u_xy = f(x, y, u, u_x, u_y)`.
//!
//! Generators are `x, y, u, u_x, u_y`, declared extensions, and the pure jet
//! coordinates `u_xx, u_xxx, ..., u_yy, ...` added on demand. Mixed
//! derivatives never appear: `D_y u_(m,0) = D_x^(m-1) f` and
//! `D_x u_(0,n) = D_y^(n-1) f`. An extension `E = exp(g)` has
//! `D E = D(g) E` and formal partials `dE/dw = dg/dw E`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{Axis, DiffField, FieldBuilder, GeneratorSpec, LazyRule};
use crate::laplace::{darboux_checked, DarbouxReport, HyperbolicOp};
use crate::ratfunc::RatFunc;

pub const X: u32 = 0;
pub const Y: u32 = 1;
pub const U: u32 = 2;
pub const UX: u32 = 3;
pub const UY: u32 = 4;
const FIRST_EXT: u32 = 5;

pub const DEFAULT_JET_CAP: u32 = 12;

/// Name of `u_(m,0)` or `u_(0,n)`.
pub fn jet_name(m: u32, n: u32) -> String {
    assert!(m == 0 || n == 0, "mixed jet coordinates are eliminated");
    let mut s = String::from("u");
    if m + n > 0 {
        s.push('_');
        s.push_str(&"x".repeat(m as usize));
        s.push_str(&"y".repeat(n as usize));
    }
    s
}

/// Inverse of [`jet_name`]; mixed names are rejected.
pub fn parse_jet_name(s: &str) -> Option<(u32, u32)> {
    if s == "u" {
        return Some((0, 0));
    }
    let rest = s.strip_prefix("u_")?;
    if rest.is_empty() {
        return None;
    }
    let len = rest.len() as u32;
    if rest.bytes().all(|b| b == b'x') {
        Some((len, 0))
    } else if rest.bytes().all(|b| b == b'y') {
        Some((0, len))
    } else {
        None
    }
}

/// Generator names and indices of a jet field before it is built.
#[derive(Clone, Debug)]
pub struct JetLayout {
    ext_names: Vec<String>,
}

impl JetLayout {
    pub fn new(ext_names: &[&str]) -> Result<Self> {
        for n in ext_names {
            if parse_jet_name(n).is_some() || n.starts_with("u_") || *n == "x" || *n == "y" {
                return Err(Error::FieldDeclaration(format!(
                    "extension name `{n}` collides with a jet coordinate"
                )));
            }
        }
        Ok(JetLayout {
            ext_names: ext_names.iter().map(|s| s.to_string()).collect(),
        })
    }

    pub fn ext(&self, i: usize) -> u32 {
        FIRST_EXT + i as u32
    }

    pub fn names(&self) -> Vec<String> {
        let mut v: Vec<String> = ["x", "y", "u", "u_x", "u_y"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        v.extend(self.ext_names.iter().cloned());
        v
    }

    /// Field with the same names and indices and trivial derivatives, used to
    /// parse the right-hand side before the real field exists.
    pub fn preview_field(&self) -> Result<Arc<DiffField>> {
        let mut b = FieldBuilder::standard();
        for n in &self.names()[2..] {
            b = b.generator(
                n,
                GeneratorSpec::Explicit {
                    dx: RatFunc::zero(),
                    dy: RatFunc::zero(),
                },
            )?;
        }
        b.build()
    }
}

struct JetRule {
    f: RatFunc,
    exts: Vec<(u32, RatFunc)>,
    cap: u32,
}

impl JetRule {
    fn coordinate(&self, field: &DiffField, m: u32, n: u32) -> Result<u32> {
        if m + n > self.cap {
            return Err(Error::JetOrderExceeded(self.cap));
        }
        Ok(field.ensure_generator(&jet_name(m, n)))
    }
}

impl LazyRule for JetRule {
    fn derivative(&self, field: &DiffField, v: u32, axis: Axis) -> Result<RatFunc> {
        if let Some((_, g)) = self.exts.iter().find(|(i, _)| *i == v) {
            return Ok(&field.derive(g, axis)? * &RatFunc::var(v));
        }
        let name = field.name(v).ok_or(Error::UndeclaredGenerator(v))?;
        let (m, n) = parse_jet_name(&name).ok_or(Error::UndeclaredGenerator(v))?;
        match (axis, m, n) {
            (Axis::X, _, 0) => Ok(RatFunc::var(self.coordinate(field, m + 1, 0)?)),
            (Axis::Y, 0, _) => Ok(RatFunc::var(self.coordinate(field, 0, n + 1)?)),
            // D_y u_(m,0) = D_x (D_y u_(m-1,0))
            (Axis::Y, _, 0) => {
                if m == 1 {
                    return Ok(self.f.clone());
                }
                let prev = self.coordinate(field, m - 1, 0)?;
                field.derive(&field.generator_derivative(prev, Axis::Y)?, Axis::X)
            }
            (Axis::X, 0, _) => {
                if n == 1 {
                    return Ok(self.f.clone());
                }
                let prev = self.coordinate(field, 0, n - 1)?;
                field.derive(&field.generator_derivative(prev, Axis::X)?, Axis::Y)
            }
            _ => unreachable!("mixed jet coordinate"),
        }
    }
}

/// The equation `u_xy = f` over its jet field.
#[derive(Clone, Debug)]
pub struct Pde {
    pub name: String,
    pub field: Arc<DiffField>,
    pub f: RatFunc,
    /// `(generator, g)` for every extension `E = exp(g)`.
    pub extensions: Vec<(u32, RatFunc)>,
    pub cap: u32,
}

impl Pde {
    /// `f` and the exponents are expressed in the indices of `layout`.
    /// Exponents may use `x, y, u, u_x, u_y`; `f` may also use the extensions.
    pub fn new(
        name: &str,
        layout: &JetLayout,
        f: RatFunc,
        exponents: Vec<RatFunc>,
        cap: u32,
    ) -> Result<Pde> {
        let names = layout.names();
        if exponents.len() != layout.ext_names.len() {
            return Err(Error::FieldDeclaration(
                "one exponent is needed per extension".into(),
            ));
        }
        if let Some(v) = f.max_var() {
            if v as usize >= names.len() {
                return Err(Error::HighOrderJet(format!("#{v}")));
            }
        }
        for g in &exponents {
            if let Some(v) = g.max_var() {
                if v > UY {
                    let n = names.get(v as usize).cloned().unwrap_or_default();
                    return Err(Error::FieldDeclaration(format!(
                        "extension exponent may only use x, y, u, u_x, u_y, found `{n}`"
                    )));
                }
            }
        }
        let exts: Vec<(u32, RatFunc)> = exponents
            .into_iter()
            .enumerate()
            .map(|(i, g)| (layout.ext(i), g))
            .collect();
        let mut b = FieldBuilder::standard();
        for n in &names[2..] {
            b = b.generator(n, GeneratorSpec::Lazy)?;
        }
        let field = b
            .lazy_rule(Box::new(JetRule {
                f: f.clone(),
                exts: exts.clone(),
                cap,
            }))
            .build()?;
        Ok(Pde {
            name: name.to_string(),
            field,
            f,
            extensions: exts,
            cap,
        })
    }

    /// `u_xy = e^u`, the Liouville equation.
    pub fn liouville() -> Pde {
        let layout = JetLayout::new(&["E"]).expect("valid layout");
        Pde::new(
            "liouville",
            &layout,
            RatFunc::var(layout.ext(0)),
            vec![RatFunc::var(U)],
            DEFAULT_JET_CAP,
        )
        .expect("valid equation")
    }

    /// Equation without extensions.
    pub fn rational(name: &str, f: RatFunc) -> Result<Pde> {
        Pde::new(name, &JetLayout::new(&[])?, f, Vec::new(), DEFAULT_JET_CAP)
    }

    /// `u_(m,0)` or `u_(0,n)`, introducing the generator if needed.
    pub fn jet(&self, m: u32, n: u32) -> Result<RatFunc> {
        if m > 0 && n > 0 {
            return Err(Error::FieldDeclaration(
                "mixed jet coordinates are eliminated by the equation".into(),
            ));
        }
        if m + n > self.cap {
            return Err(Error::JetOrderExceeded(self.cap));
        }
        Ok(RatFunc::var(self.field.ensure_generator(&jet_name(m, n))))
    }

    pub fn total_derivative(&self, a: &RatFunc, axis: Axis) -> Result<RatFunc> {
        self.field.derive(a, axis)
    }

    /// `da/dw` with the declared chain rule through the extensions.
    pub fn formal_partial(&self, a: &RatFunc, w: u32) -> RatFunc {
        let mut acc = a.partial(w);
        for (e, g) in &self.extensions {
            let dg = g.partial(w);
            if dg.is_zero() {
                continue;
            }
            let da = a.partial(*e);
            if da.is_zero() {
                continue;
            }
            acc = &acc + &(&(&da * &dg) * &RatFunc::var(*e));
        }
        acc
    }

    /// `v_xy = A v_x + B v_y + C v` with `A = df/du_x`, `B = df/du_y`,
    /// `C = df/du`.
    pub fn linearize(&self) -> HyperbolicOp {
        HyperbolicOp::new(
            &self.field,
            self.formal_partial(&self.f, UX),
            self.formal_partial(&self.f, UY),
            self.formal_partial(&self.f, U),
        )
    }

    /// Laplace cascades of the linearization, both directions.
    pub fn darboux_check(&self, bound: u32) -> Result<DarbouxReport> {
        darboux_checked(&self.linearize(), bound, false)
    }

    /// As [`Pde::darboux_check`], with the scalar recursion run alongside.
    pub fn darboux_check_dual(&self, bound: u32) -> Result<DarbouxReport> {
        darboux_checked(&self.linearize(), bound, true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laplace::Verdict;

    #[test]
    fn names_round_trip() {
        for (m, n) in [(0, 0), (1, 0), (0, 1), (3, 0), (0, 5)] {
            assert_eq!(parse_jet_name(&jet_name(m, n)), Some((m, n)));
        }
        assert_eq!(parse_jet_name("u_xy"), None);
        assert_eq!(parse_jet_name("v"), None);
    }

    #[test]
    fn liouville_reduction() {
        let p = Pde::liouville();
        let e = RatFunc::var(5);
        assert_eq!(p.total_derivative(&RatFunc::var(UY), Axis::X).unwrap(), e);
        assert_eq!(p.total_derivative(&RatFunc::var(UX), Axis::Y).unwrap(), e);
        let g = &RatFunc::var(UX) * &RatFunc::var(UY);
        let xy = p
            .total_derivative(&p.total_derivative(&g, Axis::Y).unwrap(), Axis::X)
            .unwrap();
        let yx = p
            .total_derivative(&p.total_derivative(&g, Axis::X).unwrap(), Axis::Y)
            .unwrap();
        assert_eq!(xy, yx);
    }

    #[test]
    fn liouville_is_integrable() {
        let p = Pde::liouville();
        let lin = p.linearize();
        assert!(lin.a.is_zero() && lin.b.is_zero());
        assert_eq!(lin.c, RatFunc::var(5));
        let r = p.darboux_check_dual(10).unwrap();
        assert_eq!(r.verdict, Verdict::Integrable);
        assert_eq!(r.steps(), (1, 1));
    }

    #[test]
    fn jet_cap_is_reported() {
        let layout = JetLayout::new(&[]).unwrap();
        let p = Pde::new("w", &layout, RatFunc::zero(), vec![], 3).unwrap();
        assert!(p.jet(3, 0).is_ok());
        assert_eq!(p.jet(4, 0), Err(Error::JetOrderExceeded(3)));
    }
}
