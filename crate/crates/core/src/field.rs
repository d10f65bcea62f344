//! Differential fields of rational functions with two commuting derivations.
//!
//! A [`DiffField`] names its generators and records, for each generator `g`,
//! the rational functions `D_x g` and `D_y g`. Derivatives of arbitrary
//! [`RatFunc`]s follow from the chain rule. Tables may be filled lazily by a
//! [`LazyRule`]; the jet fields use this to introduce higher jet coordinates on
//! demand.

use std::collections::HashMap;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};
use crate::ratfunc::RatFunc;

/// One of the two independent variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axis {
    X,
    Y,
}

impl Axis {
    pub fn other(self) -> Axis {
        match self {
            Axis::X => Axis::Y,
            Axis::Y => Axis::X,
        }
    }

    fn slot(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axis::X => "x",
            Axis::Y => "y",
        })
    }
}

/// Supplies derivatives of generators that are not stored explicitly.
pub trait LazyRule: Send + Sync {
    fn derivative(&self, field: &DiffField, generator: u32, axis: Axis) -> Result<RatFunc>;
}

struct Tables {
    names: Vec<String>,
    index: HashMap<String, u32>,
    derivs: Vec<[Option<RatFunc>; 2]>,
}

pub struct DiffField {
    id: u64,
    tables: Mutex<Tables>,
    rule: Option<Box<dyn LazyRule>>,
}

static NEXT_FIELD_ID: AtomicU64 = AtomicU64::new(1);

impl fmt::Debug for DiffField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DiffField")
            .field("id", &self.id)
            .field("generators", &self.names())
            .finish()
    }
}

impl DiffField {
    /// `Q(x, y)` with the ordinary partial derivatives.
    pub fn standard() -> Arc<DiffField> {
        FieldBuilder::standard().build().expect("standard field is valid")
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn same_as(&self, other: &DiffField) -> bool {
        self.id == other.id
    }

    pub fn names(&self) -> Vec<String> {
        self.tables.lock().unwrap().names.clone()
    }

    pub fn len(&self) -> usize {
        self.tables.lock().unwrap().names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn name(&self, v: u32) -> Option<String> {
        self.tables.lock().unwrap().names.get(v as usize).cloned()
    }

    pub fn index_of(&self, name: &str) -> Option<u32> {
        self.tables.lock().unwrap().index.get(name).copied()
    }

    /// Index of `name`, appending it as a new generator with lazily computed
    /// derivatives if it does not exist yet.
    pub fn ensure_generator(&self, name: &str) -> u32 {
        let mut t = self.tables.lock().unwrap();
        if let Some(&v) = t.index.get(name) {
            return v;
        }
        let v = t.names.len() as u32;
        t.names.push(name.to_string());
        t.index.insert(name.to_string(), v);
        t.derivs.push([None, None]);
        v
    }

    pub fn generator(&self, name: &str) -> Option<RatFunc> {
        self.index_of(name).map(RatFunc::var)
    }

    pub fn x(&self) -> RatFunc {
        RatFunc::var(0)
    }

    pub fn y(&self) -> RatFunc {
        RatFunc::var(1)
    }

    /// `D_axis` of generator `v`.
    pub fn generator_derivative(&self, v: u32, axis: Axis) -> Result<RatFunc> {
        {
            let t = self.tables.lock().unwrap();
            match t.derivs.get(v as usize) {
                None => return Err(Error::UndeclaredGenerator(v)),
                Some(slots) => {
                    if let Some(d) = &slots[axis.slot()] {
                        return Ok(d.clone());
                    }
                }
            }
        }
        // the lock is released while the rule recurses into this field
        let rule = self
            .rule
            .as_ref()
            .ok_or(Error::UndeclaredGenerator(v))?;
        let d = rule.derivative(self, v, axis)?;
        let mut t = self.tables.lock().unwrap();
        t.derivs[v as usize][axis.slot()] = Some(d.clone());
        Ok(d)
    }

    /// Total derivative `D_axis a`.
    pub fn derive(&self, a: &RatFunc, axis: Axis) -> Result<RatFunc> {
        if let Some(v) = a.max_var() {
            if v as usize >= self.len() {
                return Err(Error::UndeclaredGenerator(v));
            }
        }
        let mut acc = RatFunc::zero();
        for v in a.vars() {
            let dv = self.generator_derivative(v, axis)?;
            if dv.is_zero() {
                continue;
            }
            acc = &acc + &(&a.partial(v) * &dv);
        }
        Ok(acc)
    }

    /// `D_x^i D_y^j a`.
    pub fn derive_n(&self, a: &RatFunc, i: u32, j: u32) -> Result<RatFunc> {
        let mut cur = a.clone();
        for _ in 0..i {
            cur = self.derive(&cur, Axis::X)?;
        }
        for _ in 0..j {
            cur = self.derive(&cur, Axis::Y)?;
        }
        Ok(cur)
    }

    /// Checks `D_x D_y g = D_y D_x g` on every generator currently declared.
    pub fn check_commutation(&self) -> Result<()> {
        let n = self.len() as u32;
        for v in 0..n {
            let g = RatFunc::var(v);
            let xy = self.derive(&self.derive(&g, Axis::Y)?, Axis::X)?;
            let yx = self.derive(&self.derive(&g, Axis::X)?, Axis::Y)?;
            if xy != yx {
                return Err(Error::NonCommuting(self.name(v).unwrap_or_default()));
            }
        }
        Ok(())
    }

    pub fn display<'a>(&'a self, a: &'a RatFunc) -> impl fmt::Display + 'a {
        Shown { field: self, value: a }
    }

    pub fn format(&self, a: &RatFunc) -> String {
        self.display(a).to_string()
    }
}

struct Shown<'a> {
    field: &'a DiffField,
    value: &'a RatFunc,
}

impl fmt::Display for Shown<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = self.field.names();
        self.value.fmt_with(f, &|v| {
            names
                .get(v as usize)
                .cloned()
                .unwrap_or_else(|| format!("g{v}"))
        })
    }
}

/// Derivative data for one generator while a field is being declared.
#[derive(Debug, Clone)]
pub enum GeneratorSpec {
    Explicit { dx: RatFunc, dy: RatFunc },
    Lazy,
}

/// Declares generators and derivation tables, then validates commutation.
pub struct FieldBuilder {
    names: Vec<String>,
    specs: Vec<GeneratorSpec>,
    rule: Option<Box<dyn LazyRule>>,
}

impl FieldBuilder {
    /// Starts with `x`, `y` and `D_x x = 1, D_y y = 1`.
    pub fn standard() -> Self {
        let mut b = FieldBuilder {
            names: Vec::new(),
            specs: Vec::new(),
            rule: None,
        };
        b.names.push("x".into());
        b.specs.push(GeneratorSpec::Explicit {
            dx: RatFunc::one(),
            dy: RatFunc::zero(),
        });
        b.names.push("y".into());
        b.specs.push(GeneratorSpec::Explicit {
            dx: RatFunc::zero(),
            dy: RatFunc::one(),
        });
        b
    }

    /// Names declared so far, in index order; a new generator gets index `names().len()`.
    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn generator(mut self, name: &str, spec: GeneratorSpec) -> Result<Self> {
        if self.names.iter().any(|n| n == name) {
            return Err(Error::FieldDeclaration(format!(
                "generator `{name}` declared twice"
            )));
        }
        if !is_identifier(name) || name == "Dx" || name == "Dy" {
            return Err(Error::FieldDeclaration(format!(
                "`{name}` is not a valid generator name"
            )));
        }
        self.names.push(name.to_string());
        self.specs.push(spec);
        Ok(self)
    }

    /// Replaces the derivative data of an already declared generator.
    pub fn set_derivatives(mut self, name: &str, spec: GeneratorSpec) -> Result<Self> {
        let i = self
            .names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::FieldDeclaration(format!("unknown generator `{name}`")))?;
        self.specs[i] = spec;
        Ok(self)
    }

    pub fn lazy_rule(mut self, rule: Box<dyn LazyRule>) -> Self {
        self.rule = Some(rule);
        self
    }

    pub fn build(self) -> Result<Arc<DiffField>> {
        let n = self.names.len() as u32;
        let mut derivs = Vec::with_capacity(self.specs.len());
        for spec in &self.specs {
            match spec {
                GeneratorSpec::Explicit { dx, dy } => {
                    for d in [dx, dy] {
                        if let Some(v) = d.max_var() {
                            if v >= n {
                                return Err(Error::UndeclaredGenerator(v));
                            }
                        }
                    }
                    derivs.push([Some(dx.clone()), Some(dy.clone())]);
                }
                GeneratorSpec::Lazy => {
                    if self.rule.is_none() {
                        return Err(Error::FieldDeclaration(
                            "lazy generator without a derivation rule".into(),
                        ));
                    }
                    derivs.push([None, None]);
                }
            }
        }
        let index = self
            .names
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i as u32))
            .collect();
        let field = DiffField {
            id: NEXT_FIELD_ID.fetch_add(1, Ordering::Relaxed),
            tables: Mutex::new(Tables {
                names: self.names,
                index,
                derivs,
            }),
            rule: self.rule,
        };
        field.check_commutation()?;
        Ok(Arc::new(field))
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_partials() {
        let f = DiffField::standard();
        let x = f.x();
        let y = f.y();
        let a = &(&x * &x) * &y;
        assert_eq!(f.derive(&a, Axis::X).unwrap(), &(&RatFunc::from_int(2) * &x) * &y);
        let b = (&x + &y).inv().unwrap();
        assert_eq!(f.derive(&b, Axis::Y).unwrap(), -(&x + &y).pow(-2).unwrap());
    }

    #[test]
    fn exponential_marker() {
        // E with D_x E = -E, D_y E = 0
        let e = RatFunc::var(2);
        let f = FieldBuilder::standard()
            .generator(
                "E",
                GeneratorSpec::Explicit {
                    dx: -&e,
                    dy: RatFunc::zero(),
                },
            )
            .unwrap()
            .build()
            .unwrap();
        let e2 = &e * &e;
        assert_eq!(f.derive(&e2, Axis::X).unwrap(), &RatFunc::from_int(-2) * &e2);
    }

    #[test]
    fn non_commuting_tables_are_rejected() {
        // D_x E = y, D_y E = 0 gives D_y D_x E = 1 but D_x D_y E = 0
        let r = FieldBuilder::standard()
            .generator(
                "E",
                GeneratorSpec::Explicit {
                    dx: RatFunc::var(1),
                    dy: RatFunc::zero(),
                },
            )
            .unwrap()
            .build();
        assert!(matches!(r, Err(Error::NonCommuting(_))));
    }

    #[test]
    fn undeclared_generator() {
        let f = DiffField::standard();
        assert_eq!(
            f.derive(&RatFunc::var(5), Axis::X),
            Err(Error::UndeclaredGenerator(5))
        );
    }
}
