//! The `lpdo` command line: operand input, dispatch, text and JSON reports.
//!
//! [`run`] never panics on user input; every failure becomes an exit status
//! and a message (or an error object with `--json`).

use std::io::Read;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use lpdo_core::comult::{common_left_multiples, common_right_multiples, divisor_couple};
use lpdo_core::error::Pos;
use lpdo_core::jet::{parse_jet_name, JetLayout, Pde, DEFAULT_JET_CAP, U, UX, UY};
use lpdo_core::landau::Landau;
use lpdo_core::laplace::{
    cascade_checked, darboux_checked, CascadeReport, DarbouxReport, Direction, HyperbolicOp,
    StopReason, Verdict, DEFAULT_BOUND,
};
use lpdo_core::skew::EuclidData;
use lpdo_core::skewfrac::{ideal_coordinates, project, ProjectedOp};
use lpdo_core::syntax::{eval, parse, parse_field_spec, Expr};
use lpdo_core::{Axis, DiffField, Error, Lpdo, RatFunc, RatFuncField, SkewPoly, SkewRing};

#[derive(Parser, Debug)]
#[command(
    name = "lpdo",
    version,
    about = "Exact algebra of linear partial differential operators over Q(x, y)"
)]
struct Cli {
    /// Print a JSON document instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// `qxy`, `qxy;NAME:Dx=expr,Dy=expr;...`, or a jet field `jet:liouville`,
    /// `jet:wave`, `jet:uxuy`.
    #[arg(long, global = true, default_value = "qxy")]
    field: String,

    /// Read operands from this file, one per line, when none are given.
    #[arg(long, global = true)]
    file: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Operator arithmetic; division, gcd and lcm need operators in one derivation.
    Op {
        #[arg(value_enum)]
        action: OpAction,
        /// gcd/lcm: greatest common left divisor and least common right multiple.
        #[arg(long)]
        left: bool,
        exprs: Vec<String>,
    },
    /// Basis of the common left multiples of total order <= N.
    Comult {
        #[arg(long)]
        order: u32,
        /// Common right multiples instead.
        #[arg(long)]
        right: bool,
        exprs: Vec<String>,
    },
    /// Divisor couple search for operands M L R up to total order N.
    Couple {
        #[arg(long)]
        order: u32,
        exprs: Vec<String>,
    },
    /// Rewrite as a skew polynomial in D_axis over Ore fractions in the other derivation.
    Project {
        #[arg(long, value_enum)]
        axis: AxisArg,
        exprs: Vec<String>,
    },
    /// Monic generator of the projected left ideal spanned by the operands.
    Coords {
        #[arg(long, value_enum, default_value = "x")]
        axis: AxisArg,
        exprs: Vec<String>,
    },
    /// Laplace invariants and transformations of Dx*Dy - a*Dx - b*Dy - c.
    Laplace {
        #[command(subcommand)]
        action: LaplaceCmd,
    },
    /// Darboux integrability through both Laplace cascades.
    Darboux(DarbouxArgs),
    /// Worked examples.
    Demo {
        #[arg(value_enum)]
        name: DemoName,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum OpAction {
    Mul,
    Divr,
    Divl,
    Gcd,
    Lcm,
    Adjoint,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum AxisArg {
    X,
    Y,
}

impl From<AxisArg> for Axis {
    fn from(a: AxisArg) -> Axis {
        match a {
            AxisArg::X => Axis::X,
            AxisArg::Y => Axis::Y,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum DirArg {
    Forward,
    Backward,
}

impl From<DirArg> for Direction {
    fn from(d: DirArg) -> Direction {
        match d {
            DirArg::Forward => Direction::Forward,
            DirArg::Backward => Direction::Backward,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Dirs {
    Forward,
    Backward,
    Both,
}

#[derive(Subcommand, Debug)]
enum LaplaceCmd {
    /// H and K.
    Invariants { exprs: Vec<String> },
    /// One Laplace transformation.
    Step {
        #[arg(long, value_enum, default_value = "forward")]
        dir: DirArg,
        exprs: Vec<String>,
    },
    /// Iterate until the governing invariant vanishes or K steps were taken.
    Cascade {
        #[arg(long, default_value_t = DEFAULT_BOUND)]
        bound: u32,
        #[arg(long, value_enum, default_value = "both")]
        dir: Dirs,
        exprs: Vec<String>,
    },
}

#[derive(Args, Debug)]
struct DarbouxArgs {
    /// Hyperbolic operator Dx*Dy - a*Dx - b*Dy - c; `-` reads it from the input.
    #[arg(long, conflicts_with_all = ["pde", "corpus"])]
    linear: Option<String>,
    /// Right-hand side f of u_xy = f in x, y, u, u_x, u_y and extensions.
    #[arg(long, conflicts_with = "corpus")]
    pde: Option<String>,
    /// Equation corpus: JSON records {name, f, extensions, expected}.
    #[arg(long)]
    corpus: Option<PathBuf>,
    /// Extension generator `NAME:exp(expr)`; repeatable.
    #[arg(long = "ext")]
    ext: Vec<String>,
    #[arg(long, default_value_t = DEFAULT_BOUND)]
    bound: u32,
    #[arg(long, default_value_t = DEFAULT_JET_CAP)]
    jet_cap: u32,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum DemoName {
    Landau,
}

/// Exit status, standard output and standard error of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Serialize, Deserialize, Debug, Clone, Copy, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    NotFound,
    Inconclusive,
    Mismatch,
    Failed,
}

impl Status {
    fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::NotFound | Status::Inconclusive | Status::Mismatch => 1,
            Status::Failed => 3,
        }
    }
}

/// Top-level JSON document of a successful run.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct Envelope {
    pub command: String,
    pub field: String,
    pub status: Status,
    pub result: serde_json::Value,
    /// SHA-256 of the compact serialization of `result`.
    pub sha256: String,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ErrorDoc {
    pub error: ErrorBody,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ErrorBody {
    pub code: String,
    pub message: String,
    pub line: Option<usize>,
    pub column: Option<usize>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct OperatorJson {
    pub text: String,
    pub order: u32,
    pub terms: Vec<TermJson>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct TermJson {
    pub dx: u32,
    pub dy: u32,
    pub coeff: String,
}

/// Coefficient `den⁻¹ ∘ num` of `D_axis^power`; `den` and `num` are in the
/// other derivation.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct FractionJson {
    pub power: usize,
    pub den: OperatorJson,
    pub num: OperatorJson,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ProjectedJson {
    pub axis: String,
    pub degree: Option<usize>,
    pub display: String,
    pub coefficients: Vec<FractionJson>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct FamilyJson {
    pub product: OperatorJson,
    pub cofactors: Vec<OperatorJson>,
    /// SHA-256 of the product text after re-expansion.
    pub checksum: String,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct BasisJson {
    pub side: String,
    pub order: u32,
    pub dimension: usize,
    pub operators: Vec<OperatorJson>,
    pub basis: Vec<FamilyJson>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct CascadeJson {
    pub direction: String,
    pub symbol: String,
    pub invariants: Vec<String>,
    pub terminated: bool,
    pub steps: u32,
    pub bound: u32,
    pub stop: String,
    pub dual_route: bool,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct DarbouxJson {
    pub verdict: String,
    pub steps: Option<[u32; 2]>,
    pub forward: CascadeJson,
    pub backward: CascadeJson,
    pub equation: Option<String>,
    pub linearization: Option<OperatorJson>,
    pub commutation: Option<bool>,
}

/// One line of an equation corpus.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct CorpusRecord {
    pub name: String,
    pub f: String,
    #[serde(default)]
    pub extensions: Vec<String>,
    /// `integrable (a,b)` or `inconclusive`.
    pub expected: String,
}

#[derive(Debug)]
enum Failure {
    Core(Error),
    Usage(String),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

type Res<T> = std::result::Result<T, Failure>;

impl Failure {
    fn code(&self) -> &'static str {
        match self {
            Failure::Usage(_) => "usage",
            Failure::Io(_) => "io",
            Failure::Core(e) => match e {
                Error::DivisionByZero => "division_by_zero",
                Error::UndeclaredGenerator(_) => "undeclared_generator",
                Error::FieldMismatch => "field_mismatch",
                Error::FieldDeclaration(_) => "field_declaration",
                Error::NonCommuting(_) => "non_commuting",
                Error::Syntax { .. } => "syntax",
                Error::UnknownIdentifier { .. } => "unknown_identifier",
                Error::NotScalar => "not_scalar",
                Error::NotUnivariate(_) => "not_univariate",
                Error::OrderBound { .. } => "order_bound",
                Error::ZeroOperator => "zero_operator",
                Error::NotHyperbolic(_) => "not_hyperbolic",
                Error::VanishingInvariant(_) => "vanishing_invariant",
                Error::JetOrderExceeded(_) => "jet_order_exceeded",
                Error::HighOrderJet(_) => "high_order_jet",
                Error::BoundExceeded(_) => "bound_exceeded",
                Error::Consistency(_) => "consistency",
            },
        }
    }

    fn exit_code(&self) -> i32 {
        match self {
            Failure::Core(
                Error::VanishingInvariant(_) | Error::JetOrderExceeded(_) | Error::BoundExceeded(_),
            ) => 1,
            Failure::Core(Error::Consistency(_)) => 3,
            _ => 2,
        }
    }

    fn pos(&self) -> Option<Pos> {
        match self {
            Failure::Core(Error::Syntax { pos, .. } | Error::UnknownIdentifier { pos, .. }) => {
                Some(*pos)
            }
            _ => None,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Core(e) => e.to_string(),
            Failure::Usage(m) | Failure::Io(m) => m.clone(),
        }
    }
}

/// Moves a parse position from an operand to the input it was read from.
fn shift(e: Error, first_line: usize) -> Error {
    let mv = |p: Pos| Pos {
        line: p.line + first_line - 1,
        column: p.column,
    };
    match e {
        Error::Syntax { pos, message } => Error::Syntax {
            pos: mv(pos),
            message,
        },
        Error::UnknownIdentifier { name, pos } => Error::UnknownIdentifier { name, pos: mv(pos) },
        e => e,
    }
}

struct Report {
    status: Status,
    text: String,
    result: serde_json::Value,
}

impl Report {
    fn new(status: Status, text: String, result: impl Serialize) -> Res<Report> {
        let result = serde_json::to_value(result).map_err(|e| Failure::Io(e.to_string()))?;
        Ok(Report {
            status,
            text,
            result,
        })
    }
}

/// Lowercase hex SHA-256 of `text`.
pub fn sha256_hex(text: &str) -> String {
    Sha256::digest(text.as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// An operand and the input line it starts on.
struct Operand {
    text: String,
    line: usize,
}

struct Ctx {
    field: Arc<DiffField>,
    pde: Option<Pde>,
}

fn named_equation(name: &str) -> Res<Pde> {
    let v = RatFunc::var;
    Ok(match name {
        "liouville" => Pde::liouville(),
        "wave" => Pde::rational("wave", RatFunc::zero())?,
        "uxuy" => Pde::rational("uxuy", (&v(UX) * &v(UY)).div(&v(U))?)?,
        other => {
            return Err(Error::FieldDeclaration(format!(
                "unknown jet field `{other}` (known: liouville, wave, uxuy)"
            ))
            .into())
        }
    })
}

fn identifiers<'a>(e: &'a Expr, out: &mut Vec<(&'a str, Pos)>) {
    match e {
        Expr::Ident(n, p) => out.push((n, *p)),
        Expr::Neg(a) | Expr::Pow(a, _) => identifiers(a, out),
        Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b, _) => {
            identifiers(a, out);
            identifiers(b, out);
        }
        Expr::Int(_) | Expr::Dx | Expr::Dy => {}
    }
}

impl Ctx {
    fn new(spec: &str) -> Res<Ctx> {
        let (field, pde) = match spec.strip_prefix("jet:") {
            Some(name) => {
                let pde = named_equation(name)?;
                (pde.field.clone(), Some(pde))
            }
            None => (parse_field_spec(spec)?, None),
        };
        Ok(Ctx {
            field,
            pde,
        })
    }

    fn operator(&self, op: &Operand) -> Res<Lpdo> {
        let e = parse(&op.text).map_err(|e| shift(e, op.line))?;
        if let Some(pde) = &self.pde {
            let mut ids = Vec::new();
            identifiers(&e, &mut ids);
            for (name, _) in ids {
                if let Some((m, n)) = parse_jet_name(name) {
                    pde.jet(m, n)?;
                }
            }
        }
        let v = eval(&e, &self.field).map_err(|e| shift(e, op.line))?;
        Ok(v.into_lpdo(&self.field))
    }

    fn operators(&self, ops: &[Operand]) -> Res<Vec<Lpdo>> {
        ops.iter().map(|o| self.operator(o)).collect()
    }

    fn format(&self, c: &RatFunc) -> String {
        self.field.format(c)
    }
}

fn operands(given: &[String], file: Option<&Path>, stdin: &mut dyn Read) -> Res<Vec<Operand>> {
    if !given.is_empty() {
        return Ok(given
            .iter()
            .map(|t| Operand {
                text: t.clone(),
                line: 1,
            })
            .collect());
    }
    let text = match file {
        Some(p) => std::fs::read_to_string(p)
            .map_err(|e| Failure::Io(format!("cannot read {}: {e}", p.display())))?,
        None => {
            let mut s = String::new();
            stdin
                .read_to_string(&mut s)
                .map_err(|e| Failure::Io(format!("cannot read standard input: {e}")))?;
            s
        }
    };
    Ok(text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .map(|(i, l)| Operand {
            text: l.to_string(),
            line: i + 1,
        })
        .collect())
}

fn arity(ops: &[Operand], what: &str, min: usize, max: Option<usize>) -> Res<()> {
    let n = ops.len();
    let ok = n >= min && max.is_none_or(|m| n <= m);
    if ok {
        return Ok(());
    }
    let want = match max {
        Some(m) if m == min => format!("{min}"),
        Some(m) => format!("{min} to {m}"),
        None => format!("at least {min}"),
    };
    Err(Failure::Usage(format!("{what} takes {want} operands, got {n}")))
}

pub fn operator_json(l: &Lpdo) -> OperatorJson {
    let f = l.field();
    OperatorJson {
        text: l.to_string(),
        order: l.order(),
        terms: l
            .sorted_terms()
            .into_iter()
            .map(|((i, j), c)| TermJson {
                dx: i,
                dy: j,
                coeff: f.format(c),
            })
            .collect(),
    }
}

fn projected_json(p: &ProjectedOp) -> ProjectedJson {
    let field = p.ring.field.field().clone();
    let inner = p.ring.field.inner();
    ProjectedJson {
        axis: p.axis().to_string(),
        degree: p.degree(),
        display: p.to_string(),
        coefficients: p
            .poly
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.num.is_zero())
            .map(|(k, c)| FractionJson {
                power: k,
                den: operator_json(&Lpdo::from_skew(&field, &c.den, inner)),
                num: operator_json(&Lpdo::from_skew(&field, &c.num, inner)),
            })
            .collect(),
    }
}

fn cascade_json(r: &CascadeReport, dual: bool) -> CascadeJson {
    CascadeJson {
        direction: r.direction.to_string(),
        symbol: match r.direction {
            Direction::Forward => "H".into(),
            Direction::Backward => "K".into(),
        },
        invariants: r.invariant_strings(),
        terminated: r.terminated,
        steps: r.steps,
        bound: r.bound,
        stop: match r.stop {
            StopReason::Terminated => "terminated".into(),
            StopReason::BoundReached => "bound_reached".into(),
            StopReason::JetOrderCap(_) => "jet_order_cap".into(),
        },
        dual_route: dual,
    }
}

fn verdict_line(r: &DarbouxReport) -> String {
    match r.verdict {
        Verdict::Integrable => {
            let (a, b) = r.steps();
            format!("integrable ({a},{b})")
        }
        Verdict::Inconclusive => "inconclusive".into(),
    }
}

fn darboux_json(r: &DarbouxReport) -> DarbouxJson {
    DarbouxJson {
        verdict: r.verdict.to_string(),
        steps: match r.verdict {
            Verdict::Integrable => Some([r.forward.steps, r.backward.steps]),
            Verdict::Inconclusive => None,
        },
        forward: cascade_json(&r.forward, true),
        backward: cascade_json(&r.backward, true),
        equation: None,
        linearization: None,
        commutation: None,
    }
}

/// The one derivation all operands are polynomials in.
fn common_axis(ops: &[Lpdo], action: &str) -> Res<Axis> {
    for axis in [Axis::X, Axis::Y] {
        if ops.iter().all(|l| l.is_univariate(axis)) {
            return Ok(axis);
        }
    }
    Err(Error::NotUnivariate(format!(
        "`{action}` is defined on univariate skew polynomials, so every operand must use Dx alone \
         or Dy alone; for operators in both Dx and Dy use `comult`"
    ))
    .into())
}

fn cmd_op(ctx: &Ctx, action: OpAction, left: bool, ops: &[Operand]) -> Res<Report> {
    let name = format!("{action:?}").to_lowercase();
    match action {
        OpAction::Mul => arity(ops, "op mul", 2, None)?,
        OpAction::Adjoint => arity(ops, "op adjoint", 1, Some(1))?,
        _ => arity(ops, &format!("op {name}"), 2, Some(2))?,
    }
    let ls = ctx.operators(ops)?;
    let single = |key: &str, l: Lpdo| -> Res<Report> {
        let mut m = serde_json::Map::new();
        m.insert(
            key.into(),
            serde_json::to_value(operator_json(&l)).map_err(|e| Failure::Io(e.to_string()))?,
        );
        Report::new(Status::Ok, l.to_string(), m)
    };
    match action {
        OpAction::Mul => {
            let mut acc = ls[0].clone();
            for l in &ls[1..] {
                acc = acc.compose(l)?;
            }
            single("product", acc)
        }
        OpAction::Adjoint => single("adjoint", ls[0].adjoint()?),
        _ => {
            let axis = common_axis(&ls, &name)?;
            let ring = SkewRing::new(RatFuncField::new(&ctx.field, axis));
            let a = ls[0].to_skew(axis)?;
            let b = ls[1].to_skew(axis)?;
            let back = |p: &SkewPoly<RatFunc>| Lpdo::from_skew(&ctx.field, p, axis);
            match action {
                OpAction::Divr | OpAction::Divl => {
                    let (q, r) = if action == OpAction::Divr {
                        ring.right_divide(&a, &b)?
                    } else {
                        ring.left_divide(&a, &b)?
                    };
                    let (q, r) = (back(&q), back(&r));
                    let text = format!("quotient: {q}\nremainder: {r}");
                    Report::new(
                        Status::Ok,
                        text,
                        serde_json::json!({
                            "side": if action == OpAction::Divr { "right" } else { "left" },
                            "quotient": operator_json(&q),
                            "remainder": operator_json(&r),
                        }),
                    )
                }
                _ => {
                    let e: EuclidData<RatFunc> = if left {
                        ring.left_euclid_by_adjoint(&a, &b)?
                    } else {
                        ring.euclid(&a, &b)?
                    };
                    let (key, p) = match action {
                        OpAction::Gcd => ("gcd", back(&e.gcd)),
                        _ => ("lcm", back(&e.lcm)),
                    };
                    let side = if left { "left" } else { "right" };
                    Report::new(
                        Status::Ok,
                        p.to_string(),
                        serde_json::json!({ "euclid": side, key: operator_json(&p) }),
                    )
                }
            }
        }
    }
}

fn cmd_comult(ctx: &Ctx, order: u32, right: bool, ops: &[Operand]) -> Res<Report> {
    arity(ops, "comult", 1, None)?;
    let ls = ctx.operators(ops)?;
    let basis = if right {
        common_right_multiples(&ls, order)?
    } else {
        common_left_multiples(&ls, order)?
    };
    let side = if right { "right" } else { "left" };
    let mut text = format!(
        "common {side} multiples of order <= {order}: dimension {}",
        basis.dimension()
    );
    let mut families = Vec::new();
    for (k, fam) in basis.families.iter().enumerate() {
        for (m, l) in fam.cofactors.iter().zip(&ls) {
            let again = if right { l.compose(m)? } else { m.compose(l)? };
            if again != fam.product {
                return Err(Error::Consistency(format!("family {} does not re-expand", k + 1)).into());
            }
        }
        let product = fam.product.to_string();
        text.push_str(&format!("\n[{}] {product}", k + 1));
        for (i, m) in fam.cofactors.iter().enumerate() {
            text.push_str(&format!("\n    M{} = {m}", i + 1));
        }
        families.push(FamilyJson {
            checksum: sha256_hex(&product),
            product: operator_json(&fam.product),
            cofactors: fam.cofactors.iter().map(operator_json).collect(),
        });
    }
    let status = if basis.dimension() == 0 {
        Status::NotFound
    } else {
        Status::Ok
    };
    Report::new(
        status,
        text,
        BasisJson {
            side: side.into(),
            order,
            dimension: basis.dimension(),
            operators: ls.iter().map(operator_json).collect(),
            basis: families,
        },
    )
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn cmd_couple(ctx: &Ctx, order: u32, ops: &[Operand]) -> Res<Report> {
    arity(ops, "couple (M L R)", 3, Some(3))?;
    let ls = ctx.operators(ops)?;
    let (m, l, r) = (&ls[0], &ls[1], &ls[2]);
    let s = divisor_couple(m, l, r, order)?;
    let t = &s.triviality;
    let mut text = format!(
        "ord L > 0: {}\nord R > 0: {}\nL not of the form M∘P: {}\nR not of the form K∘M: {}\nnontrivial: {}",
        yes(t.l_positive_order),
        yes(t.r_positive_order),
        yes(t.l_not_right_multiple),
        yes(t.r_not_left_multiple),
        yes(t.is_nontrivial()),
    );
    let witness = match &s.witness {
        Some(w) => {
            if w.x.compose(m)? != w.y.compose(r)? || w.x.compose(l)? != w.y.compose(&w.q)? {
                return Err(Error::Consistency("couple witness does not re-expand".into()).into());
            }
            text.push_str(&format!(
                "\nwitness at order {}:\nX = {}\nY = {}\nQ = {}",
                w.bound, w.x, w.y, w.q
            ));
            serde_json::json!({
                "order": w.bound,
                "x": operator_json(&w.x),
                "y": operator_json(&w.y),
                "q": operator_json(&w.q),
            })
        }
        None => {
            text.push_str(&format!("\nno witness up to order {}", s.searched_to));
            serde_json::Value::Null
        }
    };
    let status = if s.witness.is_some() {
        Status::Ok
    } else {
        Status::NotFound
    };
    Report::new(
        status,
        text,
        serde_json::json!({
            "searched_to": s.searched_to,
            "triviality": {
                "l_positive_order": t.l_positive_order,
                "r_positive_order": t.r_positive_order,
                "l_not_right_multiple": t.l_not_right_multiple,
                "r_not_left_multiple": t.r_not_left_multiple,
                "nontrivial": t.is_nontrivial(),
            },
            "witness": witness,
        }),
    )
}

fn cmd_project(ctx: &Ctx, axis: Axis, ops: &[Operand]) -> Res<Report> {
    arity(ops, "project", 1, None)?;
    let ls = ctx.operators(ops)?;
    let ps = ls.iter().map(|l| project(l, axis)).collect::<Result<Vec<_>, _>>()?;
    let text = ps.iter().map(|p| p.to_string()).collect::<Vec<_>>().join("\n");
    let json: Vec<ProjectedJson> = ps.iter().map(projected_json).collect();
    Report::new(Status::Ok, text, serde_json::json!({ "projections": json }))
}

fn cmd_coords(ctx: &Ctx, axis: Axis, ops: &[Operand]) -> Res<Report> {
    arity(ops, "coords", 1, None)?;
    let ls = ctx.operators(ops)?;
    let p = ideal_coordinates(&ls, axis)?;
    let deg = p.degree().map_or("none".to_string(), |d| d.to_string());
    let text = format!("D{axis}-degree {deg}\n{p}");
    Report::new(Status::Ok, text, serde_json::json!({ "generator": projected_json(&p) }))
}

fn hyperbolic(ctx: &Ctx, ops: &[Operand], what: &str) -> Res<HyperbolicOp> {
    arity(ops, what, 1, Some(1))?;
    Ok(HyperbolicOp::from_lpdo(&ctx.operator(&ops[0])?)?)
}

fn cmd_laplace(ctx: &Ctx, cmd: &LaplaceCmd, ops: &[Operand]) -> Res<Report> {
    match cmd {
        LaplaceCmd::Invariants { .. } => {
            let op = hyperbolic(ctx, ops, "laplace invariants")?;
            let inv = op.invariants()?;
            let (h, k) = (ctx.format(&inv.h), ctx.format(&inv.k));
            Report::new(
                Status::Ok,
                format!("H = {h}\nK = {k}"),
                serde_json::json!({
                    "operator": operator_json(&op.to_lpdo()),
                    "h": h,
                    "k": k,
                }),
            )
        }
        LaplaceCmd::Step { dir, .. } => {
            let op = hyperbolic(ctx, ops, "laplace step")?;
            let dir: Direction = (*dir).into();
            let next = op.laplace_step(dir)?;
            let inv = next.invariants()?;
            let (h, k) = (ctx.format(&inv.h), ctx.format(&inv.k));
            let l = next.to_lpdo();
            Report::new(
                Status::Ok,
                format!("{l}\nH = {h}\nK = {k}"),
                serde_json::json!({
                    "direction": dir.to_string(),
                    "operator": operator_json(&l),
                    "h": h,
                    "k": k,
                }),
            )
        }
        LaplaceCmd::Cascade { bound, dir, .. } => {
            let op = hyperbolic(ctx, ops, "laplace cascade")?;
            let dirs: &[Direction] = match dir {
                Dirs::Forward => &[Direction::Forward],
                Dirs::Backward => &[Direction::Backward],
                Dirs::Both => &[Direction::Forward, Direction::Backward],
            };
            let reports = dirs
                .iter()
                .map(|&d| cascade_checked(&op, d, *bound, true))
                .collect::<Result<Vec<_>, _>>()?;
            let text = reports
                .iter()
                .map(|r| r.to_string())
                .collect::<Vec<_>>()
                .join("\n");
            let status = if reports.iter().all(|r| r.terminated) {
                Status::Ok
            } else {
                Status::Inconclusive
            };
            let json: Vec<CascadeJson> = reports.iter().map(|r| cascade_json(r, true)).collect();
            Report::new(status, text, serde_json::json!({ "cascades": json }))
        }
    }
}

/// `NAME:exp(expr)`.
fn split_extension(spec: &str) -> Res<(String, String)> {
    let bad = || {
        Failure::Core(Error::FieldDeclaration(format!(
            "expected `NAME:exp(expr)`, found `{spec}`"
        )))
    };
    let (name, rest) = spec.split_once(':').ok_or_else(bad)?;
    let inner = rest
        .trim()
        .strip_prefix("exp(")
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(bad)?;
    Ok((name.trim().to_string(), inner.to_string()))
}

fn build_pde(name: &str, f_text: &str, exts: &[String], cap: u32) -> Res<Pde> {
    let parts = exts
        .iter()
        .map(|e| split_extension(e))
        .collect::<Res<Vec<_>>>()?;
    let names: Vec<&str> = parts.iter().map(|(n, _)| n.as_str()).collect();
    let layout = JetLayout::new(&names)?;
    let preview = layout.preview_field()?;
    let f_expr = parse(f_text)?;
    let mut ids = Vec::new();
    identifiers(&f_expr, &mut ids);
    for (id, _) in ids {
        let high = match parse_jet_name(id) {
            Some((m, n)) => m + n >= 2,
            None => id.starts_with("u_"),
        };
        if high {
            return Err(Error::HighOrderJet(id.to_string()).into());
        }
    }
    let f = eval(&f_expr, &preview)?.into_scalar()?;
    let exps = parts
        .iter()
        .map(|(_, g)| Ok(eval(&parse(g)?, &preview)?.into_scalar()?))
        .collect::<Res<Vec<_>>>()?;
    Ok(Pde::new(name, &layout, f, exps, cap)?)
}

fn check_pde(pde: &Pde, bound: u32) -> Res<(DarbouxReport, DarbouxJson, String)> {
    let report = pde.darboux_check_dual(bound)?;
    let commutes = pde.field.check_commutation().is_ok();
    let lin = pde.linearize().to_lpdo();
    let eq = pde.field.format(&pde.f);
    let text = format!(
        "equation: u_xy = {eq}\nlinearization: {lin}\ncommutation of total derivatives: {}\n{report}",
        if commutes { "ok" } else { "FAILED" }
    );
    let mut json = darboux_json(&report);
    json.equation = Some(eq);
    json.linearization = Some(operator_json(&lin));
    json.commutation = Some(commutes);
    Ok((report, json, text))
}

fn read_corpus(path: &Path) -> Res<Vec<CorpusRecord>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Io(format!("cannot read {}: {e}", path.display())))?;
    let bad = |e: serde_json::Error| Failure::Usage(format!("corpus {}: {e}", path.display()));
    if text.trim_start().starts_with('[') {
        return serde_json::from_str(&text).map_err(bad);
    }
    text.lines()
        .filter(|l| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .map(|l| serde_json::from_str(l).map_err(bad))
        .collect()
}

fn cmd_darboux(ctx: &Ctx, a: &DarbouxArgs, stdin: &mut dyn Read, file: Option<&Path>) -> Res<Report> {
    if let Some(path) = &a.corpus {
        let records = read_corpus(path)?;
        let mut lines = Vec::new();
        let mut rows = Vec::new();
        let mut all = true;
        for rec in &records {
            let pde = build_pde(&rec.name, &rec.f, &rec.extensions, a.jet_cap)?;
            let (report, json, _) = check_pde(&pde, a.bound)?;
            let got = verdict_line(&report);
            let pass = got == rec.expected && json.commutation == Some(true);
            all &= pass;
            lines.push(format!(
                "[{}] {}: u_xy = {}: {got}",
                if pass { "PASS" } else { "FAIL" },
                rec.name,
                json.equation.as_deref().unwrap_or_default(),
            ));
            rows.push(serde_json::json!({
                "name": rec.name,
                "expected": rec.expected,
                "pass": pass,
                "report": json,
            }));
        }
        let status = if all { Status::Ok } else { Status::Mismatch };
        return Report::new(status, lines.join("\n"), serde_json::json!({ "records": rows }));
    }
    if !a.ext.is_empty() && a.pde.is_none() {
        return Err(Failure::Usage("--ext only applies to --pde".into()));
    }
    let (report, json, text) = match (&a.pde, &a.linear) {
        (Some(f), _) => check_pde(&build_pde("cli", f, &a.ext, a.jet_cap)?, a.bound)?,
        (None, Some(op)) => {
            let given: Vec<String> = if op == "-" { Vec::new() } else { vec![op.clone()] };
            let ops = operands(&given, file, stdin)?;
            let op = hyperbolic(ctx, &ops, "darboux --linear")?;
            let report = darboux_checked(&op, a.bound, true)?;
            let text = report.to_string();
            let mut json = darboux_json(&report);
            json.linearization = Some(operator_json(&op.to_lpdo()));
            (report, json, text)
        }
        (None, None) => return Err(Failure::Usage("one of --linear, --pde, --corpus is required".into())),
    };
    let status = match report.verdict {
        Verdict::Integrable => Status::Ok,
        Verdict::Inconclusive => Status::Inconclusive,
    };
    Report::new(status, text, json)
}

fn cmd_demo_landau() -> Res<Report> {
    let l = Landau::new();
    let mut checks: Vec<(String, bool)> = Vec::new();
    let qqp = l.q.compose(&l.q.compose(&l.p)?)?;
    let rq = l.r.compose(&l.q)?;
    checks.push((format!("Q∘Q∘P = R∘Q = {rq}"), qqp == rq));
    let pq = [l.p.clone(), l.q.clone()];
    let d2 = common_left_multiples(&pq, 2)?.dimension();
    checks.push((format!("common left multiples of P, Q of order 2: dimension {d2}"), d2 == 0));
    let b3 = common_left_multiples(&pq, 3)?;
    checks.push((
        format!("common left multiples of P, Q of order 3: dimension {}", b3.dimension()),
        b3.dimension() == 2,
    ));
    checks.push((format!("L31 = {} lies in the span", l.l31), b3.spans(&l.l31)?));
    checks.push((format!("L32 = {} lies in the span", l.l32), b3.spans(&l.l32)?));
    let a = l.a31.compose(&l.p)?;
    let b = l.b31.compose(&l.q)?;
    checks.push(("L31 = a31∘P = b31∘Q".into(), a == b && a == l.l31));
    let p31 = project(&l.l31, Axis::X)?;
    let p32 = project(&l.l32, Axis::X)?;
    let (_, rem) = p31.ring.right_divide(&p32.poly, &p31.poly)?;
    checks.push(("P_x(L31) right-divides P_x(L32)".into(), rem.is_zero()));
    let coords = ideal_coordinates(&[l.l31.clone(), l.l32.clone()], Axis::X)?;
    checks.push((
        format!("I_x of {{L31, L32}} has Dx-degree {:?}", coords.degree().unwrap_or(0)),
        coords.degree() == Some(2),
    ));
    let text = checks
        .iter()
        .map(|(t, ok)| format!("[{}] {t}", if *ok { "PASS" } else { "FAIL" }))
        .collect::<Vec<_>>()
        .join("\n");
    let all = checks.iter().all(|c| c.1);
    let json: Vec<_> = checks
        .iter()
        .map(|(t, ok)| serde_json::json!({ "check": t, "pass": ok }))
        .collect();
    let status = if all { Status::Ok } else { Status::Failed };
    Report::new(status, text, serde_json::json!({ "checks": json }))
}

fn command_name(c: &Command) -> String {
    match c {
        Command::Op { action, .. } => format!("op {}", format!("{action:?}").to_lowercase()),
        Command::Comult { .. } => "comult".into(),
        Command::Couple { .. } => "couple".into(),
        Command::Project { .. } => "project".into(),
        Command::Coords { .. } => "coords".into(),
        Command::Laplace { action } => match action {
            LaplaceCmd::Invariants { .. } => "laplace invariants".into(),
            LaplaceCmd::Step { .. } => "laplace step".into(),
            LaplaceCmd::Cascade { .. } => "laplace cascade".into(),
        },
        Command::Darboux(_) => "darboux".into(),
        Command::Demo { .. } => "demo landau".into(),
    }
}

fn dispatch(cli: &Cli, stdin: &mut dyn Read) -> Res<Report> {
    let file = cli.file.as_deref();
    if let Command::Demo { name: DemoName::Landau } = cli.command {
        return cmd_demo_landau();
    }
    let ctx = Ctx::new(&cli.field)?;
    let mut read = |given: &[String]| operands(given, file, stdin);
    match &cli.command {
        Command::Op {
            action,
            left,
            exprs,
        } => cmd_op(&ctx, *action, *left, &read(exprs)?),
        Command::Comult {
            order,
            right,
            exprs,
        } => cmd_comult(&ctx, *order, *right, &read(exprs)?),
        Command::Couple { order, exprs } => cmd_couple(&ctx, *order, &read(exprs)?),
        Command::Project { axis, exprs } => cmd_project(&ctx, (*axis).into(), &read(exprs)?),
        Command::Coords { axis, exprs } => cmd_coords(&ctx, (*axis).into(), &read(exprs)?),
        Command::Laplace { action } => {
            let exprs = match action {
                LaplaceCmd::Invariants { exprs }
                | LaplaceCmd::Step { exprs, .. }
                | LaplaceCmd::Cascade { exprs, .. } => exprs,
            };
            let ops = read(exprs)?;
            cmd_laplace(&ctx, action, &ops)
        }
        Command::Darboux(a) => cmd_darboux(&ctx, a, stdin, file),
        Command::Demo { .. } => unreachable!("handled above"),
    }
}

fn failure(json: bool, f: Failure) -> Outcome {
    let pos = f.pos();
    if json {
        let doc = ErrorDoc {
            error: ErrorBody {
                code: f.code().into(),
                message: f.message(),
                line: pos.map(|p| p.line),
                column: pos.map(|p| p.column),
            },
        };
        Outcome {
            code: f.exit_code(),
            stdout: serde_json::to_string_pretty(&doc).unwrap_or_default() + "\n",
            stderr: String::new(),
        }
    } else {
        Outcome {
            code: f.exit_code(),
            stdout: String::new(),
            stderr: format!("error[{}]: {}\n", f.code(), f.message()),
        }
    }
}

/// Runs one invocation. `args` includes the program name; `stdin` is read
/// only when a command needs operands and none were given.
pub fn run<I, T>(args: I, stdin: &mut dyn Read) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args: Vec<std::ffi::OsString> = args.into_iter().map(Into::into).collect();
    let json = args.iter().any(|a| a == "--json");
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Outcome {
                    code: 0,
                    stdout: e.render().to_string(),
                    stderr: String::new(),
                },
                _ if json => failure(true, Failure::Usage(e.render().to_string().trim().to_string())),
                _ => Outcome {
                    code: 2,
                    stdout: String::new(),
                    stderr: e.render().to_string(),
                },
            };
        }
    };
    match dispatch(&cli, stdin) {
        Ok(r) => {
            let code = r.status.exit_code();
            let stdout = if cli.json {
                let compact = serde_json::to_string(&r.result).unwrap_or_default();
                let env = Envelope {
                    command: command_name(&cli.command),
                    field: cli.field.clone(),
                    status: r.status,
                    sha256: sha256_hex(&compact),
                    result: r.result,
                };
                serde_json::to_string_pretty(&env).unwrap_or_default() + "\n"
            } else {
                r.text + "\n"
            };
            Outcome {
                code,
                stdout,
                stderr: String::new(),
            }
        }
        Err(f) => failure(cli.json, f),
    }
}
