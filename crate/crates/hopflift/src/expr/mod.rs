//! Minimal computer-algebra core: immutable scalar expression trees with
//! parsing, complex evaluation, exact symbolic differentiation and
//! best-effort simplification.
//!
//! Expressions are reference-counted and carry a precomputed structural hash
//! and node count, so cloning is cheap, structural equality is fast and
//! subtree sharing is free. `sqrt(u)` is normalized to `u^(1/2)`; rational
//! power exponents are stored exactly as integer numerator/denominator.

use std::collections::BTreeSet;
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use num_rational::Rational64;

mod diff;
mod eval;
mod parse;
mod print;
mod simplify;

pub use diff::differentiate;
pub use eval::{Binding, EvalError};
pub use parse::{parse_expression, parse_with_constants, ParseError};
pub use simplify::{simplify, Domain};

// re-exported so downstream crates share the same complex type
pub use num_complex;

/// Rational exponent of a power node, stored exactly.
pub type Exponent = Rational64;

/// The function set. `sqrt` is not listed because it is represented as a
/// rational power; the set is closed under differentiation (`coth'` is
/// expressed through `sinh`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Function {
    Exp,
    Ln,
    Sin,
    Cos,
    Sinh,
    Cosh,
    Tanh,
    Coth,
}

impl Function {
    pub fn name(self) -> &'static str {
        match self {
            Function::Exp => "exp",
            Function::Ln => "ln",
            Function::Sin => "sin",
            Function::Cos => "cos",
            Function::Sinh => "sinh",
            Function::Cosh => "cosh",
            Function::Tanh => "tanh",
            Function::Coth => "coth",
        }
    }

    pub fn from_name(name: &str) -> Option<Function> {
        Some(match name {
            "exp" => Function::Exp,
            "ln" => Function::Ln,
            "sin" => Function::Sin,
            "cos" => Function::Cos,
            "sinh" => Function::Sinh,
            "cosh" => Function::Cosh,
            "tanh" => Function::Tanh,
            "coth" => Function::Coth,
            _ => return None,
        })
    }
}

/// Expression node kinds.
///
/// Invariants maintained by the constructors:
/// - `Number` values are finite and non-negative (negative constants are
///   `Negate(Number)`), so printed literals always re-parse to the same value;
/// - `Sum`/`Product` have at least two children;
/// - `Power` exponents are exact rationals.
#[derive(Debug)]
pub enum Kind {
    Number(f64),
    Variable(String),
    Constant(String),
    Sum(Vec<Expr>),
    Product(Vec<Expr>),
    Quotient(Expr, Expr),
    Power(Expr, Exponent),
    Negate(Expr),
    Apply(Function, Expr),
}

struct Node {
    kind: Kind,
    count: u64,
    hash: u64,
}

/// An immutable scalar expression tree.
#[derive(Clone)]
pub struct Expr {
    node: Arc<Node>,
}

const FNV_OFFSET: u64 = 0xcbf29ce484222325;
const FNV_PRIME: u64 = 0x100000001b3;

fn fnv(h: u64, v: u64) -> u64 {
    (h ^ v).wrapping_mul(FNV_PRIME)
}

fn fnv_str(mut h: u64, s: &str) -> u64 {
    for b in s.as_bytes() {
        h = fnv(h, u64::from(*b));
    }
    h
}

impl Expr {
    fn new(kind: Kind) -> Expr {
        let mut h = FNV_OFFSET;
        let mut count = 1u64;
        match &kind {
            Kind::Number(v) => {
                h = fnv(h, 1);
                h = fnv(h, v.to_bits());
            }
            Kind::Variable(name) => {
                h = fnv(h, 2);
                h = fnv_str(h, name);
            }
            Kind::Constant(name) => {
                h = fnv(h, 3);
                h = fnv_str(h, name);
            }
            Kind::Sum(children) => {
                h = fnv(h, 4);
                for c in children {
                    h = fnv(h, c.hash());
                    count += c.node_count();
                }
            }
            Kind::Product(children) => {
                h = fnv(h, 5);
                for c in children {
                    h = fnv(h, c.hash());
                    count += c.node_count();
                }
            }
            Kind::Quotient(a, b) => {
                h = fnv(h, 6);
                h = fnv(h, a.hash());
                h = fnv(h, b.hash());
                count += a.node_count() + b.node_count();
            }
            Kind::Power(base, exp) => {
                h = fnv(h, 7);
                h = fnv(h, base.hash());
                h = fnv(h, *exp.numer() as u64);
                h = fnv(h, *exp.denom() as u64);
                count += base.node_count();
            }
            Kind::Negate(a) => {
                h = fnv(h, 8);
                h = fnv(h, a.hash());
                count += a.node_count();
            }
            Kind::Apply(f, a) => {
                h = fnv(h, 9);
                h = fnv(h, *f as u64);
                h = fnv(h, a.hash());
                count += a.node_count();
            }
        }
        Expr {
            node: Arc::new(Node { kind, count, hash: h }),
        }
    }

    pub fn kind(&self) -> &Kind {
        &self.node.kind
    }

    /// Number of tree nodes (shared subtrees counted once per occurrence).
    pub fn node_count(&self) -> u64 {
        self.node.count
    }

    fn hash(&self) -> u64 {
        self.node.hash
    }

    // ---- constructors -------------------------------------------------

    /// Finite numeric constant. Negative values are normalized to a negation
    /// of a non-negative literal.
    pub fn number(v: f64) -> Expr {
        assert!(v.is_finite(), "numeric constants must be finite, got {v}");
        if v < 0.0 {
            Expr::negate(Expr::new(Kind::Number(-v)))
        } else if v == 0.0 {
            // normalize -0.0
            Expr::new(Kind::Number(0.0))
        } else {
            Expr::new(Kind::Number(v))
        }
    }

    pub fn zero() -> Expr {
        Expr::number(0.0)
    }

    pub fn one() -> Expr {
        Expr::number(1.0)
    }

    pub fn variable(name: impl Into<String>) -> Expr {
        Expr::new(Kind::Variable(name.into()))
    }

    pub fn constant_named(name: impl Into<String>) -> Expr {
        Expr::new(Kind::Constant(name.into()))
    }

    /// n-ary sum; flattens nested sums, drops zeros.
    pub fn sum(children: Vec<Expr>) -> Expr {
        let mut flat = Vec::with_capacity(children.len());
        for c in children {
            if c.is_zero() {
                continue;
            }
            match c.kind() {
                Kind::Sum(_) => {
                    if let Kind::Sum(inner) = &c.node.kind {
                        flat.extend(inner.iter().cloned());
                    }
                }
                _ => flat.push(c),
            }
        }
        match flat.len() {
            0 => Expr::zero(),
            1 => flat.pop().unwrap(),
            _ => Expr::new(Kind::Sum(flat)),
        }
    }

    /// n-ary product; flattens nested products, drops ones, annihilates on zero.
    pub fn product(children: Vec<Expr>) -> Expr {
        let mut flat = Vec::with_capacity(children.len());
        for c in children {
            if c.is_zero() {
                return Expr::zero();
            }
            if c.is_one() {
                continue;
            }
            match c.kind() {
                Kind::Product(_) => {
                    if let Kind::Product(inner) = &c.node.kind {
                        flat.extend(inner.iter().cloned());
                    }
                }
                _ => flat.push(c),
            }
        }
        match flat.len() {
            0 => Expr::one(),
            1 => flat.pop().unwrap(),
            _ => Expr::new(Kind::Product(flat)),
        }
    }

    pub fn quotient(numer: Expr, denom: Expr) -> Expr {
        if numer.is_zero() || denom.is_one() {
            return numer;
        }
        Expr::new(Kind::Quotient(numer, denom))
    }

    pub fn power(base: Expr, exp: Exponent) -> Expr {
        if exp == Exponent::from_integer(0) {
            return Expr::one();
        }
        if exp == Exponent::from_integer(1) {
            return base;
        }
        if base.is_one() {
            return Expr::one();
        }
        if base.is_zero() && exp > Exponent::from_integer(0) {
            return Expr::zero();
        }
        Expr::new(Kind::Power(base, exp))
    }

    pub fn int_power(base: Expr, exp: i64) -> Expr {
        Expr::power(base, Exponent::from_integer(exp))
    }

    /// `sqrt(u)` as the rational power `u^(1/2)`.
    pub fn sqrt(arg: Expr) -> Expr {
        Expr::power(arg, Exponent::new(1, 2))
    }

    pub fn negate(arg: Expr) -> Expr {
        if arg.is_zero() {
            return arg;
        }
        if let Kind::Negate(inner) = arg.kind() {
            return inner.clone();
        }
        Expr::new(Kind::Negate(arg))
    }

    pub fn apply(f: Function, arg: Expr) -> Expr {
        Expr::new(Kind::Apply(f, arg))
    }

    // ---- predicates and small helpers ---------------------------------

    pub fn is_zero(&self) -> bool {
        matches!(self.kind(), Kind::Number(v) if *v == 0.0)
    }

    pub fn is_one(&self) -> bool {
        matches!(self.kind(), Kind::Number(v) if *v == 1.0)
    }

    /// Numeric value when the node is a literal (possibly negated).
    pub fn as_number(&self) -> Option<f64> {
        match self.kind() {
            Kind::Number(v) => Some(*v),
            Kind::Negate(inner) => match inner.kind() {
                Kind::Number(v) => Some(-*v),
                _ => None,
            },
            _ => None,
        }
    }

    /// All free identifiers: variables and named constants.
    pub fn free_identifiers(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_identifiers(&mut out, true, true);
        out
    }

    /// Free variables only (named constants excluded).
    pub fn free_variables(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_identifiers(&mut out, true, false);
        out
    }

    fn collect_identifiers(&self, out: &mut BTreeSet<String>, vars: bool, consts: bool) {
        match self.kind() {
            Kind::Variable(name) => {
                if vars {
                    out.insert(name.clone());
                }
            }
            Kind::Constant(name) => {
                if consts {
                    out.insert(name.clone());
                }
            }
            Kind::Number(_) => {}
            Kind::Sum(cs) | Kind::Product(cs) => {
                for c in cs {
                    c.collect_identifiers(out, vars, consts);
                }
            }
            Kind::Quotient(a, b) => {
                a.collect_identifiers(out, vars, consts);
                b.collect_identifiers(out, vars, consts);
            }
            Kind::Power(b, _) => b.collect_identifiers(out, vars, consts),
            Kind::Negate(a) => a.collect_identifiers(out, vars, consts),
            Kind::Apply(_, a) => a.collect_identifiers(out, vars, consts),
        }
    }

    /// Replace every occurrence of the identifier `name` (variable or named
    /// constant) by `replacement`.
    pub fn substitute(&self, name: &str, replacement: &Expr) -> Expr {
        let mut memo: HashMap<*const Node, Expr> = HashMap::new();
        self.substitute_memo(name, replacement, &mut memo)
    }

    fn substitute_memo(
        &self,
        name: &str,
        replacement: &Expr,
        memo: &mut HashMap<*const Node, Expr>,
    ) -> Expr {
        let key = Arc::as_ptr(&self.node);
        if let Some(hit) = memo.get(&key) {
            return hit.clone();
        }
        let out = match self.kind() {
            Kind::Variable(n) | Kind::Constant(n) if n == name => replacement.clone(),
            Kind::Number(_) | Kind::Variable(_) | Kind::Constant(_) => self.clone(),
            Kind::Sum(cs) => Expr::sum(
                cs.iter()
                    .map(|c| c.substitute_memo(name, replacement, memo))
                    .collect(),
            ),
            Kind::Product(cs) => Expr::product(
                cs.iter()
                    .map(|c| c.substitute_memo(name, replacement, memo))
                    .collect(),
            ),
            Kind::Quotient(a, b) => Expr::quotient(
                a.substitute_memo(name, replacement, memo),
                b.substitute_memo(name, replacement, memo),
            ),
            Kind::Power(b, e) => Expr::power(b.substitute_memo(name, replacement, memo), *e),
            Kind::Negate(a) => Expr::negate(a.substitute_memo(name, replacement, memo)),
            Kind::Apply(f, a) => Expr::apply(*f, a.substitute_memo(name, replacement, memo)),
        };
        memo.insert(key, out.clone());
        out
    }

    /// Exact symbolic derivative with respect to `var`.
    pub fn differentiate(&self, var: &str) -> Expr {
        diff::differentiate(self, var)
    }

    /// Value-preserving simplification on `domain`.
    pub fn simplified(&self, domain: Domain) -> Expr {
        simplify::simplify(self, domain)
    }
}

impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        if Arc::ptr_eq(&self.node, &other.node) {
            return true;
        }
        if self.hash() != other.hash() || self.node_count() != other.node_count() {
            return false;
        }
        match (self.kind(), other.kind()) {
            (Kind::Number(a), Kind::Number(b)) => a == b,
            (Kind::Variable(a), Kind::Variable(b)) => a == b,
            (Kind::Constant(a), Kind::Constant(b)) => a == b,
            (Kind::Sum(a), Kind::Sum(b)) | (Kind::Product(a), Kind::Product(b)) => a == b,
            (Kind::Quotient(a1, a2), Kind::Quotient(b1, b2)) => a1 == b1 && a2 == b2,
            (Kind::Power(a, ae), Kind::Power(b, be)) => ae == be && a == b,
            (Kind::Negate(a), Kind::Negate(b)) => a == b,
            (Kind::Apply(f, a), Kind::Apply(g, b)) => f == g && a == b,
            _ => false,
        }
    }
}

impl Eq for Expr {}

impl Hash for Expr {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.node.hash);
    }
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Expr({self})")
    }
}

// Operator overloads build through the smart constructors, so lightweight
// folding (zeros, ones, flattening) happens on the fly.
impl std::ops::Add for Expr {
    type Output = Expr;
    fn add(self, rhs: Expr) -> Expr {
        Expr::sum(vec![self, rhs])
    }
}

impl std::ops::Sub for Expr {
    type Output = Expr;
    fn sub(self, rhs: Expr) -> Expr {
        Expr::sum(vec![self, Expr::negate(rhs)])
    }
}

impl std::ops::Mul for Expr {
    type Output = Expr;
    fn mul(self, rhs: Expr) -> Expr {
        Expr::product(vec![self, rhs])
    }
}

impl std::ops::Div for Expr {
    type Output = Expr;
    fn div(self, rhs: Expr) -> Expr {
        Expr::quotient(self, rhs)
    }
}

impl std::ops::Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::negate(self)
    }
}

/// Render a rational as an expression: integers become literals, other
/// rationals become exact quotients of integer literals.
pub fn rational_to_expr(r: Exponent) -> Expr {
    if *r.denom() == 1 {
        Expr::number(*r.numer() as f64)
    } else {
        let q = Expr::quotient(
            Expr::number(r.numer().unsigned_abs() as f64),
            Expr::number(*r.denom() as f64),
        );
        if *r.numer() < 0 {
            Expr::negate(q)
        } else {
            q
        }
    }
}

/// Try to read an expression as an exact rational constant. Supports
/// literals, negation, sums, products, quotients and integer powers of
/// rationals; decimal literals are reconstructed as the smallest-denominator
/// rational that round-trips to the same double.
pub fn rational_value(e: &Expr) -> Option<Exponent> {
    match e.kind() {
        Kind::Number(v) => rational_from_f64(*v),
        Kind::Negate(a) => rational_value(a).map(|r| -r),
        Kind::Sum(cs) => {
            let mut acc = Exponent::from_integer(0);
            for c in cs {
                acc += rational_value(c)?;
            }
            Some(acc)
        }
        Kind::Product(cs) => {
            let mut acc = Exponent::from_integer(1);
            for c in cs {
                acc *= rational_value(c)?;
            }
            Some(acc)
        }
        Kind::Quotient(a, b) => {
            let d = rational_value(b)?;
            if d == Exponent::from_integer(0) {
                return None;
            }
            Some(rational_value(a)? / d)
        }
        Kind::Power(b, e) => {
            if *e.denom() != 1 {
                return None;
            }
            let base = rational_value(b)?;
            let n = *e.numer();
            if n >= 0 {
                Some(base.pow(i32::try_from(n).ok()?))
            } else {
                if base == Exponent::from_integer(0) {
                    return None;
                }
                Some(base.pow(i32::try_from(n).ok()?))
            }
        }
        _ => None,
    }
}

/// Smallest-denominator rational p/q (q ≤ 10^6) whose double value equals `v`
/// exactly; recovers human-entered decimals like `0.5` or `1.25`.
pub fn rational_from_f64(v: f64) -> Option<Exponent> {
    if !v.is_finite() {
        return None;
    }
    if v == v.trunc() && v.abs() < 9e15 {
        return Some(Exponent::from_integer(v as i64));
    }
    // Stern-Brocot / continued-fraction walk with exact round-trip check.
    let (mut a, mut x) = (v.trunc(), v);
    let (mut p0, mut q0, mut p1, mut q1) = (1i64, 0i64, a as i64, 1i64);
    for _ in 0..40 {
        if (p1 as f64) / (q1 as f64) == v {
            return Some(Exponent::new(p1, q1));
        }
        let frac = x - a;
        if frac == 0.0 {
            break;
        }
        x = 1.0 / frac;
        a = x.trunc();
        let p2 = (a as i64).checked_mul(p1)?.checked_add(p0)?;
        let q2 = (a as i64).checked_mul(q1)?.checked_add(q0)?;
        if q2 > 1_000_000 {
            return None;
        }
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
    }
    if q1 != 0 && (p1 as f64) / (q1 as f64) == v {
        Some(Exponent::new(p1, q1))
    } else {
        None
    }
}
