//! Best-effort, value-preserving simplification: constant folding,
//! identity/annihilator elimination, power merging, like-term collection and
//! same-denominator merging.
//!
//! Rules that are only valid for positive real subexpressions (notably
//! `sqrt(u^2) -> u` and distributing fractional powers over products) are
//! gated behind [`Domain::Positive`] plus a conservative symbolic sign
//! analysis, so provably-negative intermediates keep their signs. No
//! rational-function canonicalization and no expansion of products over
//! sums: iteration fixed points are detected numerically, so the simplifier
//! only has to keep expressions compact, not canonical.
//!
//! Normal form: numeric factors fold into a single leading coefficient of a
//! term's numerator; denominators are purely symbolic; terms and factors are
//! ordered by a content hash, so equal values built along different routes
//! usually collide into equal trees.

use std::collections::HashMap;

use num_complex::Complex64;

use super::{Expr, Exponent, Function, Kind};

/// Evaluation domain assumption for simplification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
pub enum Domain {
    /// No sign assumptions; only branch-safe rules apply.
    #[default]
    Unrestricted,
    /// Free identifiers may be assumed positive real (the positive octant
    /// with positive parameters). Enables `sqrt(u^2) -> ±u` driven by sign
    /// analysis and fractional power distribution over positive factors.
    Positive,
}

pub fn simplify(e: &Expr, domain: Domain) -> Expr {
    let mut ctx = Ctx {
        domain,
        memo: HashMap::new(),
        signs: HashMap::new(),
    };
    ctx.simp(e)
}

/// Conservative sign classification on the positive octant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Sign {
    Positive,
    Negative,
    /// Real-valued but of unknown sign.
    RealUnknown,
    /// Possibly non-real (fractional powers of sign-indefinite values).
    Unknown,
}

struct Ctx {
    domain: Domain,
    // keyed by structural equality; keys keep their subtrees alive
    memo: HashMap<Expr, Expr>,
    signs: HashMap<Expr, Sign>,
}

// Ordering used for terms and factors: named constants first, then
// variables alphabetically, then function applications by name; composites
// come last, ordered by content hash (deterministic, content-based). Powers
// and negations sort like their base, so x^2 stays next to x.
#[derive(PartialEq, Eq, PartialOrd, Ord)]
struct Key(u8, String, u64);

fn canonical_key(e: &Expr) -> Key {
    match e.kind() {
        Kind::Number(v) => Key(0, String::new(), v.to_bits()),
        Kind::Constant(n) => Key(1, n.clone(), 0),
        Kind::Variable(n) => Key(2, n.clone(), 0),
        Kind::Power(b, _) => {
            let Key(rank, name, _) = canonical_key(b);
            Key(rank, name, e.hash())
        }
        Kind::Negate(a) => {
            let Key(rank, name, _) = canonical_key(a);
            Key(rank, name, e.hash())
        }
        Kind::Apply(f, _) => Key(3, f.name().to_string(), e.hash()),
        _ => Key(4, String::new(), e.hash()),
    }
}

impl Ctx {
    fn simp(&mut self, e: &Expr) -> Expr {
        if let Some(hit) = self.memo.get(e) {
            return hit.clone();
        }
        let rebuilt = match e.kind() {
            Kind::Number(_) | Kind::Variable(_) | Kind::Constant(_) => e.clone(),
            Kind::Sum(cs) => {
                let children: Vec<Expr> = cs.iter().map(|c| self.simp(c)).collect();
                self.collect_sum(children)
            }
            Kind::Product(cs) => {
                let shallow = Expr::product(cs.iter().map(|c| self.simp(c)).collect());
                self.collect_factors(&shallow)
            }
            Kind::Quotient(a, b) => {
                let shallow = Expr::quotient(self.simp(a), self.simp(b));
                self.collect_factors(&shallow)
            }
            Kind::Power(base, exp) => {
                let b = self.simp(base);
                self.pow_rules(b, *exp)
            }
            Kind::Negate(a) => Expr::negate(self.simp(a)),
            Kind::Apply(f, a) => {
                let arg = self.simp(a);
                fold_apply(*f, arg)
            }
        };
        self.memo.insert(e.clone(), rebuilt.clone());
        rebuilt
    }

    // ---- sign analysis ---------------------------------------------------

    fn sign_of(&mut self, e: &Expr) -> Sign {
        if let Some(s) = self.signs.get(e) {
            return *s;
        }
        let s = self.sign_of_uncached(e);
        self.signs.insert(e.clone(), s);
        s
    }

    fn sign_of_uncached(&mut self, e: &Expr) -> Sign {
        use Sign::*;
        match e.kind() {
            Kind::Number(v) => {
                if *v > 0.0 {
                    Positive
                } else {
                    RealUnknown // exact zero
                }
            }
            Kind::Variable(_) | Kind::Constant(_) => {
                if self.domain == Domain::Positive {
                    Positive
                } else {
                    RealUnknown
                }
            }
            Kind::Negate(a) => match self.sign_of(a) {
                Positive => Negative,
                Negative => Positive,
                other => other,
            },
            Kind::Sum(cs) => {
                let mut all_pos = true;
                let mut all_neg = true;
                let mut real = true;
                for c in cs {
                    match self.sign_of(c) {
                        Positive => all_neg = false,
                        Negative => all_pos = false,
                        RealUnknown => {
                            all_pos = false;
                            all_neg = false;
                        }
                        Unknown => {
                            real = false;
                            all_pos = false;
                            all_neg = false;
                        }
                    }
                }
                if !real {
                    Unknown
                } else if all_pos {
                    Positive
                } else if all_neg {
                    Negative
                } else {
                    RealUnknown
                }
            }
            Kind::Product(cs) => {
                let mut sign = Positive;
                for c in cs {
                    sign = combine_mul(sign, self.sign_of(c));
                }
                sign
            }
            Kind::Quotient(a, b) => combine_mul(self.sign_of(a), self.sign_of(b)),
            Kind::Power(b, exp) => {
                let integer = *exp.denom() == 1;
                match self.sign_of(b) {
                    Positive => Positive,
                    Negative if integer => {
                        if exp.numer() % 2 == 0 {
                            Positive
                        } else {
                            Negative
                        }
                    }
                    RealUnknown if integer => {
                        if exp.numer() % 2 == 0 {
                            Positive
                        } else {
                            RealUnknown
                        }
                    }
                    _ => Unknown,
                }
            }
            Kind::Apply(f, a) => {
                let arg = self.sign_of(a);
                if arg == Unknown {
                    return Unknown;
                }
                // argument is provably real here
                match f {
                    Function::Exp | Function::Cosh => Positive,
                    Function::Sinh | Function::Tanh => arg,
                    Function::Coth => match arg {
                        Positive => Positive,
                        Negative => Negative,
                        _ => RealUnknown,
                    },
                    Function::Sin | Function::Cos => RealUnknown,
                    Function::Ln => match arg {
                        Positive => RealUnknown,
                        _ => Unknown,
                    },
                }
            }
        }
    }

    // ---- power rules ------------------------------------------------------

    fn pow_rules(&mut self, mut base: Expr, mut exp: Exponent) -> Expr {
        for _ in 0..8 {
            if exp == Exponent::from_integer(0) {
                return Expr::one();
            }
            if exp == Exponent::from_integer(1) {
                return base;
            }
            let integer_exp = *exp.denom() == 1;
            match base.kind() {
                // positive literal folds numerically
                Kind::Number(v) if *v > 0.0 => {
                    let folded = if integer_exp {
                        match i32::try_from(*exp.numer()) {
                            Ok(n) => v.powi(n),
                            Err(_) => v.powf(*exp.numer() as f64),
                        }
                    } else {
                        v.powf(*exp.numer() as f64 / *exp.denom() as f64)
                    };
                    if folded.is_finite() {
                        return Expr::number(folded);
                    }
                    return Expr::power(base, exp);
                }
                // (-u)^n: even n drops the sign, odd n pulls it out
                Kind::Negate(inner) if integer_exp => {
                    let inner = inner.clone();
                    if exp.numer() % 2 == 0 {
                        base = inner;
                    } else {
                        return Expr::negate(self.pow_rules(inner, exp));
                    }
                }
                // (u^a)^r -> u^(a r): branch-safe for integer r; for
                // fractional r it needs a sign certificate for u. With a
                // even and u provably negative this is the |u| collapse:
                // (u^2)^(1/2) -> -u.
                Kind::Power(inner, a) => {
                    let a = *a;
                    let inner = inner.clone();
                    if integer_exp {
                        exp = a * exp;
                        base = inner;
                        continue;
                    }
                    if self.domain != Domain::Positive {
                        break;
                    }
                    match self.sign_of(&inner) {
                        Sign::Positive => {
                            exp = a * exp;
                            base = inner;
                        }
                        Sign::Negative if *a.denom() == 1 && a.numer() % 2 == 0 => {
                            exp = a * exp;
                            base = Expr::negate(inner);
                        }
                        _ => break,
                    }
                }
                // (u v)^r and (u/v)^r distribute when branch-safe; kept only
                // if the distributed form is no larger
                Kind::Product(_) | Kind::Quotient(..) => {
                    let frac_ok = self.domain == Domain::Positive
                        && match base.kind() {
                            Kind::Product(cs) => {
                                cs.iter().all(|c| self.sign_of(c) == Sign::Positive)
                            }
                            Kind::Quotient(a, b) => {
                                self.sign_of(a) == Sign::Positive
                                    && self.sign_of(b) == Sign::Positive
                            }
                            _ => false,
                        };
                    if !integer_exp && !frac_ok {
                        break;
                    }
                    let undistributed = Expr::power(base.clone(), exp);
                    let distributed = match base.kind() {
                        Kind::Product(cs) => Expr::product(
                            cs.iter().map(|c| Expr::power(c.clone(), exp)).collect(),
                        ),
                        Kind::Quotient(a, b) => Expr::quotient(
                            Expr::power(a.clone(), exp),
                            Expr::power(b.clone(), exp),
                        ),
                        _ => unreachable!(),
                    };
                    let candidate = self.simp(&distributed);
                    if candidate.node_count() <= undistributed.node_count() {
                        return candidate;
                    }
                    return undistributed;
                }
                _ => break,
            }
        }
        Expr::power(base, exp)
    }

    // ---- product/quotient factor collection --------------------------------

    fn collect_factors(&mut self, e: &Expr) -> Expr {
        let mut acc = FactorAcc::new();
        acc.mul_expr(e, 1);
        if !acc.coeff.is_finite() {
            return e.clone(); // refuse to fold overflowing constants
        }
        acc.rebuild()
    }

    // ---- sum collection -----------------------------------------------------

    // Collection can cascade: merging same-denominator terms and cancelling
    // the merged numerator against the denominator exposes new like terms
    // (e.g. -1/s + x^2/s^2 + y^2/s^2 with s = x^2 + y^2 collapses to 0), so
    // run passes until stable.
    fn collect_sum(&mut self, children: Vec<Expr>) -> Expr {
        let mut current = Expr::sum(children);
        for _ in 0..4 {
            let next = self.collect_sum_once(&current);
            if next == current {
                return next;
            }
            current = next;
        }
        current
    }

    fn collect_sum_once(&mut self, flat: &Expr) -> Expr {
        if !matches!(flat.kind(), Kind::Sum(_)) {
            return flat.clone();
        }
        // flatten through negated sums: -(a + b) contributes -a and -b
        let mut terms: Vec<Expr> = Vec::new();
        gather_terms(flat, false, &mut terms);
        // collect identical cores
        let mut order: Vec<Expr> = Vec::new();
        let mut coeffs: HashMap<Expr, f64> = HashMap::new();
        let mut constant = 0.0f64;
        for term in &terms {
            let (c, core) = term_parts(term);
            if !c.is_finite() {
                return Expr::sum(terms); // bail out, keep as-is
            }
            if core.is_one() {
                constant += c;
                continue;
            }
            if !coeffs.contains_key(&core) {
                order.push(core.clone());
            }
            *coeffs.entry(core).or_insert(0.0) += c;
        }
        if !constant.is_finite() {
            return Expr::sum(terms);
        }
        order.sort_by_cached_key(canonical_key);

        // group by symbolic denominator so a/D + b/D merges to (a+b)/D
        let mut group_order: Vec<Expr> = Vec::new();
        let mut groups: HashMap<Expr, Vec<(f64, Expr)>> = HashMap::new();
        let mut plain: Vec<Expr> = Vec::new();
        for core in order {
            let c = coeffs[&core];
            if c == 0.0 {
                continue;
            }
            let (numer, denom) = match core.kind() {
                Kind::Quotient(a, b) => (a.clone(), b.clone()),
                _ => (core.clone(), Expr::one()),
            };
            if denom.is_one() {
                plain.push(rebuild_term(c, &numer));
            } else {
                if !groups.contains_key(&denom) {
                    group_order.push(denom.clone());
                }
                groups.entry(denom).or_default().push((c, numer));
            }
        }
        let mut out: Vec<Expr> = plain;
        for denom in group_order {
            let members = groups.remove(&denom).unwrap();
            // a shared numeric coefficient moves out of the merged numerator
            // so (3x^2 + 3y^2)/s^(5/2) can cancel down to 3/s^(3/2)
            let first = members[0].0;
            let common = if members.iter().all(|(c, _)| *c == first) {
                first
            } else if members.iter().all(|(c, _)| c.abs() == first.abs()) {
                first.abs()
            } else {
                1.0
            };
            let numerators: Vec<Expr> = members
                .iter()
                .map(|(c, n)| rebuild_term(c / common, n))
                .collect();
            let q = quotient_of_sum(numerators, denom);
            let q = if common == 1.0 {
                q
            } else {
                Expr::product(vec![Expr::number(common), q])
            };
            // cancel merged numerators against the denominator
            out.push(self.collect_factors(&q));
        }
        if constant != 0.0 {
            out.push(Expr::number(constant));
        }
        out.sort_by_cached_key(canonical_key);
        Expr::sum(out)
    }
}

// Flatten a sum tree into a term list, pushing negation down through nested
// sums (value-preserving: -(a + b) = -a - b).
fn gather_terms(e: &Expr, negated: bool, out: &mut Vec<Expr>) {
    match e.kind() {
        Kind::Sum(cs) => {
            for c in cs {
                gather_terms(c, negated, out);
            }
        }
        Kind::Negate(inner) if matches!(inner.kind(), Kind::Sum(_) | Kind::Negate(_)) => {
            gather_terms(inner, !negated, out);
        }
        _ => out.push(if negated {
            Expr::negate(e.clone())
        } else {
            e.clone()
        }),
    }
}

// Build sum(numerators)/denom with the numerator in canonical term order,
// pulling a shared sign out so -a/D - b/D becomes -((a + b)/D).
fn quotient_of_sum(mut numerators: Vec<Expr>, denom: Expr) -> Expr {
    let all_negated = numerators
        .iter()
        .all(|n| matches!(n.kind(), Kind::Negate(_)));
    if all_negated && !numerators.is_empty() {
        numerators = numerators
            .iter()
            .map(|n| match n.kind() {
                Kind::Negate(inner) => inner.clone(),
                _ => unreachable!(),
            })
            .collect();
        numerators.sort_by_cached_key(canonical_key);
        return Expr::negate(Expr::quotient(Expr::sum(numerators), denom));
    }
    numerators.sort_by_cached_key(canonical_key);
    Expr::quotient(Expr::sum(numerators), denom)
}

fn combine_mul(a: Sign, b: Sign) -> Sign {
    use Sign::*;
    match (a, b) {
        (Unknown, _) | (_, Unknown) => Unknown,
        (RealUnknown, _) | (_, RealUnknown) => RealUnknown,
        (Positive, Positive) | (Negative, Negative) => Positive,
        _ => Negative,
    }
}

// Decompose a term into (numeric coefficient, symbolic core); the core of a
// pure constant is 1. Numeric factors are pulled out of products and both
// sides of quotients.
fn term_parts(e: &Expr) -> (f64, Expr) {
    let mut coeff = 1.0f64;
    let mut cur = e.clone();
    while let Kind::Negate(inner) = cur.kind() {
        coeff = -coeff;
        let next = inner.clone();
        cur = next;
    }
    match cur.kind() {
        Kind::Number(v) => (coeff * v, Expr::one()),
        Kind::Product(cs) => {
            let mut rest: Vec<Expr> = Vec::new();
            for c in cs {
                match c.as_number() {
                    Some(v) => coeff *= v,
                    None => {
                        if let Kind::Negate(inner) = c.kind() {
                            coeff = -coeff;
                            rest.push(inner.clone());
                        } else {
                            rest.push(c.clone());
                        }
                    }
                }
            }
            (coeff, Expr::product(rest))
        }
        Kind::Quotient(n, d) => {
            let (cn, ncore) = term_parts(n);
            let (cd, dcore) = term_parts(d);
            if cd == 0.0 || !cd.is_finite() {
                return (coeff, cur);
            }
            (coeff * cn / cd, Expr::quotient(ncore, dcore))
        }
        _ => (coeff, cur),
    }
}

// Rebuild coeff * core through the factor engine so sums and products agree
// on one normal form (needed for idempotence).
fn rebuild_term(coeff: f64, core: &Expr) -> Expr {
    let mut acc = FactorAcc::new();
    acc.coeff = coeff;
    acc.mul_expr(core, 1);
    if !acc.coeff.is_finite() {
        // keep the raw shape rather than folding into a non-finite constant
        return Expr::product(vec![Expr::number(coeff), core.clone()]);
    }
    acc.rebuild()
}

struct FactorAcc {
    coeff: f64,
    order: Vec<Expr>,
    exps: HashMap<Expr, Exponent>,
}

impl FactorAcc {
    fn new() -> Self {
        FactorAcc {
            coeff: 1.0,
            order: Vec::new(),
            exps: HashMap::new(),
        }
    }

    fn push(&mut self, base: Expr, exp: Exponent) {
        if !self.exps.contains_key(&base) {
            self.order.push(base.clone());
        }
        *self
            .exps
            .entry(base)
            .or_insert_with(|| Exponent::from_integer(0)) += exp;
    }

    // side = +1 for numerator factors, -1 for denominator factors
    fn mul_expr(&mut self, e: &Expr, side: i64) {
        match e.kind() {
            Kind::Number(v) => {
                if side > 0 {
                    self.coeff *= v;
                } else if *v != 0.0 {
                    self.coeff /= v;
                } else {
                    self.push(e.clone(), Exponent::from_integer(-1));
                }
            }
            Kind::Negate(inner) => {
                self.coeff = -self.coeff;
                self.mul_expr(inner, side);
            }
            Kind::Product(cs) => {
                for c in cs {
                    self.mul_expr(c, side);
                }
            }
            Kind::Quotient(a, b) => {
                self.mul_expr(a, side);
                self.mul_expr(b, -side);
            }
            Kind::Power(base, exp) => {
                // z^a z^b = z^(a+b) and 1/z^a = z^(-a) hold on the principal
                // branch unconditionally
                self.push(base.clone(), if side > 0 { *exp } else { -*exp });
            }
            _ => {
                self.push(e.clone(), Exponent::from_integer(side));
            }
        }
    }

    fn rebuild(mut self) -> Expr {
        if self.coeff == 0.0 {
            return Expr::zero();
        }
        let negative = self.coeff < 0.0;
        let magnitude = self.coeff.abs();
        self.order.sort_by_cached_key(canonical_key);
        let mut numer: Vec<Expr> = Vec::new();
        let mut denom: Vec<Expr> = Vec::new();
        let mut have_symbolic = false;
        for base in &self.order {
            let exp = self.exps[base];
            if exp == Exponent::from_integer(0) {
                continue;
            }
            have_symbolic = true;
            if exp > Exponent::from_integer(0) {
                numer.push(Expr::power(base.clone(), exp));
            } else {
                denom.push(Expr::power(base.clone(), -exp));
            }
        }
        if !have_symbolic {
            let v = Expr::number(magnitude);
            return if negative { Expr::negate(v) } else { v };
        }
        if magnitude != 1.0 {
            numer.insert(0, Expr::number(magnitude));
        }
        let n = Expr::product(numer);
        let out = if denom.is_empty() {
            n
        } else {
            Expr::quotient(n, Expr::product(denom))
        };
        if negative {
            Expr::negate(out)
        } else {
            out
        }
    }
}

// Constant-fold a function applied to a numeric literal when the result is
// finite and real.
fn fold_apply(f: Function, arg: Expr) -> Expr {
    if let Some(v) = arg.as_number() {
        let z = Complex64::new(v, 0.0);
        let out = match f {
            Function::Exp => Some(z.exp()),
            Function::Ln => (v > 0.0).then(|| z.ln()),
            Function::Sin => Some(z.sin()),
            Function::Cos => Some(z.cos()),
            Function::Sinh => Some(z.sinh()),
            Function::Cosh => Some(z.cosh()),
            Function::Tanh => Some(z.tanh()),
            Function::Coth => (v != 0.0).then(|| z.cosh() / z.sinh()),
        };
        if let Some(out) = out {
            if out.re.is_finite() && out.im == 0.0 {
                return Expr::number(out.re);
            }
        }
    }
    Expr::apply(f, arg)
}
