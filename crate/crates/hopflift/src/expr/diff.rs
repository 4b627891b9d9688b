//! Exact symbolic differentiation. Total on the function set: `coth'` is
//! expressed through `sinh`, so the set is closed under differentiation.

use std::collections::HashMap;
use std::sync::Arc;

use super::{rational_to_expr, Expr, Exponent, Function, Kind, Node};

/// d(e)/d(var). Named constants and other variables differentiate to zero.
pub fn differentiate(e: &Expr, var: &str) -> Expr {
    let mut memo: HashMap<*const Node, Expr> = HashMap::new();
    d(e, var, &mut memo)
}

fn d(e: &Expr, var: &str, memo: &mut HashMap<*const Node, Expr>) -> Expr {
    let key = Arc::as_ptr(&e.node);
    if let Some(hit) = memo.get(&key) {
        return hit.clone();
    }
    let out = match e.kind() {
        Kind::Number(_) | Kind::Constant(_) => Expr::zero(),
        Kind::Variable(name) => {
            if name == var {
                Expr::one()
            } else {
                Expr::zero()
            }
        }
        Kind::Sum(cs) => Expr::sum(cs.iter().map(|c| d(c, var, memo)).collect()),
        Kind::Product(cs) => {
            // n-ary product rule; zero factors drop through the constructors
            let mut terms = Vec::new();
            for (i, c) in cs.iter().enumerate() {
                let dc = d(c, var, memo);
                if dc.is_zero() {
                    continue;
                }
                let mut factors = Vec::with_capacity(cs.len());
                for (j, other) in cs.iter().enumerate() {
                    if i == j {
                        factors.push(dc.clone());
                    } else {
                        factors.push(other.clone());
                    }
                }
                terms.push(Expr::product(factors));
            }
            Expr::sum(terms)
        }
        Kind::Quotient(n, den) => {
            // (n/d)' = n'/d - n d'/d^2, kept as two quotients so shared
            // denominator powers collapse during simplification
            let dn = d(n, var, memo);
            let dd = d(den, var, memo);
            let first = Expr::quotient(dn, den.clone());
            if dd.is_zero() {
                first
            } else {
                let second = Expr::quotient(
                    Expr::product(vec![n.clone(), dd]),
                    Expr::power(den.clone(), Exponent::from_integer(2)),
                );
                first - second
            }
        }
        Kind::Power(base, exp) => {
            // (u^r)' = r u^(r-1) u'
            let du = d(base, var, memo);
            if du.is_zero() {
                Expr::zero()
            } else {
                Expr::product(vec![
                    rational_to_expr(*exp),
                    Expr::power(base.clone(), exp - Exponent::from_integer(1)),
                    du,
                ])
            }
        }
        Kind::Negate(a) => Expr::negate(d(a, var, memo)),
        Kind::Apply(func, u) => {
            let du = d(u, var, memo);
            if du.is_zero() {
                Expr::zero()
            } else {
                chain(*func, u, du)
            }
        }
    };
    memo.insert(key, out.clone());
    out
}

fn chain(func: Function, u: &Expr, du: Expr) -> Expr {
    match func {
        Function::Exp => du * Expr::apply(Function::Exp, u.clone()),
        Function::Ln => Expr::quotient(du, u.clone()),
        Function::Sin => du * Expr::apply(Function::Cos, u.clone()),
        Function::Cos => Expr::negate(du * Expr::apply(Function::Sin, u.clone())),
        Function::Sinh => du * Expr::apply(Function::Cosh, u.clone()),
        Function::Cosh => du * Expr::apply(Function::Sinh, u.clone()),
        // tanh' = 1/cosh^2, coth' = -1/sinh^2
        Function::Tanh => Expr::quotient(
            du,
            Expr::int_power(Expr::apply(Function::Cosh, u.clone()), 2),
        ),
        Function::Coth => Expr::negate(Expr::quotient(
            du,
            Expr::int_power(Expr::apply(Function::Sinh, u.clone()), 2),
        )),
    }
}
