//! Precedence-aware printing in the same grammar the parser accepts, so
//! printed output is re-ingestible and printing is a fixed point:
//! print(parse(print(e))) == print(e).

use std::fmt;

use num_rational::Rational64;

use super::{Expr, Kind};

// Binding strengths used for parenthesization decisions. Unary minus sits
// between the multiplicative operators and `^`.
const PREC_SUM: u8 = 1;
const PREC_PROD: u8 = 2;
const PREC_NEG: u8 = 3;
const PREC_POW: u8 = 4;
const PREC_ATOM: u8 = 5;

fn precedence(e: &Expr) -> u8 {
    match e.kind() {
        Kind::Sum(_) => PREC_SUM,
        Kind::Product(_) | Kind::Quotient(..) => PREC_PROD,
        Kind::Negate(_) => PREC_NEG,
        Kind::Power(..) => PREC_POW,
        Kind::Number(_) | Kind::Variable(_) | Kind::Constant(_) | Kind::Apply(..) => PREC_ATOM,
    }
}

fn write_child(f: &mut fmt::Formatter<'_>, e: &Expr, min_prec: u8) -> fmt::Result {
    if precedence(e) < min_prec {
        write!(f, "(")?;
        write_expr(f, e)?;
        write!(f, ")")
    } else {
        write_expr(f, e)
    }
}

fn write_exponent(f: &mut fmt::Formatter<'_>, exp: &Rational64) -> fmt::Result {
    if *exp.denom() == 1 && *exp.numer() >= 0 {
        write!(f, "{}", exp.numer())
    } else if *exp.denom() == 1 {
        write!(f, "({})", exp.numer())
    } else {
        write!(f, "({}/{})", exp.numer(), exp.denom())
    }
}

fn write_expr(f: &mut fmt::Formatter<'_>, e: &Expr) -> fmt::Result {
    match e.kind() {
        Kind::Number(v) => write!(f, "{v}"),
        Kind::Variable(name) | Kind::Constant(name) => write!(f, "{name}"),
        Kind::Sum(children) => {
            for (i, c) in children.iter().enumerate() {
                if i == 0 {
                    write_child(f, c, PREC_SUM)?;
                    continue;
                }
                // Render negated terms with a binary minus.
                if let Kind::Negate(inner) = c.kind() {
                    write!(f, " - ")?;
                    write_child(f, inner, PREC_PROD)?;
                } else {
                    write!(f, " + ")?;
                    write_child(f, c, PREC_SUM)?;
                }
            }
            Ok(())
        }
        Kind::Product(children) => {
            for (i, c) in children.iter().enumerate() {
                if i > 0 {
                    write!(f, " * ")?;
                }
                write_child(f, c, PREC_PROD)?;
            }
            Ok(())
        }
        Kind::Quotient(a, b) => {
            write_child(f, a, PREC_PROD)?;
            write!(f, " / ")?;
            // The denominator needs parens whenever it is not a single
            // power/atom, otherwise `a / b * c` would re-associate.
            write_child(f, b, PREC_NEG)
        }
        Kind::Power(base, exp) => {
            if *exp == Rational64::new(1, 2) {
                write!(f, "sqrt(")?;
                write_expr(f, base)?;
                write!(f, ")")
            } else {
                write_child(f, base, PREC_ATOM)?;
                write!(f, "^")?;
                write_exponent(f, exp)
            }
        }
        Kind::Negate(a) => {
            write!(f, "-")?;
            write_child(f, a, PREC_NEG)
        }
        Kind::Apply(func, a) => {
            write!(f, "{}(", func.name())?;
            write_expr(f, a)?;
            write!(f, ")")
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_expr(f, self)
    }
}
