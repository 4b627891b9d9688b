//! Complex-valued evaluation. One evaluator serves both the 3D fields and
//! the planar analytic-function machinery; `sqrt`, `ln` and rational powers
//! use principal branches. Poles and non-finite intermediates are reported
//! as errors carrying the binding point, never as silent NaNs.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use super::{Expr, Function, Kind, Node};

/// Map from identifiers (variables and named constants) to complex values.
/// `pi` is pre-bound.
#[derive(Debug, Clone)]
pub struct Binding {
    values: HashMap<String, Complex64>,
}

impl Default for Binding {
    fn default() -> Self {
        let mut values = HashMap::new();
        values.insert("pi".to_string(), Complex64::new(std::f64::consts::PI, 0.0));
        Binding { values }
    }
}

impl Binding {
    pub fn new() -> Binding {
        Binding::default()
    }

    pub fn set(&mut self, name: impl Into<String>, value: impl Into<Complex64>) -> &mut Self {
        self.values.insert(name.into(), value.into());
        self
    }

    pub fn set_real(&mut self, name: impl Into<String>, value: f64) -> &mut Self {
        self.set(name, Complex64::new(value, 0.0))
    }

    /// Bind the Cartesian coordinates x, y, z.
    pub fn set_point(&mut self, p: [f64; 3]) -> &mut Self {
        self.set_real("x", p[0]);
        self.set_real("y", p[1]);
        self.set_real("z", p[2])
    }

    pub fn get(&self, name: &str) -> Option<Complex64> {
        self.values.get(name).copied()
    }

    /// Sorted snapshot used in error reports.
    fn snapshot(&self) -> Vec<(String, Complex64)> {
        let mut v: Vec<_> = self.values.iter().map(|(k, x)| (k.clone(), *x)).collect();
        v.sort_by(|a, b| a.0.cmp(&b.0));
        v
    }
}

impl<const N: usize> From<[(&str, f64); N]> for Binding {
    fn from(pairs: [(&str, f64); N]) -> Self {
        let mut b = Binding::new();
        for (k, v) in pairs {
            b.set_real(k, v);
        }
        b
    }
}

/// Evaluation failure, carrying the binding point.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EvalError {
    #[error("unbound identifier '{0}'")]
    Unbound(String),
    #[error("pole: {what} at {}", format_point(.at))]
    Pole {
        what: String,
        at: Vec<(String, Complex64)>,
    },
    #[error("non-finite value from {what} at {}", format_point(.at))]
    NonFinite {
        what: String,
        at: Vec<(String, Complex64)>,
    },
    #[error("expected a real value, got imaginary part {imag:.3e} at {}", format_point(.at))]
    NotReal {
        imag: f64,
        at: Vec<(String, Complex64)>,
    },
}

fn format_point(at: &[(String, Complex64)]) -> String {
    let mut s = String::new();
    for (i, (name, v)) in at.iter().enumerate() {
        if i > 0 {
            s.push_str(", ");
        }
        if v.im == 0.0 {
            s.push_str(&format!("{name}={}", v.re));
        } else {
            s.push_str(&format!("{name}={}{:+}i", v.re, v.im));
        }
    }
    s
}

impl fmt::Display for Binding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_point(&self.snapshot()))
    }
}

struct Evaluator<'a> {
    binding: &'a Binding,
    memo: HashMap<*const Node, Complex64>,
}

impl<'a> Evaluator<'a> {
    fn pole(&self, what: impl Into<String>) -> EvalError {
        EvalError::Pole {
            what: what.into(),
            at: self.binding.snapshot(),
        }
    }

    fn non_finite(&self, what: impl Into<String>) -> EvalError {
        EvalError::NonFinite {
            what: what.into(),
            at: self.binding.snapshot(),
        }
    }

    fn eval(&mut self, e: &Expr) -> Result<Complex64, EvalError> {
        let key = Arc::as_ptr(&e.node);
        if let Some(v) = self.memo.get(&key) {
            return Ok(*v);
        }
        let value = match e.kind() {
            Kind::Number(v) => Complex64::new(*v, 0.0),
            Kind::Variable(name) | Kind::Constant(name) => self
                .binding
                .get(name)
                .ok_or_else(|| EvalError::Unbound(name.clone()))?,
            Kind::Sum(cs) => {
                let mut acc = Complex64::new(0.0, 0.0);
                for c in cs {
                    acc += self.eval(c)?;
                }
                acc
            }
            Kind::Product(cs) => {
                let mut acc = Complex64::new(1.0, 0.0);
                for c in cs {
                    acc *= self.eval(c)?;
                }
                acc
            }
            Kind::Quotient(a, b) => {
                let den = self.eval(b)?;
                if den.norm_sqr() == 0.0 {
                    return Err(self.pole(format!("division by zero in '{}'", clip(e))));
                }
                self.eval(a)? / den
            }
            Kind::Power(base, exp) => {
                let mut b = self.eval(base)?;
                if b.im == 0.0 {
                    // normalize -0.0i so real arguments take the principal
                    // side of the branch cut
                    b.im = 0.0;
                }
                let num = *exp.numer();
                let den = *exp.denom();
                if b.norm_sqr() == 0.0 {
                    if num > 0 {
                        Complex64::new(0.0, 0.0)
                    } else {
                        return Err(self.pole(format!("zero raised to {exp} in '{}'", clip(e))));
                    }
                } else if den == 1 {
                    match i32::try_from(num) {
                        Ok(n) => b.powi(n),
                        Err(_) => b.powf(num as f64),
                    }
                } else {
                    // principal branch
                    b.powf(num as f64 / den as f64)
                }
            }
            Kind::Negate(a) => -self.eval(a)?,
            Kind::Apply(func, arg) => {
                let mut a = self.eval(arg)?;
                if a.im == 0.0 {
                    a.im = 0.0;
                }
                match func {
                    Function::Exp => a.exp(),
                    Function::Ln => {
                        if a.norm_sqr() == 0.0 {
                            return Err(self.pole(format!("ln(0) in '{}'", clip(e))));
                        }
                        a.ln()
                    }
                    Function::Sin => a.sin(),
                    Function::Cos => a.cos(),
                    Function::Sinh => a.sinh(),
                    Function::Cosh => a.cosh(),
                    Function::Tanh => a.tanh(),
                    Function::Coth => {
                        let s = a.sinh();
                        if s.norm_sqr() == 0.0 {
                            return Err(self.pole(format!("coth pole in '{}'", clip(e))));
                        }
                        a.cosh() / s
                    }
                }
            }
        };
        if !value.re.is_finite() || !value.im.is_finite() {
            return Err(self.non_finite(format!("'{}'", clip(e))));
        }
        self.memo.insert(key, value);
        Ok(value)
    }
}

/// Clip a printed expression for error messages.
fn clip(e: &Expr) -> String {
    let s = e.to_string();
    if s.len() > 80 {
        format!("{}...", &s[..77])
    } else {
        s
    }
}

impl Expr {
    /// Evaluate at a binding; every free identifier must be bound.
    pub fn evaluate(&self, binding: &Binding) -> Result<Complex64, EvalError> {
        let mut ev = Evaluator {
            binding,
            memo: HashMap::new(),
        };
        ev.eval(self)
    }

    /// Evaluate and assert the result is real to within `1e-12 * max(1, |re|)`.
    pub fn evaluate_real(&self, binding: &Binding) -> Result<f64, EvalError> {
        let v = self.evaluate(binding)?;
        if v.im.abs() > 1e-12 * v.re.abs().max(1.0) {
            return Err(EvalError::NotReal {
                imag: v.im,
                at: {
                    let mut snap: Vec<_> =
                        binding.values.iter().map(|(k, x)| (k.clone(), *x)).collect();
                    snap.sort_by(|a, b| a.0.cmp(&b.0));
                    snap
                },
            });
        }
        Ok(v.re)
    }
}
