//! Pointwise Hopf/Kustaanheimo-Stiefel lift on target spaces: spinor and
//! Abelian gauge potential reconstructed from a generating vector field,
//! the Pauli bilinear projection back, density matrices, and the current.
//!
//! Pauli convention is the standard one with σ¹σ² = iσ³; the bilinear
//! formulas below are derived from it once and frozen here.

use num_complex::Complex64;

use crate::expr::{Binding, Domain, EvalError, Expr};
use crate::fields::{gradient, VectorField, COORDS};

/// Choice of local section of the lift. `NorthRegular` is singular exactly
/// where H + H³ = 0 (field along -e₃), `SouthRegular` exactly where
/// H - H³ = 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
pub enum Section {
    #[default]
    NorthRegular,
    SouthRegular,
}

/// A symbolic complex scalar split into real and imaginary part.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexExpr {
    pub re: Expr,
    pub im: Expr,
}

impl ComplexExpr {
    pub fn real(re: Expr) -> ComplexExpr {
        ComplexExpr {
            re,
            im: Expr::zero(),
        }
    }

    pub fn evaluate(&self, b: &Binding) -> Result<Complex64, EvalError> {
        let re = self.re.evaluate(b)?;
        let im = self.im.evaluate(b)?;
        // components are real-part/imag-part expressions; tiny imaginary
        // residue from complex evaluation folds into the result
        Ok(Complex64::new(re.re - im.im, re.im + im.re))
    }

    pub fn differentiate(&self, var: &str) -> ComplexExpr {
        ComplexExpr {
            re: self.re.differentiate(var),
            im: self.im.differentiate(var),
        }
    }

    pub fn simplified(&self, domain: Domain) -> ComplexExpr {
        ComplexExpr {
            re: self.re.simplified(domain),
            im: self.im.simplified(domain),
        }
    }
}

/// Two-component spinor field; each component is a (re, im) expression pair.
/// Satisfies ⟨ψ|ψ⟩ = ‖H‖ pointwise when built by [`lift_spinor`].
#[derive(Debug, Clone, PartialEq)]
pub struct SpinorField {
    pub up: ComplexExpr,
    pub down: ComplexExpr,
}

impl SpinorField {
    pub fn evaluate(&self, b: &Binding) -> Result<[Complex64; 2], EvalError> {
        Ok([self.up.evaluate(b)?, self.down.evaluate(b)?])
    }

    pub fn evaluate_at(&self, p: [f64; 3], params: &Binding) -> Result<[Complex64; 2], EvalError> {
        let mut b = params.clone();
        b.set_point(p);
        self.evaluate(&b)
    }

    /// Component-wise partial derivative along coordinate `i`.
    pub fn differentiate_coord(&self, i: usize) -> SpinorField {
        SpinorField {
            up: self.up.differentiate(COORDS[i]),
            down: self.down.differentiate(COORDS[i]),
        }
    }

    pub fn simplified(&self, domain: Domain) -> SpinorField {
        SpinorField {
            up: self.up.simplified(domain),
            down: self.down.simplified(domain),
        }
    }

    pub fn scale_component(&self, index: usize, factor: f64) -> SpinorField {
        let scale = |c: &ComplexExpr| ComplexExpr {
            re: Expr::number(factor) * c.re.clone(),
            im: Expr::number(factor) * c.im.clone(),
        };
        match index {
            0 => SpinorField {
                up: scale(&self.up),
                down: self.down.clone(),
            },
            _ => SpinorField {
                up: self.up.clone(),
                down: scale(&self.down),
            },
        }
    }
}

/// Spinor whose Pauli bilinear reproduces `h`, in the chosen section, with
/// the gauge phase χ fixed to zero:
///
/// - north: ψ = (H + H³, H¹ + iH²) / sqrt(2(H + H³))
/// - south: ψ = (H¹ - iH², H - H³) / sqrt(2(H - H³))
pub fn lift_spinor(h: &VectorField, section: Section, domain: Domain) -> SpinorField {
    let mag = h.magnitude(domain);
    let h1 = h.component(0).clone();
    let h2 = h.component(1).clone();
    let h3 = h.component(2).clone();
    let two = || Expr::number(2.0);
    match section {
        Section::NorthRegular => {
            let denom = mag.clone() + h3.clone();
            let pref = Expr::power(
                two() * denom.clone(),
                crate::expr::Exponent::new(-1, 2),
            );
            SpinorField {
                up: ComplexExpr::real((pref.clone() * denom).simplified(domain)),
                down: ComplexExpr {
                    re: (pref.clone() * h1).simplified(domain),
                    im: (pref * h2).simplified(domain),
                },
            }
        }
        Section::SouthRegular => {
            let denom = mag.clone() - h3.clone();
            let pref = Expr::power(
                two() * denom.clone(),
                crate::expr::Exponent::new(-1, 2),
            );
            SpinorField {
                up: ComplexExpr {
                    re: (pref.clone() * h1).simplified(domain),
                    im: Expr::negate(pref.clone() * h2).simplified(domain),
                },
                down: ComplexExpr::real((pref * denom).simplified(domain)),
            }
        }
    }
}

/// The Abelian potential generated by `h`:
///
/// A_k = -(H¹ ∂_k H² - H² ∂_k H¹) / (2H(H + H³)) - (curl H)_k / (2H)
///
/// Independent of the section choice; the gauge term χ is fixed to zero.
pub fn lift_potential(h: &VectorField, domain: Domain) -> VectorField {
    let mag = h.magnitude(domain);
    let h1 = h.component(0).clone();
    let h2 = h.component(1).clone();
    let h3 = h.component(2).clone();
    let grad2 = gradient(h.component(1), domain);
    let grad1 = gradient(h.component(0), domain);
    let curl = h.curl(domain);
    let winding_denom = Expr::number(2.0) * mag.clone() * (mag.clone() + h3);
    let curl_denom = Expr::number(2.0) * mag;
    let component = |k: usize| {
        let winding = h1.clone() * grad2.component(k).clone()
            - h2.clone() * grad1.component(k).clone();
        let t1 = Expr::negate(Expr::quotient(winding, winding_denom.clone()));
        let t2 = Expr::negate(Expr::quotient(curl.component(k).clone(), curl_denom.clone()));
        (t1 + t2).simplified(domain)
    };
    VectorField::new(component(0), component(1), component(2))
}

/// Pauli bilinear of a spinor: (2Re(ψ̄₁ψ₂), 2Im(ψ̄₁ψ₂), |ψ₁|² - |ψ₂|²).
pub fn bilinear(psi: &SpinorField, domain: Domain) -> VectorField {
    let a = &psi.up.re;
    let b = &psi.up.im;
    let c = &psi.down.re;
    let d = &psi.down.im;
    // ψ̄₁ψ₂ = (a - ib)(c + id) = (ac + bd) + i(ad - bc)
    let re = a.clone() * c.clone() + b.clone() * d.clone();
    let im = a.clone() * d.clone() - b.clone() * c.clone();
    let two = Expr::number(2.0);
    let sq = |e: &Expr| Expr::int_power(e.clone(), 2);
    VectorField::new(
        (two.clone() * re).simplified(domain),
        (two * im).simplified(domain),
        (sq(a) + sq(b) - sq(c) - sq(d)).simplified(domain),
    )
}

/// The steady current J = curl H.
pub fn compute_current(h: &VectorField, domain: Domain) -> VectorField {
    h.curl(domain)
}

/// 2x2 complex matrix in row-major order.
pub type Mat2 = [[Complex64; 2]; 2];

pub fn mat2_zero() -> Mat2 {
    [[Complex64::new(0.0, 0.0); 2]; 2]
}

pub fn mat2_add(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = mat2_zero();
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][j] + b[i][j];
        }
    }
    out
}

pub fn mat2_scale(s: Complex64, a: &Mat2) -> Mat2 {
    let mut out = mat2_zero();
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = s * a[i][j];
        }
    }
    out
}

pub fn mat2_sub(a: &Mat2, b: &Mat2) -> Mat2 {
    mat2_add(a, &mat2_scale(Complex64::new(-1.0, 0.0), b))
}

pub fn mat2_frobenius(a: &Mat2) -> f64 {
    let mut s = 0.0;
    for row in a {
        for v in row {
            s += v.norm_sqr();
        }
    }
    s.sqrt()
}

/// Pauli matrix σ_k for k in 1..=3 (σ¹σ² = iσ³ convention).
pub fn sigma(k: usize) -> Mat2 {
    let i = Complex64::new(0.0, 1.0);
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    match k {
        1 => [[zero, one], [one, zero]],
        2 => [[zero, -i], [i, zero]],
        3 => [[one, zero], [zero, -one]],
        _ => panic!("Pauli index out of range: {k}"),
    }
}

/// Apply σ_k to a 2-component vector.
pub fn sigma_apply(k: usize, v: [Complex64; 2]) -> [Complex64; 2] {
    let m = sigma(k);
    [
        m[0][0] * v[0] + m[0][1] * v[1],
        m[1][0] * v[0] + m[1][1] * v[1],
    ]
}

/// Density matrix ψψ† at a point.
pub fn density_matrix(
    psi: &SpinorField,
    p: [f64; 3],
    params: &Binding,
) -> Result<Mat2, EvalError> {
    let v = psi.evaluate_at(p, params)?;
    let mut out = mat2_zero();
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = v[i] * v[j].conj();
        }
    }
    Ok(out)
}

/// ½ (H·1 + Hᵏσ_k) at a point: the closed-form the density matrix of the
/// lifted spinor must match.
pub fn half_h_matrix(
    h: &VectorField,
    p: [f64; 3],
    params: &Binding,
) -> Result<Mat2, EvalError> {
    let v = h.evaluate_at(p, params)?;
    let mag = crate::fields::norm3(&v);
    let mut out = mat2_scale(
        Complex64::new(0.5 * mag, 0.0),
        &[[Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
          [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)]],
    );
    for k in 1..=3 {
        out = mat2_add(&out, &mat2_scale(v[k - 1] * 0.5, &sigma(k)));
    }
    Ok(out)
}
