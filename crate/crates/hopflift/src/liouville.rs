//! Planar Liouville-equation machinery: the general solution from an
//! analytic/anti-analytic function pair, the two reality ansatz routes, the
//! z^n singular family, a finite-difference residual check, and embedding
//! planar solutions as 3D fields.
//!
//! ω is evaluated numerically through complex arithmetic with principal
//! branches rather than expanded symbolically in (u, v); the residual check
//! uses finite differences on ω as an oracle independent of the symbolic
//! derivative path.

use num_complex::Complex64;
use num_rational::Rational64;

use crate::expr::{Binding, Domain, EvalError, Expr, ParseError};
use crate::fields::VectorField;
use crate::verify::ResidualStats;

/// Reality tolerance: ω must be real to within this imaginary part.
pub const REALITY_TOL: f64 = 1e-9;

#[derive(Debug, thiserror::Error)]
pub enum LiouvilleError {
    #[error("map must be a function of zeta only; found free variables {0:?}")]
    BadMap(Vec<String>),
    #[error("non-real omega: imaginary part {imag:.3e} at (u, v) = ({u}, {v})")]
    NonReal { imag: f64, u: f64, v: f64 },
    #[error("pole: {what} at (u, v) = ({u}, {v})")]
    Pole { what: String, u: f64, v: f64 },
    #[error("log argument on the branch cut at (u, v) = ({u}, {v})")]
    BranchCut { u: f64, v: f64 },
    #[error("family order must be a positive half-integer (1/2, 1, 3/2, ...), got {0}")]
    BadOrder(String),
    #[error("singular ray: sin(n phi) = 0 at phi = {phi}")]
    SingularRay { phi: f64 },
    #[error("stencil point failed: {0}")]
    Stencil(Box<LiouvilleError>),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// An analytic function of one complex variable, written in the expression
/// grammar with the reserved variable `zeta`.
#[derive(Debug, Clone)]
pub struct AnalyticMap {
    expr: Expr,
}

impl AnalyticMap {
    pub fn new(expr: Expr) -> Result<AnalyticMap, LiouvilleError> {
        let stray: Vec<String> = expr
            .free_variables()
            .into_iter()
            .filter(|v| v != "zeta")
            .collect();
        if !stray.is_empty() {
            return Err(LiouvilleError::BadMap(stray));
        }
        Ok(AnalyticMap { expr })
    }

    pub fn parse(text: &str) -> Result<AnalyticMap, LiouvilleError> {
        AnalyticMap::new(crate::expr::parse_expression(text)?)
    }

    /// The monomial zeta^n.
    pub fn monomial(n: Rational64) -> AnalyticMap {
        AnalyticMap {
            expr: Expr::power(Expr::variable("zeta"), n),
        }
    }

    /// g^nu of this map (used for the conjugate-power reality experiment).
    pub fn power(&self, nu: i64) -> AnalyticMap {
        AnalyticMap {
            expr: Expr::power(self.expr.clone(), Rational64::from_integer(nu)),
        }
    }

    pub fn expr(&self) -> &Expr {
        &self.expr
    }

    pub fn derivative(&self) -> AnalyticMap {
        AnalyticMap {
            expr: self.expr.differentiate("zeta").simplified(Domain::Unrestricted),
        }
    }

    pub fn eval(&self, z: Complex64, params: &Binding) -> Result<Complex64, EvalError> {
        let mut b = params.clone();
        b.set("zeta", z);
        self.expr.evaluate(&b)
    }
}

fn znum(u: f64, v: f64) -> Complex64 {
    Complex64::new(u, v)
}

/// General Liouville solution from an analytic g and anti-analytic h
/// (h is given as an expression in zeta and evaluated at the conjugate):
///
/// ω(u, v) = ½ ln( 4 g'(z) h'(z̄) / (1 - g(z) h(z̄))² ),  z = u + iv.
///
/// Principal branch; errors on poles, on non-real ω (reality violation) and
/// on log arguments within machine angle of the branch cut.
pub fn omega_general(
    g: &AnalyticMap,
    h: &AnalyticMap,
    p: [f64; 2],
    params: &Binding,
) -> Result<f64, LiouvilleError> {
    let [u, v] = p;
    let z = znum(u, v);
    let zb = z.conj();
    let gp = g.derivative().eval(z, params)?;
    let hp = h.derivative().eval(zb, params)?;
    let gv = g.eval(z, params)?;
    let hv = h.eval(zb, params)?;
    let denom = Complex64::new(1.0, 0.0) - gv * hv;
    if denom.norm_sqr() == 0.0 {
        return Err(LiouvilleError::Pole {
            what: "g(z) h(conj z) = 1".into(),
            u,
            v,
        });
    }
    let arg = 4.0 * gp * hp / (denom * denom);
    if arg.norm_sqr() == 0.0 {
        return Err(LiouvilleError::Pole {
            what: "g'(z) h'(conj z) = 0".into(),
            u,
            v,
        });
    }
    if arg.re < 0.0 && arg.im.abs() < 1e-12 * arg.re.abs() {
        return Err(LiouvilleError::BranchCut { u, v });
    }
    let omega = 0.5 * arg.ln();
    if omega.im.abs() > REALITY_TOL {
        return Err(LiouvilleError::NonReal {
            imag: omega.im,
            u,
            v,
        });
    }
    Ok(omega.re)
}

/// The conjugate ansatz h(z̄) = conj(g(z)): ω = ½ ln(4 |g'|² / (1 - |g|²)²),
/// real by construction. Poles at |g| = 1 and g' = 0.
pub fn omega_ns(g: &AnalyticMap, p: [f64; 2], params: &Binding) -> Result<f64, LiouvilleError> {
    let [u, v] = p;
    let z = znum(u, v);
    let gp = g.derivative().eval(z, params)?;
    let gv = g.eval(z, params)?;
    let denom = 1.0 - gv.norm_sqr();
    if denom == 0.0 {
        return Err(LiouvilleError::Pole {
            what: "|g(z)| = 1".into(),
            u,
            v,
        });
    }
    if gp.norm_sqr() == 0.0 {
        return Err(LiouvilleError::Pole {
            what: "g'(z) = 0".into(),
            u,
            v,
        });
    }
    Ok(0.5 * (4.0 * gp.norm_sqr() / (denom * denom)).ln())
}

/// The alternative ansatz h(z̄) = 1/conj(g(z)): ω = ½ ln(|g'|² / Im(g)²).
/// Poles on the lines Im(g) = 0 and at g' = 0.
pub fn omega_alt(g: &AnalyticMap, p: [f64; 2], params: &Binding) -> Result<f64, LiouvilleError> {
    let [u, v] = p;
    let z = znum(u, v);
    let gp = g.derivative().eval(z, params)?;
    let gv = g.eval(z, params)?;
    if gv.im == 0.0 {
        return Err(LiouvilleError::Pole {
            what: "Im(g(z)) = 0".into(),
            u,
            v,
        });
    }
    if gp.norm_sqr() == 0.0 {
        return Err(LiouvilleError::Pole {
            what: "g'(z) = 0".into(),
            u,
            v,
        });
    }
    Ok(0.5 * (gp.norm_sqr() / (gv.im * gv.im)).ln())
}

/// True when n is a positive half-integer (1/2, 1, 3/2, ...).
pub fn is_half_integer(n: Rational64) -> bool {
    n > Rational64::from_integer(0) && (*n.denom() == 1 || *n.denom() == 2)
}

/// The g(z) = z^n singular family in polar coordinates:
/// B = n² / (ρ² sin²(n φ)), single-valued exactly for half-integer n, and
/// insensitive to n -> -n. The solution of order n is singular along 2n rays.
pub fn zn_family(n: Rational64, rho: f64, phi: f64) -> Result<f64, LiouvilleError> {
    if !is_half_integer(n) {
        return Err(LiouvilleError::BadOrder(n.to_string()));
    }
    let nf = *n.numer() as f64 / *n.denom() as f64;
    let s = (nf * phi).sin();
    if s == 0.0 || rho == 0.0 {
        return Err(LiouvilleError::SingularRay { phi });
    }
    Ok(nf * nf / (rho * rho * s * s))
}

/// Five-point finite-difference residual of the Liouville equation
/// 4 ∂_z ∂_z̄ ω = e^{2ω} (the (u,v)-Laplacian route): at each sample,
/// |Δω - e^{2ω}| / e^{2ω} with step `h`. Samples must stay at least 4h away
/// from singular loci; a pole inside the stencil is an error.
pub fn liouville_residual(
    omega: impl Fn(f64, f64) -> Result<f64, LiouvilleError>,
    samples: &[[f64; 2]],
    h: f64,
    threshold: f64,
) -> Result<ResidualStats, LiouvilleError> {
    let mut values = Vec::with_capacity(samples.len());
    let mut points3 = Vec::with_capacity(samples.len());
    for &[u, v] in samples {
        let at = |uu: f64, vv: f64| -> Result<f64, LiouvilleError> {
            omega(uu, vv).map_err(|e| LiouvilleError::Stencil(Box::new(e)))
        };
        let center = at(u, v)?;
        let laplacian =
            (at(u + h, v)? + at(u - h, v)? + at(u, v + h)? + at(u, v - h)? - 4.0 * center)
                / (h * h);
        let rhs = (2.0 * center).exp();
        values.push((laplacian - rhs).abs() / rhs);
        points3.push([u, v, 0.0]);
    }
    Ok(stats_from(&values, &points3, threshold))
}

fn stats_from(values: &[f64], points: &[[f64; 3]], threshold: f64) -> ResidualStats {
    let mut max = 0.0f64;
    let mut worst = [f64::NAN; 3];
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for (v, p) in values.iter().zip(points) {
        if *v >= max {
            max = *v;
            worst = *p;
        }
        let y = v - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    ResidualStats {
        max,
        mean: if values.is_empty() {
            0.0
        } else {
            sum / values.len() as f64
        },
        point_count: values.len(),
        threshold,
        pass: max < threshold,
        worst_point: worst,
    }
}

/// Uniform rectangular grid over [min, max]² with n points per side.
pub fn rect_grid(min: f64, max: f64, n: usize) -> Vec<[f64; 2]> {
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let t = |k: usize| min + (max - min) * (k as f64 + 0.5) / n as f64;
            out.push([t(i), t(j)]);
        }
    }
    out
}

/// n-per-side polar grid in the principal sector 0 < φ < π/n of the z^n
/// family, with radial range [rho_min, rho_max] and a relative angular
/// margin keeping every point clear of the singular rays and branch cuts.
pub fn sector_grid(
    order: Rational64,
    rho_min: f64,
    rho_max: f64,
    n: usize,
    margin: f64,
) -> Result<Vec<[f64; 2]>, LiouvilleError> {
    if !is_half_integer(order) {
        return Err(LiouvilleError::BadOrder(order.to_string()));
    }
    let nf = *order.numer() as f64 / *order.denom() as f64;
    let phi_max = std::f64::consts::PI / nf;
    let lo = margin * phi_max;
    let hi = (1.0 - margin) * phi_max;
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let rho = rho_min + (rho_max - rho_min) * (i as f64 + 0.5) / n as f64;
            let phi = lo + (hi - lo) * (j as f64 + 0.5) / n as f64;
            out.push([rho * phi.cos(), rho * phi.sin()]);
        }
    }
    Ok(out)
}

/// A planar solution presented through its conformal exponent ω(u, v),
/// with the derived magnitude B = e^{2ω} (positive wherever ω is finite
/// and real) and a description of its singular locus.
pub struct PlanarSolution {
    omega: Box<dyn Fn(f64, f64) -> Result<f64, LiouvilleError> + Sync>,
    pub singular_locus: String,
}

impl PlanarSolution {
    pub fn new(
        omega: impl Fn(f64, f64) -> Result<f64, LiouvilleError> + Sync + 'static,
        singular_locus: impl Into<String>,
    ) -> PlanarSolution {
        PlanarSolution {
            omega: Box::new(omega),
            singular_locus: singular_locus.into(),
        }
    }

    /// From the alternative ansatz ω = ½ ln(|g'|²/Im(g)²).
    pub fn from_alt(g: AnalyticMap, params: Binding) -> PlanarSolution {
        PlanarSolution::new(
            move |u, v| omega_alt(&g, [u, v], &params),
            "lines Im(g) = 0 and points g' = 0",
        )
    }

    /// From the conjugate ansatz ω = ½ ln(4|g'|²/(1-|g|²)²).
    pub fn from_ns(g: AnalyticMap, params: Binding) -> PlanarSolution {
        PlanarSolution::new(
            move |u, v| omega_ns(&g, [u, v], &params),
            "preimage of |g| = 1 and points g' = 0",
        )
    }

    /// From the z^n closed form; the solution of order n is singular along
    /// 2n rays through the origin and the roots of unity of order 2n.
    pub fn from_zn(n: Rational64) -> Result<PlanarSolution, LiouvilleError> {
        if !is_half_integer(n) {
            return Err(LiouvilleError::BadOrder(n.to_string()));
        }
        let rays = format!(
            "{} rays through the roots of unity of order {}",
            2.0 * (*n.numer() as f64 / *n.denom() as f64),
            Rational64::from_integer(2) * n
        );
        Ok(PlanarSolution::new(
            move |u, v| {
                let rho = (u * u + v * v).sqrt();
                let phi = v.atan2(u);
                zn_family(n, rho, phi).map(|b| 0.5 * b.ln())
            },
            rays,
        ))
    }

    pub fn omega(&self, u: f64, v: f64) -> Result<f64, LiouvilleError> {
        (self.omega)(u, v)
    }

    /// B = e^{2ω}.
    pub fn b(&self, u: f64, v: f64) -> Result<f64, LiouvilleError> {
        Ok((2.0 * self.omega(u, v)?).exp())
    }

    pub fn residual(
        &self,
        samples: &[[f64; 2]],
        h: f64,
        threshold: f64,
    ) -> Result<ResidualStats, LiouvilleError> {
        liouville_residual(|u, v| self.omega(u, v), samples, h, threshold)
    }
}

/// Coordinate axis of the embedded field direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub fn index(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
            Axis::Z => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Axis::X => "x",
            Axis::Y => "y",
            Axis::Z => "z",
        }
    }

    pub fn parse(s: &str) -> Option<Axis> {
        match s {
            "x" | "ex" | "e_x" => Some(Axis::X),
            "y" | "ey" | "e_y" => Some(Axis::Y),
            "z" | "ez" | "e_z" => Some(Axis::Z),
            _ => None,
        }
    }
}

/// Embed a planar magnitude B(u, v) as the 3D field H = sign · B · axis,
/// substituting the plane coordinates (u, v) by the two Cartesian
/// coordinates orthogonal to the axis. The plane pair must be exactly the
/// complement of the axis.
pub fn embed_planar(
    b2d: &Expr,
    axis: Axis,
    plane: (Axis, Axis),
    sign: f64,
) -> Result<VectorField, LiouvilleError> {
    let mut used = [false; 3];
    used[axis.index()] = true;
    used[plane.0.index()] = true;
    used[plane.1.index()] = true;
    if used != [true; 3] {
        return Err(LiouvilleError::BadMap(vec![format!(
            "plane ({}, {}) must be orthogonal to axis {}",
            plane.0.name(),
            plane.1.name(),
            axis.name()
        )]));
    }
    let stray: Vec<String> = b2d
        .free_variables()
        .into_iter()
        .filter(|v| v != "u" && v != "v")
        .collect();
    if !stray.is_empty() {
        return Err(LiouvilleError::BadMap(stray));
    }
    let substituted = b2d
        .substitute("u", &Expr::variable(plane.0.name()))
        .substitute("v", &Expr::variable(plane.1.name()));
    let component = (Expr::number(sign) * substituted).simplified(Domain::Unrestricted);
    let mut comps = [Expr::zero(), Expr::zero(), Expr::zero()];
    comps[axis.index()] = component;
    let [c1, c2, c3] = comps;
    Ok(VectorField::new(c1, c2, c3))
}
