//! Residual-based certification that a tuple (ψ, A, B, H) satisfies the
//! Seiberg-Witten or Freund system, the magnetostatics checks, and the
//! loop-holonomy integral.
//!
//! All residuals are relative with an additive floor `eps_mag`, so the
//! singular solution families are verified on their regular sets without
//! scale bias. Means use compensated summation and a fixed point order, so
//! reports are deterministic regardless of evaluation parallelism.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::config::RunConfig;
use crate::expr::{Binding, Domain, EvalError, Expr};
use crate::fields::{gradient, norm3, sample_points, FieldError, SampleSet, VectorField};
use crate::iterate::EquationSystem;
use crate::lift::{
    bilinear, lift_potential, lift_spinor, mat2_add, mat2_frobenius, mat2_scale, mat2_sub,
    mat2_zero, sigma, sigma_apply, Mat2, SpinorField,
};

#[derive(Debug, thiserror::Error)]
pub enum VerifyError {
    #[error("field is identically zero; nothing to verify")]
    DegenerateField,
    #[error("quadrature needs at least 64 nodes, got {0}")]
    TooFewNodes(usize),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Pointwise residual statistics over a sample set.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ResidualStats {
    pub max: f64,
    pub mean: f64,
    pub point_count: usize,
    pub threshold: f64,
    pub pass: bool,
    pub worst_point: [f64; 3],
}

impl ResidualStats {
    fn from_values(values: &[f64], points: &[[f64; 3]], threshold: f64) -> ResidualStats {
        let mut max = 0.0f64;
        let mut worst = [f64::NAN; 3];
        // compensated summation pins the mean independent of thread count
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
        let mean = if values.is_empty() {
            0.0
        } else {
            sum / values.len() as f64
        };
        ResidualStats {
            max,
            mean,
            point_count: values.len(),
            threshold,
            pass: max < threshold,
            worst_point: worst,
        }
    }
}

fn pointwise(
    samples: &SampleSet,
    threshold: f64,
    f: impl Fn([f64; 3]) -> Result<f64, EvalError> + Sync,
) -> Result<ResidualStats, VerifyError> {
    let values: Result<Vec<f64>, EvalError> =
        samples.points.par_iter().map(|&p| f(p)).collect();
    Ok(ResidualStats::from_values(
        &values?,
        &samples.points,
        threshold,
    ))
}

fn norm2c(v: &[Complex64; 2]) -> f64 {
    (v[0].norm_sqr() + v[1].norm_sqr()).sqrt()
}

/// Residual of the Weyl equation iσ^k(∂_k + iA_k)ψ = 0:
/// ‖σ^k(∂_kψ + iA_kψ)‖ / (‖σ^k∂_kψ‖ + ‖σ^kA_kψ‖ + eps).
pub fn weyl_residual(
    psi: &SpinorField,
    a: &VectorField,
    samples: &SampleSet,
    params: &Binding,
    threshold: f64,
    eps_mag: f64,
) -> Result<ResidualStats, VerifyError> {
    let dpsi: Vec<SpinorField> = (0..3).map(|k| psi.differentiate_coord(k)).collect();
    pointwise(samples, threshold, |p| {
        let i = Complex64::new(0.0, 1.0);
        let mut total = [Complex64::new(0.0, 0.0); 2];
        let mut deriv_part = [Complex64::new(0.0, 0.0); 2];
        let mut gauge_part = [Complex64::new(0.0, 0.0); 2];
        let psi_val = psi.evaluate_at(p, params)?;
        let a_val = a.evaluate_at(p, params)?;
        for k in 0..3 {
            let d = dpsi[k].evaluate_at(p, params)?;
            let gauge = [i * a_val[k] * psi_val[0], i * a_val[k] * psi_val[1]];
            let sd = sigma_apply(k + 1, d);
            let sg = sigma_apply(k + 1, gauge);
            for c in 0..2 {
                deriv_part[c] += sd[c];
                gauge_part[c] += sg[c];
                total[c] += sd[c] + sg[c];
            }
        }
        Ok(norm2c(&total) / (norm2c(&deriv_part) + norm2c(&gauge_part) + eps_mag))
    })
}

/// Residual of ⟨ψ|σ^k|ψ⟩ = H^k: ‖bilinear(ψ) - H‖ / max(‖H‖, eps).
pub fn bilinear_residual(
    psi: &SpinorField,
    h: &VectorField,
    samples: &SampleSet,
    params: &Binding,
    threshold: f64,
    eps_mag: f64,
) -> Result<ResidualStats, VerifyError> {
    let projected = bilinear(psi, Domain::Unrestricted);
    pointwise(samples, threshold, |p| {
        let want = h.evaluate_at(p, params)?;
        let got = projected.evaluate_at(p, params)?;
        let diff = [got[0] - want[0], got[1] - want[1], got[2] - want[2]];
        Ok(norm3(&diff) / norm3(&want).max(eps_mag))
    })
}

/// Residual of curl A = B: ‖curl(A) - B‖ / max(‖B‖, eps).
pub fn field_strength_residual(
    a: &VectorField,
    b: &VectorField,
    samples: &SampleSet,
    params: &Binding,
    domain: Domain,
    threshold: f64,
    eps_mag: f64,
) -> Result<ResidualStats, VerifyError> {
    let curl_a = a.curl(domain);
    pointwise(samples, threshold, |p| {
        let got = curl_a.evaluate_at(p, params)?;
        let want = b.evaluate_at(p, params)?;
        let diff = [got[0] - want[0], got[1] - want[1], got[2] - want[2]];
        Ok(norm3(&diff) / norm3(&want).max(eps_mag))
    })
}

/// Residual of the constraint H = ±B: ‖H - s·B‖ / max(‖H‖, eps).
pub fn constraint_residual(
    h: &VectorField,
    b: &VectorField,
    system: EquationSystem,
    samples: &SampleSet,
    params: &Binding,
    threshold: f64,
    eps_mag: f64,
) -> Result<ResidualStats, VerifyError> {
    let s = system.sign();
    pointwise(samples, threshold, |p| {
        let hv = h.evaluate_at(p, params)?;
        let bv = b.evaluate_at(p, params)?;
        let diff = [hv[0] - s * bv[0], hv[1] - s * bv[1], hv[2] - s * bv[2]];
        Ok(norm3(&diff) / norm3(&hv).max(eps_mag))
    })
}

/// Residual of div H = 0, scaled by the Frobenius norm of the Jacobian:
/// |div H| / (‖∂_i H^j‖_F + eps).
pub fn divergence_residual(
    h: &VectorField,
    samples: &SampleSet,
    params: &Binding,
    domain: Domain,
    threshold: f64,
    eps_mag: f64,
) -> Result<ResidualStats, VerifyError> {
    let div = h.divergence(domain);
    let jacobian: Vec<VectorField> = (0..3)
        .map(|j| gradient(h.component(j), domain))
        .collect();
    pointwise(samples, threshold, |p| {
        let mut b = params.clone();
        b.set_point(p);
        let d = div.evaluate(&b)?;
        let mut scale = 0.0;
        for row in &jacobian {
            let g = row.evaluate(&b)?;
            scale += g[0].norm_sqr() + g[1].norm_sqr() + g[2].norm_sqr();
        }
        Ok(d.norm() / (scale.sqrt() + eps_mag))
    })
}

/// Entrywise residual of the Pauli-matrix form of magnetostatics,
/// σ^k ∂_k(H^j σ_j) = i J^j σ_j with J = curl H, checked by literal 2x2
/// matrix arithmetic (an independent route to the divergence check).
pub fn pauli_form_residual(
    h: &VectorField,
    samples: &SampleSet,
    params: &Binding,
    domain: Domain,
    threshold: f64,
    eps_mag: f64,
) -> Result<ResidualStats, VerifyError> {
    let jacobian: Vec<VectorField> = (0..3)
        .map(|j| gradient(h.component(j), domain))
        .collect();
    let current = h.curl(domain);
    pointwise(samples, threshold, |p| {
        let mut b = params.clone();
        b.set_point(p);
        // lhs = sigma^k sigma_j ∂_k H^j; the scale is taken from the terms
        // being summed (not the cancelled sums, which vanish for curl-free
        // divergence-free fields)
        let mut lhs = mat2_zero();
        let mut term_scale = 0.0f64;
        for j in 0..3 {
            let dj = jacobian[j].evaluate(&b)?;
            for k in 0..3 {
                let prod = mat2_mul(&sigma(k + 1), &sigma(j + 1));
                let term = mat2_scale(dj[k], &prod);
                term_scale += mat2_frobenius(&term);
                lhs = mat2_add(&lhs, &term);
            }
        }
        let jv = current.evaluate(&b)?;
        let mut rhs = mat2_zero();
        for j in 0..3 {
            let term = mat2_scale(Complex64::new(0.0, 1.0) * jv[j], &sigma(j + 1));
            term_scale += mat2_frobenius(&term);
            rhs = mat2_add(&rhs, &term);
        }
        let resid = mat2_frobenius(&mat2_sub(&lhs, &rhs));
        Ok(resid / (term_scale + eps_mag))
    })
}

fn mat2_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = mat2_zero();
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    out
}

/// Closed C¹ parametric curve given by three expressions of t ∈ [0, 1].
#[derive(Debug, Clone)]
pub struct LoopCurve {
    pub x: Expr,
    pub y: Expr,
    pub z: Expr,
}

impl LoopCurve {
    /// Horizontal unit circle at height z0, winding once counterclockwise.
    pub fn unit_circle(z0: f64) -> LoopCurve {
        use crate::expr::parse_expression as parse;
        LoopCurve {
            x: parse("cos(2*pi*t)").unwrap(),
            y: parse("sin(2*pi*t)").unwrap(),
            z: parse(&format!("{z0}")).unwrap(),
        }
    }

    fn components(&self) -> [&Expr; 3] {
        [&self.x, &self.y, &self.z]
    }
}

/// Loop integral of A·dr with an error estimate from node doubling.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct Holonomy {
    pub value: f64,
    pub error_estimate: f64,
    pub nodes: usize,
}

/// ∮ A·dr by the trapezoid rule on the periodic integrand (spectrally
/// accurate for smooth loops). Evaluates at n and 2n nodes; reports the 2n
/// value with |I_2n - I_n| as the error estimate.
pub fn holonomy(
    a: &VectorField,
    curve: &LoopCurve,
    n: usize,
    params: &Binding,
) -> Result<Holonomy, VerifyError> {
    if n < 64 {
        return Err(VerifyError::TooFewNodes(n));
    }
    let velocity: Vec<Expr> = curve
        .components()
        .iter()
        .map(|c| c.differentiate("t"))
        .collect();
    let integral = |nodes: usize| -> Result<f64, VerifyError> {
        let contributions: Result<Vec<f64>, VerifyError> = (0..nodes)
            .into_par_iter()
            .map(|i| {
                let t = i as f64 / nodes as f64;
                let mut b = params.clone();
                b.set_real("t", t);
                let p = [
                    curve.x.evaluate_real(&b)?,
                    curve.y.evaluate_real(&b)?,
                    curve.z.evaluate_real(&b)?,
                ];
                let v = [
                    velocity[0].evaluate_real(&b)?,
                    velocity[1].evaluate_real(&b)?,
                    velocity[2].evaluate_real(&b)?,
                ];
                let mut bp = params.clone();
                bp.set_point(p);
                let av = a.evaluate(&bp)?;
                Ok(av[0].re * v[0] + av[1].re * v[1] + av[2].re * v[2])
            })
            .collect();
        let values = contributions?;
        let mut sum = 0.0;
        let mut comp = 0.0;
        for v in values {
            let y = v - comp;
            let t = sum + y;
            comp = (t - sum) - y;
            sum = t;
        }
        Ok(sum / nodes as f64)
    };
    let coarse = integral(n)?;
    let fine = integral(2 * n)?;
    Ok(Holonomy {
        value: fine,
        error_estimate: (fine - coarse).abs(),
        nodes: 2 * n,
    })
}

/// A full candidate tuple for user-supplied verification.
#[derive(Debug, Clone)]
pub struct SolutionTuple {
    pub h: VectorField,
    pub psi: SpinorField,
    pub a: VectorField,
    pub b: VectorField,
}

/// Per-equation verification report; overall pass is the conjunction.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct VerificationReport {
    pub bilinear: ResidualStats,
    pub weyl: ResidualStats,
    pub field_strength: ResidualStats,
    pub constraint: ResidualStats,
    pub divergence_free: ResidualStats,
    pub pauli_form: ResidualStats,
    pub pass: bool,
}

impl VerificationReport {
    pub fn rows(&self) -> [(&'static str, &ResidualStats); 6] {
        [
            ("bilinear", &self.bilinear),
            ("weyl", &self.weyl),
            ("field_strength", &self.field_strength),
            ("constraint", &self.constraint),
            ("divergence_free", &self.divergence_free),
            ("pauli_form", &self.pauli_form),
        ]
    }

    /// Plain-text table.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "{:<16} {:>12} {:>12} {:>9} {:>6}  worst point\n",
            "equation", "max", "mean", "thresh", "pass"
        ));
        for (name, s) in self.rows() {
            out.push_str(&format!(
                "{:<16} {:>12.4e} {:>12.4e} {:>9.1e} {:>6}  ({:.4}, {:.4}, {:.4})\n",
                name,
                s.max,
                s.mean,
                s.threshold,
                if s.pass { "ok" } else { "FAIL" },
                s.worst_point[0],
                s.worst_point[1],
                s.worst_point[2]
            ));
        }
        out.push_str(&format!(
            "overall: {}\n",
            if self.pass { "pass" } else { "FAIL" }
        ));
        out
    }
}

fn assemble(
    tuple: &SolutionTuple,
    b_actual: &VectorField,
    system: EquationSystem,
    samples: &SampleSet,
    params: &Binding,
    domain: Domain,
    threshold: f64,
    eps_mag: f64,
) -> Result<VerificationReport, VerifyError> {
    let bilinear = bilinear_residual(&tuple.psi, &tuple.h, samples, params, threshold, eps_mag)?;
    let weyl = weyl_residual(&tuple.psi, &tuple.a, samples, params, threshold, eps_mag)?;
    let field_strength =
        field_strength_residual(&tuple.a, &tuple.b, samples, params, domain, threshold, eps_mag)?;
    let constraint =
        constraint_residual(&tuple.h, b_actual, system, samples, params, threshold, eps_mag)?;
    let divergence_free =
        divergence_residual(&tuple.h, samples, params, domain, threshold, eps_mag)?;
    let pauli_form = pauli_form_residual(&tuple.h, samples, params, domain, threshold, eps_mag)?;
    let pass = bilinear.pass
        && weyl.pass
        && field_strength.pass
        && constraint.pass
        && divergence_free.pass
        && pauli_form.pass;
    Ok(VerificationReport {
        bilinear,
        weyl,
        field_strength,
        constraint,
        divergence_free,
        pauli_form,
        pass,
    })
}

/// Verify a candidate generating field: the spinor and potential are
/// reconstructed from H, the tuple's B is s·H, and the constraint is
/// checked against the actually induced field strength curl(A[H]).
pub fn verify_solution(
    h: &VectorField,
    system: EquationSystem,
    cfg: &RunConfig,
) -> Result<VerificationReport, VerifyError> {
    let domain = cfg.domain();
    let h = h.simplified(domain);
    if h.is_zero() {
        return Err(VerifyError::DegenerateField);
    }
    let params = cfg.binding();
    let samples = sample_points(&cfg.sample_config(), &h, &params, cfg.section)?;
    let psi = lift_spinor(&h, cfg.section, domain);
    let a = lift_potential(&h, domain);
    let sign = Expr::number(system.sign());
    let b_tuple = h.map(|c| (sign.clone() * c.clone()).simplified(domain));
    let b_actual = a.curl(domain);
    let tuple = SolutionTuple {
        h: h.clone(),
        psi,
        a,
        b: b_tuple,
    };
    assemble(
        &tuple,
        &b_actual,
        system,
        &samples,
        &params,
        domain,
        cfg.threshold,
        cfg.eps_mag,
    )
}

/// Verify a fully user-supplied tuple (transcription checks): every piece
/// is taken as given; the constraint is checked against the given B.
pub fn verify_tuple(
    tuple: &SolutionTuple,
    system: EquationSystem,
    cfg: &RunConfig,
) -> Result<VerificationReport, VerifyError> {
    if tuple.h.is_zero() {
        return Err(VerifyError::DegenerateField);
    }
    let params = cfg.binding();
    let samples = sample_points(&cfg.sample_config(), &tuple.h, &params, cfg.section)?;
    assemble(
        tuple,
        &tuple.b,
        system,
        &samples,
        &params,
        cfg.domain(),
        cfg.threshold,
        cfg.eps_mag,
    )
}

/// Per-point residual CSV: x,y,z plus one column per equation.
pub fn residuals_csv(
    tuple: &SolutionTuple,
    b_actual: &VectorField,
    system: EquationSystem,
    samples: &SampleSet,
    params: &Binding,
    domain: Domain,
    eps_mag: f64,
) -> Result<String, VerifyError> {
    let mut out = String::from("x,y,z,bilinear,weyl,field_strength,constraint,divergence_free,pauli_form\n");
    for &p in &samples.points {
        let single = SampleSet { points: vec![p] };
        let report = assemble(
            tuple, b_actual, system, &single, params, domain, f64::INFINITY, eps_mag,
        )?;
        out.push_str(&format!(
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}\n",
            p[0],
            p[1],
            p[2],
            report.bilinear.max,
            report.weyl.max,
            report.field_strength.max,
            report.constraint.max,
            report.divergence_free.max,
            report.pauli_form.max
        ));
    }
    Ok(out)
}
