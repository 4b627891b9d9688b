//! Symbolic 3-vector fields in Cartesian coordinates, vector calculus, and
//! rejection-sampled point sets that dodge the singular loci of the fields
//! under test.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use crate::expr::{Binding, Domain, EvalError, Expr, ParseError};
use crate::lift::Section;

/// The reserved Cartesian coordinate names.
pub const COORDS: [&str; 3] = ["x", "y", "z"];

/// A symbolic vector field with Cartesian components sharing the free
/// variables {x, y, z} plus declared named constants.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorField {
    components: [Expr; 3],
}

#[derive(Debug, thiserror::Error)]
pub enum FieldError {
    #[error("sample box has empty volume on axis {axis}: [{lo}, {hi}]")]
    EmptyBox { axis: usize, lo: f64, hi: f64 },
    #[error(
        "sample rejection rate too high: {accepted} of {requested} candidates accepted (need at least {minimum})"
    )]
    RejectionRate {
        accepted: usize,
        requested: usize,
        minimum: usize,
    },
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

impl VectorField {
    pub fn new(c1: Expr, c2: Expr, c3: Expr) -> VectorField {
        VectorField {
            components: [c1, c2, c3],
        }
    }

    pub fn zero() -> VectorField {
        VectorField::new(Expr::zero(), Expr::zero(), Expr::zero())
    }

    pub fn component(&self, i: usize) -> &Expr {
        &self.components[i]
    }

    pub fn components(&self) -> &[Expr; 3] {
        &self.components
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Expr::is_zero)
    }

    pub fn map(&self, f: impl Fn(&Expr) -> Expr) -> VectorField {
        VectorField::new(
            f(&self.components[0]),
            f(&self.components[1]),
            f(&self.components[2]),
        )
    }

    pub fn simplified(&self, domain: Domain) -> VectorField {
        self.map(|c| c.simplified(domain))
    }

    pub fn negate(&self) -> VectorField {
        self.map(|c| Expr::negate(c.clone()))
    }

    pub fn scale(&self, k: f64) -> VectorField {
        self.map(|c| Expr::number(k) * c.clone())
    }

    /// Total tree node count over the three components.
    pub fn node_count(&self) -> u64 {
        self.components.iter().map(Expr::node_count).sum()
    }

    pub fn free_identifiers(&self) -> std::collections::BTreeSet<String> {
        let mut s = std::collections::BTreeSet::new();
        for c in &self.components {
            s.extend(c.free_identifiers());
        }
        s
    }

    /// curl F = (∂2F3 - ∂3F2, ∂3F1 - ∂1F3, ∂1F2 - ∂2F1), simplified.
    pub fn curl(&self, domain: Domain) -> VectorField {
        let d = |i: usize, j: usize| self.components[j].differentiate(COORDS[i]);
        VectorField::new(
            (d(1, 2) - d(2, 1)).simplified(domain),
            (d(2, 0) - d(0, 2)).simplified(domain),
            (d(0, 1) - d(1, 0)).simplified(domain),
        )
    }

    /// div F = ∂1F1 + ∂2F2 + ∂3F3, simplified.
    pub fn divergence(&self, domain: Domain) -> Expr {
        Expr::sum(
            (0..3)
                .map(|i| self.components[i].differentiate(COORDS[i]))
                .collect(),
        )
        .simplified(domain)
    }

    /// ‖F‖ = sqrt(F1² + F2² + F3²), simplified.
    pub fn magnitude(&self, domain: Domain) -> Expr {
        Expr::sqrt(Expr::sum(
            self.components
                .iter()
                .map(|c| Expr::int_power(c.clone(), 2))
                .collect(),
        ))
        .simplified(domain)
    }

    /// Evaluate the three components at a binding.
    pub fn evaluate(&self, binding: &Binding) -> Result<[Complex64; 3], EvalError> {
        Ok([
            self.components[0].evaluate(binding)?,
            self.components[1].evaluate(binding)?,
            self.components[2].evaluate(binding)?,
        ])
    }

    /// Evaluate at a point with extra parameter bindings.
    pub fn evaluate_at(
        &self,
        p: [f64; 3],
        params: &Binding,
    ) -> Result<[Complex64; 3], EvalError> {
        let mut b = params.clone();
        b.set_point(p);
        self.evaluate(&b)
    }
}

/// grad f = (∂1f, ∂2f, ∂3f), simplified.
pub fn gradient(f: &Expr, domain: Domain) -> VectorField {
    VectorField::new(
        f.differentiate(COORDS[0]).simplified(domain),
        f.differentiate(COORDS[1]).simplified(domain),
        f.differentiate(COORDS[2]).simplified(domain),
    )
}

pub fn norm3(v: &[Complex64; 3]) -> f64 {
    (v[0].norm_sqr() + v[1].norm_sqr() + v[2].norm_sqr()).sqrt()
}

/// Sample-set generation config: axis-aligned box, count, RNG seed, and the
/// rejection thresholds ε_mag (minimum ‖H‖) and ε_sec (minimum section
/// denominator ratio (H ± H³)/H).
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SampleConfig {
    pub box_min: [f64; 3],
    pub box_max: [f64; 3],
    pub count: usize,
    pub rng_seed: u64,
    pub eps_mag: f64,
    pub eps_sec: f64,
}

impl Default for SampleConfig {
    fn default() -> Self {
        // the positive-octant default box avoids every singular locus of the
        // worked solution families (origin, z-axis, coordinate planes)
        SampleConfig {
            box_min: [0.3; 3],
            box_max: [1.7; 3],
            count: 100,
            rng_seed: 42,
            eps_mag: 1e-8,
            eps_sec: 1e-6,
        }
    }
}

/// Points retained after rejection, in generation order.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SampleSet {
    pub points: Vec<[f64; 3]>,
}

impl SampleSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// CSV export: header `x,y,z`, 17 significant digits per coordinate.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,y,z\n");
        for p in &self.points {
            out.push_str(&format!("{:.16e},{:.16e},{:.16e}\n", p[0], p[1], p[2]));
        }
        out
    }
}

/// Draw `cfg.count` uniform candidates in the box (deterministic for a fixed
/// seed) and keep those at which the field is regular for the section:
/// ‖H‖ ≥ ε_mag and (H ± H³)/H ≥ ε_sec. Points where evaluation hits a pole
/// are rejected. Fails loudly when fewer than 80% of candidates survive.
pub fn sample_points(
    cfg: &SampleConfig,
    field: &VectorField,
    params: &Binding,
    section: Section,
) -> Result<SampleSet, FieldError> {
    for axis in 0..3 {
        if !(cfg.box_max[axis] > cfg.box_min[axis]) {
            return Err(FieldError::EmptyBox {
                axis,
                lo: cfg.box_min[axis],
                hi: cfg.box_max[axis],
            });
        }
    }
    let mut rng = ChaCha20Rng::seed_from_u64(cfg.rng_seed);
    let mut points = Vec::with_capacity(cfg.count);
    for _ in 0..cfg.count {
        let p = [
            rng.gen_range(cfg.box_min[0]..cfg.box_max[0]),
            rng.gen_range(cfg.box_min[1]..cfg.box_max[1]),
            rng.gen_range(cfg.box_min[2]..cfg.box_max[2]),
        ];
        if point_is_regular(field, p, params, section, cfg.eps_mag, cfg.eps_sec) {
            points.push(p);
        }
    }
    let minimum = (0.8 * cfg.count as f64).ceil() as usize;
    if points.len() < minimum {
        return Err(FieldError::RejectionRate {
            accepted: points.len(),
            requested: cfg.count,
            minimum,
        });
    }
    Ok(SampleSet { points })
}

fn point_is_regular(
    field: &VectorField,
    p: [f64; 3],
    params: &Binding,
    section: Section,
    eps_mag: f64,
    eps_sec: f64,
) -> bool {
    let v = match field.evaluate_at(p, params) {
        Ok(v) => v,
        Err(_) => return false,
    };
    let h = norm3(&v);
    if !(h >= eps_mag) {
        return false;
    }
    let h3 = v[2].re;
    let denom = match section {
        Section::NorthRegular => h + h3,
        Section::SouthRegular => h - h3,
    };
    denom / h >= eps_sec
}
