//! The fixed-point iteration H -> ±curl(A[H]): repeatedly substitute the
//! current field into the potential formula and take the curl, declaring
//! convergence numerically on a sample set. Fixed points solve the
//! Seiberg-Witten (+) or Freund (-) system.
//!
//! The iteration is expected to fail for generic seeds, typically through
//! runaway symbolic growth; the node budget turns that failure mode into a
//! first-class status instead of a hang.

use std::time::Instant;

use rayon::prelude::*;

use crate::config::RunConfig;
use crate::expr::{Binding, Domain, EvalError, Expr};
use crate::fields::{norm3, sample_points, FieldError, SampleSet, VectorField};
use crate::lift::lift_potential;

/// Which constraint sign closes the lifted system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EquationSystem {
    /// H = +B
    SeibergWitten,
    /// H = -B
    Freund,
}

impl EquationSystem {
    pub fn sign(self) -> f64 {
        match self {
            EquationSystem::SeibergWitten => 1.0,
            EquationSystem::Freund => -1.0,
        }
    }

    pub fn parse(s: &str) -> Option<EquationSystem> {
        match s.to_ascii_lowercase().as_str() {
            "sw" | "seiberg-witten" | "seibergwitten" => Some(EquationSystem::SeibergWitten),
            "freund" => Some(EquationSystem::Freund),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            EquationSystem::SeibergWitten => "seiberg-witten",
            EquationSystem::Freund => "freund",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IterationStatus {
    /// Last fixed-point distance below tolerance.
    Converged,
    /// Consecutive simplified iterates were structurally equal.
    ExactFixedPoint,
    MaxIterations,
    SizeBlowup,
    EvaluationFailure,
}

impl IterationStatus {
    /// Both convergence statuses count as success.
    pub fn is_success(self) -> bool {
        matches!(
            self,
            IterationStatus::Converged | IterationStatus::ExactFixedPoint
        )
    }
}

/// Full record of one iteration run. `distances[k]` is the relative
/// fixed-point distance between `iterates[k+1]` and `iterates[k]`;
/// `node_counts[k]` is the total tree node count of `iterates[k]`.
#[derive(Debug, Clone)]
pub struct IterationTrace {
    pub seed: VectorField,
    pub system: EquationSystem,
    pub iterates: Vec<VectorField>,
    pub distances: Vec<f64>,
    pub node_counts: Vec<u64>,
    pub wall_ms: Vec<f64>,
    pub status: IterationStatus,
    pub samples: SampleSet,
    /// Failure detail for `EvaluationFailure`.
    pub failure: Option<String>,
}

impl IterationTrace {
    pub fn final_field(&self) -> &VectorField {
        self.iterates.last().expect("trace holds at least the seed")
    }

    /// Solution representative for a successful run: the more compact of
    /// the last two iterates. They agree pointwise within tolerance (that
    /// is what convergence certified), and the earlier one is usually the
    /// clean closed form while its image carries simplification debris.
    pub fn solution_field(&self) -> &VectorField {
        if self.status.is_success() && self.iterates.len() >= 2 {
            let last = &self.iterates[self.iterates.len() - 1];
            let prev = &self.iterates[self.iterates.len() - 2];
            if prev.node_count() <= last.node_count() {
                return prev;
            }
        }
        self.final_field()
    }
}

/// Serializable form of a trace step.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct StepRecord {
    pub distance: f64,
    pub node_count: u64,
    pub wall_ms: f64,
}

/// Serializable form of a whole run, with field components printed in the
/// expression grammar so outputs are re-ingestible.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct TraceRecord {
    pub seed: [String; 3],
    pub system: EquationSystem,
    pub params: std::collections::BTreeMap<String, f64>,
    pub status: IterationStatus,
    pub initial_node_count: u64,
    pub steps: Vec<StepRecord>,
    pub final_field: [String; 3],
    pub solution_field: [String; 3],
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
}

fn field_strings(f: &VectorField) -> [String; 3] {
    [
        f.component(0).to_string(),
        f.component(1).to_string(),
        f.component(2).to_string(),
    ]
}

impl IterationTrace {
    /// Build the exportable record. With `include_timings` off, wall times
    /// are zeroed so identical runs produce byte-identical files.
    pub fn to_record(
        &self,
        params: &std::collections::BTreeMap<String, f64>,
        include_timings: bool,
    ) -> TraceRecord {
        let steps = self
            .distances
            .iter()
            .zip(&self.node_counts[1..])
            .zip(&self.wall_ms)
            .map(|((d, n), w)| StepRecord {
                distance: *d,
                node_count: *n,
                wall_ms: if include_timings { *w } else { 0.0 },
            })
            .collect();
        TraceRecord {
            seed: field_strings(&self.seed),
            system: self.system,
            params: params.clone(),
            status: self.status,
            initial_node_count: self.node_counts[0],
            steps,
            final_field: field_strings(self.final_field()),
            solution_field: field_strings(self.solution_field()),
            failure: self.failure.clone(),
        }
    }
}

/// The full solution tuple of a successful run, as expression strings.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct SolutionRecord {
    pub system: EquationSystem,
    pub h: [String; 3],
    pub psi_re1: String,
    pub psi_im1: String,
    pub psi_re2: String,
    pub psi_im2: String,
    pub a: [String; 3],
    pub b: [String; 3],
}

/// Lift the solution field of a successful trace into the full tuple
/// (ψ, A, B = s·H).
pub fn solution_record(trace: &IterationTrace, domain: Domain) -> SolutionRecord {
    let h = trace.solution_field();
    let psi = crate::lift::lift_spinor(h, crate::lift::Section::NorthRegular, domain);
    let a = lift_potential(h, domain);
    let sign = Expr::number(trace.system.sign());
    let b = h.map(|c| (sign.clone() * c.clone()).simplified(domain));
    SolutionRecord {
        system: trace.system,
        h: field_strings(h),
        psi_re1: psi.up.re.to_string(),
        psi_im1: psi.up.im.to_string(),
        psi_re2: psi.down.re.to_string(),
        psi_im2: psi.down.im.to_string(),
        a: field_strings(&a),
        b: field_strings(&b),
    }
}

#[derive(Debug, thiserror::Error)]
pub enum IterateError {
    #[error("invalid config: {0}")]
    InvalidConfig(String),
    #[error("seed field is identically zero")]
    ZeroSeed,
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// One application of the map: s * curl(A[H]), simplified on `domain`.
pub fn step(h: &VectorField, system: EquationSystem, domain: Domain) -> VectorField {
    let a = lift_potential(h, domain);
    let b = a.curl(domain);
    match system {
        EquationSystem::SeibergWitten => b,
        EquationSystem::Freund => b.negate().simplified(domain),
    }
}

/// max over sample points of ‖Ha(p) - Hb(p)‖ / max(‖Ha(p)‖, eps_mag).
/// Evaluation failure at any point aborts with the offending point.
pub fn fixed_point_distance(
    ha: &VectorField,
    hb: &VectorField,
    samples: &SampleSet,
    params: &Binding,
    eps_mag: f64,
) -> Result<f64, EvalError> {
    let distances: Result<Vec<f64>, EvalError> = samples
        .points
        .par_iter()
        .map(|&p| {
            let va = ha.evaluate_at(p, params)?;
            let vb = hb.evaluate_at(p, params)?;
            let diff = [va[0] - vb[0], va[1] - vb[1], va[2] - vb[2]];
            Ok(norm3(&diff) / norm3(&va).max(eps_mag))
        })
        .collect();
    Ok(distances?.into_iter().fold(0.0, f64::max))
}

/// Run the iteration from `seed` until convergence, structural fixed point,
/// node-budget blowup, max iterations, or evaluation failure. The sample
/// set is generated once, by rejection against the seed field.
pub fn run(
    seed: &VectorField,
    system: EquationSystem,
    cfg: &RunConfig,
) -> Result<IterationTrace, IterateError> {
    cfg.validate()
        .map_err(|e| IterateError::InvalidConfig(e.to_string()))?;
    let domain = cfg.domain();
    let params = cfg.binding();
    let seed = seed.simplified(domain);
    if seed.is_zero() {
        return Err(IterateError::ZeroSeed);
    }
    let unbound: Vec<String> = seed
        .free_identifiers()
        .into_iter()
        .filter(|name| !crate::fields::COORDS.contains(&name.as_str()) && params.get(name).is_none())
        .collect();
    if !unbound.is_empty() {
        return Err(IterateError::InvalidConfig(format!(
            "seed has unbound identifiers: {}",
            unbound.join(", ")
        )));
    }
    let samples = sample_points(&cfg.sample_config(), &seed, &params, cfg.section)?;

    let mut trace = IterationTrace {
        seed: seed.clone(),
        system,
        node_counts: vec![seed.node_count()],
        iterates: vec![seed],
        distances: Vec::new(),
        wall_ms: Vec::new(),
        status: IterationStatus::MaxIterations,
        samples,
        failure: None,
    };

    for _ in 0..cfg.max_iterations {
        let prev = trace.iterates.last().unwrap().clone();
        let start = Instant::now();
        let next = step(&prev, system, domain);
        trace.wall_ms.push(start.elapsed().as_secs_f64() * 1e3);
        trace.node_counts.push(next.node_count());

        // the zero field is a degenerate fixed point with no lift: the
        // section denominator vanishes identically, so treat collapse to
        // zero as a failure, not a solution
        if next.is_zero() {
            trace.distances.push(f64::NAN);
            trace.iterates.push(next);
            trace.status = IterationStatus::EvaluationFailure;
            trace.failure = Some("iteration collapsed to the zero field".to_string());
            return Ok(trace);
        }
        let exact = next == prev;
        let distance = if exact {
            0.0
        } else {
            match fixed_point_distance(&next, &prev, &trace.samples, &params, cfg.eps_mag) {
                Ok(d) => d,
                Err(e) => {
                    trace.iterates.push(next);
                    trace.distances.push(f64::NAN);
                    trace.status = IterationStatus::EvaluationFailure;
                    trace.failure = Some(e.to_string());
                    return Ok(trace);
                }
            }
        };
        trace.distances.push(distance);
        trace.iterates.push(next);

        if exact {
            trace.status = IterationStatus::ExactFixedPoint;
            return Ok(trace);
        }
        if distance < cfg.tolerance {
            trace.status = IterationStatus::Converged;
            return Ok(trace);
        }
        if trace.node_counts.last().copied().unwrap_or(0) > cfg.node_budget {
            trace.status = IterationStatus::SizeBlowup;
            return Ok(trace);
        }
    }
    trace.status = IterationStatus::MaxIterations;
    Ok(trace)
}
