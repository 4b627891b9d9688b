//! Symbolic-numeric toolkit for lifting magnetostatic vector fields to
//! spinor/gauge-potential form, iterating the induced fixed-point map to
//! produce singular solutions of the Seiberg-Witten and Freund systems on
//! flat 3-space, and certifying candidate solutions by pointwise residual
//! checks — including the planar Liouville-equation solution families.
//!
//! The crate is organized around a small computer-algebra core:
//!
//! - [`expr`]: expression trees, parsing, complex evaluation, exact
//!   differentiation and best-effort simplification;
//! - [`fields`]: symbolic 3-vector fields, vector calculus and sample-set
//!   generation that avoids singular loci;
//! - [`lift`]: spinor and gauge-potential reconstruction from a field;
//! - [`iterate`]: the fixed-point iteration `H -> ±curl(A[H])` with
//!   numerical convergence detection;
//! - [`verify`]: residual checks for the full equation systems plus loop
//!   holonomy integrals;
//! - [`liouville`]: planar Liouville-equation solution families and their
//!   embedding as 3D fields;
//! - [`seeds`]: the registry of worked initial conditions with expected
//!   closed-form solutions;
//! - [`config`]: run configuration shared by the CLI and FFI surfaces.

pub mod config;
pub mod expr;
pub mod fields;
pub mod iterate;
pub mod lift;
pub mod liouville;
pub mod seeds;
pub mod verify;

/// Cap rayon's global thread pool from `HOPFLIFT_THREADS` if set. Safe to
/// call more than once; later calls are no-ops.
pub fn configure_threads_from_env() {
    if let Ok(v) = std::env::var("HOPFLIFT_THREADS") {
        if let Ok(n) = v.trim().parse::<usize>() {
            if n > 0 {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
        }
    }
}
