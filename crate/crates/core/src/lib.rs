//! Conformal geometry and model scattering on asymptotically hyperbolic collars.
//!
//! The library has three computational layers that check each other:
//!
//! * a formal layer: truncated power/log series in the boundary-defining
//!   variable `x` over pluggable coefficient algebras ([`series`], [`algebra`]),
//!   used to solve the Poincare normal form order by order ([`fg`]) and to run
//!   the boundary recursion producing the conformally invariant operators
//!   `P_k`, the constants `c_{k,s}`, and the Q-curvature ([`gjms`]);
//! * a geometric layer: periodic torus charts with spectral differentiation,
//!   the curvature suite, and an exact per-eigenvalue Einstein backend
//!   ([`chart`], [`einstein`]);
//! * an analytic layer: per-mode scattering matrices of separable model
//!   problems computed by ODE integration, with residues extracted by contour
//!   integration ([`scatter`]).
//!
//! The two independent routes to the same quantities (series recursion vs.
//! scattering residues, volume coefficients vs. Q-curvature integrals) are
//! cross-checked by the `verify` pipeline ([`verify`]).

pub mod algebra;
pub mod chart;
pub mod config;
pub mod einstein;
pub mod error;
pub mod expr;
pub mod fg;
pub mod gjms;
pub mod records;
pub mod reference;
pub mod scatter;
pub mod series;
pub mod verify;

pub use error::{Error, Result};

/// Initialise the global worker pool from the optional `CONFSCAT_WORKERS`
/// environment variable. Safe to call more than once; later calls are no-ops.
pub fn init_workers() {
    if let Ok(v) = std::env::var("CONFSCAT_WORKERS") {
        if let Ok(k) = v.parse::<usize>() {
            if k >= 1 {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(k).build_global();
            }
        }
    }
}
