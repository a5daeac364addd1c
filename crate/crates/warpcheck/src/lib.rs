//! Numerical verification toolkit for warped-product metrics over
//! conformally flat pseudo-Euclidean bases.
//!
//! The library builds metrics of the form `phi^-2 g + f^2 g_F` over
//! `(R^n, g_ij = delta_ij eps_i)`, evaluates the Einstein condition
//! `Ric = lambda g` as per-equation residuals, instantiates the explicit
//! Ricci-flat solution families, and cross-checks every closed curvature
//! formula against a generic metric -> Christoffel -> Ricci pipeline.
//!
//! Modules:
//!
//! * [`diffgeo`] - signatures, points, scalar/metric fields, derivative
//!   engines, and the generic curvature pipeline (the independent oracle);
//! * [`warped`] - the conformal and warped metrics with their closed-form
//!   Ricci tensors and the flat-fiber brute-force check;
//! * [`einstein`] - direction classification, the characterizing PDE system,
//!   its reductions along a translation-invariant direction, and the
//!   modified Ricci residual;
//! * [`solutions`] - the explicit Ricci-flat families and the null-direction
//!   integrator;
//! * [`run`] - the deterministic verification/sampling/oracle suites behind
//!   the CLI.
//!
//! Batch evaluation is data-parallel via rayon under the default `parallel`
//! feature and falls back to sequential iteration without it; results are
//! reduced in index order either way, so reports do not depend on the worker
//! count.

pub mod batch;
pub mod config;
pub mod diffgeo;
pub mod einstein;
pub mod error;
pub mod jet;
pub mod profile;
pub mod report;
pub mod run;
pub mod sample;
pub mod solutions;
pub mod warped;

pub use config::NumericConfig;
pub use diffgeo::{
    christoffel, einstein_residual_generic, finite_difference_field, ricci_generic,
    CurvatureAtPoint, FieldJet, MetricField, Point, ScalarField, Signature,
};
pub use einstein::{
    bakry_emery_residual, classify_direction, lift_profiles, ode_residual_null,
    ode_residuals_nonnull, pde_residuals, reduction_gaps, CausalClass, Direction,
};
pub use error::{GeomError, Result};
pub use jet::Jet2;
pub use profile::{Interval, Profile, ProfilePair};
pub use report::{ConfigValue, EquationResidual, ResidualReport};
pub use run::{oracle_report, sample_rows, verify_report, Family, RunError, RunSpec, SampleRow};
pub use solutions::{
    alpha_exponents, beta, characteristic_roots, integrate_null_profile, m1_form_roots, Branch,
    ExpExample, NullProfile, Thm13Params, Thm14Params,
};
pub use warped::{
    conformal_hessian, conformal_ricci, flat_fiber_oracle, oracle_block_gaps, warped_ricci,
    OracleBlockGaps, WarpedGeometry, WarpedRicciComponents,
};
