//! Parallel Weingarten flows of isoparametric hypersurfaces.
//!
//! A hypersurface moving along its normal with speed `W(k_1, ..., k_n)` stays
//! inside its parallel family when the initial data is isoparametric, and the
//! whole flow collapses to the scalar ODE `tau' = ±W(tau)` in the focal
//! parameter. This crate provides:
//!
//! - [`epstrig`]: the curvature-parametrized trigonometric functions `cos_ε`, `sin_ε`, ...
//! - [`weingarten`]: symmetric speed functions (`H_r`, `|A|^2`, `K`, powers)
//!   evaluated on multiplicity-compressed curvature vectors.
//! - [`families`]: ambient spaces and their isoparametric families.
//! - [`flow`]: adaptive integration of the scalar flow and collapse times by quadrature.
//! - [`oracle`]: closed-form collapse times and implicit `φ(t)` relations.
//! - [`avoidance`]: distance curves between pairs of evolving hypersurfaces.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod avoidance;
pub mod epstrig;
mod error;
pub mod families;
pub mod flow;
pub mod ode;
pub mod oracle;
pub mod quad;
pub mod weingarten;

pub use error::{Error, Result};

pub use avoidance::{check_monotone, distance_curve, DistanceCurve, MonotoneVerdict, PairScenario};
pub use epstrig::Epsilon;
pub use families::{AmbientSpace, Drift, Field, FamilyKind, FocalEnd, IsoparametricFamily, TauDomain};
pub use flow::{
    collapse_time, integrate, integrate_at, phi_of_t, CollapseResult, FlowProblem, FlowTrajectory,
    NonCollapseReason, Sample, SolverConfig, Verdict,
};
pub use oracle::{closed_form_t, implicit_phi_residual};
pub use weingarten::{CurvatureProfile, WeingartenSpec};
