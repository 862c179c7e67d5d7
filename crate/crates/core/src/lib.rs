//! Exact affine selections of finite-dimensional convex multifunctions.
//!
//! A convex multifunction `F: D → 2^(R^m)` is represented by its graph, a
//! polytope in `R^{n+m}` given by vertices. The crate decides whether `F`
//! has a global affine selection (returning either the map or a Farkas
//! certificate), constructs local affine selections around interior points
//! by interpolating over a small simplex, fits affine functions between
//! lower and upper data, and audits finite samples of arbitrary
//! multifunctions for the convexity inclusion
//! `t·F(x) + (1−t)·F(y) ⊂ F(t·x + (1−t)·y)` and the weaker
//! nonempty-intersection condition.
//!
//! All arithmetic is exact over arbitrary-precision rationals.

pub mod cli;
pub mod error;
pub mod instances;
pub mod io;
pub mod lp;
pub mod multifunction;
pub mod polytope;
pub mod rational;
pub mod selection;

pub use error::{Error, Result};
pub use lp::{lp_solve, verify_certificate, LinearProgram, LpOutcome, LpStatus, Relation, Sense};
pub use multifunction::{
    audit_convexity, audit_intersection, sample_graph, AuditReport, GraphMultifunction, Sample,
    SampledMultifunction,
};
pub use polytope::{
    affine_interpolate, barycentric, contains_polytope, membership, minkowski_combine, AffineMap,
    Simplex, VPolytope,
};
pub use rational::Rational;
pub use selection::{
    global_selection, interval_selection_1d, local_selection, sandwich, verify_selection,
    LocalSelection, SelectionOutcome, SelectionStatus,
};
