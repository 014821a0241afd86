//! Embedded resolution of plane curve germs on cyclic quotient surface
//! singularities.
//!
//! The surface germs are quotients `X(d; a, b) = C^2 / mu_d` acting by
//! `(x, y) -> (eps^a x, eps^b y)`. This crate normalizes such types, blows
//! up invariant monomial ideals with weighted centers, resolves curve germs
//! into decorated dual graphs, and evaluates exact intersection numbers on
//! the result. Everything is done over the rationals; no floating point.
//!
//! ```
//! use qres_core::arith::qz;
//! use qres_core::{local_intersection, parse_binomial_curve, resolve, CyclicType};
//!
//! # fn main() -> qres_core::Result<()> {
//! let smooth = CyclicType::new(1, 0, 0)?;
//! let germ = parse_binomial_curve("(x^2 + y^3) * (x^3 + y^2)", smooth)?;
//! let graph = resolve(&germ)?;
//! assert_eq!(local_intersection(&graph, 1, 2)?, qz(4));
//! # Ok(())
//! # }
//! ```
//!
//! Entry points by module:
//! - [`quotient`]: normal forms and isomorphism tests for cyclic quotients.
//! - [`blowup`]: one weighted blow-up step and the multiplicity transforms.
//! - [`curve`]: Puiseux germs and the full embedded resolution loop.
//! - [`graph`]: the decorated dual graph, its JSON form and DOT export.
//! - [`intersection`]: intersection and curvette matrices, local pairings.
//! - [`wproj`]: global Bezout numbers on weighted projective planes.
//! - [`jung`]: quotients of a resolved pair by `z^n = f`, plus
//!   Hirzebruch-Jung chains and smooth refinement of a graph.
//! - [`parse`]: a small expression parser for curves given as products of
//!   binomial-like factors.

pub mod arith;
pub mod blowup;
pub mod curve;
pub mod error;
pub mod graph;
pub mod intersection;
pub mod jung;
pub mod parse;
pub mod quotient;
pub mod wproj;

pub use arith::{Coeff, QQ};
pub use blowup::{blowup, BlowupResult, Weight};
pub use curve::{check_q_normal_crossing, resolve, resolve_quotient, CurveGerm, PuiseuxBranch};
pub use error::{Error, Result};
pub use graph::{DualGraph, Edge, Vertex, VertexKind};
pub use intersection::{
    attachment, check_negative_definite, curvette_matrix, intersection_matrix, local_intersection,
    pullback_coefficients, BranchAttachment, CurvetteMatrix, IntersectionMatrix,
};
pub use jung::{
    continued_fraction, jung_resolution, resolve_cyclic_point, smooth_refinement,
    transform_component, transform_double_point, transform_sing0, ComponentTransform, SurfaceGerm,
};
pub use parse::{parse_binomial_curve, parse_curve, CurveFactor, Poly};
pub use quotient::{reduce_two_row, CyclicType, TwoRowType};
pub use wproj::{axes_table, bezout, normalize_weights, projection_degree, WPPlane};
