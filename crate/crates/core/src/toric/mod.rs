//! Triangulations of a simplex, their g- and h-polynomials, Dehn-Sommerville
//! for simplicial spheres, and simplicial fans with the orbit-stratification
//! argument behind `D[X] = L^{-dim X}[X]` for simplicial toric varieties.
//!
//! A simplex with `r + 1` vertices has dimension `r`; a cone with `r` rays
//! has dimension `r`. Polynomials in `t` are [`LaurentPoly`](crate::LaurentPoly)
//! values, printed with `render_ascending("t")`.

mod fan;
mod sphere;
mod triangulation;

use thiserror::Error;

pub use fan::{
    check_toric_duality, p_poly, quotient_cone, random_cones, stellar_refine, RefineStrategy, SimplicialFan,
    ToricDualityReport,
};
pub use sphere::{
    cross_polytope_facets, dehn_sommerville, face_vector, simplex_boundary_facets, verify_aux_binomial,
    DehnSommerville, FaceVector,
};
pub use triangulation::{Simplex, Triangulation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ToricError {
    #[error("{0:?} is not a simplex of the triangulation")]
    NotASimplex(Vec<usize>),
    #[error("invalid triangulation: {0}")]
    InvalidTriangulation(String),
    #[error("invalid fan: {0}")]
    InvalidFan(String),
    #[error("not a refinement: {0}")]
    NotARefinement(String),
}
