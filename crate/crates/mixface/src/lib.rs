//! Numerical construction and verification of a one-parameter family of
//! triply periodic zero-mean-curvature surfaces of mixed causal type in
//! Lorentz-Minkowski 3-space.
//!
//! The building blocks:
//!
//! * [`minkowski`] - arithmetic and isometries of R^3_1 with signature (-,+,+);
//! * [`riemann`] - the genus-3 curve w^2 = z^8 + (a^4 + a^-4) z^4 + 1, its
//!   marked arcs/loops and branch tracking;
//! * [`periods`] - loop integrals of the Weierstrass forms, the q-constants,
//!   period matrices and their lattices;
//! * [`maxface`] - pointwise evaluation of the spacelike maximal immersion,
//!   singular-set classification, conformality/mean-curvature checks;
//! * [`foldcurve`] - the lightlike fold curve, its timelike extension and
//!   the height reparametrization;
//! * [`assembly`] - fundamental-piece meshes, reflection-group assembly to
//!   the 32-copy translational block, genus and embeddedness checks;
//! * [`analysis`] - the two-parameter period-closure search and the
//!   degenerate limits;
//! * [`io`] - OBJ / binary PLY / JSON output.

pub mod analysis;
pub mod assembly;
pub mod error;
pub mod foldcurve;
pub mod intersect;
pub mod io;
pub mod maxface;
pub mod mesh;
pub mod minkowski;
pub mod periods;
pub mod quad;
pub mod riemann;

pub use error::{Error, Result};
pub use minkowski::{causal_type, minkowski_dot, CausalType, Isometry, MinkVec3};
pub use riemann::{make_params, SurfaceParams, SurfacePoint};

/// The parameter at which a^4 + a^-4 = 14 (the classical special value).
pub fn classical_parameter() -> f64 {
    (3.0f64.sqrt() - 1.0) / 2.0f64.sqrt()
}
