//! Centralized numerical tolerances.
//!
//! Every threshold used by the library is defined here with its origin, so
//! operations never carry ad-hoc magic numbers. Callers that need a
//! different trade-off pass explicit tolerances to the few operations that
//! accept them (quadrature, bisection, eigenvalue iteration).

/// Determinant residual allowed after Möbius normalization, `|ad - bc - 1|`.
pub const MOEBIUS_DET: f64 = 1e-12;

/// Residual of the hyperboloid constraint `|<x,x> + 1|` for stored points.
pub const HYPERBOLOID_CONSTRAINT: f64 = 1e-10;

/// Classification margin on the trace: `|Im tr|` below this counts as real,
/// `|tr - 2|` below this counts as parabolic/identity.
pub const TRACE_CLASSIFY: f64 = 1e-9;

/// Agreement required between the two hyperbolic models (distances, round trips).
pub const MODEL_AGREEMENT: f64 = 1e-10;

/// Default relative tolerance for adaptive Simpson quadrature.
pub const QUAD_REL: f64 = 1e-10;

/// Maximum bisection depth for adaptive Simpson quadrature.
pub const QUAD_MAX_DEPTH: u32 = 60;

/// Default absolute tolerance for bisection root finding.
pub const BISECT_ABS: f64 = 1e-12;

/// Maximum bracket doublings when hunting a sign change upward.
pub const BRACKET_MAX_DOUBLINGS: u32 = 200;

/// Relative convergence tolerance for the inverse-power eigenvalue iteration.
pub const EIGEN_REL: f64 = 1e-10;

/// Maximum outer iterations for the inverse-power eigenvalue iteration.
pub const EIGEN_MAX_ITER: usize = 600;

/// Band around zero inside which a Jacobi eigenvalue sign is inconclusive.
pub const JACOBI_SIGN_BAND: f64 = 1e-6;

/// Finite-difference step for per-vertex area gradients during minimization.
pub const MESH_FD_STEP: f64 = 1e-5;

/// Residual allowed after radial reprojection onto the hyperboloid.
pub const MESH_REPROJECTION: f64 = 1e-12;

/// Agreement required of identified seam pairs under the deck transformation.
pub const MESH_SEAM: f64 = 1e-9;

/// Floor on cos(alpha) below which a coarea slice counts as tangent.
pub const COAREA_COS_FLOOR: f64 = 1e-6;

/// Scan resolution for the barrier-torus derivative profile.
pub const SHRINKWRAP_SCAN_POINTS: usize = 1024;

/// Absolute tolerance for the barrier-torus bisection.
pub const SHRINKWRAP_ROOT_ABS: f64 = 1e-12;

/// Sharpness of the default mollifier in the shrinkwrap bump function.
pub const BUMP_SHARPNESS: f64 = 1.0;
