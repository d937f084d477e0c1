//! Numerical toolkit for the geometry of short geodesics in hyperbolic
//! 3-space: Möbius transformations and complex length, Meyerhoff maximal
//! tubes, minimal helicoids and their stability, area comparison between
//! helicoidal annuli and tube tori, the shrinkwrapping metric family, and
//! a discrete-mesh area oracle on the hyperboloid.
//!
//! The crate is organized by subject:
//!
//! | module | contents |
//! |--------|----------|
//! | [`isometry`] | Möbius maps, Poincaré extension, complex length, model conversions |
//! | [`tube`] | Meyerhoff tube radius, boundary torus area, meridian disk, volume |
//! | [`helicoid`] | helicoid parametrization, curvature, annulus area, Jacobi stability |
//! | [`comparison`] | area-gap criterion, crossover pitch, main inequality chain |
//! | [`shrinkwrap`] | conformal bump metrics and their barrier-torus radii |
//! | [`mesh`] | triangulated surfaces on the hyperboloid, area minimization, coarea |
//!
//! All quantities are plain `f64` values; all operations are pure functions
//! safe for concurrent use (meshes are mutated only inside
//! [`mesh::minimize_area`], which owns its mesh for the duration).

pub mod comparison;
pub mod helicoid;
pub mod isometry;
pub mod mesh;
pub mod numeric;
pub mod shrinkwrap;
pub mod tolerances;
pub mod tube;

/// Errors reported by the toolkit.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("degenerate Möbius map: determinant is zero")]
    DegenerateMoebiusMap,

    #[error("no complex length: map is not loxodromic")]
    NoComplexLength,

    #[error("no axis: map is not loxodromic")]
    NotLoxodromic,

    #[error("invalid point: {0}")]
    InvalidPoint(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("internal consistency error: {0}")]
    InternalConsistency(String),

    #[error("length {l} exceeds Meyerhoff bound {bound}")]
    LengthExceedsBound { l: f64, bound: f64 },

    #[error("quadrature did not converge: estimated error {achieved:e} above target {requested:e}")]
    QuadratureDidNotConverge { achieved: f64, requested: f64 },

    #[error("bisection bracket failure on [{lo}, {hi}]: f(lo) = {f_lo}, f(hi) = {f_hi}")]
    BracketFailure { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },

    #[error("eigenvalue iteration did not converge after {iters} iterations")]
    EigenIterationDidNotConverge { iters: usize },

    #[error("tube radius too small: growth inequality fails at l = {l}")]
    TubeRadiusTooSmall { l: f64 },

    #[error("inequality chain cannot hold: required twist 2\u{3c0}l sinh r_max = {required} is not below \u{3c0}")]
    InequalityChainCannotHold { required: f64 },

    #[error("integer overflow in separation count for n = {n}")]
    Overflow { n: u32 },

    #[error("no barrier torus in window (2/3, 3/4)\u{b7}{radius}: derivative has no sign change")]
    NoBarrierTorus {
        radius: f64,
        /// Scanned (s, d/ds[w\u{b2} sinh s cosh s]) profile for diagnosis.
        profile: Box<Vec<(f64, f64)>>,
    },

    #[error("degenerate triangle in face {face}")]
    DegenerateFace { face: usize },

    #[error("slice {slice} is tangent to the surface: cos \u{3b1} = {cos_alpha:e} below floor")]
    SliceTangency { slice: usize, cos_alpha: f64 },

    #[error("mesh format error: {0}")]
    MeshFormat(String),

    #[error("mesh has seam identification but no deck transformation; attach one before minimizing")]
    MissingDeckMap,
}

pub type Result<T> = std::result::Result<T, Error>;

// Validation guard shared by the modules: finite and strictly positive
// (rejects NaN, infinities, zero, and negatives in one test).
pub(crate) fn positive_finite(x: f64) -> bool {
    x.is_finite() && x > 0.0
}
