//! The minimal helicoid of pitch `a` in the hyperboloid model:
//! parametrization, fundamental forms, curvature, ruling geodesics, the
//! quotient annulus area integral, and a finite-difference Jacobi
//! (second-variation) estimator for stability of compact patches.
//!
//! The surface is
//!
//! ```text
//! x(u, v) = (cosh u cosh v, cosh u sinh v, sinh u cos(av), sinh u sin(av))
//! ```
//!
//! with `u` the signed distance from the axis `(cosh v, sinh v, 0, 0)` and
//! `v` the translation parameter. The induced metric is
//! `du² + G(u) dv²` with `G = cosh²u + a² sinh²u`; each `u`-curve is a
//! complete geodesic of H³ (the surface is ruled), and the surface is
//! minimal for every pitch.

use std::f64::consts::{PI, TAU};

use serde::Serialize;

use crate::isometry::{lorentz_cross, HyperboloidPoint, Vec4};
use crate::numeric::{adaptive_simpson, smallest_eigenvalue};
use crate::{tolerances, Error, Result};

/// Pitch below which the scan certifies stability (well inside Mori's
/// stable regime `a ≤ 3√2/4`).
pub const CERTIFY_STABLE_PITCH_MAX: f64 = 1.0;

/// Pitch above which the scan certifies instability (well above Mori's
/// unstable threshold `√(105π)/8`).
pub const CERTIFY_UNSTABLE_PITCH_MIN: f64 = 5.0;

/// Mori's global stability threshold `3√2/4`.
pub fn mori_stable_pitch() -> f64 {
    3.0 * 2.0_f64.sqrt() / 4.0
}

/// Mori's global instability threshold `√(105π)/8`.
pub fn mori_unstable_pitch() -> f64 {
    (105.0 * PI).sqrt() / 8.0
}

/// Point of the pitch-`a` helicoid; lies on the hyperboloid by the identity
/// `cosh²u (cosh²v - sinh²v) - sinh²u (cos² + sin²) = 1`.
pub fn helicoid_point(a: f64, u: f64, v: f64) -> HyperboloidPoint {
    let (cu, su) = (u.cosh(), u.sinh());
    let (cv, sv) = (v.cosh(), v.sinh());
    let (sav, cav) = (a * v).sin_cos();
    HyperboloidPoint {
        x1: cu * cv,
        x2: cu * sv,
        x3: su * cav,
        x4: su * sav,
    }
}

fn partial_u(a: f64, u: f64, v: f64) -> Vec4 {
    let (cu, su) = (u.cosh(), u.sinh());
    let (cv, sv) = (v.cosh(), v.sinh());
    let (sav, cav) = (a * v).sin_cos();
    Vec4::new(su * cv, su * sv, cu * cav, cu * sav)
}

fn partial_v(a: f64, u: f64, v: f64) -> Vec4 {
    let (cu, su) = (u.cosh(), u.sinh());
    let (cv, sv) = (v.cosh(), v.sinh());
    let (sav, cav) = (a * v).sin_cos();
    Vec4::new(cu * sv, cu * cv, -a * su * sav, a * su * cav)
}

/// First fundamental form coefficients `(E, F, G) = (1, 0, cosh²u + a² sinh²u)`.
pub fn first_fundamental_form(a: f64, u: f64) -> (f64, f64, f64) {
    (1.0, 0.0, metric_g(a, u))
}

fn metric_g(a: f64, u: f64) -> f64 {
    let (cu, su) = (u.cosh(), u.sinh());
    cu * cu + a * a * su * su
}

/// Tangent vectors and Lorentz-unit normal at a helicoid point.
///
/// The normal is the unique (up to sign) vector with
/// `⟨N, x⟩ = ⟨N, x_u⟩ = ⟨N, x_v⟩ = 0` and `⟨N, N⟩ = 1`; the sign is fixed
/// by requiring `(x, x_u, x_v, N)` positively oriented.
pub fn helicoid_frame(a: f64, u: f64, v: f64) -> Result<(Vec4, Vec4, Vec4)> {
    let x = helicoid_point(a, u, v).vec();
    let xu = partial_u(a, u, v);
    let xv = partial_v(a, u, v);
    let raw = lorentz_cross(&x, &xu, &xv);
    let norm_sq = raw.lorentz_dot(&raw);
    if norm_sq <= 1e-300 {
        return Err(Error::InternalConsistency(format!(
            "degenerate frame at (a, u, v) = ({a}, {u}, {v})"
        )));
    }
    Ok((xu, xv, raw * (1.0 / norm_sq.sqrt())))
}

/// Mean curvature from the second fundamental form,
/// `H = (eG - 2fF + gE) / (2(EG - F²))`; vanishes identically.
pub fn mean_curvature(a: f64, u: f64, v: f64) -> Result<f64> {
    let (xu, xv, n) = helicoid_frame(a, u, v)?;
    let (cu, su) = (u.cosh(), u.sinh());
    let (cv, sv) = (v.cosh(), v.sinh());
    let (sav, cav) = (a * v).sin_cos();
    // Analytic second derivatives: x_uu = x, and
    let xuu = helicoid_point(a, u, v).vec();
    let xuv = Vec4::new(su * sv, su * cv, -a * cu * sav, a * cu * cav);
    let xvv = Vec4::new(cu * cv, cu * sv, -a * a * su * cav, -a * a * su * sav);
    let e = xuu.lorentz_dot(&n);
    let f = xuv.lorentz_dot(&n);
    let g = xvv.lorentz_dot(&n);
    let (big_e, big_f, big_g) = (xu.lorentz_dot(&xu), xu.lorentz_dot(&xv), xv.lorentz_dot(&xv));
    Ok((e * big_g - 2.0 * f * big_f + g * big_e) / (2.0 * (big_e * big_g - big_f * big_f)))
}

/// Intrinsic Gauss curvature of the induced metric `du² + G(u)dv²`,
/// `K = -(√G)''/√G = -(2GG'' - G'²)/(4G²)`. Satisfies `K ≤ -1` with
/// equality only for the totally geodesic plane `a = 0`.
pub fn gauss_curvature(a: f64, u: f64) -> f64 {
    let g = metric_g(a, u);
    let one_a2 = 1.0 + a * a;
    let gp = one_a2 * (2.0 * u).sinh();
    let gpp = 2.0 * one_a2 * (2.0 * u).cosh();
    -(2.0 * g * gpp - gp * gp) / (4.0 * g * g)
}

/// Squared norm of the second fundamental form via the Gauss equation for
/// minimal surfaces in H³: `|A|² = -2(K + 1) ≥ 0`.
pub fn second_form_norm_sq(a: f64, u: f64) -> f64 {
    (-2.0 * (gauss_curvature(a, u) + 1.0)).max(0.0)
}

/// Residual `‖x_uu - x‖` of the hyperboloid geodesic equation `x'' = x`
/// along a unit-speed ruling; zero in exact arithmetic because
/// `cosh'' = cosh` and `sinh'' = sinh` componentwise.
pub fn ruling_residual(a: f64, u: f64, v: f64) -> f64 {
    let x = helicoid_point(a, u, v).vec();
    (partial_uu(a, u, v) - x).euclid_norm()
}

fn partial_uu(a: f64, u: f64, v: f64) -> Vec4 {
    let (cu, su) = (u.cosh(), u.sinh());
    let (cv, sv) = (v.cosh(), v.sinh());
    let (sav, cav) = (a * v).sin_cos();
    Vec4::new(cu * cv, cu * sv, su * cav, su * sav)
}

/// Area of the quotient annulus of the pitch-`θ/l` helicoid inside the
/// radius-`r` tube: `2 ∫₀^r √(l² cosh²u + θ² sinh²u) du` by adaptive
/// quadrature.
pub fn annulus_area(l: f64, theta: f64, r: f64) -> Result<f64> {
    annulus_area_with_tol(l, theta, r, tolerances::QUAD_REL)
}

/// [`annulus_area`] with an explicit relative quadrature tolerance.
pub fn annulus_area_with_tol(l: f64, theta: f64, r: f64, rel_tol: f64) -> Result<f64> {
    if !crate::positive_finite(r) {
        return Err(Error::InvalidArgument(format!("tube radius r = {r} must be positive")));
    }
    if l < 0.0 || theta < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "annulus parameters l = {l}, θ = {theta} must be nonnegative"
        )));
    }
    let (l2, t2) = (l * l, theta * theta);
    let integral = adaptive_simpson(
        |u: f64| (l2 * u.cosh().powi(2) + t2 * u.sinh().powi(2)).sqrt(),
        0.0,
        r,
        rel_tol,
        tolerances::QUAD_MAX_DEPTH,
    )?;
    Ok(2.0 * integral)
}

/// Length of the pair of longitudes at distance `s` from the core,
/// `2 √(l² cosh²s + θ² sinh²s)`; bounded below by `2θ sinh s`.
pub fn longitude_length(l: f64, theta: f64, s: f64) -> Result<f64> {
    if s < 0.0 {
        return Err(Error::InvalidArgument(format!("distance s = {s} must be nonnegative")));
    }
    Ok(2.0 * (l * l * s.cosh().powi(2) + theta * theta * s.sinh().powi(2)).sqrt())
}

/// A compact coordinate rectangle of the pitch-`a` helicoid.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct HelicoidPatch {
    pub a: f64,
    pub u_min: f64,
    pub u_max: f64,
    pub v_min: f64,
    pub v_max: f64,
}

impl HelicoidPatch {
    pub fn new(a: f64, u_min: f64, u_max: f64, v_min: f64, v_max: f64) -> Result<Self> {
        if a < 0.0 {
            return Err(Error::InvalidArgument(format!("pitch a = {a} must be nonnegative")));
        }
        let bad = u_min >= u_max
            || v_min >= v_max
            || [u_min, u_max, v_min, v_max].iter().any(|v| v.is_nan());
        if bad {
            return Err(Error::InvalidArgument(format!(
                "empty patch [{u_min}, {u_max}] × [{v_min}, {v_max}]"
            )));
        }
        Ok(HelicoidPatch { a, u_min, u_max, v_min, v_max })
    }

    /// Patch symmetric about the axis, with `v` covering one twist period
    /// `2π/a` (one full turn `2π` for the plane `a = 0`).
    pub fn symmetric(a: f64, u_extent: f64) -> Result<Self> {
        let period = if a > 0.0 { TAU / a } else { TAU };
        HelicoidPatch::new(a, -u_extent, u_extent, 0.0, period)
    }
}

/// Verdict of a second-variation estimate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StableSign {
    Positive,
    Negative,
    Inconclusive,
}

/// Smallest Dirichlet eigenvalue estimate of the negated Jacobi operator
/// `-Δ - (|A|² - 2)` on a patch.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct JacobiEstimate {
    pub a: f64,
    pub patch: HelicoidPatch,
    pub grid: (usize, usize),
    pub lambda_min: f64,
    pub stable_sign: StableSign,
}

/// Discretize `-Δ - (|A|² - 2)` on the patch with the 5-point stencil in
/// divergence form for the metric `du² + G(u)dv²` and Dirichlet boundary,
/// and return its smallest eigenvalue by shift-and-invert power iteration.
///
/// A positive eigenvalue certifies stability of the patch; a negative one
/// certifies instability of the helicoid (Dirichlet monotonicity).
pub fn jacobi_lambda_min(a: f64, patch: &HelicoidPatch, grid: (usize, usize)) -> Result<JacobiEstimate> {
    let (m, n) = grid;
    if m < 8 || n < 8 {
        return Err(Error::InvalidArgument(format!("grid {m}×{n} below minimum 8×8")));
    }
    let hu = (patch.u_max - patch.u_min) / m as f64;
    let hv = (patch.v_max - patch.v_min) / n as f64;
    let rows = m - 1;
    let cols = n - 1;
    let dim = rows * cols;

    // Row-dependent coefficients: √G at nodes and staggered midpoints, the
    // potential q = |A|² - 2, and the diagonal mass b = √G hu hv.
    let sqrt_g: Vec<f64> = (0..=m).map(|i| metric_g(a, patch.u_min + i as f64 * hu).sqrt()).collect();
    let sqrt_g_mid: Vec<f64> = (0..m)
        .map(|i| metric_g(a, patch.u_min + (i as f64 + 0.5) * hu).sqrt())
        .collect();
    let q: Vec<f64> = (0..=m)
        .map(|i| second_form_norm_sq(a, patch.u_min + i as f64 * hu) - 2.0)
        .collect();

    // Symmetrized stencil C = B^{-1/2} A B^{-1/2}.
    let b: Vec<f64> = (1..m).map(|i| sqrt_g[i] * hu * hv).collect();
    let diag: Vec<f64> = (1..m)
        .map(|i| {
            let flux_u = (sqrt_g_mid[i] + sqrt_g_mid[i - 1]) * hv / hu;
            let flux_v = 2.0 * hu / (hv * sqrt_g[i]);
            (flux_u + flux_v - q[i] * b[i - 1]) / b[i - 1]
        })
        .collect();
    let coef_u: Vec<f64> = (1..m - 1)
        .map(|i| -sqrt_g_mid[i] * (hv / hu) / (b[i - 1] * b[i]).sqrt())
        .collect();
    let coef_v: Vec<f64> = (1..m).map(|i| -(hu / hv) / sqrt_g[i] / b[i - 1]).collect();

    let lower_bound = (0..rows)
        .map(|r| diag[r] - 2.0 * coef_v[r].abs()
            - if r > 0 { coef_u[r - 1].abs() } else { 0.0 }
            - if r + 1 < rows { coef_u[r].abs() } else { 0.0 })
        .fold(f64::INFINITY, f64::min);

    let apply = |x: &[f64], out: &mut [f64]| {
        for r in 0..rows {
            let base = r * cols;
            for c in 0..cols {
                let k = base + c;
                let mut acc = diag[r] * x[k];
                if c > 0 {
                    acc += coef_v[r] * x[k - 1];
                }
                if c + 1 < cols {
                    acc += coef_v[r] * x[k + 1];
                }
                if r > 0 {
                    acc += coef_u[r - 1] * x[k - cols];
                }
                if r + 1 < rows {
                    acc += coef_u[r] * x[k + cols];
                }
                out[k] = acc;
            }
        }
    };

    let (lambda_min, _) = smallest_eigenvalue(
        dim,
        apply,
        lower_bound,
        tolerances::EIGEN_REL,
        tolerances::EIGEN_MAX_ITER,
    )?;

    let band = tolerances::JACOBI_SIGN_BAND;
    let stable_sign = if lambda_min > band {
        StableSign::Positive
    } else if lambda_min < -band {
        StableSign::Negative
    } else {
        StableSign::Inconclusive
    };
    Ok(JacobiEstimate { a, patch: *patch, grid, lambda_min, stable_sign })
}

/// One rung of an escalating patch ladder: the eigenvalue at the base grid
/// and at one refinement.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct StabilityRung {
    pub u_extent: f64,
    pub lambda_coarse: f64,
    pub lambda_refined: f64,
}

/// Result of a patch-ladder stability sweep.
#[derive(Clone, Debug, Serialize)]
pub struct StabilityScan {
    pub a: f64,
    pub grid: (usize, usize),
    pub rungs: Vec<StabilityRung>,
    /// Smallest refined eigenvalue seen across the ladder.
    pub lambda_min: f64,
    pub certified: StableSign,
}

/// Sweep symmetric patches `u ∈ [-U, U]` for `U` climbing to `u_max` in
/// `rungs` steps, `v` spanning one twist period, evaluating each rung at
/// `grid` and at one grid refinement.
///
/// The verdict is conservative: a sign is certified only when it is stable
/// under the refinement on the decisive rung and the pitch lies well inside
/// the corresponding Mori regime (`a ≤ 1` for stability, `a ≥ 5` for
/// instability); everything else is reported inconclusive.
pub fn stability_scan(a: f64, u_max: f64, rungs: usize, grid: (usize, usize)) -> Result<StabilityScan> {
    if rungs == 0 || !crate::positive_finite(u_max) {
        return Err(Error::InvalidArgument(format!(
            "need at least one rung and positive u_max, got {rungs}, {u_max}"
        )));
    }
    let refined = (grid.0 * 2, grid.1 * 2);
    let mut out = Vec::with_capacity(rungs);
    let mut lambda_min = f64::INFINITY;
    let mut sign_stable_min: Option<(f64, bool)> = None;
    for k in 1..=rungs {
        let u_extent = u_max * k as f64 / rungs as f64;
        let patch = HelicoidPatch::symmetric(a, u_extent)?;
        let coarse = jacobi_lambda_min(a, &patch, grid)?;
        let fine = jacobi_lambda_min(a, &patch, refined)?;
        let rung = StabilityRung {
            u_extent,
            lambda_coarse: coarse.lambda_min,
            lambda_refined: fine.lambda_min,
        };
        if fine.lambda_min < lambda_min {
            lambda_min = fine.lambda_min;
            sign_stable_min = Some((fine.lambda_min, coarse.stable_sign == fine.stable_sign));
        }
        out.push(rung);
    }
    let band = tolerances::JACOBI_SIGN_BAND;
    let all_positive = out
        .iter()
        .all(|r| r.lambda_coarse > band && r.lambda_refined > band);
    let certified = match sign_stable_min {
        Some((lam, stable)) if stable && lam < -band && a >= CERTIFY_UNSTABLE_PITCH_MIN => {
            StableSign::Negative
        }
        _ if all_positive && a <= CERTIFY_STABLE_PITCH_MAX => StableSign::Positive,
        _ => StableSign::Inconclusive,
    };
    Ok(StabilityScan { a, grid, rungs: out, lambda_min, certified })
}
