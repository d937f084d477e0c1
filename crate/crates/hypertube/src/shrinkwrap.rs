//! The shrinkwrapping metric family: a conformal rescaling of the
//! hyperbolic metric supported in a shrinking tube around a geodesic.
//!
//! The conformal factor is `w(s) = 1 + 2φ(s / σ(1-t))` where `φ` is a C^∞
//! bump that is 0 on `[0, 1/4]`, rises to 1 on `[1/4, 1/3]`, stays 1 on
//! `[1/3, 2/3]`, falls back on `[2/3, 3/4]`, and is 0 on `[3/4, 1]`. The
//! factor squared rescales areas, which is what creates the barrier torus:
//! in the falling zone the weighted torus area `w² sinh s cosh s` has a
//! critical radius.

use std::f64::consts::PI;

use serde::Serialize;

use crate::numeric::{adaptive_simpson, bisect};
use crate::{tolerances, Error, Result};

/// Parameters of one metric of the family.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ShrinkwrapParams {
    /// Initial tube radius σ; the support shrinks as `σ(1-t)`.
    pub sigma: f64,
    /// Family parameter in `[0, 1)`.
    pub t: f64,
    /// Sharpness of the mollifier building the bump transitions.
    pub transition_sharpness: f64,
}

impl ShrinkwrapParams {
    pub fn new(sigma: f64, t: f64) -> Result<Self> {
        Self::with_sharpness(sigma, t, tolerances::BUMP_SHARPNESS)
    }

    pub fn with_sharpness(sigma: f64, t: f64, transition_sharpness: f64) -> Result<Self> {
        if !crate::positive_finite(sigma) {
            return Err(Error::InvalidArgument(format!("σ = {sigma} must be positive")));
        }
        if !(0.0..1.0).contains(&t) {
            return Err(Error::InvalidArgument(format!("t = {t} must lie in [0, 1)")));
        }
        if !crate::positive_finite(transition_sharpness) {
            return Err(Error::InvalidArgument(format!(
                "transition sharpness {transition_sharpness} must be positive"
            )));
        }
        Ok(ShrinkwrapParams { sigma, t, transition_sharpness })
    }

    /// Radius `σ(1-t)` of the support of the conformal bump.
    pub fn support_radius(&self) -> f64 {
        self.sigma * (1.0 - self.t)
    }
}

// The flat mollifier m(x) = exp(-k/x) and the smoothstep
// s(x) = m(x)/(m(x) + m(1-x)) built from it; C^∞ with all derivatives
// vanishing at 0 and 1.
fn mollifier(x: f64, k: f64) -> f64 {
    if x > 0.0 {
        (-k / x).exp()
    } else {
        0.0
    }
}

fn mollifier_deriv(x: f64, k: f64) -> f64 {
    if x > 0.0 {
        (-k / x).exp() * k / (x * x)
    } else {
        0.0
    }
}

fn smoothstep(x: f64, k: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x >= 1.0 {
        1.0
    } else {
        let a = mollifier(x, k);
        a / (a + mollifier(1.0 - x, k))
    }
}

fn smoothstep_deriv(x: f64, k: f64) -> f64 {
    if x <= 0.0 || x >= 1.0 {
        0.0
    } else {
        let a = mollifier(x, k);
        let b = mollifier(1.0 - x, k);
        let ap = mollifier_deriv(x, k);
        let bp = mollifier_deriv(1.0 - x, k);
        (ap * b + a * bp) / ((a + b) * (a + b))
    }
}

/// The C^∞ bump: 0 on `[0,1/4]`, strictly increasing on `[1/4,1/3]`,
/// 1 on `[1/3,2/3]`, strictly decreasing on `[2/3,3/4]`, 0 on `[3/4,1]`.
pub fn bump(x: f64) -> Result<f64> {
    bump_with_sharpness(x, tolerances::BUMP_SHARPNESS)
}

/// [`bump`] with an explicit mollifier sharpness.
pub fn bump_with_sharpness(x: f64, k: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::InvalidArgument(format!("bump argument {x} outside [0, 1]")));
    }
    const Q: f64 = 1.0 / 4.0;
    const T1: f64 = 1.0 / 3.0;
    const T2: f64 = 2.0 / 3.0;
    const Q3: f64 = 3.0 / 4.0;
    Ok(if x <= Q || x >= Q3 {
        0.0
    } else if x < T1 {
        smoothstep((x - Q) / (T1 - Q), k)
    } else if x <= T2 {
        1.0
    } else {
        smoothstep((Q3 - x) / (Q3 - T2), k)
    })
}

fn bump_deriv(x: f64, k: f64) -> f64 {
    const Q: f64 = 1.0 / 4.0;
    const T1: f64 = 1.0 / 3.0;
    const T2: f64 = 2.0 / 3.0;
    const Q3: f64 = 3.0 / 4.0;
    if x <= Q || x >= Q3 || (T1..=T2).contains(&x) {
        0.0
    } else if x < T1 {
        smoothstep_deriv((x - Q) / (T1 - Q), k) / (T1 - Q)
    } else {
        -smoothstep_deriv((Q3 - x) / (Q3 - T2), k) / (Q3 - T2)
    }
}

/// Conformal length factor `w(s) = 1 + 2φ(s/σ(1-t))` at distance `s` from
/// the core; identically 1 outside the support (the metric agrees with the
/// hyperbolic one there). Values lie in `[1, 3]` with the plateau exactly 3.
pub fn conformal_factor(s: f64, params: &ShrinkwrapParams) -> f64 {
    let radius = params.support_radius();
    if s >= radius || s <= 0.0 {
        return 1.0;
    }
    1.0 + 2.0
        * bump_with_sharpness(s / radius, params.transition_sharpness)
            .expect("argument in [0,1] by construction")
}

fn conformal_factor_deriv(s: f64, params: &ShrinkwrapParams) -> f64 {
    let radius = params.support_radius();
    if s >= radius || s <= 0.0 {
        return 0.0;
    }
    2.0 * bump_deriv(s / radius, params.transition_sharpness) / radius
}

/// `d/ds [w(s)² sinh s cosh s]`, the derivative of the weighted torus
/// area per unit core length.
pub fn torus_area_derivative(s: f64, params: &ShrinkwrapParams) -> f64 {
    let w = conformal_factor(s, params);
    let wp = conformal_factor_deriv(s, params);
    w * (wp * (2.0 * s).sinh() + w * (2.0 * s).cosh())
}

/// Area domination of the scaled metric over the hyperbolic one on
/// 2-planes: `w(s)² ≥ 1` at every grid point.
pub fn area_domination_check(params: &ShrinkwrapParams, s_grid: &[f64]) -> bool {
    s_grid.iter().all(|&s| conformal_factor(s, params).powi(2) >= 1.0)
}

/// The smallest critical radius of the weighted torus area: the mean
/// curvature of the distance torus `∂N_s` vanishes for the scaled metric
/// exactly where `d/ds [w² sinh s cosh s] = 0`.
///
/// The root is located by a sign-change scan followed by bisection, and is
/// asserted to lie in the falling zone `((2/3)σ(1-t), (3/4)σ(1-t))`. The
/// core length `l` scales the torus area but not the critical radius; it
/// is validated and otherwise unused.
pub fn minimal_torus_radius(params: &ShrinkwrapParams, l: f64) -> Result<f64> {
    if !crate::positive_finite(l) {
        return Err(Error::InvalidArgument(format!("core length l = {l} must be positive")));
    }
    let radius = params.support_radius();
    let n = tolerances::SHRINKWRAP_SCAN_POINTS;
    let f = |s: f64| torus_area_derivative(s, params);
    let mut profile = Vec::with_capacity(n);
    let mut bracket = None;
    let mut prev_s = radius / n as f64;
    let mut prev_f = f(prev_s);
    profile.push((prev_s, prev_f));
    for k in 2..=n {
        let s = radius * k as f64 / n as f64;
        let fs = f(s);
        profile.push((s, fs));
        if bracket.is_none() && prev_f > 0.0 && fs <= 0.0 {
            bracket = Some((prev_s, s));
        }
        prev_s = s;
        prev_f = fs;
    }
    let (lo, hi) = bracket.ok_or(Error::NoBarrierTorus { radius, profile: Box::new(profile) })?;
    let root = bisect(lo, hi, f, tolerances::SHRINKWRAP_ROOT_ABS)?;
    let window = (2.0 / 3.0 * radius, 3.0 / 4.0 * radius);
    if root <= window.0 || root >= window.1 {
        return Err(Error::InternalConsistency(format!(
            "barrier torus radius {root} escaped the window ({}, {})",
            window.0, window.1
        )));
    }
    Ok(root)
}

/// Area of the meridian disk of radius `σ(1-t)` in the scaled metric:
/// `2π ∫₀^{σ(1-t)} w(s)² sinh s ds`. Scales as `(1-t)²` as `t → 1`.
pub fn disk_cross_section_area(params: &ShrinkwrapParams) -> Result<f64> {
    let radius = params.support_radius();
    let integral = adaptive_simpson(
        |s: f64| conformal_factor(s, params).powi(2) * s.sinh(),
        0.0,
        radius,
        tolerances::QUAD_REL,
        tolerances::QUAD_MAX_DEPTH,
    )?;
    Ok(2.0 * PI * integral)
}

/// Sampled rows `(s, w(s), d/ds[w² sinh s cosh s])` for plotting; covers
/// `[0, 1.25·σ(1-t)]` so the return to the hyperbolic metric is visible.
pub fn profile(params: &ShrinkwrapParams, samples: usize) -> Vec<(f64, f64, f64)> {
    let s_max = 1.25 * params.support_radius();
    (0..=samples)
        .map(|k| {
            let s = s_max * k as f64 / samples.max(1) as f64;
            (s, conformal_factor(s, params), torus_area_derivative(s, params))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const K: f64 = tolerances::BUMP_SHARPNESS;

    #[test]
    fn bump_piecewise_zones() {
        assert_eq!(bump(0.0).unwrap(), 0.0);
        assert_eq!(bump(0.2).unwrap(), 0.0);
        assert_eq!(bump(0.25).unwrap(), 0.0);
        let rising = bump(0.3).unwrap();
        assert!(rising > 0.0 && rising < 1.0);
        assert!(rising < bump(0.33).unwrap());
        assert_eq!(bump(1.0 / 3.0).unwrap(), 1.0);
        assert_eq!(bump(0.5).unwrap(), 1.0);
        let falling = bump(0.7).unwrap();
        assert!(falling > 0.0 && falling < 1.0);
        assert!(falling > bump(0.72).unwrap());
        assert_eq!(bump(0.75).unwrap(), 0.0);
        assert_eq!(bump(1.0).unwrap(), 0.0);
        assert!(bump(-0.1).is_err());
        assert!(bump(1.1).is_err());
    }

    #[test]
    fn bump_transitions_mirror_each_other() {
        // The rising and falling transitions use the same smoothstep in
        // mirrored coordinates.
        for d in [0.01, 0.03, 0.05, 0.08] {
            let up = bump(0.25 + d).unwrap();
            let down = bump(0.75 - d).unwrap();
            assert!((up - down).abs() < 1e-12, "asymmetric at offset {d}");
        }
    }

    #[test]
    fn bump_strictly_monotone_in_transitions() {
        let mut prev = 0.0;
        for k in 1..40 {
            let x = 0.25 + (1.0 / 3.0 - 0.25) * k as f64 / 40.0;
            let v = bump(x).unwrap();
            assert!(v > prev, "not strictly increasing at {x}");
            prev = v;
        }
    }

    #[test]
    fn bump_derivative_matches_finite_differences() {
        let h = 1e-7;
        for x in [0.27, 0.30, 0.32, 0.69, 0.71, 0.74, 0.5, 0.1] {
            let fd = (bump(x + h).unwrap() - bump(x - h).unwrap()) / (2.0 * h);
            let an = bump_deriv(x, K);
            assert!((fd - an).abs() < 1e-5 * an.abs().max(1.0), "at {x}: fd {fd} vs {an}");
        }
    }

    #[test]
    fn conformal_factor_values() {
        let p = ShrinkwrapParams::new(0.1, 0.5).unwrap();
        let r = p.support_radius();
        assert_eq!(conformal_factor(0.0, &p), 1.0);
        assert_eq!(conformal_factor(0.5 * r, &p), 3.0);
        assert_eq!(conformal_factor(r, &p), 1.0);
        assert_eq!(conformal_factor(2.0 * r, &p), 1.0);
        for k in 0..=100 {
            let w = conformal_factor(r * k as f64 / 100.0, &p);
            assert!((1.0..=3.0).contains(&w));
        }
    }

    #[test]
    fn domination_holds_and_attains_one() {
        let p = ShrinkwrapParams::new(0.2, 0.25).unwrap();
        let r = p.support_radius();
        let grid: Vec<f64> = (0..=2000).map(|k| 1.3 * r * k as f64 / 2000.0).collect();
        assert!(area_domination_check(&p, &grid));
        let min = grid
            .iter()
            .map(|&s| conformal_factor(s, &p).powi(2))
            .fold(f64::INFINITY, f64::min);
        assert_eq!(min, 1.0);
    }

    #[test]
    fn derivative_positive_on_plateau() {
        let p = ShrinkwrapParams::new(0.1, 0.5).unwrap();
        let r = p.support_radius();
        for k in 0..=20 {
            let s = r * (1.0 / 3.0 + (2.0 / 3.0 - 1.0 / 3.0) * k as f64 / 20.0);
            let d = torus_area_derivative(s, &p);
            let expect = 9.0 * (2.0 * s).cosh();
            assert!((d - expect).abs() < 1e-12 * expect, "plateau derivative at s = {s}");
            assert!(d > 0.0);
        }
    }

    #[test]
    fn barrier_radius_in_window() {
        let p = ShrinkwrapParams::new(0.1, 0.5).unwrap();
        let root = minimal_torus_radius(&p, 0.01).unwrap();
        let r = p.support_radius();
        assert!(root > 2.0 / 3.0 * r && root < 3.0 / 4.0 * r);
        // Frozen from the dense-scan oracle.
        assert!((root - 0.033_880_6).abs() < 1e-5, "root = {root}");
    }

    #[test]
    fn barrier_radius_scales_linearly() {
        // root / σ(1-t) approaches a constant ≈ 0.67761 as the support shrinks.
        let mut ratios = Vec::new();
        for t in [0.3, 0.6, 0.9, 0.97] {
            let p = ShrinkwrapParams::new(0.1, t).unwrap();
            let root = minimal_torus_radius(&p, 0.01).unwrap();
            ratios.push(root / p.support_radius());
        }
        for r in &ratios {
            assert!((r - 0.6776).abs() < 1e-3, "ratio {r}");
        }
        let spread = ratios.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
            - ratios.iter().cloned().fold(f64::INFINITY, f64::min);
        assert!(spread < 1e-3, "ratios spread {spread}");
    }

    #[test]
    fn barrier_window_holds_for_small_supports() {
        for sigma in [0.01, 0.03, 0.05] {
            for t in [0.0, 0.4, 0.8] {
                let p = ShrinkwrapParams::new(sigma, t).unwrap();
                if p.support_radius() > 0.05 {
                    continue;
                }
                let root = minimal_torus_radius(&p, 1.0).unwrap();
                let r = p.support_radius();
                assert!(root > 2.0 / 3.0 * r && root < 3.0 / 4.0 * r);
            }
        }
    }

    #[test]
    fn no_barrier_for_huge_support() {
        // With σ(1-t) enormous, the cosh term dominates the bump's slope and
        // the derivative never changes sign.
        let p = ShrinkwrapParams::new(100.0, 0.0).unwrap();
        match minimal_torus_radius(&p, 1.0) {
            Err(Error::NoBarrierTorus { radius, profile }) => {
                assert_eq!(radius, 100.0);
                assert_eq!(profile.len(), tolerances::SHRINKWRAP_SCAN_POINTS);
                assert!(profile.iter().all(|&(_, d)| d > 0.0));
            }
            other => panic!("expected NoBarrierTorus, got {other:?}"),
        }
    }

    #[test]
    fn disk_area_value_and_domination() {
        let p = ShrinkwrapParams::new(0.1, 0.0).unwrap();
        let area = disk_cross_section_area(&p).unwrap();
        // Frozen from the quadrature oracle.
        assert!((area - 0.134_237_027_889_4).abs() < 1e-9, "area = {area}");
        let hyperbolic = 2.0 * PI * (p.support_radius().cosh() - 1.0);
        assert!(area >= hyperbolic);
    }

    #[test]
    fn disk_area_scales_quadratically() {
        let sigma = 0.1;
        let mut ratios = Vec::new();
        for t in [0.5, 0.9, 0.99, 0.999] {
            let p = ShrinkwrapParams::new(sigma, t).unwrap();
            let area = disk_cross_section_area(&p).unwrap();
            ratios.push(area / (1.0 - t).powi(2));
        }
        for r in &ratios {
            assert!((0.13..0.14).contains(r), "ratio {r} outside band");
        }
    }

    #[test]
    fn profile_rows_cover_support() {
        let p = ShrinkwrapParams::new(0.1, 0.5).unwrap();
        let rows = profile(&p, 200);
        assert_eq!(rows.len(), 201);
        assert_eq!(rows[0].0, 0.0);
        assert!((rows.last().unwrap().0 - 1.25 * p.support_radius()).abs() < 1e-15);
        assert_eq!(rows.last().unwrap().1, 1.0);
    }

    #[test]
    fn params_validation() {
        assert!(ShrinkwrapParams::new(0.0, 0.5).is_err());
        assert!(ShrinkwrapParams::new(0.1, 1.0).is_err());
        assert!(ShrinkwrapParams::new(0.1, -0.1).is_err());
        assert!(ShrinkwrapParams::with_sharpness(0.1, 0.5, 0.0).is_err());
    }
}
