//! Meyerhoff's maximal-tube quantities for a short closed geodesic:
//! the length bound, κ(l), the tube radius, boundary torus area, meridian
//! disk area, tube volume, and the disjointness predicate for tubes around
//! distinct short geodesics.
//!
//! All operations reject lengths above the bound returned by
//! [`max_length_bound`] rather than extrapolating: the radius formula is
//! only valid there (and degenerates to radius zero exactly at the bound).

use std::f64::consts::PI;

use serde::Serialize;

use crate::{Error, Result};

/// The length bound `(√3/4π)·ln²(√2 + 1) ≈ 0.107` under which the maximal
/// tube formula applies.
pub fn max_length_bound() -> f64 {
    3.0_f64.sqrt() / (4.0 * PI) * (2.0_f64.sqrt() + 1.0).ln().powi(2)
}

fn check_length(l: f64) -> Result<f64> {
    if !crate::positive_finite(l) {
        return Err(Error::InvalidArgument(format!(
            "geodesic length l = {l} must be positive"
        )));
    }
    let bound = max_length_bound();
    if l > bound {
        return Err(Error::LengthExceedsBound { l, bound });
    }
    Ok(l)
}

/// `κ(l) = cosh(√(4πl)/3^{1/4}) - 1`; lies in `(0, √2 - 1]` on the valid
/// domain, reaching `√2 - 1` exactly at the length bound.
pub fn meyerhoff_kappa(l: f64) -> Result<f64> {
    let l = check_length(l)?;
    Ok(((4.0 * PI * l).sqrt() / 3.0_f64.powf(0.25)).cosh() - 1.0)
}

/// Maximal embedded tube radius: `sinh² r_max = (√(1 - 2κ)/κ - 1)/2`.
/// Strictly decreasing in `l`, divergent as `l → 0`.
pub fn tube_radius(l: f64) -> Result<f64> {
    let kappa = meyerhoff_kappa(l)?;
    let one_minus = 1.0 - 2.0 * kappa;
    if one_minus <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "1 - 2κ(l) = {one_minus} not positive at l = {l}"
        )));
    }
    // κ ≤ √2 - 1 on the domain makes the argument nonnegative.
    let sinh_sq = 0.5 * (one_minus.sqrt() / kappa - 1.0).max(0.0);
    Ok(sinh_sq.sqrt().asinh())
}

/// Area of the boundary torus, `2πl sinh(r_max) cosh(r_max)`.
pub fn boundary_torus_area(l: f64) -> Result<f64> {
    let r = tube_radius(l)?;
    Ok(2.0 * PI * l * r.sinh() * r.cosh())
}

/// Area of the totally geodesic meridian disk of radius `r`,
/// `2π(cosh r - 1)`.
pub fn meridian_disk_area(r: f64) -> Result<f64> {
    if !crate::positive_finite(r) {
        return Err(Error::InvalidArgument(format!(
            "disk radius r = {r} must be positive"
        )));
    }
    Ok(2.0 * PI * (r.cosh() - 1.0))
}

/// Volume of the maximal tube in Fermi coordinates,
/// `∫₀^l ∫₀^{2π} ∫₀^{r_max} sinh s cosh s ds dφ dt = πl sinh²(r_max)`.
pub fn tube_volume(l: f64) -> Result<f64> {
    let r = tube_radius(l)?;
    Ok(PI * l * r.sinh().powi(2))
}

/// All tube quantities of a short geodesic in one record.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct TubeProfile {
    pub l: f64,
    pub kappa: f64,
    pub r_max: f64,
    pub boundary_area: f64,
    pub meridian_area: f64,
    pub volume: f64,
}

/// Aggregate of the closed forms above; the component identities hold by
/// construction.
pub fn tube_profile(l: f64) -> Result<TubeProfile> {
    let kappa = meyerhoff_kappa(l)?;
    let r_max = tube_radius(l)?;
    Ok(TubeProfile {
        l,
        kappa,
        r_max,
        boundary_area: 2.0 * PI * l * r_max.sinh() * r_max.cosh(),
        meridian_area: 2.0 * PI * (r_max.cosh() - 1.0),
        volume: PI * l * r_max.sinh().powi(2),
    })
}

/// Maximal tubes around distinct short geodesics are disjoint whenever both
/// real lengths satisfy the Meyerhoff bound; this predicate checks exactly
/// that hypothesis.
pub fn tubes_disjoint(l1: f64, l2: f64) -> bool {
    let bound = max_length_bound();
    l1 > 0.0 && l2 > 0.0 && l1 <= bound && l2 <= bound
}
