//! The quantitative comparison between the helicoidal annulus and the tube
//! torus: the area gap, the crossover pitch where it changes sign, the
//! explicit two-inequality chain that forces the gap positive, the
//! disk-obstruction inequality, and the 2ⁿ separation count.

use std::f64::consts::PI;

use serde::Serialize;

use crate::helicoid::annulus_area;
use crate::tube::{boundary_torus_area, tube_radius};
use crate::{tolerances, Error, Result};

/// Evaluation of the inequality chain at a given `(l, θ)`.
///
/// `ineq_growth` is `2(cosh r_max - cosh(r_max/2)) > cosh r_max` (twist
/// independent: holds exactly when `r_max` clears a fixed threshold) and
/// `ineq_torus` is `2πl sinh r_max < c(θ)` with `c(θ) = min{θ, π}`.
/// Together they force the annulus to outweigh the torus. Signed margins
/// accompany the verdicts for plotting.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ComparisonReport {
    pub l: f64,
    pub theta: f64,
    pub r_max: f64,
    pub annulus_area: f64,
    pub torus_area: f64,
    /// `annulus_area - torus_area`.
    pub gap: f64,
    /// `min(θ, π)`.
    pub c_theta: f64,
    pub ineq_growth: bool,
    pub ineq_torus: bool,
    /// Both inequalities hold.
    pub holds: bool,
    /// `2(cosh r_max - cosh(r_max/2)) - cosh r_max`.
    pub growth_margin: f64,
    /// `c(θ) - 2πl sinh r_max`.
    pub torus_margin: f64,
}

/// Area of the maximal-radius annulus minus the area of the boundary
/// torus; positive when the twisted annulus is the better competitor.
pub fn area_gap(l: f64, theta: f64) -> Result<f64> {
    let r = tube_radius(l)?;
    Ok(annulus_area(l, theta, r)? - boundary_torus_area(l)?)
}

/// The pitch `a* = θ*/l` at which the area gap changes sign, located by
/// doubling a bracket upward and bisecting `θ ↦ gap(l, θ)` to absolute
/// tolerance `tol` in `θ`.
///
/// The gap is negative as `θ → 0` (the untwisted annulus loses) and grows
/// without bound in `θ`, so the zero exists and is unique; for every
/// `θ/l > a*` the gap is positive.
pub fn crossover_pitch(l: f64, tol: f64) -> Result<f64> {
    Ok(crossover_twist(l, tol)? / l)
}

/// The twist `θ*` at which the area gap changes sign for fixed `l`.
pub fn crossover_twist(l: f64, tol: f64) -> Result<f64> {
    let r = tube_radius(l)?;
    let torus = boundary_torus_area(l)?;
    let gap = |theta: f64| -> f64 {
        annulus_area(l, theta, r).map(|a| a - torus).unwrap_or(f64::NAN)
    };
    let lo = 1e-9;
    let f_lo = gap(lo);
    if f_lo >= 0.0 || f_lo.is_nan() {
        return Err(Error::BracketFailure { lo, hi: lo, f_lo, f_hi: f_lo });
    }
    let hi = crate::numeric::expand_bracket_up(2.0 * lo, gap)?;
    crate::numeric::bisect(lo, hi, gap, tol)
}

/// Evaluate both inequalities of the chain exactly as written and report
/// their margins.
pub fn main_inequalities(l: f64, theta: f64) -> Result<ComparisonReport> {
    if !crate::positive_finite(theta) {
        return Err(Error::InvalidArgument(format!("twist θ = {theta} must be positive")));
    }
    let r_max = tube_radius(l)?;
    let annulus = annulus_area(l, theta, r_max)?;
    let torus = boundary_torus_area(l)?;
    let c_theta = theta.min(PI);
    let growth_margin = 2.0 * (r_max.cosh() - (r_max / 2.0).cosh()) - r_max.cosh();
    let torus_margin = c_theta - 2.0 * PI * l * r_max.sinh();
    let ineq_growth = growth_margin > 0.0;
    let ineq_torus = torus_margin > 0.0;
    Ok(ComparisonReport {
        l,
        theta,
        r_max,
        annulus_area: annulus,
        torus_area: torus,
        gap: annulus - torus,
        c_theta,
        ineq_growth,
        ineq_torus,
        holds: ineq_growth && ineq_torus,
        growth_margin,
        torus_margin,
    })
}

/// Smallest twist for which the whole chain holds, found by bisecting the
/// predicate; closed form `2πl sinh r_max` whenever that value is below π.
pub fn min_twist_for_theorem(l: f64) -> Result<f64> {
    let r_max = tube_radius(l)?;
    let growth_margin = 2.0 * (r_max.cosh() - (r_max / 2.0).cosh()) - r_max.cosh();
    if growth_margin <= 0.0 {
        return Err(Error::TubeRadiusTooSmall { l });
    }
    let required = 2.0 * PI * l * r_max.sinh();
    if required >= PI {
        // c(θ) caps at π, so no twist can satisfy the torus inequality.
        return Err(Error::InequalityChainCannotHold { required });
    }
    let holds = |theta: f64| theta.min(PI) > required;
    let mut lo = required / 2.0;
    let mut hi = PI;
    debug_assert!(!holds(lo) && holds(hi));
    while hi - lo > 1e-13 {
        let mid = 0.5 * (lo + hi);
        if holds(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Disk obstruction: a least-area disk spanning a short loop cannot pass
/// through the core geodesic once `2π(cosh r - 1) > πl sinh r cosh r`,
/// because its intrinsic radius-`r` disk would already outweigh the
/// competing semi-torus piece. Returns `true` when the obstruction holds.
pub fn disk_obstruction(l: f64, r: f64) -> Result<bool> {
    if !crate::positive_finite(l) || !crate::positive_finite(r) {
        return Err(Error::InvalidArgument(format!(
            "disk obstruction needs l > 0, r > 0; got ({l}, {r})"
        )));
    }
    Ok(2.0 * PI * (r.cosh() - 1.0) > PI * l * r.sinh() * r.cosh())
}

/// The number of isotopy classes separated by `n` disjoint short geodesics:
/// `1 + C(n,1) + ... + C(n,n-1) + 1 = 2ⁿ`, computed as the binomial sum and
/// checked against the power of two.
pub fn separation_count(n: u32) -> Result<u128> {
    if n >= 128 {
        return Err(Error::Overflow { n });
    }
    let power = 1u128 << n;
    let mut sum: u128 = 0;
    let mut binom: u128 = 1;
    for k in 0..=n {
        sum = sum.checked_add(binom).ok_or(Error::Overflow { n })?;
        if k < n {
            // C(n,k+1) = C(n,k)(n-k)/(k+1) with the fraction reduced first,
            // so no intermediate exceeds the result.
            let g = gcd((n - k) as u128, k as u128 + 1);
            let (num, den) = ((n - k) as u128 / g, (k as u128 + 1) / g);
            binom = (binom / den).checked_mul(num).ok_or(Error::Overflow { n })?;
        }
    }
    if sum != power {
        return Err(Error::InternalConsistency(format!(
            "binomial sum {sum} disagrees with 2^{n} = {power}"
        )));
    }
    Ok(sum)
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Threshold radius above which the growth inequality holds,
/// i.e. the root of `cosh r = 2 cosh(r/2)`.
pub fn growth_threshold_radius() -> f64 {
    crate::numeric::bisect(
        1.0,
        3.0,
        |r: f64| 2.0 * ((r).cosh() - (r / 2.0).cosh()) - r.cosh(),
        tolerances::BISECT_ABS,
    )
    .expect("fixed bracket contains the threshold")
}
