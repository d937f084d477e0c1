//! Möbius transformations of the upper half-space model, their Poincaré
//! extensions, classification and complex length, plus conversions to the
//! hyperboloid model of H³.
//!
//! Two models are used throughout the crate:
//!
//! * upper half space `{ z + tj : z ∈ ℂ, t > 0 }` with metric
//!   `(|dz|² + dt²)/t²`, on which `PSL(2, ℂ)` acts by Möbius maps;
//! * the unit pseudo-sphere `⟨x, x⟩ = -1, x₁ ≥ 1` of Lorentzian 4-space.
//!
//! The conversion fixes the convention that the vertical axis through
//! `(z = 0, t = 1)` maps to the hyperboloid geodesic
//! `(cosh v, sinh v, 0, 0)`, so screw motions about the `t`-axis become
//! block rotations in the `(x₁x₂)` and `(x₃x₄)` planes.

use std::f64::consts::{PI, TAU};
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::{tolerances, Error, Result};

/// A vector of Lorentzian 4-space (not necessarily on the hyperboloid).
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Vec4 {
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
    pub x4: f64,
}

impl Vec4 {
    pub const fn new(x1: f64, x2: f64, x3: f64, x4: f64) -> Self {
        Vec4 { x1, x2, x3, x4 }
    }

    pub const fn zero() -> Self {
        Vec4::new(0.0, 0.0, 0.0, 0.0)
    }

    /// Lorentzian inner product `-x₁y₁ + x₂y₂ + x₃y₃ + x₄y₄`.
    pub fn lorentz_dot(&self, o: &Vec4) -> f64 {
        -self.x1 * o.x1 + self.x2 * o.x2 + self.x3 * o.x3 + self.x4 * o.x4
    }

    /// Euclidean norm, used for residuals and convergence measures.
    pub fn euclid_norm(&self) -> f64 {
        (self.x1 * self.x1 + self.x2 * self.x2 + self.x3 * self.x3 + self.x4 * self.x4).sqrt()
    }
}

impl Add for Vec4 {
    type Output = Vec4;
    fn add(self, o: Vec4) -> Vec4 {
        Vec4::new(self.x1 + o.x1, self.x2 + o.x2, self.x3 + o.x3, self.x4 + o.x4)
    }
}

impl Sub for Vec4 {
    type Output = Vec4;
    fn sub(self, o: Vec4) -> Vec4 {
        Vec4::new(self.x1 - o.x1, self.x2 - o.x2, self.x3 - o.x3, self.x4 - o.x4)
    }
}

impl Neg for Vec4 {
    type Output = Vec4;
    fn neg(self) -> Vec4 {
        Vec4::new(-self.x1, -self.x2, -self.x3, -self.x4)
    }
}

impl Mul<f64> for Vec4 {
    type Output = Vec4;
    fn mul(self, s: f64) -> Vec4 {
        Vec4::new(self.x1 * s, self.x2 * s, self.x3 * s, self.x4 * s)
    }
}

/// The vector Lorentz-orthogonal to three given vectors, oriented so that
/// `(a, b, c, result)` is a positively oriented basis when independent.
pub fn lorentz_cross(a: &Vec4, b: &Vec4, c: &Vec4) -> Vec4 {
    let [a1, a2, a3, a4] = [a.x1, a.x2, a.x3, a.x4];
    let [b1, b2, b3, b4] = [b.x1, b.x2, b.x3, b.x4];
    let [c1, c2, c3, c4] = [c.x1, c.x2, c.x3, c.x4];
    let det3 = |m: [[f64; 3]; 3]| -> f64 {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let e1 = det3([[a2, a3, a4], [b2, b3, b4], [c2, c3, c4]]);
    let e2 = -det3([[a1, a3, a4], [b1, b3, b4], [c1, c3, c4]]);
    let e3 = det3([[a1, a2, a4], [b1, b2, b4], [c1, c2, c4]]);
    let e4 = -det3([[a1, a2, a3], [b1, b2, b3], [c1, c2, c3]]);
    // Flip the timelike component so the Lorentzian pairing vanishes.
    Vec4::new(-e1, e2, e3, e4)
}

/// A point of the hyperboloid model: `⟨x, x⟩ = -1`, `x₁ ≥ 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HyperboloidPoint {
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
    pub x4: f64,
}

impl HyperboloidPoint {
    pub fn new(x1: f64, x2: f64, x3: f64, x4: f64) -> Result<Self> {
        let v = Vec4::new(x1, x2, x3, x4);
        let residual = (v.lorentz_dot(&v) + 1.0).abs();
        let scale = v.euclid_norm().powi(2).max(1.0);
        if residual > tolerances::HYPERBOLOID_CONSTRAINT * scale {
            return Err(Error::InvalidPoint(format!(
                "hyperboloid constraint violated: <x,x> + 1 = {residual:e}"
            )));
        }
        if x1 < 1.0 - tolerances::HYPERBOLOID_CONSTRAINT {
            return Err(Error::InvalidPoint(format!("x1 = {x1} below 1")));
        }
        Ok(HyperboloidPoint { x1, x2, x3, x4 })
    }

    /// The base point `(1, 0, 0, 0)`.
    pub const fn base() -> Self {
        HyperboloidPoint { x1: 1.0, x2: 0.0, x3: 0.0, x4: 0.0 }
    }

    /// Radial reprojection `v ↦ v / √(-⟨v, v⟩)` of a timelike vector.
    pub fn project(v: Vec4) -> Result<Self> {
        let q = -v.lorentz_dot(&v);
        if q <= 0.0 || v.x1 <= 0.0 {
            return Err(Error::InvalidPoint(
                "cannot project a non-timelike or past-pointing vector".into(),
            ));
        }
        let s = q.sqrt();
        Ok(HyperboloidPoint {
            x1: v.x1 / s,
            x2: v.x2 / s,
            x3: v.x3 / s,
            x4: v.x4 / s,
        })
    }

    pub fn vec(&self) -> Vec4 {
        Vec4::new(self.x1, self.x2, self.x3, self.x4)
    }

    pub fn lorentz_dot(&self, o: &HyperboloidPoint) -> f64 {
        self.vec().lorentz_dot(&o.vec())
    }
}

/// Hyperbolic distance in the hyperboloid model, `cosh d = -⟨x, y⟩`.
pub fn distance_hyperboloid(p: &HyperboloidPoint, q: &HyperboloidPoint) -> f64 {
    (-p.lorentz_dot(q)).max(1.0).acosh()
}

/// A point `z + tj` of the upper half-space model.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UpperHalfSpacePoint {
    pub z: Complex64,
    pub t: f64,
}

impl UpperHalfSpacePoint {
    pub fn new(z: Complex64, t: f64) -> Result<Self> {
        if !crate::positive_finite(t) || !z.re.is_finite() || !z.im.is_finite() {
            return Err(Error::InvalidPoint(format!("height t = {t} must be positive")));
        }
        Ok(UpperHalfSpacePoint { z, t })
    }
}

/// Hyperbolic distance in the upper half-space model:
/// `cosh d = 1 + (|z_p - z_q|² + (t_p - t_q)²) / (2 t_p t_q)`.
pub fn distance_uhs(p: &UpperHalfSpacePoint, q: &UpperHalfSpacePoint) -> f64 {
    let dz2 = (p.z - q.z).norm_sqr();
    let dt = p.t - q.t;
    let c = 1.0 + (dz2 + dt * dt) / (2.0 * p.t * q.t);
    c.max(1.0).acosh()
}

/// Isometry from the upper half-space model onto the hyperboloid model.
///
/// `(z = 0, t = 1)` maps to the base point and the `t`-axis maps to
/// `(cosh v, sinh v, 0, 0)`.
pub fn uhs_to_hyperboloid(p: &UpperHalfSpacePoint) -> HyperboloidPoint {
    let s = p.z.norm_sqr() + p.t * p.t;
    let inv2t = 1.0 / (2.0 * p.t);
    HyperboloidPoint {
        x1: (s + 1.0) * inv2t,
        x2: (s - 1.0) * inv2t,
        x3: p.z.re / p.t,
        x4: p.z.im / p.t,
    }
}

/// Inverse of [`uhs_to_hyperboloid`].
pub fn hyperboloid_to_uhs(x: &HyperboloidPoint) -> UpperHalfSpacePoint {
    // x1 - x2 = 1/t is positive on the upper sheet.
    let inv_t = x.x1 - x.x2;
    UpperHalfSpacePoint {
        z: Complex64::new(x.x3 / inv_t, x.x4 / inv_t),
        t: 1.0 / inv_t,
    }
}

/// Conjugacy classes of Möbius transformations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MapClass {
    Identity,
    Parabolic,
    Elliptic,
    Loxodromic,
}

/// Translation length and twist angle of a loxodromic element,
/// `tr = ±2 cosh((l + iθ)/2)`.
///
/// The twist is stored in the canonical range `(-π, π]`; callers wanting a
/// lifted representative `θ + 2πk` supply it explicitly to the downstream
/// operations that accept raw `(l, θ)` pairs.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ComplexLength {
    l: f64,
    theta: f64,
}

impl ComplexLength {
    /// Build from a translation length and twist; the twist is wrapped into
    /// `(-π, π]`.
    pub fn new(l: f64, theta: f64) -> Result<Self> {
        if !crate::positive_finite(l) {
            return Err(Error::InvalidArgument(format!(
                "translation length l = {l} must be positive"
            )));
        }
        Ok(ComplexLength { l, theta: wrap_angle(theta) })
    }

    /// Translation length `l > 0`.
    pub fn l(&self) -> f64 {
        self.l
    }

    /// Twist angle in `(-π, π]`.
    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Pitch `|θ|/l` of the associated helicoid.
    pub fn pitch(&self) -> f64 {
        self.theta.abs() / self.l
    }

    /// Sign of the twist: `+1` for `θ ≥ 0`, `-1` otherwise.
    pub fn twist_sign(&self) -> i8 {
        if self.theta >= 0.0 {
            1
        } else {
            -1
        }
    }

    /// The complex number `l + iθ`.
    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(self.l, self.theta)
    }
}

/// Wrap an angle into `(-π, π]`.
pub fn wrap_angle(theta: f64) -> f64 {
    let mut t = theta % TAU;
    if t > PI {
        t -= TAU;
    } else if t <= -PI {
        t += TAU;
    }
    t
}

/// A Möbius transformation `z ↦ (az + b)/(cz + d)` acting on H³ through its
/// Poincaré extension. `M` and `-M` act identically; [`MoebiusMap::normalized`]
/// picks the representative with `det = 1` and `Re tr ≥ 0`
/// (ties broken by `Im tr ≥ 0`).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MoebiusMap {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

impl MoebiusMap {
    pub const fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Self {
        MoebiusMap { a, b, c, d }
    }

    pub fn identity() -> Self {
        MoebiusMap::new(Complex64::new(1.0, 0.0), Complex64::default(), Complex64::default(), Complex64::new(1.0, 0.0))
    }

    /// The normal form `diag(e^{L/2}, e^{-L/2})` with `L = l + iθ`:
    /// `z ↦ e^L z`, translating the `t`-axis by `l` and twisting by `θ`.
    pub fn loxodromic_normal_form(l: f64, theta: f64) -> Self {
        let half = Complex64::new(l / 2.0, theta / 2.0);
        MoebiusMap::new(half.exp(), Complex64::default(), Complex64::default(), (-half).exp())
    }

    pub fn det(&self) -> Complex64 {
        self.a * self.d - self.b * self.c
    }

    pub fn trace(&self) -> Complex64 {
        self.a + self.d
    }

    /// Scale to determinant one and fix the `±M` ambiguity.
    pub fn normalized(&self) -> Result<MoebiusMap> {
        let det = self.det();
        if !det.re.is_finite() || !det.im.is_finite() || det.norm() < 1e-100 {
            return Err(Error::DegenerateMoebiusMap);
        }
        let s = det.sqrt();
        let mut m = MoebiusMap::new(self.a / s, self.b / s, self.c / s, self.d / s);
        let tr = m.trace();
        if tr.re < 0.0 || (tr.re == 0.0 && tr.im < 0.0) {
            m = MoebiusMap::new(-m.a, -m.b, -m.c, -m.d);
        }
        Ok(m)
    }

    /// Inverse of a determinant-one map.
    pub fn inverse(&self) -> MoebiusMap {
        MoebiusMap::new(self.d, -self.b, -self.c, self.a)
    }

    /// Classification by the trace of the normalized representative.
    pub fn classify(&self) -> Result<MapClass> {
        let m = self.normalized()?;
        let tr = m.trace();
        let tol = tolerances::TRACE_CLASSIFY;
        let off = m.b.norm() + m.c.norm() + (m.a - m.d).norm();
        if off <= tol && (tr - 2.0).norm() <= tol {
            return Ok(MapClass::Identity);
        }
        if (tr - 2.0).norm() <= tol || (tr + 2.0).norm() <= tol {
            return Ok(MapClass::Parabolic);
        }
        if tr.im.abs() <= tol && tr.re.abs() < 2.0 {
            return Ok(MapClass::Elliptic);
        }
        Ok(MapClass::Loxodromic)
    }

    /// Complex length `(l, θ)` of a loxodromic element, from
    /// `tr = ±2 cosh((l + iθ)/2)`. Conjugation-invariant.
    pub fn complex_length(&self) -> Result<ComplexLength> {
        if self.classify()? != MapClass::Loxodromic {
            return Err(Error::NoComplexLength);
        }
        let m = self.normalized()?;
        let half = (m.trace() / 2.0).acosh(); // principal branch, Re ≥ 0
        let l = 2.0 * half.re;
        let theta = wrap_angle(2.0 * half.im);
        ComplexLength::new(l, theta)
    }

    /// Poincaré extension: the action on an interior point of H³,
    /// `g(z + tj) = ((az+b)(conj(cz+d)) + a conj(c) t² + tj) / (|cz+d|² + |c|² t²)`.
    pub fn apply(&self, p: &UpperHalfSpacePoint) -> Result<UpperHalfSpacePoint> {
        let m = self.normalized()?;
        let w = m.c * p.z + m.d;
        let t2 = p.t * p.t;
        let denom = w.norm_sqr() + m.c.norm_sqr() * t2;
        let z = ((m.a * p.z + m.b) * w.conj() + m.a * m.c.conj() * t2) / denom;
        let t = p.t / denom;
        if !crate::positive_finite(t) {
            return Err(Error::InternalConsistency(format!(
                "Poincaré extension produced height {t}"
            )));
        }
        UpperHalfSpacePoint::new(z, t)
    }

    /// Action on the boundary sphere `ℂ ∪ {∞}`.
    pub fn apply_boundary(&self, p: &BoundaryPoint) -> BoundaryPoint {
        match p {
            BoundaryPoint::Infinity => {
                if self.c.norm_sqr() == 0.0 {
                    BoundaryPoint::Infinity
                } else {
                    BoundaryPoint::Finite(self.a / self.c)
                }
            }
            BoundaryPoint::Finite(z) => {
                let w = self.c * z + self.d;
                if w.norm_sqr() == 0.0 {
                    BoundaryPoint::Infinity
                } else {
                    BoundaryPoint::Finite((self.a * z + self.b) / w)
                }
            }
        }
    }

    /// The invariant geodesic of a loxodromic element, oriented from the
    /// repelling fixed point towards the attracting one (the direction of
    /// translation).
    pub fn axis(&self) -> Result<GeodesicLine> {
        let m = self.normalized()?;
        if m.classify()? != MapClass::Loxodromic {
            return Err(Error::NotLoxodromic);
        }
        if m.c.norm_sqr() == 0.0 {
            // Fixed points are ∞ and b/(d - a); multiplier at the finite one is a/d.
            let z0 = BoundaryPoint::Finite(m.b / (m.d - m.a));
            return if m.a.norm() > m.d.norm() {
                GeodesicLine::new(z0, BoundaryPoint::Infinity)
            } else {
                GeodesicLine::new(BoundaryPoint::Infinity, z0)
            };
        }
        // Roots of c z² + (d - a) z - b = 0; discriminant is tr² - 4.
        let tr = m.trace();
        let disc = (tr * tr - 4.0).sqrt();
        let z1 = ((m.a - m.d) + disc) / (2.0 * m.c);
        let z2 = ((m.a - m.d) - disc) / (2.0 * m.c);
        // |g'(z)| = |cz + d|^{-2}: attracting where |cz + d| > 1.
        let s1 = (m.c * z1 + m.d).norm();
        let s2 = (m.c * z2 + m.d).norm();
        if s1 > s2 {
            GeodesicLine::new(BoundaryPoint::Finite(z2), BoundaryPoint::Finite(z1))
        } else {
            GeodesicLine::new(BoundaryPoint::Finite(z1), BoundaryPoint::Finite(z2))
        }
    }
}

impl Mul for MoebiusMap {
    type Output = MoebiusMap;
    fn mul(self, o: MoebiusMap) -> MoebiusMap {
        MoebiusMap::new(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )
    }
}

/// A point of the sphere at infinity: a complex number or the point at
/// infinity, encoded explicitly (never as a large float).
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BoundaryPoint {
    Finite(Complex64),
    Infinity,
}

/// An oriented geodesic of H³ given by two distinct ideal endpoints,
/// with a unit-speed parametrization running from the first endpoint
/// (`s → -∞`) to the second (`s → +∞`).
///
/// For two finite endpoints the parameter origin is the apex of the
/// semicircle; for a vertical line it is the point at height 1.
#[derive(Clone, Copy, Debug)]
pub struct GeodesicLine {
    start: BoundaryPoint,
    end: BoundaryPoint,
    param: Param,
}

#[derive(Clone, Copy, Debug)]
enum Param {
    /// Vertical line over `base`; `upward` when the line runs to ∞.
    Vertical { base: Complex64, upward: bool },
    /// Semicircle `z(s) = center + radius tanh(s) dir`, `t(s) = radius sech(s)`.
    Arc { center: Complex64, dir: Complex64, radius: f64 },
}

impl GeodesicLine {
    pub fn new(start: BoundaryPoint, end: BoundaryPoint) -> Result<Self> {
        let param = match (&start, &end) {
            (BoundaryPoint::Infinity, BoundaryPoint::Infinity) => {
                return Err(Error::InvalidArgument("geodesic endpoints coincide at infinity".into()))
            }
            (BoundaryPoint::Finite(p), BoundaryPoint::Infinity) => {
                Param::Vertical { base: *p, upward: true }
            }
            (BoundaryPoint::Infinity, BoundaryPoint::Finite(q)) => {
                Param::Vertical { base: *q, upward: false }
            }
            (BoundaryPoint::Finite(p), BoundaryPoint::Finite(q)) => {
                let sep = q - p;
                if sep.norm_sqr() == 0.0 {
                    return Err(Error::InvalidArgument(format!(
                        "geodesic endpoints coincide at {p}"
                    )));
                }
                Param::Arc {
                    center: 0.5 * (p + q),
                    dir: sep / sep.norm(),
                    radius: 0.5 * sep.norm(),
                }
            }
        };
        Ok(GeodesicLine { start, end, param })
    }

    /// The `t`-axis, oriented upward: endpoints `{0, ∞}`.
    pub fn t_axis() -> Self {
        GeodesicLine::new(BoundaryPoint::Finite(Complex64::default()), BoundaryPoint::Infinity)
            .expect("distinct endpoints")
    }

    pub fn endpoints(&self) -> (BoundaryPoint, BoundaryPoint) {
        (self.start, self.end)
    }

    /// Unit-speed point at parameter `s`.
    pub fn point_at(&self, s: f64) -> UpperHalfSpacePoint {
        match self.param {
            Param::Vertical { base, upward } => {
                let t = if upward { s.exp() } else { (-s).exp() };
                UpperHalfSpacePoint { z: base, t }
            }
            Param::Arc { center, dir, radius } => UpperHalfSpacePoint {
                z: center + dir * (radius * s.tanh()),
                t: radius / s.cosh(),
            },
        }
    }

    /// A Möbius map sending `start ↦ 0` and `end ↦ ∞` (so the line itself
    /// maps onto the `t`-axis).
    pub fn standardizing_map(&self) -> MoebiusMap {
        let one = Complex64::new(1.0, 0.0);
        match (self.start, self.end) {
            (BoundaryPoint::Finite(p), BoundaryPoint::Finite(q)) => {
                MoebiusMap::new(one, -p, one, -q)
            }
            (BoundaryPoint::Infinity, BoundaryPoint::Finite(q)) => {
                MoebiusMap::new(Complex64::default(), one, one, -q)
            }
            (BoundaryPoint::Finite(p), BoundaryPoint::Infinity) => {
                MoebiusMap::new(one, -p, Complex64::default(), one)
            }
            (BoundaryPoint::Infinity, BoundaryPoint::Infinity) => unreachable!("validated in new"),
        }
    }

    /// Start point and unit tangent of the line in the hyperboloid model,
    /// at parameter origin, pointing towards the `end` endpoint.
    pub fn hyperboloid_frame(&self) -> (HyperboloidPoint, Vec4) {
        let p0 = uhs_to_hyperboloid(&self.point_at(0.0));
        let p1 = uhs_to_hyperboloid(&self.point_at(1.0));
        // γ(s) = p0 cosh s + w sinh s, so w = (γ(1) - p0 cosh 1)/sinh 1.
        let w = (p1.vec() - p0.vec() * 1f64.cosh()) * (1.0 / 1f64.sinh());
        (p0, w)
    }
}

/// Distance from an interior point to a geodesic line. For the `t`-axis the
/// closed form is `sinh d = |z|/t`; the general case reduces to it by the
/// standardizing map.
pub fn dist_to_axis(p: &UpperHalfSpacePoint, line: &GeodesicLine) -> Result<f64> {
    let q = line.standardizing_map().apply(p)?;
    Ok((q.z.norm() / q.t).asinh())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::adaptive_simpson;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn cx(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_map(rng: &mut ChaCha8Rng) -> MoebiusMap {
        loop {
            let m = MoebiusMap::new(
                cx(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)),
                cx(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)),
                cx(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)),
                cx(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)),
            );
            if m.det().norm() > 0.1 {
                return m;
            }
        }
    }

    fn random_point(rng: &mut ChaCha8Rng) -> UpperHalfSpacePoint {
        UpperHalfSpacePoint::new(
            cx(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)),
            rng.gen_range(0.05..5.0),
        )
        .unwrap()
    }

    #[test]
    fn normalize_scalar_multiple_of_identity() {
        let m = MoebiusMap::new(cx(2.0, 0.0), cx(0.0, 0.0), cx(0.0, 0.0), cx(2.0, 0.0));
        let n = m.normalized().unwrap();
        assert!((n.a - 1.0).norm() < 1e-15 && (n.d - 1.0).norm() < 1e-15);
        assert!((n.det() - 1.0).norm() < tolerances::MOEBIUS_DET);
    }

    #[test]
    fn normalize_keeps_unit_determinant_maps() {
        let m = MoebiusMap::new(cx(2.0, 0.0), cx(0.0, 0.0), cx(0.0, 0.0), cx(0.5, 0.0));
        let n = m.normalized().unwrap();
        assert_eq!(n, m);
        let m = MoebiusMap::new(cx(3.0, 0.0), cx(1.0, 0.0), cx(2.0, 0.0), cx(1.0, 0.0));
        let n = m.normalized().unwrap();
        assert_eq!(n, m);
    }

    #[test]
    fn normalize_rejects_singular() {
        let m = MoebiusMap::new(cx(1.0, 0.0), cx(1.0, 0.0), cx(1.0, 0.0), cx(1.0, 0.0));
        assert!(matches!(m.normalized(), Err(Error::DegenerateMoebiusMap)));
    }

    #[test]
    fn classify_examples() {
        assert_eq!(MoebiusMap::identity().classify().unwrap(), MapClass::Identity);
        let parabolic = MoebiusMap::new(cx(1.0, 0.0), cx(1.0, 0.0), cx(0.0, 0.0), cx(1.0, 0.0));
        assert_eq!(parabolic.classify().unwrap(), MapClass::Parabolic);
        let lox = MoebiusMap::loxodromic_normal_form(0.1, 0.5);
        assert_eq!(lox.classify().unwrap(), MapClass::Loxodromic);
        let elliptic = MoebiusMap::loxodromic_normal_form(0.0, 1.0);
        assert_eq!(elliptic.classify().unwrap(), MapClass::Elliptic);
    }

    #[test]
    fn complex_length_normal_form() {
        let m = MoebiusMap::loxodromic_normal_form(0.05, 1.2);
        let cl = m.complex_length().unwrap();
        assert!((cl.l() - 0.05).abs() < 1e-12);
        assert!((cl.theta() - 1.2).abs() < 1e-12);
        assert!((cl.pitch() - 1.2 / 0.05).abs() < 1e-9);
        assert_eq!(cl.twist_sign(), 1);
    }

    #[test]
    fn complex_length_invariant_under_explicit_conjugation() {
        // h m h^{-1} with h = (1, 3; 0, 1), multiplied out by hand:
        // trace is unchanged, so the complex length must agree.
        let m = MoebiusMap::loxodromic_normal_form(0.05, 1.2);
        let h = MoebiusMap::new(cx(1.0, 0.0), cx(3.0, 0.0), cx(0.0, 0.0), cx(1.0, 0.0));
        let conj = h * m * h.inverse();
        assert!((conj.trace() - m.trace()).norm() < 1e-12);
        let cl = conj.complex_length().unwrap();
        assert!((cl.l() - 0.05).abs() < 1e-10);
        assert!((cl.theta() - 1.2).abs() < 1e-10);
    }

    #[test]
    fn complex_length_conjugation_invariance_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let l = rng.gen_range(0.01..1.5);
            let theta = rng.gen_range(-3.0..3.0);
            let m = MoebiusMap::loxodromic_normal_form(l, theta);
            let h = random_map(&mut rng);
            let conj = h * m * h.inverse();
            let cl = conj.complex_length().unwrap();
            assert!((cl.l() - l).abs() < 1e-9, "l mismatch: {} vs {}", cl.l(), l);
            assert!((cl.theta() - theta).abs() < 1e-9, "theta mismatch");
        }
    }

    #[test]
    fn complex_length_rejects_identity() {
        assert!(matches!(
            MoebiusMap::identity().complex_length(),
            Err(Error::NoComplexLength)
        ));
    }

    #[test]
    fn extension_of_diagonal_map_scales_height() {
        // g(z) = αz with α = e^{l+iθ} sends (0, 1) to (0, e^l).
        let (l, theta) = (0.3, 0.9);
        let g = MoebiusMap::loxodromic_normal_form(l, theta);
        let p = UpperHalfSpacePoint::new(cx(0.0, 0.0), 1.0).unwrap();
        let q = g.apply(&p).unwrap();
        assert!(q.z.norm() < 1e-15);
        assert!((q.t - l.exp()).abs() < 1e-12);
    }

    #[test]
    fn extension_of_identity_fixes_points() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10 {
            let p = random_point(&mut rng);
            let q = MoebiusMap::identity().apply(&p).unwrap();
            assert!((p.z - q.z).norm() < 1e-15 && (p.t - q.t).abs() < 1e-15);
        }
    }

    #[test]
    fn extension_preserves_distance() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..100 {
            let m = random_map(&mut rng);
            let p = random_point(&mut rng);
            let q = random_point(&mut rng);
            let d0 = distance_uhs(&p, &q);
            let d1 = distance_uhs(&m.apply(&p).unwrap(), &m.apply(&q).unwrap());
            assert!((d0 - d1).abs() < 1e-10, "distance drift {}", (d0 - d1).abs());
        }
    }

    #[test]
    fn distance_uhs_examples() {
        let p = UpperHalfSpacePoint::new(cx(0.0, 0.0), 1.0).unwrap();
        assert_eq!(distance_uhs(&p, &p), 0.0);
        let q = UpperHalfSpacePoint::new(cx(0.0, 0.0), std::f64::consts::E).unwrap();
        assert!((distance_uhs(&p, &q) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn distance_uhs_matches_arc_length_quadrature() {
        // (1,1) to (0,1): both lie on the semicircle centered at 1/2 with
        // radius sqrt(5)/2. Integrate ds = R/(t(φ)) dφ along it.
        let p = UpperHalfSpacePoint::new(cx(1.0, 0.0), 1.0).unwrap();
        let q = UpperHalfSpacePoint::new(cx(0.0, 0.0), 1.0).unwrap();
        let r = (5.0f64).sqrt() / 2.0;
        let phi_p = (0.5f64 / r).acos();
        let phi_q = ((-0.5f64) / r).acos();
        let arc = adaptive_simpson(|phi: f64| 1.0 / phi.sin(), phi_p, phi_q, 1e-12, 40).unwrap();
        let d = distance_uhs(&p, &q);
        assert!((d - arc).abs() < 1e-10, "quadrature {} vs formula {}", arc, d);
        assert!((d - 1.5f64.acosh()).abs() < 1e-14);
    }

    #[test]
    fn model_conversion_base_point_and_round_trip() {
        let p = UpperHalfSpacePoint::new(cx(0.0, 0.0), 1.0).unwrap();
        let h = uhs_to_hyperboloid(&p);
        assert_eq!((h.x1, h.x2, h.x3, h.x4), (1.0, 0.0, 0.0, 0.0));
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..50 {
            let p = random_point(&mut rng);
            let q = hyperboloid_to_uhs(&uhs_to_hyperboloid(&p));
            assert!((p.z - q.z).norm() < 1e-12 && (p.t - q.t).abs() < 1e-12);
        }
    }

    #[test]
    fn model_distances_agree() {
        // Moderate coordinates keep both routes well conditioned; the
        // agreement bound is absolute.
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        let pts: Vec<_> = (0..10)
            .map(|_| {
                UpperHalfSpacePoint::new(
                    cx(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)),
                    rng.gen_range(0.2..3.0),
                )
                .unwrap()
            })
            .collect();
        for (i, p) in pts.iter().enumerate() {
            for q in pts.iter().skip(i + 1) {
                let d_uhs = distance_uhs(p, q);
                let d_hyp = distance_hyperboloid(&uhs_to_hyperboloid(p), &uhs_to_hyperboloid(q));
                assert!((d_uhs - d_hyp).abs() < tolerances::MODEL_AGREEMENT);
            }
        }
    }

    #[test]
    fn t_axis_maps_to_hyperboloid_axis() {
        for v in [-2.0, -0.3, 0.0, 1.7] {
            let p = UpperHalfSpacePoint::new(cx(0.0, 0.0), f64::exp(v)).unwrap();
            let h = uhs_to_hyperboloid(&p);
            assert!((h.x1 - v.cosh()).abs() < 1e-12);
            assert!((h.x2 - v.sinh()).abs() < 1e-12);
            assert!(h.x3.abs() < 1e-15 && h.x4.abs() < 1e-15);
        }
    }

    #[test]
    fn axis_of_normal_form_is_t_axis() {
        let m = MoebiusMap::loxodromic_normal_form(0.4, 0.7);
        let line = m.axis().unwrap();
        match line.endpoints() {
            (BoundaryPoint::Finite(z), BoundaryPoint::Infinity) => assert!(z.norm() < 1e-14),
            other => panic!("unexpected endpoints {other:?}"),
        }
    }

    #[test]
    fn axis_of_conjugated_normal_form() {
        let m = MoebiusMap::loxodromic_normal_form(0.4, 0.7);
        let h = MoebiusMap::new(cx(1.0, 0.5), cx(-0.3, 0.2), cx(0.1, 0.0), cx(1.0, 0.0));
        let conj = h * m * h.inverse();
        let line = conj.axis().unwrap();
        // Endpoints must be h(0) and h(∞), and be fixed by the conjugate.
        let h0 = h.apply_boundary(&BoundaryPoint::Finite(cx(0.0, 0.0)));
        let hinf = h.apply_boundary(&BoundaryPoint::Infinity);
        let (s, e) = line.endpoints();
        for (got, want) in [(s, h0), (e, hinf)] {
            match (got, want) {
                (BoundaryPoint::Finite(a), BoundaryPoint::Finite(b)) => {
                    assert!((a - b).norm() < 1e-10)
                }
                (BoundaryPoint::Infinity, BoundaryPoint::Infinity) => {}
                other => panic!("endpoint mismatch {other:?}"),
            }
        }
        for bp in [s, e] {
            let image = conj.apply_boundary(&bp);
            match (bp, image) {
                (BoundaryPoint::Finite(a), BoundaryPoint::Finite(b)) => {
                    assert!((a - b).norm() < 1e-9)
                }
                (BoundaryPoint::Infinity, BoundaryPoint::Infinity) => {}
                other => panic!("fixed point not fixed {other:?}"),
            }
        }
    }

    #[test]
    fn axis_rejects_parabolic() {
        let parabolic = MoebiusMap::new(cx(1.0, 0.0), cx(1.0, 0.0), cx(0.0, 0.0), cx(1.0, 0.0));
        assert!(matches!(parabolic.axis(), Err(Error::NotLoxodromic)));
    }

    #[test]
    fn points_on_axis_move_by_translation_length() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..20 {
            let l = rng.gen_range(0.05..1.0);
            let theta = rng.gen_range(-3.0..3.0);
            let m = MoebiusMap::loxodromic_normal_form(l, theta);
            let h = random_map(&mut rng);
            let conj = h * m * h.inverse();
            let line = conj.axis().unwrap();
            let s = rng.gen_range(-1.0..1.0);
            let p = line.point_at(s);
            let moved = conj.apply(&p).unwrap();
            // The image lies on the axis, exactly l further along.
            let expected = line.point_at(s + l);
            assert!(distance_uhs(&moved, &expected) < 1e-8);
            assert!((distance_uhs(&p, &moved) - l).abs() < 1e-9);
        }
    }

    #[test]
    fn dist_to_axis_closed_form() {
        let axis = GeodesicLine::t_axis();
        let on_axis = UpperHalfSpacePoint::new(cx(0.0, 0.0), 2.5).unwrap();
        assert!(dist_to_axis(&on_axis, &axis).unwrap() < 1e-12);
        let p = UpperHalfSpacePoint::new(cx(1.0, 0.0), 1.0).unwrap();
        let d = dist_to_axis(&p, &axis).unwrap();
        assert!((d - 1f64.asinh()).abs() < 1e-12);
    }

    #[test]
    fn dist_to_axis_matches_dense_scan() {
        // Independent oracle: minimize the point-to-point distance over a
        // dense sampling of the axis.
        let axis = GeodesicLine::t_axis();
        let p = UpperHalfSpacePoint::new(cx(1.0, 0.0), 1.0).unwrap();
        let mut best = f64::INFINITY;
        for k in 0..200_001 {
            let s = -4.0 + 8.0 * (k as f64) / 200_000.0;
            best = best.min(distance_uhs(&p, &axis.point_at(s)));
        }
        let d = dist_to_axis(&p, &axis).unwrap();
        assert!((d - best).abs() < 1e-8, "scan {} vs closed form {}", best, d);
    }

    #[test]
    fn dist_to_axis_is_isometry_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        for _ in 0..30 {
            let g = random_map(&mut rng);
            let p = random_point(&mut rng);
            let d0 = dist_to_axis(&p, &GeodesicLine::t_axis()).unwrap();
            // Image of the t-axis under g.
            let s = g.apply_boundary(&BoundaryPoint::Finite(cx(0.0, 0.0)));
            let e = g.apply_boundary(&BoundaryPoint::Infinity);
            let image = GeodesicLine::new(s, e).unwrap();
            let d1 = dist_to_axis(&g.apply(&p).unwrap(), &image).unwrap();
            assert!((d0 - d1).abs() < 1e-9);
        }
    }

    #[test]
    fn geodesic_parametrization_is_unit_speed() {
        let line = GeodesicLine::new(
            BoundaryPoint::Finite(cx(-1.0, 0.5)),
            BoundaryPoint::Finite(cx(2.0, -0.7)),
        )
        .unwrap();
        for s in [-1.5, -0.2, 0.0, 0.9, 2.1] {
            let d = distance_uhs(&line.point_at(s), &line.point_at(s + 0.25));
            assert!((d - 0.25).abs() < 1e-12);
        }
    }

    #[test]
    fn lorentz_cross_is_orthogonal() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..50 {
            let v = |rng: &mut ChaCha8Rng| {
                Vec4::new(
                    rng.gen_range(-1.0..1.0),
                    rng.gen_range(-1.0..1.0),
                    rng.gen_range(-1.0..1.0),
                    rng.gen_range(-1.0..1.0),
                )
            };
            let (a, b, c) = (v(&mut rng), v(&mut rng), v(&mut rng));
            let n = lorentz_cross(&a, &b, &c);
            for w in [&a, &b, &c] {
                assert!(n.lorentz_dot(w).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn hyperboloid_point_validation() {
        assert!(HyperboloidPoint::new(1.0, 0.0, 0.0, 0.0).is_ok());
        assert!(HyperboloidPoint::new(0.5, 0.0, 0.0, 0.0).is_err());
        let v = Vec4::new(2.0, 0.3, -0.4, 0.1);
        let p = HyperboloidPoint::project(v).unwrap();
        assert!((p.vec().lorentz_dot(&p.vec()) + 1.0).abs() < 1e-14);
    }

    #[test]
    fn wrap_angle_canonical_range() {
        assert!((wrap_angle(PI) - PI).abs() < 1e-15);
        assert!((wrap_angle(-PI) - PI).abs() < 1e-15);
        assert!((wrap_angle(3.0 * PI) - PI).abs() < 1e-12);
        assert!((wrap_angle(TAU + 0.3) - 0.3).abs() < 1e-12);
        assert!((wrap_angle(-TAU + 0.3) - 0.3).abs() < 1e-12);
    }
}
