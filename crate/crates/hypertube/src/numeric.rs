//! Shared numerical machinery: adaptive Simpson quadrature, bisection, and
//! a smallest-eigenvalue solver for symmetric operators.

use crate::{tolerances, Error, Result};

/// Integrate `f` over `[a, b]` by adaptive Simpson with interval bisection.
///
/// `rel_tol` is relative to the magnitude of the integral; `max_depth`
/// bounds the bisection depth. Non-convergence at the deepest level is an
/// error rather than a silent loss of accuracy.
pub fn adaptive_simpson<F>(f: F, a: f64, b: f64, rel_tol: f64, max_depth: u32) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if a == b {
        return Ok(0.0);
    }
    let fa = f(a);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let fb = f(b);
    let whole = simpson_rule(a, b, fa, fm, fb);
    // Absolute budget from a coarse estimate of the integral's size.
    let scale = whole.abs().max(1e-300);
    let eps = rel_tol * scale;
    let mut worst: f64 = 0.0;
    let value = simpson_rec(&f, a, m, b, fa, fm, fb, whole, eps, max_depth, &mut worst);
    if worst > eps {
        return Err(Error::QuadratureDidNotConverge {
            achieved: worst / scale,
            requested: rel_tol,
        });
    }
    Ok(value)
}

fn simpson_rule(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn simpson_rec<F>(
    f: &F,
    a: f64,
    m: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    s: f64,
    eps: f64,
    depth: u32,
    worst: &mut f64,
) -> f64
where
    F: Fn(f64) -> f64,
{
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let sl = simpson_rule(a, m, fa, flm, fm);
    let sr = simpson_rule(m, b, fm, frm, fb);
    let delta = sl + sr - s;
    if delta.abs() <= 15.0 * eps {
        return sl + sr + delta / 15.0;
    }
    if depth == 0 {
        *worst = worst.max(delta.abs() / 15.0);
        return sl + sr + delta / 15.0;
    }
    simpson_rec(f, a, lm, m, fa, flm, fm, sl, 0.5 * eps, depth - 1, worst)
        + simpson_rec(f, m, rm, b, fm, frm, fb, sr, 0.5 * eps, depth - 1, worst)
}

/// Bisection root finder on `[lo, hi]`; `f(lo)` and `f(hi)` must have
/// opposite signs. Converges to absolute interval width `tol`.
pub fn bisect<F>(mut lo: f64, mut hi: f64, f: F, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::BracketFailure { lo, hi, f_lo, f_hi });
    }
    let neg_low = f_lo < 0.0;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break; // interval no longer representable
        }
        let fm = f(mid);
        if (fm < 0.0) == neg_low {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Double `hi` starting from `start` until `f(hi) > 0`, at most
/// [`tolerances::BRACKET_MAX_DOUBLINGS`] times.
pub fn expand_bracket_up<F>(start: f64, f: F) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let mut hi = start;
    for _ in 0..tolerances::BRACKET_MAX_DOUBLINGS {
        if f(hi) > 0.0 {
            return Ok(hi);
        }
        hi *= 2.0;
    }
    Err(Error::BracketFailure {
        lo: start,
        hi,
        f_lo: f(start),
        f_hi: f(hi),
    })
}

/// Smallest eigenvalue (and eigenvector) of a symmetric operator given by
/// its matrix-vector product, via safeguarded shift-and-invert power
/// iteration with conjugate-gradient inner solves.
///
/// `lower_bound` must be a certified lower bound on the spectrum
/// (e.g. from Gershgorin disks); the shift never crosses the bottom
/// eigenvalue, so the inner systems stay positive definite.
pub fn smallest_eigenvalue<F>(
    dim: usize,
    apply: F,
    lower_bound: f64,
    rel_tol: f64,
    max_iter: usize,
) -> Result<(f64, Vec<f64>)>
where
    F: Fn(&[f64], &mut [f64]),
{
    assert!(dim > 0);
    let mut x = vec![1.0 / (dim as f64).sqrt(); dim];
    let mut ax = vec![0.0; dim];
    apply(&x, &mut ax);
    let mut lambda = dot(&x, &ax);
    let mut sigma = lower_bound - 1.0;
    let mut converged_streak = 0;
    for iter in 0..max_iter {
        let mut y = vec![0.0; dim];
        let mut margin = 1.0;
        // Back off the shift if the inner system turns indefinite.
        loop {
            let shifted = |v: &[f64], out: &mut [f64]| {
                apply(v, out);
                for (o, vi) in out.iter_mut().zip(v) {
                    *o -= sigma * *vi;
                }
            };
            match conjugate_gradient(dim, shifted, &x, &mut y) {
                CgOutcome::Ok => break,
                CgOutcome::Indefinite => {
                    margin *= 2.0;
                    sigma = lambda - margin * (1.0 + lambda.abs());
                    if margin > 1e6 {
                        return Err(Error::EigenIterationDidNotConverge { iters: iter });
                    }
                }
            }
        }
        let norm = dot(&y, &y).sqrt();
        if !norm.is_finite() || norm == 0.0 {
            return Err(Error::EigenIterationDidNotConverge { iters: iter });
        }
        for (xi, yi) in x.iter_mut().zip(&y) {
            *xi = yi / norm;
        }
        apply(&x, &mut ax);
        let new_lambda = dot(&x, &ax);
        let delta = (new_lambda - lambda).abs();
        lambda = new_lambda;
        if delta <= rel_tol * lambda.abs().max(1.0) {
            converged_streak += 1;
            if converged_streak >= 2 {
                return Ok((lambda, x));
            }
        } else {
            converged_streak = 0;
        }
        // Chase the Rayleigh quotient from below for fast convergence.
        sigma = lambda - (delta * 4.0).max(1e-2 * (1.0 + lambda.abs()));
    }
    Err(Error::EigenIterationDidNotConverge { iters: max_iter })
}

enum CgOutcome {
    Ok,
    Indefinite,
}

/// Plain conjugate gradient for a symmetric positive definite operator.
/// Runs to a fixed relative residual or an iteration cap; the caller
/// (inverse iteration) tolerates inexact solves.
fn conjugate_gradient<F>(dim: usize, apply: F, b: &[f64], x: &mut [f64]) -> CgOutcome
where
    F: Fn(&[f64], &mut [f64]),
{
    const CG_REL: f64 = 1e-10;
    let max_iter = 4 * dim + 200;
    x.iter_mut().for_each(|v| *v = 0.0);
    let mut r = b.to_vec();
    let mut p = r.clone();
    let mut ap = vec![0.0; dim];
    let b_norm2 = dot(b, b);
    let target = CG_REL * CG_REL * b_norm2;
    let mut r_norm2 = b_norm2;
    for _ in 0..max_iter {
        if r_norm2 <= target {
            return CgOutcome::Ok;
        }
        apply(&p, &mut ap);
        let curv = dot(&p, &ap);
        if curv <= 1e-14 * dot(&p, &p) {
            return CgOutcome::Indefinite;
        }
        let alpha = r_norm2 / curv;
        for i in 0..dim {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        let new_r_norm2 = dot(&r, &r);
        let beta = new_r_norm2 / r_norm2;
        for i in 0..dim {
            p[i] = r[i] + beta * p[i];
        }
        r_norm2 = new_r_norm2;
    }
    CgOutcome::Ok
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
