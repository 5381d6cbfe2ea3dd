//! Univariate complex polynomials: evaluation, simultaneous root finding and
//! root clustering.
//!
//! Coefficients are in ascending order, `p[k]` multiplies `z^k`.

use num_complex::Complex64;
use num_traits::Zero;

use crate::error::{Error, Result};

const ABERTH_MAX_ITER: usize = 500;

pub fn eval(p: &[Complex64], z: Complex64) -> Complex64 {
    p.iter().rev().fold(Complex64::zero(), |acc, c| acc * z + c)
}

pub fn derivative(p: &[Complex64]) -> Vec<Complex64> {
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c * k as f64)
        .collect()
}

/// Drops leading coefficients whose modulus is below `tol` times the largest
/// coefficient.
pub fn trim(p: &[Complex64], tol: f64) -> Vec<Complex64> {
    let scale = p.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut n = p.len();
    while n > 0 && p[n - 1].norm() <= tol * scale {
        n -= 1;
    }
    p[..n].to_vec()
}

/// `(eval, derivative)` at `z` by Horner.
fn eval_both(p: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut v = Complex64::zero();
    let mut d = Complex64::zero();
    for c in p.iter().rev() {
        d = d * z + v;
        v = v * z + c;
    }
    (v, d)
}

/// Both roots of `a z² + b z + c`, choosing the sign that avoids
/// cancellation.
pub fn quadratic_roots(a: Complex64, b: Complex64, c: Complex64) -> [Complex64; 2] {
    let disc = (b * b - a * c * 4.0).sqrt();
    let plus = b + disc;
    let minus = b - disc;
    let q = if plus.norm() >= minus.norm() { plus } else { minus } * -0.5;
    if q.is_zero() {
        return [Complex64::zero(), Complex64::zero()];
    }
    [q / a, c / q]
}

/// All roots of `p` with multiplicity, using closed forms up to degree two
/// and Aberth–Ehrlich iteration above.
pub fn roots(p: &[Complex64]) -> Result<Vec<Complex64>> {
    let p = trim(p, 0.0);
    let deg = p.len().saturating_sub(1);
    match deg {
        0 => Ok(Vec::new()),
        1 => Ok(vec![-p[0] / p[1]]),
        2 => Ok(quadratic_roots(p[2], p[1], p[0]).to_vec()),
        _ => aberth(&p),
    }
}

fn aberth(p: &[Complex64]) -> Result<Vec<Complex64>> {
    let deg = p.len() - 1;
    let lead = p[deg];
    let monic: Vec<Complex64> = p.iter().map(|c| c / lead).collect();
    // Cauchy bound for the initial circle
    let radius = 1.0
        + monic[..deg]
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..deg)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / deg as f64 + 0.4;
            Complex64::from_polar(radius * 0.5, theta)
        })
        .collect();
    for _ in 0..ABERTH_MAX_ITER {
        let mut moved: f64 = 0.0;
        for i in 0..deg {
            let (v, d) = eval_both(&monic, z[i]);
            if v.is_zero() {
                continue;
            }
            let ratio = v / d;
            let sum: Complex64 = (0..deg)
                .filter(|&j| j != i)
                .map(|j| {
                    let diff = z[i] - z[j];
                    if diff.is_zero() {
                        Complex64::zero()
                    } else {
                        diff.inv()
                    }
                })
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * sum);
            if step.is_finite() {
                z[i] -= step;
                moved = moved.max(step.norm() / (1.0 + z[i].norm()));
            }
        }
        if moved < 1e-15 {
            return Ok(z.into_iter().map(|r| polish(&monic, r)).collect());
        }
    }
    let ok = z
        .iter()
        .all(|r| eval(&monic, *r).norm() < 1e-8 * (1.0 + r.norm().powi(deg as i32)));
    if ok {
        Ok(z)
    } else {
        Err(Error::ComplexRootFailure)
    }
}

/// A few Newton steps; keeps the input if they do not reduce the residual.
pub fn polish(p: &[Complex64], z0: Complex64) -> Complex64 {
    let mut z = z0;
    let mut best = eval(p, z).norm();
    for _ in 0..8 {
        let (v, d) = eval_both(p, z);
        if d.is_zero() || v.is_zero() {
            break;
        }
        let next = z - v / d;
        let r = eval(p, next).norm();
        if r.is_nan() || r >= best {
            break;
        }
        best = r;
        z = next;
    }
    z
}

/// Groups numerically coincident roots. Each cluster is refined as a simple
/// root of the `(m-1)`-th derivative, which is where a root of exact
/// multiplicity `m` is well conditioned.
pub fn clustered_roots(p: &[Complex64], tol: f64) -> Result<Vec<(Complex64, usize)>> {
    let rs = roots(p)?;
    let mut clusters: Vec<(Vec<Complex64>, usize)> = Vec::new();
    'outer: for r in rs {
        for (members, _) in clusters.iter_mut() {
            let centre = members[0];
            if (centre - r).norm() <= tol * (1.0 + centre.norm()) {
                members.push(r);
                continue 'outer;
            }
        }
        clusters.push((vec![r], 0));
    }
    let mut out = Vec::with_capacity(clusters.len());
    for (members, _) in clusters {
        let m = members.len();
        let mean = members.iter().sum::<Complex64>() / m as f64;
        let mut dp = p.to_vec();
        for _ in 1..m {
            dp = derivative(&dp);
        }
        let refined = polish(&dp, mean);
        out.push((refined, m));
    }
    Ok(out)
}

/// Removes common roots of `a` and `b` (within `tol`), returning the reduced
/// pair. Used to cancel common factors of a reduced rational map.
pub fn cancel_common_roots(
    a: &[Complex64],
    b: &[Complex64],
    tol: f64,
) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
    let a = trim(a, 1e-14);
    let b = trim(b, 1e-14);
    if a.len() <= 1 || b.len() <= 1 {
        return Ok((a, b));
    }
    let ra = roots(&a)?;
    let mut rb = roots(&b)?;
    let mut keep_a = Vec::new();
    for r in ra {
        if let Some(pos) = rb.iter().position(|s| (r - s).norm() <= tol * (1.0 + r.norm())) {
            rb.remove(pos);
        } else {
            keep_a.push(r);
        }
    }
    Ok((
        from_roots(a[a.len() - 1], &keep_a),
        from_roots(b[b.len() - 1], &rb),
    ))
}

/// `lead · Π (z - r)`.
pub fn from_roots(lead: Complex64, rs: &[Complex64]) -> Vec<Complex64> {
    let mut p = vec![lead];
    for r in rs {
        let mut next = vec![Complex64::zero(); p.len() + 1];
        for (k, c) in p.iter().enumerate() {
            next[k + 1] += c;
            next[k] -= c * r;
        }
        p = next;
    }
    p
}
