//! Newton–Puiseux root finding for polynomials with series coefficients.

use num_complex::Complex64;
use num_integer::Integer;
use num_traits::Zero;

use crate::complexpoly;
use crate::error::{Error, Result};
use crate::puiseux::{Exponent, PuiseuxSeries, SeriesConfig, SeriesPoly, Valuation};

/// Refinement steps allowed per branch, counting both Newton–Puiseux levels
/// and Newton iterations.
const MAX_STEPS: usize = 64;

/// Residual roots closer than this (relative) are treated as one cluster.
const CLUSTER_TOL: f64 = 1e-6;

/// All roots of `p`, with multiplicity, each correct modulo `O(t^prec)`.
///
/// Leading exponents come from the Newton polygon. A simple residual root is
/// refined by Newton iteration; a repeated one is peeled off one term at a
/// time by recentering and recursing.
pub fn newton_puiseux(
    p: &SeriesPoly,
    prec: Exponent,
    cfg: &SeriesConfig,
) -> Result<Vec<(PuiseuxSeries, usize)>> {
    let p = p.trimmed();
    let deg = match p.degree() {
        None | Some(0) => return Err(Error::DegeneratePolynomial),
        Some(d) => d,
    };
    let mut solver = Solver {
        p: &p,
        dp: p.derivative(),
        prec,
        cfg,
        out: Vec::new(),
    };
    solver.branch(&PuiseuxSeries::zero(), None, deg, 0)?;
    let total: usize = solver.out.iter().map(|(_, m)| m).sum();
    if total != deg {
        return Err(Error::Internal(format!(
            "root multiplicities sum to {total}, expected {deg}"
        )));
    }
    Ok(solver.out)
}

struct Solver<'a> {
    p: &'a SeriesPoly,
    dp: SeriesPoly,
    prec: Exponent,
    cfg: &'a SeriesConfig,
    out: Vec<(PuiseuxSeries, usize)>,
}

impl Solver<'_> {
    /// Finds the `m` roots `acc + w` of `p` with `val(w) > lambda`.
    fn branch(
        &mut self,
        acc: &PuiseuxSeries,
        lambda: Option<Exponent>,
        m: usize,
        steps: usize,
    ) -> Result<()> {
        if steps > MAX_STEPS {
            return Err(Error::NonConvergent { steps });
        }
        if let Some(l) = lambda {
            if l >= self.prec {
                self.out.push((acc.truncate(self.prec), m));
                return Ok(());
            }
        }
        let q = self.p.taylor_shift(acc);
        let vals: Vec<Valuation> = (0..=m).map(|k| q.coeff(k).valuation()).collect();
        let q0 = q.coeff(0);
        let mut first = 0;
        if q0.is_zero() {
            if q0.is_exact() {
                // acc is an exact root
                let ord = (1..=m)
                    .find(|&k| !q.coeff(k).is_zero())
                    .unwrap_or(m);
                self.out.push((acc.clone(), ord));
                if ord == m {
                    return Ok(());
                }
                first = ord;
            } else {
                // the constant term vanishes to known precision: the cluster
                // is only determined up to the radius it forces
                let p0 = q0.precision().expect("inexact zero has a precision");
                let bound = (1..=m)
                    .filter_map(|k| {
                        vals[k]
                            .finite()
                            .map(|v| (p0 - v) / Exponent::from_integer(k as i64))
                    })
                    .min()
                    .unwrap_or(p0)
                    .min(self.prec);
                self.out.push((acc.truncate(bound), m));
                return Ok(());
            }
        }
        let points: Vec<(usize, Exponent)> = (first..=m)
            .filter_map(|k| vals[k].finite().map(|v| (k, v)))
            .collect();
        for w in lower_hull(&points).windows(2) {
            let (k1, v1) = w[0];
            let (k2, v2) = w[1];
            let s = (v1 - v2) / Exponent::from_integer((k2 - k1) as i64);
            if let Some(l) = lambda {
                if s <= l {
                    // precision artifacts only; the true polygon has no such slope
                    continue;
                }
            }
            check_ramification(acc, s, self.cfg)?;
            let level = v1 + s * Exponent::from_integer(k1 as i64);
            let residual: Vec<Complex64> = (k1..=k2)
                .map(|k| {
                    let c = q.coeff(k);
                    match c.valuation().finite() {
                        Some(v) if v + s * Exponent::from_integer(k as i64) == level => c.leading_coefficient(),
                        _ => Complex64::zero(),
                    }
                })
                .collect();
            for (c, mult) in complexpoly::clustered_roots(&residual, CLUSTER_TOL)? {
                if c.norm() < 1e-14 {
                    continue;
                }
                let next = acc.add(&PuiseuxSeries::monomial(c, s));
                if mult == 1 {
                    let root = self.hensel(next)?;
                    self.out.push((root, 1));
                } else {
                    self.branch(&next, Some(s), mult, steps + 1)?;
                }
            }
        }
        Ok(())
    }

    /// Newton iteration from an approximation of a simple root.
    fn hensel(&self, z0: PuiseuxSeries) -> Result<PuiseuxSeries> {
        let mut z = z0;
        for _ in 0..MAX_STEPS {
            let r = self.p.eval(&z);
            if r.is_zero() {
                return Ok(z.truncate(self.prec));
            }
            let d = self.dp.eval(&z);
            let step = r.div_to(&d, self.prec)?;
            let scale = z.terms().map(|(_, c)| c.norm()).fold(1.0, f64::max);
            let small = step.terms().all(|(_, c)| c.norm() <= 1e-11 * scale);
            z = z.sub(&step);
            if step.is_zero() || small {
                return Ok(z.truncate(self.prec));
            }
        }
        Err(Error::NonConvergent { steps: MAX_STEPS })
    }
}

fn check_ramification(acc: &PuiseuxSeries, s: Exponent, cfg: &SeriesConfig) -> Result<()> {
    let needed = acc.ramification().lcm(s.denom());
    if needed > cfg.max_ramification {
        return Err(Error::RamificationCap {
            needed: needed as u64,
            cap: cfg.max_ramification as u64,
        });
    }
    Ok(())
}

/// Lower convex hull of points sorted by abscissa.
fn lower_hull(points: &[(usize, Exponent)]) -> Vec<(usize, Exponent)> {
    let mut hull: Vec<(usize, Exponent)> = Vec::new();
    for &p in points {
        while hull.len() >= 2 {
            let (x1, y1) = hull[hull.len() - 2];
            let (x2, y2) = hull[hull.len() - 1];
            // drop the middle point when it lies on or above the chord
            let cross = (y2 - y1) * Exponent::from_integer((p.0 - x1) as i64)
                - (p.1 - y1) * Exponent::from_integer((x2 - x1) as i64);
            if cross >= Exponent::zero() {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    hull
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn prec() -> Exponent {
        Exponent::from_integer(12)
    }

    fn residual_ok(p: &SeriesPoly, r: &PuiseuxSeries) -> bool {
        let v = p.eval(&r.as_exact()).valuation();
        match v {
            Valuation::Infinite => true,
            Valuation::Finite(v) => v >= prec() - Exponent::from_integer(1),
        }
    }

    #[test]
    fn square_root_of_t() {
        let p = SeriesPoly::new(vec![PuiseuxSeries::t().neg(), PuiseuxSeries::zero(), PuiseuxSeries::one()]);
        let rs = newton_puiseux(&p, prec(), &SeriesConfig::default()).unwrap();
        assert_eq!(rs.len(), 2);
        for (r, m) in &rs {
            assert_eq!(*m, 1);
            assert_eq!(r.valuation(), Valuation::Finite(Exponent::new(1, 2)));
            assert_eq!(r.ramification(), 2);
            assert!(residual_ok(&p, r));
        }
    }

    #[test]
    fn preimage_equation_of_constant() {
        // z² + 1 - t c with c = 3: roots ±i (1 - 3t/2 - …)
        let p = SeriesPoly::new(vec![
            PuiseuxSeries::one().sub(&PuiseuxSeries::t().scale(c(3.0, 0.0))),
            PuiseuxSeries::zero(),
            PuiseuxSeries::one(),
        ]);
        let rs = newton_puiseux(&p, prec(), &SeriesConfig::default()).unwrap();
        let oracle = PuiseuxSeries::t().scale(c(3.0, 0.0)).sub(&PuiseuxSeries::one()).root(2).unwrap();
        for (r, _) in &rs {
            assert!(oracle.iter().any(|o| o.truncate(prec()).approx_eq(r)), "{r}");
            assert!(residual_ok(&p, r));
        }
    }

    #[test]
    fn double_root() {
        let t = PuiseuxSeries::t();
        let x = PuiseuxSeries::from_terms(
            [(Exponent::from_integer(0), c(0.0, 1.0)), (Exponent::from_integer(1), c(0.5, 0.0))],
            None,
        );
        let p = SeriesPoly::new(vec![x.mul(&x), x.scale(c(-2.0, 0.0)), PuiseuxSeries::one()]);
        let rs = newton_puiseux(&p, prec(), &SeriesConfig::default()).unwrap();
        assert_eq!(rs.len(), 1);
        assert_eq!(rs[0].1, 2);
        assert!(rs[0].0.approx_eq(&x.truncate(rs[0].0.precision().unwrap_or(prec()))));
        let _ = t;
    }

    #[test]
    fn exact_zero_root() {
        let p = SeriesPoly::new(vec![PuiseuxSeries::zero(), PuiseuxSeries::zero(), PuiseuxSeries::t(), PuiseuxSeries::one()]);
        let rs = newton_puiseux(&p, prec(), &SeriesConfig::default()).unwrap();
        let total: usize = rs.iter().map(|(_, m)| m).sum();
        assert_eq!(total, 3);
        assert!(rs.iter().any(|(r, m)| r.is_zero() && *m == 2));
    }

    #[test]
    fn mixed_slopes() {
        // (z - t)(z - 1/t)(z - 2)
        let roots = [PuiseuxSeries::t(), PuiseuxSeries::t().inv().unwrap(), PuiseuxSeries::real(2.0)];
        let mut p = SeriesPoly::constant(PuiseuxSeries::one());
        for r in &roots {
            p = p.mul(&SeriesPoly::new(vec![r.neg(), PuiseuxSeries::one()]));
        }
        let rs = newton_puiseux(&p, prec(), &SeriesConfig::default()).unwrap();
        assert_eq!(rs.len(), 3);
        for want in &roots {
            assert!(rs.iter().any(|(r, _)| r.approx_eq(&want.truncate(prec()))), "missing {want}");
        }
    }

    #[test]
    fn ramification_cap_enforced() {
        let p = SeriesPoly::new(vec![
            PuiseuxSeries::t().neg(),
            PuiseuxSeries::zero(),
            PuiseuxSeries::zero(),
            PuiseuxSeries::one(),
        ]);
        let cfg = SeriesConfig {
            max_ramification: 2,
            ..SeriesConfig::default()
        };
        assert!(matches!(
            newton_puiseux(&p, prec(), &cfg),
            Err(Error::RamificationCap { needed: 3, cap: 2 })
        ));
    }

    #[test]
    fn constant_rejected() {
        let p = SeriesPoly::constant(PuiseuxSeries::one());
        assert_eq!(
            newton_puiseux(&p, prec(), &SeriesConfig::default()).unwrap_err(),
            Error::DegeneratePolynomial
        );
    }
}
