//! Rational maps over the Puiseux field: reduction, the action on disk
//! points, backward orbits and the canonical measure.

mod measure;
pub mod quadratic;
mod solver;

pub use measure::{
    canonical_measure_approx, is_exceptional, julia_span, preimages, preimages_with,
    Mass, MeasureConfig, WeightedPointSet, DEFAULT_CAP, DEFAULT_RNG_SEED,
};
pub use solver::newton_puiseux;

use num_complex::Complex64;
use serde::Serialize;

use crate::berkovich::{BerkPoint, Disk, Mobius};
use crate::complexpoly;
use crate::error::{Error, Result};
use crate::puiseux::{Exponent, PuiseuxSeries, SeriesPoly, Valuation};

/// Parameters at which the exact-degree condition is tested numerically.
const GENERIC_TS: [Complex64; 2] = [Complex64::new(0.0137, 0.0071), Complex64::new(0.0213, -0.0049)];

/// A rational map `N(z)/D(z)` of exact degree `d >= 2` over the Puiseux
/// field, standing for the family `f_t`.
///
/// Coefficients are scaled by a power of `t` so that the smallest valuation
/// over all of them is `0`.
#[derive(Clone, Debug)]
pub struct RationalMapK {
    num: SeriesPoly,
    den: SeriesPoly,
    degree: usize,
}

impl RationalMapK {
    pub fn new(num: Vec<PuiseuxSeries>, den: Vec<PuiseuxSeries>) -> Result<Self> {
        let num = SeriesPoly::new(num).trimmed();
        let den = SeriesPoly::new(den).trimmed();
        if den.is_zero() {
            return Err(Error::DegenerateMap("zero denominator".into()));
        }
        if num.is_zero() {
            return Err(Error::DegenerateMap("zero numerator".into()));
        }
        let degree = num.degree().unwrap_or(0).max(den.degree().unwrap_or(0));
        if degree < 2 {
            return Err(Error::DegenerateMap(format!("degree {degree} < 2")));
        }
        let min = num
            .min_valuation()
            .min(den.min_valuation())
            .finite()
            .expect("denominator is nonzero");
        let map = RationalMapK {
            num: num.shift(-min),
            den: den.shift(-min),
            degree,
        };
        if !GENERIC_TS.iter().any(|t| map.exact_degree_at(*t)) {
            return Err(Error::DegenerateMap(
                "numerator and denominator share a factor".into(),
            ));
        }
        Ok(map)
    }

    /// A polynomial map.
    pub fn polynomial(coeffs: Vec<PuiseuxSeries>) -> Result<Self> {
        RationalMapK::new(coeffs, vec![PuiseuxSeries::one()])
    }

    fn exact_degree_at(&self, t: Complex64) -> bool {
        let Ok((n, d)) = self.at(t) else {
            return false;
        };
        let Ok((n2, d2)) = complexpoly::cancel_common_roots(&n, &d, 1e-8) else {
            return false;
        };
        n2.len().max(d2.len()).saturating_sub(1) == self.degree
    }

    pub fn numerator(&self) -> &SeriesPoly {
        &self.num
    }

    pub fn denominator(&self) -> &SeriesPoly {
        &self.den
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.degree() == Some(0)
    }

    /// Coefficients of `f_t` at a concrete parameter, ascending powers.
    pub fn at(&self, t: Complex64) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
        let ev = |p: &SeriesPoly| -> Result<Vec<Complex64>> {
            p.coeffs().iter().map(|c| c.eval(t)).collect()
        };
        Ok((ev(&self.num)?, ev(&self.den)?))
    }

    /// `f(x)` for a classical point.
    pub fn eval(&self, x: &PuiseuxSeries) -> Result<BerkPoint> {
        let n = self.num.eval(x);
        let d = self.den.eval(x);
        if d.is_zero() {
            if n.is_zero() {
                return Err(Error::Internal("0/0 in map evaluation".into()));
            }
            return Ok(BerkPoint::Infinity);
        }
        Ok(BerkPoint::Classical(n.div(&d)?))
    }

    /// Image of any representable point.
    pub fn image(&self, p: &BerkPoint) -> Result<BerkPoint> {
        match p {
            BerkPoint::Classical(x) => self.eval(x),
            BerkPoint::Infinity => {
                let dn = self.num.degree().unwrap_or(0);
                let dd = self.den.degree().unwrap_or(0);
                if dn > dd {
                    Ok(BerkPoint::Infinity)
                } else if dn < dd {
                    Ok(BerkPoint::Classical(PuiseuxSeries::zero()))
                } else {
                    Ok(BerkPoint::Classical(
                        self.num.coeff(dn).div(&self.den.coeff(dd))?,
                    ))
                }
            }
            BerkPoint::Disk(d) => Ok(BerkPoint::Disk(image_type2(self, d)?)),
        }
    }
}

/// The map obtained by reducing the coefficients modulo `t`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReducedMap {
    pub numerator: Vec<Complex64>,
    pub denominator: Vec<Complex64>,
    pub degree: usize,
    /// The reduction is the constant `∞`.
    pub constant_infinity: bool,
}

/// Reduction modulo `t` with common factors cancelled.
pub fn reduce_at_zero(f: &RationalMapK) -> ReducedMap {
    let n0 = complexpoly::trim(&f.num.reduction(), 1e-12);
    let d0 = complexpoly::trim(&f.den.reduction(), 1e-12);
    if d0.is_empty() || n0.is_empty() {
        return ReducedMap {
            constant_infinity: d0.is_empty(),
            numerator: n0,
            denominator: d0,
            degree: 0,
        };
    }
    let (n, d) = complexpoly::cancel_common_roots(&n0, &d0, 1e-8).unwrap_or((n0, d0));
    let degree = n.len().max(d.len()) - 1;
    ReducedMap {
        numerator: n,
        denominator: d,
        degree,
        constant_infinity: false,
    }
}

pub fn has_good_reduction(f: &RationalMapK) -> bool {
    reduce_at_zero(f).degree == f.degree()
}

/// Conjugation of a quadratic polynomial to `w² + c`.
#[derive(Clone, Debug)]
pub struct QuadraticNormalForm {
    pub potentially_good: bool,
    /// `τ(z) = a z + b/2` with `τ ∘ f ∘ τ⁻¹ = w² + c`.
    pub tau: Mobius,
    pub c: PuiseuxSeries,
}

/// Exact decision of potentially good reduction for `a z² + b z + c₀`:
/// it holds iff `|C| <= 1` for the normal form `w² + C`.
pub fn potentially_good_quadratic(f: &RationalMapK) -> Result<QuadraticNormalForm> {
    if !f.is_polynomial() || f.degree() != 2 {
        return Err(Error::UnsupportedMap(
            "potentially good reduction is decided only for quadratic polynomials".into(),
        ));
    }
    let d0 = f.den.coeff(0);
    let a = f.num.coeff(2).div(&d0)?;
    let b = f.num.coeff(1).div(&d0)?;
    let c0 = f.num.coeff(0).div(&d0)?;
    let half_b = b.scale(Complex64::new(0.5, 0.0));
    let c = a.mul(&c0).add(&half_b).sub(&half_b.mul(&half_b));
    let potentially_good = match c.valuation() {
        Valuation::Infinite => true,
        Valuation::Finite(v) => v >= Exponent::from_integer(0),
    };
    Ok(QuadraticNormalForm {
        potentially_good,
        tau: Mobius::affine(a, half_b)?,
        c,
    })
}

/// Coarse classification used as the precondition of the limit pipeline.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ReductionClass {
    Good,
    PotentiallyGood,
    GenuinelyBad,
    /// Not good; potentially good reduction is not decided for this map.
    Undecided,
}

pub fn reduction_class(f: &RationalMapK) -> ReductionClass {
    if has_good_reduction(f) {
        return ReductionClass::Good;
    }
    match potentially_good_quadratic(f) {
        Ok(nf) if nf.potentially_good => ReductionClass::PotentiallyGood,
        Ok(_) => ReductionClass::GenuinelyBad,
        Err(_) => ReductionClass::Undecided,
    }
}

/// Image of a disk point.
///
/// With `N`, `D` recentered at the disk center `x`, the image is the disk
/// around `f(x)` whose radius is `|G|/|D(x)|²` for
/// `G(w) = N(x+w) D(x) - N(x) D(x+w)`, provided `D` has no zero in the disk.
pub fn image_type2(f: &RationalMapK, p: &Disk) -> Result<Disk> {
    let x = p.center();
    let q = p.q();
    let nx = f.num.taylor_shift(x);
    let dx = f.den.taylor_shift(x);
    let scaled = |c: &PuiseuxSeries, k: usize| {
        c.valuation()
            .finite()
            .map(|v| v + q * Exponent::from_integer(k as i64))
    };
    let d0 = dx.coeff(0);
    let Valuation::Finite(vd0) = d0.valuation() else {
        return Err(Error::PoleInDisk(p.to_string()));
    };
    let pole = dx
        .coeffs()
        .iter()
        .enumerate()
        .skip(1)
        .filter_map(|(k, c)| scaled(c, k))
        .any(|v| v <= vd0);
    if pole {
        return Err(Error::PoleInDisk(p.to_string()));
    }
    let n0 = nx.coeff(0);
    let len = nx.coeffs().len().max(dx.coeffs().len());
    let radius = (1..len)
        .filter_map(|k| {
            let g = nx.coeff(k).mul(&d0).sub(&n0.mul(&dx.coeff(k)));
            scaled(&g, k)
        })
        .min()
        .ok_or_else(|| Error::DegenerateMap("constant on the disk".into()))?;
    let q_img = radius - Exponent::from_integer(2) * vd0;
    let center = n0.div_to(&d0, q_img)?;
    Ok(Disk::new(&center, q_img))
}
