//! The degenerating quadratic family `f_t(z) = (z² + 1)/t`.
//!
//! Over the Puiseux field the map has fixed points `x± = (t ± √(t² - 4))/2`
//! with constant terms `±i`. The directions `U±` at the Gauss point that
//! contain them are the only ones whose points stay bounded, and `f` maps
//! both disks `B± = ζ(x±, 1)` onto the Gauss point. Iterating, the sets
//! `B_α` of points with itinerary `α ∈ {±}^k` are disks of radius `e^-k`,
//! and their disk points `η_α` are the branch points of the Julia tree.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{preimages_with, RationalMapK};
use crate::berkovich::{BerkPoint, Disk};
use crate::error::{Error, Result};
use crate::puiseux::{Exponent, PuiseuxSeries, SeriesConfig, DEFAULT_REL_PRECISION};
use crate::sncmodel::{Divisor, SncModel};

/// Tolerance for recognising the constant terms `±i`.
const SIGN_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    /// `±i`.
    pub fn unit(self) -> Complex64 {
        match self {
            Sign::Plus => Complex64::new(0.0, 1.0),
            Sign::Minus => Complex64::new(0.0, -1.0),
        }
    }

    pub fn parse_word(s: &str) -> Result<Vec<Sign>> {
        s.chars()
            .map(|c| match c {
                '+' | 'p' => Ok(Sign::Plus),
                '-' | 'm' => Ok(Sign::Minus),
                _ => Err(Error::Parse(format!("bad sign {c:?} in word {s:?}"))),
            })
            .collect()
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

pub fn word(alpha: &[Sign]) -> String {
    alpha.iter().map(|s| s.to_string()).collect()
}

/// `(z² + 1)/t`.
pub fn example_map() -> RationalMapK {
    RationalMapK::new(
        vec![PuiseuxSeries::one(), PuiseuxSeries::zero(), PuiseuxSeries::one()],
        vec![PuiseuxSeries::t()],
    )
    .expect("example map is nondegenerate")
}

/// `(x₊, x₋)`, the fixed points with constant terms `+i` and `-i`.
pub fn fixed_points() -> (PuiseuxSeries, PuiseuxSeries) {
    let t = PuiseuxSeries::t();
    let disc = t.pow(2).sub(&PuiseuxSeries::real(4.0));
    let half = Complex64::new(0.5, 0.0);
    let mut roots: Vec<PuiseuxSeries> = disc
        .root(2)
        .expect("nonzero discriminant")
        .into_iter()
        .map(|r| t.add(&r).scale(half))
        .collect();
    roots.sort_by(|a, b| b.constant_term().im.total_cmp(&a.constant_term().im));
    let xm = roots.pop().unwrap();
    let xp = roots.pop().unwrap();
    (xp, xm)
}

pub fn fixed_point(s: Sign) -> PuiseuxSeries {
    let (xp, xm) = fixed_points();
    match s {
        Sign::Plus => xp,
        Sign::Minus => xm,
    }
}

/// The sign of `U±` containing `x`, if any.
pub fn sign_of(x: &PuiseuxSeries) -> Option<Sign> {
    if x.valuation().finite().is_none_or(|v| v < Exponent::from_integer(0)) {
        return None;
    }
    let c = x.constant_term();
    [Sign::Plus, Sign::Minus]
        .into_iter()
        .find(|s| (c - s.unit()).norm() < SIGN_TOL)
}

/// All words of length `k`, in lexicographic order with `+` first.
pub fn words(k: usize) -> Vec<Vec<Sign>> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|w| {
                [Sign::Plus, Sign::Minus].into_iter().map(move |s| {
                    let mut w2 = w.clone();
                    w2.push(s);
                    w2
                })
            })
            .collect();
    }
    out
}

/// A classical point of `B_α`: pull the fixed point `x_{α_k}` back along
/// `α_{k-1}, …, α_1`.
pub fn ball_center(alpha: &[Sign]) -> Result<PuiseuxSeries> {
    let f = example_map();
    let Some((&last, init)) = alpha.split_last() else {
        return Err(Error::Config("empty itinerary".into()));
    };
    let prec = Exponent::from_integer(DEFAULT_REL_PRECISION);
    let cfg = SeriesConfig::default();
    let mut w = fixed_point(last);
    for &s in init.iter().rev() {
        let pre = preimages_with(&f, &BerkPoint::Classical(w.clone()), prec, &cfg)?;
        w = pre
            .into_iter()
            .find_map(|(p, _)| match p {
                BerkPoint::Classical(x) if sign_of(&x) == Some(s) => Some(x),
                _ => None,
            })
            .ok_or_else(|| Error::Internal("preimage in U± not found".into()))?;
    }
    Ok(w)
}

/// The branch point `η_α = ζ(c_α, |α|)`, the disk point of `B_α`. The empty
/// word gives the Gauss point.
pub fn eta(alpha: &[Sign]) -> Result<Disk> {
    if alpha.is_empty() {
        return Ok(Disk::gauss());
    }
    let c = ball_center(alpha)?;
    Ok(Disk::new(&c, Exponent::from_integer(alpha.len() as i64)))
}

/// Divisor data `(name, η, multiplicity)` of the tower model `X^(n)`: the
/// Gauss point `E` and every `E_α` with `|α| <= n`.
pub fn tower_divisors(n: usize) -> Result<Vec<(String, Disk, u32)>> {
    let mut out = vec![("E".to_string(), Disk::gauss(), 1)];
    for k in 1..=n {
        for alpha in words(k) {
            out.push((format!("E{}", word(&alpha)), eta(&alpha)?, 1));
        }
    }
    Ok(out)
}

/// The tower model `X^(n)`.
pub fn tower_model(n: usize) -> Result<SncModel> {
    SncModel::new(
        tower_divisors(n)?
            .into_iter()
            .map(|(name, eta, m)| Divisor::new(name, eta, m))
            .collect(),
    )
}

/// First `n` symbols of the itinerary of `z`: `+` when `fᵏ(z) ∈ U₊` and `-`
/// when `fᵏ(z) ∈ U₋`.
pub fn symbol_itinerary(f: &RationalMapK, z: &BerkPoint, n: usize) -> Result<Vec<Sign>> {
    let mut out = Vec::with_capacity(n);
    let mut cur = z.clone();
    for step in 0..n {
        let sign = match &cur {
            BerkPoint::Classical(x) => sign_of(x),
            _ => None,
        };
        let Some(s) = sign else {
            return Err(Error::NotInJulia {
                step,
                point: cur.to_string(),
            });
        };
        out.push(s);
        if step + 1 < n {
            cur = f.image(&cur)?;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{canonical_measure_approx, MeasureConfig};

    #[test]
    fn fixed_points_are_fixed() {
        let f = example_map();
        for s in [Sign::Plus, Sign::Minus] {
            let x = fixed_point(s);
            assert!((x.constant_term() - s.unit()).norm() < 1e-12);
            let fx = f.eval(&x).unwrap();
            assert_eq!(fx, BerkPoint::Classical(x));
        }
    }

    #[test]
    fn fixed_point_expansion() {
        // x₊ = i + t/2 - i t²/8 + …
        let x = fixed_point(Sign::Plus);
        assert!((x.coefficient(Exponent::from_integer(1)) - Complex64::new(0.5, 0.0)).norm() < 1e-12);
        assert!((x.coefficient(Exponent::from_integer(2)) - Complex64::new(0.0, -0.125)).norm() < 1e-12);
    }

    #[test]
    fn itineraries_of_fixed_points() {
        let f = example_map();
        let plus = symbol_itinerary(&f, &BerkPoint::Classical(fixed_point(Sign::Plus)), 6).unwrap();
        assert!(plus.iter().all(|s| *s == Sign::Plus));
        let minus = symbol_itinerary(&f, &BerkPoint::Classical(fixed_point(Sign::Minus)), 6).unwrap();
        assert!(minus.iter().all(|s| *s == Sign::Minus));
    }

    #[test]
    fn escaping_point_rejected() {
        let f = example_map();
        let err = symbol_itinerary(&f, &BerkPoint::Classical(PuiseuxSeries::real(2.0)), 3).unwrap_err();
        assert!(matches!(err, Error::NotInJulia { step: 0, .. }));
    }

    #[test]
    fn depth_n_preimages_realize_every_itinerary_once() {
        let f = example_map();
        let n = 4;
        let s = canonical_measure_approx(
            &f,
            &BerkPoint::classical(PuiseuxSeries::zero()),
            &MeasureConfig::with_depth(n),
        )
        .unwrap();
        let mut seen: Vec<Vec<Sign>> = s
            .points
            .iter()
            .map(|(p, _)| symbol_itinerary(&f, p, n).unwrap())
            .collect();
        seen.sort();
        let mut all = words(n);
        all.sort();
        assert_eq!(seen, all);
    }

    #[test]
    fn eta_of_minus_plus_is_negated_fixed_point() {
        let e = eta(&[Sign::Minus, Sign::Plus]).unwrap();
        let want = Disk::new(&fixed_point(Sign::Plus).neg(), Exponent::from_integer(2));
        assert_eq!(e, want);
        assert_eq!(eta(&[Sign::Plus, Sign::Plus]).unwrap(), Disk::new(&fixed_point(Sign::Plus), Exponent::from_integer(2)));
    }

    #[test]
    fn eta_maps_to_parent() {
        let f = example_map();
        for alpha in words(3) {
            let img = crate::dynamics::image_type2(&f, &eta(&alpha).unwrap()).unwrap();
            assert_eq!(img, eta(&alpha[1..]).unwrap());
        }
    }

    #[test]
    fn tower_size() {
        assert_eq!(tower_divisors(3).unwrap().len(), 15);
    }
}
