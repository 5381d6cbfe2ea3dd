use num_complex::Complex64;
use num_traits::Zero;

use super::{BerkPoint, Disk};
use crate::error::{Error, Result};
use crate::puiseux::{Exponent, PuiseuxSeries, Valuation};

/// `z ↦ (a z + b)/(c z + d)` with series coefficients.
#[derive(Clone, Debug)]
pub struct Mobius {
    pub a: PuiseuxSeries,
    pub b: PuiseuxSeries,
    pub c: PuiseuxSeries,
    pub d: PuiseuxSeries,
}

impl Mobius {
    pub fn new(
        a: PuiseuxSeries,
        b: PuiseuxSeries,
        c: PuiseuxSeries,
        d: PuiseuxSeries,
    ) -> Result<Self> {
        let m = Mobius { a, b, c, d };
        if m.det().is_zero() {
            return Err(Error::SingularMobius);
        }
        Ok(m)
    }

    pub fn identity() -> Self {
        Mobius {
            a: PuiseuxSeries::one(),
            b: PuiseuxSeries::zero(),
            c: PuiseuxSeries::zero(),
            d: PuiseuxSeries::one(),
        }
    }

    /// `z ↦ alpha z + beta`.
    pub fn affine(alpha: PuiseuxSeries, beta: PuiseuxSeries) -> Result<Self> {
        Mobius::new(alpha, beta, PuiseuxSeries::zero(), PuiseuxSeries::one())
    }

    /// `z ↦ 1/z`.
    pub fn inversion() -> Self {
        Mobius {
            a: PuiseuxSeries::zero(),
            b: PuiseuxSeries::one(),
            c: PuiseuxSeries::one(),
            d: PuiseuxSeries::zero(),
        }
    }

    /// The chart `z ↦ (z - x)/t^q` sending `ζ(x, q)` to the Gauss point.
    pub fn normalizing(disk: &Disk) -> Self {
        let s = PuiseuxSeries::monomial(Complex64::new(1.0, 0.0), -disk.q());
        let beta = disk.center().mul(&s).neg();
        Mobius {
            a: s,
            b: beta,
            c: PuiseuxSeries::zero(),
            d: PuiseuxSeries::one(),
        }
    }

    pub fn det(&self) -> PuiseuxSeries {
        self.a.mul(&self.d).sub(&self.b.mul(&self.c))
    }

    /// Matrix product, i.e. `self ∘ other` as maps.
    pub fn compose(&self, other: &Mobius) -> Mobius {
        Mobius {
            a: self.a.mul(&other.a).add(&self.b.mul(&other.c)),
            b: self.a.mul(&other.b).add(&self.b.mul(&other.d)),
            c: self.c.mul(&other.a).add(&self.d.mul(&other.c)),
            d: self.c.mul(&other.b).add(&self.d.mul(&other.d)),
        }
    }

    /// The adjugate, which inverts the map projectively.
    pub fn inverse(&self) -> Mobius {
        Mobius {
            a: self.d.clone(),
            b: self.b.neg(),
            c: self.c.neg(),
            d: self.a.clone(),
        }
    }

    pub fn is_affine(&self) -> bool {
        self.c.is_zero()
    }

    pub fn apply(&self, p: &BerkPoint) -> Result<BerkPoint> {
        match p {
            BerkPoint::Infinity => {
                if self.c.is_zero() {
                    Ok(BerkPoint::Infinity)
                } else {
                    Ok(BerkPoint::Classical(self.a.div(&self.c)?))
                }
            }
            BerkPoint::Classical(x) => {
                let num = self.a.mul(x).add(&self.b);
                let den = self.c.mul(x).add(&self.d);
                if den.is_zero() {
                    Ok(BerkPoint::Infinity)
                } else {
                    Ok(BerkPoint::Classical(num.div(&den)?))
                }
            }
            BerkPoint::Disk(disk) => Ok(BerkPoint::Disk(self.apply_disk(disk)?)),
        }
    }

    pub fn apply_disk(&self, disk: &Disk) -> Result<Disk> {
        if self.c.is_zero() {
            let alpha = self.a.div(&self.d)?;
            let beta = self.b.div(&self.d)?;
            return affine_disk(&alpha, &beta, disk);
        }
        // (a z + b)/(c z + d) = a/c - det/(c (c z + d))
        let w = affine_disk(&self.c, &self.d, disk)?;
        let u = invert_disk(&w)?;
        let alpha = self.det().neg().div(&self.c)?;
        let beta = self.a.div(&self.c)?;
        affine_disk(&alpha, &beta, &u)
    }

    /// Coefficients evaluated at a concrete parameter, principal branch.
    pub fn eval_at(&self, t: Complex64) -> Result<[Complex64; 4]> {
        Ok([
            self.a.eval(t)?,
            self.b.eval(t)?,
            self.c.eval(t)?,
            self.d.eval(t)?,
        ])
    }
}

fn affine_disk(alpha: &PuiseuxSeries, beta: &PuiseuxSeries, disk: &Disk) -> Result<Disk> {
    let Valuation::Finite(va) = alpha.valuation() else {
        return Err(Error::SingularMobius);
    };
    let q = disk.q() + va;
    let center = alpha.mul(disk.center()).add(beta);
    Ok(Disk::new(&center, q))
}

fn invert_disk(disk: &Disk) -> Result<Disk> {
    match disk.center().valuation() {
        Valuation::Finite(v) if v < disk.q() => {
            let q = disk.q() - Exponent::from_integer(2) * v;
            let center = PuiseuxSeries::one().div_to(disk.center(), q)?;
            Ok(Disk::new(&center, q))
        }
        _ => Ok(Disk::new(&PuiseuxSeries::zero(), -disk.q())),
    }
}

/// A Möbius map with complex coefficients.
pub fn apply_complex(m: &[Complex64; 4], z: Option<Complex64>) -> Option<Complex64> {
    let [a, b, c, d] = *m;
    match z {
        None => {
            if c.is_zero() {
                None
            } else {
                Some(a / c)
            }
        }
        Some(z) => {
            let den = c * z + d;
            if den.is_zero() {
                None
            } else {
                Some((a * z + b) / den)
            }
        }
    }
}
