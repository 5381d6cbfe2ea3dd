use std::fmt;

use num_complex::Complex64;

use super::{Exponent, PuiseuxSeries, Valuation};

/// Polynomial in `z` with series coefficients, stored in ascending powers
/// (`coeffs[k]` multiplies `z^k`).
#[derive(Clone, Debug, Default)]
pub struct SeriesPoly {
    coeffs: Vec<PuiseuxSeries>,
}

impl SeriesPoly {
    pub fn new(coeffs: Vec<PuiseuxSeries>) -> Self {
        SeriesPoly { coeffs }
    }

    /// `z`.
    pub fn identity() -> Self {
        SeriesPoly::new(vec![PuiseuxSeries::zero(), PuiseuxSeries::one()])
    }

    pub fn constant(c: PuiseuxSeries) -> Self {
        SeriesPoly::new(vec![c])
    }

    /// Polynomial with constant complex coefficients.
    pub fn from_complex(cs: &[Complex64]) -> Self {
        SeriesPoly::new(cs.iter().map(|c| PuiseuxSeries::constant(*c)).collect())
    }

    pub fn coeffs(&self) -> &[PuiseuxSeries] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> PuiseuxSeries {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    /// Index of the highest coefficient that is not zero; `None` for the
    /// zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !c.is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.degree().is_none()
    }

    pub fn eval(&self, x: &PuiseuxSeries) -> PuiseuxSeries {
        let mut acc = PuiseuxSeries::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(c);
        }
        acc
    }

    pub fn derivative(&self) -> SeriesPoly {
        SeriesPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.scale(Complex64::new(k as f64, 0.0)))
                .collect(),
        )
    }

    pub fn add(&self, other: &SeriesPoly) -> SeriesPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        SeriesPoly::new((0..n).map(|k| self.coeff(k).add(&other.coeff(k))).collect())
    }

    pub fn sub(&self, other: &SeriesPoly) -> SeriesPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        SeriesPoly::new((0..n).map(|k| self.coeff(k).sub(&other.coeff(k))).collect())
    }

    pub fn scale(&self, c: &PuiseuxSeries) -> SeriesPoly {
        SeriesPoly::new(self.coeffs.iter().map(|x| x.mul(c)).collect())
    }

    pub fn mul(&self, other: &SeriesPoly) -> SeriesPoly {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return SeriesPoly::default();
        }
        let mut out = vec![PuiseuxSeries::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() && a.is_exact() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        SeriesPoly::new(out)
    }

    /// Coefficients of `w ↦ P(x + w)`.
    pub fn taylor_shift(&self, x: &PuiseuxSeries) -> SeriesPoly {
        // repeated synthetic division by (z - x)
        let mut c = self.coeffs.clone();
        let n = c.len();
        for i in 0..n {
            for j in (i..n.saturating_sub(1)).rev() {
                let carry = c[j + 1].mul(x);
                c[j] = c[j].add(&carry);
            }
        }
        SeriesPoly::new(c)
    }

    /// Valuations of the coefficients, `Infinite` for zero entries.
    pub fn valuations(&self) -> Vec<Valuation> {
        self.coeffs.iter().map(|c| c.valuation()).collect()
    }

    /// Constant terms of every coefficient: the reduction modulo `t`.
    pub fn reduction(&self) -> Vec<Complex64> {
        self.coeffs.iter().map(|c| c.constant_term()).collect()
    }

    /// Smallest valuation over the coefficients.
    pub fn min_valuation(&self) -> Valuation {
        self.valuations()
            .into_iter()
            .min()
            .unwrap_or(Valuation::Infinite)
    }

    /// Multiplies every coefficient by `t^e`.
    pub fn shift(&self, e: Exponent) -> SeriesPoly {
        SeriesPoly::new(self.coeffs.iter().map(|c| c.shift(e)).collect())
    }

    pub fn trimmed(&self) -> SeriesPoly {
        let n = self.degree().map(|d| d + 1).unwrap_or(0);
        SeriesPoly::new(self.coeffs[..n].to_vec())
    }
}

impl fmt::Display for SeriesPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})z")?,
                _ => write!(f, "({c})z^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::puiseux::Exponent;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn shift_of_square_by_one() {
        let p = SeriesPoly::from_complex(&[c(0.0), c(0.0), c(1.0)]);
        let s = p.taylor_shift(&PuiseuxSeries::one());
        let want = [1.0, 2.0, 1.0];
        for (k, w) in want.iter().enumerate() {
            assert!(s.coeff(k).approx_eq(&PuiseuxSeries::real(*w)));
        }
    }

    #[test]
    fn shift_by_zero_is_identity() {
        let p = SeriesPoly::new(vec![
            PuiseuxSeries::t(),
            PuiseuxSeries::real(3.0),
            PuiseuxSeries::monomial(c(1.0), Exponent::new(-1, 2)),
        ]);
        let s = p.taylor_shift(&PuiseuxSeries::zero());
        for k in 0..3 {
            assert!(s.coeff(k).approx_eq(&p.coeff(k)));
        }
    }

    #[test]
    fn shift_constant_term_is_value() {
        let p = SeriesPoly::new(vec![
            PuiseuxSeries::real(1.0),
            PuiseuxSeries::t(),
            PuiseuxSeries::real(2.0),
        ]);
        let x = PuiseuxSeries::from_terms([(Exponent::new(0, 1), c(1.0)), (Exponent::new(1, 1), c(5.0))], None);
        assert!(p.taylor_shift(&x).coeff(0).approx_eq(&p.eval(&x)));
    }
}
