//! Truncated Puiseux series over the complex numbers.
//!
//! A [`PuiseuxSeries`] stores coefficients of `t^(k/e)` densely on the grid
//! `1/e`, together with a precision `p` (the series is known modulo
//! `O(t^p)`), or no precision at all for series that are known exactly, such
//! as the polynomial coefficients of a map typed in by hand.
//!
//! Exponents, valuations and precisions are exact rationals; coefficients are
//! `f64` complex numbers. Coefficients whose modulus drops below
//! [`ZERO_THRESHOLD`] are pruned after every operation so that floating point
//! cancellation can never produce a spurious leading term.

mod poly;

pub use poly::SeriesPoly;

use std::cmp::Ordering;
use std::fmt;

use num_complex::Complex64;
use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exponent of `t`, an exact rational.
pub type Exponent = Rational64;

/// Coefficients below this modulus are treated as zero.
pub const ZERO_THRESHOLD: f64 = 1e-12;

/// Relative size below which the difference of two series is rounding noise.
pub const MATCH_TOLERANCE: f64 = 1e-9;

/// Terms carried beyond the valuation, in units of `1/e`, when an exact
/// input produces an infinite expansion.
pub const DEFAULT_REL_PRECISION: i64 = 24;

/// Largest ramification index any operation may introduce.
pub const DEFAULT_MAX_RAMIFICATION: i64 = 64;

/// Knobs shared by the operations that have to invent a truncation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SeriesConfig {
    /// Relative precision, in units of `1/e`, given to infinite expansions of
    /// exact inputs.
    pub rel_precision: i64,
    pub max_ramification: i64,
}

impl Default for SeriesConfig {
    fn default() -> Self {
        SeriesConfig {
            rel_precision: DEFAULT_REL_PRECISION,
            max_ramification: DEFAULT_MAX_RAMIFICATION,
        }
    }
}

/// The t-adic valuation: an exact rational, or `+∞` for the zero series.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(Exponent),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<Exponent> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }

    /// `exp(-v)`, with `exp(-∞) = 0`.
    pub fn norm(self) -> f64 {
        match self {
            Valuation::Finite(v) => (-rat_to_f64(v)).exp(),
            Valuation::Infinite => 0.0,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => write!(f, "inf"),
        }
    }
}

pub(crate) fn rat_to_f64(r: Rational64) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

fn lcm(a: i64, b: i64) -> i64 {
    a.lcm(&b)
}

/// A truncated Puiseux series `Σ c_k t^(k/e) + O(t^p)`.
///
/// Invariants, restored by every constructor:
/// * the first stored coefficient is nonzero (or there are none);
/// * every stored exponent is below the precision;
/// * no stored coefficient has modulus below [`ZERO_THRESHOLD`];
/// * `e` is the smallest grid that carries every term and the precision.
#[derive(Clone, Debug)]
pub struct PuiseuxSeries {
    ram: i64,
    start: i64,
    coeffs: Vec<Complex64>,
    prec: Option<i64>,
}

impl PuiseuxSeries {
    pub fn zero() -> Self {
        PuiseuxSeries {
            ram: 1,
            start: 0,
            coeffs: Vec::new(),
            prec: None,
        }
    }

    /// The zero series known only modulo `O(t^p)`.
    pub fn big_o(p: Exponent) -> Self {
        let ram = *p.denom();
        PuiseuxSeries {
            ram,
            start: 0,
            coeffs: Vec::new(),
            prec: Some(*p.numer()),
        }
        .normalized()
    }

    pub fn one() -> Self {
        Self::constant(Complex64::new(1.0, 0.0))
    }

    pub fn constant(c: Complex64) -> Self {
        Self::monomial(c, Exponent::zero())
    }

    pub fn real(c: f64) -> Self {
        Self::constant(Complex64::new(c, 0.0))
    }

    /// The uniformizer `t`.
    pub fn t() -> Self {
        Self::monomial(Complex64::new(1.0, 0.0), Exponent::one())
    }

    /// `c · t^exp`, exact.
    pub fn monomial(c: Complex64, exp: Exponent) -> Self {
        PuiseuxSeries {
            ram: *exp.denom(),
            start: *exp.numer(),
            coeffs: vec![c],
            prec: None,
        }
        .normalized()
    }

    /// Builds a series from `(exponent, coefficient)` pairs. Repeated
    /// exponents are summed; terms at or above `prec` are dropped.
    pub fn from_terms<I>(terms: I, prec: Option<Exponent>) -> Self
    where
        I: IntoIterator<Item = (Exponent, Complex64)>,
    {
        let terms: Vec<(Exponent, Complex64)> = terms.into_iter().collect();
        let mut ram = prec.map(|p| *p.denom()).unwrap_or(1);
        for (e, _) in &terms {
            ram = lcm(ram, *e.denom());
        }
        let nums: Vec<(i64, Complex64)> = terms
            .iter()
            .map(|(e, c)| (*e.numer() * (ram / *e.denom()), *c))
            .collect();
        let prec = prec.map(|p| *p.numer() * (ram / *p.denom()));
        let Some(lo) = nums.iter().map(|(n, _)| *n).min() else {
            return PuiseuxSeries {
                ram,
                start: 0,
                coeffs: Vec::new(),
                prec,
            }
            .normalized();
        };
        let hi = nums.iter().map(|(n, _)| *n).max().unwrap();
        let mut coeffs = vec![Complex64::zero(); (hi - lo + 1) as usize];
        for (n, c) in nums {
            coeffs[(n - lo) as usize] += c;
        }
        PuiseuxSeries {
            ram,
            start: lo,
            coeffs,
            prec,
        }
        .normalized()
    }

    fn normalized(mut self) -> Self {
        for c in self.coeffs.iter_mut() {
            if c.norm() < ZERO_THRESHOLD || !c.is_finite() {
                *c = Complex64::zero();
            }
        }
        if let Some(p) = self.prec {
            let keep = (p - self.start).clamp(0, self.coeffs.len() as i64) as usize;
            self.coeffs.truncate(keep);
        }
        while matches!(self.coeffs.last(), Some(c) if c.is_zero()) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().position(|c| !c.is_zero());
        match lead {
            None => {
                self.coeffs.clear();
                self.start = 0;
            }
            Some(k) if k > 0 => {
                self.coeffs.drain(..k);
                self.start += k as i64;
            }
            _ => {}
        }
        // shrink the grid to the coarsest one that still carries every term
        let mut g = self.ram;
        if let Some(p) = self.prec {
            g = g.gcd(&p);
        }
        for (i, c) in self.coeffs.iter().enumerate() {
            if g == 1 {
                break;
            }
            if !c.is_zero() {
                g = g.gcd(&(self.start + i as i64));
            }
        }
        if g > 1 {
            let coeffs = self
                .coeffs
                .iter()
                .step_by(g as usize)
                .copied()
                .collect::<Vec<_>>();
            self.coeffs = coeffs;
            self.start /= g;
            self.ram /= g;
            self.prec = self.prec.map(|p| p / g);
        }
        if self.coeffs.is_empty() {
            self.start = 0;
        }
        self
    }

    /// Ramification index `e`: every exponent lies in `(1/e)ℤ`.
    pub fn ramification(&self) -> i64 {
        self.ram
    }

    /// Precision `p`, or `None` if the series is exact.
    pub fn precision(&self) -> Option<Exponent> {
        self.prec.map(|p| Exponent::new(p, self.ram))
    }

    pub fn is_exact(&self) -> bool {
        self.prec.is_none()
    }

    /// True when no term is known below the precision. A series known only
    /// modulo `O(t^p)` is treated as zero.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn valuation(&self) -> Valuation {
        if self.coeffs.is_empty() {
            Valuation::Infinite
        } else {
            Valuation::Finite(Exponent::new(self.start, self.ram))
        }
    }

    /// The t-adic norm `exp(-valuation)`.
    pub fn tnorm(&self) -> f64 {
        self.valuation().norm()
    }

    /// Leading coefficient, zero for the zero series.
    pub fn leading_coefficient(&self) -> Complex64 {
        self.coeffs.first().copied().unwrap_or_else(Complex64::zero)
    }

    /// Coefficient of `t^exp`.
    pub fn coefficient(&self, exp: Exponent) -> Complex64 {
        if self.ram % exp.denom() != 0 {
            return Complex64::zero();
        }
        let n = *exp.numer() * (self.ram / exp.denom()) - self.start;
        if n < 0 {
            return Complex64::zero();
        }
        self.coeffs
            .get(n as usize)
            .copied()
            .unwrap_or_else(Complex64::zero)
    }

    pub fn constant_term(&self) -> Complex64 {
        self.coefficient(Exponent::zero())
    }

    /// Nonzero terms in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (Exponent, Complex64)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (Exponent::new(self.start + i as i64, self.ram), *c))
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    /// Lowers the precision to `min(p, current)`.
    pub fn truncate(&self, p: Exponent) -> Self {
        let new = match self.precision() {
            Some(cur) if cur <= p => return self.clone(),
            _ => p,
        };
        let ram = lcm(self.ram, *new.denom());
        let m = ram / self.ram;
        let mut out = self.spread(m);
        out.prec = Some(*new.numer() * (ram / new.denom()));
        out.normalized()
    }

    /// Drops every term with exponent `>= p` and marks the result exact.
    /// This is how disk centers are canonicalized.
    pub fn drop_from(&self, p: Exponent) -> Self {
        PuiseuxSeries::from_terms(self.terms().filter(|(e, _)| *e < p), None)
    }

    /// Forgets the precision, treating the known terms as exact.
    pub fn as_exact(&self) -> Self {
        let mut out = self.clone();
        out.prec = None;
        out.normalized()
    }

    /// Re-expresses the series on the finer grid `e·m`.
    fn spread(&self, m: i64) -> Self {
        if m == 1 {
            return self.clone();
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len() * m as usize);
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                coeffs.extend(std::iter::repeat_n(Complex64::zero(), m as usize - 1));
            }
            coeffs.push(*c);
        }
        PuiseuxSeries {
            ram: self.ram * m,
            start: self.start * m,
            coeffs,
            prec: self.prec.map(|p| p * m),
        }
    }

    fn on_grid(&self, ram: i64) -> Self {
        self.spread(ram / self.ram)
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in out.coeffs.iter_mut() {
            *c = -*c;
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let ram = lcm(self.ram, other.ram);
        let a = self.on_grid(ram);
        let b = other.on_grid(ram);
        let prec = match (a.prec, b.prec) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, None) => x,
            (None, y) => y,
        };
        if a.coeffs.is_empty() && b.coeffs.is_empty() {
            return PuiseuxSeries {
                ram,
                start: 0,
                coeffs: Vec::new(),
                prec,
            }
            .normalized();
        }
        let lo = match (a.coeffs.is_empty(), b.coeffs.is_empty()) {
            (true, _) => b.start,
            (_, true) => a.start,
            _ => a.start.min(b.start),
        };
        let hi = a
            .end()
            .into_iter()
            .chain(b.end())
            .max()
            .expect("nonempty operand");
        let mut coeffs = vec![Complex64::zero(); (hi - lo) as usize];
        for s in [&a, &b] {
            for (i, c) in s.coeffs.iter().enumerate() {
                coeffs[(s.start - lo) as usize + i] += *c;
            }
        }
        PuiseuxSeries {
            ram,
            start: lo,
            coeffs,
            prec,
        }
        .normalized()
    }

    fn end(&self) -> Option<i64> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.start + self.coeffs.len() as i64)
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let mut out = self.clone();
        for x in out.coeffs.iter_mut() {
            *x *= c;
        }
        if c.is_zero() {
            // 0 · (a + O(t^p)) is exactly zero
            out.prec = None;
        }
        out.normalized()
    }

    /// Multiplication by `t^exp`.
    pub fn shift(&self, exp: Exponent) -> Self {
        let ram = lcm(self.ram, *exp.denom());
        let mut out = self.on_grid(ram);
        let k = *exp.numer() * (ram / exp.denom());
        out.start += k;
        out.prec = out.prec.map(|p| p + k);
        out.normalized()
    }

    /// Product, truncated at `min(p_a + val(b), p_b + val(a))`.
    pub fn mul(&self, other: &Self) -> Self {
        let ram = lcm(self.ram, other.ram);
        let (ma, mb) = (ram / self.ram, ram / other.ram);
        let va = self.start * ma;
        let vb = other.start * mb;
        let exact_zero = |s: &Self| s.is_zero() && s.prec.is_none();
        if exact_zero(self) || exact_zero(other) {
            return PuiseuxSeries::zero();
        }
        // lower bounds for the valuations; a zero series is only known to
        // vanish up to its precision
        let low_a = if self.is_zero() { self.prec.unwrap() * ma } else { va };
        let low_b = if other.is_zero() { other.prec.unwrap() * mb } else { vb };
        let prec = match (self.prec, other.prec) {
            (None, None) => None,
            (Some(pa), None) => Some(pa * ma + low_b),
            (None, Some(pb)) => Some(pb * mb + low_a),
            (Some(pa), Some(pb)) => Some((pa * ma + low_b).min(pb * mb + low_a)),
        };
        if self.is_zero() || other.is_zero() {
            return PuiseuxSeries {
                ram,
                start: 0,
                coeffs: Vec::new(),
                prec,
            }
            .normalized();
        }
        let lo = va + vb;
        let mut hi = (self.coeffs.len() as i64 - 1) * ma + (other.coeffs.len() as i64 - 1) * mb + lo;
        if let Some(p) = prec {
            hi = hi.min(p - 1);
        }
        if hi < lo {
            return PuiseuxSeries {
                ram,
                start: 0,
                coeffs: Vec::new(),
                prec,
            }
            .normalized();
        }
        let len = (hi - lo + 1) as usize;
        let mut coeffs = vec![Complex64::zero(); len];
        for (i, x) in self.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let off = i as i64 * ma;
            if off as usize >= len {
                break;
            }
            for (j, y) in other.coeffs.iter().enumerate() {
                let k = (off + j as i64 * mb) as usize;
                if k >= len {
                    break;
                }
                coeffs[k] += x * y;
            }
        }
        PuiseuxSeries {
            ram,
            start: lo,
            coeffs,
            prec,
        }
        .normalized()
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = PuiseuxSeries::one();
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Multiplicative inverse with the default relative precision.
    pub fn inv(&self) -> Result<Self> {
        self.inv_rel(DEFAULT_REL_PRECISION)
    }

    /// Multiplicative inverse. Finite-precision inputs keep their relative
    /// precision; exact non-monomial inputs are expanded to `rel` terms.
    pub fn inv_rel(&self, rel: i64) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let rel_units = match self.prec {
            Some(p) => p - self.start,
            None if self.num_terms() == 1 => {
                let c = self.coeffs[0];
                return Ok(PuiseuxSeries {
                    ram: self.ram,
                    start: -self.start,
                    coeffs: vec![c.inv()],
                    prec: None,
                }
                .normalized());
            }
            None => rel,
        };
        let coeffs = inv_trunc(&self.coeffs, rel_units as usize);
        Ok(PuiseuxSeries {
            ram: self.ram,
            start: -self.start,
            coeffs,
            prec: Some(rel_units - self.start),
        }
        .normalized())
    }

    /// Quotient whose terms are correct up to the absolute exponent `abs`.
    pub fn div_to(&self, den: &Self, abs: Exponent) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(self.truncate(abs));
        }
        let vq = self.valuation().finite().unwrap() - den.valuation().finite().unwrap();
        let rel = ((abs - vq) * Exponent::from_integer(den.ram))
            .ceil()
            .to_integer()
            .max(1);
        let inv = den.inv_rel(rel)?;
        Ok(self.mul(&inv).truncate(abs))
    }

    /// Quotient with the default relative precision for exact operands.
    pub fn div(&self, den: &Self) -> Result<Self> {
        Ok(self.mul(&den.inv()?))
    }

    /// All `k` branches of the `k`-th root.
    pub fn root(&self, k: u32) -> Result<Vec<Self>> {
        self.root_with(k, &SeriesConfig::default())
    }

    /// All `k` branches of the `k`-th root: the leading term is extracted
    /// from the Newton polygon (a single point here) and the unit part is
    /// refined by Newton iteration.
    pub fn root_with(&self, k: u32, cfg: &SeriesConfig) -> Result<Vec<Self>> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        assert!(k >= 1, "root order must be positive");
        let v = Exponent::new(self.start, self.ram);
        let lead_exp = v / Exponent::from_integer(k as i64);
        let ram = lcm(self.ram, *lead_exp.denom());
        if ram > cfg.max_ramification {
            return Err(Error::RamificationCap {
                needed: ram as u64,
                cap: cfg.max_ramification as u64,
            });
        }
        let rel_units = match self.prec {
            Some(p) => (p - self.start) as usize,
            None if self.num_terms() == 1 => 1,
            None => cfg.rel_precision as usize,
        };
        let c0 = self.coeffs[0];
        let unit: Vec<Complex64> = self.coeffs.iter().map(|c| c / c0).collect();
        let unit_root = unit_root_newton(&unit, k, rel_units)?;
        let base = Complex64::from_polar(c0.norm().powf(1.0 / k as f64), c0.arg() / k as f64);
        let prec = match self.prec {
            None if self.num_terms() == 1 => None,
            _ => Some(lead_exp + Exponent::new(rel_units as i64, self.ram)),
        };
        let mut out = Vec::with_capacity(k as usize);
        for j in 0..k {
            let w = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * j as f64 / k as f64);
            let lead = base * w;
            let terms = unit_root
                .iter()
                .enumerate()
                .map(|(i, c)| (lead_exp + Exponent::new(i as i64, self.ram), c * lead));
            out.push(PuiseuxSeries::from_terms(terms, prec));
        }
        Ok(out)
    }

    /// Evaluates the series at a concrete complex `t`, using the principal
    /// branch of `t^(1/e)`.
    pub fn eval(&self, t: Complex64) -> Result<Complex64> {
        if self.is_zero() {
            return Ok(Complex64::zero());
        }
        if t.is_zero() {
            if self.start < 0 {
                return Err(Error::CoefficientPole(format!("{t}")));
            }
            return Ok(self.constant_term());
        }
        let root = (t.ln() / self.ram as f64).exp();
        let mut acc = Complex64::zero();
        let mut pw = root.powi(self.start as i32);
        for c in &self.coeffs {
            acc += c * pw;
            pw *= root;
        }
        Ok(acc)
    }

    /// `self - other` with the terms that are rounding noise relative to the
    /// operands' terms of the same order removed; used wherever a difference
    /// decides tree structure.
    pub fn difference(&self, other: &Self) -> Self {
        let mut d = self.sub(other);
        let (ram, start) = (d.ram, d.start);
        for (k, c) in d.coeffs.iter_mut().enumerate() {
            let e = Exponent::new(start + k as i64, ram);
            let scale = self.coefficient(e).norm().max(other.coefficient(e).norm()).max(1.0);
            if c.norm() < MATCH_TOLERANCE * scale {
                *c = Complex64::zero();
            }
        }
        d.normalized()
    }

    /// Equality up to the common precision and [`MATCH_TOLERANCE`].
    pub fn approx_eq(&self, other: &Self) -> bool {
        self.difference(other).is_zero()
    }
}

impl Default for PuiseuxSeries {
    fn default() -> Self {
        PuiseuxSeries::zero()
    }
}

/// Inverse of a dense series with nonzero constant term, `n` terms.
fn inv_trunc(a: &[Complex64], n: usize) -> Vec<Complex64> {
    let inv0 = a[0].inv();
    let mut r = vec![Complex64::zero(); n];
    if n == 0 {
        return r;
    }
    r[0] = inv0;
    for i in 1..n {
        let mut s = Complex64::zero();
        for j in 1..=i.min(a.len() - 1) {
            s += a[j] * r[i - j];
        }
        r[i] = -s * inv0;
    }
    r
}

fn mul_trunc(a: &[Complex64], b: &[Complex64], n: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::zero(); n];
    for (i, x) in a.iter().enumerate().take(n) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(n - i) {
            out[i + j] += x * y;
        }
    }
    out
}

/// Newton iteration `R ← ((k-1)R + U·R^(1-k)) / k` for the root of a unit
/// series `U = 1 + …` with `R(0) = 1`, to `n` terms.
fn unit_root_newton(unit: &[Complex64], k: u32, n: usize) -> Result<Vec<Complex64>> {
    let mut u = unit.to_vec();
    u.resize(n.max(1), Complex64::zero());
    let mut r = vec![Complex64::zero(); n.max(1)];
    r[0] = Complex64::new(1.0, 0.0);
    if k == 1 {
        return Ok(u[..n.max(1)].to_vec());
    }
    let kf = k as f64;
    // correct terms double per step
    let steps = (usize::BITS - n.max(1).leading_zeros()) as usize + 2;
    for _ in 0..steps {
        let mut rk1 = vec![Complex64::zero(); n];
        rk1[0] = Complex64::new(1.0, 0.0);
        for _ in 0..k - 1 {
            rk1 = mul_trunc(&rk1, &r, n);
        }
        let q = mul_trunc(&u, &inv_trunc(&rk1, n), n);
        let next: Vec<Complex64> = r
            .iter()
            .zip(&q)
            .map(|(ri, qi)| (ri * (kf - 1.0) + qi) / kf)
            .collect();
        let moved = next
            .iter()
            .zip(&r)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        r = next;
        let scale = r.iter().map(|c| c.norm()).fold(1.0, f64::max);
        if moved < ZERO_THRESHOLD * scale {
            return Ok(r);
        }
    }
    let mut check = vec![Complex64::zero(); n];
    check[0] = Complex64::new(1.0, 0.0);
    for _ in 0..k {
        check = mul_trunc(&check, &r, n);
    }
    let resid = check
        .iter()
        .zip(&u)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    let scale = u.iter().map(|c| c.norm()).fold(1.0, f64::max);
    if resid < 1e-9 * scale {
        Ok(r)
    } else {
        Err(Error::NonConvergent { steps })
    }
}

fn fmt_complex(c: Complex64) -> String {
    let clean = |x: f64| if x.abs() < 1e-12 { 0.0 } else { x };
    let (re, im) = (clean(c.re), clean(c.im));
    match (re == 0.0, im == 0.0) {
        (_, true) => format!("{re}"),
        (true, false) if im == 1.0 => "i".to_string(),
        (true, false) if im == -1.0 => "-i".to_string(),
        (true, false) => format!("{im}i"),
        _ => {
            let sign = if im < 0.0 { '-' } else { '+' };
            format!("({re}{sign}{}i)", im.abs())
        }
    }
}

impl fmt::Display for PuiseuxSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let coeff = fmt_complex(c);
            if e.is_zero() {
                write!(f, "{coeff}")?;
            } else {
                let coeff = match coeff.as_str() {
                    "1" => String::new(),
                    "-1" => "-".to_string(),
                    _ => coeff,
                };
                if e.is_one() {
                    write!(f, "{coeff}t")?;
                } else if e.is_integer() && e.is_positive() {
                    write!(f, "{coeff}t^{e}")?;
                } else {
                    write!(f, "{coeff}t^({e})")?;
                }
            }
        }
        match self.precision() {
            Some(p) => {
                if !first {
                    write!(f, " + ")?;
                }
                write!(f, "O(t^{p})")
            }
            None if first => write!(f, "0"),
            None => Ok(()),
        }
    }
}

/// Orders two valuations written as exact rationals with `None` for `+∞`.
pub(crate) fn cmp_opt(a: Option<Exponent>, b: Option<Exponent>) -> Ordering {
    match (a, b) {
        (Some(x), Some(y)) => x.cmp(&y),
        (Some(_), None) => Ordering::Less,
        (None, Some(_)) => Ordering::Greater,
        (None, None) => Ordering::Equal,
    }
}
