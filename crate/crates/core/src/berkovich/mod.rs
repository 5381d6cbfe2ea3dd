//! Points of the Berkovich projective line over the Puiseux field and the
//! tree combinatorics between them.
//!
//! Only classical points (type 1, including `∞`) and disk points of rational
//! radius (type 2) are representable. A disk point `ζ(c, q)` is the closed
//! disk of radius `exp(-q)` around `c`; its center is kept in canonical form,
//! with every term of exponent `>= q` dropped, so two descriptions of the same
//! disk compare equal.
//!
//! Containment of disks orders the tree; classical points sit at the bottom
//! and `∞` is a formal top element. Joins, arcs and tangent directions are
//! all computed from that order.

mod mobius;
mod tree;

pub use mobius::{apply_complex, Mobius};
pub use tree::JoinTree;

use std::fmt;

use num_complex::Complex64;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::puiseux::{cmp_opt, Exponent, PuiseuxSeries, SeriesPoly, Valuation};

/// Tolerance for comparing complex tangent labels.
pub const LABEL_TOLERANCE: f64 = 1e-9;

/// A point of `ℙ¹(ℂ)`, used for tangent labels and reduction coordinates.
#[derive(Clone, Copy, Debug)]
pub enum P1Label {
    Finite(Complex64),
    Infinity,
}

impl P1Label {
    pub fn approx_eq(&self, other: &P1Label) -> bool {
        match (self, other) {
            (P1Label::Finite(a), P1Label::Finite(b)) => (a - b).norm() <= LABEL_TOLERANCE,
            (P1Label::Infinity, P1Label::Infinity) => true,
            _ => false,
        }
    }

    pub fn finite(&self) -> Option<Complex64> {
        match self {
            P1Label::Finite(c) => Some(*c),
            P1Label::Infinity => None,
        }
    }

    /// Total order used to sort labels deterministically.
    pub fn sort_key(&self) -> (u8, f64, f64) {
        match self {
            P1Label::Finite(c) => (0, round_key(c.re), round_key(c.im)),
            P1Label::Infinity => (1, 0.0, 0.0),
        }
    }
}

fn round_key(x: f64) -> f64 {
    // snap to the comparison tolerance so nearly equal labels sort together
    (x / LABEL_TOLERANCE).round() * LABEL_TOLERANCE
}

impl PartialEq for P1Label {
    fn eq(&self, other: &Self) -> bool {
        self.approx_eq(other)
    }
}

impl fmt::Display for P1Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            P1Label::Finite(c) => {
                let clean = |x: f64| if x.abs() < 1e-10 { 0.0 } else { x };
                let (re, im) = (clean(c.re), clean(c.im));
                if im == 0.0 {
                    write!(f, "{re:.6}")
                } else if re == 0.0 {
                    write!(f, "{im:.6}i")
                } else {
                    write!(f, "{re:.6}{:+.6}i", im)
                }
            }
            P1Label::Infinity => write!(f, "inf"),
        }
    }
}

/// A type-2 point: the closed disk `{ z : |z - center| <= exp(-q) }`.
#[derive(Clone, Debug)]
pub struct Disk {
    center: PuiseuxSeries,
    q: Exponent,
}

impl Disk {
    /// Canonicalizes the center against the radius.
    pub fn new(center: &PuiseuxSeries, q: Exponent) -> Disk {
        Disk {
            center: center.drop_from(q),
            q,
        }
    }

    /// The Gauss point `ζ(0, 1)`.
    pub fn gauss() -> Disk {
        Disk::new(&PuiseuxSeries::zero(), Exponent::zero())
    }

    pub fn center(&self) -> &PuiseuxSeries {
        &self.center
    }

    /// Radius exponent: the radius is `exp(-q)`.
    pub fn q(&self) -> Exponent {
        self.q
    }

    pub fn radius(&self) -> f64 {
        Valuation::Finite(self.q).norm()
    }

    pub fn is_gauss(&self) -> bool {
        self.q.is_zero() && self.center.is_zero()
    }

    pub fn contains_series(&self, x: &PuiseuxSeries) -> bool {
        match x.difference(&self.center).valuation() {
            Valuation::Infinite => true,
            Valuation::Finite(v) => v >= self.q,
        }
    }

    pub fn contains_disk(&self, other: &Disk) -> bool {
        other.q >= self.q && self.contains_series(&other.center)
    }

    /// Whether `p` lies in the closed disk (as a point of the tree: `p ≼ self`).
    pub fn contains(&self, p: &BerkPoint) -> bool {
        match p {
            BerkPoint::Classical(x) => self.contains_series(x),
            BerkPoint::Disk(d) => self.contains_disk(d),
            BerkPoint::Infinity => false,
        }
    }
}

impl PartialEq for Disk {
    fn eq(&self, other: &Self) -> bool {
        self.q == other.q && self.center.approx_eq(&other.center)
    }
}

impl fmt::Display for Disk {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = self.center.as_exact();
        write!(f, "zeta({c}, q={})", self.q)
    }
}

/// A point of the Berkovich projective line that the toolkit can represent.
#[derive(Clone, Debug)]
pub enum BerkPoint {
    /// Type 1: a classical point of the affine line.
    Classical(PuiseuxSeries),
    /// The classical point at infinity.
    Infinity,
    /// Type 2: a disk point of rational radius.
    Disk(Disk),
}

impl BerkPoint {
    pub fn classical(x: PuiseuxSeries) -> Self {
        BerkPoint::Classical(x)
    }

    pub fn disk(center: &PuiseuxSeries, q: Exponent) -> Self {
        BerkPoint::Disk(Disk::new(center, q))
    }

    pub fn gauss() -> Self {
        BerkPoint::Disk(Disk::gauss())
    }

    pub fn as_disk(&self) -> Option<&Disk> {
        match self {
            BerkPoint::Disk(d) => Some(d),
            _ => None,
        }
    }

    pub fn is_type1(&self) -> bool {
        !matches!(self, BerkPoint::Disk(_))
    }

    /// `(center, q)` with `q = None` for classical points; `None` for `∞`.
    fn center_and_q(&self) -> Option<(&PuiseuxSeries, Option<Exponent>)> {
        match self {
            BerkPoint::Classical(x) => Some((x, None)),
            BerkPoint::Disk(d) => Some((&d.center, Some(d.q))),
            BerkPoint::Infinity => None,
        }
    }

    /// `self ≼ other`: `self` lies in the closed disk `other` (and everything
    /// lies below `∞`).
    pub fn leq(&self, other: &BerkPoint) -> bool {
        match (self, other) {
            (_, BerkPoint::Infinity) => true,
            (BerkPoint::Infinity, _) => false,
            (BerkPoint::Classical(x), BerkPoint::Classical(y)) => x.approx_eq(y),
            (BerkPoint::Disk(_), BerkPoint::Classical(_)) => false,
            (p, BerkPoint::Disk(d)) => d.contains(p),
        }
    }
}

impl PartialEq for BerkPoint {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (BerkPoint::Classical(x), BerkPoint::Classical(y)) => x.approx_eq(y),
            (BerkPoint::Infinity, BerkPoint::Infinity) => true,
            (BerkPoint::Disk(a), BerkPoint::Disk(b)) => a == b,
            _ => false,
        }
    }
}

impl fmt::Display for BerkPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BerkPoint::Classical(x) => write!(f, "{x}"),
            BerkPoint::Infinity => write!(f, "inf"),
            BerkPoint::Disk(d) => write!(f, "{d}"),
        }
    }
}

/// Smallest closed disk containing both points. Joining with `∞` returns
/// `∞`, the top of the order; use [`join_disk`] when a disk is required.
pub fn join(a: &BerkPoint, b: &BerkPoint) -> BerkPoint {
    let (Some((ca, qa)), Some((cb, qb))) = (a.center_and_q(), b.center_and_q()) else {
        return BerkPoint::Infinity;
    };
    let dist = ca.difference(cb).valuation().finite();
    let q = [dist, qa, qb]
        .into_iter()
        .min_by(|x, y| cmp_opt(*x, *y))
        .flatten();
    match q {
        // both classical and equal
        None => a.clone(),
        Some(q) => {
            // keep the center of whichever input is the larger disk
            if qa == Some(q) {
                BerkPoint::disk(ca, q)
            } else {
                BerkPoint::disk(cb, q)
            }
        }
    }
}

/// Like [`join`], but an error when the meeting point is `∞`.
pub fn join_disk(a: &BerkPoint, b: &BerkPoint) -> Result<BerkPoint> {
    match join(a, b) {
        BerkPoint::Infinity => Err(Error::JoinAtInfinity),
        p => Ok(p),
    }
}

/// Whether `m` lies on the closed arc `[a, b]`.
pub fn path_contains(a: &BerkPoint, b: &BerkPoint, m: &BerkPoint) -> bool {
    let j = join(a, b);
    (a.leq(m) && m.leq(&j)) || (b.leq(m) && m.leq(&j))
}

/// Whether `m` lies on the open arc `(a, b)`.
pub fn open_path_contains(a: &BerkPoint, b: &BerkPoint, m: &BerkPoint) -> bool {
    m != a && m != b && path_contains(a, b, m)
}

/// A connected component of the complement of a type-2 point, named by its
/// label in `ℙ¹(ℂ)`.
#[derive(Clone, Debug)]
pub struct TangentDirection {
    pub base: Disk,
    pub label: P1Label,
}

/// Tangent direction at `base` pointing towards `x`.
///
/// At `ζ(c, q)` the label of a point inside the disk is the coefficient of
/// `t^q` in `x - c`, i.e. the constant term of `(x - c)/t^q`; every point
/// outside the disk, and `∞`, has label `∞`.
pub fn tangent_direction(base: &Disk, x: &BerkPoint) -> Result<TangentDirection> {
    let label = match x {
        BerkPoint::Infinity => P1Label::Infinity,
        BerkPoint::Classical(y) => {
            if base.contains_series(y) {
                P1Label::Finite(y.sub(&base.center).coefficient(base.q))
            } else {
                P1Label::Infinity
            }
        }
        BerkPoint::Disk(d) => {
            if d == base {
                return Err(Error::TangentAtBase);
            }
            if base.contains_disk(d) {
                P1Label::Finite(d.center.sub(&base.center).coefficient(base.q))
            } else {
                P1Label::Infinity
            }
        }
    };
    Ok(TangentDirection {
        base: base.clone(),
        label,
    })
}

/// A point in the direction `label` at `base`, one unit of radius below it.
/// For `∞` this is the disk one unit larger.
pub fn point_in_direction(base: &Disk, label: &P1Label) -> BerkPoint {
    match label {
        P1Label::Finite(a) => {
            let c = base
                .center
                .add(&PuiseuxSeries::monomial(*a, base.q));
            BerkPoint::disk(&c, base.q + Exponent::from_integer(1))
        }
        P1Label::Infinity => BerkPoint::disk(&base.center, base.q - Exponent::from_integer(1)),
    }
}

/// `-log |F(ζ)|` for a disk point: `min_k (val(a_k) + k q)` over the
/// coefficients of `F` recentered at the disk center.
pub fn gauss_valuation(poly: &SeriesPoly, p: &Disk) -> Valuation {
    let shifted = poly.taylor_shift(&p.center);
    shifted
        .coeffs()
        .iter()
        .enumerate()
        .filter_map(|(k, a)| {
            a.valuation()
                .finite()
                .map(|v| v + p.q * Exponent::from_integer(k as i64))
        })
        .min()
        .map(Valuation::Finite)
        .unwrap_or(Valuation::Infinite)
}

/// The seminorm `|F(ζ(c, r))| = max_{|z - c| <= r} |F(z)|`.
pub fn gauss_norm(poly: &SeriesPoly, p: &Disk) -> f64 {
    gauss_valuation(poly, p).norm()
}

/// Label of the constant `c` at the Gauss point.
pub fn label_of(c: Complex64) -> P1Label {
    if c.is_finite() {
        P1Label::Finite(c)
    } else {
        P1Label::Infinity
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::puiseux::Exponent;

    fn q(n: i64) -> Exponent {
        Exponent::from_integer(n)
    }

    fn cst(re: f64, im: f64) -> PuiseuxSeries {
        PuiseuxSeries::constant(Complex64::new(re, im))
    }

    /// Fixed points `(t ± sqrt(t² - 4))/2` of `(z² + 1)/t`.
    fn fixed_points() -> (PuiseuxSeries, PuiseuxSeries) {
        let t = PuiseuxSeries::t();
        let disc = t.pow(2).sub(&PuiseuxSeries::real(4.0));
        let roots = disc.root(2).unwrap();
        let half = Complex64::new(0.5, 0.0);
        let mut a = t.add(&roots[0]).scale(half);
        let mut b = t.add(&roots[1]).scale(half);
        if a.constant_term().im < 0.0 {
            std::mem::swap(&mut a, &mut b);
        }
        (a, b)
    }

    #[test]
    fn gauss_norm_of_z_is_one() {
        assert_eq!(gauss_norm(&SeriesPoly::identity(), &Disk::gauss()), 1.0);
    }

    #[test]
    fn gauss_norm_of_constant_is_tnorm() {
        let c = PuiseuxSeries::t().pow(3);
        let d = Disk::new(&cst(5.0, 0.0), q(2));
        assert!((gauss_norm(&SeriesPoly::constant(c.clone()), &d) - c.tnorm()).abs() < 1e-15);
    }

    #[test]
    fn gauss_norm_at_b_plus() {
        let (xp, _) = fixed_points();
        let f = SeriesPoly::new(vec![PuiseuxSeries::one(), PuiseuxSeries::zero(), PuiseuxSeries::one()]);
        let b = Disk::new(&xp, q(1));
        assert_eq!(gauss_valuation(&f, &b), Valuation::Finite(q(1)));
    }

    #[test]
    fn join_of_zero_and_one() {
        let j = join(&BerkPoint::classical(PuiseuxSeries::zero()), &BerkPoint::classical(PuiseuxSeries::one()));
        assert_eq!(j, BerkPoint::gauss());
    }

    #[test]
    fn join_of_fixed_points_is_gauss() {
        let (xp, xm) = fixed_points();
        let j = join(&BerkPoint::classical(xp), &BerkPoint::classical(xm));
        assert_eq!(j, BerkPoint::gauss());
    }

    #[test]
    fn join_of_nested_disks() {
        let a = BerkPoint::disk(&PuiseuxSeries::zero(), q(2));
        let b = BerkPoint::disk(&PuiseuxSeries::zero(), q(5));
        assert_eq!(join(&a, &b), a);
        assert_eq!(join(&b, &a), a);
    }

    #[test]
    fn join_with_infinity() {
        let a = BerkPoint::disk(&PuiseuxSeries::zero(), q(2));
        assert_eq!(join(&a, &BerkPoint::Infinity), BerkPoint::Infinity);
        assert_eq!(join_disk(&a, &BerkPoint::Infinity).unwrap_err(), Error::JoinAtInfinity);
    }

    #[test]
    fn canonical_centers_compare_equal() {
        let a = Disk::new(&cst(3.0, 0.0), q(0));
        assert!(a.is_gauss());
        let c1 = PuiseuxSeries::one().add(&PuiseuxSeries::t().pow(3));
        let b = Disk::new(&c1, q(2));
        assert_eq!(b, Disk::new(&PuiseuxSeries::one(), q(2)));
    }

    #[test]
    fn paths() {
        let zero = BerkPoint::classical(PuiseuxSeries::zero());
        let one = BerkPoint::classical(PuiseuxSeries::one());
        assert!(path_contains(&zero, &one, &BerkPoint::gauss()));
        let (xp, xm) = fixed_points();
        assert!(path_contains(
            &BerkPoint::classical(xp),
            &BerkPoint::classical(xm),
            &BerkPoint::gauss()
        ));
        let t = BerkPoint::classical(PuiseuxSeries::t());
        assert!(!path_contains(&zero, &t, &BerkPoint::gauss()));
        assert!(path_contains(&zero, &t, &BerkPoint::disk(&PuiseuxSeries::zero(), q(1))));
        assert!(path_contains(&zero, &BerkPoint::Infinity, &BerkPoint::gauss()));
    }

    #[test]
    fn tangent_labels_at_gauss() {
        let (xp, _) = fixed_points();
        let g = Disk::gauss();
        let l = tangent_direction(&g, &BerkPoint::classical(xp)).unwrap().label;
        assert!(l.approx_eq(&P1Label::Finite(Complex64::new(0.0, 1.0))));
        let inv_t = PuiseuxSeries::t().inv().unwrap();
        let l = tangent_direction(&g, &BerkPoint::classical(inv_t)).unwrap().label;
        assert!(l.approx_eq(&P1Label::Infinity));
        let l = tangent_direction(&g, &BerkPoint::disk(&cst(3.0, 0.0), q(2))).unwrap().label;
        assert!(l.approx_eq(&P1Label::Finite(Complex64::new(3.0, 0.0))));
        assert_eq!(
            tangent_direction(&g, &BerkPoint::gauss()).unwrap_err(),
            Error::TangentAtBase
        );
    }

    #[test]
    fn bigger_disk_points_to_infinity() {
        let g = Disk::gauss();
        let big = BerkPoint::disk(&PuiseuxSeries::zero(), q(-1));
        assert!(tangent_direction(&g, &big).unwrap().label.approx_eq(&P1Label::Infinity));
    }
}
