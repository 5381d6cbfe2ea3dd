#![allow(dead_code)]

use nadegen::berkovich::{BerkPoint, Disk, JoinTree};
use nadegen::sncmodel::{Divisor, SncModel};
use nadegen::puiseux::{Exponent, PuiseuxSeries, SeriesPoly};
use num_complex::Complex64;
use proptest::prelude::*;

pub fn q(n: i64, d: i64) -> Exponent {
    Exponent::new(n, d)
}

/// Gaussian integers with small entries keep float sums exact.
pub fn gauss_int(r: i32) -> impl Strategy<Value = Complex64> {
    (-r..=r, -r..=r).prop_map(|(a, b)| Complex64::new(a as f64, b as f64))
}

pub fn nonzero_gauss_int(r: i32) -> impl Strategy<Value = Complex64> {
    gauss_int(r).prop_filter("nonzero", |c| c.norm() > 0.0)
}

/// Series `Σ c_j t^{(s+j)/e}` with optional precision, exponents on the grid
/// `1/e` for `e ∈ {1, 2, 3}`.
pub fn series() -> impl Strategy<Value = PuiseuxSeries> {
    (
        prop_oneof![Just(1i64), Just(2), Just(3)],
        -4i64..4,
        prop::collection::vec(gauss_int(3), 0..6),
        prop::option::of(6i64..12),
    )
        .prop_map(|(e, s, cs, prec)| {
            let terms = cs
                .into_iter()
                .enumerate()
                .map(move |(j, c)| (q(s + j as i64, e), c));
            PuiseuxSeries::from_terms(terms, prec.map(|p| q(s + p, e)))
        })
}

pub fn nonzero_series() -> impl Strategy<Value = PuiseuxSeries> {
    (series(), nonzero_gauss_int(3), prop_oneof![Just(1i64), Just(2)], -3i64..3).prop_map(
        |(s, c, e, v)| {
            // force a nonzero term below every other term and the precision
            let lead = match s.valuation().finite() {
                Some(w) => w.min(q(v, e)) - q(1, e),
                None => q(v, e),
            };
            let lead = match s.precision() {
                Some(p) => lead.min(p - q(1, e)),
                None => lead,
            };
            s.add(&PuiseuxSeries::monomial(c, lead))
        },
    )
}

/// Centers with nonnegative valuation (points of the closed unit disk) built
/// from few terms so disks nest often.
pub fn unit_center() -> impl Strategy<Value = PuiseuxSeries> {
    prop::collection::vec((0i64..4, gauss_int(1)), 0..4).prop_map(|ts| {
        PuiseuxSeries::from_terms(ts.into_iter().map(|(n, c)| (q(n, 1), c)), None)
    })
}

pub fn disk() -> impl Strategy<Value = Disk> {
    (unit_center(), 0i64..5, prop_oneof![Just(1i64), Just(2)])
        .prop_map(|(c, n, e)| Disk::new(&c, q(n, e)))
}

/// Finite type-1 and type-2 points.
pub fn finite_point() -> impl Strategy<Value = BerkPoint> {
    prop_oneof![
        unit_center().prop_map(BerkPoint::Classical),
        disk().prop_map(BerkPoint::Disk),
    ]
}

pub fn distinct(ds: Vec<Disk>) -> Vec<Disk> {
    let mut out: Vec<Disk> = Vec::new();
    for d in ds {
        if !out.contains(&d) {
            out.push(d);
        }
    }
    out
}

pub fn divisors(ds: &[Disk]) -> Vec<Divisor> {
    ds.iter()
        .enumerate()
        .map(|(i, d)| Divisor::new(format!("E{i}"), d.clone(), *d.q().denom() as u32))
        .collect()
}

/// The join closure of a few random disks: always snc.
pub fn valid_model() -> impl Strategy<Value = SncModel> {
    prop::collection::vec(disk(), 2..5).prop_filter_map("degenerate", |ds| {
        let ds = distinct(ds);
        if ds.len() < 2 {
            return None;
        }
        let pts: Vec<BerkPoint> = ds.into_iter().map(BerkPoint::Disk).collect();
        let tree = JoinTree::build(&pts).ok()?;
        let closure: Vec<Disk> = tree.vertices().iter().filter_map(|v| v.as_disk().cloned()).collect();
        SncModel::new(divisors(&closure)).ok()
    })
}

pub fn any_point() -> impl Strategy<Value = BerkPoint> {
    prop_oneof![9 => finite_point(), 1 => Just(BerkPoint::Infinity)]
}

pub fn coefficient() -> impl Strategy<Value = PuiseuxSeries> {
    prop::collection::vec((0i64..3, gauss_int(2)), 0..3).prop_map(|ts| {
        PuiseuxSeries::from_terms(ts.into_iter().map(|(n, c)| (q(n, 1), c)), None)
    })
}

/// Polynomials of degree 1 to 4 with a nonzero leading coefficient.
pub fn polynomial() -> impl Strategy<Value = SeriesPoly> {
    (1usize..=4)
        .prop_flat_map(|d| {
            (
                prop::collection::vec(coefficient(), d),
                nonzero_gauss_int(2),
                0i64..3,
            )
        })
        .prop_map(|(mut cs, lead, v)| {
            cs.push(PuiseuxSeries::monomial(lead, q(v, 1)));
            SeriesPoly::new(cs)
        })
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}
