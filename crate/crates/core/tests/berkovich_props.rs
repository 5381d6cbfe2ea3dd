mod common;

use common::*;
use nadegen::berkovich::{
    gauss_valuation, join, path_contains, tangent_direction, BerkPoint, Disk, Mobius,
};
use nadegen::puiseux::{PuiseuxSeries, SeriesPoly, Valuation};
use proptest::prelude::*;

fn small_poly() -> impl Strategy<Value = SeriesPoly> {
    prop::collection::vec(
        prop::collection::vec((0i64..3, gauss_int(2)), 0..3).prop_map(|ts| {
            PuiseuxSeries::from_terms(ts.into_iter().map(|(n, c)| (q(n, 1), c)), None)
        }),
        1..4,
    )
    .prop_map(SeriesPoly::new)
}

/// Entries are exact monomials so the determinant is exact.
fn mobius() -> impl Strategy<Value = Mobius> {
    let entry = || (gauss_int(2), -1i64..2).prop_map(|(c, n)| PuiseuxSeries::monomial(c, q(n, 1)));
    (entry(), entry(), entry(), entry())
        .prop_filter_map("singular", |(a, b, c, d)| Mobius::new(a, b, c, d).ok())
}

/// Classical points agree on their first few orders; rounding error in
/// quotients grows with the order of the term.
fn close(a: &BerkPoint, b: &BerkPoint) -> bool {
    match (a, b) {
        (BerkPoint::Classical(x), BerkPoint::Classical(y)) => {
            let Some(v) = x.valuation().finite().or(y.valuation().finite()) else {
                return true;
            };
            let cut = v + q(6, 1);
            x.truncate(cut).approx_eq(&y.truncate(cut))
        }
        _ => a == b,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2_000))]

    #[test]
    fn join_is_a_semilattice(a in finite_point(), b in finite_point(), c in finite_point()) {
        prop_assert_eq!(join(&a, &b), join(&b, &a));
        prop_assert_eq!(join(&a, &a), a.clone());
        prop_assert_eq!(join(&join(&a, &b), &c), join(&a, &join(&b, &c)));
        let j = join(&a, &b);
        prop_assert!(a.leq(&j) && b.leq(&j));
    }

    #[test]
    fn gauss_norm_is_multiplicative(f in small_poly(), g in small_poly(), p in disk()) {
        let vf = gauss_valuation(&f, &p);
        let vg = gauss_valuation(&g, &p);
        let vfg = gauss_valuation(&f.mul(&g), &p);
        match (vf, vg) {
            (Valuation::Finite(x), Valuation::Finite(y)) => prop_assert_eq!(vfg, Valuation::Finite(x + y)),
            _ => prop_assert_eq!(vfg, Valuation::Infinite),
        }
    }

    #[test]
    fn canonical_form_is_unique(c in unit_center(), n in 0i64..4, extra in prop::collection::vec((0i64..3, gauss_int(2)), 0..3)) {
        let r = q(n, 1);
        let shift = PuiseuxSeries::from_terms(extra.into_iter().map(|(k, u)| (r + q(k, 1), u)), None);
        let a = Disk::new(&c, r);
        let b = Disk::new(&c.add(&shift), r);
        prop_assert_eq!(&a, &b);
        prop_assert!(a.center().approx_eq(b.center()));
        prop_assert_eq!(a.center().num_terms(), b.center().num_terms());
    }

    #[test]
    fn tangent_directions_are_constant_on_components(p in disk(), x in finite_point(), y in finite_point()) {
        let base = BerkPoint::Disk(p.clone());
        prop_assume!(x != base && y != base);
        prop_assume!(x != y);
        if !path_contains(&x, &y, &base) {
            let lx = tangent_direction(&p, &x).unwrap().label;
            let ly = tangent_direction(&p, &y).unwrap().label;
            prop_assert!(lx.approx_eq(&ly), "{} and {} lie in one component of {} but have labels {} and {}", x, y, p, lx, ly);
        }
    }

    #[test]
    fn mobius_respects_composition(s in mobius(), r in mobius(), p in finite_point()) {
        let two_step = s.apply(&p).and_then(|x| r.apply(&x));
        let one_step = r.compose(&s).apply(&p);
        if let (Ok(a), Ok(b)) = (two_step, one_step) {
            prop_assert!(close(&a, &b), "{} vs {}", a, b);
        }
    }

    #[test]
    fn mobius_inverse_round_trip(s in mobius(), p in disk()) {
        let there = s.apply_disk(&p).unwrap();
        prop_assert_eq!(s.inverse().apply_disk(&there).unwrap(), p);
    }
}
