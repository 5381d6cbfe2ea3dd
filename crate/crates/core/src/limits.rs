//! The limit pipeline: push the approximate canonical measure through the
//! reduction map of a model, check the node-mass formula, and compare the
//! set `S` of disk points with at least two limit atoms against the span of
//! the Julia set.

use serde::Serialize;

use crate::berkovich::{BerkPoint, Disk, JoinTree};
use crate::dynamics::{
    canonical_measure_approx, reduction_class, Mass, MeasureConfig, RationalMapK, ReductionClass,
    WeightedPointSet,
};
use crate::error::{Error, Result};
use crate::puiseux::PuiseuxSeries;
use crate::sncmodel::{Atom, ReductionTarget, SncModel};

/// Default seed of the backward orbit.
pub fn default_seed() -> BerkPoint {
    BerkPoint::Classical(PuiseuxSeries::real(2.0))
}

#[derive(Clone, Debug)]
pub struct LimitConfig {
    pub measure: MeasureConfig,
    pub seed: BerkPoint,
}

impl LimitConfig {
    pub fn with_depth(depth: usize) -> Self {
        LimitConfig {
            measure: MeasureConfig::with_depth(depth),
            seed: default_seed(),
        }
    }

    pub fn seeded(mut self, seed: BerkPoint) -> Self {
        self.seed = seed;
        self
    }
}

impl Default for LimitConfig {
    fn default() -> Self {
        LimitConfig::with_depth(MeasureConfig::default().depth)
    }
}

/// A finite atomic measure on the central fiber of a model.
#[derive(Clone, Debug)]
pub struct AtomicMeasure {
    pub atoms: Vec<Atom>,
    pub depth: usize,
    pub seed: BerkPoint,
    pub stochastic: bool,
    pub rng_seed: u64,
    /// Smallest mass a single sample leaf carries; lighter atoms are
    /// invisible at this depth.
    pub resolution: Mass,
    pub warnings: Vec<String>,
}

impl AtomicMeasure {
    pub fn total_mass(&self) -> Mass {
        self.atoms.iter().map(|a| a.mass).sum()
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Mass of one target, zero if absent.
    pub fn mass_of(&self, target: &ReductionTarget) -> Mass {
        self.atoms
            .iter()
            .find(|a| a.target == *target)
            .map(|a| a.mass)
            .unwrap_or_else(|| Mass::from_integer(0))
    }
}

/// Rejects maps whose canonical measure charges a disk point; returns a
/// warning when the question is undecided.
fn precondition(f: &RationalMapK) -> Result<Option<String>> {
    match reduction_class(f) {
        ReductionClass::Good | ReductionClass::PotentiallyGood => Err(Error::PotentiallyGoodReduction),
        ReductionClass::GenuinelyBad => Ok(None),
        ReductionClass::Undecided => Ok(Some(
            "potentially good reduction is not decided for this map".into(),
        )),
    }
}

/// The sample behind [`limit_measure`], after the reduction precondition.
pub fn limit_sample(f: &RationalMapK, cfg: &LimitConfig) -> Result<(WeightedPointSet, Vec<String>)> {
    let mut warnings: Vec<String> = precondition(f)?.into_iter().collect();
    let sample = canonical_measure_approx(f, &cfg.seed, &cfg.measure)?;
    if !warnings.is_empty() && JoinTree::build(&points_of(&sample)).is_err() {
        warnings.push("the sample concentrates at a single point".into());
    }
    Ok((sample, warnings))
}

fn points_of(sample: &WeightedPointSet) -> Vec<BerkPoint> {
    sample.points.iter().map(|(p, _)| p.clone()).collect()
}

fn resolution(f: &RationalMapK, sample: &WeightedPointSet) -> Mass {
    let smallest = sample.points.iter().map(|(_, m)| *m).min();
    smallest.unwrap_or_else(|| {
        Mass::new(1, (f.degree() as i128).pow(sample.depth as u32))
    })
}

/// `(red_X)_* μ` for the approximate canonical measure `μ`.
pub fn limit_from_sample(
    f: &RationalMapK,
    model: &SncModel,
    sample: &WeightedPointSet,
    warnings: Vec<String>,
) -> Result<AtomicMeasure> {
    let atoms = model.pushforward(&sample.points)?;
    Ok(AtomicMeasure {
        atoms,
        depth: sample.depth,
        seed: sample.seed.clone(),
        stochastic: sample.stochastic,
        rng_seed: sample.rng_seed,
        resolution: resolution(f, sample),
        warnings,
    })
}

/// The predicted limit of the complex canonical measures on the model.
pub fn limit_measure(f: &RationalMapK, model: &SncModel, cfg: &LimitConfig) -> Result<AtomicMeasure> {
    let (sample, warnings) = limit_sample(f, cfg)?;
    limit_from_sample(f, model, &sample, warnings)
}

/// Recomputation of one atom from minimal-model measures.
#[derive(Clone, Debug, Serialize)]
pub struct AtomCheck {
    pub target: String,
    pub model_mass: MassPair,
    pub recomputed: MassPair,
    pub discrepancy: MassPair,
}

/// An exact mass written as numerator and denominator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct MassPair(pub i128, pub i128);

impl From<Mass> for MassPair {
    fn from(m: Mass) -> Self {
        MassPair(*m.numer(), *m.denom())
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct NodeMassReport {
    pub nodes: Vec<AtomCheck>,
    pub smooth: Vec<AtomCheck>,
}

impl NodeMassReport {
    pub fn all_exact(&self) -> bool {
        self.nodes
            .iter()
            .chain(&self.smooth)
            .all(|c| c.discrepancy.0 == 0)
    }
}

/// Checks every node of the model against
/// `μ_{E_i}({z_i}) + μ_{E_j}({z_j}) - 1`, and every smooth atom against
/// `μ_{E_i}({z})`, where `μ_{E_i}` is the limit on the minimal model at
/// `η_i` computed from the same sample.
pub fn node_mass_check(f: &RationalMapK, model: &SncModel, cfg: &LimitConfig) -> Result<NodeMassReport> {
    let (sample, warnings) = limit_sample(f, cfg)?;
    let rho = limit_from_sample(f, model, &sample, warnings)?;
    let mut report = NodeMassReport::default();
    if model.len() < 2 {
        return Ok(report);
    }
    let minimal: Vec<AtomicMeasure> = (0..model.len())
        .map(|i| {
            let m = SncModel::minimal(model.name(i), model.eta(i));
            limit_from_sample(f, &m, &sample, Vec::new())
        })
        .collect::<Result<_>>()?;
    let one = Mass::from_integer(1);
    for &(i, j) in model.adjacency() {
        let zi = ReductionTarget::Smooth(0, model.node_coordinate(i, j));
        let zj = ReductionTarget::Smooth(0, model.node_coordinate(j, i));
        let recomputed = minimal[i].mass_of(&zi) + minimal[j].mass_of(&zj) - one;
        let have = rho.mass_of(&ReductionTarget::Node(i, j));
        report.nodes.push(AtomCheck {
            target: format!("{} ∩ {}", model.name(i), model.name(j)),
            model_mass: have.into(),
            recomputed: recomputed.into(),
            discrepancy: (have - recomputed).into(),
        });
    }
    for a in &rho.atoms {
        if let ReductionTarget::Smooth(i, l) = &a.target {
            let recomputed = minimal[*i].mass_of(&ReductionTarget::Smooth(0, *l));
            report.smooth.push(AtomCheck {
                target: format!("{} at {l}", model.name(*i)),
                model_mass: a.mass.into(),
                recomputed: recomputed.into(),
                discrepancy: (a.mass - recomputed).into(),
            });
        }
    }
    Ok(report)
}

#[derive(Clone, Debug, Serialize)]
pub struct SMembership {
    pub in_s: bool,
    pub atoms: usize,
    /// Atoms lighter than this cannot be seen at the sample depth.
    pub resolution: MassPair,
}

/// Whether the limit on the minimal model at `z` has at least two atoms.
pub fn s_membership(f: &RationalMapK, z: &Disk, cfg: &LimitConfig) -> Result<SMembership> {
    let (sample, _) = limit_sample(f, cfg)?;
    s_membership_in(f, z, &sample)
}

fn s_membership_in(f: &RationalMapK, z: &Disk, sample: &WeightedPointSet) -> Result<SMembership> {
    let model = SncModel::minimal("Z", z);
    let rho = limit_from_sample(f, &model, sample, Vec::new())?;
    Ok(SMembership {
        in_s: rho.len() >= 2,
        atoms: rho.len(),
        resolution: rho.resolution.into(),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SpanRow {
    pub candidate: String,
    pub in_s: bool,
    pub on_span: bool,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct SpanReport {
    pub rows: Vec<SpanRow>,
    /// Fraction of candidates where both tests agree; `1` when there are none.
    pub agreement: f64,
    pub disagreements: Vec<String>,
}

/// Compares membership in `S` with membership in the span of the sample.
pub fn span_vs_s_check(f: &RationalMapK, cfg: &LimitConfig, candidates: &[Disk]) -> Result<SpanReport> {
    if candidates.is_empty() {
        return Ok(SpanReport {
            agreement: 1.0,
            ..SpanReport::default()
        });
    }
    let (sample, _) = limit_sample(f, cfg)?;
    let span = JoinTree::build(&points_of(&sample))?;
    let mut report = SpanReport::default();
    for z in candidates {
        let s = s_membership_in(f, z, &sample)?;
        let on_span = span.span_contains(&BerkPoint::Disk(z.clone()));
        if s.in_s != on_span {
            report.disagreements.push(z.to_string());
        }
        report.rows.push(SpanRow {
            candidate: z.to_string(),
            in_s: s.in_s,
            on_span,
        });
    }
    let agree = report.rows.len() - report.disagreements.len();
    report.agreement = agree as f64 / report.rows.len() as f64;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::quadratic::{self, Sign};
    use crate::sncmodel::{contraction_target_map, Divisor};
    use crate::berkovich::P1Label;
    use crate::puiseux::Exponent;
    use num_complex::Complex64;

    fn tower(n: usize) -> SncModel {
        quadratic::tower_model(n).unwrap()
    }

    #[test]
    fn trivial_model_limit() {
        let f = quadratic::example_map();
        for n in 1..=4 {
            let rho = limit_measure(&f, &SncModel::trivial(), &LimitConfig::with_depth(n)).unwrap();
            assert_eq!(rho.len(), 2);
            for a in &rho.atoms {
                assert_eq!(a.mass, Mass::new(1, 2));
                let ReductionTarget::Smooth(0, P1Label::Finite(c)) = a.target else {
                    panic!("unexpected target {:?}", a.target)
                };
                assert!((c.norm() - 1.0).abs() < 1e-9 && c.re.abs() < 1e-9);
            }
        }
    }

    #[test]
    fn tower_leaves_carry_two_atoms_each() {
        let f = quadratic::example_map();
        for k in 1..=2 {
            let rho = limit_measure(&f, &tower(k), &LimitConfig::with_depth(k + 2)).unwrap();
            assert_eq!(rho.len(), 1 << (k + 1));
            assert!(rho.atoms.iter().all(|a| a.mass == Mass::new(1, 1 << (k + 1))));
        }
    }

    #[test]
    fn good_reduction_rejected() {
        let f = RationalMapK::polynomial(vec![PuiseuxSeries::t(), PuiseuxSeries::zero(), PuiseuxSeries::one()]).unwrap();
        assert_eq!(
            limit_measure(&f, &SncModel::trivial(), &LimitConfig::with_depth(2)).unwrap_err(),
            Error::PotentiallyGoodReduction
        );
    }

    #[test]
    fn far_minimal_model_contracts_to_one_atom() {
        let f = quadratic::example_map();
        let z = Disk::new(&PuiseuxSeries::real(3.0), Exponent::from_integer(1));
        let rho = limit_measure(&f, &SncModel::minimal("Z", &z), &LimitConfig::with_depth(3)).unwrap();
        assert_eq!(rho.len(), 1);
        assert_eq!(rho.atoms[0].mass, Mass::from_integer(1));
    }

    #[test]
    fn node_formula_on_outer_pair() {
        let f = quadratic::example_map();
        let big = Disk::new(&PuiseuxSeries::zero(), Exponent::from_integer(-1));
        let bp = quadratic::eta(&[Sign::Plus]).unwrap();
        let model = SncModel::new(vec![Divisor::new("A", big, 1), Divisor::new("B", bp, 1)]).unwrap();
        let report = node_mass_check(&f, &model, &LimitConfig::with_depth(3)).unwrap();
        assert_eq!(report.nodes.len(), 1);
        assert_eq!(report.nodes[0].model_mass, MassPair(1, 2));
        assert!(report.all_exact());
    }

    #[test]
    fn projection_consistency() {
        let f = quadratic::example_map();
        let cfg = LimitConfig::with_depth(4);
        let x = tower(2);
        let rho = limit_measure(&f, &x, &cfg).unwrap();
        for i in 0..x.len() {
            let y = SncModel::minimal(x.name(i), x.eta(i));
            let pushed = contraction_target_map(&x, &y).unwrap().push(&rho.atoms);
            let direct = limit_measure(&f, &y, &cfg).unwrap();
            assert_eq!(pushed, direct.atoms, "component {}", x.name(i));
        }
    }

    #[test]
    fn s_membership_examples() {
        let f = quadratic::example_map();
        let cfg = LimitConfig::with_depth(3);
        assert!(s_membership(&f, &Disk::gauss(), &cfg).unwrap().in_s);
        let mid = Disk::new(&quadratic::fixed_point(Sign::Plus), Exponent::new(1, 2));
        assert!(s_membership(&f, &mid, &cfg).unwrap().in_s);
        let big = Disk::new(&PuiseuxSeries::zero(), Exponent::from_integer(-1));
        assert!(!s_membership(&f, &big, &cfg).unwrap().in_s);
    }

    #[test]
    fn span_check() {
        let f = quadratic::example_map();
        let cfg = LimitConfig::with_depth(4);
        let mut cands: Vec<Disk> = (0..=2)
            .flat_map(quadratic::words)
            .map(|a| quadratic::eta(&a).unwrap())
            .collect();
        cands.push(Disk::new(&PuiseuxSeries::constant(Complex64::new(3.0, 0.0)), Exponent::from_integer(1)));
        let report = span_vs_s_check(&f, &cfg, &cands).unwrap();
        assert_eq!(report.agreement, 1.0);
        assert!(report.rows[..7].iter().all(|r| r.in_s && r.on_span));
        assert!(!report.rows[7].in_s && !report.rows[7].on_span);
        assert_eq!(span_vs_s_check(&f, &cfg, &[]).unwrap().rows.len(), 0);
    }
}
