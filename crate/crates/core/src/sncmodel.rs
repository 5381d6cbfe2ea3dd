//! snc models of `ℙ¹ × 𝔻`, described by their divisorial points.
//!
//! A model is a finite set of disk points `η_i` with multiplicities `n_i`.
//! The components of the central fiber are in bijection with the `η_i`, and
//! the reduction map sends a point to the component, smooth point or node
//! hit by its closure. That target depends only on which complement
//! component of `{η_i}` the point lies in.

use std::fmt::Write as _;

use crate::berkovich::{
    join, open_path_contains, tangent_direction, BerkPoint, Disk, Mobius, P1Label,
};
use crate::dynamics::Mass;
use crate::error::{Error, Result};
use crate::puiseux::SeriesConfig;

#[derive(Clone, Debug, PartialEq)]
pub struct Divisor {
    pub name: String,
    pub eta: Disk,
    pub mult: u32,
}

impl Divisor {
    pub fn new(name: impl Into<String>, eta: Disk, mult: u32) -> Self {
        Divisor {
            name: name.into(),
            eta,
            mult,
        }
    }
}

/// Where the closure of a point meets the central fiber.
#[derive(Clone, Debug, PartialEq)]
pub enum ReductionTarget {
    /// The generic point of a component; only divisorial points go here.
    Generic(usize),
    /// A smooth closed point of component `i`, in its tangent coordinate.
    Smooth(usize, P1Label),
    /// The intersection of two adjacent components, `i < j`.
    Node(usize, usize),
}

impl ReductionTarget {
    fn sort_key(&self) -> (usize, u8, usize, (u8, f64, f64)) {
        match self {
            ReductionTarget::Generic(i) => (*i, 0, 0, (0, 0.0, 0.0)),
            ReductionTarget::Smooth(i, l) => (*i, 1, 0, l.sort_key()),
            ReductionTarget::Node(i, j) => (*i, 2, *j, (0, 0.0, 0.0)),
        }
    }

    pub fn cmp_key(&self, other: &Self) -> std::cmp::Ordering {
        self.sort_key()
            .partial_cmp(&other.sort_key())
            .unwrap_or(std::cmp::Ordering::Equal)
    }
}

/// A target with its mass.
#[derive(Clone, Debug, PartialEq)]
pub struct Atom {
    pub target: ReductionTarget,
    pub mass: Mass,
}

#[derive(Clone, Debug)]
pub struct SncModel {
    divisors: Vec<Divisor>,
    adjacency: Vec<(usize, usize)>,
}

impl SncModel {
    /// Validates the divisor data: distinct points, multiplicities divisible
    /// by the denominators of the radius exponents, and the snc condition.
    pub fn new(divisors: Vec<Divisor>) -> Result<Self> {
        if divisors.is_empty() {
            return Err(Error::EmptyModel);
        }
        for (i, a) in divisors.iter().enumerate() {
            for b in &divisors[..i] {
                if a.eta == b.eta {
                    return Err(Error::DuplicateDivisor(format!("{} = {}", a.name, b.name)));
                }
                if a.name == b.name {
                    return Err(Error::DuplicateDivisor(format!("name {}", a.name)));
                }
            }
            let den = *a.eta.q().denom();
            if a.mult == 0 || (a.mult as i64) % den != 0 {
                return Err(Error::MultiplicityMismatch {
                    name: a.name.clone(),
                    q: a.eta.q().to_string(),
                    den,
                    mult: a.mult,
                });
            }
        }
        let pts: Vec<BerkPoint> = divisors.iter().map(|d| BerkPoint::Disk(d.eta.clone())).collect();
        if let Some(w) = snc_witness(&pts) {
            return Err(Error::SncViolation {
                witness: w.to_string(),
            });
        }
        let mut adjacency = Vec::new();
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                let blocked = (0..pts.len())
                    .any(|k| k != i && k != j && open_path_contains(&pts[i], &pts[j], &pts[k]));
                if !blocked {
                    adjacency.push((i, j));
                }
            }
        }
        Ok(SncModel {
            divisors,
            adjacency,
        })
    }

    /// `ℙ¹ × 𝔻`: the Gauss point with multiplicity one.
    pub fn trivial() -> Self {
        SncModel::new(vec![Divisor::new("E", Disk::gauss(), 1)]).expect("trivial model is valid")
    }

    /// The model with the single divisorial point `η`, with the smallest
    /// admissible multiplicity.
    pub fn minimal(name: impl Into<String>, eta: &Disk) -> Self {
        let mult = *eta.q().denom() as u32;
        SncModel::new(vec![Divisor::new(name, eta.clone(), mult)]).expect("one point is snc")
    }

    pub fn divisors(&self) -> &[Divisor] {
        &self.divisors
    }

    pub fn len(&self) -> usize {
        self.divisors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.divisors.is_empty()
    }

    pub fn eta(&self, i: usize) -> &Disk {
        &self.divisors[i].eta
    }

    pub fn name(&self, i: usize) -> &str {
        &self.divisors[i].name
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.divisors.iter().position(|d| d.name == name)
    }

    pub fn index_of_eta(&self, eta: &Disk) -> Option<usize> {
        self.divisors.iter().position(|d| d.eta == *eta)
    }

    /// Intersecting pairs `(i, j)` with `i < j`.
    pub fn adjacency(&self) -> &[(usize, usize)] {
        &self.adjacency
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        self.adjacency.contains(&(a, b))
    }

    pub fn add_divisor(&self, name: impl Into<String>, eta: Disk, mult: u32) -> Result<Self> {
        let mut divisors = self.divisors.clone();
        divisors.push(Divisor::new(name, eta, mult));
        SncModel::new(divisors)
    }

    /// Contracts the named component.
    pub fn remove_divisor(&self, name: &str) -> Result<Self> {
        let i = self
            .index_of(name)
            .ok_or_else(|| Error::UnknownDivisor(name.to_string()))?;
        let mut divisors = self.divisors.clone();
        divisors.remove(i);
        SncModel::new(divisors)
    }

    /// Coordinate on `E_i` of its intersection with `E_j`.
    pub fn node_coordinate(&self, i: usize, j: usize) -> P1Label {
        tangent_direction(self.eta(i), &BerkPoint::Disk(self.eta(j).clone()))
            .expect("distinct divisorial points")
            .label
    }

    /// The reduction map.
    ///
    /// For `x` not divisorial, the components bordering its complement
    /// component are the `η_i` reachable from `x` without crossing another
    /// divisorial point; one of them gives a smooth point, two a node.
    pub fn reduce(&self, x: &BerkPoint) -> Result<ReductionTarget> {
        if let BerkPoint::Disk(d) = x {
            if let Some(i) = self.index_of_eta(d) {
                return Ok(ReductionTarget::Generic(i));
            }
        }
        let pts: Vec<BerkPoint> = self.divisors.iter().map(|d| BerkPoint::Disk(d.eta.clone())).collect();
        let boundary: Vec<usize> = (0..pts.len())
            .filter(|&i| {
                !(0..pts.len()).any(|k| k != i && open_path_contains(x, &pts[i], &pts[k]))
            })
            .collect();
        match boundary.as_slice() {
            [i] => Ok(ReductionTarget::Smooth(
                *i,
                tangent_direction(self.eta(*i), x)?.label,
            )),
            [i, j] => {
                if !self.adjacent(*i, *j) {
                    return Err(Error::Internal(format!(
                        "node between non-adjacent {} and {}",
                        self.name(*i),
                        self.name(*j)
                    )));
                }
                Ok(ReductionTarget::Node(*i, *j))
            }
            other => Err(Error::Internal(format!(
                "{} components border the point {x}",
                other.len()
            ))),
        }
    }

    /// `(red_X)_* ρ` for a finitely supported measure with no mass on the
    /// divisorial points. Atoms are sorted by target.
    pub fn pushforward(&self, points: &[(BerkPoint, Mass)]) -> Result<Vec<Atom>> {
        let mut atoms: Vec<Atom> = Vec::new();
        for (p, m) in points {
            let target = self.reduce(p)?;
            if let ReductionTarget::Generic(i) = target {
                return Err(Error::MassOnDivisor(self.name(i).to_string()));
            }
            match atoms.iter_mut().find(|a| a.target == target) {
                Some(a) => a.mass += *m,
                None => atoms.push(Atom { target, mass: *m }),
            }
        }
        atoms.retain(|a| a.mass != Mass::from_integer(0));
        atoms.sort_by(|a, b| a.target.cmp_key(&b.target));
        Ok(atoms)
    }

    /// Graphviz rendering of the dual graph; edges carry the coordinates of
    /// the node on both components.
    pub fn dual_graph_dot(&self) -> String {
        let mut out = String::from("graph dual {\n  node [shape=box];\n");
        for (i, d) in self.divisors.iter().enumerate() {
            let label = format!("{} (n={})\\n{}", d.name, d.mult, d.eta).replace('"', "'");
            let _ = writeln!(out, "  d{i} [label=\"{label}\"];");
        }
        for &(i, j) in &self.adjacency {
            let a = self.node_coordinate(i, j);
            let b = self.node_coordinate(j, i);
            let _ = writeln!(out, "  d{i} -- d{j} [label=\"{a} | {b}\"];");
        }
        out.push_str("}\n");
        out
    }
}

/// A vertex where three branches of the point set meet without being one of
/// the points, if any. For three points the meeting vertex is the deepest of
/// their pairwise joins.
pub fn snc_witness(pts: &[BerkPoint]) -> Option<BerkPoint> {
    let n = pts.len();
    let joins: Vec<Vec<BerkPoint>> = (0..n)
        .map(|i| (0..n).map(|j| join(&pts[i], &pts[j])).collect())
        .collect();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let cands = [&joins[i][j], &joins[i][k], &joins[j][k]];
                let median = cands
                    .iter()
                    .copied()
                    .find(|c| cands.iter().all(|o| c.leq(o)))
                    .expect("pairwise joins of three points form a chain");
                if !pts.iter().any(|p| p == median) {
                    return Some(median.clone());
                }
            }
        }
    }
    None
}

/// Induced map on targets of a contraction `X → Y`.
#[derive(Clone, Debug)]
pub struct ContractionMap {
    /// Component of `Y` for each component of `X`, `None` if contracted.
    pub image: Vec<Option<usize>>,
    /// `red_Y(η_i)` for every component of `X`.
    eta_targets: Vec<ReductionTarget>,
}

impl ContractionMap {
    pub fn apply(&self, t: &ReductionTarget) -> ReductionTarget {
        match *t {
            ReductionTarget::Generic(i) => self.eta_targets[i].clone(),
            ReductionTarget::Smooth(i, l) => match self.image[i] {
                Some(yi) => ReductionTarget::Smooth(yi, l),
                None => self.eta_targets[i].clone(),
            },
            ReductionTarget::Node(i, j) => match (self.image[i], self.image[j]) {
                (Some(a), Some(b)) => ReductionTarget::Node(a.min(b), a.max(b)),
                (Some(_), None) => self.eta_targets[j].clone(),
                (None, _) => self.eta_targets[i].clone(),
            },
        }
    }

    /// Pushes an atomic measure on `X₀` to `Y₀`.
    pub fn push(&self, atoms: &[Atom]) -> Vec<Atom> {
        let mut out: Vec<Atom> = Vec::new();
        for a in atoms {
            let target = self.apply(&a.target);
            match out.iter_mut().find(|b| b.target == target) {
                Some(b) => b.mass += a.mass,
                None => out.push(Atom {
                    target,
                    mass: a.mass,
                }),
            }
        }
        out.sort_by(|a, b| a.target.cmp_key(&b.target));
        out
    }
}

/// The target map of the contraction `X → Y`, where the divisorial points of
/// `Y` are a subset of those of `X`.
pub fn contraction_target_map(x: &SncModel, y: &SncModel) -> Result<ContractionMap> {
    for d in y.divisors() {
        if x.index_of_eta(&d.eta).is_none() {
            return Err(Error::NotAContraction(format!(
                "{} is not a divisorial point of the source",
                d.name
            )));
        }
    }
    let image: Vec<Option<usize>> = x.divisors().iter().map(|d| y.index_of_eta(&d.eta)).collect();
    let eta_targets = x
        .divisors()
        .iter()
        .map(|d| y.reduce(&BerkPoint::Disk(d.eta.clone())))
        .collect::<Result<Vec<_>>>()?;
    Ok(ContractionMap { image, eta_targets })
}

#[derive(Clone, Debug, Default)]
pub struct CompatibilityReport {
    pub checked: usize,
    pub violations: Vec<String>,
}

impl CompatibilityReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks `π ∘ red_X = red_Y` pointwise on a sample.
pub fn check_compatibility(x: &SncModel, y: &SncModel, samples: &[BerkPoint]) -> Result<CompatibilityReport> {
    let map = contraction_target_map(x, y)?;
    let mut report = CompatibilityReport::default();
    for p in samples {
        let lhs = map.apply(&x.reduce(p)?);
        let rhs = y.reduce(p)?;
        report.checked += 1;
        if lhs != rhs {
            report.violations.push(format!("{p}: {lhs:?} vs {rhs:?}"));
        }
    }
    Ok(report)
}

/// The chart `z ↦ (z - x)/t^q` identifying the minimal model at `η` with
/// the trivial model.
pub fn minimal_model_conjugation(eta: &Disk, cfg: &SeriesConfig) -> Result<Mobius> {
    let ram = num_integer::lcm(eta.center().ramification(), *eta.q().denom());
    if ram > cfg.max_ramification {
        return Err(Error::RamificationCap {
            needed: ram as u64,
            cap: cfg.max_ramification as u64,
        });
    }
    Ok(Mobius::normalizing(eta))
}
