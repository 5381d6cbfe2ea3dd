//! The archimedean side: sample the canonical measure of `f_t` at a small
//! complex `t` by backward iteration and compare it with a predicted atomic
//! limit in the charts of a model.

use num_complex::Complex64;
use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::berkovich::{apply_complex, Mobius};
use crate::complexpoly;
use crate::dynamics::{Mass, RationalMapK, DEFAULT_CAP, DEFAULT_RNG_SEED};
use crate::error::{Error, Result};
use crate::limits::AtomicMeasure;
use crate::berkovich::P1Label;
use crate::sncmodel::{ReductionTarget, SncModel};

/// Residual every polished preimage must meet, relative to the target size.
const RESIDUAL_TOL: f64 = 1e-10;

/// Points beyond this modulus are treated as `∞`.
pub const DEFAULT_INFINITY_HORIZON: f64 = 1e9;

/// A point of `ℙ¹(ℂ)`, `None` for `∞`.
pub type CPoint = Option<Complex64>;

#[derive(Clone, Debug)]
pub struct ComplexSample {
    pub t: Complex64,
    pub points: Vec<(CPoint, Mass)>,
    pub depth: usize,
    pub seed: CPoint,
    pub stochastic: bool,
    pub rng_seed: u64,
}

impl ComplexSample {
    pub fn total_mass(&self) -> Mass {
        self.points.iter().map(|(_, m)| *m).sum()
    }
}

#[derive(Clone, Debug)]
pub struct SampleConfig {
    pub depth: usize,
    pub cap: usize,
    pub rng_seed: u64,
    pub horizon: f64,
}

impl SampleConfig {
    pub fn with_depth(depth: usize) -> Self {
        SampleConfig {
            depth,
            ..SampleConfig::default()
        }
    }
}

impl Default for SampleConfig {
    fn default() -> Self {
        SampleConfig {
            depth: 12,
            cap: DEFAULT_CAP,
            rng_seed: DEFAULT_RNG_SEED,
            horizon: DEFAULT_INFINITY_HORIZON,
        }
    }
}

/// The complex map `f_t`.
#[derive(Clone, Debug)]
pub struct ComplexMap {
    num: Vec<Complex64>,
    den: Vec<Complex64>,
    degree: usize,
    horizon: f64,
}

impl ComplexMap {
    pub fn at(f: &RationalMapK, t: Complex64, horizon: f64) -> Result<Self> {
        if t.norm() == 0.0 {
            return Err(Error::Config("t must be nonzero".into()));
        }
        let (num, den) = f.at(t)?;
        Ok(ComplexMap {
            num,
            den,
            degree: f.degree(),
            horizon,
        })
    }

    pub fn eval(&self, z: CPoint) -> CPoint {
        let Some(z) = z else {
            let (n, d) = (lead(&self.num, self.degree), lead(&self.den, self.degree));
            return if d.norm() == 0.0 { None } else { Some(n / d) };
        };
        let n = complexpoly::eval(&self.num, z);
        let d = complexpoly::eval(&self.den, z);
        let w = n / d;
        if d.norm() == 0.0 || !w.is_finite() || w.norm() > self.horizon {
            None
        } else {
            Some(w)
        }
    }

    /// Preimages of `w`, each simple root listed once and the degree deficit
    /// assigned to `∞`.
    pub fn preimages(&self, w: CPoint) -> Result<Vec<CPoint>> {
        let p: Vec<Complex64> = match w {
            None => self.den.clone(),
            Some(w) => {
                let n = self.num.len().max(self.den.len());
                (0..n)
                    .map(|k| coeff(&self.num, k) - w * coeff(&self.den, k))
                    .collect()
            }
        };
        let p = complexpoly::trim(&p, 1e-14);
        let mut out: Vec<CPoint> = Vec::with_capacity(self.degree);
        if p.len() >= 2 {
            let scale: f64 = p.iter().map(|c| c.norm()).fold(0.0, f64::max);
            for r in complexpoly::roots(&p)? {
                let r = complexpoly::polish(&p, r);
                if !r.is_finite() {
                    return Err(Error::ComplexRootFailure);
                }
                if r.norm() > self.horizon {
                    out.push(None);
                    continue;
                }
                let resid = complexpoly::eval(&p, r).norm() / (scale * (1.0 + r.norm()).powi(p.len() as i32 - 1));
                if resid > RESIDUAL_TOL {
                    return Err(Error::ComplexRootFailure);
                }
                out.push(Some(r));
            }
        }
        while out.len() < self.degree {
            out.push(None);
        }
        Ok(out)
    }
}

fn coeff(p: &[Complex64], k: usize) -> Complex64 {
    p.get(k).copied().unwrap_or_default()
}

fn lead(p: &[Complex64], d: usize) -> Complex64 {
    coeff(p, d)
}

fn same(a: CPoint, b: CPoint) -> bool {
    match (a, b) {
        (None, None) => true,
        (Some(x), Some(y)) => (x - y).norm() <= 1e-9 * (1.0 + x.norm()),
        _ => false,
    }
}

/// Backward-iteration sample of the canonical measure of `f_t`.
pub fn mu_t_sample(f: &RationalMapK, t: Complex64, w0: CPoint, cfg: &SampleConfig) -> Result<ComplexSample> {
    if cfg.depth == 0 {
        return Err(Error::Config("depth must be at least 1".into()));
    }
    let map = ComplexMap::at(f, t, cfg.horizon)?;
    let mut seen: Vec<CPoint> = Vec::new();
    let mut frontier = vec![w0];
    for _ in 0..2 {
        let mut next = Vec::new();
        for w in &frontier {
            for z in map.preimages(*w)? {
                if !seen.iter().any(|s| same(*s, z)) {
                    seen.push(z);
                    next.push(z);
                }
            }
        }
        frontier = next;
    }
    if seen.len() <= 1 {
        return Err(Error::ExceptionalSeed(format!("{w0:?}")));
    }
    let d = map.degree as i128;
    let mut level: Vec<(CPoint, Mass)> = vec![(w0, Mass::from_integer(1))];
    let mut stochastic = false;
    for step in 0..cfg.depth {
        let children = expand(&map, &level)?;
        let mut next: Vec<(CPoint, Mass)> = children
            .into_iter()
            .flatten()
            .map(|(z, w)| (z, w / Mass::from_integer(d)))
            .collect();
        if next.len() > cfg.cap {
            stochastic = true;
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed.wrapping_add(step as u64));
            let mut keep = index::sample(&mut rng, next.len(), cfg.cap).into_vec();
            keep.sort_unstable();
            let picked: Vec<(CPoint, Mass)> = keep.into_iter().map(|i| next[i]).collect();
            let total: Mass = picked.iter().map(|(_, m)| *m).sum();
            next = picked.into_iter().map(|(z, m)| (z, m / total)).collect();
        }
        level = next;
    }
    Ok(ComplexSample {
        t,
        points: level,
        depth: cfg.depth,
        seed: w0,
        stochastic,
        rng_seed: cfg.rng_seed,
    })
}

type Children = Vec<(CPoint, Mass)>;

fn children_of(map: &ComplexMap, w: CPoint, m: Mass) -> Result<Children> {
    Ok(map.preimages(w)?.into_iter().map(|z| (z, m)).collect())
}

#[cfg(feature = "parallel")]
fn expand(map: &ComplexMap, level: &[(CPoint, Mass)]) -> Result<Vec<Children>> {
    use rayon::prelude::*;
    level.par_iter().map(|(w, m)| children_of(map, *w, *m)).collect()
}

#[cfg(not(feature = "parallel"))]
fn expand(map: &ComplexMap, level: &[(CPoint, Mass)]) -> Result<Vec<Children>> {
    level.iter().map(|(w, m)| children_of(map, *w, *m)).collect()
}

/// Largest `|f_t(z) - w|` over the parent-child pairs one level below the
/// seed's preimages; used to audit the root finder.
pub fn max_residual(f: &RationalMapK, t: Complex64, w: Complex64) -> Result<f64> {
    let map = ComplexMap::at(f, t, DEFAULT_INFINITY_HORIZON)?;
    let mut worst: f64 = 0.0;
    for z in map.preimages(Some(w))?.into_iter().flatten() {
        if let Some(fz) = map.eval(Some(z)) {
            worst = worst.max((fz - w).norm() / (1.0 + w.norm()));
        }
    }
    Ok(worst)
}

/// Residual tolerance promised by [`max_residual`].
pub fn residual_tolerance() -> f64 {
    RESIDUAL_TOL
}

/// Moves the sample through a model chart evaluated at the sample's `t`
/// (principal branch of fractional powers).
pub fn chart_transport(tau: &Mobius, sample: &ComplexSample) -> Result<ComplexSample> {
    let m = tau.eval_at(sample.t)?;
    Ok(ComplexSample {
        points: sample
            .points
            .iter()
            .map(|(z, w)| (apply_complex(&m, *z), *w))
            .collect(),
        ..sample.clone()
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct AtomComparison {
    pub atom: String,
    pub predicted: f64,
    pub measured: f64,
    pub discrepancy: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct WeakReport {
    pub t: [f64; 2],
    pub eps: f64,
    pub rows: Vec<AtomComparison>,
    pub max_discrepancy: f64,
    /// Sample mass outside every smooth-atom ball.
    pub unassigned: f64,
    pub branch: &'static str,
}

fn in_ball(z: CPoint, a: &P1Label, eps: f64) -> bool {
    match (z, a) {
        (None, P1Label::Infinity) => true,
        (Some(z), P1Label::Infinity) => z.norm() > 1.0 / eps,
        (Some(z), P1Label::Finite(c)) => (z - c).norm() < eps,
        (None, P1Label::Finite(_)) => false,
    }
}

fn balls_overlap(a: &P1Label, b: &P1Label, eps: f64) -> bool {
    match (a, b) {
        (P1Label::Finite(x), P1Label::Finite(y)) => (x - y).norm() <= 2.0 * eps,
        (P1Label::Finite(x), P1Label::Infinity) | (P1Label::Infinity, P1Label::Finite(x)) => {
            x.norm() + eps >= 1.0 / eps
        }
        (P1Label::Infinity, P1Label::Infinity) => true,
    }
}

fn mass_f64(m: Mass) -> f64 {
    *m.numer() as f64 / *m.denom() as f64
}

/// Mass-in-balls comparison of a complex sample with a predicted limit.
///
/// Each atom is examined in the chart `(z - x)/t^q` of its component. A node
/// atom is measured as `m_i + m_j - 1` from the balls around its coordinates
/// on both components.
pub fn weak_compare(
    sample: &ComplexSample,
    predicted: &AtomicMeasure,
    model: &SncModel,
    eps: f64,
) -> Result<WeakReport> {
    if eps <= 0.0 {
        return Err(Error::Config("eps must be positive".into()));
    }
    // balls that will be examined, per component
    let mut balls: Vec<Vec<P1Label>> = vec![Vec::new(); model.len()];
    let mut add = |i: usize, l: P1Label| {
        if !balls[i].iter().any(|b| b.approx_eq(&l)) {
            balls[i].push(l);
        }
    };
    for a in &predicted.atoms {
        match a.target {
            ReductionTarget::Generic(i) => {
                return Err(Error::Config(format!(
                    "the prediction charges the generic point of {}; it is not comparable with a complex sample",
                    model.name(i)
                )))
            }
            ReductionTarget::Smooth(i, l) => add(i, l),
            ReductionTarget::Node(i, j) => {
                add(i, model.node_coordinate(i, j));
                add(j, model.node_coordinate(j, i));
            }
        }
    }
    for (i, bs) in balls.iter().enumerate() {
        for (k, a) in bs.iter().enumerate() {
            for b in &bs[k + 1..] {
                if balls_overlap(a, b, eps) {
                    return Err(Error::Config(format!(
                        "eps = {eps} balls around {a} and {b} on {} overlap",
                        model.name(i)
                    )));
                }
            }
        }
    }
    let charts: Vec<Option<ComplexSample>> = balls
        .iter()
        .enumerate()
        .map(|(i, bs)| {
            if bs.is_empty() {
                Ok(None)
            } else {
                chart_transport(&Mobius::normalizing(model.eta(i)), sample).map(Some)
            }
        })
        .collect::<Result<_>>()?;
    let ball_mass = |i: usize, l: &P1Label| -> Mass {
        charts[i]
            .as_ref()
            .expect("chart computed for every examined component")
            .points
            .iter()
            .filter(|(z, _)| in_ball(*z, l, eps))
            .map(|(_, m)| *m)
            .sum()
    };
    let mut rows = Vec::new();
    let mut assigned = Mass::from_integer(0);
    for a in &predicted.atoms {
        let (label, measured) = match a.target {
            ReductionTarget::Smooth(i, l) => {
                let m = ball_mass(i, &l);
                assigned += m;
                (format!("{}:{l}", model.name(i)), m)
            }
            ReductionTarget::Node(i, j) => {
                let mi = ball_mass(i, &model.node_coordinate(i, j));
                let mj = ball_mass(j, &model.node_coordinate(j, i));
                (
                    format!("{}∩{}", model.name(i), model.name(j)),
                    mi + mj - Mass::from_integer(1),
                )
            }
            ReductionTarget::Generic(_) => unreachable!("rejected above"),
        };
        let predicted = mass_f64(a.mass);
        let measured = mass_f64(measured);
        rows.push(AtomComparison {
            atom: label,
            predicted,
            measured,
            discrepancy: (predicted - measured).abs(),
        });
    }
    let max_discrepancy = rows.iter().map(|r| r.discrepancy).fold(0.0, f64::max);
    Ok(WeakReport {
        t: [sample.t.re, sample.t.im],
        eps,
        rows,
        max_discrepancy,
        unassigned: (1.0 - mass_f64(assigned)).max(0.0),
        branch: "principal",
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ConvergenceRow {
    pub t: [f64; 2],
    pub atom: String,
    pub predicted: f64,
    pub measured: f64,
    pub discrepancy: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConvergenceTable {
    pub rows: Vec<ConvergenceRow>,
    /// `(|t|, max discrepancy)` in input order.
    pub max_by_t: Vec<(f64, f64)>,
    /// Max discrepancy never grows as `|t|` shrinks (up to `tolerance`).
    pub non_increasing: bool,
    pub tolerance: f64,
}

/// Runs [`weak_compare`] along a list of parameters of decreasing modulus.
#[allow(clippy::too_many_arguments)]
pub fn convergence_table(
    f: &RationalMapK,
    model: &SncModel,
    predicted: &AtomicMeasure,
    ts: &[Complex64],
    w0: CPoint,
    cfg: &SampleConfig,
    eps: f64,
    tolerance: f64,
) -> Result<ConvergenceTable> {
    if ts.windows(2).any(|w| w[1].norm() > w[0].norm()) {
        return Err(Error::Config("t values must be sorted by decreasing modulus".into()));
    }
    let mut rows = Vec::new();
    let mut max_by_t = Vec::new();
    for &t in ts {
        let sample = mu_t_sample(f, t, w0, cfg)?;
        let report = weak_compare(&sample, predicted, model, eps)?;
        max_by_t.push((t.norm(), report.max_discrepancy));
        rows.extend(report.rows.into_iter().map(|r| ConvergenceRow {
            t: [t.re, t.im],
            atom: r.atom,
            predicted: r.predicted,
            measured: r.measured,
            discrepancy: r.discrepancy,
        }));
    }
    let non_increasing = max_by_t.windows(2).all(|w| w[1].1 <= w[0].1 + tolerance);
    Ok(ConvergenceTable {
        rows,
        max_by_t,
        non_increasing,
        tolerance,
    })
}
