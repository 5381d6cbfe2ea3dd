use num_rational::Ratio;
use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{newton_puiseux, RationalMapK};
use crate::berkovich::{BerkPoint, JoinTree};
use crate::error::{Error, Result};
use crate::puiseux::{Exponent, SeriesConfig, DEFAULT_REL_PRECISION};

pub type Mass = Ratio<i128>;

/// Leaves kept per level before subsampling.
pub const DEFAULT_CAP: usize = 4096;

/// Seed of the subsampling generator.
pub const DEFAULT_RNG_SEED: u64 = 0x5eed;

/// Preimages of `c` with multiplicity; the multiplicities sum to the degree.
pub fn preimages(f: &RationalMapK, c: &BerkPoint) -> Result<Vec<(BerkPoint, usize)>> {
    preimages_with(
        f,
        c,
        Exponent::from_integer(DEFAULT_REL_PRECISION),
        &SeriesConfig::default(),
    )
}

pub fn preimages_with(
    f: &RationalMapK,
    c: &BerkPoint,
    prec: Exponent,
    cfg: &SeriesConfig,
) -> Result<Vec<(BerkPoint, usize)>> {
    let d = f.degree();
    let poly = match c {
        BerkPoint::Infinity => f.denominator().clone(),
        BerkPoint::Classical(x) => f.numerator().sub(&f.denominator().scale(x)),
        BerkPoint::Disk(_) => {
            return Err(Error::NotType2("preimages are taken of classical points".into()))
        }
    }
    .trimmed();
    let k = poly.degree().unwrap_or(0);
    let mut out: Vec<(BerkPoint, usize)> = if k == 0 {
        Vec::new()
    } else {
        newton_puiseux(&poly, prec, cfg)?
            .into_iter()
            .map(|(r, m)| (BerkPoint::Classical(r), m))
            .collect()
    };
    if k < d {
        out.push((BerkPoint::Infinity, d - k));
    }
    Ok(out)
}

/// Distinct points in the first two backward images of `z0`.
fn backward_orbit_size(f: &RationalMapK, z0: &BerkPoint) -> Result<usize> {
    let mut seen: Vec<BerkPoint> = Vec::new();
    let mut level = vec![z0.clone()];
    for _ in 0..2 {
        let mut next = Vec::new();
        for p in &level {
            for (q, _) in preimages(f, p)? {
                if !seen.contains(&q) {
                    seen.push(q.clone());
                    next.push(q);
                }
            }
        }
        level = next;
    }
    Ok(seen.len())
}

/// Operational exceptionality: the backward orbit to depth two has at most
/// one distinct point.
pub fn is_exceptional(f: &RationalMapK, z0: &BerkPoint) -> Result<bool> {
    Ok(backward_orbit_size(f, z0)? <= 1)
}

#[derive(Clone, Debug)]
pub struct MeasureConfig {
    pub depth: usize,
    /// Leaves kept per level; wider levels are subsampled uniformly.
    pub cap: usize,
    pub rng_seed: u64,
    /// Absolute precision of every computed preimage.
    pub precision: Exponent,
    pub series: SeriesConfig,
}

impl MeasureConfig {
    pub fn with_depth(depth: usize) -> Self {
        MeasureConfig {
            depth,
            ..MeasureConfig::default()
        }
    }
}

impl Default for MeasureConfig {
    fn default() -> Self {
        MeasureConfig {
            depth: 4,
            cap: DEFAULT_CAP,
            rng_seed: DEFAULT_RNG_SEED,
            precision: Exponent::from_integer(DEFAULT_REL_PRECISION),
            series: SeriesConfig::default(),
        }
    }
}

/// Normalized `n`-fold preimages of a seed: the approximation of the
/// canonical measure.
#[derive(Clone, Debug)]
pub struct WeightedPointSet {
    pub points: Vec<(BerkPoint, Mass)>,
    pub depth: usize,
    pub seed: BerkPoint,
    /// Some level was subsampled; masses are then renormalized.
    pub stochastic: bool,
    pub rng_seed: u64,
}

impl WeightedPointSet {
    pub fn total_mass(&self) -> Mass {
        self.points.iter().map(|(_, m)| *m).sum()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Approximation of the canonical measure by the normalized backward orbit of
/// `z0` to depth `cfg.depth`.
///
/// Each leaf carries (product of multiplicities)/dⁿ. Levels wider than
/// `cfg.cap` are subsampled uniformly with a generator seeded from
/// `cfg.rng_seed` and the level index, so the result does not depend on
/// scheduling.
pub fn canonical_measure_approx(
    f: &RationalMapK,
    z0: &BerkPoint,
    cfg: &MeasureConfig,
) -> Result<WeightedPointSet> {
    if cfg.depth == 0 {
        return Err(Error::Config("depth must be at least 1".into()));
    }
    if is_exceptional(f, z0)? {
        return Err(Error::ExceptionalSeed(z0.to_string()));
    }
    let d = f.degree() as i128;
    let mut level: Vec<(BerkPoint, Mass)> = vec![(z0.clone(), Mass::from_integer(1))];
    let mut stochastic = false;
    for step in 0..cfg.depth {
        let children = expand(f, &level, cfg)?;
        let mut next: Vec<(BerkPoint, Mass)> = children
            .into_iter()
            .flatten()
            .map(|(p, m, w)| (p, w * Mass::new(m as i128, d)))
            .collect();
        if next.len() > cfg.cap {
            stochastic = true;
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed.wrapping_add(step as u64));
            let mut keep = index::sample(&mut rng, next.len(), cfg.cap).into_vec();
            keep.sort_unstable();
            let picked: Vec<(BerkPoint, Mass)> =
                keep.into_iter().map(|i| next[i].clone()).collect();
            let total: Mass = picked.iter().map(|(_, m)| *m).sum();
            next = picked.into_iter().map(|(p, m)| (p, m / total)).collect();
        }
        level = next;
    }
    Ok(WeightedPointSet {
        points: level,
        depth: cfg.depth,
        seed: z0.clone(),
        stochastic,
        rng_seed: cfg.rng_seed,
    })
}

type Children = Vec<(BerkPoint, usize, Mass)>;

#[cfg(feature = "parallel")]
fn expand(f: &RationalMapK, level: &[(BerkPoint, Mass)], cfg: &MeasureConfig) -> Result<Vec<Children>> {
    use rayon::prelude::*;
    level
        .par_iter()
        .map(|(p, w)| children_of(f, p, *w, cfg))
        .collect()
}

#[cfg(not(feature = "parallel"))]
fn expand(f: &RationalMapK, level: &[(BerkPoint, Mass)], cfg: &MeasureConfig) -> Result<Vec<Children>> {
    level
        .iter()
        .map(|(p, w)| children_of(f, p, *w, cfg))
        .collect()
}

fn children_of(f: &RationalMapK, p: &BerkPoint, w: Mass, cfg: &MeasureConfig) -> Result<Children> {
    Ok(preimages_with(f, p, cfg.precision, &cfg.series)?
        .into_iter()
        .map(|(q, m)| (q, m, w))
        .collect())
}

/// The join-closure of the sample, rooted at the join of all its points.
pub fn julia_span(sample: &WeightedPointSet) -> Result<JoinTree> {
    let pts: Vec<BerkPoint> = sample.points.iter().map(|(p, _)| p.clone()).collect();
    JoinTree::build(&pts)
}
