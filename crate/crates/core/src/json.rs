//! JSON forms of series, points, maps, models and measures.
//!
//! * series: `{"e": 2, "terms": [[num, den, re, im], ...], "prec": [num, den] | null}`;
//!   a bare number is accepted as a real constant on input;
//! * point: `{"type": 1, "value": series | "inf"}` or
//!   `{"type": 2, "center": series, "q": [num, den]}`;
//! * map: `{"numerator": [series, ...], "denominator": [series, ...]}`, ascending powers of `z`;
//! * model: `{"divisors": [{"name": str, "eta": point, "mult": int}, ...]}`;
//! * label: `[re, im]` or `"inf"`; mass: `[num, den]`.
//!
//! Object keys are emitted in sorted order, so equal values serialize to equal bytes.

use num_complex::Complex64;
use serde_json::{json, Value};

use crate::berkovich::{BerkPoint, Disk, JoinTree, P1Label};
use crate::dynamics::{Mass, RationalMapK, WeightedPointSet};
use crate::error::{Error, Result};
use crate::limits::AtomicMeasure;
use crate::puiseux::{Exponent, PuiseuxSeries};
use crate::sncmodel::{Atom, Divisor, ReductionTarget, SncModel};

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn fraction(v: &Value, what: &str) -> Result<Exponent> {
    let arr = v
        .as_array()
        .filter(|a| a.len() == 2)
        .ok_or_else(|| parse_err(format!("{what}: expected [num, den]")))?;
    let n = arr[0].as_i64().ok_or_else(|| parse_err(format!("{what}: numerator is not an integer")))?;
    let d = arr[1].as_i64().ok_or_else(|| parse_err(format!("{what}: denominator is not an integer")))?;
    if d <= 0 {
        return Err(parse_err(format!("{what}: denominator must be positive")));
    }
    Ok(Exponent::new(n, d))
}

fn fraction_json(q: Exponent) -> Value {
    json!([q.numer(), q.denom()])
}

/// Integers beyond `i64` are written as decimal strings.
fn big(x: i128) -> Value {
    i64::try_from(x).map(Value::from).unwrap_or_else(|_| Value::String(x.to_string()))
}

pub fn mass_json(m: Mass) -> Value {
    json!([big(*m.numer()), big(*m.denom())])
}

pub fn series_to_json(s: &PuiseuxSeries) -> Value {
    let terms: Vec<Value> = s
        .terms()
        .map(|(e, c)| json!([e.numer(), e.denom(), c.re, c.im]))
        .collect();
    json!({
        "e": s.ramification(),
        "terms": terms,
        "prec": s.precision().map(fraction_json),
    })
}

pub fn series_from_json(v: &Value) -> Result<PuiseuxSeries> {
    if let Some(x) = v.as_f64() {
        return Ok(PuiseuxSeries::real(x));
    }
    let obj = v.as_object().ok_or_else(|| parse_err("series: expected an object or a number"))?;
    if let Some(e) = obj.get("e") {
        if e.as_i64().is_none_or(|e| e < 1) {
            return Err(parse_err("series: \"e\" must be a positive integer"));
        }
    }
    let mut terms = Vec::new();
    for t in obj.get("terms").and_then(Value::as_array).into_iter().flatten() {
        let a = t
            .as_array()
            .filter(|a| a.len() == 4)
            .ok_or_else(|| parse_err("series term: expected [num, den, re, im]"))?;
        let e = fraction(&json!([a[0], a[1]]), "series exponent")?;
        let re = a[2].as_f64().ok_or_else(|| parse_err("series term: re is not a number"))?;
        let im = a[3].as_f64().ok_or_else(|| parse_err("series term: im is not a number"))?;
        terms.push((e, Complex64::new(re, im)));
    }
    let prec = match obj.get("prec") {
        None | Some(Value::Null) => None,
        Some(p) => Some(fraction(p, "series precision")?),
    };
    Ok(PuiseuxSeries::from_terms(terms, prec))
}

pub fn disk_to_json(d: &Disk) -> Value {
    json!({"type": 2, "center": series_to_json(d.center()), "q": fraction_json(d.q())})
}

pub fn point_to_json(p: &BerkPoint) -> Value {
    match p {
        BerkPoint::Classical(x) => json!({"type": 1, "value": series_to_json(x)}),
        BerkPoint::Infinity => json!({"type": 1, "value": "inf"}),
        BerkPoint::Disk(d) => disk_to_json(d),
    }
}

pub fn point_from_json(v: &Value) -> Result<BerkPoint> {
    match v.get("type").and_then(Value::as_i64) {
        Some(1) => match v.get("value") {
            Some(Value::String(s)) if s == "inf" => Ok(BerkPoint::Infinity),
            Some(x) => Ok(BerkPoint::Classical(series_from_json(x)?)),
            None => Err(parse_err("type-1 point: missing \"value\"")),
        },
        Some(2) => {
            let c = v.get("center").ok_or_else(|| parse_err("type-2 point: missing \"center\""))?;
            let q = v.get("q").ok_or_else(|| parse_err("type-2 point: missing \"q\""))?;
            Ok(BerkPoint::Disk(Disk::new(&series_from_json(c)?, fraction(q, "q")?)))
        }
        _ => Err(parse_err("point: \"type\" must be 1 or 2")),
    }
}

pub fn disk_from_json(v: &Value) -> Result<Disk> {
    match point_from_json(v)? {
        BerkPoint::Disk(d) => Ok(d),
        p => Err(Error::NotType2(p.to_string())),
    }
}

pub fn map_to_json(f: &RationalMapK) -> Value {
    let side = |p: &crate::puiseux::SeriesPoly| -> Vec<Value> { p.coeffs().iter().map(series_to_json).collect() };
    json!({"numerator": side(f.numerator()), "denominator": side(f.denominator())})
}

pub fn map_from_json(v: &Value) -> Result<RationalMapK> {
    let side = |key: &str| -> Result<Vec<PuiseuxSeries>> {
        v.get(key)
            .and_then(Value::as_array)
            .ok_or_else(|| parse_err(format!("map: missing array \"{key}\"")))?
            .iter()
            .map(series_from_json)
            .collect()
    };
    RationalMapK::new(side("numerator")?, side("denominator")?)
}

pub fn model_to_json(m: &SncModel) -> Value {
    let divisors: Vec<Value> = m
        .divisors()
        .iter()
        .map(|d| json!({"name": d.name, "eta": disk_to_json(&d.eta), "mult": d.mult}))
        .collect();
    json!({"divisors": divisors})
}

/// Parses and validates a model.
pub fn model_from_json(v: &Value) -> Result<SncModel> {
    let arr = v
        .get("divisors")
        .and_then(Value::as_array)
        .ok_or_else(|| parse_err("model: missing array \"divisors\""))?;
    let mut divisors = Vec::with_capacity(arr.len());
    for (k, d) in arr.iter().enumerate() {
        let name = d
            .get("name")
            .and_then(Value::as_str)
            .map(str::to_string)
            .unwrap_or_else(|| format!("E{k}"));
        let eta = disk_from_json(d.get("eta").ok_or_else(|| parse_err(format!("divisor {name}: missing \"eta\"")))?)?;
        let mult = match d.get("mult") {
            None => *eta.q().denom() as u32,
            Some(m) => m
                .as_u64()
                .and_then(|m| u32::try_from(m).ok())
                .ok_or_else(|| parse_err(format!("divisor {name}: \"mult\" must be a positive integer")))?,
        };
        divisors.push(Divisor::new(name, eta, mult));
    }
    SncModel::new(divisors)
}

pub fn label_to_json(l: &P1Label) -> Value {
    match l {
        P1Label::Finite(c) => json!([round(c.re), round(c.im)]),
        P1Label::Infinity => json!("inf"),
    }
}

/// Labels are known to about `1e-9`; rounding keeps the output stable.
fn round(x: f64) -> f64 {
    let r = (x * 1e9).round() / 1e9;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

pub fn target_to_json(t: &ReductionTarget, model: &SncModel) -> Value {
    match t {
        ReductionTarget::Generic(i) => json!({"kind": "generic", "component": model.name(*i)}),
        ReductionTarget::Smooth(i, l) => {
            json!({"kind": "smooth", "component": model.name(*i), "label": label_to_json(l)})
        }
        ReductionTarget::Node(i, j) => json!({
            "kind": "node",
            "components": [model.name(*i), model.name(*j)],
            "labels": [label_to_json(&model.node_coordinate(*i, *j)), label_to_json(&model.node_coordinate(*j, *i))],
        }),
    }
}

pub fn atoms_to_json(atoms: &[Atom], model: &SncModel) -> Value {
    Value::Array(
        atoms
            .iter()
            .map(|a| json!({"target": target_to_json(&a.target, model), "mass": mass_json(a.mass)}))
            .collect(),
    )
}

pub fn measure_to_json(rho: &AtomicMeasure, model: &SncModel) -> Value {
    json!({
        "atoms": atoms_to_json(&rho.atoms, model),
        "depth": rho.depth,
        "seed": point_to_json(&rho.seed),
        "stochastic": rho.stochastic,
        "rng_seed": rho.rng_seed,
        "resolution": mass_json(rho.resolution),
        "warnings": rho.warnings,
    })
}

pub fn sample_to_json(s: &WeightedPointSet) -> Value {
    let points: Vec<Value> = s
        .points
        .iter()
        .map(|(p, m)| json!({"point": point_to_json(p), "mass": mass_json(*m)}))
        .collect();
    json!({
        "points": points,
        "depth": s.depth,
        "seed": point_to_json(&s.seed),
        "stochastic": s.stochastic,
        "rng_seed": s.rng_seed,
    })
}

pub fn tree_to_json(tree: &JoinTree) -> Value {
    let vertices: Vec<Value> = tree
        .vertices()
        .iter()
        .enumerate()
        .map(|(v, p)| {
            json!({
                "point": point_to_json(p),
                "parent": tree.parent(v),
                "input": tree.is_input(v),
            })
        })
        .collect();
    json!({"root": tree.root(), "vertices": vertices})
}

pub fn parse(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| parse_err(e.to_string()))
}
