//! Browser bindings for the demo page in `www/`.
//!
//! Every export returns a JSON string; the page parses it and draws on a
//! canvas. The plain functions in [`demo`] carry the logic so they can be
//! tested natively.

use wasm_bindgen::prelude::*;

pub mod demo {
    use num_complex::Complex64;
    use serde_json::{json, Value};

    use nadegen::berkovich::{BerkPoint, JoinTree};
    use nadegen::complexverify::{mu_t_sample, SampleConfig};
    use nadegen::dynamics::{canonical_measure_approx, julia_span, quadratic, MeasureConfig};
    use nadegen::json as wire;
    use nadegen::limits::{default_seed, limit_measure, LimitConfig};

    const MAX_COMPLEX_DEPTH: usize = 14;
    const MAX_TOWER: usize = 5;
    const MAX_SPAN_DEPTH: usize = 7;

    fn mass(m: nadegen::dynamics::Mass) -> f64 {
        *m.numer() as f64 / *m.denom() as f64
    }

    /// Backward orbit of `2` under `(z² + 1)/t` at a complex parameter.
    pub fn complex_sample(t_re: f64, t_im: f64, depth: usize) -> Result<String, String> {
        let t = Complex64::new(t_re, t_im);
        if t.norm() == 0.0 {
            return Err("t must be nonzero".into());
        }
        let f = quadratic::example_map();
        let cfg = SampleConfig::with_depth(depth.clamp(1, MAX_COMPLEX_DEPTH));
        let s = mu_t_sample(&f, t, Some(Complex64::new(2.0, 0.0)), &cfg).map_err(|e| e.to_string())?;
        let points: Vec<Value> = s
            .points
            .iter()
            .map(|(z, m)| match z {
                Some(z) => json!([z.re, z.im, mass(*m)]),
                None => json!(["inf", mass(*m)]),
            })
            .collect();
        Ok(json!({"t": [t.re, t.im], "depth": s.depth, "stochastic": s.stochastic, "points": points})
            .to_string())
    }

    /// Limit measure on the tower model of height `k`.
    pub fn tower_limit(k: usize) -> Result<String, String> {
        let k = k.min(MAX_TOWER);
        let f = quadratic::example_map();
        let x = quadratic::tower_model(k).map_err(|e| e.to_string())?;
        let rho = limit_measure(&f, &x, &LimitConfig::with_depth(k + 2)).map_err(|e| e.to_string())?;
        let components: Vec<&str> = x.divisors().iter().map(|d| d.name.as_str()).collect();
        Ok(json!({
            "k": k,
            "components": components,
            "dual_graph": x.dual_graph_dot(),
            "measure": wire::measure_to_json(&rho, &x),
        })
        .to_string())
    }

    /// Span of the backward orbit of the default seed, laid out for drawing:
    /// `x` in leaf order, `q` the radius exponent (type-1 leaves get `null`).
    pub fn julia_span_layout(depth: usize) -> Result<String, String> {
        let f = quadratic::example_map();
        let cfg = MeasureConfig::with_depth(depth.clamp(1, MAX_SPAN_DEPTH));
        let sample = canonical_measure_approx(&f, &default_seed(), &cfg).map_err(|e| e.to_string())?;
        let tree = julia_span(&sample).map_err(|e| e.to_string())?;
        let xs = leaf_order(&tree);
        let vertices: Vec<Value> = tree
            .vertices()
            .iter()
            .enumerate()
            .map(|(v, p)| {
                let q = p.as_disk().map(|d| {
                    let q = d.q();
                    *q.numer() as f64 / *q.denom() as f64
                });
                json!({
                    "x": xs[v],
                    "q": q,
                    "parent": tree.parent(v),
                    "label": if p.is_type1() { String::new() } else { p.to_string() },
                })
            })
            .collect();
        let branch = tree.branch_vertices();
        Ok(json!({
            "depth": cfg.depth,
            "vertices": vertices,
            "branch": branch,
            "dot": tree.to_dot(&|p: &BerkPoint| !p.is_type1() && branch.iter().any(|&b| tree.vertices()[b] == *p)),
        })
        .to_string())
    }

    /// Leaves get consecutive positions; inner vertices sit at the mean of
    /// their children.
    fn leaf_order(tree: &JoinTree) -> Vec<f64> {
        fn visit(tree: &JoinTree, v: usize, next: &mut f64, xs: &mut [f64]) {
            let cs = tree.children(v);
            if cs.is_empty() {
                xs[v] = *next;
                *next += 1.0;
                return;
            }
            for &c in cs {
                visit(tree, c, next, xs);
            }
            xs[v] = cs.iter().map(|&c| xs[c]).sum::<f64>() / cs.len() as f64;
        }
        let mut xs = vec![0.0; tree.len()];
        let mut next = 0.0;
        visit(tree, tree.root(), &mut next, &mut xs);
        xs
    }

    #[cfg(test)]
    mod tests {
        use super::*;

        #[test]
        fn complex_sample_has_full_mass() {
            let v: Value = serde_json::from_str(&complex_sample(0.01, 0.0, 6).unwrap()).unwrap();
            let pts = v["points"].as_array().unwrap();
            assert_eq!(pts.len(), 64);
            let total: f64 = pts.iter().map(|p| p.as_array().unwrap().last().unwrap().as_f64().unwrap()).sum();
            assert!((total - 1.0).abs() < 1e-12);
            assert!(complex_sample(0.0, 0.0, 3).is_err());
        }

        #[test]
        fn tower_limit_atoms() {
            let v: Value = serde_json::from_str(&tower_limit(2).unwrap()).unwrap();
            let atoms = v["measure"]["atoms"].as_array().unwrap();
            assert_eq!(atoms.len(), 8);
            assert!(atoms.iter().all(|a| a["mass"] == json!([1, 8])));
            assert_eq!(v["components"].as_array().unwrap().len(), 7);
        }

        #[test]
        fn span_layout_is_a_tree() {
            let v: Value = serde_json::from_str(&julia_span_layout(3).unwrap()).unwrap();
            let vs = v["vertices"].as_array().unwrap();
            let roots = vs.iter().filter(|x| x["parent"].is_null()).count();
            assert_eq!(roots, 1);
            let leaves = vs.iter().filter(|x| x["q"].is_null()).count();
            assert_eq!(leaves, 8);
            for x in vs {
                if let (Some(p), Some(q)) = (x["parent"].as_u64(), x["q"].as_f64()) {
                    assert!(vs[p as usize]["q"].as_f64().unwrap() < q);
                }
            }
        }
    }
}

#[wasm_bindgen(js_name = complexSample)]
pub fn complex_sample(t_re: f64, t_im: f64, depth: usize) -> Result<String, JsValue> {
    demo::complex_sample(t_re, t_im, depth).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = towerLimit)]
pub fn tower_limit(k: usize) -> Result<String, JsValue> {
    demo::tower_limit(k).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = juliaSpan)]
pub fn julia_span_layout(depth: usize) -> Result<String, JsValue> {
    demo::julia_span_layout(depth).map_err(|e| JsValue::from_str(&e))
}
