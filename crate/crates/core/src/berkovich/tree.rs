use std::fmt::Write as _;

use super::{join, tangent_direction, BerkPoint, P1Label};
use crate::error::{Error, Result};

/// The join-closure of a finite point set, as a tree rooted at the join of
/// everything (or at `∞` when `∞` is one of the points).
///
/// Vertices are the input points together with all pairwise joins; each
/// vertex's parent is the smallest vertex strictly above it.
#[derive(Clone, Debug)]
pub struct JoinTree {
    vertices: Vec<BerkPoint>,
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
    input: Vec<bool>,
    root: usize,
}

impl JoinTree {
    /// Builds the tree by splitting the point set along tangent directions
    /// at its join, recursively.
    pub fn build(points: &[BerkPoint]) -> Result<JoinTree> {
        let mut distinct: Vec<BerkPoint> = Vec::new();
        for p in points {
            if !distinct.iter().any(|q| q == p) {
                distinct.push(p.clone());
            }
        }
        if distinct.len() < 2 {
            return Err(Error::SingletonSpan);
        }
        let mut tree = JoinTree {
            vertices: Vec::new(),
            parent: Vec::new(),
            children: Vec::new(),
            input: Vec::new(),
            root: 0,
        };
        let at_infinity = distinct.iter().any(|p| matches!(p, BerkPoint::Infinity));
        let finite: Vec<BerkPoint> = distinct
            .into_iter()
            .filter(|p| !matches!(p, BerkPoint::Infinity))
            .collect();
        if at_infinity {
            let top = tree.push(BerkPoint::Infinity, true, None);
            tree.root = top;
            tree.grow(finite, Some(top));
        } else {
            tree.root = tree.grow(finite, None);
        }
        Ok(tree)
    }

    fn push(&mut self, p: BerkPoint, input: bool, parent: Option<usize>) -> usize {
        let id = self.vertices.len();
        self.vertices.push(p);
        self.parent.push(parent);
        self.children.push(Vec::new());
        self.input.push(input);
        if let Some(par) = parent {
            self.children[par].push(id);
        }
        id
    }

    /// Inserts the subtree spanned by `points` (nonempty, finite, distinct)
    /// below `parent` and returns its root.
    fn grow(&mut self, points: Vec<BerkPoint>, parent: Option<usize>) -> usize {
        if points.len() == 1 {
            let p = points.into_iter().next().unwrap();
            return self.push(p, true, parent);
        }
        let top = points[1..].iter().fold(points[0].clone(), |acc, p| join(&acc, p));
        let is_input = points.contains(&top);
        let id = self.push(top.clone(), is_input, parent);
        let base = top
            .as_disk()
            .expect("join of two distinct finite points is a disk")
            .clone();
        let mut groups: Vec<(P1Label, Vec<BerkPoint>)> = Vec::new();
        for p in points.into_iter().filter(|p| *p != top) {
            let label = tangent_direction(&base, &p)
                .expect("points below their join")
                .label;
            match groups.iter_mut().find(|(l, _)| l.approx_eq(&label)) {
                Some((_, g)) => g.push(p),
                None => groups.push((label, vec![p])),
            }
        }
        groups.sort_by(|a, b| {
            a.0.sort_key()
                .partial_cmp(&b.0.sort_key())
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        for (_, g) in groups {
            self.grow(g, Some(id));
        }
        id
    }

    pub fn vertices(&self) -> &[BerkPoint] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent[v]
    }

    pub fn children(&self, v: usize) -> &[usize] {
        &self.children[v]
    }

    /// Whether the vertex was one of the input points.
    pub fn is_input(&self, v: usize) -> bool {
        self.input[v]
    }

    /// `(parent, child)` pairs.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.len())
            .filter_map(|v| self.parent[v].map(|p| (p, v)))
            .collect()
    }

    /// Vertices where at least two branches of the point set meet.
    pub fn branch_vertices(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&v| self.children[v].len() >= 2)
            .collect()
    }

    /// Vertices without children.
    pub fn leaves(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&v| self.children[v].is_empty())
            .collect()
    }

    /// Whether `m` lies on the span: the union of the arcs from every vertex
    /// up to the root.
    pub fn span_contains(&self, m: &BerkPoint) -> bool {
        let root = &self.vertices[self.root];
        m.leq(root) && self.vertices.iter().any(|v| v.leq(m))
    }

    /// Graphviz rendering; vertices for which `highlight` holds are drawn
    /// filled. Type-1 leaves are unlabeled dots.
    pub fn to_dot(&self, highlight: &dyn Fn(&BerkPoint) -> bool) -> String {
        let mut out = String::from("graph span {\n  node [shape=ellipse];\n");
        for (i, v) in self.vertices.iter().enumerate() {
            let label = if v.is_type1() {
                String::new()
            } else {
                v.to_string().replace('"', "'")
            };
            let style = if highlight(v) {
                ", style=filled, fillcolor=lightblue"
            } else if v.is_type1() {
                ", shape=point"
            } else {
                ""
            };
            let _ = writeln!(out, "  v{i} [label=\"{label}\"{style}];");
        }
        for (p, c) in self.edges() {
            let _ = writeln!(out, "  v{p} -- v{c};");
        }
        out.push_str("}\n");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::puiseux::{Exponent, PuiseuxSeries};
    use num_complex::Complex64;

    fn classical(re: f64, im: f64) -> BerkPoint {
        BerkPoint::classical(PuiseuxSeries::constant(Complex64::new(re, im)))
    }

    #[test]
    fn two_points_give_a_path() {
        let t = JoinTree::build(&[classical(0.0, 1.0), classical(0.0, -1.0)]).unwrap();
        assert_eq!(t.len(), 3);
        assert_eq!(t.vertices()[t.root()], BerkPoint::gauss());
        assert_eq!(t.branch_vertices(), vec![t.root()]);
    }

    #[test]
    fn singleton_rejected() {
        let p = classical(1.0, 0.0);
        assert_eq!(JoinTree::build(&[p.clone(), p]).unwrap_err(), Error::SingletonSpan);
    }

    #[test]
    fn nested_joins() {
        let t_ = PuiseuxSeries::t();
        let pts = [
            BerkPoint::classical(PuiseuxSeries::zero()),
            BerkPoint::classical(t_.clone()),
            BerkPoint::classical(PuiseuxSeries::one()),
        ];
        let tree = JoinTree::build(&pts).unwrap();
        // Gauss point, ζ(0, 1), and three leaves
        assert_eq!(tree.len(), 5);
        assert_eq!(tree.branch_vertices().len(), 2);
        let mid = BerkPoint::disk(&PuiseuxSeries::zero(), Exponent::new(1, 2));
        assert!(tree.span_contains(&mid));
        let off = BerkPoint::disk(&PuiseuxSeries::real(3.0), Exponent::new(1, 1));
        assert!(!tree.span_contains(&off));
        assert!(tree.to_dot(&|_| false).contains("--"));
    }
}
