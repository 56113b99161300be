//! Labelled weighted graphs with phase weights on the edges.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::wrap_angle;

/// Weights closer than this to `0 (mod 2π)` are rejected.
pub const ZERO_WEIGHT_TOLERANCE: f64 = 1e-12;

/// Undirected edge between vertex positions `a < b`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Edge {
    pub a: usize,
    pub b: usize,
    pub weight: f64,
}

/// Simple undirected graph with unique string labels and weights in `(-π, π]`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct WeightedGraph {
    vertices: Vec<String>,
    edges: Vec<Edge>,
}

impl WeightedGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_vertices<S: AsRef<str>>(labels: &[S]) -> Result<Self> {
        let mut g = Self::new();
        for l in labels {
            g.add_vertex(l.as_ref())?;
        }
        Ok(g)
    }

    /// Path `labels[0] - labels[1] - …` with `weights[k]` on the k-th link.
    pub fn path<S: AsRef<str>>(labels: &[S], weights: &[f64]) -> Result<Self> {
        if weights.len() + 1 != labels.len() && !(labels.is_empty() && weights.is_empty()) {
            return Err(Error::IndexOutOfRange { index: weights.len(), len: labels.len().saturating_sub(1) });
        }
        let mut g = Self::with_vertices(labels)?;
        for (k, &w) in weights.iter().enumerate() {
            g.add_edge(k, k + 1, w)?;
        }
        Ok(g)
    }

    pub fn add_vertex(&mut self, label: &str) -> Result<usize> {
        if self.index_of(label).is_some() {
            return Err(Error::DuplicateVertex(label.to_string()));
        }
        self.vertices.push(label.to_string());
        Ok(self.vertices.len() - 1)
    }

    /// Add an edge; the weight is reduced into `(-π, π]`.
    pub fn add_edge(&mut self, a: usize, b: usize, weight: f64) -> Result<()> {
        let n = self.vertices.len();
        for v in [a, b] {
            if v >= n {
                return Err(Error::IndexOutOfRange { index: v, len: n });
            }
        }
        if a == b {
            return Err(Error::SelfLoop(a));
        }
        if !weight.is_finite() {
            return Err(Error::NonFinite);
        }
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        if self.edges.iter().any(|e| e.a == a && e.b == b) {
            return Err(Error::DuplicateEdge(a, b));
        }
        let w = wrap_angle(weight);
        if w.abs() < ZERO_WEIGHT_TOLERANCE {
            return Err(Error::ZeroWeight(a, b));
        }
        self.edges.push(Edge { a, b, weight: w });
        Ok(())
    }

    pub fn add_edge_by_label(&mut self, a: &str, b: &str, weight: f64) -> Result<()> {
        let ia = self.require(a)?;
        let ib = self.require(b)?;
        self.add_edge(ia, ib, weight)
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn label(&self, v: usize) -> &str {
        &self.vertices[v]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.vertices.iter().position(|l| l == label)
    }

    pub fn require(&self, label: &str) -> Result<usize> {
        self.index_of(label).ok_or_else(|| Error::UnknownVertex(label.to_string()))
    }

    pub fn weight(&self, a: usize, b: usize) -> Option<f64> {
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        self.edges.iter().find(|e| e.a == a && e.b == b).map(|e| e.weight)
    }

    /// Neighbours of `v` with edge weights, ordered by vertex position.
    pub fn neighbors(&self, v: usize) -> Vec<(usize, f64)> {
        let mut out: Vec<(usize, f64)> = self
            .edges
            .iter()
            .filter_map(|e| {
                if e.a == v {
                    Some((e.b, e.weight))
                } else if e.b == v {
                    Some((e.a, e.weight))
                } else {
                    None
                }
            })
            .collect();
        out.sort_by_key(|p| p.0);
        out
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|e| e.a == v || e.b == v).count()
    }

    /// True when every component is a simple path.
    pub fn is_linear_forest(&self) -> bool {
        let n = self.vertices.len();
        if (0..n).any(|v| self.degree(v) > 2) {
            return false;
        }
        // Acyclic iff |E| = |V| - #components.
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for e in &self.edges {
            let (ra, rb) = (find(&mut parent, e.a), find(&mut parent, e.b));
            if ra == rb {
                return false;
            }
            parent[ra] = rb;
        }
        true
    }

    /// Copy of the graph with vertex `v` and its edges removed.
    pub fn without_vertex(&self, v: usize) -> Self {
        let vertices = self
            .vertices
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != v)
            .map(|(_, l)| l.clone())
            .collect();
        let shift = |x: usize| if x > v { x - 1 } else { x };
        let edges = self
            .edges
            .iter()
            .filter(|e| e.a != v && e.b != v)
            .map(|e| Edge { a: shift(e.a), b: shift(e.b), weight: e.weight })
            .collect();
        Self { vertices, edges }
    }

    /// Disjoint union; `other`'s vertices are appended.
    pub fn disjoint_union(&self, other: &Self) -> Result<Self> {
        let mut g = self.clone();
        let off = g.vertices.len();
        for l in &other.vertices {
            if g.index_of(l).is_some() {
                return Err(Error::LabelClash(l.clone()));
            }
            g.vertices.push(l.clone());
        }
        g.edges.extend(other.edges.iter().map(|e| Edge { a: e.a + off, b: e.b + off, weight: e.weight }));
        Ok(g)
    }

    pub fn relabel(&mut self, v: usize, label: &str) -> Result<()> {
        if let Some(i) = self.index_of(label) {
            if i != v {
                return Err(Error::DuplicateVertex(label.to_string()));
            }
        }
        self.vertices[v] = label.to_string();
        Ok(())
    }
}
