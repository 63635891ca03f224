//! Simple undirected graphs with non-negative edge weights and the edge-list
//! text format: a header `n m`, then `m` lines `u v [w]` with one-based
//! vertices and weight 1 when omitted.

use std::fmt::Write as _;

use rand::Rng;

use crate::error::{invalid, Error, Result};

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Graph {
    n: usize,
    /// Zero-based endpoints with `u < v`.
    edges: Vec<(usize, usize)>,
    weights: Vec<f64>,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Graph { n, edges: Vec::new(), weights: Vec::new() }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v, 1.0)?;
        }
        Ok(g)
    }

    /// Adds `{u, v}` (zero-based). Self-loops, duplicates and negative
    /// weights are rejected.
    pub fn add_edge(&mut self, u: usize, v: usize, w: f64) -> Result<()> {
        if u >= self.n || v >= self.n {
            return Err(invalid(format!("edge ({u}, {v}) outside 0..{}", self.n)));
        }
        if u == v {
            return Err(invalid(format!("self-loop at vertex {u}")));
        }
        if !(w >= 0.0) || !w.is_finite() {
            return Err(invalid(format!("edge weight {w} must be finite and non-negative")));
        }
        let e = (u.min(v), u.max(v));
        if self.edges.contains(&e) {
            return Err(invalid(format!("duplicate edge ({u}, {v})")));
        }
        self.edges.push(e);
        self.weights.push(w);
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&(u.min(v), u.max(v)))
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        adj
    }

    /// No edge has both ends in `set`.
    pub fn is_independent(&self, set: &[bool]) -> bool {
        set.len() == self.n && self.edges.iter().all(|&(u, v)| !(set[u] && set[v]))
    }

    /// Every edge has an end in `set`.
    pub fn is_vertex_cover(&self, set: &[bool]) -> bool {
        set.len() == self.n && self.edges.iter().all(|&(u, v)| set[u] || set[v])
    }

    /// Subgraph induced by `vertices`; vertex `i` of the result is `vertices[i]`.
    pub fn induced(&self, vertices: &[usize]) -> Graph {
        let mut pos = vec![usize::MAX; self.n];
        for (i, &v) in vertices.iter().enumerate() {
            pos[v] = i;
        }
        let mut g = Graph::new(vertices.len());
        for (&(u, v), &w) in self.edges.iter().zip(&self.weights) {
            if pos[u] != usize::MAX && pos[v] != usize::MAX {
                g.edges.push((pos[u].min(pos[v]), pos[u].max(pos[v])));
                g.weights.push(w);
            }
        }
        g
    }

    /// `G(n, p)` random graph with unit weights.
    pub fn random<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Self {
        let mut g = Graph::new(n);
        for u in 0..n {
            for v in u + 1..n {
                if rng.random_bool(p) {
                    g.edges.push((u, v));
                    g.weights.push(1.0);
                }
            }
        }
        g
    }

    /// Parses the edge-list format.
    pub fn parse_edge_list(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| Error::Parse("missing header line \"n m\"".into()))?;
        let nums: Vec<&str> = header.split_whitespace().collect();
        if nums.len() != 2 {
            return Err(Error::Parse(format!("header {header:?} must be \"n m\"")));
        }
        let n: usize = parse_num(nums[0])?;
        let m: usize = parse_num(nums[1])?;
        let mut g = Graph::new(n);
        for (k, line) in lines.enumerate() {
            let f: Vec<&str> = line.split_whitespace().collect();
            if !(2..=3).contains(&f.len()) {
                return Err(Error::Parse(format!("edge line {line:?} must be \"u v [w]\"")));
            }
            let u: usize = parse_num(f[0])?;
            let v: usize = parse_num(f[1])?;
            let w: f64 = if f.len() == 3 { parse_num(f[2])? } else { 1.0 };
            if u == 0 || v == 0 {
                return Err(Error::Parse(format!("edge {}: vertices are one-based", k + 1)));
            }
            g.add_edge(u - 1, v - 1, w).map_err(|e| Error::Parse(e.to_string()))?;
        }
        if g.edges.len() != m {
            return Err(Error::Parse(format!("header declares {m} edges, found {}", g.edges.len())));
        }
        Ok(g)
    }

    pub fn to_edge_list(&self) -> String {
        let mut s = format!("{} {}\n", self.n, self.edges.len());
        for (&(u, v), w) in self.edges.iter().zip(&self.weights) {
            writeln!(s, "{} {} {}", u + 1, v + 1, w).expect("writing to a String");
        }
        s
    }
}

fn parse_num<T: std::str::FromStr>(s: &str) -> Result<T> {
    s.parse().map_err(|_| Error::Parse(format!("bad number {s:?}")))
}
