//! Optimal recombination for maximum independent set and minimum vertex
//! cover: the best offspring that takes every gene from one of its two
//! parents, found through a minimum cut on the bipartite graph spanned by the
//! genes where the parents differ.

use std::collections::VecDeque;

use crate::error::{invalid, Error, Result};
use crate::graph::Graph;

/// Dense max-flow network solved by shortest augmenting paths.
#[derive(Debug, Clone)]
struct FlowNetwork {
    cap: Vec<Vec<u64>>,
}

impl FlowNetwork {
    fn new(n: usize) -> Self {
        FlowNetwork { cap: vec![vec![0; n]; n] }
    }

    fn add(&mut self, u: usize, v: usize, c: u64) {
        self.cap[u][v] += c;
    }

    fn reachable(&self, s: usize) -> (Vec<bool>, Vec<usize>) {
        let n = self.cap.len();
        let mut seen = vec![false; n];
        let mut prev = vec![usize::MAX; n];
        let mut queue = VecDeque::from([s]);
        seen[s] = true;
        while let Some(u) = queue.pop_front() {
            for v in 0..n {
                if !seen[v] && self.cap[u][v] > 0 {
                    seen[v] = true;
                    prev[v] = u;
                    queue.push_back(v);
                }
            }
        }
        (seen, prev)
    }

    /// Maximum flow value; `cap` is left as the residual network.
    fn max_flow(&mut self, s: usize, t: usize) -> u64 {
        let mut total = 0;
        loop {
            let (seen, prev) = self.reachable(s);
            if !seen[t] {
                return total;
            }
            let mut push = u64::MAX;
            let mut v = t;
            while v != s {
                push = push.min(self.cap[prev[v]][v]);
                v = prev[v];
            }
            let mut v = t;
            while v != s {
                self.cap[prev[v]][v] -= push;
                self.cap[v][prev[v]] += push;
                v = prev[v];
            }
            total += push;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteCover {
    /// Sorted vertices of a minimum vertex cover.
    pub cover: Vec<usize>,
    /// Size of a maximum matching, equal to the cover size.
    pub matching: usize,
}

/// Minimum vertex cover of a bipartite graph whose side `A` is marked by
/// `side_a`: source to `A` and `B` to sink with unit capacity, the edges
/// oriented `A → B` with capacity `n + 1`, and the cover read off the minimum
/// cut as `(A ∖ R) ∪ (B ∩ R)` where `R` is reachable from the source.
pub fn min_vertex_cover_bipartite(graph: &Graph, side_a: &[bool]) -> Result<BipartiteCover> {
    let n = graph.n();
    if side_a.len() != n {
        return Err(Error::LengthMismatch { expected: n, found: side_a.len() });
    }
    let (s, t) = (n, n + 1);
    let inf = n as u64 + 1;
    let mut net = FlowNetwork::new(n + 2);
    for &(u, v) in graph.edges() {
        match (side_a[u], side_a[v]) {
            (true, false) => net.add(u, v, inf),
            (false, true) => net.add(v, u, inf),
            _ => return Err(invalid(format!("edge ({u}, {v}) lies within one side"))),
        }
    }
    for (v, &in_a) in side_a.iter().enumerate() {
        if in_a {
            net.add(s, v, 1);
        } else {
            net.add(v, t, 1);
        }
    }
    let flow = net.max_flow(s, t) as usize;
    let (reach, _) = net.reachable(s);
    let cover: Vec<usize> = (0..n).filter(|&v| side_a[v] != reach[v]).collect();
    debug_assert_eq!(cover.len(), flow);
    debug_assert!(graph.edges().iter().all(|&(u, v)| cover.contains(&u) || cover.contains(&v)));
    Ok(BipartiteCover { cover, matching: flow })
}

/// Bipartite graph spanned by the positions where two independent-set
/// parents differ.
#[derive(Debug, Clone, PartialEq)]
pub struct DifferenceGraph {
    /// Original vertex of each subgraph vertex, increasing.
    pub vertices: Vec<usize>,
    pub graph: Graph,
    /// Subgraph vertex belongs to the first parent.
    pub side_a: Vec<bool>,
}

impl DifferenceGraph {
    /// Fails when an edge joins two genes of the same parent, which cannot
    /// happen for independent-set parents.
    pub fn new(graph: &Graph, p1: &[bool], p2: &[bool]) -> Result<Self> {
        check_lengths(graph, p1, p2)?;
        let vertices: Vec<usize> = (0..graph.n()).filter(|&v| p1[v] != p2[v]).collect();
        let sub = graph.induced(&vertices);
        let side_a: Vec<bool> = vertices.iter().map(|&v| p1[v]).collect();
        if let Some(&(u, v)) = sub.edges().iter().find(|&&(u, v)| side_a[u] == side_a[v]) {
            return Err(invalid(format!("vertices {} and {} of one parent are adjacent", vertices[u], vertices[v])));
        }
        Ok(DifferenceGraph { vertices, graph: sub, side_a })
    }

    pub fn min_cover(&self) -> Result<BipartiteCover> {
        min_vertex_cover_bipartite(&self.graph, &self.side_a)
    }

    /// Size of a maximum independent set within the vertices left `alive`.
    fn mis_size(&self, alive: &[bool]) -> Result<usize> {
        let keep: Vec<usize> = (0..alive.len()).filter(|&v| alive[v]).collect();
        let sub = self.graph.induced(&keep);
        let sides: Vec<bool> = keep.iter().map(|&v| self.side_a[v]).collect();
        Ok(keep.len() - min_vertex_cover_bipartite(&sub, &sides)?.matching)
    }

    /// A maximum independent set, lexicographically smallest when
    /// `prefer_out`, largest otherwise, as a mask over the subgraph.
    fn extreme_mis(&self, prefer_out: bool) -> Result<Vec<bool>> {
        let m = self.vertices.len();
        let adj = self.graph.adjacency();
        let mut alive = vec![true; m];
        let mut chosen = vec![false; m];
        let mut need = self.mis_size(&alive)?;
        for v in 0..m {
            if !alive[v] {
                continue;
            }
            let mut without = alive.clone();
            without[v] = false;
            let mut with = without.clone();
            for &w in &adj[v] {
                with[w] = false;
            }
            let take = if prefer_out {
                self.mis_size(&without)? < need
            } else {
                need >= 1 && self.mis_size(&with)? == need - 1
            };
            if take {
                chosen[v] = true;
                need -= 1;
                alive = with;
            } else {
                alive = without;
            }
        }
        debug_assert_eq!(need, 0);
        Ok(chosen)
    }
}

fn check_lengths(graph: &Graph, p1: &[bool], p2: &[bool]) -> Result<()> {
    for p in [p1, p2] {
        if p.len() != graph.n() {
            return Err(Error::LengthMismatch { expected: graph.n(), found: p.len() });
        }
    }
    Ok(())
}

fn mis_offspring(graph: &Graph, p1: &[bool], p2: &[bool], prefer_out: bool) -> Result<Vec<bool>> {
    let diff = DifferenceGraph::new(graph, p1, p2)?;
    let pick = diff.extreme_mis(prefer_out)?;
    let mut child: Vec<bool> = p1.iter().zip(p2).map(|(&a, &b)| a && b).collect();
    for (i, &v) in diff.vertices.iter().enumerate() {
        child[v] = pick[i];
    }
    debug_assert!(graph.is_independent(&child));
    Ok(child)
}

/// Largest independent set `S` with `S1 ∩ S2 ⊆ S ⊆ S1 ∪ S2` for independent
/// sets `p1`, `p2`; among optimal offspring the lexicographically smallest
/// indicator vector is returned.
pub fn optimal_recombination_mis(graph: &Graph, p1: &[bool], p2: &[bool]) -> Result<Vec<bool>> {
    check_lengths(graph, p1, p2)?;
    for (k, p) in [p1, p2].into_iter().enumerate() {
        if !graph.is_independent(p) {
            return Err(Error::InfeasibleParent(format!("parent {} is not an independent set", k + 1)));
        }
    }
    mis_offspring(graph, p1, p2, true)
}

/// Smallest vertex cover taking every gene from one of the covers `p1`,
/// `p2`, lexicographically smallest among optimal ones. Complements of covers
/// are independent sets, so this is the independent-set problem on the
/// complemented parents.
pub fn optimal_recombination_vc(graph: &Graph, p1: &[bool], p2: &[bool]) -> Result<Vec<bool>> {
    check_lengths(graph, p1, p2)?;
    for (k, p) in [p1, p2].into_iter().enumerate() {
        if !graph.is_vertex_cover(p) {
            return Err(Error::InfeasibleParent(format!("parent {} is not a vertex cover", k + 1)));
        }
    }
    let c1: Vec<bool> = p1.iter().map(|b| !b).collect();
    let c2: Vec<bool> = p2.iter().map(|b| !b).collect();
    let child: Vec<bool> = mis_offspring(graph, &c1, &c2, false)?.into_iter().map(|b| !b).collect();
    debug_assert!(graph.is_vertex_cover(&child));
    Ok(child)
}

/// Every position of `child` agrees with one of the parents.
pub fn transmits_genes(child: &[bool], p1: &[bool], p2: &[bool]) -> bool {
    child.len() == p1.len() && p1.len() == p2.len() && (0..child.len()).all(|j| child[j] == p1[j] || child[j] == p2[j])
}

/// Exhaustive search over all `2^|D|` gene-transmitting offspring. Returns
/// the feasible one of largest objective, the lexicographically smallest
/// among ties, or `None` if none is feasible.
pub fn brute_force_recombination(
    p1: &[bool],
    p2: &[bool],
    feasible: impl Fn(&[bool]) -> bool,
    objective: impl Fn(&[bool]) -> f64,
) -> Result<Option<Vec<bool>>> {
    if p1.len() != p2.len() {
        return Err(Error::LengthMismatch { expected: p1.len(), found: p2.len() });
    }
    let d: Vec<usize> = (0..p1.len()).filter(|&j| p1[j] != p2[j]).collect();
    if d.len() > 24 {
        return Err(Error::TooLarge(format!("{} differing genes; at most 24 are enumerated", d.len())));
    }
    let mut best: Option<(f64, Vec<bool>)> = None;
    let mut child = p1.to_vec();
    for bits in 0..1u32 << d.len() {
        for (i, &j) in d.iter().enumerate() {
            child[j] = bits >> i & 1 == 1;
        }
        if !feasible(&child) {
            continue;
        }
        let value = objective(&child);
        let better = match &best {
            None => true,
            Some((v, c)) => value > *v || (value == *v && child < *c),
        };
        if better {
            best = Some((value, child.clone()));
        }
    }
    Ok(best.map(|(_, c)| c))
}

fn size(x: &[bool]) -> f64 {
    x.iter().filter(|&&b| b).count() as f64
}

/// Brute-force oracle for the independent-set recombination.
pub fn brute_force_mis(graph: &Graph, p1: &[bool], p2: &[bool]) -> Result<Option<Vec<bool>>> {
    brute_force_recombination(p1, p2, |x| graph.is_independent(x), size)
}

/// Brute-force oracle for the vertex-cover recombination.
pub fn brute_force_vc(graph: &Graph, p1: &[bool], p2: &[bool]) -> Result<Option<Vec<bool>>> {
    brute_force_recombination(p1, p2, |x| graph.is_vertex_cover(x), |x| -size(x))
}
