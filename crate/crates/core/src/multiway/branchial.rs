//! Branchial graphs (same-layer states linked through a shared parent) and geodesic-ball
//! growth for dimension estimates.

use std::collections::{HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use super::MultiwayGraph;

/// An undirected graph on the states of one layer. `nodes` holds multiway node ids; the
/// adjacency lists index into `nodes`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BranchialGraph {
    pub layer: u32,
    pub nodes: Vec<usize>,
    pub edges: Vec<(usize, usize)>,
    #[serde(skip)]
    adjacency: Vec<Vec<usize>>,
}

/// Links two states of `layer` when some state of the previous layer has an edge to both.
pub fn branchial_graph(g: &MultiwayGraph, layer: u32) -> BranchialGraph {
    let nodes: Vec<usize> = (0..g.len()).filter(|&i| g.layers[i] == layer).collect();
    let local: std::collections::HashMap<usize, usize> = nodes.iter().enumerate().map(|(i, &n)| (n, i)).collect();
    let mut pairs: HashSet<(usize, usize)> = HashSet::new();
    if layer > 0 {
        for p in (0..g.len()).filter(|&i| g.layers[i] == layer - 1) {
            let mut children: Vec<usize> = g
                .out_edges(p)
                .iter()
                .filter_map(|&e| local.get(&g.edges[e].to).copied())
                .collect();
            children.sort_unstable();
            children.dedup();
            for (i, &u) in children.iter().enumerate() {
                for &v in &children[i + 1..] {
                    pairs.insert((u, v));
                }
            }
        }
    }
    let mut edges: Vec<(usize, usize)> = pairs.into_iter().collect();
    edges.sort_unstable();
    BranchialGraph::new(layer, nodes, edges)
}

impl BranchialGraph {
    pub fn new(layer: u32, nodes: Vec<usize>, edges: Vec<(usize, usize)>) -> BranchialGraph {
        let mut adjacency = vec![Vec::new(); nodes.len()];
        for &(u, v) in &edges {
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        BranchialGraph {
            layer,
            nodes,
            edges,
            adjacency,
        }
    }

    /// A plain undirected graph on `n` vertices, for synthetic checks.
    pub fn from_edges(n: usize, edges: Vec<(usize, usize)>) -> BranchialGraph {
        BranchialGraph::new(0, (0..n).collect(), edges)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    /// Graph distance from `from` to every vertex (`None` if unreachable).
    pub fn distances(&self, from: usize) -> Vec<Option<u32>> {
        let mut dist = vec![None; self.len()];
        dist[from] = Some(0);
        let mut queue = VecDeque::from([from]);
        while let Some(u) = queue.pop_front() {
            let d = dist[u].expect("queued");
            for &v in &self.adjacency[u] {
                if dist[v].is_none() {
                    dist[v] = Some(d + 1);
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// Connected components as vertex lists, largest first (ties by smallest vertex).
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.len()];
        let mut comps = Vec::new();
        for s in 0..self.len() {
            if seen[s] {
                continue;
            }
            let mut comp = vec![s];
            seen[s] = true;
            let mut i = 0;
            while i < comp.len() {
                for &v in &self.adjacency[comp[i]] {
                    if !seen[v] {
                        seen[v] = true;
                        comp.push(v);
                    }
                }
                i += 1;
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps.sort_by(|a, b| b.len().cmp(&a.len()).then(a[0].cmp(&b[0])));
        comps
    }

    /// The subgraph induced by some vertices.
    pub fn induced(&self, vertices: &[usize]) -> BranchialGraph {
        let mut map = vec![usize::MAX; self.len()];
        for (i, &v) in vertices.iter().enumerate() {
            map[v] = i;
        }
        let edges = self
            .edges
            .iter()
            .filter(|&&(u, v)| map[u] != usize::MAX && map[v] != usize::MAX)
            .map(|&(u, v)| (map[u], map[v]))
            .collect();
        BranchialGraph::new(self.layer, vertices.iter().map(|&v| self.nodes[v]).collect(), edges)
    }

    pub fn largest_component(&self) -> BranchialGraph {
        match self.components().first() {
            Some(c) => self.induced(c),
            None => self.clone(),
        }
    }

    pub fn eccentricity(&self, v: usize) -> u32 {
        self.distances(v).into_iter().flatten().max().unwrap_or(0)
    }

    /// Lower bound on the diameter of `v`'s component by a double breadth-first sweep.
    pub fn diameter_estimate(&self, v: usize) -> u32 {
        let d = self.distances(v);
        let far = (0..self.len()).filter(|&i| d[i].is_some()).max_by_key(|&i| (d[i], usize::MAX - i));
        far.map_or(0, |u| self.eccentricity(u))
    }

    /// A vertex of smallest eccentricity among those on a longest sweep path; a cheap
    /// stand-in for a graph centre.
    pub fn central_vertex(&self) -> Option<usize> {
        if self.is_empty() {
            return None;
        }
        let d0 = self.distances(0);
        let a = (0..self.len()).filter(|&i| d0[i].is_some()).max_by_key(|&i| d0[i])?;
        let da = self.distances(a);
        let b = (0..self.len()).filter(|&i| da[i].is_some()).max_by_key(|&i| da[i])?;
        let db = self.distances(b);
        let len = da[b]?;
        // midpoints of the a-b geodesic
        (0..self.len())
            .filter(|&i| matches!((da[i], db[i]), (Some(x), Some(y)) if x + y == len && x.abs_diff(y) <= 1))
            .min_by_key(|&i| (self.eccentricity(i), i))
    }
}

/// `volumes[r]` = number of vertices within distance `r` of `center`, for `r = 0..=max_radius`.
pub fn ball_growth(graph: &BranchialGraph, center: usize, max_radius: u32) -> Vec<u64> {
    let dist = graph.distances(center);
    let mut counts = vec![0u64; max_radius as usize + 1];
    for d in dist.into_iter().flatten() {
        if d <= max_radius {
            counts[d as usize] += 1;
        }
    }
    let mut total = 0;
    for c in counts.iter_mut() {
        total += *c;
        *c = total;
    }
    counts
}

/// Least-squares slope of `ln V(r)` against `ln r` for `r = 1..=r_max`.
pub fn dimension_estimate(volumes: &[u64], r_max: usize) -> Option<f64> {
    let pts: Vec<(f64, f64)> = (1..=r_max.min(volumes.len().saturating_sub(1)))
        .map(|r| ((r as f64).ln(), (volumes[r] as f64).ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Some(sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> BranchialGraph {
        BranchialGraph::from_edges(n, (1..n).map(|i| (i - 1, i)).collect())
    }

    #[test]
    fn path_graph_is_one_dimensional() {
        let g = path(201);
        let c = g.central_vertex().unwrap();
        assert_eq!(c, 100);
        let v = ball_growth(&g, c, 100);
        assert_eq!(v[0], 1);
        assert_eq!(v[3], 7);
        let d = dimension_estimate(&v, (g.diameter_estimate(c) / 2) as usize).unwrap();
        assert!((d - 1.0).abs() < 0.05, "{d}");
    }

    #[test]
    fn components_sorted() {
        let g = BranchialGraph::from_edges(6, vec![(0, 1), (2, 3), (3, 4)]);
        assert_eq!(g.components(), vec![vec![2, 3, 4], vec![0, 1], vec![5]]);
        assert_eq!(g.largest_component().len(), 3);
    }
}
