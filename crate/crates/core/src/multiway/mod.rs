//! Multiway graphs: every state reachable by rewriting any one redex, merged by structural
//! equality, explored breadth first.

mod attractor;
mod branchial;
mod join;

pub use attractor::{attractor_census, AttractorReport};
pub use branchial::{ball_growth, branchial_graph, dimension_estimate, BranchialGraph};
pub use join::{joinable, JoinLimits, JoinProof, Joinability};

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::notation::{print, Notation};
use crate::rewrite::{apply_at, step, successors, Redex, Strategy};
use crate::term::Term;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct MultiwayLimits {
    /// Nodes at this depth are recorded but not expanded.
    pub max_depth: u32,
    pub max_nodes: usize,
}

impl Default for MultiwayLimits {
    fn default() -> MultiwayLimits {
        MultiwayLimits {
            max_depth: 1_000,
            max_nodes: 100_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub redex: Redex,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MultiwayGraph {
    pub nodes: Vec<Term>,
    pub edges: Vec<Edge>,
    /// Earliest breadth-first depth of each node.
    pub layers: Vec<u32>,
    pub seeds: Vec<usize>,
    /// Nodes with redexes whose successors were not explored because a limit tripped.
    pub frontier: Vec<usize>,
    #[serde(skip)]
    index: HashMap<Term, usize>,
    #[serde(skip)]
    out: Vec<Vec<usize>>,
}

pub fn build_multiway(seeds: &[Term], limits: MultiwayLimits) -> MultiwayGraph {
    let mut g = MultiwayGraph {
        nodes: Vec::new(),
        edges: Vec::new(),
        layers: Vec::new(),
        seeds: Vec::new(),
        frontier: Vec::new(),
        index: HashMap::new(),
        out: Vec::new(),
    };
    let mut queue = VecDeque::new();
    for s in seeds {
        let (id, fresh) = g.intern(s, 0);
        if fresh {
            queue.push_back(id);
        }
        if !g.seeds.contains(&id) {
            g.seeds.push(id);
        }
    }
    let mut full = false;
    while let Some(id) = queue.pop_front() {
        if full || g.layers[id] >= limits.max_depth {
            if g.nodes[id].has_redex() {
                g.frontier.push(id);
            }
            continue;
        }
        let succ = successors(&g.nodes[id]);
        // an expansion is all-or-nothing so that every expanded node has all its edges
        let new_nodes = succ.iter().filter(|(_, t)| !g.index.contains_key(t)).count();
        if g.nodes.len() + new_nodes > limits.max_nodes {
            full = true;
            g.frontier.push(id);
            continue;
        }
        let layer = g.layers[id] + 1;
        for (redex, t) in succ {
            let (to, fresh) = g.intern(&t, layer);
            if fresh {
                queue.push_back(to);
            }
            g.out[id].push(g.edges.len());
            g.edges.push(Edge { from: id, to, redex });
        }
    }
    g.frontier.sort_unstable();
    g
}

impl MultiwayGraph {
    fn intern(&mut self, t: &Term, layer: u32) -> (usize, bool) {
        if let Some(&id) = self.index.get(t) {
            return (id, false);
        }
        let id = self.nodes.len();
        self.nodes.push(t.clone());
        self.layers.push(layer);
        self.out.push(Vec::new());
        self.index.insert(t.clone(), id);
        (id, true)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn id(&self, t: &Term) -> Option<usize> {
        self.index.get(t).copied()
    }

    pub fn is_complete(&self) -> bool {
        self.frontier.is_empty()
    }

    pub fn is_terminal(&self, id: usize) -> bool {
        self.nodes[id].is_normal()
    }

    pub fn terminals(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.is_terminal(i)).collect()
    }

    /// Outgoing edge indices of a node.
    pub fn out_edges(&self, id: usize) -> &[usize] {
        &self.out[id]
    }

    /// Node counts per breadth-first layer.
    pub fn layer_counts(&self) -> Vec<u64> {
        let depth = self.layers.iter().copied().max().map_or(0, |d| d as usize + 1);
        let mut counts = vec![0u64; depth];
        for &l in &self.layers {
            counts[l as usize] += 1;
        }
        counts
    }

    /// Nodes reachable from `from`, including it.
    pub fn reachable(&self, from: usize) -> Vec<bool> {
        let mut seen = vec![false; self.len()];
        let mut stack = vec![from];
        seen[from] = true;
        while let Some(u) = stack.pop() {
            for &e in &self.out[u] {
                let v = self.edges[e].to;
                if !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen
    }

    /// Fewest edges from `from` to each reachable node.
    pub fn distances(&self, from: usize) -> Vec<Option<u64>> {
        let mut dist = vec![None; self.len()];
        dist[from] = Some(0);
        let mut queue = VecDeque::from([from]);
        while let Some(u) = queue.pop_front() {
            let d = dist[u].expect("queued nodes have a distance");
            for &e in &self.out[u] {
                let v = self.edges[e].to;
                if dist[v].is_none() {
                    dist[v] = Some(d + 1);
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// Edges on the longest path out of `from`, or `None` if a cycle is reachable.
    pub fn longest_path(&self, from: usize) -> Option<u64> {
        // iterative DFS with colours; memoised longest path per node
        let mut best: Vec<Option<u64>> = vec![None; self.len()];
        let mut on_stack = vec![false; self.len()];
        let mut stack: Vec<(usize, usize)> = vec![(from, 0)];
        on_stack[from] = true;
        while let Some(top) = stack.last_mut() {
            let (u, next) = *top;
            if next < self.out[u].len() {
                top.1 += 1;
                let v = self.edges[self.out[u][next]].to;
                if on_stack[v] {
                    return None;
                }
                if best[v].is_none() {
                    on_stack[v] = true;
                    stack.push((v, 0));
                }
            } else {
                let len = self.out[u]
                    .iter()
                    .map(|&e| best[self.edges[e].to].expect("children finished") + 1)
                    .max()
                    .unwrap_or(0);
                best[u] = Some(len);
                on_stack[u] = false;
                stack.pop();
            }
        }
        best[from]
    }

    /// Fewest edges from `from` to any terminal node.
    pub fn shortest_path_to_terminal(&self, from: usize) -> Option<u64> {
        self.distances(from)
            .into_iter()
            .enumerate()
            .filter(|&(i, _)| self.is_terminal(i))
            .filter_map(|(_, d)| d)
            .min()
    }

    /// Follows a deterministic strategy from `seed` through the graph.
    pub fn strategy_path(&self, seed: usize, strategy: Strategy, max_steps: u64) -> StrategyPath {
        let mut path = StrategyPath {
            nodes: vec![seed],
            edges: Vec::new(),
            end: PathEnd::Terminal,
        };
        let mut cur = seed;
        for _ in 0..max_steps {
            if self.is_terminal(cur) {
                return path;
            }
            let (next, events) = step(&self.nodes[cur], strategy);
            let Some(to) = self.id(&next) else {
                path.end = PathEnd::LeftGraph;
                return path;
            };
            let edge = match events.as_slice() {
                [r] => self.out[cur]
                    .iter()
                    .copied()
                    .find(|&e| self.edges[e].to == to && self.edges[e].redex == *r),
                _ => None,
            };
            path.edges.push(edge);
            path.nodes.push(to);
            cur = to;
        }
        path.end = if self.is_terminal(cur) {
            PathEnd::Terminal
        } else {
            PathEnd::StepLimit
        };
        path
    }

    /// Checks every edge by re-applying its redex.
    pub fn edges_replay(&self) -> bool {
        self.edges
            .iter()
            .all(|e| apply_at(&self.nodes[e.from], &e.redex).is_ok_and(|t| t == self.nodes[e.to]))
    }

    /// Graphviz rendering; nodes are labelled in compact notation, terminal nodes boxed,
    /// seeds drawn bold, unexplored frontier dashed.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph multiway {\n  node [shape=ellipse];\n");
        for (i, t) in self.nodes.iter().enumerate() {
            let mut attrs = vec![format!("label=\"{}\"", print(t, Notation::CompactLeft))];
            if self.is_terminal(i) {
                attrs.push("shape=box".into());
            }
            if self.seeds.contains(&i) {
                attrs.push("style=bold".into());
            } else if self.frontier.binary_search(&i).is_ok() {
                attrs.push("style=dashed".into());
            }
            let _ = writeln!(out, "  n{i} [{}];", attrs.join(", "));
        }
        for e in &self.edges {
            let _ = writeln!(out, "  n{} -> n{} [label=\"{}\"];", e.from, e.to, e.redex);
        }
        out.push_str("}\n");
        out
    }

    /// Adjacency as JSON: nodes with text, layer and flags; edges with redex.
    pub fn to_json(&self) -> serde_json::Value {
        let nodes: Vec<_> = self
            .nodes
            .iter()
            .enumerate()
            .map(|(i, t)| {
                serde_json::json!({
                    "id": i,
                    "term": print(t, Notation::CompactLeft),
                    "layer": self.layers[i],
                    "terminal": self.is_terminal(i),
                })
            })
            .collect();
        serde_json::json!({
            "seeds": self.seeds,
            "nodes": nodes,
            "edges": self.edges,
            "frontier": self.frontier,
            "complete": self.is_complete(),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum PathEnd {
    Terminal,
    /// The strategy stepped to a state outside the explored graph.
    LeftGraph,
    StepLimit,
}

/// A strategy's evolution as a walk in the graph. `edges[i]` is the single edge taken at
/// step `i`, or `None` when the step rewrote several redexes at once.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StrategyPath {
    pub nodes: Vec<usize>,
    pub edges: Vec<Option<usize>>,
    pub end: PathEnd,
}

impl StrategyPath {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }
}

#[cfg(test)]
mod tests;
