//! Hash-consed term storage: every distinct subterm gets exactly one id.
//!
//! Besides counting distinct subexpressions, the store backs a leftmost-outermost evolver
//! that works on ids only, so terms whose tree size is astronomically large stay cheap as
//! long as they have few distinct subterms.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::rewrite::{step, Limits, Outcome, Strategy};
use crate::term::{Atom, Term, View};

pub type NodeId = u32;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "camelCase", tag = "kind")]
pub enum DagNode {
    Atom { name: Atom },
    App { function: NodeId, argument: NodeId },
}

#[derive(Clone, Copy, Debug)]
struct Meta {
    size: u64,
    head: NodeId,
    args: u32,
    normal: bool,
}

#[derive(Clone, Debug)]
pub struct NodeStore {
    nodes: Vec<DagNode>,
    meta: Vec<Meta>,
    apps: HashMap<(NodeId, NodeId), NodeId>,
    atoms: HashMap<Atom, NodeId>,
    cap: usize,
}

impl Default for NodeStore {
    fn default() -> NodeStore {
        NodeStore::new()
    }
}

impl NodeStore {
    pub fn new() -> NodeStore {
        NodeStore::with_cap(NodeId::MAX as usize)
    }

    pub fn with_cap(cap: usize) -> NodeStore {
        NodeStore {
            nodes: Vec::new(),
            meta: Vec::new(),
            apps: HashMap::new(),
            atoms: HashMap::new(),
            cap: cap.min(NodeId::MAX as usize),
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, id: NodeId) -> &DagNode {
        &self.nodes[id as usize]
    }

    /// Leaf count, saturating at `u64::MAX`.
    pub fn size(&self, id: NodeId) -> u64 {
        self.meta[id as usize].size
    }

    pub fn is_normal(&self, id: NodeId) -> bool {
        self.meta[id as usize].normal
    }

    fn push(&mut self, node: DagNode, meta: Meta) -> Result<NodeId> {
        if self.nodes.len() >= self.cap {
            return Err(Error::ResourceLimit(format!("node store holds {} nodes", self.cap)));
        }
        self.nodes.push(node);
        self.meta.push(meta);
        Ok((self.nodes.len() - 1) as NodeId)
    }

    pub fn atom(&mut self, a: &Atom) -> Result<NodeId> {
        if let Some(&id) = self.atoms.get(a) {
            return Ok(id);
        }
        let id = self.nodes.len() as NodeId;
        let meta = Meta {
            size: 1,
            head: id,
            args: 0,
            normal: true,
        };
        self.push(DagNode::Atom { name: a.clone() }, meta)?;
        self.atoms.insert(a.clone(), id);
        Ok(id)
    }

    pub fn app(&mut self, f: NodeId, x: NodeId) -> Result<NodeId> {
        if let Some(&id) = self.apps.get(&(f, x)) {
            return Ok(id);
        }
        let (mf, mx) = (self.meta[f as usize], self.meta[x as usize]);
        let args = mf.args.saturating_add(1);
        let meta = Meta {
            size: mf.size.saturating_add(mx.size),
            head: mf.head,
            args,
            normal: mf.normal && mx.normal && !self.redex_shape(mf.head, args),
        };
        let id = self.push(
            DagNode::App {
                function: f,
                argument: x,
            },
            meta,
        )?;
        self.apps.insert((f, x), id);
        Ok(id)
    }

    fn redex_shape(&self, head: NodeId, args: u32) -> bool {
        match &self.nodes[head as usize] {
            DagNode::Atom { name: Atom::S } => args == 3,
            DagNode::Atom { name: Atom::K } => args == 2,
            _ => false,
        }
    }

    fn head_atom(&self, id: NodeId) -> Option<&Atom> {
        match &self.nodes[id as usize] {
            DagNode::Atom { name } => Some(name),
            DagNode::App { .. } => None,
        }
    }

    pub fn intern(&mut self, t: &Term) -> Result<NodeId> {
        // shared nodes of `t` are visited once
        let mut memo: HashMap<*const (), NodeId> = HashMap::new();
        let mut out: Vec<NodeId> = Vec::new();
        let mut stack = vec![(t.clone(), false)];
        while let Some((cur, expanded)) = stack.pop() {
            if let Some(&id) = memo.get(&cur.node_ptr()) {
                out.push(id);
                continue;
            }
            let id = match cur.view() {
                View::Atom(a) => self.atom(a)?,
                View::App(f, x) if !expanded => {
                    let (f, x) = (f.clone(), x.clone());
                    stack.push((cur, true));
                    stack.push((x, false));
                    stack.push((f, false));
                    continue;
                }
                View::App(..) => {
                    let x = out.pop().expect("argument interned");
                    let f = out.pop().expect("function interned");
                    self.app(f, x)?
                }
            };
            memo.insert(cur.node_ptr(), id);
            out.push(id);
        }
        Ok(out.pop().expect("root interned"))
    }

    /// Rebuilds a term; shared ids become shared nodes.
    pub fn to_term(&self, id: NodeId) -> Term {
        let mut memo: HashMap<NodeId, Term> = HashMap::new();
        let mut stack = vec![(id, false)];
        while let Some((cur, expanded)) = stack.pop() {
            if memo.contains_key(&cur) {
                continue;
            }
            match &self.nodes[cur as usize] {
                DagNode::Atom { name } => {
                    memo.insert(cur, Term::atom(name.clone()));
                }
                DagNode::App { function, argument } if !expanded => {
                    stack.push((cur, true));
                    stack.push((*argument, false));
                    stack.push((*function, false));
                }
                DagNode::App { function, argument } => {
                    let t = Term::app(memo[function].clone(), memo[argument].clone());
                    memo.insert(cur, t);
                }
            }
        }
        memo.remove(&id).expect("root rebuilt")
    }

    /// Ids reachable from `roots`, children before parents.
    pub fn reachable(&self, roots: &[NodeId]) -> Vec<NodeId> {
        let mut seen = vec![false; self.len()];
        let mut order = Vec::new();
        let mut stack: Vec<(NodeId, bool)> = roots.iter().rev().map(|&r| (r, false)).collect();
        while let Some((cur, expanded)) = stack.pop() {
            if expanded {
                order.push(cur);
                continue;
            }
            if seen[cur as usize] {
                continue;
            }
            seen[cur as usize] = true;
            stack.push((cur, true));
            if let DagNode::App { function, argument } = self.nodes[cur as usize] {
                stack.push((argument, false));
                stack.push((function, false));
            }
        }
        order
    }

    /// Node list for visualisation tools.
    pub fn to_json(&self, root: NodeId) -> serde_json::Value {
        let nodes: Vec<_> = self
            .reachable(&[root])
            .into_iter()
            .map(|id| {
                let mut v = serde_json::to_value(self.node(id)).expect("nodes serialize");
                v["id"] = id.into();
                v
            })
            .collect();
        serde_json::json!({ "root": root, "nodes": nodes })
    }
}

/// Number of structurally distinct subterms of `t`.
pub fn distinct_subterms(t: &Term) -> usize {
    let mut store = NodeStore::new();
    store.intern(t).expect("a fresh store holds any term");
    store.len()
}

/// Number of subterm occurrences, `2 * size - 1`.
pub fn total_subterms(t: &Term) -> u64 {
    2 * t.size() - 1
}

/// Distinct-subterm count of each state of an evolution, initial state included.
pub fn distinct_series(t: &Term, strategy: Strategy, steps: u64) -> Vec<usize> {
    let mut out = vec![distinct_subterms(t)];
    let mut cur = t.clone();
    for _ in 0..steps {
        if cur.is_normal() {
            break;
        }
        cur = step(&cur, strategy).0;
        out.push(distinct_subterms(&cur));
    }
    out
}

struct Frame {
    head: NodeId,
    args: Vec<NodeId>,
    slot: usize,
}

/// Leftmost-outermost evolution on interned ids. The focus is an unwound spine (head and
/// arguments, last argument first); frames record where the focus sits in its ancestors.
pub struct DagEvolver {
    store: NodeStore,
    head: NodeId,
    args: Vec<NodeId>,
    scanned: usize,
    frames: Vec<Frame>,
    steps: u64,
    compact_at: usize,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DagRun {
    pub outcome: Outcome,
    pub steps: u64,
    pub final_size: u64,
    pub final_distinct: usize,
    /// Largest store population seen (after compactions).
    pub peak_nodes: usize,
}

impl DagEvolver {
    pub fn new(t: &Term) -> Result<DagEvolver> {
        let mut store = NodeStore::new();
        let root = store.intern(t)?;
        let mut e = DagEvolver {
            store,
            head: root,
            args: Vec::new(),
            scanned: 0,
            frames: Vec::new(),
            steps: 0,
            compact_at: 1 << 22,
        };
        e.unwind(root);
        Ok(e)
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }

    pub fn store(&self) -> &NodeStore {
        &self.store
    }

    fn unwind(&mut self, mut id: NodeId) {
        while let DagNode::App { function, argument } = self.store.nodes[id as usize] {
            self.args.push(argument);
            id = function;
        }
        self.head = id;
    }

    fn fold_focus(&mut self) -> Result<NodeId> {
        let mut id = self.head;
        for i in (0..self.args.len()).rev() {
            id = self.store.app(id, self.args[i])?;
        }
        Ok(id)
    }

    /// The current state as an id (interns the path back to the root).
    pub fn current(&mut self) -> Result<NodeId> {
        let mut id = self.fold_focus()?;
        for f in self.frames.iter().rev() {
            let n = f.args.len();
            let mut acc = f.head;
            for i in (0..n).rev() {
                let a = if n - 1 - i == f.slot { id } else { f.args[i] };
                acc = self.store.app(acc, a)?;
            }
            id = acc;
        }
        Ok(id)
    }

    pub fn term(&mut self) -> Result<Term> {
        let id = self.current()?;
        Ok(self.store.to_term(id))
    }

    /// One leftmost-outermost rewrite; `false` at a normal form.
    pub fn step(&mut self) -> Result<bool> {
        loop {
            match self.store.head_atom(self.head) {
                Some(Atom::S) if self.args.len() >= 3 => {
                    let x = self.args.pop().expect("three arguments");
                    let y = self.args.pop().expect("three arguments");
                    let z = self.args.pop().expect("three arguments");
                    let yz = self.store.app(y, z)?;
                    self.args.push(yz);
                    self.args.push(z);
                    self.unwind(x);
                    self.scanned = 0;
                    self.steps += 1;
                    return Ok(true);
                }
                Some(Atom::K) if self.args.len() >= 2 => {
                    let x = self.args.pop().expect("two arguments");
                    self.args.pop();
                    self.unwind(x);
                    self.scanned = 0;
                    self.steps += 1;
                    return Ok(true);
                }
                _ => {}
            }
            let n = self.args.len();
            let next = (self.scanned..n).find(|&j| !self.store.is_normal(self.args[n - 1 - j]));
            match next {
                Some(j) => {
                    let child = self.args[n - 1 - j];
                    let args = std::mem::take(&mut self.args);
                    self.frames.push(Frame {
                        head: self.head,
                        args,
                        slot: j,
                    });
                    self.unwind(child);
                    self.scanned = 0;
                }
                None => {
                    let id = self.fold_focus()?;
                    let Some(f) = self.frames.pop() else {
                        self.args.clear();
                        self.head = id;
                        self.unwind(id);
                        self.scanned = self.args.len();
                        return Ok(false);
                    };
                    self.head = f.head;
                    self.args = f.args;
                    let n = self.args.len();
                    self.args[n - 1 - f.slot] = id;
                    self.scanned = f.slot + 1;
                }
            }
        }
    }

    /// Copies the live part of the store into a fresh one.
    fn compact(&mut self) -> Result<()> {
        let mut roots = vec![self.head];
        roots.extend(&self.args);
        for f in &self.frames {
            roots.push(f.head);
            roots.extend(&f.args);
        }
        let live = self.store.reachable(&roots);
        let mut fresh = NodeStore::new();
        let mut map: HashMap<NodeId, NodeId> = HashMap::with_capacity(live.len());
        for id in live {
            let new = match self.store.node(id).clone() {
                DagNode::Atom { name } => fresh.atom(&name)?,
                DagNode::App { function, argument } => fresh.app(map[&function], map[&argument])?,
            };
            map.insert(id, new);
        }
        self.head = map[&self.head];
        for a in self.args.iter_mut() {
            *a = map[a];
        }
        for f in self.frames.iter_mut() {
            f.head = map[&f.head];
            for a in f.args.iter_mut() {
                *a = map[a];
            }
        }
        self.store = fresh;
        self.compact_at = (self.store.len() * 4).max(1 << 22);
        Ok(())
    }

    /// Runs until a normal form or `limits.max_steps`; `max_size` is ignored since sizes
    /// are never materialised.
    pub fn run(&mut self, limits: Limits) -> Result<DagRun> {
        let mut peak = self.store.len();
        let outcome = loop {
            if self.steps >= limits.max_steps {
                let root = self.current()?;
                break if self.store.is_normal(root) {
                    Outcome::FixedPoint { steps: self.steps }
                } else {
                    Outcome::StepLimit
                };
            }
            if !self.step()? {
                break Outcome::FixedPoint { steps: self.steps };
            }
            if self.store.len() >= self.compact_at {
                peak = peak.max(self.store.len());
                self.compact()?;
            }
        };
        let root = self.current()?;
        peak = peak.max(self.store.len());
        Ok(DagRun {
            outcome,
            steps: self.steps,
            final_size: self.store.size(root),
            final_distinct: self.store.reachable(&[root]).len(),
            peak_nodes: peak,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::notation::{parse, Notation};

    fn b(s: &str) -> Term {
        parse(s, Notation::Brackets).unwrap()
    }

    #[test]
    fn interning_is_idempotent() {
        let mut st = NodeStore::new();
        let a = st.intern(&b("s")).unwrap();
        assert_eq!(st.intern(&b("s")).unwrap(), a);
        let t = b("f[f[x]]");
        let id = st.intern(&t).unwrap();
        assert_eq!(st.to_term(id), t);
        assert_eq!(distinct_subterms(&t), 4);
        assert_eq!(distinct_subterms(&b("s[s]")), 2);
        assert_eq!(total_subterms(&b("s[s]")), 3);
    }

    #[test]
    fn cap_is_enforced() {
        let mut st = NodeStore::with_cap(3);
        assert!(st.intern(&b("s[k][s]")).is_err());
    }

    #[test]
    fn fixed_point_series_is_flat() {
        let s = distinct_series(&b("s[k][k]"), Strategy::LEFTMOST_OUTERMOST, 5);
        assert_eq!(s, vec![4]);
    }

    #[test]
    fn evolver_finishes_small_terms() {
        let mut e = DagEvolver::new(&b("s[k][k][s[s]]")).unwrap();
        let r = e.run(Limits::default()).unwrap();
        assert_eq!(r.outcome, Outcome::FixedPoint { steps: 2 });
        assert_eq!(e.term().unwrap(), b("s[s]"));
    }
}
