//! Causal graphs of a single evolution.
//!
//! Every node of the evolving tree carries a token. An event consumes the tokens of the
//! redex it matched and creates tokens for the application nodes it builds; an event
//! depends on the events that created the tokens it consumed. Subtrees that the rules move
//! or duplicate keep their tokens, so a duplicated `z` is one token in two places.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::rewrite::{apply_at, step, Limits, Outcome, Redex, Strategy};
use crate::term::{Atom, Position, Rule, Term, View};

type Token = u64;

enum TKind {
    Atom(Atom),
    App(Arc<TNode>, Arc<TNode>),
}

struct TNode {
    token: Token,
    kind: TKind,
}

impl Drop for TNode {
    fn drop(&mut self) {
        let mut stack = Vec::new();
        let take = |kind: &mut TKind, stack: &mut Vec<Arc<TNode>>| {
            if let TKind::App(f, x) = std::mem::replace(kind, TKind::Atom(Atom::S)) {
                stack.push(f);
                stack.push(x);
            }
        };
        take(&mut self.kind, &mut stack);
        while let Some(n) = stack.pop() {
            if let Ok(mut inner) = Arc::try_unwrap(n) {
                take(&mut inner.kind, &mut stack);
            }
        }
    }
}

fn children(n: &TNode) -> Option<(&Arc<TNode>, &Arc<TNode>)> {
    match &n.kind {
        TKind::App(f, x) => Some((f, x)),
        TKind::Atom(_) => None,
    }
}

/// A term annotated with tokens, kept alongside the plain term during a run.
struct Tokens {
    root: Arc<TNode>,
    next: Token,
}

impl Tokens {
    fn new(t: &Term) -> Tokens {
        // post-order build; shared subterms of the input still get one token per tree node
        let mut next = 0;
        let mut done: Vec<Arc<TNode>> = Vec::new();
        let mut stack = vec![(t.clone(), false)];
        while let Some((cur, expanded)) = stack.pop() {
            match cur.view() {
                View::Atom(a) => {
                    done.push(Arc::new(TNode {
                        token: next,
                        kind: TKind::Atom(a.clone()),
                    }));
                    next += 1;
                }
                View::App(f, x) if !expanded => {
                    let (f, x) = (f.clone(), x.clone());
                    stack.push((cur, true));
                    stack.push((x, false));
                    stack.push((f, false));
                }
                View::App(..) => {
                    let x = done.pop().expect("argument built");
                    let f = done.pop().expect("function built");
                    done.push(Arc::new(TNode {
                        token: next,
                        kind: TKind::App(f, x),
                    }));
                    next += 1;
                }
            }
        }
        Tokens {
            root: done.pop().expect("root built"),
            next,
        }
    }

    fn term(&self) -> Term {
        let mut done: Vec<Term> = Vec::new();
        let mut stack = vec![(&self.root, false)];
        while let Some((n, expanded)) = stack.pop() {
            match &n.kind {
                TKind::Atom(a) => done.push(Term::atom(a.clone())),
                TKind::App(f, x) if !expanded => {
                    stack.push((n, true));
                    stack.push((x, false));
                    stack.push((f, false));
                }
                TKind::App(..) => {
                    let x = done.pop().expect("argument built");
                    let f = done.pop().expect("function built");
                    done.push(Term::app(f, x));
                }
            }
        }
        done.pop().expect("root built")
    }

    /// A copy of `n` with fresh tokens, numbered in post-order.
    fn copy(&mut self, n: &Arc<TNode>, created: &mut Vec<Token>) -> Arc<TNode> {
        let mut done: Vec<Arc<TNode>> = Vec::new();
        let mut stack = vec![(n, false)];
        while let Some((cur, expanded)) = stack.pop() {
            let kind = match &cur.kind {
                TKind::Atom(a) => TKind::Atom(a.clone()),
                TKind::App(f, x) if !expanded => {
                    stack.push((cur, true));
                    stack.push((x, false));
                    stack.push((f, false));
                    continue;
                }
                TKind::App(..) => {
                    let x = done.pop().expect("argument copied");
                    let f = done.pop().expect("function copied");
                    TKind::App(f, x)
                }
            };
            created.push(self.next);
            done.push(Arc::new(TNode { token: self.next, kind }));
            self.next += 1;
        }
        done.pop().expect("root copied")
    }

    fn fresh(&mut self, f: Arc<TNode>, x: Arc<TNode>) -> Arc<TNode> {
        let token = self.next;
        self.next += 1;
        Arc::new(TNode {
            token,
            kind: TKind::App(f, x),
        })
    }

    /// Rewrites the redex at `pos`; returns (consumed, created) tokens.
    fn apply(&mut self, pos: &Position, rule: Rule, copies: CopyPolicy) -> (Vec<Token>, Vec<Token>) {
        let mut path = Vec::with_capacity(pos.len());
        let mut cur = self.root.clone();
        for &d in pos.steps() {
            let (f, x) = children(&cur).expect("valid position");
            let child = if d == 0 { f.clone() } else { x.clone() };
            path.push(cur);
            cur = child;
        }
        let mut consumed = Vec::new();
        let mut created = Vec::new();
        let replacement = match rule {
            Rule::K => {
                let (kx, y) = children(&cur).expect("k redex");
                let (k, x) = children(kx).expect("k redex");
                consumed.extend([cur.token, kx.token, k.token, y.token]);
                x.clone()
            }
            Rule::S => {
                let (sxy, z) = children(&cur).expect("s redex");
                let (sx, y) = children(sxy).expect("s redex");
                let (s, x) = children(sx).expect("s redex");
                consumed.extend([cur.token, sxy.token, sx.token, s.token]);
                let (x, y, z) = (x.clone(), y.clone(), z.clone());
                let xz = self.fresh(x, z.clone());
                created.push(xz.token);
                let z = match copies {
                    CopyPolicy::Share => z,
                    CopyPolicy::Fresh => self.copy(&z, &mut created),
                };
                let yz = self.fresh(y, z);
                created.push(yz.token);
                let top = self.fresh(xz, yz);
                created.push(top.token);
                top
            }
        };
        // rebuild ancestors keeping their tokens
        let mut node = replacement;
        for (parent, &d) in path.into_iter().rev().zip(pos.steps().iter().rev()) {
            let (f, x) = children(&parent).expect("ancestor is an application");
            let kind = if d == 0 {
                TKind::App(node, x.clone())
            } else {
                TKind::App(f.clone(), node)
            };
            node = Arc::new(TNode {
                token: parent.token,
                kind,
            });
        }
        self.root = node;
        (consumed, created)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Event {
    /// 1-based; 0 stands for the initial term.
    pub index: usize,
    /// Evolution step the event belongs to (1-based).
    pub step: usize,
    pub rule: Rule,
    pub position: Position,
    pub consumed: Vec<Token>,
    pub created: Vec<Token>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
/// Tokens of the initial term are numbered in post-order (function, argument, node); each
/// S event then numbers its new nodes `x[z]`, (a fresh copy of `z`,) `y[z]`, `x[z][y[z]]`
/// in turn.
pub struct EventLog {
    pub copies: CopyPolicy,
    pub initial: Term,
    pub events: Vec<Event>,
    /// Creating event of each token, indexed by token.
    pub token_birth: Vec<usize>,
    pub outcome: Outcome,
}

/// What the S rule does with the tokens of the `z` it duplicates.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum CopyPolicy {
    /// Both copies keep z's tokens.
    #[default]
    Share,
    /// The copy inside `y[z]` is a new subtree with new tokens.
    Fresh,
}

/// Runs `t` under `strategy`, recording the token flow of every event.
pub fn evolve_with_tokens(t: &Term, strategy: Strategy, limits: Limits) -> EventLog {
    evolve_with_copies(t, strategy, limits, CopyPolicy::Share)
}

pub fn evolve_with_copies(t: &Term, strategy: Strategy, limits: Limits, copies: CopyPolicy) -> EventLog {
    let mut tokens = Tokens::new(t);
    let mut token_birth = vec![0; tokens.next as usize];
    let mut events = Vec::new();
    let mut cur = t.clone();
    let mut steps = 0;
    let outcome = loop {
        if !cur.has_redex() {
            break Outcome::FixedPoint { steps };
        }
        if steps >= limits.max_steps {
            break Outcome::StepLimit;
        }
        let (next, mut redexes) = step(&cur, strategy);
        steps += 1;
        // disjoint redexes: rewriting deeper ones first leaves shallower positions valid
        redexes.sort_by_key(|r| std::cmp::Reverse(r.position.len()));
        for r in redexes {
            let (consumed, created) = tokens.apply(&r.position, r.rule, copies);
            let index = events.len() + 1;
            token_birth.resize(tokens.next as usize, index);
            events.push(Event {
                index,
                step: steps as usize,
                rule: r.rule,
                position: r.position,
                consumed,
                created,
            });
        }
        cur = next;
        debug_assert!(cur.size() > 4096 || tokens.term() == cur);
        if cur.size() > limits.max_size {
            break Outcome::SizeLimit;
        }
    };
    EventLog {
        copies,
        initial: t.clone(),
        events,
        token_birth,
        outcome,
    }
}

impl EventLog {
    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    /// States after each step, rebuilt from the initial term and the event positions.
    pub fn replay(&self) -> Result<Vec<Term>> {
        let mut states = vec![self.initial.clone()];
        let mut cur = self.initial.clone();
        let mut step = 0;
        for e in &self.events {
            if e.step != step && step != 0 {
                states.push(cur.clone());
            }
            step = e.step;
            cur = apply_at(
                &cur,
                &Redex {
                    position: e.position.clone(),
                    rule: e.rule,
                },
            )?;
        }
        if !self.events.is_empty() {
            states.push(cur);
        }
        Ok(states)
    }

    /// Every consumed token predates its consumer and no token is created twice.
    pub fn is_consistent(&self) -> bool {
        let mut seen = BTreeSet::new();
        self.events.iter().all(|e| {
            e.consumed.iter().all(|&t| self.token_birth[t as usize] < e.index)
                && e.created.iter().all(|&t| seen.insert(t) && self.token_birth[t as usize] == e.index)
        })
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CausalGraph {
    pub nodes: Vec<usize>,
    /// `(earlier, later)`: `later` consumed a token created by `earlier`.
    pub edges: Vec<(usize, usize)>,
}

pub fn causal_graph(log: &EventLog) -> CausalGraph {
    let mut edges = BTreeSet::new();
    for e in &log.events {
        for &t in &e.consumed {
            let from = log.token_birth[t as usize];
            if from != 0 {
                edges.insert((from, e.index));
            }
        }
    }
    CausalGraph {
        nodes: log.events.iter().map(|e| e.index).collect(),
        edges: edges.into_iter().collect(),
    }
}

impl CausalGraph {
    pub fn predecessors(&self) -> HashMap<usize, Vec<usize>> {
        let mut preds: HashMap<usize, Vec<usize>> = HashMap::new();
        for &(a, b) in &self.edges {
            preds.entry(b).or_default().push(a);
        }
        preds
    }

    /// Longest-path depth of each event from the sources, in event order.
    pub fn layers(&self) -> Vec<usize> {
        let pos: HashMap<usize, usize> = self.nodes.iter().enumerate().map(|(i, &n)| (n, i)).collect();
        let mut depth = vec![0; self.nodes.len()];
        // edges are sorted by source and go forward in event order, so a pass in target
        // order settles every node after all of its predecessors
        let mut by_target = self.edges.clone();
        by_target.sort_by_key(|&(a, b)| (b, a));
        for (a, b) in by_target {
            depth[pos[&b]] = depth[pos[&b]].max(depth[pos[&a]] + 1);
        }
        depth
    }

    /// Number of events on each layer.
    pub fn widths(&self) -> Vec<usize> {
        let layers = self.layers();
        let mut w = vec![0; layers.iter().max().map_or(0, |&m| m + 1)];
        for l in layers {
            w[l] += 1;
        }
        w
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph causal {\n");
        for n in &self.nodes {
            let _ = writeln!(out, "  e{n};");
        }
        for (a, b) in &self.edges {
            let _ = writeln!(out, "  e{a} -> e{b};");
        }
        out.push_str("}\n");
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({ "nodes": self.nodes, "edges": self.edges })
    }

    pub fn widths_csv(&self) -> String {
        let mut out = String::from("layer,width\n");
        for (i, w) in self.widths().iter().enumerate() {
            let _ = writeln!(out, "{i},{w}");
        }
        out
    }
}
