//! Joinability: do two terms have a common descendant? A success comes with the two
//! rewrite paths, which together form an equality proof.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::rewrite::{successors, Redex};
use crate::term::Term;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct JoinLimits {
    /// Layers explored from each side.
    pub max_depth: u32,
    /// Total states held by both sides.
    pub max_nodes: usize,
}

impl Default for JoinLimits {
    fn default() -> JoinLimits {
        JoinLimits {
            max_depth: 40,
            max_nodes: 200_000,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct JoinProof {
    pub meet: Term,
    /// Rewrites taking the first term to `meet`: each redex with the term it produces.
    pub path_a: Vec<(Redex, Term)>,
    pub path_b: Vec<(Redex, Term)>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", tag = "kind")]
pub enum Joinability {
    Joined(JoinProof),
    /// Both descendant sets were exhausted without meeting.
    Disjoint,
    /// A limit tripped first.
    Unknown,
}

impl Joinability {
    pub fn proof(&self) -> Option<&JoinProof> {
        match self {
            Joinability::Joined(p) => Some(p),
            _ => None,
        }
    }
}

struct Side {
    parent: HashMap<Term, Option<(Term, Redex)>>,
    frontier: Vec<Term>,
    depth: u32,
}

impl Side {
    fn new(t: &Term) -> Side {
        Side {
            parent: HashMap::from([(t.clone(), None)]),
            frontier: vec![t.clone()],
            depth: 0,
        }
    }

    fn path_to(&self, t: &Term) -> Vec<(Redex, Term)> {
        let mut path = Vec::new();
        let mut cur = t.clone();
        while let Some(Some((prev, redex))) = self.parent.get(&cur) {
            path.push((redex.clone(), cur.clone()));
            cur = prev.clone();
        }
        path.reverse();
        path
    }
}

/// Alternating breadth-first search from both terms, always growing the smaller frontier.
pub fn joinable(a: &Term, b: &Term, limits: JoinLimits) -> Joinability {
    let mut sides = [Side::new(a), Side::new(b)];
    if a == b {
        return Joinability::Joined(JoinProof {
            meet: a.clone(),
            path_a: Vec::new(),
            path_b: Vec::new(),
        });
    }
    loop {
        let open = |s: &Side| !s.frontier.is_empty() && s.depth < limits.max_depth;
        let pick = match (open(&sides[0]), open(&sides[1])) {
            (false, false) => {
                let exhausted = sides.iter().all(|s| s.frontier.is_empty());
                return if exhausted {
                    Joinability::Disjoint
                } else {
                    Joinability::Unknown
                };
            }
            (true, false) => 0,
            (false, true) => 1,
            (true, true) => usize::from(sides[1].frontier.len() < sides[0].frontier.len()),
        };
        let frontier = std::mem::take(&mut sides[pick].frontier);
        sides[pick].depth += 1;
        let mut next = Vec::new();
        for t in frontier {
            for (redex, u) in successors(&t) {
                if sides[pick].parent.contains_key(&u) {
                    continue;
                }
                sides[pick].parent.insert(u.clone(), Some((t.clone(), redex)));
                if sides[1 - pick].parent.contains_key(&u) {
                    return Joinability::Joined(JoinProof {
                        path_a: sides[0].path_to(&u),
                        path_b: sides[1].path_to(&u),
                        meet: u,
                    });
                }
                next.push(u);
                if sides[0].parent.len() + sides[1].parent.len() > limits.max_nodes {
                    return Joinability::Unknown;
                }
            }
        }
        sides[pick].frontier = next;
    }
}
